//! Dielectric response of a slab: Drude-Lorentz oscillator with ohmic damping,
//! or the frequency-independent dissipationless model.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermittivityModel {
    DrudeLorentz,
    StaticNd,
}

/// Slab material. Frequencies in units of 1/a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub omega0: f64,
    pub omega_pl: f64,
    pub gamma0: f64,
    pub model: PermittivityModel,
}

const SINGULAR_SCALE: f64 = 64.0 * f64::EPSILON;

impl Material {
    pub fn drude_lorentz(omega0: f64, omega_pl: f64, gamma0: f64) -> Result<Self> {
        let m = Material { omega0, omega_pl, gamma0, model: PermittivityModel::DrudeLorentz };
        m.validate()?;
        Ok(m)
    }

    /// Real, frequency-independent permittivity 1 + omega_pl²/omega0².
    pub fn static_nd(omega0: f64, omega_pl: f64) -> Result<Self> {
        let m = Material { omega0, omega_pl, gamma0: 0.0, model: PermittivityModel::StaticNd };
        m.validate()?;
        Ok(m)
    }

    /// Static material with the given permittivity (eps >= 1).
    pub fn with_static_permittivity(eps: f64) -> Result<Self> {
        if !(eps >= 1.0) || !eps.is_finite() {
            return Err(Error::InvalidParameter(format!("static permittivity must be >= 1, got {eps}")));
        }
        Material::static_nd(1.0, (eps - 1.0).sqrt())
    }

    pub fn vacuum() -> Self {
        Material { omega0: 1.0, omega_pl: 0.0, gamma0: 0.0, model: PermittivityModel::StaticNd }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.omega0 > 0.0
            && self.omega0.is_finite()
            && self.omega_pl >= 0.0
            && self.omega_pl.is_finite()
            && self.gamma0 >= 0.0
            && self.gamma0.is_finite();
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "material needs omega0 > 0, omega_pl >= 0, gamma0 >= 0 (got {}, {}, {})",
                self.omega0, self.omega_pl, self.gamma0
            )));
        }
        if self.model == PermittivityModel::StaticNd && self.gamma0 != 0.0 {
            return Err(Error::InvalidParameter("static_nd material cannot carry damping".into()));
        }
        Ok(())
    }

    pub fn is_vacuum(&self) -> bool {
        self.omega_pl == 0.0
    }

    /// No absorption at any real frequency.
    pub fn is_dissipationless(&self) -> bool {
        self.is_vacuum() || self.model == PermittivityModel::StaticNd || self.gamma0 == 0.0
    }

    /// Frequencies where the response changes quickly: the resonance and the
    /// upper edge of the stop band.
    pub fn characteristic_frequencies(&self) -> Vec<f64> {
        if self.is_vacuum() || self.model == PermittivityModel::StaticNd {
            return Vec::new();
        }
        vec![self.omega0, (self.omega0 * self.omega0 + self.omega_pl * self.omega_pl).sqrt()]
    }

    /// Laplace transform of the oscillator propagator, 1/(s² + omega0² + s gamma0).
    pub fn damping_transform(&self, s: Complex64) -> Result<Complex64> {
        let w2 = self.omega0 * self.omega0;
        let den = s * s + w2 + s * self.gamma0;
        let scale = s.norm_sqr() + w2 + s.norm() * self.gamma0;
        if den.norm() <= SINGULAR_SCALE * scale {
            return Err(Error::SingularEvaluation { re: s.re, im: s.im });
        }
        Ok(den.inv())
    }

    pub fn static_permittivity(&self) -> f64 {
        1.0 + (self.omega_pl / self.omega0).powi(2)
    }

    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        if self.is_vacuum() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        match self.model {
            PermittivityModel::StaticNd => Ok(Complex64::new(self.static_permittivity(), 0.0)),
            PermittivityModel::DrudeLorentz => {
                let g = self
                    .damping_transform(Complex64::new(0.0, -omega))
                    .map_err(|_| Error::ResonanceSingularity { omega })?;
                Ok(1.0 + self.omega_pl * self.omega_pl * g)
            }
        }
    }

    /// n = sqrt(eps) with Re n >= 0, Im n >= 0 for omega > 0, and n(-omega) = conj n(omega).
    pub fn refractive_index(&self, omega: f64) -> Result<Complex64> {
        let n = self.permittivity(omega.abs())?.sqrt();
        let n = Complex64::new(n.re.abs(), n.im.abs());
        Ok(if omega < 0.0 { n.conj() } else { n })
    }

    /// Index at imaginary frequency s = xi > 0, where it is real.
    pub fn index_imaginary_axis(&self, xi: f64) -> Result<f64> {
        if self.is_vacuum() {
            return Ok(1.0);
        }
        match self.model {
            PermittivityModel::StaticNd => Ok(self.static_permittivity().sqrt()),
            PermittivityModel::DrudeLorentz => {
                let g = self.damping_transform(Complex64::new(xi, 0.0))?;
                Ok((1.0 + self.omega_pl * self.omega_pl * g.re).sqrt())
            }
        }
    }

    pub fn surface_reflection(&self, omega: f64) -> Result<Complex64> {
        let n = self.refractive_index(omega)?;
        Ok(interface_reflection(n))
    }

    /// Fluctuation-dissipation weight 2 Re(n) Im(n).
    pub fn fd_weight(&self, omega: f64) -> Result<f64> {
        if self.is_dissipationless() {
            return Ok(0.0);
        }
        let n = self.refractive_index(omega)?;
        Ok(2.0 * n.re * n.im)
    }

    /// Same weight from the damping kernel, omega_pl² omega gamma0 |G2(-i omega)|².
    pub fn fd_weight_from_kernel(&self, omega: f64) -> Result<f64> {
        if self.is_dissipationless() {
            return Ok(0.0);
        }
        let g = self.damping_transform(Complex64::new(0.0, -omega))?;
        Ok(self.omega_pl * self.omega_pl * omega * self.gamma0 * g.norm_sqr())
    }
}

pub fn interface_reflection(n: Complex64) -> Complex64 {
    (1.0 - n) / (1.0 + n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> Material {
        Material::drude_lorentz(10.0, 10.0, 0.1).unwrap()
    }

    #[test]
    fn damping_transform_values() {
        let m = Material::drude_lorentz(10.0, 10.0, 0.0).unwrap();
        let g = m.damping_transform(Complex64::new(0.0, 0.0)).unwrap();
        assert!((g.re - 0.01).abs() < 1e-15 && g.im == 0.0);
        let g = reference().damping_transform(Complex64::new(0.0, -10.0)).unwrap();
        assert!((g - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let g = reference().damping_transform(Complex64::new(0.0, -1e6)).unwrap();
        assert!((g.re + 1e-12).abs() < 1e-15);
        assert!(m.damping_transform(Complex64::new(0.0, -10.0)).is_err());
    }

    #[test]
    fn permittivity_values() {
        let vac = Material::drude_lorentz(3.0, 0.0, 0.2).unwrap();
        assert_eq!(vac.permittivity(7.0).unwrap(), Complex64::new(1.0, 0.0));
        let s = Material::static_nd(10.0, 10.0).unwrap();
        assert_eq!(s.permittivity(123.0).unwrap().re, 2.0);
        let e = reference().permittivity(10.0).unwrap();
        assert!((e - Complex64::new(1.0, 100.0)).norm() < 1e-10);
        let undamped = Material::drude_lorentz(10.0, 10.0, 0.0).unwrap();
        assert!(matches!(undamped.permittivity(10.0), Err(Error::ResonanceSingularity { .. })));
    }

    #[test]
    fn index_and_reflection() {
        let n = reference().refractive_index(10.0).unwrap();
        assert!((n.re - 7.1063).abs() < 3e-4 && (n.im - 7.0357).abs() < 3e-4, "{n}");
        // half-angle form of the principal root
        let m = 1.0f64.hypot(100.0);
        assert!((n.re - ((m + 1.0) / 2.0).sqrt()).abs() < 1e-12);
        assert!((n.im - ((m - 1.0) / 2.0).sqrt()).abs() < 1e-12);
        let s = Material::static_nd(10.0, 10.0).unwrap();
        assert!((s.refractive_index(1.0).unwrap().re - 2f64.sqrt()).abs() < 1e-15);
        let r = s.surface_reflection(1.0).unwrap();
        assert!((r.re + 0.171_572_875_253_809_9).abs() < 1e-12);
        assert_eq!(Material::vacuum().surface_reflection(2.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn stop_band_branch_with_zero_damping() {
        let m = Material::drude_lorentz(10.0, 10.0, 0.0).unwrap();
        let n = m.refractive_index(12.0).unwrap();
        assert!(n.re >= 0.0 && n.im > 0.0);
    }

    #[test]
    fn fd_weight_example() {
        let m = reference();
        let a = m.fd_weight(10.0).unwrap();
        let b = m.fd_weight_from_kernel(10.0).unwrap();
        assert!((b - 100.0).abs() < 1e-10);
        assert!((a - b).abs() <= 1e-12 * a);
        assert_eq!(Material::static_nd(10.0, 10.0).unwrap().fd_weight(3.0).unwrap(), 0.0);
        assert_eq!(Material::drude_lorentz(1.0, 0.0, 1.0).unwrap().fd_weight(3.0).unwrap(), 0.0);
    }

    #[test]
    fn imaginary_axis_index() {
        let m = reference();
        let xi = 3.0;
        let n = m.index_imaginary_axis(xi).unwrap();
        let expect = (1.0 + 100.0 / (100.0 + 9.0 + 0.3f64)).sqrt();
        assert!((n - expect).abs() < 1e-14);
    }
}
