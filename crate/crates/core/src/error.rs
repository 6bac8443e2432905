use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("damping kernel transform is singular at s = {re} + {im}i")]
    SingularEvaluation { re: f64, im: f64 },
    #[error("undamped resonance hit at omega = {omega}")]
    ResonanceSingularity { omega: f64 },
    #[error("cavity resonance at omega = {omega}: |1 - rL rR e^(2i omega a)| below threshold")]
    CavityResonance { omega: f64 },
    #[error("position x = {x} lies inside a slab; only exterior and gap points are supported")]
    UnsupportedRegion { x: f64 },
    #[error("state has no pointwise spectral weight; use the dedicated force path")]
    NoPointwiseWeight,
    #[error("quadrature did not converge: {panels} panels, reached k = {extent}")]
    NonConvergence { panels: usize, extent: f64 },
    #[error("Matsubara sum did not converge after {terms} terms")]
    SeriesNonConvergence { terms: usize },
    #[error("integrand returned a non-finite value at k = {at}")]
    NanIntegrand { at: f64 },
    #[error("integrand is not finite near k = 0 (k_min = {k_min})")]
    EndpointDivergence { k_min: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for numerical failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::SeriesNonConvergence { .. }
                | Error::NanIntegrand { .. }
                | Error::EndpointDivergence { .. }
                | Error::CavityResonance { .. }
                | Error::ResonanceSingularity { .. }
                | Error::SingularEvaluation { .. }
        )
    }
}
