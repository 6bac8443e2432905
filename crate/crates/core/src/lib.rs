//! Steady-state Casimir force between two finite dissipative slabs for a
//! 1+1 dimensional scalar field.
//!
//! Units: lengths in the gap a, frequencies in 1/a, forces in 1/a².

pub mod error;
pub mod forces;
pub mod material;
pub mod quadrature;
pub mod scattering;
pub mod states;
pub mod stress;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use forces::{
    bath_integrand, force_bath, force_bath_with, force_delta_squeezed, force_dissipationless, force_ic, force_ic_difference,
    force_total, halfspace_forces, ic_integrand, lifshitz_matsubara, lifshitz_matsubara_slabs, lifshitz_zero_temperature,
    BathFormula, ForceBreakdown, HalfspaceForces,
};
pub use material::{Material, PermittivityModel};
pub use quadrature::{integrate_semiinfinite, matsubara_sum, Estimate, QuadratureSpec};
pub use scattering::{cavity_coefficients, cavity_response, green_function, mode_eval, slab_coefficients, CavityConfig, CavityResponse, ModeFunction, ModeKind, ScatteringSet};
pub use states::{weight, weight_asymptotics_check, FieldState};
pub use stress::{pressure_difference, txx_bath_integrand, txx_ic_integrand, RegionPoint, StressRegion};
