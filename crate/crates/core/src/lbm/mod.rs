//! Classical D2Q4 lattice-Boltzmann solver for advection-diffusion.
//!
//! Velocities are numbered counterclockwise from `+x`:
//! `(1,0), (0,1), (-1,0), (0,-1)`, with weights `1/4` and `c_s² = 1/2`.
//! Collision relaxes toward `f_eq = w [ρ + ρ U·c / c_s²]` through a
//! multiple-relaxation-time matrix `A` built from four orthonormal moments.

mod field;
mod model;
mod run;
mod scenario;

pub use field::{step, LatticeField, Stepper};
pub use model::{
    CouetteProfile, ScatteringMatrix, TransportModel, VelocityField, CS2, VELOCITIES, WEIGHT,
};
pub use run::{fit_line, periodic_moments, run, MomentSample, Moments, Trajectory};
pub use scenario::{InitSpec, ProfileSpec, Scenario, VelocitySpec};
