//! Heralded decomposition of non-unitary collision operators into a weighted
//! sum of two unitaries, `C = U_α + γ U_β`.
//!
//! The pipeline is: a real generator `M` ([`GeneratorMatrix`]) is
//! exponentiated into `C = exp(M Δt)` ([`build_collision`]); the spectrum of
//! `C` fixes the interval of admissible weights ([`gamma_window`]); each
//! eigenvalue `δ` is split into two unit-modulus numbers with
//! `δ = α + γ β` ([`decompose`]); and a step can be cut into `N` substeps,
//! each heralded separately ([`split_schedule`]).

mod decompose;
mod operator;
mod random;
mod schedule;
mod window;

pub use decompose::{
    circuit_window, decompose, decompose_for_circuit, decompose_singular, failure_bound, unit_pair,
    DecompositionRoute, UnitarySumDecomposition,
};
pub use operator::{build_collision, build_collision_general, CollisionOperator, GeneratorMatrix};
pub use random::random_symmetric_generator;
pub use schedule::{
    gamma_sweep, split_schedule, success_curve, ScheduleStep, SplitSchedule, SuccessPoint,
};
pub use window::{gamma_window, gamma_window_complex, optimal_gamma, GammaWindow};
