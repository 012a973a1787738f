//! Statevector engine for two pseudospins coupled to two truncated bosonic
//! modes.
//!
//! Basis ordering is spin-major: amplitude index `(s · N + n_x) · N + n_y`
//! with `s = 2 q₁ + q₂` and `N` the Fock cutoff. Quadratures follow
//! `x̂ = (a + a†)/√2`, so `exp(θ (a† - a))` shifts `⟨x̂⟩` by `√2 θ`.

mod mode;
mod spin;
mod state;
mod streaming;

pub use mode::{gaussian_fock_coefficients, hermite_functions, ModeAlgebra};
pub use spin::{
    alpha, beta, entangler, kron, on_qubit, pauli, rotation, s_gate, s_generator,
    s_generator_check, s_generator_printed, Axis, GENERATOR_A, GENERATOR_B,
};
pub use state::{
    ComponentMoments, FieldExtraction, FieldGrid, FieldSample, GaussianPacket, HybridState, Support,
};
pub use streaming::{
    conditional_displacement, conjugated_spin_residual, direct_streaming, streaming_sandwich,
    verify_streaming_identity, Mode, StreamingIdentityResidual,
};
