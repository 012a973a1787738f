use nalgebra::ComplexField;

use super::mode::ModeAlgebra;
use super::spin::{alpha, beta, entangler, kron, on_qubit, pauli, rotation, s_gate, Axis};
use crate::error::{Error, Result};
use crate::linalg::{expm, identity, max_abs, to_complex, CMatrix};
use crate::scalar::{c, cr, Real};

/// Bosonic mode a spin-conditioned displacement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    X,
    Y,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::X, Mode::Y];

    /// Streaming matrix `α^b` paired with this mode.
    pub fn axis(self) -> Axis {
        match self {
            Mode::X => Axis::X,
            Mode::Y => Axis::Y,
        }
    }
}

/// `exp(θ P ⊗ (a† - a))` on spin ⊗ one mode (dimension `4 N`), for a
/// Hermitian spin operator `P` with `P² = I`.
///
/// Built from the projectors `(I ± P)/2` and the exact truncated displacements
/// `D(±θ)`, so no large exponential is formed.
pub fn conditional_displacement<T: Real>(
    theta: T,
    spin_op: &CMatrix<T>,
    cutoff: usize,
) -> Result<CMatrix<T>> {
    if spin_op.shape() != (4, 4) {
        return Err(Error::DimensionMismatch {
            op: spin_op.nrows(),
            cutoff,
        });
    }
    let hermitian = max_abs(&(spin_op - spin_op.adjoint()));
    let involution = max_abs(&(spin_op * spin_op - identity::<T>(4)));
    let residual = hermitian.max(involution);
    if residual > T::tol(1e-12) {
        return Err(Error::NotInvolution(residual.as_f64()));
    }
    let modes = ModeAlgebra::<T>::new(cutoff)?;
    let reach = theta.abs().as_f64() * (2.0 * cutoff as f64).sqrt();
    if reach > cutoff as f64 / 4.0 {
        log::warn!(
            "displacement {} is large for cutoff {cutoff}; expect truncation leakage",
            theta.as_f64()
        );
    }
    let half = cr(T::lit(0.5));
    let plus = (identity::<T>(4) + spin_op) * half;
    let minus = (identity::<T>(4) - spin_op) * half;
    let forward = to_complex(&modes.displacement(theta));
    let backward = to_complex(&modes.displacement(-theta));
    Ok(kron(&plus, &forward) + kron(&minus, &backward))
}

/// `S_b⁻¹ D_b S_b` with `D_b` the `β`-conditioned displacement along `mode`.
pub fn streaming_sandwich<T: Real>(mode: Mode, theta: T, cutoff: usize) -> Result<CMatrix<T>> {
    let d = conditional_displacement(theta, &beta::<T>(), cutoff)?;
    let s = kron(&s_gate::<T>(mode.axis()), &identity(cutoff));
    // S_b is a Hermitian involution, so S_b⁻¹ = S_b.
    Ok(&s * d * &s)
}

/// `exp(θ α^b ⊗ (a_b† - a_b))` by direct matrix exponentiation.
pub fn direct_streaming<T: Real>(mode: Mode, theta: T, cutoff: usize) -> Result<CMatrix<T>> {
    let modes = ModeAlgebra::<T>::new(cutoff)?;
    let generator = kron(
        &alpha::<T>(mode.axis()),
        &to_complex(&modes.displacement_generator()),
    );
    Ok(expm(&(generator * cr(theta))))
}

/// Raw and phase-aligned distance between the two sides of the gate
/// decomposition of the x streaming step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamingIdentityResidual<T> {
    /// `max |L - R|`.
    pub raw: T,
    /// `min_φ max |L - e^{iφ} R|`, evaluated at the trace-overlap phase.
    pub aligned: T,
    /// Phase `φ` that aligns the right-hand side with the left.
    pub phase: T,
}

/// `W = U_C(π/4) R₁ᶻ(π/4) R₂ʸ(-π/4)`, the spin frame change that maps
/// `σ₁ˣ` onto `α^x`.
fn frame<T: Real>() -> CMatrix<T> {
    let q = T::frac_pi_4();
    entangler(q) * rotation(0, Axis::Z, q) * rotation(1, Axis::Y, -q)
}

/// `max |W† σ₁ˣ W - α^x|` at the 4×4 level.
pub fn conjugated_spin_residual<T: Real>() -> T {
    let w = frame::<T>();
    let conjugated = w.adjoint() * on_qubit(0, &pauli::<T>(Axis::X)) * &w;
    max_abs(&(conjugated - alpha::<T>(Axis::X)))
}

/// Compares `exp[φ α^x (a - a†)]` with
/// `W† exp[φ σ₁ˣ (a - a†)] W` on spin ⊗ mode x at the given cutoff.
pub fn verify_streaming_identity<T: Real>(
    phi: T,
    cutoff: usize,
) -> Result<StreamingIdentityResidual<T>> {
    if cutoff < 16 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            reason: format!("identity check needs at least 16 levels, got {cutoff}"),
        });
    }
    let modes = ModeAlgebra::<T>::new(cutoff)?;
    let p = to_complex(&(-modes.displacement_generator())) * cr(phi);
    let lhs = expm(&kron(&alpha::<T>(Axis::X), &p));
    let inner = expm(&kron(&on_qubit(0, &pauli::<T>(Axis::X)), &p));
    let w = kron(&frame::<T>(), &identity(cutoff));
    let rhs = w.adjoint() * inner * &w;

    let raw = max_abs(&(&lhs - &rhs));
    let overlap = (rhs.adjoint() * &lhs).trace();
    let phase = if overlap.modulus() > T::zero() {
        overlap.argument()
    } else {
        T::zero()
    };
    let rotated = rhs * c(phase.cos(), phase.sin());
    let aligned = max_abs(&(lhs - rotated));
    Ok(StreamingIdentityResidual {
        raw,
        aligned,
        phase,
    })
}
