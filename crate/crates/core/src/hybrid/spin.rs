use crate::linalg::{expm, identity, max_abs, CMatrix};
use crate::scalar::{c, cr, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// `A = √2 π / 4`.
pub const GENERATOR_A: f64 = std::f64::consts::SQRT_2 * std::f64::consts::PI / 4.0;
/// `B = π / (2√2)`; numerically equal to `A`.
pub const GENERATOR_B: f64 = std::f64::consts::PI / (2.0 * std::f64::consts::SQRT_2);

pub fn pauli<T: Real>(axis: Axis) -> CMatrix<T> {
    let (o, l) = (T::zero(), T::one());
    let entries = match axis {
        Axis::X => [c(o, o), c(l, o), c(l, o), c(o, o)],
        Axis::Y => [c(o, o), c(o, -l), c(o, l), c(o, o)],
        Axis::Z => [c(l, o), c(o, o), c(o, o), c(-l, o)],
    };
    CMatrix::from_row_slice(2, 2, &entries)
}

pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.kronecker(b)
}

/// Embeds a single-qubit operator on qubit `q ∈ {0, 1}`; qubit 0 is the left
/// tensor factor.
pub fn on_qubit<T: Real>(q: usize, op: &CMatrix<T>) -> CMatrix<T> {
    match q {
        0 => kron(op, &identity(2)),
        1 => kron(&identity(2), op),
        _ => panic!("two pseudospins: qubit index {q} out of range"),
    }
}

/// Streaming matrix `α^b = -σˣ ⊗ σᵇ`.
pub fn alpha<T: Real>(b: Axis) -> CMatrix<T> {
    -kron(&pauli(Axis::X), &pauli(b))
}

/// Mass matrix `β = σᶻ ⊗ I`.
pub fn beta<T: Real>() -> CMatrix<T> {
    on_qubit(0, &pauli(Axis::Z))
}

/// `S_b = (β + α^b)/√2`, the Hermitian involution exchanging `β` and `α^b`.
pub fn s_gate<T: Real>(b: Axis) -> CMatrix<T> {
    (beta::<T>() + alpha::<T>(b)) * cr(T::one() / T::lit(2.0).sqrt())
}

/// `H_b = A β + B α^b = (π/2) S_b`, so that `exp(-i H_b) = -i S_b`.
///
/// Written with Pauli products this is `A σᶻ⊗I - B σˣ⊗σᵇ`; see
/// [`s_generator_printed`] for the opposite sign.
pub fn s_generator<T: Real>(b: Axis) -> CMatrix<T> {
    beta::<T>() * cr(T::lit(GENERATOR_A)) + alpha::<T>(b) * cr(T::lit(GENERATOR_B))
}

/// `A σᶻ⊗I + B σˣ⊗σᵇ = A β - B α^b`, which exponentiates to
/// `-i (β - α^b)/√2` rather than `-i S_b`.
pub fn s_generator_printed<T: Real>(b: Axis) -> CMatrix<T> {
    beta::<T>() * cr(T::lit(GENERATOR_A))
        + kron(&pauli(Axis::X), &pauli(b)) * cr(T::lit(GENERATOR_B))
}

/// `max |exp(-i H_b) + i S_b|`.
pub fn s_generator_check<T: Real>(b: Axis) -> T {
    let minus_i = c(T::zero(), -T::one());
    let u = expm(&(s_generator::<T>(b) * minus_i));
    max_abs(&(u - s_gate::<T>(b) * minus_i))
}

/// `R_q^j(θ) = exp(-i θ σ^j)` on qubit `q`.
pub fn rotation<T: Real>(q: usize, axis: Axis, theta: T) -> CMatrix<T> {
    let r = identity::<T>(2) * cr(theta.cos()) - pauli::<T>(axis) * c(T::zero(), theta.sin());
    on_qubit(q, &r)
}

/// `U_C(θ) = exp(-i θ σ₁ᶻ σ₂ᶻ)`.
pub fn entangler<T: Real>(theta: T) -> CMatrix<T> {
    let zz = kron(&pauli::<T>(Axis::Z), &pauli(Axis::Z));
    identity::<T>(4) * cr(theta.cos()) - zz * c(T::zero(), theta.sin())
}
