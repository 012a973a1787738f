use nalgebra::{DMatrix, Matrix4};

use crate::collision::{build_collision_general, circuit_window, gamma_window, CollisionOperator};
use crate::error::{Error, Result};
use crate::hybrid::ModeAlgebra;
use crate::lbm::{TransportModel, CS2, WEIGHT};
use crate::linalg::{expm_real, singular_values, to_complex};
use crate::scalar::Real;

/// Scattering generator of shear flow `U = U₀ (ŷ, 0)` on spin ⊗ mode y, with
/// `ŷ = a_y + a_y†`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouetteGenerator<T: Real> {
    /// `-A`: relaxation with the equilibrium at rest folded in.
    pub omega0: Matrix4<T>,
    /// `ω1_ij = Σ_k A_ik w_k c_kx`, the coefficient of the position operator.
    pub omega1: Matrix4<T>,
    pub u0: T,
    pub cutoff: usize,
    /// `omega0 ⊗ I + (U₀ / c_s²) omega1 ⊗ ŷ`, dimension `4 N`.
    pub assembled: DMatrix<T>,
}

impl<T: Real> CouetteGenerator<T> {
    pub fn new(u0: T, diffusivity: T, cutoff: usize) -> Result<Self> {
        if !u0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "u0",
                reason: "shear amplitude must be finite".into(),
            });
        }
        let model = TransportModel::new(diffusivity)?;
        let a = model.scattering_matrix().a;
        let modes = ModeAlgebra::<T>::new(cutoff)?;
        let w = T::lit(WEIGHT);
        let omega0 = model.omega_matrix((T::zero(), T::zero()));
        let omega1 = Matrix4::from_fn(|i, _| {
            (0..4).fold(T::zero(), |acc, k| {
                let cx = T::lit(crate::lbm::VELOCITIES[k].0 as f64);
                acc + a[(i, k)] * w * cx
            })
        });
        let y = modes.lowering() + modes.raising();
        let coupling = u0 / T::lit(CS2);
        let dim = 4 * cutoff;
        let assembled = DMatrix::from_fn(dim, dim, |r, c| {
            let (i, m) = (r / cutoff, r % cutoff);
            let (j, n) = (c / cutoff, c % cutoff);
            let constant = if m == n { omega0[(i, j)] } else { T::zero() };
            constant + coupling * omega1[(i, j)] * y[(m, n)]
        });
        Ok(Self {
            omega0,
            omega1,
            u0,
            cutoff,
            assembled,
        })
    }
}

/// A weight exists iff the singular-value window is non-empty; for normal
/// operators the singular values are the eigenvalue moduli.
fn feasible<T: Real>(omega: &DMatrix<T>, dt: T) -> bool {
    let c = to_complex(&expm_real(&(omega * dt)));
    gamma_window(&singular_values(&c)).is_ok()
}

/// Largest `Δt ≤ limit` (to relative precision `1e-6`) for which
/// `exp(Ω Δt)` admits a weight, found by bisection.
pub fn max_feasible_dt<T: Real>(omega: &DMatrix<T>, limit: T) -> T {
    if feasible(omega, limit) {
        return limit;
    }
    let (mut lo, mut hi) = (T::zero(), limit);
    while hi - lo > T::lit(1e-6) * limit {
        let mid = (lo + hi) * T::lit(0.5);
        if feasible(omega, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Assembles the shear-flow generator and its collision operator at `Δt`.
pub fn build_couette_generator<T: Real>(
    u0: T,
    diffusivity: T,
    cutoff: usize,
    dt: T,
) -> Result<(CouetteGenerator<T>, CollisionOperator<T>)> {
    let gen = CouetteGenerator::new(u0, diffusivity, cutoff)?;
    if !feasible(&gen.assembled, dt) {
        return Err(Error::InfeasibleStep {
            dt: dt.as_f64(),
            max_dt: max_feasible_dt(&gen.assembled, dt).as_f64(),
        });
    }
    let op = build_collision_general(&gen.assembled, dt);
    match op.and_then(|op| circuit_window(&op).map(|_| op)) {
        Ok(op) => Ok((gen, op)),
        Err(Error::InfeasibleWindow { .. }) => Err(Error::InfeasibleStep {
            dt: dt.as_f64(),
            max_dt: max_feasible_dt(&gen.assembled, dt).as_f64(),
        }),
        Err(e) => Err(e),
    }
}
