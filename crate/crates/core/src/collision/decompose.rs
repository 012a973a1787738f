use nalgebra::{ComplexField, DVector};

use super::operator::CollisionOperator;
use super::window::{gamma_window, gamma_window_complex, GammaWindow};
use crate::error::{Error, Result};
use crate::linalg::{
    basis_inverse, commutator, max_abs, singular_values, spectral_norm, unitarity_residual,
    CMatrix, CVector,
};
use crate::scalar::{c, cr, Real, C};

/// How the two unitaries were assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionRoute {
    /// `U = V diag(·) V⁻¹` on the eigenbasis of `C`. Unitary and commuting
    /// when `C` is normal.
    Spectral,
    /// `U = W diag(·) Z†` on the singular vectors of `C = W Σ Z†`. Always
    /// unitary; used for non-normal operators that must drive a circuit.
    Singular,
}

/// `C = U_α + γ U_β` with the per-mode unit scalars that built it.
#[derive(Debug, Clone)]
pub struct UnitarySumDecomposition<T: Real> {
    pub u_alpha: CMatrix<T>,
    pub u_beta: CMatrix<T>,
    pub gamma: T,
    pub alphas: Vec<C<T>>,
    pub betas: Vec<C<T>>,
    pub route: DecompositionRoute,
    target: CMatrix<T>,
}

impl<T: Real> UnitarySumDecomposition<T> {
    /// Wraps a given unitary pair; the target is their weighted sum.
    pub fn from_unitaries(u_alpha: CMatrix<T>, u_beta: CMatrix<T>, gamma: T) -> Result<Self> {
        if u_alpha.shape() != u_beta.shape() || !u_alpha.is_square() {
            return Err(Error::NotSquare {
                rows: u_beta.nrows(),
                cols: u_alpha.ncols(),
            });
        }
        if !(gamma.is_finite() && gamma >= T::zero()) {
            return Err(Error::InvalidWeight(gamma.as_f64()));
        }
        let residual = unitarity_residual(&u_alpha).max(unitarity_residual(&u_beta));
        if residual > T::tol(1e-10) {
            return Err(Error::NotUnitary(residual.as_f64()));
        }
        let target = &u_alpha + &u_beta * cr(gamma);
        let (alphas, betas) = (Vec::new(), Vec::new());
        Ok(Self {
            u_alpha,
            u_beta,
            gamma,
            alphas,
            betas,
            route: DecompositionRoute::Spectral,
            target,
        })
    }

    pub fn dim(&self) -> usize {
        self.u_alpha.nrows()
    }

    /// The operator this decomposition reproduces.
    pub fn target(&self) -> &CMatrix<T> {
        &self.target
    }

    pub fn combined(&self) -> CMatrix<T> {
        &self.u_alpha + &self.u_beta * cr(self.gamma)
    }

    /// `max |U_α + γ U_β - C|`.
    pub fn reconstruction_residual(&self) -> T {
        max_abs(&(self.combined() - &self.target))
    }

    /// `(max |U_α†U_α - I|, max |U_β†U_β - I|)`.
    pub fn unitarity_residuals(&self) -> (T, T) {
        (
            unitarity_residual(&self.u_alpha),
            unitarity_residual(&self.u_beta),
        )
    }

    pub fn commutator_residual(&self) -> T {
        max_abs(&commutator(&self.u_alpha, &self.u_beta))
    }

    pub fn is_unitary(&self) -> bool {
        let (a, b) = self.unitarity_residuals();
        a.max(b) <= T::tol(1e-10)
    }
}

/// Splits one eigenvalue `δ` into `α, β` with `|α| = |β| = 1` and
/// `δ = α + γ β`.
///
/// For real positive `δ` the closed forms are used directly; otherwise the
/// two-circle intersection is solved in the frame rotated onto `δ`, taking
/// the branch that coincides with the real closed forms. Radicands within
/// `1e-14` of zero are clamped to zero.
pub fn unit_pair<T: Real>(delta: C<T>, gamma: T, index: usize) -> Result<(C<T>, C<T>)> {
    if !(gamma.is_finite() && gamma >= T::zero()) {
        return Err(Error::InvalidWeight(gamma.as_f64()));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let d = delta.modulus();
    let g2 = gamma * gamma;
    let radicand = -d.powi(4) + two * d * d * (g2 + one) - (g2 - one).powi(2);
    let clamp = T::tol(1e-14);
    let negative = |radicand: T| Error::NegativeRadicand {
        index,
        delta: d.as_f64(),
        gamma: gamma.as_f64(),
        radicand: radicand.as_f64(),
    };
    if radicand < -clamp || !(d > T::zero()) {
        return Err(negative(radicand));
    }
    let root = if radicand <= clamp {
        T::zero()
    } else {
        radicand.sqrt()
    };

    if gamma == T::zero() {
        // |δ| = 1 here; U_β is arbitrary and fixed to -1.
        return Ok((delta / cr(d), cr(-one)));
    }

    let is_real = delta.im.abs() <= T::tol(1e-14) * d && delta.re > T::zero();
    if is_real {
        let dr = delta.re;
        let alpha = c((dr * dr - g2 + one) / (two * dr), root / (two * dr));
        let beta = c(
            (dr * dr + g2 - one) / (two * dr * gamma),
            -root / (two * dr * gamma),
        );
        Ok((alpha, beta))
    } else {
        let u = delta / cr(d);
        let alpha = u * c((d * d - g2 + one) / (two * d), root / (two * d));
        let beta = (delta - alpha) / cr(gamma);
        Ok((alpha, beta))
    }
}

/// Per-eigenvalue phases of `U_α` and `U_β`.
type PhasePairs<T> = (Vec<C<T>>, Vec<C<T>>);

fn unit_pairs<T: Real>(values: &[C<T>], gamma: T) -> Result<PhasePairs<T>> {
    let mut alphas = Vec::with_capacity(values.len());
    let mut betas = Vec::with_capacity(values.len());
    for (i, &d) in values.iter().enumerate() {
        let (a, b) = unit_pair(d, gamma, i)?;
        alphas.push(a);
        betas.push(b);
    }
    Ok((alphas, betas))
}

fn check_norm<T: Real>(c: &CMatrix<T>, gamma: T) -> Result<()> {
    let norm = spectral_norm(c);
    let bound = T::one() + gamma;
    if norm > bound * (T::one() + T::tol(1e-12)) {
        return Err(Error::NormExceedsBound {
            norm: norm.as_f64(),
            bound: bound.as_f64(),
        });
    }
    Ok(())
}

/// Decomposes `C` on its eigenbasis at weight `γ`.
pub fn decompose<T: Real>(
    op: &CollisionOperator<T>,
    gamma: T,
) -> Result<UnitarySumDecomposition<T>> {
    let (alphas, betas) = unit_pairs(op.spectrum(), gamma)?;
    check_norm(op.entries(), gamma)?;
    let v = op.eigenbasis();
    let v_inv = basis_inverse(v)?;
    let assemble =
        |phases: &[C<T>]| v * CMatrix::from_diagonal(&CVector::from_column_slice(phases)) * &v_inv;
    Ok(UnitarySumDecomposition {
        u_alpha: assemble(&alphas),
        u_beta: assemble(&betas),
        gamma,
        alphas,
        betas,
        route: DecompositionRoute::Spectral,
        target: op.entries().clone(),
    })
}

/// Decomposes an arbitrary matrix on its singular vectors at weight `γ`.
///
/// The result is unitary for any `C`; the two unitaries commute only when
/// `C` is normal.
pub fn decompose_singular<T: Real>(
    target: &CMatrix<T>,
    gamma: T,
) -> Result<UnitarySumDecomposition<T>> {
    let svd = target.clone().svd(true, true);
    let w = svd.u.expect("left singular vectors requested");
    let z_adj = svd.v_t.expect("right singular vectors requested");
    let sigmas: Vec<C<T>> = svd.singular_values.iter().map(|&s| cr(s)).collect();
    let (alphas, betas) = unit_pairs(&sigmas, gamma)?;
    let assemble =
        |phases: &[C<T>]| &w * CMatrix::from_diagonal(&DVector::from_column_slice(phases)) * &z_adj;
    Ok(UnitarySumDecomposition {
        u_alpha: assemble(&alphas),
        u_beta: assemble(&betas),
        gamma,
        alphas,
        betas,
        route: DecompositionRoute::Singular,
        target: target.clone(),
    })
}

/// Admissible weights for the decomposition a circuit would use: the
/// eigenvalue window for normal operators, the singular-value window
/// otherwise.
pub fn circuit_window<T: Real>(op: &CollisionOperator<T>) -> Result<GammaWindow<T>> {
    if op.is_normal() {
        gamma_window_complex(op.spectrum())
    } else {
        gamma_window(&singular_values(op.entries()))
    }
}

/// Unitary decomposition suitable for a controlled-unitary circuit, at the
/// given weight or at the optimal one.
pub fn decompose_for_circuit<T: Real>(
    op: &CollisionOperator<T>,
    gamma: Option<T>,
) -> Result<UnitarySumDecomposition<T>> {
    let gamma = match gamma {
        Some(g) => g,
        None => circuit_window(op)?.optimal(),
    };
    if op.is_normal() {
        decompose(op, gamma)
    } else {
        decompose_singular(op.entries(), gamma)
    }
}

/// Worst-case failure probability `γ ‖U_α - U_β‖² / (1 + γ)²` (spectral norm).
pub fn failure_bound<T: Real>(dec: &UnitarySumDecomposition<T>) -> T {
    let diff = spectral_norm(&(&dec.u_alpha - &dec.u_beta));
    let denom = (T::one() + dec.gamma).powi(2);
    (dec.gamma * diff * diff / denom)
        .min(T::one())
        .max(T::zero())
}
