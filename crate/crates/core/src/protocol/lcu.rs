use crate::collision::UnitarySumDecomposition;
use crate::error::{Error, Result};
use crate::hybrid::{HybridState, Support};
use crate::scalar::{cr, Real};

use super::herald::{HeraldSampler, Outcome};

/// Result of one heralded application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcuOutcome<T> {
    /// `‖(U_α + γ U_β) ψ‖² / (1 + γ)²`.
    pub p: T,
    pub outcome: Outcome,
    /// Factor applied to the ledger, `√p (1 + γ) = ‖C ψ‖` on success.
    pub ledger_factor: T,
}

/// Applies `C = U_α + γ U_β` with one ancilla.
///
/// The ancilla is rotated to `(1, √γ)/√(1+γ)`, `U_α` and `U_β` act on its
/// `|0⟩` and `|1⟩` branches, and the rotation is undone. The `|0⟩` branch is
/// `C ψ / (1 + γ)`, the `|1⟩` branch `-√γ (U_α - U_β) ψ / (1 + γ)`.
pub fn lcu_apply<T: Real>(
    state: &mut HybridState<T>,
    dec: &UnitarySumDecomposition<T>,
    sampler: &mut HeraldSampler,
) -> Result<LcuOutcome<T>> {
    let support = Support::for_dimension(dec.dim(), state.cutoff())?;
    let gamma = dec.gamma;
    let c = (T::one() / (T::one() + gamma)).sqrt();
    let s = (gamma / (T::one() + gamma)).sqrt();

    let mut zero = state.clone();
    zero.apply(&dec.u_alpha, support)?;
    let mut one = state.clone();
    one.apply(&dec.u_beta, support)?;
    let (a0, a1) = (zero.amplitudes() * cr(c), one.amplitudes() * cr(s));
    let success = &a0 * cr(c) + &a1 * cr(s);
    let failure = &a1 * cr(c) - &a0 * cr(s);

    let p = success.norm_squared();
    if !(p >= T::lit(1e-12)) {
        return Err(Error::DegenerateHerald(p.as_f64()));
    }
    let outcome = sampler.resolve(p.as_f64());
    let ledger_factor = match outcome {
        Outcome::Failure => {
            state.replace(failure, T::one());
            T::one()
        }
        _ => {
            let factor = p.sqrt() * (T::one() + gamma);
            state.replace(success, factor);
            factor
        }
    };
    Ok(LcuOutcome {
        p,
        outcome,
        ledger_factor,
    })
}
