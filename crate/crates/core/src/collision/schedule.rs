use super::decompose::{decompose, decompose_for_circuit, failure_bound, UnitarySumDecomposition};
use super::operator::{build_collision, CollisionOperator, GeneratorMatrix};
use super::window::gamma_window_complex;
use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs, CMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct ScheduleStep<T: Real> {
    pub decomposition: UnitarySumDecomposition<T>,
    pub gamma0: T,
    pub p_success: T,
}

/// A collision step cut into `N` identical heralded substeps
/// `C = exp(M Δt / N)^N`.
#[derive(Debug, Clone)]
pub struct SplitSchedule<T: Real> {
    pub n_steps: usize,
    pub per_step: Vec<ScheduleStep<T>>,
    pub accumulated_success: T,
    substep: CollisionOperator<T>,
}

impl<T: Real> SplitSchedule<T> {
    /// Decomposes each substep on its eigenbasis at the optimal weight.
    pub fn from_substep(substep: CollisionOperator<T>, n: usize) -> Result<Self> {
        let gamma0 = gamma_window_complex(substep.spectrum())?.optimal();
        let dec = decompose(&substep, gamma0)?;
        Self::assemble(substep, dec, gamma0, n)
    }

    /// Like [`SplitSchedule::from_substep`] but with unitaries a circuit can
    /// apply, falling back to the singular-value route for non-normal
    /// substeps.
    pub fn for_circuit(substep: CollisionOperator<T>, n: usize) -> Result<Self> {
        let dec = decompose_for_circuit(&substep, None)?;
        let gamma0 = dec.gamma;
        Self::assemble(substep, dec, gamma0, n)
    }

    fn assemble(
        substep: CollisionOperator<T>,
        dec: UnitarySumDecomposition<T>,
        gamma0: T,
        n: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSubsteps);
        }
        let p_success = T::one() - failure_bound(&dec);
        let step = ScheduleStep {
            decomposition: dec,
            gamma0,
            p_success,
        };
        let accumulated_success = p_success.powi(n as i32);
        Ok(Self {
            n_steps: n,
            per_step: vec![step; n],
            accumulated_success,
            substep,
        })
    }

    pub fn substep(&self) -> &CollisionOperator<T> {
        &self.substep
    }

    pub fn p_step(&self) -> T {
        self.per_step[0].p_success
    }

    /// Product of the reconstructed substep operators.
    pub fn reconstruct_total(&self) -> CMatrix<T> {
        self.per_step
            .iter()
            .fold(identity(self.substep.dim()), |acc, s| {
                s.decomposition.combined() * acc
            })
    }

    /// `max |Π_k (U_α + γ U_β) - target|`.
    pub fn total_residual(&self, target: &CMatrix<T>) -> T {
        max_abs(&(self.reconstruct_total() - target))
    }
}

pub fn split_schedule<T: Real>(
    gen: &GeneratorMatrix<T>,
    dt: T,
    n: usize,
) -> Result<SplitSchedule<T>> {
    if n == 0 {
        return Err(Error::ZeroSubsteps);
    }
    let sub = build_collision(gen, dt / T::from_count(n))?;
    SplitSchedule::from_substep(sub, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessPoint<T> {
    pub n: usize,
    pub p_step: T,
    pub p_accumulated: T,
}

/// Per-substep and accumulated success for `N = 1..=n_max`.
pub fn success_curve<T: Real>(
    gen: &GeneratorMatrix<T>,
    dt: T,
    n_max: usize,
) -> Result<Vec<SuccessPoint<T>>> {
    (1..=n_max)
        .map(|n| {
            let s = split_schedule(gen, dt, n)?;
            Ok(SuccessPoint {
                n,
                p_step: s.p_step(),
                p_accumulated: s.accumulated_success,
            })
        })
        .collect()
}

/// Per-substep success at weights `γ = r γ₀` for the given ratios.
pub fn gamma_sweep<T: Real>(
    gen: &GeneratorMatrix<T>,
    dt: T,
    n: usize,
    ratios: &[T],
) -> Result<Vec<(T, T)>> {
    if n == 0 {
        return Err(Error::ZeroSubsteps);
    }
    let sub = build_collision(gen, dt / T::from_count(n))?;
    let gamma0 = gamma_window_complex(sub.spectrum())?.optimal();
    ratios
        .iter()
        .map(|&r| {
            let dec = decompose(&sub, r * gamma0)?;
            Ok((r, T::one() - failure_bound(&dec)))
        })
        .collect()
}
