use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::couette::build_couette_generator;
use super::herald::HeraldMode;
use crate::collision::{build_collision, build_collision_general, GeneratorMatrix, SplitSchedule};
use crate::error::{Error, Result};
use crate::hybrid::{FieldGrid, GaussianPacket, HybridState};
use crate::lbm::TransportModel;

pub const DEFAULT_CUTOFF: usize = 32;
/// Largest cutoff accepted from configuration files.
const MAX_CUTOFF: usize = 96;

/// Collision generator of a protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CollisionSpec {
    /// Real symmetric `M` on the spins (4×4) or on spin ⊗ mode y (`4N × 4N`).
    Matrix { m: Vec<Vec<f64>> },
    /// Shear flow on spin ⊗ mode y.
    Couette {
        u0: f64,
        #[serde(rename = "D")]
        diffusivity: f64,
    },
    /// Four-speed relaxation toward the equilibrium at constant velocity.
    AdvectionDiffusion {
        #[serde(rename = "D")]
        diffusivity: f64,
        #[serde(default)]
        ux: f64,
        #[serde(default)]
        uy: f64,
        #[serde(default = "one")]
        omega4: f64,
    },
}

impl CollisionSpec {
    pub fn diffusivity(&self) -> Option<f64> {
        match self {
            CollisionSpec::Matrix { .. } => None,
            CollisionSpec::Couette { diffusivity, .. }
            | CollisionSpec::AdvectionDiffusion { diffusivity, .. } => Some(*diffusivity),
        }
    }

    /// The generator `M` of `C = exp(M Δt)` when it acts on the spins alone.
    pub fn spin_generator(&self) -> Result<Option<DMatrix<f64>>> {
        match self {
            CollisionSpec::Matrix { m } => {
                let gen = matrix_from_rows(m)?;
                Ok((gen.nrows() == 4).then_some(gen))
            }
            CollisionSpec::Couette { .. } => Ok(None),
            CollisionSpec::AdvectionDiffusion {
                diffusivity,
                ux,
                uy,
                omega4,
            } => {
                let model = TransportModel::new(*diffusivity)?.with_omega4(*omega4)?;
                let omega = model.omega_matrix((*ux, *uy));
                Ok(Some(DMatrix::from_fn(4, 4, |r, c| omega[(r, c)])))
            }
        }
    }
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: "entries must be finite".into(),
        });
    }
    Ok(DMatrix::from_fn(n, n, |r, c| rows[r][c]))
}

/// Initial spin weights and Gaussian packets (one shared or one per
/// component).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitState {
    pub eta: [f64; 4],
    pub packets: Vec<GaussianPacket>,
}

/// Protocol run description, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
    /// Collision time per full step.
    #[serde(default = "one")]
    pub dt: f64,
    #[serde(default = "one_usize")]
    pub n_substeps: usize,
    pub n_steps: usize,
    /// Streaming displacement; defaults to `K_b · dt`.
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(rename = "K_b", default = "one")]
    pub k_b: f64,
    pub collision: CollisionSpec,
    pub init: InitState,
    #[serde(default)]
    pub herald_mode: HeraldMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one_usize")]
    pub sample_every: usize,
    #[serde(default)]
    pub grid: Option<FieldGrid>,
}

fn default_cutoff() -> usize {
    DEFAULT_CUTOFF
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl ProtocolConfig {
    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or(self.k_b * self.dt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_CUTOFF).contains(&self.cutoff) {
            return Err(invalid("cutoff", format!("must lie in 2..={MAX_CUTOFF}")));
        }
        if !(self.dt.is_finite() && self.dt >= 0.0) {
            return Err(Error::NegativeTimeStep(self.dt));
        }
        if self.n_substeps == 0 {
            return Err(Error::ZeroSubsteps);
        }
        if self.sample_every == 0 {
            return Err(invalid("sample_every", "must be positive"));
        }
        if !self.theta().is_finite() {
            return Err(invalid("theta", "must be finite"));
        }
        match &self.collision {
            CollisionSpec::Matrix { m } => {
                let n = matrix_from_rows(m)?.nrows();
                if n != 4 && n != 4 * self.cutoff {
                    return Err(Error::DimensionMismatch {
                        op: n,
                        cutoff: self.cutoff,
                    });
                }
            }
            CollisionSpec::Couette { diffusivity, u0 } => {
                TransportModel::new(*diffusivity)?;
                if !u0.is_finite() {
                    return Err(invalid("u0", "must be finite"));
                }
            }
            CollisionSpec::AdvectionDiffusion {
                diffusivity,
                ux,
                uy,
                omega4,
            } => {
                TransportModel::new(*diffusivity)?.with_omega4(*omega4)?;
                if !(ux.hypot(*uy) <= 0.5) {
                    return Err(invalid("velocity", "speed must not exceed 0.5"));
                }
            }
        }
        if let Some(grid) = &self.grid {
            if grid.points == 0 || !(grid.min < grid.max) {
                return Err(invalid("grid", "need min < max and at least one point"));
            }
        }
        Ok(())
    }

    /// Substep schedule `exp(M Δt / N)` decomposed for the circuit.
    pub fn schedule(&self) -> Result<SplitSchedule<f64>> {
        let n = self.n_substeps;
        let sub_dt = self.dt / n as f64;
        let substep = match &self.collision {
            CollisionSpec::Matrix { m } => {
                build_collision(&GeneratorMatrix::new(matrix_from_rows(m)?)?, sub_dt)?
            }
            CollisionSpec::Couette { u0, diffusivity } => {
                build_couette_generator(*u0, *diffusivity, self.cutoff, sub_dt)?.1
            }
            CollisionSpec::AdvectionDiffusion { ux, uy, .. } => {
                let omega = self.collision.spin_generator()?.expect("spin generator");
                if *ux == 0.0 && *uy == 0.0 {
                    build_collision(&GeneratorMatrix::new(omega)?, sub_dt)?
                } else {
                    build_collision_general(&omega, sub_dt)?
                }
            }
        };
        SplitSchedule::for_circuit(substep, n)
    }

    pub fn initial_state(&self) -> Result<HybridState<f64>> {
        HybridState::encode(self.init.eta, &self.init.packets, self.cutoff)
    }
}
