use serde::Serialize;

use super::config::ProtocolConfig;
use super::herald::{HeraldRecord, HeraldSampler, Outcome};
use super::lcu::lcu_apply;
use crate::collision::SplitSchedule;
use crate::error::{Error, Result};
use crate::hybrid::{streaming_sandwich, ComponentMoments, FieldExtraction, HybridState, Mode};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Largest norm fraction tolerated on the top Fock levels during a run.
const RUN_LEAKAGE_LIMIT: f64 = 1e-6;

/// One full lattice step: heralded collision substeps, then the x and y
/// streaming sandwiches.
#[derive(Debug, Clone)]
pub struct Engine<T: Real> {
    schedule: SplitSchedule<T>,
    theta: T,
    sandwiches: [CMatrix<T>; 2],
}

impl<T: Real> Engine<T> {
    pub fn new(schedule: SplitSchedule<T>, cutoff: usize, theta: T) -> Result<Self> {
        let sandwiches = [
            streaming_sandwich(Mode::X, theta, cutoff)?,
            streaming_sandwich(Mode::Y, theta, cutoff)?,
        ];
        Ok(Self {
            schedule,
            theta,
            sandwiches,
        })
    }

    pub fn schedule(&self) -> &SplitSchedule<T> {
        &self.schedule
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// Applies the heralded collision substeps and records them. Returns
    /// `false` when a sampled herald fails.
    pub fn collide(
        &self,
        state: &mut HybridState<T>,
        sampler: &mut HeraldSampler,
        step: usize,
        record: &mut HeraldRecord,
    ) -> Result<bool> {
        for (k, sub) in self.schedule.per_step.iter().enumerate() {
            let out = lcu_apply(state, &sub.decomposition, sampler)?;
            record.push(
                step,
                k,
                out.p.as_f64(),
                out.outcome,
                out.ledger_factor.as_f64(),
            );
            if out.outcome == Outcome::Failure {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn stream(&self, state: &mut HybridState<T>, mode: Mode) -> Result<()> {
        let op = match mode {
            Mode::X => &self.sandwiches[0],
            Mode::Y => &self.sandwiches[1],
        };
        state.apply_spin_mode(mode, op)
    }

    /// Collision, then x streaming, then y streaming. Returns `false` and
    /// leaves the state after the failed herald when a sampled herald fails.
    pub fn full_step(
        &self,
        state: &mut HybridState<T>,
        sampler: &mut HeraldSampler,
        step: usize,
        record: &mut HeraldRecord,
    ) -> Result<bool> {
        if !self.collide(state, sampler, step, record)? {
            return Ok(false);
        }
        self.stream(state, Mode::X)?;
        self.stream(state, Mode::Y)?;
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolSample {
    pub step: usize,
    pub ledger: f64,
    pub total_mass: f64,
    pub components: [ComponentMoments; 4],
}

impl ProtocolSample {
    fn of(step: usize, state: &HybridState<f64>) -> Self {
        let components = state.component_moments();
        Self {
            step,
            ledger: state.ledger(),
            total_mass: components.iter().map(|c| c.mass).sum(),
            components,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub samples: Vec<ProtocolSample>,
    pub fields: Vec<(usize, FieldExtraction)>,
    pub herald: HeraldRecord,
    /// Step at which a sampled herald failed, if any.
    pub halted_at: Option<usize>,
    pub state: HybridState<f64>,
}

/// Encodes the initial packets and iterates the full step `n_steps` times.
pub fn run_protocol(config: &ProtocolConfig) -> Result<ProtocolRun> {
    config.validate()?;
    let mut state = config.initial_state()?;
    let engine = Engine::new(config.schedule()?, config.cutoff, config.theta())?;
    let mut sampler = HeraldSampler::new(config.herald_mode, config.seed);
    let mut herald = HeraldRecord::default();
    let mut samples = Vec::new();
    let mut fields = Vec::new();
    let mut halted_at = None;

    let mut observe = |step: usize, state: &HybridState<f64>| -> Result<()> {
        samples.push(ProtocolSample::of(step, state));
        if let Some(grid) = &config.grid {
            fields.push((step, state.extract_field(grid)?));
        }
        Ok(())
    };
    observe(0, &state)?;
    for step in 1..=config.n_steps {
        if !engine.full_step(&mut state, &mut sampler, step, &mut herald)? {
            halted_at = Some(step);
            break;
        }
        let leaked = state.leakage();
        if leaked > RUN_LEAKAGE_LIMIT {
            return Err(Error::CutoffLeakage {
                leaked,
                limit: RUN_LEAKAGE_LIMIT,
                required: 2 * config.cutoff,
            });
        }
        if step % config.sample_every == 0 || step == config.n_steps {
            observe(step, &state)?;
        }
    }
    Ok(ProtocolRun {
        samples,
        fields,
        herald,
        halted_at,
        state,
    })
}
