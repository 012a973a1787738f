//! Heralded quantum lattice-Boltzmann step: ancilla-based application of the
//! collision decomposition followed by the two streaming sandwiches.

mod config;
mod couette;
mod engine;
mod herald;
mod lcu;

pub use config::{CollisionSpec, InitState, ProtocolConfig, DEFAULT_CUTOFF};
pub use couette::{build_couette_generator, max_feasible_dt, CouetteGenerator};
pub use engine::{run_protocol, Engine, ProtocolRun, ProtocolSample};
pub use herald::{HeraldEntry, HeraldMode, HeraldRecord, HeraldSampler, Outcome};
pub use lcu::{lcu_apply, LcuOutcome};
