//! Heralded quantum lattice-Boltzmann simulator.
//!
//! Numerical code is generic over [`Real`]; the aliases below fix the scalar
//! to `f64`, which every tolerance in the test suite assumes.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collision;
pub mod error;
pub mod hybrid;
pub mod lbm;
pub mod linalg;
pub mod protocol;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Generator = collision::GeneratorMatrix<f64>;
pub type Collision = collision::CollisionOperator<f64>;
pub type Decomposition = collision::UnitarySumDecomposition<f64>;
pub type Window = collision::GammaWindow<f64>;
pub type Schedule = collision::SplitSchedule<f64>;
pub type Model = lbm::TransportModel<f64>;
pub type Field = lbm::LatticeField<f64>;
pub type State = hybrid::HybridState<f64>;
pub type ProtocolEngine = protocol::Engine<f64>;
