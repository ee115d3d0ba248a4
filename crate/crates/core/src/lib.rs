//! Sparse channel estimation for massive MIMO-OFDM with a Dirichlet-process
//! prior over shared tap supports.
//!
//! * [`sim`] draws cluster maps, common-support channels and pilot observations.
//! * [`estimator`] is the Dirichlet-process SBL message-passing estimator.
//! * [`baselines`] holds the fixed-assignment comparison estimators.
//! * [`harness`] runs Monte-Carlo experiments and writes CSV reports.

pub mod baselines;
pub mod config;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod matrix;
pub mod numeric;
pub mod par;
pub mod rng;
pub mod sim;

pub use baselines::BaselineKind;
pub use config::{HyperParams, SystemConfig};
pub use error::{Error, Result};
pub use estimator::{EstimateReport, EstimatorState};
pub use num_complex::Complex64;
pub use sim::{ChannelRealization, ClusterMap, Observation};
