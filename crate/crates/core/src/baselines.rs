//! Comparison estimators that share the estimator's schedule but pin the
//! assignment block: one cluster per antenna, the true clusters, or one
//! cluster for the whole array.

use std::fmt;
use std::str::FromStr;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::estimator::{run_observed, Assignment, EstimateReport, EstimatorOptions, EstimatorState};
use crate::sim::{ClusterMap, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineKind {
    /// Per-antenna SBL, no shared support.
    Separate,
    /// SBL with the true cluster map.
    GivenCluster,
    /// SBL assuming the whole array shares one support.
    ScsArray,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] =
        [BaselineKind::Separate, BaselineKind::GivenCluster, BaselineKind::ScsArray];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::Separate => "Separate",
            BaselineKind::GivenCluster => "GivenCluster",
            BaselineKind::ScsArray => "ScsArray",
        }
    }

    /// Frozen assignment for this baseline on an array of `m` antennas.
    pub fn assignment(self, m: usize, true_map: &ClusterMap) -> Assignment {
        match self {
            BaselineKind::Separate => {
                let map = ClusterMap::singletons(m);
                Assignment::one_hot(&map.assignment, map.n_clusters)
            }
            BaselineKind::GivenCluster => {
                Assignment::one_hot(&true_map.assignment, true_map.n_clusters)
            }
            BaselineKind::ScsArray => Assignment::one_hot(&vec![0; m], 1),
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown baseline `{s}`")))
    }
}

fn run_frozen<F>(
    config: &SystemConfig,
    observation: &Observation,
    assignment: Assignment,
    observer: F,
) -> Result<EstimateReport>
where
    F: FnMut(usize, &EstimatorState),
{
    run_observed(&EstimatorOptions::frozen(config, assignment), observation, observer)
}

/// Baseline `kind`, reporting the state after every iteration.
pub fn run_baseline_observed<F>(
    kind: BaselineKind,
    config: &SystemConfig,
    observation: &Observation,
    true_map: &ClusterMap,
    observer: F,
) -> Result<EstimateReport>
where
    F: FnMut(usize, &EstimatorState),
{
    let m = observation.n_antennas();
    if kind == BaselineKind::GivenCluster && true_map.n_antennas() != m {
        return Err(Error::Config(format!(
            "cluster map covers {} antennas, observation has {m}",
            true_map.n_antennas()
        )));
    }
    run_frozen(config, observation, kind.assignment(m, true_map), observer)
}

/// K = M with antenna m pinned to component m.
pub fn run_separate(config: &SystemConfig, observation: &Observation) -> Result<EstimateReport> {
    let m = observation.n_antennas();
    run_baseline_observed(BaselineKind::Separate, config, observation, &ClusterMap::singletons(m), |_, _| {})
}

/// φ pinned one-hot to the true clusters.
pub fn run_given_cluster(
    config: &SystemConfig,
    observation: &Observation,
    true_map: &ClusterMap,
) -> Result<EstimateReport> {
    run_baseline_observed(BaselineKind::GivenCluster, config, observation, true_map, |_, _| {})
}

/// K = 1, φ ≡ 1.
pub fn run_scs_array(config: &SystemConfig, observation: &Observation) -> Result<EstimateReport> {
    let m = observation.n_antennas();
    run_baseline_observed(BaselineKind::ScsArray, config, observation, &ClusterMap::single(m), |_, _| {})
}
