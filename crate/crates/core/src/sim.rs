//! Generative model: antenna cluster maps with common sparse support,
//! tapped-delay-line channels, pilot layout and noisy pilot observations.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Matrix};
use crate::rng::{self, streams};

/// Assignment of each antenna (raster order) to a support cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    pub assignment: Vec<usize>,
    pub n_clusters: usize,
}

impl ClusterMap {
    /// Every antenna in its own cluster.
    pub fn singletons(m: usize) -> Self {
        Self { assignment: (0..m).collect(), n_clusters: m }
    }

    /// All antennas in one cluster.
    pub fn single(m: usize) -> Self {
        Self { assignment: vec![0; m], n_clusters: 1 }
    }

    /// Builds a map from arbitrary labels, relabeling densely in order of
    /// first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self { assignment, n_clusters: remap.len() }
    }

    pub fn n_antennas(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_clusters];
        for &a in &self.assignment {
            sizes[a] += 1;
        }
        sizes
    }

    /// True when labels are dense in `[0, n_clusters)` and no cluster is empty.
    pub fn is_valid_partition(&self) -> bool {
        self.assignment.iter().all(|&a| a < self.n_clusters)
            && self.cluster_sizes().iter().all(|&s| s > 0)
    }
}

/// Raster-scans the grid. Each antenna draws a Bernoulli(`p`) link to its
/// left neighbor and then, independently, one to its upper neighbor. It joins
/// the left neighbor's cluster if that link holds, otherwise the upper
/// neighbor's, otherwise it opens a new cluster. Both draws are always made
/// so the random stream does not depend on the outcomes.
pub fn generate_cluster_map<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    p: f64,
    rng: &mut R,
) -> Result<ClusterMap> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!("antenna grid {rows}x{cols} is empty")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("link probability {p} outside [0, 1]")));
    }
    let mut labels = vec![0usize; rows * cols];
    let mut next = 0;
    for r in 0..rows {
        for c in 0..cols {
            let idx = r * cols + c;
            let left = c > 0 && rng.random_bool(p);
            let up = r > 0 && rng.random_bool(p);
            labels[idx] = if left {
                labels[idx - 1]
            } else if up {
                labels[idx - cols]
            } else {
                next += 1;
                next - 1
            };
        }
    }
    Ok(ClusterMap::from_labels(&labels))
}

/// Ground-truth channel for every antenna.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// M × L taps α.
    pub taps: CMatrix,
    /// Sorted support of each cluster.
    pub supports: Vec<Vec<usize>>,
    pub cluster_map: ClusterMap,
    /// M × N frequency responses on the pilot subcarriers, h = F α.
    pub freq: CMatrix,
}

impl ChannelRealization {
    pub fn energy(&self) -> f64 {
        self.taps.as_slice().iter().map(|t| t.norm_sqr()).sum()
    }
}

/// Pilot subcarrier indices `0, s, 2s, ...` with stride `s = floor(n_total / n)`.
pub fn pilot_indices(n_total: usize, n_pilots: usize) -> Vec<usize> {
    let stride = n_total / n_pilots;
    (0..n_pilots).map(|i| i * stride).collect()
}

/// Truncated DFT dictionary: entry (n, l) = exp(−j 2π · idx[n] · l / n_total).
pub fn dictionary(pilot_indices: &[usize], channel_len: usize, n_total: usize) -> CMatrix {
    let data = pilot_indices
        .iter()
        .flat_map(|&k| {
            (0..channel_len).map(move |l| {
                // reduce the phase index first to keep the angle small and exact
                let r = (k * l) % n_total;
                Complex64::from_polar(1.0, -2.0 * PI * r as f64 / n_total as f64)
            })
        })
        .collect();
    Matrix::from_vec(pilot_indices.len(), channel_len, data).expect("dimensions agree")
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// Draws one support per cluster and independent CN(0, 1/n_nonzero) gains
/// for every antenna on its cluster's support.
pub fn generate_channel<R: Rng + ?Sized>(
    config: &SystemConfig,
    cluster_map: &ClusterMap,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let l = config.channel_len;
    if config.n_nonzero > l {
        return Err(Error::Config(format!(
            "n_nonzero {} exceeds channel_len {l}",
            config.n_nonzero
        )));
    }
    let m = cluster_map.n_antennas();
    if m != config.n_antennas() {
        return Err(Error::Config(format!(
            "cluster map covers {m} antennas, config has {}",
            config.n_antennas()
        )));
    }
    let supports: Vec<Vec<usize>> = (0..cluster_map.n_clusters)
        .map(|_| {
            let mut s = index::sample(rng, l, config.n_nonzero).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let tap_var = 1.0 / config.n_nonzero.max(1) as f64;
    let mut taps = CMatrix::filled(m, l, Complex64::new(0.0, 0.0));
    for (ant, &k) in cluster_map.assignment.iter().enumerate() {
        let row = taps.row_mut(ant);
        for &pos in &supports[k] {
            row[pos] = complex_normal(rng, tap_var);
        }
    }
    let dict = dictionary(&pilot_indices(config.n_total, config.n_pilots), l, config.n_total);
    let freq_rows = (0..m).map(|ant| dict.mul_vec(taps.row(ant))).collect();
    Ok(ChannelRealization {
        taps,
        supports,
        cluster_map: cluster_map.clone(),
        freq: Matrix::from_rows(freq_rows)?,
    })
}

/// Known pilots, dictionary and the received pilot samples of every antenna.
#[derive(Debug, Clone)]
pub struct Observation {
    pub pilots: Vec<Complex64>,
    pub pilot_indices: Vec<usize>,
    /// N × L.
    pub dictionary: CMatrix,
    /// M × N.
    pub received: CMatrix,
    /// Noise precision used to draw the noise; infinite for a noiseless draw.
    pub true_lambda: f64,
}

impl Observation {
    pub fn n_antennas(&self) -> usize {
        self.received.rows()
    }
    pub fn n_pilots(&self) -> usize {
        self.dictionary.rows()
    }
    pub fn channel_len(&self) -> usize {
        self.dictionary.cols()
    }
}

/// QPSK pilots and y = X h + n with the noise precision set from `snr_db`
/// against the expected per-subcarrier signal power (unit by construction).
pub fn build_observation<R: Rng + ?Sized>(
    config: &SystemConfig,
    realization: &ChannelRealization,
    rng: &mut R,
) -> Result<Observation> {
    let idx = pilot_indices(config.n_total, config.n_pilots);
    let dict = dictionary(&idx, config.channel_len, config.n_total);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pilots: Vec<Complex64> = (0..idx.len())
        .map(|_| {
            let re = if rng.random_bool(0.5) { s } else { -s };
            let im = if rng.random_bool(0.5) { s } else { -s };
            Complex64::new(re, im)
        })
        .collect();
    // E|h_n|² = Σ_l |F_nl|² E|α_l|² = n_nonzero · (1 / n_nonzero)
    let signal_power = 1.0;
    let noise_var = signal_power * 10f64.powf(-config.snr_db / 10.0);
    let m = realization.freq.rows();
    let mut received = CMatrix::filled(m, idx.len(), Complex64::new(0.0, 0.0));
    for ant in 0..m {
        let h = realization.freq.row(ant);
        let y = received.row_mut(ant);
        for n in 0..idx.len() {
            y[n] = pilots[n] * h[n];
            if noise_var > 0.0 {
                y[n] += complex_normal(rng, noise_var);
            }
        }
    }
    Ok(Observation {
        pilots,
        pilot_indices: idx,
        dictionary: dict,
        received,
        true_lambda: 1.0 / noise_var,
    })
}

/// One complete draw (cluster map, channel, observation) for `seed`, each
/// stage on its own derived stream.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub cluster_map: ClusterMap,
    pub realization: ChannelRealization,
    pub observation: Observation,
}

pub fn simulate(config: &SystemConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;
    let mut crng = rng::stream(seed, streams::CLUSTERS);
    let cluster_map = generate_cluster_map(config.rows, config.cols, config.p, &mut crng)?;
    let mut hrng = rng::stream(seed, streams::CHANNEL);
    let realization = generate_channel(config, &cluster_map, &mut hrng)?;
    let mut orng = rng::stream(seed, streams::OBSERVATION);
    let observation = build_observation(config, &realization, &mut orng)?;
    Ok(Scenario { cluster_map, realization, observation })
}
