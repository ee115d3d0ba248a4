//! Dirichlet-process SBL channel estimator.
//!
//! Beliefs live on a factor graph with three blocks: the stick-breaking
//! assignment block (φ, π, η), the cluster precision block (γ̃), and the
//! per-antenna GAMP block that links taps α to pilot observations through
//! the dictionary. [`run`] executes the fixed iteration schedule; each
//! `update_*` function is one line of that schedule and is exposed so the
//! pieces can be tested in isolation.
//!
//! Per-antenna phases run data-parallel across antennas; per-cluster phases
//! run data-parallel across clusters. Every reduction over antennas is a
//! sequential sum in antenna order, so results are bit-identical with and
//! without the `parallel` feature.

use log::warn;
use num_complex::Complex64;

use crate::config::{HyperParams, SystemConfig};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, Matrix};
use crate::numeric::{
    combine_floored, digamma_unchecked, floor_var, BetaStatistics, GammaBelief, GaussianBelief,
};
use crate::par;
use crate::sim::Observation;

/// Upper clamp for the noise precision estimate.
pub const LAMBDA_MAX: f64 = 1e12;

/// Beliefs and messages owned by one antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaState {
    /// b(α_l), length L.
    pub alpha: Vec<GaussianBelief>,
    /// Product of the GAMP messages into α_l, length L.
    pub q: Vec<GaussianBelief>,
    /// Message from the dictionary constraint into h_n, length N.
    pub p: Vec<GaussianBelief>,
    /// GAMP scaled residual ŝ_n, length N.
    pub s: Vec<Complex64>,
    /// Message from the observation factor into h_n, length N.
    pub theta: Vec<GaussianBelief>,
    /// b(h_n), length N.
    pub h: Vec<GaussianBelief>,
    /// Cluster assignment probabilities, length K.
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    pub antennas: Vec<AntennaState>,
    /// b(γ̃_l^(k)), K × L.
    pub gamma: Matrix<GammaBelief>,
    /// ⟨γ̃_l^(k)⟩, K × L.
    pub gamma_mean: Matrix<f64>,
    /// ⟨log γ̃_l^(k)⟩, K × L.
    pub gamma_mean_log: Matrix<f64>,
    pub pi_stats: Vec<BetaStatistics>,
    /// ⟨log π_k⟩.
    pub log_pi: Vec<f64>,
    /// ⟨log(1 − π_k)⟩.
    pub log_one_minus_pi: Vec<f64>,
    pub eta_hat: f64,
    pub lambda_hat: f64,
    pub hyper: HyperParams,
    /// Relaxation applied to ŝ and to α̂ at the end of each iteration.
    pub damping: f64,
}

/// Final estimate handed back to callers.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    /// M × L.
    pub alpha_hat: CMatrix,
    /// M × N.
    pub h_hat: CMatrix,
    pub lambda_hat: f64,
    /// M × K.
    pub phi: Matrix<f64>,
    /// argmax_k φ_mk per antenna.
    pub hard_clusters: Vec<usize>,
    pub iterations_run: usize,
}

/// Whether the assignment block is inferred or pinned.
#[derive(Debug, Clone)]
pub enum Assignment {
    /// Full stick-breaking inference over `truncation` components.
    Learned { truncation: usize },
    /// φ fixed to the given M × K row-stochastic matrix; the φ/π/η lines of
    /// the schedule are skipped.
    Frozen(Matrix<f64>),
}

impl Assignment {
    /// One-hot φ for a hard labeling with `k` clusters.
    pub fn one_hot(labels: &[usize], k: usize) -> Self {
        let mut phi = Matrix::filled(labels.len(), k, 0.0);
        for (m, &c) in labels.iter().enumerate() {
            phi[(m, c)] = 1.0;
        }
        Assignment::Frozen(phi)
    }

    fn n_components(&self) -> usize {
        match self {
            Assignment::Learned { truncation } => *truncation,
            Assignment::Frozen(phi) => phi.cols(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EstimatorOptions {
    pub max_iters: usize,
    pub hyper: HyperParams,
    pub damping: f64,
    pub assignment: Assignment,
    /// Leading iterations that run a learned assignment with φ pinned to
    /// [`anchor_components`]; ignored for frozen assignments.
    pub warmup: usize,
}

impl EstimatorOptions {
    /// Dirichlet-process estimator settings taken from a system config.
    pub fn dirichlet(config: &SystemConfig) -> Self {
        Self {
            max_iters: config.max_iters,
            hyper: config.hyper,
            damping: config.damping,
            assignment: Assignment::Learned { truncation: config.truncation_level() },
            warmup: config.warmup_iters,
        }
    }

    pub fn frozen(config: &SystemConfig, assignment: Assignment) -> Self {
        Self { assignment, ..Self::dirichlet(config) }
    }
}

/// Component each antenna is pinned to during warm-up: antennas ranked by
/// received energy (descending, ties by index), rank r taking component
/// r mod K. The ranking depends only on the data, so relabeling antennas
/// relabels the result the same way.
pub fn anchor_components(observation: &Observation, k: usize) -> Vec<usize> {
    let m = observation.n_antennas();
    let energy: Vec<f64> =
        observation.received.row_iter().map(|r| r.iter().map(|v| v.norm_sqr()).sum()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| energy[b].total_cmp(&energy[a]).then(a.cmp(&b)));
    let mut anchor = vec![0; m];
    for (rank, &ant) in order.iter().enumerate() {
        anchor[ant] = rank % k;
    }
    anchor
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Initial state: φ = 1/K, ν_p = 1, p̂ = 0, ŝ = y·λ̂, ⟨log π⟩ = ⟨log(1−π)⟩ =
/// 1/K, η̂ = λ̂ = 1, γ̃ beliefs at the prior and α beliefs at CN(0, 1).
pub fn initialize(config: &SystemConfig, observation: &Observation) -> EstimatorState {
    initialize_with(&EstimatorOptions::dirichlet(config), observation)
}

pub fn initialize_with(options: &EstimatorOptions, observation: &Observation) -> EstimatorState {
    let m = observation.n_antennas();
    let n = observation.n_pilots();
    let l = observation.channel_len();
    let k = options.assignment.n_components();
    let lambda_hat = 1.0;
    let hyper = options.hyper;

    let antennas = (0..m)
        .map(|ant| {
            let y = observation.received.row(ant);
            let p = vec![GaussianBelief::new(zero(), 1.0); n];
            // θ is consumed by the first GAMP pass before its own schedule
            // line runs, so it starts from the observation with λ̂ = 1.
            let theta: Vec<GaussianBelief> = y
                .iter()
                .zip(&observation.pilots)
                .map(|(&yn, &xn)| GaussianBelief::new(yn / xn, 1.0 / (lambda_hat * xn.norm_sqr())))
                .collect();
            let h = theta.iter().zip(&p).map(|(&t, &pm)| combine_floored(t, pm)).collect();
            let phi = match &options.assignment {
                Assignment::Learned { .. } => vec![1.0 / k as f64; k],
                Assignment::Frozen(phi) => phi.row(ant).to_vec(),
            };
            AntennaState {
                alpha: vec![GaussianBelief::new(zero(), 1.0); l],
                q: vec![GaussianBelief::new(zero(), 1.0); l],
                p,
                s: y.iter().map(|&yn| yn * lambda_hat).collect(),
                theta,
                h,
                phi,
            }
        })
        .collect();

    let prior = GammaBelief { shape: hyper.c, rate: hyper.d };
    EstimatorState {
        antennas,
        gamma: Matrix::filled(k, l, prior),
        gamma_mean: Matrix::filled(k, l, prior.mean()),
        gamma_mean_log: Matrix::filled(k, l, prior.mean_log()),
        pi_stats: vec![BetaStatistics { tau1: 1.0, tau2: 1.0 }; k],
        log_pi: vec![1.0 / k as f64; k],
        log_one_minus_pi: vec![1.0 / k as f64; k],
        eta_hat: 1.0,
        lambda_hat,
        hyper,
        damping: options.damping,
    }
}

impl EstimatorState {
    pub fn n_antennas(&self) -> usize {
        self.antennas.len()
    }

    pub fn n_components(&self) -> usize {
        self.gamma.rows()
    }

    pub fn channel_len(&self) -> usize {
        self.gamma.cols()
    }

    pub fn phi_matrix(&self) -> Matrix<f64> {
        Matrix::from_rows(self.antennas.iter().map(|a| a.phi.clone()).collect())
            .expect("rows share K")
    }

    pub fn alpha_means(&self) -> CMatrix {
        Matrix::from_rows(
            self.antennas.iter().map(|a| a.alpha.iter().map(|b| b.mean).collect()).collect(),
        )
        .expect("rows share L")
    }

    pub fn h_means(&self) -> CMatrix {
        Matrix::from_rows(
            self.antennas.iter().map(|a| a.h.iter().map(|b| b.mean).collect()).collect(),
        )
        .expect("rows share N")
    }

    pub fn hard_clusters(&self) -> Vec<usize> {
        self.antennas
            .iter()
            .map(|a| {
                a.phi
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (k, &v)| if v > best.1 { (k, v) } else { best })
                    .0
            })
            .collect()
    }

    pub fn report(&self, iterations_run: usize) -> EstimateReport {
        EstimateReport {
            alpha_hat: self.alpha_means(),
            h_hat: self.h_means(),
            lambda_hat: self.lambda_hat,
            phi: self.phi_matrix(),
            hard_clusters: self.hard_clusters(),
            iterations_run,
        }
    }

    /// First quantity that holds a non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<&'static str> {
        if !self.lambda_hat.is_finite() {
            return Some("lambda_hat");
        }
        if !self.eta_hat.is_finite() {
            return Some("eta_hat");
        }
        for a in &self.antennas {
            if !a.alpha.iter().all(GaussianBelief::is_finite) {
                return Some("alpha");
            }
            if !a.q.iter().all(GaussianBelief::is_finite) {
                return Some("q_msg");
            }
            if !a.p.iter().all(GaussianBelief::is_finite) {
                return Some("p_msg");
            }
            if !a.s.iter().all(|s| s.re.is_finite() && s.im.is_finite()) {
                return Some("s_msg");
            }
            if !a.h.iter().all(GaussianBelief::is_finite) {
                return Some("h_belief");
            }
            if !a.phi.iter().all(|v| v.is_finite()) {
                return Some("phi");
            }
        }
        if !self.gamma_mean.as_slice().iter().all(|v| v.is_finite())
            || !self.gamma_mean_log.as_slice().iter().all(|v| v.is_finite())
        {
            return Some("gamma");
        }
        if !self.log_pi.iter().chain(&self.log_one_minus_pi).all(|v| v.is_finite()) {
            return Some("pi_stats");
        }
        None
    }
}

/// GAMP input-side message: for every tap,
/// ν_q = (Σ_n |F_nl|² / (ν_θ + ν_p))⁻¹ and q̂ = ν_q Σ_n ŝ_n F*_nl + α̂.
pub fn update_q(state: &mut EstimatorState, observation: &Observation) {
    let dict = &observation.dictionary;
    par::for_each_mut(&mut state.antennas, |_, ant| {
        let l = ant.alpha.len();
        let mut prec = vec![0.0; l];
        let mut acc = vec![zero(); l];
        for (n, row) in dict.row_iter().enumerate() {
            let w = 1.0 / floor_var(ant.theta[n].variance + ant.p[n].variance);
            let sn = ant.s[n];
            for (j, f) in row.iter().enumerate() {
                prec[j] += f.norm_sqr() * w;
                acc[j] += sn * f.conj();
            }
        }
        for j in 0..l {
            let nu = floor_var(1.0 / prec[j]);
            ant.q[j] = GaussianBelief::new(acc[j] * nu + ant.alpha[j].mean, nu);
        }
    });
}

/// b(α_l) from the q-message and the φ-weighted cluster precision:
/// ν_α = (Σ_k φ_k ⟨γ̃_l^(k)⟩ + 1/ν_q)⁻¹, α̂ = ν_α q̂ / ν_q.
pub fn update_alpha(state: &mut EstimatorState) {
    let gamma_mean = &state.gamma_mean;
    par::for_each_mut(&mut state.antennas, |_, ant| {
        let l = ant.alpha.len();
        let mut prior = vec![0.0; l];
        for (k, &w) in ant.phi.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (acc, g) in prior.iter_mut().zip(gamma_mean.row(k)) {
                *acc += w * g;
            }
        }
        for j in 0..l {
            let q = ant.q[j];
            let qv = floor_var(q.variance);
            let nu = floor_var(1.0 / (prior[j] + 1.0 / qv));
            ant.alpha[j] = GaussianBelief::new(q.mean * (nu / qv), nu);
        }
    });
}

fn second_moments(state: &EstimatorState) -> Vec<Vec<f64>> {
    par::map_slice(&state.antennas, |a| a.alpha.iter().map(GaussianBelief::second_moment).collect())
}

/// b(γ̃_l^(k)): shape Σ_m φ_mk + c, rate Σ_m φ_mk (|α̂|² + ν_α) + d, and the
/// cached ⟨γ̃⟩ = shape/rate and ⟨log γ̃⟩ = Ψ(shape) − log(rate).
pub fn update_gamma(state: &mut EstimatorState) {
    let energy = second_moments(state);
    let k = state.n_components();
    let l = state.channel_len();
    let HyperParams { c, d, .. } = state.hyper;
    let antennas = &state.antennas;
    let rows: Vec<Vec<GammaBelief>> = par::map_indices(k, |kk| {
        let mut weight = 0.0;
        let mut rate = vec![0.0; l];
        for (ant, e) in antennas.iter().zip(&energy) {
            let w = ant.phi[kk];
            if w == 0.0 {
                continue;
            }
            weight += w;
            for (r, &ej) in rate.iter_mut().zip(e) {
                *r += w * ej;
            }
        }
        rate.into_iter().map(|r| GammaBelief { shape: weight + c, rate: r + d }).collect()
    });
    for (kk, row) in rows.into_iter().enumerate() {
        let sh = row[0].shape;
        let psi = digamma_unchecked(sh);
        for (j, g) in row.into_iter().enumerate() {
            state.gamma[(kk, j)] = g;
            state.gamma_mean[(kk, j)] = g.shape / g.rate;
            state.gamma_mean_log[(kk, j)] = psi - g.rate.ln();
        }
    }
}

/// Row-wise softmax with max subtraction. A row with no finite entry falls
/// back to uniform.
pub fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        warn!("assignment log-weights are not finite, falling back to uniform");
        let u = 1.0 / row.len() as f64;
        row.iter_mut().for_each(|v| *v = u);
        return;
    }
    let mut total = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    row.iter_mut().for_each(|v| *v /= total);
}

/// Unnormalized assignment log-weights Ê_mk for one antenna.
pub fn assignment_log_weights(state: &EstimatorState, antenna: usize) -> Vec<f64> {
    let prefix = stick_prefix(state);
    let sum_log: Vec<f64> = state.gamma_mean_log.row_iter().map(|r| r.iter().sum()).collect();
    let energy: Vec<f64> =
        state.antennas[antenna].alpha.iter().map(GaussianBelief::second_moment).collect();
    log_weights(state, &prefix, &sum_log, &energy)
}

fn stick_prefix(state: &EstimatorState) -> Vec<f64> {
    let mut before = 0.0;
    state
        .log_pi
        .iter()
        .zip(&state.log_one_minus_pi)
        .map(|(lp, l1m)| {
            let v = lp + before;
            before += l1m;
            v
        })
        .collect()
}

fn log_weights(state: &EstimatorState, prefix: &[f64], sum_log: &[f64], energy: &[f64]) -> Vec<f64> {
    prefix
        .iter()
        .zip(sum_log)
        .zip(state.gamma_mean.row_iter())
        .map(|((pre, sl), gm)| {
            let data: f64 = gm.iter().zip(energy).map(|(g, e)| g * e).sum();
            pre + sl - data
        })
        .collect()
}

/// φ_mk = softmax_k(Ê_mk) with
/// Ê_mk = ⟨log π_k⟩ + Σ_{i<k} ⟨log(1−π_i)⟩ + Σ_l (⟨log γ̃_l^(k)⟩ − ⟨γ̃_l^(k)⟩(|α̂_l|² + ν_α)).
pub fn update_phi(state: &mut EstimatorState) {
    let prefix = stick_prefix(state);
    let sum_log: Vec<f64> = state.gamma_mean_log.row_iter().map(|r| r.iter().sum()).collect();
    let rows: Vec<Vec<f64>> = par::map_indices(state.n_antennas(), |m| {
        let energy: Vec<f64> =
            state.antennas[m].alpha.iter().map(GaussianBelief::second_moment).collect();
        let mut e = log_weights(state, &prefix, &sum_log, &energy);
        softmax_in_place(&mut e);
        e
    });
    for (ant, row) in state.antennas.iter_mut().zip(rows) {
        ant.phi = row;
    }
}

/// b(π_k) = Be(τ¹, τ²) with τ¹ = Σ_m φ_mk + 1 and τ² = Σ_m Σ_{i>k} φ_mi + η̂.
pub fn update_pi(state: &mut EstimatorState) {
    let k = state.n_components();
    let mut col = vec![0.0; k];
    for ant in &state.antennas {
        for (c, v) in col.iter_mut().zip(&ant.phi) {
            *c += v;
        }
    }
    let mut tail = 0.0;
    for kk in (0..k).rev() {
        let stats = BetaStatistics { tau1: col[kk] + 1.0, tau2: tail + state.eta_hat };
        tail += col[kk];
        state.pi_stats[kk] = stats;
        state.log_pi[kk] = stats.mean_log();
        state.log_one_minus_pi[kk] = stats.mean_log_complement();
    }
}

/// η̂ = (K + e − 1) / (h − Σ_k ⟨log(1−π_k)⟩).
pub fn update_eta(state: &mut EstimatorState) -> Result<()> {
    let k = state.n_components() as f64;
    let denom = state.hyper.h_eta - state.log_one_minus_pi.iter().sum::<f64>();
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!("eta update denominator {denom} is not positive")));
    }
    state.eta_hat = (k + state.hyper.e - 1.0) / denom;
    Ok(())
}

/// ŝ_n = (θ̂_n − p̂_n) / (ν_θ + ν_p), relaxed by the damping factor.
pub fn update_s(state: &mut EstimatorState) {
    let beta = state.damping;
    par::for_each_mut(&mut state.antennas, |_, ant| {
        for ((s, t), p) in ant.s.iter_mut().zip(&ant.theta).zip(&ant.p) {
            let fresh = (t.mean - p.mean) / floor_var(t.variance + p.variance);
            *s = if beta == 1.0 { fresh } else { fresh * beta + *s * (1.0 - beta) };
        }
    });
}

/// Observation message θ̂ = y/x, ν_θ = 1/(λ̂|x|²), then b(h) ∝ θ-message × p-message.
pub fn update_theta_and_h(state: &mut EstimatorState, observation: &Observation) {
    let lambda = state.lambda_hat;
    let pilots = &observation.pilots;
    par::for_each_mut(&mut state.antennas, |m, ant| {
        let y = observation.received.row(m);
        for n in 0..y.len() {
            let xn = pilots[n];
            let theta = GaussianBelief::new(y[n] / xn, 1.0 / (lambda * xn.norm_sqr()));
            ant.theta[n] = theta;
            ant.h[n] = combine_floored(theta, ant.p[n]);
        }
    });
}

/// λ̂ = NM / Σ_{n,m} (|y − x ĥ|² + |x|² ν_h), clamped to [`LAMBDA_MAX`].
pub fn update_lambda(state: &mut EstimatorState, observation: &Observation) {
    let pilots = &observation.pilots;
    let per_antenna: Vec<f64> = par::map_indices(state.n_antennas(), |m| {
        let y = observation.received.row(m);
        state.antennas[m]
            .h
            .iter()
            .zip(y)
            .zip(pilots)
            .map(|((h, &yn), &xn)| (yn - xn * h.mean).norm_sqr() + xn.norm_sqr() * h.variance)
            .sum()
    });
    let total: f64 = per_antenna.iter().sum();
    let count = (observation.n_pilots() * state.n_antennas()) as f64;
    state.lambda_hat = if total > 0.0 {
        (count / total).min(LAMBDA_MAX)
    } else {
        warn!("zero residual energy, clamping noise precision to {LAMBDA_MAX}");
        LAMBDA_MAX
    };
}

/// GAMP output-side message: ν_p = Σ_l |F_nl|² ν_α and p̂ = Σ_l F_nl α̂ − ŝ ν_p.
pub fn update_p(state: &mut EstimatorState, observation: &Observation) {
    let dict = &observation.dictionary;
    par::for_each_mut(&mut state.antennas, |_, ant| {
        for (n, row) in dict.row_iter().enumerate() {
            let mut var = 0.0;
            let mut mean = zero();
            for (f, a) in row.iter().zip(&ant.alpha) {
                var += f.norm_sqr() * a.variance;
                mean += f * a.mean;
            }
            ant.p[n] = GaussianBelief::new(mean - ant.s[n] * var, floor_var(var));
        }
    });
}

/// Runs iteration `t` (1-based) of the schedule.
///
/// ŝ is refreshed right after the p-message so that the next `update_q`
/// sees the residual of the current prediction. The schedule's own ŝ line
/// would recompute that same value (θ and p are unchanged in between), so
/// it only runs on the first iteration, where ŝ still holds its initializer.
pub fn iterate(
    state: &mut EstimatorState,
    observation: &Observation,
    learn_assignment: bool,
    t: usize,
) -> Result<()> {
    let previous: Option<Vec<Vec<Complex64>>> = (state.damping < 1.0).then(|| {
        state.antennas.iter().map(|a| a.alpha.iter().map(|b| b.mean).collect()).collect()
    });
    update_q(state, observation);
    update_alpha(state);
    update_gamma(state);
    if learn_assignment {
        update_phi(state);
        update_pi(state);
        update_eta(state)?;
        update_pi(state);
        update_phi(state);
    }
    update_alpha(state);
    if let Some(prev) = previous {
        let beta = state.damping;
        for (ant, old) in state.antennas.iter_mut().zip(prev) {
            for (a, o) in ant.alpha.iter_mut().zip(old) {
                a.mean = a.mean * beta + o * (1.0 - beta);
            }
        }
    }
    if t == 1 {
        update_s(state);
    }
    update_theta_and_h(state, observation);
    update_lambda(state, observation);
    update_p(state, observation);
    update_s(state);
    Ok(())
}

/// Runs the estimator, calling `observer(t, &state)` after every iteration
/// `t = 1..=max_iters`.
pub fn run_observed<F>(
    options: &EstimatorOptions,
    observation: &Observation,
    mut observer: F,
) -> Result<EstimateReport>
where
    F: FnMut(usize, &EstimatorState),
{
    if let Assignment::Frozen(phi) = &options.assignment {
        if phi.rows() != observation.n_antennas() {
            return Err(Error::Config(format!(
                "frozen assignment has {} rows for {} antennas",
                phi.rows(),
                observation.n_antennas()
            )));
        }
    }
    if options.assignment.n_components() == 0 {
        return Err(Error::Config("at least one mixture component is required".into()));
    }
    if observation.pilots.iter().any(|x| x.norm_sqr() == 0.0) {
        return Err(Error::Config("pilot symbols must be non-zero".into()));
    }
    let learn = matches!(options.assignment, Assignment::Learned { .. });
    let mut state = initialize_with(options, observation);
    let warmup = if learn { options.warmup } else { 0 };
    if warmup > 0 {
        let k = state.n_components();
        for (ant, c) in state.antennas.iter_mut().zip(anchor_components(observation, k)) {
            ant.phi.iter_mut().for_each(|v| *v = 0.0);
            ant.phi[c] = 1.0;
        }
    }
    for t in 1..=options.max_iters {
        iterate(&mut state, observation, learn && t > warmup, t)?;
        if let Some(quantity) = state.first_non_finite() {
            return Err(Error::NonFinite { quantity, iteration: t });
        }
        observer(t, &state);
    }
    Ok(state.report(options.max_iters))
}

pub fn run_with(options: &EstimatorOptions, observation: &Observation) -> Result<EstimateReport> {
    run_observed(options, observation, |_, _| {})
}

/// Dirichlet-process estimator with the settings in `config`.
pub fn run(config: &SystemConfig, observation: &Observation) -> Result<EstimateReport> {
    run_with(&EstimatorOptions::dirichlet(config), observation)
}
