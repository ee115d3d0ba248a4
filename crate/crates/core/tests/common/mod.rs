//! Checks shared by the property tests and the acceptance runner. Each check
//! returns `Err(description)` on the first violation.

#![allow(dead_code)]

use dpsbl::estimator::{
    initialize_with, run_observed, softmax_in_place, update_alpha, update_p, update_q, update_s,
    update_theta_and_h, Assignment, EstimatorOptions, EstimatorState,
};
use dpsbl::numeric::{digamma, gaussian_combine, GaussianBelief};
use dpsbl::sim::{dictionary, generate_cluster_map, simulate, Observation};
use dpsbl::{Complex64, HyperParams, SystemConfig};
use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let sd = (0.5 * variance).sqrt();
    Complex64::new(rng.sample::<f64, _>(StandardNormal) * sd, rng.sample::<f64, _>(StandardNormal) * sd)
}

/// Small random scenario: up to 3×3 antennas, L ≤ 8, N ≤ 8, a few iterations.
pub fn small_config(seed: u64) -> SystemConfig {
    let mut r = rng(seed);
    let channel_len = r.random_range(2..=8);
    SystemConfig {
        rows: r.random_range(1..=3),
        cols: r.random_range(1..=3),
        n_total: 64,
        channel_len,
        n_nonzero: r.random_range(1..=channel_len.min(3)),
        n_pilots: r.random_range(2..=8),
        p: r.random_range(0.0..=1.0),
        snr_db: r.random_range(-5.0..25.0),
        max_iters: r.random_range(1..=6),
        warmup_iters: r.random_range(0..=3),
        ..Default::default()
    }
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

/// Row sums of φ and positivity of every variance, shape and rate after each
/// iteration of the Dirichlet estimator on a random small scenario.
pub fn check_state_invariants(seed: u64) -> Result<(), String> {
    let cfg = small_config(seed);
    let sc = simulate(&cfg, seed).map_err(|e| e.to_string())?;
    let mut violation = None;
    run_observed(&EstimatorOptions::dirichlet(&cfg), &sc.observation, |t, st| {
        if violation.is_none() {
            violation = state_violation(st).map(|v| format!("iteration {t}: {v}"));
        }
    })
    .map_err(|e| e.to_string())?;
    violation.map_or(Ok(()), Err)
}

pub fn state_violation(st: &EstimatorState) -> Option<String> {
    for (m, a) in st.antennas.iter().enumerate() {
        let sum: f64 = a.phi.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || a.phi.iter().any(|&v| !(v >= 0.0)) {
            return Some(format!("phi row {m} sums to {sum}"));
        }
        let vars = a.alpha.iter().chain(&a.q).chain(&a.p).chain(&a.theta).chain(&a.h);
        if let Some(b) = vars.into_iter().find(|b| !positive(b.variance)) {
            return Some(format!("antenna {m} has variance {}", b.variance));
        }
    }
    if let Some(g) = st.gamma.as_slice().iter().find(|g| !positive(g.shape) || !positive(g.rate)) {
        return Some(format!("gamma belief ({}, {})", g.shape, g.rate));
    }
    if let Some(b) = st.pi_stats.iter().find(|b| !positive(b.tau1) || !positive(b.tau2)) {
        return Some(format!("beta belief ({}, {})", b.tau1, b.tau2));
    }
    if !positive(st.lambda_hat) || !positive(st.eta_hat) {
        return Some(format!("lambda {} eta {}", st.lambda_hat, st.eta_hat));
    }
    None
}

/// Adding a constant to every log-weight leaves the softmax unchanged.
pub fn check_softmax_shift(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let k = r.random_range(1..=50);
    let scale = 10f64.powf(r.random_range(-1.0..3.0));
    let base: Vec<f64> = (0..k).map(|_| r.random_range(-1.0..1.0) * scale).collect();
    let shift = r.random_range(-1e3..1e3);
    let mut a = base.clone();
    let mut b: Vec<f64> = base.iter().map(|v| v + shift).collect();
    softmax_in_place(&mut a);
    softmax_in_place(&mut b);
    for (x, y) in a.iter().zip(&b) {
        if (x - y).abs() > 1e-12 {
            return Err(format!("shift {shift}: {x} vs {y}"));
        }
    }
    Ok(())
}

/// Permuting the antennas of an observation permutes every per-antenna output.
pub fn check_permutation_equivariance(seed: u64) -> Result<(), String> {
    let cfg = small_config(seed);
    let sc = simulate(&cfg, seed).map_err(|e| e.to_string())?;
    let m = cfg.n_antennas();
    let mut r = rng(seed ^ 0xA5A5);
    let perm = index::sample(&mut r, m, m).into_vec();
    let obs = &sc.observation;
    let permuted = Observation {
        received: dpsbl::matrix::Matrix::from_rows(
            perm.iter().map(|&i| obs.received.row(i).to_vec()).collect(),
        )
        .unwrap(),
        ..obs.clone()
    };
    let opts = EstimatorOptions::dirichlet(&cfg);
    let a = dpsbl::estimator::run_with(&opts, obs).map_err(|e| e.to_string())?;
    let b = dpsbl::estimator::run_with(&opts, &permuted).map_err(|e| e.to_string())?;
    let scale = a.alpha_hat.as_slice().iter().map(|v| v.norm()).fold(1e-300, f64::max);
    for (new, &old) in perm.iter().enumerate() {
        for (x, y) in a.alpha_hat.row(old).iter().zip(b.alpha_hat.row(new)) {
            if (x - y).norm() > 1e-8 * scale {
                return Err(format!("antenna {old}->{new}: {x} vs {y}"));
            }
        }
        for (x, y) in a.phi.row(old).iter().zip(b.phi.row(new)) {
            if (x - y).abs() > 1e-8 {
                return Err(format!("phi of antenna {old}->{new}: {x} vs {y}"));
            }
        }
    }
    Ok(())
}

/// Ψ(x + 1) = Ψ(x) + 1/x at a random x spanning (1e-3, 1e3).
pub fn check_digamma_recurrence(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let x = 10f64.powf(r.random_range(-3.0..3.0));
    let lhs = digamma(x + 1.0).map_err(|e| e.to_string())?;
    let rhs = digamma(x).map_err(|e| e.to_string())? + 1.0 / x;
    let tol = 1e-10 * (1.0 + rhs.abs());
    if (lhs - rhs).abs() > tol {
        return Err(format!("x = {x}: {lhs} vs {rhs}"));
    }
    Ok(())
}

fn random_belief(r: &mut ChaCha8Rng) -> GaussianBelief {
    GaussianBelief {
        mean: Complex64::new(r.random_range(-10.0..10.0), r.random_range(-10.0..10.0)),
        variance: 10f64.powf(r.random_range(-3.0..3.0)),
    }
}

/// Message products commute and associate.
pub fn check_combine(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (a, b, c) = (random_belief(&mut r), random_belief(&mut r), random_belief(&mut r));
    let comb = |x, y| gaussian_combine(x, y).map_err(|e| e.to_string());
    let close = |x: GaussianBelief, y: GaussianBelief, what: &str| {
        let tol = 1e-9 * (1.0 + x.mean.norm());
        if (x.mean - y.mean).norm() > tol || (x.variance - y.variance).abs() > 1e-12 * x.variance {
            Err(format!("{what}: {x:?} vs {y:?}"))
        } else {
            Ok(())
        }
    };
    close(comb(a, b)?, comb(b, a)?, "commutativity")?;
    close(comb(comb(a, b)?, c)?, comb(a, comb(b, c)?)?, "associativity")
}

/// Every generated map is a partition with labels in first-seen order.
pub fn check_cluster_partition(seed: u64) -> Result<(), String> {
    let mut r = rng(seed);
    let (rows, cols) = (r.random_range(1..=12), r.random_range(1..=12));
    let p = r.random_range(0.0..=1.0);
    let map = generate_cluster_map(rows, cols, p, &mut r).map_err(|e| e.to_string())?;
    if !map.is_valid_partition() || map.assignment.len() != rows * cols {
        return Err(format!("{rows}x{cols} at p={p}: {map:?}"));
    }
    let mut seen = 0;
    for &k in &map.assignment {
        if k > seen {
            return Err(format!("label {k} appears before {seen}"));
        }
        if k == seen {
            seen += 1;
        }
    }
    if seen != map.n_clusters {
        return Err(format!("{} clusters claimed, {seen} used", map.n_clusters));
    }
    Ok(())
}

/// The stored pilot-subcarrier responses equal a direct DFT of the taps, and
/// antennas of one cluster share a support.
pub fn check_frequency_response(seed: u64) -> Result<(), String> {
    let cfg = small_config(seed);
    let sc = simulate(&cfg, seed).map_err(|e| e.to_string())?;
    let re = &sc.realization;
    let n_total = cfg.n_total as f64;
    for m in 0..cfg.n_antennas() {
        let taps = re.taps.row(m);
        for (n, &k) in sc.observation.pilot_indices.iter().enumerate() {
            let direct: Complex64 = taps
                .iter()
                .enumerate()
                .map(|(l, a)| a * Complex64::from_polar(1.0, -std::f64::consts::TAU * (k * l) as f64 / n_total))
                .sum();
            if (direct - re.freq[(m, n)]).norm() > 1e-9 {
                return Err(format!("antenna {m} subcarrier {k}: {direct} vs {}", re.freq[(m, n)]));
            }
        }
        let support = &re.supports[re.cluster_map.assignment[m]];
        let nonzero: Vec<usize> = (0..cfg.channel_len).filter(|&l| taps[l].norm() > 0.0).collect();
        if nonzero != *support {
            return Err(format!("antenna {m}: taps at {nonzero:?}, support {support:?}"));
        }
    }
    Ok(())
}

/// Relative error between the GAMP fixed point with γ and λ pinned and the
/// exact Gaussian posterior mean, for one random single-antenna instance with
/// L = N = 8 drawn from rows of a 32-point DFT.
pub fn gamp_oracle_relative_error(seed: u64) -> f64 {
    let (l, n, n_total) = (8usize, 8usize, 32usize);
    let mut r = rng(seed);
    let mut idx = index::sample(&mut r, n_total, n).into_vec();
    idx.sort_unstable();
    let dict = dictionary(&idx, l, n_total);
    let gamma: Vec<f64> = (0..l).map(|_| 10f64.powf(r.random_range(-0.5..1.0))).collect();
    let lambda = 10f64.powf(r.random_range(0.0..2.0));
    let alpha: Vec<Complex64> = gamma.iter().map(|g| complex_normal(&mut r, 1.0 / g)).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pilots: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(if r.random_bool(0.5) { s } else { -s }, if r.random_bool(0.5) { s } else { -s }))
        .collect();
    let h = dict.mul_vec(&alpha);
    let y: Vec<Complex64> =
        h.iter().zip(&pilots).map(|(hn, xn)| xn * hn + complex_normal(&mut r, 1.0 / lambda)).collect();
    let obs = Observation {
        pilots: pilots.clone(),
        pilot_indices: idx,
        dictionary: dict.clone(),
        received: dpsbl::matrix::Matrix::from_rows(vec![y.clone()]).unwrap(),
        true_lambda: lambda,
    };
    let opts = EstimatorOptions {
        max_iters: 200,
        hyper: HyperParams::default(),
        damping: 1.0,
        assignment: Assignment::one_hot(&[0], 1),
        warmup: 0,
    };
    let mut st = initialize_with(&opts, &obs);
    st.lambda_hat = lambda;
    for (j, &g) in gamma.iter().enumerate() {
        st.gamma_mean[(0, j)] = g;
    }
    update_theta_and_h(&mut st, &obs);
    let mut prev = st.alpha_means();
    for t in 1..=200 {
        update_q(&mut st, &obs);
        update_alpha(&mut st);
        if t == 1 {
            update_s(&mut st);
        }
        update_theta_and_h(&mut st, &obs);
        update_p(&mut st, &obs);
        update_s(&mut st);
        let cur = st.alpha_means();
        let change: f64 =
            cur.as_slice().iter().zip(prev.as_slice()).map(|(a, b)| (a - b).norm_sqr()).sum();
        prev = cur;
        if change.sqrt() < 1e-13 {
            break;
        }
    }

    // exact: (λ FᴴF + diag γ) α = λ Fᴴ θ with θ = y / x
    let f = DMatrix::from_fn(n, l, |i, j| dict[(i, j)]);
    let theta = DVector::from_iterator(n, y.iter().zip(&pilots).map(|(yn, xn)| yn / xn));
    let lam = Complex64::new(lambda, 0.0);
    let mut a = f.adjoint() * &f * lam;
    for (j, &g) in gamma.iter().enumerate() {
        a[(j, j)] += Complex64::new(g, 0.0);
    }
    let b = f.adjoint() * theta * lam;
    let exact = a.lu().solve(&b).expect("posterior precision is positive definite");
    let num: f64 = prev.row(0).iter().zip(exact.iter()).map(|(x, e)| (x - e).norm_sqr()).sum();
    let den: f64 = exact.iter().map(|e| e.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Paired differences `a − b`: mean and one-sample t statistic.
pub fn paired_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, mean / (var / n).sqrt())
}
