//! Special functions and the belief primitives shared by every estimator.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest variance allowed before any precision-weighted inversion.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[inline]
pub(crate) fn floor_var(v: f64) -> f64 {
    if v < VARIANCE_FLOOR {
        VARIANCE_FLOOR
    } else {
        v
    }
}

/// Digamma function Ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Shifts the argument upward with Ψ(x) = Ψ(x + 1) − 1/x until x ≥ 6, then
/// applies the asymptotic expansion. Absolute error is below 1e-10 over the
/// positive reals that matter here.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("digamma requires a finite x > 0, got {x}")));
    }
    Ok(digamma_unchecked(x))
}

/// Digamma without the domain check, for the estimator hot loops where
/// arguments are positive by construction.
#[inline]
pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 6.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli-number series B_2k / (2k x^2k), k = 1..7.
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 * inv - series
}

/// Circularly-symmetric complex Gaussian belief CN(mean, variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBelief {
    pub mean: Complex64,
    pub variance: f64,
}

impl GaussianBelief {
    pub const fn new(mean: Complex64, variance: f64) -> Self {
        Self { mean, variance }
    }

    pub fn real(mean: f64, variance: f64) -> Self {
        Self::new(Complex64::new(mean, 0.0), variance)
    }

    /// Second moment E|x|² = |mean|² + variance.
    #[inline]
    pub fn second_moment(&self) -> f64 {
        self.mean.norm_sqr() + self.variance
    }

    pub fn is_finite(&self) -> bool {
        self.mean.re.is_finite() && self.mean.im.is_finite() && self.variance.is_finite()
    }
}

/// Product of two Gaussian messages, renormalized.
///
/// Both variances must be strictly positive; an infinite variance acts as a
/// flat message and returns the other operand.
pub fn gaussian_combine(a: GaussianBelief, b: GaussianBelief) -> Result<GaussianBelief> {
    for v in [a.variance, b.variance] {
        if v <= 0.0 || v.is_nan() {
            return Err(Error::Degenerate(format!(
                "gaussian_combine needs positive variances, got {v}"
            )));
        }
    }
    Ok(combine_floored(a, b))
}

#[inline]
pub(crate) fn combine_floored(a: GaussianBelief, b: GaussianBelief) -> GaussianBelief {
    let pa = 1.0 / floor_var(a.variance);
    let pb = 1.0 / floor_var(b.variance);
    let variance = floor_var(1.0 / (pa + pb));
    let mean = (a.mean * pa + b.mean * pb) * variance;
    GaussianBelief { mean, variance }
}

/// Gamma belief with shape/rate parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaBelief {
    pub shape: f64,
    pub rate: f64,
}

impl GammaBelief {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0 && shape.is_finite() && rate.is_finite()) {
            return Err(Error::Domain(format!(
                "gamma belief needs positive finite shape and rate, got ({shape}, {rate})"
            )));
        }
        Ok(Self { shape, rate })
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn variance(&self) -> f64 {
        self.shape / (self.rate * self.rate)
    }

    /// E[ln x] = Ψ(shape) − ln(rate).
    pub fn mean_log(&self) -> f64 {
        digamma_unchecked(self.shape) - self.rate.ln()
    }
}

/// Beta(tau1, tau2) belief of one stick-breaking fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaStatistics {
    pub tau1: f64,
    pub tau2: f64,
}

impl BetaStatistics {
    /// E[ln π].
    pub fn mean_log(&self) -> f64 {
        digamma_unchecked(self.tau1) - digamma_unchecked(self.tau1 + self.tau2)
    }

    /// E[ln(1 − π)].
    pub fn mean_log_complement(&self) -> f64 {
        digamma_unchecked(self.tau2) - digamma_unchecked(self.tau1 + self.tau2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_reference_values() {
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-10);
        assert_abs_diff_eq!(
            digamma(0.5).unwrap(),
            -EULER_GAMMA - 2.0 * std::f64::consts::LN_2,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(digamma(3.0).unwrap() - digamma(2.0).unwrap(), 0.5, epsilon = 1e-12);
        // Ψ(n) = H_{n-1} − γ.
        let h9: f64 = (1..10).map(|i| 1.0 / i as f64).sum();
        assert_abs_diff_eq!(digamma(10.0).unwrap(), h9 - EULER_GAMMA, epsilon = 1e-10);
        let h99: f64 = (1..100).map(|i| 1.0 / i as f64).sum();
        assert_abs_diff_eq!(digamma(100.0).unwrap(), h99 - EULER_GAMMA, epsilon = 1e-10);
    }

    #[test]
    fn digamma_matches_ln_gamma_derivative() {
        // Central difference of ln Γ through the Stirling series with recurrence,
        // an independent route from the digamma series.
        fn ln_gamma(mut x: f64) -> f64 {
            let mut acc = 0.0;
            while x < 15.0 {
                acc -= x.ln();
                x += 1.0;
            }
            let inv = 1.0 / x;
            let inv2 = inv * inv;
            acc + (x - 0.5) * x.ln() - x
                + 0.5 * (2.0 * std::f64::consts::PI).ln()
                + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
        }
        for &x in &[0.3, 0.9, 2.5, 7.0, 40.0] {
            let h = 1e-5;
            let fd = (ln_gamma(x + h) - ln_gamma(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(digamma(x).unwrap(), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn digamma_rejects_bad_input() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
        assert!(digamma(f64::NAN).is_err());
        assert!(digamma(f64::INFINITY).is_err());
    }

    #[test]
    fn combine_examples() {
        let one = GaussianBelief::real(1.0, 1.0);
        let c = gaussian_combine(one, one).unwrap();
        assert_abs_diff_eq!(c.mean.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.variance, 0.5, epsilon = 1e-15);

        let flat = GaussianBelief::real(0.0, 1e12);
        let c = gaussian_combine(flat, GaussianBelief::real(3.0, 2.0)).unwrap();
        assert_abs_diff_eq!(c.mean.re, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.variance, 2.0, epsilon = 1e-9);

        let c = gaussian_combine(GaussianBelief::real(2.0, 1.0), GaussianBelief::real(0.0, 1.0))
            .unwrap();
        assert_abs_diff_eq!(c.mean.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.variance, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn combine_rejects_zero_variance() {
        let z = GaussianBelief::real(1.0, 0.0);
        assert!(matches!(gaussian_combine(z, z), Err(Error::Degenerate(_))));
    }

    #[test]
    fn gamma_moments() {
        let g = GammaBelief::new(3.0, 2.0).unwrap();
        assert_abs_diff_eq!(g.mean(), 1.5);
        assert_abs_diff_eq!(g.variance(), 0.75);
        assert!(GammaBelief::new(0.0, 1.0).is_err());
        let unit = GammaBelief::new(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(unit.mean_log(), -EULER_GAMMA, epsilon = 1e-10);
    }

    #[test]
    fn beta_log_expectations() {
        let b = BetaStatistics { tau1: 1.0, tau2: 1.0 };
        assert_abs_diff_eq!(b.mean_log(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.mean_log_complement(), -1.0, epsilon = 1e-12);
        let b = BetaStatistics { tau1: 3.0, tau2: 1.0 };
        assert_abs_diff_eq!(b.mean_log(), -1.0 / 3.0, epsilon = 1e-12);
    }
}
