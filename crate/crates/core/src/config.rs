//! System configuration and the `key = value` config-file format.

use std::path::Path;

use crate::error::{Error, Result};

/// Gamma hyper-priors: λ ~ Ga(a, b), γ̃ ~ Ga(c, d), η ~ Ga(e, h_eta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub h_eta: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self { a: 1e-4, b: 1e-4, c: 1e-4, d: 1e-4, e: 1.0, h_eta: 1e-2 }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("a", self.a),
            ("b", self.b),
            ("c", self.c),
            ("d", self.d),
            ("e", self.e),
            ("h_eta", self.h_eta),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("hyper-parameter {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Antenna grid rows.
    pub rows: usize,
    /// Antenna grid columns.
    pub cols: usize,
    /// Total OFDM subcarriers.
    pub n_total: usize,
    /// Channel taps L.
    pub channel_len: usize,
    /// Non-zero taps per channel.
    pub n_nonzero: usize,
    /// Evenly spaced pilot subcarriers N.
    pub n_pilots: usize,
    /// Probability an antenna shares support with each earlier neighbor.
    pub p: f64,
    pub snr_db: f64,
    pub max_iters: usize,
    /// Truncation level K of the stick-breaking prior; `None` means K = M.
    pub truncation: Option<usize>,
    pub hyper: HyperParams,
    /// Relaxation factor on ŝ and α̂; 1.0 disables damping.
    pub damping: f64,
    /// Iterations the learned-assignment estimator runs with each antenna
    /// pinned to its own component before φ is released; 0 starts from the
    /// uniform φ directly.
    pub warmup_iters: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            rows: 10,
            cols: 10,
            n_total: 512,
            channel_len: 64,
            n_nonzero: 8,
            n_pilots: 28,
            p: 0.8,
            snr_db: 10.0,
            max_iters: 20,
            truncation: None,
            hyper: HyperParams::default(),
            damping: 1.0,
            warmup_iters: 12,
            seed: 0,
        }
    }
}

impl SystemConfig {
    /// Number of receive antennas M.
    pub fn n_antennas(&self) -> usize {
        self.rows * self.cols
    }

    pub fn truncation_level(&self) -> usize {
        self.truncation.unwrap_or_else(|| self.n_antennas())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.rows == 0 || self.cols == 0 {
            return fail(format!("antenna grid {}x{} is empty", self.rows, self.cols));
        }
        if self.n_nonzero > self.channel_len {
            return fail(format!(
                "n_nonzero {} exceeds channel_len {}",
                self.n_nonzero, self.channel_len
            ));
        }
        if self.channel_len == 0 || self.channel_len > self.n_total {
            return fail(format!("channel_len {} must be in [1, n_total]", self.channel_len));
        }
        if self.n_pilots == 0 || self.n_pilots > self.n_total {
            return fail(format!("n_pilots {} must be in [1, n_total]", self.n_pilots));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return fail(format!("p = {} is not a probability", self.p));
        }
        if self.snr_db.is_nan() {
            return fail("snr_db is NaN".into());
        }
        if self.max_iters == 0 {
            return fail("max_iters must be positive".into());
        }
        if self.truncation == Some(0) {
            return fail("truncation K must be at least 1".into());
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return fail(format!("damping {} must be in (0, 1]", self.damping));
        }
        self.hyper.validate()
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
        }
        match key {
            "rows" => self.rows = num(key, value)?,
            "cols" => self.cols = num(key, value)?,
            "n_total" => self.n_total = num(key, value)?,
            "channel_len" | "L" => self.channel_len = num(key, value)?,
            "n_nonzero" => self.n_nonzero = num(key, value)?,
            "n_pilots" | "N" => self.n_pilots = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "snr_db" => self.snr_db = num(key, value)?,
            "max_iters" | "T" => self.max_iters = num(key, value)?,
            "truncation" | "K" => {
                self.truncation = match value {
                    "auto" | "M" => None,
                    v => Some(num(key, v)?),
                }
            }
            "damping" => self.damping = num(key, value)?,
            "warmup_iters" | "warmup" => self.warmup_iters = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "a" => self.hyper.a = num(key, value)?,
            "b" => self.hyper.b = num(key, value)?,
            "c" => self.hyper.c = num(key, value)?,
            "d" => self.hyper.d = num(key, value)?,
            "e" => self.hyper.e = num(key, value)?,
            "h_eta" => self.hyper.h_eta = num(key, value)?,
            _ => return Err(Error::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
/// Returns the pairs in file order so callers can route unknown keys.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn load_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    parse_key_values(&text)
}
