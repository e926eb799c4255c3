//! Numerical transitivity: does a random orbit visit every bin of a fine
//! partition of the domain?
//!
//! Each trial draws a uniform starting point, iterates `N` steps, drops the
//! transient and histograms the rest into equal bins. The test passes on the
//! first trial whose histogram has no empty bin.

use rand::Rng;

use crate::error::{Error, Result};
use crate::maps::IntervalMap;
use crate::rng;

/// Knobs of the transitivity test. Defaults: `N = 50000`, 5 trials,
/// transient `k = 200`, 1000 bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitivityConfig {
    pub iterations: usize,
    pub num_trials: usize,
    pub transient: usize,
    pub bins: usize,
    pub seed: u64,
}

impl Default for TransitivityConfig {
    fn default() -> Self {
        Self { iterations: 50_000, num_trials: 5, transient: 200, bins: 1000, seed: 0 }
    }
}

impl TransitivityConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || self.num_trials == 0 || self.bins == 0 {
            return Err(Error::InvalidConfig(
                "iterations, num_trials and bins must all be positive".into(),
            ));
        }
        if self.transient >= self.iterations {
            return Err(Error::InvalidConfig(format!(
                "transient ({}) must be smaller than iterations ({})",
                self.transient, self.iterations
            )));
        }
        Ok(())
    }

    /// Seed of trial `j`.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        rng::mix(self.seed, trial as u64)
    }
}

/// A finite orbit `x0, f(x0), f²(x0), …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub samples: Vec<f64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of `bins` equal bins over `[lo, hi)` that contain a sample.
    pub fn coverage(&self, lo: f64, hi: f64, bins: usize) -> f64 {
        let mut hit = vec![false; bins];
        for &x in &self.samples {
            hit[bin_index(x, lo, hi, bins)] = true;
        }
        hit.iter().filter(|&&h| h).count() as f64 / bins as f64
    }
}

/// Orbit of length `n` starting at `x0`.
pub fn generate_orbit<M: IntervalMap + ?Sized>(map: &M, x0: f64, n: usize) -> Result<Orbit> {
    let (lo, hi) = map.domain();
    if !(x0 >= lo && x0 < hi) {
        return Err(Error::OutOfDomain { x: x0, lo, hi });
    }
    if n == 0 {
        return Err(Error::InvalidConfig("orbit length must be at least 1".into()));
    }
    let mut samples = Vec::with_capacity(n);
    let mut x = x0;
    samples.push(x);
    for _ in 1..n {
        x = map.eval(x);
        samples.push(x);
    }
    Ok(Orbit { samples })
}

/// Bin of `x` among `bins` equal bins of `[lo, hi)`, clamped to the valid range.
#[inline]
pub(crate) fn bin_index(x: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let t = (x - lo) / (hi - lo) * bins as f64;
    if t <= 0.0 {
        // also catches NaN
        0
    } else {
        (t as usize).min(bins - 1)
    }
}

/// The trial that passed, for auditing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub trial: usize,
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitivityOutcome {
    pub passed: bool,
    pub witness: Option<Witness>,
}

/// Runs one trial and returns its starting point and whether all bins were hit.
fn run_trial<M: IntervalMap + ?Sized>(
    map: &M,
    lo: f64,
    hi: f64,
    cfg: &TransitivityConfig,
    trial: usize,
    counts: &mut [u32],
) -> (f64, bool) {
    let mut rng = rng::stream(cfg.trial_seed(trial));
    let x0 = rng.random_range(lo..hi);
    counts.iter_mut().for_each(|c| *c = 0);

    // Samples x[1..=N] in 1-based terms; keeping x[k..] drops the first k-1.
    let skip = cfg.transient.saturating_sub(1);
    let mut x = x0;
    for i in 0..cfg.iterations {
        if i > 0 {
            x = map.eval(x);
        }
        if i >= skip {
            counts[bin_index(x, lo, hi, cfg.bins)] += 1;
        }
    }
    (x0, counts.iter().all(|&c| c > 0))
}

/// Transitivity test with the passing trial reported.
pub fn num_trans_test_witness<M: IntervalMap + ?Sized>(
    map: &M,
    lo: f64,
    hi: f64,
    cfg: &TransitivityConfig,
) -> Result<TransitivityOutcome> {
    cfg.validate()?;
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("empty domain [{lo}, {hi})")));
    }
    let mut counts = vec![0u32; cfg.bins];
    for trial in 0..cfg.num_trials {
        let (x0, covered) = run_trial(map, lo, hi, cfg, trial, &mut counts);
        if covered {
            return Ok(TransitivityOutcome { passed: true, witness: Some(Witness { trial, x0 }) });
        }
    }
    Ok(TransitivityOutcome { passed: false, witness: None })
}

/// Numerical transitivity test of `map` on `[lo, hi)`.
pub fn num_trans_test<M: IntervalMap + ?Sized>(
    map: &M,
    lo: f64,
    hi: f64,
    cfg: &TransitivityConfig,
) -> Result<bool> {
    num_trans_test_witness(map, lo, hi, cfg).map(|o| o.passed)
}
