//! Empirical invariant densities and CNV voltage time series.

use rand::Rng;

use crate::error::{Error, Result};
use crate::leo::{Interval, IntervalList};
use crate::maps::{IntervalMap, MapSpec};
use crate::rng;
use crate::transitivity::{bin_index, generate_orbit, Orbit};

/// Defaults for density estimates: a longer orbit and a longer transient
/// than the transitivity test uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityConfig {
    pub iterations: usize,
    pub transient: usize,
    pub bins: usize,
    pub seed: u64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        Self { iterations: 1_000_000, transient: 1000, bins: 1000, seed: 0 }
    }
}

/// Normalized histogram of an orbit. `density[i]` is probability per unit
/// length over `[bin_edges[i], bin_edges[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub bin_edges: Vec<f64>,
    pub density: Vec<f64>,
    /// Maximal runs of nonempty bins, as closed intervals.
    pub support: IntervalList,
}

impl DensityEstimate {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bin_centers(&self) -> impl Iterator<Item = f64> + '_ {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1]))
    }

    /// `Σ density · width`; one up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.bin_edges.windows(2).zip(&self.density).map(|(w, d)| d * (w[1] - w[0])).sum()
    }

    pub fn support_measure(&self) -> f64 {
        self.support.measure()
    }

    fn from_counts(counts: &[u64], lo: f64, hi: f64) -> Self {
        let bins = counts.len();
        let width = (hi - lo) / bins as f64;
        let mut bin_edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
        bin_edges[bins] = hi;
        let total: u64 = counts.iter().sum();
        let density = counts
            .iter()
            .zip(bin_edges.windows(2))
            .map(|(&c, w)| c as f64 / total as f64 / (w[1] - w[0]))
            .collect();

        let mut support = Vec::new();
        let mut run_start: Option<usize> = None;
        for (i, &c) in counts.iter().enumerate() {
            match (c > 0, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(s)) => {
                    support.push(Interval::new(bin_edges[s], bin_edges[i]));
                    run_start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = run_start {
            support.push(Interval::new(bin_edges[s], bin_edges[bins]));
        }
        Self { bin_edges, density, support: IntervalList::new(support) }
    }
}

/// Histogram of a long orbit from a seeded uniform start in `[lo, hi)`.
pub fn empirical_density<M: IntervalMap + ?Sized>(
    map: &M,
    lo: f64,
    hi: f64,
    cfg: &DensityConfig,
) -> Result<DensityEstimate> {
    let mut rng = rng::stream(cfg.seed);
    let x0 = rng.random_range(lo..hi);
    density_from(map, lo, hi, x0, cfg)
}

/// Histogram of the orbit of a given starting point.
pub fn density_from<M: IntervalMap + ?Sized>(
    map: &M,
    lo: f64,
    hi: f64,
    x0: f64,
    cfg: &DensityConfig,
) -> Result<DensityEstimate> {
    if cfg.bins == 0 || cfg.iterations == 0 {
        return Err(Error::InvalidConfig("bins and iterations must be positive".into()));
    }
    if cfg.transient >= cfg.iterations {
        return Err(Error::InvalidConfig(format!(
            "transient ({}) must be smaller than iterations ({})",
            cfg.transient, cfg.iterations
        )));
    }
    if !(lo < hi) {
        return Err(Error::InvalidConfig(format!("empty domain [{lo}, {hi})")));
    }
    if !(x0 >= lo && x0 < hi) {
        return Err(Error::OutOfDomain { x: x0, lo, hi });
    }
    let mut counts = vec![0u64; cfg.bins];
    let mut x = x0;
    for i in 0..cfg.iterations {
        if i > 0 {
            x = map.eval(x);
        }
        if i >= cfg.transient {
            counts[bin_index(x, lo, hi, cfg.bins)] += 1;
        }
    }
    Ok(DensityEstimate::from_counts(&counts, lo, hi))
}

/// Voltage trace of a CNV map: an orbit of length `n` from `x0` with the
/// first `transient` steps removed.
pub fn voltage_time_series(map: &MapSpec, x0: f64, n: usize, transient: usize) -> Result<Orbit> {
    let cnv = map
        .as_cnv()
        .ok_or_else(|| Error::InvalidParameter("voltage time series needs a CNV map".into()))?;
    if !cnv.check_invariant_conditions(map.domain_lo, map.domain_hi) {
        return Err(Error::InvalidParameter(format!(
            "[{}, {}) is not a valid invariant interval",
            map.domain_lo, map.domain_hi
        )));
    }
    if transient >= n {
        return Err(Error::InvalidConfig(format!("transient ({transient}) must be smaller than n ({n})")));
    }
    let mut orbit = generate_orbit(map, x0, n)?;
    orbit.samples.drain(..transient);
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{CnvParams, NlCnvParams};
    use approx::assert_abs_diff_eq;

    fn beta(b: f64, a: f64) -> MapSpec {
        MapSpec::beta_transformation(b, a).unwrap()
    }

    fn small() -> DensityConfig {
        DensityConfig { iterations: 200_000, ..Default::default() }
    }

    #[test]
    fn transitive_support_is_whole_domain() {
        let d = empirical_density(&beta(1.2, 0.1), 0.0, 1.0, &small()).unwrap();
        assert_eq!(d.support.len(), 1);
        assert_eq!(d.support.items[0], Interval::new(0.0, 1.0));
        assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn nontransitive_support_is_proper_union() {
        let d = empirical_density(&beta(1.2, 0.4), 0.0, 1.0, &small()).unwrap();
        assert!(d.support.len() > 1);
        assert!(d.support_measure() < 1.0);
        assert_abs_diff_eq!(d.total_mass(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn fixed_point_gives_single_bin() {
        let cfg = DensityConfig { iterations: 1000, transient: 0, bins: 50, seed: 0 };
        let d = density_from(&beta(2.0, 0.0), 0.0, 1.0, 0.0, &cfg).unwrap();
        assert_eq!(d.density.iter().filter(|&&v| v > 0.0).count(), 1);
        assert_abs_diff_eq!(d.density[0], 50.0, epsilon = 1e-12);
        assert_eq!(d.support, IntervalList::from_pairs(&[(0.0, 0.02)]));
    }

    #[test]
    fn config_errors() {
        let m = beta(1.5, 0.1);
        let cfg = DensityConfig { transient: 10, iterations: 10, ..Default::default() };
        assert!(empirical_density(&m, 0.0, 1.0, &cfg).is_err());
        let cfg = DensityConfig { bins: 0, ..small() };
        assert!(empirical_density(&m, 0.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn seeded_runs_repeat() {
        let m = beta(1.37, 0.2);
        let cfg = DensityConfig { iterations: 20_000, seed: 17, ..Default::default() };
        assert_eq!(empirical_density(&m, 0.0, 1.0, &cfg).unwrap(), empirical_density(&m, 0.0, 1.0, &cfg).unwrap());
    }

    fn nl_map(b: f64, c: f64) -> MapSpec {
        let shape = CnvParams::Nl(NlCnvParams::new(1.0, 0.2, 0.4, 0.0, 0.0).unwrap());
        assert!(shape.check_invariant_conditions(b, c));
        MapSpec::cnv(shape.with_endpoints(b, c).unwrap()).unwrap()
    }

    #[test]
    fn time_series_basics() {
        let m = nl_map(0.2, 0.6);
        assert_eq!(voltage_time_series(&m, 0.3, 1, 0).unwrap().samples, vec![0.3]);
        let o = voltage_time_series(&m, 0.3, 100, 10).unwrap();
        assert_eq!(o.len(), 90);
        assert!(o.samples.iter().all(|&x| m.contains(x)));
        assert!(voltage_time_series(&m, 0.7, 10, 0).is_err());
        assert!(voltage_time_series(&m, 0.3, 10, 10).is_err());
        assert!(voltage_time_series(&beta(1.5, 0.1), 0.3, 10, 0).is_err());
    }
}
