//! Numerical LEO (locally eventually onto) test.
//!
//! The domain is cut into `m` equal pieces. Each piece is pushed forward by
//! the map as a finite union of intervals: endpoints are mapped branch by
//! branch, an interval straddling the discontinuity splits into a piece
//! ending at the top of the domain and a piece starting at the bottom, and
//! overlapping pieces are merged after every step. A piece passes once its
//! image is the whole domain; the map passes if every piece does.

use std::fmt;

use crate::error::{Error, Result};
use crate::maps::{Branch, IntervalMap};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "malformed interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Distance from `x` to the interval (zero inside).
    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Finite union of closed intervals. After [`merge_intervals`] it is sorted
/// and pairwise separated by more than the merge tolerance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalList {
    pub items: Vec<Interval>,
}

impl IntervalList {
    pub fn new(items: Vec<Interval>) -> Self {
        Self { items }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self { items: pairs.iter().map(|&(a, b)| Interval::new(a, b)).collect() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.items.iter().any(|i| i.contains(x))
    }

    pub fn distance(&self, x: f64) -> f64 {
        self.items.iter().map(|i| i.distance(x)).fold(f64::INFINITY, f64::min)
    }

    /// Total length of the union (assumes the list is merged).
    pub fn measure(&self) -> f64 {
        self.items.iter().map(Interval::len).sum()
    }

    /// Whether the list is one interval spanning `[lo, hi]` up to `tol`.
    pub fn covers(&self, lo: f64, hi: f64, tol: f64) -> bool {
        match self.items.as_slice() {
            [only] => only.lo <= lo + tol && only.hi >= hi - tol,
            _ => false,
        }
    }
}

impl fmt::Display for IntervalList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, iv) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, "]")
    }
}

/// Sorts by left endpoint and fuses intervals whose left end is within
/// `tolerance` of the running right end.
pub fn merge_intervals(list: &IntervalList, tolerance: f64) -> Result<IntervalList> {
    let mut items = list.items.clone();
    merge_in_place(&mut items, tolerance)?;
    Ok(IntervalList { items })
}

fn merge_in_place(items: &mut Vec<Interval>, tolerance: f64) -> Result<()> {
    if items.is_empty() {
        return Err(Error::EmptyIntervalList);
    }
    items.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut write = 0;
    for read in 1..items.len() {
        let current = items[read];
        let last = &mut items[write];
        if current.lo <= last.hi + tolerance {
            last.hi = last.hi.max(current.hi);
        } else {
            write += 1;
            items[write] = current;
        }
    }
    items.truncate(write + 1);
    Ok(())
}

/// LEO test settings. Tolerances are relative to the domain width `hi − lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeoConfig {
    pub subdivisions: usize,
    pub max_image_iterations: usize,
    pub merge_tolerance: f64,
    pub cover_tolerance: f64,
}

impl Default for LeoConfig {
    fn default() -> Self {
        Self { subdivisions: 100, max_image_iterations: 500, merge_tolerance: 1e-12, cover_tolerance: 1e-9 }
    }
}

impl LeoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.subdivisions == 0 || self.max_image_iterations == 0 {
            return Err(Error::InvalidConfig("subdivisions and max_image_iterations must be positive".into()));
        }
        if !(self.merge_tolerance >= 0.0 && self.cover_tolerance >= 0.0) {
            return Err(Error::InvalidConfig("tolerances must be non-negative".into()));
        }
        Ok(())
    }

    /// Hard cap on the number of pieces in an image.
    pub fn max_pieces(&self) -> usize {
        10 * self.subdivisions
    }
}

/// Result of [`image`]: the union of intervals and how many map steps it took.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageResult {
    pub intervals: IntervalList,
    pub iterations: usize,
}

fn check_preconditions(c: f64, x: f64, y: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo < c && c < hi) {
        return Err(Error::InvalidConfig(format!("discontinuity {c} not inside ({lo}, {hi})")));
    }
    if !(lo <= x && x < y && y <= hi) {
        return Err(Error::InvalidConfig(format!("need {lo} <= x < y <= {hi}, got x={x}, y={y}")));
    }
    Ok(())
}

/// One step of the endpoint-image rule applied to every piece.
fn step<M: IntervalMap + ?Sized>(map: &M, c: f64, lo: f64, hi: f64, current: &[Interval], next: &mut Vec<Interval>) {
    let clamp = |v: f64| v.clamp(lo, hi);
    let mut push = |a: f64, b: f64| {
        let (a, b) = (clamp(a), clamp(b));
        next.push(Interval::new(a.min(b), a.max(b)));
    };
    for iv in current {
        let (x1, x2) = (iv.lo, iv.hi);
        if x1 < c && c < x2 {
            push(lo, map.eval_branch(x2, Branch::Right));
            push(map.eval_branch(x1, Branch::Left), hi);
        } else if x2 == c {
            push(map.eval_branch(x1, Branch::Left), hi);
        } else if x1 == c {
            // right continuity: f(c) = lo
            push(lo, map.eval_branch(x2, Branch::Right));
        } else if x2 < c {
            push(map.eval_branch(x1, Branch::Left), map.eval_branch(x2, Branch::Left));
        } else {
            push(map.eval_branch(x1, Branch::Right), map.eval_branch(x2, Branch::Right));
        }
    }
}

/// Image of `[x, y]` under up to `max_image_iterations` steps, stopping early
/// once the whole domain is covered.
pub fn image<M: IntervalMap + ?Sized>(
    map: &M,
    c: f64,
    x: f64,
    y: f64,
    lo: f64,
    hi: f64,
    cfg: &LeoConfig,
) -> Result<ImageResult> {
    image_with_limit(map, c, x, y, lo, hi, cfg, cfg.max_image_iterations)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn image_with_limit<M: IntervalMap + ?Sized>(
    map: &M,
    c: f64,
    x: f64,
    y: f64,
    lo: f64,
    hi: f64,
    cfg: &LeoConfig,
    limit: usize,
) -> Result<ImageResult> {
    cfg.validate()?;
    check_preconditions(c, x, y, lo, hi)?;
    let width = hi - lo;
    let merge_tol = cfg.merge_tolerance * width;
    let cover_tol = cfg.cover_tolerance * width;
    let cap = cfg.max_pieces();

    let mut current = vec![Interval::new(x, y)];
    let mut next = Vec::new();
    let mut iterations = 0;
    while iterations < limit {
        next.clear();
        step(map, c, lo, hi, &current, &mut next);
        merge_in_place(&mut next, merge_tol)?;
        std::mem::swap(&mut current, &mut next);
        iterations += 1;
        if current.len() > cap {
            return Err(Error::TooManyIntervals { len: current.len(), cap });
        }
        if current.len() == 1 && current[0].lo <= lo + cover_tol && current[0].hi >= hi - cover_tol {
            break;
        }
    }
    Ok(ImageResult { intervals: IntervalList { items: current }, iterations })
}

/// Whether the iterated image of `[x, y]` covers `[lo, hi]`.
pub fn cover_test<M: IntervalMap + ?Sized>(
    map: &M,
    c: f64,
    x: f64,
    y: f64,
    lo: f64,
    hi: f64,
    cfg: &LeoConfig,
) -> Result<bool> {
    let img = image(map, c, x, y, lo, hi, cfg)?;
    Ok(img.intervals.covers(lo, hi, cfg.cover_tolerance * (hi - lo)))
}

/// The `m` equal pieces of `[lo, hi]` tested by [`leo_test`].
pub fn subintervals(lo: f64, hi: f64, m: usize) -> impl Iterator<Item = (f64, f64)> {
    let dm = (hi - lo) / m as f64;
    (1..=m).map(move |i| {
        let x = lo + (i - 1) as f64 * dm;
        let y = if i == m { hi } else { lo + i as f64 * dm };
        (x, y)
    })
}

/// Numerical LEO test of a Lorenz map on `[lo, hi)` with discontinuity `c`.
pub fn leo_test<M: IntervalMap + ?Sized>(map: &M, c: f64, lo: f64, hi: f64, cfg: &LeoConfig) -> Result<bool> {
    cfg.validate()?;
    for (x, y) in subintervals(lo, hi, cfg.subdivisions) {
        if !cover_test(map, c, x, y, lo, hi, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}
