//! Parameter-plane sweeps.
//!
//! A sweep evaluates a `mesh × mesh` grid of cell centers, decides whether
//! each cell is a valid expanding Lorenz map, runs the requested test(s) on
//! the valid ones and records a [`CellClass`]. Cells are laid out row-major
//! with row 0 at the highest value of the second axis (β or c), the same
//! orientation as the emitted CSV and PPM files.
//!
//! Each cell gets its own seed derived from `(master_seed, row, col)`, so the
//! result is identical for any degree of parallelism.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::leo::{leo_test, LeoConfig};
use crate::maps::{BetaParams, CnvParams, IntervalMap, MapSpec};
use crate::rng;
use crate::transitivity::{num_trans_test, TransitivityConfig};

/// Which parameter plane is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    /// β-transformations: α on the first axis, β on the second.
    AlphaBeta,
    /// CNV maps: invariant-interval endpoints b (first axis) and c (second).
    BC,
}

impl Plane {
    pub fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            Plane::AlphaBeta => ("alpha", "beta"),
            Plane::BC => ("b", "c"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestKind {
    Transitivity,
    Leo,
    Both,
}

impl TestKind {
    fn runs_transitivity(self) -> bool {
        matches!(self, TestKind::Transitivity | TestKind::Both)
    }

    fn runs_leo(self) -> bool {
        matches!(self, TestKind::Leo | TestKind::Both)
    }
}

/// Classification of one grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellClass {
    Invalid,
    NonTransitive,
    Transitive,
    NonLeo,
    Leo,
    DiffTransNotLeo,
    DiffLeoNotTrans,
}

impl CellClass {
    pub const ALL: [CellClass; 7] = [
        CellClass::Invalid,
        CellClass::NonTransitive,
        CellClass::Transitive,
        CellClass::NonLeo,
        CellClass::Leo,
        CellClass::DiffTransNotLeo,
        CellClass::DiffLeoNotTrans,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellClass::Invalid => "Invalid",
            CellClass::NonTransitive => "NonTransitive",
            CellClass::Transitive => "Transitive",
            CellClass::NonLeo => "NonLeo",
            CellClass::Leo => "Leo",
            CellClass::DiffTransNotLeo => "DiffTransNotLeo",
            CellClass::DiffLeoNotTrans => "DiffLeoNotTrans",
        }
    }

    /// Raster color: white, yellow, red, green, black, blue, red.
    pub fn rgb(self) -> [u8; 3] {
        match self {
            CellClass::Invalid => [255, 255, 255],
            CellClass::NonTransitive => [255, 255, 0],
            CellClass::Transitive => [255, 0, 0],
            CellClass::NonLeo => [0, 255, 0],
            CellClass::Leo => [0, 0, 0],
            CellClass::DiffTransNotLeo => [0, 0, 255],
            CellClass::DiffLeoNotTrans => [255, 0, 0],
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CellClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown cell class {s:?}")))
    }
}

/// Outcome of one cell. `trans` / `leo` hold the raw test booleans when the
/// corresponding test ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub class: CellClass,
    pub trans: Option<bool>,
    pub leo: Option<bool>,
}

impl Cell {
    pub const INVALID: Cell = Cell { class: CellClass::Invalid, trans: None, leo: None };

    pub fn is_valid(&self) -> bool {
        self.class != CellClass::Invalid
    }

    /// Transitivity outcome, from the raw flag or else from the class.
    pub fn trans_outcome(&self) -> Option<bool> {
        self.trans.or(match self.class {
            CellClass::Transitive => Some(true),
            CellClass::NonTransitive => Some(false),
            _ => None,
        })
    }

    pub fn leo_outcome(&self) -> Option<bool> {
        self.leo.or(match self.class {
            CellClass::Leo => Some(true),
            CellClass::NonLeo => Some(false),
            _ => None,
        })
    }
}

/// Model held fixed while the plane is scanned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedParams {
    Beta,
    /// CNV shape; its α and β are ignored and replaced per cell from (b, c).
    Cnv(CnvParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub plane: Plane,
    pub mesh: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub fixed: FixedParams,
    pub master_seed: u64,
}

/// Margin for the α + β < 2 edge of the triangle, so the diagonal cells whose
/// centers land on it up to rounding count as boundary maps.
const TRIANGLE_EDGE_EPS: f64 = 1e-12;

impl SweepGrid {
    /// The β-transformation triangle inside `[0, 1] × [1, 2]`.
    pub fn triangle(mesh: usize, master_seed: u64) -> Self {
        Self {
            plane: Plane::AlphaBeta,
            mesh,
            x_range: (0.0, 1.0),
            y_range: (1.0, 2.0),
            fixed: FixedParams::Beta,
            master_seed,
        }
    }

    /// The (b, c) rectangle bounded by the monotone window of `F` and `d`:
    /// b between the window's left end and d, c between d and its right end.
    pub fn bc(shape: CnvParams, mesh: usize, master_seed: u64) -> Self {
        let (lo, hi) = shape.monotone_window();
        let d = shape.d();
        Self {
            plane: Plane::BC,
            mesh,
            x_range: (lo, d),
            y_range: (d, hi),
            fixed: FixedParams::Cnv(shape),
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mesh < 2 {
            return Err(Error::InvalidConfig(format!("mesh must be at least 2, got {}", self.mesh)));
        }
        let ordered = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ordered(self.x_range) || !ordered(self.y_range) {
            return Err(Error::InvalidConfig("axis ranges must be finite and increasing".into()));
        }
        let plane_ok = matches!(
            (self.plane, self.fixed),
            (Plane::AlphaBeta, FixedParams::Beta) | (Plane::BC, FixedParams::Cnv(_))
        );
        if !plane_ok {
            return Err(Error::InvalidConfig("plane does not match the fixed model family".into()));
        }
        Ok(())
    }

    /// First-axis value of column `col`.
    pub fn x_center(&self, col: usize) -> f64 {
        let (lo, hi) = self.x_range;
        lo + (col as f64 + 0.5) * (hi - lo) / self.mesh as f64
    }

    /// Second-axis value of row `row`; row 0 is the top.
    pub fn y_center(&self, row: usize) -> f64 {
        let (lo, hi) = self.y_range;
        hi - (row as f64 + 0.5) * (hi - lo) / self.mesh as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.mesh).map(|j| self.x_center(j)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.mesh).map(|i| self.y_center(i)).collect()
    }

    /// The map at `(x, y)`, or `None` when it fails the family constraints.
    pub fn map_at(&self, x: f64, y: f64) -> Option<MapSpec> {
        match self.fixed {
            FixedParams::Beta => {
                let (alpha, beta) = (x, y);
                if beta > 1.0 && alpha > 0.0 && alpha + beta < 2.0 - TRIANGLE_EDGE_EPS {
                    BetaParams::new(beta, alpha).ok().map(MapSpec::beta)
                } else {
                    None
                }
            }
            FixedParams::Cnv(shape) => {
                let (b, c) = (x, y);
                if !shape.check_invariant_conditions(b, c) {
                    return None;
                }
                let params = shape.with_endpoints(b, c).ok()?;
                let mut map = MapSpec::cnv(params).ok()?;
                // Keep the scanned endpoints exactly rather than the recomputed ones.
                map.domain_lo = b;
                map.domain_hi = c;
                Some(map)
            }
        }
    }
}

/// Per-test settings used in every cell. The transitivity seed is replaced
/// by the cell seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub test: TestKind,
    pub trans: TransitivityConfig,
    pub leo: LeoConfig,
    pub execution: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            test: TestKind::Transitivity,
            trans: TransitivityConfig::default(),
            leo: LeoConfig::default(),
            execution: Execution::Parallel,
        }
    }
}

impl SweepConfig {
    pub fn new(test: TestKind) -> Self {
        Self { test, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTiming {
    pub per_cell: Vec<Duration>,
    pub total: Duration,
}

/// A classified grid. `grid` is `None` when the result was read back from a
/// file, which only records the plane and the cell coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Option<SweepGrid>,
    pub plane: Plane,
    pub mesh: usize,
    /// Column centers, ascending.
    pub xs: Vec<f64>,
    /// Row centers, descending (row 0 on top).
    pub ys: Vec<f64>,
    /// Row-major, `mesh * mesh` entries.
    pub cells: Vec<Cell>,
    pub timing: Option<SweepTiming>,
}

impl SweepResult {
    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.mesh + col]
    }

    /// `(x, y, cell)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, &Cell)> + '_ {
        self.cells.iter().enumerate().map(move |(k, cell)| (self.xs[k % self.mesh], self.ys[k / self.mesh], cell))
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }

    pub fn valid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_valid()).count()
    }

    pub fn has_test_flags(&self) -> bool {
        self.cells.iter().any(|c| c.trans.is_some() && c.leo.is_some())
    }

    fn same_grid(&self, other: &SweepResult) -> Result<()> {
        if self.plane != other.plane {
            return Err(Error::GridMismatch(format!("planes differ: {:?} vs {:?}", self.plane, other.plane)));
        }
        if self.mesh != other.mesh {
            return Err(Error::GridMismatch(format!("mesh differs: {} vs {}", self.mesh, other.mesh)));
        }
        if self.xs != other.xs || self.ys != other.ys {
            return Err(Error::GridMismatch("cell coordinates differ".into()));
        }
        Ok(())
    }
}

fn classify_cell(map: &MapSpec, seed: u64, cfg: &SweepConfig) -> Cell {
    let (lo, hi) = map.domain();
    let trans = cfg.test.runs_transitivity().then(|| {
        let tcfg = TransitivityConfig { seed, ..cfg.trans };
        // config was validated before the sweep started
        num_trans_test(map, lo, hi, &tcfg).unwrap_or(false)
    });
    // An image that blows past the piece cap is a failed cover.
    let leo = cfg.test.runs_leo().then(|| leo_test(map, map.discontinuity(), lo, hi, &cfg.leo).unwrap_or(false));
    let class = match (cfg.test, trans, leo) {
        (TestKind::Leo, _, Some(true)) => CellClass::Leo,
        (TestKind::Leo, _, _) => CellClass::NonLeo,
        (_, Some(true), _) => CellClass::Transitive,
        _ => CellClass::NonTransitive,
    };
    let keep_flags = cfg.test == TestKind::Both;
    Cell { class, trans: trans.filter(|_| keep_flags), leo: leo.filter(|_| keep_flags) }
}

/// Runs a sweep over `grid`.
///
/// With [`TestKind::Both`] the cell class follows the transitivity result
/// and both raw outcomes are kept in [`Cell::trans`] / [`Cell::leo`].
pub fn run_sweep(grid: &SweepGrid, cfg: &SweepConfig) -> Result<SweepResult> {
    grid.validate()?;
    if cfg.test.runs_transitivity() {
        cfg.trans.validate()?;
    }
    if cfg.test.runs_leo() {
        cfg.leo.validate()?;
    }
    let mesh = grid.mesh;
    let start = Instant::now();
    let outcomes = map_indexed(mesh * mesh, cfg.execution, |k| {
        let (row, col) = (k / mesh, k % mesh);
        let t0 = Instant::now();
        let cell = match grid.map_at(grid.x_center(col), grid.y_center(row)) {
            Some(map) => classify_cell(&map, rng::cell_seed(grid.master_seed, row, col), cfg),
            None => Cell::INVALID,
        };
        (cell, t0.elapsed())
    });
    let total = start.elapsed();
    let (cells, per_cell) = outcomes.into_iter().unzip();
    Ok(SweepResult {
        grid: Some(*grid),
        plane: grid.plane,
        mesh,
        xs: grid.xs(),
        ys: grid.ys(),
        cells,
        timing: Some(SweepTiming { per_cell, total }),
    })
}

/// Sweep of the β-transformation triangle.
pub fn beta_triangle_sweep(mesh: usize, master_seed: u64, cfg: &SweepConfig) -> Result<SweepResult> {
    run_sweep(&SweepGrid::triangle(mesh, master_seed), cfg)
}

/// Sweep of the (b, c) plane of a CNV model with fixed shape parameters.
pub fn cnv_sweep(shape: CnvParams, mesh: usize, master_seed: u64, cfg: &SweepConfig) -> Result<SweepResult> {
    run_sweep(&SweepGrid::bc(shape, mesh, master_seed), cfg)
}

/// Cells where the transitivity outcome of `r1` and the LEO outcome of `r2`
/// disagree. Everything else is `Invalid`.
pub fn diff_map(r1: &SweepResult, r2: &SweepResult) -> Result<SweepResult> {
    r1.same_grid(r2)?;
    let cells = r1
        .cells
        .iter()
        .zip(&r2.cells)
        .map(|(a, b)| {
            let class = match (a.trans_outcome(), b.leo_outcome()) {
                (Some(true), Some(false)) => CellClass::DiffTransNotLeo,
                (Some(false), Some(true)) => CellClass::DiffLeoNotTrans,
                _ => CellClass::Invalid,
            };
            Cell { class, trans: None, leo: None }
        })
        .collect();
    Ok(SweepResult {
        grid: r1.grid,
        plane: r1.plane,
        mesh: r1.mesh,
        xs: r1.xs.clone(),
        ys: r1.ys.clone(),
        cells,
        timing: None,
    })
}

/// Fraction of cells with both outcomes recorded on which they agree,
/// optionally restricted by a predicate on `(x, y)`.
pub fn agreement(result: &SweepResult, keep: impl Fn(f64, f64) -> bool) -> Option<f64> {
    let (mut agree, mut total) = (0usize, 0usize);
    for (x, y, cell) in result.iter() {
        if let (Some(t), Some(l)) = (cell.trans, cell.leo) {
            if keep(x, y) {
                total += 1;
                agree += usize::from(t == l);
            }
        }
    }
    (total > 0).then(|| agree as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::NlCnvParams;

    fn quick(test: TestKind) -> SweepConfig {
        SweepConfig {
            test,
            trans: TransitivityConfig { iterations: 20_000, ..Default::default() },
            leo: LeoConfig { subdivisions: 20, ..Default::default() },
            execution: Execution::Parallel,
        }
    }

    #[test]
    fn class_names_round_trip() {
        for c in CellClass::ALL {
            assert_eq!(c.name().parse::<CellClass>().unwrap(), c);
        }
        assert!("Blue".parse::<CellClass>().is_err());
    }

    #[test]
    fn mesh_two_validity_from_triangle_alone() {
        let r = beta_triangle_sweep(2, 0, &quick(TestKind::Transitivity)).unwrap();
        assert_eq!(r.cells.len(), 4);
        // centers: α ∈ {0.25, 0.75}, β ∈ {1.75, 1.25}
        assert_eq!(r.xs, vec![0.25, 0.75]);
        assert_eq!(r.ys, vec![1.75, 1.25]);
        // Only (α, β) = (0.25, 1.25) is strictly inside; the diagonal cells sit on α + β = 2.
        assert!(r.cell(1, 0).is_valid());
        assert_eq!(r.valid_count(), 1);
    }

    #[test]
    fn mesh_validation() {
        assert!(beta_triangle_sweep(1, 0, &quick(TestKind::Transitivity)).is_err());
    }

    #[test]
    fn diff_of_identical_transitivity_sweeps_is_empty() {
        let r = beta_triangle_sweep(6, 1, &quick(TestKind::Transitivity)).unwrap();
        let d = diff_map(&r, &r).unwrap();
        assert_eq!(d.count(CellClass::Invalid), 36);
    }

    #[test]
    fn diff_requires_same_grid() {
        let a = beta_triangle_sweep(4, 1, &quick(TestKind::Transitivity)).unwrap();
        let b = beta_triangle_sweep(5, 1, &quick(TestKind::Transitivity)).unwrap();
        assert!(matches!(diff_map(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn both_records_flags_and_transitivity_class() {
        let r = beta_triangle_sweep(5, 3, &quick(TestKind::Both)).unwrap();
        for cell in &r.cells {
            if cell.is_valid() {
                assert!(cell.trans.is_some() && cell.leo.is_some());
                let expect = if cell.trans == Some(true) { CellClass::Transitive } else { CellClass::NonTransitive };
                assert_eq!(cell.class, expect);
            } else {
                assert_eq!(*cell, Cell::INVALID);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let shape = CnvParams::Nl(NlCnvParams::new(1.0, 0.2, 0.4, 0.0, 0.0).unwrap());
        let par = cnv_sweep(shape, 12, 9, &quick(TestKind::Both)).unwrap();
        let seq = cnv_sweep(shape, 12, 9, &SweepConfig { execution: Execution::Sequential, ..quick(TestKind::Both) })
            .unwrap();
        assert_eq!(par.cells, seq.cells);
        assert!(par.valid_count() > 0);
    }

    #[test]
    fn larger_budget_never_loses_transitivity() {
        let small = SweepConfig {
            trans: TransitivityConfig { iterations: 3_000, ..Default::default() },
            ..quick(TestKind::Transitivity)
        };
        let large = SweepConfig { trans: TransitivityConfig { iterations: 30_000, ..small.trans }, ..small };
        let a = beta_triangle_sweep(16, 4, &small).unwrap();
        let b = beta_triangle_sweep(16, 4, &large).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            if x.class == CellClass::Transitive {
                assert_eq!(y.class, CellClass::Transitive);
            }
        }
    }
}
