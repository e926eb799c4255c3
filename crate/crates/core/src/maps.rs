//! Interval map families: β-transformations, the piecewise-linear and cubic
//! CNV neuron maps, and two fixed example Lorenz maps.
//!
//! Every map here is a Lorenz-type map: two increasing branches separated by
//! a single discontinuity `c`, with the left branch climbing to the top of the
//! domain and the right branch starting at the bottom. Evaluation at `c`
//! itself follows right continuity (`f(c) = f(c+)`).

use crate::error::{Error, Result};

/// One of the two monotone branches of a Lorenz map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

/// A map of a half-open interval `[lo, hi)` into itself with one discontinuity.
///
/// This is the extension point used by the transitivity and LEO tests.
/// Implementations outside this crate carry no guarantees beyond what the
/// trait states.
pub trait IntervalMap: Sync {
    /// `(lo, hi)` of the half-open domain.
    fn domain(&self) -> (f64, f64);

    fn discontinuity(&self) -> f64;

    /// Evaluates the map. `x` is assumed to lie in the domain.
    fn eval(&self, x: f64) -> f64;

    /// Evaluates the continuous extension of one branch.
    ///
    /// `eval_branch(c, Branch::Left)` is the left limit at the discontinuity
    /// and `eval_branch(c, Branch::Right)` the right limit. Used for interval
    /// endpoint images where the branch is known from the interval position.
    fn eval_branch(&self, x: f64, branch: Branch) -> f64;
}

/// `x mod 1` mapped into `[0, 1)`.
#[inline]
fn frac(y: f64) -> f64 {
    let r = y - y.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Clamp into the half-open interval `[lo, hi)`.
#[inline]
fn clamp_half_open(y: f64, lo: f64, hi: f64) -> f64 {
    if y < lo {
        lo
    } else if y >= hi {
        hi.next_down()
    } else {
        y
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

// ---------------------------------------------------------------------------
// β-transformations

/// Parameters of `T(x) = βx + α (mod 1)` from the triangle
/// `1 < β ≤ 2, α ≥ 0, α + β ≤ 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    pub beta: f64,
    pub alpha: f64,
}

impl BetaParams {
    pub fn new(beta: f64, alpha: f64) -> Result<Self> {
        check_finite("beta", beta)?;
        check_finite("alpha", alpha)?;
        if !(beta > 1.0 && beta <= 2.0) {
            return Err(Error::InvalidParameter(format!("beta must lie in (1, 2], got {beta}")));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if alpha + beta > 2.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha + beta must be <= 2, got {}",
                alpha + beta
            )));
        }
        Ok(Self { beta, alpha })
    }

    /// Whether `(alpha, beta)` lies in the parameter triangle.
    pub fn in_triangle(beta: f64, alpha: f64) -> bool {
        Self::new(beta, alpha).is_ok()
    }

    /// The map with `β = √2` that is transitive but not LEO.
    pub fn exceptional() -> Self {
        let beta = std::f64::consts::SQRT_2;
        Self { beta, alpha: (2.0 - beta) / 2.0 }
    }

    /// The discontinuity `(1 − α) / β`.
    pub fn discontinuity(&self) -> f64 {
        (1.0 - self.alpha) / self.beta
    }
}

/// Evaluates `βx + α (mod 1)` on `[0, 1)`.
pub fn eval_beta(p: &BetaParams, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: 1.0 });
    }
    Ok(frac(p.beta * x + p.alpha))
}

/// The discontinuity point of a β-transformation.
pub fn beta_discontinuity(p: &BetaParams) -> f64 {
    p.discontinuity()
}

// ---------------------------------------------------------------------------
// CNV neuron maps: g(x) = x + F(x) − α − β·H(x − d)

/// Piecewise-linear CNV map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlCnvParams {
    pub m0: f64,
    pub m1: f64,
    pub a: f64,
    pub d: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PlCnvParams {
    pub fn new(m0: f64, m1: f64, a: f64, d: f64, alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("m0", m0), ("m1", m1), ("a", a), ("d", d), ("alpha", alpha), ("beta", beta)] {
            check_finite(name, v)?;
        }
        if m0 <= 0.0 || m1 <= 0.0 {
            return Err(Error::InvalidParameter(format!("slopes must be positive, got m0={m0}, m1={m1}")));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!("a must lie in (0, 1), got {a}")));
        }
        Ok(Self { m0, m1, a, d, alpha, beta })
    }

    pub fn junction_points(&self) -> (f64, f64) {
        plcnv_junction_points(self.m0, self.m1, self.a)
    }

    /// The three-branch piecewise-linear `F`.
    pub fn nonlinearity(&self, x: f64) -> f64 {
        let (j_min, j_max) = self.junction_points();
        if x <= j_min {
            -self.m0 * x
        } else if x <= j_max {
            self.m1 * (x - self.a)
        } else {
            -self.m0 * (x - 1.0)
        }
    }

    fn nonlinearity_slope(&self, x: f64) -> f64 {
        let (j_min, j_max) = self.junction_points();
        if x < j_min || x > j_max {
            -self.m0
        } else {
            self.m1
        }
    }
}

/// Cubic CNV map with `F(x) = μx(x − a)(1 − x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlCnvParams {
    pub mu: f64,
    pub a: f64,
    pub d: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl NlCnvParams {
    pub fn new(mu: f64, a: f64, d: f64, alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("mu", mu), ("a", a), ("d", d), ("alpha", alpha), ("beta", beta)] {
            check_finite(name, v)?;
        }
        if mu <= 0.0 {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidParameter(format!("a must lie in (0, 1), got {a}")));
        }
        Ok(Self { mu, a, d, alpha, beta })
    }

    pub fn critical_points(&self) -> (f64, f64) {
        nlcnv_critical_points(self.a)
    }

    pub fn nonlinearity(&self, x: f64) -> f64 {
        self.mu * x * (x - self.a) * (1.0 - x)
    }

    fn nonlinearity_slope(&self, x: f64) -> f64 {
        self.mu * (-3.0 * x * x + 2.0 * (1.0 + self.a) * x - self.a)
    }
}

/// `(J_min, J_max)`, the junctions of the piecewise-linear `F`.
pub fn plcnv_junction_points(m0: f64, m1: f64, a: f64) -> (f64, f64) {
    let s = m0 + m1;
    (a * m1 / s, (m0 + a * m1) / s)
}

/// `(x_min, x_max)`, the local minimum and maximum of the cubic `F`.
pub fn nlcnv_critical_points(a: f64) -> (f64, f64) {
    let r = (a * a - a + 1.0).sqrt();
    ((a + 1.0 - r) / 3.0, (a + 1.0 + r) / 3.0)
}

/// Either CNV variant. Most CNV operations are defined once here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CnvParams {
    Pl(PlCnvParams),
    Nl(NlCnvParams),
}

impl From<PlCnvParams> for CnvParams {
    fn from(p: PlCnvParams) -> Self {
        CnvParams::Pl(p)
    }
}

impl From<NlCnvParams> for CnvParams {
    fn from(p: NlCnvParams) -> Self {
        CnvParams::Nl(p)
    }
}

impl CnvParams {
    pub fn d(&self) -> f64 {
        match self {
            CnvParams::Pl(p) => p.d,
            CnvParams::Nl(p) => p.d,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            CnvParams::Pl(p) => p.alpha,
            CnvParams::Nl(p) => p.alpha,
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            CnvParams::Pl(p) => p.beta,
            CnvParams::Nl(p) => p.beta,
        }
    }

    /// `F(x)`.
    pub fn nonlinearity(&self, x: f64) -> f64 {
        match self {
            CnvParams::Pl(p) => p.nonlinearity(x),
            CnvParams::Nl(p) => p.nonlinearity(x),
        }
    }

    /// `F'(x)`; one-sided at the plCNV junctions.
    pub fn nonlinearity_slope(&self, x: f64) -> f64 {
        match self {
            CnvParams::Pl(p) => p.nonlinearity_slope(x),
            CnvParams::Nl(p) => p.nonlinearity_slope(x),
        }
    }

    /// `g(x) = x + F(x) − α − β·H(x − d)` with `H(0) = 1`.
    pub fn eval(&self, x: f64) -> f64 {
        let jump = if x >= self.d() { self.beta() } else { 0.0 };
        x + self.nonlinearity(x) - self.alpha() - jump
    }

    fn eval_branch(&self, x: f64, branch: Branch) -> f64 {
        let base = x + self.nonlinearity(x) - self.alpha();
        match branch {
            Branch::Left => base,
            Branch::Right => base - self.beta(),
        }
    }

    /// Endpoints `(b, c)` of the candidate invariant interval:
    /// `b = g(d) = d + F(d) − α − β`, `c = g(d−) = d + F(d) − α`.
    pub fn invariant_interval(&self) -> (f64, f64) {
        let d = self.d();
        let c = d + self.nonlinearity(d) - self.alpha();
        (c - self.beta(), c)
    }

    /// The same model with `(α, β)` replaced by the values that produce the
    /// invariant interval `[b, c)`.
    pub fn with_endpoints(&self, b: f64, c: f64) -> Result<Self> {
        let (alpha, beta) = bc_to_alpha_beta(self, b, c)?;
        Ok(match *self {
            CnvParams::Pl(p) => CnvParams::Pl(PlCnvParams { alpha, beta, ..p }),
            CnvParams::Nl(p) => CnvParams::Nl(NlCnvParams { alpha, beta, ..p }),
        })
    }

    /// Where `F` is increasing: `[J_min, J_max]` or `(x_min, x_max)`.
    pub fn monotone_window(&self) -> (f64, f64) {
        match self {
            CnvParams::Pl(p) => p.junction_points(),
            CnvParams::Nl(p) => p.critical_points(),
        }
    }

    /// Checks all six invariant-interval conditions for `[b, c)`, with `g`
    /// taken at the `(α, β)` induced by `(b, c)`. The current `α, β` of
    /// `self` are ignored.
    pub fn check_invariant_conditions(&self, b: f64, c: f64) -> bool {
        if !(b.is_finite() && c.is_finite()) || c <= b {
            return false;
        }
        let (lo, hi) = self.monotone_window();
        let window_ok = match self {
            CnvParams::Pl(_) => lo <= b && c <= hi,
            CnvParams::Nl(_) => lo < b && c < hi,
        };
        let d = self.d();
        if !(window_ok && b < d && d < c) {
            return false;
        }
        let Ok(g) = self.with_endpoints(b, c) else {
            return false;
        };
        g.eval(b) >= b && g.eval(c) < c
    }

    /// `1 + min F'` over `[b, c]`, sampled at 10⁴ points.
    pub fn expansion_constant(&self) -> f64 {
        const SAMPLES: usize = 10_000;
        let (b, c) = self.invariant_interval();
        (0..=SAMPLES)
            .map(|i| b + (c - b) * i as f64 / SAMPLES as f64)
            .map(|x| 1.0 + self.nonlinearity_slope(x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(α, β)` that give the invariant interval `[b, c)` for the model shape of
/// `template`. `α` may come out negative; validity is decided only by
/// [`CnvParams::check_invariant_conditions`].
pub fn bc_to_alpha_beta(template: &CnvParams, b: f64, c: f64) -> Result<(f64, f64)> {
    if !(c > b) {
        return Err(Error::InvalidParameter(format!("need c > b, got b={b}, c={c}")));
    }
    let d = template.d();
    Ok((d + template.nonlinearity(d) - c, c - b))
}

// ---------------------------------------------------------------------------
// Fixed example maps

/// The two hand-built example maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleMap {
    /// Four-branch Lorenz-like map with flat pieces, `c = 9/20`.
    LorenzLike,
    /// Exponential expanding Lorenz map, `c = 0.45`.
    ExpandingNonlinear,
}

const LORENZ_LIKE_C: f64 = 9.0 / 20.0;
const EXPANDING_C: f64 = 0.45;

impl ExampleMap {
    pub fn discontinuity(self) -> f64 {
        match self {
            ExampleMap::LorenzLike => LORENZ_LIKE_C,
            ExampleMap::ExpandingNonlinear => EXPANDING_C,
        }
    }

    fn branch(self, x: f64, branch: Branch) -> f64 {
        match (self, branch) {
            (ExampleMap::LorenzLike, Branch::Left) => {
                if x <= 0.2 {
                    0.4
                } else {
                    0.4 + 2.4 * (x - 0.2)
                }
            }
            (ExampleMap::LorenzLike, Branch::Right) => {
                if x <= 0.6 {
                    4.0 * (x - LORENZ_LIKE_C)
                } else {
                    0.6
                }
            }
            (ExampleMap::ExpandingNonlinear, Branch::Left) => {
                0.1 + 0.9 * (1.5 * x).exp_m1() / (1.5 * EXPANDING_C).exp_m1()
            }
            (ExampleMap::ExpandingNonlinear, Branch::Right) => {
                0.9 * (1.0 - (1.5 * (1.0 - x)).exp_m1() / (1.5 * (1.0 - EXPANDING_C)).exp_m1())
            }
        }
    }

    fn eval_unchecked(self, x: f64) -> f64 {
        let side = if x < self.discontinuity() { Branch::Left } else { Branch::Right };
        clamp_half_open(self.branch(x, side), 0.0, 1.0)
    }
}

/// Evaluates one of the example maps on `[0, 1)`.
pub fn builtin_example_map(which: ExampleMap, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfDomain { x, lo: 0.0, hi: 1.0 });
    }
    Ok(which.eval_unchecked(x))
}

// ---------------------------------------------------------------------------
// MapSpec

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapFamily {
    Beta(BetaParams),
    PlCnv(PlCnvParams),
    NlCnv(NlCnvParams),
    LorenzLikeExample,
    ExpandingExample,
}

/// A concrete map together with its domain and discontinuity.
///
/// CNV maps live on their invariant interval `[b, c)` with discontinuity `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapSpec {
    pub family: MapFamily,
    pub domain_lo: f64,
    pub domain_hi: f64,
    pub discontinuity: f64,
}

impl MapSpec {
    pub fn beta(p: BetaParams) -> Self {
        Self { family: MapFamily::Beta(p), domain_lo: 0.0, domain_hi: 1.0, discontinuity: p.discontinuity() }
    }

    /// Shorthand for [`MapSpec::beta`] with validation.
    pub fn beta_transformation(beta: f64, alpha: f64) -> Result<Self> {
        BetaParams::new(beta, alpha).map(Self::beta)
    }

    /// A CNV map restricted to its invariant interval. Only requires
    /// `b < d < c`; use [`CnvParams::check_invariant_conditions`] for the
    /// full validity gate.
    pub fn cnv(p: impl Into<CnvParams>) -> Result<Self> {
        let p = p.into();
        let (b, c) = p.invariant_interval();
        let d = p.d();
        if !(b < d && d < c) {
            return Err(Error::InvalidParameter(format!(
                "discontinuity d={d} must lie strictly inside the invariant interval [{b}, {c})"
            )));
        }
        let family = match p {
            CnvParams::Pl(p) => MapFamily::PlCnv(p),
            CnvParams::Nl(p) => MapFamily::NlCnv(p),
        };
        Ok(Self { family, domain_lo: b, domain_hi: c, discontinuity: d })
    }

    pub fn example(which: ExampleMap) -> Self {
        let family = match which {
            ExampleMap::LorenzLike => MapFamily::LorenzLikeExample,
            ExampleMap::ExpandingNonlinear => MapFamily::ExpandingExample,
        };
        Self { family, domain_lo: 0.0, domain_hi: 1.0, discontinuity: which.discontinuity() }
    }

    pub fn as_cnv(&self) -> Option<CnvParams> {
        match self.family {
            MapFamily::PlCnv(p) => Some(CnvParams::Pl(p)),
            MapFamily::NlCnv(p) => Some(CnvParams::Nl(p)),
            _ => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.domain_lo && x < self.domain_hi
    }

    /// Infimum of the derivative where it has a usable closed form or
    /// sampled estimate. `None` for the Lorenz-like example, which has flat
    /// pieces. Informational only; nothing enforces it.
    pub fn expansion_constant(&self) -> Option<f64> {
        match self.family {
            MapFamily::Beta(p) => Some(p.beta),
            MapFamily::PlCnv(p) => Some(CnvParams::Pl(p).expansion_constant()),
            MapFamily::NlCnv(p) => Some(CnvParams::Nl(p).expansion_constant()),
            MapFamily::LorenzLikeExample => None,
            MapFamily::ExpandingExample => {
                // Both branch derivatives are monotone; the minimum is at an endpoint.
                let left = 0.9 * 1.5 / (1.5 * EXPANDING_C).exp_m1();
                let right = 0.9 * 1.5 / (1.5 * (1.0 - EXPANDING_C)).exp_m1();
                Some(left.min(right))
            }
        }
    }
}

impl IntervalMap for MapSpec {
    fn domain(&self) -> (f64, f64) {
        (self.domain_lo, self.domain_hi)
    }

    fn discontinuity(&self) -> f64 {
        self.discontinuity
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        match &self.family {
            MapFamily::Beta(p) => frac(p.beta * x + p.alpha),
            MapFamily::PlCnv(p) => {
                clamp_half_open(CnvParams::Pl(*p).eval(x), self.domain_lo, self.domain_hi)
            }
            MapFamily::NlCnv(p) => {
                clamp_half_open(CnvParams::Nl(*p).eval(x), self.domain_lo, self.domain_hi)
            }
            MapFamily::LorenzLikeExample => ExampleMap::LorenzLike.eval_unchecked(x),
            MapFamily::ExpandingExample => ExampleMap::ExpandingNonlinear.eval_unchecked(x),
        }
    }

    fn eval_branch(&self, x: f64, branch: Branch) -> f64 {
        match &self.family {
            MapFamily::Beta(p) => {
                let y = p.beta * x + p.alpha;
                match branch {
                    Branch::Left => y,
                    Branch::Right => y - 1.0,
                }
            }
            MapFamily::PlCnv(p) => CnvParams::Pl(*p).eval_branch(x, branch),
            MapFamily::NlCnv(p) => CnvParams::Nl(*p).eval_branch(x, branch),
            MapFamily::LorenzLikeExample => ExampleMap::LorenzLike.branch(x, branch),
            MapFamily::ExpandingExample => ExampleMap::ExpandingNonlinear.branch(x, branch),
        }
    }
}
