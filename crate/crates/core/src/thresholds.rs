//! Closed-form minimum degree thresholds evaluated from tile invariants.
//!
//! Values live in `Q(√2)` so that `6 - 4√2` compares exactly with rationals.
//! Quantities without a known closed form are reported as intervals, and
//! every report states the preconditions its formula needs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::invariants::{
    coloring_profile, complete_partite_parts, component_orders, has_bridge, ColoringProfile, Gcd, OrderedProfile,
};
use crate::rational::{fmt_q, q, qi, to_f64, Q};

/// An element `a + b√2` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub a: Q,
    pub b: Q,
}

impl QSqrt2 {
    pub fn rational(a: Q) -> Self {
        QSqrt2 { a, b: Q::zero() }
    }

    pub fn new(a: Q, b: Q) -> Self {
        QSqrt2 { a, b }
    }

    /// `2(√2 - 1)^2 = 6 - 4√2`.
    pub fn cover_constant() -> Self {
        QSqrt2 { a: qi(6), b: qi(-4) }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    /// Exact sign of `a + b√2`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Q::zero());
        let sb = self.b.cmp(&Q::zero());
        if sa == sb || sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with 2 b^2
        let lhs = &self.a * &self.a;
        let rhs = qi(2) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }
}

impl From<Q> for QSqrt2 {
    fn from(a: Q) -> Self {
        QSqrt2::rational(a)
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: &self.a * &o.a + qi(2) * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -&self.a, b: -&self.b }
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).signum()
    }
}

fn short(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        fmt_q(x)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_q(&self.a));
        }
        let b = if self.b.abs().is_one() { String::new() } else { format!("{}*", short(&self.b.abs())) };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{b}sqrt2")
        } else {
            write!(f, "{}{sign}{b}sqrt2", short(&self.a))
        }
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.b.is_zero() {
            return s.serialize_str(&fmt_q(&self.a));
        }
        #[derive(Serialize)]
        struct Sym {
            sym: String,
            approx: f64,
        }
        let approx = (self.to_f64() * 1e8).round() / 1e8;
        Sym { sym: self.to_string(), approx }.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Value {
    Exact { value: QSqrt2 },
    /// The true value is only known to lie in `[lower, upper]`.
    Bounds { lower: QSqrt2, upper: QSqrt2 },
}

impl Value {
    pub fn exact(x: impl Into<QSqrt2>) -> Self {
        Value::Exact { value: x.into() }
    }

    pub fn bounds(lower: impl Into<QSqrt2>, upper: impl Into<QSqrt2>) -> Self {
        let (lower, upper) = (lower.into(), upper.into());
        if lower == upper {
            Value::Exact { value: lower }
        } else {
            Value::Bounds { lower, upper }
        }
    }

    pub fn unknown() -> Self {
        Value::bounds(qi(0), qi(1))
    }

    pub fn lower(&self) -> &QSqrt2 {
        match self {
            Value::Exact { value } => value,
            Value::Bounds { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &QSqrt2 {
        match self {
            Value::Exact { value } => value,
            Value::Bounds { upper, .. } => upper,
        }
    }

    pub fn as_exact(&self) -> Option<&QSqrt2> {
        match self {
            Value::Exact { value } => Some(value),
            Value::Bounds { .. } => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.as_exact().and_then(QSqrt2::as_rational)
    }

    /// Pointwise maximum of two (interval) values.
    pub fn max(&self, o: &Value) -> Value {
        Value::bounds(self.lower().max(o.lower()).clone(), self.upper().max(o.upper()).clone())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact { value } => write!(f, "{value}"),
            Value::Bounds { lower, upper } => write!(f, "[{lower}, {upper}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    /// Name such as `th_1(til_F)`.
    pub quantity: String,
    pub d: usize,
    pub value: Value,
    /// The closed form that produced `value`.
    pub formula: String,
    /// Whether the tile meets every precondition of the formula.
    pub applicable: bool,
    pub requires: Vec<String>,
}

impl ThresholdReport {
    fn new(quantity: &str, d: usize, value: Value, formula: &str, applicable: bool, requires: &[&str]) -> Self {
        ThresholdReport {
            quantity: format!("th_{d}({quantity})"),
            d,
            value,
            formula: formula.to_string(),
            applicable,
            requires: requires.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Space, divisibility and cover thresholds and their maximum, the tiling threshold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub space: ThresholdReport,
    pub divisibility: ThresholdReport,
    pub cover: ThresholdReport,
    pub tiling: ThresholdReport,
}

impl Decomposition {
    fn assemble(d: usize, space: ThresholdReport, divisibility: ThresholdReport, cover: ThresholdReport) -> Self {
        let value = space.value.max(&divisibility.value).max(&cover.value);
        let applicable = space.applicable && divisibility.applicable && cover.applicable;
        let tiling = ThresholdReport::new("til_F", d, value, "max{spa, div, cov}", applicable, &[]);
        Decomposition { space, divisibility, cover, tiling }
    }
}

fn one_minus_inv(x: &Q) -> Q {
    qi(1) - x.recip()
}

/// Vertex degree thresholds for tiling with a 2-graph.
pub fn threshold_graph_tiling(f: &KGraph) -> Result<Decomposition> {
    if f.k() != 2 {
        return Err(Error::input("graph tiling thresholds need a 2-graph tile"));
    }
    let p = coloring_profile(f)?;
    Ok(graph_tiling_from(f, &p))
}

fn graph_tiling_from(f: &KGraph, p: &ColoringProfile) -> Decomposition {
    let chi = p.chi;
    if chi < 2 {
        let none = |name: &str| ThresholdReport::new(name, 1, Value::unknown(), "edgeless tile", false, &["chi(F) >= 2"]);
        return Decomposition::assemble(1, none("spa_F"), none("div_F"), none("cov_F"));
    }
    let headline = chi >= 3 && p.gcd.is_one();
    let space = ThresholdReport::new("spa_F", 1, Value::exact(one_minus_inv(&p.chi_crit())), "1 - 1/chi_crit(F)", true, &[
        "chi(F) >= 2",
    ]);
    let divisibility = if chi >= 3 {
        match p.gcd {
            Gcd::Finite(1) => {
                ThresholdReport::new("div_F", 1, Value::exact(one_minus_inv(&qi(chi as i64 - 1))), "1 - 1/(chi(F)-1)", true, &[
                    "gcd(F) = 1",
                    "chi(F) >= 3",
                ])
            }
            _ => ThresholdReport::new("div_F", 1, Value::exact(one_minus_inv(&qi(chi as i64))), "1 - 1/chi(F)", true, &[
                "gcd(F) >= 2 or infinite",
            ]),
        }
    } else {
        let g = Gcd::of(component_orders(f).into_iter().map(|x| x as u64));
        let value = if g.is_one() { q(0, 1) } else { q(1, 2) };
        ThresholdReport::new("div_F", 1, Value::exact(value), "0 if component orders have gcd 1, else 1/2", true, &[
            "chi(F) = 2",
        ])
    };
    let cover = if chi >= 3 {
        ThresholdReport::new("cov_F", 1, Value::exact(one_minus_inv(&qi(chi as i64 - 1))), "1 - 1/(chi(F)-1)", headline, &[
            "gcd(F) = 1",
            "chi(F) >= 3",
        ])
    } else if p.is_cone() {
        ThresholdReport::new("cov_F", 1, Value::exact(qi(0)), "0 for cones", true, &["F is a cone"])
    } else {
        ThresholdReport::new("cov_F", 1, Value::unknown(), "no closed form", false, &["chi(F) >= 3 or F a cone"])
    };
    Decomposition::assemble(1, space, divisibility, cover)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KPartiteThresholds {
    pub parts: Option<Vec<usize>>,
    /// Degree `k - 1`.
    pub codegree: Decomposition,
    /// Degree `k - 2`.
    pub below_codegree: Decomposition,
}

/// Codegree and `(k-2)`-degree thresholds for complete `k`-partite `k`-graphs.
pub fn threshold_kpartite(f: &KGraph) -> Result<KPartiteThresholds> {
    let k = f.k();
    if k < 3 {
        return Err(Error::input("complete partite thresholds need k >= 3"));
    }
    let parts = complete_partite_parts(f)?;
    let p = coloring_profile(f)?;
    let (dk1, dk2) = (k - 1, k - 2);
    let Some(sizes) = parts.clone() else {
        let none = |name: &str, d| ThresholdReport::new(name, d, Value::unknown(), "not complete k-partite", false, &[
            "F complete k-partite",
        ]);
        return Ok(KPartiteThresholds {
            parts,
            codegree: Decomposition::assemble(dk1, none("spa_F", dk1), none("div_F", dk1), none("cov_F", dk1)),
            below_codegree: Decomposition::assemble(dk2, none("spa_F", dk2), none("div_F", dk2), none("cov_F", dk2)),
        });
    };
    let ok = p.gcd.is_one();
    let req: &[&str] = &["F complete k-partite", "gcd(F) = 1"];
    let m: usize = sizes.iter().sum();
    let t1 = q(sizes[0] as i64, m as i64);
    let t2 = q(sizes[1] as i64, m as i64);

    let codegree = Decomposition::assemble(
        dk1,
        ThresholdReport::new("spa_F", dk1, Value::exact(p.tau.clone()), "tau(F)", ok, req),
        ThresholdReport::new("div_F", dk1, Value::exact(qi(0)), "0", ok, req),
        ThresholdReport::new("cov_F", dk1, Value::exact(qi(0)), "0", ok, req),
    );
    let one = qi(1);
    let a = &one - (&one - &t1) * (&one - &t1);
    let b = (&t1 + &t2) * (&t1 + &t2);
    let space = ThresholdReport::new(
        "spa_F",
        dk2,
        Value::exact(a.max(b)),
        "max{1 - (1 - tau_1)^2, (tau_1 + tau_2)^2}",
        ok,
        req,
    );
    let divisibility = if k == 3 {
        ThresholdReport::new("div_F", dk2, Value::exact(q(1, 4)), "1/4 for k = 3", ok, req)
    } else {
        ThresholdReport::new("div_F", dk2, Value::exact(qi(0)), "0 for k >= 4", ok, req)
    };
    let cover = if p.is_cone() {
        ThresholdReport::new("cov_F", dk2, Value::exact(qi(0)), "0 for cones", ok, req)
    } else {
        ThresholdReport::new("cov_F", dk2, Value::exact(QSqrt2::cover_constant()), "2(sqrt2 - 1)^2", ok, req)
    };
    Ok(KPartiteThresholds { parts, codegree, below_codegree: Decomposition::assemble(dk2, space, divisibility, cover) })
}

/// Threshold values recorded as known constants rather than derived here.
pub fn known_tiling_threshold(f: &KGraph, d: usize) -> Option<ThresholdReport> {
    let tetrahedron = f.k() == 3 && f.n() == 4 && f.edge_count() == 4;
    (tetrahedron && d == 2).then(|| {
        ThresholdReport::new("til_F", 2, Value::exact(q(3, 4)), "known constant for the tetrahedron", true, &[])
    })
}

/// Tiling threshold at degree `d` from whichever calculator covers `f`.
pub fn tiling_threshold(f: &KGraph, d: usize) -> Result<ThresholdReport> {
    if d == 0 || d >= f.k() {
        return Err(Error::input(format!("degree order d={d} must lie in 1..k")));
    }
    if let Some(r) = known_tiling_threshold(f, d) {
        return Ok(r);
    }
    if f.k() == 2 {
        return Ok(threshold_graph_tiling(f)?.tiling);
    }
    let kp = threshold_kpartite(f)?;
    if kp.parts.is_some() {
        if d == f.k() - 1 {
            return Ok(kp.codegree.tiling);
        }
        if d == f.k() - 2 {
            return Ok(kp.below_codegree.tiling);
        }
    }
    Ok(ThresholdReport::new("til_F", d, Value::unknown(), "no closed form", false, &[]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RainbowThresholds {
    pub tiling: ThresholdReport,
    pub mixed: ThresholdReport,
    pub rainbow: ThresholdReport,
}

/// Rainbow tiling threshold as the maximum of the tiling and mixed thresholds.
pub fn threshold_rainbow(f: &KGraph, d: usize) -> Result<RainbowThresholds> {
    let tiling = tiling_threshold(f, d)?;
    let k = f.k();
    let single_edge = f.n() == k && f.edge_count() == 1;
    let mixed = if single_edge {
        // two colour classes above the matching threshold share an edge
        ThresholdReport::new("rmix_F", d, Value::bounds(qi(0), tiling.value.upper().clone()), "at most th_d(til_F)", true, &[
            "F a single edge",
        ])
    } else if k == 2 {
        let chi = coloring_profile(f)?.chi;
        if has_bridge(f) && chi == 2 {
            ThresholdReport::new("rmix_F", d, Value::exact(qi(0)), "0 for bipartite tiles with a bridge", true, &[])
        } else if !has_bridge(f) && chi >= 2 {
            let base = one_minus_inv(&qi(chi as i64 - 1)).max(q(1, 2));
            ThresholdReport::new("rmix_F", d, Value::exact(base), "max{1 - 1/(chi-1), 1/2}", true, &["F bridgeless"])
        } else {
            ThresholdReport::new("rmix_F", d, Value::unknown(), "no closed form", false, &[])
        }
    } else if known_tiling_threshold(f, d).is_some() {
        ThresholdReport::new("rmix_F", d, Value::bounds(qi(0), q(2, 3)), "every edge lies in a tetrahedron above 2/3", true, &[])
    } else if d == k - 1 && complete_partite_parts(f)?.is_some() {
        ThresholdReport::new("rmix_F", d, Value::exact(qi(0)), "0 for k-partite tiles at codegree", true, &[])
    } else {
        ThresholdReport::new("rmix_F", d, Value::unknown(), "no closed form", false, &[])
    };
    let value = tiling.value.max(&mixed.value);
    let rainbow = ThresholdReport::new("rtil_F", d, value, "max{til, rmix}", tiling.applicable && mixed.applicable, &[]);
    Ok(RainbowThresholds { tiling, mixed, rainbow })
}

/// Ordered tiling threshold from an ordered profile. With only bounds on the
/// ordered critical chromatic number the result is an interval.
pub fn threshold_ordered(profile: &OrderedProfile) -> ThresholdReport {
    let r = profile.chi_interval;
    if r < 3 {
        return ThresholdReport::new("otil_F", 1, Value::unknown(), "needs interval chromatic number >= 3", false, &[
            "chi<(F) >= 3",
        ]);
    }
    let rq = qi(r as i64);
    let lo = qi(profile.chi_crit_lower as i64);
    let cone = profile.ordered_cone == Some(true);
    // f(c) is nondecreasing in c on both branches
    let f = |c: &Q| -> Q {
        if *c >= rq || cone {
            one_minus_inv(c)
        } else {
            one_minus_inv(&rq)
        }
    };
    let lower = f(&lo.max(qi(1)));
    let upper = match &profile.chi_crit_upper {
        Some(hi) => f(hi),
        None => qi(1),
    };
    let formula = if cone { "1 - 1/chi<_crit (ordered cone)" } else { "1 - 1/max{chi<_crit, chi<}" };
    ThresholdReport::new("otil_F", 1, Value::bounds(lower, upper), formula, true, &["chi<(F) >= 3"])
}

/// Bounds on the vertex degree threshold of perfect matchings in `s`-graphs.
pub fn matching_threshold_bounds(s: usize) -> Result<ThresholdReport> {
    if s < 2 {
        return Err(Error::input("matching thresholds need s >= 2"));
    }
    let upper = qi(1) - q(1, s as i64);
    Ok(ThresholdReport::new("mat_s", 1, Value::bounds(q(1, 2), upper), "[1/2, 1 - 1/s]", true, &[]))
}

/// Connectivity threshold for `k`-partite tiles at degree `d`.
pub fn connectivity_threshold(k: usize, d: usize) -> Result<ThresholdReport> {
    if k < 2 || d == 0 || d >= k {
        return Err(Error::input(format!("need k >= 2 and 1 <= d < k, got k={k}, d={d}")));
    }
    if d == 1 {
        let den = 1i64.checked_shl(k as u32 - 1).filter(|&x| x > 0).ok_or(Error::Overflow("2^(k-1)"))?;
        Ok(ThresholdReport::new("con_F", 1, Value::exact(q(1, den)), "2^(1-k)", true, &[]))
    } else {
        Ok(ThresholdReport::new("con_F", d, Value::exact(qi(0)), "0 for d >= 2", true, &[]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridMax {
    pub steps: u32,
    pub max_sum: f64,
    pub argmax: [f64; 3],
    pub feasible: u64,
}

/// Exhaustive grid over `(d1, d2, d3) ∈ [0,1]^3` with step `1/steps` subject to
/// `d1 + d <= (1 - max{sqrt(d2 + d3/2), d})^2`, `d = d1 + d2 + d3 <= 1`.
/// The left side grows and the right side shrinks with `d1`, so each `(d2, d3)`
/// column is scanned upward until the first infeasible point.
pub fn optimisation_grid_max(steps: u32) -> GridMax {
    let h = 1.0 / steps as f64;
    let feasible_at = |d1: f64, d2: f64, d3: f64| {
        let d = d1 + d2 + d3;
        let m = (d2 + d3 / 2.0).sqrt().max(d);
        d <= 1.0 && d1 + d <= (1.0 - m) * (1.0 - m)
    };
    let mut best = GridMax { steps, max_sum: f64::NEG_INFINITY, argmax: [0.0; 3], feasible: 0 };
    for j in 0..=steps {
        let d2 = j as f64 * h;
        for l in 0..=(steps - j) {
            let d3 = l as f64 * h;
            for i in 0..=steps {
                let d1 = i as f64 * h;
                if !feasible_at(d1, d2, d3) {
                    break;
                }
                best.feasible += 1;
                let s = d1 + d2 + d3;
                if s > best.max_sum {
                    best.max_sum = s;
                    best.argmax = [d1, d2, d3];
                }
            }
        }
    }
    best
}
