//! Closed-form norms, extremal functions and the inequalities of different
//! metrics that follow from the exact rules.
//!
//! Every check returns an [`InequalityReport`] carrying both sides. Sup-norms
//! come from a dense grid refined by golden-section search around the three
//! largest local maxima, so they are lower bounds on the true supremum that
//! are tight to roundoff for the smooth functions involved. Integral norms
//! on the right-hand sides come from the exact rules where the theory uses
//! them and from the oracle everywhere else.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::blaschke::{BlaschkeSystem, CirclePoleConfig, HalfPlanePoleConfig};
use crate::chebyshev;
use crate::error::{Error, Result};
use crate::oracle::{self, LpDomain, Tolerance};
use crate::quadrature::{self, check_profile, QuadratureRule, RuleKind};
use crate::rational::{
    Evaluate, Pole, PoleProfile, PoleStructure, RationalFunction, SimplePartialFraction,
};

/// Relative slack tolerated before a report counts as violated.
pub const SLACK_TOLERANCE: f64 = 1e-9;

/// Grid size of the sup-norm scans on `[0, 2π]`, `[-1, 1]` and the
/// compactified line.
pub const SUP_GRID: usize = 8192;

const GOLDEN_ITERATIONS: usize = 120;
const CAUCHY_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityName {
    Eq11,
    Eq12,
    Eq13,
    Eq27,
    Eq28,
    Eq29,
    Eq30,
    Eq31,
    Eq32,
    Eq35,
    Eq37,
    Eq40,
    Eq41,
}

impl InequalityName {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityName::Eq11 => "eq11",
            InequalityName::Eq12 => "eq12",
            InequalityName::Eq13 => "eq13",
            InequalityName::Eq27 => "eq27",
            InequalityName::Eq28 => "eq28",
            InequalityName::Eq29 => "eq29",
            InequalityName::Eq30 => "eq30",
            InequalityName::Eq31 => "eq31",
            InequalityName::Eq32 => "eq32",
            InequalityName::Eq35 => "eq35",
            InequalityName::Eq37 => "eq37",
            InequalityName::Eq40 => "eq40",
            InequalityName::Eq41 => "eq41",
        }
    }
}

/// `lhs ≤ rhs` with its slack and ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: InequalityName,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub ratio: f64,
    pub params: BTreeMap<String, Value>,
}

impl InequalityReport {
    pub fn new(name: InequalityName, lhs: f64, rhs: f64) -> Self {
        Self {
            name,
            lhs,
            rhs,
            slack: rhs - lhs,
            ratio: lhs / rhs,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// `slack ≥ -1e-9 · max(|lhs|, |rhs|)`.
    pub fn holds(&self) -> bool {
        self.slack >= -SLACK_TOLERANCE * self.lhs.abs().max(self.rhs.abs())
    }
}

/// Location and value of a numerically found supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sup {
    pub arg: f64,
    pub value: f64,
}

/// `sup g` over `[a, b]` on a grid of `grid` cells, refined by golden-section
/// search around the three largest local maxima. A periodic scan treats `a`
/// and `b` as the same point.
pub fn sup_scan(g: impl Fn(f64) -> f64, a: f64, b: f64, grid: usize, periodic: bool) -> Sup {
    let grid = grid.max(8);
    let h = (b - a) / grid as f64;
    let count = if periodic { grid } else { grid + 1 };
    let ts: Vec<f64> = (0..count).map(|i| a + h * i as f64).collect();
    let vals: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let v = g(t);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        })
        .collect();
    let neighbour = |i: usize, step: isize| -> f64 {
        let j = i as isize + step;
        if j < 0 || j >= count as isize {
            if periodic {
                vals[j.rem_euclid(count as isize) as usize]
            } else {
                f64::NEG_INFINITY
            }
        } else {
            vals[j as usize]
        }
    };
    let mut peaks: Vec<usize> = (0..count)
        .filter(|&i| vals[i] >= neighbour(i, -1) && vals[i] >= neighbour(i, 1))
        .collect();
    peaks.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    peaks.truncate(3);

    let mut best = (0..count).fold(
        Sup {
            arg: a,
            value: f64::NEG_INFINITY,
        },
        |s, i| {
            if vals[i] > s.value {
                Sup {
                    arg: ts[i],
                    value: vals[i],
                }
            } else {
                s
            }
        },
    );
    for i in peaks {
        let (mut lo, mut hi) = (ts[i] - h, ts[i] + h);
        if !periodic {
            lo = lo.max(a);
            hi = hi.min(b);
        }
        let cand = golden_max(&g, lo, hi);
        if cand.value > best.value {
            best = cand;
        }
    }
    if periodic {
        best.arg = a + (best.arg - a).rem_euclid(b - a);
    }
    best
}

fn golden_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Sup {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let eval = |t: f64| {
        let v = g(t);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let mut best = [lo, hi]
        .iter()
        .map(|&t| Sup { arg: t, value: eval(t) })
        .fold(Sup { arg: lo, value: f64::NEG_INFINITY }, |a, b| if b.value > a.value { b } else { a });
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best.value {
            best = Sup { arg: t, value: v };
        }
    }
    best
}

/// Sup over the circle `|ζ| = r` of `g(ζ)`.
fn sup_circle(g: impl Fn(Complex64) -> f64, r: f64, grid: usize) -> Sup {
    sup_scan(|t| g(Complex64::from_polar(r, t)), 0.0, 2.0 * PI, grid, true)
}

/// Sup over ℝ of `g(x)` through `x = tan(u/2)`.
fn sup_line(g: impl Fn(f64) -> f64, grid: usize) -> Sup {
    let s = sup_scan(|u| g((0.5 * u).tan()), -PI, PI, grid, false);
    Sup {
        arg: (0.5 * s.arg).tan(),
        value: s.value,
    }
}

fn abs_or_nan(f: &impl Evaluate, z: Complex64) -> f64 {
    f.evaluate(z).map_or(f64::NAN, |v| v.norm())
}

fn circle_grid(s: u32, n: usize) -> usize {
    4096.max(64 * s as usize * n)
}

/// `m(p)`: the least integer with `2m ≥ p`.
pub fn m_of_p(p: f64) -> u32 {
    ((p / 2.0).ceil() as u32).max(1)
}

fn validate_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("p must be positive, got {p}")))
    }
}

/// `‖μ‖²_{L₂(|ζ|=r)} = 2πr (n² + 2 Σ_{j,k} z_k conj(z_j) / (r² - z_k conj(z_j)))`,
/// the double sum over the nonzero poles.
pub fn mu_l2_closed(cfg: &CirclePoleConfig) -> f64 {
    let r2 = cfg.radius() * cfg.radius();
    let n = cfg.len() as f64;
    let poles: Vec<Complex64> = cfg.nonzero_poles().collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &zj in &poles {
        for &zk in &poles {
            let w = zk * zj.conj();
            acc += w / (r2 - w);
        }
    }
    2.0 * PI * cfg.radius() * (n * n + 2.0 * acc.re)
}

/// `‖ρ_n‖²_{L₂(ℝ)} = 2π Σ_{k,m} (y_k + y_m) / ((x_k - x_m)² + (y_k + y_m)²)`
/// for upper half-plane poles.
pub fn spf_l2_closed(p: &SimplePartialFraction) -> f64 {
    let mut acc = 0.0;
    for a in p.poles() {
        for b in p.poles() {
            let dy = a.im + b.im;
            let dx = a.re - b.re;
            acc += dy / (dx * dx + dy * dy);
        }
    }
    2.0 * PI * acc
}

/// The extremal function `R(z) = (B^s(z) - e^{iφ} B^{-s}(z)) / (z - ζ₁)`,
/// where `ζ₁` is a node of `B^{2s} = e^{iφ}`.
///
/// `R` vanishes at every other node, and `|R|²/μ` attains the bound of the
/// pointwise inequality at `ζ₁`. The removable singularity at `ζ₁` is
/// evaluated through a Cauchy integral on a small circle around it.
#[derive(Debug, Clone)]
pub struct ExtremalCircle {
    sys: BlaschkeSystem,
    cfg: CirclePoleConfig,
    s: u32,
    target: Complex64,
    anchor: Complex64,
    cauchy_radius: f64,
}

impl ExtremalCircle {
    /// Anchored at the first node of `B^{2s} = e^{iφ}`.
    pub fn new(cfg: &CirclePoleConfig, s: u32, phi: f64) -> Result<Self> {
        let sys = BlaschkeSystem::circle(cfg.clone());
        let nodes = sys.solve_nodes(2 * s, phi)?;
        Ok(Self::build(cfg, s, Complex64::from_polar(1.0, nodes.phi), nodes.nodes[0]))
    }

    /// Anchored at `ζ₁ = r e^{i t₀}`, with `e^{iφ} = B^{2s}(ζ₁)`.
    pub fn anchored(cfg: &CirclePoleConfig, s: u32, t0: f64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let sys = BlaschkeSystem::circle(cfg.clone());
        let anchor = sys.contour_point(t0);
        let b = sys.eval(anchor)?;
        let target = b.powu(2 * s);
        Ok(Self::build(cfg, s, target / target.norm(), anchor))
    }

    fn build(cfg: &CirclePoleConfig, s: u32, target: Complex64, anchor: Complex64) -> Self {
        let dist = cfg
            .inner_poles()
            .iter()
            .map(|&a| (anchor - a).norm())
            .chain(cfg.reflected_poles().iter().map(|&b| (anchor - b).norm()))
            .fold(f64::INFINITY, f64::min);
        Self {
            sys: BlaschkeSystem::circle(cfg.clone()),
            cfg: cfg.clone(),
            s,
            target,
            anchor,
            cauchy_radius: (1e-3 * cfg.radius()).min(0.25 * dist),
        }
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    pub fn phi(&self) -> f64 {
        self.target.arg().rem_euclid(2.0 * PI)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `R(ζ₁) = 2s e^{iφ} μ(ζ₁) B^{-s}(ζ₁) / ζ₁`, so `|R(ζ₁)| = 2sμ(ζ₁)/r`.
    pub fn value_at_anchor(&self) -> Result<Complex64> {
        let b = self.sys.eval(self.anchor)?;
        let mu = self.sys.mu(self.anchor)?;
        Ok(2.0 * self.s as f64 * self.target * mu * b.powu(self.s).inv() / self.anchor)
    }

    fn direct(&self, z: Complex64) -> Result<Complex64> {
        let bs = self.sys.eval(z)?.powu(self.s);
        Ok((bs - self.target / bs) / (z - self.anchor))
    }

    fn cauchy(&self, z: Complex64) -> Result<Complex64> {
        let rho = self.cauchy_radius;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..CAUCHY_POINTS {
            let e = Complex64::from_polar(rho, 2.0 * PI * j as f64 / CAUCHY_POINTS as f64);
            let w = self.anchor + e;
            acc += self.direct(w)? * e / (w - z);
        }
        Ok(acc / CAUCHY_POINTS as f64)
    }
}

impl Evaluate for ExtremalCircle {
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if (z - self.anchor).norm() < 0.5 * self.cauchy_radius {
            self.cauchy(z)
        } else {
            self.direct(z)
        }
    }
}

impl PoleStructure for ExtremalCircle {
    /// Order `s` at every inner pole (0 included) and every reflected pole,
    /// order `s - 1` at infinity.
    fn pole_profile(&self) -> PoleProfile {
        let mut p = PoleProfile::new();
        for &a in self.cfg.inner_poles() {
            p.insert(Pole::Finite(a), self.s);
        }
        for b in self.cfg.reflected_poles() {
            p.insert(Pole::Finite(b), self.s);
        }
        p.insert(Pole::Infinity, self.s - 1);
        p
    }
}

/// Pointwise inequality `|R(ζ)|²/μ(ζ) ≤ (s/πr) ‖R‖²₂` on `|ζ| = r`, with the
/// left side maximized over a grid of at least `grid_size` points and the
/// norm from the L₂ rule at `rule_phi`.
pub fn check_eq11<F: PoleStructure>(
    f: &F,
    cfg: &CirclePoleConfig,
    s: u32,
    grid_size: usize,
    rule_phi: f64,
) -> Result<InequalityReport> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    check_profile(&f.pole_profile(), &sys, s, RuleKind::CircleL2)?.into_result()?;
    let r = cfg.radius();
    let norm_sq = QuadratureRule::circle_l2(&sys, s, rule_phi)?.integrate_abs_pow(f, 2)?;
    let grid = grid_size.max(circle_grid(s, cfg.len()));
    let sup = sup_circle(
        |z| {
            f.evaluate(z)
                .map_or(f64::NAN, |v| v.norm_sqr() / sys.mu_unchecked(z))
        },
        r,
        grid,
    );
    Ok(InequalityReport::new(InequalityName::Eq11, sup.value, s as f64 / (PI * r) * norm_sq)
        .with("s", s)
        .with("r", r)
        .with("n", cfg.len())
        .with("argmax", sup.arg))
}

/// The existence claim behind the equality `‖R*‖²_∞ = (s/πr)‖R*‖²₂ ‖μ‖_∞`:
/// anchors the extremal function where `μ` peaks and reports both sides.
pub fn probe_eq12(cfg: &CirclePoleConfig, s: u32) -> Result<InequalityReport> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    let r = cfg.radius();
    let grid = circle_grid(s, cfg.len());
    let mu_sup = sup_circle(|z| sys.mu_unchecked(z), r, grid);
    let ext = ExtremalCircle::anchored(cfg, s, mu_sup.arg)?;
    let norm_sq = QuadratureRule::circle_l2(&sys, s, ext.phi() + 1.0)?.integrate_abs_pow(&ext, 2)?;
    let f_sup = sup_circle(|z| abs_or_nan(&ext, z).powi(2), r, grid);
    Ok(InequalityReport::new(
        InequalityName::Eq12,
        f_sup.value,
        s as f64 / (PI * r) * norm_sq * mu_sup.value,
    )
    .with("s", s)
    .with("r", r)
    .with("n", cfg.len()))
}

/// `‖R‖_∞ ≤ (s/πr) ‖R‖₂ ‖μ‖₂` and `‖μ‖_∞ ≤ (1/πr) ‖μ‖²₂` on `|ζ| = r`.
pub fn check_eq13_eq27<F: PoleStructure>(
    f: &F,
    cfg: &CirclePoleConfig,
    s: u32,
) -> Result<(InequalityReport, InequalityReport)> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    check_profile(&f.pole_profile(), &sys, s, RuleKind::CircleL2)?.into_result()?;
    let r = cfg.radius();
    let grid = circle_grid(s, cfg.len());
    let norm_sq = QuadratureRule::circle_l2(&sys, s, 0.5)?.integrate_abs_pow(f, 2)?;
    let mu_sq = mu_l2_closed(cfg);
    let f_sup = sup_circle(|z| abs_or_nan(f, z), r, grid);
    let eq13 = InequalityReport::new(
        InequalityName::Eq13,
        f_sup.value,
        s as f64 / (PI * r) * norm_sq.sqrt() * mu_sq.sqrt(),
    )
    .with("s", s)
    .with("r", r)
    .with("n", cfg.len());
    Ok((eq13, check_eq27(cfg)))
}

/// `‖μ‖_∞ ≤ (1/πr) ‖μ‖²₂` with the closed-form norm.
pub fn check_eq27(cfg: &CirclePoleConfig) -> InequalityReport {
    let sys = BlaschkeSystem::circle(cfg.clone());
    let r = cfg.radius();
    let mu_sup = sup_circle(|z| sys.mu_unchecked(z), r, circle_grid(1, cfg.len()));
    InequalityReport::new(InequalityName::Eq27, mu_sup.value, mu_l2_closed(cfg) / (PI * r))
        .with("r", r)
        .with("n", cfg.len())
}

/// Ratios of the weight inequality for `{0, z₂}` as `z₂ = 0.97r, 0.99r,
/// 0.997r` approaches the circle.
pub fn eq27_tightness_probe(r: f64) -> Result<Vec<(f64, f64)>> {
    [0.97, 0.99, 0.997]
        .iter()
        .map(|&k| {
            let cfg = CirclePoleConfig::with_origin(r, &[Complex64::new(k * r, 0.0)])?;
            Ok((k * r, check_eq27(&cfg).ratio))
        })
        .collect()
}

/// A Laurent polynomial `Σ_{k=lowest}^{lowest+len-1} σ_k z^k`, evaluated on
/// the unit circle as a trigonometric polynomial `T(t) = Σ σ_k e^{ikt}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub lowest: i32,
    #[serde(with = "crate::rational::complex_list")]
    pub coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    pub fn new(lowest: i32, coeffs: Vec<Complex64>) -> Self {
        Self { lowest, coeffs }
    }

    /// `T*_s(t) = 1 + 2 Σ_{k=1}^{s-1} cos kt + e^{ist}`.
    pub fn t_star(s: u32) -> Self {
        let s = s as i32;
        Self::new(1 - s, vec![Complex64::new(1.0, 0.0); 2 * s as usize])
    }

    pub fn highest(&self) -> i32 {
        self.lowest + self.coeffs.len() as i32 - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let horner = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c);
        horner * z.powi(self.lowest)
    }

    pub fn eval_t(&self, t: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, t))
    }

    /// Least `s` with `mult(0) + mult(∞) ≤ 2s - 1`.
    pub fn class_level(&self) -> u32 {
        let m0 = (-self.lowest).max(0) as u32;
        let minf = self.highest().max(0) as u32;
        (m0 + minf + 2) / 2
    }

    pub fn to_rational(&self) -> RationalFunction {
        RationalFunction::laurent(self.lowest, &self.coeffs)
    }
}

/// `‖T‖_∞ ≤ (m/π)^{1/p} s^{1/p} ‖T‖_{L_p[0,2π]}` for `T` in the class of
/// level `s = T.class_level()`.
pub fn check_trig_eq28(t: &LaurentPoly, p: f64) -> Result<InequalityReport> {
    validate_p(p)?;
    let s = t.class_level();
    let m = m_of_p(p);
    let sup = sup_scan(|x| t.eval_t(x).norm(), 0.0, 2.0 * PI, SUP_GRID, true);
    let lp = oracle::lp_norm(
        |z| t.eval_t(z.re),
        LpDomain::Interval { a: 0.0, b: 2.0 * PI },
        p,
        Tolerance::default(),
    )?;
    let c = (m as f64 / PI).powf(1.0 / p);
    Ok(
        InequalityReport::new(InequalityName::Eq28, sup.value, c * (s as f64).powf(1.0 / p) * lp.value)
            .with("s", s)
            .with("p", p)
            .with("m", m),
    )
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c)
}

fn degree(coeffs: &[Complex64]) -> usize {
    coeffs
        .iter()
        .rposition(|c| *c != Complex64::new(0.0, 0.0))
        .unwrap_or(0)
}

/// `P*_{2s-1}(z) = (z^{2s} - r^{2s}) / (z - r) = Σ_{k<2s} r^{2s-1-k} z^k`.
pub fn p_star(s: u32, r: f64) -> Vec<Complex64> {
    (0..2 * s)
        .map(|k| Complex64::new(r.powi((2 * s - 1 - k) as i32), 0.0))
        .collect()
}

/// `‖P‖_{L_∞(γ_r)} ≤ (m/(πr))^{1/p} s^{1/p} ‖P‖_{L_p(γ_r)}` for `deg P ≤ 2s - 1`,
/// `s` the least admissible level.
pub fn check_poly_eq29(coeffs: &[Complex64], r: f64, p: f64) -> Result<InequalityReport> {
    validate_p(p)?;
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let s = (degree(coeffs) as u32 + 2) / 2;
    let m = m_of_p(p);
    let sup = sup_circle(|z| poly_eval(coeffs, z).norm(), r, SUP_GRID);
    let lp = oracle::lp_norm(|z| poly_eval(coeffs, z), LpDomain::Circle { radius: r }, p, Tolerance::default())?;
    let c = (m as f64 / (PI * r)).powf(1.0 / p);
    Ok(
        InequalityReport::new(InequalityName::Eq29, sup.value, c * (s as f64).powf(1.0 / p) * lp.value)
            .with("s", s)
            .with("p", p)
            .with("r", r)
            .with("m", m),
    )
}

/// Number of `φ` values in the sweep of [`check_eq30`].
pub const EQ30_STEPS: usize = 512;

/// `max_φ |Σ_k T(t_k(φ))| ≤ (s/2π) ‖T‖_{L₁[0,2π]}` with `t_k = arg ζ_k` the
/// nodes of `ζ^s = e^{iφ}` (configuration `{0}`, `r = 1`).
pub fn check_eq30(t: &LaurentPoly, s: u32) -> Result<InequalityReport> {
    if s == 0 || t.lowest < 1 - s as i32 || t.highest() > s as i32 - 1 {
        return Err(Error::InvalidArgument(format!(
            "trigonometric polynomial must have degree at most s - 1 = {}",
            s as i32 - 1
        )));
    }
    let sys = BlaschkeSystem::circle(CirclePoleConfig::new(1.0, vec![Complex64::new(0.0, 0.0)])?);
    let mut lhs = 0.0f64;
    for j in 0..EQ30_STEPS {
        let phi = 2.0 * PI * j as f64 / EQ30_STEPS as f64;
        let nodes = sys.solve_nodes(s, phi)?;
        let sum: Complex64 = nodes.params.iter().map(|&tk| t.eval_t(tk)).sum();
        lhs = lhs.max(sum.norm());
    }
    let l1 = oracle::lp_norm(
        |z| t.eval_t(z.re),
        LpDomain::Interval { a: 0.0, b: 2.0 * PI },
        1.0,
        Tolerance::default(),
    )?;
    Ok(InequalityReport::new(InequalityName::Eq30, lhs, s as f64 / (2.0 * PI) * l1.value)
        .with("s", s)
        .with("steps", EQ30_STEPS))
}

/// `‖P‖_{L_∞[-1,1]} ≤ (2m/π)^{1/p} s^{1/p} (∫ |P|^p / √(1-x²))^{1/p}` with
/// `s = deg P + 1`.
pub fn check_segment_eq31(coeffs: &[Complex64], p: f64) -> Result<InequalityReport> {
    validate_p(p)?;
    let s = degree(coeffs) as u32 + 1;
    let m = m_of_p(p);
    let sup = sup_scan(|x| poly_eval(coeffs, Complex64::new(x, 0.0)).norm(), -1.0, 1.0, SUP_GRID, false);
    let lp = oracle::lp_norm(|z| poly_eval(coeffs, z), LpDomain::SegmentWeighted, p, Tolerance::default())?;
    let c = (2.0 * m as f64 / PI).powf(1.0 / p);
    Ok(
        InequalityReport::new(InequalityName::Eq31, sup.value, c * (s as f64).powf(1.0 / p) * lp.value)
            .with("s", s)
            .with("p", p)
            .with("m", m),
    )
}

/// `|U_{s-1}(1)| = √(s/π) ‖U_{s-1}‖_{*,2}`, the equality case of the segment
/// inequality at `p = 2`.
pub fn check_eq32(s: u32) -> Result<InequalityReport> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let norm = oracle::lp_norm(
        |z| Complex64::new(chebyshev::second_kind(s - 1, z.re), 0.0),
        LpDomain::SegmentWeighted,
        2.0,
        Tolerance::default(),
    )?;
    Ok(InequalityReport::new(
        InequalityName::Eq32,
        chebyshev::second_kind(s - 1, 1.0).abs(),
        (s as f64 / PI).sqrt() * norm.value,
    )
    .with("s", s))
}

/// The segment inequality for `P` and the equality case at level
/// `deg P + 1`.
pub fn check_segment_eq31_eq32(
    coeffs: &[Complex64],
    p: f64,
) -> Result<(InequalityReport, InequalityReport)> {
    let eq31 = check_segment_eq31(coeffs, p)?;
    let s = degree(coeffs) as u32 + 1;
    Ok((eq31, check_eq32(s)?))
}

/// Reports of the real-line inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneReports {
    /// `‖R‖_∞ ≤ (2s/π) ‖R‖₂ ‖μ₁‖₂`.
    pub rational: InequalityReport,
    /// `‖μ₁‖_∞ ≤ (2/π) ‖μ₁‖²₂`.
    pub weight: InequalityReport,
    /// `max |R(x)|²/μ₁(x) ≤ (2s/π) ‖R‖²₂`.
    pub pointwise: InequalityReport,
}

impl HalfPlaneReports {
    pub fn all(&self) -> [&InequalityReport; 3] {
        [&self.rational, &self.weight, &self.pointwise]
    }
}

/// The three inequalities on ℝ for an admissible proper fraction `f`.
pub fn check_halfplane_eq35(
    f: &RationalFunction,
    cfg: &HalfPlanePoleConfig,
    s: u32,
) -> Result<HalfPlaneReports> {
    let norm_sq = quadrature::halfplane_l2(f, cfg, s, PI)?;
    let sys = BlaschkeSystem::half_plane(cfg.clone());
    let rho = SimplePartialFraction::new(cfg.upper_poles().to_vec());
    let mu_sq = 0.5 * spf_l2_closed(&rho);
    let grid = SUP_GRID.max(64 * s as usize * cfg.len());
    let mu = |x: f64| sys.mu_unchecked(Complex64::new(x, 0.0));
    let f_sup = sup_line(|x| abs_or_nan(f, Complex64::new(x, 0.0)), grid);
    let mu_sup = sup_line(mu, grid);
    let point_sup = sup_line(|x| abs_or_nan(f, Complex64::new(x, 0.0)).powi(2) / mu(x), grid);
    let sf = s as f64;
    let tag = |r: InequalityReport, form: &str| r.with("form", form).with("s", s).with("n", cfg.len());
    Ok(HalfPlaneReports {
        rational: tag(
            InequalityReport::new(InequalityName::Eq35, f_sup.value, 2.0 * sf / PI * norm_sq.sqrt() * mu_sq.sqrt()),
            "rational",
        ),
        weight: tag(InequalityReport::new(InequalityName::Eq35, mu_sup.value, 2.0 / PI * mu_sq), "weight"),
        pointwise: tag(
            InequalityReport::new(InequalityName::Eq35, point_sup.value, 2.0 * sf / PI * norm_sq),
            "pointwise",
        ),
    })
}

/// Reports of the simple-partial-fraction inequalities on `|ζ| = r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpfReports {
    /// `‖ρ_n‖_∞ ≤ 3η ln(rη + 1)`, `η = ‖ρ_n + R‖_∞`.
    pub eq37: InequalityReport,
    /// `η² / (6rη ln(1+η) - n + 1) ≤ (s/πr) ‖ρ‖²₂`.
    pub eq40_quadratic: InequalityReport,
    /// `η / ln(1+η) ≤ (6s/π) ‖ρ‖²₂`.
    pub eq40_log: InequalityReport,
    /// `max |ρ_n|² / (2r|ρ_n| - (n-1)) ≤ (1/πr) ‖ρ_n‖²₂`.
    pub eq41_pointwise: InequalityReport,
    /// `‖ρ_n‖_∞ ≤ (2/π) ‖ρ_n‖²₂`.
    pub eq41: InequalityReport,
}

impl SpfReports {
    pub fn all(&self) -> [&InequalityReport; 5] {
        [
            &self.eq37,
            &self.eq40_quadratic,
            &self.eq40_log,
            &self.eq41_pointwise,
            &self.eq41,
        ]
    }
}

/// The pole set `{z_k} ∪ {0}` of a simple partial fraction inside `|z| = r`.
pub fn spf_circle_config(p: &SimplePartialFraction, r: f64) -> Result<CirclePoleConfig> {
    let mut others: Vec<Complex64> = Vec::new();
    for &z in p.poles() {
        if z != Complex64::new(0.0, 0.0) && !others.contains(&z) {
            others.push(z);
        }
    }
    CirclePoleConfig::with_origin(r, &others)
}

/// The SPF sup bound and its two consequences for `ρ = ρ_n + R` on `|ζ| = r`,
/// where `R` has poles only on the reflected set, of order at most `s`, and
/// vanishes at infinity.
pub fn check_spf_eq37_eq40_eq41(
    p: &SimplePartialFraction,
    tail: &RationalFunction,
    r: f64,
    s: u32,
) -> Result<SpfReports> {
    if p.order() == 0 {
        return Err(Error::InvalidArgument("simple partial fraction has no poles".into()));
    }
    let cfg = spf_circle_config(p, r)?;
    if !tail.is_proper() || !tail.poly_inv().is_empty() {
        return Err(Error::InvalidArgument(
            "tail must vanish at infinity and have no pole at 0".into(),
        ));
    }
    // Tail poles must lie on the reflected set, which the L₂ class checks
    // once ρ_n's own poles are accounted for.
    let reflected = cfg.reflected_poles();
    for (z, _) in tail.pole_multiplicity_profile().finite_nonzero() {
        if !reflected.iter().any(|&b| (z - b).norm() <= quadrature::POLE_MATCH * cfg.scale()) {
            return Err(Error::InvalidArgument(format!(
                "tail pole {z} is not a reflected pole of the configuration"
            )));
        }
    }
    let rho_n = p.to_rational();
    let rho = rho_n.sum(tail);
    let n = p.order() as f64;
    let grid = circle_grid(s, cfg.len());

    let rho_sq = quadrature::circle_l2(&rho, &cfg, s, 0.5)?;
    let rho_n_sq = quadrature::circle_l2(&rho_n, &cfg, 1, 0.5)?;
    let eta = sup_circle(|z| abs_or_nan(&rho, z), r, grid).value;
    let rho_n_inf = sup_circle(|z| abs_or_nan(&rho_n, z), r, grid).value;
    let pointwise = sup_circle(
        |z| {
            let v = abs_or_nan(&rho_n, z);
            v * v / (2.0 * r * v - (n - 1.0))
        },
        r,
        grid,
    )
    .value;
    let sf = s as f64;
    let tag = |rep: InequalityReport| rep.with("r", r).with("n", p.order()).with("s", s);
    Ok(SpfReports {
        eq37: tag(InequalityReport::new(InequalityName::Eq37, rho_n_inf, 3.0 * eta * (r * eta + 1.0).ln()))
            .with("eta", eta),
        eq40_quadratic: tag(InequalityReport::new(
            InequalityName::Eq40,
            eta * eta / (6.0 * r * eta * (1.0 + eta).ln() - n + 1.0),
            sf / (PI * r) * rho_sq,
        ))
        .with("form", "quadratic")
        .with("eta", eta),
        eq40_log: tag(InequalityReport::new(
            InequalityName::Eq40,
            eta / (1.0 + eta).ln(),
            6.0 * sf / PI * rho_sq,
        ))
        .with("form", "log")
        .with("eta", eta),
        eq41_pointwise: tag(InequalityReport::new(InequalityName::Eq41, pointwise, rho_n_sq / (PI * r)))
            .with("form", "pointwise"),
        eq41: tag(InequalityReport::new(InequalityName::Eq41, rho_n_inf, 2.0 / PI * rho_n_sq))
            .with("form", "sup"),
    })
}

/// Serializable form of a report list, sorted by name then parameters.
pub fn sorted_reports(mut reports: Vec<InequalityReport>) -> Vec<InequalityReport> {
    reports.sort_by(|a, b| {
        a.name
            .cmp(&b.name)
            .then_with(|| json!(a.params).to_string().cmp(&json!(b.params).to_string()))
    });
    reports
}
