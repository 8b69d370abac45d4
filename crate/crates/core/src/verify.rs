//! Seeded verification suites comparing every rule, closed form and
//! inequality against the oracle, and the manifest that records a run.
//!
//! Each [`Row`] belongs to one suite and one acceptance criterion and
//! carries the measured quantity, its threshold and the verdict. Rows are
//! sorted by `(suite, check, case)` so manifests are byte-identical for the
//! same seed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::blaschke::{BlaschkeSystem, CirclePoleConfig, HalfPlanePoleConfig, SegmentPoleConfig};
use crate::chebyshev;
use crate::error::{Error, Result};
use crate::oracle::{self, Tolerance};
use crate::quadrature::{self, check_admissible, QuadratureRule, RuleKind};
use crate::rational::{Evaluate, PartialFractionTerm, RationalFunction, SimplePartialFraction};
use crate::sharp::{self, ExtremalCircle, InequalityReport, LaurentPoly};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Rule-versus-oracle tolerance.
pub const EXACTNESS_TOL: f64 = 1e-9;
/// Spread over `φ` and weight-sum identity tolerance.
pub const INVARIANCE_TOL: f64 = 1e-10;
/// Minimum rule-versus-oracle gap of a negative control.
pub const NEGATIVE_GAP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    Exactness,
    PhiInvariance,
    Inequalities,
    Sharpness,
    ClosedNorms,
    NegativeControls,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma1,
        Suite::Exactness,
        Suite::PhiInvariance,
        Suite::Inequalities,
        Suite::Sharpness,
        Suite::ClosedNorms,
        Suite::NegativeControls,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Exactness => "exactness",
            Suite::PhiInvariance => "phi-invariance",
            Suite::Inequalities => "inequalities",
            Suite::Sharpness => "sharpness",
            Suite::ClosedNorms => "closed-norms",
            Suite::NegativeControls => "negative-controls",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A suite name or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    One(Suite),
    All,
}

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Selection::One(s) => vec![s],
            Selection::All => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .iter()
            .find(|x| x.as_str() == s)
            .map(|&x| Selection::One(x))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::One(s) => write!(f, "{s}"),
            Selection::All => f.write_str("all"),
        }
    }
}

/// One verified quantity.
///
/// `value` is compared with `threshold` according to `comparison`:
/// `"<"` for errors, `">="` for ratios and gaps that must be large.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub suite: Suite,
    pub criterion: u8,
    pub check: String,
    pub case: u32,
    pub value: f64,
    pub comparison: String,
    pub threshold: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<InequalityReport>,
}

impl Row {
    fn below(suite: Suite, criterion: u8, check: &str, case: u32, value: f64, threshold: f64) -> Self {
        Self {
            suite,
            criterion,
            check: check.to_string(),
            case,
            value,
            comparison: "<".into(),
            threshold,
            pass: value < threshold,
            details: BTreeMap::new(),
            report: None,
        }
    }

    fn at_least(suite: Suite, criterion: u8, check: &str, case: u32, value: f64, threshold: f64) -> Self {
        Self {
            comparison: ">=".into(),
            pass: value >= threshold,
            ..Self::below(suite, criterion, check, case, value, threshold)
        }
    }

    fn from_report(suite: Suite, criterion: u8, check: &str, case: u32, rep: InequalityReport) -> Self {
        let scale = rep.lhs.abs().max(rep.rhs.abs());
        let rel_slack = if scale > 0.0 { rep.slack / scale } else { 0.0 };
        Self {
            report: Some(rep),
            ..Self::at_least(suite, criterion, check, case, rel_slack, -sharp::SLACK_TOLERANCE)
        }
    }

    /// A row recording a failure to compute the quantity at all.
    fn error(suite: Suite, criterion: u8, check: &str, case: u32, err: &Error) -> Self {
        let mut row = Self::below(suite, criterion, check, case, f64::NAN, 0.0);
        row.pass = false;
        row.details.insert("error".into(), json!(err.to_string()));
        row
    }

    fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn rel_c(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Collects the rows of one computation, turning errors into failed rows.
fn push(rows: &mut Vec<Row>, suite: Suite, criterion: u8, check: &str, case: u32, r: Result<Vec<Row>>) {
    match r {
        Ok(mut v) => rows.append(&mut v),
        Err(e) => rows.push(Row::error(suite, criterion, check, case, &e)),
    }
}

// ---------------------------------------------------------------------------
// Random inputs.

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A complex coefficient of modulus in `[lo, hi]`.
pub fn random_coef(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..=hi), rng.gen_range(0.0..2.0 * PI))
}

pub fn random_radius(rng: &mut impl Rng) -> f64 {
    [0.5, 1.0, 2.0][rng.gen_range(0..3)]
}

/// `0` plus `n - 1` poles with `0.15r ≤ |z| ≤ 0.8r`, pairwise at least
/// `0.15r` apart.
pub fn random_circle_config(rng: &mut impl Rng, r: f64, n: usize) -> CirclePoleConfig {
    let mut poles: Vec<Complex64> = Vec::new();
    while poles.len() + 1 < n {
        let z = Complex64::from_polar(r * rng.gen_range(0.15..0.8), rng.gen_range(0.0..2.0 * PI));
        if poles.iter().all(|&p| (p - z).norm() >= 0.15 * r) {
            poles.push(z);
        }
    }
    CirclePoleConfig::with_origin(r, &poles).expect("generated configuration is valid")
}

/// Full principal part of order `order` at `pole` with random coefficients.
fn principal_part(rng: &mut impl Rng, pole: Complex64, order: u32, scale: f64) -> Vec<PartialFractionTerm> {
    (1..=order)
        .map(|k| PartialFractionTerm::new(pole, k, random_coef(rng, 0.5, 10.0) * scale.powi(k as i32)))
        .collect()
}

fn random_tail(rng: &mut impl Rng, len: usize, scale: f64) -> Vec<Complex64> {
    (0..len).map(|k| random_coef(rng, 0.5, 10.0) * scale.powi(k as i32)).collect()
}

/// Orders at 0 and ∞ for a random function on the circle.
#[derive(Debug, Clone, Copy)]
pub enum CircleClass {
    /// Each of 0 and ∞ of order at most `s - 1`.
    Integral,
    /// `mult(0) + mult(∞) ≤ 2s - 1`; `boundary` forces equality.
    L2 { boundary: bool },
}

/// A random function admissible for the circle rules at level `s`: every
/// finite nonzero pole of the configuration and its reflection carries a
/// principal part of random order `≤ s`, and the Laurent tails follow
/// `class`. The constant term has modulus at least 1.
pub fn random_circle_function(
    rng: &mut impl Rng,
    cfg: &CirclePoleConfig,
    s: u32,
    class: CircleClass,
) -> RationalFunction {
    let r = cfg.radius();
    let mut terms = Vec::new();
    for a in cfg.nonzero_poles() {
        let k = rng.gen_range(0..=s);
        terms.extend(principal_part(rng, a, k, r * 0.2));
    }
    for b in cfg.reflected_poles() {
        let k = rng.gen_range(0..=s);
        terms.extend(principal_part(rng, b, k, r));
    }
    let (m0, minf) = match class {
        CircleClass::Integral => (rng.gen_range(0..s), rng.gen_range(0..s)),
        CircleClass::L2 { boundary } => {
            let total = if boundary { 2 * s - 1 } else { rng.gen_range(0..2 * s) };
            let m0 = rng.gen_range(0..=total);
            (m0, total - m0)
        }
    };
    let mut poly = random_tail(rng, minf as usize + 1, 1.0 / r);
    poly[0] = random_coef(rng, 1.0, 10.0);
    let poly_inv = random_tail(rng, m0 as usize, r)
        .into_iter()
        .map(|c| c * r)
        .collect();
    RationalFunction::new(terms, poly, poly_inv)
}

/// Finite segment poles at distance at least `0.3` from `[-1, 1]`.
pub fn random_segment_config(rng: &mut impl Rng, count: usize) -> SegmentPoleConfig {
    let mut poles: Vec<Complex64> = Vec::new();
    while poles.len() < count {
        let z = if rng.gen_bool(0.25) {
            let x: f64 = rng.gen_range(1.3..3.0);
            Complex64::new(if rng.gen_bool(0.5) { x } else { -x }, 0.0)
        } else {
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.3..1.5))
        };
        if poles.iter().all(|&p| (p - z).norm() >= 0.2 && (p.conj() - z).norm() >= 0.2) {
            poles.push(z);
        }
    }
    SegmentPoleConfig::new(poles).expect("generated configuration is valid")
}

/// A random function admissible for the segment rules at level `s`.
pub fn random_segment_function(rng: &mut impl Rng, cfg: &SegmentPoleConfig, s: u32) -> RationalFunction {
    let mut terms = Vec::new();
    for w in cfg.pole_set() {
        let k = rng.gen_range(0..=s);
        terms.extend(principal_part(rng, w, k, 0.5));
    }
    let deg = rng.gen_range(0..s) as usize;
    let mut poly = random_tail(rng, deg + 1, 1.0);
    poly[0] = random_coef(rng, 1.0, 10.0);
    RationalFunction::new(terms, poly, vec![])
}

/// Upper half-plane poles with `0.3 ≤ Im z ≤ 2`, `|Re z| ≤ 2`, pairwise at
/// least `0.2` apart.
pub fn random_half_plane_config(rng: &mut impl Rng, n: usize) -> HalfPlanePoleConfig {
    let mut poles: Vec<Complex64> = Vec::new();
    while poles.len() < n {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..2.0));
        if poles.iter().all(|&p| (p - z).norm() >= 0.2) {
            poles.push(z);
        }
    }
    HalfPlanePoleConfig::new(poles).expect("generated configuration is valid")
}

/// A random proper fraction with poles in `{z_k} ∪ {conj z_k}` of order
/// `≤ s`, at least one of them present.
pub fn random_half_plane_function(rng: &mut impl Rng, cfg: &HalfPlanePoleConfig, s: u32) -> RationalFunction {
    let mut terms = Vec::new();
    for &z in cfg.upper_poles() {
        for p in [z, z.conj()] {
            let k = rng.gen_range(0..=s);
            terms.extend(principal_part(rng, p, k, 0.5));
        }
    }
    if terms.is_empty() {
        terms.extend(principal_part(rng, cfg.upper_poles()[0], 1, 0.5));
    }
    RationalFunction::new(terms, vec![], vec![])
}

fn random_phi(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.0..4.0 * PI)
}

/// `φ ∈ (0, 2π)` away from the endpoints, for the real line.
fn random_line_phi(rng: &mut impl Rng) -> f64 {
    rng.gen_range(0.05..2.0 * PI - 0.05)
}

// ---------------------------------------------------------------------------
// Oracle values.

fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn oracle_circle_integral(f: &impl Evaluate, r: f64) -> Result<Complex64> {
    Ok(oracle::integrate_circle(|z| f.evaluate(z).unwrap_or(Complex64::new(f64::NAN, 0.0)), r, tol())?.value)
}

pub fn oracle_circle_abs_pow(f: &impl Evaluate, r: f64, q: u32) -> Result<f64> {
    Ok(oracle::integrate_circle(
        |z| f.evaluate(z).map_or(f64::NAN, |v| v.norm_sqr().powf(0.5 * q as f64)),
        r,
        tol(),
    )?
    .value)
}

pub fn oracle_segment_integral(f: &impl Evaluate) -> Result<Complex64> {
    Ok(oracle::integrate_segment_weighted(
        |x| f.evaluate(Complex64::new(x, 0.0)).unwrap_or(Complex64::new(f64::NAN, 0.0)),
        tol(),
    )?
    .value)
}

pub fn oracle_segment_l2(f: &impl Evaluate) -> Result<f64> {
    Ok(oracle::integrate_segment_weighted(
        |x| f.evaluate(Complex64::new(x, 0.0)).map_or(f64::NAN, |v| v.norm_sqr()),
        tol(),
    )?
    .value)
}

pub fn oracle_line_l2(f: &impl Evaluate) -> Result<f64> {
    Ok(oracle::integrate_real_line(
        |x| f.evaluate(Complex64::new(x, 0.0)).map_or(f64::NAN, |v| v.norm_sqr()),
        tol(),
    )?
    .value)
}

// ---------------------------------------------------------------------------
// Examples with explicit nodes.

/// `(π/(3√2)) (|R(1)|² + (8/5)|R(√(3/5))|² + (8/7)|R(√(1/7))|² + (1/2)|R(0)|²)`.
pub fn segment_example_formula(f: &impl Evaluate) -> Result<f64> {
    let at = |x: f64| f.evaluate(Complex64::new(x, 0.0)).map(|v| v.norm_sqr());
    Ok(PI / (3.0 * 2f64.sqrt())
        * (at(1.0)? + 1.6 * at((0.6f64).sqrt())? + 8.0 / 7.0 * at((1.0f64 / 7.0).sqrt())? + 0.5 * at(0.0)?))
}

/// `(π/3)(|R(1)|² + |R(-1)|² + 2a(|R(a)|² + |R(-a)|²) + 2b(|R(b)|² + |R(-b)|²))`
/// with `a = 2 + √3`, `b = 2 - √3`.
pub fn half_plane_example_formula(f: &impl Evaluate) -> Result<f64> {
    let at = |x: f64| f.evaluate(Complex64::new(x, 0.0)).map(|v| v.norm_sqr());
    let a = 2.0 + 3f64.sqrt();
    let b = 2.0 - 3f64.sqrt();
    Ok(PI / 3.0
        * (at(1.0)? + at(-1.0)? + 2.0 * a * (at(a)? + at(-a)?) + 2.0 * b * (at(b)? + at(-b)?)))
}

/// `1/(x - i)^s`.
pub fn inverse_power_at_i(s: u32) -> RationalFunction {
    RationalFunction::from_terms(vec![PartialFractionTerm::new(
        Complex64::new(0.0, 1.0),
        s,
        Complex64::new(1.0, 0.0),
    )])
}

/// `∫ x^k / √(1 - x²) dx = π C(k, k/2) / 2^k` for even `k`, 0 for odd.
pub fn chebyshev_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut v = PI;
    for j in 1..=k / 2 {
        // C(2j, j)/4^j = C(2j-2, j-1)/4^{j-1} · (2j-1)/(2j)
        v *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    v
}

// ---------------------------------------------------------------------------
// Suites.

fn lemma1(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::Lemma1;
    let mut rng = rng(seed ^ 0x11);
    let mut rows = Vec::new();
    let mut case = 0;
    for n in 1..=5 {
        for s in 1..=4u32 {
            let cfg = random_circle_config(&mut rng, 1.0, n);
            let sys = BlaschkeSystem::circle(cfg);
            for _ in 0..10 {
                let phi = random_phi(&mut rng);
                let r = (|| -> Result<Vec<Row>> {
                    let nodes = sys.solve_nodes(s, phi)?;
                    let sf = s as f64;
                    let sum_w: f64 = nodes.weights_mu.iter().map(|mu| 1.0 / mu).sum::<f64>() / sf;
                    let mut worst = 0.0f64;
                    for j in 1..s as i32 {
                        for sign in [-1, 1] {
                            let v: Complex64 = nodes
                                .nodes
                                .iter()
                                .zip(&nodes.weights_mu)
                                .map(|(z, mu)| z.powi(sign * j) / mu)
                                .sum::<Complex64>()
                                / sf;
                            worst = worst.max(v.norm());
                        }
                    }
                    Ok(vec![
                        Row::below(S, 4, "weight-sum", case, (sum_w - 1.0).abs(), INVARIANCE_TOL)
                            .with("n", n)
                            .with("s", s),
                        Row::below(S, 4, "laurent-annihilation", case, worst, INVARIANCE_TOL)
                            .with("n", n)
                            .with("s", s),
                    ])
                })();
                push(&mut rows, S, 4, "lemma1", case, r);
                case += 1;
            }
        }
    }
    rows
}

/// One circle case of criteria 1-3: a configuration, a level and an
/// admissible function.
struct CircleCase {
    cfg: CirclePoleConfig,
    s: u32,
    m: u32,
    f: RationalFunction,
    kind: RuleKind,
    phi: f64,
}

fn circle_cases(seed: u64) -> Vec<CircleCase> {
    let mut rng = rng(seed ^ 0x22);
    let mut cases = Vec::new();
    for i in 0..50 {
        let r = random_radius(&mut rng);
        let n = rng.gen_range(1..=5);
        let s = rng.gen_range(1..=3);
        let cfg = random_circle_config(&mut rng, r, n);
        let f = random_circle_function(&mut rng, &cfg, s, CircleClass::Integral);
        let phi = random_phi(&mut rng);
        cases.push(CircleCase { cfg, s, m: 1, f, kind: RuleKind::CircleIntegral, phi });
        let _ = i;
    }
    for i in 0..50 {
        let r = random_radius(&mut rng);
        let n = rng.gen_range(1..=5);
        let s = rng.gen_range(1..=3);
        let m = if i % 2 == 0 { 1 } else { rng.gen_range(2..=3) };
        let cfg = random_circle_config(&mut rng, r, n);
        let f = random_circle_function(&mut rng, &cfg, s, CircleClass::L2 { boundary: i % 3 == 0 });
        let phi = random_phi(&mut rng);
        let kind = if m == 1 { RuleKind::CircleL2 } else { RuleKind::CircleL2m { m } };
        cases.push(CircleCase { cfg, s, m, f, kind, phi });
    }
    cases
}

fn circle_rule_value(c: &CircleCase, phi: f64) -> Result<Complex64> {
    Ok(match c.kind {
        RuleKind::CircleIntegral => quadrature::circle_integral(&c.f, &c.cfg, c.s, phi)?,
        RuleKind::CircleL2 => quadrature::circle_l2(&c.f, &c.cfg, c.s, phi)?.into(),
        _ => quadrature::circle_l2m(&c.f, &c.cfg, c.s, c.m, phi)?.into(),
    })
}

fn circle_oracle_value(c: &CircleCase) -> Result<Complex64> {
    let r = c.cfg.radius();
    Ok(match c.kind {
        RuleKind::CircleIntegral => oracle_circle_integral(&c.f, r)?,
        _ => oracle_circle_abs_pow(&c.f, r, 2 * c.m)?.into(),
    })
}

fn case_details(row: Row, c: &CircleCase) -> Row {
    let p = c.f.pole_multiplicity_profile();
    row.with("n", c.cfg.len())
        .with("s", c.s)
        .with("m", c.m)
        .with("r", c.cfg.radius())
        .with("mult0_plus_multinf", p.at_origin() + p.at_infinity())
}

fn exactness(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::Exactness;
    let mut rows = Vec::new();

    for (i, c) in circle_cases(seed).iter().enumerate() {
        let (criterion, check) = match c.kind {
            RuleKind::CircleIntegral => (1, "eq3-vs-oracle"),
            RuleKind::CircleL2 => (2, "eq4-vs-oracle"),
            _ => (2, "eq6-vs-oracle"),
        };
        let r = (|| {
            let rule = circle_rule_value(c, c.phi)?;
            let orc = circle_oracle_value(c)?;
            Ok(vec![case_details(Row::below(S, criterion, check, i as u32, rel_c(rule, orc), EXACTNESS_TOL), c)])
        })();
        push(&mut rows, S, criterion, check, i as u32, r);
    }

    // Four-abscissa segment example, s = 1..6.
    for s in 1..=6u32 {
        let r = (|| {
            let f = inverse_power_at_i(s);
            let formula = segment_example_formula(&f)?;
            let orc = oracle_segment_l2(&f)?;
            let seg = SegmentPoleConfig::new(vec![Complex64::new(0.0, 1.0)])?;
            let rule = quadrature::segment_l2(&f, &seg, s, 0.0)?;
            Ok(vec![
                Row::below(S, 5, "segment-example-vs-oracle", s, rel(formula, orc), EXACTNESS_TOL).with("s", s),
                Row::below(S, 5, "eq8-vs-oracle", s, rel(rule, orc), EXACTNESS_TOL).with("s", s),
            ])
        })();
        push(&mut rows, S, 5, "segment-example", s, r);
    }

    // Six-node half-plane example: poles ±i of order ≤ 3.
    let mut rng6 = rng(seed ^ 0x66);
    let cfg_i = HalfPlanePoleConfig::new(vec![Complex64::new(0.0, 1.0)]).expect("valid");
    for case in 0..3u32 {
        let f = random_half_plane_function(&mut rng6, &cfg_i, 3);
        let r = (|| {
            let formula = half_plane_example_formula(&f)?;
            let orc = oracle_line_l2(&f)?;
            let rule = quadrature::halfplane_l2(&f, &cfg_i, 3, PI)?;
            Ok(vec![
                Row::below(S, 6, "halfplane-example-vs-oracle", case, rel(formula, orc), EXACTNESS_TOL),
                Row::below(S, 6, "eq10-vs-oracle", case, rel(rule, orc), EXACTNESS_TOL),
            ])
        })();
        push(&mut rows, S, 6, "halfplane-example", case, r);
    }

    // Gauss–Chebyshev degeneration.
    let mut rng7 = rng(seed ^ 0x77);
    let infinity = SegmentPoleConfig::infinity_only();
    for s in 1..=8u32 {
        let r = (|| {
            let sys = BlaschkeSystem::segment(infinity.clone())?;
            let rule = QuadratureRule::segment_integral(&sys, 2 * s, PI)?;
            let mut xs: Vec<f64> = rule.points.iter().map(|z| z.re).collect();
            xs.sort_by(|a, b| b.total_cmp(a));
            let mut node_err = 0.0f64;
            for k in 1..=s as usize {
                let lam = ((2 * k - 1) as f64 * PI / (2 * s) as f64).cos();
                // Each abscissa appears twice.
                node_err = node_err.max((xs[2 * k - 2] - lam).abs()).max((xs[2 * k - 1] - lam).abs());
            }
            let mut out = vec![Row::below(S, 7, "gauss-chebyshev-nodes", s, node_err, 1e-12).with("s", s)];
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let deg = rng7.gen_range(0..2 * s) as usize;
                let coeffs: Vec<Complex64> = (0..=deg).map(|_| random_coef(&mut rng7, 0.5, 10.0)).collect();
                let exact: Complex64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * chebyshev_moment(k as u32))
                    .sum();
                let f = RationalFunction::polynomial(coeffs);
                let v = quadrature::segment_integral(&f, &infinity, 2 * s, PI)?;
                let scale = exact.norm().max(1.0);
                worst = worst.max((v - exact).norm() / scale);
            }
            out.push(Row::below(S, 7, "gauss-chebyshev-moments", s, worst, 1e-10).with("s", s).with("polynomials", 20));
            Ok(out)
        })();
        push(&mut rows, S, 7, "gauss-chebyshev", s, r);
    }

    // Simple partial fraction identities.
    let mut rng12 = rng(seed ^ 0xcc);
    for case in 0..25u32 {
        let n = 1 + case as usize % 5;
        let cfg = random_half_plane_config(&mut rng12, n);
        let phi = random_line_phi(&mut rng12);
        let p = SimplePartialFraction::new(cfg.upper_poles().to_vec());
        let r = (|| {
            let id = quadrature::spf_l2_identities(&p, phi)?;
            Ok(vec![
                Row::below(S, 12, "spf-three-way", case, id.max_relative_gap(), EXACTNESS_TOL).with("n", n),
                Row::below(S, 12, "spf-mu-equals-im-rho", case, id.mu_im_gap / id.via_mu.abs(), EXACTNESS_TOL).with("n", n),
            ])
        })();
        push(&mut rows, S, 12, "spf", case, r);
    }
    rows
}

fn phi_invariance(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::PhiInvariance;
    let mut rows = Vec::new();
    let mut rng = rng(seed ^ 0x33);
    let spread = |vals: &[Complex64]| -> f64 {
        let v0 = vals[0];
        vals.iter().map(|v| (v - v0).norm()).fold(0.0, f64::max) / v0.norm()
    };
    for (i, c) in circle_cases(seed).iter().enumerate() {
        let phis: Vec<f64> = (0..25).map(|_| random_phi(&mut rng)).collect();
        let r = (|| {
            let vals = phis.iter().map(|&p| circle_rule_value(c, p)).collect::<Result<Vec<_>>>()?;
            Ok(vec![case_details(Row::below(S, 3, "circle-phi-spread", i as u32, spread(&vals), INVARIANCE_TOL), c)])
        })();
        push(&mut rows, S, 3, "circle-phi-spread", i as u32, r);
    }
    for i in 0..10u32 {
        let s = rng.gen_range(1..=3);
        let count = rng.gen_range(0..=2);
        let seg = random_segment_config(&mut rng, count);
        let f = random_segment_function(&mut rng, &seg, s);
        let phis: Vec<f64> = (0..25).map(|_| random_phi(&mut rng)).collect();
        let r = (|| {
            let vals = phis
                .iter()
                .map(|&p| quadrature::segment_l2(&f, &seg, s, p).map(Complex64::from))
                .collect::<Result<Vec<_>>>()?;
            Ok(vec![Row::below(S, 3, "segment-phi-spread", i, spread(&vals), INVARIANCE_TOL).with("s", s)])
        })();
        push(&mut rows, S, 3, "segment-phi-spread", i, r);
    }
    for i in 0..10u32 {
        let s = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=3);
        let cfg = random_half_plane_config(&mut rng, count);
        let f = random_half_plane_function(&mut rng, &cfg, s);
        let phis: Vec<f64> = (0..25).map(|_| random_line_phi(&mut rng)).collect();
        let r = (|| {
            let vals = phis
                .iter()
                .map(|&p| quadrature::halfplane_l2(&f, &cfg, s, p).map(Complex64::from))
                .collect::<Result<Vec<_>>>()?;
            Ok(vec![Row::below(S, 3, "halfplane-phi-spread", i, spread(&vals), INVARIANCE_TOL).with("s", s)])
        })();
        push(&mut rows, S, 3, "halfplane-phi-spread", i, r);
    }
    rows
}

fn closed_norms(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::ClosedNorms;
    let mut rows = Vec::new();
    let mut rng = rng(seed ^ 0x88);
    let mut case = 0u32;
    for n in 1..=6 {
        for _ in 0..4 {
            let r = random_radius(&mut rng);
            let cfg = random_circle_config(&mut rng, r, n);
            let res = (|| {
                let sys = BlaschkeSystem::circle(cfg.clone());
                let orc = oracle::integrate_circle(|z| sys.mu_unchecked(z).powi(2), r, tol())?.value;
                Ok(vec![Row::below(S, 8, "mu-l2-closed-vs-oracle", case, rel(sharp::mu_l2_closed(&cfg), orc), EXACTNESS_TOL)
                    .with("n", n)
                    .with("r", r)])
            })();
            push(&mut rows, S, 8, "mu-l2-closed-vs-oracle", case, res);

            let hp = random_half_plane_config(&mut rng, n);
            let p = SimplePartialFraction::new(hp.upper_poles().to_vec());
            let res = (|| {
                let orc = oracle_line_l2(&p)?;
                Ok(vec![Row::below(S, 8, "spf-l2-closed-vs-oracle", case, rel(sharp::spf_l2_closed(&p), orc), EXACTNESS_TOL)
                    .with("n", n)])
            })();
            push(&mut rows, S, 8, "spf-l2-closed-vs-oracle", case, res);
            case += 1;
        }
    }
    for case in 0..10u32 {
        let r = random_radius(&mut rng);
        let n = rng.gen_range(1..=6);
        let cfg = random_circle_config(&mut rng, r, n);
        let phi = random_phi(&mut rng);
        let res = (|| {
            let sys = BlaschkeSystem::circle(cfg.clone());
            let nodes = sys.solve_nodes(2, phi)?;
            let direct = PI * r * nodes.weights_mu.iter().sum::<f64>();
            let via_rule = quadrature::circle_l2(&quadrature::circle_mu_rational(&cfg), &cfg, 1, phi)?;
            let closed = sharp::mu_l2_closed(&cfg);
            Ok(vec![
                Row::below(S, 8, "eq5-node-sum-vs-closed", case, rel(direct, closed), INVARIANCE_TOL).with("n", n),
                Row::below(S, 8, "eq5-rule-vs-closed", case, rel(via_rule, closed), INVARIANCE_TOL).with("n", n),
            ])
        })();
        push(&mut rows, S, 8, "eq5", case, res);
    }
    rows
}

fn sharpness(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::Sharpness;
    let mut rows = Vec::new();
    let mut rng = rng(seed ^ 0x99);
    let mut case = 0u32;
    for n in 1..=4 {
        for s in 1..=3u32 {
            for _ in 0..2 {
                let r = random_radius(&mut rng);
                let cfg = random_circle_config(&mut rng, r, n);
                let phi = random_phi(&mut rng);
                let res = (|| {
                    let ext = ExtremalCircle::new(&cfg, s, phi)?;
                    let rep = sharp::check_eq11(&ext, &cfg, s, 4096, phi + 1.0)?;
                    let ratio = rep.ratio;
                    let mut row = Row::at_least(S, 9, "eq11-extremal-ratio", case, ratio, 1.0 - 1e-6)
                        .with("n", n)
                        .with("s", s);
                    row.report = Some(rep);
                    Ok(vec![row])
                })();
                push(&mut rows, S, 9, "eq11-extremal-ratio", case, res);
                let res = (|| {
                    let rep = sharp::probe_eq12(&cfg, s)?;
                    let mut row = Row::at_least(S, 9, "eq12-equality-ratio", case, rep.ratio, 1.0 - 1e-6)
                        .with("n", n)
                        .with("s", s);
                    row.report = Some(rep);
                    Ok(vec![row])
                })();
                push(&mut rows, S, 9, "eq12-equality-ratio", case, res);
                case += 1;
            }
        }
    }
    let mut case = 0u32;
    for s in 1..=4u32 {
        for r in [0.5, 1.0, 2.0] {
            let res = (|| {
                let rep = sharp::check_poly_eq29(&sharp::p_star(s, r), r, 2.0)?;
                let mut row = Row::below(S, 9, "eq29-p-star-ratio", case, (rep.ratio - 1.0).abs(), 1e-8)
                    .with("s", s)
                    .with("r", r);
                row.report = Some(rep);
                Ok(vec![row])
            })();
            push(&mut rows, S, 9, "eq29-p-star-ratio", case, res);
            case += 1;
        }
    }
    for s in 1..=8u32 {
        let res = (|| {
            let rep = sharp::check_trig_eq28(&LaurentPoly::t_star(s), 2.0)?;
            let two_s = 2.0 * s as f64;
            let err = rel(rep.lhs, two_s).max(rel(rep.rhs, two_s));
            let mut row = Row::below(S, 9, "eq28-t-star-equality", s, err, 1e-8).with("s", s);
            row.report = Some(rep);
            Ok(vec![row])
        })();
        push(&mut rows, S, 9, "eq28-t-star-equality", s, res);

        let res = (|| {
            let rep = sharp::check_eq32(s)?;
            let mut row = Row::below(S, 9, "eq32-chebyshev-u", s, (rep.ratio - 1.0).abs(), 1e-8).with("s", s);
            row.report = Some(rep);
            let ode = (0..50)
                .map(|k| chebyshev::jacobi_ode_residual(s, -0.98 + 1.96 * k as f64 / 49.0).abs())
                .fold(0.0, f64::max);
            Ok(vec![row, Row::below(S, 9, "chebyshev-u-ode-residual", s, ode, 1e-8).with("s", s)])
        })();
        push(&mut rows, S, 9, "eq32-chebyshev-u", s, res);
    }
    for (case, r) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let res = (|| {
            let probe = sharp::eq27_tightness_probe(r)?;
            let increasing = probe.windows(2).all(|w| w[1].1 > w[0].1);
            let last = probe.last().expect("three points").1;
            Ok(vec![Row::at_least(S, 9, "eq27-tightness-monotone", case as u32, if increasing { last } else { 0.0 }, 0.9)
                .with("r", r)
                .with("ratios", probe.iter().map(|p| p.1).collect::<Vec<_>>())])
        })();
        push(&mut rows, S, 9, "eq27-tightness-monotone", case as u32, res);
    }
    rows
}

fn random_p(rng: &mut impl Rng) -> f64 {
    [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0][rng.gen_range(0..7)]
}

fn random_laurent(rng: &mut impl Rng, lowest: i32, highest: i32) -> LaurentPoly {
    let coeffs = (lowest..=highest).map(|_| random_coef(rng, 0.1, 10.0)).collect();
    LaurentPoly::new(lowest, coeffs)
}

/// Number of random inputs per inequality.
pub const INEQUALITY_CASES: u32 = 200;

fn inequalities(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::Inequalities;
    let mut rows = Vec::new();
    let mut rng = rng(seed ^ 0xaa);
    for case in 0..INEQUALITY_CASES {
        // Circle: pointwise, sup and weight inequalities.
        let r = random_radius(&mut rng);
        let n = rng.gen_range(1..=4);
        let s = rng.gen_range(1..=3);
        let cfg = random_circle_config(&mut rng, r, n);
        let f = random_circle_function(&mut rng, &cfg, s, CircleClass::L2 { boundary: case % 2 == 0 });
        let phi = random_phi(&mut rng);
        push(&mut rows, S, 10, "eq11", case, sharp::check_eq11(&f, &cfg, s, 4096, phi)
            .map(|rep| vec![Row::from_report(S, 10, "eq11", case, rep)]));
        push(&mut rows, S, 10, "eq13", case, sharp::check_eq13_eq27(&f, &cfg, s).map(|(a, b)| {
            vec![Row::from_report(S, 10, "eq13", case, a), Row::from_report(S, 10, "eq27", case, b)]
        }));

        // Trigonometric polynomial in the class of level s.
        let s28 = rng.gen_range(1..=5i32);
        let (lo, hi) = if rng.gen_bool(0.5) { (1 - s28, s28) } else { (-s28, s28 - 1) };
        let lo = rng.gen_range(lo..=0);
        let hi = rng.gen_range(0.max(lo)..=hi);
        let t = random_laurent(&mut rng, lo, hi);
        let p = random_p(&mut rng);
        push(&mut rows, S, 10, "eq28", case, sharp::check_trig_eq28(&t, p)
            .map(|rep| vec![Row::from_report(S, 10, "eq28", case, rep)]));

        let deg = rng.gen_range(0..=7);
        let coeffs: Vec<Complex64> = (0..=deg).map(|_| random_coef(&mut rng, 0.1, 10.0)).collect();
        let r29 = random_radius(&mut rng);
        let p = random_p(&mut rng);
        push(&mut rows, S, 10, "eq29", case, sharp::check_poly_eq29(&coeffs, r29, p)
            .map(|rep| vec![Row::from_report(S, 10, "eq29", case, rep)]));

        let s30 = rng.gen_range(1..=5u32);
        let d = s30 as i32 - 1;
        let t30 = if case % 2 == 0 {
            random_laurent(&mut rng, -d, d)
        } else {
            // |P|² for a random P of degree ≤ (s-1)/2: nonnegative.
            let half = d / 2;
            let pc: Vec<Complex64> = (0..=half).map(|_| random_coef(&mut rng, 0.1, 10.0)).collect();
            let mut c = vec![Complex64::new(0.0, 0.0); (2 * half + 1) as usize];
            for (i, a) in pc.iter().enumerate() {
                for (j, b) in pc.iter().enumerate() {
                    c[(i as i32 - j as i32 + half) as usize] += a * b.conj();
                }
            }
            LaurentPoly::new(-half, c)
        };
        push(&mut rows, S, 10, "eq30", case, sharp::check_eq30(&t30, s30)
            .map(|rep| vec![Row::from_report(S, 10, "eq30", case, rep)]));

        let deg = rng.gen_range(0..=7);
        let coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| if case % 2 == 0 { random_coef(&mut rng, 0.1, 10.0) } else { Complex64::new(rng.gen_range(-10.0..10.0), 0.0) })
            .collect();
        let p = random_p(&mut rng);
        push(&mut rows, S, 10, "eq31", case, sharp::check_segment_eq31(&coeffs, p)
            .map(|rep| vec![Row::from_report(S, 10, "eq31", case, rep)]));

        // Real line.
        let s35 = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=3);
        let hp = random_half_plane_config(&mut rng, count);
        let f35 = random_half_plane_function(&mut rng, &hp, s35);
        push(&mut rows, S, 10, "eq35", case, sharp::check_halfplane_eq35(&f35, &hp, s35).map(|reps| {
            reps.all()
                .iter()
                .map(|rep| {
                    let form = rep.params["form"].as_str().unwrap_or("").to_string();
                    Row::from_report(S, 10, &format!("eq35-{form}"), case, (*rep).clone())
                })
                .collect()
        }));

        // Simple partial fractions with a reflected tail.
        let r37 = random_radius(&mut rng);
        let n37 = rng.gen_range(1..=3);
        let s37 = rng.gen_range(1..=3);
        let zcfg = random_circle_config(&mut rng, r37, n37 + 1);
        let mut poles: Vec<Complex64> = zcfg.nonzero_poles().collect();
        if rng.gen_bool(0.3) {
            poles.push(Complex64::new(0.0, 0.0));
        }
        let rho = SimplePartialFraction::new(poles);
        let mut tail_terms = Vec::new();
        if case % 4 != 0 {
            for b in zcfg.reflected_poles() {
                let k = rng.gen_range(0..=s37);
                tail_terms.extend(principal_part(&mut rng, b, k, 0.3 * r37));
            }
        }
        let tail = RationalFunction::from_terms(tail_terms);
        push(&mut rows, S, 10, "eq37", case, sharp::check_spf_eq37_eq40_eq41(&rho, &tail, r37, s37).map(|reps| {
            let names = ["eq37", "eq40-quadratic", "eq40-log", "eq41-pointwise", "eq41"];
            reps.all()
                .iter()
                .zip(names)
                .map(|(rep, name)| Row::from_report(S, 10, name, case, (*rep).clone()))
                .collect()
        }));
    }
    rows
}

/// A configuration with one pole at `|z| = 0.85r` and the others at
/// `0.5r ≤ |z| ≤ 0.8r`, so a missing order at the first pole or its
/// reflection shows in the rule. Returns the configuration and that pole.
fn generic_circle_config(rng: &mut impl Rng, r: f64, n: usize) -> (CirclePoleConfig, Complex64) {
    let lead = Complex64::from_polar(0.85 * r, rng.gen_range(0.0..2.0 * PI));
    let mut poles = vec![lead];
    while poles.len() + 1 < n {
        let z = Complex64::from_polar(r * rng.gen_range(0.5..0.8), rng.gen_range(0.0..2.0 * PI));
        if poles.iter().all(|&p| (p - z).norm() >= 0.15 * r) {
            poles.push(z);
        }
    }
    (CirclePoleConfig::with_origin(r, &poles).expect("generated configuration is valid"), lead)
}

fn negative_controls(seed: u64) -> Vec<Row> {
    const S: Suite = Suite::NegativeControls;
    let mut rows = Vec::new();
    let mut rng = rng(seed ^ 0xbb);
    let one = Complex64::new(1.0, 0.0);
    for case in 0..20u32 {
        let r = random_radius(&mut rng);
        let n = rng.gen_range(2..=5);
        let s = rng.gen_range(1..=3u32);
        let (cfg, a) = generic_circle_config(&mut rng, r, n);
        let phi = random_phi(&mut rng);
        // Scaling by the distance to the circle keeps the pole term of unit
        // size there.
        let (label, pole) = if case % 2 == 0 { ("outer-order-s+1", r * r / a.conj()) } else { ("inner-order-s+1", a) };
        let d = (r - pole.norm()).abs();
        let c = random_coef(&mut rng, 1.0, 2.0) * d.powi(s as i32 + 1);
        let f = RationalFunction::new(vec![PartialFractionTerm::new(pole, s + 1, c)], vec![one], vec![]);
        let res = (|| {
            let sys = BlaschkeSystem::circle(cfg.clone());
            let adm = check_admissible(&f, &sys, s, RuleKind::CircleIntegral)?;
            let rule = QuadratureRule::circle_integral(&sys, s, phi)?.integrate(&f)?;
            let orc = oracle_circle_integral(&f, r)?;
            Ok(vec![
                Row::at_least(S, 11, "rule-oracle-gap", case, rel_c(rule, orc), NEGATIVE_GAP)
                    .with("control", label)
                    .with("s", s)
                    .with("n", n)
                    .with("r", r),
                Row::at_least(S, 11, "rejected-by-admissibility", case, if adm.verdict { 0.0 } else { 1.0 }, 1.0)
                    .with("control", label),
            ])
        })();
        push(&mut rows, S, 11, "negative-control", case, res);
    }
    // Boundary of the L₂ class: z^{2s} is rejected, z^{2s-1} accepted.
    for s in 1..=4u32 {
        let res = (|| {
            let cfg = random_circle_config(&mut rng, 1.0, 3);
            let sys = BlaschkeSystem::circle(cfg);
            let mono = |k: usize| {
                let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
                c[k] = one;
                RationalFunction::polynomial(c)
            };
            let over = check_admissible(&mono(2 * s as usize), &sys, s, RuleKind::CircleL2)?.verdict;
            let at = check_admissible(&mono(2 * s as usize - 1), &sys, s, RuleKind::CircleL2)?.verdict;
            Ok(vec![Row::at_least(S, 11, "l2-boundary-verdicts", s, if !over && at { 1.0 } else { 0.0 }, 1.0)
                .with("s", s)])
        })();
        push(&mut rows, S, 11, "l2-boundary-verdicts", s, res);
    }
    rows
}

/// Runs one suite.
pub fn run_suite(suite: Suite, seed: u64) -> Vec<Row> {
    match suite {
        Suite::Lemma1 => lemma1(seed),
        Suite::Exactness => exactness(seed),
        Suite::PhiInvariance => phi_invariance(seed),
        Suite::Inequalities => inequalities(seed),
        Suite::Sharpness => sharpness(seed),
        Suite::ClosedNorms => closed_norms(seed),
        Suite::NegativeControls => negative_controls(seed),
    }
}

/// Sorts rows by `(suite, check, case)`.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        (a.suite, &a.check, a.case)
            .cmp(&(b.suite, &b.check, b.case))
            .then_with(|| a.value.total_cmp(&b.value))
    });
}

/// Record of one verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub suite: String,
    pub seed: u64,
    pub version: String,
    /// SHA-256 of the canonical run input (suite, seed, version).
    pub config_hash: String,
    pub pass: bool,
    pub rows: Vec<Row>,
    /// SHA-256 of the manifest without this field and `wall_time_s`.
    pub content_hash: String,
    /// Excluded from both hashes.
    pub wall_time_s: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    /// Runs `selection` with `seed`.
    pub fn run(selection: Selection, seed: u64, command: &str) -> Result<Self> {
        let start = Instant::now();
        let mut rows = Vec::new();
        for suite in selection.suites() {
            rows.extend(run_suite(suite, seed));
        }
        sort_rows(&mut rows);
        let version = env!("CARGO_PKG_VERSION").to_string();
        let input = json!({"suite": selection.to_string(), "seed": seed, "version": version});
        let mut manifest = Self {
            command: command.to_string(),
            suite: selection.to_string(),
            seed,
            version,
            config_hash: sha256_hex(crate::json::to_string(&input)?.as_bytes()),
            pass: rows.iter().all(|r| r.pass),
            rows,
            content_hash: String::new(),
            wall_time_s: 0.0,
        };
        manifest.content_hash = manifest.compute_content_hash()?;
        manifest.wall_time_s = start.elapsed().as_secs_f64();
        Ok(manifest)
    }

    pub fn compute_content_hash(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Value::Object(map) = &mut v {
            map.remove("content_hash");
            map.remove("wall_time_s");
        }
        Ok(sha256_hex(crate::json::to_string(&v)?.as_bytes()))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string_pretty(self)
    }
}
