//! Exact quadrature rules for rational functions built from Blaschke nodes.
//!
//! | rule | nodes | weight | exact for |
//! |------|-------|--------|-----------|
//! | `eq3`  | `B^s = e^{iφ}` on `|z| = r`      | `2πr / (s μ)`   | `∫ R |dζ|` |
//! | `eq4`  | `B^{2s} = e^{iφ}`                | `πr / (s μ)`    | `∫ |R|² |dζ|` |
//! | `eq6`  | `B^{2ms} = e^{iφ}`               | `πr / (m s μ)`  | `∫ |R|^{2m} |dζ|` |
//! | `eq7`  | `B₀^s = e^{iφ}`, `x = (ζ+1/ζ)/2` | `π / (s μ₀)`    | `∫ R / √(1-x²)` |
//! | `eq8`  | `B₀^{2s} = e^{iφ}`               | `π / (2s μ₀)`   | `∫ |R|² / √(1-x²)` |
//! | `eq10` | `B₁^{2s} = e^{iφ}` on `ℝ`        | `π / (2s μ₁)`   | `∫ |R|² dx` |
//!
//! Rules refuse functions outside their admissible class; see
//! [`check_admissible`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{
    BlaschkeSystem, CirclePoleConfig, Domain, HalfPlanePoleConfig, NodeSet, SegmentPoleConfig,
};
use crate::error::{Error, Result};
use crate::oracle::{self, Tolerance};
use crate::rational::{
    complex_list, Evaluate, PartialFractionTerm, Pole, PoleProfile, RationalFunction,
    SimplePartialFraction,
};

/// Relative distance (to the configuration scale) under which a pole of `f`
/// is identified with a configuration pole.
pub const POLE_MATCH: f64 = 1e-10;

/// Which theorem's hypotheses a function is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    CircleIntegral,
    CircleL2,
    /// `L_{2m}` through `R^m`; admissibility is that of `R` for `CircleL2`.
    CircleL2m { m: u32 },
    SegmentIntegral,
    SegmentL2,
    HalfPlaneL2,
}

impl RuleKind {
    pub fn domain(self) -> Domain {
        match self {
            RuleKind::CircleIntegral | RuleKind::CircleL2 | RuleKind::CircleL2m { .. } => {
                Domain::Circle
            }
            RuleKind::SegmentIntegral | RuleKind::SegmentL2 => Domain::Segment,
            RuleKind::HalfPlaneL2 => Domain::HalfPlane,
        }
    }
}

/// Equation a rule implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Eq3,
    Eq4,
    Eq6,
    Eq7,
    Eq8,
    Eq10,
    Eq16,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Eq3 => "eq3",
            Provenance::Eq4 => "eq4",
            Provenance::Eq6 => "eq6",
            Provenance::Eq7 => "eq7",
            Provenance::Eq8 => "eq8",
            Provenance::Eq10 => "eq10",
            Provenance::Eq16 => "eq16",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Order above the limit at an allowed location.
    Multiplicity,
    /// Pole outside the configuration; `limit` is 0.
    ForeignPole,
    /// `mult(0) + mult(∞)` above `2s - 1`; reported at ∞ with the sum.
    OriginInfinitySum,
    /// A polynomial part where a proper fraction is required.
    NotProper,
}

/// One failed hypothesis: `pole` has order `multiplicity` where at most
/// `limit` is allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub pole: Pole,
    pub multiplicity: u32,
    pub limit: u32,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Multiplicity => write!(
                f,
                "pole {} has order {} > {}",
                self.pole, self.multiplicity, self.limit
            ),
            ViolationKind::ForeignPole => write!(
                f,
                "pole {} (order {}) is not in the configuration",
                self.pole, self.multiplicity
            ),
            ViolationKind::OriginInfinitySum => write!(
                f,
                "mult(0) + mult(∞) = {} > {}",
                self.multiplicity, self.limit
            ),
            ViolationKind::NotProper => write!(
                f,
                "polynomial part of degree {} where a proper fraction is required",
                self.multiplicity
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

impl Admissibility {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            verdict: violations.is_empty(),
            violations,
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.verdict {
            Ok(())
        } else {
            Err(Error::NotAdmissible(self))
        }
    }
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verdict {
            return f.write_str("admissible");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn matches_any(z: Complex64, set: &[Complex64], tol: f64) -> bool {
    set.iter().any(|&p| (z - p).norm() <= tol)
}

/// Checks the hypotheses of the rule `kind` for a function with pole
/// profile `profile` over `sys` at level `s`.
pub fn check_profile(
    profile: &PoleProfile,
    sys: &BlaschkeSystem,
    s: u32,
    kind: RuleKind,
) -> Result<Admissibility> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    if kind.domain() != sys.domain() {
        return Err(Error::InvalidArgument(format!(
            "rule {kind:?} does not apply to a {:?} configuration",
            sys.domain()
        )));
    }
    let tol = POLE_MATCH * sys.scale();
    let mut out = Vec::new();
    let mut bound = |pole: Pole, multiplicity: u32, limit: u32, kind: ViolationKind| {
        if multiplicity > limit {
            out.push(Violation {
                pole,
                multiplicity,
                limit,
                kind,
            });
        }
    };
    let foreign = ViolationKind::ForeignPole;
    let multiplicity = ViolationKind::Multiplicity;
    match kind {
        RuleKind::CircleIntegral | RuleKind::CircleL2 | RuleKind::CircleL2m { .. } => {
            let cfg = sys.disk().expect("circle system");
            let mut allowed: Vec<Complex64> = cfg.nonzero_poles().collect();
            allowed.extend(cfg.reflected_poles());
            for (z, k) in profile.finite_nonzero() {
                if matches_any(z, &allowed, tol) {
                    bound(Pole::Finite(z), k, s, multiplicity);
                } else {
                    bound(Pole::Finite(z), k, 0, foreign);
                }
            }
            let (m0, minf) = (profile.at_origin(), profile.at_infinity());
            if kind == RuleKind::CircleIntegral {
                bound(Pole::Finite(Complex64::new(0.0, 0.0)), m0, s - 1, multiplicity);
                bound(Pole::Infinity, minf, s - 1, multiplicity);
            } else {
                bound(Pole::Infinity, m0 + minf, 2 * s - 1, ViolationKind::OriginInfinitySum);
            }
        }
        RuleKind::SegmentIntegral | RuleKind::SegmentL2 => {
            let allowed = sys.segment_source().expect("segment system").pole_set();
            for &(pole, k) in profile.entries() {
                match pole {
                    Pole::Infinity => bound(pole, k, s - 1, multiplicity),
                    Pole::Finite(z) if matches_any(z, &allowed, tol) => {
                        bound(pole, k, s, multiplicity)
                    }
                    Pole::Finite(_) => bound(pole, k, 0, foreign),
                }
            }
        }
        RuleKind::HalfPlaneL2 => {
            let cfg = sys.half_plane_config().expect("half-plane system");
            let mut allowed = cfg.upper_poles().to_vec();
            allowed.extend(cfg.upper_poles().iter().map(|z| z.conj()));
            for &(pole, k) in profile.entries() {
                match pole {
                    Pole::Infinity => bound(pole, k, 0, foreign),
                    Pole::Finite(z) if matches_any(z, &allowed, tol) => {
                        bound(pole, k, s, multiplicity)
                    }
                    Pole::Finite(_) => bound(pole, k, 0, foreign),
                }
            }
        }
    }
    Ok(Admissibility::from_violations(out))
}

/// Checks the hypotheses of the rule `kind` for `f`.
///
/// On the half-plane the constant term also counts: a proper fraction must
/// vanish at infinity.
pub fn check_admissible(
    f: &RationalFunction,
    sys: &BlaschkeSystem,
    s: u32,
    kind: RuleKind,
) -> Result<Admissibility> {
    let mut adm = check_profile(&f.pole_multiplicity_profile(), sys, s, kind)?;
    if kind == RuleKind::HalfPlaneL2 && !f.is_proper() {
        adm.violations.retain(|v| v.pole != Pole::Infinity);
        adm.violations.push(Violation {
            pole: Pole::Infinity,
            multiplicity: f.poly().len() as u32 - 1,
            limit: 0,
            kind: ViolationKind::NotProper,
        });
        adm.verdict = false;
    }
    Ok(adm)
}

/// Nodes and positive weights of one rule.
///
/// `points` are where integrands are evaluated: the contour nodes on the
/// circle and line, the abscissae `x_k = (ζ_k + 1/ζ_k)/2` on the segment.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub domain: Domain,
    pub s: u32,
    pub phi: f64,
    pub provenance: Provenance,
    pub points: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub nodes: NodeSet,
}

impl QuadratureRule {
    fn build(
        sys: &BlaschkeSystem,
        s: u32,
        power: u32,
        phi: f64,
        numerator: f64,
        provenance: Provenance,
    ) -> Result<Self> {
        let nodes = sys.solve_nodes(power, phi)?;
        let points = match sys.domain() {
            Domain::Segment => nodes
                .abscissae()
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
            _ => nodes.nodes.clone(),
        };
        let weights = nodes.weights_mu.iter().map(|mu| numerator / mu).collect();
        Ok(Self {
            domain: sys.domain(),
            s,
            phi: nodes.phi,
            provenance,
            points,
            weights,
            nodes,
        })
    }

    /// Rule (3) on the nodes of `B^s = e^{iφ}`.
    pub fn circle_integral(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<Self> {
        let r = circle_radius(sys)?;
        Self::build(sys, s, s, phi, 2.0 * PI * r / s as f64, Provenance::Eq3)
    }

    /// Rule (4) on the nodes of `B^{2s} = e^{iφ}`.
    pub fn circle_l2(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<Self> {
        let r = circle_radius(sys)?;
        Self::build(sys, s, 2 * s, phi, PI * r / s as f64, Provenance::Eq4)
    }

    /// Rule (6) on the nodes of `B^{2ms} = e^{iφ}`, applied to `|R|^{2m}`.
    pub fn circle_l2m(sys: &BlaschkeSystem, s: u32, m: u32, phi: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        let r = circle_radius(sys)?;
        let prov = if m == 1 { Provenance::Eq4 } else { Provenance::Eq6 };
        Self::build(sys, s, 2 * m * s, phi, PI * r / (m * s) as f64, prov)
    }

    /// Rule (7) on the abscissae of `B₀^s = e^{iφ}`.
    pub fn segment_integral(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<Self> {
        expect_domain(sys, Domain::Segment)?;
        Self::build(sys, s, s, phi, PI / s as f64, Provenance::Eq7)
    }

    /// Rule (8) on the abscissae of `B₀^{2s} = e^{iφ}`.
    pub fn segment_l2(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<Self> {
        expect_domain(sys, Domain::Segment)?;
        Self::build(sys, s, 2 * s, phi, PI / (2 * s) as f64, Provenance::Eq8)
    }

    /// Rule (10) on the real nodes of `B₁^{2s} = e^{iφ}`.
    pub fn half_plane_l2(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<Self> {
        expect_domain(sys, Domain::HalfPlane)?;
        Self::build(sys, s, 2 * s, phi, PI / (2 * s) as f64, Provenance::Eq10)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ w_k f(x_k)`, without any admissibility check.
    pub fn integrate(&self, f: &impl Evaluate) -> Result<Complex64> {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| Ok(f.evaluate(z)? * w))
            .sum()
    }

    /// `Σ w_k |f(x_k)|^q`, without any admissibility check.
    pub fn integrate_abs_pow(&self, f: &impl Evaluate, q: u32) -> Result<f64> {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| Ok(f.evaluate(z)?.norm_sqr().powf(0.5 * q as f64) * w))
            .sum()
    }

    pub fn to_json(&self) -> QuadratureRuleJson {
        QuadratureRuleJson {
            domain: domain_name(self.domain).to_string(),
            s: self.s,
            phi: self.phi,
            nodes: self.points.clone(),
            weights: self.weights.clone(),
            provenance: self.provenance,
        }
    }

    /// CSV rows `node_re, node_im, weight`.
    pub fn csv_rows(&self) -> Vec<[f64; 3]> {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(z, &w)| [z.re, z.im, w])
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureRuleJson {
    pub domain: String,
    pub s: u32,
    pub phi: f64,
    #[serde(with = "complex_list")]
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub provenance: Provenance,
}

pub fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Circle => "circle",
        Domain::Segment => "segment",
        Domain::HalfPlane => "halfplane",
    }
}

fn expect_domain(sys: &BlaschkeSystem, d: Domain) -> Result<()> {
    if sys.domain() == d {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "expected a {} configuration, got {}",
            domain_name(d),
            domain_name(sys.domain())
        )))
    }
}

fn circle_radius(sys: &BlaschkeSystem) -> Result<f64> {
    expect_domain(sys, Domain::Circle)?;
    Ok(sys.radius().expect("circle radius"))
}

fn admit(f: &RationalFunction, sys: &BlaschkeSystem, s: u32, kind: RuleKind) -> Result<()> {
    check_admissible(f, sys, s, kind)?.into_result()
}

/// `∫_{|ζ|=r} f |dζ|` by rule (3).
pub fn circle_integral(
    f: &RationalFunction,
    cfg: &CirclePoleConfig,
    s: u32,
    phi: f64,
) -> Result<Complex64> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    admit(f, &sys, s, RuleKind::CircleIntegral)?;
    QuadratureRule::circle_integral(&sys, s, phi)?.integrate(f)
}

/// `‖f‖²_{L₂(|ζ|=r)}` by rule (4).
pub fn circle_l2(f: &RationalFunction, cfg: &CirclePoleConfig, s: u32, phi: f64) -> Result<f64> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    admit(f, &sys, s, RuleKind::CircleL2)?;
    QuadratureRule::circle_l2(&sys, s, phi)?.integrate_abs_pow(f, 2)
}

/// `‖f‖^{2m}_{L_{2m}(|ζ|=r)}` by rule (6).
pub fn circle_l2m(
    f: &RationalFunction,
    cfg: &CirclePoleConfig,
    s: u32,
    m: u32,
    phi: f64,
) -> Result<f64> {
    let sys = BlaschkeSystem::circle(cfg.clone());
    admit(f, &sys, s, RuleKind::CircleL2m { m })?;
    QuadratureRule::circle_l2m(&sys, s, m, phi)?.integrate_abs_pow(f, 2 * m)
}

/// `∫_{-1}^{1} f(x) / √(1-x²) dx` by rule (7).
pub fn segment_integral(
    f: &RationalFunction,
    cfg: &SegmentPoleConfig,
    s: u32,
    phi: f64,
) -> Result<Complex64> {
    let sys = BlaschkeSystem::segment(cfg.clone())?;
    admit(f, &sys, s, RuleKind::SegmentIntegral)?;
    QuadratureRule::segment_integral(&sys, s, phi)?.integrate(f)
}

/// `‖f‖²_{*,2}` by rule (8).
pub fn segment_l2(f: &RationalFunction, cfg: &SegmentPoleConfig, s: u32, phi: f64) -> Result<f64> {
    let sys = BlaschkeSystem::segment(cfg.clone())?;
    admit(f, &sys, s, RuleKind::SegmentL2)?;
    QuadratureRule::segment_l2(&sys, s, phi)?.integrate_abs_pow(f, 2)
}

/// `‖f‖²_{L₂(ℝ)}` by rule (10).
pub fn halfplane_l2(
    f: &RationalFunction,
    cfg: &HalfPlanePoleConfig,
    s: u32,
    phi: f64,
) -> Result<f64> {
    let sys = BlaschkeSystem::half_plane(cfg.clone());
    admit(f, &sys, s, RuleKind::HalfPlaneL2)?;
    QuadratureRule::half_plane_l2(&sys, s, phi)?.integrate_abs_pow(f, 2)
}

/// `μ(z) = 1 + Σ_{a≠0} [a/(z-a) - a*/(z-a*)]` with `a* = r²/conj(a)`; equal
/// to `z B'(z)/B(z)` everywhere and to the weight on the circle.
pub fn circle_mu_rational(cfg: &CirclePoleConfig) -> RationalFunction {
    let r2 = cfg.radius() * cfg.radius();
    let mut terms = Vec::new();
    for a in cfg.nonzero_poles() {
        let b = r2 / a.conj();
        terms.push(PartialFractionTerm::new(a, 1, a));
        terms.push(PartialFractionTerm::new(b, 1, -b));
    }
    RationalFunction::new(terms, vec![Complex64::new(1.0, 0.0)], vec![])
}

/// `μ₁(z) = (1/2i) Σ [1/(z-a) - 1/(z-ā)]`, equal to the weight on ℝ.
pub fn line_mu_rational(cfg: &HalfPlanePoleConfig) -> RationalFunction {
    let half_i = Complex64::new(0.0, 0.5);
    let terms = cfg
        .upper_poles()
        .iter()
        .flat_map(|&a| {
            [
                PartialFractionTerm::new(a, 1, -half_i),
                PartialFractionTerm::new(a.conj(), 1, half_i),
            ]
        })
        .collect();
    RationalFunction::new(terms, vec![], vec![])
}

/// Both sides of the simple-partial-fraction identities on ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpfIdentities {
    /// `‖ρ_n‖²₂` by the oracle.
    pub norm_sq: f64,
    /// `π Σ (Re ρ_n(x_k))² / μ₁(x_k)`.
    pub via_re: f64,
    /// `π Σ μ₁(x_k)`.
    pub via_mu: f64,
    /// Rule (10) with `s = 1` applied to `ρ_n`.
    pub rule: f64,
    /// Largest `|μ₁(x_k) - Im ρ_n(x_k)|` over the nodes.
    pub mu_im_gap: f64,
}

impl SpfIdentities {
    /// Largest relative disagreement among `norm_sq`, `via_re`, `via_mu`.
    pub fn max_relative_gap(&self) -> f64 {
        let v = [self.norm_sq, self.via_re, self.via_mu];
        let scale = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let mut gap = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                gap = gap.max((v[i] - v[j]).abs());
            }
        }
        gap / scale
    }
}

/// Evaluates the two quadrature forms of `‖ρ_n‖²₂` on the nodes of
/// `B₁²(x) = e^{iφ}` and the oracle value.
pub fn spf_l2_identities(p: &SimplePartialFraction, phi: f64) -> Result<SpfIdentities> {
    let mut distinct: Vec<Complex64> = Vec::new();
    for &z in p.poles() {
        if !distinct.contains(&z) {
            distinct.push(z);
        }
    }
    let cfg = HalfPlanePoleConfig::new(distinct)?;
    let sys = BlaschkeSystem::half_plane(cfg);
    let rule = QuadratureRule::half_plane_l2(&sys, 1, phi)?;
    let (mut via_re, mut via_mu, mut gap) = (0.0, 0.0, 0.0f64);
    for (&x, &mu) in rule.points.iter().zip(&rule.nodes.weights_mu) {
        let rho = p.evaluate(x)?;
        via_re += rho.re * rho.re / mu;
        via_mu += mu;
        gap = gap.max((mu - rho.im).abs());
    }
    let rule_value = rule.integrate_abs_pow(p, 2)?;
    let norm_sq = oracle::integrate_real_line(
        |x| p.evaluate(Complex64::new(x, 0.0)).map_or(f64::NAN, |v| v.norm_sqr()),
        Tolerance::default(),
    )?
    .value;
    Ok(SpfIdentities {
        norm_sq,
        via_re: PI * via_re,
        via_mu: PI * via_mu,
        rule: rule_value,
        mu_im_gap: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_pole() -> CirclePoleConfig {
        CirclePoleConfig::with_origin(1.0, &[c(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn simple_inner_pole_admissible_at_s1() {
        let cfg = two_pole();
        let sys = BlaschkeSystem::circle(cfg);
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(c(0.5, 0.0), 1, c(1.0, 0.0))]);
        let adm = check_admissible(&f, &sys, 1, RuleKind::CircleIntegral).unwrap();
        assert!(adm.verdict, "{adm}");
    }

    #[test]
    fn monomial_2s_rejected_by_l2() {
        let sys = BlaschkeSystem::circle(two_pole());
        for s in 1..4 {
            let mut coeffs = vec![c(0.0, 0.0); 2 * s as usize + 1];
            coeffs[2 * s as usize] = c(1.0, 0.0);
            let f = RationalFunction::polynomial(coeffs);
            let adm = check_admissible(&f, &sys, s, RuleKind::CircleL2).unwrap();
            assert!(!adm.verdict);
            assert_eq!(adm.violations[0].kind, ViolationKind::OriginInfinitySum);
            assert_eq!(adm.violations[0].multiplicity, 2 * s);
        }
    }

    #[test]
    fn fourth_order_at_i_rejected_for_s3() {
        let cfg = HalfPlanePoleConfig::new(vec![c(0.0, 1.0)]).unwrap();
        let sys = BlaschkeSystem::half_plane(cfg);
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(c(0.0, 1.0), 4, c(1.0, 0.0))]);
        let adm = check_admissible(&f, &sys, 3, RuleKind::HalfPlaneL2).unwrap();
        assert!(!adm.verdict);
        assert_eq!(adm.violations.len(), 1);
        assert_eq!(adm.violations[0].limit, 3);
    }

    #[test]
    fn constant_not_proper_on_line() {
        let cfg = HalfPlanePoleConfig::new(vec![c(0.0, 1.0)]).unwrap();
        let sys = BlaschkeSystem::half_plane(cfg);
        let adm = check_admissible(&RationalFunction::constant(c(1.0, 0.0)), &sys, 1, RuleKind::HalfPlaneL2)
            .unwrap();
        assert!(!adm.verdict);
        assert_eq!(adm.violations[0].kind, ViolationKind::NotProper);
    }

    #[test]
    fn foreign_pole_reported() {
        let sys = BlaschkeSystem::circle(two_pole());
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(c(0.3, 0.0), 1, c(1.0, 0.0))]);
        let adm = check_admissible(&f, &sys, 2, RuleKind::CircleIntegral).unwrap();
        assert_eq!(adm.violations[0].kind, ViolationKind::ForeignPole);
    }

    #[test]
    fn rule_kind_must_match_domain() {
        let sys = BlaschkeSystem::circle(two_pole());
        assert!(check_admissible(&RationalFunction::zero(), &sys, 1, RuleKind::SegmentL2).is_err());
    }

    #[test]
    fn constant_integrals() {
        let one = RationalFunction::constant(c(1.0, 0.0));
        for r in [0.5, 1.0, 2.0] {
            let cfg = CirclePoleConfig::with_origin(r, &[c(0.3 * r, 0.2 * r)]).unwrap();
            let v = circle_integral(&one, &cfg, 2, 0.7).unwrap();
            assert_relative_eq!(v.re, 2.0 * PI * r, max_relative = 1e-12);
            let l2 = circle_l2(&one, &cfg, 1, 0.3).unwrap();
            assert_relative_eq!(l2, 2.0 * PI * r, max_relative = 1e-12);
            let l2m = circle_l2m(&one, &cfg, 1, 3, 0.3).unwrap();
            assert_relative_eq!(l2m, 2.0 * PI * r, max_relative = 1e-12);
        }
        let seg = SegmentPoleConfig::new(vec![c(0.0, 1.0)]).unwrap();
        assert_relative_eq!(segment_integral(&one, &seg, 1, 0.0).unwrap().re, PI, max_relative = 1e-12);
        assert_relative_eq!(segment_l2(&one, &seg, 1, 0.0).unwrap(), PI, max_relative = 1e-12);
    }

    #[test]
    fn reflected_term_integral() {
        // β/(r² - z conj(z₂)) integrates to 2πβ/r.
        let r = 2.0;
        let z2 = c(0.6, -0.4);
        let beta = c(1.5, 0.5);
        let cfg = CirclePoleConfig::with_origin(r, &[z2]).unwrap();
        let b = r * r / z2.conj();
        // β/(r² - z ā) = (-β/ā)/(z - b)
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(b, 1, -beta / z2.conj())]);
        let v = circle_integral(&f, &cfg, 1, 0.2).unwrap();
        let expected = 2.0 * PI * beta / r;
        assert!((v - expected).norm() < 1e-12 * expected.norm());
    }

    #[test]
    fn inner_simple_pole_integrates_to_zero() {
        let cfg = two_pole();
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(c(0.5, 0.0), 1, c(1.0, 0.0))]);
        let v = circle_integral(&f, &cfg, 1, 1.1).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn l2_of_inner_simple_pole() {
        let r = 1.5;
        let z2 = c(0.4, 0.7);
        let cfg = CirclePoleConfig::with_origin(r, &[z2]).unwrap();
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(z2, 1, c(1.0, 0.0))]);
        let v = circle_l2(&f, &cfg, 1, 2.0).unwrap();
        assert_relative_eq!(v, 2.0 * PI * r / (r * r - z2.norm_sqr()), max_relative = 1e-11);
    }

    #[test]
    fn l2m_with_m1_matches_l2() {
        let cfg = two_pole();
        let f = circle_mu_rational(&cfg);
        let a = circle_l2(&f, &cfg, 1, 0.4).unwrap();
        let b = circle_l2m(&f, &cfg, 1, 1, 0.4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mu_rational_matches_weight() {
        let cfg = CirclePoleConfig::with_origin(1.3, &[c(0.5, 0.1), c(-0.2, -0.8)]).unwrap();
        let sys = BlaschkeSystem::circle(cfg.clone());
        let f = circle_mu_rational(&cfg);
        for k in 0..17 {
            let z = sys.contour_point(0.37 * k as f64);
            let v = f.evaluate(z).unwrap();
            assert_relative_eq!(v.re, sys.mu(z).unwrap(), max_relative = 1e-12);
            assert!(v.im.abs() < 1e-12 * v.re);
        }
        let hp = HalfPlanePoleConfig::new(vec![c(0.3, 1.0), c(-1.0, 0.5)]).unwrap();
        let line = BlaschkeSystem::half_plane(hp.clone());
        let g = line_mu_rational(&hp);
        for k in -8..8 {
            let x = c(0.45 * k as f64, 0.0);
            let v = g.evaluate(x).unwrap();
            assert_relative_eq!(v.re, line.mu(x).unwrap(), max_relative = 1e-12);
        }
    }

    #[test]
    fn half_plane_simple_pole() {
        let cfg = HalfPlanePoleConfig::new(vec![c(0.0, 1.0)]).unwrap();
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(c(0.0, 1.0), 1, c(1.0, 0.0))]);
        assert_relative_eq!(halfplane_l2(&f, &cfg, 1, 1.0).unwrap(), PI, max_relative = 1e-12);
        assert!(matches!(
            halfplane_l2(&f, &cfg, 1, 0.0),
            Err(Error::PhiAtInfinityNode { .. })
        ));
    }

    #[test]
    fn weight_sums() {
        let cfg = CirclePoleConfig::with_origin(2.0, &[c(0.5, 0.5), c(-1.0, 0.2)]).unwrap();
        let sys = BlaschkeSystem::circle(cfg);
        for s in 1..4 {
            let a = QuadratureRule::circle_integral(&sys, s, 0.9).unwrap();
            assert_eq!(a.len(), 3 * s as usize);
            assert_relative_eq!(a.weight_sum(), 4.0 * PI, max_relative = 1e-10);
            let b = QuadratureRule::circle_l2(&sys, s, 0.9).unwrap();
            assert_eq!(b.len(), 6 * s as usize);
            assert_relative_eq!(b.weight_sum(), 4.0 * PI, max_relative = 1e-10);
            assert!(a.weights.iter().chain(&b.weights).all(|&w| w > 0.0));
        }
        let seg = BlaschkeSystem::segment(SegmentPoleConfig::new(vec![c(0.0, 1.5)]).unwrap()).unwrap();
        for s in 1..4 {
            let a = QuadratureRule::segment_integral(&seg, s, 0.3).unwrap();
            assert_relative_eq!(a.weight_sum(), PI, max_relative = 1e-10);
            let b = QuadratureRule::segment_l2(&seg, s, 0.3).unwrap();
            assert_relative_eq!(b.weight_sum(), PI, max_relative = 1e-10);
        }
    }

    #[test]
    fn spf_single_pole() {
        let p = SimplePartialFraction::new(vec![c(0.0, 1.0)]);
        let id = spf_l2_identities(&p, 1.3).unwrap();
        assert_relative_eq!(id.norm_sq, PI, max_relative = 1e-11);
        assert_relative_eq!(id.via_re, PI, max_relative = 1e-11);
        assert_relative_eq!(id.via_mu, PI, max_relative = 1e-11);
        assert!(id.mu_im_gap < 1e-14);
    }

    #[test]
    fn rule_json_shape() {
        let sys = BlaschkeSystem::circle(two_pole());
        let rule = QuadratureRule::circle_integral(&sys, 1, 0.0).unwrap();
        let v = serde_json::to_value(rule.to_json()).unwrap();
        assert_eq!(v["provenance"], "eq3");
        assert_eq!(v["domain"], "circle");
        assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
    }
}
