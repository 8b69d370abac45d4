//! Complex rational functions in partial-fraction form.
//!
//! A [`RationalFunction`] is stored as a list of principal-part terms
//! `c / (z - p)^k` plus two Laurent tails: an ordinary polynomial in `z`
//! (its degree is the order of the pole at infinity) and a polynomial in
//! `1/z` without constant term (its length is the order of the pole at 0).
//! Keeping poles explicit makes the admissibility checks of the quadrature
//! rules exact and avoids root-finding on a denominator.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation points closer than this (relative to [`RationalFunction::scale`])
/// to a pole are rejected.
pub const POLE_PROXIMITY: f64 = 1e-12;

/// Poles closer than this (relative to scale) are treated as the same pole
/// during normalization.
const MERGE_TOLERANCE: f64 = 1e-14;

/// Anything that can be evaluated at a complex point.
///
/// Implemented by [`RationalFunction`], [`SimplePartialFraction`] and the
/// extremal functions of the `sharp` module, so quadrature rules and the
/// oracle can consume all of them uniformly.
pub trait Evaluate {
    fn evaluate(&self, z: Complex64) -> Result<Complex64>;
}

impl<F> Evaluate for F
where
    F: Fn(Complex64) -> Complex64,
{
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Ok(self(z))
    }
}

/// An evaluator whose pole locations and orders are known, so it can be
/// checked against a rule's admissible class.
pub trait PoleStructure: Evaluate {
    fn pole_profile(&self) -> PoleProfile;
}

/// A pole location on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    Finite(Complex64),
    Infinity,
}

impl Pole {
    pub fn is_origin(&self) -> bool {
        matches!(self, Pole::Finite(p) if *p == Complex64::new(0.0, 0.0))
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pole::Finite(p) => write!(f, "{p}"),
            Pole::Infinity => write!(f, "∞"),
        }
    }
}

/// Pole locations together with their orders.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PoleProfile {
    entries: Vec<(Pole, u32)>,
}

impl PoleProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `pole` with order `order`, keeping the larger order when the
    /// pole is already present.
    pub fn insert(&mut self, pole: Pole, order: u32) {
        if order == 0 {
            return;
        }
        for (p, k) in &mut self.entries {
            if same_pole(p, &pole) {
                *k = (*k).max(order);
                return;
            }
        }
        self.entries.push((pole, order));
    }

    pub fn entries(&self) -> &[(Pole, u32)] {
        &self.entries
    }

    /// Order of the pole at `pole`, 0 if absent.
    pub fn multiplicity(&self, pole: &Pole) -> u32 {
        self.entries
            .iter()
            .find(|(p, _)| same_pole(p, pole))
            .map_or(0, |(_, k)| *k)
    }

    pub fn at_origin(&self) -> u32 {
        self.multiplicity(&Pole::Finite(Complex64::new(0.0, 0.0)))
    }

    pub fn at_infinity(&self) -> u32 {
        self.multiplicity(&Pole::Infinity)
    }

    /// Finite, nonzero poles.
    pub fn finite_nonzero(&self) -> impl Iterator<Item = (Complex64, u32)> + '_ {
        self.entries.iter().filter_map(|(p, k)| match p {
            Pole::Finite(z) if *z != Complex64::new(0.0, 0.0) => Some((*z, *k)),
            _ => None,
        })
    }
}

fn same_pole(a: &Pole, b: &Pole) -> bool {
    match (a, b) {
        (Pole::Infinity, Pole::Infinity) => true,
        (Pole::Finite(x), Pole::Finite(y)) => x == y,
        _ => false,
    }
}

/// One principal-part term `coefficient / (z - pole)^order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionTerm {
    pub pole: Complex64,
    pub order: u32,
    pub coefficient: Complex64,
}

impl PartialFractionTerm {
    pub fn new(pole: Complex64, order: u32, coefficient: Complex64) -> Self {
        assert!(order >= 1, "partial fraction order must be at least 1");
        Self {
            pole,
            order,
            coefficient,
        }
    }

    fn evaluate(&self, z: Complex64) -> Complex64 {
        let d = z - self.pole;
        let mut denom = d;
        for _ in 1..self.order {
            denom *= d;
        }
        self.coefficient / denom
    }
}

/// Rational function in partial-fraction form with polynomial tails in `z`
/// and `1/z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RationalFunctionJson", into = "RationalFunctionJson")]
pub struct RationalFunction {
    terms: Vec<PartialFractionTerm>,
    poly: Vec<Complex64>,
    poly_inv: Vec<Complex64>,
}

impl RationalFunction {
    /// Builds and normalizes a rational function.
    ///
    /// `poly[j]` multiplies `z^j`; `poly_inv[j]` multiplies `z^-(j+1)`.
    /// Terms with a pole at the origin are folded into `poly_inv`.
    pub fn new(
        terms: Vec<PartialFractionTerm>,
        poly: Vec<Complex64>,
        poly_inv: Vec<Complex64>,
    ) -> Self {
        let mut f = Self {
            terms,
            poly,
            poly_inv,
        };
        f.normalize();
        f
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(Vec::new(), vec![c], Vec::new())
    }

    /// Polynomial with coefficients in ascending powers of `z`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::new(Vec::new(), coeffs, Vec::new())
    }

    /// Laurent polynomial `Σ_{j=lo}^{lo+len-1} c_j z^j`.
    pub fn laurent(lowest_power: i32, coeffs: &[Complex64]) -> Self {
        let mut poly = Vec::new();
        let mut poly_inv = Vec::new();
        for (i, &c) in coeffs.iter().enumerate() {
            let j = lowest_power + i as i32;
            if j >= 0 {
                let j = j as usize;
                if poly.len() <= j {
                    poly.resize(j + 1, Complex64::new(0.0, 0.0));
                }
                poly[j] += c;
            } else {
                let j = (-j - 1) as usize;
                if poly_inv.len() <= j {
                    poly_inv.resize(j + 1, Complex64::new(0.0, 0.0));
                }
                poly_inv[j] += c;
            }
        }
        Self::new(Vec::new(), poly, poly_inv)
    }

    pub fn from_terms(terms: Vec<PartialFractionTerm>) -> Self {
        Self::new(terms, Vec::new(), Vec::new())
    }

    pub fn terms(&self) -> &[PartialFractionTerm] {
        &self.terms
    }

    pub fn poly(&self) -> &[Complex64] {
        &self.poly
    }

    pub fn poly_inv(&self) -> &[Complex64] {
        &self.poly_inv
    }

    /// `max(1, max |pole|)`, the reference length for proximity thresholds.
    pub fn scale(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.pole.norm())
            .fold(1.0, f64::max)
    }

    /// True when `f(∞) = 0`, i.e. no polynomial part at all.
    pub fn is_proper(&self) -> bool {
        self.poly.is_empty()
    }

    fn normalize(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        let scale = self.scale();
        let merge_tol = MERGE_TOLERANCE * scale;

        let mut merged: Vec<PartialFractionTerm> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            if term.pole.norm() <= merge_tol {
                let j = term.order as usize - 1;
                if self.poly_inv.len() <= j {
                    self.poly_inv.resize(j + 1, zero);
                }
                self.poly_inv[j] += term.coefficient;
                continue;
            }
            match merged
                .iter_mut()
                .find(|t| t.order == term.order && (t.pole - term.pole).norm() <= merge_tol)
            {
                Some(t) => t.coefficient += term.coefficient,
                None => merged.push(term),
            }
        }
        // Unify the stored pole value for terms of different order that
        // refer to the same pole.
        for i in 0..merged.len() {
            for j in (i + 1)..merged.len() {
                if (merged[i].pole - merged[j].pole).norm() <= merge_tol {
                    merged[j].pole = merged[i].pole;
                }
            }
        }
        merged.retain(|t| t.coefficient != zero);
        merged.sort_by(|a, b| {
            (a.pole.re, a.pole.im, a.order)
                .partial_cmp(&(b.pole.re, b.pole.im, b.order))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.terms = merged;

        while self.poly.last() == Some(&zero) {
            self.poly.pop();
        }
        while self.poly_inv.last() == Some(&zero) {
            self.poly_inv.pop();
        }
    }

    /// Value at `z`; fails with [`Error::PoleProximity`] within
    /// `1e-12 · scale` of a pole.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let tol = POLE_PROXIMITY * self.scale();
        for t in &self.terms {
            let d = (z - t.pole).norm();
            if d < tol {
                return Err(Error::PoleProximity {
                    point: z,
                    pole: t.pole,
                    distance: d,
                });
            }
        }
        if !self.poly_inv.is_empty() && z.norm() < tol {
            return Err(Error::PoleProximity {
                point: z,
                pole: Complex64::new(0.0, 0.0),
                distance: z.norm(),
            });
        }
        Ok(self.evaluate_unchecked(z))
    }

    fn evaluate_unchecked(&self, z: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = self.terms.iter().map(|t| t.evaluate(z)).sum::<Complex64>();
        acc += self.poly.iter().rev().fold(zero, |a, &c| a * z + c);
        if !self.poly_inv.is_empty() {
            let w = z.inv();
            acc += self.poly_inv.iter().rev().fold(zero, |a, &c| a * w + c) * w;
        }
        acc
    }

    /// `|f(z)|²`, the integrand of the L₂ rules.
    pub fn abs_squared_on_contour(&self, z: Complex64) -> Result<f64> {
        self.evaluate(z).map(|v| v.norm_sqr())
    }

    /// Every pole of `f`, including 0 and ∞, with its order.
    pub fn pole_multiplicity_profile(&self) -> PoleProfile {
        let mut profile = PoleProfile::new();
        for t in &self.terms {
            profile.insert(Pole::Finite(t.pole), t.order);
        }
        if !self.poly_inv.is_empty() {
            profile.insert(Pole::Finite(Complex64::new(0.0, 0.0)), self.poly_inv.len() as u32);
        }
        if self.poly.len() > 1 {
            profile.insert(Pole::Infinity, self.poly.len() as u32 - 1);
        }
        profile
    }

    /// Conjugates every coefficient and every pole.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PartialFractionTerm::new(t.pole.conj(), t.order, t.coefficient.conj()))
                .collect(),
            poly: self.poly.iter().map(|c| c.conj()).collect(),
            poly_inv: self.poly_inv.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| PartialFractionTerm::new(t.pole, t.order, t.coefficient * k))
                .collect(),
            self.poly.iter().map(|c| c * k).collect(),
            self.poly_inv.iter().map(|c| c * k).collect(),
        )
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::new(
            terms,
            add_coeffs(&self.poly, &other.poly),
            add_coeffs(&self.poly_inv, &other.poly_inv),
        )
    }
}

fn add_coeffs(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default()
        })
        .collect()
}

impl Evaluate for RationalFunction {
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        RationalFunction::evaluate(self, z)
    }
}

impl PoleStructure for RationalFunction {
    fn pole_profile(&self) -> PoleProfile {
        self.pole_multiplicity_profile()
    }
}

/// `ρ_n(z) = Σ 1/(z - z_k)`, the logarithmic derivative of `Π (z - z_k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplePartialFraction {
    #[serde(with = "complex_list")]
    poles: Vec<Complex64>,
}

impl SimplePartialFraction {
    pub fn new(poles: Vec<Complex64>) -> Self {
        Self { poles }
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn order(&self) -> usize {
        self.poles.len()
    }

    /// Repeated poles become one simple term whose coefficient counts them.
    pub fn to_rational(&self) -> RationalFunction {
        RationalFunction::from_terms(
            self.poles
                .iter()
                .map(|&p| PartialFractionTerm::new(p, 1, Complex64::new(1.0, 0.0)))
                .collect(),
        )
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let scale = self.poles.iter().map(|p| p.norm()).fold(1.0, f64::max);
        let mut acc = Complex64::new(0.0, 0.0);
        for &p in &self.poles {
            let d = z - p;
            if d.norm() < POLE_PROXIMITY * scale {
                return Err(Error::PoleProximity {
                    point: z,
                    pole: p,
                    distance: d.norm(),
                });
            }
            acc += d.inv();
        }
        Ok(acc)
    }
}

impl Evaluate for SimplePartialFraction {
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        SimplePartialFraction::evaluate(self, z)
    }
}

impl PoleStructure for SimplePartialFraction {
    fn pole_profile(&self) -> PoleProfile {
        let mut profile = PoleProfile::new();
        for &p in &self.poles {
            profile.insert(Pole::Finite(p), 1);
        }
        profile
    }
}

pub(crate) fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// Serde adapter for `Vec<Complex64>` as `[[re, im], ...]`.
pub(crate) mod complex_list {
    use super::{from_pair, pair};
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|&z| pair(z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(from_pair).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    pole: [f64; 2],
    order: u32,
    coef: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionJson {
    #[serde(default)]
    terms: Vec<TermJson>,
    #[serde(default)]
    poly: Vec<[f64; 2]>,
    #[serde(default)]
    poly_inv: Vec<[f64; 2]>,
}

impl From<RationalFunctionJson> for RationalFunction {
    fn from(j: RationalFunctionJson) -> Self {
        RationalFunction::new(
            j.terms
                .into_iter()
                .map(|t| PartialFractionTerm::new(from_pair(t.pole), t.order.max(1), from_pair(t.coef)))
                .collect(),
            j.poly.into_iter().map(from_pair).collect(),
            j.poly_inv.into_iter().map(from_pair).collect(),
        )
    }
}

impl From<RationalFunction> for RationalFunctionJson {
    fn from(f: RationalFunction) -> Self {
        Self {
            terms: f
                .terms
                .iter()
                .map(|t| TermJson {
                    pole: pair(t.pole),
                    order: t.order,
                    coef: pair(t.coefficient),
                })
                .collect(),
            poly: f.poly.iter().map(|&c| pair(c)).collect(),
            poly_inv: f.poly_inv.iter().map(|&c| pair(c)).collect(),
        }
    }
}
