//! Pole configurations for the three contours.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{from_pair, pair};

/// Minimum distance between distinct inner poles, relative to the radius.
const MIN_POLE_SEPARATION: f64 = 1e-9;
/// Minimum distance from a pole to the contour (conditioning guard).
const CONTOUR_GUARD: f64 = 1e-6;
/// Tolerance for `| |v| - 1 |` of a Joukowski preimage.
const BRANCH_GUARD: f64 = 1e-8;

/// Inner poles `𝒵_n` of a circle `|z| = r`, always containing the origin.
///
/// The reflected set `r² / conj(z_k)` is derived on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoleConfig {
    radius: f64,
    inner_poles: Vec<Complex64>,
}

impl CirclePoleConfig {
    pub fn new(radius: f64, inner_poles: Vec<Complex64>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
        }
        if !inner_poles.iter().any(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidConfig("inner pole set must contain 0".into()));
        }
        for (i, z) in inner_poles.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidConfig(format!("pole {z} is not finite")));
            }
            if z.norm() > radius * (1.0 - CONTOUR_GUARD) {
                return Err(Error::InvalidConfig(format!(
                    "pole {z} is too close to or outside the circle of radius {radius}"
                )));
            }
            for w in &inner_poles[..i] {
                if (z - w).norm() < MIN_POLE_SEPARATION * radius {
                    return Err(Error::InvalidConfig(format!("poles {w} and {z} coincide")));
                }
            }
        }
        Ok(Self {
            radius,
            inner_poles,
        })
    }

    /// Prepends the origin to `others` (the origin must not be among them).
    pub fn with_origin(radius: f64, others: &[Complex64]) -> Result<Self> {
        let mut poles = Vec::with_capacity(others.len() + 1);
        poles.push(Complex64::new(0.0, 0.0));
        poles.extend_from_slice(others);
        Self::new(radius, poles)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn inner_poles(&self) -> &[Complex64] {
        &self.inner_poles
    }

    pub fn len(&self) -> usize {
        self.inner_poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner_poles.is_empty()
    }

    /// Inner poles other than the origin.
    pub fn nonzero_poles(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.inner_poles
            .iter()
            .copied()
            .filter(|z| *z != Complex64::new(0.0, 0.0))
    }

    /// `r² / conj(z_k)` for every nonzero inner pole; the origin reflects to ∞.
    pub fn reflected_poles(&self) -> Vec<Complex64> {
        let r2 = self.radius * self.radius;
        self.nonzero_poles().map(|z| r2 / z.conj()).collect()
    }

    pub fn scale(&self) -> f64 {
        self.inner_poles
            .iter()
            .map(|z| z.norm())
            .fold(self.radius.max(1.0), f64::max)
    }
}

/// Finite poles `w_k` of the segment configuration `W_n`; ∞ is always
/// included and conjugates are implied.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPoleConfig {
    finite_poles: Vec<Complex64>,
}

impl SegmentPoleConfig {
    /// Accepts any of `w` and `conj(w)`; duplicates up to conjugation are
    /// dropped.
    pub fn new(poles: Vec<Complex64>) -> Result<Self> {
        let mut finite_poles: Vec<Complex64> = Vec::new();
        for w in poles {
            if !(w.re.is_finite() && w.im.is_finite()) {
                return Err(Error::InvalidConfig(format!("pole {w} is not finite")));
            }
            let d = distance_to_segment(w);
            if d < CONTOUR_GUARD {
                return Err(Error::InvalidConfig(format!(
                    "pole {w} is within {d:e} of the segment [-1, 1]"
                )));
            }
            let tol = 1e-12 * w.norm().max(1.0);
            if finite_poles
                .iter()
                .any(|p| (p - w).norm() < tol || (p.conj() - w).norm() < tol)
            {
                continue;
            }
            finite_poles.push(w);
        }
        Ok(Self { finite_poles })
    }

    /// `W_1 = {∞}`.
    pub fn infinity_only() -> Self {
        Self {
            finite_poles: Vec::new(),
        }
    }

    pub fn finite_poles(&self) -> &[Complex64] {
        &self.finite_poles
    }

    /// Every finite pole of `W_n`, conjugates included.
    pub fn pole_set(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(2 * self.finite_poles.len());
        for &w in &self.finite_poles {
            out.push(w);
            if w.im != 0.0 {
                out.push(w.conj());
            }
        }
        out
    }
}

fn distance_to_segment(w: Complex64) -> f64 {
    let dx = (w.re.abs() - 1.0).max(0.0);
    dx.hypot(w.im)
}

/// Upper half-plane poles `z_k` of `ℱ_n`; the conjugates are implied.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlanePoleConfig {
    upper_poles: Vec<Complex64>,
}

impl HalfPlanePoleConfig {
    pub fn new(upper_poles: Vec<Complex64>) -> Result<Self> {
        if upper_poles.is_empty() {
            return Err(Error::InvalidConfig("half-plane configuration needs at least one pole".into()));
        }
        let scale = upper_poles.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (i, z) in upper_poles.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidConfig(format!("pole {z} is not finite")));
            }
            if z.im < CONTOUR_GUARD * scale {
                return Err(Error::InvalidConfig(format!(
                    "pole {z} must lie in the upper half-plane at least {:e} above the axis",
                    CONTOUR_GUARD * scale
                )));
            }
            for w in &upper_poles[..i] {
                if (z - w).norm() < MIN_POLE_SEPARATION * scale {
                    return Err(Error::InvalidConfig(format!("poles {w} and {z} coincide")));
                }
            }
        }
        Ok(Self { upper_poles })
    }

    pub fn upper_poles(&self) -> &[Complex64] {
        &self.upper_poles
    }

    pub fn len(&self) -> usize {
        self.upper_poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper_poles.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.upper_poles.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }
}

/// Joukowski pullback of a segment configuration to the unit disk.
///
/// Each finite pole `w` contributes the preimage `v` of `(v + 1/v)/2 = w`
/// with `|v| < 1` (and `conj(v)` for `conj(w)`); ∞ contributes the origin.
pub fn segment_pullback(cfg: &SegmentPoleConfig) -> Result<CirclePoleConfig> {
    let mut poles = vec![Complex64::new(0.0, 0.0)];
    for w in cfg.pole_set() {
        let q = (w * w - 1.0).sqrt();
        let (a, b) = (w + q, w - q);
        // The larger root has no cancellation; its reciprocal is the inner one.
        let v = if a.norm() >= b.norm() { a.inv() } else { b.inv() };
        if (v.norm() - 1.0).abs() < BRANCH_GUARD {
            return Err(Error::BranchAmbiguity {
                pole: w,
                modulus: v.norm(),
            });
        }
        if poles.iter().all(|p| (p - v).norm() > 1e-12) {
            poles.push(v);
        }
    }
    CirclePoleConfig::new(1.0, poles)
}

/// On-disk configuration: `{"domain": ..., "radius": r, "poles": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq)]
pub enum PoleConfig {
    Circle(CirclePoleConfig),
    Segment(SegmentPoleConfig),
    HalfPlane(HalfPlanePoleConfig),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DomainName {
    Circle,
    Segment,
    Halfplane,
}

#[derive(Serialize, Deserialize)]
struct PoleConfigJson {
    domain: DomainName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default)]
    poles: Vec<[f64; 2]>,
}

impl PoleConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PoleConfigJson = serde_json::from_str(text)?;
        let poles: Vec<Complex64> = raw.poles.into_iter().map(from_pair).collect();
        Ok(match raw.domain {
            DomainName::Circle => {
                let r = raw
                    .radius
                    .ok_or_else(|| Error::InvalidConfig("circle configuration needs a radius".into()))?;
                PoleConfig::Circle(CirclePoleConfig::new(r, poles)?)
            }
            DomainName::Segment => PoleConfig::Segment(SegmentPoleConfig::new(poles)?),
            DomainName::Halfplane => PoleConfig::HalfPlane(HalfPlanePoleConfig::new(poles)?),
        })
    }

    pub fn to_json(&self) -> String {
        let raw = match self {
            PoleConfig::Circle(c) => PoleConfigJson {
                domain: DomainName::Circle,
                radius: Some(c.radius()),
                poles: c.inner_poles().iter().map(|&z| pair(z)).collect(),
            },
            PoleConfig::Segment(c) => PoleConfigJson {
                domain: DomainName::Segment,
                radius: None,
                poles: c.finite_poles().iter().map(|&z| pair(z)).collect(),
            },
            PoleConfig::HalfPlane(c) => PoleConfigJson {
                domain: DomainName::Halfplane,
                radius: None,
                poles: c.upper_poles().iter().map(|&z| pair(z)).collect(),
            },
        };
        serde_json::to_string(&raw).expect("config serializes")
    }
}
