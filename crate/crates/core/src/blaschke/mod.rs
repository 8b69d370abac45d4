//! Finite Blaschke products on the circle, the segment (through the
//! Joukowski pullback) and the real line.
//!
//! On the circle `|z| = r` with inner poles `z_k`,
//!
//! ```text
//! B(z) = r^n Π (z - z_k) / (r² - z conj(z_k)),   μ(ζ) = ζ B'(ζ)/B(ζ) = Σ (r² - |z_k|²) / |ζ - z_k|².
//! ```
//!
//! On the real line with upper poles `z_k`,
//!
//! ```text
//! B₁(z) = Π (z - z_k) / (z - conj(z_k)),   μ₁(x) = B₁'(x) / (2i B₁(x)) = Σ Im z_k / |x - conj(z_k)|².
//! ```
//!
//! Both weights are positive on the contour and are the derivative of the
//! unwrapped phase of the product, which makes the node equation
//! `B^s = e^{iφ}` a monotone scalar root-finding problem.

mod config;
mod nodes;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use config::{
    segment_pullback, CirclePoleConfig, HalfPlanePoleConfig, PoleConfig, SegmentPoleConfig,
};
pub use nodes::{NodeSet, NodeSetJson, NodeTrajectories};

use crate::error::{Error, Result};

/// Relative distance from the contour accepted by [`BlaschkeSystem::mu`].
const ON_CONTOUR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Circle,
    Segment,
    HalfPlane,
}

#[derive(Debug, Clone)]
enum Kind {
    Circle(CirclePoleConfig),
    Segment {
        source: SegmentPoleConfig,
        disk: CirclePoleConfig,
    },
    HalfPlane(HalfPlanePoleConfig),
}

/// A Blaschke product together with its weight and phase.
///
/// For the segment the product lives on the unit circle over the pulled
/// back pole set `V_ν`; contour quantities (`mu`, `phase`, nodes) refer to
/// that circle.
#[derive(Debug, Clone)]
pub struct BlaschkeSystem {
    kind: Kind,
}

impl BlaschkeSystem {
    pub fn circle(cfg: CirclePoleConfig) -> Self {
        Self {
            kind: Kind::Circle(cfg),
        }
    }

    pub fn segment(cfg: SegmentPoleConfig) -> Result<Self> {
        let disk = segment_pullback(&cfg)?;
        Ok(Self {
            kind: Kind::Segment { source: cfg, disk },
        })
    }

    pub fn half_plane(cfg: HalfPlanePoleConfig) -> Self {
        Self {
            kind: Kind::HalfPlane(cfg),
        }
    }

    pub fn from_config(cfg: &PoleConfig) -> Result<Self> {
        Ok(match cfg {
            PoleConfig::Circle(c) => Self::circle(c.clone()),
            PoleConfig::Segment(c) => Self::segment(c.clone())?,
            PoleConfig::HalfPlane(c) => Self::half_plane(c.clone()),
        })
    }

    pub fn domain(&self) -> Domain {
        match self.kind {
            Kind::Circle(_) => Domain::Circle,
            Kind::Segment { .. } => Domain::Segment,
            Kind::HalfPlane(_) => Domain::HalfPlane,
        }
    }

    /// The circle configuration behind a circle or segment system.
    pub fn disk(&self) -> Option<&CirclePoleConfig> {
        match &self.kind {
            Kind::Circle(c) => Some(c),
            Kind::Segment { disk, .. } => Some(disk),
            Kind::HalfPlane(_) => None,
        }
    }

    pub fn segment_source(&self) -> Option<&SegmentPoleConfig> {
        match &self.kind {
            Kind::Segment { source, .. } => Some(source),
            _ => None,
        }
    }

    pub fn half_plane_config(&self) -> Option<&HalfPlanePoleConfig> {
        match &self.kind {
            Kind::HalfPlane(c) => Some(c),
            _ => None,
        }
    }

    /// Number of Blaschke factors: `n` on the circle and line, `ν` on the
    /// segment.
    pub fn degree(&self) -> usize {
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => c.len(),
            Kind::HalfPlane(c) => c.len(),
        }
    }

    /// Radius of the contour circle (1 for the segment pullback); `None`
    /// on the line.
    pub fn radius(&self) -> Option<f64> {
        self.disk().map(|c| c.radius())
    }

    pub fn scale(&self) -> f64 {
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => c.scale(),
            Kind::HalfPlane(c) => c.scale(),
        }
    }

    /// Contour point at parameter `t`: `r e^{it}` on circles, `t` itself on
    /// the line.
    pub fn contour_point(&self, t: f64) -> Complex64 {
        match self.radius() {
            Some(r) => Complex64::from_polar(r, t),
            None => Complex64::new(t, 0.0),
        }
    }

    /// `B(z)`, one factor per distinct pole.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let tol = 1e-12 * self.scale();
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => {
                let r = c.radius();
                let r2 = r * r;
                let mut acc = Complex64::new(1.0, 0.0);
                for &a in c.inner_poles() {
                    let den = r2 - z * a.conj();
                    if a != Complex64::new(0.0, 0.0) && (den / a.conj()).norm() < tol {
                        return Err(Error::PoleProximity {
                            point: z,
                            pole: r2 / a.conj(),
                            distance: (den / a.conj()).norm(),
                        });
                    }
                    acc *= (z - a) * r / den;
                }
                Ok(acc)
            }
            Kind::HalfPlane(c) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for &a in c.upper_poles() {
                    let den = z - a.conj();
                    if den.norm() < tol {
                        return Err(Error::PoleProximity {
                            point: z,
                            pole: a.conj(),
                            distance: den.norm(),
                        });
                    }
                    acc *= (z - a) / den;
                }
                Ok(acc)
            }
        }
    }

    fn check_on_contour(&self, z: Complex64) -> Result<()> {
        let deviation = match self.radius() {
            Some(r) => (z.norm() - r).abs() / r,
            None => z.im.abs() / self.scale(),
        };
        if deviation > ON_CONTOUR {
            return Err(Error::OffContour {
                point: z,
                deviation,
            });
        }
        Ok(())
    }

    /// The weight `μ` (circle, segment pullback) or `μ₁` (line) at a
    /// contour point, in its positive sum form.
    pub fn mu(&self, zeta: Complex64) -> Result<f64> {
        self.check_on_contour(zeta)?;
        Ok(self.mu_unchecked(zeta))
    }

    pub(crate) fn mu_unchecked(&self, zeta: Complex64) -> f64 {
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => {
                let r2 = c.radius() * c.radius();
                c.inner_poles()
                    .iter()
                    .map(|&a| (r2 - a.norm_sqr()) / (zeta - a).norm_sqr())
                    .sum()
            }
            Kind::HalfPlane(c) => {
                let x = zeta.re;
                c.upper_poles()
                    .iter()
                    .map(|&a| a.im / ((x - a.re) * (x - a.re) + a.im * a.im))
                    .sum()
            }
        }
    }

    /// The logarithmic-derivative form of the weight: `z B'(z)/B(z)` on
    /// circles, `B₁'(z) / (2i B₁(z))` on the line. Real and equal to
    /// [`mu`](Self::mu) on the contour; defined off the contour too.
    pub fn mu_log_derivative(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => {
                let r2 = c.radius() * c.radius();
                c.inner_poles()
                    .iter()
                    .map(|&a| z / (z - a) + z * a.conj() / (r2 - z * a.conj()))
                    .sum()
            }
            Kind::HalfPlane(c) => {
                let s: Complex64 = c
                    .upper_poles()
                    .iter()
                    .map(|&a| (z - a).inv() - (z - a.conj()).inv())
                    .sum();
                s / Complex64::new(0.0, 2.0)
            }
        }
    }

    /// Continuous phase `Φ(t) = arg B(contour(t))`.
    ///
    /// On circles `t ∈ [0, 2π]` and `Φ(0)` is the principal value of
    /// `arg B(r)`; `Φ` increases by `2πn` over a turn with `Φ' = μ`.
    /// On the line `t = x ∈ ℝ`, `Φ` increases from `-2πn` to `0` with
    /// `Φ' = 2μ₁`.
    pub fn phase(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Circle(c) | Kind::Segment { disk: c, .. } => {
                circle_raw_phase(c, t) + circle_phase_offset(c)
            }
            Kind::HalfPlane(c) => line_phase(c, t),
        }
    }

    /// `dΦ/dt`: `μ` on circles, `2μ₁` on the line.
    pub fn phase_derivative(&self, t: f64) -> f64 {
        let z = self.contour_point(t);
        match self.domain() {
            Domain::HalfPlane => 2.0 * self.mu_unchecked(z),
            _ => self.mu_unchecked(z),
        }
    }

    /// Solves `B^s(ζ) = e^{iφ}` on the contour.
    pub fn solve_nodes(&self, s: u32, phi: f64) -> Result<NodeSet> {
        nodes::solve(self, s, phi)
    }

    /// Node trajectories `ζ_j(φ)` over a sequence of increasing `φ`.
    pub fn track_nodes(&self, s: u32, phis: &[f64]) -> Result<NodeTrajectories> {
        nodes::track(self, s, phis)
    }
}

/// `Σ (t - 2 arg(r - conj(a) e^{it}))`; each `arg` stays in `(-π/2, π/2)`
/// because `Re(r - conj(a) e^{it}) ≥ r - |a| > 0`, so no unwrapping is
/// needed.
fn circle_raw_phase(c: &CirclePoleConfig, t: f64) -> f64 {
    let r = c.radius();
    let e = Complex64::from_polar(1.0, t);
    c.inner_poles()
        .iter()
        .map(|&a| {
            let w = r - a.conj() * e;
            t - 2.0 * w.im.atan2(w.re)
        })
        .sum()
}

fn circle_phase_offset(c: &CirclePoleConfig) -> f64 {
    let r = c.radius();
    let b0: Complex64 = c
        .inner_poles()
        .iter()
        .map(|&a| (r - a) * r / (r * r - r * a.conj()))
        .product();
    let raw0 = circle_raw_phase(c, 0.0);
    2.0 * PI * ((b0.arg() - raw0) / (2.0 * PI)).round()
}

/// `-2 Σ arg(x - conj(z_k))`, continuous on ℝ.
fn line_phase(c: &HalfPlanePoleConfig, x: f64) -> f64 {
    c.upper_poles()
        .iter()
        .map(|&a| -2.0 * a.im.atan2(x - a.re))
        .sum()
}

/// The line phase in the compactified parameter `x = tan(u/2)`,
/// `u ∈ [-π, π]`; runs from `-2πn` to `0`.
pub(crate) fn line_phase_u(c: &HalfPlanePoleConfig, u: f64) -> f64 {
    let (sh, ch) = (0.5 * u).sin_cos();
    c.upper_poles()
        .iter()
        .map(|&a| -2.0 * (a.im * ch).atan2(sh - a.re * ch))
        .sum()
}

/// `d/du` of [`line_phase_u`].
pub(crate) fn line_phase_u_derivative(c: &HalfPlanePoleConfig, u: f64) -> f64 {
    let (sh, ch) = (0.5 * u).sin_cos();
    c.upper_poles()
        .iter()
        .map(|&a| {
            let x = sh - a.re * ch;
            let y = a.im * ch;
            a.im / (x * x + y * y)
        })
        .sum()
}
