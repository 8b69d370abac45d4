//! Solver for the node equation `B^s(ζ) = e^{iφ}`.
//!
//! The unwrapped phase `Φ` is strictly increasing along the contour, so the
//! `s·n` nodes are the solutions of `s·Φ(t) = θ_j` for the `s·n` targets
//! `θ_j ≡ φ (mod 2π)` inside the range of `s·Φ`. Each target is bracketed
//! on a uniform pre-grid and polished by Newton's method with a bisection
//! fallback.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{line_phase_u, line_phase_u_derivative, BlaschkeSystem, Domain, Kind};
use crate::error::{Error, Result};
use crate::rational::complex_list;

/// Largest accepted `|B^s(ζ_k) - e^{iφ}|`.
pub const NODE_RESIDUAL_LIMIT: f64 = 1e-11;

const NEWTON_MAX_ITER: usize = 80;
const PHASE_TOLERANCE: f64 = 1e-13;
const MAX_GRID: usize = 1 << 15;

/// Solutions of `B^s(ζ) = e^{iφ}` ordered by contour parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub domain: Domain,
    pub s: u32,
    /// `φ` reduced to `[0, 2π·s·n)`.
    pub phi: f64,
    pub nodes: Vec<Complex64>,
    /// Contour parameter of each node: the angle `t` on circles, `x` on the
    /// line.
    pub params: Vec<f64>,
    pub weights_mu: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Segment abscissae `x_k = (ζ_k + 1/ζ_k)/2`.
    pub fn abscissae(&self) -> Vec<f64> {
        self.nodes.iter().map(|&z| ((z + z.inv()) * 0.5).re).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> NodeSetJson {
        NodeSetJson {
            s: self.s,
            phi: self.phi,
            nodes: self.nodes.clone(),
            mu: self.weights_mu.clone(),
            residuals: self.residuals.clone(),
            abscissae: (self.domain == Domain::Segment).then(|| self.abscissae()),
        }
    }

    /// CSV rows `index, node_re, node_im, param, mu, residual[, x]`.
    pub fn csv_header(&self) -> Vec<&'static str> {
        let mut h = vec!["index", "node_re", "node_im", "param", "mu", "residual"];
        if self.domain == Domain::Segment {
            h.push("x");
        }
        h
    }

    pub fn csv_rows(&self) -> Vec<Vec<f64>> {
        let xs = self.abscissae();
        (0..self.len())
            .map(|k| {
                let mut row = vec![
                    k as f64,
                    self.nodes[k].re,
                    self.nodes[k].im,
                    self.params[k],
                    self.weights_mu[k],
                    self.residuals[k],
                ];
                if self.domain == Domain::Segment {
                    row.push(xs[k]);
                }
                row
            })
            .collect()
    }
}

/// Serialized node set: `{"s", "phi", "nodes", "mu", "residuals"}` plus the
/// segment abscissae when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeSetJson {
    pub s: u32,
    pub phi: f64,
    #[serde(with = "complex_list")]
    pub nodes: Vec<Complex64>,
    pub mu: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abscissae: Option<Vec<f64>>,
}

impl NodeSetJson {
    /// Recomputes `|B^s(ζ_k) - e^{iφ}|` for every stored node.
    pub fn recompute_residuals(&self, sys: &BlaschkeSystem) -> Result<Vec<f64>> {
        let target = Complex64::from_polar(1.0, self.phi);
        self.nodes
            .iter()
            .map(|&z| Ok((sys.eval(z)?.powu(self.s) - target).norm()))
            .collect()
    }
}

/// Monotone phase curve in the solver parameter: `t ∈ [0, 2π]` on circles,
/// `u ∈ [-π, π]` with `x = tan(u/2)` on the line.
struct Curve<'a> {
    sys: &'a BlaschkeSystem,
}

impl Curve<'_> {
    fn bounds(&self) -> (f64, f64) {
        match self.sys.domain() {
            Domain::HalfPlane => (-PI, PI),
            _ => (0.0, 2.0 * PI),
        }
    }

    /// Exact phase values at the two ends of the parameter range.
    fn end_phases(&self) -> (f64, f64) {
        let n = self.sys.degree() as f64;
        match self.sys.domain() {
            Domain::HalfPlane => (-2.0 * PI * n, 0.0),
            _ => {
                let p0 = self.sys.phase(0.0);
                (p0, p0 + 2.0 * PI * n)
            }
        }
    }

    fn phase(&self, p: f64) -> f64 {
        match &self.sys.kind {
            Kind::HalfPlane(c) => line_phase_u(c, p),
            _ => self.sys.phase(p),
        }
    }

    fn derivative(&self, p: f64) -> f64 {
        match &self.sys.kind {
            Kind::HalfPlane(c) => line_phase_u_derivative(c, p),
            _ => self.sys.phase_derivative(p),
        }
    }

    /// Contour point and public parameter for solver parameter `p`.
    fn node(&self, p: f64) -> (Complex64, f64) {
        match self.sys.domain() {
            Domain::HalfPlane => {
                let x = (0.5 * p).tan();
                (Complex64::new(x, 0.0), x)
            }
            _ => (self.sys.contour_point(p), p),
        }
    }

    fn grid_size(&self, s: u32) -> usize {
        let (lo, hi) = self.bounds();
        let probes = 128;
        let (mut dmin, mut dmax) = (f64::INFINITY, 0.0f64);
        for i in 0..probes {
            let p = lo + (hi - lo) * (i as f64 + 0.5) / probes as f64;
            let d = self.derivative(p);
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        let ratio = (dmax / dmin).ceil().max(1.0);
        let base = 8.0 * s as f64 * self.sys.degree() as f64 * ratio;
        (base as usize).clamp(64, MAX_GRID)
    }
}

/// Phase grid `s·Φ(p_i)` used for bracketing.
struct PhaseGrid {
    params: Vec<f64>,
    values: Vec<f64>,
}

impl PhaseGrid {
    fn new(curve: &Curve<'_>, s: u32) -> Self {
        let m = curve.grid_size(s);
        let (lo, hi) = curve.bounds();
        let (g_lo, g_hi) = curve.end_phases();
        let sf = s as f64;
        let mut params = Vec::with_capacity(m + 1);
        let mut values = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let p = lo + (hi - lo) * i as f64 / m as f64;
            params.push(p);
            values.push(if i == 0 {
                sf * g_lo
            } else if i == m {
                sf * g_hi
            } else {
                sf * curve.phase(p)
            });
        }
        Self { params, values }
    }

    fn bracket(&self, target: f64) -> (f64, f64, f64, f64) {
        let m = self.params.len() - 1;
        let i = self
            .values
            .partition_point(|&v| v <= target)
            .saturating_sub(1)
            .min(m - 1);
        (
            self.params[i],
            self.params[i + 1],
            self.values[i],
            self.values[i + 1],
        )
    }
}

/// Safeguarded Newton iteration for `s·Φ(p) = target` inside the bracket.
fn polish(curve: &Curve<'_>, s: f64, target: f64, bracket: (f64, f64, f64, f64)) -> f64 {
    let (mut a, mut b, ga, gb) = bracket;
    let mut x = if gb > ga {
        a + (b - a) * ((target - ga) / (gb - ga)).clamp(0.0, 1.0)
    } else {
        0.5 * (a + b)
    };
    for _ in 0..NEWTON_MAX_ITER {
        let g = s * curve.phase(x) - target;
        if g.abs() <= PHASE_TOLERANCE {
            break;
        }
        if g < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = s * curve.derivative(x);
        let mut next = x - g / d;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if next == x || b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    x
}

fn validate_s(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    Ok(())
}

fn reduce_line_phi(phi: f64) -> Result<f64> {
    let r = phi.rem_euclid(2.0 * PI);
    if r < 1e-12 || 2.0 * PI - r < 1e-12 {
        return Err(Error::PhiAtInfinityNode { phi });
    }
    Ok(r)
}

/// Targets `θ_j` for the `s·n` nodes, ascending.
fn targets(curve: &Curve<'_>, s: u32, phi: f64) -> Result<Vec<f64>> {
    let count = s as usize * curve.sys.degree();
    let two_pi = 2.0 * PI;
    match curve.sys.domain() {
        Domain::HalfPlane => {
            let p = reduce_line_phi(phi)?;
            Ok((0..count)
                .map(|j| p + two_pi * (j as f64 - count as f64))
                .collect())
        }
        _ => {
            let g0 = s as f64 * curve.end_phases().0;
            let j0 = ((g0 - phi) / two_pi).ceil();
            Ok((0..count).map(|j| phi + two_pi * (j0 + j as f64)).collect())
        }
    }
}

pub(super) fn solve(sys: &BlaschkeSystem, s: u32, phi: f64) -> Result<NodeSet> {
    validate_s(s)?;
    let n = sys.degree();
    let period = 2.0 * PI * (s as usize * n) as f64;
    let phi_red = phi.rem_euclid(period);
    let curve = Curve { sys };
    let grid = PhaseGrid::new(&curve, s);
    let targets = targets(&curve, s, phi_red)?;

    let target_point = Complex64::from_polar(1.0, phi_red);
    let mut out = NodeSet {
        domain: sys.domain(),
        s,
        phi: phi_red,
        nodes: Vec::with_capacity(targets.len()),
        params: Vec::with_capacity(targets.len()),
        weights_mu: Vec::with_capacity(targets.len()),
        residuals: Vec::with_capacity(targets.len()),
    };
    for (index, &theta) in targets.iter().enumerate() {
        let p = polish(&curve, s as f64, theta, grid.bracket(theta));
        let (z, param) = curve.node(p);
        let residual = (sys.eval(z)?.powu(s) - target_point).norm();
        if residual.is_nan() || residual >= NODE_RESIDUAL_LIMIT {
            return Err(Error::NodeResidual { index, residual });
        }
        out.nodes.push(z);
        out.params.push(param);
        out.weights_mu.push(sys.mu_unchecked(z));
        out.residuals.push(residual);
    }
    Ok(out)
}

/// Node positions followed continuously through a sweep of `φ`.
#[derive(Debug, Clone)]
pub struct NodeTrajectories {
    pub s: u32,
    pub phis: Vec<f64>,
    /// `params[i][j]`: unwrapped contour parameter of node `j` at `phis[i]`
    /// (on circles it may exceed `2π` after a full turn).
    pub params: Vec<Vec<f64>>,
    pub nodes: Vec<Vec<Complex64>>,
}

impl NodeTrajectories {
    /// Every node moves strictly forward between consecutive sweep steps.
    pub fn is_monotone(&self) -> bool {
        self.params.windows(2).all(|w| {
            w[0].iter()
                .zip(&w[1])
                .all(|(before, after)| after > before)
        })
    }

    /// Nodes never overtake each other within a sweep step.
    pub fn preserves_order(&self) -> bool {
        self.params
            .iter()
            .all(|row| row.windows(2).all(|w| w[1] > w[0]))
    }
}

pub(super) fn track(sys: &BlaschkeSystem, s: u32, phis: &[f64]) -> Result<NodeTrajectories> {
    validate_s(s)?;
    if phis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sweep values of phi must increase".into()));
    }
    let curve = Curve { sys };
    let grid = PhaseGrid::new(&curve, s);
    let count = s as usize * sys.degree();
    let two_pi = 2.0 * PI;
    let span = two_pi * count as f64;
    let sf = s as f64;

    let mut result = NodeTrajectories {
        s,
        phis: phis.to_vec(),
        params: Vec::with_capacity(phis.len()),
        nodes: Vec::with_capacity(phis.len()),
    };
    let Some(&phi_start) = phis.first() else {
        return Ok(result);
    };

    match sys.domain() {
        Domain::HalfPlane => {
            for &phi in phis {
                if !(phi > 0.0 && phi < two_pi) {
                    return Err(Error::PhiAtInfinityNode { phi });
                }
            }
            for &phi in phis {
                let mut row = Vec::with_capacity(count);
                let mut zs = Vec::with_capacity(count);
                for j in 0..count {
                    let theta = phi + two_pi * (j as f64 - count as f64);
                    let p = polish(&curve, sf, theta, grid.bracket(theta));
                    let (z, x) = curve.node(p);
                    row.push(x);
                    zs.push(z);
                }
                result.params.push(row);
                result.nodes.push(zs);
            }
        }
        _ => {
            let g0 = sf * curve.end_phases().0;
            let j0 = ((g0 - phi_start) / two_pi).ceil();
            for &phi in phis {
                let mut row = Vec::with_capacity(count);
                let mut zs = Vec::with_capacity(count);
                for j in 0..count {
                    let theta = phi + two_pi * (j0 + j as f64);
                    let turns = ((theta - g0) / span).floor();
                    let reduced = theta - turns * span;
                    let p = polish(&curve, sf, reduced, grid.bracket(reduced));
                    let (z, t) = curve.node(p);
                    row.push(t + two_pi * turns);
                    zs.push(z);
                }
                result.params.push(row);
                result.nodes.push(zs);
            }
        }
    }
    Ok(result)
}
