//! Reference integration used to certify the quadrature rules.
//!
//! Globally adaptive 15-point Gauss–Kronrod with the embedded 7-point Gauss
//! rule as error estimate. This module never touches nodes, weights or
//! Blaschke products; the only thing it shares with the rest of the crate is
//! the integrand supplied by the caller.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

// Kronrod abscissae (positive half, descending) and weights; the odd
// entries are the 7-point Gauss abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Convergence target for one oracle call.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    /// Cap on integrand evaluations before giving up.
    pub max_evaluations: usize,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-12,
            abs: 1e-14,
            max_evaluations: 1_000_000,
            initial_panels: 16,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            ..Self::default()
        }
    }
}

/// Values the integrator can accumulate: `f64` and `Complex64`.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleResult<T> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
    /// The error estimate met `max(rel·|value|, abs, 64ε·∫|g|)`; the last
    /// term is the roundoff floor of the summation itself.
    pub converged: bool,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    l1: f64,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Panel<T> {}
impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_panel<T: Integrand>(g: &impl Fn(f64) -> T, a: f64, b: f64) -> Result<Panel<T>> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut l1 = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        let pair = f1 + f2;
        kronrod = kronrod + pair * WGK[j];
        l1 += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).magnitude();
    let l1 = l1 * half.abs();
    if !(error.is_finite() && value.magnitude().is_finite()) {
        return Err(Error::NonConvergence {
            evaluations: 0,
            error_estimate: f64::NAN,
        });
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        l1,
    })
}

/// `∫_a^b g(t) dt` by global adaptive bisection.
pub fn integrate_interval<T: Integrand>(
    g: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<OracleResult<T>> {
    let panels0 = tol.initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(4 * panels0);
    let mut evaluations = 0usize;
    let fail = |evaluations: usize, err: f64| Error::NonConvergence {
        evaluations,
        error_estimate: err,
    };
    for i in 0..panels0 {
        let lo = a + (b - a) * i as f64 / panels0 as f64;
        let hi = a + (b - a) * (i + 1) as f64 / panels0 as f64;
        let p = kronrod_panel(&g, lo, hi).map_err(|_| fail(evaluations, f64::NAN))?;
        evaluations += 15;
        heap.push(p);
    }

    loop {
        let (value, error, l1) = heap.iter().fold((T::zero(), 0.0, 0.0), |(v, e, l), p| {
            (v + p.value, e + p.error, l + p.l1)
        });
        let target = (tol.rel * value.magnitude())
            .max(tol.abs)
            .max(64.0 * f64::EPSILON * l1);
        if error <= target {
            return Ok(OracleResult {
                value,
                abs_error_estimate: error,
                subdivisions: heap.len(),
                evaluations,
                converged: true,
            });
        }
        if evaluations + 30 > tol.max_evaluations {
            return Err(fail(evaluations, error));
        }
        // Split the worst panels until the estimate drops or a batch is done.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let worst = heap.pop().expect("at least one panel");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                // Interval exhausted at machine resolution.
                return Err(fail(evaluations, error));
            }
            let left = kronrod_panel(&g, worst.a, mid).map_err(|_| fail(evaluations, f64::NAN))?;
            let right = kronrod_panel(&g, mid, worst.b).map_err(|_| fail(evaluations, f64::NAN))?;
            evaluations += 30;
            heap.push(left);
            heap.push(right);
        }
    }
}

/// `∫_{|ζ|=r} g(ζ) |dζ|`, parametrized as `g(r e^{it}) r dt` over `[0, 2π]`.
pub fn integrate_circle<T: Integrand>(
    g: impl Fn(Complex64) -> T,
    r: f64,
    tol: Tolerance,
) -> Result<OracleResult<T>> {
    integrate_interval(|t| g(Complex64::from_polar(r, t)) * r, 0.0, 2.0 * PI, tol)
}

/// `∫_{-1}^{1} g(x) / √(1 - x²) dx` through `x = cos t`, `t ∈ (0, π)`.
pub fn integrate_segment_weighted<T: Integrand>(
    g: impl Fn(f64) -> T,
    tol: Tolerance,
) -> Result<OracleResult<T>> {
    integrate_interval(|t| g(t.cos()), 0.0, PI, tol)
}

/// `∫_ℝ g(x) dx` through `x = tan(u/2)`, `u ∈ (-π, π)`; `g` must decay at
/// least like `|x|^-2`.
pub fn integrate_real_line<T: Integrand>(
    g: impl Fn(f64) -> T,
    tol: Tolerance,
) -> Result<OracleResult<T>> {
    integrate_interval(
        |u| {
            let c = (0.5 * u).cos();
            g((0.5 * u).tan()) * (0.5 / (c * c))
        },
        -PI,
        PI,
        tol,
    )
}

/// Where an `L_p` norm is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpDomain {
    /// `|ζ| = r` with arc length; the evaluator receives `ζ`.
    Circle { radius: f64 },
    /// `[a, b]` with `dt`; the evaluator receives `t + 0i`.
    Interval { a: f64, b: f64 },
    /// `[-1, 1]` with the Chebyshev weight `1/√(1 - x²)`.
    SegmentWeighted,
    /// `ℝ` with `dx`.
    RealLine,
}

/// `(∫ |g|^p)^{1/p}` over `domain`.
pub fn lp_norm(
    g: impl Fn(Complex64) -> Complex64,
    domain: LpDomain,
    p: f64,
    tol: Tolerance,
) -> Result<OracleResult<f64>> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("p must be positive and finite, got {p}")));
    }
    let h = |z: Complex64| g(z).norm().powf(p);
    let res = match domain {
        LpDomain::Circle { radius } => integrate_circle(h, radius, tol)?,
        LpDomain::Interval { a, b } => integrate_interval(|t| h(Complex64::new(t, 0.0)), a, b, tol)?,
        LpDomain::SegmentWeighted => integrate_segment_weighted(|x| h(Complex64::new(x, 0.0)), tol)?,
        LpDomain::RealLine => integrate_real_line(|x| h(Complex64::new(x, 0.0)), tol)?,
    };
    let value = res.value.powf(1.0 / p);
    Ok(OracleResult {
        value,
        abs_error_estimate: value * res.abs_error_estimate / (p * res.value.max(f64::MIN_POSITIVE)),
        ..res
    })
}
