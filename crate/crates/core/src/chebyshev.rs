//! Chebyshev polynomials of the second kind.
//!
//! `U_n(cos t) = sin((n+1)t) / sin t`, so `U_n(1) = n + 1` and
//! `∫ U_n² / √(1-x²) dx = π(n+1)`. Hence `U_{s-1}` turns the segment
//! inequality at `p = 2` into the equality `|U_{s-1}(1)|² = (s/π) ‖U_{s-1}‖²_{*,2}`.

use num_complex::Complex64;

/// `(U_n(x), U_n'(x), U_n''(x))` by the three-term recurrence and its
/// first two derivatives.
pub fn second_kind_with_derivatives(n: u32, x: f64) -> (f64, f64, f64) {
    // U_{k+1} = 2x U_k - U_{k-1}
    // U'_{k+1} = 2U_k + 2x U'_k - U'_{k-1}
    // U''_{k+1} = 4U'_k + 2x U''_k - U''_{k-1}
    let (mut u0, mut d0, mut e0) = (1.0, 0.0, 0.0);
    if n == 0 {
        return (u0, d0, e0);
    }
    let (mut u1, mut d1, mut e1) = (2.0 * x, 2.0, 0.0);
    for _ in 1..n {
        let u2 = 2.0 * x * u1 - u0;
        let d2 = 2.0 * u1 + 2.0 * x * d1 - d0;
        let e2 = 4.0 * d1 + 2.0 * x * e1 - e0;
        (u0, d0, e0) = (u1, d1, e1);
        (u1, d1, e1) = (u2, d2, e2);
    }
    (u1, d1, e1)
}

/// `U_n(x)`.
pub fn second_kind(n: u32, x: f64) -> f64 {
    second_kind_with_derivatives(n, x).0
}

/// `U_n(z)` at a complex point.
pub fn second_kind_complex(n: u32, z: Complex64) -> Complex64 {
    let mut u0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return u0;
    }
    let mut u1 = 2.0 * z;
    for _ in 1..n {
        let u2 = 2.0 * z * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// Monomial coefficients of `U_n`, ascending powers.
pub fn second_kind_coefficients(n: u32) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for _ in 1..n {
        let mut next = vec![0.0; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += 2.0 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Residual of `(x² - 1) y'' + 3x y' + (1 - s²) y = 0` at `y = U_{s-1}`.
pub fn jacobi_ode_residual(s: u32, x: f64) -> f64 {
    let (y, dy, ddy) = second_kind_with_derivatives(s - 1, x);
    let sf = s as f64;
    (x * x - 1.0) * ddy + 3.0 * x * dy + (1.0 - sf * sf) * y
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trigonometric_form() {
        for n in 0..10 {
            for k in 1..20 {
                let t = 0.15 * k as f64;
                let expected = ((n + 1) as f64 * t).sin() / t.sin();
                assert_relative_eq!(second_kind(n, t.cos()), expected, epsilon = 1e-11);
            }
            assert_relative_eq!(second_kind(n, 1.0), (n + 1) as f64);
        }
    }

    #[test]
    fn coefficients_match_recurrence() {
        for n in 0..9 {
            let c = second_kind_coefficients(n);
            assert_eq!(c.len(), n as usize + 1);
            for x in [-0.9, -0.3, 0.0, 0.4, 0.8] {
                let v: f64 = c.iter().rev().fold(0.0, |a, &ck| a * x + ck);
                assert_relative_eq!(v, second_kind(n, x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for n in 1..7 {
            for x in [-0.7, 0.1, 0.55] {
                let (_, d, dd) = second_kind_with_derivatives(n, x);
                let fd = (second_kind(n, x + h) - second_kind(n, x - h)) / (2.0 * h);
                let fdd = (second_kind(n, x + h) - 2.0 * second_kind(n, x) + second_kind(n, x - h)) / (h * h);
                assert_relative_eq!(d, fd, epsilon = 1e-6, max_relative = 1e-7);
                assert_relative_eq!(dd, fdd, epsilon = 1e-3, max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn ode_holds() {
        for s in 1..9 {
            for k in 0..21 {
                let x = -0.95 + 0.095 * k as f64;
                assert!(jacobi_ode_residual(s, x).abs() < 1e-9);
            }
        }
    }
}
