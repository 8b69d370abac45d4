//! Randomized invariants of the evaluator, the Blaschke systems and the
//! rules.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use sharpquad::quadrature::{self, check_admissible, circle_mu_rational, QuadratureRule};
use sharpquad::verify::{self, CircleClass};
use sharpquad::{
    BlaschkeSystem, CirclePoleConfig, PartialFractionTerm, RationalFunction, RuleKind, SegmentPoleConfig,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(a, b)| c(a, b))
}

fn term() -> impl Strategy<Value = PartialFractionTerm> {
    (complex(2.0), 1u32..4, complex(5.0)).prop_map(|(p, k, a)| PartialFractionTerm::new(p, k, a))
}

fn rational() -> impl Strategy<Value = RationalFunction> {
    (
        prop::collection::vec(term(), 0..6),
        prop::collection::vec(complex(3.0), 0..4),
        prop::collection::vec(complex(3.0), 0..3),
    )
        .prop_map(|(t, p, q)| RationalFunction::new(t, p, q))
}

/// Distance from `z` to the nearest pole of `f`, origin included when the
/// `1/z` tail is present.
fn pole_distance(f: &RationalFunction, z: Complex64) -> f64 {
    let mut d = f.terms().iter().map(|t| (z - t.pole).norm()).fold(f64::INFINITY, f64::min);
    if !f.poly_inv().is_empty() {
        d = d.min(z.norm());
    }
    d
}

/// Circle configurations with `n ≤ 6` and `|z_k| ≤ 0.9r`.
fn circle_config() -> impl Strategy<Value = CirclePoleConfig> {
    (
        prop::sample::select(vec![0.5, 1.0, 2.0]),
        prop::collection::vec((0.05f64..0.9, 0.0..2.0 * PI), 0..6),
    )
        .prop_filter_map("poles too close", |(r, polar)| {
            let poles: Vec<Complex64> = polar.iter().map(|&(m, t)| Complex64::from_polar(m * r, t)).collect();
            for i in 0..poles.len() {
                for j in 0..i {
                    if (poles[i] - poles[j]).norm() < 0.05 * r {
                        return None;
                    }
                }
            }
            CirclePoleConfig::with_origin(r, &poles).ok()
        })
}

// ---------------------------------------------------------------------------
// Independent evaluator: a single fraction N/D with Gaussian-integer
// coefficients built exactly in i64, evaluated by Horner.

type Gi = (i64, i64);

fn gmul(a: Gi, b: Gi) -> Gi {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gadd(a: Gi, b: Gi) -> Gi {
    (a.0 + b.0, a.1 + b.1)
}

/// Ascending coefficients of `p · q`.
fn pmul(p: &[Gi], q: &[Gi]) -> Vec<Gi> {
    let mut out = vec![(0, 0); p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] = gadd(out[i + j], gmul(a, b));
        }
    }
    out
}

fn padd(p: &[Gi], q: &[Gi]) -> Vec<Gi> {
    let mut out = vec![(0, 0); p.len().max(q.len())];
    for (i, &a) in p.iter().enumerate() {
        out[i] = gadd(out[i], a);
    }
    for (i, &b) in q.iter().enumerate() {
        out[i] = gadd(out[i], b);
    }
    out
}

fn horner(p: &[Gi], z: Complex64) -> Complex64 {
    p.iter().rev().fold(c(0.0, 0.0), |acc, &(a, b)| acc * z + c(a as f64, b as f64))
}

/// `Σ a_j/(z - p_j)^{k_j} + Σ q_j z^j` as one fraction.
fn naive_eval(terms: &[(Gi, u32, Gi)], poly: &[Gi], z: Complex64) -> Complex64 {
    let linear = |p: Gi| vec![(-p.0, -p.1), (1, 0)];
    let mut den: Vec<Gi> = vec![(1, 0)];
    let mut num: Vec<Gi> = vec![(0, 0)];
    for &(p, k, a) in terms {
        let mut factor = vec![(1, 0)];
        for _ in 0..k {
            factor = pmul(&factor, &linear(p));
        }
        // num/den + a/factor = (num·factor + a·den) / (den·factor)
        num = padd(&pmul(&num, &factor), &pmul(&[a], &den));
        den = pmul(&den, &factor);
    }
    num = padd(&num, &pmul(poly, &den));
    horner(&num, z) / horner(&den, z)
}

fn gaussian(range: i64) -> impl Strategy<Value = Gi> {
    (-range..=range, -range..=range)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluate_is_conjugate_equivariant(f in rational(), z in complex(3.0)) {
        prop_assume!(pole_distance(&f, z) > 0.05);
        let lhs = f.conj().evaluate(z.conj()).unwrap();
        let rhs = f.evaluate(z).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-14 * rhs.norm().max(1e-300));
    }

    #[test]
    fn evaluate_matches_single_fraction(
        terms in prop::collection::vec((gaussian(2), 1u32..3, gaussian(3)), 1..4),
        poly in prop::collection::vec(gaussian(3), 0..3),
        z in complex(3.0),
    ) {
        let dist = terms.iter().map(|&(p, _, _)| (z - c(p.0 as f64, p.1 as f64)).norm()).fold(f64::INFINITY, f64::min);
        prop_assume!(dist > 0.5);
        let f = RationalFunction::new(
            terms.iter().map(|&(p, k, a)| PartialFractionTerm::new(c(p.0 as f64, p.1 as f64), k, c(a.0 as f64, a.1 as f64))).collect(),
            poly.iter().map(|&(a, b)| c(a as f64, b as f64)).collect(),
            vec![],
        );
        let got = f.evaluate(z).unwrap();
        let want = naive_eval(&terms, &poly, z);
        // Exact cancellation to zero leaves only rounding noise.
        let scale = terms.iter().map(|&(p, k, a)| {
            c(a.0 as f64, a.1 as f64).norm() / (z - c(p.0 as f64, p.1 as f64)).norm().powi(k as i32)
        }).sum::<f64>() + poly.iter().enumerate().map(|(j, &(a, b))| c(a as f64, b as f64).norm() * z.norm().powi(j as i32)).sum::<f64>();
        prop_assert!((got - want).norm() <= 1e-13 * want.norm().max(scale * 1e-2), "{got} vs {want}");
    }

    #[test]
    fn normalization_is_idempotent_and_preserves_values(
        raw in prop::collection::vec(term(), 0..6),
        dup in 0usize..3,
        origin in prop::collection::vec((1u32..3, complex(2.0)), 0..2),
        poly in prop::collection::vec(complex(3.0), 0..4),
        probes in prop::collection::vec(complex(3.0), 100),
    ) {
        let mut terms = raw.clone();
        // Repeated poles and zero coefficients exercise merging and dropping.
        for t in raw.iter().take(dup) {
            terms.push(PartialFractionTerm::new(t.pole, t.order, -0.5 * t.coefficient));
            terms.push(PartialFractionTerm::new(t.pole, t.order + 1, c(0.0, 0.0)));
        }
        for &(k, a) in &origin {
            terms.push(PartialFractionTerm::new(c(0.0, 0.0), k, a));
        }
        let f = RationalFunction::new(terms.clone(), poly.clone(), vec![]);
        let again = RationalFunction::new(f.terms().to_vec(), f.poly().to_vec(), f.poly_inv().to_vec());
        prop_assert_eq!(&again, &f);
        for z in probes {
            let d = terms.iter().map(|t| (z - t.pole).norm()).fold(z.norm(), f64::min);
            if d < 0.1 {
                continue;
            }
            let direct: Complex64 = terms.iter().map(|t| t.coefficient / (z - t.pole).powu(t.order)).sum::<Complex64>()
                + poly.iter().enumerate().map(|(j, &a)| a * z.powu(j as u32)).sum::<Complex64>();
            let scale = terms.iter().map(|t| t.coefficient.norm() / (z - t.pole).norm().powi(t.order as i32)).sum::<f64>()
                + poly.iter().enumerate().map(|(j, a)| a.norm() * z.norm().powi(j as i32)).sum::<f64>();
            let v = f.evaluate(z).unwrap();
            prop_assert!((v - direct).norm() <= 1e-14 * direct.norm().max(scale * 1e-1), "{v} vs {direct}");
        }
    }

    #[test]
    fn mu_three_ways(cfg in circle_config(), ts in prop::collection::vec(0.0..2.0 * PI, 50)) {
        let sys = BlaschkeSystem::circle(cfg.clone());
        let rational = circle_mu_rational(&cfg);
        for t in ts {
            let z = sys.contour_point(t);
            let sum = sys.mu(z).unwrap();
            let logd = sys.mu_log_derivative(z);
            let rat = rational.evaluate(z).unwrap();
            let h = 1e-4;
            let fd = (-sys.phase(t + 2.0 * h) + 8.0 * sys.phase(t + h) - 8.0 * sys.phase(t - h) + sys.phase(t - 2.0 * h)) / (12.0 * h);
            prop_assert!((logd.re - sum).abs() <= 1e-12 * sum && logd.im.abs() <= 1e-12 * sum);
            prop_assert!((rat - sum).norm() <= 1e-12 * sum);
            prop_assert!((fd - sum).abs() <= 1e-8 * sum, "fd {fd} vs {sum}");
        }
    }

    #[test]
    fn nodes_are_ordered_with_small_residuals(cfg in circle_config(), s in 1u32..5, phi in 0.0..4.0 * PI) {
        let n = cfg.len();
        let sys = BlaschkeSystem::circle(cfg);
        let nodes = sys.solve_nodes(s, phi).unwrap();
        prop_assert_eq!(nodes.len(), s as usize * n);
        prop_assert!(nodes.params.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(nodes.max_residual() < 1e-11);
        prop_assert!(nodes.weights_mu.iter().all(|&m| m > 0.0));
    }

    #[test]
    fn lemma1_identities(cfg in circle_config(), s in 1u32..5, phi in 0.0..2.0 * PI) {
        prop_assume!(cfg.len() <= 5);
        let cfg = CirclePoleConfig::new(1.0, cfg.inner_poles().iter().map(|&z| z / cfg.radius()).collect()).unwrap();
        let nodes = BlaschkeSystem::circle(cfg).solve_nodes(s, phi).unwrap();
        let sf = s as f64;
        let total: f64 = nodes.weights_mu.iter().map(|m| 1.0 / m).sum::<f64>() / sf;
        prop_assert!((total - 1.0).abs() < 1e-10);
        for j in 1..s as i32 {
            for sign in [-1, 1] {
                let v: Complex64 = nodes.nodes.iter().zip(&nodes.weights_mu).map(|(z, m)| z.powi(sign * j) / m).sum::<Complex64>() / sf;
                prop_assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn nodes_move_forward_with_phi(cfg in circle_config(), s in 1u32..4) {
        let sys = BlaschkeSystem::circle(cfg);
        let phis: Vec<f64> = (0..100).map(|k| 2.0 * PI * k as f64 / 100.0).collect();
        let tr = sys.track_nodes(s, &phis).unwrap();
        prop_assert!(tr.is_monotone());
        prop_assert!(tr.preserves_order());
    }

    #[test]
    fn segment_nodes_are_conjugation_symmetric(seed in any::<u64>(), s in 1u32..4, zero in any::<bool>()) {
        let mut rng = verify::rng(seed);
        let count = rng.gen_range(0..=2);
        let seg = verify::random_segment_config(&mut rng, count);
        let sys = BlaschkeSystem::segment(seg).unwrap();
        let phi = if zero { 0.0 } else { PI };
        let nodes = sys.solve_nodes(s, phi).unwrap();
        for z in &nodes.nodes {
            let d = nodes.nodes.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circle_rules_match_oracle_and_ignore_phi(seed in any::<u64>(), l2 in any::<bool>(), boundary in any::<bool>()) {
        let mut rng = verify::rng(seed);
        let r = verify::random_radius(&mut rng);
        let n = rng.gen_range(1..=5);
        let s = rng.gen_range(1..=3);
        let cfg = verify::random_circle_config(&mut rng, r, n);
        let class = if l2 { CircleClass::L2 { boundary } } else { CircleClass::Integral };
        let f = verify::random_circle_function(&mut rng, &cfg, s, class);
        let phis: Vec<f64> = (0..25).map(|_| rng.gen_range(0.0..4.0 * PI)).collect();
        let values: Vec<Complex64> = phis.iter().map(|&phi| {
            if l2 {
                quadrature::circle_l2(&f, &cfg, s, phi).map(Complex64::from)
            } else {
                quadrature::circle_integral(&f, &cfg, s, phi)
            }
        }).collect::<Result<_, _>>().unwrap();
        let oracle = if l2 {
            verify::oracle_circle_abs_pow(&f, r, 2).unwrap().into()
        } else {
            verify::oracle_circle_integral(&f, r).unwrap()
        };
        prop_assert!((values[0] - oracle).norm() < 1e-9 * oracle.norm());
        for v in &values {
            prop_assert!((v - values[0]).norm() < 1e-10 * values[0].norm());
        }
    }

    #[test]
    fn segment_and_line_rules_match_oracle(seed in any::<u64>()) {
        let mut rng = verify::rng(seed);
        let s = rng.gen_range(1..=3);
        let count = rng.gen_range(0..=2);
        let seg = verify::random_segment_config(&mut rng, count);
        let f = verify::random_segment_function(&mut rng, &seg, s);
        let phi = rng.gen_range(0.0..2.0 * PI);
        let rule = quadrature::segment_l2(&f, &seg, s, phi).unwrap();
        let oracle = verify::oracle_segment_l2(&f).unwrap();
        prop_assert!((rule - oracle).abs() < 1e-9 * oracle);

        let n = rng.gen_range(1..=3);
        let hp = verify::random_half_plane_config(&mut rng, n);
        let g = verify::random_half_plane_function(&mut rng, &hp, s);
        let phi = rng.gen_range(0.1..2.0 * PI - 0.1);
        let rule = quadrature::halfplane_l2(&g, &hp, s, phi).unwrap();
        let oracle = verify::oracle_line_l2(&g).unwrap();
        prop_assert!((rule - oracle).abs() < 1e-9 * oracle);
    }

    #[test]
    fn weights_are_positive_and_sum_to_length(cfg in circle_config(), s in 1u32..4, phi in 0.0..2.0 * PI) {
        let r = cfg.radius();
        let sys = BlaschkeSystem::circle(cfg);
        let rule = QuadratureRule::circle_integral(&sys, s, phi).unwrap();
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
        prop_assert!((rule.weight_sum() - 2.0 * PI * r).abs() < 1e-10 * 2.0 * PI * r);
    }

    #[test]
    fn exceeding_a_multiplicity_is_rejected(seed in any::<u64>()) {
        let mut rng = verify::rng(seed);
        let r = verify::random_radius(&mut rng);
        let n = rng.gen_range(2..=5);
        let s = rng.gen_range(1..=3);
        let cfg = verify::random_circle_config(&mut rng, r, n);
        let a = cfg.nonzero_poles().next().unwrap();
        let f = RationalFunction::from_terms(vec![PartialFractionTerm::new(a, s + 1, c(1.0, 0.0))]);
        let sys = BlaschkeSystem::circle(cfg.clone());
        prop_assert!(!check_admissible(&f, &sys, s, RuleKind::CircleIntegral).unwrap().verdict);
        prop_assert!(quadrature::circle_integral(&f, &cfg, s, 0.3).is_err());
    }
}

#[test]
fn gauss_chebyshev_reduction() {
    let sys = BlaschkeSystem::segment(SegmentPoleConfig::infinity_only()).unwrap();
    for s in 1..=8u32 {
        let rule = QuadratureRule::segment_integral(&sys, 2 * s, PI).unwrap();
        for z in &rule.points {
            let x = z.re;
            let k = ((x.acos() * 2.0 * s as f64 / PI + 1.0) / 2.0).round();
            let lam = ((2.0 * k - 1.0) * PI / (2 * s) as f64).cos();
            assert!((x - lam).abs() < 1e-12, "s = {s}: {x}");
        }
    }
}
