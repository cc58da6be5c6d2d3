use std::f64::consts::PI;

use num_traits::Zero;
use proptest::prelude::*;

use quadtile::exact_angles::{eval_angle, rat, recalibrate, recalibrate_exact, rat_to_f64, rint, AngleExpr, Rat};
use quadtile::geometry::{
    a2bc_earth_map_quad, alpha_delta_sq_residual, alpha_delta_sq_roots, b_pair, c_pair, closure_product_shifted,
    cos_a_expressions, distance_from_identity, earth_map_quad, solve_free_angle, EXIST_TOL,
};
use quadtile::vertex_enum::{count_feasibility, VertexCombo};

proptest! {
    #[test]
    fn closure_residual_ignores_the_starting_corner(
        angles in prop::array::uniform4(0.1f64..6.0),
        a in 0.05f64..3.0,
        b in 0.05f64..3.0,
        c in 0.05f64..3.0,
    ) {
        let base = distance_from_identity(&closure_product_shifted(angles, a, b, c, 0));
        for shift in 1..8 {
            let r = distance_from_identity(&closure_product_shifted(angles, a, b, c, shift));
            prop_assert!((r - base).abs() < 1e-12, "shift {shift}: {r} vs {base}");
        }
    }

    #[test]
    fn both_cos_a_expressions_agree(alpha in 0.55f64 * PI..1.45 * PI, beta in 0.05f64 * PI..0.95 * PI) {
        let g = earth_map_quad(alpha, beta, EXIST_TOL).unwrap();
        let (e1, e2) = cos_a_expressions(g.angles);
        if let Some(x) = e1 {
            prop_assert!((x - g.a.cos()).abs() < 1e-8, "{x} vs {}", g.a.cos());
        }
        if let Some(x) = e2 {
            prop_assert!((x - g.a.cos()).abs() < 1e-8, "{x} vs {}", g.a.cos());
        }
    }

    #[test]
    fn edge_pairs_lie_on_the_sin_gamma_circle(alpha in 0.2f64..2.5, a in 0.2f64..1.3, t in 0.05f64..0.95) {
        let g = a2bc_earth_map_quad(alpha, a, t * alpha, EXIST_TOL);
        prop_assume!(g.is_ok());
        let g = g.unwrap();
        let s2 = g.angles[2].sin().powi(2);
        for (p, q) in [b_pair(g.angles, a), c_pair(g.angles, a)] {
            prop_assert!((p * p + q * q - s2).abs() < 1e-9);
        }
        let (p, q) = b_pair(g.angles, a);
        let s = g.angles[2].sin();
        prop_assert!((p - s * g.b.cos()).abs() < 1e-9 && (q - s * g.b.sin()).abs() < 1e-9);
    }

    #[test]
    fn roots_resubstitute(c in -0.99f64..0.99, k in 1u32..5) {
        let h = |x: f64| (k as f64 * x).cos() - c;
        let roots = solve_free_angle(h, 0.0, PI, 10_000);
        prop_assert_eq!(roots.len() as u32, k);
        for r in roots {
            prop_assert!(h(r.x).abs() < 1e-11, "{}", h(r.x));
        }
    }

    #[test]
    fn exact_recalibration_preserves_the_sine(n in -300i64..300, d in 1i64..60) {
        let x = rat(n, d);
        let r = recalibrate_exact(&x);
        prop_assert!(!r.reduced.is_zero() || (&x - rint(r.shift)).is_zero());
        prop_assert!(r.reduced <= rat(1, 2));
        let back = if r.reflected { rint(r.shift) - &r.reduced } else { rint(r.shift) + &r.reduced };
        prop_assert_eq!(back, x.clone());
        let sx = (rat_to_f64(&x) * PI).sin();
        let sr = r.sign as f64 * (rat_to_f64(&r.reduced) * PI).sin();
        prop_assert!((sx - sr).abs() < 1e-12);
    }

    #[test]
    fn numeric_recalibration_preserves_the_sine(x in -20.0f64..20.0) {
        let r = recalibrate(x);
        prop_assert!((0.0..=PI / 2.0).contains(&r.reduced));
        prop_assert!((x.sin() - r.sign as f64 * r.reduced.sin()).abs() < 1e-12);
    }

    #[test]
    fn affine_angles_extrapolate_exactly(
        c0 in (1i64..24, 1i64..12),
        c1 in (-24i64..24, 1i64..6),
        fs in (3u32..40, 3u32..40, 3u32..40),
    ) {
        let expr = AngleExpr::affine(rat(c0.0, c0.1), rat(c1.0, c1.1));
        let (f1, f2, f3) = (2 * fs.0, 2 * fs.1, 2 * fs.2);
        prop_assume!(f1 != f2);
        let vals: Vec<Option<Rat>> = [f1, f2, f3].iter().map(|&f| eval_angle(&expr, f).ok().and_then(|v| v.exact)).collect();
        prop_assume!(vals.iter().all(Option::is_some));
        let (v1, v2, v3) = (vals[0].clone().unwrap(), vals[1].clone().unwrap(), vals[2].clone().unwrap());
        // Two samples of c0 + c1/f determine the line through 1/f.
        let (u1, u2, u3) = (rat(1, f1 as i64), rat(1, f2 as i64), rat(1, f3 as i64));
        let slope = (&v2 - &v1) / (&u2 - &u1);
        let predicted = &v1 + slope * (u3 - u1);
        prop_assert_eq!(predicted.clone(), v3.clone());
        let rad = eval_angle(&expr, f3).unwrap().radians;
        prop_assert!((rad - rat_to_f64(&v3) * PI).abs() < 1e-12);
    }

    #[test]
    fn count_solutions_satisfy_the_count_identities(
        raw in prop::collection::vec((0u32..4, 0u32..4, 0u32..4, 0u32..4, any::<bool>()), 1..4),
        half in 3u32..9,
    ) {
        let f = 2 * half;
        let vs: Vec<VertexCombo> = raw.iter().map(|r| VertexCombo::new(r.0, r.1, r.2, r.3)).collect();
        prop_assume!(vs.iter().all(|v| v.degree() >= 3));
        let req: Vec<bool> = raw.iter().map(|r| r.4).collect();
        let got = count_feasibility(&vs, &req, f).unwrap();
        let oracle = brute_force_counts(&vs, &req, f);
        prop_assert_eq!(got.is_some(), oracle, "{:?} f={}", vs, f);
        if let Some(x) = got {
            prop_assert_eq!(x.iter().sum::<u64>(), f as u64 + 2);
            for j in 0..4 {
                let s: u64 = vs.iter().zip(&x).map(|(v, n)| v.as_array()[j] as u64 * n).sum();
                prop_assert_eq!(s, f as u64);
            }
            for (r, n) in req.iter().zip(&x) {
                prop_assert!(!r || *n > 0);
            }
        }
    }
}

fn brute_force_counts(vs: &[VertexCombo], req: &[bool], f: u32) -> bool {
    fn go(vs: &[VertexCombo], req: &[bool], f: u32, acc: &mut Vec<u64>) -> bool {
        if acc.len() == vs.len() {
            let total: u64 = acc.iter().sum();
            return total == f as u64 + 2
                && (0..4).all(|j| vs.iter().zip(acc.iter()).map(|(v, n)| v.as_array()[j] as u64 * n).sum::<u64>() == f as u64);
        }
        let lo = if req[acc.len()] { 1 } else { 0 };
        for n in lo..=f as u64 + 2 {
            acc.push(n);
            let hit = go(vs, req, f, acc);
            acc.pop();
            if hit {
                return true;
            }
        }
        false
    }
    go(vs, req, f, &mut Vec::new())
}

#[test]
fn free_angle_roots_resubstitute() {
    for f in (8..=64).step_by(2) {
        for r in alpha_delta_sq_roots(f) {
            assert!(alpha_delta_sq_residual(f, r.x).abs() < 1e-11, "f={f}");
        }
    }
}
