mod common;

use common::small_specs;
use gridsearch::bounds::{self, eps_poly_gap, BoundKind};
use gridsearch::combinatorics::binomial;
use gridsearch::scalar::Scalar;
use gridsearch::{BigRational, grid_max, grid_min, nearest_grid_point, Poly64, Problem64, TAU_EVAL};

fn homogenized(prob: &Problem64) -> Poly64 {
    prob.poly.homogenize().unwrap()
}

#[test]
fn bernstein_sandwich_on_reference_problems() {
    for spec in small_specs() {
        let prob = Problem64::new(spec).unwrap();
        let f = homogenized(&prob);
        let (lo, hi) = f.bernstein_range().unwrap();
        assert!(lo <= prob.f_min + TAU_EVAL && prob.f_max <= hi + TAU_EVAL, "{spec}");
        let gmin = grid_min(&f, 50).unwrap().value;
        let gmax = grid_max(&f, 50).unwrap().value;
        assert!(lo <= gmin + TAU_EVAL && gmin <= gmax && gmax <= hi + TAU_EVAL, "{spec}");
        assert!(gmin >= prob.f_min - TAU_EVAL && gmax <= prob.f_max + TAU_EVAL, "{spec}");
    }
}

#[test]
fn bernstein_spread_bounded_by_range() {
    for spec in small_specs() {
        let prob = Problem64::new(spec).unwrap();
        let f = homogenized(&prob);
        let d = f.degree() as u64;
        let (lo, hi) = f.bernstein_range().unwrap();
        let factor = f64::from_biguint(&binomial(2 * d - 1, d)) * (d as f64).powi(d as i32);
        assert!(hi - lo <= factor * prob.range() + TAU_EVAL, "{spec}: {} > {}", hi - lo, factor * prob.range());
    }
}

#[test]
fn shifted_polynomial_obeys_relative_rounding_estimate() {
    for spec in small_specs() {
        let prob = Problem64::new(spec).unwrap();
        let f = homogenized(&prob);
        let d = f.degree();
        let (lo, _) = f.bernstein_range().unwrap();
        let g = &f - &Poly64::coordinate_sum(f.n_vars()).pow(d).scale(&lo);
        assert!(g.terms().all(|(_, c)| *c >= -1e-12), "{spec}: shift left a negative coefficient");
        let g_min = prob.f_min - lo;
        for r in 1..=20u32 {
            let s = 1.0 / (r as f64 * prob.x_star_min);
            let factor = (1.0 + s).powi(d as i32) - (1.0 + d as f64 * s);
            let y = nearest_grid_point(&prob.x_star, r).unwrap().coords::<f64>();
            let at_rounded = g.eval(&y).unwrap() - g_min;
            let grid_gap = grid_min(&g, r).unwrap().value - g_min;
            assert!(grid_gap <= at_rounded + TAU_EVAL, "{spec} r={r}");
            assert!(at_rounded <= factor * g_min + TAU_EVAL, "{spec} r={r}: {at_rounded} > {}", factor * g_min);
        }
    }
}

#[test]
fn eps_gap_inequality_on_a_grid_of_inputs() {
    for d in 2..=6u32 {
        for ei in 1..=20 {
            let eps = BigRational::from_ratio(ei, 30);
            for si in 0..=40 {
                let s = eps.clone() * BigRational::from_ratio(si, 40 * d as i64);
                let (lhs, rhs) = eps_poly_gap(d, &s, &eps).unwrap();
                assert!(lhs <= rhs, "d={d} s={s} eps={eps}");
            }
        }
    }
}

#[test]
fn all_bounds_hold_on_small_instances() {
    for spec in small_specs() {
        let prob = Problem64::new(spec).unwrap();
        for r in 1..=12 {
            let gap = grid_min(&prob.poly, r).unwrap().value - prob.f_min;
            assert!(gap >= -TAU_EVAL);
            for b in bounds::evaluate_all(&prob.problem_data(r, 0.5).unwrap()).unwrap() {
                if let Some(v) = b.value() {
                    assert!(gap <= v + TAU_EVAL, "{spec} r={r} {}: {gap} > {v}", b.kind);
                }
            }
        }
    }
}

#[test]
fn min_component_gate_switches_at_threshold() {
    // f2 with n = 3: x_min = 1/3, d = 2, eps = 1/2 gives r >= 12
    let prob = Problem64::new("f2:n=3".parse().unwrap()).unwrap();
    let at = |r| {
        bounds::evaluate_all(&prob.problem_data(r, 0.5).unwrap())
            .unwrap()
            .into_iter()
            .find(|b| b.kind == BoundKind::MinComponent)
            .unwrap()
    };
    assert!(!at(11).is_applicable());
    assert!(at(11).reason().unwrap().contains("12"));
    assert!(at(12).is_applicable());
}
