#![allow(dead_code)]

use gridsearch::grid::Compositions;
use gridsearch::{Poly64, ProblemId, ProblemSpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial of degree exactly `d` with coefficients in [-1, 1].
/// Each candidate monomial is kept with probability 0.6.
pub fn random_poly(rng: &mut impl Rng, n: usize, d: u32, homogeneous: bool) -> Poly64 {
    let exponents: Vec<Vec<u32>> = if homogeneous {
        Compositions::new(n, d).collect()
    } else {
        // |alpha| <= d via a slack coordinate
        Compositions::new(n + 1, d).map(|mut a| {
            a.pop();
            a
        })
        .collect()
    };
    let mut terms: Vec<(Vec<u32>, f64)> = exponents
        .into_iter()
        .filter_map(|a| rng.gen_bool(0.6).then(|| (a, rng.gen_range(-1.0..=1.0))))
        .collect();
    let mut top = vec![0; n];
    top[rng.gen_range(0..n)] = d;
    let c: f64 = rng.gen_range(0.1..=1.0);
    terms.push((top, if rng.gen_bool(0.5) { c } else { -c }));
    let p = Poly64::from_terms(n, terms).unwrap();
    assert_eq!(p.degree(), d);
    p
}

pub fn random_box_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect()
}

/// Random point of the simplex; with `sparse`, each coordinate is zeroed
/// with probability 1/2 (at least one survives).
pub fn random_simplex_point(rng: &mut impl Rng, n: usize, sparse: bool) -> Vec<f64> {
    let keep: Vec<bool> = loop {
        let k: Vec<bool> = (0..n).map(|_| !sparse || rng.gen_bool(0.5)).collect();
        if k.iter().any(|&b| b) {
            break k;
        }
    };
    let raw: Vec<f64> = keep
        .iter()
        .map(|&k| if k { -(1.0 - rng.gen::<f64>()).ln() + 1e-9 } else { 0.0 })
        .collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// A small instance of every reference problem.
pub fn small_specs() -> Vec<ProblemSpec> {
    let mut specs = Vec::new();
    for n in 2..=4 {
        specs.push(ProblemSpec::with_n(ProblemId::F1, n));
        specs.push(ProblemSpec::with_n(ProblemId::F2, n));
        specs.push(ProblemSpec::with_n(ProblemId::F3, n));
        for m in [2, 3] {
            specs.push(ProblemSpec::f4(m, n));
        }
        specs.push(ProblemSpec::f5(2, n));
        specs.push(ProblemSpec::f6(3, n));
    }
    specs.push(ProblemSpec::f5(4, 3));
    specs.push(ProblemSpec::f6(4, 3));
    specs.push(ProblemSpec::f7(3, 3));
    specs.push(ProblemSpec::f7(3, 4));
    specs.push(ProblemSpec::f7(4, 4));
    specs
}
