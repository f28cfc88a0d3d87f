//! The regular grid `Δ(n, r)` of simplex points with denominator `r`.
//!
//! Grid points are integer compositions of `r` into `n` parts. They are
//! enumerated in ascending lexicographic order of the count vector, and
//! exhaustive minimization breaks value ties toward the lexicographically
//! smallest counts so that parallel and sequential scans agree exactly.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::polynomial::{PolyError, Polynomial};
use crate::scalar::Scalar;

/// Default cap on the number of function evaluations a grid scan may use.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;

/// Coordinates at or below this are treated as zero when computing supports.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Allowed deviation of `Σ x_i` from one for inputs claimed to lie on the simplex.
pub const SIMPLEX_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid must have n >= 1 and r >= 1 (got n={n}, r={r})")]
    Degenerate { n: usize, r: u32 },
    #[error("|Δ({n},{r})| does not fit in 128 bits")]
    Overflow { n: usize, r: u32 },
    #[error("|Δ({n},{r})| = {required} evaluations exceeds the budget of {budget}")]
    BudgetExceeded {
        n: usize,
        r: u32,
        required: u128,
        budget: u64,
    },
    #[error("point is not on the standard simplex: {0}")]
    NotOnSimplex(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

/// `|Δ(n, r)| = C(n + r - 1, r)`, checked against `u128` overflow.
pub fn grid_size(n: usize, r: u32) -> Result<u128, GridError> {
    if n == 0 || r == 0 {
        return Err(GridError::Degenerate { n, r });
    }
    let k = (n - 1) as u128;
    let mut acc: u128 = 1;
    // acc = C(k + i, i) after step i
    for i in 1..=r as u128 {
        acc = acc
            .checked_mul(k + i)
            .ok_or(GridError::Overflow { n, r })?
            / i;
    }
    Ok(acc)
}

/// All `α ∈ ℕⁿ` with `Σ α_i = total`, ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(n: usize, total: u32) -> Self {
        if n == 0 {
            return Self { current: None };
        }
        let mut first = vec![0; n];
        first[n - 1] = total;
        Self {
            current: Some(first),
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let n = out.len();
        // Successor: move one unit from the last nonzero slot j into slot j-1
        // and pile the rest of slot j into the final slot.
        if let Some(j) = out.iter().rposition(|&c| c > 0).filter(|&j| j > 0) {
            let mut next = out.clone();
            let mass = next[j];
            next[j] = 0;
            next[j - 1] += 1;
            next[n - 1] += mass - 1;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// A point `counts / denominator` of `Δ(n, r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    counts: Vec<u32>,
    denominator: u32,
}

impl GridPoint {
    pub fn new(counts: Vec<u32>, denominator: u32) -> Result<Self, GridError> {
        if counts.is_empty() || denominator == 0 {
            return Err(GridError::Degenerate {
                n: counts.len(),
                r: denominator,
            });
        }
        let total: u64 = counts.iter().map(|&c| c as u64).sum();
        if total != denominator as u64 {
            return Err(GridError::NotOnSimplex(format!(
                "counts sum to {total}, denominator is {denominator}"
            )));
        }
        Ok(Self {
            counts,
            denominator,
        })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn coords<T: Scalar>(&self) -> Vec<T> {
        self.counts
            .iter()
            .map(|&c| T::from_ratio(c as i64, self.denominator as i64))
            .collect()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}/{}", self.denominator)?;
        }
        Ok(())
    }
}

/// Exhaustive grid minimum or maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum<T> {
    pub value: T,
    pub argopt: GridPoint,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    Min,
    Max,
}

/// Grid scan settings: evaluation budget and worker count.
#[derive(Debug, Clone, Copy)]
pub struct GridSearch {
    pub budget: u64,
    /// `None` uses the ambient rayon pool, `Some(1)` runs on the calling thread.
    pub workers: Option<usize>,
}

impl Default for GridSearch {
    fn default() -> Self {
        Self {
            budget: DEFAULT_EVAL_BUDGET,
            workers: None,
        }
    }
}

impl GridSearch {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    /// Fails with `BudgetExceeded` when the scan would need more evaluations
    /// than allowed.
    pub fn check_budget(&self, n: usize, r: u32) -> Result<u64, GridError> {
        let required = grid_size(n, r)?;
        if required > self.budget as u128 {
            return Err(GridError::BudgetExceeded {
                n,
                r,
                required,
                budget: self.budget,
            });
        }
        Ok(required as u64)
    }

    pub fn minimize<T: Scalar>(&self, p: &Polynomial<T>, r: u32) -> Result<GridOptimum<T>, GridError> {
        self.optimize(p, r, Sense::Min)
    }

    pub fn maximize<T: Scalar>(&self, p: &Polynomial<T>, r: u32) -> Result<GridOptimum<T>, GridError> {
        self.optimize(p, r, Sense::Max)
    }

    fn optimize<T: Scalar>(
        &self,
        p: &Polynomial<T>,
        r: u32,
        sense: Sense,
    ) -> Result<GridOptimum<T>, GridError> {
        let n = p.n_vars();
        let evaluations = self.check_budget(n, r)?;
        let (value, counts) = match self.workers {
            Some(1) => scan_sequential(p, r, sense),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| GridError::Pool(e.to_string()))?;
                pool.install(|| scan_parallel(p, r, sense))
            }
            None => scan_parallel(p, r, sense),
        };
        Ok(GridOptimum {
            value,
            argopt: GridPoint {
                counts,
                denominator: r,
            },
            evaluations,
        })
    }
}

/// Minimum over `Δ(n, r)` with the default budget.
pub fn grid_min<T: Scalar>(p: &Polynomial<T>, r: u32) -> Result<GridOptimum<T>, GridError> {
    GridSearch::default().minimize(p, r)
}

/// Maximum over `Δ(n, r)` with the default budget.
pub fn grid_max<T: Scalar>(p: &Polynomial<T>, r: u32) -> Result<GridOptimum<T>, GridError> {
    GridSearch::default().maximize(p, r)
}

fn improves<T: PartialOrd>(candidate: &T, best: &T, sense: Sense) -> bool {
    matches!(
        (sense, candidate.partial_cmp(best)),
        (Sense::Min, Some(Ordering::Less)) | (Sense::Max, Some(Ordering::Greater))
    )
}

/// Scans compositions `head ++ tail` where `tail` ranges over compositions of
/// `r - head` into `n - 1` parts. Returns the first optimum in scan order.
fn scan_slab<T: Scalar>(
    p: &Polynomial<T>,
    n: usize,
    r: u32,
    head: u32,
    sense: Sense,
) -> (T, Vec<u32>) {
    let denom = T::from_int(r as i64);
    let mut x = vec![T::zero(); n];
    let mut best: Option<(T, Vec<u32>)> = None;
    let mut counts = vec![0u32; n];
    counts[0] = head;
    let tails: Box<dyn Iterator<Item = Vec<u32>>> = if n == 1 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(Compositions::new(n - 1, r - head))
    };
    for tail in tails {
        counts[1..].copy_from_slice(&tail);
        for (xi, &c) in x.iter_mut().zip(&counts) {
            *xi = T::from_int(c as i64) / denom.clone();
        }
        let v = p.eval_unchecked(&x);
        if best.as_ref().is_none_or(|(b, _)| improves(&v, b, sense)) {
            best = Some((v, counts.clone()));
        }
    }
    best.expect("every slab holds at least one point")
}

fn slab_heads(n: usize, r: u32) -> std::ops::RangeInclusive<u32> {
    if n == 1 {
        r..=r
    } else {
        0..=r
    }
}

fn reduce<T: Scalar>(slabs: impl IntoIterator<Item = (T, Vec<u32>)>, sense: Sense) -> (T, Vec<u32>) {
    let mut best: Option<(T, Vec<u32>)> = None;
    // slabs arrive in ascending head order, so keeping the incumbent on ties
    // keeps the lexicographically smallest counts
    for cand in slabs {
        if best.as_ref().is_none_or(|(b, _)| improves(&cand.0, b, sense)) {
            best = Some(cand);
        }
    }
    best.expect("grid is nonempty")
}

fn scan_sequential<T: Scalar>(p: &Polynomial<T>, r: u32, sense: Sense) -> (T, Vec<u32>) {
    let n = p.n_vars();
    reduce(slab_heads(n, r).map(|h| scan_slab(p, n, r, h, sense)), sense)
}

fn scan_parallel<T: Scalar>(p: &Polynomial<T>, r: u32, sense: Sense) -> (T, Vec<u32>) {
    let n = p.n_vars();
    let slabs: Vec<_> = slab_heads(n, r)
        .into_par_iter()
        .map(|h| scan_slab(p, n, r, h, sense))
        .collect();
    reduce(slabs, sense)
}

/// Indices `i` with `x_i > SUPPORT_TOL`.
pub fn support(x: &[f64]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, &v)| v > SUPPORT_TOL)
        .map(|(i, _)| i)
        .collect()
}

/// Rounds a simplex point to a grid point on the same support with
/// `‖x − x̃‖∞ ≤ (1/r)(1 − 1/|I|)`.
///
/// On the support, take `floor(r x_i)` and hand the remaining units to the
/// coordinates with the largest fractional parts (ties to smaller index).
pub fn nearest_grid_point(x: &[f64], r: u32) -> Result<GridPoint, GridError> {
    if x.is_empty() || r == 0 {
        return Err(GridError::Degenerate { n: x.len(), r });
    }
    if let Some(v) = x.iter().find(|v| !v.is_finite() || **v < -SIMPLEX_SUM_TOL) {
        return Err(GridError::NotOnSimplex(format!("coordinate {v} is negative or not finite")));
    }
    let total: f64 = x.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_SUM_TOL {
        return Err(GridError::NotOnSimplex(format!("coordinates sum to {total}")));
    }
    let supp = support(x);
    if supp.is_empty() {
        return Err(GridError::NotOnSimplex("empty support".into()));
    }

    let rf = r as f64;
    let mut counts = vec![0u32; x.len()];
    let mut fracs = Vec::with_capacity(supp.len());
    let mut assigned: i64 = 0;
    for &i in &supp {
        let scaled = rf * x[i] / total;
        let fl = scaled.floor().max(0.0);
        counts[i] = fl as u32;
        assigned += fl as i64;
        fracs.push((i, scaled - fl));
    }
    let mut deficit = r as i64 - assigned;

    // descending fractional part, ascending index on ties
    fracs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    let mut k = 0;
    while deficit > 0 {
        counts[fracs[k % fracs.len()].0] += 1;
        deficit -= 1;
        k += 1;
    }
    // Only reachable through floating-point slack when Σ x_i > 1.
    let mut k = fracs.len();
    while deficit < 0 {
        k = if k == 0 { fracs.len() - 1 } else { k - 1 };
        let i = fracs[k].0;
        if counts[i] > 0 {
            counts[i] -= 1;
            deficit += 1;
        }
    }
    GridPoint::new(counts, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sum_squares(n: usize) -> Polynomial<f64> {
        (0..n).fold(Polynomial::zero(n), |acc, i| {
            &acc + &Polynomial::variable(n, i).unwrap().pow(2)
        })
    }

    fn brute_count(n: usize, r: u32) -> usize {
        // independent: count all vectors in [0, r]^n with sum r
        let mut count = 0;
        let mut v = vec![0u32; n];
        loop {
            if v.iter().sum::<u32>() == r {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return count;
                }
                v[i] += 1;
                if v[i] <= r {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn grid_size_examples() {
        assert_eq!(grid_size(3, 2).unwrap(), 6);
        for r in 1..20 {
            assert_eq!(grid_size(1, r).unwrap(), 1);
        }
        assert_eq!(grid_size(4, 5).unwrap(), 56);
        assert_eq!(brute_count(4, 5), 56);
        assert!(matches!(grid_size(0, 3), Err(GridError::Degenerate { .. })));
        assert!(matches!(grid_size(3, 0), Err(GridError::Degenerate { .. })));
        assert!(matches!(grid_size(200, 200), Err(GridError::Overflow { .. })));
    }

    #[test]
    fn enumeration_examples() {
        let pts: Vec<_> = Compositions::new(2, 2).collect();
        assert_eq!(pts, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let pts: Vec<_> = Compositions::new(1, 5).collect();
        assert_eq!(pts, vec![vec![5]]);
        let pts: Vec<_> = Compositions::new(3, 1).collect();
        assert_eq!(pts, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(Compositions::new(3, 0).collect::<Vec<_>>(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn enumeration_is_strictly_increasing_and_complete() {
        for n in 1..=5 {
            for r in 1..=8 {
                let pts: Vec<_> = Compositions::new(n, r).collect();
                assert_eq!(pts.len(), brute_count(n, r));
                assert_eq!(pts.len() as u128, grid_size(n, r).unwrap());
                assert!(pts.windows(2).all(|w| w[0] < w[1]));
                assert!(pts.iter().all(|p| p.iter().sum::<u32>() == r));
            }
        }
    }

    #[test]
    fn grid_min_examples() {
        let opt = grid_min(&sum_squares(3), 2).unwrap();
        assert!((opt.value - 0.5).abs() < 1e-15);
        // three tied points; the lexicographically smallest wins
        assert_eq!(opt.argopt.counts(), &[0, 1, 1]);
        assert_eq!(opt.evaluations, 6);

        let neg = -&sum_squares(3);
        for r in 1..8 {
            assert_eq!(grid_min(&neg, r).unwrap().value, -1.0);
        }

        let c = Polynomial::<f64>::constant(3, 1.0 / 3.0);
        let f1 = (0..3).fold(Polynomial::zero(3), |acc, i| {
            &acc + &(&Polynomial::variable(3, i).unwrap() - &c).pow(2)
        });
        let opt = grid_min(&f1, 3).unwrap();
        assert!(opt.value.abs() < 1e-15);
        assert_eq!(opt.argopt.to_string(), "1/3 1/3 1/3");
    }

    #[test]
    fn grid_max_finds_vertices() {
        let opt = grid_max(&sum_squares(3), 4).unwrap();
        assert_eq!(opt.value, 1.0);
        assert_eq!(opt.argopt.counts(), &[0, 0, 4]);
    }

    #[test]
    fn single_variable_grid() {
        let p = Polynomial::variable(1, 0).unwrap().scale(&2.0);
        let opt = grid_min(&p, 7).unwrap();
        assert_eq!(opt.value, 2.0);
        assert_eq!(opt.argopt.counts(), &[7]);
    }

    #[test]
    fn budget_refusal_reports_required_size() {
        let err = GridSearch::with_budget(5).minimize(&sum_squares(3), 2).unwrap_err();
        assert_eq!(
            err,
            GridError::BudgetExceeded {
                n: 3,
                r: 2,
                required: 6,
                budget: 5
            }
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let c = Polynomial::constant(4, 0.3);
        let p = &(&sum_squares(4) - &Polynomial::variable(4, 2).unwrap().scale(&0.7)) * &c;
        for r in 1..12 {
            let seq = GridSearch::default().workers(1).minimize(&p, r).unwrap();
            for w in [2, 3, 8] {
                assert_eq!(GridSearch::default().workers(w).minimize(&p, r).unwrap(), seq);
            }
            assert_eq!(grid_min(&p, r).unwrap(), seq);
        }
    }

    #[test]
    fn exact_scalar_grid_min() {
        let p = sum_squares(3).map_coeffs(|c| crate::scalar::rational_from_f64(*c).unwrap());
        let opt = grid_min::<BigRational>(&p, 2).unwrap();
        assert_eq!(opt.value, <BigRational as Scalar>::from_ratio(1, 2));
    }

    #[test]
    fn rounding_examples() {
        let x = [1.0 / 3.0; 3];
        let g = nearest_grid_point(&x, 2).unwrap();
        assert_eq!(g.counts(), &[1, 1, 0]);
        let err = g
            .coords::<f64>()
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!((err - 1.0 / 3.0).abs() < 1e-15);

        let g = nearest_grid_point(&[0.25, 0.5, 0.25], 4).unwrap();
        assert_eq!(g.counts(), &[1, 2, 1]);

        let g = nearest_grid_point(&[0.6, 0.4, 0.0], 5).unwrap();
        assert_eq!(g.counts(), &[3, 2, 0]);
    }

    #[test]
    fn rounding_rejects_off_simplex() {
        assert!(matches!(nearest_grid_point(&[0.5, 0.6], 3), Err(GridError::NotOnSimplex(_))));
        assert!(matches!(nearest_grid_point(&[1.5, -0.5], 3), Err(GridError::NotOnSimplex(_))));
        assert!(matches!(nearest_grid_point(&[f64::NAN, 1.0], 3), Err(GridError::NotOnSimplex(_))));
        assert!(nearest_grid_point(&[1.0], 0).is_err());
    }

    #[test]
    fn grid_point_validation() {
        assert!(GridPoint::new(vec![1, 2], 3).is_ok());
        assert!(GridPoint::new(vec![1, 1], 3).is_err());
        assert!(GridPoint::new(vec![], 3).is_err());
    }
}
