//! Sparse multivariate polynomials.
//!
//! A [`Polynomial`] stores its terms in a `BTreeMap` keyed by exponent
//! vector, so iteration is always in lexicographic exponent order. Zero
//! coefficients are never stored.

mod text;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::pow;
use thiserror::Error;

use crate::combinatorics::{factorial, falling_factorial};
use crate::grid::Compositions;
use crate::scalar::Scalar;

pub use text::ParseError;

/// Exponent vector `α`, one entry per variable.
pub type Exponent = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("derivative order {k} outside 1..={degree}")]
    OrderOutOfRange { k: u32, degree: u32 },
    #[error("support index set is empty")]
    EmptySupport,
    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("variable index {0} listed twice")]
    DuplicateIndex(usize),
    #[error("need at least 2 variables, have {0}")]
    TooFewVariables(usize),
    #[error("polynomial must have at least one variable")]
    NoVariables,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    n_vars: usize,
    terms: BTreeMap<Exponent, T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: T) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    /// The coordinate function `x_i` (zero-based `i`).
    pub fn variable(n_vars: usize, i: usize) -> Result<Self, PolyError> {
        if i >= n_vars {
            return Err(PolyError::IndexOutOfRange { index: i, n_vars });
        }
        let mut alpha = vec![0; n_vars];
        alpha[i] = 1;
        Ok(Self::monomial(alpha, T::one()))
    }

    pub fn monomial(alpha: Exponent, c: T) -> Self {
        let mut p = Self::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// `x_1 + ... + x_n`.
    pub fn coordinate_sum(n_vars: usize) -> Self {
        let mut p = Self::zero(n_vars);
        for i in 0..n_vars {
            let mut alpha = vec![0; n_vars];
            alpha[i] = 1;
            p.add_term(alpha, T::one());
        }
        p
    }

    /// Builds a polynomial from `(α, f_α)` pairs, merging repeated exponents.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponent, T)>,
    {
        if n_vars == 0 {
            return Err(PolyError::NoVariables);
        }
        let mut p = Self::zero(n_vars);
        for (alpha, c) in terms {
            if alpha.len() != n_vars {
                return Err(PolyError::DimensionMismatch {
                    expected: n_vars,
                    found: alpha.len(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: Exponent, c: T) {
        debug_assert_eq!(alpha.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Maximum total degree over stored terms; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when every stored term has total degree `degree()`.
    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|a| a.iter().sum::<u32>() == d)
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[u32]) -> T {
        self.terms.get(alpha).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (a, f) in &self.terms {
            out.add_term(a.clone(), f.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.n_vars, T::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_dim(&self, x: &[T]) -> Result<(), PolyError> {
        if x.len() != self.n_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.n_vars,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `Σ f_α x^α`, with `0^0 = 1`.
    pub fn eval(&self, x: &[T]) -> Result<T, PolyError> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[T]) -> T {
        let mut total = T::zero();
        for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &ai) in x.iter().zip(alpha) {
                if ai > 0 {
                    term = term * pow(xi.clone(), ai as usize);
                }
            }
            total = total + term;
        }
        total
    }

    /// Mixed partial derivative `∂^β f(x)`, where `β_i` counts how many times
    /// variable `i` is differentiated.
    pub fn partial_at(&self, x: &[T], beta: &[u32]) -> Result<T, PolyError> {
        self.check_dim(x)?;
        if beta.len() != self.n_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.n_vars,
                found: beta.len(),
            });
        }
        Ok(self.partial_unchecked(x, beta))
    }

    fn partial_unchecked(&self, x: &[T], beta: &[u32]) -> T {
        let mut total = T::zero();
        'terms: for (alpha, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..self.n_vars {
                let (a, b) = (alpha[i], beta[i]);
                if b > a {
                    continue 'terms;
                }
                if b > 0 {
                    term = term * T::from_biguint(&falling_factorial(a as u64, b as u64));
                }
                if a > b {
                    term = term * pow(x[i].clone(), (a - b) as usize);
                }
            }
            total = total + term;
        }
        total
    }

    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>, PolyError> {
        self.check_dim(x)?;
        let mut beta = vec![0; self.n_vars];
        Ok((0..self.n_vars)
            .map(|i| {
                beta[i] = 1;
                let g = self.partial_unchecked(x, &beta);
                beta[i] = 0;
                g
            })
            .collect())
    }

    /// Symmetric matrix of second partials, row-major.
    pub fn hessian(&self, x: &[T]) -> Result<Vec<Vec<T>>, PolyError> {
        self.check_dim(x)?;
        let n = self.n_vars;
        let mut h = vec![vec![T::zero(); n]; n];
        let mut beta = vec![0; n];
        for i in 0..n {
            for j in i..n {
                beta[i] += 1;
                beta[j] += 1;
                let v = self.partial_unchecked(x, &beta);
                beta[i] = 0;
                beta[j] = 0;
                h[j][i] = v.clone();
                h[i][j] = v;
            }
        }
        Ok(h)
    }

    /// `F(x) = Σ f_α x^α (Σ x_i)^{d-|α|}`: homogeneous of degree `d` and equal
    /// to `self` on the simplex.
    pub fn homogenize(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let d = self.degree();
        let sum = Self::coordinate_sum(self.n_vars);
        let mut powers = vec![Self::constant(self.n_vars, T::one())];
        for k in 1..=d as usize {
            powers.push(&powers[k - 1] * &sum);
        }
        let mut out = Self::zero(self.n_vars);
        for (alpha, c) in &self.terms {
            let deficit = (d - alpha.iter().sum::<u32>()) as usize;
            let mono = Self::monomial(alpha.clone(), c.clone());
            out = &out + &(&mono * &powers[deficit]);
        }
        Ok(out)
    }

    /// Substitutes zero for every variable outside `support` and keeps the
    /// remaining variables in ascending index order.
    pub fn restrict_to_support(&self, support: &[usize]) -> Result<Self, PolyError> {
        if support.is_empty() {
            return Err(PolyError::EmptySupport);
        }
        let mut idx = support.to_vec();
        idx.sort_unstable();
        for w in idx.windows(2) {
            if w[0] == w[1] {
                return Err(PolyError::DuplicateIndex(w[0]));
            }
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.n_vars) {
            return Err(PolyError::IndexOutOfRange {
                index: bad,
                n_vars: self.n_vars,
            });
        }
        let mut keep = vec![false; self.n_vars];
        for &i in &idx {
            keep[i] = true;
        }
        let mut out = Self::zero(idx.len());
        for (alpha, c) in &self.terms {
            if alpha.iter().zip(&keep).any(|(&a, &k)| a > 0 && !k) {
                continue;
            }
            out.add_term(idx.iter().map(|&i| alpha[i]).collect(), c.clone());
        }
        Ok(out)
    }

    /// Substitutes `x_n = 1 - Σ_{i<n} x_i`, giving a polynomial in `n - 1`
    /// variables that agrees with `self` on the simplex.
    pub fn eliminate_last(&self) -> Result<Self, PolyError> {
        let n = self.n_vars;
        if n < 2 {
            return Err(PolyError::TooFewVariables(n));
        }
        let m = n - 1;
        let slack = &Self::constant(m, T::one()) - &Self::coordinate_sum(m);
        let top = self.terms.keys().map(|a| a[m]).max().unwrap_or(0);
        let mut powers = vec![Self::constant(m, T::one())];
        for k in 1..=top as usize {
            powers.push(&powers[k - 1] * &slack);
        }
        let mut out = Self::zero(m);
        for (alpha, c) in &self.terms {
            let mono = Self::monomial(alpha[..m].to_vec(), c.clone());
            out = &out + &(&mono * &powers[alpha[m] as usize]);
        }
        Ok(out)
    }

    /// `Σ |f_α|`.
    pub fn coeff_l1(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |acc, c| acc + c.abs())
    }

    /// Minimum and maximum Bernstein coefficient `f_α α!/d!` over every
    /// `α` with `|α| = d`, unstored (zero) monomials included.
    pub fn bernstein_range(&self) -> Result<(T, T), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let d = self.degree();
        if d == 0 {
            return Err(PolyError::NotHomogeneous);
        }
        let d_fact = T::from_biguint(&factorial(d as u64));
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for alpha in Compositions::new(self.n_vars, d) {
            let c = self.coeff(&alpha);
            let alpha_fact = alpha
                .iter()
                .fold(T::one(), |acc, &a| acc * T::from_biguint(&factorial(a as u64)));
            let b = c * alpha_fact / d_fact.clone();
            if lo.as_ref().is_none_or(|l| b < *l) {
                lo = Some(b.clone());
            }
            if hi.as_ref().is_none_or(|h| b > *h) {
                hi = Some(b);
            }
        }
        Ok((lo.expect("nonempty basis"), hi.expect("nonempty basis")))
    }

    /// `Σ_{i_1..i_k} ∂^k f(x)/∂x_{i_1}..∂x_{i_k} · x_{i_1}..x_{i_k}`, summed over
    /// all `n^k` ordered index tuples.
    pub fn euler_lhs(&self, x: &[T], k: u32) -> Result<T, PolyError> {
        self.check_dim(x)?;
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let d = self.degree();
        if k < 1 || k > d {
            return Err(PolyError::OrderOutOfRange { k, degree: d });
        }
        let n = self.n_vars;
        let mut tuple = vec![0usize; k as usize];
        let mut beta = vec![0u32; n];
        let mut total = T::zero();
        loop {
            beta.iter_mut().for_each(|b| *b = 0);
            let mut weight = T::one();
            for &i in &tuple {
                beta[i] += 1;
                weight = weight * x[i].clone();
            }
            total = total + self.partial_unchecked(x, &beta) * weight;

            // odometer increment over [n]^k
            let mut pos = 0;
            loop {
                if pos == tuple.len() {
                    return Ok(total);
                }
                tuple[pos] += 1;
                if tuple[pos] < n {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Converts coefficients into another scalar type.
    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        let mut out = Polynomial::zero(self.n_vars);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), f(c));
        }
        out
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), T::zero() - c.clone());
        }
        out
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        assert_eq!(self.n_vars, rhs.n_vars, "variable count mismatch");
        let mut out = Polynomial::zero(self.n_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        self.scale(&(T::zero() - T::one()))
    }
}

impl<T: Scalar> Add for Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn var(n: usize, i: usize) -> Polynomial<f64> {
        Polynomial::variable(n, i).unwrap()
    }

    fn sum_squares(n: usize) -> Polynomial<f64> {
        (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &var(n, i).pow(2))
    }

    fn f7(d: usize, n: usize) -> Polynomial<f64> {
        let prod = (0..d).fold(Polynomial::constant(n, 1.0), |acc, i| &acc * &var(n, i));
        -&prod
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + b.abs())
    }

    #[test]
    fn eval_examples() {
        let third = [1.0 / 3.0; 3];
        assert!(close(sum_squares(3).eval(&third).unwrap(), 1.0 / 3.0));
        assert_eq!(Polynomial::<f64>::zero(3).eval(&[0.2, 0.3, 0.5]).unwrap(), 0.0);
        assert!(close(f7(3, 3).eval(&third).unwrap(), -1.0 / 27.0));
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        let p = Polynomial::constant(2, 3.0);
        assert_eq!(p.eval(&[0.0, 0.0]).unwrap(), 3.0);
    }

    #[test]
    fn eval_rejects_wrong_length() {
        let err = sum_squares(3).eval(&[0.5, 0.5]).unwrap_err();
        assert_eq!(err, PolyError::DimensionMismatch { expected: 3, found: 2 });
        assert!(sum_squares(3).gradient(&[0.5]).is_err());
        assert!(sum_squares(3).hessian(&[0.5]).is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = &var(2, 0) - &var(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
        let q = Polynomial::from_terms(2, vec![(vec![1, 0], 0.0), (vec![0, 1], 2.0)]).unwrap();
        assert_eq!(q.num_terms(), 1);
    }

    #[test]
    fn gradient_examples() {
        for n in 1..5 {
            let x = vec![1.0 / n as f64; n];
            let g = sum_squares(n).gradient(&x).unwrap();
            assert!(g.iter().all(|&gi| close(gi, 2.0 / n as f64)));
        }
        let g = var(3, 0).gradient(&[0.1, 0.5, 0.4]).unwrap();
        assert_eq!(g, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn hessian_examples() {
        let h = sum_squares(3).hessian(&[0.2, 0.3, 0.5]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], if i == j { 2.0 } else { 0.0 });
            }
        }
        let lin = &var(2, 0) + &var(2, 1).scale(&3.0);
        assert!(lin.hessian(&[0.4, 0.6]).unwrap().iter().flatten().all(|&v| v == 0.0));

        let h = f7(3, 3).hessian(&[1.0 / 3.0; 3]).unwrap();
        let mut l1 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 0.0 } else { -1.0 / 3.0 };
                assert!(close(h[i][j], expect));
                l1 += h[i][j].abs();
            }
        }
        assert!(close(l1, 2.0));
    }

    #[test]
    fn homogenize_examples() {
        let p = &var(2, 0).scale(&2.0) + &var(2, 1);
        assert_eq!(p.homogenize().unwrap(), p);

        let p = &var(2, 0) + &Polynomial::constant(2, 1.0);
        let expect = &var(2, 0).scale(&2.0) + &var(2, 1);
        assert_eq!(p.homogenize().unwrap(), expect);

        let p = &var(2, 0).pow(2) + &Polynomial::constant(2, 1.0);
        let s = &var(2, 0) + &var(2, 1);
        let expect = &var(2, 0).pow(2) + &s.pow(2);
        assert_eq!(p.homogenize().unwrap(), expect);

        assert_eq!(Polynomial::<f64>::zero(2).homogenize(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn restrict_examples() {
        let f = &(&var(3, 0) * &var(3, 1)) + &var(3, 2).pow(2);
        let g = f.restrict_to_support(&[0, 1]).unwrap();
        assert_eq!(g, &var(2, 0) * &var(2, 1));

        let f2 = sum_squares(4);
        assert_eq!(f2.restrict_to_support(&[0, 1, 2, 3]).unwrap(), f2);

        let g = f7(3, 5).restrict_to_support(&[0, 1, 2]).unwrap();
        assert_eq!(g, f7(3, 3));

        assert_eq!(f2.restrict_to_support(&[]), Err(PolyError::EmptySupport));
        assert_eq!(f2.restrict_to_support(&[1, 1]), Err(PolyError::DuplicateIndex(1)));
        assert!(matches!(
            f2.restrict_to_support(&[7]),
            Err(PolyError::IndexOutOfRange { index: 7, .. })
        ));
    }

    #[test]
    fn eliminate_examples() {
        let p = &var(2, 0) + &var(2, 1);
        assert_eq!(p.eliminate_last().unwrap(), Polynomial::constant(1, 1.0));

        let q = sum_squares(2).eliminate_last().unwrap();
        let expect = Polynomial::from_terms(
            1,
            vec![(vec![2], 2.0), (vec![1], -2.0), (vec![0], 1.0)],
        )
        .unwrap();
        assert_eq!(q, expect);

        assert_eq!(var(1, 0).eliminate_last(), Err(PolyError::TooFewVariables(1)));
    }

    #[test]
    fn eliminate_f5_coefficient_sum_is_exact() {
        // f5 with m = 2: (x1 - 1/4)^2 + (x2 - 3/4)^2, eliminated g = 2 (x1 - 1/4)^2.
        type Q = BigRational;
        let q = |a, b| <Q as Scalar>::from_ratio(a, b);
        let x1 = Polynomial::<Q>::variable(2, 0).unwrap();
        let x2 = Polynomial::<Q>::variable(2, 1).unwrap();
        let f5 = &(&x1 - &Polynomial::constant(2, q(1, 4))).pow(2)
            + &(&x2 - &Polynomial::constant(2, q(3, 4))).pow(2);
        let g = f5.eliminate_last().unwrap();
        assert_eq!(g.coeff(&[2]), q(2, 1));
        assert_eq!(g.coeff(&[1]), q(-1, 1));
        assert_eq!(g.coeff(&[0]), q(1, 8));
        assert_eq!(g.coeff_l1(), q(25, 8));
        // times (1 - 1/2)^2 = 1/4 gives the tabulated 25/32
        assert_eq!(g.coeff_l1() * q(1, 4), q(25, 32));
    }

    #[test]
    fn coeff_l1_examples() {
        assert_eq!(sum_squares(3).coeff_l1(), 3.0);
        assert_eq!(f7(3, 4).coeff_l1(), 1.0);
        let c = Polynomial::constant(3, 1.0 / 3.0);
        let f1 = (0..3).fold(Polynomial::zero(3), |acc, i| &acc + &(&var(3, i) - &c).pow(2));
        assert!(close(f1.coeff_l1(), 16.0 / 3.0));
    }

    #[test]
    fn bernstein_examples() {
        assert_eq!(sum_squares(3).bernstein_range().unwrap(), (0.0, 1.0));

        let s = Polynomial::<f64>::coordinate_sum(3).pow(3).scale(&2.5);
        let (lo, hi) = s.bernstein_range().unwrap();
        assert!(close(lo, 2.5) && close(hi, 2.5));

        let (lo, hi) = f7(3, 3).bernstein_range().unwrap();
        assert!(close(lo, -1.0 / 6.0));
        assert_eq!(hi, 0.0);

        let nonhom = &var(2, 0) + &Polynomial::constant(2, 1.0);
        assert_eq!(nonhom.bernstein_range(), Err(PolyError::NotHomogeneous));
    }

    #[test]
    fn euler_examples() {
        let f = sum_squares(2);
        let x = [0.3, 0.7];
        assert!(close(f.euler_lhs(&x, 1).unwrap(), 1.16));
        assert!(close(f.euler_lhs(&x, 2).unwrap(), 1.16));
        assert!(close(f7(3, 3).euler_lhs(&[1.0 / 3.0; 3], 3).unwrap(), -2.0 / 9.0));

        assert_eq!(
            f.euler_lhs(&x, 3),
            Err(PolyError::OrderOutOfRange { k: 3, degree: 2 })
        );
        assert_eq!(f.euler_lhs(&x, 0), Err(PolyError::OrderOutOfRange { k: 0, degree: 2 }));
        let nonhom = &f + &var(2, 0);
        assert_eq!(nonhom.euler_lhs(&x, 1), Err(PolyError::NotHomogeneous));
    }

    #[test]
    fn terms_iterate_in_lex_order() {
        let p = &(&var(2, 1) + &var(2, 0)) + &Polynomial::constant(2, 1.0);
        let keys: Vec<_> = p.terms().map(|(a, _)| a.clone()).collect();
        assert_eq!(keys, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
}
