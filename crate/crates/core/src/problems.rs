//! The seven reference polynomials `f1`–`f7` with their analytic optima.
//!
//! ```text
//! f1 = Σ (x_i − 1/n)²          f2 = Σ x_i²          f3 = −Σ x_i²
//! f4 = (x1 − 1/m)² + (x2 − (m−1)/m)²
//! f5 = (x1 − (m−1)/2m)² + (x2 − (m+1)/2m)²      (m even)
//! f6 = Σ x_i^d                 f7 = −x1 x2 ⋯ x_d    (d ≥ 3)
//! ```
//!
//! `f4`, `f5` live in `n ≥ 2` variables (default 2) and `f7` in `n ≥ d`
//! (default `d`); the extra coordinates do not appear in the polynomial.

use std::fmt;
use std::str::FromStr;

use num_traits::pow;
use thiserror::Error;

use crate::bounds::{self, BoundKind, ProblemData};
use crate::combinatorics::{binomial, factorial};
use crate::polynomial::{PolyError, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("cannot parse problem `{0}`: {1}")]
    Parse(String, String),
    #[error("invalid parameters for {id}: {message}")]
    InvalidParams { id: ProblemId, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::F1,
        ProblemId::F2,
        ProblemId::F3,
        ProblemId::F4,
        ProblemId::F5,
        ProblemId::F6,
        ProblemId::F7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::F1 => "f1",
            ProblemId::F2 => "f2",
            ProblemId::F3 => "f3",
            ProblemId::F4 => "f4",
            ProblemId::F5 => "f5",
            ProblemId::F6 => "f6",
            ProblemId::F7 => "f7",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| ProblemError::Parse(s.into(), "unknown problem id".into()))
    }
}

/// A problem id with its parameters, e.g. `f4:m=3,n=5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub n: usize,
    pub m: Option<u32>,
    pub d: Option<u32>,
}

impl ProblemSpec {
    pub fn with_n(id: ProblemId, n: usize) -> Self {
        Self { id, n, m: None, d: None }
    }

    pub fn f4(m: u32, n: usize) -> Self {
        Self { id: ProblemId::F4, n, m: Some(m), d: None }
    }

    pub fn f5(m: u32, n: usize) -> Self {
        Self { id: ProblemId::F5, n, m: Some(m), d: None }
    }

    pub fn f6(d: u32, n: usize) -> Self {
        Self { id: ProblemId::F6, n, m: None, d: Some(d) }
    }

    pub fn f7(d: u32, n: usize) -> Self {
        Self { id: ProblemId::F7, n, m: None, d: Some(d) }
    }

    fn invalid(&self, message: impl Into<String>) -> ProblemError {
        ProblemError::InvalidParams {
            id: self.id,
            message: message.into(),
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        use ProblemId::*;
        if self.n < 2 {
            return Err(self.invalid(format!("n = {} but n >= 2 is required", self.n)));
        }
        match self.id {
            F1 | F2 | F3 => Ok(()),
            F4 | F5 => {
                let m = self.m.ok_or_else(|| self.invalid("missing m"))?;
                if m < 2 {
                    return Err(self.invalid(format!("m = {m} but m >= 2 is required")));
                }
                if self.id == F5 && m % 2 != 0 {
                    return Err(self.invalid(format!("m = {m} must be even")));
                }
                Ok(())
            }
            F6 | F7 => {
                let d = self.d.ok_or_else(|| self.invalid("missing d"))?;
                if d < 3 {
                    return Err(self.invalid(format!("d = {d} but d >= 3 is required")));
                }
                if self.id == F7 && self.n < d as usize {
                    return Err(self.invalid(format!("n = {} is smaller than d = {d}", self.n)));
                }
                Ok(())
            }
        }
    }

    /// Canonical `key=value` list, keys sorted.
    pub fn params(&self) -> String {
        let mut parts = Vec::new();
        if let Some(d) = self.d {
            parts.push(format!("d={d}"));
        }
        if let Some(m) = self.m {
            parts.push(format!("m={m}"));
        }
        parts.push(format!("n={}", self.n));
        parts.join(",")
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.id, self.params())
    }
}

impl FromStr for ProblemSpec {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |msg: &str| ProblemError::Parse(s.into(), msg.into());
        let (id, rest) = match s.split_once(':') {
            Some((id, rest)) => (id, rest),
            None => (s, ""),
        };
        let id: ProblemId = id.trim().parse()?;
        let (mut n, mut m, mut d) = (None, None, None);
        for kv in rest.split(',').map(str::trim).filter(|kv| !kv.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| err("expected key=value"))?;
            let v: u32 = v.trim().parse().map_err(|_| err("parameter is not a positive integer"))?;
            let slot = match k.trim() {
                "n" => &mut n,
                "m" => &mut m,
                "d" => &mut d,
                _ => return Err(err("unknown parameter (expected n, m or d)")),
            };
            if slot.replace(v).is_some() {
                return Err(err("parameter given twice"));
            }
        }
        use ProblemId::*;
        let n = match (id, n) {
            (_, Some(n)) => n as usize,
            (F4 | F5, None) => 2,
            (F7, None) => d.ok_or_else(|| err("f7 needs d"))? as usize,
            _ => return Err(err("missing n")),
        };
        let spec = match id {
            F1 | F2 | F3 => {
                if m.is_some() || d.is_some() {
                    return Err(err("f1-f3 take only n"));
                }
                ProblemSpec::with_n(id, n)
            }
            F4 | F5 => {
                if d.is_some() {
                    return Err(err("f4/f5 take m and n"));
                }
                ProblemSpec { id, n, m: Some(m.ok_or_else(|| err("missing m"))?), d: None }
            }
            F6 | F7 => {
                if m.is_some() {
                    return Err(err("f6/f7 take d and n"));
                }
                ProblemSpec { id, n, m: None, d: Some(d.ok_or_else(|| err("missing d"))?) }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A reference polynomial with its known global minimizer and range.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProblem<T> {
    pub spec: ProblemSpec,
    pub poly: Polynomial<T>,
    pub x_star: Vec<T>,
    pub f_min: T,
    pub f_max: T,
    /// Zero-based indices of the positive coordinates of `x_star`.
    pub support: Vec<usize>,
    pub x_star_min: T,
    /// Denominator `m` with `m x* ∈ ℕⁿ`.
    pub m_denominator: Option<u64>,
}

fn t<T: Scalar>(a: i64, b: i64) -> T {
    T::from_ratio(a, b)
}

fn square_shift<T: Scalar>(n: usize, i: usize, c: T) -> Polynomial<T> {
    let x = Polynomial::variable(n, i).expect("index in range");
    (&x - &Polynomial::constant(n, c)).pow(2)
}

impl<T: Scalar> ReferenceProblem<T> {
    pub fn new(spec: ProblemSpec) -> Result<Self, ProblemError> {
        spec.validate()?;
        use ProblemId::*;
        let n = spec.n;
        let ni = n as i64;
        let all: Vec<usize> = (0..n).collect();
        let barycenter = vec![t::<T>(1, ni); n];
        let sum_of = |f: &dyn Fn(usize) -> Polynomial<T>| {
            (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &f(i))
        };
        let var = |i| Polynomial::<T>::variable(n, i).expect("index in range");

        let problem = match spec.id {
            F1 => Self {
                spec,
                poly: sum_of(&|i| square_shift(n, i, t(1, ni))),
                x_star: barycenter,
                f_min: T::zero(),
                f_max: t(ni - 1, ni),
                support: all,
                x_star_min: t(1, ni),
                m_denominator: Some(n as u64),
            },
            F2 => Self {
                spec,
                poly: sum_of(&|i| var(i).pow(2)),
                x_star: barycenter,
                f_min: t(1, ni),
                f_max: T::one(),
                support: all,
                x_star_min: t(1, ni),
                m_denominator: Some(n as u64),
            },
            F3 => {
                let mut x = vec![T::zero(); n];
                x[0] = T::one();
                Self {
                    spec,
                    poly: -&sum_of(&|i| var(i).pow(2)),
                    x_star: x,
                    f_min: t(-1, 1),
                    f_max: t(-1, ni),
                    support: vec![0],
                    x_star_min: T::one(),
                    m_denominator: Some(1),
                }
            }
            F4 => {
                let m = spec.m.expect("validated") as i64;
                let mut x = vec![T::zero(); n];
                x[0] = t(1, m);
                x[1] = t(m - 1, m);
                Self {
                    spec,
                    poly: &square_shift(n, 0, t(1, m)) + &square_shift(n, 1, t(m - 1, m)),
                    x_star: x,
                    f_min: T::zero(),
                    // maximum over vertices, attained at e_1
                    f_max: t(2 * (m - 1) * (m - 1), m * m),
                    support: vec![0, 1],
                    x_star_min: t(1, m),
                    m_denominator: Some(m as u64),
                }
            }
            F5 => {
                let m = spec.m.expect("validated") as i64;
                let mut x = vec![T::zero(); n];
                x[0] = t(m - 1, 2 * m);
                x[1] = t(m + 1, 2 * m);
                Self {
                    spec,
                    poly: &square_shift(n, 0, t(m - 1, 2 * m)) + &square_shift(n, 1, t(m + 1, 2 * m)),
                    x_star: x,
                    f_min: T::zero(),
                    // maximum over vertices, attained at e_1
                    f_max: t((m + 1) * (m + 1), 2 * m * m),
                    support: vec![0, 1],
                    x_star_min: t(m - 1, 2 * m),
                    m_denominator: Some(2 * m as u64),
                }
            }
            F6 => {
                let d = spec.d.expect("validated");
                Self {
                    spec,
                    poly: sum_of(&|i| var(i).pow(d)),
                    x_star: barycenter,
                    f_min: pow(t::<T>(1, ni), d as usize - 1),
                    f_max: T::one(),
                    support: all,
                    x_star_min: t(1, ni),
                    m_denominator: Some(n as u64),
                }
            }
            F7 => {
                let d = spec.d.expect("validated") as usize;
                let prod = (0..d).fold(Polynomial::constant(n, T::one()), |acc, i| &acc * &var(i));
                let mut x = vec![T::zero(); n];
                for xi in x.iter_mut().take(d) {
                    *xi = t(1, d as i64);
                }
                Self {
                    spec,
                    poly: -&prod,
                    x_star: x,
                    f_min: -pow(t::<T>(1, d as i64), d),
                    f_max: T::zero(),
                    support: (0..d).collect(),
                    x_star_min: t(1, d as i64),
                    m_denominator: Some(d as u64),
                }
            }
        };
        Ok(problem)
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn range(&self) -> T {
        self.f_max.clone() - self.f_min.clone()
    }

    /// `Σ|g_α|` for `g` the restriction to the support with its last variable
    /// eliminated. A singleton support leaves a constant.
    pub fn eliminated_coeff_l1(&self) -> Result<T, ProblemError> {
        let restricted = self.poly.restrict_to_support(&self.support)?;
        if restricted.n_vars() == 1 {
            return Ok(restricted.eval(&[T::one()])?.abs());
        }
        Ok(restricted.eliminate_last()?.coeff_l1())
    }

    /// Everything the bound formulas need at resolution `r`, computed from
    /// the polynomial itself (coefficient sums) and the analytic optimum.
    pub fn problem_data(&self, r: u32, epsilon: T) -> Result<ProblemData<T>, ProblemError> {
        let restricted = self.poly.restrict_to_support(&self.support)?;
        Ok(ProblemData {
            d: self.degree(),
            n: self.spec.n,
            r,
            range: self.range(),
            m: self.m_denominator,
            support_size: Some(self.support.len()),
            x_star_min: Some(self.x_star_min.clone()),
            coeff_l1: Some(self.poly.coeff_l1()),
            coeff_l1_restricted: Some(restricted.coeff_l1()),
            coeff_l1_eliminated: Some(self.eliminated_coeff_l1()?),
            epsilon,
        })
    }
}

/// Table columns: the rational-minimizer bound (quadratic or general by
/// degree), the support bound, the eliminated-variable bound and the
/// minimum-component bound.
pub fn table1_columns(id: ProblemId) -> [BoundKind; 4] {
    let first = match id {
        ProblemId::F6 | ProblemId::F7 => BoundKind::RationalGeneral,
        _ => BoundKind::RationalQuadratic,
    };
    [first, BoundKind::Support, BoundKind::Eliminated, BoundKind::MinComponent]
}

/// Closed-form table entries for `spec` at resolution `r`, in
/// [`table1_columns`] order.
pub fn table1_expected<T: Scalar>(
    spec: &ProblemSpec,
    r: u32,
    epsilon: &T,
) -> Result<Vec<(BoundKind, T)>, ProblemError> {
    spec.validate()?;
    use ProblemId::*;
    let int = |k: i64| T::from_int(k);
    let big = |b: num_bigint::BigUint| T::from_biguint(&b);
    let r2 = int(r as i64) * int(r as i64);
    let one_eps = T::one() + epsilon.clone();
    let n = int(spec.n as i64);
    let p = |x: &T, k: usize| pow(x.clone(), k);

    let vals: [T; 4] = match spec.id {
        F1 => [
            (n.clone() - int(1)) / r2.clone(),
            p(&(n.clone() - int(1)), 2) * p(&(n.clone() + int(1)), 2) / (p(&n, 3) * r2.clone()),
            p(&(n.clone() - int(1)), 3) * p(&(n.clone() + int(1)), 2) / (p(&n, 3) * r2.clone()),
            int(12) * one_eps * (p(&n, 2) - n.clone()) / r2,
        ],
        F2 => [
            (n.clone() - int(1)) / r2.clone(),
            p(&(n.clone() - int(1)), 2) / (n.clone() * r2.clone()),
            p(&(n.clone() - int(1)), 2) * (p(&n, 2) + n.clone() - int(1)) / (p(&n, 2) * r2.clone()),
            int(12) * one_eps * (p(&n, 2) - n.clone()) / r2,
        ],
        F3 => [
            (n.clone() - int(1)) / (n.clone() * r2.clone()),
            T::zero(),
            T::zero(),
            int(12) * one_eps * (n.clone() - int(1)) / (n * r2),
        ],
        F4 => {
            let m = int(spec.m.expect("validated") as i64);
            [
                int(2) * p(&(m.clone() - int(1)), 2) / (m.clone() * r2.clone()),
                (int(5) * p(&m, 2) - int(2) * m.clone() + int(2)) / (int(4) * p(&m, 2) * r2.clone()),
                p(&(m.clone() + int(1)), 2) / (int(2) * p(&m, 2) * r2.clone()),
                int(24) * one_eps * p(&(m - int(1)), 2) / r2,
            ]
        }
        F5 => {
            let m = int(spec.m.expect("validated") as i64);
            [
                p(&(m.clone() + int(1)), 2) / (m.clone() * r2.clone()),
                (int(9) * p(&m, 2) + int(1)) / (int(8) * p(&m, 2) * r2.clone()),
                (int(9) * p(&m, 2) - int(6) * m.clone() + int(1)) / (int(8) * p(&m, 2) * r2.clone()),
                int(24) * one_eps * p(&(m.clone() + int(1)), 2) / (p(&(m - int(1)), 2) * r2),
            ]
        }
        F6 => {
            let d = spec.d.expect("validated");
            let du = d as usize;
            let dd = int(d as i64);
            let d64 = d as u64;
            let sign = if d.is_multiple_of(2) { int(1) } else { int(-1) };
            [
                p(&dd, 2 * du - 1)
                    * (T::one() - T::one() / big(factorial(d64)))
                    * (p(&n, du) - n.clone())
                    * big(factorial(2 * d64 - 1))
                    / (p(&n, du - 1) * r2.clone() * big(factorial(d64 - 2))),
                dd.clone() * (dd.clone() - int(1)) * n.clone() / (int(2) * r2.clone())
                    * p(&(T::one() - T::one() / n.clone()), 2),
                (p(&dd, 2) - dd.clone()) * (p(&n, du) + sign * (n.clone() - int(1)))
                    / (int(2) * r2.clone() * p(&n, 2) / p(&(n.clone() - int(1)), 2)),
                p(&dd, du) * one_eps * (p(&n, du - 1) - int(1)) / (p(&n, du - 3) * r2)
                    * big(binomial(d64, 2))
                    * big(binomial(2 * d64 - 1, d64)),
            ]
        }
        F7 => {
            let d = spec.d.expect("validated");
            let du = d as usize;
            let dd = int(d as i64);
            let d64 = d as u64;
            let shrink = p(&(T::one() - T::one() / dd.clone()), 2);
            [
                p(&dd, du) * (dd.clone() - int(1)) * (big(factorial(d64)) - int(1)) / r2.clone()
                    * big(binomial(2 * d64 - 1, d64)),
                dd.clone() * (dd.clone() - int(1)) / (int(2) * r2.clone()) * shrink.clone(),
                p(&dd, 2) * (dd.clone() - int(1)) / (int(2) * r2.clone()) * shrink,
                one_eps * p(&dd, 2) / r2 * big(binomial(d64, 2)) * big(binomial(2 * d64 - 1, d64)),
            ]
        }
    };
    Ok(table1_columns(spec.id).into_iter().zip(vals).collect())
}

/// The same entries computed by the general bound formulas from catalogue
/// data, ignoring the minimum-component resolution threshold.
pub fn table1_from_bounds<T: Scalar>(
    spec: &ProblemSpec,
    r: u32,
    epsilon: &T,
) -> Result<Vec<(BoundKind, T)>, ProblemError> {
    let problem = ReferenceProblem::<T>::new(*spec)?;
    let data = problem.problem_data(r, epsilon.clone())?;
    Ok(table1_columns(spec.id)
        .into_iter()
        .map(|k| (k, bounds::raw_value(k, &data).expect("catalogue data is complete")))
        .collect())
}
