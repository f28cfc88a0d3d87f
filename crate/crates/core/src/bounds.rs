//! Upper bounds on the grid-search gap `f_min,Δ(n,r) − f_min,Δn`.
//!
//! Each bound is a closed-form expression in problem parameters. Integer
//! factors (binomials, factorials, powers of `d`) are computed exactly and
//! converted to the scalar type only at the final multiply.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::combinatorics::{self, binomial, factorial};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("invalid bound input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Identifies one bound family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    /// `range / r`, quadratics only.
    QuadraticPtas,
    /// `(1 − r^(d)/r^d) C(2d−1, d) d^d · range`, any degree.
    FallingFactorial,
    /// `m · range / r²`, quadratics with a minimizer in `Δ(n, m)`.
    RationalQuadratic,
    /// `m c_d · range / r²`, any degree with a minimizer in `Δ(n, m)`.
    RationalGeneral,
    /// `d(d−1)/(2r²) (1 − 1/|I|)² Σ|f_α|`.
    Support,
    /// As [`BoundKind::Support`] but summing only `f_α` with `Supp(α) ⊆ I`.
    SupportRestricted,
    /// As [`BoundKind::Support`] but with the coefficients of `f` after
    /// eliminating the last support variable.
    Eliminated,
    /// Smallest-positive-component bound, valid for `r ≥ d/(ε x*_min)`.
    MinComponent,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::QuadraticPtas,
        BoundKind::FallingFactorial,
        BoundKind::RationalQuadratic,
        BoundKind::RationalGeneral,
        BoundKind::Support,
        BoundKind::SupportRestricted,
        BoundKind::Eliminated,
        BoundKind::MinComponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::QuadraticPtas => "quadratic_ptas",
            BoundKind::FallingFactorial => "falling_factorial",
            BoundKind::RationalQuadratic => "rational_quadratic",
            BoundKind::RationalGeneral => "rational_general",
            BoundKind::Support => "support",
            BoundKind::SupportRestricted => "support_restricted",
            BoundKind::Eliminated => "eliminated",
            BoundKind::MinComponent => "min_component",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| BoundError::InvalidInput(format!("unknown bound `{s}`")))
    }
}

/// The value of one bound, or why it does not apply.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue<T> {
    pub kind: BoundKind,
    value: Option<T>,
    reason: Option<String>,
}

impl<T> BoundValue<T> {
    pub fn applicable(kind: BoundKind, value: T) -> Self {
        Self {
            kind,
            value: Some(value),
            reason: None,
        }
    }

    pub fn not_applicable(kind: BoundKind, reason: impl Into<String>) -> Self {
        Self {
            kind,
            value: None,
            reason: Some(reason.into()),
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.value.is_some()
    }

    pub fn value(&self) -> Option<&T> {
        self.value.as_ref()
    }

    pub fn reason(&self) -> Option<&str> {
        self.reason.as_deref()
    }
}

impl<T: Scalar> BoundValue<T> {
    /// CSV fields `bound_name,value,applicable,reason`.
    pub fn csv_fields(&self) -> [String; 4] {
        [
            self.kind.name().to_string(),
            self.value
                .as_ref()
                .map(|v| format!("{:.16e}", v.to_f64()))
                .unwrap_or_default(),
            self.is_applicable().to_string(),
            self.reason.clone().unwrap_or_default(),
        ]
    }
}

/// Writes bound values as CSV with header `bound_name,value,applicable,reason`.
pub fn bounds_to_csv<T: Scalar>(values: &[BoundValue<T>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bound_name", "value", "applicable", "reason"])
        .expect("in-memory write");
    for v in values {
        w.write_record(v.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Problem parameters the bounds depend on. Optional fields gate the bounds
/// that need them.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData<T> {
    pub d: u32,
    pub n: usize,
    pub r: u32,
    /// `f_max,Δn − f_min,Δn`.
    pub range: T,
    /// Denominator of a rational global minimizer.
    pub m: Option<u64>,
    /// `|I|`, size of a global minimizer's support.
    pub support_size: Option<usize>,
    /// Smallest positive coordinate of a global minimizer.
    pub x_star_min: Option<T>,
    pub coeff_l1: Option<T>,
    pub coeff_l1_restricted: Option<T>,
    pub coeff_l1_eliminated: Option<T>,
    pub epsilon: T,
}

impl<T: Scalar> ProblemData<T> {
    /// Parameters with only the always-available fields set.
    pub fn new(d: u32, n: usize, r: u32, range: T, epsilon: T) -> Self {
        Self {
            d,
            n,
            r,
            range,
            m: None,
            support_size: None,
            x_star_min: None,
            coeff_l1: None,
            coeff_l1_restricted: None,
            coeff_l1_eliminated: None,
            epsilon,
        }
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        let bad = |msg: String| Err(BoundError::InvalidInput(msg));
        if self.n == 0 || self.r == 0 {
            return bad(format!("n and r must be positive (n={}, r={})", self.n, self.r));
        }
        if self.range < T::zero() {
            return bad("range must be nonnegative".into());
        }
        if !finite(&self.range) {
            return bad("range must be finite".into());
        }
        if self.m == Some(0) {
            return bad("m must be at least 1".into());
        }
        if let Some(s) = self.support_size {
            if s == 0 || s > self.n {
                return bad(format!("support size {s} outside 1..={}", self.n));
            }
        }
        if let Some(x) = &self.x_star_min {
            if !(*x > T::zero() && *x <= T::one()) {
                return bad("x*_min must lie in (0, 1]".into());
            }
        }
        for c in [&self.coeff_l1, &self.coeff_l1_restricted, &self.coeff_l1_eliminated]
            .into_iter()
            .flatten()
        {
            if *c < T::zero() || !finite(c) {
                return bad("coefficient sums must be finite and nonnegative".into());
            }
        }
        check_epsilon(&self.epsilon)
    }
}

fn finite<T: Scalar>(x: &T) -> bool {
    x.to_f64().is_finite()
}

fn check_epsilon<T: Scalar>(eps: &T) -> Result<(), BoundError> {
    if *eps > T::zero() && *eps <= T::from_ratio(2, 3) {
        Ok(())
    } else {
        Err(BoundError::InvalidInput(format!(
            "epsilon {:?} outside (0, 2/3]",
            eps.to_f64()
        )))
    }
}

fn big<T: Scalar>(n: &BigUint) -> T {
    T::from_biguint(n)
}

fn r_squared<T: Scalar>(r: u32) -> T {
    let r = T::from_int(r as i64);
    r.clone() * r
}

/// `r (r−1) ... (r−d+1)`: one for `d = 0`, zero for `d > r`.
pub fn falling_factorial(r: u64, d: u32) -> BigUint {
    combinatorics::falling_factorial(r, d as u64)
}

/// `c_d = (d−1)(d!−1) d^(2d−1) C(2d−1, d)`.
pub fn c_d(d: u32) -> BigUint {
    if d < 2 {
        return BigUint::ZERO;
    }
    let d64 = d as u64;
    BigUint::from(d64 - 1)
        * (factorial(d64) - 1u32)
        * BigUint::from(d64).pow(2 * d - 1)
        * binomial(2 * d64 - 1, d64)
}

/// `C(2d−1, d) d^d`.
fn spread_factor(d: u32) -> BigUint {
    let d64 = d as u64;
    binomial((2 * d64).saturating_sub(1), d64) * BigUint::from(d64).pow(d)
}

/// `range / r`.
pub fn bound_quadratic_ptas<T: Scalar>(range: &T, r: u32) -> T {
    range.clone() / T::from_int(r as i64)
}

/// `(1 − r^(d)/r^d) C(2d−1, d) d^d · range`, with `r^(d)` the falling factorial.
pub fn bound_falling_factorial<T: Scalar>(d: u32, range: &T, r: u32) -> T {
    if d == 0 {
        return T::zero();
    }
    let rd = BigUint::from(r).pow(d);
    let deficit = &rd - falling_factorial(r as u64, d);
    big::<T>(&deficit) / big::<T>(&rd) * big::<T>(&spread_factor(d)) * range.clone()
}

/// `m · range / r²`.
pub fn bound_rational_quadratic<T: Scalar>(m: u64, range: &T, r: u32) -> T {
    T::from_int(m as i64) * range.clone() / r_squared(r)
}

/// `m c_d · range / r²`.
pub fn bound_rational_general<T: Scalar>(m: u64, d: u32, range: &T, r: u32) -> T {
    T::from_int(m as i64) * big::<T>(&c_d(d)) * range.clone() / r_squared(r)
}

/// `d(d−1)/(2r²) (1 − 1/|I|)² · coeff_sum`. Zero for `|I| = 1` or `d ≤ 1`.
pub fn bound_support<T: Scalar>(d: u32, support_size: usize, coeff_sum: &T, r: u32) -> T {
    if d < 2 || support_size <= 1 {
        return T::zero();
    }
    let pairs = T::from_ratio(d as i64 * (d as i64 - 1), 2);
    let shrink = T::from_ratio(support_size as i64 - 1, support_size as i64);
    pairs * shrink.clone() * shrink * coeff_sum.clone() / r_squared(r)
}

/// Support bound fed with `Σ_{Supp(α) ⊆ I} |f_α|`.
pub fn bound_support_restricted<T: Scalar>(
    d: u32,
    support_size: usize,
    coeff_sum_restricted: &T,
    r: u32,
) -> T {
    bound_support(d, support_size, coeff_sum_restricted, r)
}

/// Support bound fed with `Σ |g_α|`, `g` the support restriction with its
/// last variable eliminated.
pub fn bound_eliminated<T: Scalar>(
    d: u32,
    support_size: usize,
    coeff_sum_eliminated: &T,
    r: u32,
) -> T {
    bound_support(d, support_size, coeff_sum_eliminated, r)
}

/// The raw expression `(1+ε) d^d C(d,2) C(2d−1,d) · range / (r² (x*_min)²)`,
/// without the resolution threshold.
pub fn min_component_expr<T: Scalar>(d: u32, x_star_min: &T, epsilon: &T, range: &T, r: u32) -> T {
    let d64 = d as u64;
    let integer = BigUint::from(d64).pow(d) * binomial(d64, 2) * binomial((2 * d64).saturating_sub(1), d64);
    (T::one() + epsilon.clone()) * big::<T>(&integer) * range.clone()
        / (x_star_min.clone() * x_star_min.clone())
        / r_squared(r)
}

/// Smallest-component bound; applicable only when `r ≥ d/(ε x*_min)`.
pub fn bound_min_component<T: Scalar>(
    d: u32,
    x_star_min: &T,
    epsilon: &T,
    range: &T,
    r: u32,
) -> Result<BoundValue<T>, BoundError> {
    check_epsilon(epsilon)?;
    if !(*x_star_min > T::zero() && *x_star_min <= T::one()) {
        return Err(BoundError::InvalidInput("x*_min must lie in (0, 1]".into()));
    }
    let kind = BoundKind::MinComponent;
    let lhs = T::from_int(r as i64) * epsilon.clone() * x_star_min.clone();
    if lhs < T::from_int(d as i64) {
        let threshold = d as f64 / (epsilon.to_f64() * x_star_min.to_f64());
        return Ok(BoundValue::not_applicable(
            kind,
            format!("r below threshold d/(eps*x_min) = {threshold:.6}"),
        ));
    }
    Ok(BoundValue::applicable(
        kind,
        min_component_expr(d, x_star_min, epsilon, range, r),
    ))
}

/// Both sides of `(1+s)^d − (1+ds) ≤ (1+ε) C(d,2) s²`, valid for
/// `s ≥ 0` and `ds ≤ ε ≤ 2/3`.
pub fn eps_poly_gap<T: Scalar>(d: u32, s: &T, epsilon: &T) -> Result<(T, T), BoundError> {
    check_epsilon(epsilon)?;
    if *s < T::zero() {
        return Err(BoundError::Precondition("s must be nonnegative".into()));
    }
    let ds = T::from_int(d as i64) * s.clone();
    if ds > *epsilon {
        return Err(BoundError::Precondition(format!(
            "d*s = {} exceeds epsilon = {}",
            ds.to_f64(),
            epsilon.to_f64()
        )));
    }
    let left = num_traits::pow(T::one() + s.clone(), d as usize) - (T::one() + ds);
    let right = (T::one() + epsilon.clone())
        * big::<T>(&binomial(d as u64, 2))
        * s.clone()
        * s.clone();
    Ok((left, right))
}

/// The bound expression for `kind` fed with `data`, ignoring applicability
/// gates (degree restrictions, the minimum-component resolution threshold).
/// `None` when a required input is missing.
pub fn raw_value<T: Scalar>(kind: BoundKind, data: &ProblemData<T>) -> Option<T> {
    let ProblemData { d, r, .. } = *data;
    let range = &data.range;
    match kind {
        BoundKind::QuadraticPtas => Some(bound_quadratic_ptas(range, r)),
        BoundKind::FallingFactorial => Some(bound_falling_factorial(d, range, r)),
        BoundKind::RationalQuadratic => data.m.map(|m| bound_rational_quadratic(m, range, r)),
        BoundKind::RationalGeneral => data.m.map(|m| bound_rational_general(m, d, range, r)),
        BoundKind::Support => Some(bound_support(d, data.support_size?, data.coeff_l1.as_ref()?, r)),
        BoundKind::SupportRestricted => Some(bound_support_restricted(
            d,
            data.support_size?,
            data.coeff_l1_restricted.as_ref()?,
            r,
        )),
        BoundKind::Eliminated => Some(bound_eliminated(
            d,
            data.support_size?,
            data.coeff_l1_eliminated.as_ref()?,
            r,
        )),
        BoundKind::MinComponent => Some(min_component_expr(
            d,
            data.x_star_min.as_ref()?,
            &data.epsilon,
            range,
            r,
        )),
    }
}

/// Every bound family, in [`BoundKind::ALL`] order, with applicability.
pub fn evaluate_all<T: Scalar>(data: &ProblemData<T>) -> Result<Vec<BoundValue<T>>, BoundError> {
    data.validate()?;
    let ProblemData { d, r, .. } = *data;
    let range = &data.range;
    let mut out = Vec::with_capacity(BoundKind::ALL.len());

    out.push(if d == 2 {
        BoundValue::applicable(BoundKind::QuadraticPtas, bound_quadratic_ptas(range, r))
    } else {
        BoundValue::not_applicable(BoundKind::QuadraticPtas, format!("degree {d} is not 2"))
    });

    out.push(BoundValue::applicable(
        BoundKind::FallingFactorial,
        bound_falling_factorial(d, range, r),
    ));

    out.push(match (d, data.m) {
        (2, Some(m)) => BoundValue::applicable(
            BoundKind::RationalQuadratic,
            bound_rational_quadratic(m, range, r),
        ),
        (2, None) => {
            BoundValue::not_applicable(BoundKind::RationalQuadratic, "no rational minimizer supplied")
        }
        _ => BoundValue::not_applicable(BoundKind::RationalQuadratic, format!("degree {d} is not 2")),
    });

    out.push(match data.m {
        Some(m) if d >= 2 => BoundValue::applicable(
            BoundKind::RationalGeneral,
            bound_rational_general(m, d, range, r),
        ),
        Some(_) => BoundValue::not_applicable(BoundKind::RationalGeneral, format!("degree {d} below 2")),
        None => BoundValue::not_applicable(BoundKind::RationalGeneral, "no rational minimizer supplied"),
    });

    let support_family = |kind: BoundKind, sum: &Option<T>, what: &str| match (data.support_size, sum) {
        (Some(s), Some(c)) => BoundValue::applicable(kind, bound_support(d, s, c, r)),
        (None, _) => BoundValue::not_applicable(kind, "minimizer support unknown"),
        (_, None) => BoundValue::not_applicable(kind, format!("{what} not supplied")),
    };
    out.push(support_family(BoundKind::Support, &data.coeff_l1, "coefficient sum"));
    out.push(support_family(
        BoundKind::SupportRestricted,
        &data.coeff_l1_restricted,
        "restricted coefficient sum",
    ));
    out.push(support_family(
        BoundKind::Eliminated,
        &data.coeff_l1_eliminated,
        "eliminated coefficient sum",
    ));

    out.push(match &data.x_star_min {
        Some(x) => bound_min_component(d, x, &data.epsilon, range, r)?,
        None => BoundValue::not_applicable(BoundKind::MinComponent, "minimizer component unknown"),
    });
    Ok(out)
}
