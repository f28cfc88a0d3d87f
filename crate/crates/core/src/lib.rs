//! Grid search for minimizing polynomials over the standard simplex.
//!
//! The crate enumerates the rational grid `Δ(n, r)`, evaluates every known
//! upper bound on the grid-search gap `f_min,Δ(n,r) − f_min,Δn`, and ships a
//! harness that measures the gap on a catalogue of reference polynomials.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the two
//! instantiations used in practice: `f64` for speed and [`BigRational`] as an
//! exact oracle.
//!
//! ```
//! use gridsearch::{grid_min, nearest_grid_point, Poly64, ProblemData64};
//! use gridsearch::bounds::evaluate_all;
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let p = Poly64::parse_text("n 3\n1 2 0 0\n1 0 2 0\n1 0 0 2\n")?;
//! let opt = grid_min(&p, 10)?;
//! assert_eq!(opt.argopt.to_string(), "3/10 3/10 4/10");
//!
//! let x = nearest_grid_point(&[0.2, 0.3, 0.5], 7)?;
//! assert_eq!(x.counts(), &[1, 2, 4]);
//!
//! let mut data = ProblemData64::new(2, 3, 10, 2.0 / 3.0, 0.5);
//! data.m = Some(3);
//! let bounds = evaluate_all(&data)?;
//! assert!(bounds.iter().any(|b| b.is_applicable()));
//! # Ok(())
//! # }
//! ```

pub mod bounds;
pub mod combinatorics;
pub mod grid;
pub mod harness;
pub mod polynomial;
pub mod problems;
pub mod scalar;

pub use num_rational::BigRational;

pub use bounds::{BoundKind, BoundValue, ProblemData};
pub use grid::{grid_max, grid_min, nearest_grid_point, GridOptimum, GridPoint, GridSearch};
pub use polynomial::Polynomial;
pub use problems::{ProblemId, ProblemSpec, ReferenceProblem};
pub use scalar::Scalar;

/// Absolute-plus-relative tolerance for float equality checks.
pub const TAU_EVAL: f64 = 1e-9;

pub type Poly64 = Polynomial<f64>;
pub type Poly32 = Polynomial<f32>;
pub type PolyExact = Polynomial<BigRational>;

pub type Problem64 = ReferenceProblem<f64>;
pub type ProblemExact = ReferenceProblem<BigRational>;

pub type GridOptimum64 = GridOptimum<f64>;
pub type GridOptimumExact = GridOptimum<BigRational>;

pub type ProblemData64 = ProblemData<f64>;
pub type BoundValue64 = BoundValue<f64>;
