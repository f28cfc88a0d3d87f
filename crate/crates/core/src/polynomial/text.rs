//! Line-oriented text format for `f64` polynomials.
//!
//! ```text
//! # comment
//! n 3
//! 1.0000000000000000e0 2 0 0
//! -5.0000000000000000e-1 0 1 1
//! ```
//!
//! The first non-comment line declares the variable count; every further
//! line is `<coefficient> <a1> ... <an>`. Blank lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Polynomial, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing `n <n_vars>` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn line_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

impl Polynomial<f64> {
    pub fn parse_text(src: &str) -> Result<Self, ParseError> {
        let mut n_vars: Option<usize> = None;
        let mut terms = Vec::new();
        for (idx, raw) in src.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let Some(n) = n_vars else {
                if fields.next() != Some("n") {
                    return Err(ParseError::MissingHeader);
                }
                let n: usize = fields
                    .next()
                    .ok_or_else(|| line_err(lineno, "header is missing the variable count"))?
                    .parse()
                    .map_err(|_| line_err(lineno, "variable count is not an integer"))?;
                if n == 0 {
                    return Err(line_err(lineno, "variable count must be positive"));
                }
                if fields.next().is_some() {
                    return Err(line_err(lineno, "trailing tokens after header"));
                }
                n_vars = Some(n);
                continue;
            };
            let coeff: f64 = fields
                .next()
                .expect("non-empty line has a token")
                .parse()
                .map_err(|_| line_err(lineno, "coefficient is not a number"))?;
            if !coeff.is_finite() {
                return Err(line_err(lineno, "coefficient must be finite"));
            }
            let alpha = fields
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| line_err(lineno, format!("bad exponent `{t}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if alpha.len() != n {
                return Err(line_err(
                    lineno,
                    format!("expected {n} exponents, found {}", alpha.len()),
                ));
            }
            terms.push((alpha, coeff));
        }
        let n = n_vars.ok_or(ParseError::MissingHeader)?;
        Ok(Polynomial::from_terms(n, terms)?)
    }

    /// Serializes with 17 significant digits per coefficient, terms in
    /// lexicographic exponent order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n_vars);
        for (alpha, c) in &self.terms {
            write!(out, "{c:.16e}").unwrap();
            for a in alpha {
                write!(out, " {a}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
