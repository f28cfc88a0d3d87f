//! Experiment runner: sweeps `r`, measures gaps, checks every bound and fits
//! the empirical convergence rate.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_rational::BigRational;
use thiserror::Error;

use crate::bounds::{self, BoundKind, BoundValue, ProblemData};
use crate::grid::{grid_size, GridError, GridSearch, DEFAULT_EVAL_BUDGET};
use crate::polynomial::{ParseError, Polynomial};
use crate::problems::{self, ProblemError, ProblemId, ProblemSpec, ReferenceProblem};
use crate::scalar::{rational_from_f64, Scalar};
use crate::TAU_EVAL;

/// Gaps at or below this count as exact hits and are left out of rate fits.
pub const TAU_GAP: f64 = 1e-12;

/// Agreement required between float and exact grid minima, relative to
/// `1 + |exact|` so that exact zeros are not held to a pure relative test.
pub const ORACLE_RTOL: f64 = 1e-12;

/// Relative agreement required between closed-form and derived table cells.
pub const TABLE_RTOL: f64 = 1e-12;

/// Instances up to this size are re-solved in exact arithmetic.
pub const ORACLE_MAX_N: usize = 3;
pub const ORACLE_MAX_R: u32 = 8;

pub const DEFAULT_EPSILON: f64 = 0.5;
pub const DEFAULT_R_EST: u32 = 30;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("evaluation budget of {budget} exceeded by: {}", format_offenders(.offenders))]
    BudgetExceeded {
        budget: u64,
        offenders: Vec<(String, u32, u128)>,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    PolyFile { path: PathBuf, source: ParseError },
    #[error("bad CSV input: {0}")]
    Csv(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Bound(#[from] bounds::BoundError),
}

fn format_offenders(list: &[(String, u32, u128)]) -> String {
    list.iter()
        .map(|(p, r, size)| format!("{p} r={r} needs {size}"))
        .collect::<Vec<_>>()
        .join("; ")
}

impl HarnessError {
    /// Process exit code: 3 for budget refusals, 4 for any input problem.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::BudgetExceeded { .. } => 3,
            HarnessError::Grid(GridError::BudgetExceeded { .. }) => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Reference(ProblemSpec),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problems: Vec<ProblemSource>,
    pub r_min: u32,
    pub r_max: u32,
    pub step: u32,
    pub epsilon: f64,
    pub eval_budget: u64,
    /// Resolution used to estimate the optimum and range of user polynomials.
    pub r_est: u32,
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(problems: Vec<ProblemSource>, r_min: u32, r_max: u32) -> Self {
        Self {
            problems,
            r_min,
            r_max,
            step: 1,
            epsilon: DEFAULT_EPSILON,
            eval_budget: DEFAULT_EVAL_BUDGET,
            r_est: DEFAULT_R_EST,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.into()));
        if self.problems.is_empty() {
            return bad("no problems selected");
        }
        if self.r_min < 1 {
            return bad("r-min must be at least 1");
        }
        if self.r_max < self.r_min {
            return bad("r-max is smaller than r-min");
        }
        if self.step < 1 {
            return bad("step must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 2.0 / 3.0) {
            return bad("epsilon must lie in (0, 2/3]");
        }
        if self.r_est < 1 {
            return bad("r-est must be at least 1");
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        Ok(())
    }

    pub fn r_values(&self) -> Vec<u32> {
        (self.r_min..=self.r_max).step_by(self.step as usize).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub bound: BoundValue<f64>,
    /// `None` when the bound does not apply.
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub problem: String,
    pub params: String,
    pub r: u32,
    pub grid_min: f64,
    pub f_min: f64,
    pub gap: f64,
    /// True when `f_min` and the range were estimated on a grid.
    pub heuristic: bool,
    pub checks: Vec<BoundCheck>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub slope: Option<f64>,
    pub r_values_used: Vec<u32>,
    pub gap_values: Vec<f64>,
    pub excluded_zero_gaps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateStatus {
    Fitted(f64),
    /// Every gap was an exact hit.
    Exact,
    /// Fewer than three nonzero gaps.
    InsufficientData,
}

impl RateEstimate {
    pub fn status(&self) -> RateStatus {
        match self.slope {
            Some(s) => RateStatus::Fitted(s),
            None if self.r_values_used.is_empty() && self.excluded_zero_gaps > 0 => RateStatus::Exact,
            None => RateStatus::InsufficientData,
        }
    }
}

impl std::fmt::Display for RateStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RateStatus::Fitted(s) => write!(f, "slope {s:.6}"),
            RateStatus::Exact => f.write_str("exact"),
            RateStatus::InsufficientData => f.write_str("insufficient data"),
        }
    }
}

/// Least-squares slope of `log gap` against `log r`, over points with
/// `gap > TAU_GAP`. Needs at least three such points.
pub fn fit_rate(points: &[(u32, f64)]) -> RateEstimate {
    let (kept, dropped): (Vec<_>, Vec<_>) = points.iter().partition(|(_, g)| *g > TAU_GAP);
    let r_values_used: Vec<u32> = kept.iter().map(|(r, _)| *r).collect();
    let gap_values: Vec<f64> = kept.iter().map(|(_, g)| *g).collect();
    let slope = (kept.len() >= 3)
        .then(|| {
            let xs: Vec<f64> = r_values_used.iter().map(|&r| (r as f64).ln()).collect();
            let ys: Vec<f64> = gap_values.iter().map(|g| g.ln()).collect();
            let k = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / k;
            let my = ys.iter().sum::<f64>() / k;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
            (sxx > 0.0).then(|| sxy / sxx)
        })
        .flatten();
    RateEstimate {
        slope,
        r_values_used,
        gap_values,
        excluded_zero_gaps: dropped.len(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemRate {
    pub problem: String,
    pub params: String,
    pub estimate: RateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub problem: String,
    pub params: String,
    pub r: u32,
    pub float_value: f64,
    pub exact_value: BigRational,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub rates: Vec<ProblemRate>,
    pub oracle: Vec<OracleCheck>,
}

pub const CSV_HEADER: [&str; 10] = [
    "problem",
    "params",
    "r",
    "grid_min",
    "f_min",
    "gap",
    "bound_name",
    "bound_value",
    "applicable",
    "holds",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Report {
    /// Applicable bounds exceeded by the measured gap, on rows whose optimum
    /// is known analytically.
    pub fn violations(&self) -> Vec<(&ReportRow, &BoundCheck)> {
        self.rows
            .iter()
            .filter(|row| !row.heuristic)
            .flat_map(|row| row.checks.iter().map(move |c| (row, c)))
            .filter(|(_, c)| c.holds == Some(false))
            .collect()
    }

    pub fn oracle_failures(&self) -> Vec<&OracleCheck> {
        self.oracle.iter().filter(|c| !c.agrees).collect()
    }

    pub fn is_sound(&self) -> bool {
        self.violations().is_empty() && self.oracle_failures().is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for row in &self.rows {
            for c in &row.checks {
                w.write_record([
                    row.problem.clone(),
                    row.params.clone(),
                    row.r.to_string(),
                    num(row.grid_min),
                    num(row.f_min),
                    num(row.gap),
                    c.bound.kind.name().to_string(),
                    c.bound.value().map(|v| num(*v)).unwrap_or_default(),
                    c.bound.is_applicable().to_string(),
                    c.holds.map(|h| h.to_string()).unwrap_or_default(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output")
    }

    pub fn rates_csv(&self) -> String {
        rates_to_csv(&self.rates)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# Grid search gaps\n\n");
        out.push_str("| problem | params | r | grid_min | f_min | gap | bound | value | holds |\n");
        out.push_str("|---|---|---|---|---|---|---|---|---|\n");
        for row in &self.rows {
            for c in &row.checks {
                let value = match c.bound.value() {
                    Some(v) => num(*v),
                    None => format!("n/a ({})", c.bound.reason().unwrap_or("")),
                };
                let holds = c.holds.map(|h| if h { "yes" } else { "**NO**" }).unwrap_or("");
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                    row.problem,
                    row.params,
                    row.r,
                    num(row.grid_min),
                    num(row.f_min),
                    num(row.gap),
                    c.bound.kind,
                    value,
                    holds
                )
                .unwrap();
            }
        }
        out.push_str("\n## Convergence rates\n\n| problem | params | rate | points | exact hits |\n|---|---|---|---|---|\n");
        for rate in &self.rates {
            writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                rate.problem,
                rate.params,
                rate.estimate.status(),
                rate.estimate.r_values_used.len(),
                rate.estimate.excluded_zero_gaps
            )
            .unwrap();
        }
        if !self.oracle.is_empty() {
            let bad = self.oracle_failures().len();
            writeln!(
                out,
                "\nExact-arithmetic cross-check: {} instances, {} disagreements.",
                self.oracle.len(),
                bad
            )
            .unwrap();
        }
        out
    }
}

pub fn rates_to_csv(rates: &[ProblemRate]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["problem", "params", "status", "slope", "points_used", "excluded_zero_gaps"])
        .expect("in-memory write");
    for rate in rates {
        let status = rate.estimate.status();
        let (label, slope) = match status {
            RateStatus::Fitted(s) => ("fitted", num(s)),
            RateStatus::Exact => ("exact", String::new()),
            RateStatus::InsufficientData => ("insufficient_data", String::new()),
        };
        w.write_record([
            rate.problem.clone(),
            rate.params.clone(),
            label.to_string(),
            slope,
            rate.estimate.r_values_used.len().to_string(),
            rate.estimate.excluded_zero_gaps.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 output")
}

/// A problem ready to run: polynomial plus whatever is known about its optimum.
struct Prepared {
    label: String,
    params: String,
    poly: Polynomial<f64>,
    reference: Option<ReferenceProblem<f64>>,
    exact: Option<Polynomial<BigRational>>,
}

fn prepare(source: &ProblemSource, r_est: u32) -> Result<Prepared, HarnessError> {
    match source {
        ProblemSource::Reference(spec) => {
            let reference = ReferenceProblem::<f64>::new(*spec)?;
            let exact = ReferenceProblem::<BigRational>::new(*spec)?.poly;
            Ok(Prepared {
                label: spec.id.to_string(),
                params: spec.params(),
                poly: reference.poly.clone(),
                reference: Some(reference),
                exact: Some(exact),
            })
        }
        ProblemSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            let poly = Polynomial::parse_text(&text).map_err(|source| HarnessError::PolyFile {
                path: path.clone(),
                source,
            })?;
            let exact = poly.map_coeffs(|c| rational_from_f64(*c).expect("parsed coefficients are finite"));
            Ok(Prepared {
                label: "file".into(),
                params: format!("path={},r_est={r_est}", path.display()),
                poly,
                reference: None,
                exact: Some(exact),
            })
        }
    }
}

fn check_budget(cfg: &ExperimentConfig, prepared: &[Prepared]) -> Result<(), HarnessError> {
    let mut offenders = Vec::new();
    for p in prepared {
        let n = p.poly.n_vars();
        let mut rs = cfg.r_values();
        if p.reference.is_none() {
            rs.push(cfg.r_est);
        }
        for r in rs {
            let size = grid_size(n, r)?;
            if size > cfg.eval_budget as u128 {
                offenders.push((format!("{}:{}", p.label, p.params), r, size));
            }
        }
    }
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::BudgetExceeded {
            budget: cfg.eval_budget,
            offenders,
        })
    }
}

fn relative_agree(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
        || a == b
}

fn checks_for(bounds: Vec<BoundValue<f64>>, gap: f64) -> Vec<BoundCheck> {
    let mut checks: Vec<BoundCheck> = bounds
        .into_iter()
        .map(|b| {
            let holds = b.value().map(|v| gap <= v + TAU_EVAL);
            BoundCheck { bound: b, holds }
        })
        .collect();
    checks.sort_by(|a, b| a.bound.kind.name().cmp(b.bound.kind.name()));
    checks
}

/// Runs the full sweep. Output depends only on `cfg` apart from the worker
/// count, which never changes results.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    cfg.validate()?;
    match cfg.workers {
        Some(k) if k > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| GridError::Pool(e.to_string()))?;
            pool.install(|| run_in_pool(cfg, None))
        }
        other => run_in_pool(cfg, other),
    }
}

fn run_in_pool(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Report, HarnessError> {
    let prepared = cfg
        .problems
        .iter()
        .map(|s| prepare(s, cfg.r_est))
        .collect::<Result<Vec<_>, _>>()?;
    check_budget(cfg, &prepared)?;

    let search = GridSearch {
        budget: cfg.eval_budget,
        workers,
    };
    let r_values = cfg.r_values();
    let mut rows = Vec::new();
    let mut rates = Vec::new();
    let mut oracle = Vec::new();

    for p in &prepared {
        let n = p.poly.n_vars();
        let d = p.poly.degree();
        let minima = r_values
            .iter()
            .map(|&r| search.minimize(&p.poly, r).map(|o| (r, o.value)))
            .collect::<Result<Vec<_>, _>>()?;

        let (f_min, heuristic, base) = match &p.reference {
            Some(reference) => {
                let data = reference.problem_data(1, cfg.epsilon)?;
                (reference.f_min, false, data)
            }
            None => {
                let est_min = search.minimize(&p.poly, cfg.r_est)?.value;
                let est_max = search.maximize(&p.poly, cfg.r_est)?.value;
                let f_min = minima.iter().map(|(_, v)| *v).fold(est_min, f64::min);
                let mut data = ProblemData::new(d, n, 1, (est_max - f_min).max(0.0), cfg.epsilon);
                // (1 - 1/|I|)^2 is largest at |I| = n, so the full support is safe
                data.support_size = Some(n);
                data.coeff_l1 = Some(p.poly.coeff_l1());
                (f_min, true, data)
            }
        };

        let mut points = Vec::with_capacity(minima.len());
        for &(r, grid_min) in &minima {
            let gap = grid_min - f_min;
            let data = ProblemData { r, ..base.clone() };
            let checks = checks_for(bounds::evaluate_all(&data)?, gap);
            rows.push(ReportRow {
                problem: p.label.clone(),
                params: p.params.clone(),
                r,
                grid_min,
                f_min,
                gap,
                heuristic,
                checks,
            });
            points.push((r, gap));

            if let Some(exact) = &p.exact {
                if n <= ORACLE_MAX_N && r <= ORACLE_MAX_R {
                    let exact_value = search.minimize(exact, r)?.value;
                    let exact_f = Scalar::to_f64(&exact_value);
                    let agrees = (grid_min - exact_f).abs() <= ORACLE_RTOL * (1.0 + exact_f.abs());
                    oracle.push(OracleCheck {
                        problem: p.label.clone(),
                        params: p.params.clone(),
                        r,
                        float_value: grid_min,
                        exact_value,
                        agrees,
                    });
                }
            }
        }
        rates.push(ProblemRate {
            problem: p.label.clone(),
            params: p.params.clone(),
            estimate: fit_rate(&points),
        });
    }
    Ok(Report { rows, rates, oracle })
}

/// Groups `run` CSV output by problem and fits a rate to each group.
pub fn rates_from_csv(src: &str) -> Result<Vec<ProblemRate>, HarnessError> {
    let mut reader = csv::Reader::from_reader(src.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| HarnessError::Csv(e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| HarnessError::Csv(format!("missing column `{name}`")))
    };
    let (ip, ia, ir, ig) = (col("problem")?, col("params")?, col("r")?, col("gap")?);

    type Group = ((String, String), Vec<(u32, f64)>);
    let mut groups: Vec<Group> = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| HarnessError::Csv(e.to_string()))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |what: &str| HarnessError::Csv(format!("record {}: bad {what}", line + 1));
        let key = (field(ip).to_string(), field(ia).to_string());
        let r: u32 = field(ir).parse().map_err(|_| bad("r"))?;
        let gap: f64 = field(ig).parse().map_err(|_| bad("gap"))?;
        let slot = match groups.iter_mut().position(|(k, _)| *k == key) {
            Some(i) => &mut groups[i].1,
            None => {
                groups.push((key, Vec::new()));
                &mut groups.last_mut().unwrap().1
            }
        };
        // one row per bound; keep the first gap seen for each r
        if !slot.iter().any(|(seen, _)| *seen == r) {
            slot.push((r, gap));
        }
    }
    if groups.is_empty() {
        return Err(HarnessError::Csv("no data rows".into()));
    }
    Ok(groups
        .into_iter()
        .map(|((problem, params), points)| ProblemRate {
            problem,
            params,
            estimate: fit_rate(&points),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub kind: BoundKind,
    pub closed_form: f64,
    pub derived: f64,
    /// Whether the bound's own preconditions hold at this `r`.
    pub applicable: bool,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub id: ProblemId,
    pub spec: Result<ProblemSpec, String>,
    pub cells: Vec<Table1Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub r: u32,
    pub epsilon: f64,
    pub rows: Vec<Table1Row>,
}

impl Table1 {
    pub fn mismatches(&self) -> Vec<(ProblemId, &Table1Cell)> {
        self.rows
            .iter()
            .flat_map(|row| row.cells.iter().map(move |c| (row.id, c)))
            .filter(|(_, c)| !c.matches)
            .collect()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from(
            "| problem | rational minimizer | support | eliminated variable | min component |\n\
             |---|---|---|---|---|\n",
        );
        for row in &self.rows {
            match &row.spec {
                Err(msg) => {
                    writeln!(out, "| {} | {msg} | | | |", row.id).unwrap();
                }
                Ok(spec) => {
                    write!(out, "| {spec} |").unwrap();
                    for c in &row.cells {
                        let mark = if c.matches { "" } else { " MISMATCH" };
                        let gate = if c.applicable { "" } else { " (r below threshold)" };
                        write!(
                            out,
                            " {:.6e} / {:.6e}{mark}{gate} |",
                            c.closed_form, c.derived
                        )
                        .unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        writeln!(
            out,
            "\nr = {}, epsilon = {}. Each cell: closed form / general bound formula on catalogue data.",
            self.r, self.epsilon
        )
        .unwrap();
        out
    }
}

/// Closed-form table rows for `f1`–`f7` next to the values the general bound
/// formulas give on the same problems. `f7` uses `max(n, d)` variables.
pub fn reproduce_table1(n: usize, m: u32, d: u32, r: u32, epsilon: f64) -> Result<Table1, HarnessError> {
    if r < 1 {
        return Err(HarnessError::Config("r must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 2.0 / 3.0) {
        return Err(HarnessError::Config("epsilon must lie in (0, 2/3]".into()));
    }
    let specs = [
        ProblemSpec::with_n(ProblemId::F1, n),
        ProblemSpec::with_n(ProblemId::F2, n),
        ProblemSpec::with_n(ProblemId::F3, n),
        ProblemSpec::f4(m, n),
        ProblemSpec::f5(m, n),
        ProblemSpec::f6(d, n),
        ProblemSpec::f7(d, n.max(d as usize)),
    ];
    let mut rows = Vec::new();
    for spec in specs {
        if let Err(e) = spec.validate() {
            rows.push(Table1Row {
                id: spec.id,
                spec: Err(e.to_string()),
                cells: Vec::new(),
            });
            continue;
        }
        let closed = problems::table1_expected::<f64>(&spec, r, &epsilon)?;
        let derived = problems::table1_from_bounds::<f64>(&spec, r, &epsilon)?;
        let reference = ReferenceProblem::<f64>::new(spec)?;
        let gated = bounds::evaluate_all(&reference.problem_data(r, epsilon)?)?;
        let cells = closed
            .into_iter()
            .zip(derived)
            .map(|((kind, c), (_, v))| Table1Cell {
                kind,
                closed_form: c,
                derived: v,
                applicable: gated.iter().any(|b| b.kind == kind && b.is_applicable()),
                matches: relative_agree(c, v, TABLE_RTOL),
            })
            .collect();
        rows.push(Table1Row {
            id: spec.id,
            spec: Ok(spec),
            cells,
        });
    }
    Ok(Table1 { r, epsilon, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(s: &str) -> ProblemSource {
        ProblemSource::Reference(s.parse().unwrap())
    }

    #[test]
    fn fit_rate_examples() {
        let exact2: Vec<_> = (2..20).map(|r| (r, 3.0 / (r as f64).powi(2))).collect();
        let est = fit_rate(&exact2);
        assert!((est.slope.unwrap() + 2.0).abs() < 1e-9);

        let exact1: Vec<_> = (2..20).map(|r| (r, 0.5 / r as f64)).collect();
        assert!((fit_rate(&exact1).slope.unwrap() + 1.0).abs() < 1e-9);

        let zeros: Vec<_> = (2..10).map(|r| (r, 0.0)).collect();
        let est = fit_rate(&zeros);
        assert_eq!(est.status(), RateStatus::Exact);
        assert_eq!(est.excluded_zero_gaps, 8);

        let few = [(2, 0.1), (3, 0.0), (4, 0.05)];
        assert_eq!(fit_rate(&few).status(), RateStatus::InsufficientData);
        assert_eq!(fit_rate(&[]).status(), RateStatus::InsufficientData);
    }

    #[test]
    fn f2_rate_is_quadratic() {
        let mut cfg = ExperimentConfig::new(vec![reference("f2:n=3")], 2, 20);
        cfg.workers = Some(2);
        let report = run_experiment(&cfg).unwrap();
        let est = &report.rates[0].estimate;
        assert!(est.excluded_zero_gaps >= 6); // multiples of 3
        let slope = est.slope.unwrap();
        assert!(slope <= -1.8, "slope {slope}");
        assert!(report.is_sound());
    }

    #[test]
    fn f3_is_exact_at_every_r() {
        let cfg = ExperimentConfig::new(vec![reference("f3:n=4")], 1, 12);
        let report = run_experiment(&cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.gap.abs() <= TAU_GAP));
        assert_eq!(report.rates[0].estimate.status(), RateStatus::Exact);
    }

    #[test]
    fn f1_exact_when_n_divides_r() {
        let mut cfg = ExperimentConfig::new(vec![reference("f1:n=3")], 3, 9);
        cfg.step = 3;
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.rows.iter().map(|r| r.r).collect::<Vec<_>>(), vec![3, 6, 9]);
        assert!(report.rows.iter().all(|r| r.gap.abs() <= TAU_GAP));
    }

    #[test]
    fn budget_is_checked_upfront() {
        let mut cfg = ExperimentConfig::new(vec![reference("f1:n=5"), reference("f2:n=2")], 1, 10);
        cfg.eval_budget = 100;
        let err = run_experiment(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        match err {
            HarnessError::BudgetExceeded { offenders, .. } => {
                assert!(offenders.iter().all(|(p, _, size)| p.starts_with("f1") && *size > 100));
                // C(4+r, 4) > 100 from r = 5
                assert_eq!(offenders.iter().map(|o| o.1).collect::<Vec<_>>(), vec![5, 6, 7, 8, 9, 10]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn config_validation() {
        let base = ExperimentConfig::new(vec![reference("f1:n=3")], 1, 5);
        let mut c = base.clone();
        c.r_min = 0;
        assert!(run_experiment(&c).is_err());
        let mut c = base.clone();
        c.r_max = 0;
        assert_eq!(run_experiment(&c).unwrap_err().exit_code(), 4);
        let mut c = base.clone();
        c.epsilon = 0.9;
        assert!(c.validate().is_err());
        let mut c = base;
        c.problems.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = ExperimentConfig::new(vec![reference("f4:m=3,n=3")], 2, 3);
        let report = run_experiment(&cfg).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(csv.lines().count(), 1 + 2 * BoundKind::ALL.len());
        let first = lines.next().unwrap();
        assert!(first.starts_with("f4,\"m=3,n=3\",2,"), "{first}");
        // bound names sorted within each r
        let names: Vec<_> = csv
            .lines()
            .skip(1)
            .take(BoundKind::ALL.len())
            .map(|l| l.rsplit(',').nth(3).unwrap().to_string())
            .collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn rate_reads_back_run_csv() {
        let mut cfg = ExperimentConfig::new(vec![reference("f2:n=3"), reference("f3:n=3")], 2, 20);
        cfg.step = 1;
        let report = run_experiment(&cfg).unwrap();
        let rates = rates_from_csv(&report.to_csv()).unwrap();
        assert_eq!(rates.len(), 2);
        assert_eq!(rates[0].estimate.slope, report.rates[0].estimate.slope);
        assert_eq!(rates[1].estimate.status(), RateStatus::Exact);
        assert!(rates_from_csv("problem,params\n").is_err());
        assert!(rates_from_csv("problem,params,r,gap\nf1,n=2,x,0.1\n").is_err());
    }

    #[test]
    fn comparison_table_examples() {
        let t = reproduce_table1(3, 2, 3, 10, 0.5).unwrap();
        assert!(t.mismatches().is_empty());
        let cell = |id: ProblemId, k: BoundKind| {
            t.rows
                .iter()
                .find(|r| r.id == id)
                .unwrap()
                .cells
                .iter()
                .find(|c| c.kind == k)
                .unwrap()
                .clone()
        };
        assert!((cell(ProblemId::F7, BoundKind::Support).closed_form - 4.0 / 300.0).abs() < 1e-15);
        let f2 = cell(ProblemId::F2, BoundKind::MinComponent);
        assert!((f2.closed_form - 1.08).abs() < 1e-12);
        assert!(!f2.applicable); // threshold is r >= 12

        let t = reproduce_table1(2, 2, 3, 2, 0.5).unwrap();
        let f1 = &t.rows[0].cells[2];
        assert!((f1.closed_form - 9.0 / 32.0).abs() < 1e-15);

        let t = reproduce_table1(3, 3, 3, 4, 0.5).unwrap();
        assert!(t.rows[4].spec.is_err());
        assert!(t.to_markdown().contains("must be even"));
    }

    #[test]
    fn user_polynomial_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        // (x1 - 0.3)^2 + x2^2 expanded
        std::fs::write(&path, "n 2\n1 2 0\n-0.6 1 0\n0.09 0 0\n1 0 2\n").unwrap();
        let cfg = ExperimentConfig::new(vec![ProblemSource::File(path.clone())], 2, 10);
        let report = run_experiment(&cfg).unwrap();
        assert!(report.rows.iter().all(|r| r.heuristic && r.gap >= 0.0));
        assert!(report.rows[0].params.starts_with("path="));
        assert!(!report.oracle.is_empty());
        assert!(report.oracle_failures().is_empty());

        let missing = ExperimentConfig::new(vec![ProblemSource::File(dir.path().join("nope"))], 2, 3);
        assert_eq!(run_experiment(&missing).unwrap_err().exit_code(), 4);
        std::fs::write(&path, "garbage\n").unwrap();
        assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 4);
    }
}
