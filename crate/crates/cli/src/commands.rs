//! The four subcommands. Each turns a config into output tables.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Value};
use sharp_ineq_core::calculus::ball_integral_of_modulus;
use sharp_ineq_core::extremals::{extremal_report, ExtremalFamily};
use sharp_ineq_core::operators::stechkin_curve;
use sharp_ineq_core::oracle::{
    exact_ball_integral, exact_verify, mc_cross_check, random_suite, rational, ExactFunction, ExactModulus,
    SuiteConfig, SuiteReport,
};
use sharp_ineq_core::{InequalityReport, Kernel, Modulus, QuadratureSpec, Space, TheoremId, Verdict};

use crate::config::{parse_theorem, ExperimentConfig};
use crate::error::CliError;
use crate::output::{sig12, Cell, Table};

/// Flag values that take precedence over the config.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Debug)]
pub struct Outcome {
    pub tables: Vec<Table>,
    /// Human-readable reasons for exit code 1.
    pub violations: Vec<String>,
}

pub const REPORT_COLUMNS: [&str; 10] =
    ["theorem_id", "d", "m", "alpha_or_modulus", "h", "lhs", "rhs_term1", "rhs_term2", "gap", "verdict"];

pub fn modulus_label(omega: &Modulus) -> String {
    match omega {
        Modulus::Power { alpha } => sig12(*alpha),
        Modulus::Table { knots } => {
            let parts: Vec<String> = knots.iter().map(|(t, w)| format!("{} {}", sig12(*t), sig12(*w))).collect();
            format!("table({})", parts.join(";"))
        }
    }
}

fn finite(x: f64, what: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Numeric(format!("{what} is not finite")))
    }
}

fn tolerance(o: &Overrides, cfg: &ExperimentConfig) -> Result<Option<f64>, CliError> {
    let t = o.tol.or(cfg.tolerance);
    if t.is_some_and(|t| !(t >= 0.0)) {
        return Err(CliError::Config("tolerance must be nonnegative".into()));
    }
    Ok(t)
}

fn seeds(o: &Overrides, list: Option<&Vec<u64>>) -> Vec<u64> {
    match (o.seed, list) {
        (Some(s), _) => vec![s],
        (None, Some(v)) if !v.is_empty() => v.clone(),
        _ => vec![1],
    }
}

fn default_kernel(omega: &Modulus) -> Result<Kernel, CliError> {
    Ok(Kernel::power_law(omega.small_scale_exponent() / 2.0)?)
}

/// Worker count: `SHARP_INEQ_THREADS` if set, else the available parallelism.
fn thread_count() -> usize {
    std::env::var("SHARP_INEQ_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// `f(item)` for every item on a pool of scoped threads; results keep the
/// input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = thread_count().min(items.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                *slots[k].lock().expect("unpoisoned slot") = Some(r);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("unpoisoned slot").expect("every slot filled")).collect()
}

fn space_cells(space: &Space, omega: &Modulus) -> [Cell; 3] {
    [Cell::Int(space.d() as i64), Cell::Int(space.m() as i64), Cell::Text(modulus_label(omega))]
}

/// Rows `(d, m, α, h, μ(B_h), I(h), I(h)/μ(B_h))`.
pub fn constant(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spaces = cfg.spaces()?;
    let moduli = cfg.moduli()?;
    let radii = cfg.radii()?;
    let lattice = spaces.iter().any(Space::is_lattice);
    let mut cols = vec!["d", "m", "alpha_or_modulus", "h", "mu", "ball_integral", "ratio", "method", "error_bound"];
    if lattice {
        cols.push("exact");
    }
    let mut t = Table::new("constants", &cols);
    for space in &spaces {
        for omega in &moduli {
            for &h in &radii {
                let mu = space.ball_measure(h)?;
                let est = ball_integral_of_modulus(space, omega, h, &cfg.quadrature.build(space, omega)?)?;
                let i = est.value;
                let mut row: Vec<Cell> = space_cells(space, omega).into();
                row.extend([
                    Cell::Num(h),
                    Cell::Num(finite(mu, "ball measure")?),
                    Cell::Num(finite(i, "ball integral")?),
                    Cell::Num(finite(i / mu, "ratio")?),
                    Cell::Text(est.method.as_str().into()),
                    Cell::Num(est.error_bound),
                ]);
                if lattice {
                    row.push(match (space.is_lattice(), ExactModulus::from_modulus(omega), rational(h)) {
                        (true, Ok(em), Ok(hq)) => {
                            let (mu, i) = exact_ball_integral(space, &em, &hq)?;
                            let ratio = &i / &mu;
                            Cell::Text(format!("mu={mu} I={i} ratio={ratio}"))
                        }
                        _ => Cell::Empty,
                    });
                }
                t.push(row);
            }
        }
    }
    Ok(Outcome { tables: vec![t], violations: Vec::new() })
}

fn report_row(report: &InequalityReport, space: &Space, omega: &Modulus, h: f64) -> Vec<Cell> {
    let mut row = vec![Cell::Text(report.theorem.as_str().into())];
    row.extend(space_cells(space, omega));
    row.extend([
        Cell::Num(h),
        Cell::Num(report.lhs),
        Cell::Num(report.rhs.approximation),
        Cell::Num(report.rhs.remainder),
        Cell::Num(report.gap),
        Cell::Text(report.verdict.as_str().into()),
    ]);
    row
}

/// The exact counterpart of a lattice equality check, when every input is
/// rational.
fn exact_check(
    theorem: TheoremId,
    family: ExtremalFamily,
    space: &Space,
    omega: &Modulus,
    h: f64,
) -> Result<Option<(String, Verdict)>, CliError> {
    if !space.is_lattice() {
        return Ok(None);
    }
    let (Ok(em), Ok(hq)) = (ExactModulus::from_modulus(omega), rational(h)) else {
        return Ok(None);
    };
    let f = match (theorem, family) {
        (TheoremId::Lemma1, ExtremalFamily::FOmega { c, sign }) => ExactFunction::FOmega { c: rational(c)?, sign },
        (TheoremId::Nagy | TheoremId::NagyL1 | TheoremId::Sobolev | TheoremId::Charge, ExtremalFamily::FEh) => {
            ExactFunction::FEh
        }
        _ => return Ok(None),
    };
    let window = h.ceil() as i64 + 1;
    let r = exact_verify(theorem, space, &em, &hq, &f, window)?;
    Ok(Some((format!("lhs={} rhs1={} rhs2={} gap={}", r.lhs, r.rhs_term1, r.rhs_term2, r.gap), r.verdict)))
}

fn suite_columns() -> [&'static str; 9] {
    ["theorem_id", "d", "m", "alpha_or_modulus", "seed", "trials", "violations", "min_gap", "worst_case_spec"]
}

fn worst_case_json(r: &SuiteReport) -> Value {
    match &r.worst_case {
        None => Value::Null,
        Some(w) => json!({
            "trial": w.trial,
            "h": w.h,
            "centers": w.spec.centers.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
            "heights": w.spec.heights,
            "slope": w.spec.slope,
            "sign": w.spec.sign,
            "lhs": w.report.lhs,
            "rhs": w.report.rhs_total(),
        }),
    }
}

fn suite_row(r: &SuiteReport, space: &Space, omega: &Modulus) -> Vec<Cell> {
    let mut row = vec![Cell::Text(r.theorem.as_str().into())];
    row.extend(space_cells(space, omega));
    row.extend([
        Cell::Int(r.seed as i64),
        Cell::Int(r.trials as i64),
        Cell::Int(r.violations as i64),
        Cell::Num(r.min_gap),
        Cell::Json(worst_case_json(r)),
    ]);
    row
}

fn run_suites(jobs: &[SuiteConfig]) -> Result<Vec<SuiteReport>, CliError> {
    par_map(jobs, random_suite).into_iter().map(|r| r.map_err(CliError::from)).collect()
}

fn suite_table(jobs: &[SuiteConfig], reports: &[SuiteReport], violations: &mut Vec<String>) -> Table {
    let mut t = Table::new("suites", &suite_columns());
    for (job, r) in jobs.iter().zip(reports) {
        if r.violations > 0 {
            violations.push(format!("{} seed {}: {} violations", r.theorem, r.seed, r.violations));
        }
        t.push(suite_row(r, &job.space, &job.omega));
    }
    t
}

/// Equality checks at the extremals, plus random suites when `trials` is set.
pub fn verify(cfg: &ExperimentConfig, o: &Overrides) -> Result<Outcome, CliError> {
    let theorems = cfg.theorems()?;
    let spaces = cfg.spaces()?;
    let moduli = cfg.moduli()?;
    let radii = cfg.radii()?;
    let tol = tolerance(o, cfg)?;
    let mut cases = Vec::new();
    for &theorem in &theorems {
        for space in &spaces {
            for omega in &moduli {
                for &h in &radii {
                    cases.push((theorem, *space, omega.clone(), h));
                }
            }
        }
    }
    let results = par_map(
        &cases,
        |(theorem, space, omega, h)| -> Result<(InequalityReport, Option<(String, Verdict)>), CliError> {
            let family = cfg.extremal.as_ref().map_or(ExtremalFamily::default_for(*theorem, space), |e| e.family());
            let kernel = match &cfg.kernel {
                Some(k) => k.build()?,
                None => default_kernel(omega)?,
            };
            let mut r =
                extremal_report(*theorem, family, space, omega, *h, &kernel, &QuadratureSpec::auto(space, omega))?;
            finite(r.lhs, "lhs")?;
            if let Some(t) = tol {
                r = InequalityReport::assess(r.theorem, r.lhs, r.rhs, t);
            }
            let exact = exact_check(*theorem, family, space, omega, *h)?;
            Ok((r, exact))
        },
    );
    let lattice = spaces.iter().any(Space::is_lattice);
    let mut cols = REPORT_COLUMNS.to_vec();
    if lattice {
        cols.push("exact");
    }
    let mut table = Table::new("reports", &cols);
    let mut violations = Vec::new();
    for ((theorem, space, omega, h), res) in cases.iter().zip(results) {
        let (report, exact) = res?;
        let mut row = report_row(&report, space, omega, *h);
        let verdict = match &exact {
            Some((_, v)) => *v,
            None => report.verdict,
        };
        row[9] = Cell::Text(verdict.as_str().into());
        if lattice {
            row.push(exact.map_or(Cell::Empty, |(s, _)| Cell::Text(s)));
        }
        if verdict == Verdict::Violated {
            violations.push(format!("{theorem} d={} m={} h={h}: gap {}", space.d(), space.m(), sig12(report.gap)));
        }
        table.push(row);
    }
    let mut tables = vec![table];
    if let Some(trials) = cfg.trials {
        let mut jobs = Vec::new();
        for &theorem in &theorems {
            for space in &spaces {
                for omega in &moduli {
                    for seed in seeds(o, cfg.seeds.as_ref()) {
                        let mut c = SuiteConfig::new(theorem, *space, omega.clone(), radii.clone(), trials, seed);
                        c.kernel = cfg.kernel.as_ref().map(|k| k.build()).transpose()?;
                        c.tolerance = tol;
                        jobs.push(c);
                    }
                }
            }
        }
        let reports = run_suites(&jobs)?;
        tables.push(suite_table(&jobs, &reports, &mut violations));
    }
    Ok(Outcome { tables, violations })
}

/// Rows `(N, h, E_N)`; `E_N` must decrease strictly in `N`.
pub fn stechkin(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let spaces = cfg.spaces()?;
    let moduli = cfg.moduli()?;
    let norms = cfg.norms()?;
    let mut t = Table::new("stechkin", &["d", "m", "alpha_or_modulus", "n", "h", "e_n"]);
    let mut violations = Vec::new();
    for space in &spaces {
        for omega in &moduli {
            let curve = stechkin_curve(space, omega, &norms, &cfg.quadrature.build(space, omega)?)?;
            for p in &curve {
                let mut row: Vec<Cell> = space_cells(space, omega).into();
                row.extend([Cell::Num(p.n), Cell::Num(finite(p.h, "radius")?), Cell::Num(finite(p.e_n, "E_N")?)]);
                t.push(row);
            }
            let mut sorted: Vec<(f64, f64)> = curve.iter().map(|p| (p.n, p.e_n)).collect();
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in sorted.windows(2) {
                if w[1].0 > w[0].0 && !(w[1].1 < w[0].1) {
                    violations.push(format!(
                        "E_N not strictly decreasing between N = {} and N = {} (d={} m={})",
                        sig12(w[0].0),
                        sig12(w[1].0),
                        space.d(),
                        space.m()
                    ));
                }
            }
        }
    }
    Ok(Outcome { tables: vec![t], violations })
}

/// Random suites and Monte Carlo cross-checks.
pub fn oracle(cfg: &ExperimentConfig, o: &Overrides) -> Result<Outcome, CliError> {
    let suites = cfg.suites.clone().unwrap_or_default();
    let checks = cfg.cross_checks.clone().unwrap_or_default();
    if suites.is_empty() && checks.is_empty() {
        return Err(CliError::Config("oracle needs \"suites\" or \"cross_checks\"".into()));
    }
    let tol = tolerance(o, cfg)?;
    let mut jobs = Vec::new();
    for s in &suites {
        let theorem = parse_theorem(&s.theorem)?;
        let space = s.space.build()?;
        let omega = s.modulus.build()?;
        let trials = s.trials.or(cfg.trials).unwrap_or(1000);
        let kernel = s.kernel.as_ref().or(cfg.kernel.as_ref()).map(|k| k.build()).transpose()?;
        for seed in seeds(o, s.seeds.as_ref().or(cfg.seeds.as_ref())) {
            let mut c = SuiteConfig::new(theorem, space, omega.clone(), s.h.clone(), trials, seed);
            c.kernel = kernel.clone();
            c.tolerance = tol;
            jobs.push(c);
        }
    }
    let mut violations = Vec::new();
    let mut tables = Vec::new();
    if !jobs.is_empty() {
        let reports = run_suites(&jobs)?;
        tables.push(suite_table(&jobs, &reports, &mut violations));
    }
    if !checks.is_empty() {
        let seed = seeds(o, cfg.seeds.as_ref())[0];
        let built = checks.iter().map(|c| c.build()).collect::<Result<Vec<_>, _>>()?;
        let results = par_map(&built, |(op, n)| mc_cross_check(op, *n, seed));
        let mut t = Table::new(
            "cross_checks",
            &[
                "op",
                "samples",
                "seed",
                "deterministic",
                "deterministic_error",
                "monte_carlo",
                "std_error",
                "sigmas",
                "agrees",
            ],
        );
        for ((op, n), r) in built.iter().zip(results) {
            let r = r?;
            if !r.agrees {
                violations.push(format!("{}: {} standard errors apart", op.name(), sig12(r.sigmas)));
            }
            t.push(vec![
                Cell::Text(r.op.into()),
                Cell::Int(*n as i64),
                Cell::Int(seed as i64),
                Cell::Num(r.deterministic.value),
                Cell::Num(r.deterministic.error_bound),
                Cell::Num(r.monte_carlo.value),
                Cell::Num(r.monte_carlo.error_bound),
                Cell::Num(r.sigmas),
                Cell::Text(r.agrees.to_string()),
            ]);
        }
        tables.push(t);
    }
    Ok(Outcome { tables, violations })
}
