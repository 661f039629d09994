//! `hsle verify` — numerical self-check battery. Every check compares
//! two independent computation routes (or a residual against zero) and
//! reports a pass/fail row; nothing here throws on a failed check.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use hsle_core::exponents::{eigen_solve, eta, eta_n, eta_of_c, lambda_n};
use hsle_core::gfunc::GEvaluator;
use hsle_core::loewner::martingale_coefficient_identities;
use hsle_core::params::{central_charge, Params};
use hsle_core::Error as CoreError;

use super::{emit, resolve_out};
use crate::manifest::RunManifest;
use crate::table::{Cell, ResultTable};
use crate::CliError;

/// Arguments of the `verify` subcommand.
#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated diffusivity grid to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.0, 8.0 / 3.0, 3.0, 3.5, 4.0])]
    pub kappa: Vec<f64>,

    /// Output CSV path (a .manifest.json is written alongside).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Shipped tolerance of the weight-coefficient identity check.
const IDENTITY_TOL: f64 = 1e-12;
/// Shipped tolerance of the angular-weight ODE residual check.
const ODE_TOL: f64 = 1e-6;
/// Shipped tolerance of the endpoint-constant antisymmetry check
/// (relative to the larger constant).
const CONSTANT_TOL: f64 = 1e-10;
/// Shipped tolerance of the eigenvalue-vs-closed-form check.
const EIGEN_TOL: f64 = 1e-6;
/// Shipped tolerance of the two-route rate agreement check.
const TWO_FORM_TOL: f64 = 1e-10;

/// What a single check produced.
enum Outcome {
    /// A residual to compare against the check's tolerance.
    Residual(f64),
    /// The check does not apply to this parameter set.
    Skip(String),
}

/// One report row.
struct Row {
    kappa: f64,
    mu: Option<f64>,
    nu: Option<f64>,
    check: &'static str,
    outcome: Result<Outcome, CoreError>,
    tol: f64,
}

/// Maximum absolute angular-weight ODE residual over an interior grid
/// spanning both closed-form regions and the continuation region.
fn ode_residual_check(params: &Params) -> Result<Outcome, CoreError> {
    let ev = GEvaluator::new(*params)?;
    let n = 60;
    let lo = 0.02;
    let hi = std::f64::consts::PI - 0.02;
    let mut max = 0.0f64;
    for i in 0..=n {
        let theta = lo + (hi - lo) * i as f64 / n as f64;
        max = max.max(ev.ode_residual(theta)?.abs());
    }
    Ok(Outcome::Residual(max))
}

/// Antisymmetry of the two endpoint-constant groupings. The residual
/// is relative to the larger constant with an absolute floor of 1: on
/// the degenerate locus both groupings vanish linearly, and rounding
/// can zero one side exactly while leaving the other at ~1e-17, so a
/// purely relative measure would report 1 for two values that agree to
/// full absolute precision.
fn endpoint_constant_check(params: &Params) -> Result<Outcome, CoreError> {
    let ev = GEvaluator::new(*params)?;
    let c = ev.c2_constant();
    if c.pole {
        return Ok(Outcome::Skip("constants sit on a pole (q2 = 0)".into()));
    }
    let scale = c.c1.abs().max(c.c2.abs()).max(1.0);
    Ok(Outcome::Residual((c.c1 + c.c2).abs() / scale))
}

/// Root-found decay rates against the closed form, indices 0..=3.
fn eigen_rate_check(params: &Params) -> Result<Outcome, CoreError> {
    if params.b_is_zero() {
        return Ok(Outcome::Skip(
            "degenerate parameter set (b = 0): no expansion family".into(),
        ));
    }
    let found = eigen_solve(params, 4)?;
    let mut max = 0.0f64;
    for (n, lam) in found.iter().enumerate() {
        max = max.max((lam - lambda_n(params, n as u32)).abs());
    }
    Ok(Outcome::Residual(max))
}

/// Agreement of the decay rates computed in the weight form with the
/// exponent family computed in the (alpha, beta) form, plus the
/// central-charge reparametrization of the leading exponent.
fn two_form_check(params: &Params) -> Result<Outcome, CoreError> {
    let pair = params.exponent_pair();
    let mut max = 0.0f64;
    for n in 0..=5u32 {
        let via_pair = eta_n(params.kappa, pair.alpha, pair.beta, n)?;
        max = max.max((via_pair - lambda_n(params, n)).abs());
    }
    let c = central_charge(params.kappa)?;
    max = max.max((eta_of_c(c, pair.beta)? - eta(params.kappa, pair.beta)?).abs());
    Ok(Outcome::Residual(max))
}

/// The three weight-coefficient identities for one diffusivity.
fn identity_check(kappa: f64) -> Result<Outcome, CoreError> {
    let residuals = martingale_coefficient_identities(kappa)?;
    Ok(Outcome::Residual(
        residuals.iter().fold(0.0f64, |m, r| m.max(r.abs())),
    ))
}

/// The three parameter sets exercised per diffusivity: two generic
/// interior sets and one exactly on the degenerate locus b = 0.
fn battery_sets(kappa: f64) -> Result<Vec<Params>, CoreError> {
    let mu_a = 0.4 * Params::mu_upper_bound(kappa, 0.2)?;
    let mu_d = Params::mu_upper_bound(kappa, 0.3)?;
    Ok(vec![
        Params::new(kappa, mu_a, 0.2)?,
        Params::new(kappa, -0.5, 1.0)?,
        Params::new(kappa, mu_d, 0.3)?,
    ])
}

/// Runs the battery and emits the report.
pub fn run(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    if args.kappa.is_empty() {
        return Err(CliError::Input("the diffusivity grid is empty".into()));
    }
    let mut rows: Vec<Row> = Vec::new();

    for &kappa in &args.kappa {
        rows.push(Row {
            kappa,
            mu: None,
            nu: None,
            check: "weight-identities",
            outcome: identity_check(kappa),
            tol: IDENTITY_TOL,
        });
        let sets = match battery_sets(kappa) {
            Ok(sets) => sets,
            Err(e) => {
                // An unusable diffusivity is reported as a failing row,
                // not an error: the battery itself must never throw.
                rows.push(Row {
                    kappa,
                    mu: None,
                    nu: None,
                    check: "parameter-domain",
                    outcome: Err(e),
                    tol: 0.0,
                });
                continue;
            }
        };
        for params in sets {
            let checks: [(&'static str, Result<Outcome, CoreError>, f64); 4] = [
                ("ode-residual", ode_residual_check(&params), ODE_TOL),
                (
                    "endpoint-constants",
                    endpoint_constant_check(&params),
                    CONSTANT_TOL,
                ),
                ("eigen-rates", eigen_rate_check(&params), EIGEN_TOL),
                ("rate-two-forms", two_form_check(&params), TWO_FORM_TOL),
            ];
            for (check, outcome, tol) in checks {
                rows.push(Row {
                    kappa,
                    mu: Some(params.mu),
                    nu: Some(params.nu),
                    check,
                    outcome,
                    tol,
                });
            }
        }
    }

    let mut table = ResultTable::new(&[
        ("kappa", "diffusivity under test"),
        ("mu", "interior weight of the parameter set (empty: not set-specific)"),
        ("nu", "boundary weight of the parameter set (empty: not set-specific)"),
        ("check", "stable identifier of the self-check"),
        ("residual", "measured residual (empty on skipped or errored rows)"),
        ("tol", "shipped tolerance the residual is held to"),
        ("status", "pass, fail, or skip"),
        ("note", "skip reason or error text"),
    ]);

    let (mut n_pass, mut n_fail, mut n_skip) = (0usize, 0usize, 0usize);
    for row in &rows {
        let (residual, status, note) = match &row.outcome {
            Ok(Outcome::Residual(r)) => {
                if *r <= row.tol {
                    n_pass += 1;
                    (Cell::Float(*r), "pass", String::new())
                } else {
                    n_fail += 1;
                    (Cell::Float(*r), "fail", String::new())
                }
            }
            Ok(Outcome::Skip(reason)) => {
                n_skip += 1;
                (Cell::Empty, "skip", reason.clone())
            }
            Err(e) => {
                n_fail += 1;
                (Cell::Empty, "fail", e.to_string())
            }
        };
        println!(
            "{status:4} kappa={} check={}{}{}",
            row.kappa,
            row.check,
            match &residual {
                Cell::Float(r) => format!(" residual={r:.3e} tol={:.0e}", row.tol),
                _ => String::new(),
            },
            if note.is_empty() {
                String::new()
            } else {
                format!(" ({note})")
            }
        );
        table.push(vec![
            Cell::Float(row.kappa),
            row.mu.map_or(Cell::Empty, Cell::Float),
            row.nu.map_or(Cell::Empty, Cell::Float),
            Cell::Text(row.check.to_string()),
            residual,
            Cell::Float(row.tol),
            Cell::Text(status.to_string()),
            Cell::Text(note),
        ]);
    }
    println!("self-check: {n_pass} pass, {n_skip} skip, {n_fail} fail");

    let mut manifest = RunManifest::new("verify").with_columns(&table);
    manifest.kappa_grid = args.kappa.clone();

    // Only write files when a destination was requested: the stdout
    // report above is the primary output of this command.
    if let Some(path) = resolve_out(&args.out, "verify.csv") {
        emit(&table, manifest, Some(&path))?;
    }

    Ok(if n_fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
