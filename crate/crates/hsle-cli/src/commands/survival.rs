//! `hsle survival` — truncated spectral survival series against a
//! Monte Carlo estimate of the boundary-hitting tail, with confidence
//! intervals and z-scores per grid point.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use hsle_core::diffusion::{
    empirical_survival, sample_hitting_times, AngularDrift, DtPolicy, SimConfig,
};
use hsle_core::exponents::SpectralExpansion;

use super::{emit, resolve_out, ParamInput, DT_SHRINK};
use crate::manifest::{RunManifest, Scheme};
use crate::table::{Cell, ResultTable};
use crate::CliError;

/// Arguments of the `survival` subcommand.
#[derive(Debug, Args)]
pub struct SurvivalArgs {
    /// Parameter set.
    #[command(flatten)]
    pub input: ParamInput,

    /// Comma-separated evaluation times.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0, 2.0, 4.0])]
    pub t_grid: Vec<f64>,

    /// Comma-separated conformal radii R >= 1; evaluates the tail as a
    /// disconnection probability at t = ln R (excludes --t-grid).
    #[arg(long, value_delimiter = ',', conflicts_with = "t_grid")]
    pub r_grid: Option<Vec<f64>>,

    /// Number of Monte Carlo paths.
    #[arg(long, default_value_t = 10_000)]
    pub n_paths: usize,

    /// Base RNG seed; path i uses stream i.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Base time step of the adaptive policy.
    #[arg(long, default_value_t = 1e-3)]
    pub dt0: f64,

    /// Starting angle.
    #[arg(long, default_value_t = 1e-3)]
    pub eps_start: f64,

    /// Hit margin below the absorbing endpoint.
    #[arg(long, default_value_t = 1e-3)]
    pub eps_hit: f64,

    /// Censoring horizon; every grid time must not exceed it.
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,

    /// Series truncation length.
    #[arg(long, default_value_t = 60)]
    pub trunc_n: usize,

    /// Output CSV path (a .manifest.json is written alongside).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs the cross-check and emits the table.
// The `!(r >= 1.0)` guard rejects NaN radii on purpose.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn run(args: &SurvivalArgs) -> Result<ExitCode, CliError> {
    let params = args.input.resolve()?;

    let (radii, times): (Option<&Vec<f64>>, Vec<f64>) = match &args.r_grid {
        Some(radii) => {
            for &r in radii {
                if !(r >= 1.0) {
                    return Err(CliError::Input(format!(
                        "radii must be at least 1, got {r}"
                    )));
                }
            }
            (Some(radii), radii.iter().map(|r| r.ln()).collect())
        }
        None => (None, args.t_grid.clone()),
    };
    if times.is_empty() {
        return Err(CliError::Input("the evaluation grid is empty".into()));
    }

    let expansion = SpectralExpansion::new(&params, args.trunc_n)?;
    let config = SimConfig {
        n_paths: args.n_paths,
        t_max: args.t_max,
        eps_start: args.eps_start,
        eps_hit: args.eps_hit,
        dt_policy: DtPolicy::new(args.dt0, DT_SHRINK)?,
        seed: args.seed,
    };
    let drift = AngularDrift::new(params)?;
    let sample = sample_hitting_times(&drift, &config)?;
    let n = args.n_paths as f64;

    let mut columns: Vec<(&str, &str)> = Vec::new();
    if radii.is_some() {
        columns.push(("r", "input conformal-radius grid"));
        columns.push(("t", "ln r: time at which the tail is evaluated"));
    } else {
        columns.push(("t", "input time grid"));
    }
    columns.extend_from_slice(&[
        (
            "analytic",
            "truncated spectral series for the survival probability",
        ),
        (
            "series_ok",
            "1 when the last retained series term is negligible",
        ),
        ("empirical", "Monte Carlo survivor fraction"),
        (
            "ci99_half",
            "two-sided 99% normal confidence half-width of the empirical column",
        ),
        (
            "z_abs",
            "|empirical - analytic| in estimated standard-error units",
        ),
        (
            "z_ok",
            "1 when the standard error is positive so z_abs is defined",
        ),
    ]);
    let mut table = ResultTable::new(&columns);

    for (i, &t) in times.iter().enumerate() {
        let series = expansion.survival(t)?;
        let (p, half) = empirical_survival(&sample, t)?;
        let se = (p * (1.0 - p) / n).sqrt();
        let mut row = Vec::new();
        if let Some(radii) = radii {
            row.push(Cell::Float(radii[i]));
        }
        row.push(Cell::Float(t));
        row.push(Cell::Float(series.value));
        row.push(Cell::flag(series.truncation_ok));
        row.push(Cell::Float(p));
        row.push(Cell::Float(half));
        if se > 0.0 {
            row.push(Cell::Float((p - series.value).abs() / se));
            row.push(Cell::flag(true));
        } else {
            row.push(Cell::Empty);
            row.push(Cell::flag(false));
        }
        table.push(row);
    }

    let pair = params.exponent_pair();
    let mut manifest = RunManifest::new("survival").with_columns(&table);
    manifest.kappa = Some(params.kappa);
    manifest.mu = Some(params.mu);
    manifest.nu = Some(params.nu);
    manifest.alpha = Some(pair.alpha);
    manifest.beta = Some(pair.beta);
    manifest.t_grid = if radii.is_some() { Vec::new() } else { times.clone() };
    manifest.r_grid = radii.cloned().unwrap_or_default();
    manifest.seed = Some(args.seed);
    manifest.scheme = Some(Scheme {
        dt0: Some(args.dt0),
        eps_start: Some(args.eps_start),
        eps_hit: Some(args.eps_hit),
        t_max: Some(args.t_max),
        n_paths: Some(args.n_paths),
        trunc_n: Some(args.trunc_n),
    });

    emit(&table, manifest, resolve_out(&args.out, "survival.csv").as_deref())?;
    Ok(ExitCode::SUCCESS)
}
