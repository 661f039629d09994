//! `hsle trace` — sample one driven path, reconstruct its trace in the
//! unit disk, and export the points as CSV with a manifest recording
//! the classification and hit status.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use hsle_core::diffusion::DtPolicy;
use hsle_core::loewner::{classify_geometry, drive_hsle, trace_points, HIT_MARGIN};

use super::{emit, resolve_out, ParamInput, DT_SHRINK};
use crate::manifest::{RunManifest, Scheme};
use crate::table::{Cell, ResultTable};
use crate::CliError;

/// Arguments of the `trace` subcommand.
#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Parameter set.
    #[command(flatten)]
    pub input: ParamInput,

    /// Starting angle in (0, pi).
    #[arg(long, default_value_t = 0.01)]
    pub theta0: f64,

    /// RNG seed of the driving path.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Time horizon of the driving path.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,

    /// Number of trace sample points (at most one per time step).
    #[arg(long, default_value_t = 512)]
    pub n_points: usize,

    /// Base time step of the adaptive policy.
    #[arg(long, default_value_t = 1e-3)]
    pub dt0: f64,

    /// Output CSV path; defaults to $HSLE_OUT_DIR/trace.csv, else
    /// ./trace.csv (the trace is always written to a file).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Samples the path and writes trace CSV + manifest.
pub fn run(args: &TraceArgs) -> Result<ExitCode, CliError> {
    let params = args.input.resolve()?;
    let policy = DtPolicy::new(args.dt0, DT_SHRINK)?;
    let path = drive_hsle(&params, args.theta0, args.seed, policy, args.t_max)?;
    let trace = trace_points(&path, args.n_points)?;

    let mut table = ResultTable::new(&[
        ("t", "sample time along the driving path"),
        ("re", "real part of the trace point in the closed unit disk"),
        ("im", "imaginary part of the trace point"),
        (
            "flagged",
            "1 when the slit-map composition degenerated at this point; \
             the coordinates are then untrusted (and empty if non-finite)",
        ),
    ]);
    for ((&t, point), &flagged) in trace
        .times
        .iter()
        .zip(&trace.points)
        .zip(&trace.flagged)
    {
        let (re, im) = if point.re.is_finite() && point.im.is_finite() {
            (Cell::Float(point.re), Cell::Float(point.im))
        } else {
            (Cell::Empty, Cell::Empty)
        };
        table.push(vec![Cell::Float(t), re, im, Cell::flag(flagged)]);
    }

    let pair = params.exponent_pair();
    let mut manifest = RunManifest::new("trace").with_columns(&table);
    manifest.kappa = Some(params.kappa);
    manifest.mu = Some(params.mu);
    manifest.nu = Some(params.nu);
    manifest.alpha = Some(pair.alpha);
    manifest.beta = Some(pair.beta);
    manifest.seed = Some(args.seed);
    manifest.theta0 = Some(args.theta0);
    manifest.n_points = Some(args.n_points);
    manifest.scheme = Some(Scheme {
        dt0: Some(args.dt0),
        eps_hit: Some(HIT_MARGIN),
        t_max: Some(args.t_max),
        ..Default::default()
    });
    manifest.classification = Some(classify_geometry(&params).to_string());
    manifest.hit_time = path.hit;

    let out = resolve_out(&args.out, "trace.csv").unwrap_or_else(|| PathBuf::from("trace.csv"));
    emit(&table, manifest, Some(&out))?;
    Ok(ExitCode::SUCCESS)
}
