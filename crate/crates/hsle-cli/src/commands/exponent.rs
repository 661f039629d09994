//! `hsle exponent` — closed-form table of the exponent family, the
//! matching decay rates, and the expansion coefficients.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Args;

use hsle_core::exponents::{coeff_a_n, eta_n, lambda_n};

use super::{emit, resolve_out, ParamInput};
use crate::manifest::{RunManifest, Scheme};
use crate::table::{Cell, ResultTable};
use crate::CliError;

/// Arguments of the `exponent` subcommand.
#[derive(Debug, Args)]
pub struct ExponentArgs {
    /// Parameter set.
    #[command(flatten)]
    pub input: ParamInput,

    /// Largest row index n; rows run n = 0 ..= trunc-n.
    #[arg(long, default_value_t = 40)]
    pub trunc_n: u32,

    /// Output CSV path (a .manifest.json is written alongside).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Builds and emits the table.
pub fn run(args: &ExponentArgs) -> Result<ExitCode, CliError> {
    let params = args.input.resolve()?;
    let pair = params.exponent_pair();
    let n_rows = args.trunc_n as usize + 1;

    // On the degenerate locus b = 0 the coefficient family does not
    // exist (the far boundary is never reached); the a_n column is
    // omitted rather than filled with fabricated values.
    let lambdas: Option<Vec<f64>> = if params.b_is_zero() {
        None
    } else {
        Some((0..n_rows).map(|n| lambda_n(&params, n as u32)).collect())
    };

    let mut columns = vec![
        ("n", "row index"),
        (
            "eta_n",
            "n-th generalized disconnection exponent, closed form in (alpha, beta)",
        ),
        (
            "lambda_n",
            "n-th decay rate of the boundary-hitting expansion, closed form in \
             (mu, nu); analytically equal to eta_n",
        ),
    ];
    if lambdas.is_some() {
        columns.push((
            "a_n",
            "expansion coefficient over the table's own truncated rate family \
             (interpolation weight at 0); the column sums to 1 exactly and \
             approximates the infinite-family coefficient for n well below \
             the truncation",
        ));
    }
    let mut table = ResultTable::new(&columns);
    for n in 0..n_rows {
        let eta = eta_n(params.kappa, pair.alpha, pair.beta, n as u32)?;
        let lambda = lambda_n(&params, n as u32);
        let mut row = vec![Cell::Int(n as i64), Cell::Float(eta), Cell::Float(lambda)];
        if let Some(lambdas) = &lambdas {
            row.push(Cell::Float(coeff_a_n(lambdas, n)?));
        }
        table.push(row);
    }

    let mut manifest = RunManifest::new("exponent").with_columns(&table);
    manifest.kappa = Some(params.kappa);
    manifest.mu = Some(params.mu);
    manifest.nu = Some(params.nu);
    manifest.alpha = Some(pair.alpha);
    manifest.beta = Some(pair.beta);
    manifest.scheme = Some(Scheme {
        trunc_n: Some(args.trunc_n as usize),
        ..Default::default()
    });

    emit(&table, manifest, resolve_out(&args.out, "exponent.csv").as_deref())?;
    Ok(ExitCode::SUCCESS)
}
