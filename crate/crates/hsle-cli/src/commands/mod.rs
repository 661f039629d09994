//! The four subcommands plus the input/output plumbing they share.

pub mod exponent;
pub mod survival;
pub mod trace;
pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use hsle_core::params::{mu_nu_from_exponents, Params};

use crate::manifest::RunManifest;
use crate::table::ResultTable;
use crate::CliError;

/// Endpoint shrink factor of the adaptive step policy; matches the
/// library's default policy.
pub const DT_SHRINK: f64 = 0.1;

/// Parameter-set selection shared by the single-parameter-set
/// commands: either the weight pair (`--mu`, `--nu`) or the exponent
/// pair (`--alpha`, `--beta`), never both.
#[derive(Debug, Args)]
pub struct ParamInput {
    /// Diffusivity parameter, in (0, 4].
    #[arg(long)]
    pub kappa: f64,

    /// Interior weight (paired with --nu; excludes --alpha/--beta).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,

    /// Boundary weight, >= 0 (paired with --mu).
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,

    /// First exponent argument, alpha = 2 mu (paired with --beta;
    /// excludes --mu/--nu).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Second exponent argument (paired with --alpha).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
}

impl ParamInput {
    /// Resolves the flags to a validated parameter set.
    pub fn resolve(&self) -> Result<Params, CliError> {
        match (self.mu, self.nu, self.alpha, self.beta) {
            (Some(mu), Some(nu), None, None) => Ok(Params::new(self.kappa, mu, nu)?),
            (None, None, Some(alpha), Some(beta)) => {
                let (mu, nu) = mu_nu_from_exponents(self.kappa, alpha, beta)?;
                Ok(Params::new(self.kappa, mu, nu)?)
            }
            (None, None, None, None) => Err(CliError::Input(
                "missing parameter set: give either --mu and --nu, or --alpha and --beta".into(),
            )),
            _ => Err(CliError::Input(
                "the weight pair (--mu, --nu) and the exponent pair (--alpha, --beta) \
                 are mutually exclusive, and each pair must be given complete"
                    .into(),
            )),
        }
    }
}

/// Resolves the output path for a table: an explicit `--out` wins,
/// otherwise `$HSLE_OUT_DIR/<default_name>` when the variable is set,
/// otherwise `None` (stream the CSV to stdout).
pub fn resolve_out(out: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    if let Some(path) = out {
        return Some(path.clone());
    }
    std::env::var_os("HSLE_OUT_DIR").map(|dir| PathBuf::from(dir).join(default_name))
}

/// Writes the table and its manifest to `out`, or the CSV to stdout
/// when no path was resolved.
pub fn emit(
    table: &ResultTable,
    mut manifest: RunManifest,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            manifest.output = path
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
                }
            }
            fs::write(path, table.to_csv_string()).map_err(|e| CliError::io(path, e))?;
            let manifest_path = RunManifest::path_for(path);
            fs::write(&manifest_path, manifest.to_json())
                .map_err(|e| CliError::io(&manifest_path, e))?;
            eprintln!(
                "wrote {} ({} rows) and {}",
                path.display(),
                table.n_rows(),
                manifest_path.display()
            );
        }
        None => print!("{}", table.to_csv_string()),
    }
    Ok(())
}
