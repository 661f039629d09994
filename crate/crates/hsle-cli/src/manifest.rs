//! Run manifests: a JSON record of everything needed to reproduce an
//! output file bit for bit — command, resolved inputs, seed, stepping
//! scheme, and per-column provenance notes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::table::ResultTable;

/// Stepping / sampling configuration echoed into the manifest. Fields
/// that a command does not use are omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scheme {
    /// Base time step of the adaptive policy.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dt0: Option<f64>,
    /// Starting angle of the diffusion.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps_start: Option<f64>,
    /// Hit margin below the absorbing endpoint.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eps_hit: Option<f64>,
    /// Censoring horizon.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_max: Option<f64>,
    /// Ensemble size.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_paths: Option<usize>,
    /// Series / table truncation length.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trunc_n: Option<usize>,
}

/// Provenance note for one output column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnNote {
    /// Column name as it appears in the CSV header.
    pub name: String,
    /// What produced the values.
    pub note: String,
}

/// Manifest written next to every CSV output. Re-running the recorded
/// command with the recorded inputs reproduces the output byte for
/// byte: all randomness is a pure function of `(seed, path index)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Version of the binary that produced the output.
    pub artifact_version: String,
    /// Subcommand name.
    pub command: String,
    /// Diffusivity parameter (single-parameter-set commands).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa: Option<f64>,
    /// Diffusivity grid (the self-check battery).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub kappa_grid: Vec<f64>,
    /// Interior weight, when given or derived.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu: Option<f64>,
    /// Boundary weight, when given or derived.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<f64>,
    /// Exponent argument `alpha = 2 mu`, when applicable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<f64>,
    /// Exponent argument `beta`, when applicable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    /// Evaluation time grid (survival cross-check).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub t_grid: Vec<f64>,
    /// Conformal-radius grid, when the cross-check ran in radius mode.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub r_grid: Vec<f64>,
    /// Base RNG seed (stochastic commands).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Starting angle of a single driven path.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta0: Option<f64>,
    /// Number of requested trace sample points.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_points: Option<usize>,
    /// Stepping / sampling configuration.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scheme: Option<Scheme>,
    /// Boundary-phase classification of the parameter set.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<String>,
    /// First boundary-hitting time of the sampled path, if it hit.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hit_time: Option<f64>,
    /// Provenance note per output column.
    pub columns: Vec<ColumnNote>,
    /// Basename of the CSV file this manifest describes.
    pub output: String,
}

impl RunManifest {
    /// Skeleton manifest for `command`; callers fill the relevant
    /// optional fields.
    pub fn new(command: &str) -> Self {
        Self {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            kappa: None,
            kappa_grid: Vec::new(),
            mu: None,
            nu: None,
            alpha: None,
            beta: None,
            t_grid: Vec::new(),
            r_grid: Vec::new(),
            seed: None,
            theta0: None,
            n_points: None,
            scheme: None,
            classification: None,
            hit_time: None,
            columns: Vec::new(),
            output: String::new(),
        }
    }

    /// Copies the column provenance notes out of a table.
    pub fn with_columns(mut self, table: &ResultTable) -> Self {
        self.columns = table
            .columns()
            .iter()
            .map(|c| ColumnNote {
                name: c.name.clone(),
                note: c.note.clone(),
            })
            .collect();
        self
    }

    /// Serializes with stable key order (struct declaration order).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    /// Parses a manifest back from JSON (round-trip checked in tests;
    /// external consumers read the JSON directly).
    #[cfg(test)]
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Manifest path associated with a CSV output path: same location,
    /// `.manifest.json` appended to the file stem.
    pub fn path_for(csv_path: &Path) -> std::path::PathBuf {
        let stem = csv_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "output".to_string());
        csv_path.with_file_name(format!("{stem}.manifest.json"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips_through_json() {
        let mut m = RunManifest::new("survival");
        m.kappa = Some(4.0);
        m.mu = Some(0.0);
        m.nu = Some(1.0);
        m.alpha = Some(0.0);
        m.beta = Some(4.0);
        m.seed = Some(11);
        m.scheme = Some(Scheme {
            dt0: Some(1e-3),
            eps_start: Some(1e-3),
            eps_hit: Some(1e-3),
            t_max: Some(20.0),
            n_paths: Some(10_000),
            trunc_n: Some(60),
        });
        m.columns = vec![ColumnNote {
            name: "t".into(),
            note: "input grid".into(),
        }];
        m.output = "survival.csv".into();
        let text = m.to_json();
        let back = RunManifest::from_json(&text).unwrap();
        assert_eq!(back, m);
        // Key order is declaration order, so the serialization itself
        // is stable too.
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn manifest_path_sits_next_to_the_csv() {
        let p = RunManifest::path_for(Path::new("/tmp/out/trace.csv"));
        assert_eq!(p, Path::new("/tmp/out/trace.manifest.json"));
    }
}
