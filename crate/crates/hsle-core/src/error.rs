//! Error type shared across the crate.

use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by evaluation, simulation, and solver routines.
///
/// Numerical routines never silently fabricate values: any argument outside
/// a routine's domain, any failure of a series or solver to converge, and
/// any numerically degenerate intermediate state is reported through this
/// type with enough context to reproduce the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// The gamma function was evaluated exactly at a nonpositive integer.
    #[error("gamma pole at z = {z}")]
    GammaPole {
        /// The pole location.
        z: Complex64,
    },

    /// A series failed to reach the target relative tolerance within the
    /// term cap.
    #[error(
        "series did not converge: {terms} terms, last relative term {last_rel:.3e} \
         (tolerance {tol:.3e})"
    )]
    NonConvergence {
        /// Number of terms summed before giving up.
        terms: usize,
        /// Relative magnitude of the last term.
        last_rel: f64,
        /// Target relative tolerance.
        tol: f64,
    },

    /// A root-finding scan failed to bracket the requested root.
    #[error("no sign change bracketing eigenvalue {index} in ({lo}, {hi})")]
    BracketFailure {
        /// Index of the eigenvalue being sought.
        index: usize,
        /// Lower end of the scanned interval.
        lo: f64,
        /// Upper end of the scanned interval.
        hi: f64,
    },

    /// Two eigenvalues in a coefficient product coincide.
    #[error("duplicate eigenvalues at indices {i} and {j}")]
    DuplicateEigenvalue {
        /// First index.
        i: usize,
        /// Second index.
        j: usize,
    },

    /// A stochastic step produced a state outside the admissible domain
    /// and refinement could not repair it.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A path sample does not contain the data a consumer requires.
    #[error("insufficient path: {0}")]
    InsufficientPath(String),
}
