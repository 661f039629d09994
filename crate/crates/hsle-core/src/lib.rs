//! Numerical core for radial hypergeometric SLE: special functions, the
//! angular weight function G, spectral expansions of boundary hitting
//! times, and the associated one-parameter families of exponents.
//!
//! The crate is organised bottom-up:
//!
//! - [`special_fn`]: complex gamma and Gauss hypergeometric evaluation with
//!   explicit error signalling (poles, non-convergence) and first/second
//!   derivatives via parameter-shift identities.
//! - [`params`]: the `(kappa, mu, nu)` parameter triple, its derived
//!   hypergeometric parameters, and conversions to and from the exponent
//!   pair `(alpha, beta)`.
//! - [`gfunc`]: evaluation of the angular weight `G(theta)` on `(0, pi)`,
//!   its logarithmic derivative, endpoint constants and asymptotics, and
//!   the eigenvalue ratio function `f_lambda`.
//! - [`exponents`]: closed-form exponent families, eigenvalue tables,
//!   series coefficients and survival/disconnection series, and a
//!   root-finding eigenvalue solver cross-checking the closed forms.
//! - [`diffusion`]: Euler-Maruyama simulation of the angular diffusion,
//!   boundary hitting-time sampling, and empirical survival estimates.
//! - [`loewner`]: the driving-function pair `(W, V)`, the degenerate
//!   single-force comparison driver, trace reconstruction through inverse
//!   slit maps, and geometry/construction-case classification.

// Frozen reference values are kept at the full precision of the
// generator that produced them, and domain guards use the
// `!(x >= lo)` form on purpose so that NaN is rejected rather than
// silently accepted.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod error;
pub mod exponents;
pub mod gfunc;
pub mod loewner;
pub mod params;
pub mod special_fn;

pub use error::{Error, Result};

/// Convenience re-exports of the most commonly used items.
pub mod prelude {
    pub use crate::diffusion::{
        empirical_survival, sample_hitting_times, simulate_log_x, simulate_theta, DiffusionPath,
        DtPolicy, HittingSample,
    };
    pub use crate::error::{Error, Result};
    pub use crate::exponents::{
        coeff_a_n, disconnection_series, eigen_solve, eta, eta_n, eta_of_c, lambda_n,
        survival_series, xi_half_plane, xi_whole_plane, SpectralExpansion,
    };
    pub use crate::gfunc::GEvaluator;
    pub use crate::loewner::{
        classify_construction, classify_geometry, drive_hsle, drive_hsle_with,
        drive_sle_kappa_rho, martingale_coefficient_identities, trace_points, ConstructionCase,
        DrivePath, GeometryPhase, TracePoints,
    };
    pub use crate::params::{
        central_charge, chordal_alpha, exponents_from_mu_nu, mu_nu_from_exponents, v_kappa,
        v_kappa_inv, ExponentPair, Params,
    };
    pub use crate::special_fn::{gamma, hyp2f1, hyp2f1_deriv, recip_gamma, Hyp2F1Request};
}
