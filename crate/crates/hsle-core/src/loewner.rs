//! Radial Loewner evolution: coupled driving pairs `(W, V)` for the
//! weighted and single-force processes, trace extraction through exact
//! incremental slit maps, and closed-form classification of the
//! boundary-phase and parameter-range cases.
//!
//! Conventions. The evolution lives in the closed unit disk, starts at
//! the boundary point `1`, and targets the origin; time is the
//! conformal-radius parametrization, so the disk-to-slit-domain map at
//! time `t` has derivative `exp(-t)` at the origin. The driver angle is
//! `W`, the marked boundary point sits at `exp(i V)`, and the half-gap
//! `theta = (W - V)/2` is the angle process of [`crate::diffusion`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diffusion::{self, AngularDrift, DtPolicy};
use crate::error::{Error, Result};
use crate::exponents::eta;
use crate::params::{central_charge, ExponentPair, Params};

/// Angle margin below `pi` at which a driving pair stops: the driver is
/// then within the margin of colliding with the marked point. Equal to
/// the default hitting margin of the angle sampler so that driver paths
/// and plain angle paths stop at the same step.
pub const HIT_MARGIN: f64 = 1e-3;

/// Tolerance with which equalities between exponents are resolved when
/// classifying parameter ranges.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Relative size under which the imaginary part of the slit-map
/// argument is treated as rounding noise on the boundary cut.
const CUT_IM_TOL: f64 = 1e-12;

/// Squared distance to the pole of the elementary slit map below which
/// an evaluation is reported as blown up.
const BLOWUP_NORM_SQR: f64 = 1e-16;

/// Deviation of `|zeta|^2` from `1` under which a slit-map argument is
/// treated as a boundary point and mapped by the exact boundary
/// correspondence.
const BOUNDARY_TOL: f64 = 1e-9;

/// Modulus overshoot tolerated before a trace point is flagged.
const DISK_TOL: f64 = 1e-6;

/// A discretized driving pair together with the derived angle path.
///
/// `times`, `w`, `v`, and `thetas` all have length `n + 1` where `n` is
/// the number of steps taken; `dts` has length `n` and `dts[j]` is the
/// exact step from `times[j]` to `times[j + 1]` as used by the Euler
/// updates. At every grid point `w[k] = v[k] + 2 * thetas[k]` by
/// construction, so `theta` is recovered from `(w - v)/2` exactly.
#[derive(Debug, Clone, Serialize)]
pub struct DrivePath {
    /// Step times, starting at `0`.
    pub times: Vec<f64>,
    /// Driver angle, `w[0] = 0`.
    pub w: Vec<f64>,
    /// Marked-point angle, `v[0] = -2 theta0`.
    pub v: Vec<f64>,
    /// Half-gap angle `(w - v)/2`.
    pub thetas: Vec<f64>,
    /// Step sizes actually used, `dts[j] = times[j+1] - times[j]`.
    pub dts: Vec<f64>,
    /// First time `theta >= pi - HIT_MARGIN`, if reached before `t_max`.
    pub hit: Option<f64>,
    /// Diffusivity of the driving noise.
    pub kappa: f64,
}

/// Trace points extracted from a driving pair, with per-point validity
/// flags. A `true` flag marks a point whose backward composition passed
/// within the blow-up guard of a slit-map pole, left the closed disk by
/// more than the tolerance, or produced a non-finite value; the
/// computed value is still reported, never replaced by a fabricated one.
#[derive(Debug, Clone, Serialize)]
pub struct TracePoints {
    /// Times of the selected steps.
    pub times: Vec<f64>,
    /// Trace point at each selected time.
    pub points: Vec<Complex64>,
    /// Per-point blow-up flag (`true` = unreliable).
    pub flagged: Vec<bool>,
}

/// Boundary-phase classes of the weighted process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeometryPhase {
    /// Degenerate locus `b = 0`: the curve never reaches the marked
    /// point in finite time.
    #[serde(rename = "case_i")]
    CaseI,
    /// `b != 0` and `nu >= 1/2 - kappa/16`: the curve terminates at the
    /// marked point.
    #[serde(rename = "case_ii")]
    CaseII,
    /// `b != 0` and `nu < 1/2 - kappa/16`: the curve terminates on the
    /// counterclockwise boundary arc or on itself.
    #[serde(rename = "case_iii")]
    CaseIII,
}

impl fmt::Display for GeometryPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryPhase::CaseI => "case_i",
            GeometryPhase::CaseII => "case_ii",
            GeometryPhase::CaseIII => "case_iii",
        })
    }
}

/// Parameter-range cases of the two-stage boundary construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionCase {
    /// `alpha = eta_kappa(beta)` at the minimal boundary exponent.
    #[serde(rename = "ia")]
    Ia,
    /// `alpha = eta_kappa(beta)` above the minimal boundary exponent.
    #[serde(rename = "ib")]
    Ib,
    /// `alpha < eta_kappa(beta)` with `beta` at or above the upper
    /// threshold `(12 - kappa)(kappa + 4)/(16 kappa)`.
    #[serde(rename = "ii")]
    Ii,
    /// `alpha < eta_kappa(beta)` at the minimal boundary exponent.
    #[serde(rename = "iiia")]
    Iiia,
    /// `alpha < eta_kappa(beta)` with `beta` strictly between the two
    /// thresholds.
    #[serde(rename = "iiib")]
    Iiib,
}

impl fmt::Display for ConstructionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionCase::Ia => "ia",
            ConstructionCase::Ib => "ib",
            ConstructionCase::Ii => "ii",
            ConstructionCase::Iiia => "iiia",
            ConstructionCase::Iiib => "iiib",
        })
    }
}

/// Shared Euler stepper for both driver families.
///
/// Advances `theta` with [`diffusion::step_with`] (so the same noise
/// stream reproduces the plain angle sampler bit for bit), updates the
/// marked point with the explicit rule `v += -cot(theta_pre) * dt`, and
/// reconstructs the driver as `w = v + 2 theta`, which makes the driver
/// increment `sqrt(kappa) dB + (2 drift(theta) - cot(theta)) dt` without
/// a second discretization.
fn drive_with(
    drift_at: impl Fn(f64) -> f64,
    kappa: f64,
    theta0: f64,
    seed: u64,
    dt_policy: DtPolicy,
    t_max: f64,
) -> Result<DrivePath> {
    if !(theta0 > 0.0 && theta0 < PI) {
        return Err(Error::OutOfRange(format!(
            "theta0 must lie in (0, pi), got {theta0}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    let mut rng = diffusion::path_rng(seed, 0);
    let barrier = PI - HIT_MARGIN;
    let mut t = 0.0;
    let mut theta = theta0;
    let mut v = -2.0 * theta0;
    let mut times = vec![0.0];
    let mut w_path = vec![v + 2.0 * theta];
    let mut v_path = vec![v];
    let mut thetas = vec![theta];
    let mut dts = Vec::new();
    let mut hit = None;
    while t < t_max {
        let cot = theta.cos() / theta.sin();
        let (dt, theta_new) =
            diffusion::step_with(&drift_at, kappa, &dt_policy, &mut rng, theta, t_max - t)?;
        v -= cot * dt;
        theta = theta_new;
        t += dt;
        times.push(t);
        w_path.push(v + 2.0 * theta);
        v_path.push(v);
        thetas.push(theta);
        dts.push(dt);
        if theta >= barrier {
            hit = Some(t);
            break;
        }
    }
    Ok(DrivePath {
        times,
        w: w_path,
        v: v_path,
        thetas,
        dts,
        hit,
        kappa,
    })
}

/// Simulates the driving pair of the weighted process from a
/// pre-built drift field (reusing its interior table across runs).
///
/// The angle component is stepped by exactly the same code and noise
/// stream as [`diffusion::simulate_theta`] with `eps_start = theta0`,
/// `eps_hit = HIT_MARGIN` and path index `0`, so the two agree bit for
/// bit; the pair stops at `t_max` or when `theta >= pi - HIT_MARGIN`.
pub fn drive_hsle_with(
    drift: &AngularDrift,
    theta0: f64,
    seed: u64,
    dt_policy: DtPolicy,
    t_max: f64,
) -> Result<DrivePath> {
    drive_with(
        |th| drift.drift(th),
        drift.params().kappa,
        theta0,
        seed,
        dt_policy,
        t_max,
    )
}

/// Simulates the driving pair of the weighted process.
///
/// Builds the drift field for `params` and delegates to
/// [`drive_hsle_with`]; use that entry point directly to amortize the
/// drift table across many runs.
pub fn drive_hsle(
    params: &Params,
    theta0: f64,
    seed: u64,
    dt_policy: DtPolicy,
    t_max: f64,
) -> Result<DrivePath> {
    let drift = AngularDrift::new(*params)?;
    drive_hsle_with(&drift, theta0, seed, dt_policy, t_max)
}

/// Simulates the driving pair of the single-force process with force
/// `rho`: the driver drift is `(rho/2) cot(theta)`, equivalently the
/// angle drift is `((rho + 2)/4) cot(theta)`.
///
/// On the degenerate locus the weighted process coincides with this one
/// at `rho = 2 kappa d`, and a shared seed reproduces the same path up
/// to rounding.
pub fn drive_sle_kappa_rho(
    kappa: f64,
    rho: f64,
    theta0: f64,
    seed: u64,
    dt_policy: DtPolicy,
    t_max: f64,
) -> Result<DrivePath> {
    if !(kappa > 0.0 && kappa <= 4.0) {
        return Err(Error::OutOfRange(format!(
            "kappa must lie in (0, 4], got {kappa}"
        )));
    }
    if !rho.is_finite() {
        return Err(Error::OutOfRange(format!("rho must be finite, got {rho}")));
    }
    drive_with(
        |th| (rho + 2.0) / 4.0 * (th.cos() / th.sin()),
        kappa,
        theta0,
        seed,
        dt_policy,
        t_max,
    )
}

/// Inverse of the elementary radial slit map over one step of size
/// `dt`: the conformal map of the unit disk onto the disk minus a
/// radial slit growing from the boundary point `1`, fixing the origin
/// with derivative exactly `exp(-dt)` there.
///
/// Derivation: with a constant driver the Loewner flow conserves
/// `g/(1+g)^2` up to the factor `exp(t)`, so the inverse image `phi` of
/// `zeta` solves `phi/(1+phi)^2 = u` with `u = exp(-dt) zeta/(1+zeta)^2`.
/// The in-disk root is written in the cancellation-free form
/// `2u / (1 - 2u + sqrt(1 - 4u))`.
fn slit_inverse(zeta: Complex64, dt: f64) -> Complex64 {
    // Boundary branch: points on the unit circle must stay exactly on
    // it (when not swallowed by the slit) or land exactly on the slit
    // (when swallowed). Going through the complex formula instead would
    // put `u` on the branch cut with rounding noise deciding the side,
    // reflecting boundary points across the slit base at random.
    if (zeta.norm_sqr() - 1.0).abs() <= BOUNDARY_TOL {
        let psi = zeta.arg();
        let half_cos = (0.5 * psi).cos();
        let u = (-dt).exp() / (4.0 * half_cos * half_cos);
        return if u > 0.25 {
            // Not swallowed: exact angle map of the boundary arc, on
            // the side given by the sign of the input angle.
            let psi_new = psi.signum() * 2.0 * (1.0 / (2.0 * u.sqrt())).clamp(-1.0, 1.0).acos();
            Complex64::from_polar(1.0, psi_new)
        } else {
            // Swallowed: the arc folds onto the radial slit.
            let s = (1.0 - 4.0 * u).max(0.0).sqrt();
            Complex64::new(2.0 * u / (1.0 - 2.0 * u + s), 0.0)
        };
    }
    let one = Complex64::new(1.0, 0.0);
    let one_plus = one + zeta;
    let pole = one_plus * one_plus;
    if pole.norm_sqr() < 1e-280 {
        // The prime end antipodal to the slit base is fixed.
        return Complex64::new(-1.0, 0.0);
    }
    let u = zeta / pole * (-dt).exp();
    let s = if u.im.abs() <= CUT_IM_TOL * u.re.abs().max(0.25) && u.re > 0.25 {
        // Residual cut safety net for interior points rounding onto the
        // cut: choose the branch from the angular position of the input.
        let mag = (4.0 * u.re - 1.0).max(0.0).sqrt();
        Complex64::new(0.0, -zeta.arg().signum() * mag)
    } else {
        (one - 4.0 * u).sqrt()
    };
    2.0 * u / (one - 2.0 * u + s)
}

/// Pulls a point back through the first `k` steps of the driving pair:
/// evaluates the backward composition of the inverse slit maps of steps
/// `k, k-1, ..., 1`, each conjugated by the rotation to its driver
/// angle. Returns the image and an `ok` flag which turns `false` when
/// the composition passes within the blow-up guard of a slit-map pole,
/// produces a non-finite value, or leaves the closed disk.
fn pull_back(dp: &DrivePath, k: usize, z: Complex64) -> (Complex64, bool) {
    let mut z = z;
    let mut ok = true;
    for j in (1..=k).rev() {
        let rot = Complex64::from_polar(1.0, dp.w[j - 1]);
        let zeta = z * rot.conj();
        let one_plus = Complex64::new(1.0 + zeta.re, zeta.im);
        if one_plus.norm_sqr() < BLOWUP_NORM_SQR {
            ok = false;
        }
        z = rot * slit_inverse(zeta, dp.dts[j - 1]);
    }
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + DISK_TOL {
        ok = false;
    }
    (z, ok)
}

/// Extracts up to `n_points` trace points from a driving pair.
///
/// Step indices are chosen evenly (always including the first and last
/// step); the point at step `k` is the backward slit-map composition
/// evaluated at the driver position `exp(i w[k])`, so the first point
/// is exactly `1`. Points whose composition degrades are flagged, not
/// fabricated. The composed map fixes the origin with derivative
/// `exp(-times[k])` there, preserving the conformal-radius
/// parametrization exactly in the discretization.
pub fn trace_points(dp: &DrivePath, n_points: usize) -> Result<TracePoints> {
    let m = dp.times.len();
    if m == 0 || dp.w.len() != m || dp.dts.len() + 1 != m {
        return Err(Error::InsufficientPath(format!(
            "driving pair has inconsistent lengths: {} times, {} drivers, {} steps",
            m,
            dp.w.len(),
            dp.dts.len()
        )));
    }
    if n_points == 0 {
        return Err(Error::OutOfRange("n_points must be positive".into()));
    }
    let n = n_points.min(m);
    let mut indices: Vec<usize> = if n == 1 {
        vec![0]
    } else {
        (0..n)
            .map(|i| (i * (m - 1) + (n - 1) / 2) / (n - 1))
            .collect()
    };
    indices.dedup();
    let mut times = Vec::with_capacity(indices.len());
    let mut points = Vec::with_capacity(indices.len());
    let mut flagged = Vec::with_capacity(indices.len());
    for &k in &indices {
        let start = Complex64::from_polar(1.0, dp.w[k]);
        let (z, ok) = pull_back(dp, k, start);
        times.push(dp.times[k]);
        points.push(z);
        flagged.push(!ok);
    }
    Ok(TracePoints {
        times,
        points,
        flagged,
    })
}

/// Classifies the boundary phase of a parameter triple: the degenerate
/// locus, the marked-point-terminating phase
/// (`nu >= 1/2 - kappa/16`), or the arc-terminating phase.
pub fn classify_geometry(params: &Params) -> GeometryPhase {
    if params.b_is_zero() {
        GeometryPhase::CaseI
    } else if params.nu >= 0.5 - params.kappa / 16.0 {
        GeometryPhase::CaseII
    } else {
        GeometryPhase::CaseIII
    }
}

/// Classifies an exponent pair into the parameter-range case of the
/// two-stage boundary construction.
///
/// The admissible range is `alpha <= eta_kappa(beta)` and
/// `beta >= (6 - kappa)/(2 kappa)`; equalities (including the upper
/// threshold `(12 - kappa)(kappa + 4)/(16 kappa)` separating the `ii`
/// and `iiib` ranges) are resolved with tolerance [`CLASSIFY_TOL`].
pub fn classify_construction(kappa: f64, ep: ExponentPair) -> Result<ConstructionCase> {
    let beta_min = (6.0 - kappa) / (2.0 * kappa);
    let beta_cut = (12.0 - kappa) * (kappa + 4.0) / (16.0 * kappa);
    if !ep.beta.is_finite() || !ep.alpha.is_finite() {
        return Err(Error::OutOfRange(format!(
            "exponent pair must be finite, got ({}, {})",
            ep.alpha, ep.beta
        )));
    }
    if ep.beta < beta_min - CLASSIFY_TOL {
        return Err(Error::OutOfRange(format!(
            "beta = {} is below the minimal boundary exponent {beta_min}",
            ep.beta
        )));
    }
    let eta_beta = eta(kappa, ep.beta)?;
    if ep.alpha > eta_beta + CLASSIFY_TOL {
        return Err(Error::OutOfRange(format!(
            "alpha = {} exceeds the maximal interior exponent {eta_beta} at beta = {}",
            ep.alpha, ep.beta
        )));
    }
    let on_eta = (ep.alpha - eta_beta).abs() <= CLASSIFY_TOL;
    let at_beta_min = (ep.beta - beta_min).abs() <= CLASSIFY_TOL;
    Ok(if on_eta {
        if at_beta_min {
            ConstructionCase::Ia
        } else {
            ConstructionCase::Ib
        }
    } else if at_beta_min {
        ConstructionCase::Iiia
    } else if ep.beta >= beta_cut - CLASSIFY_TOL {
        ConstructionCase::Ii
    } else {
        ConstructionCase::Iiib
    })
}

/// Residuals of the three parameter-only identities that make the
/// change-of-measure weight drift-free, with `e2 = (6 - kappa)/(2
/// kappa)` and `c` the central charge:
///
/// ```text
/// e2 (1 - kappa)/2 + e2^2 kappa/2 + c/4
/// e2 (kappa/2 - 4/3) - c/6
/// kappa/4 - 3/2 + e2 kappa/2
/// ```
///
/// All three vanish identically on `kappa in (0, 4]`.
pub fn martingale_coefficient_identities(kappa: f64) -> Result<[f64; 3]> {
    let c = central_charge(kappa)?;
    let e2 = (6.0 - kappa) / (2.0 * kappa);
    Ok([
        e2 * (1.0 - kappa) / 2.0 + e2 * e2 * kappa / 2.0 + c / 4.0,
        e2 * (kappa / 2.0 - 4.0 / 3.0) - c / 6.0,
        kappa / 4.0 - 1.5 + e2 * kappa / 2.0,
    ])
}
