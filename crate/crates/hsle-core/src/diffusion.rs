//! Monte Carlo simulation of the angular diffusion
//!
//! ```text
//! d theta = (sqrt(kappa)/2) dB + [ (kappa/4) G'/G + cot(theta)/2 ] dt
//! ```
//!
//! on `(0, pi)`, started near the entrance boundary `0`, together with
//! the hitting-time sample of the absorbing boundary `pi`, empirical
//! survival estimates, and the pathwise growth-rate estimator used to
//! classify the boundary phase.
//!
//! Near `0` the process is a Bessel-like diffusion of dimension
//! `2 + 4 q2 > 2` (never hits); near `pi`, of dimension `2 - 4 q2 < 2`
//! (hits almost surely — except on the degenerate locus `b = 0`, where
//! the drift turns the boundary repelling and `T = infinity`).
//!
//! Time stepping is Euler-Maruyama with the step shrunk quadratically
//! near both endpoints; the drift is served from a Catmull-Rom table in
//! the logit coordinate `x = ln(theta / (pi - theta))`, which
//! concentrates resolution exactly where the adaptive stepping does.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gfunc::GEvaluator;
use crate::params::Params;

/// Endpoint closed forms take over below this distance; the drift table
/// covers the rest, with margin for the interpolation stencil.
const CLOSED_FORM_ZONE: f64 = 1.2e-4;
/// Drift table size.
const GRID_POINTS: usize = 10_000;
/// Two-sided 99% normal quantile, for survival confidence intervals.
const Z_99: f64 = 2.5758293035489004;
/// Maximum step halvings when a proposal leaves `(0, pi)` at the lower
/// end (the positive drift guarantees termination well before this).
const MAX_REFINEMENTS: u32 = 80;

/// Step-size policy `dt = min(dt0, gamma * min(theta, pi - theta)^2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DtPolicy {
    dt0: f64,
    gamma: f64,
}

impl DtPolicy {
    /// Adaptive policy with base step `dt0` and endpoint factor `gamma`.
    pub fn new(dt0: f64, gamma: f64) -> Result<Self> {
        if !(dt0 > 0.0 && dt0.is_finite() && gamma > 0.0) {
            return Err(Error::OutOfRange(format!(
                "step policy needs dt0 > 0 and gamma > 0, got dt0 = {dt0}, gamma = {gamma}"
            )));
        }
        Ok(Self { dt0, gamma })
    }

    /// Fixed step `dt0`, no endpoint shrinking.
    pub fn fixed(dt0: f64) -> Result<Self> {
        Self::new(dt0, f64::INFINITY)
    }

    /// Base step.
    pub fn dt0(&self) -> f64 {
        self.dt0
    }

    /// Step size at angle `theta`.
    pub fn dt(&self, theta: f64) -> f64 {
        if self.gamma.is_infinite() {
            return self.dt0;
        }
        let edge = theta.min(PI - theta);
        self.dt0.min(self.gamma * edge * edge)
    }
}

impl Default for DtPolicy {
    fn default() -> Self {
        Self { dt0: 1e-3, gamma: 0.1 }
    }
}

/// Simulation configuration shared by all path-sampling entry points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SimConfig {
    /// Number of independent paths.
    pub n_paths: usize,
    /// Time horizon; paths still running at `t_max` are censored.
    pub t_max: f64,
    /// Starting angle (the entrance boundary `0` cannot be started on).
    pub eps_start: f64,
    /// A path is recorded as hitting when `theta >= pi - eps_hit`.
    pub eps_hit: f64,
    /// Step-size policy.
    pub dt_policy: DtPolicy,
    /// Base RNG seed; path `i` uses stream `i` of this seed.
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_paths: 10_000,
            t_max: 20.0,
            eps_start: 1e-3,
            eps_hit: 1e-3,
            dt_policy: DtPolicy::default(),
            seed: 1,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::OutOfRange("need at least one path".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "t_max must be positive and finite, got {}",
                self.t_max
            )));
        }
        if !(self.eps_start > 0.0 && self.eps_start < 1.0) {
            return Err(Error::OutOfRange(format!(
                "eps_start must lie in (0, 1), got {}",
                self.eps_start
            )));
        }
        if !(self.eps_hit > 0.0 && self.eps_hit < 1.0) {
            return Err(Error::OutOfRange(format!(
                "eps_hit must lie in (0, 1), got {}",
                self.eps_hit
            )));
        }
        Ok(())
    }
}

/// Drift field of the angular diffusion, with the interior served from
/// a precomputed table and the endpoint zones from closed forms.
#[derive(Debug, Clone)]
pub struct AngularDrift {
    params: Params,
    /// `None` on the degenerate locus, where the drift is exactly
    /// `(kappa d / 2 + 1/2) cot(theta)`.
    table: Option<LogitTable>,
}

/// Catmull-Rom table of `w(x) = (G'/G)(theta) * theta (pi - theta) / pi`
/// on a uniform grid in `x = ln(theta / (pi - theta))`. `w` is bounded
/// on all of `(0, pi)` (it tends to `2d` at `0` and `-(2c - 2 - 2d)`
/// at `pi`), so the interpolation error stays uniformly small while the
/// recovered `G'/G` keeps its `1/theta`-type growth exactly.
#[derive(Debug, Clone)]
struct LogitTable {
    x0: f64,
    h: f64,
    w: Vec<f64>,
}

impl LogitTable {
    fn build(ev: &GEvaluator) -> Result<Self> {
        // Pad past the closed-form switch so the 4-point stencil never
        // leaves the grid.
        let edge = 0.8e-4;
        let x0 = (edge / (PI - edge)).ln();
        let x1 = -x0;
        let h = (x1 - x0) / (GRID_POINTS - 1) as f64;
        let mut w = Vec::with_capacity(GRID_POINTS);
        for i in 0..GRID_POINTS {
            let x = x0 + i as f64 * h;
            let theta = PI / (1.0 + (-x).exp());
            let glog = ev.g_log_deriv(theta)?;
            w.push(glog * theta * (PI - theta) / PI);
        }
        Ok(Self { x0, h, w })
    }

    /// Interpolated `G'/G` at `theta` (must be inside the padded grid).
    fn g_log_deriv(&self, theta: f64) -> f64 {
        let x = (theta / (PI - theta)).ln();
        let u = (x - self.x0) / self.h;
        let i = (u as usize).clamp(1, self.w.len() - 3);
        let s = u - i as f64;
        let (w0, w1, w2, w3) = (self.w[i - 1], self.w[i], self.w[i + 1], self.w[i + 2]);
        let value = 0.5
            * (2.0 * w1
                + (w2 - w0) * s
                + (2.0 * w0 - 5.0 * w1 + 4.0 * w2 - w3) * s * s
                + (3.0 * w1 - w0 - 3.0 * w2 + w3) * s * s * s);
        value * PI / (theta * (PI - theta))
    }
}

impl AngularDrift {
    /// Builds the drift field, tabulating `G'/G` unless the parameter
    /// set lies on the degenerate locus.
    pub fn new(params: Params) -> Result<Self> {
        let table = if params.b_is_zero() {
            None
        } else {
            Some(LogitTable::build(&GEvaluator::new(params)?)?)
        };
        Ok(Self { params, table })
    }

    /// The parameter set.
    pub fn params(&self) -> &Params {
        &self.params
    }

    /// `G'/G` as used by the stepping loop: closed endpoint forms inside
    /// the endpoint zones, table elsewhere.
    pub fn g_log_deriv(&self, theta: f64) -> f64 {
        let p = &self.params;
        if let Some(table) = &self.table {
            if theta < CLOSED_FORM_ZONE {
                2.0 * p.d / theta
            } else if theta > PI - CLOSED_FORM_ZONE {
                (2.0 * p.c - 2.0 - 2.0 * p.d) / (PI - theta)
            } else {
                table.g_log_deriv(theta)
            }
        } else {
            2.0 * p.d * theta.cos() / theta.sin()
        }
    }

    /// Drift `(kappa/4) G'/G + cot(theta)/2`.
    pub fn drift(&self, theta: f64) -> f64 {
        let p = &self.params;
        if self.table.is_none() {
            // Degenerate locus: exactly (kappa d / 2 + 1/2) cot(theta).
            return (p.kappa * p.d / 2.0 + 0.5) * theta.cos() / theta.sin();
        }
        p.kappa / 4.0 * self.g_log_deriv(theta) + theta.cos() / theta.sin() / 2.0
    }

    /// Drift of the logarithm of the radial observable:
    ///
    /// ```text
    /// D(theta) = -1/(2 sin^2) - (kappa/4) cot (G'/G) - cot^2/2
    ///            + kappa/8 + (kappa/8) cot^2.
    /// ```
    ///
    /// As `theta -> pi`, `D / cot^2 -> (kappa/2) q2 - 1/2`, whose sign
    /// separates the two boundary phases.
    pub fn log_x_drift(&self, theta: f64) -> f64 {
        let p = &self.params;
        let s = theta.sin();
        let cot = theta.cos() / s;
        let glog = self.g_log_deriv(theta);
        -1.0 / (2.0 * s * s) - p.kappa / 4.0 * cot * glog - cot * cot / 2.0
            + p.kappa / 8.0
            + p.kappa / 8.0 * cot * cot
    }
}

/// Limit of `D(theta) / cot^2(theta)` at the absorbing boundary:
/// `(kappa/2) q2 - 1/2`. Negative exactly when `nu < 1/2 - kappa/16`.
pub fn phase_drift_rate(params: &Params) -> f64 {
    params.kappa / 2.0 * params.q2 - 0.5
}

/// Bessel dimensions of the two boundaries: `(2 + 4 q2, 2 - 4 q2)` at
/// `0` and `pi` respectively.
pub fn bessel_dimension(params: &Params) -> (f64, f64) {
    (2.0 + 4.0 * params.q2, 2.0 - 4.0 * params.q2)
}

/// One simulated path of the angle process.
#[derive(Debug, Clone)]
pub struct DiffusionPath {
    /// Step times, starting at `0`.
    pub times: Vec<f64>,
    /// Angles at those times.
    pub thetas: Vec<f64>,
    /// First time `theta >= pi - eps_hit`, if reached before `t_max`.
    pub hit: Option<f64>,
}

/// Advances one Euler-Maruyama step from `theta` with a caller-supplied
/// drift value function; returns `(dt_used, theta_new)`. The proposal is
/// re-drawn with a halved step while it lands at or below `0` (the
/// entrance boundary is unreachable for the true process, and the
/// positive `1/theta` drift makes the refinement terminate).
pub(crate) fn step_with(
    drift_at: impl Fn(f64) -> f64,
    kappa: f64,
    policy: &DtPolicy,
    rng: &mut ChaCha8Rng,
    theta: f64,
    t_remaining: f64,
) -> Result<(f64, f64)> {
    let sigma = kappa.sqrt() / 2.0;
    let mu = drift_at(theta);
    let mut dt = policy.dt(theta).min(t_remaining);
    for _ in 0..MAX_REFINEMENTS {
        let z: f64 = StandardNormal.sample(rng);
        let proposal = theta + mu * dt + sigma * dt.sqrt() * z;
        if proposal > 0.0 {
            return Ok((dt, proposal));
        }
        dt /= 2.0;
    }
    Err(Error::Numerical(format!(
        "step refinement failed to keep theta = {theta} positive"
    )))
}

/// One Euler-Maruyama step of the angle process; returns
/// `(dt_used, theta_new)`.
pub(crate) fn step(
    drift: &AngularDrift,
    policy: &DtPolicy,
    rng: &mut ChaCha8Rng,
    theta: f64,
    t_remaining: f64,
) -> Result<(f64, f64)> {
    step_with(
        |th| drift.drift(th),
        drift.params().kappa,
        policy,
        rng,
        theta,
        t_remaining,
    )
}

/// Simulates one full path, recording every step.
pub fn simulate_theta(
    drift: &AngularDrift,
    config: &SimConfig,
    path_index: u64,
) -> Result<DiffusionPath> {
    config.validate()?;
    let mut rng = path_rng(config.seed, path_index);
    let barrier = PI - config.eps_hit;
    let mut t = 0.0;
    let mut theta = config.eps_start;
    let mut times = vec![0.0];
    let mut thetas = vec![theta];
    let mut hit = None;
    while t < config.t_max {
        let (dt, theta_new) = step(drift, &config.dt_policy, &mut rng, theta, config.t_max - t)?;
        t += dt;
        theta = theta_new;
        times.push(t);
        thetas.push(theta);
        if theta >= barrier {
            hit = Some(t);
            break;
        }
    }
    Ok(DiffusionPath { times, thetas, hit })
}

/// Hitting-time record of a path ensemble (`None` = censored at
/// `t_max`), plus the exact configuration that produced it.
#[derive(Debug, Clone)]
pub struct HittingSample {
    /// Per-path first hitting times of `pi - eps_hit`.
    pub hits: Vec<Option<f64>>,
    /// The configuration used.
    pub config: SimConfig,
    /// Human-readable description of the stepping scheme.
    pub scheme: String,
}

impl HittingSample {
    /// Fraction of paths that hit before `t_max`.
    pub fn hit_fraction(&self) -> f64 {
        let hit = self.hits.iter().filter(|h| h.is_some()).count();
        hit as f64 / self.hits.len() as f64
    }
}

/// Runs the hitting time of `pi - eps_hit` for an ensemble, streaming
/// paths (no trajectories are retained). Paths are deterministic
/// functions of `(seed, path index)` regardless of thread scheduling.
pub fn sample_hitting_times(drift: &AngularDrift, config: &SimConfig) -> Result<HittingSample> {
    config.validate()?;
    let hits: Result<Vec<Option<f64>>> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| hitting_time_of_path(drift, config, i))
        .collect();
    Ok(HittingSample {
        hits: hits?,
        config: *config,
        scheme: "euler-maruyama, quadratic endpoint step shrink, logit drift table".into(),
    })
}

fn hitting_time_of_path(
    drift: &AngularDrift,
    config: &SimConfig,
    path_index: u64,
) -> Result<Option<f64>> {
    let mut rng = path_rng(config.seed, path_index);
    let barrier = PI - config.eps_hit;
    let mut t = 0.0;
    let mut theta = config.eps_start;
    while t < config.t_max {
        let (dt, theta_new) = step(drift, &config.dt_policy, &mut rng, theta, config.t_max - t)?;
        t += dt;
        theta = theta_new;
        if theta >= barrier {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Empirical survival probability `P(T > t)` with a two-sided 99%
/// normal confidence half-width. Censored paths count as survivors
/// (valid because `t` may not exceed the censoring horizon).
pub fn empirical_survival(sample: &HittingSample, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    if t > sample.config.t_max {
        return Err(Error::OutOfRange(format!(
            "survival at t = {t} is not observable: paths are censored at t_max = {}",
            sample.config.t_max
        )));
    }
    if t == 0.0 {
        return Ok((1.0, 0.0));
    }
    let n = sample.hits.len() as f64;
    let survivors = sample
        .hits
        .iter()
        .filter(|h| match h {
            Some(s) => *s > t,
            None => true,
        })
        .count() as f64;
    let p = survivors / n;
    let half = Z_99 * (p * (1.0 - p) / n).sqrt();
    Ok((p, half))
}

/// Pathwise record of the radial observable's log-growth, windowed near
/// the absorbing boundary for the phase estimate.
#[derive(Debug, Clone, Copy)]
pub struct LogXPath {
    /// First hitting time, if any.
    pub hit: Option<f64>,
    /// Total accumulated `integral D(theta) dt`.
    pub log_x_final: f64,
    /// Windowed growth-rate estimate
    /// `integral_W D dt / integral_W cot^2 dt` over the steps with
    /// `theta >= pi - window`; its sign estimates the boundary phase.
    pub k_hat: f64,
    /// `integral_W cot^2 dt` actually accumulated in the window.
    pub r_window: f64,
}

/// Simulates one path accumulating the log-observable functionals; the
/// growth rate is estimated over the sub-path with
/// `theta >= pi - window`.
///
/// Fails with an insufficient-path error when the path never enters the
/// window before being censored, since no rate estimate exists then.
pub fn simulate_log_x(
    drift: &AngularDrift,
    config: &SimConfig,
    window: f64,
    path_index: u64,
) -> Result<LogXPath> {
    config.validate()?;
    if !(window > 0.0 && window < PI / 2.0) {
        return Err(Error::OutOfRange(format!(
            "window must lie in (0, pi/2), got {window}"
        )));
    }
    let mut rng = path_rng(config.seed, path_index);
    let barrier = PI - config.eps_hit;
    let mut t = 0.0;
    let mut theta = config.eps_start;
    let mut log_x = 0.0;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut hit = None;
    while t < config.t_max {
        // Functionals use the pre-step state (explicit Euler weights).
        let d_here = drift.log_x_drift(theta);
        let cot = theta.cos() / theta.sin();
        let (dt, theta_new) = step(drift, &config.dt_policy, &mut rng, theta, config.t_max - t)?;
        log_x += d_here * dt;
        if theta >= PI - window {
            num += d_here * dt;
            den += cot * cot * dt;
        }
        t += dt;
        theta = theta_new;
        if theta >= barrier {
            hit = Some(t);
            break;
        }
    }
    if den <= 0.0 {
        return Err(Error::InsufficientPath(format!(
            "path {path_index} never entered the boundary window (width {window}) \
             before t_max = {}; no growth-rate estimate",
            config.t_max
        )));
    }
    Ok(LogXPath {
        hit,
        log_x_final: log_x,
        k_hat: num / den,
        r_window: den,
    })
}

/// Independent per-path generator: one seed, one stream per path.
pub(crate) fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}
