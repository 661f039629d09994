//! Gauss hypergeometric function `2F1(a, b; c; z)` for real `z < 1` and
//! complex upper parameters.
//!
//! Evaluation is routed by argument:
//!
//! - `|z| <= 0.7`: defining power series;
//! - `0.7 < z < 1`: connection formula in `1 - 1/z`, whose inner argument
//!   lies in `(-3/7, 0)`;
//! - `-7/3 < z < -0.7`: Pfaff transform `z -> z/(z-1)`, whose image lies
//!   in `[0.41, 0.7)`;
//! - `z <= -7/3`: connection formula in `1/z`, whose inner argument lies
//!   in `[-3/7, 0)`.
//!
//! The two connection formulas degenerate when `c - a - b` (respectively
//! `a - b`) approaches an integer `m`: gamma prefactors and inner-series
//! denominators blow up like `1/t`, `t` being the offset from `m`, while
//! the sum stays finite. Numerical cancellation of the `1/t` parts is
//! only achievable when every occurrence of `t` is derived from one
//! canonical value, so the connection formulas here split the degenerate
//! combination into `m + t` exactly once and reconstruct near-pole gammas
//! through the recurrence `gamma(n + t) = gamma(1 + t) / prod_k (k + t)`
//! and inner-series denominators as exact `integer + t` sums. Inside a
//! `1e-5` window of the integer the residual `1/t` noise is suppressed
//! further by evaluating at four offsets `a +/- delta, a +/- 2 delta` and
//! extrapolating (Richardson), leaving errors near `1e-11`.

use num_complex::Complex64;

use super::gamma::{gamma, near_nonpositive_integer, recip_gamma};
use crate::error::{Error, Result};

/// Cap on series terms; exceeding it is reported as non-convergence.
pub const MAX_TERMS: usize = 10_000;
/// Target relative tolerance for the power series.
const SERIES_TOL: f64 = 1e-14;
/// Window around integers inside which a connection formula is treated
/// as degenerate.
const DEGENERATE_TOL: f64 = 1e-5;
/// Window inside which an upper parameter counts as a nonpositive
/// integer, making the series terminate.
const TERMINATION_TOL: f64 = 1e-12;
/// Parameter offset for the Richardson stencil. Must exceed
/// `DEGENERATE_TOL` so the four shifted evaluations are non-degenerate.
const RICHARDSON_DELTA: f64 = 3e-5;
/// Largest integer part handled by the splitting recurrences; beyond it
/// the factorial products over/underflow and plain evaluation is used.
const MAX_SPLIT_INT: f64 = 150.0;

/// Arguments of a hypergeometric evaluation: complex upper parameters,
/// real lower parameter, real argument `z < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Request {
    /// First upper parameter.
    pub a: Complex64,
    /// Second upper parameter.
    pub b: Complex64,
    /// Lower parameter; must not be a nonpositive integer.
    pub c: f64,
    /// Argument; must satisfy `z < 1`.
    pub z: f64,
}

impl Hyp2F1Request {
    /// Convenience constructor.
    pub fn new(a: Complex64, b: Complex64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    /// Constructor for real upper parameters.
    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0), c, z)
    }
}

/// Evaluates `2F1(a, b; c; z)`.
pub fn hyp2f1(req: &Hyp2F1Request) -> Result<Complex64> {
    if !req.z.is_finite() || req.z >= 1.0 {
        return Err(Error::OutOfRange(format!(
            "hyp2f1 argument must satisfy z < 1, got {}",
            req.z
        )));
    }
    if req.c <= 0.0 && req.c.fract() == 0.0 {
        return Err(Error::OutOfRange(format!(
            "hyp2f1 lower parameter must not be a nonpositive integer, got {}",
            req.c
        )));
    }
    eval(req.a, req.b, Complex64::new(req.c, 0.0), req.z)
}

/// Evaluates `d/dz 2F1(a, b; c; z)` via the parameter-shift identity
/// `(a b / c) 2F1(a+1, b+1; c+1; z)`.
pub fn hyp2f1_deriv(req: &Hyp2F1Request) -> Result<Complex64> {
    let shifted = Hyp2F1Request {
        a: req.a + 1.0,
        b: req.b + 1.0,
        c: req.c + 1.0,
        z: req.z,
    };
    Ok(req.a * req.b / req.c * hyp2f1(&shifted)?)
}

/// `x^p` for real `x > 0` and complex `p`.
pub(crate) fn cpow_pos(x: f64, p: Complex64) -> Complex64 {
    (p * x.ln()).exp()
}

/// Full routing; `c` is complex because connection formulas produce
/// complex lower parameters in their inner series.
fn eval(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let term_a = near_nonpositive_integer(a, TERMINATION_TOL);
    let term_b = near_nonpositive_integer(b, TERMINATION_TOL);
    if term_a.is_some() || term_b.is_some() {
        let n = term_a.unwrap_or(u32::MAX).min(term_b.unwrap_or(u32::MAX));
        return polynomial(a, b, c, z, n as usize);
    }
    if z <= -7.0 / 3.0 {
        connection_neg_inf(a, b, c, z)
    } else if z <= -0.7 {
        // Pfaff: no gamma prefactors, hence no degeneracy to dodge.
        let w = z / (z - 1.0);
        Ok(cpow_pos(1.0 - z, -a) * series(a, c - b, c, w)?)
    } else if z <= 0.7 {
        series(a, b, c, z)
    } else {
        connection_near_one(a, b, c, z)
    }
}

/// Power series with an ordinary lower parameter.
fn series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    series_split(a, b, 0, c, z)
}

/// Power series whose lower parameter is `c_int + c_frac` with exact
/// integer part. Denominators are formed as `(c_int + n) + c_frac`, so a
/// small `c_frac` at `c_int + n = 0` enters exactly instead of through a
/// cancellation-noisy sum. Early termination is deferred until the pole
/// index has been passed, since terms spike there.
fn series_split(
    a: Complex64,
    b: Complex64,
    c_int: i64,
    c_frac: Complex64,
    z: f64,
) -> Result<Complex64> {
    let pole_n = if c_int <= 0 { (-c_int) as usize + 1 } else { 0 };
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let denom = ((c_int + n as i64) as f64 + c_frac) * (nf + 1.0);
        term *= (a + nf) * (b + nf) / denom * z;
        sum += term;
        if n >= pole_n && term.norm() <= SERIES_TOL * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_TERMS,
        last_rel: term.norm() / sum.norm(),
        tol: SERIES_TOL,
    })
}

/// Terminating series of degree `n` (one upper parameter is `-n`).
fn polynomial(a: Complex64, b: Complex64, c: Complex64, z: f64, n: usize) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// `gamma(n + t)` with exact integer part `n` and canonical offset `t`,
/// stable arbitrarily close to the poles at `n + t <= 0`. For `n >= 1`
/// this is a plain gamma; otherwise the recurrence
/// `gamma(n + t) = gamma(1 + t) / [(n + t)(n + 1 + t) ... (0 + t)]`
/// keeps every near-zero factor an exact `integer + t` sum.
fn gamma_offset(n: i64, t: Complex64) -> Result<Complex64> {
    if n >= 1 {
        return gamma(n as f64 + t);
    }
    if t == Complex64::ZERO {
        return Err(Error::GammaPole {
            z: Complex64::new(n as f64, 0.0),
        });
    }
    let mut denom = Complex64::new(1.0, 0.0);
    for k in n..=0 {
        denom *= k as f64 + t;
    }
    Ok(gamma(1.0 + t)? / denom)
}

/// Splits a complex combination into its nearest integer and the offset.
fn split_integer(w: Complex64) -> (i64, Complex64) {
    let m = w.re.round();
    (m as i64, w - m)
}

fn is_degenerate(t: Complex64) -> bool {
    t.norm() < DEGENERATE_TOL
}

/// Connection formula in `w = 1 - 1/z` for `z in (0.7, 1)`; degenerate
/// when `c - a - b` is an integer.
fn connection_near_one(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let (m, t) = split_integer(c - a - b);
    if (m as f64).abs() > MAX_SPLIT_INT {
        return connection_near_one_plain(a, b, c, z);
    }
    if is_degenerate(t) {
        // Shifting `a` by `s` shifts the offset to `t - s`.
        return richardson(|s| connection_near_one_split(a + s, b, c, z, m, t - s));
    }
    connection_near_one_split(a, b, c, z, m, t)
}

/// The near-one connection with `c - a - b = m + t` pre-split.
fn connection_near_one_split(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
    m: i64,
    t: Complex64,
) -> Result<Complex64> {
    let w = 1.0 - 1.0 / z;
    let gc = gamma(c)?;
    // gamma(c - a - b) = gamma(m + t); inner lower parameter
    // a + b - c + 1 = (1 - m) - t.
    let t1 = gc
        * gamma_offset(m, t)?
        * recip_gamma(c - a)
        * recip_gamma(c - b)
        * cpow_pos(z, -a)
        * series_split(a, a - c + 1.0, 1 - m, -t, w)?;
    // gamma(a + b - c) = gamma(-m - t); inner lower parameter
    // c - a - b + 1 = (1 + m) + t.
    let t2 = gc
        * gamma_offset(-m, -t)?
        * recip_gamma(a)
        * recip_gamma(b)
        * cpow_pos(1.0 - z, c - a - b)
        * cpow_pos(z, a - c)
        * series_split(c - a, 1.0 - a, 1 + m, t, w)?;
    Ok(t1 + t2)
}

/// Fallback for integer parts too large for the splitting recurrence.
fn connection_near_one_plain(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let w = 1.0 - 1.0 / z;
    let gc = gamma(c)?;
    let t1 = gc
        * gamma(c - a - b)?
        * recip_gamma(c - a)
        * recip_gamma(c - b)
        * cpow_pos(z, -a)
        * series(a, a - c + 1.0, a + b - c + 1.0, w)?;
    let t2 = gc
        * gamma(a + b - c)?
        * recip_gamma(a)
        * recip_gamma(b)
        * cpow_pos(1.0 - z, c - a - b)
        * cpow_pos(z, a - c)
        * series(c - a, 1.0 - a, c - a - b + 1.0, w)?;
    Ok(t1 + t2)
}

/// Connection formula in `w = 1/z` for `z <= -7/3`; degenerate when
/// `a - b` is an integer.
fn connection_neg_inf(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    // The formula is symmetric in (a, b); normalise so Re(a - b) >= 0 and
    // the integer part of the split is nonnegative.
    let (a, b) = if (a - b).re < 0.0 { (b, a) } else { (a, b) };
    let (m, t) = split_integer(a - b);
    if (m as f64).abs() > MAX_SPLIT_INT {
        return connection_neg_inf_plain(a, b, c, z);
    }
    if is_degenerate(t) {
        return richardson(|s| connection_neg_inf_split(a + s, b, c, z, m, t + s));
    }
    connection_neg_inf_split(a, b, c, z, m, t)
}

/// The negative-axis connection with `a - b = m + t` pre-split, `m >= 0`.
fn connection_neg_inf_split(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
    m: i64,
    t: Complex64,
) -> Result<Complex64> {
    let w = 1.0 / z;
    let gc = gamma(c)?;
    // gamma(b - a) = gamma(-m - t); inner lower parameter
    // a - b + 1 = (m + 1) + t is pole-free since m >= 0.
    let t1 = gc
        * gamma_offset(-m, -t)?
        * recip_gamma(b)
        * recip_gamma(c - a)
        * cpow_pos(-z, -a)
        * series_split(a, a - c + 1.0, m + 1, t, w)?;
    // gamma(a - b) = gamma(m + t); inner lower parameter
    // b - a + 1 = (1 - m) - t passes its pole at term index m - 1.
    let t2 = gc
        * gamma_offset(m, t)?
        * recip_gamma(a)
        * recip_gamma(c - b)
        * cpow_pos(-z, -b)
        * series_split(b, b - c + 1.0, 1 - m, -t, w)?;
    Ok(t1 + t2)
}

/// Fallback for integer parts too large for the splitting recurrence.
fn connection_neg_inf_plain(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let w = 1.0 / z;
    let gc = gamma(c)?;
    let t1 = gc
        * gamma(b - a)?
        * recip_gamma(b)
        * recip_gamma(c - a)
        * cpow_pos(-z, -a)
        * series(a, a - c + 1.0, a - b + 1.0, w)?;
    let t2 = gc
        * gamma(a - b)?
        * recip_gamma(a)
        * recip_gamma(c - b)
        * cpow_pos(-z, -b)
        * series(b, b - c + 1.0, b - a + 1.0, w)?;
    Ok(t1 + t2)
}

/// Four-point Richardson extrapolation over parameter shifts `s` around a
/// degenerate connection case. The weights `(4, 4, -1, -1)/6` cancel both
/// the odd and the `O(delta^2)` contributions, leaving `O(delta^4)`
/// truncation plus the suppressed pole-cancellation noise.
fn richardson<F>(f: F) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let d = RICHARDSON_DELTA;
    let f1 = f(d)?;
    let f2 = f(-d)?;
    let f3 = f(2.0 * d)?;
    let f4 = f(-2.0 * d)?;
    Ok((4.0 * (f1 + f2) - (f3 + f4)) / 6.0)
}
