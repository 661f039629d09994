//! Closed-form exponent families, the spectral expansion of the angular
//! diffusion's survival probability, and the cascade relations between
//! half-plane and whole-plane exponent functions.
//!
//! The central objects:
//!
//! - `eta(kappa, beta)`: the leading whole-plane exponent,
//!
//!   ```text
//!   eta = [ (sqrt(16 beta kappa + (4-kappa)^2) - (4-kappa))^2
//!           - 4 (4-kappa)^2 ] / (32 kappa);
//!   ```
//!
//! - `eta_n(kappa, alpha, beta, n)`: the full two-parameter family, which
//!   under the correspondence `alpha = 2 mu`,
//!   `beta = 1/kappa + nu + 2 q2` coincides exactly with the decay rates
//!   `lambda_n` of the angular diffusion (see [`lambda_n`]);
//! - [`SpectralExpansion`]: decay rates plus tail-corrected series
//!   coefficients `a_n = prod_{k != n} (1 - lambda_n / lambda_k)^{-1}`,
//!   giving `P(T > t) = sum_n a_n exp(-lambda_n t)`;
//! - [`eigen_solve`]: the same decay rates recovered by root-finding on
//!   the boundary ratio function, independent of the closed form;
//! - `xi_half_plane` / `xi_whole_plane`: the cascade
//!   `xi = eta ∘ xi_tilde` with
//!   `xi_tilde = V^{-1}(sum_i V(alpha_i))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gfunc::GEvaluator;
use crate::params::{v_kappa, v_kappa_inv, Params};
use crate::special_fn::recip_gamma;

/// Number of leading factors of the coefficient product taken directly
/// before switching to the analytic tail.
const TAIL_START: usize = 20_000;
/// Absolute size of the last retained series term below which a
/// truncated survival sum is considered converged.
const TRUNCATION_TERM_TOL: f64 = 1e-9;
/// Relative gap under which two decay rates are treated as coincident.
const DUPLICATE_REL_TOL: f64 = 1e-9;

/// Validates `kappa` in `(0, 4]`.
fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= 4.0) {
        return Err(Error::OutOfRange(format!(
            "kappa must lie in (0, 4], got {kappa}"
        )));
    }
    Ok(())
}

/// Leading whole-plane exponent as a function of `beta`.
///
/// Requires `kappa in (0, 4]` and `16 beta kappa + (4 - kappa)^2 >= 0`.
pub fn eta(kappa: f64, beta: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let fk = (4.0 - kappa) * (4.0 - kappa);
    let rad = 16.0 * beta * kappa + fk;
    if !(rad >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "beta = {beta} is below the domain of the exponent function \
             (16 beta kappa + (4 - kappa)^2 = {rad} < 0)"
        )));
    }
    let s = rad.sqrt() - (4.0 - kappa);
    Ok((s * s - 4.0 * fk) / (32.0 * kappa))
}

/// Two-parameter exponent family indexed by `n >= 0`.
///
/// `eta_n(kappa, 0, beta, 0)` reduces to [`eta`], and under the
/// parameter correspondence it equals the decay rate [`lambda_n`].
pub fn eta_n(kappa: f64, alpha: f64, beta: f64, n: u32) -> Result<f64> {
    check_kappa(kappa)?;
    let fk = (4.0 - kappa) * (4.0 - kappa);
    let rad = 16.0 * kappa * beta + fk;
    if !(rad >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "beta = {beta} is below the domain of the exponent family \
             (16 kappa beta + (4 - kappa)^2 = {rad} < 0)"
        )));
    }
    let nf = n as f64;
    Ok((nf * nf + nf - 0.5) * kappa / 8.0 - (nf - 1.0) / 2.0 - 1.0 / kappa
        + beta / 2.0
        + ((nf + 0.5) / 8.0 - 1.0 / (4.0 * kappa)) * rad.sqrt()
        - alpha)
}

/// Leading exponent parametrised by central charge `c <= 1` instead of
/// `kappa`:
///
/// ```text
/// eta = [ (sqrt(24 beta + 1 - c) - sqrt(1 - c))^2 - 4 (1 - c) ] / 48.
/// ```
pub fn eta_of_c(c: f64, beta: f64) -> Result<f64> {
    if !(c <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "central charge must be at most 1, got {c}"
        )));
    }
    let rad = 24.0 * beta + 1.0 - c;
    if !(rad >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "beta = {beta} is below the domain at central charge {c} \
             (24 beta + 1 - c = {rad} < 0)"
        )));
    }
    let s = rad.sqrt() - (1.0 - c).sqrt();
    Ok((s * s - 4.0 * (1.0 - c)) / 48.0)
}

/// `n`-th decay rate of the angular diffusion:
///
/// ```text
/// lambda_n = (n + 1/2)^2 kappa / 8 + nu/2 - 3 (4-kappa)^2 / (32 kappa)
///            - 2 mu + (n + 1/2) sqrt(16 kappa nu + (4-kappa)^2) / 8.
/// ```
pub fn lambda_n(params: &Params, n: u32) -> f64 {
    let k = params.kappa;
    let fk = (4.0 - k) * (4.0 - k);
    let half = n as f64 + 0.5;
    half * half * k / 8.0 + params.nu / 2.0 - 3.0 * fk / (32.0 * k) - 2.0 * params.mu
        + half * (16.0 * k * params.nu + fk).sqrt() / 8.0
}

/// The same decay rate obtained from the shift that sends the second
/// index parameter to `-n/2` (exercised by the cross-validation tests): the `mu` value solving
/// `b(mu') = -n/2` is `mu' = (4 kappa^2 (n/2 + 1/4 + q2)^2 - (4-kappa)^2)
/// / (16 kappa)` and `lambda_n = 2 (mu' - mu)`.
#[cfg(test)]
fn lambda_n_from_shift(params: &Params, n: u32) -> f64 {
    let k = params.kappa;
    let fk = (4.0 - k) * (4.0 - k);
    let s = n as f64 / 2.0 + 0.25 + params.q2;
    let mu_pole = (4.0 * k * k * s * s - fk) / (16.0 * k);
    2.0 * (mu_pole - params.mu)
}

/// Coefficient `a_n` of the truncated spectral series over exactly the
/// decay rates supplied:
///
/// ```text
/// a_n = prod_{k != n} (1 - lambda_n / lambda_k)^{-1}.
/// ```
///
/// For a self-truncated family these coefficients satisfy
/// `sum_n a_n = 1` identically. Rates must be positive, increasing in
/// magnitude of index, and pairwise distinct.
pub fn coeff_a_n(lambdas: &[f64], n: usize) -> Result<f64> {
    if n >= lambdas.len() {
        return Err(Error::OutOfRange(format!(
            "coefficient index {n} out of range for {} rates",
            lambdas.len()
        )));
    }
    for (i, &l) in lambdas.iter().enumerate() {
        if !(l > 0.0) {
            return Err(Error::OutOfRange(format!(
                "decay rates must be positive, got lambda_{i} = {l}"
            )));
        }
        for (j, &m) in lambdas.iter().enumerate().skip(i + 1) {
            if (l - m).abs() <= DUPLICATE_REL_TOL * l.abs().max(m.abs()) {
                return Err(Error::DuplicateEigenvalue { i, j });
            }
        }
    }
    let ln = lambdas[n];
    let mut prod = 1.0;
    for (k, &l) in lambdas.iter().enumerate() {
        if k != n {
            prod /= 1.0 - ln / l;
        }
    }
    Ok(prod)
}

/// A truncated series evaluation together with its convergence status.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SeriesValue {
    /// The truncated sum.
    pub value: f64,
    /// The last term retained (signed).
    pub last_term: f64,
    /// Whether the last term is small enough (`<= 1e-9` in magnitude)
    /// for the truncation to be trusted.
    pub truncation_ok: bool,
}

/// Decay rates and tail-corrected coefficients of the survival series
/// for one parameter set.
///
/// Unlike [`coeff_a_n`] — which works over a finite, self-truncated
/// family and sums to 1 exactly — the coefficients here approximate the
/// infinite products `prod_{k != n, k < inf}`: the leading
/// [`TAIL_START`] factors are taken directly and the remainder enters
/// through an analytic tail built from polygamma asymptotics, accurate
/// to roughly `1e-13` relative.
#[derive(Debug, Clone)]
pub struct SpectralExpansion {
    lambdas: Vec<f64>,
    coeffs: Vec<f64>,
}

impl SpectralExpansion {
    /// Builds `n_terms` rates and coefficients for `params`.
    pub fn new(params: &Params, n_terms: usize) -> Result<Self> {
        if n_terms == 0 || n_terms > 200 {
            return Err(Error::OutOfRange(format!(
                "series length must lie in 1..=200, got {n_terms}"
            )));
        }
        if params.b_is_zero() {
            return Err(Error::OutOfRange(
                "the degenerate locus b = 0 has no spectral expansion \
                 (the boundary is never reached)"
                    .into(),
            ));
        }
        let lambdas: Vec<f64> = (0..n_terms).map(|n| lambda_n(params, n as u32)).collect();
        if !(lambdas[0] > 0.0) {
            return Err(Error::OutOfRange(format!(
                "leading decay rate must be positive, got {}",
                lambdas[0]
            )));
        }
        let mut coeffs = Vec::with_capacity(n_terms);
        for n in 0..n_terms {
            coeffs.push(infinite_product_coeff(params, &lambdas, n)?);
        }
        Ok(Self { lambdas, coeffs })
    }

    /// The decay rates `lambda_0 < lambda_1 < ...`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// The tail-corrected coefficients `a_n` (alternating signs).
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncated survival probability `sum_n a_n exp(-lambda_n t)`.
    ///
    /// The series is alternating with coefficients growing in magnitude,
    /// so it converges only where the exponential damping wins; the
    /// returned flag reports whether the truncation is trustworthy.
    pub fn survival(&self, t: f64) -> Result<SeriesValue> {
        if !(t >= 0.0) {
            return Err(Error::OutOfRange(format!(
                "time must be nonnegative, got {t}"
            )));
        }
        let mut value = 0.0;
        let mut last_term = 0.0;
        for (l, a) in self.lambdas.iter().zip(&self.coeffs) {
            last_term = a * (-l * t).exp();
            value += last_term;
        }
        Ok(SeriesValue {
            value,
            last_term,
            truncation_ok: last_term.abs() <= TRUNCATION_TERM_TOL,
        })
    }
}

/// `a_n` over the infinite rate family: direct factors below
/// [`TAIL_START`], analytic tail beyond.
fn infinite_product_coeff(params: &Params, lambdas: &[f64], n: usize) -> Result<f64> {
    let ln = lambdas[n];
    let mut log_abs = 0.0f64;
    let mut sign = 1.0f64;
    for k in 0..TAIL_START {
        if k == n {
            continue;
        }
        let lk = if k < lambdas.len() {
            lambdas[k]
        } else {
            lambda_n(params, k as u32)
        };
        let factor = 1.0 - ln / lk;
        if factor == 0.0 {
            return Err(Error::DuplicateEigenvalue { i: n, j: k });
        }
        if factor < 0.0 {
            sign = -sign;
        }
        log_abs -= factor.abs().ln();
    }
    let tail = product_tail_log(params, ln, TAIL_START as f64);
    Ok(sign * (log_abs + tail).exp())
}

/// `sum_{k >= start} -ln(1 - lambda_n / lambda(k))` for the quadratic
/// rate function `lambda(k) = A k^2 + B k + C`, via
/// `-ln(1-x) = x + x^2/2 + x^3/3 + ...` with the first two sums done
/// exactly by partial fractions and polygamma asymptotics.
fn product_tail_log(params: &Params, ln: f64, start: f64) -> f64 {
    let k = params.kappa;
    let fk = (4.0 - k) * (4.0 - k);
    let s = (16.0 * k * params.nu + fk).sqrt();
    // lambda(x) = A x^2 + B x + C.
    let a = k / 8.0;
    let b = k / 8.0 + s / 8.0;
    let c = k / 32.0 + s / 16.0 + params.nu / 2.0 - 3.0 * fk / (32.0 * k) - 2.0 * params.mu;
    let disc = Complex64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    let r1 = (Complex64::new(-b, 0.0) + disc) / (2.0 * a);
    let r2 = (Complex64::new(-b, 0.0) - disc) / (2.0 * a);
    let h = r1 - r2;
    let z1 = start - r1;
    let z2 = start - r2;
    if h.norm() < 1e-6 {
        // Double root: fall back to midpoint integrals for every order.
        let y = start - 0.5 - (r1.re + r2.re) / 2.0;
        return ln / (a * y) + ln * ln / (2.0 * a * a) / (3.0 * y * y * y)
            + ln * ln * ln / (3.0 * a * a * a) / (5.0 * y.powi(5));
    }
    // First order: lambda_n / (A (r1 - r2)) (psi(z2) - psi(z1)).
    let t1 = ln / a * (digamma_asym(z2) - digamma_asym(z1)) / h;
    // Second order via 1/((x-r1)^2 (x-r2)^2) partial fractions.
    let t2 = ln * ln / (2.0 * a * a)
        * ((trigamma_asym(z1) + trigamma_asym(z2)) / (h * h)
            - 2.0 / (h * h * h) * (digamma_asym(z2) - digamma_asym(z1)));
    // Third order: midpoint integral of 1/lambda^3 (already ~1e-14).
    let y = start - 0.5 - (r1.re + r2.re) / 2.0;
    let t3 = ln * ln * ln / (3.0 * a * a * a) / (5.0 * y.powi(5));
    (t1 + t2).re + t3
}

/// Asymptotic digamma, valid for large `Re z`.
fn digamma_asym(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    z.ln() - 0.5 * inv - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0))
}

/// Asymptotic trigamma, valid for large `Re z`.
fn trigamma_asym(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    inv * (1.0 + 0.5 * inv + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0)))
}

/// Truncated survival series `P(T > t)` with `n_terms` terms.
pub fn survival_series(params: &Params, t: f64, n_terms: usize) -> Result<SeriesValue> {
    SpectralExpansion::new(params, n_terms)?.survival(t)
}

/// Disconnection-type series at radius `r >= 1`: the survival series at
/// `t = ln r` for the parameter set with exponent pair `(alpha, beta)`.
pub fn disconnection_series(
    kappa: f64,
    alpha: f64,
    beta: f64,
    r: f64,
    n_terms: usize,
) -> Result<SeriesValue> {
    if !(r >= 1.0) {
        return Err(Error::OutOfRange(format!(
            "radius must be at least 1, got {r}"
        )));
    }
    let (mu, nu) = crate::params::mu_nu_from_exponents(kappa, alpha, beta)?;
    survival_series(&Params::new(kappa, mu, nu)?, r.ln(), n_terms)
}

/// Recovers the leading `n_eigen` decay rates by scanning and bisecting
/// the boundary ratio sign function
/// `s(lambda) = 1/Gamma(2 a_lambda) * 1/Gamma(2 b_lambda)`,
/// whose zeros are exactly the rates. Independent of the closed form
/// (which is used only to cap the scan).
pub fn eigen_solve(params: &Params, n_eigen: usize) -> Result<Vec<f64>> {
    if params.b_is_zero() {
        return Err(Error::OutOfRange(
            "the degenerate locus b = 0 has no eigenvalue family".into(),
        ));
    }
    if n_eigen == 0 {
        return Ok(Vec::new());
    }
    let sign_fn = |lam: f64| -> f64 {
        let s = params.shifted(lam);
        (recip_gamma(2.0 * s.a) * recip_gamma(2.0 * s.b)).re
    };
    // The gap between consecutive zeros exceeds kappa/4; an eighth of
    // that cannot skip two.
    let step = params.kappa / 32.0;
    let cap = 2.0 * lambda_n(params, n_eigen as u32 + 1) + 10.0;
    let mut zeros = Vec::with_capacity(n_eigen);
    let mut lo = 1e-9;
    let mut f_lo = sign_fn(lo);
    while zeros.len() < n_eigen && lo < cap {
        let hi = lo + step;
        let f_hi = sign_fn(hi);
        if f_lo == 0.0 {
            zeros.push(lo);
        } else if f_lo * f_hi < 0.0 {
            let mut a = lo;
            let mut b = hi;
            let mut fa = f_lo;
            while b - a > 1e-8 {
                let m = 0.5 * (a + b);
                let fm = sign_fn(m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                } else if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        lo = hi;
        f_lo = f_hi;
    }
    if zeros.len() < n_eigen {
        return Err(Error::BracketFailure {
            index: zeros.len(),
            lo: 1e-9,
            hi: cap,
        });
    }
    Ok(zeros)
}

/// Half-plane cascade: `xi_tilde = V^{-1}( sum_i V(alpha_i) )`.
pub fn xi_half_plane(kappa: f64, alphas: &[f64]) -> Result<f64> {
    check_kappa(kappa)?;
    if alphas.is_empty() {
        return Err(Error::OutOfRange(
            "the cascade needs at least one exponent argument".into(),
        ));
    }
    let mut total = 0.0;
    for &alpha in alphas {
        total += v_kappa(kappa, alpha)?;
    }
    v_kappa_inv(kappa, total)
}

/// Whole-plane cascade: `eta` applied to the half-plane cascade.
pub fn xi_whole_plane(kappa: f64, alphas: &[f64]) -> Result<f64> {
    eta(kappa, xi_half_plane(kappa, alphas)?)
}

/// Consistency residuals tying the evaluator to the expansion: for each
/// of the first rates, `f_lambda(pi)` must vanish at the solved rate.
/// Returns `|f_{lambda_n}(pi)|` for `n < n_eigen`.
pub fn boundary_ratio_residuals(params: &Params, n_eigen: usize) -> Result<Vec<f64>> {
    let ev = GEvaluator::new(*params)?;
    (0..n_eigen)
        .map(|n| Ok(ev.f_lambda_at_pi(lambda_n(params, n as u32))?.abs()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{central_charge, exponents_from_mu_nu, Params};
    use approx::assert_relative_eq;

    fn params(kappa: f64, mu: f64, nu: f64) -> Params {
        Params::new(kappa, mu, nu).unwrap()
    }

    /// Closed-form values computed with mpmath 1.3.0 at 40 digits.
    #[test]
    fn eta_matches_reference_values() {
        let cases = [
            (8.0 / 3.0, 0.5, 0.05810203018900044612),
            (8.0 / 3.0, 1.0, 0.25),
            (8.0 / 3.0, 2.0, 0.66666666666666666667),
            (8.0 / 3.0, 4.0, 1.5479642582584956366),
            (4.0, 4.0, 2.0),
            (3.0, 1.3125, 0.46875),
        ];
        for (kappa, beta, want) in cases {
            assert_relative_eq!(eta(kappa, beta).unwrap(), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn eta_is_the_base_of_the_family() {
        for kappa in [2.1, 8.0 / 3.0, 3.0, 3.5, 4.0] {
            for beta in [0.3, 1.0, 2.5, 6.0] {
                assert_relative_eq!(
                    eta(kappa, beta).unwrap(),
                    eta_n(kappa, 0.0, beta, 0).unwrap(),
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn central_charge_parametrisation_agrees() {
        for kappa in [2.2, 2.5, 8.0 / 3.0, 3.0, 3.7, 4.0] {
            let c = central_charge(kappa).unwrap();
            for beta in [0.5, 1.0, 2.0, 4.0, 8.0] {
                assert_relative_eq!(
                    eta_of_c(c, beta).unwrap(),
                    eta(kappa, beta).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn decay_rates_match_reference_values() {
        // kappa = 3, mu = 0.1, nu = 0.5 (mpmath 1.3.0).
        let p = params(3.0, 0.1, 0.5);
        let want = [0.425, 1.8, 3.925, 6.8, 10.425, 14.8, 19.925, 25.8];
        for (n, &w) in want.iter().enumerate() {
            assert_relative_eq!(lambda_n(&p, n as u32), w, max_relative = 1e-13);
        }
        // kappa = 4, mu = 0, nu = 1: lambda_n = (n + 3/2)^2 / 2.
        let p = params(4.0, 0.0, 1.0);
        for n in 0..10u32 {
            let half = n as f64 + 1.5;
            assert_relative_eq!(lambda_n(&p, n), half * half / 2.0, max_relative = 1e-13);
        }
        // Complex-q1 set kappa = 3, mu = -0.5, nu = 0.3.
        let p = params(3.0, -0.5, 0.3);
        let want = [
            1.4577677108793572836,
            2.6983031326380718618,
            4.68883855439678644,
            7.4293739761555010182,
        ];
        for (n, &w) in want.iter().enumerate() {
            assert_relative_eq!(lambda_n(&p, n as u32), w, max_relative = 1e-13);
        }
    }

    #[test]
    fn decay_rate_forms_agree() {
        // Direct formula, pole-shift formula, and the exponent family
        // under the parameter correspondence.
        for p in [
            params(3.0, 0.1, 0.5),
            params(4.0, 0.0, 1.0),
            params(3.0, -0.5, 0.3),
            params(8.0 / 3.0, 0.0, 0.0),
            params(2.3, -1.0, 2.7),
        ] {
            let pair = p.exponent_pair();
            for n in 0..12u32 {
                let direct = lambda_n(&p, n);
                let shift = lambda_n_from_shift(&p, n);
                let family = eta_n(p.kappa, pair.alpha, pair.beta, n).unwrap();
                assert_relative_eq!(direct, shift, max_relative = 1e-12);
                assert_relative_eq!(direct, family, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn truncated_coefficients_sum_to_one() {
        let p = params(3.0, 0.1, 0.5);
        let lambdas: Vec<f64> = (0..8).map(|n| lambda_n(&p, n)).collect();
        let mut total = 0.0;
        for n in 0..8 {
            total += coeff_a_n(&lambdas, n).unwrap();
        }
        assert_relative_eq!(total, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn coefficient_rejects_coincident_rates() {
        let lambdas = [1.0, 2.0, 2.0 + 1e-13];
        match coeff_a_n(&lambdas, 0) {
            Err(Error::DuplicateEigenvalue { i: 1, j: 2 }) => {}
            other => panic!("expected a duplicate-rate error, got {other:?}"),
        }
        assert!(coeff_a_n(&[1.0, 2.0], 5).is_err());
        assert!(coeff_a_n(&[1.0, -2.0], 0).is_err());
    }

    #[test]
    fn tail_corrected_coefficients_match_reference_values() {
        // mpmath 1.3.0, infinite products summed by Euler-Maclaurin.
        let exp = SpectralExpansion::new(&params(3.0, 0.1, 0.5), 8).unwrap();
        let want = [
            1.9862245153227379898,
            -2.1885251604019057043,
            2.6286198468885491538,
            -3.0682264503673775912,
            3.4895109405395693226,
            -3.8918067542081936563,
            4.2769981613674555384,
            -4.6471754452674803294,
        ];
        for (got, want) in exp.coefficients().iter().zip(want) {
            assert_relative_eq!(*got, want, max_relative = 1e-10);
        }
        let exp = SpectralExpansion::new(&params(4.0, 0.0, 1.0), 8).unwrap();
        let want = [
            3.3953054526271004964,
            -6.1115498147287808935,
            8.7307854496125441336,
            -11.317684842090334988,
            13.889885942565411122,
            -16.454172578115948559,
            19.01371053471176278,
            -21.570175816689814918,
        ];
        for (got, want) in exp.coefficients().iter().zip(want) {
            assert_relative_eq!(*got, want, max_relative = 1e-10);
        }
        let exp = SpectralExpansion::new(&params(3.0, -0.5, 0.3), 4).unwrap();
        let want = [
            8.9604235442321266425,
            -20.855055234272256248,
            29.066830597744644378,
            -34.695882524036732393,
        ];
        for (got, want) in exp.coefficients().iter().zip(want) {
            assert_relative_eq!(*got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn survival_series_matches_reference_values() {
        // 60-term sums, mpmath 1.3.0.
        let exp = SpectralExpansion::new(&params(3.0, 0.1, 0.5), 60).unwrap();
        let want = [
            (0.25, 0.99999999983215460752),
            (0.5, 0.99995891709676186939),
            (1.0, 0.98535218508375438367),
            (2.0, 0.79016406871272340499),
            (4.0, 0.36121697149303492405),
        ];
        for (t, w) in want {
            let s = exp.survival(t).unwrap();
            assert!(s.truncation_ok, "t = {t}");
            assert_relative_eq!(s.value, w, max_relative = 1e-11);
        }
        let exp = SpectralExpansion::new(&params(4.0, 0.0, 1.0), 60).unwrap();
        let want = [
            (0.25, 0.99999957015562808138),
            (0.5, 0.997048584969087111),
            (1.0, 0.85242034198644688313),
            (2.0, 0.34610625490581024364),
            (4.0, 0.037695661092918118737),
        ];
        for (t, w) in want {
            let s = exp.survival(t).unwrap();
            assert!(s.truncation_ok, "t = {t}");
            assert_relative_eq!(s.value, w, max_relative = 1e-11);
        }
    }

    #[test]
    fn survival_truncation_flag_reports_divergence() {
        let exp = SpectralExpansion::new(&params(3.0, 0.1, 0.5), 40).unwrap();
        // At tiny times the alternating series has not yet been damped.
        assert!(!exp.survival(0.001).unwrap().truncation_ok);
        assert!(exp.survival(1.0).unwrap().truncation_ok);
        assert!(exp.survival(0.0).is_ok());
        assert!(exp.survival(-1.0).is_err());
    }

    #[test]
    fn disconnection_series_is_survival_at_log_radius() {
        let p = params(3.0, 0.1, 0.5);
        let pair = exponents_from_mu_nu(3.0, 0.1, 0.5).unwrap();
        let direct = survival_series(&p, 2.0f64.ln(), 40).unwrap();
        let via_r = disconnection_series(3.0, pair.alpha, pair.beta, 2.0, 40).unwrap();
        assert_relative_eq!(direct.value, via_r.value, max_relative = 1e-12);
        assert!(disconnection_series(3.0, pair.alpha, pair.beta, 0.5, 40).is_err());
        // r = 1 is the time-zero end: allowed, but flagged unconverged.
        let at_one = disconnection_series(3.0, pair.alpha, pair.beta, 1.0, 40).unwrap();
        assert!(!at_one.truncation_ok);
    }

    #[test]
    fn eigen_solver_recovers_closed_form_rates() {
        for p in [params(3.0, 0.1, 0.5), params(3.0, -0.5, 0.3)] {
            let zeros = eigen_solve(&p, 4).unwrap();
            for (n, z) in zeros.iter().enumerate() {
                let want = lambda_n(&p, n as u32);
                assert!(
                    (z - want).abs() <= 1e-7 * want.max(1.0),
                    "n = {n}: solved {z} vs closed form {want}"
                );
            }
        }
        // Degenerate locus: no spectrum.
        let mu = Params::mu_upper_bound(3.0, 0.2).unwrap();
        assert!(eigen_solve(&params(3.0, mu, 0.2), 2).is_err());
    }

    #[test]
    fn boundary_ratio_vanishes_at_the_rates() {
        let p = params(3.0, 0.1, 0.5);
        for r in boundary_ratio_residuals(&p, 4).unwrap() {
            assert!(r < 1e-10, "residual {r}");
        }
    }

    #[test]
    fn half_plane_cascade_reference_values() {
        // Single argument: the cascade is the identity.
        for kappa in [2.5, 8.0 / 3.0, 3.4] {
            for alpha in [0.3, 1.0, 2.7] {
                assert_relative_eq!(
                    xi_half_plane(kappa, &[alpha]).unwrap(),
                    alpha,
                    max_relative = 1e-12
                );
            }
        }
        // Two unit arguments at kappa = 8/3: the classical value 10/3.
        assert_relative_eq!(
            xi_half_plane(8.0 / 3.0, &[1.0, 1.0]).unwrap(),
            10.0 / 3.0,
            max_relative = 1e-12
        );
        // Associativity of the cascade.
        let inner = xi_half_plane(3.0, &[0.5, 1.5]).unwrap();
        assert_relative_eq!(
            xi_half_plane(3.0, &[0.5, 1.5, 2.0]).unwrap(),
            xi_half_plane(3.0, &[inner, 2.0]).unwrap(),
            max_relative = 1e-12
        );
        assert!(xi_half_plane(3.0, &[]).is_err());
    }

    #[test]
    fn whole_plane_cascade_composes() {
        let xt = xi_half_plane(8.0 / 3.0, &[1.0, 1.0]).unwrap();
        assert_relative_eq!(
            xi_whole_plane(8.0 / 3.0, &[1.0, 1.0]).unwrap(),
            eta(8.0 / 3.0, xt).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(eta(5.0, 1.0).is_err());
        assert!(eta(3.0, -10.0).is_err());
        assert!(eta(f64::NAN, 1.0).is_err());
        assert!(eta_of_c(1.5, 1.0).is_err());
        assert!(eta_of_c(0.0, -1.0).is_err());
        assert!(eta_n(3.0, 0.0, f64::NAN, 2).is_err());
        assert!(SpectralExpansion::new(&params(3.0, 0.1, 0.5), 0).is_err());
        assert!(SpectralExpansion::new(&params(3.0, 0.1, 0.5), 500).is_err());
    }
}
