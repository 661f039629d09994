//! The `(kappa, mu, nu)` parameter triple, its derived hypergeometric
//! parameters, and conversions to and from the exponent pair
//! `(alpha, beta)`.
//!
//! Throughout, `kappa` ranges over `(0, 4]`. The derived quantities are
//!
//! ```text
//! q1 = sqrt(16 kappa mu + (4 - kappa)^2) / (2 kappa)   (imaginary when the
//!                                                        radicand is negative)
//! q2 = sqrt(16 kappa nu + (4 - kappa)^2) / (4 kappa)
//! a  = 1/4 + q1 + q2          b = 1/4 - q1 + q2
//! c  = 1 + 2 q2               d = -1/kappa + 1/4 + q2
//! e  = 2 mu - (6 - kappa)(kappa - 2) / (8 kappa)
//! ```
//!
//! which satisfy `a + b + 1/2 = c` identically. The admissible range is
//! `nu >= 0` together with `Re b >= 0`; the boundary `b = 0` is exactly
//! the locus where the weighted process degenerates to a single-force
//! one (see [`crate::loewner`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which `b` counts as exactly zero (the degenerate,
/// single-force locus).
const B_ZERO_TOL: f64 = 1e-12;

/// Central charge `(6 - kappa)(3 kappa - 8) / (2 kappa)` for
/// `kappa in (0, 4]`; at most `1`, with equality exactly at `kappa = 4`.
pub fn central_charge(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok((6.0 - kappa) * (3.0 * kappa - 8.0) / (2.0 * kappa))
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa <= 4.0) {
        return Err(Error::OutOfRange(format!(
            "kappa must lie in (0, 4], got {kappa}"
        )));
    }
    Ok(())
}

/// The exponent pair `(alpha, beta)` associated with a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    /// Interior exponent, `alpha = 2 mu`.
    pub alpha: f64,
    /// Boundary exponent, `beta = 1/kappa + nu + 2 q2`.
    pub beta: f64,
}

/// A validated parameter triple with all derived hypergeometric
/// parameters precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Diffusivity, in `(0, 4]`.
    pub kappa: f64,
    /// Interior weight parameter.
    pub mu: f64,
    /// Boundary weight parameter, `>= 0`.
    pub nu: f64,
    /// `sqrt(16 kappa mu + (4-kappa)^2) / (2 kappa)`; purely imaginary
    /// when the radicand is negative.
    pub q1: Complex64,
    /// `sqrt(16 kappa nu + (4-kappa)^2) / (4 kappa)`, always positive.
    pub q2: f64,
    /// Upper hypergeometric parameter `1/4 + q1 + q2`.
    pub a: Complex64,
    /// Upper hypergeometric parameter `1/4 - q1 + q2`.
    pub b: Complex64,
    /// Lower hypergeometric parameter `1 + 2 q2`.
    pub c: f64,
    /// Exponent of the angular weight near `0`: `G ~ theta^{2d}`.
    pub d: f64,
    /// Drift energy constant `2 mu - (6-kappa)(kappa-2)/(8 kappa)`.
    pub e: f64,
}

impl Params {
    /// Validates `(kappa, mu, nu)` and precomputes derived parameters.
    ///
    /// Requirements: `kappa in (0, 4]`, `nu >= 0`, and `mu` at most the
    /// value placing `b` at zero, namely
    /// `kappa/4 (1/4 + q2)^2 - (4-kappa)^2/(16 kappa)`.
    pub fn new(kappa: f64, mu: f64, nu: f64) -> Result<Self> {
        check_kappa(kappa)?;
        if !(nu >= 0.0) {
            return Err(Error::OutOfRange(format!("nu must satisfy nu >= 0, got {nu}")));
        }
        let p = Self::new_unchecked(kappa, mu, nu);
        if p.b.re < -B_ZERO_TOL {
            let mu_max = kappa / 4.0 * (0.25 + p.q2) * (0.25 + p.q2)
                - (4.0 - kappa) * (4.0 - kappa) / (16.0 * kappa);
            return Err(Error::OutOfRange(format!(
                "mu must satisfy mu <= kappa/4 (1/4 + q2)^2 - (4-kappa)^2/(16 kappa) \
                 = {mu_max} (so that b >= 0), got {mu}"
            )));
        }
        Ok(p)
    }

    /// Derives parameters without the range check. Used for spectral
    /// shifts `mu -> mu + lambda/2`, which may leave the admissible
    /// range while remaining meaningful for the shifted weight.
    pub(crate) fn new_unchecked(kappa: f64, mu: f64, nu: f64) -> Self {
        let fk = (4.0 - kappa) * (4.0 - kappa);
        let disc1 = 16.0 * kappa * mu + fk;
        let q1 = if disc1 >= 0.0 {
            Complex64::new(disc1.sqrt() / (2.0 * kappa), 0.0)
        } else {
            Complex64::new(0.0, (-disc1).sqrt() / (2.0 * kappa))
        };
        let q2 = (16.0 * kappa * nu + fk).sqrt() / (4.0 * kappa);
        let quarter = Complex64::new(0.25, 0.0);
        Self {
            kappa,
            mu,
            nu,
            q1,
            q2,
            a: quarter + q1 + q2,
            b: quarter - q1 + q2,
            c: 1.0 + 2.0 * q2,
            d: -1.0 / kappa + 0.25 + q2,
            e: 2.0 * mu - (6.0 - kappa) * (kappa - 2.0) / (8.0 * kappa),
        }
    }

    /// Parameters with `mu` shifted by `lambda / 2`, as used by the
    /// eigenvalue ratio function. `kappa`, `nu`, hence `q2`, `c`, `d`
    /// are unchanged; `q1`, `a`, `b`, `e` move.
    pub fn shifted(&self, lambda: f64) -> Self {
        Self::new_unchecked(self.kappa, self.mu + lambda / 2.0, self.nu)
    }

    /// Whether the parameters sit on the degenerate locus `b = 0`, where
    /// the angular weight collapses to `sin(theta)^{2d}`.
    pub fn b_is_zero(&self) -> bool {
        self.b.norm() < B_ZERO_TOL
    }

    /// Force value of the equivalent single-force process on the
    /// degenerate locus: `rho = 2 kappa d`. `None` off the locus.
    pub fn rho(&self) -> Option<f64> {
        self.b_is_zero().then_some(2.0 * self.kappa * self.d)
    }

    /// The exponent pair `(alpha, beta)` of this triple.
    pub fn exponent_pair(&self) -> ExponentPair {
        ExponentPair {
            alpha: 2.0 * self.mu,
            beta: 1.0 / self.kappa + self.nu + 2.0 * self.q2,
        }
    }

    /// Largest admissible `mu` for this `(kappa, nu)` (the `b = 0` locus).
    pub fn mu_upper_bound(kappa: f64, nu: f64) -> Result<f64> {
        check_kappa(kappa)?;
        if !(nu >= 0.0) {
            return Err(Error::OutOfRange(format!("nu must satisfy nu >= 0, got {nu}")));
        }
        let fk = (4.0 - kappa) * (4.0 - kappa);
        let q2 = (16.0 * kappa * nu + fk).sqrt() / (4.0 * kappa);
        Ok(kappa / 4.0 * (0.25 + q2) * (0.25 + q2) - fk / (16.0 * kappa))
    }
}

/// Builds the exponent pair directly from a triple.
pub fn exponents_from_mu_nu(kappa: f64, mu: f64, nu: f64) -> Result<ExponentPair> {
    Ok(Params::new(kappa, mu, nu)?.exponent_pair())
}

/// Inverts the exponent map: `mu = alpha / 2` and `nu` solving
/// `beta = 1/kappa + nu + 2 q2(nu)`. Requires
/// `beta >= (6 - kappa) / (2 kappa)`.
pub fn mu_nu_from_exponents(kappa: f64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_kappa(kappa)?;
    let beta_min = (6.0 - kappa) / (2.0 * kappa);
    if !(beta >= beta_min) {
        return Err(Error::OutOfRange(format!(
            "beta must satisfy beta >= (6 - kappa)/(2 kappa) = {beta_min}, got {beta}"
        )));
    }
    let fk = (4.0 - kappa) * (4.0 - kappa);
    let s = (16.0 * kappa * beta + fk).sqrt() - 4.0;
    let nu = (s * s - fk) / (16.0 * kappa);
    // Clamp the rounding dust at the boundary beta = (6-kappa)/(2 kappa),
    // where nu = 0 exactly.
    Ok((alpha / 2.0, nu.max(0.0)))
}

/// The conjugation map `V_kappa(x) = sqrt(16 kappa x + (4-kappa)^2) -
/// (4 - kappa)`, defined for `16 kappa x + (4-kappa)^2 >= 0`.
pub fn v_kappa(kappa: f64, x: f64) -> Result<f64> {
    check_kappa(kappa)?;
    let fk = (4.0 - kappa) * (4.0 - kappa);
    let rad = 16.0 * kappa * x + fk;
    if rad < 0.0 {
        return Err(Error::OutOfRange(format!(
            "v_kappa requires x >= -(4-kappa)^2/(16 kappa) = {}, got {x}",
            -fk / (16.0 * kappa)
        )));
    }
    Ok(rad.sqrt() - (4.0 - kappa))
}

/// Inverse of [`v_kappa`]: `x = (y^2 + 2 (4 - kappa) y) / (16 kappa)`.
pub fn v_kappa_inv(kappa: f64, y: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok((y * y + 2.0 * (4.0 - kappa) * y) / (16.0 * kappa))
}

/// One-sided chordal boundary exponent
/// `(rho + 2)(rho + 6 - kappa) / (4 kappa)` for `rho > -2`.
pub fn chordal_alpha(kappa: f64, rho: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(rho > -2.0) {
        return Err(Error::OutOfRange(format!(
            "chordal exponent requires rho > -2, got {rho}"
        )));
    }
    Ok((rho + 2.0) * (rho + 6.0 - kappa) / (4.0 * kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derived_parameters_match_reference_values() {
        // Reference values computed with mpmath 1.3.0 at 40 digits.
        let p = Params::new(3.0, 0.1, 0.5).unwrap();
        assert_relative_eq!(p.q1.re, 0.40138648595974319189, max_relative = 1e-14);
        assert_eq!(p.q1.im, 0.0);
        assert_relative_eq!(p.q2, 5.0 / 12.0, max_relative = 1e-15);
        assert_relative_eq!(p.a.re, 1.0680531526264098586, max_relative = 1e-14);
        assert_relative_eq!(p.b.re, 0.26528018070692347478, max_relative = 1e-13);
        assert_relative_eq!(p.c, 11.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(p.d, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(p.e, 0.075, max_relative = 1e-12);

        let p = Params::new(4.0, 0.0, 1.0).unwrap();
        assert_eq!(p.q1, Complex64::ZERO);
        assert_eq!(p.q2, 0.5);
        assert_eq!(p.a.re, 0.75);
        assert_eq!(p.b.re, 0.75);
        assert_eq!(p.c, 2.0);
        assert_eq!(p.d, 0.5);
        assert_eq!(p.e, -0.125);

        // Imaginary q1 branch.
        let p = Params::new(3.0, -0.5, 0.3).unwrap();
        assert_eq!(p.q1.re, 0.0);
        assert_relative_eq!(p.q1.im, 0.79930525388545325693, max_relative = 1e-14);
        assert_relative_eq!(p.a.re, 0.57702361450580971882, max_relative = 1e-14);
        assert_relative_eq!(p.a.im, 0.79930525388545325693, max_relative = 1e-14);
        assert_eq!(p.b, p.a.conj());
        assert_relative_eq!(p.e, -1.125, max_relative = 1e-15);
    }

    #[test]
    fn parameter_identities_hold() {
        for &(k, m, n) in &[
            (3.0, 0.1, 0.5),
            (4.0, 0.0, 1.0),
            (3.0, -0.5, 0.3),
            (8.0 / 3.0, 0.0, 0.0),
            (2.2, -3.0, 4.5),
        ] {
            let p = Params::new(k, m, n).unwrap();
            // a + b + 1/2 = c, and the paired differences.
            assert!(((p.a + p.b + 0.5).re - p.c).abs() < 1e-13);
            assert!((p.a + p.b).im.abs() < 1e-15);
            assert!(((p.c - p.a) - (p.b + 0.5)).norm() < 1e-13);
            // e = 2 mu - e2/6 - central_charge/12 with e2 = (6-kappa)/(2 kappa).
            let e2 = (6.0 - k) / (2.0 * k);
            let cc = central_charge(k).unwrap();
            assert!((p.e - (2.0 * m - e2 / 6.0 - cc / 12.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn b_zero_locus_is_exact() {
        for &(k, n) in &[(3.0, 0.2), (4.0, 0.0), (2.5, 1.7), (8.0 / 3.0, 0.4)] {
            let mu_max = Params::mu_upper_bound(k, n).unwrap();
            let p = Params::new(k, mu_max, n).unwrap();
            assert!(p.b_is_zero(), "b = {} at the locus for kappa={k}, nu={n}", p.b);
            let rho = p.rho().unwrap();
            assert_relative_eq!(rho, 2.0 * k * p.d, max_relative = 1e-15);
            // Slightly above the locus: rejected, naming the bound.
            let err = Params::new(k, mu_max + 1e-6, n).unwrap_err();
            assert!(matches!(err, Error::OutOfRange(_)));
            assert!(err.to_string().contains("b >= 0"));
            // Slightly below: fine, and b > 0.
            let p = Params::new(k, mu_max - 1e-6, n).unwrap();
            assert!(!p.b_is_zero());
            assert!(p.b.re > 0.0);
        }
    }

    #[test]
    fn range_validation() {
        assert!(Params::new(0.0, 0.0, 0.0).is_err());
        assert!(Params::new(4.5, 0.0, 0.0).is_err());
        assert!(Params::new(-1.0, 0.0, 0.0).is_err());
        assert!(Params::new(3.0, 0.0, -0.1).is_err());
        assert!(Params::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Params::new(3.0, 0.0, f64::NAN).is_err());
        // Strongly negative mu is admissible (q1 goes imaginary).
        assert!(Params::new(3.0, -100.0, 0.0).is_ok());
    }

    #[test]
    fn central_charge_at_most_one_with_equality_at_four() {
        assert_relative_eq!(central_charge(4.0).unwrap(), 1.0, max_relative = 1e-15);
        for i in 1..400 {
            let k = i as f64 * 0.01;
            let c = central_charge(k).unwrap();
            assert!(c < 1.0, "c({k}) = {c}");
        }
        assert!(central_charge(4.2).is_err());
    }

    #[test]
    fn exponent_pair_round_trip() {
        for &(k, m, n) in &[(3.0, 0.1, 0.5), (4.0, 0.0, 1.0), (2.7, -2.0, 3.3)] {
            let pair = exponents_from_mu_nu(k, m, n).unwrap();
            let (m2, n2) = mu_nu_from_exponents(k, pair.alpha, pair.beta).unwrap();
            assert_relative_eq!(m, m2, max_relative = 1e-14, epsilon = 1e-14);
            assert_relative_eq!(n, n2, max_relative = 1e-12, epsilon = 1e-12);
        }
        // nu = 0 maps to the minimal beta and back.
        let pair = exponents_from_mu_nu(3.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(pair.beta, 0.5, max_relative = 1e-15);
        let (_, nu) = mu_nu_from_exponents(3.0, 0.0, pair.beta).unwrap();
        assert_eq!(nu, 0.0);
        // Below-minimal beta is rejected.
        assert!(mu_nu_from_exponents(3.0, 0.0, 0.499).is_err());
    }

    #[test]
    fn conjugation_map_round_trip() {
        for &k in &[2.0, 8.0 / 3.0, 3.7, 4.0] {
            for &x in &[0.0, 0.3, 2.0, 17.5] {
                let y = v_kappa(k, x).unwrap();
                assert_relative_eq!(v_kappa_inv(k, y).unwrap(), x, epsilon = 1e-12);
            }
        }
        assert!(v_kappa(3.0, -1.0).is_err());
    }

    #[test]
    fn chordal_exponent_values() {
        // rho = 0: alpha = (2)(6 - kappa)/(4 kappa) = (6 - kappa)/(2 kappa).
        assert_relative_eq!(
            chordal_alpha(3.0, 0.0).unwrap(),
            0.5,
            max_relative = 1e-15
        );
        assert_relative_eq!(chordal_alpha(4.0, 2.0).unwrap(), 1.0, max_relative = 1e-15);
        assert!(chordal_alpha(3.0, -2.0).is_err());
        assert!(chordal_alpha(3.0, -2.5).is_err());
    }

    #[test]
    fn shifted_parameters_move_only_the_mu_family() {
        let p = Params::new(3.0, 0.1, 0.5).unwrap();
        let s = p.shifted(0.7);
        assert_eq!(s.kappa, p.kappa);
        assert_eq!(s.nu, p.nu);
        assert_eq!(s.q2, p.q2);
        assert_eq!(s.c, p.c);
        assert_eq!(s.d, p.d);
        assert_relative_eq!(s.mu, 0.45, max_relative = 1e-15);
        assert!((s.a + s.b - (p.a + p.b)).norm() < 1e-14);
        assert_relative_eq!(s.e, p.e + 0.7, max_relative = 1e-13);
    }
}
