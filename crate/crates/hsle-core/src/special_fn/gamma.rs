//! Complex gamma function via the Lanczos approximation.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lanczos parameter `g = 7` with the standard 9-coefficient table.
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Returns `Some(n)` when `z` is exactly the nonpositive integer `-n`
/// (with `n >= 0`), i.e. a pole of the gamma function.
pub(crate) fn gamma_pole(z: Complex64) -> Option<u32> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        Some((-z.re) as u32)
    } else {
        None
    }
}

/// Returns `Some(n)` when `z` is within `tol` of a nonpositive integer
/// `-n`; used to detect terminating hypergeometric series.
pub(crate) fn near_nonpositive_integer(z: Complex64, tol: f64) -> Option<u32> {
    let r = z.re.round();
    if z.im.abs() <= tol && r <= 0.0 && (z.re - r).abs() <= tol {
        Some((-r) as u32)
    } else {
        None
    }
}

/// Complex gamma function.
///
/// Relative accuracy is better than `1e-12` for `|z| <= 50`. Evaluation
/// exactly at a nonpositive integer returns [`Error::GammaPole`].
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if gamma_pole(z).is_some() {
        return Err(Error::GammaPole { z });
    }
    Ok(gamma_unchecked(z))
}

/// Reciprocal gamma function, entire in `z`.
///
/// Returns exactly `0` at the poles of gamma, and `1/gamma(z)` elsewhere.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if gamma_pole(z).is_some() {
        Complex64::ZERO
    } else {
        gamma_unchecked(z).finv()
    }
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Reflection: gamma(z) = pi / (sin(pi z) gamma(1 - z)).
        let s = (PI * z).sin();
        PI / (s * gamma_unchecked(Complex64::new(1.0, 0.0) - z))
    } else {
        let w = z - 1.0;
        let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (w + i as f64);
        }
        let t = w + 7.5;
        (2.0 * PI).sqrt() * t.powc(w + 0.5) * (-t).exp() * acc
    }
}
