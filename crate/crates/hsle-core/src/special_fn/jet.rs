//! Second-order jets: value plus first and second derivative with respect
//! to a single real variable, propagated through arithmetic and
//! elementary functions.
//!
//! Used to evaluate the angular weight function together with its first
//! two derivatives in one pass, without finite differences.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Truncated second-order Taylor data `(f, f', f'')` of a complex-valued
/// function of one real variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    /// Value.
    pub v: Complex64,
    /// First derivative.
    pub d1: Complex64,
    /// Second derivative.
    pub d2: Complex64,
}

impl Jet2 {
    /// A constant (derivatives vanish).
    pub fn constant(v: Complex64) -> Self {
        Self {
            v,
            d1: Complex64::ZERO,
            d2: Complex64::ZERO,
        }
    }

    /// The identity jet at `x`: value `x`, unit slope.
    pub fn variable(x: f64) -> Self {
        Self {
            v: Complex64::new(x, 0.0),
            d1: Complex64::new(1.0, 0.0),
            d2: Complex64::ZERO,
        }
    }

    /// Composes outer derivative data `(f, f', f'')` evaluated at `self.v`
    /// with the inner jet (chain rule).
    pub fn compose(self, f: Complex64, df: Complex64, d2f: Complex64) -> Self {
        Self {
            v: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    /// `sin` of a real-valued jet.
    pub fn sin(self) -> Self {
        let (s, c) = (self.v.re.sin(), self.v.re.cos());
        self.compose(
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
        )
    }

    /// `cos` of a real-valued jet.
    pub fn cos(self) -> Self {
        let (s, c) = (self.v.re.sin(), self.v.re.cos());
        self.compose(
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(-c, 0.0),
        )
    }

    /// Complex power `self^p` for a jet with value off the branch cut
    /// (used here only with positive real values).
    pub fn powc(self, p: Complex64) -> Self {
        let f = self.v.powc(p);
        let df = p * self.v.powc(p - 1.0);
        let d2f = p * (p - 1.0) * self.v.powc(p - 2.0);
        self.compose(f, df, d2f)
    }

    /// Reciprocal.
    pub fn recip(self) -> Self {
        let inv = self.v.finv();
        self.compose(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)] // division as product with the reciprocal jet
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

impl Mul<Jet2> for Complex64 {
    type Output = Jet2;
    fn mul(self, j: Jet2) -> Jet2 {
        Jet2 {
            v: self * j.v,
            d1: self * j.d1,
            d2: self * j.d2,
        }
    }
}
