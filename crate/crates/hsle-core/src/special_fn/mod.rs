//! Complex gamma and Gauss hypergeometric evaluation.
//!
//! All routines signal domain violations and convergence failures through
//! [`crate::Error`] instead of returning NaN or silently degraded values.

mod gamma;
mod hyp2f1;
mod jet;

pub use gamma::{gamma, recip_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_deriv, Hyp2F1Request, MAX_TERMS};
pub use jet::Jet2;

pub(crate) use hyp2f1::cpow_pos;
