//! Special-function kernel: signed log-Gamma, scaled `K_ν` of real order,
//! adaptive quadrature, and the Laplace-type integral `F_α`.
//!
//! Everything here is a pure function of its arguments.

mod bessel;
mod gamma;
pub mod quad;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_k_scaled, log_bessel_k};
pub use gamma::log_gamma_signed;
pub use quad::{QuadResult, QuadSpec};

use crate::error::{Error, Result};

/// A real number stored as `sign · exp(log_abs)`.
///
/// `sign == 0` exactly when the value is zero (then `log_abs == -∞`);
/// otherwise `log_abs` is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSigned {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned { log_abs: f64::NEG_INFINITY, sign: 0 };

    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 {
            return Self::ZERO;
        }
        debug_assert!(log_abs.is_finite(), "non-zero LogSigned needs a finite log");
        Self { log_abs, sign: sign.signum() }
    }

    pub fn positive(log_abs: f64) -> Self {
        Self::new(log_abs, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(x.abs().ln(), if x > 0.0 { 1 } else { -1 })
        }
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_abs + other.log_abs, self.sign * other.sign)
    }

    pub fn div(self, other: Self) -> Self {
        assert!(!other.is_zero(), "LogSigned division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_abs - other.log_abs, self.sign * other.sign)
    }

    /// `self^p` for a positive value.
    pub fn powf(self, p: f64) -> Self {
        assert!(self.sign > 0, "powf of a non-positive LogSigned");
        Self::positive(self.log_abs * p)
    }
}

/// `ln Σ exp(l_i)`; `-∞` for an empty or all-`-∞` input, `+∞` if any term is.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(logs: I) -> f64 {
    let logs: Vec<f64> = logs.into_iter().collect();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + logs.iter().map(|&l| (l - m).exp()).sum::<f64>().ln()
}

/// `F_α(r) = e^{-cr} ∫₀^∞ e^{-ct} t^α (t + 2r)^α dt` by adaptive quadrature.
///
/// The range is split at `t = 2r` and `t = 1/c`. On the first piece the
/// substitution `t = t₁ w^{1/(e+1)}` absorbs the `t^e` endpoint factor when
/// `e < 0`; the unbounded piece is mapped with decay scale `1/c`. At `r = 0`
/// the integrand is `t^{2α}` and needs `α > −1/2`.
pub fn f_alpha(alpha: f64, c: f64, r: f64, q: &QuadSpec) -> Result<f64> {
    if !(alpha.is_finite() && c.is_finite() && r.is_finite()) {
        return Err(Error::Domain("f_alpha: non-finite input".into()));
    }
    if alpha <= -1.0 {
        return Err(Error::Domain(format!("f_alpha: exponent must exceed -1 (got {alpha})")));
    }
    if c <= 0.0 || r < 0.0 {
        return Err(Error::Domain(format!("f_alpha: need c > 0 and r >= 0 (got c={c}, r={r})")));
    }
    let (endpoint_exp, rest): (f64, Box<dyn Fn(f64) -> f64>) = if r == 0.0 {
        if 2.0 * alpha <= -1.0 {
            return Err(Error::Domain(format!(
                "f_alpha: integral diverges at r = 0 for alpha = {alpha} <= -1/2"
            )));
        }
        (2.0 * alpha, Box::new(|_t: f64| 1.0))
    } else {
        (alpha, Box::new(move |t: f64| (t + 2.0 * r).powf(alpha)))
    };
    let full = |t: f64| (-c * t).exp() * t.powf(endpoint_exp) * rest(t);

    let (t1, t2) = if r == 0.0 {
        (1.0 / c, 1.0 / c)
    } else {
        let (a, b) = (2.0 * r, 1.0 / c);
        (a.min(b), a.max(b))
    };

    let near = if endpoint_exp < 0.0 {
        let p = 1.0 / (endpoint_exp + 1.0);
        let pref = t1.powf(endpoint_exp + 1.0) * p;
        quad::integrate(
            |w: f64| {
                let t = t1 * w.powf(p);
                pref * (-c * t).exp() * rest(t)
            },
            0.0,
            1.0,
            q,
        )?
    } else {
        quad::integrate(&full, 0.0, t1, q)?
    };
    let middle = if t2 > t1 {
        quad::integrate(&full, t1, t2, q)?.value
    } else {
        0.0
    };
    let far = quad::integrate_semi_infinite(&full, t2, 1.0 / c, q)?;
    Ok((-c * r).exp() * (near.value + middle + far.value))
}
