use std::f64::consts::PI;

use super::LogSigned;
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)` with exact zeros at the integers and argument reduction for
/// large `|x|`.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    // r in [-1, 1]
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    for (i, &p) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += p / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `log|Γ(x)|` together with the sign of `Γ(x)`.
///
/// Lanczos approximation for `x ≥ 1/2`, reflection `Γ(x)Γ(1−x) = π/sin(πx)`
/// below. Poles at the non-positive integers are reported as errors.
pub fn log_gamma_signed(x: f64) -> Result<LogSigned> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma_signed of non-finite {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x >= 0.5 {
        return Ok(LogSigned::positive(ln_gamma_lanczos(x)));
    }
    let s = sin_pi(x);
    let log_abs = PI.ln() - s.abs().ln() - ln_gamma_lanczos(1.0 - x);
    Ok(LogSigned::new(log_abs, if s > 0.0 { 1 } else { -1 }))
}
