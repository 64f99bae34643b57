//! The multiquadric symbol: `φ̂`, its `2π`-periodization and the normalized
//! symbol `L̂ = φ̂ / Σ_j φ̂(· + 2πj)`.
//!
//! With the transform convention `φ̂(ξ) = ∫ φ(x) e^{-i⟨ξ,x⟩} dx` up to the
//! constant carried by the classical Bessel representation,
//!
//! ```text
//! φ̂(ξ) = 2^{1+α}/Γ(−α) · (c/‖ξ‖)^{α+d/2} · K_{α+d/2}(c‖ξ‖),   ξ ≠ 0.
//! ```
//!
//! `φ̂` never changes sign, and every quantity here is carried as a logarithm
//! so that products of Gammas, large powers and exponentially small Bessel
//! values never overflow. All ratios `φ̂(ξ + 2πj)/φ̂(ξ)` are formed as
//! `exp(log-difference)`.
//!
//! # The Laplace-type route (d = 1)
//!
//! Writing `K_ν` through its integral over `[1, ∞)` and substituting
//! `x|ξ| = t + |ξ|` gives, for `α > −1`,
//!
//! ```text
//! φ̂(ξ) = A_α c^{2α+1} |ξ|^{−2α−1} F_α(|ξ|),
//! A_α  = √(2π) / (Γ(−α) Γ(α+1)) = −√(2/π) · sin(πα),
//! ```
//!
//! and, for `α ≤ −1` with `β = |α| − 1`,
//!
//! ```text
//! φ̂(ξ) = B_α F_β(|ξ|),   B_α = √(π/2) · 4^{−β} / Γ(β+1)².
//! ```
//!
//! [`phi_hat_laplace`] evaluates this second route by quadrature; it shares
//! nothing with the Bessel route except the Gamma function and serves as its
//! oracle.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, log_bessel_k, log_gamma_signed, log_sum_exp, LogSigned, QuadSpec};

const TWO_PI: f64 = 2.0 * PI;

/// Highest derivative order accepted by [`lhat_derivative`].
pub const MAX_DERIVATIVE_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, Deserialize)]
struct RawParams {
    alpha: f64,
    c: f64,
    d: usize,
}

/// The exponent `α`, shape parameter `c` and dimension `d` of
/// `φ(x) = (‖x‖² + c²)^α` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct MultiquadricParams {
    alpha: f64,
    c: f64,
    d: usize,
}

impl TryFrom<RawParams> for MultiquadricParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        Self::new(r.alpha, r.c, r.d)
    }
}

impl MultiquadricParams {
    pub fn new(alpha: f64, c: f64, d: usize) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite (got {alpha})")));
        }
        if alpha >= 0.0 && alpha == alpha.floor() {
            return Err(Error::InvalidParams(format!(
                "α ∈ ℕ₀ excluded: alpha = {alpha} has a measure-valued Fourier transform"
            )));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParams(format!("shape parameter c must be > 0 (got {c})")));
        }
        if d == 0 {
            return Err(Error::InvalidParams("dimension d must be >= 1".into()));
        }
        Ok(Self { alpha, c, d })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Same exponent and dimension, different shape parameter.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha, c, self.d)
    }

    /// Bessel order `α + d/2` (may be negative; `K` is even in it).
    pub fn order(&self) -> f64 {
        self.alpha + self.d as f64 / 2.0
    }

    /// The transform is a function for every admissible `α`.
    pub fn ft_valid(&self) -> bool {
        true
    }

    /// `α ∈ (−∞, −3/2) ∪ [1/2, ∞) ∖ ℕ` or `α = −1`: the range where the
    /// operator results on sequence spaces hold.
    pub fn operator_valid(&self) -> bool {
        self.alpha < -1.5 || self.alpha >= 0.5 || self.alpha == -1.0
    }

    pub fn poisson(&self) -> bool {
        self.alpha == -1.0 && self.d == 1
    }

    /// `α ∈ (0, ∞) ∖ ℕ` or `α ≤ −1`: exponents covered by the univariate
    /// decay and derivative estimates.
    pub fn within_decay_theorems(&self) -> bool {
        self.alpha > 0.0 || self.alpha <= -1.0
    }

    /// Polynomial decay exponent guaranteed for `L` in one dimension:
    /// `⌊2α+1⌋` for `α > 0`, `⌈2|α|−2⌉` for `α < −1`. `None` for the Poisson
    /// case (faster than any power) and for exponents without a stated rate.
    pub fn theorem_decay_exponent(&self) -> Option<f64> {
        let a = self.alpha;
        if a > 0.0 {
            Some((2.0 * a + 1.0).floor())
        } else if a < -1.0 {
            Some((2.0 * a.abs() - 2.0).ceil())
        } else {
            None
        }
    }

    /// Whether `φ̂` diverges at the origin (`α + d/2 ≥ 0`).
    pub fn symbol_singular_at_origin(&self) -> bool {
        self.order() >= 0.0
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
struct RawPeriodization {
    j: usize,
    tail_tol: f64,
}

/// Truncation of the periodization sum to `‖j‖_∞ ≤ J`.
///
/// The relative tail is at most `e^{−2πc(J−1)}`; [`Self::effective_j`] raises
/// `J` until that bound is below `tail_tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPeriodization")]
pub struct PeriodizationSpec {
    pub j: usize,
    pub tail_tol: f64,
}

impl TryFrom<RawPeriodization> for PeriodizationSpec {
    type Error = Error;
    fn try_from(r: RawPeriodization) -> Result<Self> {
        Self::new(r.j, r.tail_tol)
    }
}

impl PeriodizationSpec {
    pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

    pub fn new(j: usize, tail_tol: f64) -> Result<Self> {
        if j < 1 {
            return Err(Error::InvalidParams("periodization radius J must be >= 1".into()));
        }
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidParams(format!("tail_tol must lie in (0,1) (got {tail_tol})")));
        }
        Ok(Self { j, tail_tol })
    }

    /// `J = max(4, ⌈1 + 28/(2πc)⌉)` with `tail_tol = 1e−12`.
    pub fn default_for(params: &MultiquadricParams) -> Self {
        let j = (1.0 + 28.0 / (TWO_PI * params.c())).ceil().max(4.0) as usize;
        Self { j, tail_tol: Self::DEFAULT_TAIL_TOL }
    }

    /// Smallest radius `≥ J` whose tail bound `e^{−2πc(J−1)}` is below `tail_tol`.
    pub fn effective_j(&self, c: f64) -> usize {
        let need = (1.0 + (1.0 / self.tail_tol).ln() / (TWO_PI * c)).ceil() as usize;
        self.j.max(need)
    }

    /// The tail bound at the effective radius.
    pub fn tail_bound(&self, c: f64) -> f64 {
        (-TWO_PI * c * (self.effective_j(c) as f64 - 1.0)).exp()
    }
}

/// `(‖x‖² + c²)^α`.
pub fn phi(params: &MultiquadricParams, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    (r2 + params.c * params.c).powf(params.alpha)
}

/// Radial evaluator for `log|φ̂|` with the `r`-independent part folded in.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialSymbol {
    log_const: f64,
    sign: i8,
    order: f64,
    log_c: f64,
    c: f64,
    origin: f64,
}

impl RadialSymbol {
    pub(crate) fn new(params: &MultiquadricParams) -> Self {
        let g = log_gamma_signed(-params.alpha).expect("alpha is not a non-negative integer");
        let log_const = (1.0 + params.alpha) * LN_2 - g.log_abs;
        let order = params.order();
        let log_c = params.c.ln();
        // finite limit at the origin when the order is negative:
        // (c/r)^ν K_{|ν|}(cr) → Γ(|ν|) 2^{|ν|−1} c^{−2|ν|}
        let origin = if order < 0.0 {
            let m = -order;
            log_const + log_gamma_signed(m).unwrap().log_abs + (m - 1.0) * LN_2 - 2.0 * m * log_c
        } else {
            f64::INFINITY
        };
        Self { log_const, sign: g.sign, order, log_c, c: params.c, origin }
    }

    pub(crate) fn sign(&self) -> i8 {
        self.sign
    }

    /// `log|φ̂|` at radius `r ≥ 0`; `+∞` at the origin when `φ̂` diverges.
    pub(crate) fn log_abs(&self, r: f64) -> f64 {
        if r == 0.0 {
            return self.origin;
        }
        let z = self.c * r;
        self.log_const + self.order * (self.log_c - r.ln()) + log_bessel_k(self.order.abs(), z).unwrap()
    }
}

/// `log|φ̂(ξ)|` and its sign at radius `r = ‖ξ‖ > 0`.
pub fn log_phi_hat(params: &MultiquadricParams, r: f64) -> Result<LogSigned> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("log_phi_hat needs a finite radius r > 0 (got {r})")));
    }
    let s = RadialSymbol::new(params);
    Ok(LogSigned::new(s.log_abs(r), s.sign))
}

/// `φ̂(0)` when it is finite (`α + d/2 < 0`), otherwise `None`.
pub fn phi_hat_at_origin(params: &MultiquadricParams) -> Option<LogSigned> {
    let s = RadialSymbol::new(params);
    s.origin.is_finite().then(|| LogSigned::new(s.origin, s.sign))
}

/// One-dimensional `φ̂(r)` through the Laplace-type integral `F` (see the
/// module docs). Quadrature only; independent of the Bessel evaluator.
pub fn phi_hat_laplace(params: &MultiquadricParams, r: f64, q: &QuadSpec) -> Result<f64> {
    if params.d != 1 {
        return Err(Error::InvalidParams("the Laplace route is one-dimensional".into()));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("phi_hat_laplace needs r > 0 (got {r})")));
    }
    let a = params.alpha;
    let c = params.c;
    if a > -1.0 {
        let pref = laplace_constant(a)?
            .mul(LogSigned::positive((2.0 * a + 1.0) * (c.ln() - r.ln())));
        Ok(pref.value() * specfun::f_alpha(a, c, r, q)?)
    } else {
        let beta = a.abs() - 1.0;
        let log_b = 0.5 * (PI / 2.0).ln() - 2.0 * beta * LN_2 - 2.0 * log_gamma_signed(beta + 1.0)?.log_abs;
        Ok(log_b.exp() * specfun::f_alpha(beta, c, r, q)?)
    }
}

/// `A_α = √(2π)/(Γ(−α)Γ(α+1))` for `α > −1`, `α ∉ ℕ₀`.
pub fn laplace_constant(alpha: f64) -> Result<LogSigned> {
    let g1 = log_gamma_signed(-alpha)?;
    let g2 = log_gamma_signed(alpha + 1.0)?;
    Ok(LogSigned::positive(0.5 * TWO_PI.ln()).div(g1.mul(g2)))
}

/// Splits `ξ` into its representative in `[−π, π]^d` and the lattice shift.
pub(crate) fn reduce(xi: &[f64]) -> (Vec<f64>, Vec<i64>) {
    let k: Vec<i64> = xi.iter().map(|v| (v / TWO_PI).round() as i64).collect();
    let red = xi.iter().zip(&k).map(|(v, &kk)| v - TWO_PI * kk as f64).collect();
    (red, k)
}

/// Iterates over all multi-indices with `‖j‖_∞ ≤ radius`.
pub(crate) fn cube_indices(d: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(d as u32);
    (0..total).map(move |mut flat| {
        let mut idx = vec![0i64; d];
        for v in idx.iter_mut() {
            *v = (flat % side) as i64 - radius;
            flat /= side;
        }
        idx
    })
}

fn norm_shifted(red: &[f64], j: &[i64]) -> f64 {
    red.iter()
        .zip(j)
        .map(|(v, &jj)| {
            let s = v + TWO_PI * jj as f64;
            s * s
        })
        .sum::<f64>()
        .sqrt()
}

/// Logs of `|φ̂(ξ' + 2πj)|` for `‖j‖_∞ ≤ J` around the reduced point `ξ'`.
struct PeriodTerms {
    indices: Vec<Vec<i64>>,
    logs: Vec<f64>,
}

impl PeriodTerms {
    fn new(sym: &RadialSymbol, red: &[f64], radius: usize) -> Self {
        let indices: Vec<Vec<i64>> = cube_indices(red.len(), radius as i64).collect();
        let logs = indices.iter().map(|j| sym.log_abs(norm_shifted(red, j))).collect();
        Self { indices, logs }
    }

    fn singular(&self) -> Option<usize> {
        self.logs.iter().position(|l| l.is_infinite() && *l > 0.0)
    }

    fn position(&self, k: &[i64]) -> Option<usize> {
        self.indices.iter().position(|j| j.as_slice() == k)
    }
}

/// `log Σ_{‖j‖_∞ ≤ J} |φ̂(ξ + 2πj)|`, summed around the representative of `ξ`
/// in `[−π, π]^d` so the result is exactly `2π`-periodic.
///
/// Fails on the lattice `2πℤ^d` when `φ̂` is singular at the origin.
pub fn periodized_symbol_log(
    params: &MultiquadricParams,
    xi: &[f64],
    spec: &PeriodizationSpec,
) -> Result<LogSigned> {
    check_point(params, xi)?;
    let sym = RadialSymbol::new(params);
    let (red, _) = reduce(xi);
    let terms = PeriodTerms::new(&sym, &red, spec.effective_j(params.c));
    if terms.singular().is_some() {
        return Err(Error::Domain(
            "periodized symbol is infinite on the lattice 2πℤ^d when α + d/2 ≥ 0".into(),
        ));
    }
    Ok(LogSigned::new(log_sum_exp(terms.logs.iter().copied()), sym.sign()))
}

fn check_point(params: &MultiquadricParams, xi: &[f64]) -> Result<()> {
    if xi.len() != params.d {
        return Err(Error::InvalidParams(format!(
            "point has dimension {} but params.d = {}",
            xi.len(),
            params.d
        )));
    }
    if xi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite frequency".into()));
    }
    Ok(())
}

/// Shared machinery for `L̂` values at `ξ + 2πk` for all shifts `k` in the
/// truncation cube: one set of Bessel evaluations, one log-sum-exp.
pub(crate) struct LhatFamily {
    terms: PeriodTerms,
    log_total: f64,
    singular: Option<usize>,
}

impl LhatFamily {
    pub(crate) fn new(sym: &RadialSymbol, red: &[f64], radius: usize) -> Self {
        let terms = PeriodTerms::new(sym, red, radius);
        let singular = terms.singular();
        let log_total = log_sum_exp(terms.logs.iter().copied());
        Self { terms, log_total, singular }
    }

    /// `L̂` at `ξ' + 2πj` for the `i`-th shift.
    pub(crate) fn value(&self, i: usize) -> f64 {
        match self.singular {
            Some(s) => {
                if s == i {
                    1.0
                } else {
                    0.0
                }
            }
            None => (self.terms.logs[i] - self.log_total).exp(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.logs.len()
    }
}

/// `L̂(ξ) = φ̂(ξ)/Σ_j φ̂(ξ + 2πj)` in `[0, 1]`.
///
/// Evaluated as `exp(log|φ̂(ξ)| − log Σ_j |φ̂(ξ+2πj)|)`, which is the ratio
/// form `[1 + Σ_{j≠0} a_j(ξ)]^{−1}` with every `a_j` built from a
/// log-difference. On the lattice, where `φ̂` is singular for
/// `α + d/2 ≥ 0`, the limit values `L̂(2πk) = δ_{0,k}` are returned; for
/// `α + d/2 < 0` the symbol is finite there and the same formula applies.
pub fn lhat(params: &MultiquadricParams, xi: &[f64], spec: &PeriodizationSpec) -> f64 {
    lhat_checked(params, xi, spec).expect("lhat: invalid point")
}

/// [`lhat`] with dimension and finiteness checks surfaced as errors.
pub fn lhat_checked(params: &MultiquadricParams, xi: &[f64], spec: &PeriodizationSpec) -> Result<f64> {
    check_point(params, xi)?;
    let sym = RadialSymbol::new(params);
    Ok(lhat_with(&sym, params, xi, spec))
}

pub(crate) fn lhat_with(
    sym: &RadialSymbol,
    params: &MultiquadricParams,
    xi: &[f64],
    spec: &PeriodizationSpec,
) -> f64 {
    let (red, k0) = reduce(xi);
    let radius = spec.effective_j(params.c);
    let family = LhatFamily::new(sym, &red, radius);
    match family.terms.position(&k0) {
        Some(i) => family.value(i),
        None => {
            // ξ lies beyond the truncation cube; its own term is negligible
            // in the denominator but still forms the numerator
            if family.singular.is_some() {
                return 0.0;
            }
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            (sym.log_abs(r) - family.log_total).exp()
        }
    }
}

/// `Σ_{‖k‖_∞ ≤ J} L̂(ξ + 2πk)²`, the quantity whose maximum over
/// `[−π, π]^d` is the squared `ℓ₂ → L₂` operator norm.
pub fn lhat_square_sum(params: &MultiquadricParams, xi: &[f64], spec: &PeriodizationSpec) -> f64 {
    let sym = RadialSymbol::new(params);
    let (red, _) = reduce(xi);
    let family = LhatFamily::new(&sym, &red, spec.effective_j(params.c));
    (0..family.len()).map(|i| family.value(i).powi(2)).sum()
}

/// `Σ_{‖k‖_∞ ≤ J} L̂(ξ + 2πk)`; equal to one up to the truncation tail.
pub fn lhat_partition_sum(params: &MultiquadricParams, xi: &[f64], spec: &PeriodizationSpec) -> f64 {
    let sym = RadialSymbol::new(params);
    let (red, _) = reduce(xi);
    let family = LhatFamily::new(&sym, &red, spec.effective_j(params.c));
    (0..family.len()).map(|i| family.value(i)).sum()
}

/// Closed-form `L̂` for the univariate Poisson kernel `α = −1`, where
/// `φ̂ ∝ e^{−c|ξ|}` and the periodization is a pair of geometric series:
///
/// ```text
/// L̂(ξ) = e^{−c(|ξ| − |ξ'|)} / (1 + (e^{−c(2π − 2|ξ'|)} + e^{−2πc}) / (1 − e^{−2πc}))
/// ```
///
/// with `ξ'` the representative of `ξ` in `[−π, π]`. At `ξ = 0` this is
/// `tanh(πc)`.
pub fn lhat_poisson_closed(c: f64, xi: f64) -> f64 {
    let red = xi - TWO_PI * (xi / TWO_PI).round();
    let a = red.abs();
    let q = (-TWO_PI * c).exp();
    let others = ((-c * (TWO_PI - 2.0 * a)).exp() + q) / (1.0 - q);
    (-c * (xi.abs() - a)).exp() / (1.0 + others)
}

/// A finite-difference derivative with its extrapolation error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

/// Relative convergence threshold for [`lhat_derivative`].
pub const DERIVATIVE_TOL: f64 = 1e-6;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `k`-th central difference quotient with step `h`.
fn central_difference<F: Fn(f64) -> f64>(f: &F, k: usize, x: f64, h: f64) -> f64 {
    let half = k as f64 / 2.0;
    let mut acc = 0.0;
    for i in 0..=k {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(k, i) * f(x + (half - i as f64) * h);
    }
    acc / h.powi(k as i32)
}

/// Ridders' polynomial extrapolation of central differences to `h → 0`.
pub(crate) fn ridders<F: Fn(f64) -> f64>(f: &F, k: usize, x: f64, h: f64) -> Derivative {
    const NTAB: usize = 10;
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const SAFE: f64 = 2.0;
    let mut a = [[0.0f64; NTAB]; NTAB];
    let mut hh = h;
    a[0][0] = central_difference(f, k, x, hh);
    let mut err = f64::INFINITY;
    let mut ans = a[0][0];
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = central_difference(f, k, x, hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let errt = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if errt <= err {
                err = errt;
                ans = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= SAFE * err {
            break;
        }
    }
    Derivative { value: ans, error: err }
}

/// `L̂^{(k)}(ξ)` for `d = 1` by Ridders-extrapolated central differences,
/// starting from step `h`.
///
/// When `α + 1/2 ∈ (0, k)` the symbol has only limited smoothness on the
/// lattice `2πℤ`, so `ξ` must stay at least `k·h/2` away from it.
pub fn lhat_derivative(
    params: &MultiquadricParams,
    k: usize,
    xi: f64,
    h: f64,
) -> Result<Derivative> {
    if params.d != 1 {
        return Err(Error::InvalidParams("lhat_derivative is univariate".into()));
    }
    if k == 0 || k > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidParams(format!(
            "derivative order must be in 1..={MAX_DERIVATIVE_ORDER} (got {k})"
        )));
    }
    if !(h > 0.0 && h.is_finite() && xi.is_finite()) {
        return Err(Error::Domain(format!("invalid step h={h} or point xi={xi}")));
    }
    let order = params.order();
    let dist = (xi - TWO_PI * (xi / TWO_PI).round()).abs();
    if order > 0.0 && order < k as f64 && dist <= 0.5 * k as f64 * h {
        return Err(Error::Domain(format!(
            "xi = {xi} is within the stencil of the lattice 2πℤ where L̂ has fewer than {k} derivatives"
        )));
    }
    let d = lhat_derivative_estimate(params, k, xi, h);
    if d.error > DERIVATIVE_TOL * d.value.abs().max(1.0) {
        return Err(Error::StepSize { estimate: d.value, error: d.error });
    }
    Ok(d)
}

/// [`lhat_derivative`] without the convergence and lattice checks.
pub(crate) fn lhat_derivative_estimate(
    params: &MultiquadricParams,
    k: usize,
    xi: f64,
    h: f64,
) -> Derivative {
    let sym = RadialSymbol::new(params);
    let spec = PeriodizationSpec::default_for(params);
    let f = |x: f64| lhat_with(&sym, params, &[x], &spec);
    ridders(&f, k, xi, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, c: f64, d: usize) -> MultiquadricParams {
        MultiquadricParams::new(alpha, c, d).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(MultiquadricParams::new(2.0, 1.0, 1).is_err());
        assert!(MultiquadricParams::new(0.0, 1.0, 1).is_err());
        let e = MultiquadricParams::new(3.0, 1.0, 1).unwrap_err().to_string();
        assert!(e.contains("α ∈ ℕ₀ excluded"), "{e}");
        assert!(MultiquadricParams::new(0.5, 0.0, 1).is_err());
        assert!(MultiquadricParams::new(0.5, 1.0, 0).is_err());
        assert!(MultiquadricParams::new(-2.0, 1.0, 1).is_ok());
    }

    #[test]
    fn classification() {
        assert!(p(0.5, 1.0, 1).operator_valid());
        assert!(p(-1.0, 1.0, 1).operator_valid());
        assert!(p(-1.0, 1.0, 1).poisson());
        assert!(!p(-1.0, 1.0, 2).poisson());
        assert!(!p(-0.5, 1.0, 1).operator_valid());
        assert!(!p(-1.25, 1.0, 1).operator_valid());
        assert!(p(-2.5, 1.0, 1).operator_valid());
        assert!(!p(0.25, 1.0, 1).operator_valid());
        assert_eq!(p(0.5, 1.0, 1).theorem_decay_exponent(), Some(2.0));
        assert_eq!(p(-2.5, 1.0, 1).theorem_decay_exponent(), Some(3.0));
        assert_eq!(p(-1.0, 1.0, 1).theorem_decay_exponent(), None);
    }

    #[test]
    fn params_serde_validates() {
        let ok: MultiquadricParams = serde_json::from_str(r#"{"alpha":0.5,"c":1.0,"d":1}"#).unwrap();
        assert_eq!(ok, p(0.5, 1.0, 1));
        assert!(serde_json::from_str::<MultiquadricParams>(r#"{"alpha":2.0,"c":1.0,"d":1}"#).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&p(0.5, 1.0, 1), &[0.0]), 1.0);
        assert_eq!(phi(&p(-1.0, 2.0, 1), &[0.0]), 0.25);
        assert!((phi(&p(0.5, 3.0, 2), &[3.0, 4.0]) - 34f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poisson_symbol_is_exponential() {
        let q = p(-1.0, 1.0, 1);
        let l1 = log_phi_hat(&q, 1.0).unwrap();
        let l2 = log_phi_hat(&q, 2.0).unwrap();
        assert!((l2.log_abs - l1.log_abs + 1.0).abs() < 1e-13);
        assert_eq!(l1.sign, 1);
    }

    #[test]
    fn symbol_sign_follows_gamma() {
        // Γ(−1/2) < 0, Γ(−3/2) > 0, Γ(1/2) > 0
        assert_eq!(log_phi_hat(&p(0.5, 1.0, 1), 1.0).unwrap().sign, -1);
        assert_eq!(log_phi_hat(&p(1.5, 1.0, 1), 1.0).unwrap().sign, 1);
        assert_eq!(log_phi_hat(&p(-0.5, 1.0, 1), 1.0).unwrap().sign, 1);
    }

    #[test]
    fn log_phi_hat_domain() {
        assert!(log_phi_hat(&p(0.5, 1.0, 1), 0.0).is_err());
        assert!(log_phi_hat(&p(0.5, 1.0, 1), -1.0).is_err());
    }

    #[test]
    fn exponential_decay_between_radii() {
        let q = p(0.5, 1.0, 1);
        let lr = log_phi_hat(&q, 1.0).unwrap().log_abs;
        let lr3 = log_phi_hat(&q, 3.0).unwrap().log_abs;
        assert!(lr3 <= lr - 1.0 * (3.0 - 1.0));
    }

    #[test]
    fn laplace_route_matches_bessel_route() {
        let quad = QuadSpec::default();
        let q = p(0.5, 1.0, 1);
        let bessel = log_phi_hat(&q, 1.0).unwrap().value();
        let lap = phi_hat_laplace(&q, 1.0, &quad).unwrap();
        assert!((bessel / lap - 1.0).abs() < 1e-8, "{bessel} vs {lap}");
        // and the prefactor identity A_{1/2} = −√(2/π)
        let a = laplace_constant(0.5).unwrap().value();
        assert!((a + (2.0 / PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn origin_limit_for_negative_order() {
        let q = p(-1.0, 2.0, 1);
        let origin = phi_hat_at_origin(&q).unwrap().value();
        let near = log_phi_hat(&q, 1e-9).unwrap().value();
        assert!((origin / near - 1.0).abs() < 1e-8);
        assert!(phi_hat_at_origin(&p(0.5, 1.0, 1)).is_none());
        assert!(phi_hat_at_origin(&p(-0.5, 1.0, 1)).is_none());
    }

    #[test]
    fn periodized_symbol_is_periodic() {
        let q = p(0.5, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let a = periodized_symbol_log(&q, &[0.7], &spec).unwrap();
        let b = periodized_symbol_log(&q, &[0.7 + TWO_PI], &spec).unwrap();
        assert!((a.log_abs - b.log_abs).abs() < 1e-12);
        assert!(periodized_symbol_log(&q, &[TWO_PI], &spec).is_err());
    }

    #[test]
    fn periodized_poisson_geometric_series() {
        // Σ_{|j|≤10} √(π/2) e^{-2π|j|} at ξ = 0, c = 1
        let q = p(-1.0, 1.0, 1);
        let spec = PeriodizationSpec::new(10, 1e-12).unwrap();
        let got = periodized_symbol_log(&q, &[0.0], &spec).unwrap().value();
        let r = (-TWO_PI).exp();
        let geometric = 1.0 + 2.0 * r * (1.0 - r.powi(10)) / (1.0 - r);
        let want = (PI / 2.0).sqrt() * geometric;
        assert!((got / want - 1.0).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn periodization_truncation_stability() {
        let q = p(0.5, 1.0, 1);
        let a = periodized_symbol_log(&q, &[1.3], &PeriodizationSpec { j: 4, tail_tol: 0.9 }).unwrap();
        let b = periodized_symbol_log(&q, &[1.3], &PeriodizationSpec { j: 12, tail_tol: 0.9 }).unwrap();
        assert!((a.value() / b.value() - 1.0).abs() < (-TWO_PI * 3.0).exp());
    }

    #[test]
    fn lhat_lattice_values() {
        for q in [p(0.5, 1.0, 1), p(1.5, 2.0, 1), p(-0.5, 1.0, 1), p(0.5, 1.0, 2)] {
            let spec = PeriodizationSpec::default_for(&q);
            let zero = vec![0.0; q.d()];
            assert_eq!(lhat(&q, &zero, &spec), 1.0);
            let mut k = zero.clone();
            k[0] = TWO_PI;
            assert!(lhat(&q, &k, &spec) < 1e-12);
        }
    }

    #[test]
    fn poisson_limit_at_origin() {
        let q = p(-1.0, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let v = lhat(&q, &[0.0], &spec);
        assert!((v - 0.996_272_1).abs() < 1e-6);
        assert!((v - PI.tanh()).abs() < 1e-12);
    }

    #[test]
    fn poisson_closed_form_agrees_with_pipeline() {
        let q = p(-1.0, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        for i in 0..=200 {
            let xi = -3.0 * PI + 6.0 * PI * i as f64 / 200.0;
            let a = lhat(&q, &[xi], &spec);
            let b = lhat_poisson_closed(1.0, xi);
            assert!((a - b).abs() < 1e-10, "xi={xi}: {a} vs {b}");
            assert_eq!(lhat_poisson_closed(1.0, -xi), b);
        }
        assert!((lhat_poisson_closed(1.0, 0.0) - 0.996_272_1).abs() < 1e-7);
    }

    #[test]
    fn lhat_approaches_indicator() {
        let spec_for = |q: &MultiquadricParams| PeriodizationSpec::default_for(q);
        let v1 = lhat(&p(0.5, 1.0, 1), &[1.0], &spec_for(&p(0.5, 1.0, 1)));
        let v10 = lhat(&p(0.5, 10.0, 1), &[1.0], &spec_for(&p(0.5, 10.0, 1)));
        let v20 = lhat(&p(0.5, 20.0, 1), &[1.0], &spec_for(&p(0.5, 20.0, 1)));
        assert!(v10 > v1);
        assert!(v20 > 1.0 - 1e-3);
    }

    #[test]
    fn lhat_derivative_examples() {
        let q = p(0.5, 1.0, 1);
        let d0 = lhat_derivative(&q, 1, 0.0, 0.1).unwrap();
        assert!(d0.value.abs() < 1e-10);

        let pq = p(-1.0, 1.0, 1);
        let d1 = lhat_derivative(&pq, 1, 1.0, 0.1).unwrap();
        // d/dξ (1−r)/(1 + r e^{2cξ}) on [0, π], r = e^{−2πc}
        let r = (-TWO_PI).exp();
        let e = (2.0f64).exp();
        let exact = -(1.0 - r) * 2.0 * r * e / (1.0 + r * e).powi(2);
        assert!((d1.value - exact).abs() < 1e-6, "{} vs {exact}", d1.value);

        let xi = PI / 2.0;
        let lo = lhat_derivative(&p(0.5, 1.0, 1), 1, xi, 0.1).unwrap().value.abs();
        let hi = lhat_derivative(&p(0.5, 10.0, 1), 1, xi, 0.01).unwrap().value.abs();
        assert!(hi < lo);
    }

    #[test]
    fn lhat_derivative_rejects_bad_requests() {
        let q = p(0.5, 1.0, 1);
        assert!(lhat_derivative(&q, 0, 1.0, 0.1).is_err());
        assert!(lhat_derivative(&q, 5, 1.0, 0.1).is_err());
        assert!(lhat_derivative(&p(0.5, 1.0, 2), 1, 1.0, 0.1).is_err());
        // order 1 ∈ (0, 2): lattice too close for k = 2
        assert!(lhat_derivative(&q, 2, TWO_PI + 0.01, 0.1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn lhat_in_unit_interval_and_even(xi in -12.0f64..12.0, alpha_i in 0usize..5, c in 0.5f64..8.0) {
            let alpha = [0.5, 1.5, -0.5, -1.0, -2.5][alpha_i];
            let q = p(alpha, c, 1);
            let spec = PeriodizationSpec::default_for(&q);
            let v = lhat(&q, &[xi], &spec);
            proptest::prop_assert!((0.0..=1.0).contains(&v));
            proptest::prop_assert!((v - lhat(&q, &[-xi], &spec)).abs() < 1e-14);
        }

        #[test]
        fn partition_and_square_sum(x in -PI..PI, y in -PI..PI, alpha_i in 0usize..4, c in 0.5f64..4.0) {
            let alpha = [0.5, -1.5, -1.0, 2.5][alpha_i];
            for d in [1usize, 2] {
                let q = p(alpha, c, d);
                let spec = PeriodizationSpec::default_for(&q);
                let xi = if d == 1 { vec![x] } else { vec![x, y] };
                let s = lhat_partition_sum(&q, &xi, &spec);
                proptest::prop_assert!((s - 1.0).abs() < 2.0 * spec.tail_tol + 1e-14);
                proptest::prop_assert!(lhat_square_sum(&q, &xi, &spec) <= 1.0 + 1e-8);
            }
        }

        #[test]
        fn exponential_dominance(xi in (PI + 0.01)..(3.0 * PI), c in 0.5f64..4.0) {
            let q = p(0.5, c, 1);
            let spec = PeriodizationSpec::default_for(&q);
            let red = xi - TWO_PI;
            let bound = (-c * (xi.abs() - red.abs())).exp();
            proptest::prop_assert!(lhat(&q, &[xi], &spec) <= bound * (1.0 + 1e-12));
        }

        #[test]
        fn radial_in_two_dimensions(x in -8.0f64..8.0, y in -8.0f64..8.0) {
            let q = p(0.5, 1.0, 2);
            let spec = PeriodizationSpec::default_for(&q);
            let base = lhat(&q, &[x, y], &spec);
            for pt in [[-x, y], [x, -y], [y, x], [-y, -x]] {
                proptest::prop_assert!((lhat(&q, &pt, &spec) - base).abs() < 1e-13);
            }
        }
    }
}
