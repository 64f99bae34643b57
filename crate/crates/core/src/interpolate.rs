//! The cardinal interpolation operator `I y(x) = Σ_j y_j L(x − j)`, the
//! Whittaker (sinc) series, the Lebesgue-type function
//! `Λ(x) = Σ_j |L(x + j)|` and estimates of operator norms.
//!
//! Sums are truncated to `‖j − ⌊x⌉‖_∞ ≤ R` (see [`TruncationPolicy`]); each
//! result carries an a-posteriori tail estimate built from a power-law
//! envelope `|L(x)| ≤ K|x|^{−s}` calibrated on the kernel.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamental::{evaluate_direct, GridFunction};
use crate::specfun::QuadSpec;
use crate::symbol::{self, cube_indices, MultiquadricParams, PeriodizationSpec};

/// Margin `ε` in the growth admissibility test `g ≤ s − 1 − ε`.
pub const GROWTH_EPSILON: f64 = 0.01;

/// Decay exponent assumed for `α = −1`, where `L` is known to decay faster
/// than any power.
pub const POISSON_SLOPE_PROXY: f64 = 8.0;

/// Real data `y_j` on `‖j‖_∞ ≤ n` with declared growth `|y_j| ≤ A(1 + ‖j‖^g)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSequence {
    d: usize,
    n: usize,
    values: Vec<f64>,
    growth: f64,
    growth_constant: f64,
    finite_support: bool,
}

impl SampleSequence {
    /// Values are row-major over `[−n, n]^d`, last axis fastest.
    ///
    /// The growth constant `A` is fitted on the inner half of the stored
    /// range; every stored entry must then satisfy the bound with `1.5A`.
    pub fn new(d: usize, n: usize, values: Vec<f64>, growth: f64) -> Result<Self> {
        Self::build(d, n, values, growth, false)
    }

    /// A sequence that vanishes outside the stored range.
    pub fn finite(d: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        Self::build(d, n, values, 0.0, true)
    }

    pub fn from_fn<F: Fn(&[i64]) -> f64>(d: usize, n: usize, growth: f64, f: F) -> Result<Self> {
        let values = row_major_cube(d, n as i64).iter().map(|j| f(j)).collect();
        Self::new(d, n, values, growth)
    }

    /// The Kronecker sequence `e₀`.
    pub fn kronecker(d: usize, n: usize) -> Self {
        let values = row_major_cube(d, n as i64)
            .iter()
            .map(|j| if j.iter().all(|&v| v == 0) { 1.0 } else { 0.0 })
            .collect();
        Self::finite(d, n, values).expect("kronecker sequence is well formed")
    }

    fn build(d: usize, n: usize, values: Vec<f64>, growth: f64, finite_support: bool) -> Result<Self> {
        let side = 2 * n + 1;
        if d == 0 || values.len() != side.pow(d as u32) {
            return Err(Error::InvalidParams(format!(
                "sequence of {} values does not fill [-{n}, {n}]^{d}",
                values.len()
            )));
        }
        if !(growth >= 0.0) || !growth.is_finite() {
            return Err(Error::InvalidParams(format!("growth exponent must be finite and >= 0 (got {growth})")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("sequence values must be finite".into()));
        }
        let idx = row_major_cube(d, n as i64);
        let weight = |j: &[i64]| 1.0 + norm(j).powf(growth);
        let inner = (n / 2).max(1) as f64;
        let a_inner = idx
            .iter()
            .zip(&values)
            .filter(|(j, _)| norm(j) <= inner)
            .map(|(j, v)| v.abs() / weight(j))
            .fold(0.0, f64::max);
        let a_all = idx.iter().zip(&values).map(|(j, v)| v.abs() / weight(j)).fold(0.0, f64::max);
        if !finite_support && a_all > 1.5 * a_inner {
            return Err(Error::Admissibility(format!(
                "stored values grow faster than the declared class |y_j| <= A(1 + |j|^{growth})"
            )));
        }
        Ok(Self { d, n, values, growth, growth_constant: a_all, finite_support })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }

    /// Smallest `A` with `|y_j| ≤ A(1 + ‖j‖^g)` on the stored entries.
    pub fn growth_constant(&self) -> f64 {
        self.growth_constant
    }

    pub fn is_finite_support(&self) -> bool {
        self.finite_support
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `y_j`; zero outside the stored range for finitely supported data,
    /// `None` otherwise.
    pub fn get(&self, j: &[i64]) -> Option<f64> {
        let n = self.n as i64;
        let mut f = 0usize;
        for &v in j {
            if v.abs() > n {
                return self.finite_support.then_some(0.0);
            }
            f = f * (2 * self.n + 1) + (v + n) as usize;
        }
        Some(self.values[f])
    }

    /// `(y_{j−s})_j` in one dimension, stored on `|j| ≤ n − |s|` unless the
    /// data are finitely supported.
    pub fn shifted(&self, s: i64) -> Result<Self> {
        if self.d != 1 {
            return Err(Error::InvalidParams("shifted is defined for d = 1".into()));
        }
        let n = if self.finite_support {
            self.n + s.unsigned_abs() as usize
        } else {
            self.n.checked_sub(s.unsigned_abs() as usize).filter(|&m| m > 0).ok_or_else(|| {
                Error::InvalidParams("shift exceeds the stored range".into())
            })?
        };
        let values = (-(n as i64)..=n as i64).map(|j| self.get(&[j - s]).unwrap_or(0.0)).collect();
        Self::build(1, n, values, self.growth, self.finite_support)
    }

    /// `a·self + b·other` on a common stored range.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::InvalidParams("sequences must share dimension and range".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Self::build(
            self.d,
            self.n,
            values,
            self.growth.max(other.growth),
            self.finite_support && other.finite_support,
        )
    }
}

fn norm(j: &[i64]) -> f64 {
    j.iter().map(|&v| (v * v) as f64).sum::<f64>().sqrt()
}

fn row_major_cube(d: usize, n: i64) -> Vec<Vec<i64>> {
    let side = (2 * n + 1) as usize;
    (0..side.pow(d as u32))
        .map(|mut f| {
            let mut j = vec![0i64; d];
            for a in (0..d).rev() {
                j[a] = (f % side) as i64 - n;
                f /= side;
            }
            j
        })
        .collect()
}

/// Largest admissible growth exponent for `params`, or `None` when the
/// parameters lie outside the ranges with a stated growth rule.
pub fn growth_limit(params: &MultiquadricParams) -> Option<f64> {
    let a = params.alpha();
    if a == -1.0 {
        Some(f64::INFINITY)
    } else if a >= 0.5 {
        Some((2.0 * a + 1.0).floor() - 1.0 - GROWTH_EPSILON)
    } else if a < -1.5 {
        Some((2.0 * a.abs() - 2.0).ceil() - 1.0 - GROWTH_EPSILON)
    } else {
        None
    }
}

pub fn check_admissible(params: &MultiquadricParams, y: &SampleSequence) -> Result<()> {
    if y.is_finite_support() {
        return Ok(());
    }
    match growth_limit(params) {
        Some(limit) if y.growth() > limit => Err(Error::Admissibility(format!(
            "growth exponent g = {} exceeds the admissible bound {limit} for α = {}",
            y.growth(),
            params.alpha()
        ))),
        _ => Ok(()),
    }
}

fn check_operator_valid(params: &MultiquadricParams) -> Result<()> {
    if params.operator_valid() {
        Ok(())
    } else {
        Err(Error::Admissibility(format!(
            "α = {} lies in the excluded band (−3/2, 1/2) ∖ {{−1}}",
            params.alpha()
        )))
    }
}

/// Decay exponent used for truncation and tail estimates.
pub fn theorem_slope(params: &MultiquadricParams) -> f64 {
    if params.alpha() == -1.0 {
        POISSON_SLOPE_PROXY
    } else {
        params.theorem_decay_exponent().filter(|s| *s > 0.0).unwrap_or(2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailBoundMode {
    TheoremSlope,
    MeasuredSlope,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub radius: usize,
    pub tail_bound_mode: TailBoundMode,
}

impl TruncationPolicy {
    pub const DEFAULT_TOL: f64 = 1e-6;
    pub const MAX_RADIUS: usize = 100_000;

    pub fn new(radius: usize, tail_bound_mode: TailBoundMode) -> Result<Self> {
        if radius < 1 {
            return Err(Error::InvalidParams("truncation radius must be >= 1".into()));
        }
        Ok(Self { radius, tail_bound_mode })
    }

    /// Smallest `R` with `(R − 1)^{−s} < tol`, `s` the theorem slope.
    pub fn for_tolerance(params: &MultiquadricParams, tol: f64) -> Self {
        let s = theorem_slope(params);
        let r = (tol.recip().powf(1.0 / s)).floor() as usize + 2;
        Self { radius: r.min(Self::MAX_RADIUS), tail_bound_mode: TailBoundMode::TheoremSlope }
    }

    pub fn default_for(params: &MultiquadricParams) -> Self {
        Self::for_tolerance(params, Self::DEFAULT_TOL)
    }
}

/// Source of `L` values for the operators.
#[derive(Debug, Clone, Copy)]
pub enum Kernel<'a> {
    /// Synthesized samples with cubic interpolation between nodes.
    Grid(&'a GridFunction),
    /// Adaptive quadrature at every point; slow, for validation.
    Direct {
        params: &'a MultiquadricParams,
        spec: &'a PeriodizationSpec,
        quad: &'a QuadSpec,
    },
}

impl Kernel<'_> {
    pub fn params(&self) -> &MultiquadricParams {
        match self {
            Kernel::Grid(g) => g.params(),
            Kernel::Direct { params, .. } => params,
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Kernel::Grid(g) => g.eval(x).ok_or_else(|| {
                Error::Domain(format!(
                    "point {x:?} lies outside the synthesized grid (half-width {})",
                    g.extent()
                ))
            }),
            Kernel::Direct { params, spec, quad } => Ok(evaluate_direct(params, x, spec, quad)?.value),
        }
    }

    fn slope(&self, mode: TailBoundMode) -> f64 {
        let theorem = theorem_slope(self.params());
        match (mode, self) {
            (TailBoundMode::MeasuredSlope, Kernel::Grid(g)) if g.d() == 1 => {
                let hi = 0.4 * g.extent();
                crate::analysis::decay_slope(g, (hi / 4.0, hi)).map(|f| -f.slope).unwrap_or(theorem)
            }
            _ => theorem,
        }
    }

    /// `K` with `|L(r e₁)| ≤ K r^{−s}` fitted on `r ∈ [R/2, R]`.
    fn envelope_constant(&self, radius: usize, s: f64) -> f64 {
        match self {
            Kernel::Grid(g) => {
                let lo = radius as f64 / 2.0;
                let hi = (radius as f64).min(g.extent());
                let k = g
                    .axis_profile()
                    .into_iter()
                    .filter(|(x, _)| *x >= lo && *x <= hi)
                    .map(|(x, v)| v.abs() * x.powf(s))
                    .fold(0.0, f64::max);
                if k > 0.0 {
                    k
                } else {
                    1.0
                }
            }
            Kernel::Direct { .. } => 1.0,
        }
    }
}

/// Values with per-point tail estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValues {
    pub values: Vec<f64>,
    pub tail_bounds: Vec<f64>,
}

/// `Σ_{‖m‖>R} A(1 + ‖x − m‖^g) K ‖m‖^{−s}` estimated by an integral over
/// cube shells.
fn power_tail(a: f64, k: f64, g: f64, s: f64, d: usize, radius: usize, xnorm: f64) -> f64 {
    let df = d as f64;
    let r = radius as f64;
    let shell = 2.0 * df * 2f64.powf(df - 1.0);
    let part = |e: f64| if s - df - e > 0.0 { r.powf(df + e - s) / (s - df - e) } else { f64::INFINITY };
    a * k * shell * (part(0.0) + 2f64.powf(g) * (xnorm.powf(g) * part(0.0) + part(g)))
}

/// `I y(x) = Σ_j y_j L(x − j)` truncated to `‖j − ⌊x⌉‖_∞ ≤ R`.
pub fn interpolate(
    kernel: &Kernel<'_>,
    y: &SampleSequence,
    xs: &[Vec<f64>],
    t: &TruncationPolicy,
) -> Result<SeriesValues> {
    let params = kernel.params();
    let d = params.d();
    if y.d() != d || xs.iter().any(|x| x.len() != d) {
        return Err(Error::InvalidParams("dimension mismatch between kernel, data and points".into()));
    }
    check_admissible(params, y)?;
    let offsets: Vec<Vec<i64>> = cube_indices(d, t.radius as i64).collect();
    let s = kernel.slope(t.tail_bound_mode);
    let k = kernel.envelope_constant(t.radius, s);
    let results: Vec<Result<(f64, f64)>> = xs
        .par_iter()
        .map(|x| {
            let centre: Vec<i64> = x.iter().map(|v| (v + 0.5).floor() as i64).collect();
            let mut acc = 0.0;
            let mut arg = vec![0.0; d];
            let mut j = vec![0i64; d];
            for m in &offsets {
                for a in 0..d {
                    j[a] = centre[a] + m[a];
                    arg[a] = x[a] - j[a] as f64;
                }
                let yj = y.get(&j).ok_or_else(|| {
                    Error::Domain(format!(
                        "x = {x:?} needs samples beyond the stored range ‖j‖ ≤ {} (radius {})",
                        y.n(),
                        t.radius
                    ))
                })?;
                if yj != 0.0 {
                    acc += yj * kernel.eval(&arg)?;
                }
            }
            let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let tail = if y.is_finite_support() && within(&centre, y.n(), t.radius) {
                0.0
            } else {
                power_tail(y.growth_constant(), k, y.growth(), s, d, t.radius, xnorm)
            };
            Ok((acc, tail))
        })
        .collect();
    collect_series(results)
}

fn within(centre: &[i64], n: usize, radius: usize) -> bool {
    centre.iter().all(|&c| c.unsigned_abs() as usize + n <= radius)
}

fn collect_series(results: Vec<Result<(f64, f64)>>) -> Result<SeriesValues> {
    let mut values = Vec::with_capacity(results.len());
    let mut tail_bounds = Vec::with_capacity(results.len());
    for r in results {
        let (v, b) = r?;
        values.push(v);
        tail_bounds.push(b);
    }
    Ok(SeriesValues { values, tail_bounds })
}

/// `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        (px).sin() / px
    }
}

/// Whittaker series `Σ_j y_j Π_a sinc(x_a − j_a)` over all stored `j`.
///
/// The tail estimate for data that are not finitely supported is
/// `A·(2/π)/(n − ‖x‖_∞)`.
pub fn whittaker(y: &SampleSequence, xs: &[Vec<f64>]) -> Result<SeriesValues> {
    let d = y.d();
    if xs.iter().any(|x| x.len() != d) {
        return Err(Error::InvalidParams("dimension mismatch between data and points".into()));
    }
    let idx = row_major_cube(d, y.n() as i64);
    let results = xs
        .par_iter()
        .map(|x| {
            let mut acc = 0.0;
            for (j, &v) in idx.iter().zip(y.values()) {
                if v != 0.0 {
                    acc += v * j.iter().zip(x).map(|(&ja, &xa)| sinc(xa - ja as f64)).product::<f64>();
                }
            }
            let tail = if y.is_finite_support() {
                0.0
            } else {
                let gap = y.n() as f64 - x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if gap > 0.0 {
                    y.growth_constant() * 2.0 / (PI * gap)
                } else {
                    f64::INFINITY
                }
            };
            Ok((acc, tail))
        })
        .collect();
    collect_series(results)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `Λ(x) = Σ_j |L(x + j)|` over `|x + j| ≤ R` (one dimension).
pub fn lambda_function(kernel: &Kernel<'_>, x: f64, t: &TruncationPolicy) -> Result<LambdaValue> {
    let params = kernel.params();
    if params.d() != 1 {
        return Err(Error::InvalidParams("lambda_function is defined for d = 1".into()));
    }
    check_operator_valid(params)?;
    let s = kernel.slope(t.tail_bound_mode);
    let k = kernel.envelope_constant(t.radius, s);
    let base = -((x + 0.5).floor() as i64);
    let r = t.radius as i64;
    let terms: Result<Vec<f64>> =
        (base - r..=base + r).into_par_iter().map(|j| kernel.eval(&[x + j as f64]).map(f64::abs)).collect();
    let value = terms?.iter().sum();
    let tail_bound = power_tail(1.0, k, 0.0, s, 1, t.radius, 0.0) / 2.0;
    Ok(LambdaValue { value, tail_bound })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2NormEstimate {
    /// `max_ξ Σ_k L̂(ξ + 2πk)²`.
    pub max_square_sum: f64,
    /// Square root of `max_square_sum`.
    pub norm: f64,
    pub argmax: Vec<f64>,
    /// Largest square sum over the uniform sample grid alone.
    pub max_sampled: f64,
    pub n_xi: usize,
}

/// `Σ_k L̂(ξ + 2πk)²` on a uniform grid of `n_xi` points over `[−π, π]`
/// (per axis; capped at 129 per axis when `d > 1`).
pub fn square_sum_profile(
    params: &MultiquadricParams,
    spec: &PeriodizationSpec,
    n_xi: usize,
) -> Result<Vec<(Vec<f64>, f64)>> {
    if n_xi < 2 {
        return Err(Error::InvalidParams("n_xi must be >= 2".into()));
    }
    let d = params.d();
    let per_axis = if d == 1 { n_xi } else { n_xi.min(129) };
    let h = 2.0 * PI / (per_axis - 1) as f64;
    let total = per_axis.pow(d as u32);
    Ok((0..total)
        .into_par_iter()
        .map(|mut f| {
            let mut xi = vec![0.0; d];
            for a in (0..d).rev() {
                xi[a] = -PI + (f % per_axis) as f64 * h;
                f /= per_axis;
            }
            // symmetric nodes: snap the centre exactly onto 0
            for v in xi.iter_mut() {
                if v.abs() < 1e-12 {
                    *v = 0.0;
                }
            }
            let s = symbol::lhat_square_sum(params, &xi, spec);
            (xi, s)
        })
        .collect())
}

/// Operator norm `‖I‖_{ℓ₂→L₂}` as the maximal square sum of `L̂` over a
/// period, refined by golden-section search around the best sample.
pub fn l2_operator_norm(
    params: &MultiquadricParams,
    spec: &PeriodizationSpec,
    n_xi: usize,
) -> Result<L2NormEstimate> {
    check_operator_valid(params)?;
    let profile = square_sum_profile(params, spec, n_xi)?;
    // ties within roundoff resolve towards the origin
    let top = profile.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let tie = 4.0 * f64::EPSILON * top.abs();
    let radius = |xi: &[f64]| xi.iter().map(|v| v * v).sum::<f64>();
    let (best_xi, best) = profile
        .iter()
        .filter(|(_, s)| *s >= top - tie)
        .min_by(|a, b| radius(&a.0).total_cmp(&radius(&b.0)))
        .map(|(xi, s)| (xi.clone(), *s))
        .expect("profile is non-empty");
    let max_sampled = top;
    let (mut argmax, mut max_square_sum) = (best_xi.clone(), best);
    if params.d() == 1 {
        let per_axis = n_xi;
        let h = 2.0 * PI / (per_axis - 1) as f64;
        let f = |t: f64| symbol::lhat_square_sum(params, &[t], spec);
        let (t, v) = golden_max(&f, best_xi[0] - h, best_xi[0] + h, 1e-12);
        if v > max_square_sum + tie {
            argmax = vec![t];
            max_square_sum = v;
        }
    }
    Ok(L2NormEstimate { max_square_sum, norm: max_square_sum.sqrt(), argmax, max_sampled, n_xi })
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup_{[0,1]} Λ` and `∫₀¹ Λ`, with discretization error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub sup: f64,
    pub sup_error: f64,
    pub integral: f64,
    pub integral_error: f64,
}

/// Bounds for `‖I‖_{ℓ∞→L∞}` and `‖I‖_{ℓ₁→L₁}` from `Λ` on `[0, 1]`.
///
/// `Λ` is sampled at the grid nodes of one period (so every term is an exact
/// node value) and again at the midpoints; the two resolutions give the
/// error estimates.
pub fn linf_l1_norm_bounds(grid: &GridFunction, t: &TruncationPolicy) -> Result<NormBounds> {
    let kernel = Kernel::Grid(grid);
    let per = grid
        .nodes_per_unit()
        .ok_or_else(|| Error::InvalidParams("grid spacing must divide 1".into()))?;
    let h = grid.spacing();
    let nodes: Result<Vec<LambdaValue>> =
        (0..per).map(|i| lambda_function(&kernel, i as f64 * h, t)).collect();
    let mids: Result<Vec<LambdaValue>> =
        (0..per).map(|i| lambda_function(&kernel, (i as f64 + 0.5) * h, t)).collect();
    let nodes = nodes?;
    let mids = mids?;
    let tail = nodes.iter().chain(&mids).map(|l| l.tail_bound).fold(0.0, f64::max);
    let sup_nodes = nodes.iter().map(|l| l.value).fold(f64::NEG_INFINITY, f64::max);
    let sup_all = mids.iter().map(|l| l.value).fold(sup_nodes, f64::max);
    let int_nodes = nodes.iter().map(|l| l.value).sum::<f64>() * h;
    let int_mids = mids.iter().map(|l| l.value).sum::<f64>() * h;
    let integral = 0.5 * (int_nodes + int_mids);
    Ok(NormBounds {
        sup: sup_all,
        sup_error: (sup_all - sup_nodes) + tail,
        integral,
        integral_error: (int_nodes - int_mids).abs() + tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fundamental::{synthesize, GridSpec};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn p(alpha: f64, c: f64) -> MultiquadricParams {
        MultiquadricParams::new(alpha, c, 1).unwrap()
    }

    fn grid_half() -> &'static GridFunction {
        static G: OnceLock<GridFunction> = OnceLock::new();
        G.get_or_init(|| {
            let q = p(0.5, 1.0);
            synthesize(&q, &GridSpec::new(32, 64, 1).unwrap(), &PeriodizationSpec::default_for(&q)).unwrap()
        })
    }

    fn pts(lo: f64, hi: f64, n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![lo + (hi - lo) * i as f64 / (n - 1) as f64]).collect()
    }

    #[test]
    fn kronecker_reproduces_l() {
        let g = grid_half();
        let k = Kernel::Grid(g);
        let y = SampleSequence::kronecker(1, 10);
        let xs = pts(-3.0, 3.0, 31);
        let r = interpolate(&k, &y, &xs, &TruncationPolicy::new(8, TailBoundMode::TheoremSlope).unwrap()).unwrap();
        for (x, v) in xs.iter().zip(&r.values) {
            assert_eq!(*v, g.eval(x).unwrap());
        }
    }

    #[test]
    fn constants_are_reproduced() {
        let g = grid_half();
        let q = g.params();
        let t = TruncationPolicy::default_for(q);
        assert_eq!(t.radius, 1002);
        let y = SampleSequence::from_fn(1, 1010, 0.0, |_| 1.0).unwrap();
        let r = interpolate(&Kernel::Grid(g), &y, &pts(-3.0, 3.0, 61), &t).unwrap();
        for v in &r.values {
            assert!((v - 1.0).abs() < 1e-5, "{v}");
        }
    }

    #[test]
    fn growth_admissibility() {
        let q = p(0.5, 1.0);
        let y = SampleSequence::from_fn(1, 50, 1.0, |j| j[0] as f64).unwrap();
        assert!(matches!(check_admissible(&q, &y), Err(Error::Admissibility(_))));
        assert!(check_admissible(&p(2.5, 1.0), &y).is_ok());
        assert!(check_admissible(&p(-1.0, 1.0), &SampleSequence::from_fn(1, 50, 3.0, |j| (j[0] as f64).powi(3)).unwrap()).is_ok());
        // undeclared growth
        assert!(SampleSequence::from_fn(1, 50, 0.0, |j| (j[0] as f64).powi(2)).is_err());
    }

    #[test]
    fn interpolation_property_linearity_and_shift() {
        let g = grid_half();
        let k = Kernel::Grid(g);
        let t = TruncationPolicy::new(40, TailBoundMode::TheoremSlope).unwrap();
        let y = SampleSequence::from_fn(1, 100, 0.0, |j| (0.3 * j[0] as f64).sin()).unwrap();
        let z = SampleSequence::from_fn(1, 100, 0.0, |j| 1.0 / (1.0 + (j[0] * j[0]) as f64)).unwrap();
        let ints: Vec<Vec<f64>> = (-60..=60).map(|j| vec![j as f64]).collect();
        let r = interpolate(&k, &y, &ints, &t).unwrap();
        for (x, v) in ints.iter().zip(&r.values) {
            assert!((v - (0.3 * x[0]).sin()).abs() < 2e-6);
        }
        let xs = pts(-5.0, 5.0, 41);
        let ry = interpolate(&k, &y, &xs, &t).unwrap();
        let rz = interpolate(&k, &z, &xs, &t).unwrap();
        let rc = interpolate(&k, &y.linear_combination(2.0, &z, -3.0).unwrap(), &xs, &t).unwrap();
        for i in 0..xs.len() {
            assert!((rc.values[i] - (2.0 * ry.values[i] - 3.0 * rz.values[i])).abs() < 1e-13);
        }
        let ys = y.shifted(1).unwrap();
        let a = interpolate(&k, &ys, &xs, &t).unwrap();
        let shifted: Vec<Vec<f64>> = xs.iter().map(|x| vec![x[0] - 1.0]).collect();
        let b = interpolate(&k, &y, &shifted, &t).unwrap();
        for i in 0..xs.len() {
            assert!((a.values[i] - b.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn whittaker_examples() {
        let e0 = SampleSequence::kronecker(1, 5);
        let xs = pts(-2.0, 2.0, 17);
        let r = whittaker(&e0, &xs).unwrap();
        for (x, v) in xs.iter().zip(&r.values) {
            assert!((v - sinc(x[0])).abs() < 1e-15);
        }
        let f = |x: f64| if x == 0.0 { 1.0 } else { (PI * x / 2.0).sin() / (PI * x / 2.0) };
        let y = SampleSequence::from_fn(1, 20000, 0.0, |j| f(j[0] as f64)).unwrap();
        let r = whittaker(&y, &[vec![3.0], vec![0.25]]).unwrap();
        assert!((r.values[0] - f(3.0)).abs() < 1e-15);
        assert!((r.values[1] - f(0.25)).abs() < r.tail_bounds[1]);
        assert!(r.tail_bounds[1] < 1e-4);
    }

    #[test]
    fn lambda_examples() {
        let g = grid_half();
        let k = Kernel::Grid(g);
        let t = TruncationPolicy::new(600, TailBoundMode::TheoremSlope).unwrap();
        let l0 = lambda_function(&k, 0.0, &t).unwrap();
        assert!((l0.value - 1.0).abs() < 1e-5);
        for x in [0.3, 0.7] {
            let a = lambda_function(&k, x, &t).unwrap().value;
            let b = lambda_function(&k, x + 1.0, &t).unwrap().value;
            assert!((a - b).abs() < 1e-9);
        }
        let bad = p(-0.5, 1.0);
        let gb = synthesize(&bad, &GridSpec::new(8, 4, 1).unwrap(), &PeriodizationSpec::default_for(&bad)).unwrap();
        assert!(matches!(lambda_function(&Kernel::Grid(&gb), 0.5, &t), Err(Error::Admissibility(_))));
    }

    #[test]
    fn norm_bounds_at_least_one() {
        let g = grid_half();
        let t = TruncationPolicy::new(400, TailBoundMode::TheoremSlope).unwrap();
        let b = linf_l1_norm_bounds(g, &t).unwrap();
        assert!(b.sup >= 1.0 - 1e-9 && b.integral >= 1.0 - 1e-9, "{b:?}");
        assert!(b.sup >= b.integral);
    }

    #[test]
    fn l2_norm_singular_case() {
        let q = p(0.5, 1.0);
        let spec = PeriodizationSpec::default_for(&q);
        let est = l2_operator_norm(&q, &spec, 4097).unwrap();
        assert!((est.max_square_sum - 1.0).abs() < 1e-6);
        assert!(est.argmax[0].abs() < 1e-6);
        assert!(symbol::lhat_square_sum(&q, &[PI / 2.0], &spec) < 1.0);
    }

    #[test]
    fn poisson_square_sum_profile_matches_closed_form() {
        let q = p(-1.0, 1.0);
        let spec = PeriodizationSpec::default_for(&q);
        for (xi, s) in square_sum_profile(&q, &spec, 257).unwrap() {
            let closed: f64 = (-8..=8).map(|k| symbol::lhat_poisson_closed(1.0, xi[0] + 2.0 * PI * k as f64).powi(2)).sum();
            assert!((s - closed).abs() < 1e-10, "xi={}: {s} vs {closed}", xi[0]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn lambda_is_periodic(x in 0.0f64..1.0) {
            let k = Kernel::Grid(grid_half());
            let t = TruncationPolicy::new(300, TailBoundMode::TheoremSlope).unwrap();
            let a = lambda_function(&k, x, &t).unwrap().value;
            let b = lambda_function(&k, x - 1.0, &t).unwrap().value;
            prop_assert!((a - b).abs() < 1e-6);
            prop_assert!(a >= 1.0 - 1e-6);
        }
    }
}
