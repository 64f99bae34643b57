//! Numerical studies of the structural properties of `L`: decay slopes,
//! convergence to `sinc` and to band-limited functions as `c` grows,
//! polynomial reproduction, and integrability of derivatives of `L̂`.
//!
//! Every study returns a [`StudyReport`]: metric arrays plus verdicts, each
//! verdict naming the metric, the rule and the tolerance it was judged with,
//! so that it can be recomputed from the report alone.

use std::f64::consts::PI;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fundamental::{synthesize, GridFunction, GridSpec};
use crate::interpolate::{self, sinc, Kernel, SampleSequence, TailBoundMode, TruncationPolicy};
use crate::specfun::{quad, QuadSpec};
use crate::symbol::{self, MultiquadricParams, PeriodizationSpec, MAX_DERIVATIVE_ORDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    SincConvergence,
    PwRecovery,
    PolynomialReproduction,
    DecaySlope,
    LhatDerivativeL1,
    LambdaGrowth,
    L2Norm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictRule {
    /// `v[i+1] < v[i]` for every consecutive pair.
    StrictlyDecreasing,
    /// `v[i] < tol` for all `i`.
    AllBelow,
    /// `v[i] > tol` for all `i`.
    AllAbove,
    /// `v[last] < tol`.
    LastBelow,
    /// `v[i] ≤ tol·v[0]` for all `i`.
    AllBelowFirstTimes,
    /// `max v / min v < tol`.
    MaxOverMinBelow,
    /// `|v[i] − 1| ≤ tol` for all `i`.
    NearOne,
}

impl VerdictRule {
    pub fn check(&self, v: &[f64], tol: f64) -> bool {
        if v.is_empty() || v.iter().any(|x| x.is_nan()) {
            return false;
        }
        match self {
            VerdictRule::StrictlyDecreasing => v.windows(2).all(|w| w[1] < w[0]),
            VerdictRule::AllBelow => v.iter().all(|x| *x < tol),
            VerdictRule::AllAbove => v.iter().all(|x| *x > tol),
            VerdictRule::LastBelow => v[v.len() - 1] < tol,
            VerdictRule::AllBelowFirstTimes => v.iter().all(|x| *x <= tol * v[0]),
            VerdictRule::MaxOverMinBelow => {
                let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
                min > 0.0 && max / min < tol
            }
            VerdictRule::NearOne => v.iter().all(|x| (x - 1.0).abs() <= tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub metric: String,
    pub rule: VerdictRule,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub alpha: f64,
    pub c: f64,
    pub d: usize,
}

impl From<&MultiquadricParams> for ParamPoint {
    fn from(p: &MultiquadricParams) -> Self {
        Self { alpha: p.alpha(), c: p.c(), d: p.d() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub study_kind: StudyKind,
    pub params_swept: Vec<ParamPoint>,
    /// Numeric settings the study ran with (windows, radii, grid sizes).
    pub settings: IndexMap<String, f64>,
    pub metrics: IndexMap<String, Vec<f64>>,
    pub verdicts: IndexMap<String, Verdict>,
    /// Set when some swept parameters have no decay theorem behind them.
    pub outside_stated_theorems: bool,
}

impl StudyReport {
    pub fn new(study_kind: StudyKind) -> Self {
        Self {
            study_kind,
            params_swept: Vec::new(),
            settings: IndexMap::new(),
            metrics: IndexMap::new(),
            verdicts: IndexMap::new(),
            outside_stated_theorems: false,
        }
    }

    pub fn add_params(&mut self, p: &MultiquadricParams) {
        self.params_swept.push(p.into());
        if !p.within_decay_theorems() {
            self.outside_stated_theorems = true;
        }
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.settings.insert(name.to_string(), value);
    }

    pub fn metric(&mut self, name: &str, values: Vec<f64>) {
        self.metrics.insert(name.to_string(), values);
    }

    /// Judges `metric` with `rule` and records the outcome.
    pub fn verdict(&mut self, name: &str, metric: &str, rule: VerdictRule, tolerance: f64) -> bool {
        let passed = self.metrics.get(metric).map(|v| rule.check(v, tolerance)).unwrap_or(false);
        self.verdicts.insert(
            name.to_string(),
            Verdict { metric: metric.to_string(), rule, tolerance, passed },
        );
        passed
    }

    pub fn passed(&self, name: &str) -> bool {
        self.verdicts.get(name).map(|v| v.passed).unwrap_or(false)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.values().all(|v| v.passed)
    }

    /// True when every stored verdict agrees with a fresh evaluation of its
    /// rule on the stored metric.
    pub fn is_consistent(&self) -> bool {
        self.verdicts.values().all(|v| {
            self.metrics.get(&v.metric).map(|m| v.rule.check(m, v.tolerance)) == Some(v.passed)
        })
    }

    /// Metric arrays as CSV columns (`index` first, empty cells where an
    /// array is shorter).
    pub fn metrics_csv(&self) -> String {
        let mut out = String::from("index");
        for k in self.metrics.keys() {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        let rows = self.metrics.values().map(Vec::len).max().unwrap_or(0);
        for i in 0..rows {
            out.push_str(&i.to_string());
            for v in self.metrics.values() {
                out.push(',');
                if let Some(x) = v.get(i) {
                    out.push_str(&format!("{x:.16e}"));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Least-squares fit of `log|L|` against `log|x|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    pub floor: f64,
}

/// Decay exponent of `L` over `window` (positive axis, `d = 1`).
///
/// The envelope is the maximum of `|L|` over each unit cell `[k, k+1)` in the
/// window; cells whose maximum is below ten times the recorded synthesis
/// error are dropped.
pub fn decay_slope(g: &GridFunction, window: (f64, f64)) -> Result<SlopeFit> {
    if g.d() != 1 {
        return Err(Error::InvalidParams("decay_slope needs a univariate grid".into()));
    }
    if window.1 > g.extent() {
        return Err(Error::Domain(format!(
            "window end {} exceeds the grid half-width {}",
            window.1,
            g.extent()
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = g.axis_profile().into_iter().unzip();
    decay_slope_samples(&xs, &ys, window, 10.0 * g.errors().total())
}

/// [`decay_slope`] on raw samples.
pub fn decay_slope_samples(xs: &[f64], ys: &[f64], window: (f64, f64), floor: f64) -> Result<SlopeFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParams(format!("window must satisfy 0 < lo < hi (got {lo}, {hi})")));
    }
    let cells = (hi - lo).floor() as usize;
    let mut env: Vec<(f64, f64)> = vec![(0.0, 0.0); cells.max(1)];
    for (&x, &y) in xs.iter().zip(ys) {
        if x < lo || x >= hi {
            continue;
        }
        let i = ((x - lo).floor() as usize).min(env.len() - 1);
        if y.abs() > env[i].1 {
            env[i] = (x, y.abs());
        }
    }
    let pts: Vec<(f64, f64)> =
        env.into_iter().filter(|(_, y)| *y > floor).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 5 {
        return Err(Error::InsufficientSignal(format!(
            "{} envelope points above the error floor {floor:e} in [{lo}, {hi}]",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(SlopeFit { slope, intercept: my - slope * mx, points: pts.len(), floor })
}

/// Minimum grid resolution (`M`) used by the studies.
pub const STUDY_MIN_M: usize = 16;

/// A grid for `params` covering `|x| ≤ half_extent` with margin against
/// aliasing.
pub fn study_grid(params: &MultiquadricParams, half_extent: f64) -> Result<GridFunction> {
    let spec = GridSpec::auto(params, half_extent, STUDY_MIN_M);
    synthesize(params, &spec, &PeriodizationSpec::default_for(params))
}

fn check_sweep(cs: &[f64]) -> Result<()> {
    if cs.is_empty() || cs.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::InvalidParams("c sweep must be a non-empty list of positive values".into()));
    }
    Ok(())
}

fn window_nodes(g: &GridFunction, window: (f64, f64)) -> Vec<(f64, f64)> {
    g.axis_profile().into_iter().filter(|(x, _)| *x >= window.0 && *x <= window.1).collect()
}

/// `sup_{x ∈ window} |L_{α,c}(x) − sinc(x)|` for each `c`.
pub fn sinc_convergence(alpha: f64, cs: &[f64], window: (f64, f64)) -> Result<StudyReport> {
    check_sweep(cs)?;
    let mut rep = StudyReport::new(StudyKind::SincConvergence);
    rep.set("window_lo", window.0);
    rep.set("window_hi", window.1);
    let reach = window.0.abs().max(window.1.abs());
    let mut sup = Vec::with_capacity(cs.len());
    for &c in cs {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        rep.add_params(&p);
        let g = study_grid(&p, (4.0 * reach).max(64.0 + 8.0 * c))?;
        sup.push(window_nodes(&g, window).iter().map(|(x, v)| (v - sinc(*x)).abs()).fold(0.0, f64::max));
    }
    rep.metric("c", cs.to_vec());
    rep.metric("sup_error", sup);
    rep.verdict("sup_error_strictly_decreasing", "sup_error", VerdictRule::StrictlyDecreasing, 0.0);
    rep.verdict("final_sup_error_small", "sup_error", VerdictRule::LastBelow, 0.05);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PwKind {
    /// Inverse transform of `ξ²` on `[−π, π]`.
    XiSquaredHat,
    /// `sin(ax)/(ax)`.
    SincA,
    /// `x^k sin(ax)/(ax)`.
    PolyTimesSincA,
    /// Inverse transform of a piecewise-linear table on `[−π, π]`.
    CustomHatTable,
}

/// A band-limited test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PwFunctionSpec {
    pub kind: PwKind,
    pub a: f64,
    pub k: u32,
    /// `(ξ, f̂(ξ))` knots, only for [`PwKind::CustomHatTable`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(f64, f64)>>,
}

impl PwFunctionSpec {
    pub fn xi_squared_hat() -> Self {
        Self { kind: PwKind::XiSquaredHat, a: PI, k: 0, table: None }
    }

    pub fn sinc_a(a: f64) -> Self {
        Self { kind: PwKind::SincA, a, k: 0, table: None }
    }

    pub fn poly_times_sinc_a(a: f64, k: u32) -> Self {
        Self { kind: PwKind::PolyTimesSincA, a, k, table: None }
    }

    pub fn custom(table: Vec<(f64, f64)>) -> Self {
        Self { kind: PwKind::CustomHatTable, a: PI, k: 0, table: Some(table) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a <= PI) {
            return Err(Error::Domain(format!("band parameter a = {} must lie in (0, π]", self.a)));
        }
        if self.kind == PwKind::CustomHatTable {
            let t = self.table.as_ref().ok_or_else(|| Error::Domain("custom kind needs a table".into()))?;
            if t.len() < 2 || t.windows(2).any(|w| w[1].0 <= w[0].0) {
                return Err(Error::Domain("table abscissae must increase".into()));
            }
            if t[0].0 < -PI - 1e-12 || t[t.len() - 1].0 > PI + 1e-12 {
                return Err(Error::Domain("table support exceeds [−π, π]".into()));
            }
        }
        Ok(())
    }

    /// Growth exponent of the samples.
    pub fn growth(&self) -> f64 {
        match self.kind {
            PwKind::PolyTimesSincA => self.k.saturating_sub(1) as f64,
            _ => 0.0,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let s = |x: f64| if x == 0.0 { 1.0 } else { (self.a * x).sin() / (self.a * x) };
        Ok(match self.kind {
            PwKind::XiSquaredHat => xi_squared_hat(x),
            PwKind::SincA => s(x),
            PwKind::PolyTimesSincA => x.powi(self.k as i32) * s(x),
            PwKind::CustomHatTable => {
                let t = self.table.as_ref().ok_or_else(|| Error::Domain("custom kind needs a table".into()))?;
                let knots: Vec<f64> = t.iter().map(|p| p.0).collect();
                let f = |xi: f64| {
                    let i = t.partition_point(|p| p.0 <= xi).clamp(1, t.len() - 1);
                    let (x0, y0) = t[i - 1];
                    let (x1, y1) = t[i];
                    let w = (xi - x0) / (x1 - x0);
                    ((1.0 - w) * y0 + w * y1) * (x * xi).cos()
                };
                quad::integrate_with_breakpoints(f, &knots, &QuadSpec::default())?.value / (2.0 * PI)
            }
        })
    }
}

/// `(2π)^{−1} ∫_{−π}^{π} ξ² e^{ixξ} dξ
///  = π sin(πx)/x + 2 cos(πx)/x² − 2 sin(πx)/(πx³)`.
pub fn xi_squared_hat(x: f64) -> f64 {
    if x.abs() < 0.05 {
        // (1/π) Σ_n (−1)^n x^{2n} π^{2n+3} / ((2n)! (2n+3))
        let mut term = PI * PI * PI;
        let mut acc = 0.0;
        for n in 0..12 {
            acc += term / (2 * n + 3) as f64;
            term *= -(x * PI).powi(2) / ((2 * n + 1) * (2 * n + 2)) as f64;
        }
        return acc / PI;
    }
    let (s, c) = (PI * x).sin_cos();
    PI * s / x + 2.0 * c / (x * x) - 2.0 * s / (PI * x * x * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMetric {
    Sup,
    L2,
}

/// Radius used by the studies: the theorem radius, widened with `c` since
/// `L` follows `sinc` out to `|x| ≈ c`.
pub fn study_truncation(params: &MultiquadricParams) -> TruncationPolicy {
    let base = TruncationPolicy::default_for(params);
    let wide = (16.0 * params.c()).ceil() as usize + 8;
    TruncationPolicy { radius: base.radius.max(wide), tail_bound_mode: TailBoundMode::TheoremSlope }
}

/// Integer tolerance for the interpolation property in studies.
pub const INTEGER_TOL: f64 = 1e-6;

struct Recovery {
    error: f64,
    integer_error: f64,
}

fn recover<F: Fn(f64) -> f64>(
    p: &MultiquadricParams,
    f: F,
    growth: f64,
    window: (f64, f64),
    metric: ErrorMetric,
    t: &TruncationPolicy,
) -> Result<Recovery> {
    let reach = window.0.abs().max(window.1.abs());
    let n = reach.ceil() as usize + t.radius + 2;
    let g = study_grid(p, n as f64 + 8.0)?;
    let y = SampleSequence::from_fn(1, n, growth, |j| f(j[0] as f64))?;
    let nodes = window_nodes(&g, window);
    let xs: Vec<Vec<f64>> = nodes.iter().map(|(x, _)| vec![*x]).collect();
    let r = interpolate::interpolate(&Kernel::Grid(&g), &y, &xs, t)?;
    let errs: Vec<f64> = xs.iter().zip(&r.values).map(|(x, v)| v - f(x[0])).collect();
    let error = match metric {
        ErrorMetric::Sup => errs.iter().fold(0.0f64, |m, e| m.max(e.abs())),
        ErrorMetric::L2 => (errs.iter().map(|e| e * e).sum::<f64>() * g.spacing()).sqrt(),
    };
    let integer_error = xs
        .iter()
        .zip(&errs)
        .filter(|(x, _)| (x[0] - x[0].round()).abs() < 1e-9)
        .map(|(_, e)| e.abs())
        .fold(0.0, f64::max);
    Ok(Recovery { error, integer_error })
}

/// Error of `I_{α,c} f` against `f` on `window` for each `c`.
pub fn pw_recovery(
    f: &PwFunctionSpec,
    alpha: f64,
    cs: &[f64],
    window: (f64, f64),
    metric: ErrorMetric,
) -> Result<StudyReport> {
    f.validate()?;
    check_sweep(cs)?;
    let mut rep = StudyReport::new(StudyKind::PwRecovery);
    rep.set("window_lo", window.0);
    rep.set("window_hi", window.1);
    rep.set("a", f.a);
    rep.set("k", f.k as f64);
    let fv = |x: f64| f.eval(x).unwrap_or(f64::NAN);
    let mut err = Vec::new();
    let mut ierr = Vec::new();
    let mut radii = Vec::new();
    for &c in cs {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        rep.add_params(&p);
        let t = study_truncation(&p);
        let r = recover(&p, fv, f.growth(), window, metric, &t)?;
        err.push(r.error);
        ierr.push(r.integer_error);
        radii.push(t.radius as f64);
    }
    rep.metric("c", cs.to_vec());
    rep.metric("radius", radii);
    rep.metric("error", err);
    rep.metric("integer_error", ierr);
    rep.verdict("error_strictly_decreasing", "error", VerdictRule::StrictlyDecreasing, 0.0);
    rep.verdict("interpolates_at_integers", "integer_error", VerdictRule::AllBelow, INTEGER_TOL);
    Ok(rep)
}

/// Largest polynomial degree reproduced in the limit for `α`, or `None`
/// when no degree is excluded.
pub fn max_poly_degree(alpha: f64) -> Option<i64> {
    if alpha == -1.0 {
        None
    } else if alpha > 0.0 {
        Some((2.0 * alpha + 1.0).floor() as i64 - 2)
    } else if alpha < -1.0 {
        Some((2.0 * alpha.abs() - 2.0).ceil() as i64 - 2)
    } else {
        Some(-1)
    }
}

/// `sup_{window} |I_{α,c} f_k − x^k|` for each `c`, `f_k(j) = j^k`.
pub fn polynomial_reproduction(alpha: f64, cs: &[f64], k: u32, window: (f64, f64)) -> Result<StudyReport> {
    check_sweep(cs)?;
    if let Some(max) = max_poly_degree(alpha) {
        if (k as i64) > max && k > 0 {
            return Err(Error::Admissibility(format!(
                "degree k = {k} exceeds the admissible range 0..={max} for α = {alpha}"
            )));
        }
    }
    let mut rep = StudyReport::new(StudyKind::PolynomialReproduction);
    rep.set("window_lo", window.0);
    rep.set("window_hi", window.1);
    rep.set("k", k as f64);
    let mut err = Vec::new();
    for &c in cs {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        if !p.operator_valid() {
            return Err(Error::Admissibility(format!(
                "α = {alpha} lies in the excluded band (−3/2, 1/2) ∖ {{−1}}"
            )));
        }
        rep.add_params(&p);
        let t = study_truncation(&p);
        let r = recover(&p, |x| x.powi(k as i32), k as f64, window, ErrorMetric::Sup, &t)?;
        err.push(r.error);
    }
    rep.metric("c", cs.to_vec());
    rep.metric("sup_error", err);
    if k == 0 {
        rep.verdict("constants_reproduced", "sup_error", VerdictRule::AllBelow, 1e-5);
    } else {
        rep.verdict("sup_error_strictly_decreasing", "sup_error", VerdictRule::StrictlyDecreasing, 0.0);
    }
    Ok(rep)
}

/// `∫|L̂^{(k)}|` with its error estimate and frequency-tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeL1 {
    pub value: f64,
    pub abs_error: f64,
    pub tail_bound: f64,
    pub freq_extent: f64,
}

/// Derivative orders allowed for `α` (the smoothness budget).
pub fn smoothness_budget(alpha: f64) -> usize {
    let m = MAX_DERIVATIVE_ORDER;
    if alpha == -1.0 {
        m
    } else if alpha < -1.0 {
        // k < 2|α| − 1
        let b = 2.0 * alpha.abs() - 1.0;
        ((b.ceil() as i64 - 1).max(0) as usize).min(m)
    } else {
        ((2.0 * alpha + 1.0).floor().max(0.0) as usize).min(m)
    }
}

/// Default frequency extent `(2K+1)π` for the `L̂` integrals.
pub fn default_freq_extent(c: f64) -> f64 {
    let k = (1.0 + 36.0 / (2.0 * PI * c)).ceil();
    (2.0 * k + 1.0) * PI
}

/// `∫_{−E}^{E} |L̂^{(k)}(ξ)| dξ` for `d = 1`.
///
/// Breakpoints sit at every multiple of `π`; the difference step shrinks
/// near the lattice so that stencils never straddle a point where `L̂`
/// loses smoothness.
pub fn lhat_derivative_l1(params: &MultiquadricParams, k: usize, freq_extent: Option<f64>) -> Result<DerivativeL1> {
    if params.d() != 1 {
        return Err(Error::InvalidParams("lhat_derivative_l1 needs d = 1".into()));
    }
    let budget = smoothness_budget(params.alpha());
    if k == 0 || k > budget {
        return Err(Error::Smoothness(format!(
            "derivative order {k} exceeds the smoothness budget {budget} for α = {}",
            params.alpha()
        )));
    }
    let c = params.c();
    let e = freq_extent.unwrap_or_else(|| default_freq_extent(c));
    let h0 = 0.1 / c.max(1.0);
    let f = |xi: f64| {
        let dist = (xi - 2.0 * PI * (xi / (2.0 * PI)).round()).abs();
        let h = h0.min(0.9 * dist / k as f64).max(1e-9);
        symbol::lhat_derivative_estimate(params, k, xi, h).value.abs()
    };
    let segments = (e / PI).ceil() as usize;
    let breaks: Vec<f64> = (0..=segments).map(|i| (i as f64 * PI).min(e)).collect();
    let q = QuadSpec::new(1e-10, 1e-8, 20000)?;
    let r = quad::integrate_with_breakpoints(f, &breaks, &q)?;
    let tail_bound = 2.0 * (c + 1.0).powi(k as i32) * (-c * (e - PI)).exp();
    Ok(DerivativeL1 { value: 2.0 * r.value, abs_error: 2.0 * r.abs_error, tail_bound, freq_extent: e })
}

/// `‖L̂^{(k)}‖₁` over a sweep of `c`, with the max/min ratio judged against
/// `ratio_tol`.
pub fn lhat_derivative_study(alpha: f64, k: usize, cs: &[f64], ratio_tol: f64) -> Result<StudyReport> {
    check_sweep(cs)?;
    let mut rep = StudyReport::new(StudyKind::LhatDerivativeL1);
    rep.set("k", k as f64);
    let mut vals = Vec::new();
    let mut errs = Vec::new();
    for &c in cs {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        rep.add_params(&p);
        let r = lhat_derivative_l1(&p, k, None)?;
        vals.push(r.value);
        errs.push(r.abs_error + r.tail_bound);
    }
    rep.metric("c", cs.to_vec());
    rep.metric("l1_norm", vals);
    rep.metric("l1_error", errs);
    rep.verdict("uniform_in_c", "l1_norm", VerdictRule::MaxOverMinBelow, ratio_tol);
    Ok(rep)
}

/// Decay slope of `L_{α,c}` over `window`, judged against `threshold`.
pub fn decay_study(alpha: f64, c: f64, window: (f64, f64), threshold: f64) -> Result<StudyReport> {
    let p = MultiquadricParams::new(alpha, c, 1)?;
    let mut rep = StudyReport::new(StudyKind::DecaySlope);
    rep.add_params(&p);
    rep.set("window_lo", window.0);
    rep.set("window_hi", window.1);
    let g = study_grid(&p, (8.0 * window.1).max(256.0))?;
    let fit = decay_slope(&g, window)?;
    rep.set("error_floor", fit.floor);
    rep.metric("slope", vec![fit.slope]);
    rep.metric("envelope_points", vec![fit.points as f64]);
    rep.verdict("slope_below_threshold", "slope", VerdictRule::AllBelow, threshold);
    Ok(rep)
}

/// `Λ(1/2; c)` over a sweep, with `Λ/ln c` compared to its first value.
pub fn lambda_growth_study(alpha: f64, cs: &[f64], slack: f64) -> Result<StudyReport> {
    check_sweep(cs)?;
    if cs.iter().any(|&c| c <= 1.0) {
        return Err(Error::InvalidParams("lambda growth needs c > 1 so that ln c > 0".into()));
    }
    let mut rep = StudyReport::new(StudyKind::LambdaGrowth);
    rep.set("x", 0.5);
    let mut lam = Vec::new();
    let mut ratio = Vec::new();
    let mut tails = Vec::new();
    for &c in cs {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        rep.add_params(&p);
        let t = study_truncation(&p);
        let g = study_grid(&p, t.radius as f64 + 8.0)?;
        let l = interpolate::lambda_function(&Kernel::Grid(&g), 0.5, &t)?;
        lam.push(l.value);
        ratio.push(l.value / c.ln());
        tails.push(l.tail_bound);
    }
    rep.metric("c", cs.to_vec());
    rep.metric("lambda", lam);
    rep.metric("lambda_over_ln_c", ratio);
    rep.metric("tail_bound", tails);
    rep.verdict("log_growth", "lambda_over_ln_c", VerdictRule::AllBelowFirstTimes, slack);
    Ok(rep)
}

/// `‖I‖_{ℓ₂→L₂}` for each parameter set.
pub fn l2_norm_study(points: &[MultiquadricParams], n_xi: usize, tol: f64) -> Result<StudyReport> {
    let mut rep = StudyReport::new(StudyKind::L2Norm);
    rep.set("n_xi", n_xi as f64);
    let mut sq = Vec::new();
    let mut sampled = Vec::new();
    let mut argmax = Vec::new();
    for p in points {
        rep.add_params(p);
        let spec = PeriodizationSpec::default_for(p);
        let e = interpolate::l2_operator_norm(p, &spec, n_xi)?;
        sq.push(e.max_square_sum);
        sampled.push(e.max_sampled);
        argmax.push(e.argmax.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    rep.metric("max_square_sum", sq);
    rep.metric("max_sampled_square_sum", sampled);
    rep.metric("argmax_abs", argmax);
    rep.verdict("norm_is_one", "max_square_sum", VerdictRule::NearOne, tol);
    rep.verdict("argmax_at_origin", "argmax_abs", VerdictRule::AllBelow, 1e-6);
    rep.verdict("square_sum_at_most_one", "max_sampled_square_sum", VerdictRule::AllBelow, 1.0 + 1e-8);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn synthetic_power_law() {
        for p in [2.0, 3.5, 5.0] {
            let xs: Vec<f64> = (1..4000).map(|i| i as f64 * 0.01).collect();
            let ys: Vec<f64> = xs.iter().map(|x: &f64| x.powf(-p)).collect();
            let fit = decay_slope_samples(&xs, &ys, (8.0, 30.0), 0.0).unwrap();
            assert!((fit.slope + p).abs() < 0.05, "{p}: {}", fit.slope);
        }
        let xs = [10.0, 11.0];
        assert!(matches!(decay_slope_samples(&xs, &[1.0, 1.0], (8.0, 30.0), 0.0), Err(Error::InsufficientSignal(_))));
    }

    #[test]
    fn xi_squared_closed_form() {
        assert!((xi_squared_hat(0.0) - PI * PI / 3.0).abs() < 1e-12);
        for j in 1..10 {
            let want = 2.0 * if j % 2 == 0 { 1.0 } else { -1.0 } / (j * j) as f64;
            assert!((xi_squared_hat(j as f64) - want).abs() < 1e-12);
        }
        for x in [0.01, 0.049, 0.051, 0.3, 2.7] {
            let f = |xi: f64| xi * xi * (x * xi).cos();
            let want = quad::integrate(f, 0.0, PI, &QuadSpec::default()).unwrap().value / PI;
            assert!((xi_squared_hat(x) - want).abs() < 1e-11, "x={x}");
        }
        let table = PwFunctionSpec::custom(vec![(-PI, PI * PI), (0.0, 0.0), (PI, PI * PI)]);
        assert!(table.validate().is_ok());
        assert!(PwFunctionSpec::custom(vec![(-4.0, 1.0), (0.0, 0.0)]).validate().is_err());
    }

    #[test]
    fn verdicts_recompute() {
        let mut r = StudyReport::new(StudyKind::SincConvergence);
        r.metric("e", vec![3.0, 2.0, 2.0]);
        assert!(!r.verdict("dec", "e", VerdictRule::StrictlyDecreasing, 0.0));
        assert!(r.verdict("first_last", "e", VerdictRule::LastBelow, 2.5));
        assert!(r.is_consistent());
        r.verdicts.get_mut("dec").unwrap().passed = true;
        assert!(!r.is_consistent());
        assert!(r.metrics_csv().starts_with("index,e\n0,3.0000000000000000e0\n"));
    }

    #[test]
    fn sinc_study_small() {
        let rep = sinc_convergence(0.5, &[1.0, 4.0], (-5.0, 5.0)).unwrap();
        assert!(rep.passed("sup_error_strictly_decreasing"));
        assert!(rep.is_consistent());
    }

    #[test]
    fn polynomial_examples() {
        let rep = polynomial_reproduction(0.5, &[1.0], 0, (-3.0, 3.0)).unwrap();
        assert!(rep.passed("constants_reproduced"), "{:?}", rep.metrics);
        assert!(matches!(polynomial_reproduction(0.5, &[1.0], 3, (-2.0, 2.0)), Err(Error::Admissibility(_))));
        let rep = polynomial_reproduction(2.5, &[2.0, 8.0], 1, (-2.0, 2.0)).unwrap();
        assert!(rep.passed("sup_error_strictly_decreasing"), "{:?}", rep.metrics);
    }

    #[test]
    fn derivative_budget() {
        let p = MultiquadricParams::new(0.5, 1.0, 1).unwrap();
        assert!(matches!(lhat_derivative_l1(&p, 4, None), Err(Error::Smoothness(_))));
        assert_eq!(smoothness_budget(-2.5), 3);
        assert_eq!(smoothness_budget(-1.0), MAX_DERIVATIVE_ORDER);
        assert_eq!(smoothness_budget(0.5), 2);
    }

    #[test]
    fn poisson_derivative_norm_matches_closed_form() {
        let p = MultiquadricParams::new(-1.0, 1.0, 1).unwrap();
        let got = lhat_derivative_l1(&p, 1, None).unwrap();
        let e = got.freq_extent;
        let f = |xi: f64| {
            let dist = (xi - 2.0 * PI * (xi / (2.0 * PI)).round()).abs();
            let h = 0.1f64.min(0.9 * dist).max(1e-9);
            let g = |t: f64| symbol::lhat_poisson_closed(1.0, t);
            symbol::ridders(&g, 1, xi, h).value.abs()
        };
        let breaks: Vec<f64> = (0..=((e / PI).ceil() as usize)).map(|i| (i as f64 * PI).min(e)).collect();
        let want = 2.0 * quad::integrate_with_breakpoints(f, &breaks, &QuadSpec::new(1e-10, 1e-8, 20000).unwrap()).unwrap().value;
        assert!((got.value - want).abs() < 1e-6, "{} vs {want}", got.value);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn power_law_recovered(p in 1.0f64..8.0) {
            let xs: Vec<f64> = (1..4000).map(|i| i as f64 * 0.01).collect();
            let ys: Vec<f64> = xs.iter().map(|x| x.powf(-p) * (1.0 + 0.5 * (8.0 * x).cos().abs())).collect();
            let fit = decay_slope_samples(&xs, &ys, (8.0, 30.0), 0.0).unwrap();
            prop_assert!((fit.slope + p).abs() < 0.1);
        }
    }
}
