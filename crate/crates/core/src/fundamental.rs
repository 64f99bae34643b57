//! Real-space synthesis of the fundamental function
//! `L(x) = (2π)^{−d} ∫ L̂(ξ) e^{i⟨x,ξ⟩} dξ`.
//!
//! [`synthesize`] applies the trapezoid rule on a cell-centred frequency grid
//! over `[−Ξ, Ξ]^d`, `Ξ = (2M+1)π`, with spacing `Δξ = 2π/P`, and evaluates
//! all real-space nodes at once with an inverse FFT. The real-space grid has
//! spacing `Δx = 1/(2M+1)` (so every integer is a node) and period `P`; it
//! covers `|x| ≤ P/2`. Aliasing from the period shows up as
//! `Σ_{m≠0} ±L(x + mP)`, which is why `P` must be large compared with the
//! region of interest.
//!
//! Because `Δξ` divides `2π`, the periodized symbol is computed once per
//! residue class of the frequency grid and reused for every period.
//!
//! [`evaluate_direct`] computes single values by adaptive quadrature
//! instead, and [`coefficients`] returns the weights `c_j` of
//! `L = Σ_j c_j φ(· − j)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{log_sum_exp, quad, QuadResult, QuadSpec};
use crate::symbol::{self, cube_indices, MultiquadricParams, PeriodizationSpec, RadialSymbol};

const TWO_PI: f64 = 2.0 * PI;

/// Default cap on the number of grid nodes (all axes together).
pub const DEFAULT_NODE_BUDGET: usize = 1 << 25;

/// Nodes whose `L̂` bound falls below this are set to zero without evaluation.
const NEGLIGIBLE_LHAT: f64 = 1e-20;

#[derive(Debug, Clone, Copy, Deserialize)]
struct RawGridSpec {
    m: usize,
    oversample: usize,
    d: usize,
}

/// Frequency extent and real-space period of a synthesis grid.
///
/// `M` fixes `Ξ = (2M+1)π` and the real-space spacing `1/(2M+1)`;
/// the real-space period is `P = M·oversample`, so the grid holds every
/// integer `k` with `|k| ≤ M·oversample/2`. Each axis carries
/// `(2M+1)·M·oversample` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGridSpec")]
pub struct GridSpec {
    pub m: usize,
    pub oversample: usize,
    pub d: usize,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;
    fn try_from(r: RawGridSpec) -> Result<Self> {
        Self::new(r.m, r.oversample, r.d)
    }
}

impl GridSpec {
    pub fn new(m: usize, oversample: usize, d: usize) -> Result<Self> {
        if m < 1 || oversample < 2 || d < 1 {
            return Err(Error::InvalidParams(format!(
                "grid needs M >= 1, oversample >= 2, d >= 1 (got M={m}, oversample={oversample}, d={d})"
            )));
        }
        Ok(Self { m, oversample, d })
    }

    /// A grid for `params` whose real-space half-width is at least
    /// `min_half_extent`, with spacing at most `1/(2·min_m+1)` and a
    /// frequency extent large enough for a negligible truncation tail.
    pub fn auto(params: &MultiquadricParams, min_half_extent: f64, min_m: usize) -> Self {
        let tail_m = (1.0 + 36.0 / (TWO_PI * params.c())).ceil() as usize;
        let m = tail_m.max(min_m).max(1);
        let oversample = ((2.0 * min_half_extent / m as f64).ceil() as usize).max(2);
        Self { m, oversample, d: params.d() }
    }

    pub fn freq_extent(&self) -> f64 {
        (2 * self.m + 1) as f64 * PI
    }

    /// Real-space period `P`.
    pub fn period(&self) -> usize {
        self.m * self.oversample
    }

    pub fn nodes_per_axis(&self) -> usize {
        (2 * self.m + 1) * self.period()
    }

    pub fn total_nodes(&self) -> usize {
        self.nodes_per_axis().saturating_pow(self.d as u32)
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (2 * self.m + 1) as f64
    }

    pub fn freq_spacing(&self) -> f64 {
        TWO_PI / self.period() as f64
    }

    /// Largest integer guaranteed to be a node on every axis.
    pub fn max_integer(&self) -> i64 {
        (self.period() / 2) as i64 - 1
    }
}

/// Error budget recorded with a synthesized grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisErrors {
    /// Bound on the neglected `L̂` mass outside `[−Ξ, Ξ]^d` and at skipped nodes.
    pub tail: f64,
    /// Estimated aliasing from the finite real-space period.
    pub discretization: f64,
    /// `max |Im| / max |L|` of the raw inverse transform.
    pub imaginary_residue: f64,
}

impl SynthesisErrors {
    pub fn total(&self) -> f64 {
        self.tail + self.discretization
    }
}

/// Samples of a real function on a centred uniform grid in `d` dimensions.
///
/// Axis nodes are `x_i = i·Δx` for `i ∈ [lo, lo + n)` with `lo = −⌊n/2⌋`;
/// values are stored row-major with the last axis fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    params: MultiquadricParams,
    d: usize,
    n: usize,
    spacing: f64,
    values: Vec<f64>,
    errors: SynthesisErrors,
}

impl GridFunction {
    pub fn new(
        params: MultiquadricParams,
        d: usize,
        n: usize,
        spacing: f64,
        values: Vec<f64>,
        errors: SynthesisErrors,
    ) -> Result<Self> {
        if d == 0 || n < 4 || values.len() != n.pow(d as u32) || !(spacing > 0.0) {
            return Err(Error::InvalidParams(format!(
                "inconsistent grid: d={d}, n={n}, spacing={spacing}, {} values",
                values.len()
            )));
        }
        Ok(Self { params, d, n, spacing, values, errors })
    }

    pub fn params(&self) -> &MultiquadricParams {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn errors(&self) -> &SynthesisErrors {
        &self.errors
    }

    /// First signed node index on each axis.
    pub fn lo(&self) -> i64 {
        -((self.n / 2) as i64)
    }

    /// Last signed node index on each axis.
    pub fn hi(&self) -> i64 {
        self.lo() + self.n as i64 - 1
    }

    /// Half-width of the symmetric region covered on every axis.
    pub fn extent(&self) -> f64 {
        (-self.lo()).min(self.hi()) as f64 * self.spacing
    }

    pub fn node_coord(&self, i: i64) -> f64 {
        i as f64 * self.spacing
    }

    fn flat(&self, idx: &[i64]) -> Option<usize> {
        let mut f = 0usize;
        for &i in idx {
            if i < self.lo() || i > self.hi() {
                return None;
            }
            f = f * self.n + (i - self.lo()) as usize;
        }
        Some(f)
    }

    /// Value at the node with signed indices `idx`.
    pub fn at(&self, idx: &[i64]) -> Option<f64> {
        self.flat(idx).map(|f| self.values[f])
    }

    /// Nodes per unit length when that is an integer (so integer shifts of a
    /// node are nodes).
    pub fn nodes_per_unit(&self) -> Option<i64> {
        let r = 1.0 / self.spacing;
        ((r - r.round()).abs() < 1e-9).then(|| r.round() as i64)
    }

    /// Value at an integer lattice point, if it is a node.
    pub fn at_integer(&self, k: &[i64]) -> Option<f64> {
        let per = self.nodes_per_unit()?;
        let idx: Vec<i64> = k.iter().map(|v| v * per).collect();
        self.at(&idx)
    }

    /// Tensor-product four-point Lagrange interpolation; `O(Δx⁴)` error for
    /// smooth data. `None` when the stencil leaves the grid.
    pub fn eval(&self, x: &[f64]) -> Option<f64> {
        if x.len() != self.d {
            return None;
        }
        let mut base = Vec::with_capacity(self.d);
        let mut weights = Vec::with_capacity(self.d);
        for &xi in x {
            let s = xi / self.spacing;
            let i0 = s.floor();
            let t = s - i0;
            let i0 = i0 as i64;
            if i0 - 1 < self.lo() || i0 + 2 > self.hi() {
                return None;
            }
            base.push(i0 - 1);
            weights.push(lagrange4(t));
        }
        let mut acc = 0.0;
        let mut idx = vec![0i64; self.d];
        for flat in 0..4usize.pow(self.d as u32) {
            let mut f = flat;
            let mut w = 1.0;
            for a in 0..self.d {
                let o = f % 4;
                f /= 4;
                idx[a] = base[a] + o as i64;
                w *= weights[a][o];
            }
            acc += w * self.at(&idx)?;
        }
        Some(acc)
    }

    /// Iterates over `(coordinates, value)` in storage order.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        (0..self.values.len()).map(move |flat| {
            let mut rem = flat;
            let mut coords = vec![0.0; self.d];
            for a in (0..self.d).rev() {
                let i = (rem % self.n) as i64 + self.lo();
                rem /= self.n;
                coords[a] = self.node_coord(i);
            }
            (coords, self.values[flat])
        })
    }

    /// Samples along the first axis with the other coordinates at zero.
    pub fn axis_profile(&self) -> Vec<(f64, f64)> {
        (self.lo()..=self.hi())
            .filter_map(|i| {
                let mut idx = vec![0i64; self.d];
                idx[0] = i;
                self.at(&idx).map(|v| (self.node_coord(i), v))
            })
            .collect()
    }

    /// Largest `|L|` over nodes with `‖x‖_∞ ≥ r`.
    pub fn max_abs_beyond(&self, r: f64) -> f64 {
        self.iter_nodes()
            .filter(|(x, _)| x.iter().any(|v| v.abs() >= r))
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max)
    }
}

fn lagrange4(t: f64) -> [f64; 4] {
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Signed offset `(N−1)/2` of the cell-centred frequency grid: node `n` sits
/// at `ξ_n = (n − (N−1)/2)·Δξ`.
fn freq_coord(n: usize, len: usize, dxi: f64) -> f64 {
    (n as f64 - (len as f64 - 1.0) / 2.0) * dxi
}

/// Synthesizes `L` on `grid` from the Bessel-route symbol.
pub fn synthesize(
    params: &MultiquadricParams,
    grid: &GridSpec,
    spec: &PeriodizationSpec,
) -> Result<GridFunction> {
    synthesize_with_budget(params, grid, spec, DEFAULT_NODE_BUDGET)
}

pub fn synthesize_with_budget(
    params: &MultiquadricParams,
    grid: &GridSpec,
    spec: &PeriodizationSpec,
    node_budget: usize,
) -> Result<GridFunction> {
    check_grid(params, grid, node_budget)?;
    let (samples, skipped) = lhat_samples(params, grid, spec);
    let mut tail = frequency_tail_bound(params, grid);
    let cell = (grid.freq_spacing() / TWO_PI).powi(grid.d as i32);
    tail += skipped as f64 * NEGLIGIBLE_LHAT * cell;
    tail += spec.tail_bound(params.c());
    invert(params, grid, samples, tail)
}

/// Synthesizes `L` on `grid` from an arbitrary symbol `ξ ↦ L̂(ξ)`.
///
/// Used to drive the pipeline with closed-form symbols; `lhat` must be even.
pub fn synthesize_from_symbol<F>(params: &MultiquadricParams, grid: &GridSpec, lhat: F) -> Result<GridFunction>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_grid(params, grid, DEFAULT_NODE_BUDGET)?;
    let n = grid.nodes_per_axis();
    let d = grid.d;
    let dxi = grid.freq_spacing();
    let samples: Vec<f64> = (0..grid.total_nodes())
        .into_par_iter()
        .map(|mut flat| {
            let mut xi = vec![0.0; d];
            for a in (0..d).rev() {
                xi[a] = freq_coord(flat % n, n, dxi);
                flat /= n;
            }
            lhat(&xi)
        })
        .collect();
    let tail = frequency_tail_bound(params, grid);
    invert(params, grid, samples, tail)
}

fn check_grid(params: &MultiquadricParams, grid: &GridSpec, node_budget: usize) -> Result<()> {
    if grid.d != params.d() {
        return Err(Error::InvalidParams(format!(
            "grid dimension {} differs from params.d = {}",
            grid.d,
            params.d()
        )));
    }
    let total = grid.total_nodes();
    if total > node_budget {
        return Err(Error::Resource(format!(
            "grid of {total} nodes exceeds the budget of {node_budget}"
        )));
    }
    Ok(())
}

/// Bound on `(2π)^{−d} ∫ L̂` outside `[−Ξ, Ξ]^d`, from
/// `L̂(ξ) ≤ e^{−c(‖ξ‖ − ‖ξ'‖)}` with `ξ'` the representative in `[−π, π]^d`.
fn frequency_tail_bound(params: &MultiquadricParams, grid: &GridSpec) -> f64 {
    let c = params.c();
    let m = grid.m as f64;
    if grid.d == 1 {
        let q = (-TWO_PI * c).exp();
        return 2.0 * (-TWO_PI * c * m).exp() / (1.0 - q);
    }
    let d = grid.d as f64;
    let xi = grid.freq_extent();
    let surface = 2.0 * d * (2.0 * xi).powf(d - 1.0);
    surface * (-c * (xi - PI * d.sqrt())).exp() / c * (1.0 + (d - 1.0) / (c * xi)) / TWO_PI.powf(d)
}

/// `L̂` at every frequency node, plus the number of nodes skipped because
/// their bound was negligible.
fn lhat_samples(params: &MultiquadricParams, grid: &GridSpec, spec: &PeriodizationSpec) -> (Vec<f64>, usize) {
    let sym = RadialSymbol::new(params);
    let d = grid.d;
    let n = grid.nodes_per_axis();
    let p = grid.period();
    let dxi = grid.freq_spacing();
    let radius = spec.effective_j(params.c()) as i64;
    let c = params.c();

    // Residue class ρ ∈ [0, P) of grid index t ↦ representative index whose
    // frequency lies in [−π, π).
    let rep_index = |rho: usize| -> f64 {
        // frequency of a node in class ρ, shifted into [−π, π)
        let x = freq_coord(rho, n, dxi);
        let k = ((x + PI) / TWO_PI).floor();
        x - k * TWO_PI
    };
    let reps: Vec<f64> = (0..p).map(rep_index).collect();

    // log of the periodized symbol for each residue cell
    let cells = p.pow(d as u32);
    let shifts: Vec<Vec<i64>> = cube_indices(d, radius).collect();
    let log_period: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|mut flat| {
            let mut red = vec![0.0; d];
            for a in (0..d).rev() {
                red[a] = reps[flat % p];
                flat /= p;
            }
            log_sum_exp(shifts.iter().map(|j| {
                let r2: f64 = red
                    .iter()
                    .zip(j)
                    .map(|(v, &jj)| {
                        let s = v + TWO_PI * jj as f64;
                        s * s
                    })
                    .sum();
                sym.log_abs(r2.sqrt())
            }))
        })
        .collect();

    let results: Vec<(f64, bool)> = (0..grid.total_nodes())
        .into_par_iter()
        .map(|mut flat| {
            let mut r2 = 0.0;
            let mut red2 = 0.0;
            let mut cell = 0usize;
            let mut stride = 1usize;
            for _ in 0..d {
                let i = flat % n;
                flat /= n;
                let x = freq_coord(i, n, dxi);
                r2 += x * x;
                let rho = i % p;
                red2 += reps[rho] * reps[rho];
                cell += rho * stride;
                stride *= p;
            }
            // the stride order is reversed relative to log_period's layout
            let cell = reverse_cell(cell, p, d);
            let r = r2.sqrt();
            if (-c * (r - red2.sqrt())).exp() < NEGLIGIBLE_LHAT {
                return (0.0, true);
            }
            let den = log_period[cell];
            let num = sym.log_abs(r);
            let v = if den.is_infinite() {
                if num.is_infinite() {
                    1.0
                } else {
                    0.0
                }
            } else {
                (num - den).exp()
            };
            (v, false)
        })
        .collect();
    let skipped = results.iter().filter(|(_, s)| *s).count();
    (results.into_iter().map(|(v, _)| v).collect(), skipped)
}

/// Converts a cell index built with the first-decoded axis fastest into the
/// row-major layout (last axis fastest) used by `log_period`.
fn reverse_cell(cell: usize, p: usize, d: usize) -> usize {
    let mut digits = Vec::with_capacity(d);
    let mut c = cell;
    for _ in 0..d {
        digits.push(c % p);
        c /= p;
    }
    // digits[0] belongs to the last axis; row-major wants it fastest too
    let mut out = 0usize;
    for &dg in digits.iter().rev() {
        out = out * p + dg;
    }
    out
}

fn invert(params: &MultiquadricParams, grid: &GridSpec, samples: Vec<f64>, tail: f64) -> Result<GridFunction> {
    let d = grid.d;
    let n = grid.nodes_per_axis();
    let mut data: Vec<Complex<f64>> = samples.into_iter().map(|v| Complex::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);

    // transform along each axis; axis a has stride n^(d-1-a)
    for a in 0..d {
        let stride = n.pow((d - 1 - a) as u32);
        let block = stride * n;
        let mut line = vec![Complex::new(0.0, 0.0); n];
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + off + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[start + off + k * stride] = *v;
                }
            }
        }
    }

    // real-space node m (signed) lives at output index m mod N and carries the
    // phase e^{−iπ m (N−1)/N} per axis
    let lo = -((n / 2) as i64);
    let scale = (grid.freq_spacing() / TWO_PI).powi(d as i32);
    let nn = n as i64;
    let phase = |m: i64| -> Complex<f64> {
        let k = (m * (nn - 1)).rem_euclid(2 * nn);
        let theta = -PI * k as f64 / n as f64;
        Complex::new(theta.cos(), theta.sin())
    };
    let phases: Vec<Complex<f64>> = (0..n).map(|i| phase(lo + i as i64)).collect();
    let total = data.len();
    let mut values = vec![0.0; total];
    let mut max_im = 0.0f64;
    let mut max_re = 0.0f64;
    for (flat, out) in values.iter_mut().enumerate() {
        let mut rem = flat;
        let mut src = 0usize;
        let mut ph = Complex::new(1.0, 0.0);
        let mut stride = 1usize;
        for _ in 0..d {
            let i = rem % n;
            rem /= n;
            let m = lo + i as i64;
            src += (m.rem_euclid(nn) as usize) * stride;
            stride *= n;
            ph *= phases[i];
        }
        let v = data[src] * ph * scale;
        *out = v.re;
        max_im = max_im.max(v.im.abs());
        max_re = max_re.max(v.re.abs());
    }
    let imaginary_residue = if max_re > 0.0 { max_im / max_re } else { 0.0 };
    if imaginary_residue > 1e-10 {
        return Err(Error::Domain(format!(
            "synthesis produced a non-real function (relative imaginary residue {imaginary_residue:e}); \
             the symbol must be even"
        )));
    }
    let mut g = GridFunction::new(
        *params,
        d,
        n,
        grid.spacing(),
        values,
        SynthesisErrors { tail, discretization: 0.0, imaginary_residue },
    )?;
    let edge = 0.4 * grid.period() as f64;
    g.errors.discretization = 2.0 * g.max_abs_beyond(edge) + 1e-14;
    Ok(g)
}

/// `L(x)` by adaptive quadrature of the inverse transform (`d ≤ 2`).
///
/// Uses the evenness of `L̂` in each coordinate and integrates over
/// `[0, (2K+1)π]^d` with breakpoints at every multiple of `π`, where `L̂`
/// loses smoothness. Independent of the DFT path in [`synthesize`].
pub fn evaluate_direct(
    params: &MultiquadricParams,
    x: &[f64],
    spec: &PeriodizationSpec,
    q: &QuadSpec,
) -> Result<QuadResult> {
    if x.len() != params.d() {
        return Err(Error::InvalidParams("point dimension differs from params.d".into()));
    }
    let c = params.c();
    let k = (1.0 + 36.0 / (TWO_PI * c)).ceil() as usize;
    let breaks: Vec<f64> = (0..=(2 * k + 1)).map(|i| i as f64 * PI).collect();
    let sym = RadialSymbol::new(params);
    match params.d() {
        1 => {
            let x0 = x[0];
            let r = quad::integrate_with_breakpoints(
                |xi: f64| symbol::lhat_with(&sym, params, &[xi], spec) * (x0 * xi).cos(),
                &breaks,
                q,
            )?;
            Ok(QuadResult { value: r.value / PI, abs_error: r.abs_error / PI, subdivisions: r.subdivisions })
        }
        2 => {
            let inner_q = q.scaled(0.1);
            let err_cell = std::cell::Cell::new(0.0f64);
            let failed = std::cell::Cell::new(None::<Error>);
            let outer = quad::integrate_with_breakpoints(
                |s: f64| {
                    match quad::integrate_with_breakpoints(
                        |t: f64| symbol::lhat_with(&sym, params, &[s, t], spec) * (x[1] * t).cos(),
                        &breaks,
                        &inner_q,
                    ) {
                        Ok(r) => {
                            err_cell.set(err_cell.get().max(r.abs_error));
                            r.value * (x[0] * s).cos()
                        }
                        Err(e) => {
                            failed.set(Some(e));
                            0.0
                        }
                    }
                },
                &breaks,
                q,
            )?;
            if let Some(e) = failed.take() {
                return Err(e);
            }
            let scale = 1.0 / (PI * PI);
            let extent = breaks[breaks.len() - 1];
            Ok(QuadResult {
                value: outer.value * scale,
                abs_error: (outer.abs_error + err_cell.get() * extent) * scale,
                subdivisions: outer.subdivisions,
            })
        }
        d => Err(Error::InvalidParams(format!("evaluate_direct supports d <= 2 (got {d})"))),
    }
}

/// Weights `c_j` of `L = Σ_j c_j φ(· − j)` for `‖j‖_∞ ≤ n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub d: usize,
    pub n: usize,
    /// Row-major over `[−n, n]^d`, last axis fastest.
    pub values: Vec<f64>,
    /// Samples per axis of the periodic grid the DFT used.
    pub sample_len: usize,
}

impl Coefficients {
    pub fn get(&self, j: &[i64]) -> Option<f64> {
        let side = 2 * self.n as i64 + 1;
        let mut f = 0i64;
        for &v in j {
            if v.abs() > self.n as i64 {
                return None;
            }
            f = f * side + v + self.n as i64;
        }
        Some(self.values[f as usize])
    }

    /// `Σ_j c_j e^{i⟨j,ξ⟩}`, i.e. `(2π)^{−d/2} / Σ_k φ̂(ξ + 2πk)` rebuilt from
    /// the stored coefficients (real because `c` is even).
    pub fn reconstruct(&self, xi: &[f64]) -> f64 {
        cube_indices(self.d, self.n as i64)
            .zip(&self.values)
            .map(|(j, &cj)| {
                let phase: f64 = j.iter().zip(xi).map(|(&a, &b)| a as f64 * b).sum();
                cj * phase.cos()
            })
            .sum()
    }

    /// Frequencies of the periodic sample grid along one axis.
    pub fn sample_frequencies(&self) -> Vec<f64> {
        let m = self.sample_len as i64;
        (-(m - 1) / 2..=(m - 1) / 2).map(|i| TWO_PI * i as f64 / m as f64).collect()
    }
}

/// Fourier coefficients of `(2π)^{−d/2} / Σ_k φ̂(ξ + 2πk)` over `[−π, π]^d`,
/// so that `L = Σ_j c_j φ(· − j)`.
///
/// Sampled on an odd periodic grid of `max(2n+1, 4097)` points per axis in
/// one dimension (`max(2n+1, 257)` otherwise) and transformed by FFT.
pub fn coefficients(
    params: &MultiquadricParams,
    spec: &PeriodizationSpec,
    n_coeffs: usize,
) -> Result<Coefficients> {
    if n_coeffs < 1 {
        return Err(Error::InvalidParams("n_coeffs must be >= 1".into()));
    }
    let d = params.d();
    let floor = if d == 1 { 4097 } else { 257 };
    let mut len = (2 * n_coeffs + 1).max(floor);
    if len % 2 == 0 {
        len += 1;
    }
    let total = len.saturating_pow(d as u32);
    if total > DEFAULT_NODE_BUDGET {
        return Err(Error::Resource(format!("coefficient grid of {total} samples exceeds the budget")));
    }
    let sym = RadialSymbol::new(params);
    let radius = spec.effective_j(params.c()) as i64;
    let shifts: Vec<Vec<i64>> = cube_indices(d, radius).collect();
    let half = (len as i64 - 1) / 2;
    let freq = |i: usize| TWO_PI * (i as i64 - half) as f64 / len as f64;
    let sign = f64::from(sym.sign());

    let samples: Vec<Complex<f64>> = (0..total)
        .into_par_iter()
        .map(|mut flat| {
            let mut xi = vec![0.0; d];
            for a in (0..d).rev() {
                xi[a] = freq(flat % len);
                flat /= len;
            }
            let log_s = log_sum_exp(shifts.iter().map(|j| {
                let r2: f64 = xi
                    .iter()
                    .zip(j)
                    .map(|(v, &jj)| (v + TWO_PI * jj as f64).powi(2))
                    .sum();
                sym.log_abs(r2.sqrt())
            }));
            Complex::new(if log_s.is_infinite() { 0.0 } else { sign * (-log_s).exp() }, 0.0)
        })
        .collect();

    // forward DFT along each axis of samples stored at index i ↔ frequency i − half
    let mut data = samples;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(len);
    for a in 0..d {
        let stride = len.pow((d - 1 - a) as u32);
        let block = stride * len;
        let mut line = vec![Complex::new(0.0, 0.0); len];
        for start in (0..total).step_by(block) {
            for off in 0..stride {
                // rotate so that frequency 0 sits at position 0
                for (k, slot) in line.iter_mut().enumerate() {
                    let src = (k as i64 + half).rem_euclid(len as i64) as usize;
                    *slot = data[start + off + src * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[start + off + k * stride] = *v;
                }
            }
        }
    }
    // φ̂ carries the (2π)^{−d/2} normalization, L̂ does not
    let norm = (len as f64).powi(d as i32) * TWO_PI.powf(d as f64 / 2.0);
    let side = 2 * n_coeffs + 1;
    let values = cube_indices(d, n_coeffs as i64)
        .map(|j| {
            let mut f = 0usize;
            for &v in &j {
                f = f * len + v.rem_euclid(len as i64) as usize;
            }
            data[f].re / norm
        })
        .collect::<Vec<_>>();
    debug_assert_eq!(values.len(), side.pow(d as u32));
    // cube_indices runs the first axis fastest; store row-major (last fastest)
    let values = to_row_major(values, side, d);
    Ok(Coefficients { d, n: n_coeffs, values, sample_len: len })
}

fn to_row_major(values: Vec<f64>, side: usize, d: usize) -> Vec<f64> {
    if d == 1 {
        return values;
    }
    let mut out = vec![0.0; values.len()];
    for (flat, v) in values.into_iter().enumerate() {
        out[reverse_cell(flat, side, d)] = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, c: f64, d: usize) -> MultiquadricParams {
        MultiquadricParams::new(alpha, c, d).unwrap()
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::new(32, 8, 1).unwrap();
        assert_eq!(g.period(), 256);
        assert_eq!(g.nodes_per_axis(), 65 * 256);
        assert!((g.spacing() - 1.0 / 65.0).abs() < 1e-15);
        assert!(g.max_integer() >= 32 * 8 / 2 - 1);
        assert!(GridSpec::new(0, 8, 1).is_err());
        assert!(GridSpec::new(4, 1, 1).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let q = p(0.5, 1.0, 2);
        let g = GridSpec::new(8, 64, 2).unwrap();
        let r = synthesize_with_budget(&q, &g, &PeriodizationSpec::default_for(&q), 1000);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn cardinality_and_bound() {
        let q = p(0.5, 1.0, 1);
        let g = synthesize(&q, &GridSpec::new(32, 8, 1).unwrap(), &PeriodizationSpec::default_for(&q)).unwrap();
        for k in -20i64..=20 {
            let v = g.at_integer(&[k]).unwrap();
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-6, "k={k}: {v}");
        }
        let max = g.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!((max - 1.0).abs() < 1e-6);
        assert!((g.at(&[0]).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn even_symmetry() {
        let q = p(-2.5, 1.0, 1);
        let g = synthesize(&q, &GridSpec::new(8, 16, 1).unwrap(), &PeriodizationSpec::default_for(&q)).unwrap();
        for i in 1..g.hi() {
            assert!((g.at(&[i]).unwrap() - g.at(&[-i]).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn poisson_closed_form_drives_same_grid() {
        let q = p(-1.0, 1.0, 1);
        let grid = GridSpec::new(16, 8, 1).unwrap();
        let a = synthesize(&q, &grid, &PeriodizationSpec::default_for(&q)).unwrap();
        let b = synthesize_from_symbol(&q, &grid, |xi| symbol::lhat_poisson_closed(1.0, xi[0])).unwrap();
        let sup = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(sup < 1e-8, "sup = {sup}");
    }

    #[test]
    fn refinement_within_recorded_bounds() {
        let q = p(0.5, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let coarse = synthesize(&q, &GridSpec::new(8, 8, 1).unwrap(), &spec).unwrap();
        let fine = synthesize(&q, &GridSpec::new(8, 16, 1).unwrap(), &spec).unwrap();
        let bound = coarse.errors().total() + fine.errors().total();
        for i in coarse.lo()..=coarse.hi() {
            let d = (coarse.at(&[i]).unwrap() - fine.at(&[i]).unwrap()).abs();
            assert!(d < bound, "node {i}: {d} vs {bound}");
        }
        // M -> 2M at the integers
        let wide = synthesize(&q, &GridSpec::new(16, 4, 1).unwrap(), &spec).unwrap();
        for k in -20i64..=20 {
            let d = (coarse.at_integer(&[k]).unwrap() - wide.at_integer(&[k]).unwrap()).abs();
            assert!(d < coarse.errors().total() + wide.errors().total());
        }
    }

    #[test]
    fn direct_evaluation_examples() {
        let q = p(0.5, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let qs = QuadSpec::default();
        let at0 = evaluate_direct(&q, &[0.0], &spec, &qs).unwrap();
        assert!((at0.value - 1.0).abs() < 1e-8);
        let at1 = evaluate_direct(&q, &[1.0], &spec, &qs).unwrap();
        assert!(at1.value.abs() < 1e-7);
        let half = evaluate_direct(&q, &[0.5], &spec, &qs).unwrap().value;
        let g = synthesize(&q, &GridSpec::new(32, 8, 1).unwrap(), &spec).unwrap();
        assert!((g.eval(&[0.5]).unwrap() - half).abs() < 1e-6);
    }

    #[test]
    fn two_dimensional_direct_matches_grid() {
        let q = p(-1.5, 2.0, 2);
        let spec = PeriodizationSpec::default_for(&q);
        let qs = QuadSpec::new(1e-9, 1e-8, 4000).unwrap();
        let g = synthesize(&q, &GridSpec::new(4, 8, 2).unwrap(), &spec).unwrap();
        let direct = evaluate_direct(&q, &[4.0 / 9.0, 2.0 / 9.0], &spec, &qs).unwrap().value;
        let grid = g.at(&[4, 2]).unwrap();
        assert!((grid - direct).abs() < 1e-7, "{grid} vs {direct}");
        let at0 = evaluate_direct(&q, &[0.0, 0.0], &spec, &qs).unwrap().value;
        assert!((at0 - 1.0).abs() < 1e-6, "{at0}");
    }

    #[test]
    fn coefficients_are_even_and_roundtrip() {
        let q = p(0.5, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let co = coefficients(&q, &spec, 2048).unwrap();
        assert_eq!(co.sample_len, 4097);
        for j in 1..200i64 {
            assert!((co.get(&[j]).unwrap() - co.get(&[-j]).unwrap()).abs() < 1e-10);
        }
        let sym = RadialSymbol::new(&q);
        for (i, xi) in co.sample_frequencies().into_iter().enumerate().step_by(37) {
            let s = crate::symbol::periodized_symbol_log(&q, &[xi], &spec);
            let want = match s {
                Ok(l) => 1.0 / (TWO_PI.sqrt() * l.value()),
                Err(_) => 0.0,
            };
            let got = co.reconstruct(&[xi]);
            assert!((got - want).abs() <= 1e-8 * want.abs().max(1e-12), "i={i} xi={xi}: {got} vs {want}");
            let _ = &sym;
        }
    }

    #[test]
    fn coefficient_partial_sums_approach_cardinality() {
        let q = p(0.5, 1.0, 1);
        let spec = PeriodizationSpec::default_for(&q);
        let co = coefficients(&q, &spec, 400).unwrap();
        let defect = |n: i64| -> f64 {
            let mut worst = 0.0f64;
            for k in [0i64, 1] {
                let s: f64 = (-n..=n).map(|j| co.get(&[j]).unwrap() * symbol::phi(&q, &[(k - j) as f64])).sum();
                worst = worst.max((s - if k == 0 { 1.0 } else { 0.0 }).abs());
            }
            worst
        };
        assert!(defect(200) < defect(50));
        assert!(defect(400) < 1e-6, "{}", defect(400));
        // and off the lattice against the synthesized L
        let g = synthesize(&q, &GridSpec::auto(&q, 16.0, 16), &spec).unwrap();
        for x in [0.5, 1.25, 2.75] {
            let s: f64 = (-400..=400i64).map(|j| co.get(&[j]).unwrap() * symbol::phi(&q, &[x - j as f64])).sum();
            assert!((s - g.eval(&[x]).unwrap()).abs() < 1e-6, "x={x}: {s}");
        }
    }

    #[test]
    fn coefficients_two_dimensional_cardinality() {
        let q = p(-1.5, 1.0, 2);
        let spec = PeriodizationSpec::default_for(&q);
        let co = coefficients(&q, &spec, 40).unwrap();
        for k in [[0i64, 0], [1, 0], [1, 1]] {
            let mut s = 0.0;
            for a in -40..=40i64 {
                for b in -40..=40i64 {
                    s += co.get(&[a, b]).unwrap() * symbol::phi(&q, &[(k[0] - a) as f64, (k[1] - b) as f64]);
                }
            }
            let want = if k == [0, 0] { 1.0 } else { 0.0 };
            assert!((s - want).abs() < 1e-4, "{k:?}: {s}");
        }
    }

    #[test]
    fn cubic_interpolation_is_fourth_order() {
        let q = p(0.5, 1.0, 1);
        let values: Vec<f64> = (-200..200).map(|i| (i as f64 * 0.05).sin()).collect();
        let g = GridFunction::new(q, 1, 400, 0.05, values, SynthesisErrors { tail: 0.0, discretization: 0.0, imaginary_residue: 0.0 }).unwrap();
        let x = 1.2345;
        assert!((g.eval(&[x]).unwrap() - x.sin()).abs() < 1e-6);
        assert!(g.eval(&[9.99]).is_none());
    }
}
