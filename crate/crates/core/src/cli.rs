//! Command-line front end.
//!
//! Every invocation is first resolved into a [`RunConfig`] with all defaults
//! filled in, then executed by [`run`]. Each run writes its artifacts plus a
//! manifest (`<out>.manifest.json` unless given) that echoes the resolved
//! configuration, the library version, the numerical tolerances and a
//! SHA-256 digest of every artifact. `mqcardinal replay --manifest m.json`
//! re-executes a manifest.
//!
//! Output formats:
//!
//! * CSV: `,` separated, `.` decimal point, LF line endings, a header row,
//!   values printed with 17 significant digits (`{:.16e}`), rows sorted by
//!   coordinate (first axis slowest).
//! * JSON: UTF-8, pretty printed, keys in struct declaration order.
//! * Binary grid block (`--binary`): one line of JSON header terminated by
//!   `\n`, followed by the values as little-endian `f64` in row-major order
//!   (last axis fastest). Header keys: `format`, `version`, `d`,
//!   `nodes_per_axis`, `spacing`, `first_index`, `params`, `errors`.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 when a numerical budget
//! is exhausted.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{self, ErrorMetric, PwFunctionSpec, PwKind, StudyKind, StudyReport};
use crate::error::{Error, Result};
use crate::fundamental::{self, GridFunction, GridSpec};
use crate::interpolate::{self, Kernel, SampleSequence, TailBoundMode, TruncationPolicy};
use crate::specfun::QuadSpec;
use crate::symbol::{MultiquadricParams, PeriodizationSpec, DERIVATIVE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "MQCARDINAL_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Fundamental,
    Interpolate,
    Coefficients,
    Study,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub cs: Vec<f64>,
    pub window: (f64, f64),
    pub k: u32,
    pub a: f64,
    pub pw_kind: PwKind,
    pub metric: ErrorMetric,
    pub threshold: f64,
    pub ratio_tol: f64,
    pub n_xi: usize,
}

/// Where interpolation points come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSet {
    List(Vec<f64>),
    Range { lo: f64, hi: f64, n: usize },
    /// `n` uniform draws from `[lo, hi]` using the run seed.
    Random { lo: f64, hi: f64, n: usize },
}

impl PointSet {
    pub fn resolve(&self, seed: u64) -> Vec<f64> {
        match self {
            PointSet::List(v) => v.clone(),
            PointSet::Range { lo, hi, n } => match n {
                0 => vec![],
                1 => vec![*lo],
                _ => (0..*n).map(|i| lo + (hi - lo) * i as f64 / (*n - 1) as f64).collect(),
            },
            PointSet::Random { lo, hi, n } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..*n).map(|_| rng.gen_range(*lo..=*hi)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationConfig {
    pub input: PathBuf,
    pub growth: f64,
    pub finite_support: bool,
    pub points: PointSet,
    pub direct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IoConfig {
    pub out: PathBuf,
    #[serde(default)]
    pub binary: Option<PathBuf>,
    #[serde(default)]
    pub metrics_csv: Option<PathBuf>,
    pub manifest: PathBuf,
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: MultiquadricParams,
    pub grid: GridSpec,
    pub periodization: PeriodizationSpec,
    pub truncation: TruncationPolicy,
    #[serde(default)]
    pub study: Option<StudyConfig>,
    #[serde(default)]
    pub interpolation: Option<InterpolationConfig>,
    #[serde(default)]
    pub n_coeffs: Option<usize>,
    pub io: IoConfig,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid.d != self.params.d() {
            return Err(Error::InvalidParams("grid.d must equal params.d".into()));
        }
        match self.command {
            CommandKind::Study if self.study.is_none() => Err(Error::InvalidParams("study settings missing".into())),
            CommandKind::Interpolate if self.interpolation.is_none() => {
                Err(Error::InvalidParams("interpolation settings missing".into()))
            }
            CommandKind::Coefficients if self.n_coeffs.is_none() => {
                Err(Error::InvalidParams("n_coeffs missing".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Tolerances recorded in every manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tail_tol: f64,
    pub effective_j: usize,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub quad_max_subdivisions: usize,
    pub derivative_tol: f64,
    pub growth_epsilon: f64,
    pub truncation_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub library: String,
    pub version: String,
    pub config: RunConfig,
    pub tolerances: Tolerances,
    pub artifacts: Vec<Artifact>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn tolerances(cfg: &RunConfig) -> Tolerances {
    let q = QuadSpec::default();
    Tolerances {
        tail_tol: cfg.periodization.tail_tol,
        effective_j: cfg.periodization.effective_j(cfg.params.c()),
        quad_abs_tol: q.abs_tol,
        quad_rel_tol: q.rel_tol,
        quad_max_subdivisions: q.max_subdivisions,
        derivative_tol: DERIVATIVE_TOL,
        growth_epsilon: interpolate::GROWTH_EPSILON,
        truncation_tol: TruncationPolicy::DEFAULT_TOL,
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<Artifact> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(Artifact { path: path.to_path_buf(), bytes: bytes.len(), sha256: sha256_hex(bytes) })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with columns `x` (or `x1..xd`) and `L`.
pub fn grid_csv(g: &GridFunction) -> String {
    let mut out = String::new();
    if g.d() == 1 {
        out.push_str("x,L\n");
    } else {
        for a in 1..=g.d() {
            let _ = write!(out, "x{a},");
        }
        out.push_str("L\n");
    }
    for (x, v) in g.iter_nodes() {
        for xa in &x {
            out.push_str(&fmt(*xa));
            out.push(',');
        }
        out.push_str(&fmt(v));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct BinaryHeader<'a> {
    format: &'static str,
    version: u32,
    d: usize,
    nodes_per_axis: usize,
    spacing: f64,
    first_index: i64,
    params: &'a MultiquadricParams,
    errors: &'a fundamental::SynthesisErrors,
}

/// JSON header line plus little-endian `f64` values.
pub fn grid_binary(g: &GridFunction) -> Result<Vec<u8>> {
    let header = BinaryHeader {
        format: "mqcardinal-grid",
        version: 1,
        d: g.d(),
        nodes_per_axis: g.nodes_per_axis(),
        spacing: g.spacing(),
        first_index: g.lo(),
        params: g.params(),
        errors: g.errors(),
    };
    let mut out = serde_json::to_vec(&header)?;
    out.push(b'\n');
    out.reserve(g.values().len() * 8);
    for v in g.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

/// Parses a binary grid block back into its header and values.
pub fn read_grid_binary(bytes: &[u8]) -> Result<(serde_json::Value, Vec<f64>)> {
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Parse("binary block has no header line".into()))?;
    let header: serde_json::Value = serde_json::from_slice(&bytes[..nl])?;
    let body = &bytes[nl + 1..];
    if body.len() % 8 != 0 {
        return Err(Error::Parse("binary body is not a whole number of f64 values".into()));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    Ok((header, values))
}

/// Reads a sequence CSV with columns `j, y` (or `j1, .., jd, y`).
///
/// Indices must cover the full cube `[−n, n]^d` exactly once.
pub fn read_sequence_csv(path: &Path, d: usize, growth: f64, finite: bool) -> Result<SampleSequence> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path).map_err(csv_err)?;
    let mut entries: Vec<(Vec<i64>, f64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != d + 1 {
            return Err(Error::Parse(format!("expected {} columns, found {}", d + 1, rec.len())));
        }
        let j: std::result::Result<Vec<i64>, _> = (0..d).map(|a| rec[a].parse::<i64>()).collect();
        let j = j.map_err(|e| Error::Parse(format!("bad index: {e}")))?;
        let y: f64 = rec[d].parse().map_err(|e| Error::Parse(format!("bad value: {e}")))?;
        entries.push((j, y));
    }
    let n = entries.iter().flat_map(|(j, _)| j.iter().map(|v| v.unsigned_abs())).max().unwrap_or(0) as usize;
    let side = 2 * n + 1;
    let mut values = vec![f64::NAN; side.pow(d as u32)];
    for (j, y) in entries {
        let f = j.iter().fold(0usize, |f, &v| f * side + (v + n as i64) as usize);
        if !values[f].is_nan() {
            return Err(Error::Parse(format!("duplicate index {j:?}")));
        }
        values[f] = y;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Parse(format!("indices do not cover [-{n}, {n}]^{d}")));
    }
    if finite {
        SampleSequence::finite(d, n, values)
    } else {
        SampleSequence::new(d, n, values, growth)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses `a,b,c` or a geometric range `start:stop:factor`.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::Parse(format!("sweep '{s}': {m}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:factor"));
        }
        let nums: std::result::Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|e| bad(&e.to_string()))?;
        let (start, stop, factor) = (nums[0], nums[1], nums[2]);
        if !(start > 0.0 && stop >= start && factor > 1.0) {
            return Err(bad("need 0 < start <= stop and factor > 1"));
        }
        let mut out = Vec::new();
        let mut i = 0;
        loop {
            let v = start * factor.powi(i);
            if v > stop * (1.0 + 1e-12) {
                break;
            }
            out.push(v);
            i += 1;
        }
        Ok(out)
    } else {
        let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        v.map_err(|e| bad(&e.to_string()))
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let v = parse_sweep_list(s)?;
    if v.len() != 2 || !(v[0] < v[1]) {
        return Err(Error::Parse(format!("'{s}': expected lo,hi with lo < hi")));
    }
    Ok((v[0], v[1]))
}

fn parse_sweep_list(s: &str) -> Result<Vec<f64>> {
    let v: std::result::Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    v.map_err(|e| Error::Parse(format!("'{s}': {e}")))
}

fn parse_points(list: Option<&str>, range: Option<&str>, random: Option<usize>) -> Result<PointSet> {
    match (list, range, random) {
        (Some(l), None, None) => Ok(PointSet::List(parse_sweep_list(l)?)),
        (None, Some(r), None) => {
            let parts: Vec<&str> = r.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("'{r}': expected lo:hi:n")));
            }
            let lo = parts[0].trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
            let hi = parts[1].trim().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
            let n = parts[2].trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
            Ok(PointSet::Range { lo, hi, n })
        }
        (None, Some(r), Some(n)) => {
            let parts: Vec<&str> = r.split(':').collect();
            if !(parts.len() == 2 || (parts.len() == 3 && matches!(parts[2].trim(), "_" | ""))) {
                return Err(Error::Parse(format!("'{r}': expected lo:hi or lo:hi:_ with --random")));
            }
            let (lo, hi) = parse_pair(&format!("{},{}", parts[0], parts[1]))?;
            Ok(PointSet::Random { lo, hi, n })
        }
        _ => Err(Error::InvalidParams("give exactly one of --x, --x-range, or --x-range with --random".into())),
    }
}

// ---------------------------------------------------------------- clap layer

#[derive(Debug, Parser)]
#[command(name = "mqcardinal", version, about = "Cardinal interpolation with general multiquadrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Synthesize L on a grid and write it as CSV (and optionally binary).
    Fundamental(FundamentalArgs),
    /// Apply the interpolation operator to a sequence read from CSV.
    Interpolate(InterpolateArgs),
    /// Write the coefficients c_j of L = Σ c_j φ(· − j).
    Coefficients(CoefficientsArgs),
    /// Run a numerical study and write a JSON report.
    Study(StudyArgs),
    /// Re-run a manifest written by an earlier invocation.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
}

#[derive(Debug, Args)]
pub struct PeriodArgs {
    /// Periodization radius J (default max(4, ⌈1 + 28/(2πc)⌉)).
    #[arg(long = "J")]
    pub j: Option<usize>,
    #[arg(long, default_value_t = PeriodizationSpec::DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Manifest path (default `<out>.manifest.json`).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FundamentalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long = "M", default_value_t = 32)]
    pub m: usize,
    #[arg(long, default_value_t = 8)]
    pub oversample: usize,
    #[command(flatten)]
    pub period: PeriodArgs,
    #[command(flatten)]
    pub out: OutArgs,
    /// Also write the binary grid block here.
    #[arg(long)]
    pub binary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TailModeArg {
    TheoremSlope,
    MeasuredSlope,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Sequence CSV with columns j,y.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub growth: f64,
    /// Treat the data as zero outside the stored range.
    #[arg(long)]
    pub finite: bool,
    /// Comma-separated evaluation points.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Evaluation range lo:hi:n.
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// Draw this many seeded random points from --x-range lo:hi (or lo:hi:_) instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long, value_enum, default_value_t = TailModeArg::TheoremSlope)]
    pub tail_mode: TailModeArg,
    #[arg(long = "M", default_value_t = 16)]
    pub m: usize,
    #[arg(long)]
    pub oversample: Option<usize>,
    /// Evaluate L by quadrature instead of a synthesized grid.
    #[arg(long)]
    pub direct: bool,
    #[command(flatten)]
    pub period: PeriodArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CoefficientsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub period: PeriodArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StudyKindArg {
    SincConvergence,
    PwRecovery,
    PolynomialReproduction,
    DecaySlope,
    LhatDerivativeL1,
    LambdaGrowth,
    L2Norm,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PwKindArg {
    XiSquaredHat,
    SincA,
    PolyTimesSincA,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Sup,
    L2,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long, value_enum)]
    pub kind: StudyKindArg,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Sweep of c: comma list or start:stop:factor.
    #[arg(long, default_value = "1,2,4,8,16")]
    pub c: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-5,5")]
    pub window: String,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub a: f64,
    #[arg(long, value_enum, default_value_t = PwKindArg::XiSquaredHat)]
    pub pw_kind: PwKindArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Sup)]
    pub metric: MetricArg,
    /// Slope threshold for decay-slope studies.
    #[arg(long, allow_negative_numbers = true, default_value_t = -3.0)]
    pub threshold: f64,
    /// Ratio tolerance for derivative (default 5) and Λ-growth (default 3) studies.
    #[arg(long)]
    pub ratio_tol: Option<f64>,
    #[arg(long, default_value_t = 4097)]
    pub n_xi: usize,
    /// Also write the metric arrays as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write artifacts into this directory (same file names) instead of the
    /// recorded paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Fail unless the regenerated artifacts match the recorded digests.
    #[arg(long)]
    pub verify: bool,
}

fn periodization(p: &MultiquadricParams, a: &PeriodArgs) -> Result<PeriodizationSpec> {
    let default = PeriodizationSpec::default_for(p);
    PeriodizationSpec::new(a.j.unwrap_or(default.j), a.tail_tol)
}

fn manifest_path(o: &OutArgs) -> PathBuf {
    o.manifest.clone().unwrap_or_else(|| {
        let mut s = o.out.clone().into_os_string();
        s.push(".manifest.json");
        PathBuf::from(s)
    })
}

fn io(o: &OutArgs, binary: Option<PathBuf>, metrics_csv: Option<PathBuf>) -> IoConfig {
    IoConfig { out: o.out.clone(), binary, metrics_csv, manifest: manifest_path(o) }
}

/// Resolves parsed arguments into a run configuration.
pub fn resolve(cmd: &Commands) -> Result<RunConfig> {
    match cmd {
        Commands::Fundamental(a) => {
            let params = MultiquadricParams::new(a.params.alpha, a.params.c, a.params.d)?;
            Ok(RunConfig {
                command: CommandKind::Fundamental,
                grid: GridSpec::new(a.m, a.oversample, params.d())?,
                periodization: periodization(&params, &a.period)?,
                truncation: TruncationPolicy::default_for(&params),
                params,
                study: None,
                interpolation: None,
                n_coeffs: None,
                io: io(&a.out, a.binary.clone(), None),
                seed: a.out.seed,
            })
        }
        Commands::Interpolate(a) => {
            let params = MultiquadricParams::new(a.params.alpha, a.params.c, a.params.d)?;
            let points = parse_points(a.x.as_deref(), a.x_range.as_deref(), a.random)?;
            let mode = match a.tail_mode {
                TailModeArg::TheoremSlope => TailBoundMode::TheoremSlope,
                TailModeArg::MeasuredSlope => TailBoundMode::MeasuredSlope,
            };
            let truncation = match a.radius {
                Some(r) => TruncationPolicy::new(r, mode)?,
                None => TruncationPolicy { tail_bound_mode: mode, ..TruncationPolicy::default_for(&params) },
            };
            let reach = points.resolve(a.out.seed).iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let half = reach + truncation.radius as f64 + 8.0;
            let grid = match a.oversample {
                Some(ov) => GridSpec::new(a.m, ov, params.d())?,
                None => GridSpec::auto(&params, half, a.m),
            };
            Ok(RunConfig {
                command: CommandKind::Interpolate,
                grid,
                periodization: periodization(&params, &a.period)?,
                truncation,
                params,
                study: None,
                interpolation: Some(InterpolationConfig {
                    input: a.input.clone(),
                    growth: a.growth,
                    finite_support: a.finite,
                    points,
                    direct: a.direct,
                }),
                n_coeffs: None,
                io: io(&a.out, None, None),
                seed: a.out.seed,
            })
        }
        Commands::Coefficients(a) => {
            let params = MultiquadricParams::new(a.params.alpha, a.params.c, a.params.d)?;
            Ok(RunConfig {
                command: CommandKind::Coefficients,
                grid: GridSpec::new(1, 2, params.d())?,
                periodization: periodization(&params, &a.period)?,
                truncation: TruncationPolicy::default_for(&params),
                params,
                study: None,
                interpolation: None,
                n_coeffs: Some(a.n),
                io: io(&a.out, None, None),
                seed: a.out.seed,
            })
        }
        Commands::Study(a) => {
            let cs = parse_sweep(&a.c)?;
            let c0 = *cs.first().ok_or_else(|| Error::InvalidParams("empty c sweep".into()))?;
            let params = MultiquadricParams::new(a.alpha, c0, 1)?;
            let kind = match a.kind {
                StudyKindArg::SincConvergence => StudyKind::SincConvergence,
                StudyKindArg::PwRecovery => StudyKind::PwRecovery,
                StudyKindArg::PolynomialReproduction => StudyKind::PolynomialReproduction,
                StudyKindArg::DecaySlope => StudyKind::DecaySlope,
                StudyKindArg::LhatDerivativeL1 => StudyKind::LhatDerivativeL1,
                StudyKindArg::LambdaGrowth => StudyKind::LambdaGrowth,
                StudyKindArg::L2Norm => StudyKind::L2Norm,
            };
            let ratio_tol = a.ratio_tol.unwrap_or(match kind {
                StudyKind::LambdaGrowth => 3.0,
                _ => 5.0,
            });
            Ok(RunConfig {
                command: CommandKind::Study,
                grid: GridSpec::auto(&params, 64.0, analysis::STUDY_MIN_M),
                periodization: PeriodizationSpec::default_for(&params),
                truncation: analysis::study_truncation(&params),
                params,
                study: Some(StudyConfig {
                    kind,
                    cs,
                    window: parse_pair(&a.window)?,
                    k: a.k,
                    a: a.a,
                    pw_kind: match a.pw_kind {
                        PwKindArg::XiSquaredHat => PwKind::XiSquaredHat,
                        PwKindArg::SincA => PwKind::SincA,
                        PwKindArg::PolyTimesSincA => PwKind::PolyTimesSincA,
                    },
                    metric: match a.metric {
                        MetricArg::Sup => ErrorMetric::Sup,
                        MetricArg::L2 => ErrorMetric::L2,
                    },
                    threshold: a.threshold,
                    ratio_tol,
                    n_xi: a.n_xi,
                }),
                interpolation: None,
                n_coeffs: None,
                io: io(&a.out, None, a.csv.clone()),
                seed: a.out.seed,
            })
        }
        Commands::Replay(_) => Err(Error::InvalidParams("replay has no run configuration of its own".into())),
    }
}

// ---------------------------------------------------------------- execution

/// Executes `cfg`, writes its artifacts and manifest, and returns the manifest.
pub fn run(cfg: &RunConfig) -> Result<Manifest> {
    cfg.validate()?;
    let mut artifacts = Vec::new();
    match cfg.command {
        CommandKind::Fundamental => {
            let g = fundamental::synthesize(&cfg.params, &cfg.grid, &cfg.periodization)?;
            artifacts.push(write_atomic(&cfg.io.out, grid_csv(&g).as_bytes())?);
            if let Some(b) = &cfg.io.binary {
                artifacts.push(write_atomic(b, &grid_binary(&g)?)?);
            }
        }
        CommandKind::Interpolate => {
            let ic = cfg.interpolation.as_ref().expect("validated");
            let y = read_sequence_csv(&ic.input, cfg.params.d(), ic.growth, ic.finite_support)?;
            let xs: Vec<Vec<f64>> = ic.points.resolve(cfg.seed).into_iter().map(|x| vec![x]).collect();
            let quad = QuadSpec::default();
            let grid;
            let kernel = if ic.direct {
                Kernel::Direct { params: &cfg.params, spec: &cfg.periodization, quad: &quad }
            } else {
                grid = fundamental::synthesize(&cfg.params, &cfg.grid, &cfg.periodization)?;
                Kernel::Grid(&grid)
            };
            let r = interpolate::interpolate(&kernel, &y, &xs, &cfg.truncation)?;
            let mut order: Vec<usize> = (0..xs.len()).collect();
            order.sort_by(|&a, &b| xs[a][0].total_cmp(&xs[b][0]));
            let mut out = String::from("x,value,tail_bound\n");
            for i in order {
                let _ = writeln!(out, "{},{},{}", fmt(xs[i][0]), fmt(r.values[i]), fmt(r.tail_bounds[i]));
            }
            artifacts.push(write_atomic(&cfg.io.out, out.as_bytes())?);
        }
        CommandKind::Coefficients => {
            let n = cfg.n_coeffs.expect("validated");
            let co = fundamental::coefficients(&cfg.params, &cfg.periodization, n)?;
            let d = co.d;
            let mut out = String::new();
            if d == 1 {
                out.push_str("j,c\n");
            } else {
                for a in 1..=d {
                    let _ = write!(out, "j{a},");
                }
                out.push_str("c\n");
            }
            let side = 2 * n + 1;
            for (f, v) in co.values.iter().enumerate() {
                let mut rem = f;
                let mut j = vec![0i64; d];
                for a in (0..d).rev() {
                    j[a] = (rem % side) as i64 - n as i64;
                    rem /= side;
                }
                for ja in j {
                    let _ = write!(out, "{ja},");
                }
                out.push_str(&fmt(*v));
                out.push('\n');
            }
            artifacts.push(write_atomic(&cfg.io.out, out.as_bytes())?);
        }
        CommandKind::Study => {
            let s = cfg.study.as_ref().expect("validated");
            let rep = run_study(cfg.params.alpha(), s)?;
            let mut json = serde_json::to_string_pretty(&rep)?;
            json.push('\n');
            artifacts.push(write_atomic(&cfg.io.out, json.as_bytes())?);
            if let Some(p) = &cfg.io.metrics_csv {
                artifacts.push(write_atomic(p, rep.metrics_csv().as_bytes())?);
            }
        }
    }
    let manifest = Manifest {
        library: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        tolerances: tolerances(cfg),
        artifacts,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_atomic(&cfg.io.manifest, json.as_bytes())?;
    Ok(manifest)
}

pub fn run_study(alpha: f64, s: &StudyConfig) -> Result<StudyReport> {
    match s.kind {
        StudyKind::SincConvergence => analysis::sinc_convergence(alpha, &s.cs, s.window),
        StudyKind::PwRecovery => {
            let f = match s.pw_kind {
                PwKind::XiSquaredHat => PwFunctionSpec::xi_squared_hat(),
                PwKind::SincA => PwFunctionSpec::sinc_a(s.a),
                PwKind::PolyTimesSincA => PwFunctionSpec::poly_times_sinc_a(s.a, s.k),
                PwKind::CustomHatTable => {
                    return Err(Error::InvalidParams("custom tables are available through the library only".into()))
                }
            };
            analysis::pw_recovery(&f, alpha, &s.cs, s.window, s.metric)
        }
        StudyKind::PolynomialReproduction => analysis::polynomial_reproduction(alpha, &s.cs, s.k, s.window),
        StudyKind::DecaySlope => analysis::decay_study(alpha, s.cs[0], s.window, s.threshold),
        StudyKind::LhatDerivativeL1 => analysis::lhat_derivative_study(alpha, s.k.max(1) as usize, &s.cs, s.ratio_tol),
        StudyKind::LambdaGrowth => analysis::lambda_growth_study(alpha, &s.cs, s.ratio_tol),
        StudyKind::L2Norm => {
            let pts: Result<Vec<MultiquadricParams>> =
                s.cs.iter().map(|&c| MultiquadricParams::new(alpha, c, 1)).collect();
            analysis::l2_norm_study(&pts?, s.n_xi, 1e-6)
        }
    }
}

/// Re-runs a manifest, optionally into another directory, and optionally
/// checks the artifact digests.
pub fn replay(manifest: &Path, out_dir: Option<&Path>, verify: bool) -> Result<Manifest> {
    let recorded = Manifest::load(manifest)?;
    let mut cfg = recorded.config.clone();
    if let Some(dir) = out_dir {
        let relocate = |p: &Path| dir.join(p.file_name().unwrap_or(p.as_os_str()));
        cfg.io.out = relocate(&cfg.io.out);
        cfg.io.binary = cfg.io.binary.as_deref().map(relocate);
        cfg.io.metrics_csv = cfg.io.metrics_csv.as_deref().map(relocate);
        cfg.io.manifest = relocate(&cfg.io.manifest);
    }
    let fresh = run(&cfg)?;
    if verify {
        for (a, b) in recorded.artifacts.iter().zip(&fresh.artifacts) {
            if a.sha256 != b.sha256 {
                return Err(Error::Domain(format!(
                    "artifact {} differs from the recorded digest",
                    b.path.display()
                )));
            }
        }
    }
    Ok(fresh)
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INVALID
    }
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Commands::Replay(a) => replay(&a.manifest, a.out_dir.as_deref(), a.verify),
        cmd => resolve(cmd).and_then(|cfg| run(&cfg)),
    };
    match result {
        Ok(m) => {
            for a in &m.artifacts {
                println!("wrote {} ({} bytes)", a.path.display(), a.bytes);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Worker threads requested through [`THREADS_ENV`], if any.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("{THREADS_ENV}='{v}' is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps() {
        assert_eq!(parse_sweep("1,2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        assert_eq!(parse_sweep("1:16:2").unwrap(), vec![1.0, 2.0, 4.0, 8.0, 16.0]);
        assert!(parse_sweep("1:2").is_err());
        assert!(parse_sweep("a,b").is_err());
        assert_eq!(parse_pair("-5,5").unwrap(), (-5.0, 5.0));
        assert!(parse_pair("5,-5").is_err());
    }

    #[test]
    fn seeded_points_are_reproducible() {
        let p = PointSet::Random { lo: -10.0, hi: 10.0, n: 10 };
        assert_eq!(p.resolve(7), p.resolve(7));
        assert_ne!(p.resolve(7), p.resolve(8));
        assert!(p.resolve(1).iter().all(|x| (-10.0..=10.0).contains(x)));
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cmd = Cli::try_parse_from([
            "mqcardinal", "study", "--kind", "sinc-convergence", "--alpha", "-1", "--c", "1:16:2",
            "--window", "-5,5", "--out", "r.json",
        ])
        .unwrap()
        .command;
        let cfg = resolve(&cmd).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.io.manifest, PathBuf::from("r.json.manifest.json"));
    }

    #[test]
    fn integer_alpha_is_rejected() {
        let code = main_with_args(["mqcardinal", "fundamental", "--alpha", "2", "--out", "/nonexistent/x.csv"]);
        assert_eq!(code, EXIT_INVALID);
        let e = MultiquadricParams::new(2.0, 1.0, 1).unwrap_err();
        assert!(e.to_string().contains("α ∈ ℕ₀ excluded"));
    }
}
