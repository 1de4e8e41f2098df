//! Experiment driver: `λ₁·diam²` records, randomized scans, degeneration
//! sweeps and the randomized property suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, DiameterEstimate, DiameterMethod, Net};
use crate::lie::{GroupKind, LieGroupCatalogEntry};
use crate::linalg::{self, CMatrix, Matrix};
use crate::metric::{self, MetricSpec, SamplerConfig};
use crate::rep::{self, IrrepLabel, RestrictedLambda};

pub const SCHEMA_VERSION: u32 = 1;
/// Absolute tolerance of checks on exact pipelines.
pub const EXACT_TOL: f64 = 1e-6;
/// Relative tolerance of eigenvalue inequalities.
pub const LAMBDA_REL_TOL: f64 = 1e-9;

/// Diameter method selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiameterChoice {
    Auto,
    Graph,
    Lattice,
    Biinv,
    Bounds,
}

impl FromStr for DiameterChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => DiameterChoice::Auto,
            "graph" => DiameterChoice::Graph,
            "lattice" => DiameterChoice::Lattice,
            "biinv" => DiameterChoice::Biinv,
            "bounds" => DiameterChoice::Bounds,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown diameter method '{other}' (auto|graph|lattice|biinv|bounds)"
                )))
            }
        })
    }
}

impl fmt::Display for DiameterChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiameterChoice::Auto => "auto",
            DiameterChoice::Graph => "graph",
            DiameterChoice::Lattice => "lattice",
            DiameterChoice::Biinv => "biinv",
            DiameterChoice::Bounds => "bounds",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiamConfig {
    pub method: DiameterChoice,
    pub net_size: usize,
    pub knn: usize,
    pub hops: usize,
    pub net_seed: u64,
    pub grid_resolution: usize,
    pub eps_net: f64,
}

impl Default for DiamConfig {
    fn default() -> Self {
        Self {
            method: DiameterChoice::Auto,
            net_size: geometry::DEFAULT_NET_SIZE,
            knn: geometry::DEFAULT_KNN,
            hops: geometry::DEFAULT_HOPS,
            net_seed: 0,
            grid_resolution: geometry::DEFAULT_GRID_RESOLUTION,
            eps_net: geometry::DEFAULT_EPS_NET,
        }
    }
}

impl DiamConfig {
    fn resolve(&self, entry: &LieGroupCatalogEntry) -> Result<DiameterChoice> {
        let unsupported = |reason: &str| Error::Unsupported {
            group: entry.key(),
            reason: reason.into(),
        };
        let torus_ok = matches!(entry.kind(), GroupKind::Torus(m) if *m <= lattice_max_dim());
        let net_ok = matches!(entry.kind(), GroupKind::Su2 | GroupKind::So3);
        match self.method {
            DiameterChoice::Auto if torus_ok => Ok(DiameterChoice::Lattice),
            DiameterChoice::Auto if net_ok => Ok(DiameterChoice::Graph),
            DiameterChoice::Auto => Err(unsupported(
                "no diameter estimator; use --method bounds for the analytic interval",
            )),
            DiameterChoice::Lattice if !torus_ok => {
                Err(unsupported("lattice method needs a torus of dimension ≤ 3"))
            }
            DiameterChoice::Graph if !net_ok => Err(unsupported("graph method needs su2 or so3")),
            other => Ok(other),
        }
    }
}

fn lattice_max_dim() -> usize {
    crate::lattice::COVERING_MAX_DIM
}

/// Diameter estimator bound to one group, holding the net when one is used.
pub struct DiameterEngine {
    entry: LieGroupCatalogEntry,
    method: DiameterChoice,
    config: DiamConfig,
    net: Option<Net>,
}

impl DiameterEngine {
    pub fn new(entry: &LieGroupCatalogEntry, config: &DiamConfig) -> Result<Self> {
        let method = config.resolve(entry)?;
        let net = if method == DiameterChoice::Graph {
            Some(geometry::build_net_cached_with_hops(
                entry,
                config.net_size,
                config.knn,
                config.net_seed,
                config.hops,
            )?)
        } else {
            None
        };
        Ok(Self {
            entry: entry.clone(),
            method,
            config: config.clone(),
            net,
        })
    }

    pub fn method(&self) -> DiameterChoice {
        self.method
    }

    pub fn net(&self) -> Option<&Net> {
        self.net.as_ref()
    }

    pub fn config(&self) -> &DiamConfig {
        &self.config
    }

    pub fn estimate(&self, spec: &MetricSpec) -> Result<DiameterEstimate> {
        match self.method {
            DiameterChoice::Lattice => geometry::torus_diameter(spec, self.config.grid_resolution),
            DiameterChoice::Graph => geometry::graph_diameter_eps(
                &self.entry,
                spec,
                self.net.as_ref().expect("graph engines hold a net"),
                self.config.eps_net,
            ),
            DiameterChoice::Biinv => biinvariant_scaled(&self.entry, spec),
            DiameterChoice::Bounds => geometry::bounds_estimate(&self.entry, spec),
            DiameterChoice::Auto => unreachable!("resolved at construction"),
        }
    }

    /// Relative tolerance matching the estimator's error model.
    pub fn tolerance(&self) -> f64 {
        match self.method {
            DiameterChoice::Graph => self.config.eps_net,
            _ => EXACT_TOL,
        }
    }
}

/// Closed-form diameter when `AAᵀ = t²·I`.
fn biinvariant_scaled(entry: &LieGroupCatalogEntry, spec: &MetricSpec) -> Result<DiameterEstimate> {
    let t = spec.sigma_max();
    if (spec.sigma_max() - spec.sigma_min()) > 1e-12 * t {
        return Err(Error::InvalidArgument(
            "biinv method needs a bi-invariant metric (all singular values equal)".into(),
        ));
    }
    Ok(geometry::biinvariant_diameter(entry).scaled(t))
}

/// `λ₁(G, g_I)`.
pub fn lambda1_identity(entry: &LieGroupCatalogEntry) -> Result<f64> {
    Ok(rep::lambda1_certified(entry, &MetricSpec::identity(entry.dim()))?.lambda1)
}

/// One row of a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub seed: u64,
    pub group: String,
    pub m: usize,
    pub sigma: Vec<f64>,
    pub lambda1: f64,
    pub lambda1_certified: bool,
    pub lambda1_witness: String,
    pub diam_lower: f64,
    pub diam_value: f64,
    pub diam_upper: f64,
    pub diam_method: DiameterMethod,
    pub ratio: f64,
    pub li_ok: bool,
    pub simple_bounds_ok: bool,
    pub remark_diam_ok: Option<bool>,
    pub remark_lambda_ok: Option<bool>,
    pub urakawa_ok: bool,
    /// The metric matrix, row-major.
    pub a: Vec<Vec<f64>>,
}

impl ScanRecord {
    /// Named check flags; `None` where a check does not apply.
    pub fn checks(&self) -> [(&'static str, Option<bool>); 5] {
        [
            ("li_ok", Some(self.li_ok)),
            ("simple_bounds_ok", Some(self.simple_bounds_ok)),
            ("remark_diam_ok", self.remark_diam_ok),
            ("remark_lambda_ok", self.remark_lambda_ok),
            ("urakawa_ok", Some(self.urakawa_ok)),
        ]
    }

    pub fn csv_header(m: usize) -> Vec<String> {
        let mut h = vec!["seed".to_string(), "group".into(), "m".into()];
        h.extend((1..=m).map(|k| format!("sigma_{k}")));
        h.extend(
            [
                "lambda1",
                "lambda1_certified",
                "lambda1_witness",
                "diam_lower",
                "diam_value",
                "diam_upper",
                "diam_method",
                "ratio",
                "li_ok",
                "simple_bounds_ok",
                "remark_diam_ok",
                "remark_lambda_ok",
                "urakawa_ok",
            ]
            .map(String::from),
        );
        h
    }

    pub fn csv_row(&self) -> Vec<String> {
        let flag = |b: Option<bool>| b.map_or_else(|| "na".to_string(), |v| v.to_string());
        let mut r = vec![self.seed.to_string(), self.group.clone(), self.m.to_string()];
        r.extend(self.sigma.iter().map(f64::to_string));
        r.extend([
            self.lambda1.to_string(),
            self.lambda1_certified.to_string(),
            self.lambda1_witness.clone(),
            self.diam_lower.to_string(),
            self.diam_value.to_string(),
            self.diam_upper.to_string(),
            self.diam_method.to_string(),
            self.ratio.to_string(),
            self.li_ok.to_string(),
            self.simple_bounds_ok.to_string(),
            flag(self.remark_diam_ok),
            flag(self.remark_lambda_ok),
            self.urakawa_ok.to_string(),
        ]);
        r
    }
}

/// `[lo, hi]` overlaps the estimate's `[lower, upper]` up to `tol`
/// (relative).
fn interval_overlaps(est: &DiameterEstimate, lo: f64, hi: f64, tol: f64) -> bool {
    est.upper >= lo * (1.0 - tol) - EXACT_TOL * 1e-3 && est.lower <= hi * (1.0 + tol) + EXACT_TOL * 1e-3
}

/// Record for one metric using a prepared engine.
pub fn egs_record(
    entry: &LieGroupCatalogEntry,
    spec: &MetricSpec,
    engine: &DiameterEngine,
    lambda_identity: f64,
    seed: u64,
) -> Result<ScanRecord> {
    let spectral = rep::lambda1_certified(entry, spec)?;
    let diam = engine.estimate(spec)?;
    let lam = spectral.lambda1;
    let tol = engine.tolerance();
    let (s1, sm) = (spec.sigma_max(), spec.sigma_min());
    let s2 = spec.sigma_k(2.min(spec.dim()));

    let li_ok = lam * diam.lower * diam.lower >= PI * PI / 4.0 - EXACT_TOL;
    let lam_simple = lam >= lambda_identity * sm * sm * (1.0 - LAMBDA_REL_TOL)
        && lam <= lambda_identity * s1 * s1 * (1.0 + LAMBDA_REL_TOL);
    let d_i = geometry::biinvariant_diameter(entry).value;
    let diam_simple = interval_overlaps(&diam, d_i / s1, d_i / sm, tol);
    let (remark_diam_ok, remark_lambda_ok) = match entry.kind() {
        GroupKind::Su2 | GroupKind::So3 => {
            let b = geometry::diameter_bounds(entry, spec)?;
            let c = if matches!(entry.kind(), GroupKind::Su2) { 2.0 } else { 4.0 };
            let lam_ok = lam > c * s2 * s2 * (1.0 + LAMBDA_REL_TOL)
                && lam <= 8.0 * s2 * s2 * (1.0 + LAMBDA_REL_TOL);
            (Some(interval_overlaps(&diam, b.lower, b.upper, tol)), Some(lam_ok))
        }
        _ => (None, None),
    };
    let trace = spec.aat().trace();
    let urakawa_ok = lam <= lambda_identity * trace * (1.0 + LAMBDA_REL_TOL)
        && lambda_identity * s1 * s1 <= lambda_identity * trace * (1.0 + LAMBDA_REL_TOL);
    Ok(ScanRecord {
        seed,
        group: entry.key(),
        m: spec.dim(),
        sigma: spec.sigma().to_vec(),
        lambda1: lam,
        lambda1_certified: spectral.certified,
        lambda1_witness: spectral.witness.to_string(),
        diam_lower: diam.lower,
        diam_value: diam.value,
        diam_upper: diam.upper,
        diam_method: diam.method,
        ratio: lam * diam.value * diam.value,
        li_ok,
        simple_bounds_ok: lam_simple && diam_simple,
        remark_diam_ok,
        remark_lambda_ok,
        urakawa_ok,
        a: spec.a().to_rows(),
    })
}

/// `λ₁·diam²` for one metric.
pub fn egs_ratio(
    entry: &LieGroupCatalogEntry,
    spec: &MetricSpec,
    config: &DiamConfig,
) -> Result<ScanRecord> {
    let engine = DiameterEngine::new(entry, config)?;
    egs_record(entry, spec, &engine, lambda1_identity(entry)?, 0)
}

/// Flag violation with what is needed to rerun it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub seed: u64,
    pub check: String,
    pub a: Vec<Vec<f64>>,
    pub reproduce: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub samples: usize,
    pub max_ratio: f64,
    pub argmax_seed: u64,
    pub argmax_sigma: Vec<f64>,
    pub min_ratio: f64,
    pub uncertified: usize,
    pub violation_counts: BTreeMap<String, usize>,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub group: String,
    pub base_seed: u64,
    pub sampler: SamplerSummary,
    pub diam: DiamConfig,
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSummary {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub random_rotation: bool,
}

fn reproduce_command(entry: &LieGroupCatalogEntry, sampler: &SamplerConfig, cfg: &DiamConfig, seed: u64) -> String {
    let mut cmd = format!(
        "liespec scan --group {} --samples 1 --seed {seed} --sigma-min {} --sigma-max {} --method {} \
         --net-size {} --knn {} --hops {} --net-seed {} --grid-resolution {}",
        entry.key(),
        sampler.lo,
        sampler.hi,
        cfg.method,
        cfg.net_size,
        cfg.knn,
        cfg.hops,
        cfg.net_seed,
        cfg.grid_resolution
    );
    if !sampler.random_rotation {
        cmd.push_str(" --no-rotation");
    }
    cmd
}

/// Seeded scan: sample `i` uses seed `base_seed + i`. Output order and
/// content do not depend on `jobs`.
pub fn scan(
    entry: &LieGroupCatalogEntry,
    n_samples: usize,
    sampler: &SamplerConfig,
    config: &DiamConfig,
    base_seed: u64,
    jobs: Option<usize>,
) -> Result<ScanReport> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("samples must be ≥ 1".into()));
    }
    sampler.validate()?;
    let engine = DiameterEngine::new(entry, config)?;
    let lam_i = lambda1_identity(entry)?;
    let run = || -> Result<Vec<ScanRecord>> {
        (0..n_samples)
            .into_par_iter()
            .map(|i| {
                let seed = base_seed.wrapping_add(i as u64);
                let spec = metric::sample_metric(entry, sampler, seed)?;
                egs_record(entry, &spec, &engine, lam_i, seed)
            })
            .collect()
    };
    let records = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let summary = summarize(entry, &records, sampler, config);
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION,
        group: entry.key(),
        base_seed,
        sampler: SamplerSummary {
            sigma_min: sampler.lo,
            sigma_max: sampler.hi,
            random_rotation: sampler.random_rotation,
        },
        diam: config.clone(),
        records,
        summary,
    })
}

fn summarize(
    entry: &LieGroupCatalogEntry,
    records: &[ScanRecord],
    sampler: &SamplerConfig,
    config: &DiamConfig,
) -> ScanSummary {
    let mut best = &records[0];
    let mut min_ratio = f64::INFINITY;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    for r in records {
        if r.ratio > best.ratio {
            best = r;
        }
        min_ratio = min_ratio.min(r.ratio);
        for (name, flag) in r.checks() {
            if flag == Some(false) {
                *counts.entry(name.to_string()).or_default() += 1;
                violations.push(Violation {
                    seed: r.seed,
                    check: name.to_string(),
                    a: r.a.clone(),
                    reproduce: reproduce_command(entry, sampler, config, r.seed),
                });
            } else {
                counts.entry(name.to_string()).or_default();
            }
        }
    }
    ScanSummary {
        samples: records.len(),
        max_ratio: best.ratio,
        argmax_seed: best.seed,
        argmax_sigma: best.sigma.clone(),
        min_ratio,
        uncertified: records.iter().filter(|r| !r.lambda1_certified).count(),
        violation_counts: counts,
        violations,
    }
}

/// Writes records as CSV. All records must share `m`.
pub fn write_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let m = records.first().map_or(0, |r| r.m);
    w.write_record(ScanRecord::csv_header(m))
        .map_err(|e| Error::Io(e.into()))?;
    for r in records {
        w.write_record(r.csv_row()).map_err(|e| Error::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

/// Degeneration sweep family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerationKind {
    /// `A = P·D_s`, shrinking the directions transverse to a maximal subgroup.
    ShrinkTransverse,
    /// `A = P·diag(s,s,s,1,…,1)` with `X₁(P), X₂(P)` generating.
    EnlargeGeneratingTriple,
    /// `A = P·diag(s, 1)` on `T²` with `X₁(P)` of irrational slope.
    TorusDenseLine,
}

impl FromStr for DegenerationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "shrink-transverse" => DegenerationKind::ShrinkTransverse,
            "enlarge-generating-triple" => DegenerationKind::EnlargeGeneratingTriple,
            "torus-dense-line" => DegenerationKind::TorusDenseLine,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown degeneration kind '{other}' \
                     (shrink-transverse|enlarge-generating-triple|torus-dense-line)"
                )))
            }
        })
    }
}

impl fmt::Display for DegenerationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenerationKind::ShrinkTransverse => "shrink-transverse",
            DegenerationKind::EnlargeGeneratingTriple => "enlarge-generating-triple",
            DegenerationKind::TorusDenseLine => "torus-dense-line",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiamSummary {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub method: DiameterMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tracked {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationRow {
    pub s: f64,
    pub sigma: Vec<f64>,
    pub lambda1: f64,
    pub lambda1_certified: bool,
    pub diam: Option<DiamSummary>,
    pub tracked: Vec<Tracked>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    StrictlyIncreasing,
    StrictlyDecreasing,
    Constant,
    Mixed,
}

impl Trend {
    /// Trend of `values` in the given order.
    pub fn of(values: &[f64]) -> Trend {
        let inc = values.windows(2).all(|w| w[1] > w[0]);
        let dec = values.windows(2).all(|w| w[1] < w[0]);
        let eq = values.windows(2).all(|w| w[1] == w[0]);
        match (inc, dec, eq) {
            (_, _, true) => Trend::Constant,
            (true, _, _) => Trend::StrictlyIncreasing,
            (_, true, _) => Trend::StrictlyDecreasing,
            _ => Trend::Mixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantityTrend {
    pub quantity: String,
    /// Direction as `s` increases.
    pub trend: Trend,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub schema_version: u32,
    pub group: String,
    pub kind: DegenerationKind,
    pub s_values: Vec<f64>,
    /// Rows in ascending `s`.
    pub rows: Vec<DegenerationRow>,
    pub trends: Vec<QuantityTrend>,
}

impl DegenerationReport {
    pub fn trend(&self, quantity: &str) -> Option<Trend> {
        self.trends.iter().find(|t| t.quantity == quantity).map(|t| t.trend)
    }

    pub fn column(&self, quantity: &str) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match quantity {
                "lambda1" => r.lambda1,
                "diam" => r.diam.as_ref().map_or(f64::NAN, |d| d.value),
                name => r
                    .tracked
                    .iter()
                    .find(|t| t.name == name)
                    .map_or(f64::NAN, |t| t.value),
            })
            .collect()
    }
}

/// Rotation whose first columns are `(X₁+X₄)/√2`, `(X₂+2X₅)/√5` and the
/// normalized bracket `(X₃+2X₆)/√5`, completed by Gram–Schmidt. The first
/// two already generate the algebra.
pub fn generating_triple_frame() -> Matrix {
    let r = 0.5f64.sqrt();
    let q = 0.2f64.sqrt();
    let mut cols: Vec<Vec<f64>> = vec![
        vec![r, 0.0, 0.0, r, 0.0, 0.0],
        vec![0.0, q, 0.0, 0.0, 2.0 * q, 0.0],
        vec![0.0, 0.0, q, 0.0, 0.0, 2.0 * q],
    ];
    for e in 0..6 {
        if cols.len() == 6 {
            break;
        }
        let mut v = vec![0.0; 6];
        v[e] = 1.0;
        for _ in 0..2 {
            for c in &cols {
                let d = linalg::dot(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= d * ci;
                }
            }
        }
        let n = linalg::norm(&v);
        if n > 1e-8 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    Matrix::from_columns(&cols).expect("square frame")
}

/// Rotation of `ℝ²` by `atan(√2)`: its first column has slope `√2`.
pub fn dense_line_frame() -> Matrix {
    let th = 2f64.sqrt().atan();
    Matrix::from_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]).expect("2x2")
}

pub fn degeneration_experiment(
    entry: &LieGroupCatalogEntry,
    kind: DegenerationKind,
    s_values: &[f64],
    config: &DiamConfig,
) -> Result<DegenerationReport> {
    if s_values.is_empty() || s_values.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidArgument("s values must be positive and finite".into()));
    }
    let mut s_sorted = s_values.to_vec();
    s_sorted.sort_by(f64::total_cmp);
    s_sorted.dedup();
    let incompatible = || Error::Unsupported {
        group: entry.key(),
        reason: format!("degeneration kind {kind} does not apply"),
    };
    let m = entry.dim();
    let is_pair = matches!(entry.kind(), GroupKind::Product(fs)
        if fs.len() == 2 && fs.iter().all(|f| matches!(f.kind(), GroupKind::Su2)));
    // (frame P, diagonal for given s, diameter available)
    let (p, diag_of): (Matrix, Box<dyn Fn(f64) -> Vec<f64>>) = match (kind, entry.kind()) {
        (DegenerationKind::ShrinkTransverse, GroupKind::Su2 | GroupKind::So3) => {
            (Matrix::identity(3), Box::new(|s| vec![1.0, s, s]))
        }
        (DegenerationKind::ShrinkTransverse, _) if is_pair => (
            Matrix::identity(6),
            Box::new(|s| vec![1.0, 1.0, 1.0, 1.0, s, s]),
        ),
        (DegenerationKind::EnlargeGeneratingTriple, _) if is_pair => (
            generating_triple_frame(),
            Box::new(|s| vec![s, s, s, 1.0, 1.0, 1.0]),
        ),
        (DegenerationKind::TorusDenseLine, GroupKind::Torus(2)) => {
            (dense_line_frame(), Box::new(|s| vec![s, 1.0]))
        }
        _ => return Err(incompatible()),
    };
    let engine = match entry.kind() {
        GroupKind::Su2 | GroupKind::So3 | GroupKind::Torus(_) => {
            Some(DiameterEngine::new(entry, config)?)
        }
        _ => None,
    };
    let k_sub = entry.k_max() - 1;
    let mut rows = Vec::with_capacity(s_sorted.len());
    for &s in &s_sorted {
        let spec = MetricSpec::from_matrix(&p * &Matrix::diag(&diag_of(s)))?;
        let spectral = rep::lambda1_certified(entry, &spec)?;
        let diam = engine.as_ref().map(|e| e.estimate(&spec)).transpose()?;
        let sig = |k: usize| spec.sigma_k(k);
        let mut tracked = Vec::new();
        let lam = spectral.lambda1;
        match kind {
            DegenerationKind::ShrinkTransverse | DegenerationKind::EnlargeGeneratingTriple => {
                tracked.push(Tracked {
                    name: format!("lambda1/sigma_{k_sub}^2"),
                    value: lam / sig(k_sub).powi(2),
                });
                if m >= 2 && k_sub != 2 {
                    tracked.push(Tracked {
                        name: "lambda1/sigma_2^2".into(),
                        value: lam / sig(2).powi(2),
                    });
                }
                if let Some(d) = &diam {
                    tracked.push(Tracked {
                        name: format!("diam*sigma_{k_sub}"),
                        value: d.value * sig(k_sub),
                    });
                }
            }
            DegenerationKind::TorusDenseLine => {
                if let Some(d) = &diam {
                    tracked.push(Tracked {
                        name: "diam*sigma_2".into(),
                        value: d.value * sig(2),
                    });
                }
                tracked.push(Tracked {
                    name: "lambda1/sigma_1^2".into(),
                    value: lam / sig(1).powi(2),
                });
            }
        }
        rows.push(DegenerationRow {
            s,
            sigma: spec.sigma().to_vec(),
            lambda1: lam,
            lambda1_certified: spectral.certified,
            diam: diam.map(|d| DiamSummary {
                lower: d.lower,
                value: d.value,
                upper: d.upper,
                method: d.method,
            }),
            tracked,
        });
    }
    let mut report = DegenerationReport {
        schema_version: SCHEMA_VERSION,
        group: entry.key(),
        kind,
        s_values: s_sorted,
        rows,
        trends: Vec::new(),
    };
    let mut names = vec!["lambda1".to_string()];
    if report.rows[0].diam.is_some() {
        names.push("diam".into());
    }
    names.extend(report.rows[0].tracked.iter().map(|t| t.name.clone()));
    report.trends = names
        .into_iter()
        .map(|q| QuantityTrend {
            trend: Trend::of(&report.column(&q)),
            quantity: q,
        })
        .collect();
    Ok(report)
}

/// Outcome of one randomized property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub worst: f64,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub schema_version: u32,
    pub group: String,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<PropertyCheck>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn check(&self, name: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct CheckAcc {
    check: PropertyCheck,
}

impl CheckAcc {
    fn new(name: &str) -> Self {
        Self {
            check: PropertyCheck {
                name: name.into(),
                trials: 0,
                failures: 0,
                worst: 0.0,
                counterexample: None,
            },
        }
    }

    /// Records one trial with a defect measure; fails when `ok` is false.
    fn record(&mut self, ok: bool, defect: f64, detail: impl FnOnce() -> String) {
        self.check.trials += 1;
        if defect.is_finite() {
            self.check.worst = self.check.worst.max(defect);
        }
        if !ok {
            self.check.failures += 1;
            if self.check.counterexample.is_none() {
                self.check.counterexample = Some(detail());
            }
        }
    }
}

/// Settings of [`property_suite`].
#[derive(Clone, Debug, PartialEq)]
pub struct PropertyConfig {
    pub sampler: SamplerConfig,
    pub net_size: usize,
    pub knn: usize,
    pub hops: usize,
    pub grid_resolution: usize,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        Self {
            sampler: SamplerConfig::log_uniform(0.3, 3.0),
            net_size: 2000,
            knn: geometry::DEFAULT_KNN,
            hops: geometry::DEFAULT_HOPS,
            grid_resolution: 24,
        }
    }
}

fn matrix_text(a: &Matrix) -> String {
    metric::format_matrix_text(a).replace('\n', "; ")
}

/// `−Σ_{ij} W_{ij} π(Y_i)π(Y_j)` for vectors `Y_i` of the algebra.
fn assemble_in_frame(ir: &rep::Irrep, frame: &[Vec<f64>], w: &Matrix) -> CMatrix {
    let reps: Vec<CMatrix> = frame.iter().map(|y| ir.represent(y)).collect();
    let mut out = CMatrix::zeros(ir.dim);
    for i in 0..reps.len() {
        for j in 0..reps.len() {
            let c = w[(i, j)];
            if c != 0.0 {
                out.add_scaled(&(&reps[i] * &reps[j]), -c);
            }
        }
    }
    out
}

/// Loewner-comparable pair `AAᵀ ≤ BBᵀ` with `BBᵀ = AAᵀ + CCᵀ`.
fn loewner_pair<R: Rng>(
    entry: &LieGroupCatalogEntry,
    sampler: &SamplerConfig,
    rng: &mut R,
) -> Result<(MetricSpec, MetricSpec)> {
    let a = metric::sample_metric(entry, sampler, rng.random())?;
    let c = metric::sample_metric(entry, sampler, rng.random())?;
    let shrink: f64 = rng.random_range(0.0..1.0);
    let extra = c.aat().scale(shrink * shrink);
    let b = MetricSpec::from_aat(&(a.aat() + &extra))?;
    Ok((a, b))
}

/// Runs every randomized invariant on `entry`.
pub fn property_suite(
    entry: &LieGroupCatalogEntry,
    n_trials: usize,
    seed: u64,
    config: &PropertyConfig,
) -> Result<PropertyReport> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("trials must be ≥ 1".into()));
    }
    config.sampler.validate()?;
    let m = entry.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = &config.sampler;
    let lam_i = lambda1_identity(entry)?;

    let mut structure = CheckAcc::new("structure_constants");
    let sc = entry.structure_constants();
    let defect = sc
        .antisymmetry_defect()
        .max(sc.jacobi_defect())
        .max(sc.ad_invariance_defect());
    structure.record(entry.validate().is_ok(), defect, || {
        format!("structure constants defect {defect:e}")
    });

    let mut right_inv = CheckAcc::new("right_orthogonal_invariance");
    let mut homothety = CheckAcc::new("homothety");
    let mut perm_free = CheckAcc::new("sigma_permutation_free");
    let mut lengths = CheckAcc::new("loewner_lengths");
    let mut lam_mono = CheckAcc::new("loewner_lambda1");
    let mut diam_mono = CheckAcc::new("loewner_diameter");
    let mut cab = CheckAcc::new("c_ab_identity");
    let mut simple = CheckAcc::new("simple_bounds");
    let mut urakawa = CheckAcc::new("trace_domination");
    let mut torus_sound = CheckAcc::new("torus_certification");
    let mut sandwich = CheckAcc::new("restricted_sandwich");

    let net = match entry.kind() {
        GroupKind::Su2 | GroupKind::So3 => Some(geometry::build_net_with_hops(
            entry,
            config.net_size,
            config.knn,
            seed,
            config.hops,
        )?),
        _ => None,
    };
    let torus_small = matches!(entry.kind(), GroupKind::Torus(t) if *t <= crate::lattice::COVERING_MAX_DIM);
    let test_irreps: Vec<IrrepLabel> = rep::IrrepStream::new(entry)
        .filter(|(_, l)| !l.is_trivial())
        .take(3)
        .map(|(_, l)| l)
        .collect();

    for _ in 0..n_trials {
        let a = metric::sample_metric(entry, sampler, rng.random())?;

        let r = metric::random_orthogonal(m, &mut rng);
        let ar = MetricSpec::from_matrix(a.a() * &r)?;
        let d = ar.gram().max_abs_diff(a.gram()) / a.gram().max_abs();
        right_inv.record(d <= 1e-9, d, || format!("A = {}; R = {}", matrix_text(a.a()), matrix_text(&r)));

        let t: f64 = rng.random_range(0.2..5.0);
        let at = a.scaled(t)?;
        let ds = at
            .sigma()
            .iter()
            .zip(a.sigma())
            .map(|(x, y)| (x - t * y).abs() / (t * y))
            .fold(0.0, f64::max);
        let dg = at.gram().max_abs_diff(&a.gram().scale(1.0 / (t * t))) / at.gram().max_abs();
        let l0 = rep::lambda1_certified(entry, &a)?.lambda1;
        let lt = rep::lambda1_certified(entry, &at)?.lambda1;
        let dl = (lt - t * t * l0).abs() / (t * t * l0);
        let worst = ds.max(dg).max(dl);
        homothety.record(worst <= 1e-9, worst, || format!("A = {}; t = {t}", matrix_text(a.a())));

        let (p, dmat) = metric::canonical_form(&a);
        let pd = MetricSpec::from_matrix(&p * &dmat)?;
        let dp = pd
            .sigma()
            .iter()
            .zip(a.sigma())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        perm_free.record(dp <= 1e-10 * a.sigma_max().max(1.0), dp, || format!("A = {}", matrix_text(a.a())));

        let (sa, sb) = loewner_pair(entry, sampler, &mut rng)?;
        let is_leq = metric::loewner_leq(&sa, &sb)?;
        let mut len_worst = 0.0_f64;
        let mut len_ok = is_leq;
        for _ in 0..100 {
            let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (ga, gb) = (sa.norm_sq(&x), sb.norm_sq(&x));
            let gap = (gb - ga) / ga.max(1e-300);
            len_worst = len_worst.max(gap);
            if ga < gb * (1.0 - 1e-12) {
                len_ok = false;
            }
        }
        lengths.record(len_ok, len_worst.max(0.0), || {
            format!("A = {}; B = {}", matrix_text(sa.a()), matrix_text(sb.a()))
        });

        let la = rep::lambda1_certified(entry, &sa)?.lambda1;
        let lb = rep::lambda1_certified(entry, &sb)?.lambda1;
        let gap = (la - lb) / lb;
        lam_mono.record(la <= lb + 1e-9 * lb.max(1.0), gap.max(0.0), || {
            format!("A = {}; B = {}; λ₁ {la} > {lb}", matrix_text(sa.a()), matrix_text(sb.a()))
        });

        let diam_pair = if let Some(net) = &net {
            Some((
                geometry::graph_diameter(entry, &sa, net)?.value,
                geometry::graph_diameter(entry, &sb, net)?.value,
            ))
        } else if torus_small {
            Some((
                geometry::torus_diameter_with(&sa, config.grid_resolution, false)?.value,
                geometry::torus_diameter_with(&sb, config.grid_resolution, false)?.value,
            ))
        } else {
            None
        };
        if let Some((da, db)) = diam_pair {
            diam_mono.record(da >= db - 1e-9 * db.max(1.0), ((db - da) / db).max(0.0), || {
                format!("A = {}; B = {}; diam {da} < {db}", matrix_text(sa.a()), matrix_text(sb.a()))
            });
        }

        let b = metric::sample_metric(entry, sampler, rng.random())?;
        let ab = MetricSpec::from_matrix(a.a() * b.a())?;
        let frame: Vec<Vec<f64>> = (0..m).map(|j| a.a().column(j)).collect();
        let mut cab_worst = 0.0_f64;
        for label in &test_irreps {
            let ir = rep::irrep(label);
            let direct = rep::assemble_minus_ca(&ir, &ab)?;
            let via = assemble_in_frame(&ir, &frame, b.aat());
            let d = direct.max_abs_diff(&via) / direct.norm().max(1.0);
            cab_worst = cab_worst.max(d);
        }
        cab.record(cab_worst <= 1e-10, cab_worst, || {
            format!("A = {}; B = {}", matrix_text(a.a()), matrix_text(b.a()))
        });

        let (s1, sm) = (a.sigma_max(), a.sigma_min());
        let lo = lam_i * sm * sm;
        let hi = lam_i * s1 * s1;
        let ok = l0 >= lo * (1.0 - LAMBDA_REL_TOL) && l0 <= hi * (1.0 + LAMBDA_REL_TOL);
        simple.record(ok, 0.0, || format!("A = {}; λ₁ {l0} ∉ [{lo}, {hi}]", matrix_text(a.a())));

        let tr = lam_i * a.aat().trace();
        let ok = l0 <= tr * (1.0 + LAMBDA_REL_TOL) && hi <= tr * (1.0 + LAMBDA_REL_TOL);
        urakawa.record(ok, 0.0, || format!("A = {}; λ₁ {l0} > {tr}", matrix_text(a.a())));

        if matches!(entry.kind(), GroupKind::Torus(t) if *t <= rep::TORUS_LAMBDA_MAX_DIM) {
            let exact = rep::torus_lambda1(&a)?.lambda1;
            let d = (exact - l0).abs() / exact;
            torus_sound.record(d <= 1e-9, d, || format!("A = {}", matrix_text(a.a())));
        }

        if entry.is_semisimple() {
            let p = a.p_sort();
            let mut ok = true;
            let mut worst = 0.0_f64;
            for k in 1..=m {
                match rep::lambda1_restricted(entry, p, k)? {
                    RestrictedLambda::Finite { value, .. } => {
                        let bound = value * a.sigma_k(k).powi(2);
                        worst = worst.max((l0 - bound) / bound);
                        if l0 > bound * (1.0 + LAMBDA_REL_TOL) {
                            ok = false;
                        }
                    }
                    RestrictedLambda::Infinite => {}
                }
            }
            sandwich.record(ok, worst.max(0.0), || format!("A = {}", matrix_text(a.a())));
        }
    }

    let checks = [
        structure, right_inv, homothety, perm_free, lengths, lam_mono, diam_mono, cab, simple,
        urakawa, torus_sound, sandwich,
    ]
    .into_iter()
    .map(|c| c.check)
    .filter(|c| c.trials > 0)
    .collect();
    Ok(PropertyReport {
        schema_version: SCHEMA_VERSION,
        group: entry.key(),
        trials: n_trials,
        seed,
        checks,
    })
}
