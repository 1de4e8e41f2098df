//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, DiameterEstimate};
use crate::lie::{self, LieGroupCatalogEntry};
use crate::linalg::Matrix;
use crate::metric::{self, MetricSpec, SamplerConfig};
use crate::rep;
use crate::scan::{self, DegenerationKind, DiamConfig, DiameterChoice, PropertyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

/// Net size used by `verify` when `--net-size` is not given.
pub const VERIFY_NET_SIZE: usize = 2000;

#[derive(Parser, Debug)]
#[command(name = "liespec", version, about = "Diameter and λ₁ of left-invariant metrics on compact Lie groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Singular values of A and the sorting rotation.
    Sigma(MetricArgs),
    /// Certified first Laplace eigenvalue.
    Lambda1 {
        #[command(flatten)]
        metric: MetricArgs,
        /// Casimir cap of the irrep search.
        #[arg(long, default_value_t = rep::DEFAULT_CASIMIR_CAP)]
        window_cap: f64,
        /// Exit with code 3 when the result is not certified.
        #[arg(long)]
        require_certified: bool,
    },
    /// Diameter estimate.
    Diam {
        #[command(flatten)]
        metric: MetricArgs,
        #[command(flatten)]
        diam: DiamArgs,
    },
    /// Bracket-generating index of a rotation.
    Ell {
        #[command(flatten)]
        group: GroupArgs,
        /// Rotation P, inline or a file; defaults to the identity.
        #[arg(long)]
        rotation: Option<String>,
    },
    /// Randomized λ₁·diam² scan.
    Scan {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        sigma_min: f64,
        #[arg(long, default_value_t = 10.0)]
        sigma_max: f64,
        /// Sample diagonal metrics only.
        #[arg(long)]
        no_rotation: bool,
        #[command(flatten)]
        diam: DiamArgs,
        /// Worker threads; output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Degeneration sweep.
    Degenerate {
        #[command(flatten)]
        group: GroupArgs,
        /// shrink-transverse | enlarge-generating-triple | torus-dense-line
        #[arg(long)]
        kind: String,
        /// Comma-separated positive values of s.
        #[arg(long, value_delimiter = ',', required = true)]
        s_values: Vec<f64>,
        #[command(flatten)]
        diam: DiamArgs,
    },
    /// Randomized property suite.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        sigma_min: f64,
        #[arg(long, default_value_t = 3.0)]
        sigma_max: f64,
        /// Net nodes for the fixed-net diameter check [default: 2000].
        #[arg(long)]
        net_size: Option<usize>,
        #[arg(long, default_value_t = geometry::DEFAULT_KNN)]
        knn: usize,
        #[arg(long, default_value_t = 24)]
        grid_resolution: usize,
    },
}

#[derive(Args, Debug)]
pub struct GroupArgs {
    /// t1 | t2 | t3 | ... | su2 | so3 | su2xsu2
    #[arg(long)]
    pub group: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Matrix A: row-major inline floats (comma or space separated) or a
    /// file path; defaults to the identity.
    #[arg(long)]
    pub matrix: Option<String>,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct DiamArgs {
    /// auto | graph | lattice | biinv | bounds
    #[arg(long, default_value = "auto")]
    pub method: String,
    #[arg(long, default_value_t = geometry::DEFAULT_NET_SIZE)]
    pub net_size: usize,
    #[arg(long, default_value_t = geometry::DEFAULT_KNN)]
    pub knn: usize,
    #[arg(long, default_value_t = geometry::DEFAULT_HOPS)]
    pub hops: usize,
    #[arg(long, default_value_t = 0)]
    pub net_seed: u64,
    #[arg(long, default_value_t = geometry::DEFAULT_GRID_RESOLUTION)]
    pub grid_resolution: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl DiamArgs {
    fn config(&self) -> Result<DiamConfig> {
        Ok(DiamConfig {
            method: self.method.parse::<DiameterChoice>()?,
            net_size: self.net_size,
            knn: self.knn,
            hops: self.hops,
            net_seed: self.net_seed,
            grid_resolution: self.grid_resolution,
            eps_net: geometry::DEFAULT_EPS_NET,
        })
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. }
        | Error::CapExceeded { .. }
        | Error::Disconnected { .. }
        | Error::NotHermitian { .. }
        | Error::InvalidStructureConstants(_) => EXIT_COMPUTE,
        _ => EXIT_INPUT,
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Err(e) = crate::self_test() {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_COMPUTE;
    }
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn entry_of(g: &GroupArgs) -> Result<LieGroupCatalogEntry> {
    LieGroupCatalogEntry::from_key(&g.group)
}

/// Reads a matrix given inline or as a path to a matrix file.
pub fn read_matrix(arg: Option<&str>, m: usize) -> Result<Matrix> {
    let Some(text) = arg else {
        return Ok(Matrix::identity(m));
    };
    let path = Path::new(text);
    let a = if path.is_file() {
        metric::parse_matrix_text(&fs::read_to_string(path)?)?
    } else {
        metric::parse_inline_matrix(text, m)?
    };
    if a.rows() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: a.rows(),
        });
    }
    Ok(a)
}

fn spec_of(m: &MetricArgs, entry: &LieGroupCatalogEntry) -> Result<MetricSpec> {
    MetricSpec::from_matrix(read_matrix(m.matrix.as_deref(), entry.dim())?)
}

/// Shortest decimal rendering with at most 10 fractional digits.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
}

fn fmt_matrix(a: &Matrix) -> String {
    (0..a.rows())
        .map(|r| fmt_vec(&a.row(r)))
        .collect::<Vec<_>>()
        .join("\n")
}

struct Sink<'a> {
    out: Option<PathBuf>,
    stdout: &'a mut dyn Write,
}

impl Sink<'_> {
    fn emit(&mut self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, bytes)?,
            None => self.stdout.write_all(bytes)?,
        }
        Ok(())
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(io::Error::other(e)))?;
        s.push('\n');
        self.emit(s.as_bytes())
    }

    fn csv(&mut self, header: &[String], rows: &[Vec<String>]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| Error::Io(e.into()))?;
        for r in rows {
            w.write_record(r).map_err(|e| Error::Io(e.into()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(io::Error::other(e.to_string())))?;
        self.emit(&bytes)
    }
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(body: T) -> Versioned<T> {
    Versioned {
        schema_version: scan::SCHEMA_VERSION,
        body,
    }
}

#[derive(Serialize)]
struct SigmaOut {
    group: String,
    m: usize,
    sigma: Vec<f64>,
    p_sort: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct Lambda1Out {
    group: String,
    sigma: Vec<f64>,
    lambda1: f64,
    witness: String,
    certified: bool,
    window: f64,
    evaluations: usize,
    diagnostics: Option<String>,
}

#[derive(Serialize)]
struct DiamOut {
    group: String,
    sigma: Vec<f64>,
    #[serde(flatten)]
    estimate: DiameterEstimate,
    bounds: Option<geometry::DiameterBounds>,
}

#[derive(Serialize)]
struct EllOut {
    group: String,
    ell: usize,
    prefix_dimensions: Vec<usize>,
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Sigma(m) => {
            let entry = entry_of(&m.group)?;
            let spec = spec_of(&m, &entry)?;
            let mut sink = Sink { out: m.group.output.out.clone(), stdout };
            let out = SigmaOut {
                group: entry.key(),
                m: spec.dim(),
                sigma: spec.sigma().to_vec(),
                p_sort: spec.p_sort().to_rows(),
            };
            match m.group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&versioned(out))?,
                Format::Csv => {
                    let header: Vec<String> = (1..=out.m).map(|k| format!("sigma_{k}")).collect();
                    sink.csv(&header, &[out.sigma.iter().map(f64::to_string).collect()])?
                }
                Format::Table => sink.emit(
                    format!(
                        "m={}\nsigma: {}\nP_sort:\n{}\n",
                        out.m,
                        fmt_vec(&out.sigma),
                        fmt_matrix(spec.p_sort())
                    )
                    .as_bytes(),
                )?,
            }
        }
        Command::Lambda1 { metric: m, window_cap, require_certified } => {
            let entry = entry_of(&m.group)?;
            let spec = spec_of(&m, &entry)?;
            if !(window_cap.is_finite() && window_cap > 0.0) {
                return Err(Error::InvalidArgument("--window-cap must be positive".into()).into());
            }
            let r = rep::lambda1_certified_with_cap(&entry, &spec, window_cap)?;
            let out = Lambda1Out {
                group: entry.key(),
                sigma: spec.sigma().to_vec(),
                lambda1: r.lambda1,
                witness: r.witness.to_string(),
                certified: r.certified,
                window: r.window,
                evaluations: r.evaluations,
                diagnostics: r.diagnostics.clone(),
            };
            let mut sink = Sink { out: m.group.output.out.clone(), stdout };
            match m.group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&versioned(&out))?,
                Format::Csv => sink.csv(
                    &["group", "lambda1", "witness", "certified", "window", "evaluations"].map(String::from),
                    &[vec![
                        out.group.clone(),
                        out.lambda1.to_string(),
                        out.witness.clone(),
                        out.certified.to_string(),
                        out.window.to_string(),
                        out.evaluations.to_string(),
                    ]],
                )?,
                Format::Table => {
                    let mut s = format!(
                        "lambda1={} witness={} certified={} window={} evaluations={}\n",
                        fmt_num(out.lambda1),
                        out.witness,
                        out.certified,
                        fmt_num(out.window),
                        out.evaluations
                    );
                    if let Some(d) = &out.diagnostics {
                        s.push_str(&format!("diagnostics: {d}\n"));
                    }
                    sink.emit(s.as_bytes())?
                }
            }
            if require_certified && !out.certified {
                return Err(Failure {
                    code: EXIT_COMPUTE,
                    message: "λ₁ not certified within the window cap".into(),
                });
            }
        }
        Command::Diam { metric: m, diam } => {
            let entry = entry_of(&m.group)?;
            let spec = spec_of(&m, &entry)?;
            let engine = scan::DiameterEngine::new(&entry, &diam.config()?)?;
            let estimate = engine.estimate(&spec)?;
            let bounds = geometry::diameter_bounds(&entry, &spec).ok();
            let out = DiamOut {
                group: entry.key(),
                sigma: spec.sigma().to_vec(),
                estimate,
                bounds,
            };
            let mut sink = Sink { out: m.group.output.out.clone(), stdout };
            let e = &out.estimate;
            match m.group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&versioned(&out))?,
                Format::Csv => sink.csv(
                    &["group", "diam_lower", "diam_value", "diam_upper", "diam_method"].map(String::from),
                    &[vec![
                        out.group.clone(),
                        e.lower.to_string(),
                        e.value.to_string(),
                        e.upper.to_string(),
                        e.method.to_string(),
                    ]],
                )?,
                Format::Table => {
                    let mut s = format!(
                        "diam={} lower={} upper={} method={}\n",
                        fmt_num(e.value),
                        fmt_num(e.lower),
                        fmt_num(e.upper),
                        e.method
                    );
                    if let Some(b) = &out.bounds {
                        s.push_str(&format!(
                            "bounds: [{}, {}] ({}; {})\n",
                            fmt_num(b.lower),
                            fmt_num(b.upper),
                            b.lower_source,
                            b.upper_source
                        ));
                    }
                    sink.emit(s.as_bytes())?
                }
            }
        }
        Command::Ell { group, rotation } => {
            let entry = entry_of(&group)?;
            let p = read_matrix(rotation.as_deref(), entry.dim())?;
            let out = EllOut {
                group: entry.key(),
                ell: lie::ell_index(&entry, &p)?,
                prefix_dimensions: lie::prefix_dimensions(&entry, &p)?,
            };
            let mut sink = Sink { out: group.output.out.clone(), stdout };
            let dims = out
                .prefix_dimensions
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            match group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&versioned(&out))?,
                Format::Csv => sink.csv(
                    &["group", "ell", "prefix_dimensions"].map(String::from),
                    &[vec![out.group.clone(), out.ell.to_string(), dims]],
                )?,
                Format::Table => sink.emit(format!("ell={}\nprefix_dimensions: {dims}\n", out.ell).as_bytes())?,
            }
        }
        Command::Scan {
            group,
            samples,
            seed,
            sigma_min,
            sigma_max,
            no_rotation,
            diam,
            jobs,
        } => {
            let entry = entry_of(&group)?;
            let mut sampler = SamplerConfig::log_uniform(sigma_min, sigma_max);
            sampler.random_rotation = !no_rotation;
            if jobs == Some(0) {
                return Err(Error::InvalidArgument("--jobs must be ≥ 1".into()).into());
            }
            let report = scan::scan(&entry, samples, &sampler, &diam.config()?, seed, jobs)?;
            let s = &report.summary;
            let _ = writeln!(
                stderr,
                "samples={} max_ratio={} argmax_seed={} uncertified={} violations={}",
                s.samples,
                fmt_num(s.max_ratio),
                s.argmax_seed,
                s.uncertified,
                s.violations.len()
            );
            let mut sink = Sink { out: group.output.out.clone(), stdout };
            match group.output.format.unwrap_or(Format::Csv) {
                Format::Json => sink.json(&report)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    scan::write_csv(&report.records, &mut buf)?;
                    sink.emit(&buf)?
                }
                Format::Table => {
                    let mut t = format!(
                        "group={} samples={} max_ratio={} min_ratio={} argmax_seed={} argmax_sigma: {}\n",
                        report.group,
                        s.samples,
                        fmt_num(s.max_ratio),
                        fmt_num(s.min_ratio),
                        s.argmax_seed,
                        fmt_vec(&s.argmax_sigma)
                    );
                    for (name, n) in &s.violation_counts {
                        t.push_str(&format!("{name}: {n} violations\n"));
                    }
                    for v in &s.violations {
                        t.push_str(&format!("violation {} seed={}: {}\n", v.check, v.seed, v.reproduce));
                    }
                    sink.emit(t.as_bytes())?
                }
            }
        }
        Command::Degenerate { group, kind, s_values, diam } => {
            let entry = entry_of(&group)?;
            let kind: DegenerationKind = kind.parse()?;
            let report = scan::degeneration_experiment(&entry, kind, &s_values, &diam.config()?)?;
            let mut sink = Sink { out: group.output.out.clone(), stdout };
            let tracked: Vec<String> = report.rows[0].tracked.iter().map(|t| t.name.clone()).collect();
            let m = entry.dim();
            match group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&report)?,
                Format::Csv => {
                    let mut header = vec!["s".to_string()];
                    header.extend((1..=m).map(|k| format!("sigma_{k}")));
                    header.extend(
                        ["lambda1", "lambda1_certified", "diam_lower", "diam_value", "diam_upper"].map(String::from),
                    );
                    header.extend(tracked.iter().cloned());
                    let na = |d: Option<f64>| d.map_or_else(|| "na".to_string(), |v| v.to_string());
                    let rows: Vec<Vec<String>> = report
                        .rows
                        .iter()
                        .map(|r| {
                            let mut row = vec![r.s.to_string()];
                            row.extend(r.sigma.iter().map(f64::to_string));
                            row.push(r.lambda1.to_string());
                            row.push(r.lambda1_certified.to_string());
                            row.push(na(r.diam.as_ref().map(|d| d.lower)));
                            row.push(na(r.diam.as_ref().map(|d| d.value)));
                            row.push(na(r.diam.as_ref().map(|d| d.upper)));
                            row.extend(r.tracked.iter().map(|t| t.value.to_string()));
                            row
                        })
                        .collect();
                    sink.csv(&header, &rows)?
                }
                Format::Table => {
                    let mut t = format!("group={} kind={}\n", report.group, report.kind);
                    let mut cols = vec!["s".to_string(), "lambda1".into()];
                    if report.rows[0].diam.is_some() {
                        cols.push("diam".into());
                    }
                    cols.extend(tracked.iter().cloned());
                    t.push_str(&cols.join("\t"));
                    t.push('\n');
                    for r in &report.rows {
                        let mut cells = vec![fmt_num(r.s), fmt_num(r.lambda1)];
                        if let Some(d) = &r.diam {
                            cells.push(fmt_num(d.value));
                        }
                        cells.extend(r.tracked.iter().map(|x| fmt_num(x.value)));
                        t.push_str(&cells.join("\t"));
                        t.push('\n');
                    }
                    for q in &report.trends {
                        t.push_str(&format!("trend {} (increasing s): {:?}\n", q.quantity, q.trend));
                    }
                    sink.emit(t.as_bytes())?
                }
            }
        }
        Command::Verify {
            group,
            trials,
            seed,
            sigma_min,
            sigma_max,
            net_size,
            knn,
            grid_resolution,
        } => {
            let entry = entry_of(&group)?;
            let config = PropertyConfig {
                sampler: SamplerConfig::log_uniform(sigma_min, sigma_max),
                net_size: net_size.unwrap_or(VERIFY_NET_SIZE),
                knn,
                hops: geometry::DEFAULT_HOPS,
                grid_resolution,
            };
            let report = scan::property_suite(&entry, trials, seed, &config)?;
            let mut sink = Sink { out: group.output.out.clone(), stdout };
            match group.output.format.unwrap_or(Format::Table) {
                Format::Json => sink.json(&report)?,
                Format::Csv => sink.csv(
                    &["check", "trials", "failures", "worst", "counterexample"].map(String::from),
                    &report
                        .checks
                        .iter()
                        .map(|c| {
                            vec![
                                c.name.clone(),
                                c.trials.to_string(),
                                c.failures.to_string(),
                                c.worst.to_string(),
                                c.counterexample.clone().unwrap_or_default(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                )?,
                Format::Table => {
                    let mut t = String::new();
                    for c in &report.checks {
                        t.push_str(&format!(
                            "{} {} trials={} failures={} worst={:e}\n",
                            if c.failures == 0 { "PASS" } else { "FAIL" },
                            c.name,
                            c.trials,
                            c.failures,
                            c.worst
                        ));
                        if let Some(ce) = &c.counterexample {
                            t.push_str(&format!("  counterexample: {ce}\n"));
                        }
                    }
                    t.push_str(if report.passed() { "all checks passed\n" } else { "some checks failed\n" });
                    sink.emit(t.as_bytes())?
                }
            }
            if !report.passed() {
                return Err(Failure {
                    code: EXIT_COMPUTE,
                    message: "property suite reported failures".into(),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["liespec"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(2.9999999999999996), "3");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(-1e-14), "0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn sigma_diag() {
        let (code, out, _) = run_capture(&["sigma", "--group", "su2", "--matrix", "3,0,0,0,2,0,0,0,1"]);
        assert_eq!(code, 0);
        assert!(out.contains("sigma: 3 2 1"), "{out}");
    }

    #[test]
    fn validation_errors_exit_2() {
        let (code, _, err) = run_capture(&["sigma", "--group", "su2", "--matrix", "1,0,0,0,1,0,0,0,0"]);
        assert_eq!(code, 2);
        assert!(err.contains("singular"), "{err}");
        assert_eq!(run_capture(&["sigma", "--group", "su5"]).0, 2);
        assert_eq!(run_capture(&["sigma", "--group", "su2", "--bogus", "1"]).0, 2);
        assert_eq!(run_capture(&["lambda1", "--group", "su2", "--matrix", "1,2"]).0, 2);
    }

    #[test]
    fn lambda1_su2_identity() {
        let (code, out, _) = run_capture(&["lambda1", "--group", "su2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("lambda1=3 witness=spin(1/2) certified=true"), "{out}");
    }

    #[test]
    fn uncertified_required_exit_3() {
        let (code, _, _) = run_capture(&[
            "lambda1",
            "--group",
            "su2",
            "--matrix",
            "100,0,0,0,1,0,0,0,0.01",
            "--window-cap",
            "5",
            "--require-certified",
        ]);
        assert_eq!(code, 3);
    }

    #[test]
    fn ell_values() {
        assert!(run_capture(&["ell", "--group", "su2"]).1.starts_with("ell=2"));
        assert!(run_capture(&["ell", "--group", "t3"]).1.starts_with("ell=3"));
        assert!(run_capture(&["ell", "--group", "su2xsu2"]).1.starts_with("ell=5"));
    }

    #[test]
    fn json_is_versioned() {
        let (code, out, _) = run_capture(&["lambda1", "--group", "so3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert!((v["lambda1"].as_f64().unwrap() - 8.0).abs() < 1e-9);
    }
}
