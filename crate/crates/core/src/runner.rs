//! Batch driver: a JSON run configuration in, an ordered table of constants out.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "task": "sweep-M",
//!   "p": "inf",
//!   "N": 1,
//!   "m": 1,
//!   "body": "box:1",
//!   "n": {"min": 5, "max": 41, "step": 2, "parity": "odd"},
//!   "seed": 0,
//!   "output": {"path": "out.csv", "format": "csv"}
//! }
//! ```
//!
//! Rows are computed in parallel and assembled in order of `n`; a failing row is
//! reported with its error and does not abort the sweep. Given the same
//! configuration and seed, the output is bit-identical (wall-clock timing is
//! recorded only when `"timing": true`).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    different_metrics_constant, different_metrics_constant_with_stability, estimate_limit, polynomial_constant,
    polynomial_constant_with_stability, trigonometric_constant, trigonometric_constant_with_stability,
    ConstantKind, DegreeStructure, ExtremalProblem, GrowthExponent, LimitEstimate, NikolskiiProblem, Resolution,
    SharpConstantResult, TrigProblem,
};
use crate::entire::{extremal_extraction, ExtractionReport, ExtractionSettings};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::geometry::ConvexBody;
use crate::poly::{DiffOperator, PolynomialJson};
use crate::verify::{verify, Suite, SuiteReport};

/// Version of the configuration format.
pub const SCHEMA_VERSION: u32 = 1;

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "sweep-M")]
    SweepM,
    #[serde(rename = "sweep-P")]
    SweepP,
    #[serde(rename = "sweep-N")]
    SweepN,
    #[serde(rename = "limit-E")]
    LimitE,
    #[serde(rename = "verify-inequalities")]
    VerifyInequalities,
    #[serde(rename = "extract")]
    Extract,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    #[default]
    All,
    Odd,
    Even,
}

/// `min..=max` in steps of `step`, filtered by parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeRange {
    pub min: u32,
    pub max: u32,
    #[serde(default = "one")]
    pub step: u32,
    #[serde(default)]
    pub parity: Parity,
}

fn one() -> u32 {
    1
}

impl DegreeRange {
    pub fn values(&self) -> Result<Vec<u32>> {
        if self.step == 0 {
            return Err(Error::Config("n.step must be positive".into()));
        }
        let values: Vec<u32> = (self.min..=self.max)
            .step_by(self.step as usize)
            .filter(|n| match self.parity {
                Parity::All => true,
                Parity::Odd => n % 2 == 1,
                Parity::Even => n % 2 == 0,
            })
            .collect();
        if values.is_empty() {
            return Err(Error::Config(format!("the n range {self:?} is empty")));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`; expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Growth exponent of the different-metrics sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthSpec {
    TwoMOverP,
    MPlusOneOverP,
    #[serde(untagged)]
    Custom(f64),
}

impl From<GrowthSpec> for GrowthExponent {
    fn from(g: GrowthSpec) -> Self {
        match g {
            GrowthSpec::TwoMOverP => GrowthExponent::TwoMOverP,
            GrowthSpec::MPlusOneOverP => GrowthExponent::MPlusOneOverP,
            GrowthSpec::Custom(mu) => GrowthExponent::Custom(mu),
        }
    }
}

/// A run configuration; see the module documentation for an example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub task: Task,
    #[serde(default = "default_p")]
    pub p: Exponent,
    /// Order of the pure derivative `∂^N/∂y_1^N`; ignored when `operator` is given.
    #[serde(rename = "N", default)]
    pub order: u32,
    /// General operator `Σ b_α D^α` in polynomial exchange form (`n` holds the order).
    #[serde(default)]
    pub operator: Option<PolynomialJson>,
    #[serde(default = "default_body")]
    pub body: String,
    #[serde(default = "one_usize")]
    pub m: usize,
    #[serde(default = "default_range")]
    pub n: DegreeRange,
    #[serde(default)]
    pub resolution: Option<Resolution>,
    /// Per-axis grid of the torus for `sweep-P`.
    #[serde(default)]
    pub torus_grid: Option<usize>,
    #[serde(default)]
    pub growth: Option<GrowthSpec>,
    #[serde(default)]
    pub per_variable_degree: bool,
    #[serde(default)]
    pub seed: u64,
    /// Recompute every row at doubled resolution and report the relative change.
    #[serde(default = "yes")]
    pub stability: bool,
    /// Record wall-clock time per row (breaks bit-identical reruns).
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub suites: Option<Vec<Suite>>,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_p() -> Exponent {
    Exponent::Finite(2.0)
}

fn default_body() -> String {
    "box:1".into()
}

fn one_usize() -> usize {
    1
}

fn default_range() -> DegreeRange {
    DegreeRange { min: 1, max: 8, step: 1, parity: Parity::All }
}

fn yes() -> bool {
    true
}

impl RunConfig {
    /// A configuration with defaults for everything but the task.
    pub fn new(task: Task) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            task,
            p: default_p(),
            order: 0,
            operator: None,
            body: default_body(),
            m: 1,
            n: default_range(),
            resolution: None,
            torus_grid: None,
            growth: None,
            per_variable_degree: false,
            seed: 0,
            stability: true,
            timing: false,
            suites: None,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported schema {}; expected {SCHEMA_VERSION}", self.schema)));
        }
        if self.task != Task::VerifyInequalities {
            self.n.values()?;
            self.body()?;
            self.operator()?;
        }
        Ok(())
    }

    pub fn body(&self) -> Result<ConvexBody> {
        ConvexBody::parse(&self.body, Some(self.m))
    }

    pub fn operator(&self) -> Result<DiffOperator> {
        let op = match &self.operator {
            Some(json) => DiffOperator::from_json(json).map_err(|e| Error::Config(format!("operator: {e}")))?,
            None if self.order == 0 => DiffOperator::identity(self.m),
            None => DiffOperator::pure(self.m, self.order),
        };
        if op.dim() != self.m {
            return Err(Error::Config(format!("operator has dimension {} but m = {}", op.dim(), self.m)));
        }
        Ok(op)
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub constant: String,
    pub n: u32,
    pub p: Exponent,
    #[serde(rename = "N")]
    pub order: u32,
    pub m: usize,
    pub body: String,
    pub kind: ConstantKind,
    pub value: Option<f64>,
    pub method: Option<String>,
    pub stability_delta: Option<f64>,
    pub unstable: bool,
    pub seed: u64,
    pub runtime_ms: u64,
    pub error: Option<String>,
    pub extremal: Option<serde_json::Value>,
}

/// Everything a run produced, with the configuration echoed.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub rows: Vec<RunRow>,
    pub limit: Option<LimitEstimate>,
    pub suites: Vec<SuiteReport>,
    pub extraction: Option<ExtractionReport>,
}

impl RunReport {
    /// `true` if every row has a value and every suite passed.
    pub fn succeeded(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none()) && self.suites.iter().all(SuiteReport::passed)
    }

    pub fn failed_suites(&self) -> Vec<Suite> {
        self.suites.iter().filter(|s| !s.passed()).map(|s| s.suite).collect()
    }

    /// CSV with columns `n,p,N,m,body,kind,value,method,stability_delta,seed,runtime_ms`.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record([
            "n",
            "p",
            "N",
            "m",
            "body",
            "kind",
            "value",
            "method",
            "stability_delta",
            "seed",
            "runtime_ms",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in &self.rows {
            writer.write_record([
                r.n.to_string(),
                r.p.to_string(),
                r.order.to_string(),
                r.m.to_string(),
                r.body.clone(),
                r.kind.to_string(),
                opt(r.value),
                r.method.clone().unwrap_or_else(|| "failed".into()),
                opt(r.stability_delta),
                r.seed.to_string(),
                r.runtime_ms.to_string(),
            ])?;
        }
        writer.into_inner().map_err(|e| Error::Internal(format!("csv buffer: {e}")))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Executes a run on a pool of `jobs` threads (all cores if `None`) and writes the
/// output file if one is configured.
pub fn run(config: &RunConfig, jobs: Option<usize>) -> Result<RunReport> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let report = pool.install(|| execute(config))?;
    if let Some(path) = &config.output.path {
        write_atomic(path, &report.render(config.output.format)?)?;
    }
    Ok(report)
}

fn execute(config: &RunConfig) -> Result<RunReport> {
    let mut report = RunReport {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        rows: Vec::new(),
        limit: None,
        suites: Vec::new(),
        extraction: None,
    };
    match config.task {
        Task::VerifyInequalities => {
            let suites = config.suites.clone().unwrap_or_else(|| Suite::ALL.to_vec());
            report.suites = suites.iter().map(|s| verify(*s, config.seed)).collect::<Result<_>>()?;
        }
        Task::SweepM | Task::SweepP | Task::SweepN | Task::LimitE => {
            let body = config.body()?;
            let op = config.operator()?;
            report.rows = config
                .n
                .values()?
                .par_iter()
                .map(|&n| sweep_row(config, &body, &op, n))
                .collect::<Result<Vec<_>>>()?;
            if config.task == Task::LimitE {
                let values: Vec<(u32, f64)> =
                    report.rows.iter().filter_map(|r| r.value.map(|v| (r.n, v))).collect();
                report.limit = Some(estimate_limit(&values)?);
            }
        }
        Task::Extract => {
            let body = config.body()?;
            let op = config.operator()?;
            let degrees = config.n.values()?;
            let settings = ExtractionSettings { resolution: config.resolution, seed: config.seed };
            let extraction = extremal_extraction(config.p, &op, &body, &degrees, settings)?;
            report.rows = extraction
                .rows
                .iter()
                .map(|r| RunRow {
                    value: Some(r.value),
                    method: Some("extraction".into()),
                    ..blank_row(config, &body, ConstantKind::Polynomial, r.n)
                })
                .collect();
            report.extraction = Some(extraction);
        }
    }
    Ok(report)
}

fn blank_row(config: &RunConfig, body: &ConvexBody, kind: ConstantKind, n: u32) -> RunRow {
    let order = config.operator.as_ref().map_or(config.order, |o| o.n);
    RunRow {
        constant: format!("{kind}(p={}, N={order}, n={n}, m={}, V={body})", config.p, config.m),
        n,
        p: config.p,
        order,
        m: config.m,
        body: body.to_string(),
        kind,
        value: None,
        method: None,
        stability_delta: None,
        unstable: false,
        seed: config.seed,
        runtime_ms: 0,
        error: None,
        extremal: None,
    }
}

fn sweep_row(config: &RunConfig, body: &ConvexBody, op: &DiffOperator, n: u32) -> Result<RunRow> {
    let kind = match config.task {
        Task::SweepP => ConstantKind::Trigonometric,
        Task::SweepN => ConstantKind::DifferentMetrics,
        _ => ConstantKind::Polynomial,
    };
    let start = Instant::now();
    let outcome = solve_row(config, body, op, n, kind);
    let mut row = blank_row(config, body, kind, n);
    if config.timing {
        row.runtime_ms = start.elapsed().as_millis() as u64;
    }
    match outcome {
        Ok(result) => {
            row.value = Some(result.value);
            row.method = Some(result.method.to_string());
            row.stability_delta = result.diagnostics.stability_delta;
            row.unstable = result.diagnostics.unstable;
            row.extremal = Some(result.extremal.to_json()?);
        }
        Err(Error::Internal(msg)) => return Err(Error::Internal(msg)),
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

fn solve_row(
    config: &RunConfig,
    body: &ConvexBody,
    op: &DiffOperator,
    n: u32,
    kind: ConstantKind,
) -> Result<SharpConstantResult> {
    match kind {
        ConstantKind::Polynomial => {
            let mut problem = ExtremalProblem::new(config.p, op.clone(), n, body.clone())?.with_seed(config.seed);
            if let Some(res) = config.resolution {
                problem = problem.with_resolution(res);
            }
            if config.stability {
                polynomial_constant_with_stability(&problem)
            } else {
                polynomial_constant(&problem)
            }
        }
        ConstantKind::Trigonometric => {
            let mut problem = TrigProblem::new(config.p, op.clone(), f64::from(n), body.clone())?.with_seed(config.seed);
            if let Some(grid) = config.torus_grid {
                problem = problem.with_torus_grid(grid);
            }
            if config.stability {
                trigonometric_constant_with_stability(&problem)
            } else {
                trigonometric_constant(&problem)
            }
        }
        ConstantKind::DifferentMetrics => {
            if op.order() != 0 {
                return Err(Error::Config("the different-metrics constant takes no operator".into()));
            }
            let growth = config.growth.unwrap_or(GrowthSpec::TwoMOverP).into();
            let mut problem = NikolskiiProblem::new(config.p, n, body.clone(), growth)?.with_seed(config.seed);
            if config.per_variable_degree {
                problem = problem.with_structure(DegreeStructure::PerVariable);
            }
            if let Some(res) = config.resolution {
                problem = problem.with_resolution(res);
            }
            if config.stability {
                different_metrics_constant_with_stability(&problem)
            } else {
                different_metrics_constant(&problem)
            }
        }
    }
}

/// Convenience: the operator `Σ b_α D^α` from `(α, b)` pairs in exchange form.
pub fn operator_json(m: usize, order: u32, terms: &[(Vec<u32>, Complex64)]) -> PolynomialJson {
    PolynomialJson {
        m,
        n: order,
        terms: terms
            .iter()
            .map(|(beta, b)| crate::poly::TermJson { beta: beta.clone(), re: b.re, im: b.im })
            .collect(),
    }
}
