//! Seeded experiment sweeps: run, verify, aggregate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;
use thiserror::Error;

use crate::edge::edge_coloring_protocol;
use crate::error::{GraphError, ProtocolError};
use crate::generate::{gen_random_instance, gen_zec_product_instance, Model, PartitionStrategy};
use crate::graph::EdgePartition;
use crate::io::{write_edge_coloring, write_vertex_coloring};
use crate::runtime::{RuntimeConfig, Transcript};
use crate::verify::{verify_edge_coloring, verify_vertex_coloring, EdgeColoring, VertexColoring, Violation};
use crate::vertex::{vertex_coloring_protocol, VertexConfig};

/// Mixed into the instance seed to get the protocol's coin seed.
pub const PROTOCOL_STREAM: u64 = 0x3c6e_f372_fe94_f82b;

pub const CSV_HEADER: &str = "problem,n,Δ,meanBitsPerN,maxRounds,meanRounds,failures";

/// Fewest seeds per sweep point a bench accepts.
pub const MIN_BENCH_SEEDS: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Vertex,
    Edge,
    /// The edge protocol on a union of ZEC gadgets.
    Zec,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Vertex => "vertex",
            Problem::Edge => "edge",
            Problem::Zec => "zec",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vertex" => Ok(Problem::Vertex),
            "edge" => Ok(Problem::Edge),
            "zec" => Ok(Problem::Zec),
            _ => Err(format!("unknown problem `{s}` (expected vertex, edge or zec)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    /// Vertex counts. For `zec` each must be a multiple of 9.
    pub n: Vec<usize>,
    /// Target max degrees. Ignored for `zec`.
    #[serde(default)]
    pub delta: Vec<usize>,
    #[serde(default = "default_model")]
    pub model: Model,
    #[serde(default = "default_partition")]
    pub partition: PartitionStrategy,
    pub seeds: u64,
    #[serde(default)]
    pub first_seed: u64,
    #[serde(default)]
    pub l_multiplier: Option<f64>,
    #[serde(default)]
    pub h_threshold: Option<f64>,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub round_cap: Option<u64>,
}

fn default_model() -> Model {
    Model::BoundedUniform
}

fn default_partition() -> PartitionStrategy {
    PartitionStrategy::Random
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("instance generation failed: {0}")]
    Graph(#[from] GraphError),
    #[error("protocol failed on {instance}: {source}")]
    Protocol {
        instance: String,
        #[source]
        source: ProtocolError,
    },
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Graph(_) => 2,
            HarnessError::Protocol { .. } => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::Usage(msg.into())
}

/// One sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub n: usize,
    pub delta: usize,
}

impl ExperimentConfig {
    pub fn new(problem: Problem, n: Vec<usize>, delta: Vec<usize>, seeds: u64) -> Self {
        ExperimentConfig {
            problem,
            n,
            delta,
            model: default_model(),
            partition: default_partition(),
            seeds,
            first_seed: 0,
            l_multiplier: None,
            h_threshold: None,
            restarts: None,
            round_cap: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds == 0 {
            return Err(usage("seeds must be at least 1"));
        }
        if self.first_seed.checked_add(self.seeds).is_none() {
            return Err(usage("seed range overflows"));
        }
        if let Some(x) = self.l_multiplier.filter(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(usage(format!("lMultiplier must be positive, got {x}")));
        }
        if let Some(x) = self.h_threshold.filter(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(usage(format!("hThreshold must be positive, got {x}")));
        }
        if self.restarts == Some(0) {
            return Err(usage("restarts must be at least 1"));
        }
        if self.round_cap == Some(0) {
            return Err(usage("roundCap must be at least 1"));
        }
        for &n in &self.n {
            if n == 0 {
                return Err(usage("n must be positive"));
            }
            if self.problem == Problem::Zec && n % 9 != 0 {
                return Err(usage(format!("zec needs n divisible by 9, got {n}")));
            }
        }
        if self.problem != Problem::Zec {
            if !self.n.is_empty() && self.delta.is_empty() {
                return Err(usage("delta list is empty"));
            }
            for &n in &self.n {
                for &d in &self.delta {
                    if d > n - 1 {
                        return Err(usage(format!("Δ={d} is infeasible for n={n}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sweep points in canonical order.
    pub fn points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = match self.problem {
            Problem::Zec => self.n.iter().map(|&n| Point { n, delta: 2 }).collect(),
            _ => self
                .n
                .iter()
                .flat_map(|&n| self.delta.iter().map(move |&delta| Point { n, delta }))
                .collect(),
        };
        pts.sort();
        pts.dedup();
        pts
    }

    pub fn seed_range(&self) -> std::ops::Range<u64> {
        self.first_seed..self.first_seed + self.seeds
    }

    pub fn runtime(&self) -> RuntimeConfig {
        let mut rt = RuntimeConfig::default();
        if let Some(cap) = self.round_cap {
            rt.round_cap = cap;
        }
        rt
    }

    pub fn vertex_config(&self) -> VertexConfig {
        let mut vc = VertexConfig {
            runtime: self.runtime(),
            ..VertexConfig::default()
        };
        if let Some(x) = self.l_multiplier {
            vc.l_multiplier = x;
        }
        if let Some(x) = self.h_threshold {
            vc.h_threshold = x;
        }
        if let Some(x) = self.restarts {
            vc.restarts = x;
        }
        vc
    }

    pub fn instance(&self, pt: Point, seed: u64) -> Result<EdgePartition, HarnessError> {
        Ok(match self.problem {
            Problem::Zec => gen_zec_product_instance(pt.n / 9, seed),
            _ => gen_random_instance(pt.n, pt.delta, self.model, self.partition, seed)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutput {
    Vertex(VertexColoring),
    Edge(EdgeColoring),
}

impl RunOutput {
    /// The coloring in the text format read by `parse_coloring`.
    pub fn to_file(&self, p: &EdgePartition, palette: usize) -> String {
        match self {
            RunOutput::Vertex(c) => write_vertex_coloring(c, palette),
            RunOutput::Edge(c) => write_edge_coloring(p, c, palette),
        }
    }
}

/// Per-run report, one JSON line each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub problem: Problem,
    pub n: usize,
    pub delta: usize,
    pub max_degree: usize,
    pub edges: usize,
    /// Generator settings, absent for instances not drawn at random.
    pub model: Option<Model>,
    pub partition: Option<PartitionStrategy>,
    pub seed: u64,
    pub palette: usize,
    pub total_bits: u64,
    pub total_rounds: u64,
    pub bits_per_n: f64,
    pub phase_bits: BTreeMap<String, u64>,
    pub verified: bool,
    pub violation_count: usize,
    /// At most the first ten violations.
    pub violations: Vec<Violation>,
    pub wall_ms: f64,
}

/// A report together with everything needed to replay-compare the run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: RunReport,
    pub transcript: Transcript,
    pub output: RunOutput,
}

fn protocol_err(cfg: &ExperimentConfig, pt: Point, seed: u64) -> impl Fn(ProtocolError) -> HarnessError + '_ {
    move |source| HarnessError::Protocol {
        instance: format!("{} n={} Δ={} seed={seed}", cfg.problem, pt.n, pt.delta),
        source,
    }
}

/// Generate, run and independently verify one instance.
pub fn run_one(cfg: &ExperimentConfig, pt: Point, seed: u64) -> Result<RunOutcome, HarnessError> {
    let p = cfg.instance(pt, seed)?;
    let mut out = run_on(cfg, &p, pt, seed)?;
    if cfg.problem != Problem::Zec {
        out.report.model = Some(cfg.model);
        out.report.partition = Some(cfg.partition);
    }
    Ok(out)
}

/// Run and verify on a given instance. `seed` feeds the protocol coins.
pub fn run_on(cfg: &ExperimentConfig, p: &EdgePartition, pt: Point, seed: u64) -> Result<RunOutcome, HarnessError> {
    let start = Instant::now();
    let max_degree = p.max_degree();
    let (palette, transcript, output, violations) = match cfg.problem {
        Problem::Vertex => {
            let run = vertex_coloring_protocol(p, seed ^ PROTOCOL_STREAM, &cfg.vertex_config())
                .map_err(protocol_err(cfg, pt, seed))?;
            let palette = max_degree + 1;
            let v = verify_vertex_coloring(p.graph(), &run.coloring, palette);
            (palette, run.transcript, RunOutput::Vertex(run.coloring), v)
        }
        Problem::Edge | Problem::Zec => {
            let run = edge_coloring_protocol(p, &cfg.runtime()).map_err(protocol_err(cfg, pt, seed))?;
            let palette = (2 * max_degree).saturating_sub(1);
            let v = verify_edge_coloring(p, &run.coloring, palette);
            (palette, run.transcript, RunOutput::Edge(run.coloring), v)
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let report = RunReport {
        problem: cfg.problem,
        n: pt.n,
        delta: pt.delta,
        max_degree,
        edges: p.graph().edge_count(),
        model: None,
        partition: None,
        seed,
        palette,
        total_bits: transcript.total_bits,
        total_rounds: transcript.total_rounds,
        bits_per_n: transcript.total_bits as f64 / pt.n as f64,
        phase_bits: transcript.bits_by_phase(),
        verified: violations.is_empty(),
        violation_count: violations.len(),
        violations: violations.into_iter().take(10).collect(),
        wall_ms,
    };
    Ok(RunOutcome {
        report,
        transcript,
        output,
    })
}

/// Every (point, seed) of the config, verified, in canonical order.
pub fn cmd_run(cfg: &ExperimentConfig) -> Result<Vec<RunReport>, HarnessError> {
    cfg.validate()?;
    let jobs: Vec<(Point, u64)> = cfg
        .points()
        .into_iter()
        .flat_map(|pt| cfg.seed_range().map(move |s| (pt, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(pt, seed)| run_one(cfg, pt, seed).map(|o| o.report))
        .collect()
}

/// Mean, max and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub max: f64,
    pub std_dev: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Summary {
        if xs.is_empty() {
            return Summary {
                mean: 0.0,
                max: 0.0,
                std_dev: 0.0,
            };
        }
        let std_dev = if xs.len() > 1 { xs.std_dev() } else { 0.0 };
        Summary {
            mean: xs.mean(),
            max: xs.max(),
            std_dev,
        }
    }

    /// Standard error of the mean.
    pub fn sem(&self, count: usize) -> f64 {
        if count == 0 {
            0.0
        } else {
            self.std_dev / (count as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepAggregate {
    pub problem: Problem,
    pub n: usize,
    pub delta: usize,
    pub runs: usize,
    pub bits_per_n: Summary,
    pub rounds: Summary,
    pub failures: usize,
}

impl SweepAggregate {
    pub fn from_reports(problem: Problem, pt: Point, reports: &[RunReport]) -> Self {
        let bpn: Vec<f64> = reports.iter().map(|r| r.bits_per_n).collect();
        let rounds: Vec<f64> = reports.iter().map(|r| r.total_rounds as f64).collect();
        SweepAggregate {
            problem,
            n: pt.n,
            delta: pt.delta,
            runs: reports.len(),
            bits_per_n: Summary::of(&bpn),
            rounds: Summary::of(&rounds),
            failures: reports.iter().filter(|r| !r.verified).count(),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.6},{},{:.6},{}",
            self.problem,
            self.n,
            self.delta,
            self.bits_per_n.mean,
            self.rounds.max as u64,
            self.rounds.mean,
            self.failures
        )
    }
}

pub fn aggregate(cfg: &ExperimentConfig, reports: &[RunReport]) -> Vec<SweepAggregate> {
    cfg.points()
        .into_iter()
        .map(|pt| {
            let rs: Vec<RunReport> = reports
                .iter()
                .filter(|r| r.n == pt.n && r.delta == pt.delta)
                .cloned()
                .collect();
            SweepAggregate::from_reports(cfg.problem, pt, &rs)
        })
        .collect()
}

pub fn to_csv(rows: &[SweepAggregate]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Run the sweep and aggregate per point.
pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<Vec<SweepAggregate>, HarnessError> {
    if cfg.points().is_empty() {
        return Ok(Vec::new());
    }
    if cfg.seeds < MIN_BENCH_SEEDS {
        return Err(usage(format!(
            "bench needs at least {MIN_BENCH_SEEDS} seeds per point, got {}",
            cfg.seeds
        )));
    }
    let reports = cmd_run(cfg)?;
    Ok(aggregate(cfg, &reports))
}
