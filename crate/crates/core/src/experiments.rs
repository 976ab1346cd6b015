//! Experiment harness: clustering sweeps over `p`, per-vertex scatter
//! export, graph analysis and the generator runtime benchmark. All outputs
//! are CSV files following the schemas in [`crate::io`].

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::clustering::{ClusteringReport, DegreeCurve, SplitRule};
use crate::error::{Result, SpaError};
use crate::geometry::NormKind;
use crate::graph::SpaGraph;
use crate::io::{self, DegreeRow, OldNewRow, RuntimeRow, ScatterRow, SummaryRow, TrajectoryRow};
use crate::model::{generate, generate_with_stats, GenerationMode, ModelParams};
use crate::theory;

/// How `A2` is chosen for each `p` of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum A2Rule {
    Fixed(f64),
    /// `A2 = target (1 - p A1) / p`, which makes the limiting mean
    /// out-degree equal to `target`. With `A1 = 1` and `target = 10` this is
    /// `10 (1 - p) / p`.
    TargetOutDegree(f64),
}

impl A2Rule {
    pub fn a2(&self, p: f64, a1: f64) -> f64 {
        match *self {
            A2Rule::Fixed(a2) => a2,
            A2Rule::TargetOutDegree(target) => target * (1.0 - p * a1) / p,
        }
    }
}

impl FromStr for A2Rule {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || SpaError::InvalidParameter(format!("bad A2 rule `{s}`"));
        if s == "auto" {
            return Ok(A2Rule::TargetOutDegree(10.0));
        }
        if let Some(t) = s.strip_prefix("target:") {
            return t.parse().map(A2Rule::TargetOutDegree).map_err(|_| bad());
        }
        s.parse().map(A2Rule::Fixed).map_err(|_| bad())
    }
}

/// Settings of a sweep or scatter export.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub p_grid: Vec<f64>,
    pub a1: f64,
    pub a2: A2Rule,
    pub n: usize,
    pub replicates: usize,
    pub base_seed: u64,
    pub delta: f64,
    pub split: SplitRule,
    pub norm: NormKind,
    pub mode: GenerationMode,
    pub workers: usize,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
            a1: 1.0,
            a2: A2Rule::TargetOutDegree(10.0),
            n: 100_000,
            replicates: 10,
            base_seed: 1,
            delta: 0.1,
            split: SplitRule::HalfDegree,
            norm: NormKind::Linf,
            mode: GenerationMode::Fast,
            workers: 1,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || SpaError::InvalidParameter(format!("bad value for `{key}`: `{value}`"));
        let value = value.trim();
        match key.trim() {
            "p_grid" | "p" => {
                self.p_grid = value
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                    .collect::<Result<_>>()?
            }
            "a1" => self.a1 = value.parse().map_err(|_| bad())?,
            "a2" => self.a2 = value.parse()?,
            "n" => self.n = value.parse().map_err(|_| bad())?,
            "replicates" => self.replicates = value.parse().map_err(|_| bad())?,
            "base_seed" | "seed" => self.base_seed = value.parse().map_err(|_| bad())?,
            "delta" => self.delta = value.parse().map_err(|_| bad())?,
            "split" => self.split = value.parse()?,
            "norm" => self.norm = value.parse()?,
            "mode" => self.mode = value.parse()?,
            "workers" => self.workers = value.parse().map_err(|_| bad())?,
            "out" | "out_dir" => self.out_dir = PathBuf::from(value),
            other => {
                return Err(SpaError::InvalidParameter(format!("unknown config key `{other}`")))
            }
        }
        Ok(())
    }

    /// Parses a flat `key=value` file; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| SpaError::Parse {
                line: i + 1,
                message: format!("expected key=value, found `{line}`"),
            })?;
            cfg.set(k, v).map_err(|e| SpaError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    pub fn params_for(&self, p_index: usize, replicate: usize) -> Result<ModelParams> {
        let p = self.p_grid[p_index];
        let params = ModelParams {
            p,
            a1: self.a1,
            a2: self.a2.a2(p, self.a1),
            dim: 2,
            norm: self.norm,
            seed: replicate_seed(self.base_seed, p_index, replicate),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() {
            return Err(SpaError::InvalidParameter("empty p grid".into()));
        }
        if self.replicates == 0 {
            return Err(SpaError::InvalidParameter("replicates must be >= 1".into()));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(SpaError::InvalidParameter(format!(
                "delta = {} outside (0, 1/2)",
                self.delta
            )));
        }
        for i in 0..self.p_grid.len() {
            self.params_for(i, 0)?;
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one sweep cell: `base ^ splitmix64((p_index << 32) | replicate)`.
/// Distinct cells get distinct seeds because splitmix64 is a bijection.
pub fn replicate_seed(base_seed: u64, p_index: usize, replicate: usize) -> u64 {
    base_seed ^ splitmix64(((p_index as u64) << 32) | replicate as u64)
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".spa-write-probe");
    fs::write(&probe, b"")?;
    fs::remove_file(probe)?;
    Ok(())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SpaError::InvalidParameter(format!("thread pool: {e}")))
}

/// Curves of one graph, pooled over replicates by [`DegreeCurve::merge`].
#[derive(Debug, Clone, Default)]
pub struct CellCurves {
    pub directed: DegreeCurve,
    pub undirected: DegreeCurve,
    pub smoothed_directed: DegreeCurve,
    pub smoothed_undirected: DegreeCurve,
    pub old: DegreeCurve,
    pub new: DegreeCurve,
}

impl CellCurves {
    pub fn from_report(report: &ClusteringReport, delta: f64) -> Result<Self> {
        let (old, new) = report.old_new_by_degree();
        Ok(CellCurves {
            directed: report.by_degree(true),
            undirected: report.by_degree(false),
            smoothed_directed: report.smoothed(delta, true)?,
            smoothed_undirected: report.smoothed(delta, false)?,
            old,
            new,
        })
    }

    pub fn merge(&mut self, other: &CellCurves) {
        self.directed.merge(&other.directed);
        self.undirected.merge(&other.undirected);
        self.smoothed_directed.merge(&other.smoothed_directed);
        self.smoothed_undirected.merge(&other.smoothed_undirected);
        self.old.merge(&other.old);
        self.new.merge(&other.new);
    }

    fn degree_rows(directed: &DegreeCurve, undirected: &DegreeCurve) -> Vec<DegreeRow> {
        let rows = |curve: &DegreeCurve, flag: u8| {
            curve
                .iter()
                .map(move |(d, a)| DegreeRow {
                    d,
                    c: a.mean(),
                    count: a.count,
                    directed_flag: flag,
                })
                .collect::<Vec<_>>()
        };
        let mut out = rows(directed, 1);
        out.extend(rows(undirected, 0));
        out
    }

    fn old_new_rows(&self) -> Vec<OldNewRow> {
        self.old
            .iter()
            .map(|(d, a)| OldNewRow {
                d,
                c_old: a.mean(),
                c_new: self.new.mean(d).unwrap_or(0.0),
                count: a.count,
            })
            .collect()
    }

    /// Writes `cc_by_degree.csv`, `cc_smoothed.csv` and `cc_old_new.csv`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        io::emit_csv(dir, &io::CC_BY_DEGREE, &Self::degree_rows(&self.directed, &self.undirected))?;
        io::emit_csv(
            dir,
            &io::CC_SMOOTHED,
            &Self::degree_rows(&self.smoothed_directed, &self.smoothed_undirected),
        )?;
        io::emit_csv(dir, &io::CC_OLD_NEW, &self.old_new_rows())
    }
}

/// Pooled results for one `p`.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub p: f64,
    pub curves: CellCurves,
    pub summaries: Vec<SummaryRow>,
}

/// Output directory for one `p` value.
pub fn p_dir(out: &Path, p: f64) -> PathBuf {
    out.join(format!("p{p}"))
}

/// Generates `replicates` graphs per `p`, pools their clustering curves
/// and writes `summary.csv` plus one directory of curves per `p`.
pub fn run_clustering_sweep(config: &ExperimentConfig) -> Result<Vec<SweepPoint>> {
    config.validate()?;
    prepare_dir(&config.out_dir)?;

    let cells: Vec<(usize, usize)> = (0..config.p_grid.len())
        .flat_map(|i| (0..config.replicates).map(move |r| (i, r)))
        .collect();
    let results: Vec<Result<(CellCurves, SummaryRow)>> = pool(config.workers)?.install(|| {
        cells
            .par_iter()
            .map(|&(i, r)| {
                let params = config.params_for(i, r)?;
                let graph = generate(&params, config.n, config.mode)?;
                let report = ClusteringReport::compute(&graph, config.split);
                let curves = CellCurves::from_report(&report, config.delta)?;
                Ok((curves, summary_row(&graph, &params, r)))
            })
            .collect()
    });

    let mut points: Vec<SweepPoint> = config
        .p_grid
        .iter()
        .map(|&p| SweepPoint {
            p,
            curves: CellCurves::default(),
            summaries: Vec::new(),
        })
        .collect();
    for (&(i, _), res) in cells.iter().zip(results) {
        let (curves, row) = res?;
        points[i].curves.merge(&curves);
        points[i].summaries.push(row);
    }

    let summary: Vec<_> = points.iter().flat_map(|pt| pt.summaries.clone()).collect();
    io::emit_csv(&config.out_dir, &io::SWEEP_SUMMARY, &summary)?;
    for pt in &points {
        let dir = p_dir(&config.out_dir, pt.p);
        fs::create_dir_all(&dir)?;
        pt.curves.write(&dir)?;
    }
    Ok(points)
}

fn summary_row(graph: &SpaGraph, params: &ModelParams, replicate: usize) -> SummaryRow {
    let (mean, max) = theory::out_degree_stats(graph)
        .map(|s| (s.mean, s.max))
        .unwrap_or((0.0, 0));
    SummaryRow {
        p: params.p,
        replicate,
        seed: params.seed,
        n: graph.n(),
        edges: graph.edge_count(),
        mean_out_degree: mean,
        max_out_degree: max,
    }
}

/// Per-vertex `(deg⁻, c⁻, c_old, c_new)` rows for every vertex with
/// in-degree at least 2.
pub fn scatter_rows(report: &ClusteringReport) -> Vec<ScatterRow> {
    report
        .vertices
        .iter()
        .filter_map(|vc| {
            Some(ScatterRow {
                v: vc.v,
                in_deg: vc.in_degree,
                c_minus: vc.c_minus()?,
                c_old: vc.c_old()?,
                c_new: vc.c_new()?,
            })
        })
        .collect()
}

/// Generates one graph with the first `p` of the grid and `base_seed`, and
/// writes `cc_scatter.csv`.
pub fn run_scatter_export(config: &ExperimentConfig) -> Result<Vec<ScatterRow>> {
    config.validate()?;
    prepare_dir(&config.out_dir)?;
    let params = ModelParams {
        seed: config.base_seed,
        ..config.params_for(0, 0)?
    };
    let graph = generate(&params, config.n, config.mode)?;
    let rows = scatter_rows(&ClusteringReport::compute(&graph, config.split));
    io::emit_csv(&config.out_dir, &io::CC_SCATTER, &rows)?;
    Ok(rows)
}

/// Writes the full set of report CSVs for one graph: clustering curves,
/// scatter, and degree trajectories of the `top` highest in-degree vertices.
pub fn analyze_graph(
    graph: &SpaGraph,
    params: &ModelParams,
    out_dir: &Path,
    delta: f64,
    split: SplitRule,
    top: usize,
) -> Result<ClusteringReport> {
    prepare_dir(out_dir)?;
    let report = ClusteringReport::compute(graph, split);
    CellCurves::from_report(&report, delta)?.write(out_dir)?;
    io::emit_csv(out_dir, &io::CC_SCATTER, &scatter_rows(&report))?;

    let mut by_degree: Vec<_> = (1..=graph.n()).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(graph.in_degree(v)), v));
    let mut rows = Vec::new();
    for &v in by_degree.iter().take(top) {
        let grid = theory::default_trajectory_grid(graph, v, params.growth_exponent());
        let series = theory::degree_trajectory(graph, v, &grid)?;
        rows.extend(
            series
                .checkpoints
                .iter()
                .map(|&(t, deg)| TrajectoryRow { v, t, deg }),
        );
    }
    io::emit_csv(out_dir, &io::TRAJECTORY, &rows)?;
    Ok(report)
}

/// Settings for [`run_runtime_benchmark`].
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub n_grid: Vec<usize>,
    pub params: ModelParams,
    pub modes: Vec<GenerationMode>,
    /// Naive runs are skipped above this order.
    pub naive_cap: usize,
    pub out_dir: Option<PathBuf>,
}

/// Times each generator on each `n` and optionally writes `runtime.csv`.
pub fn run_runtime_benchmark(config: &BenchConfig) -> Result<Vec<RuntimeRow>> {
    config.params.validate()?;
    if config.n_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(SpaError::InvalidParameter("n grid must be sorted".into()));
    }
    if let Some(dir) = &config.out_dir {
        prepare_dir(dir)?;
    }
    let mut rows = Vec::new();
    for &n in &config.n_grid {
        for &mode in &config.modes {
            if mode == GenerationMode::Naive && n > config.naive_cap {
                continue;
            }
            let start = Instant::now();
            let (_, stats) = generate_with_stats(&config.params, n, mode)?;
            rows.push(RuntimeRow {
                n,
                mode: mode.to_string(),
                seconds: start.elapsed().as_secs_f64(),
                comparisons: stats.comparisons,
            });
        }
    }
    if let Some(dir) = &config.out_dir {
        io::emit_csv(dir, &io::RUNTIME, &rows)?;
    }
    Ok(rows)
}

/// Log-log slope of seconds against `n` for one mode.
pub fn runtime_slope(rows: &[RuntimeRow], mode: GenerationMode) -> Result<f64> {
    let pts: Vec<_> = rows
        .iter()
        .filter(|r| r.mode == mode.to_string())
        .map(|r| ((r.n as f64).ln(), r.seconds.max(1e-9).ln()))
        .collect();
    Ok(theory::ols(&pts)?.slope)
}
