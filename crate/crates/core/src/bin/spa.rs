use std::fs::{self, File};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spa::experiments::{self, BenchConfig, ExperimentConfig};
use spa::{fast, io, oracle, GenerationMode, ModelParams, NormKind, SpaError, SplitRule};

#[derive(Parser)]
#[command(name = "spa", version, about = "Spatial preferential attachment graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 0.7)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    a1: f64,
    /// Defaults to 10 (1 - p A1) / p.
    #[arg(long)]
    a2: Option<f64>,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value = "linf")]
    norm: NormKind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl ModelArgs {
    fn params(&self) -> spa::Result<ModelParams> {
        let params = ModelParams {
            p: self.p,
            a1: self.a1,
            a2: self.a2.unwrap_or(10.0 * (1.0 - self.p * self.a1) / self.p),
            dim: self.m,
            norm: self.norm,
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }
}

/// Sweep settings; each flag overrides the matching config-file key.
#[derive(clap::Args)]
struct SweepArgs {
    /// Flat key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated list of p values.
    #[arg(long)]
    p_grid: Option<String>,
    #[arg(long)]
    a1: Option<String>,
    /// A number, `auto`, or `target:<mean out-degree>`.
    #[arg(long)]
    a2: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    /// `half` or `log:<omega>`.
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    norm: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

impl SweepArgs {
    fn config(&self) -> spa::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::parse(&fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("n", &self.n),
            ("p_grid", &self.p_grid),
            ("a1", &self.a1),
            ("a2", &self.a2),
            ("replicates", &self.replicates),
            ("base_seed", &self.seed),
            ("delta", &self.delta),
            ("split", &self.split),
            ("norm", &self.norm),
            ("mode", &self.mode),
            ("workers", &self.workers),
            ("out", &self.out),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it in the text graph format.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value = "fast")]
        mode: GenerationMode,
        #[arg(short, long)]
        out: PathBuf,
        /// Write per-phase index statistics (fast mode) to this CSV.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Compute clustering curves, scatter and trajectories for a graph file.
    Analyze {
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value = "half")]
        split: SplitRule,
        /// Number of highest in-degree vertices to trace.
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Run the clustering sweep over p.
    Sweep(SweepArgs),
    /// Export per-vertex clustering of one graph (first p of the grid).
    Scatter(SweepArgs),
    /// Time the generators over a grid of orders.
    Bench {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated, ascending.
        #[arg(long, value_delimiter = ',', default_value = "10000,30000,100000")]
        n_grid: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "naive,fast")]
        modes: Vec<GenerationMode>,
        #[arg(long, default_value_t = 50_000)]
        naive_cap: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check the generators and clustering code against brute force.
    Selftest,
}

fn run(cli: Cli) -> spa::Result<bool> {
    match cli.command {
        Command::Generate {
            model,
            n,
            mode,
            out,
            profile,
        } => {
            let params = model.params()?;
            let (graph, stats) = spa::generate_with_stats(&params, n, mode)?;
            io::save_graph(&out, &graph, &params, mode)?;
            if let Some(path) = profile {
                fast::write_phase_csv(&stats.phases, File::create(path)?)?;
            }
            eprintln!(
                "{} vertices, {} edges, {} comparisons",
                graph.n(),
                graph.edge_count(),
                stats.comparisons
            );
        }
        Command::Analyze {
            graph,
            out,
            delta,
            split,
            top,
        } => {
            let file = io::load_graph(&graph)?;
            let report =
                experiments::analyze_graph(&file.graph, &file.header.params, &out, delta, split, top)?;
            eprintln!("analysed {} vertices into {}", report.vertices.len(), out.display());
        }
        Command::Sweep(args) => {
            let cfg = args.config()?;
            let points = experiments::run_clustering_sweep(&cfg)?;
            eprintln!("{} p values written to {}", points.len(), cfg.out_dir.display());
        }
        Command::Scatter(args) => {
            let cfg = args.config()?;
            let rows = experiments::run_scatter_export(&cfg)?;
            eprintln!("{} scatter rows written to {}", rows.len(), cfg.out_dir.display());
        }
        Command::Bench {
            model,
            n_grid,
            modes,
            naive_cap,
            out,
        } => {
            let rows = experiments::run_runtime_benchmark(&BenchConfig {
                n_grid,
                params: model.params()?,
                modes,
                naive_cap,
                out_dir: Some(out),
            })?;
            for r in rows {
                println!("{:>8} {:>6} {:>10.3}s {:>14}", r.n, r.mode, r.seconds, r.comparisons);
            }
        }
        Command::Selftest => {
            let outcomes = oracle::selftest();
            let mut ok = true;
            for c in &outcomes {
                println!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                SpaError::Io(_) | SpaError::Csv(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
