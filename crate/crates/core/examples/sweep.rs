//! A small clustering sweep over `p`, written as CSV.
//!
//!     cargo run --release --example sweep -- out/sweep

use spa::experiments::{self, ExperimentConfig};

fn main() -> spa::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sweep-out".into());
    let cfg = ExperimentConfig::parse(&format!(
        "n = 20000\np_grid = 0.3, 0.5, 0.7\nreplicates = 3\nworkers = 4\nout = {out}\n"
    ))?;
    for point in experiments::run_clustering_sweep(&cfg)? {
        let edges: usize = point.summaries.iter().map(|s| s.edges).sum();
        println!(
            "p={:<4} {} replicates, {} edges, C-(10) = {:.4}",
            point.p,
            point.summaries.len(),
            edges,
            point.curves.directed.mean(10).unwrap_or(f64::NAN)
        );
    }
    println!("curves in {out}/p*/");
    Ok(())
}
