//! Wall-clock and comparison counts of the two generators.
//!
//!     cargo run --release --example runtime

use spa::experiments::{self, BenchConfig};
use spa::{fast, GenerationMode, ModelParams};

fn main() -> spa::Result<()> {
    let params = ModelParams::new(0.5, 1.0, 10.0)?.with_seed(1);
    let rows = experiments::run_runtime_benchmark(&BenchConfig {
        n_grid: vec![10_000, 30_000, 100_000],
        params,
        modes: vec![GenerationMode::Naive, GenerationMode::Fast],
        naive_cap: 30_000,
        out_dir: None,
    })?;
    for r in &rows {
        println!("{:>7} {:>5} {:>8.3}s {:>12}", r.n, r.mode, r.seconds, r.comparisons);
    }
    println!("fast slope {:.2}", experiments::runtime_slope(&rows, GenerationMode::Fast)?);

    let n = 100_000;
    let t = fast::optimal_t(n, &params)?;
    let threshold = fast::heavy_threshold(n, t, &params)?;
    let grid = fast::grid_size(n, threshold, &params);
    println!(
        "n={n}: optimal T {t:.0}, heavy threshold {threshold:.1}, grid {}x{}",
        grid.side, grid.side
    );
    Ok(())
}
