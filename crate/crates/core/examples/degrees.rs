//! Out-degree mean and the in-degree tail exponent across `p`.
//!
//!     cargo run --release --example degrees

use spa::{generate, theory, GenerationMode, ModelParams};

fn main() -> spa::Result<()> {
    println!("{:>4} {:>10} {:>8} {:>8} {:>8}", "p", "mean out", "target", "Hill", "1+1/p");
    for p in [0.3, 0.5, 0.7, 0.9] {
        let params = ModelParams::new(p, 1.0, 10.0 * (1.0 - p) / p)?.with_seed(11);
        let graph = generate(&params, 100_000, GenerationMode::Fast)?;
        let stats = theory::out_degree_stats(&graph)?;
        let hill = theory::powerlaw_exponent(&graph.in_degrees(), 10)?;
        println!(
            "{p:>4} {:>10.3} {:>8.3} {hill:>8.3} {:>8.3}",
            stats.mean,
            params.expected_out_degree(),
            1.0 + 1.0 / p
        );
    }
    Ok(())
}
