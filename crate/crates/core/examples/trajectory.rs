//! Degree growth of the highest-degree vertices against `t^(pA1)`.
//!
//!     cargo run --release --example trajectory

use spa::{generate, theory, GenerationMode, ModelParams};

fn main() -> spa::Result<()> {
    let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0)?.with_seed(5);
    let graph = generate(&params, 100_000, GenerationMode::Fast)?;

    let mut order: Vec<_> = (1..=graph.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.in_degree(v)), v));
    println!("expected exponent pA1 = {:.2}", params.growth_exponent());
    for &v in order.iter().take(5) {
        let grid = theory::default_trajectory_grid(&graph, v, params.growth_exponent());
        let series = theory::degree_trajectory(&graph, v, &grid)?;
        let fit = theory::trajectory_exponent(&series)?;
        println!(
            "v={v:<6} deg {:<5} slope {:.3} (r2 {:.3}, from t={})",
            graph.in_degree(v),
            fit.slope,
            fit.r_squared,
            grid[0]
        );
    }
    Ok(())
}
