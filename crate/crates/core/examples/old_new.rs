//! Splits each vertex's clustering into edges among old and new
//! in-neighbours, under both threshold rules.
//!
//!     cargo run --release --example old_new

use spa::clustering::ClusteringReport;
use spa::{generate, theory, GenerationMode, ModelParams, SplitRule};

fn main() -> spa::Result<()> {
    let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0)?.with_seed(3);
    let graph = generate(&params, 100_000, GenerationMode::Fast)?;

    for rule in [SplitRule::HalfDegree, SplitRule::LogThreshold(1.0)] {
        let report = ClusteringReport::compute(&graph, rule);
        let (old, new) = report.old_new_by_degree();
        println!("rule {rule}");
        for d in [20, 50, 100, 200] {
            println!(
                "  d={d:<4} C_old {:.4}  C_new {:.4}",
                old.mean(d).unwrap_or(f64::NAN),
                new.mean(d).unwrap_or(f64::NAN)
            );
        }
        let hi = old.iter().map(|(d, _)| d).max().unwrap_or(0) / 2;
        for (name, curve) in [("old", &old), ("new", &new)] {
            match theory::fit_inverse_law(&curve.means(), 20, hi) {
                Ok(fit) => println!("  {name}: slope {:.3}, r2 {:.3}", fit.loglog.slope, fit.loglog.r_squared),
                Err(e) => println!("  {name}: {e}"),
            }
        }
    }
    Ok(())
}
