//! Average clustering by degree, raw and smoothed, with a `c/d` fit.
//!
//!     cargo run --release --example clustering_curves

use spa::clustering::ClusteringReport;
use spa::{generate, theory, GenerationMode, ModelParams, SplitRule};

fn main() -> spa::Result<()> {
    let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0)?.with_seed(7);
    let graph = generate(&params, 100_000, GenerationMode::Fast)?;
    let report = ClusteringReport::compute(&graph, SplitRule::HalfDegree);

    let raw = report.by_degree(true);
    let smooth = report.smoothed(0.1, true)?;
    println!("{:>6} {:>10} {:>6} {:>10}", "d", "C-(d)", "count", "smoothed");
    for d in [2, 5, 10, 20, 50, 100, 200, 500] {
        let (c, count) = raw.get(d).map_or((f64::NAN, 0), |a| (a.mean(), a.count));
        let s = smooth.mean(d).unwrap_or(f64::NAN);
        println!("{d:>6} {c:>10.4} {count:>6} {s:>10.4}");
    }

    let d_max = raw.iter().map(|(d, _)| d).max().unwrap_or(0);
    let fit = theory::fit_inverse_law(&smooth.means(), 50, d_max / 2)?;
    println!(
        "log-log slope over [50, {}]: {:.3} (r2 {:.3}), C(d) ~ {:.2}/d",
        d_max / 2,
        fit.loglog.slope,
        fit.loglog.r_squared,
        fit.c
    );
    Ok(())
}
