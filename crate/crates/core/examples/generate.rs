//! Generates a graph with both generators, checks they agree, and writes
//! it in the text graph format.
//!
//!     cargo run --release --example generate -- 20000 out/graph.spa

use std::time::Instant;

use spa::{generate_with_stats, io, GenerationMode, ModelParams};

fn main() -> spa::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20_000, |s| s.parse().expect("n"));
    let path = args.next().unwrap_or_else(|| "graph.spa".into());

    let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0)?.with_seed(1);
    let mut graphs = Vec::new();
    for mode in [GenerationMode::Naive, GenerationMode::Fast] {
        let start = Instant::now();
        let (g, stats) = generate_with_stats(&params, n, mode)?;
        println!(
            "{mode:>5}: {} edges, {} comparisons, {:.3}s",
            g.edge_count(),
            stats.comparisons,
            start.elapsed().as_secs_f64()
        );
        graphs.push(g);
    }
    assert_eq!(graphs[0], graphs[1], "generators disagree");
    println!("identical graphs");

    io::save_graph(&path, &graphs[1], &params, GenerationMode::Fast)?;
    let back = io::load_graph(&path)?;
    assert_eq!(back.graph, graphs[1]);
    println!("wrote {path}");
    Ok(())
}
