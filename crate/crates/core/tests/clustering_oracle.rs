use spa::clustering::{self, ClusteringReport};
use spa::oracle::BruteGraph;
use spa::{generate, GenerationMode, ModelParams, SplitRule};

fn small_graphs() -> impl Iterator<Item = spa::SpaGraph> {
    (0..20u64).map(|i| {
        let p = 0.25 + 0.035 * i as f64;
        let prm = ModelParams::new(p, 1.0, 1.5 + (i % 5) as f64).unwrap().with_seed(500 + i);
        generate(&prm, 30 + 3 * i as usize, GenerationMode::Naive).unwrap()
    })
}

#[test]
fn local_coefficients_match_brute_force() {
    for g in small_graphs() {
        let brute = BruteGraph::new(&g);
        for v in 1..=g.n() {
            assert_eq!(clustering::local_cc_directed(&g, v).unwrap(), brute.cc_directed(v), "v={v}");
            assert_eq!(clustering::local_cc_undirected(&g, v).unwrap(), brute.cc_undirected(v));
        }
    }
}

#[test]
fn old_new_split_matches_replay_for_both_rules() {
    for rule in [SplitRule::HalfDegree, SplitRule::LogThreshold(0.5), SplitRule::LogThreshold(2.0)] {
        for g in small_graphs() {
            let brute = BruteGraph::new(&g);
            for v in 1..=g.n() {
                let ours = clustering::old_new_split(&g, v, rule).ok();
                let theirs = brute.old_new(v, rule);
                assert_eq!(
                    ours.map(|s| (s.t_hat, s.old_edges, s.new_edges)),
                    theirs,
                    "rule={rule} v={v}"
                );
                if let Some(s) = ours {
                    let total = clustering::in_neighbor_edges(&g, v);
                    assert_eq!(s.old_edges + s.new_edges, total);
                }
            }
        }
    }
}

#[test]
fn curves_match_brute_force_exactly() {
    for g in small_graphs() {
        let brute = BruteGraph::new(&g);
        let report = ClusteringReport::compute(&g, SplitRule::HalfDegree);
        for directed in [true, false] {
            let ours: Vec<_> = report
                .by_degree(directed)
                .iter()
                .map(|(d, a)| (d, (a.mean(), a.count)))
                .collect();
            let theirs: Vec<_> = brute.by_degree(directed).into_iter().collect();
            assert_eq!(ours, theirs);
            assert_eq!(clustering::avg_cc_by_degree(&g, directed).means(), report.by_degree(directed).means());
            for delta in [0.05, 0.2, 0.45] {
                let smooth = report.smoothed(delta, directed).unwrap();
                for d in 2..=g.n() {
                    assert_eq!(smooth.mean(d), brute.smoothed(d, delta, directed), "d={d} delta={delta}");
                }
            }
        }
    }
}

#[test]
fn smoothing_rejects_out_of_range_delta() {
    let g = small_graphs().next().unwrap();
    let report = ClusteringReport::compute(&g, SplitRule::HalfDegree);
    assert!(report.smoothed(0.0, true).is_err());
    assert!(report.smoothed(0.5, true).is_err());
}

#[test]
fn selftest_reports_all_passing() {
    assert!(spa::oracle::selftest().iter().all(|c| c.passed));
}
