use std::fs;
use std::path::Path;

use spa::clustering::ClusteringReport;
use spa::experiments::{self, ExperimentConfig};
use spa::io;
use spa::{generate, SplitRule};

fn small_config(out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::parse(
        "# smoke run\nn = 1000\np_grid = 0.5\nreplicates = 1\nworkers = 2\n",
    )
    .unwrap();
    cfg.out_dir = out.to_path_buf();
    cfg
}

fn snapshot(dir: &Path) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for entry in walk(dir) {
        let rel = entry.strip_prefix(dir).unwrap().display().to_string();
        files.push((rel, fs::read_to_string(&entry).unwrap()));
    }
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let path = e.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

#[test]
fn sweep_writes_valid_csvs_and_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let points = experiments::run_clustering_sweep(&small_config(a.path())).unwrap();
    assert_eq!(points.len(), 1);

    let pdir = experiments::p_dir(a.path(), 0.5);
    for (name, schema) in [
        ("cc_by_degree.csv", &io::CC_BY_DEGREE),
        ("cc_smoothed.csv", &io::CC_SMOOTHED),
        ("cc_old_new.csv", &io::CC_OLD_NEW),
    ] {
        let rows = io::validate_csv(fs::File::open(pdir.join(name)).unwrap(), schema).unwrap();
        assert!(rows > 0, "{name}");
    }
    let summary = io::validate_csv(fs::File::open(a.path().join("summary.csv")).unwrap(), &io::SWEEP_SUMMARY);
    assert_eq!(summary.unwrap(), 1);

    let mut cfg = small_config(b.path());
    cfg.workers = 1;
    experiments::run_clustering_sweep(&cfg).unwrap();
    assert_eq!(snapshot(a.path()), snapshot(b.path()));
}

#[test]
fn replicate_seeds_are_distinct_and_stable() {
    let mut seen = std::collections::HashSet::new();
    for i in 0..9 {
        for r in 0..10 {
            assert!(seen.insert(experiments::replicate_seed(1, i, r)));
        }
    }
    assert_eq!(experiments::replicate_seed(1, 2, 3), experiments::replicate_seed(1, 2, 3));
    assert_ne!(experiments::replicate_seed(1, 0, 0), experiments::replicate_seed(2, 0, 0));
}

#[test]
fn scatter_rows_cover_vertices_with_two_in_neighbours() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small_config(dir.path());
    cfg.n = 2000;
    let rows = experiments::run_scatter_export(&cfg).unwrap();

    let params = spa::ModelParams { seed: cfg.base_seed, ..cfg.params_for(0, 0).unwrap() };
    let g = generate(&params, cfg.n, cfg.mode).unwrap();
    let expected = (1..=g.n()).filter(|&v| g.in_degree(v) >= 2).count();
    assert_eq!(rows.len(), expected);
    let written = io::validate_csv(fs::File::open(dir.path().join("cc_scatter.csv")).unwrap(), &io::CC_SCATTER);
    assert_eq!(written.unwrap(), expected);
    for r in &rows {
        assert!((r.c_old + r.c_new - r.c_minus).abs() < 1e-12);
    }
}

#[test]
fn zero_p_gives_empty_scatter() {
    let prm = spa::ModelParams::new(0.0, 1.0, 5.0).unwrap();
    let g = generate(&prm, 300, spa::GenerationMode::Fast).unwrap();
    assert_eq!(g.edge_count(), 0);
    let rows = experiments::scatter_rows(&ClusteringReport::compute(&g, SplitRule::HalfDegree));
    assert!(rows.is_empty());
}

#[test]
fn config_errors_carry_line_numbers() {
    let err = ExperimentConfig::parse("n = 100\nbogus = 1\n").unwrap_err();
    assert!(matches!(err, spa::SpaError::Parse { line: 2, .. }), "{err}");
    assert!(ExperimentConfig::parse("n 100").is_err());
    let mut cfg = ExperimentConfig::default();
    cfg.set("delta", "0.7").unwrap();
    assert!(cfg.validate().is_err());
}

#[test]
fn analyze_writes_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let prm = spa::ModelParams::new(0.7, 1.0, 30.0 / 7.0).unwrap().with_seed(4);
    let g = generate(&prm, 3000, spa::GenerationMode::Fast).unwrap();
    experiments::analyze_graph(&g, &prm, dir.path(), 0.1, SplitRule::HalfDegree, 3).unwrap();
    let traj = io::validate_csv(fs::File::open(dir.path().join("trajectory.csv")).unwrap(), &io::TRAJECTORY);
    assert!(traj.unwrap() >= 3);
    for name in ["cc_by_degree.csv", "cc_smoothed.csv", "cc_old_new.csv", "cc_scatter.csv"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}
