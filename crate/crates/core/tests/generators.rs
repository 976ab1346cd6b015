use proptest::prelude::*;
use spa::geometry::NormKind;
use spa::{generate, generate_with_stats, GenerationMode, ModelParams, SpaError};

fn params(p: f64, a1: f64, seed: u64) -> ModelParams {
    ModelParams::new(p, a1, 10.0 * (1.0 - p * a1) / p).unwrap().with_seed(seed)
}

#[test]
fn fast_equals_naive_on_mid_sized_graphs() {
    for (p, a1, seed) in [(0.3, 0.5, 11), (0.5, 1.0, 12), (0.9, 1.0, 13)] {
        let prm = params(p, a1, seed);
        let naive = generate(&prm, 4000, GenerationMode::Naive).unwrap();
        let fast = generate(&prm, 4000, GenerationMode::Fast).unwrap();
        assert_eq!(naive, fast, "p={p} A1={a1}");
    }
}

#[test]
fn fast_mode_does_fewer_comparisons() {
    let prm = params(0.5, 1.0, 3);
    let (_, naive) = generate_with_stats(&prm, 20_000, GenerationMode::Naive).unwrap();
    let (_, fast) = generate_with_stats(&prm, 20_000, GenerationMode::Fast).unwrap();
    assert_eq!(naive.comparisons, 20_000 * 19_999 / 2);
    assert!(fast.comparisons * 5 < naive.comparisons, "{}", fast.comparisons);
    assert!(!fast.phases.is_empty());
}

#[test]
fn fast_mode_rejects_other_dimensions() {
    let prm = params(0.5, 1.0, 1).with_dim(3);
    assert!(matches!(generate(&prm, 100, GenerationMode::Fast), Err(SpaError::Unsupported(_))));
    assert_eq!(generate(&prm, 100, GenerationMode::Naive).unwrap().dim(), 3);
}

#[test]
fn l2_norm_generators_agree() {
    let prm = params(0.6, 1.0, 5).with_norm(NormKind::L2);
    assert_eq!(
        generate(&prm, 3000, GenerationMode::Naive).unwrap(),
        generate(&prm, 3000, GenerationMode::Fast).unwrap()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn equivalence_on_random_small_configs(
        p in 0.05f64..1.0,
        a1 in 0.1f64..1.0,
        a2 in 0.5f64..40.0,
        n in 1usize..600,
        seed in any::<u64>(),
    ) {
        prop_assume!(p * a1 < 1.0);
        let prm = ModelParams::new(p, a1, a2).unwrap().with_seed(seed);
        let naive = generate(&prm, n, GenerationMode::Naive).unwrap();
        let fast = generate(&prm, n, GenerationMode::Fast).unwrap();
        prop_assert_eq!(&naive, &fast);
        for e in naive.edges() {
            prop_assert!(e.src > e.dst);
        }
    }
}
