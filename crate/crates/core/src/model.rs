//! Model parameters, the random stream contract and the reference
//! quadratic generator.
//!
//! Each step draws `m` uniforms for the newcomer's position from the
//! position substream. Then every existing vertex whose sphere of
//! influence contains the newcomer receives exactly one uniform from the
//! coin substream, in increasing birth order, and the edge is created iff
//! the coin is below `p`. Any generator that respects this contract
//! produces the same graph for the same seed.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SpaError};
use crate::fast::{self, PhaseStats};
use crate::geometry::{self, NormKind, Reach};
use crate::graph::{Edge, SpaGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Link probability.
    pub p: f64,
    /// Weight of the in-degree in the sphere volume.
    pub a1: f64,
    /// Base sphere volume numerator.
    pub a2: f64,
    pub dim: usize,
    pub norm: NormKind,
    pub seed: u64,
}

impl ModelParams {
    /// Parameters in the plane under `Linf` with seed 0.
    pub fn new(p: f64, a1: f64, a2: f64) -> Result<Self> {
        let params = ModelParams {
            p,
            a1,
            a2,
            dim: 2,
            norm: NormKind::Linf,
            seed: 0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = norm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SpaError::InvalidParameter(msg));
        if !(0.0..=1.0).contains(&self.p) {
            return bad(format!("p = {} outside [0,1]", self.p));
        }
        if !(self.a1.is_finite() && self.a1 > 0.0) {
            return bad(format!("A1 = {} must be positive", self.a1));
        }
        if self.p > 0.0 && self.p * self.a1 >= 1.0 {
            return bad(format!("A1 = {} must be below 1/p = {}", self.a1, 1.0 / self.p));
        }
        if !(self.a2.is_finite() && self.a2 > 0.0) {
            return bad(format!("A2 = {} must be positive", self.a2));
        }
        geometry::check_norm_dim(self.dim, self.norm)
    }

    /// `p * A1`, the exponent governing degree growth.
    pub fn growth_exponent(&self) -> f64 {
        self.p * self.a1
    }

    /// Limit of the mean out-degree, `p A2 / (1 - p A1)`.
    pub fn expected_out_degree(&self) -> f64 {
        self.p * self.a2 / (1.0 - self.p * self.a1)
    }

    /// Volume of the sphere of influence of a vertex with in-degree
    /// `in_deg` in `G_t`: `min{(A1 in_deg + A2)/t, 1}`.
    pub fn sphere_volume(&self, in_deg: usize, t: usize) -> Result<f64> {
        if t == 0 {
            return Err(SpaError::InvalidParameter(
                "sphere of influence is undefined at t = 0".into(),
            ));
        }
        Ok(self.volume_unchecked(in_deg, t))
    }

    #[inline]
    pub(crate) fn volume_unchecked(&self, in_deg: usize, t: usize) -> f64 {
        ((self.a1 * in_deg as f64 + self.a2) / t as f64).min(1.0)
    }

    /// Reach of the sphere of a vertex with in-degree `in_deg` in `G_t`.
    /// Both generators go through this function so their containment
    /// decisions agree bit for bit.
    #[inline]
    pub(crate) fn reach(&self, in_deg: usize, t: usize) -> Reach {
        geometry::reach_unchecked(self.volume_unchecked(in_deg, t), self.dim, self.norm)
    }
}

/// Deterministic random source split into a position substream and a coin
/// substream.
#[derive(Debug, Clone)]
pub struct RngStream {
    positions: ChaCha8Rng,
    coins: ChaCha8Rng,
    position_draws: u64,
    coin_draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        let positions = ChaCha8Rng::seed_from_u64(seed);
        let mut coins = ChaCha8Rng::seed_from_u64(seed);
        coins.set_stream(1);
        RngStream {
            positions,
            coins,
            position_draws: 0,
            coin_draws: 0,
        }
    }

    pub(crate) fn fill_position(&mut self, out: &mut [f64]) {
        for c in out.iter_mut() {
            *c = self.positions.gen::<f64>();
        }
        self.position_draws += out.len() as u64;
    }

    #[inline]
    pub(crate) fn coin(&mut self) -> f64 {
        self.coin_draws += 1;
        self.coins.gen::<f64>()
    }

    pub fn position_draws(&self) -> u64 {
        self.position_draws
    }

    pub fn coin_draws(&self) -> u64 {
        self.coin_draws
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GenerationMode {
    Naive,
    #[default]
    Fast,
}

impl fmt::Display for GenerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerationMode::Naive => f.write_str("naive"),
            GenerationMode::Fast => f.write_str("fast"),
        }
    }
}

impl FromStr for GenerationMode {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(GenerationMode::Naive),
            "fast" => Ok(GenerationMode::Fast),
            other => Err(SpaError::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

/// Work counters collected during generation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationStats {
    /// Number of containment tests performed.
    pub comparisons: u64,
    /// One entry per index rebuild (fast mode only).
    pub phases: Vec<PhaseStats>,
}

/// Runs the Bernoulli trials for the sorted list of containing vertices
/// and appends the resulting edges for the newest vertex `t`.
pub(crate) fn flip_and_link(
    graph: &mut SpaGraph,
    t: VertexId,
    containing: &[VertexId],
    p: f64,
    rng: &mut RngStream,
    mut on_edge: impl FnMut(&SpaGraph, VertexId),
) {
    for &u in containing {
        if rng.coin() < p {
            graph.push_edge(Edge { src: t, dst: u });
            on_edge(graph, u);
        }
    }
}

/// Adds vertex `t = n + 1` by testing every existing vertex. Returns the
/// number of containment tests.
pub fn step_naive(graph: &mut SpaGraph, params: &ModelParams, rng: &mut RngStream) -> u64 {
    let mut pos = vec![0.0; params.dim];
    let mut containing = Vec::new();
    step_naive_with(graph, params, rng, &mut pos, &mut containing)
}

pub(crate) fn step_naive_with(
    graph: &mut SpaGraph,
    params: &ModelParams,
    rng: &mut RngStream,
    pos: &mut [f64],
    containing: &mut Vec<VertexId>,
) -> u64 {
    let t_prev = graph.n();
    rng.fill_position(pos);
    containing.clear();
    for u in 1..=t_prev {
        let reach = params.reach(graph.in_degree(u), t_prev);
        if geometry::within(graph.position(u), pos, reach, params.norm) {
            containing.push(u);
        }
    }
    let t = graph.push_vertex(pos);
    flip_and_link(graph, t, containing, params.p, rng, |_, _| {});
    t_prev as u64
}

/// Generates `G_n` with the chosen generator.
pub fn generate(params: &ModelParams, n: usize, mode: GenerationMode) -> Result<SpaGraph> {
    generate_with_stats(params, n, mode).map(|(g, _)| g)
}

pub fn generate_with_stats(
    params: &ModelParams,
    n: usize,
    mode: GenerationMode,
) -> Result<(SpaGraph, GenerationStats)> {
    params.validate()?;
    match mode {
        GenerationMode::Naive => {
            let mut graph = SpaGraph::new(params.dim);
            let mut rng = RngStream::new(params.seed);
            let mut pos = vec![0.0; params.dim];
            let mut containing = Vec::new();
            let mut stats = GenerationStats::default();
            for _ in 0..n {
                stats.comparisons +=
                    step_naive_with(&mut graph, params, &mut rng, &mut pos, &mut containing);
            }
            Ok((graph, stats))
        }
        GenerationMode::Fast => fast::generate_fast(params, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_volume_examples() {
        let p = ModelParams::new(0.5, 1.0, 2.0).unwrap();
        assert_eq!(p.sphere_volume(3, 10).unwrap(), 0.5);
        assert_eq!(p.sphere_volume(0, 1).unwrap(), 1.0);
        let q = ModelParams::new(0.5, 0.5, 1.0).unwrap();
        assert_eq!(q.sphere_volume(2, 2).unwrap(), 1.0);
        assert!(p.sphere_volume(0, 0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.5, 0.5, 1.0).is_err());
        assert!(ModelParams::new(0.5, 2.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 1.0, 0.0).is_err());
        assert!(ModelParams::new(0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(0.0, 5.0, 1.0).is_ok());
        let p = ModelParams::new(0.5, 1.0, 1.0).unwrap().with_norm(NormKind::L2).with_dim(3);
        assert!(matches!(p.validate(), Err(SpaError::Unsupported(_))));
    }

    #[test]
    fn first_step_consumes_only_position_draws() {
        let params = ModelParams::new(0.5, 1.0, 1.0).unwrap().with_dim(3);
        let mut g = SpaGraph::new(3);
        let mut rng = RngStream::new(7);
        let cmp = step_naive(&mut g, &params, &mut rng);
        assert_eq!(cmp, 0);
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(rng.position_draws(), 3);
        assert_eq!(rng.coin_draws(), 0);
    }

    #[test]
    fn p_zero_draws_coins_but_adds_no_edges() {
        let params = ModelParams::new(0.0, 1.0, 5.0).unwrap().with_seed(3);
        let mut g = SpaGraph::new(2);
        let mut rng = RngStream::new(params.seed);
        for _ in 0..50 {
            step_naive(&mut g, &params, &mut rng);
        }
        assert_eq!(g.edge_count(), 0);
        // A2 = 5 makes every sphere cover the torus for t <= 5.
        assert!(rng.coin_draws() >= 10);
    }

    #[test]
    fn complete_dag_when_every_sphere_covers() {
        let n = 40;
        let params = ModelParams::new(1.0, 0.5, n as f64).unwrap().with_seed(11);
        for mode in [GenerationMode::Naive, GenerationMode::Fast] {
            let g = generate(&params, n, mode).unwrap();
            assert_eq!(g.edge_count(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn deterministic_and_structurally_valid() {
        let params = ModelParams::new(0.7, 1.0, 30.0 / 7.0).unwrap().with_seed(5);
        let a = generate(&params, 500, GenerationMode::Naive).unwrap();
        let b = generate(&params, 500, GenerationMode::Naive).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        for e in a.edges() {
            assert!(e.src > e.dst);
            assert_eq!(e.time(), e.src);
        }
        assert!(generate(&params, 0, GenerationMode::Naive).unwrap().is_empty());
    }

    #[test]
    fn positions_do_not_depend_on_p() {
        let base = ModelParams::new(0.0, 1.0, 3.0).unwrap().with_seed(9);
        let other = ModelParams { p: 0.8, ..base };
        let a = generate(&base, 300, GenerationMode::Naive).unwrap();
        let b = generate(&other, 300, GenerationMode::Naive).unwrap();
        assert_eq!(a.positions(), b.positions());
    }

    #[test]
    fn in_degree_monotone_in_time() {
        let params = ModelParams::new(0.7, 1.0, 4.0).unwrap().with_seed(2);
        let g = generate(&params, 400, GenerationMode::Naive).unwrap();
        for v in 1..=g.n() {
            assert_eq!(g.in_degree_at(v, v), 0);
            let mut prev = 0;
            for t in v..=g.n() {
                let d = g.in_degree_at(v, t);
                assert!(d >= prev);
                prev = d;
            }
        }
    }
}
