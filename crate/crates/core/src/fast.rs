//! Sub-quadratic bucketed generator.
//!
//! Vertices are split into heavy ones (in-degree at least a threshold `D`),
//! which are kept in a single list and tested on every step, and light
//! ones, which are bucketed into a `side x side` grid over the unit square.
//! The threshold is chosen per grid so that a light sphere never reaches
//! beyond the 3x3 block of cells around its centre; a newcomer then only
//! needs to be tested against the heavy list and the nine cells around it.
//!
//! The index is rebuilt whenever the graph has grown by a quarter. Every
//! rebuild scans all admissible grid sizes, counts the heavy vertices each
//! would produce on the actual graph, and keeps the cheapest one.
//!
//! Containment candidates are sorted by birth time before coins are drawn,
//! so the random stream is consumed exactly as in
//! [`step_naive`](crate::model::step_naive) and the output is identical.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::error::{Result, SpaError};
use crate::geometry::{self, NormKind, Reach};
use crate::graph::{SpaGraph, VertexId};
use crate::model::{self, GenerationStats, ModelParams, RngStream};

/// Relative slack between the largest admissible light radius and the cell
/// side, so that rounding in cell lookup can never push a containing light
/// vertex outside the 3x3 block.
const SAFETY_SLACK: f64 = 1e-9;

/// Smallest grid side for which the nine neighbouring cells are distinct.
const MIN_SIDE: usize = 3;

/// Approximate optimal number of heavy vertices,
/// `n^(1 - 1/(pA1+1)) (9 p A1 A2 / pi)^(1/(pA1+1))`.
pub fn optimal_t(n: usize, params: &ModelParams) -> Result<f64> {
    let g = params.growth_exponent();
    if !(g > 0.0 && g < 1.0) {
        return Err(SpaError::InvalidParameter(format!(
            "p*A1 = {g} must lie in (0,1)"
        )));
    }
    if n == 0 {
        return Err(SpaError::InvalidParameter("n must be >= 1".into()));
    }
    let e = 1.0 / (g + 1.0);
    Ok((n as f64).powf(1.0 - e) * (9.0 * g * params.a2 / PI).powf(e))
}

/// Degree threshold that leaves about `heavy_count` heavy vertices,
/// `(A2/A1)(n/T)^(pA1)`.
pub fn heavy_threshold(n: usize, heavy_count: f64, params: &ModelParams) -> Result<f64> {
    if !(heavy_count > 0.0) || heavy_count > n as f64 {
        return Err(SpaError::InvalidParameter(format!(
            "T = {heavy_count} outside (0, n]"
        )));
    }
    Ok(params.a2 / params.a1 * (n as f64 / heavy_count).powf(params.growth_exponent()))
}

/// Grid dimensions: `side x side` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub side: usize,
}

impl GridSize {
    pub fn k(&self) -> usize {
        self.side * self.side
    }

    pub fn cell_side(&self) -> f64 {
        1.0 / self.side as f64
    }

    /// With fewer than three cells per row the 3x3 neighbourhood overlaps
    /// itself and the generator falls back to testing every vertex.
    pub fn needs_fallback(&self) -> bool {
        self.side < MIN_SIDE
    }
}

/// Largest perfect square `k` with `sqrt((A1 D + A2)/(pi n)) <= 1/sqrt(k)`,
/// never less than 1.
pub fn grid_size(n: usize, threshold: f64, params: &ModelParams) -> GridSize {
    let ratio = PI * n as f64 / (params.a1 * threshold + params.a2);
    let mut side = ratio.sqrt().floor().max(1.0) as usize;
    // Guard against the floor landing one above the bound after rounding.
    while side > 1 && (side * side) as f64 > ratio {
        side -= 1;
    }
    GridSize { side }
}

/// Comparisons needed to add one vertex: `T + 9 (n - T)/k`.
pub fn cost_estimate(heavy_count: f64, n: usize, k: usize) -> f64 {
    heavy_count + 9.0 * (n as f64 - heavy_count) / k as f64
}

/// Per-phase record emitted when profiling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseStats {
    pub phase_start: usize,
    pub phase_end: usize,
    pub k: usize,
    pub threshold: f64,
    pub heavy: usize,
    pub comparisons: u64,
}

/// Writes phase records as CSV.
pub fn write_phase_csv<W: Write>(phases: &[PhaseStats], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for p in phases {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Heavy list, light cell lists and the threshold for one phase.
#[derive(Debug, Clone)]
pub struct BucketIndex {
    threshold: f64,
    grid: GridSize,
    heavy: Vec<VertexId>,
    cells: Vec<Vec<VertexId>>,
    is_heavy: Vec<bool>,
    phase_start: usize,
    phase_end: usize,
}

/// Largest sphere volume whose radius stays (with slack) within one cell.
fn light_volume_limit(side: usize, norm: NormKind) -> f64 {
    let r = (1.0 - SAFETY_SLACK) / side as f64;
    match norm {
        NormKind::Linf => (2.0 * r) * (2.0 * r),
        NormKind::L2 => PI * r * r,
    }
}

/// Largest threshold keeping every light sphere inside one cell for the
/// whole phase starting at `t` vertices.
fn safe_threshold(side: usize, t: usize, params: &ModelParams) -> f64 {
    (light_volume_limit(side, params.norm) * t as f64 - params.a2) / params.a1
}

impl BucketIndex {
    /// Builds the index for the current graph, choosing the grid size that
    /// minimises the comparison count on the actual degree sequence.
    pub fn rebuild(graph: &SpaGraph, params: &ModelParams) -> Self {
        let t = graph.n();
        assert!(t >= 1, "index needs at least one vertex");

        let mut degrees = graph.in_degrees();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let heavy_at = |d: f64| degrees.partition_point(|&x| x as f64 >= d);

        // Everything heavy: the naive cost.
        let mut best_cost = t as f64;
        let mut best: Option<(usize, f64)> = None;
        let mut side = MIN_SIDE;
        loop {
            let d = safe_threshold(side, t, params);
            if d <= 0.0 {
                break;
            }
            let heavy = heavy_at(d) as f64;
            let cost = cost_estimate(heavy, t, side * side);
            if cost < best_cost {
                best_cost = cost;
                best = Some((side, d));
            }
            side += 1;
        }

        let (grid, threshold) = match best {
            Some((side, d)) => (GridSize { side }, d),
            None => (GridSize { side: 1 }, 0.0),
        };
        let mut index = BucketIndex {
            threshold,
            grid,
            heavy: Vec::new(),
            cells: vec![Vec::new(); if grid.needs_fallback() { 0 } else { grid.k() }],
            is_heavy: Vec::with_capacity(t),
            phase_start: t,
            phase_end: (5 * t).div_ceil(4),
        };
        for v in 1..=t {
            index.insert(graph, v);
        }
        index
    }

    fn cell_coord(&self, x: f64) -> usize {
        ((x * self.grid.side as f64) as usize).min(self.grid.side - 1)
    }

    fn cell_of(&self, pos: &[f64]) -> usize {
        self.cell_coord(pos[0]) * self.grid.side + self.cell_coord(pos[1])
    }

    fn insert(&mut self, graph: &SpaGraph, v: VertexId) {
        debug_assert_eq!(self.is_heavy.len() + 1, v);
        let heavy = self.is_fallback() || graph.in_degree(v) as f64 >= self.threshold;
        self.is_heavy.push(heavy);
        if heavy {
            self.heavy.push(v);
        } else {
            let c = self.cell_of(graph.position(v));
            self.cells[c].push(v);
        }
    }

    fn promote_if_needed(&mut self, graph: &SpaGraph, v: VertexId) {
        if self.is_heavy[v - 1] || (graph.in_degree(v) as f64) < self.threshold {
            return;
        }
        let c = self.cell_of(graph.position(v));
        let list = &mut self.cells[c];
        let i = list
            .iter()
            .position(|&u| u == v)
            .expect("light vertex missing from its cell list");
        list.swap_remove(i);
        self.is_heavy[v - 1] = true;
        self.heavy.push(v);
    }

    pub fn is_fallback(&self) -> bool {
        self.grid.needs_fallback()
    }

    /// Heavy-degree threshold `D`.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Number of grid cells.
    pub fn k(&self) -> usize {
        self.grid.k()
    }

    pub fn grid(&self) -> GridSize {
        self.grid
    }

    pub fn cell_side(&self) -> f64 {
        self.grid.cell_side()
    }

    pub fn heavy(&self) -> &[VertexId] {
        &self.heavy
    }

    /// Light cell lists; empty in fallback mode.
    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.cells
    }

    pub fn is_heavy(&self, v: VertexId) -> bool {
        self.is_heavy[v - 1]
    }

    pub fn phase_start(&self) -> usize {
        self.phase_start
    }

    pub fn phase_end(&self) -> usize {
        self.phase_end
    }

    /// Number of vertices tracked by the index.
    pub fn len(&self) -> usize {
        self.is_heavy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_heavy.is_empty()
    }
}

/// Reusable buffers for [`step_fast`].
#[derive(Debug, Default)]
pub struct StepScratch {
    pos: Vec<f64>,
    containing: Vec<VertexId>,
}

/// Adds vertex `n + 1` using the index. Returns the number of containment
/// tests.
///
/// # Panics
///
/// Panics if the step lies beyond the phase end, or if a light vertex's
/// sphere has grown past one cell (the index is then inconsistent).
pub fn step_fast(
    graph: &mut SpaGraph,
    index: &mut BucketIndex,
    params: &ModelParams,
    rng: &mut RngStream,
    scratch: &mut StepScratch,
) -> u64 {
    let t_prev = graph.n();
    assert!(t_prev < index.phase_end, "step beyond the end of the phase");
    assert_eq!(index.len(), t_prev, "index out of sync with graph");

    scratch.pos.resize(params.dim, 0.0);
    rng.fill_position(&mut scratch.pos);
    let pos = &scratch.pos;
    let containing = &mut scratch.containing;
    containing.clear();

    let mut comparisons = 0u64;
    for &u in &index.heavy {
        comparisons += 1;
        let reach = params.reach(graph.in_degree(u), t_prev);
        if geometry::within(graph.position(u), pos, reach, params.norm) {
            containing.push(u);
        }
    }

    if !index.is_fallback() {
        let side = index.grid.side;
        let cell_side = index.cell_side();
        let cx = index.cell_coord(pos[0]);
        let cy = index.cell_coord(pos[1]);
        for dx in [side - 1, 0, 1] {
            let row = (cx + dx) % side;
            for dy in [side - 1, 0, 1] {
                let col = (cy + dy) % side;
                for &u in &index.cells[row * side + col] {
                    comparisons += 1;
                    let reach = params.reach(graph.in_degree(u), t_prev);
                    match reach {
                        Reach::Radius(r) if r <= cell_side => {}
                        _ => panic!(
                            "light vertex {u} has reach {reach:?} beyond cell side {cell_side}"
                        ),
                    }
                    if geometry::within(graph.position(u), pos, reach, params.norm) {
                        containing.push(u);
                    }
                }
            }
        }
        containing.sort_unstable();
    }

    let t = graph.push_vertex(pos);
    model::flip_and_link(graph, t, containing, params.p, rng, |g, u| {
        index.promote_if_needed(g, u)
    });
    index.insert(graph, t);
    comparisons
}

/// Generates `G_n` with the bucketed generator. Only the plane is supported.
pub fn generate_fast(params: &ModelParams, n: usize) -> Result<(SpaGraph, GenerationStats)> {
    params.validate()?;
    if params.dim != 2 {
        return Err(SpaError::Unsupported(format!(
            "the bucketed generator needs m = 2 (got m = {})",
            params.dim
        )));
    }
    let mut graph = SpaGraph::new(2);
    let mut stats = GenerationStats::default();
    if n == 0 {
        return Ok((graph, stats));
    }
    let mut rng = RngStream::new(params.seed);
    model::step_naive(&mut graph, params, &mut rng);

    let mut scratch = StepScratch::default();
    while graph.n() < n {
        let mut index = BucketIndex::rebuild(&graph, params);
        let end = index.phase_end().min(n);
        let mut phase = PhaseStats {
            phase_start: index.phase_start(),
            phase_end: end,
            k: if index.is_fallback() { 1 } else { index.k() },
            threshold: index.threshold(),
            heavy: index.heavy().len(),
            comparisons: 0,
        };
        while graph.n() < end {
            phase.comparisons += step_fast(&mut graph, &mut index, params, &mut rng, &mut scratch);
        }
        stats.comparisons += phase.comparisons;
        stats.phases.push(phase);
    }
    Ok((graph, stats))
}
