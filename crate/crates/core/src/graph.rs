//! Timestamped directed graph produced by the generators.
//!
//! Vertices are identified by their birth time `1..=n`. Every edge points
//! from a younger vertex to an older one and is created at the birth step
//! of its source, so the edge time is always equal to `src`.

use std::collections::HashSet;

use crate::error::{Result, SpaError};

/// Vertex identifier; equal to the step at which the vertex was born.
pub type VertexId = usize;

/// Directed edge `src -> dst` with `src > dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
}

impl Edge {
    /// Step at which the edge was created.
    pub fn time(&self) -> usize {
        self.src
    }
}

#[derive(Debug, Clone)]
pub struct SpaGraph {
    dim: usize,
    positions: Vec<f64>,
    edges: Vec<Edge>,
    // Both lists are sorted ascending: in-edges arrive in birth order of
    // their sources, out-edges are added in increasing target order.
    in_nbrs: Vec<Vec<u32>>,
    out_nbrs: Vec<Vec<u32>>,
}

impl PartialEq for SpaGraph {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.edges == other.edges
            && self.positions.len() == other.positions.len()
            && self
                .positions
                .iter()
                .zip(&other.positions)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for SpaGraph {}

impl SpaGraph {
    /// The null graph in dimension `dim`.
    pub fn new(dim: usize) -> Self {
        SpaGraph {
            dim,
            positions: Vec::new(),
            edges: Vec::new(),
            in_nbrs: Vec::new(),
            out_nbrs: Vec::new(),
        }
    }

    /// Builds a graph from positions (flattened, `dim` per vertex) and edges
    /// in creation order, checking every structural invariant.
    pub fn from_parts(dim: usize, positions: Vec<f64>, edges: Vec<Edge>) -> Result<Self> {
        if dim == 0 {
            return Err(SpaError::InvalidParameter("dimension must be >= 1".into()));
        }
        if positions.len() % dim != 0 {
            return Err(SpaError::InvariantViolation(format!(
                "{} coordinates is not a multiple of dimension {dim}",
                positions.len()
            )));
        }
        if let Some(c) = positions.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(SpaError::InvariantViolation(format!(
                "coordinate {c} outside [0,1)"
            )));
        }
        let n = positions.len() / dim;
        let mut g = SpaGraph {
            dim,
            positions,
            edges: Vec::with_capacity(edges.len()),
            in_nbrs: vec![Vec::new(); n],
            out_nbrs: vec![Vec::new(); n],
        };
        let mut last: Option<Edge> = None;
        for e in edges {
            if e.dst == 0 || e.src > n {
                return Err(SpaError::InvariantViolation(format!(
                    "edge {} -> {} references a vertex outside 1..={n}",
                    e.src, e.dst
                )));
            }
            if e.src <= e.dst {
                return Err(SpaError::InvariantViolation(format!(
                    "edge {} -> {} does not point from younger to older",
                    e.src, e.dst
                )));
            }
            // Creation order: sources non-decreasing, targets strictly
            // increasing within one source. This also rules out duplicates.
            if let Some(prev) = last {
                if e.src < prev.src || (e.src == prev.src && e.dst <= prev.dst) {
                    return Err(SpaError::InvariantViolation(format!(
                        "edge {} -> {} is duplicated or out of creation order",
                        e.src, e.dst
                    )));
                }
            }
            last = Some(e);
            g.push_edge(e);
        }
        g.validate()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.in_nbrs.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    /// Edges in creation order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Flattened coordinates, `dim` values per vertex in birth order.
    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    #[inline]
    pub fn position(&self, v: VertexId) -> &[f64] {
        let i = (v - 1) * self.dim;
        &self.positions[i..i + self.dim]
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v >= 1 && v <= self.n()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(SpaError::UnknownVertex(v))
        }
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_nbrs[v - 1].len()
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_nbrs[v - 1].len()
    }

    /// Total degree in the underlying undirected graph.
    pub fn degree(&self, v: VertexId) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// In-neighbours of `v` in increasing birth order (equivalently, in
    /// increasing edge time).
    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[u32] {
        &self.in_nbrs[v - 1]
    }

    /// Out-neighbours of `v` in increasing birth order.
    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[u32] {
        &self.out_nbrs[v - 1]
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_nbrs.iter().map(Vec::len).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_nbrs.iter().map(Vec::len).collect()
    }

    /// In-degree of `v` in `G_t`: number of in-edges created at or before `t`.
    pub fn in_degree_at(&self, v: VertexId, t: usize) -> usize {
        self.in_neighbors(v).partition_point(|&u| u as usize <= t)
    }

    pub fn has_edge(&self, src: VertexId, dst: VertexId) -> bool {
        self.contains_vertex(src)
            && self.contains_vertex(dst)
            && self.out_neighbors(src).binary_search(&(dst as u32)).is_ok()
    }

    pub(crate) fn push_vertex(&mut self, coords: &[f64]) -> VertexId {
        debug_assert_eq!(coords.len(), self.dim);
        self.positions.extend_from_slice(coords);
        self.in_nbrs.push(Vec::new());
        self.out_nbrs.push(Vec::new());
        self.n()
    }

    /// Adds `src -> dst`. The source must be the newest vertex and targets
    /// must be added in increasing order.
    pub(crate) fn push_edge(&mut self, e: Edge) {
        debug_assert!(e.src > e.dst);
        debug_assert!(self
            .out_nbrs[e.src - 1]
            .last()
            .map_or(true, |&last| (last as usize) < e.dst));
        self.edges.push(e);
        self.out_nbrs[e.src - 1].push(e.dst as u32);
        self.in_nbrs[e.dst - 1].push(e.src as u32);
    }

    /// Checks the structural invariants: edge direction, no duplicates and
    /// the degree-sum identities.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.positions.len() != n * self.dim {
            return Err(SpaError::InvariantViolation("position count mismatch".into()));
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for e in &self.edges {
            if e.src <= e.dst || e.dst == 0 || e.src > n {
                return Err(SpaError::InvariantViolation(format!(
                    "bad edge {} -> {}",
                    e.src, e.dst
                )));
            }
            if !seen.insert((e.src, e.dst)) {
                return Err(SpaError::InvariantViolation(format!(
                    "duplicate edge {} -> {}",
                    e.src, e.dst
                )));
            }
        }
        let in_sum: usize = self.in_nbrs.iter().map(Vec::len).sum();
        let out_sum: usize = self.out_nbrs.iter().map(Vec::len).sum();
        if in_sum != self.edges.len() || out_sum != self.edges.len() {
            return Err(SpaError::InvariantViolation(format!(
                "degree sums {in_sum}/{out_sum} differ from edge count {}",
                self.edges.len()
            )));
        }
        Ok(())
    }
}
