//! Local clustering coefficients.
//!
//! The directed coefficient of `v` counts edges among the in-neighbours of
//! `v` and normalises by `C(deg⁻(v), 2)`. The undirected one does the same
//! over all neighbours with the total degree. The directed count can be
//! split into edges landing on "old" in-neighbours (acquired up to a
//! threshold time) and the remaining "new" ones.
//!
//! Counts are kept as integers; coefficients are derived on demand.
//! Averages are always summed in increasing vertex order so results are
//! reproducible regardless of how per-vertex work was scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, SpaError};
use crate::graph::{SpaGraph, VertexId};

/// `C(d, 2)`.
#[inline]
pub fn pairs(d: usize) -> u64 {
    let d = d as u64;
    d * d.saturating_sub(1) / 2
}

fn ratio(closed: u64, d: usize) -> Option<f64> {
    let p = pairs(d);
    (p > 0).then(|| closed as f64 / p as f64)
}

/// Rule choosing the threshold time that separates old from new
/// in-neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SplitRule {
    /// First time the in-degree exceeds half of its final value.
    #[default]
    HalfDegree,
    /// First time the in-degree exceeds `omega * ln n`, or `n` if it never does.
    LogThreshold(f64),
}

impl fmt::Display for SplitRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitRule::HalfDegree => f.write_str("half"),
            SplitRule::LogThreshold(w) => write!(f, "log:{w}"),
        }
    }
}

impl FromStr for SplitRule {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "half" || s == "halfdegree" {
            return Ok(SplitRule::HalfDegree);
        }
        if let Some(w) = s.strip_prefix("log:") {
            let w: f64 = w
                .parse()
                .map_err(|_| SpaError::InvalidParameter(format!("bad omega `{w}`")))?;
            if !(w.is_finite() && w > 0.0) {
                return Err(SpaError::InvalidParameter(format!("omega {w} must be positive")));
            }
            return Ok(SplitRule::LogThreshold(w));
        }
        Err(SpaError::InvalidParameter(format!("unknown split rule `{s}`")))
    }
}

/// Number of edges among the in-neighbours of `v`.
pub fn in_neighbor_edges(graph: &SpaGraph, v: VertexId) -> u64 {
    let nbrs = graph.in_neighbors(v);
    let mut closed = 0;
    for &u in nbrs {
        for &w in graph.out_neighbors(u as usize) {
            if nbrs.binary_search(&w).is_ok() {
                closed += 1;
            }
        }
    }
    closed
}

/// Number of edges among all neighbours of `v` in the undirected graph.
pub fn neighbor_edges(graph: &SpaGraph, v: VertexId) -> u64 {
    let ins = graph.in_neighbors(v);
    let outs = graph.out_neighbors(v);
    let member = |w: u32| {
        let w = w as usize;
        if w < v {
            outs.binary_search(&(w as u32)).is_ok()
        } else if w > v {
            ins.binary_search(&(w as u32)).is_ok()
        } else {
            false
        }
    };
    // Each undirected edge is seen once, from its younger endpoint.
    let mut closed = 0;
    for &u in outs.iter().chain(ins) {
        for &w in graph.out_neighbors(u as usize) {
            if member(w) {
                closed += 1;
            }
        }
    }
    closed
}

/// Directed local clustering coefficient `c⁻(v)`; `None` when `deg⁻(v) < 2`.
pub fn local_cc_directed(graph: &SpaGraph, v: VertexId) -> Result<Option<f64>> {
    graph.check_vertex(v)?;
    Ok(ratio(in_neighbor_edges(graph, v), graph.in_degree(v)))
}

/// Local clustering coefficient of the underlying undirected graph;
/// `None` when `deg(v) < 2`.
pub fn local_cc_undirected(graph: &SpaGraph, v: VertexId) -> Result<Option<f64>> {
    graph.check_vertex(v)?;
    Ok(ratio(neighbor_edges(graph, v), graph.degree(v)))
}

/// Old/new decomposition of the edges among the in-neighbours of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OldNewSplit {
    /// Threshold time `T̂_v`.
    pub t_hat: usize,
    /// Number of in-neighbours acquired at or before `t_hat`.
    pub old_neighbors: usize,
    pub old_edges: u64,
    pub new_edges: u64,
    pub in_degree: usize,
}

impl OldNewSplit {
    pub fn c_old(&self) -> f64 {
        self.old_edges as f64 / pairs(self.in_degree) as f64
    }

    pub fn c_new(&self) -> f64 {
        self.new_edges as f64 / pairs(self.in_degree) as f64
    }
}

/// Number of in-neighbours counted as old under `rule`, and `T̂_v`.
fn old_prefix(graph: &SpaGraph, v: VertexId, rule: SplitRule) -> (usize, usize) {
    let nbrs = graph.in_neighbors(v);
    let d = nbrs.len();
    let needed = match rule {
        SplitRule::HalfDegree => d / 2 + 1,
        SplitRule::LogThreshold(omega) => {
            let thr = omega * (graph.n() as f64).ln();
            thr.max(0.0).floor() as usize + 1
        }
    };
    if needed > d {
        (d, graph.n())
    } else {
        (needed, nbrs[needed - 1] as usize)
    }
}

fn split_counts(graph: &SpaGraph, v: VertexId, old_neighbors: usize) -> (u64, u64) {
    let nbrs = graph.in_neighbors(v);
    let (mut old, mut new) = (0, 0);
    for &u in nbrs {
        for &w in graph.out_neighbors(u as usize) {
            if let Ok(i) = nbrs.binary_search(&w) {
                if i < old_neighbors {
                    old += 1;
                } else {
                    new += 1;
                }
            }
        }
    }
    (old, new)
}

/// Splits `c⁻(v)` into `c_old + c_new`. Requires `deg⁻(v) >= 2`.
pub fn old_new_split(graph: &SpaGraph, v: VertexId, rule: SplitRule) -> Result<OldNewSplit> {
    graph.check_vertex(v)?;
    let d = graph.in_degree(v);
    if d < 2 {
        return Err(SpaError::InsufficientData(format!(
            "vertex {v} has in-degree {d} < 2"
        )));
    }
    let (old_neighbors, t_hat) = old_prefix(graph, v, rule);
    let (old_edges, new_edges) = split_counts(graph, v, old_neighbors);
    Ok(OldNewSplit {
        t_hat,
        old_neighbors,
        old_edges,
        new_edges,
        in_degree: d,
    })
}

/// Running sum and count of coefficients at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Accum {
    pub sum: f64,
    pub count: usize,
}

impl Accum {
    pub fn add(&mut self, x: f64) {
        self.sum += x;
        self.count += 1;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }
}

/// Mean coefficient keyed by degree. Mergeable, so curves from several
/// graphs pool into a count-weighted mean.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DegreeCurve(pub BTreeMap<usize, Accum>);

impl DegreeCurve {
    pub fn add(&mut self, d: usize, x: f64) {
        self.0.entry(d).or_default().add(x);
    }

    pub fn merge(&mut self, other: &DegreeCurve) {
        for (&d, a) in &other.0 {
            let e = self.0.entry(d).or_default();
            e.sum += a.sum;
            e.count += a.count;
        }
    }

    pub fn get(&self, d: usize) -> Option<&Accum> {
        self.0.get(&d)
    }

    pub fn mean(&self, d: usize) -> Option<f64> {
        self.0.get(&d).map(Accum::mean)
    }

    /// `(d, mean)` pairs in increasing degree.
    pub fn means(&self) -> Vec<(usize, f64)> {
        self.0.iter().map(|(&d, a)| (d, a.mean())).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Accum)> {
        self.0.iter().map(|(&d, a)| (d, a))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-vertex clustering counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexClustering {
    pub v: VertexId,
    pub in_degree: usize,
    pub degree: usize,
    /// Edges among in-neighbours.
    pub in_closed: u64,
    /// Edges among all neighbours.
    pub closed: u64,
    pub old_edges: u64,
    pub new_edges: u64,
}

impl VertexClustering {
    pub fn compute(graph: &SpaGraph, v: VertexId, rule: SplitRule) -> Self {
        let in_degree = graph.in_degree(v);
        let (old_edges, new_edges) = if in_degree >= 2 {
            let (old, _) = old_prefix(graph, v, rule);
            split_counts(graph, v, old)
        } else {
            (0, 0)
        };
        VertexClustering {
            v,
            in_degree,
            degree: graph.degree(v),
            in_closed: old_edges + new_edges,
            closed: neighbor_edges(graph, v),
            old_edges,
            new_edges,
        }
    }

    pub fn c_minus(&self) -> Option<f64> {
        ratio(self.in_closed, self.in_degree)
    }

    pub fn c_undirected(&self) -> Option<f64> {
        ratio(self.closed, self.degree)
    }

    pub fn c_old(&self) -> Option<f64> {
        ratio(self.old_edges, self.in_degree)
    }

    pub fn c_new(&self) -> Option<f64> {
        ratio(self.new_edges, self.in_degree)
    }

    /// Degree and coefficient in the requested mode.
    pub fn keyed(&self, directed: bool) -> (usize, Option<f64>) {
        if directed {
            (self.in_degree, self.c_minus())
        } else {
            (self.degree, self.c_undirected())
        }
    }
}

/// Clustering of every vertex of a graph, with the degree aggregates
/// derived from it.
#[derive(Debug, Clone)]
pub struct ClusteringReport {
    pub rule: SplitRule,
    pub vertices: Vec<VertexClustering>,
}

fn in_window(deg: usize, d: usize, delta: f64) -> bool {
    let (deg, d) = (deg as f64, d as f64);
    (1.0 - delta) * d <= deg && deg <= (1.0 + delta) * d
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(SpaError::InvalidParameter(format!(
            "delta = {delta} outside (0, 1/2)"
        )))
    }
}

impl ClusteringReport {
    /// Computes all per-vertex counts, in parallel.
    pub fn compute(graph: &SpaGraph, rule: SplitRule) -> Self {
        let vertices = (1..=graph.n())
            .into_par_iter()
            .map(|v| VertexClustering::compute(graph, v, rule))
            .collect();
        ClusteringReport { rule, vertices }
    }

    /// `C⁻(d)` (directed) or `C(d)` (undirected) for every degree with at
    /// least one defined coefficient.
    pub fn by_degree(&self, directed: bool) -> DegreeCurve {
        let mut curve = DegreeCurve::default();
        for vc in &self.vertices {
            if let (d, Some(c)) = vc.keyed(directed) {
                curve.add(d, c);
            }
        }
        curve
    }

    /// Mean old and new parts of `c⁻` per in-degree.
    pub fn old_new_by_degree(&self) -> (DegreeCurve, DegreeCurve) {
        let mut old = DegreeCurve::default();
        let mut new = DegreeCurve::default();
        for vc in &self.vertices {
            if let (Some(o), Some(n)) = (vc.c_old(), vc.c_new()) {
                old.add(vc.in_degree, o);
                new.add(vc.in_degree, n);
            }
        }
        (old, new)
    }

    /// Average over `X_d = {v : (1-δ)d <= deg(v) <= (1+δ)d}` for every
    /// integer `d >= 2` with `X_d` non-empty. The degree is the in-degree
    /// for the directed coefficient and the total degree otherwise.
    pub fn smoothed(&self, delta: f64, directed: bool) -> Result<DegreeCurve> {
        check_delta(delta)?;
        let mut buckets: BTreeMap<usize, Vec<(VertexId, f64)>> = BTreeMap::new();
        for vc in &self.vertices {
            if let (d, Some(c)) = vc.keyed(directed) {
                buckets.entry(d).or_default().push((vc.v, c));
            }
        }
        let mut curve = DegreeCurve::default();
        let Some(&max_deg) = buckets.keys().next_back() else {
            return Ok(curve);
        };
        let d_max = ((max_deg as f64) / (1.0 - delta)).ceil() as usize + 1;
        let mut members = Vec::new();
        for d in 2..=d_max {
            let lo = ((1.0 - delta) * d as f64).floor() as usize;
            let hi = ((1.0 + delta) * d as f64).ceil() as usize;
            members.clear();
            for (&deg, list) in buckets.range(lo..=hi) {
                if in_window(deg, d, delta) {
                    members.extend_from_slice(list);
                }
            }
            if members.is_empty() {
                continue;
            }
            members.sort_unstable_by_key(|&(v, _)| v);
            let acc = curve.0.entry(d).or_default();
            for &(_, c) in &members {
                acc.add(c);
            }
        }
        Ok(curve)
    }
}

/// `C(d)` for a single graph.
pub fn avg_cc_by_degree(graph: &SpaGraph, directed: bool) -> DegreeCurve {
    let mut curve = DegreeCurve::default();
    for v in 1..=graph.n() {
        let (d, c) = if directed {
            (graph.in_degree(v), ratio(in_neighbor_edges(graph, v), graph.in_degree(v)))
        } else {
            (graph.degree(v), ratio(neighbor_edges(graph, v), graph.degree(v)))
        };
        if let Some(c) = c {
            curve.add(d, c);
        }
    }
    curve
}

/// Mean coefficient over `X_d`; `None` when `X_d` has no vertex with a
/// defined coefficient.
pub fn smoothed_cc(graph: &SpaGraph, d: usize, delta: f64, directed: bool) -> Result<Option<f64>> {
    check_delta(delta)?;
    let mut acc = Accum::default();
    for v in 1..=graph.n() {
        let (deg, c) = if directed {
            (graph.in_degree(v), ratio(in_neighbor_edges(graph, v), graph.in_degree(v)))
        } else {
            (graph.degree(v), ratio(neighbor_edges(graph, v), graph.degree(v)))
        };
        if let Some(c) = c {
            if in_window(deg, d, delta) {
                acc.add(c);
            }
        }
    }
    Ok((acc.count > 0).then(|| acc.mean()))
}
