//! Brute-force reference computations.
//!
//! Everything here works from the raw edge list only: neighbourhoods are
//! found by scanning all edges, clustering by enumerating vertex pairs,
//! and degree histories by replaying edges in creation order. It shares no
//! code with the indexed implementations in [`crate::clustering`] and
//! [`crate::theory`], and is meant for small graphs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::clustering::SplitRule;
use crate::graph::{SpaGraph, VertexId};
use crate::model::{generate, GenerationMode, ModelParams};

/// Edge set and neighbourhoods rebuilt from the edge list.
pub struct BruteGraph {
    pub n: usize,
    pub edges: HashSet<(usize, usize)>,
    /// Edges in creation order.
    pub ordered: Vec<(usize, usize)>,
}

impl BruteGraph {
    pub fn new(graph: &SpaGraph) -> Self {
        let ordered: Vec<_> = graph.edges().iter().map(|e| (e.src, e.dst)).collect();
        BruteGraph {
            n: graph.n(),
            edges: ordered.iter().copied().collect(),
            ordered,
        }
    }

    fn joined(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b)) || self.edges.contains(&(b, a))
    }

    pub fn in_neighbors(&self, v: VertexId) -> BTreeSet<usize> {
        self.ordered.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<usize> {
        self.ordered
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    fn closed_pairs(&self, set: &BTreeSet<usize>) -> u64 {
        let items: Vec<_> = set.iter().copied().collect();
        let mut count = 0;
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if self.joined(items[i], items[j]) {
                    count += 1;
                }
            }
        }
        count
    }

    fn coefficient(&self, set: &BTreeSet<usize>) -> Option<f64> {
        let d = set.len() as u64;
        if d < 2 {
            return None;
        }
        Some(self.closed_pairs(set) as f64 / (d * (d - 1) / 2) as f64)
    }

    pub fn cc_directed(&self, v: VertexId) -> Option<f64> {
        self.coefficient(&self.in_neighbors(v))
    }

    pub fn cc_undirected(&self, v: VertexId) -> Option<f64> {
        self.coefficient(&self.neighbors(v))
    }

    /// `deg⁻(v, t)` by replaying edges created up to time `t`.
    pub fn in_degree_at(&self, v: VertexId, t: usize) -> usize {
        self.ordered.iter().take_while(|e| e.0 <= t).filter(|e| e.1 == v).count()
    }

    /// Old and new edge counts among the in-neighbours of `v`, with the
    /// threshold time found by stepping through time.
    pub fn old_new(&self, v: VertexId, rule: SplitRule) -> Option<(usize, u64, u64)> {
        let all = self.in_neighbors(v);
        let d = all.len();
        if d < 2 {
            return None;
        }
        let threshold = match rule {
            SplitRule::HalfDegree => d as f64 / 2.0,
            SplitRule::LogThreshold(omega) => omega * (self.n as f64).ln(),
        };
        let t_hat = (1..=self.n)
            .find(|&t| self.in_degree_at(v, t) as f64 > threshold)
            .unwrap_or(self.n);
        let old: BTreeSet<_> = all.iter().copied().filter(|&u| u <= t_hat).collect();
        let (mut e_old, mut e_new) = (0, 0);
        for &(a, b) in &self.ordered {
            if all.contains(&a) && all.contains(&b) {
                if old.contains(&b) {
                    e_old += 1;
                } else {
                    e_new += 1;
                }
            }
        }
        Some((t_hat, e_old, e_new))
    }

    fn degree(&self, v: VertexId, directed: bool) -> usize {
        if directed {
            self.in_neighbors(v).len()
        } else {
            self.neighbors(v).len()
        }
    }

    fn cc(&self, v: VertexId, directed: bool) -> Option<f64> {
        if directed {
            self.cc_directed(v)
        } else {
            self.cc_undirected(v)
        }
    }

    /// `(d, mean, count)` over vertices of exact degree `d`.
    pub fn by_degree(&self, directed: bool) -> BTreeMap<usize, (f64, usize)> {
        let mut acc: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
        for v in 1..=self.n {
            if let Some(c) = self.cc(v, directed) {
                let e = acc.entry(self.degree(v, directed)).or_default();
                e.0 += c;
                e.1 += 1;
            }
        }
        acc.into_iter().map(|(d, (s, c))| (d, (s / c as f64, c))).collect()
    }

    /// Mean coefficient over vertices with degree in `[(1-δ)d, (1+δ)d]`.
    pub fn smoothed(&self, d: usize, delta: f64, directed: bool) -> Option<f64> {
        let (mut sum, mut count) = (0.0, 0usize);
        for v in 1..=self.n {
            let deg = self.degree(v, directed) as f64;
            if deg >= (1.0 - delta) * d as f64 && deg <= (1.0 + delta) * d as f64 {
                if let Some(c) = self.cc(v, directed) {
                    sum += c;
                    count += 1;
                }
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

/// One line of a self-test run.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Compares the fast generator against the naive one on a few
/// configurations, and every clustering quantity against the brute-force
/// oracle on small graphs.
pub fn selftest() -> Vec<CheckOutcome> {
    use crate::clustering::ClusteringReport;

    let mut out = Vec::new();
    for (p, a1, n, seed) in [(0.3, 1.0, 3000, 1u64), (0.7, 0.5, 3000, 2), (0.7, 1.0, 5000, 3)] {
        let params = ModelParams::new(p, a1, 10.0 * (1.0 - p) / p)
            .expect("valid parameters")
            .with_seed(seed);
        let naive = generate(&params, n, GenerationMode::Naive);
        let fast = generate(&params, n, GenerationMode::Fast);
        let passed = matches!((&naive, &fast), (Ok(a), Ok(b)) if a == b);
        out.push(CheckOutcome {
            name: format!("generator equivalence p={p} A1={a1} n={n} seed={seed}"),
            passed,
            detail: match naive {
                Ok(g) => format!("{} edges", g.edge_count()),
                Err(e) => e.to_string(),
            },
        });
    }

    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for i in 0..20u64 {
        let p = 0.3 + 0.03 * i as f64;
        let params = ModelParams::new(p, 1.0, 3.0).expect("valid parameters").with_seed(100 + i);
        let g = generate(&params, 60 + 2 * i as usize, GenerationMode::Naive).expect("generation");
        let brute = BruteGraph::new(&g);
        let report = ClusteringReport::compute(&g, SplitRule::HalfDegree);
        for vc in &report.vertices {
            checked += 1;
            let v = vc.v;
            let split = brute.old_new(v, SplitRule::HalfDegree);
            let ok = vc.c_minus() == brute.cc_directed(v)
                && vc.c_undirected() == brute.cc_undirected(v)
                && split.map(|s| (s.1, s.2)) == vc.c_minus().map(|_| (vc.old_edges, vc.new_edges));
            if !ok {
                mismatches += 1;
            }
        }
        for directed in [true, false] {
            let curve = report.by_degree(directed);
            for (d, (mean, count)) in brute.by_degree(directed) {
                checked += 1;
                if curve.get(d).map(|a| (a.mean(), a.count)) != Some((mean, count)) {
                    mismatches += 1;
                }
            }
        }
    }
    out.push(CheckOutcome {
        name: "clustering matches brute force on 20 small graphs".into(),
        passed: mismatches == 0,
        detail: format!("{checked} values checked, {mismatches} mismatches"),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        for c in selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
