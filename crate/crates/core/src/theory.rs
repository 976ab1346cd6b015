//! Estimators that compare generated graphs against the model's
//! asymptotic behaviour: degree trajectories, the in-degree tail exponent,
//! out-degree statistics and `c/d` fits of clustering curves.

use crate::error::{Result, SpaError};
use crate::graph::{SpaGraph, VertexId};

/// In-degree of one vertex sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySeries {
    pub v: VertexId,
    /// `(t, deg⁻(v, t))` with strictly increasing `t`.
    pub checkpoints: Vec<(usize, usize)>,
}

/// Result of a least-squares line fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Ordinary least squares of `y` on `x`.
pub fn ols(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 2 {
        return Err(SpaError::InsufficientData(format!("{n} points, need >= 2")));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(SpaError::InsufficientData("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept: my - slope * mx,
        r_squared,
        n_points: n,
    })
}

/// `deg⁻(v, t)` at each checkpoint, reconstructed from edge timestamps.
pub fn degree_trajectory(graph: &SpaGraph, v: VertexId, grid: &[usize]) -> Result<TrajectorySeries> {
    graph.check_vertex(v)?;
    let mut checkpoints = Vec::with_capacity(grid.len());
    let mut prev = None;
    for &t in grid {
        if t < v {
            return Err(SpaError::InvalidParameter(format!(
                "checkpoint {t} precedes the birth of vertex {v}"
            )));
        }
        if t > graph.n() {
            return Err(SpaError::InvalidParameter(format!(
                "checkpoint {t} beyond n = {}",
                graph.n()
            )));
        }
        if prev.is_some_and(|p| t <= p) {
            return Err(SpaError::InvalidParameter("checkpoints must increase".into()));
        }
        prev = Some(t);
        checkpoints.push((t, graph.in_degree_at(v, t)));
    }
    Ok(TrajectorySeries { v, checkpoints })
}

/// `points` integers spaced geometrically from `from` to `to`, deduplicated.
pub fn geometric_grid(from: usize, to: usize, points: usize) -> Vec<usize> {
    let from = from.max(1);
    if to <= from || points < 2 {
        return vec![to.max(from)];
    }
    let ratio = (to as f64 / from as f64).powf(1.0 / (points - 1) as f64);
    let mut grid: Vec<usize> = (0..points)
        .map(|i| (from as f64 * ratio.powi(i as i32)).round() as usize)
        .map(|t| t.clamp(from, to))
        .collect();
    grid[points - 1] = to;
    grid.dedup();
    grid
}

/// Time after which the degree of a vertex with final in-degree `k` is
/// expected to follow its power-law trajectory,
/// `n (omega ln n / k)^(1/(pA1))`, clamped to `[1, n]`.
pub fn concentration_time(n: usize, k: usize, growth_exponent: f64, omega: f64) -> usize {
    if k == 0 || growth_exponent <= 0.0 {
        return n;
    }
    let nf = n as f64;
    let t = nf * (omega * nf.ln() / k as f64).powf(1.0 / growth_exponent);
    (t.ceil() as usize).clamp(1, n)
}

/// Default checkpoints for a vertex: 20 geometric points from
/// `max(T_v, 10, v)` to `n`, with `T_v` from [`concentration_time`] at `omega = 1`.
pub fn default_trajectory_grid(graph: &SpaGraph, v: VertexId, growth_exponent: f64) -> Vec<usize> {
    let n = graph.n();
    let tv = concentration_time(n, graph.in_degree(v), growth_exponent, 1.0);
    geometric_grid(tv.max(10).max(v).min(n), n, 20)
}

/// Least-squares slope of `ln deg` against `ln t` over checkpoints with
/// positive degree. Estimates `pA1`.
pub fn trajectory_exponent(series: &TrajectorySeries) -> Result<FitResult> {
    let pts: Vec<_> = series
        .checkpoints
        .iter()
        .filter(|&&(_, d)| d >= 1)
        .map(|&(t, d)| ((t as f64).ln(), (d as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(SpaError::InsufficientData(format!(
            "{} checkpoints with positive degree, need >= 2",
            pts.len()
        )));
    }
    ols(&pts)
}

/// Discrete Hill estimator of the tail exponent,
/// `1 + n_tail / Σ ln(d_i / (d_min - 1/2))` over `d_i >= d_min`.
pub fn powerlaw_exponent(degrees: &[usize], d_min: usize) -> Result<f64> {
    if d_min == 0 {
        return Err(SpaError::InvalidParameter("d_min must be >= 1".into()));
    }
    let base = d_min as f64 - 0.5;
    let (count, sum) = degrees
        .iter()
        .filter(|&&d| d >= d_min)
        .fold((0usize, 0.0), |(c, s), &d| (c + 1, s + (d as f64 / base).ln()));
    if count < 50 {
        return Err(SpaError::InsufficientData(format!(
            "{count} observations >= {d_min}, need >= 50"
        )));
    }
    Ok(1.0 + count as f64 / sum)
}

/// Out-degree summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutDegreeStats {
    pub mean: f64,
    pub max: usize,
}

pub fn out_degree_stats(graph: &SpaGraph) -> Result<OutDegreeStats> {
    if graph.is_empty() {
        return Err(SpaError::InsufficientData("empty graph".into()));
    }
    let max = (1..=graph.n()).map(|v| graph.out_degree(v)).max().unwrap_or(0);
    Ok(OutDegreeStats {
        mean: graph.edge_count() as f64 / graph.n() as f64,
        max,
    })
}

/// Fit of a clustering curve to an inverse law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseLawFit {
    /// Log-log least squares; the slope estimates -1 under a `c/d` law.
    pub loglog: FitResult,
    /// Least-squares `c` for `C(d) = c/d` on the raw values.
    pub c: f64,
}

/// Fits `C(d)` over `d` in `[d_lo, d_hi]`. Points with `C(d) <= 0` are
/// skipped in the log-log fit.
pub fn fit_inverse_law(points: &[(usize, f64)], d_lo: usize, d_hi: usize) -> Result<InverseLawFit> {
    let selected: Vec<_> = points
        .iter()
        .filter(|&&(d, c)| d >= d_lo && d <= d_hi && d > 0 && c > 0.0)
        .copied()
        .collect();
    if selected.len() < 5 {
        return Err(SpaError::InsufficientData(format!(
            "{} points in [{d_lo}, {d_hi}], need >= 5",
            selected.len()
        )));
    }
    let logs: Vec<_> = selected
        .iter()
        .map(|&(d, c)| ((d as f64).ln(), c.ln()))
        .collect();
    let loglog = ols(&logs)?;
    let (num, den) = selected.iter().fold((0.0, 0.0), |(num, den), &(d, c)| {
        let inv = 1.0 / d as f64;
        (num + c * inv, den + inv * inv)
    });
    Ok(InverseLawFit { loglog, c: num / den })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_trajectory() {
        let n = 100_000f64;
        let checkpoints = (0..10)
            .map(|i| {
                let t = 1000.0 * 1.6f64.powi(i);
                (t, 3.0 * (t / n).powf(0.7))
            })
            .collect::<Vec<_>>();
        let pts: Vec<_> = checkpoints.iter().map(|(t, d)| (t.ln(), d.ln())).collect();
        let fit = ols(&pts).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_degree_has_zero_slope() {
        let s = TrajectorySeries {
            v: 1,
            checkpoints: vec![(10, 4), (20, 4), (40, 4)],
        };
        let fit = trajectory_exponent(&s).unwrap();
        assert_eq!(fit.slope, 0.0);
    }

    #[test]
    fn trajectory_needs_two_positive_points() {
        let s = TrajectorySeries {
            v: 1,
            checkpoints: vec![(10, 0), (20, 0), (40, 3)],
        };
        assert!(trajectory_exponent(&s).is_err());
    }

    #[test]
    fn geometric_grid_shape() {
        let g = geometric_grid(10, 100_000, 20);
        assert_eq!(g[0], 10);
        assert_eq!(*g.last().unwrap(), 100_000);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(geometric_grid(5, 5, 20), vec![5]);
    }

    #[test]
    fn hill_degenerate_tail() {
        let degrees = vec![10usize; 100];
        // All observations at d_min: ln(10/9.5) > 0, finite but large.
        let a = powerlaw_exponent(&degrees, 10).unwrap();
        assert!(a > 10.0);
        assert!(powerlaw_exponent(&degrees[..20], 10).is_err());
        assert!(powerlaw_exponent(&degrees, 0).is_err());
    }

    #[test]
    fn inverse_law_on_exact_data() {
        let pts: Vec<_> = (2..40).map(|d| (d, 10.0 / d as f64)).collect();
        let fit = fit_inverse_law(&pts, 2, 40).unwrap();
        assert!((fit.loglog.slope + 1.0).abs() < 1e-12);
        assert!((fit.c - 10.0).abs() < 1e-12);
        assert!((fit.loglog.r_squared - 1.0).abs() < 1e-12);

        let flat: Vec<_> = (2..40).map(|d| (d, 0.3)).collect();
        assert!(fit_inverse_law(&flat, 2, 40).unwrap().loglog.slope.abs() < 1e-12);
        assert!(fit_inverse_law(&pts, 2, 5).is_err());
    }

    #[test]
    fn inverse_law_slope_invariant_to_scaling() {
        let pts: Vec<_> = (5..60).map(|d| (d, 1.0 / (d as f64).powf(0.8) + 0.01)).collect();
        let scaled: Vec<_> = pts.iter().map(|&(d, c)| (d, 7.5 * c)).collect();
        let a = fit_inverse_law(&pts, 5, 60).unwrap();
        let b = fit_inverse_law(&scaled, 5, 60).unwrap();
        assert!((a.loglog.slope - b.loglog.slope).abs() < 1e-12);
    }

    #[test]
    fn concentration_time_bounds() {
        assert_eq!(concentration_time(1000, 0, 0.7, 1.0), 1000);
        let t = concentration_time(100_000, 3000, 0.7, 1.0);
        assert!(t > 1 && t < 1000, "{t}");
    }
}
