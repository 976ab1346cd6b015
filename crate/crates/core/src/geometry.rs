//! Geometry of the unit torus `[0,1)^m`.
//!
//! Distances wrap around in every coordinate. Only the two norms whose
//! ball volume has a simple closed-form inverse are supported: `Linf` in
//! any dimension and `L2` in the plane.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SpaError};

/// Norm used for the torus metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormKind {
    L2,
    #[default]
    Linf,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::L2 => f.write_str("l2"),
            NormKind::Linf => f.write_str("linf"),
        }
    }
}

impl FromStr for NormKind {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(SpaError::InvalidParameter(format!("unknown norm `{other}`"))),
        }
    }
}

/// A point of the torus. Every coordinate lies in `[0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(SpaError::InvalidParameter("point must have dimension >= 1".into()));
        }
        if let Some(c) = coords.iter().find(|c| !(0.0..1.0).contains(*c)) {
            return Err(SpaError::InvalidParameter(format!(
                "coordinate {c} outside [0,1)"
            )));
        }
        Ok(Point(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Extent of a sphere of influence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reach {
    /// The ball has volume 1 and covers the whole torus.
    CoversAll,
    Radius(f64),
}

impl Reach {
    pub fn radius(self) -> Option<f64> {
        match self {
            Reach::CoversAll => None,
            Reach::Radius(r) => Some(r),
        }
    }
}

#[inline]
fn wrapped_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Torus distance between two coordinate slices of the same length.
///
/// The caller guarantees the dimensions agree.
#[inline]
pub(crate) fn torus_distance_unchecked(a: &[f64], b: &[f64], norm: NormKind) -> f64 {
    match norm {
        NormKind::Linf => a
            .iter()
            .zip(b)
            .map(|(x, y)| wrapped_diff(*x, *y))
            .fold(0.0, f64::max),
        NormKind::L2 => a
            .iter()
            .zip(b)
            .map(|(x, y)| {
                let d = wrapped_diff(*x, *y);
                d * d
            })
            .sum::<f64>()
            .sqrt(),
    }
}

/// Distance on the torus: the minimum over all wraparound shifts of the
/// chosen norm of the coordinate difference.
pub fn torus_distance(a: &[f64], b: &[f64], norm: NormKind) -> Result<f64> {
    if a.len() != b.len() {
        return Err(SpaError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(torus_distance_unchecked(a, b, norm))
}

/// Checks that `norm` can be used in dimension `m`.
pub fn check_norm_dim(m: usize, norm: NormKind) -> Result<()> {
    if m == 0 {
        return Err(SpaError::InvalidParameter("dimension must be >= 1".into()));
    }
    if norm == NormKind::L2 && m != 2 {
        return Err(SpaError::Unsupported(format!(
            "L2 norm is only supported for m = 2 (got m = {m})"
        )));
    }
    Ok(())
}

#[inline]
pub(crate) fn reach_unchecked(vol: f64, m: usize, norm: NormKind) -> Reach {
    if vol >= 1.0 {
        return Reach::CoversAll;
    }
    match norm {
        NormKind::Linf => {
            let side = if m == 2 { vol.sqrt() } else { vol.powf(1.0 / m as f64) };
            Reach::Radius(side / 2.0)
        }
        NormKind::L2 => Reach::Radius((vol / PI).sqrt()),
    }
}

/// Radius of the ball of volume `vol`, or [`Reach::CoversAll`] when `vol = 1`.
pub fn radius_from_volume(vol: f64, m: usize, norm: NormKind) -> Result<Reach> {
    if !(vol > 0.0 && vol <= 1.0) {
        return Err(SpaError::InvalidParameter(format!(
            "ball volume {vol} outside (0,1]"
        )));
    }
    check_norm_dim(m, norm)?;
    Ok(reach_unchecked(vol, m, norm))
}

/// Volume of a ball of radius `r` (not capped at 1).
pub fn ball_volume(r: f64, m: usize, norm: NormKind) -> Result<f64> {
    check_norm_dim(m, norm)?;
    Ok(match norm {
        NormKind::Linf => (2.0 * r).powi(m as i32),
        NormKind::L2 => PI * r * r,
    })
}

#[inline]
pub(crate) fn within(center: &[f64], q: &[f64], reach: Reach, norm: NormKind) -> bool {
    match reach {
        Reach::CoversAll => true,
        Reach::Radius(r) => torus_distance_unchecked(center, q, norm) <= r,
    }
}

/// Whether `q` lies in the closed ball of volume `vol` centred at `center`.
pub fn contains(center: &[f64], q: &[f64], vol: f64, norm: NormKind) -> Result<bool> {
    if center.len() != q.len() {
        return Err(SpaError::DimensionMismatch {
            left: center.len(),
            right: q.len(),
        });
    }
    let reach = radius_from_volume(vol, center.len(), norm)?;
    Ok(within(center, q, reach, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_identity_and_wraparound() {
        for norm in [NormKind::L2, NormKind::Linf] {
            assert_eq!(torus_distance(&[0.3, 0.3], &[0.3, 0.3], norm).unwrap(), 0.0);
        }
        let d = torus_distance(&[0.1], &[0.9], NormKind::L2).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
        let d = torus_distance(&[0.05, 0.5], &[0.95, 0.5], NormKind::Linf).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn distance_dimension_mismatch() {
        assert!(matches!(
            torus_distance(&[0.1, 0.2], &[0.1], NormKind::Linf),
            Err(SpaError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn radius_examples() {
        let r = radius_from_volume(PI / 100.0, 2, NormKind::L2).unwrap();
        assert!((r.radius().unwrap() - 0.1).abs() < 1e-12);
        let r = radius_from_volume(0.04, 2, NormKind::Linf).unwrap();
        assert!((r.radius().unwrap() - 0.1).abs() < 1e-12);
        for (m, norm) in [(2, NormKind::L2), (1, NormKind::Linf), (3, NormKind::Linf)] {
            assert_eq!(radius_from_volume(1.0, m, norm).unwrap(), Reach::CoversAll);
        }
    }

    #[test]
    fn radius_errors() {
        assert!(radius_from_volume(0.0, 2, NormKind::Linf).is_err());
        assert!(radius_from_volume(1.5, 2, NormKind::Linf).is_err());
        assert!(radius_from_volume(f64::NAN, 2, NormKind::Linf).is_err());
        assert!(matches!(
            radius_from_volume(0.5, 3, NormKind::L2),
            Err(SpaError::Unsupported(_))
        ));
    }

    #[test]
    fn contains_examples() {
        let c = [0.5, 0.5];
        assert!(contains(&c, &[0.0, 0.99], 1.0, NormKind::L2).unwrap());
        assert!(contains(&c, &[0.5, 0.6], PI * 0.01, NormKind::L2).unwrap());
        assert!(!contains(&c, &[0.5, 0.61], PI * 0.01, NormKind::L2).unwrap());
    }

    #[test]
    fn point_validation() {
        assert!(Point::new(vec![0.2, 0.999]).is_ok());
        assert!(Point::new(vec![1.0]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0..1.0f64, m)
    }

    proptest! {
        #[test]
        fn distance_symmetric_and_bounded(a in point(2), b in point(2), c in point(2)) {
            for norm in [NormKind::L2, NormKind::Linf] {
                let ab = torus_distance(&a, &b, norm).unwrap();
                let ba = torus_distance(&b, &a, norm).unwrap();
                prop_assert_eq!(ab, ba);
                let bc = torus_distance(&b, &c, norm).unwrap();
                let ac = torus_distance(&a, &c, norm).unwrap();
                prop_assert!(ac <= ab + bc + 1e-12);
            }
            prop_assert!(torus_distance(&a, &b, NormKind::Linf).unwrap() <= 0.5);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(wrapped_diff(*x, *y) <= 0.5);
            }
        }

        #[test]
        fn volume_round_trip(v in 1e-9..1.0f64, m in 1usize..5) {
            let r = radius_from_volume(v, m, NormKind::Linf).unwrap().radius().unwrap();
            let back = ball_volume(r, m, NormKind::Linf).unwrap();
            prop_assert!((back - v).abs() <= 1e-12);
            let r = radius_from_volume(v, 2, NormKind::L2).unwrap().radius().unwrap();
            let back = ball_volume(r, 2, NormKind::L2).unwrap();
            prop_assert!((back - v).abs() <= 1e-12);
        }

        #[test]
        fn contains_monotone_in_volume(c in point(2), q in point(2), v1 in 1e-6..1.0f64, v2 in 1e-6..1.0f64) {
            let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
            for norm in [NormKind::L2, NormKind::Linf] {
                if contains(&c, &q, lo, norm).unwrap() {
                    prop_assert!(contains(&c, &q, hi, norm).unwrap());
                }
            }
        }
    }
}
