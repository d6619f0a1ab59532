//! Points, the sup-norm metric, and constructive closed sets.

use std::fmt;

use crate::error::{Error, Result};

/// A point of `R^n` with finite coordinates, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a point needs at least one coordinate".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {i} is not finite ({})",
                coords[i]
            )));
        }
        Ok(Point(coords))
    }

    /// Builds a point from coordinates already known to be finite.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// `|x|_inf`
    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.0)
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        check_dim(expected, self.dim())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
}

pub(crate) fn sup_distance_slices(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

/// `max_i |x_i - y_i|`
pub fn sup_distance(x: &Point, y: &Point) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    Ok(sup_distance_slices(&x.0, &y.0))
}

/// A closed subset of `R^n`, represented constructively so that closedness
/// holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedSet {
    FiniteSample(Vec<Point>),
    /// Axis-aligned box `lower <= x <= upper`.
    Box { lower: Point, upper: Point },
    /// Closed sup-norm ball.
    SupBall { center: Point, radius: f64 },
    Union(Vec<ClosedSet>),
}

impl ClosedSet {
    pub fn finite_sample(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("finite sample must be non-empty".into()))?;
        let dim = first.dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        Ok(ClosedSet::FiniteSample(points))
    }

    pub fn new_box(lower: Point, upper: Point) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        if let Some(i) = (0..lower.dim()).find(|&i| lower.0[i] > upper.0[i]) {
            return Err(Error::InvalidArgument(format!(
                "box lower bound exceeds upper bound on axis {i}"
            )));
        }
        Ok(ClosedSet::Box { lower, upper })
    }

    pub fn sup_ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(ClosedSet::SupBall { center, radius })
    }

    pub fn union(members: Vec<ClosedSet>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("union must have at least one member".into()))?;
        let dim = first.dim();
        for m in &members {
            check_dim(dim, m.dim())?;
        }
        Ok(ClosedSet::Union(members))
    }

    pub fn dim(&self) -> usize {
        match self {
            ClosedSet::FiniteSample(points) => points[0].dim(),
            ClosedSet::Box { lower, .. } => lower.dim(),
            ClosedSet::SupBall { center, .. } => center.dim(),
            ClosedSet::Union(members) => members[0].dim(),
        }
    }

    /// `inf { |x - a| : a in S }`, zero exactly on the set.
    pub fn distance(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        Ok(self.distance_slice(&x.0))
    }

    pub(crate) fn distance_slice(&self, x: &[f64]) -> f64 {
        match self {
            ClosedSet::FiniteSample(points) => points
                .iter()
                .map(|p| sup_distance_slices(x, &p.0))
                .fold(f64::INFINITY, f64::min),
            ClosedSet::Box { lower, upper } => x
                .iter()
                .zip(lower.0.iter().zip(&upper.0))
                .fold(0.0_f64, |m, (&c, (&lo, &hi))| {
                    m.max(lo - c).max(c - hi)
                }),
            ClosedSet::SupBall { center, radius } => {
                (sup_distance_slices(x, &center.0) - radius).max(0.0)
            }
            ClosedSet::Union(members) => members
                .iter()
                .map(|m| m.distance_slice(x))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.distance(x)? == 0.0)
    }

    /// Finite sample of the set: the points themselves for samples, and a
    /// regular grid with spacing at most `resolution` (endpoints included)
    /// for boxes and balls.
    pub fn densify(&self, resolution: f64) -> Result<Vec<Point>> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "densify resolution must be positive, got {resolution}"
            )));
        }
        match self {
            ClosedSet::FiniteSample(points) => Ok(points.clone()),
            ClosedSet::Box { lower, upper } => Ok(box_grid(&lower.0, &upper.0, resolution)),
            ClosedSet::SupBall { center, radius } => {
                let lower: Vec<f64> = center.0.iter().map(|c| c - radius).collect();
                let upper: Vec<f64> = center.0.iter().map(|c| c + radius).collect();
                Ok(box_grid(&lower, &upper, resolution))
            }
            ClosedSet::Union(members) => {
                let mut out = Vec::new();
                for m in members {
                    out.extend(m.densify(resolution)?);
                }
                Ok(out)
            }
        }
    }
}

fn box_grid(lower: &[f64], upper: &[f64], resolution: f64) -> Vec<Point> {
    let axes: Vec<Vec<f64>> = lower
        .iter()
        .zip(upper)
        .map(|(&lo, &hi)| {
            let steps = ((hi - lo) / resolution).ceil().max(0.0) as usize;
            if steps == 0 {
                vec![lo]
            } else {
                (0..=steps)
                    .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
                    .collect()
            }
        })
        .collect();
    cartesian(&axes)
        .into_iter()
        .map(Point::from_vec_unchecked)
        .collect()
}

/// Lexicographic product of per-axis values, last axis fastest.
pub(crate) fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn sup_distance_examples() {
        assert_eq!(sup_distance(&p(&[1.0, 2.0]), &p(&[4.0, -2.0])).unwrap(), 4.0);
        let x = p(&[0.3, -7.0, 2.5]);
        assert_eq!(sup_distance(&x, &x).unwrap(), 0.0);
        assert_eq!(sup_distance(&p(&[0.0]), &p(&[-3.0])).unwrap(), 3.0);
    }

    #[test]
    fn sup_distance_dimension_mismatch() {
        let err = sup_distance(&p(&[0.0]), &p(&[0.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn point_rejects_non_finite() {
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![f64::INFINITY]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn set_distance_examples() {
        let s = ClosedSet::finite_sample(vec![p(&[0.0, 0.0]), p(&[2.0, 0.0])]).unwrap();
        assert_eq!(s.distance(&p(&[1.0, 1.0])).unwrap(), 1.0);
        assert_eq!(s.distance(&p(&[2.0, 0.0])).unwrap(), 0.0);

        let b = ClosedSet::new_box(p(&[-1.0, -1.0]), p(&[1.0, 1.0])).unwrap();
        assert_eq!(b.distance(&p(&[3.0, 0.0])).unwrap(), 2.0);
        assert_eq!(b.distance(&p(&[0.5, -1.0])).unwrap(), 0.0);

        let ball = ClosedSet::sup_ball(p(&[1.0, 1.0]), 0.5).unwrap();
        assert_eq!(ball.distance(&p(&[3.0, 1.25])).unwrap(), 1.5);
        assert!(ball.contains(&p(&[1.5, 0.5])).unwrap());

        let u = ClosedSet::union(vec![b, ball]).unwrap();
        assert_eq!(u.distance(&p(&[0.0, 3.0])).unwrap(), 1.5);
    }

    #[test]
    fn constructors_validate() {
        assert!(ClosedSet::finite_sample(vec![]).is_err());
        assert!(ClosedSet::new_box(p(&[1.0]), p(&[0.0])).is_err());
        assert!(ClosedSet::sup_ball(p(&[0.0]), 0.0).is_err());
        assert!(ClosedSet::union(vec![]).is_err());
        assert!(ClosedSet::finite_sample(vec![p(&[0.0]), p(&[0.0, 1.0])]).is_err());
        let s = ClosedSet::finite_sample(vec![p(&[0.0])]).unwrap();
        assert!(s.distance(&p(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn densify_box_includes_corners() {
        let b = ClosedSet::new_box(p(&[0.0, 0.0]), p(&[1.0, 2.0])).unwrap();
        let pts = b.densify(0.5).unwrap();
        assert_eq!(pts.len(), 3 * 5);
        assert_eq!(pts[0], p(&[0.0, 0.0]));
        assert_eq!(pts.last().unwrap(), &p(&[1.0, 2.0]));
        assert!(pts.iter().all(|q| b.contains(q).unwrap()));
    }
}
