//! Scalar fields and the McShane–Whitney Lipschitz extension.
//!
//! Data given on finitely many points of a closed set `A` is extended to all
//! of `R^n` by the upper McShane envelope
//! `F(x) = min_i (v_i + L |x - p_i|)`, clipped to `[min v, max v]`.
//! The result agrees with the data on `A`, is `L`-Lipschitz in the sup-norm,
//! and is not group-invariant in general.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, sup_distance_slices, Point};
use crate::parallel::{self, Execution};

/// Points closer than this are ignored when estimating slopes.
pub const COINCIDENT_POINTS: f64 = 1e-12;
/// Values at coincident points may differ by at most this much.
pub const VALUE_CONSISTENCY: f64 = 1e-9;

pub type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real-valued function on `R^n` with optional Lipschitz and range metadata.
#[derive(Clone)]
pub struct ScalarField {
    eval: FieldFn,
    dim: usize,
    lipschitz: Option<f64>,
    bounds: Option<(f64, f64)>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl ScalarField {
    pub fn new<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        assert!(dim > 0, "field dimension must be positive");
        ScalarField {
            eval: Arc::new(f),
            dim,
            lipschitz: None,
            bounds: None,
        }
    }

    /// Declares a sup-norm Lipschitz constant. The caller vouches for it.
    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        assert!(lipschitz >= 0.0 && lipschitz.is_finite(), "Lipschitz constant must be finite and >= 0");
        self.lipschitz = Some(lipschitz);
        self
    }

    pub fn with_bounds(mut self, lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "bounds must satisfy lo <= hi");
        self.bounds = Some((lo, hi));
        self
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        ScalarField::new(dim, move |_| value)
            .with_lipschitz(0.0)
            .with_bounds(value, value)
    }

    /// `x -> x_axis`, 1-Lipschitz in the sup-norm.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        assert!(axis < dim, "axis out of range");
        ScalarField::new(dim, move |x| x[axis]).with_lipschitz(1.0)
    }

    /// `x -> w . x + b`, Lipschitz with constant `sum |w_i|` in the sup-norm.
    pub fn linear(weights: Vec<f64>, bias: f64) -> Self {
        let l1: f64 = weights.iter().map(|w| w.abs()).sum();
        let dim = weights.len();
        ScalarField::new(dim, move |x| {
            weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + bias
        })
        .with_lipschitz(l1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim)?;
        Ok((self.eval)(x.coords()))
    }

    #[inline]
    pub(crate) fn eval_slice(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn eval_batch(&self, points: &[Point], exec: Execution) -> Result<Vec<f64>> {
        for p in points {
            p.check_dim(self.dim)?;
        }
        Ok(parallel::map(exec, points, |p| self.eval_slice(p.coords())))
    }
}

/// Finite data `phi(p_i) = v_i` on points of a closed set.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    points: Vec<Point>,
    values: Vec<f64>,
}

impl LabeledSample {
    pub fn new(points: Vec<Point>, values: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("labeled sample must be non-empty".into()));
        }
        if points.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let dim = points[0].dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("value {i} is not finite")));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = sup_distance_slices(points[i].coords(), points[j].coords());
                if d < COINCIDENT_POINTS && (values[i] - values[j]).abs() > VALUE_CONSISTENCY {
                    return Err(Error::InvalidArgument(format!(
                        "samples {i} and {j} coincide but carry values {} and {}",
                        values[i], values[j]
                    )));
                }
            }
        }
        Ok(LabeledSample { points, values })
    }

    /// Samples `field` on `points`.
    pub fn from_field(points: Vec<Point>, field: &ScalarField) -> Result<Self> {
        let values = points.iter().map(|p| field.eval(p)).collect::<Result<Vec<_>>>()?;
        LabeledSample::new(points, values)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// `(min v, max v)`
    pub fn range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// Largest slope `|v_i - v_j| / |p_i - p_j|` over pairs that are not coincident.
pub fn estimate_lipschitz(data: &LabeledSample) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..data.len() {
        for j in (i + 1)..data.len() {
            let d = sup_distance_slices(data.points[i].coords(), data.points[j].coords());
            if d < COINCIDENT_POINTS {
                continue;
            }
            best = best.max((data.values[i] - data.values[j]).abs() / d);
        }
    }
    best
}

/// Clipped McShane extension with constant `lipschitz`, which must be at
/// least [`estimate_lipschitz`] of the data.
pub fn mcshane_extend(data: &LabeledSample, lipschitz: f64) -> Result<ScalarField> {
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Lipschitz constant must be finite and non-negative, got {lipschitz}"
        )));
    }
    let empirical = estimate_lipschitz(data);
    if lipschitz < empirical {
        return Err(Error::InvalidArgument(format!(
            "Lipschitz constant {lipschitz} is below the data's slope {empirical}"
        )));
    }
    let (lo, hi) = data.range();
    let envelope = Envelope::new(data, lipschitz);
    Ok(ScalarField::new(data.dim(), move |x| envelope.eval(x).clamp(lo, hi))
        .with_lipschitz(lipschitz)
        .with_bounds(lo, hi))
}

/// The unclipped upper envelope `min_i (v_i + L |x - p_i|)`.
struct Envelope {
    dim: usize,
    /// Sample coordinates, row-major.
    coords: Vec<f64>,
    values: Vec<f64>,
    lipschitz: f64,
}

impl Envelope {
    fn new(data: &LabeledSample, lipschitz: f64) -> Self {
        let dim = data.dim();
        let coords = data.points.iter().flat_map(|p| p.coords().iter().copied()).collect();
        Envelope {
            dim,
            coords,
            values: data.values.clone(),
            lipschitz,
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        debug_assert!(check_dim(self.dim, x.len()).is_ok());
        self.coords
            .chunks_exact(self.dim)
            .zip(&self.values)
            .map(|(p, v)| v + self.lipschitz * sup_distance_slices(x, p))
            .fold(f64::INFINITY, f64::min)
    }
}
