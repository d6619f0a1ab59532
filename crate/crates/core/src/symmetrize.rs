//! Orbit-infimum symmetrization `phi(x) = inf { psi(g x) : g in G }`.
//!
//! Over a compact group the infimum is attained, so `phi(x) = psi(g_x x)`
//! for some witness `g_x`. We compute the minimum over an [`EpsNet`]; for
//! parameterized groups the gap to the true infimum is bounded by
//! `L_psi * L_act * r * (1 + |x|)` where `r` is the net's covering radius,
//! and [`SymmetrizedField::refine`] shrinks that gap by local bisection of the
//! parameter grid around the best net elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::ScalarField;
use crate::geometry::{cartesian, Point};
use crate::groups::{sample_net, CompactGroup, EpsNet, GroupElement, ParameterizedGroup};
use crate::parallel::{self, Execution};

/// Hard cap on halvings performed by [`SymmetrizedField::refine`].
pub const MAX_HALVINGS: usize = 60;
/// Number of net elements used as refinement seeds.
pub const MAX_REFINE_SEEDS: usize = 32;

/// A group element attaining the (net) minimum at a queried point.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub value: f64,
    pub element: GroupElement,
    /// Index of the net element. For refined witnesses, the net element the
    /// winning local search started from.
    pub net_index: usize,
    /// Chart parameters of `element`, when it came from a chart.
    pub params: Option<Vec<f64>>,
}

/// `x -> min_{g in net} base(g x)`, ties broken by lowest net index.
#[derive(Debug, Clone)]
pub struct SymmetrizedField {
    base: ScalarField,
    group: CompactGroup,
    net: Arc<EpsNet>,
    epsilon: f64,
}

pub fn symmetrize(base: ScalarField, group: &CompactGroup, epsilon: f64) -> Result<SymmetrizedField> {
    if base.dim() != group.dim() {
        return Err(Error::DimensionMismatch {
            expected: group.dim(),
            found: base.dim(),
        });
    }
    let net = sample_net(group, epsilon)?;
    Ok(SymmetrizedField {
        base,
        group: group.clone(),
        net: Arc::new(net),
        epsilon,
    })
}

impl SymmetrizedField {
    pub fn base(&self) -> &ScalarField {
        &self.base
    }

    pub fn group(&self) -> &CompactGroup {
        &self.group
    }

    pub fn net(&self) -> &EpsNet {
        &self.net
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// The same base and group over a net built for a different epsilon.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<SymmetrizedField> {
        symmetrize(self.base.clone(), &self.group, epsilon)
    }

    /// Minimum value and the first net index attaining it.
    fn scan(&self, x: &[f64]) -> (f64, usize) {
        let mut image = vec![0.0; x.len()];
        let mut best = (f64::INFINITY, 0);
        for (i, g) in self.net.elements().iter().enumerate() {
            g.act_into(x, &mut image);
            let v = self.base.eval_slice(&image);
            if v < best.0 {
                best = (v, i);
            }
        }
        best
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        Ok(self.scan(x.coords()).0)
    }

    pub fn eval_with_witness(&self, x: &Point) -> Result<Witness> {
        x.check_dim(self.dim())?;
        Ok(self.witness_at(x.coords()))
    }

    fn witness_at(&self, x: &[f64]) -> Witness {
        let (value, net_index) = self.scan(x);
        Witness {
            value,
            element: self.net.elements()[net_index].clone(),
            net_index,
            params: self.net.params(net_index).map(<[f64]>::to_vec),
        }
    }

    pub fn eval_batch(&self, points: &[Point], exec: Execution) -> Result<Vec<f64>> {
        for p in points {
            p.check_dim(self.dim())?;
        }
        Ok(parallel::map(exec, points, |p| self.scan(p.coords()).0))
    }

    pub fn witness_batch(&self, points: &[Point], exec: Execution) -> Result<Vec<Witness>> {
        for p in points {
            p.check_dim(self.dim())?;
        }
        Ok(parallel::map(exec, points, |p| self.witness_at(p.coords())))
    }

    /// Upper bound on `eval(x) - inf_G base(g x)`: zero for finite groups,
    /// `L_psi * L_act * covering_radius * (1 + |x|)` otherwise.
    pub fn error_bound(&self, x: &Point) -> Result<f64> {
        x.check_dim(self.dim())?;
        self.bound_for_radius(x.sup_norm(), self.net.covering_radius())
    }

    fn bound_for_radius(&self, norm: f64, radius: f64) -> Result<f64> {
        let action = match self.net.action_lipschitz() {
            None => return Ok(0.0),
            Some(a) => a,
        };
        let base = self.base.lipschitz().ok_or_else(|| {
            Error::Capability("error bound needs a Lipschitz constant on the base field".into())
        })?;
        Ok(base * action * radius * (1.0 + norm))
    }

    /// `L_psi * C_G`, with `C_G` the largest sup-norm operator norm over the net.
    pub fn lipschitz_bound(&self) -> Option<f64> {
        self.base
            .lipschitz()
            .map(|l| l * self.net.max_operator_norm())
    }

    /// The symmetrized field as a plain [`ScalarField`].
    pub fn to_scalar_field(&self) -> ScalarField {
        let me = self.clone();
        let mut field = ScalarField::new(self.dim(), move |x| me.scan(x).0);
        if let Some(l) = self.lipschitz_bound() {
            field = field.with_lipschitz(l);
        }
        if let Some((lo, hi)) = self.base.bounds() {
            field = field.with_bounds(lo, hi);
        }
        field
    }

    /// Tightens the witness at `x` until the certified gap is at most `target`.
    ///
    /// Starting from the net elements whose values lie within the net's error
    /// bound of the minimum, the parameter grid is halved repeatedly inside a
    /// window of one old spacing around each running argmin. Values never
    /// increase. The certificate assumes the true minimizer stays in the cell
    /// of a running argmin, which holds when `g -> base(g x)` is unimodal near
    /// its minimum. Finite groups return [`Self::eval_with_witness`].
    pub fn refine(&self, x: &Point, target: f64) -> Result<Witness> {
        x.check_dim(self.dim())?;
        if !(target > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "refinement target must be positive, got {target}"
            )));
        }
        let initial = self.witness_at(x.coords());
        let CompactGroup::Parameterized(chart) = &self.group else {
            return Ok(initial);
        };
        let norm = x.sup_norm();
        let initial_bound = self.bound_for_radius(norm, self.net.covering_radius())?;
        // Linear actions fix the origin, so its orbit is a single point.
        if initial_bound <= target || x.is_origin() {
            return Ok(initial);
        }

        let mut seeds: Vec<(f64, usize)> = {
            let mut image = vec![0.0; x.dim()];
            self.net
                .elements()
                .iter()
                .enumerate()
                .filter(|(i, _)| self.net.params(*i).is_some())
                .map(|(i, g)| {
                    g.act_into(x.coords(), &mut image);
                    (self.base.eval_slice(&image), i)
                })
                .filter(|(v, _)| *v <= initial.value + initial_bound)
                .collect()
        };
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        seeds.truncate(MAX_REFINE_SEEDS);

        let mut best = initial;
        let mut searches: Vec<LocalSearch> = seeds
            .iter()
            .map(|&(value, i)| LocalSearch {
                seed: i,
                center: self.net.params(i).expect("seeds carry params").to_vec(),
                value,
            })
            .collect();
        let mut spacing = self.net.spacing().to_vec();
        let mut image = vec![0.0; x.dim()];
        for halving in 1..=MAX_HALVINGS {
            for h in spacing.iter_mut() {
                *h /= 2.0;
            }
            for search in searches.iter_mut() {
                search.step(chart, &self.base, x.coords(), &spacing, &mut image)?;
                if search.value < best.value {
                    let element = chart.element(&search.center)?;
                    best = Witness {
                        value: search.value,
                        element,
                        net_index: search.seed,
                        params: Some(search.center.clone()),
                    };
                }
            }
            let radius = spacing.iter().fold(0.0_f64, |m, h| m.max(h / 2.0));
            let bound = self.bound_for_radius(norm, radius)?;
            if bound <= target {
                return Ok(best);
            }
            if halving == MAX_HALVINGS {
                return Err(Error::CappedRefinement {
                    best: Box::new(best),
                    bound,
                    target,
                    halvings: halving,
                });
            }
        }
        unreachable!("loop returns on its last halving")
    }
}

struct LocalSearch {
    seed: usize,
    center: Vec<f64>,
    value: f64,
}

impl LocalSearch {
    /// Evaluates `center + j * h` for `j in -2..=2` on each axis (clamped to
    /// the box) and moves to the lowest value found.
    fn step(
        &mut self,
        chart: &ParameterizedGroup,
        base: &ScalarField,
        x: &[f64],
        spacing: &[f64],
        image: &mut [f64],
    ) -> Result<()> {
        let axes: Vec<Vec<f64>> = self
            .center
            .iter()
            .zip(spacing)
            .map(|(&c, &h)| {
                if h == 0.0 {
                    vec![c]
                } else {
                    (-2..=2).map(|j| c + j as f64 * h).collect()
                }
            })
            .collect();
        for mut theta in cartesian(&axes) {
            chart.clamp(&mut theta);
            let g = chart.element(&theta)?;
            g.act_into(x, image);
            let v = base.eval_slice(image);
            if v < self.value {
                self.value = v;
                self.center = theta;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    /// Brute-force minimum of `(R(theta) x)_1` over a fine angle grid.
    fn angle_grid_min(x: &[f64], step: f64) -> f64 {
        let n = (2.0 * PI / step).ceil() as usize;
        (0..=n)
            .map(|k| {
                let t = k as f64 * step;
                t.cos() * x[0] - t.sin() * x[1]
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn trivial_group_is_identity_operator() {
        let psi = ScalarField::new(2, |x| x[0].sin() + x[1] * x[1]);
        let phi = symmetrize(psi.clone(), &CompactGroup::trivial(2), 1.0).unwrap();
        for x in [p(&[0.3, -1.0]), p(&[5.0, 2.0])] {
            assert_eq!(phi.eval(&x).unwrap(), psi.eval(&x).unwrap());
            let w = phi.eval_with_witness(&x).unwrap();
            assert!(w.element.is_identity(0.0));
        }
    }

    #[test]
    fn sign_group_example() {
        let psi = ScalarField::linear(vec![1.0, 0.0], 2.0);
        let phi = symmetrize(psi, &CompactGroup::sign(2), 0.1).unwrap();
        assert_eq!(phi.eval(&p(&[3.0, 5.0])).unwrap(), -1.0);
    }

    #[test]
    fn so2_matches_closed_form() {
        let oracle_34 = angle_grid_min(&[3.0, 4.0], 1e-5);
        assert!((oracle_34 + 5.0).abs() < 1e-8, "oracle cross-check {oracle_34}");
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 1e-3).unwrap();
        let v = phi.eval(&p(&[3.0, 4.0])).unwrap();
        assert!((v + 5.0).abs() <= 1e-3, "{v}");
        assert!(v >= -5.0 - 1e-12);
    }

    #[test]
    fn witness_examples() {
        let c4 = CompactGroup::cyclic_rotations(4).unwrap();
        let phi = symmetrize(ScalarField::coordinate(2, 0), &c4, 1.0).unwrap();
        let w = phi.eval_with_witness(&p(&[1.0, 0.0])).unwrap();
        assert_eq!(w.value, -1.0);
        assert_eq!(w.net_index, 2);
        assert!(w.element.approx_eq(&GroupElement::rotation(PI), 1e-12));

        let even = ScalarField::new(2, |x| x[0] * x[0] + x[1].abs());
        let phi = symmetrize(even.clone(), &CompactGroup::sign(2), 1.0).unwrap();
        let x = p(&[1.5, -2.0]);
        let w = phi.eval_with_witness(&x).unwrap();
        assert_eq!(w.net_index, 0);
        assert_eq!(w.value, even.eval(&x).unwrap());
    }

    #[test]
    fn witness_reproduces_value_exactly() {
        let psi = ScalarField::new(2, |x| (x[0] - 0.3).powi(2) + x[1].sin()).with_lipschitz(10.0);
        let phi = symmetrize(psi.clone(), &CompactGroup::so2(), 1e-2).unwrap();
        for x in [p(&[0.4, 1.1]), p(&[-2.0, 0.7]), p(&[0.0, 0.0])] {
            let w = phi.eval_with_witness(&x).unwrap();
            assert_eq!(psi.eval(&w.element.act(&x).unwrap()).unwrap(), w.value);
            assert_eq!(phi.eval(&x).unwrap(), w.value);
        }
    }

    #[test]
    fn error_bound_examples() {
        let finite = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::dihedral4(), 0.5).unwrap();
        assert_eq!(finite.error_bound(&p(&[3.0, 1.0])).unwrap(), 0.0);

        // Box of width 0.04 with epsilon 0.03 gives spacing 0.02, radius 0.01.
        let chart: crate::groups::Chart = Arc::new(|t: &[f64]| {
            let (s, c) = t[0].sin_cos();
            nalgebra::DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        });
        let arc = CompactGroup::Parameterized(
            ParameterizedGroup::new("arc", vec![0.0], vec![0.04], 2, 1.0, chart).unwrap(),
        );
        let phi = symmetrize(ScalarField::coordinate(2, 0).with_lipschitz(1.0), &arc, 0.03).unwrap();
        assert!((phi.net().covering_radius() - 1e-2).abs() < 1e-15);
        let bound = phi.error_bound(&p(&[4.0, -1.0])).unwrap();
        assert!((bound - 0.05).abs() < 1e-12, "{bound}");

        let no_lipschitz = symmetrize(ScalarField::new(2, |x| x[0]), &CompactGroup::so2(), 0.1).unwrap();
        assert!(matches!(no_lipschitz.error_bound(&p(&[1.0, 1.0])), Err(Error::Capability(_))));
    }

    #[test]
    fn error_bound_is_sound_for_so2() {
        let x = [3.0, 4.0];
        for eps in [1e-1, 1e-2, 1e-3] {
            let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), eps).unwrap();
            let v = phi.eval(&p(&x)).unwrap();
            assert!(v - (-5.0) <= phi.error_bound(&p(&x)).unwrap());
        }
    }

    #[test]
    fn refine_examples() {
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 1e-2).unwrap();
        let x = p(&[0.0, 7.0]);
        let w = phi.refine(&x, 1e-6).unwrap();
        assert!((w.value + 7.0).abs() <= 1e-6, "{}", w.value);
        assert!(w.value <= phi.eval(&x).unwrap());
        let theta = w.params.as_ref().unwrap()[0];
        assert_eq!(ScalarField::coordinate(2, 0).eval(&w.element.act(&x).unwrap()).unwrap(), w.value);
        assert!((theta - PI / 2.0).abs() < 1e-3);

        let loose = phi.refine(&x, 1e3).unwrap();
        assert_eq!(loose, phi.eval_with_witness(&x).unwrap());

        let origin = phi.refine(&Point::origin(2), 1e-12).unwrap();
        assert_eq!(origin.value, 0.0);
    }

    #[test]
    fn refine_handles_minimizer_near_wraparound() {
        // Minimizer of (R(t) x)_1 for x = (-1, 0.001) sits just below 2 pi.
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 1e-2).unwrap();
        let x = p(&[-1.0, 1e-3]);
        let w = phi.refine(&x, 1e-9).unwrap();
        let exact = -(1.0f64 + 1e-6).sqrt();
        assert!((w.value - exact).abs() <= 1e-9, "{} vs {exact}", w.value);
    }

    #[test]
    fn refine_on_finite_group_is_noop() {
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::dihedral4(), 1.0).unwrap();
        let x = p(&[0.5, -2.0]);
        assert_eq!(phi.refine(&x, 1e-9).unwrap(), phi.eval_with_witness(&x).unwrap());
        assert!(phi.refine(&x, 0.0).is_err());
    }

    #[test]
    fn refine_reports_cap() {
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 0.5).unwrap();
        let err = phi.refine(&p(&[1.0, 1.0]), 1e-300).unwrap_err();
        match err {
            Error::CappedRefinement { best, halvings, .. } => {
                assert_eq!(halvings, MAX_HALVINGS);
                assert!((best.value + 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_checks() {
        assert!(symmetrize(ScalarField::coordinate(3, 0), &CompactGroup::so2(), 0.1).is_err());
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 0.1).unwrap();
        assert!(phi.eval(&p(&[1.0])).is_err());
        assert!(phi.eval_with_witness(&p(&[1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn batch_modes_agree() {
        let phi = symmetrize(ScalarField::coordinate(2, 0), &CompactGroup::so2(), 1e-2).unwrap();
        let pts: Vec<Point> = (0..50).map(|i| p(&[i as f64 * 0.1 - 2.0, 1.0 - i as f64 * 0.03])).collect();
        let a = phi.eval_batch(&pts, Execution::Sequential).unwrap();
        let b = phi.eval_batch(&pts, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let w = phi.witness_batch(&pts, Execution::Parallel).unwrap();
        assert!(w.iter().zip(&a).all(|(w, v)| w.value == *v));
    }

    #[test]
    fn scalar_field_view_carries_lipschitz() {
        let phi = symmetrize(ScalarField::coordinate(2, 1), &CompactGroup::dihedral4(), 1.0).unwrap();
        let f = phi.to_scalar_field();
        assert_eq!(f.lipschitz(), Some(1.0));
        let x = p(&[2.0, -3.0]);
        assert_eq!(f.eval(&x).unwrap(), phi.eval(&x).unwrap());
    }
}
