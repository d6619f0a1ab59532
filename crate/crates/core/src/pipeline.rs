//! Invariant extension from a closed invariant set `A` to a locally closed
//! domain `X`.
//!
//! When `X` has a non-empty frontier it is first made closed by the map
//! `x -> (x, 1 / D(x))`, where `D` is the group-invariant distance to the
//! frontier. Because `D` is invariant, the embedding is equivariant for the
//! action `g (x, t) = (g x, t)`. The data is then extended by McShane in the
//! embedded space and symmetrized over the group.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extension::{estimate_lipschitz, mcshane_extend, LabeledSample, ScalarField};
use crate::geometry::{check_dim, sup_distance_slices, ClosedSet, Point};
use crate::groups::{sample_net, CompactGroup, EpsNet};
use crate::parallel::{self, Execution};
use crate::symmetrize::{symmetrize, SymmetrizedField, Witness};

/// Points whose frontier gauge is at or below this are treated as frontier points.
pub const MIN_GAUGE: f64 = 1e-30;
/// Tolerance for orbit matching when validating invariance of the data.
pub const INVARIANCE_TOLERANCE: f64 = 1e-9;

pub type MembershipHint = Arc<dyn Fn(&Point) -> bool + Send + Sync>;

/// A locally closed `X`, described by its frontier `closure(X) \ X`.
#[derive(Clone)]
pub struct LocallyClosedDomain {
    ambient_dim: usize,
    frontier: Option<ClosedSet>,
    membership_hint: Option<MembershipHint>,
}

impl fmt::Debug for LocallyClosedDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocallyClosedDomain")
            .field("ambient_dim", &self.ambient_dim)
            .field("frontier", &self.frontier)
            .field("membership_hint", &self.membership_hint.is_some())
            .finish()
    }
}

impl LocallyClosedDomain {
    /// A closed domain (empty frontier), e.g. all of `R^n`.
    pub fn closed(ambient_dim: usize) -> Self {
        LocallyClosedDomain {
            ambient_dim,
            frontier: None,
            membership_hint: None,
        }
    }

    pub fn with_frontier(frontier: ClosedSet) -> Self {
        LocallyClosedDomain {
            ambient_dim: frontier.dim(),
            frontier: Some(frontier),
            membership_hint: None,
        }
    }

    /// Predicate consulted before evaluation; points it rejects produce an error.
    pub fn with_membership_hint(mut self, hint: MembershipHint) -> Self {
        self.membership_hint = Some(hint);
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn frontier(&self) -> Option<&ClosedSet> {
        self.frontier.as_ref()
    }

    pub fn frontier_gauge(&self, group: &CompactGroup, epsilon: f64) -> Result<ScalarField> {
        let frontier = self.frontier.as_ref().ok_or_else(|| {
            Error::Capability("domain has an empty frontier; no embedding is needed".into())
        })?;
        invariant_frontier_gauge(frontier, group, epsilon)
    }
}

/// `D(x) = min_{g in net} dist(frontier, g x)`: invariant, `C_G`-Lipschitz,
/// and zero exactly on the orbit-saturation of the frontier.
pub fn invariant_frontier_gauge(
    frontier: &ClosedSet,
    group: &CompactGroup,
    epsilon: f64,
) -> Result<ScalarField> {
    Ok(crate::zeroset::invariant_zero_function(frontier, group, epsilon)?.to_scalar_field())
}

/// `x -> (x, 1 / gauge(x))`.
pub fn embed(x: &Point, gauge: &ScalarField) -> Result<Point> {
    let d = gauge.eval(x)?;
    if !(d > MIN_GAUGE) {
        return Err(Error::FrontierProximity { gauge: d });
    }
    let mut coords = x.coords().to_vec();
    coords.push(1.0 / d);
    Ok(Point::from_vec_unchecked(coords))
}

/// Checks that the net maps every sample onto a sample carrying the same
/// value, reporting the worst offending orbit pair.
pub fn check_sample_invariance(data: &LabeledSample, net: &EpsNet) -> Result<()> {
    check_dim(net.dim(), data.dim())?;
    let points = data.points();
    let values = data.values();
    let per_point: Vec<Option<Error>> = parallel::map_indexed(Execution::Parallel, points.len(), |i| {
        let mut image = vec![0.0; data.dim()];
        let mut worst: Option<(bool, f64, usize, Option<usize>)> = None;
        for (e, g) in net.elements().iter().enumerate() {
            g.act_into(points[i].coords(), &mut image);
            let (j, dist) = points
                .iter()
                .enumerate()
                .map(|(j, p)| (j, sup_distance_slices(&image, p.coords())))
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            let violation = if dist > INVARIANCE_TOLERANCE {
                Some((true, dist, e, None))
            } else {
                let diff = (values[i] - values[j]).abs();
                (diff > INVARIANCE_TOLERANCE).then_some((false, diff, e, Some(j)))
            };
            if let Some(v) = violation {
                let worse = match &worst {
                    None => true,
                    Some(w) => (v.0, v.1) > (w.0, w.1),
                };
                if worse {
                    worst = Some(v);
                }
            }
        }
        worst.map(|(_, discrepancy, element, partner)| Error::InvarianceViolation {
            point: i,
            element,
            partner,
            discrepancy,
        })
    });
    // Ties keep the lowest sample index.
    let worst = per_point
        .into_iter()
        .flatten()
        .reduce(|best, cur| if severity(&cur) > severity(&best) { cur } else { best });
    match worst {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

fn severity(err: &Error) -> (bool, f64) {
    match err {
        Error::InvarianceViolation { partner, discrepancy, .. } => (partner.is_none(), *discrepancy),
        _ => (false, 0.0),
    }
}

/// A group-invariant continuous extension of invariant data.
#[derive(Debug, Clone)]
pub struct InvariantExtension {
    field: SymmetrizedField,
    gauge: Option<ScalarField>,
    domain: LocallyClosedDomain,
}

impl InvariantExtension {
    /// The symmetrized field, on `R^(n+1)` when embedded.
    pub fn field(&self) -> &SymmetrizedField {
        &self.field
    }

    pub fn is_embedded(&self) -> bool {
        self.gauge.is_some()
    }

    pub fn frontier_gauge(&self) -> Option<&ScalarField> {
        self.gauge.as_ref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim
    }

    /// The point at which the symmetrized field is evaluated for `x`.
    pub fn lift(&self, x: &Point) -> Result<Point> {
        x.check_dim(self.domain.ambient_dim)?;
        if let Some(hint) = &self.domain.membership_hint {
            if !hint(x) {
                return Err(Error::InvalidArgument(format!("{x} is outside the domain")));
            }
        }
        match &self.gauge {
            Some(gauge) => embed(x, gauge),
            None => Ok(x.clone()),
        }
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.field.eval(&self.lift(x)?)
    }

    pub fn eval_with_witness(&self, x: &Point) -> Result<Witness> {
        self.field.eval_with_witness(&self.lift(x)?)
    }

    pub fn error_bound(&self, x: &Point) -> Result<f64> {
        self.field.error_bound(&self.lift(x)?)
    }

    /// Per-point witnesses; points on the frontier yield their own error.
    pub fn witness_batch(&self, points: &[Point], exec: Execution) -> Vec<Result<Witness>> {
        parallel::map(exec, points, |p| self.eval_with_witness(p))
    }

    pub fn eval_batch(&self, points: &[Point], exec: Execution) -> Vec<Result<f64>> {
        parallel::map(exec, points, |p| self.eval(p))
    }
}

/// Extends invariant data on `A` to a group-invariant continuous function on
/// the domain. `lipschitz` defaults to the data's empirical slope (measured
/// in the embedded space when the domain has a frontier).
pub fn extend_invariant(
    domain: &LocallyClosedDomain,
    data: &LabeledSample,
    group: &CompactGroup,
    epsilon: f64,
    lipschitz: Option<f64>,
) -> Result<InvariantExtension> {
    check_dim(domain.ambient_dim, data.dim())?;
    check_dim(domain.ambient_dim, group.dim())?;
    let net = sample_net(group, epsilon)?;
    check_sample_invariance(data, &net)?;

    let (data, group, gauge) = match &domain.frontier {
        None => (data.clone(), group.clone(), None),
        Some(frontier) => {
            let gauge = invariant_frontier_gauge(frontier, group, epsilon)?;
            let lifted = data
                .points()
                .iter()
                .map(|p| embed(p, &gauge))
                .collect::<Result<Vec<_>>>()?;
            let lifted = LabeledSample::new(lifted, data.values().to_vec())?;
            (lifted, group.extend_trivially(), Some(gauge))
        }
    };
    let l = lipschitz.unwrap_or_else(|| estimate_lipschitz(&data));
    let base = mcshane_extend(&data, l)?;
    let field = symmetrize(base, &group, epsilon)?;
    Ok(InvariantExtension {
        field,
        gauge,
        domain: domain.clone(),
    })
}
