//! Invariant functions with a prescribed zero set.
//!
//! For a closed invariant `A`, `D(x) = inf_g dist(A, g x)` is invariant,
//! continuous, and vanishes exactly on `A`: off `A` the infimum is attained
//! at some `g_x` with `g_x x` outside `A`, so `D(x) > 0`.

use crate::error::{Error, Result};
use crate::extension::ScalarField;
use crate::geometry::{ClosedSet, Point};
use crate::groups::CompactGroup;
use crate::symmetrize::{symmetrize, SymmetrizedField};

/// Largest value of `D` accepted on points of `A`.
pub const ON_SET_TOLERANCE: f64 = 1e-9;
/// Off-set samples must satisfy `D >= OFF_SET_FRACTION * clearance`.
pub const OFF_SET_FRACTION: f64 = 0.4;

pub fn invariant_zero_function(
    set: &ClosedSet,
    group: &CompactGroup,
    epsilon: f64,
) -> Result<SymmetrizedField> {
    let owned = set.clone();
    let distance = ScalarField::new(set.dim(), move |x| owned.distance_slice(x))
        .with_lipschitz(1.0);
    symmetrize(distance, group, epsilon)
}

/// Outcome of [`audit_zero_set`]; violators are listed by sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetAudit {
    pub passed: bool,
    /// `(index, D)` for on-samples with `D > ON_SET_TOLERANCE`.
    pub on_violations: Vec<(usize, f64)>,
    /// `(index, D, clearance)` for off-samples with `D < OFF_SET_FRACTION * clearance`
    /// or a non-positive clearance.
    pub off_violations: Vec<(usize, f64, f64)>,
    pub max_on_value: f64,
    /// Smallest `D / clearance` over off-samples (infinite when there are none).
    pub min_off_ratio: f64,
}

/// Checks `D <= 1e-9` on `on_samples` and `D >= 0.4 * clearance` on each
/// off-sample, where the clearance is the sample's sup-distance to the
/// orbit-saturation of the set.
pub fn audit_zero_set(
    zero_function: &SymmetrizedField,
    on_samples: &[Point],
    off_samples: &[(Point, f64)],
) -> Result<ZeroSetAudit> {
    let mut on_violations = Vec::new();
    let mut max_on_value = 0.0_f64;
    for (i, x) in on_samples.iter().enumerate() {
        let d = zero_function.eval(x)?;
        max_on_value = max_on_value.max(d);
        if !(d <= ON_SET_TOLERANCE) {
            on_violations.push((i, d));
        }
    }
    let mut off_violations = Vec::new();
    let mut min_off_ratio = f64::INFINITY;
    for (i, (x, clearance)) in off_samples.iter().enumerate() {
        let d = zero_function.eval(x)?;
        if !(*clearance > 0.0 && clearance.is_finite()) {
            off_violations.push((i, d, *clearance));
            continue;
        }
        min_off_ratio = min_off_ratio.min(d / clearance);
        if !(d >= OFF_SET_FRACTION * clearance) {
            off_violations.push((i, d, *clearance));
        }
    }
    Ok(ZeroSetAudit {
        passed: on_violations.is_empty() && off_violations.is_empty(),
        on_violations,
        off_violations,
        max_on_value,
        min_off_ratio,
    })
}

impl ZeroSetAudit {
    pub fn describe(&self) -> String {
        let mut out = format!(
            "zero-set audit: {} (max D on set = {:e}, min D/clearance off set = {})\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.max_on_value,
            self.min_off_ratio
        );
        for (i, d) in &self.on_violations {
            out.push_str(&format!("  on-sample {i}: D = {d:e} exceeds {ON_SET_TOLERANCE:e}\n"));
        }
        for (i, d, c) in &self.off_violations {
            out.push_str(&format!(
                "  off-sample {i}: D = {d:e} below {OFF_SET_FRACTION} * clearance {c}\n"
            ));
        }
        out
    }
}

impl std::fmt::Display for ZeroSetAudit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Sup-distance from `x` to the orbit-saturation of a finite sample under a
/// finite group, by enumeration. Used to state clearances.
pub fn finite_orbit_clearance(points: &[Point], group: &CompactGroup, x: &Point) -> Result<f64> {
    let CompactGroup::Finite { elements, .. } = group else {
        return Err(Error::Capability(
            "orbit clearance by enumeration needs a finite group".into(),
        ));
    };
    let mut best = f64::INFINITY;
    for a in points {
        for g in elements {
            best = best.min(crate::geometry::sup_distance(x, &g.act(a)?)?);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn symmetric_pair() -> ClosedSet {
        ClosedSet::finite_sample(vec![p(&[1.0, 0.0]), p(&[-1.0, 0.0])]).unwrap()
    }

    /// `min_theta |R(theta) x|_inf` over a fine angle grid.
    fn rotated_sup_norm_min(x: &[f64], step: f64) -> f64 {
        let n = (2.0 * PI / step).ceil() as usize;
        (0..=n)
            .map(|k| {
                let (s, c) = (k as f64 * step).sin_cos();
                (c * x[0] - s * x[1]).abs().max((s * x[0] + c * x[1]).abs())
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn zero_function_examples() {
        let d = invariant_zero_function(&symmetric_pair(), &CompactGroup::sign(2), 0.1).unwrap();
        assert_eq!(d.eval(&p(&[0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(d.eval(&p(&[1.0, 0.0])).unwrap(), 0.0);

        let oracle = rotated_sup_norm_min(&[1.0, 1.0], 1e-5);
        assert!((oracle - 1.0).abs() < 1e-9, "oracle {oracle}");
        let origin = ClosedSet::finite_sample(vec![Point::origin(2)]).unwrap();
        let d = invariant_zero_function(&origin, &CompactGroup::so2(), 1e-3).unwrap();
        let v = d.eval(&p(&[1.0, 1.0])).unwrap();
        assert!(v >= oracle - 1e-12 && v - oracle <= d.error_bound(&p(&[1.0, 1.0])).unwrap());
    }

    #[test]
    fn audit_examples() {
        let d = invariant_zero_function(&symmetric_pair(), &CompactGroup::sign(2), 0.1).unwrap();
        let pass = audit_zero_set(&d, &[p(&[1.0, 0.0])], &[(p(&[0.0, 0.0]), 1.0)]).unwrap();
        assert!(pass.passed, "{pass}");

        let fail = audit_zero_set(&d, &[], &[(p(&[-1.0, 0.0]), 0.5)]).unwrap();
        assert!(!fail.passed);
        assert_eq!(fail.off_violations, vec![(0, 0.0, 0.5)]);
        assert!(fail.describe().contains("off-sample 0"));

        let origin = ClosedSet::finite_sample(vec![Point::origin(2)]).unwrap();
        let d = invariant_zero_function(&origin, &CompactGroup::so2(), 1e-3).unwrap();
        let clearance = rotated_sup_norm_min(&[1.0, 1.0], 1e-5);
        let audit = audit_zero_set(&d, &[Point::origin(2)], &[(p(&[1.0, 1.0]), clearance)]).unwrap();
        assert!(audit.passed, "{audit}");
    }

    #[test]
    fn audit_flags_on_sample_off_the_set() {
        let d = invariant_zero_function(&symmetric_pair(), &CompactGroup::sign(2), 0.1).unwrap();
        let audit = audit_zero_set(&d, &[p(&[0.0, 0.5])], &[]).unwrap();
        assert_eq!(audit.on_violations.len(), 1);
        let bad_clearance = audit_zero_set(&d, &[], &[(p(&[0.0, 0.0]), 0.0)]).unwrap();
        assert!(!bad_clearance.passed);
    }

    #[test]
    fn saturation_is_the_zero_set_for_non_invariant_input() {
        // {(1,0)} is not sign-invariant; D also vanishes at (-1,0).
        let single = ClosedSet::finite_sample(vec![p(&[1.0, 0.0])]).unwrap();
        let d = invariant_zero_function(&single, &CompactGroup::sign(2), 0.1).unwrap();
        assert_eq!(d.eval(&p(&[-1.0, 0.0])).unwrap(), 0.0);
        let clearance =
            finite_orbit_clearance(&[p(&[1.0, 0.0])], &CompactGroup::sign(2), &p(&[0.0, 2.0])).unwrap();
        assert_eq!(clearance, 2.0);
        assert_eq!(d.eval(&p(&[0.0, 2.0])).unwrap(), clearance);
    }
}
