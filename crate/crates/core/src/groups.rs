//! Compact groups acting linearly on `R^n`, and finite nets over them.
//!
//! A group is either an explicit finite list of matrices, validated for
//! identity, closure and inverses, or a continuous chart from a compact
//! parameter box into invertible matrices. Nets over parameterized groups
//! come from dyadic grids, so halving `epsilon` always yields a superset.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{cartesian, check_dim, sup_distance_slices, sup_norm, Point};

/// Entrywise tolerance for identity, closure and inverse checks.
pub const GROUP_TOLERANCE: f64 = 1e-9;
/// Net elements closer than this (entrywise) are treated as duplicates.
pub const DEDUP_TOLERANCE: f64 = 1e-12;
/// Elements with `|det|` at or below this are rejected as singular.
pub const SINGULAR_DET: f64 = 1e-9;
/// Largest net a parameterized group may produce.
pub const MAX_NET_SIZE: usize = 1 << 22;

/// An invertible matrix acting on points by `x -> M x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: DMatrix<f64>,
}

impl GroupElement {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "group element must be a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("group element has non-finite entries".into()));
        }
        let det = matrix.determinant();
        if det.abs() <= SINGULAR_DET {
            return Err(Error::InvalidArgument(format!(
                "group element is singular (det = {det:e})"
            )));
        }
        Ok(GroupElement { matrix })
    }

    /// Row-major construction.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(dim: usize) -> Self {
        GroupElement {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Counter-clockwise rotation of the plane.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        GroupElement {
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn act(&self, x: &Point) -> Result<Point> {
        check_dim(self.dim(), x.dim())?;
        let mut out = vec![0.0; x.dim()];
        self.act_into(x.coords(), &mut out);
        Ok(Point::from_vec_unchecked(out))
    }

    /// `out = M x`. Every evaluation path goes through here so that values
    /// computed in bulk and in [`GroupElement::act`] agree bit for bit.
    pub(crate) fn act_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(n) {
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate().take(n) {
                acc += self.matrix[(i, j)] * xj;
            }
            *o = acc;
        }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> Option<GroupElement> {
        self.matrix
            .clone()
            .try_inverse()
            .map(|matrix| GroupElement { matrix })
    }

    /// Operator norm induced by the sup-norm: the largest absolute row sum.
    pub fn sup_operator_norm(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .matrix
                .iter()
                .zip(other.matrix.iter())
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&GroupElement::identity(self.dim()), tol)
    }

    /// `diag(M, 1)`: acts on `(x, t)` by `(M x, t)`.
    pub fn extend_trivially(&self) -> GroupElement {
        let n = self.dim();
        let mut matrix = DMatrix::identity(n + 1, n + 1);
        matrix.view_mut((0, 0), (n, n)).copy_from(&self.matrix);
        GroupElement { matrix }
    }
}

/// Tolerance lookups over a list of elements, swept on the `(0,0)` entry.
struct ElementIndex<'a> {
    elements: &'a [GroupElement],
    order: Vec<usize>,
    keys: Vec<f64>,
}

impl<'a> ElementIndex<'a> {
    fn new(elements: &'a [GroupElement]) -> Self {
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by(|&a, &b| elements[a].matrix[(0, 0)].total_cmp(&elements[b].matrix[(0, 0)]));
        let keys = order.iter().map(|&i| elements[i].matrix[(0, 0)]).collect();
        ElementIndex { elements, order, keys }
    }

    /// Indices of listed elements within `tol` of `g`, in sorted-key order.
    fn matches<'b>(&'b self, g: &'b GroupElement, tol: f64) -> impl Iterator<Item = usize> + 'b {
        let key = g.matrix[(0, 0)];
        let start = self.keys.partition_point(|&k| k < key - tol);
        self.keys[start..]
            .iter()
            .take_while(move |&&k| k <= key + tol)
            .zip(&self.order[start..])
            .map(|(_, &i)| i)
            .filter(move |&i| self.elements[i].approx_eq(g, tol))
    }

    fn find(&self, g: &GroupElement, tol: f64) -> Option<usize> {
        self.matches(g, tol).min()
    }
}

pub type Chart = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// A compact group given by a continuous chart on a parameter box.
#[derive(Clone)]
pub struct ParameterizedGroup {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    dim: usize,
    action_lipschitz: f64,
    chart: Chart,
}

impl fmt::Debug for ParameterizedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParameterizedGroup")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("dim", &self.dim)
            .field("action_lipschitz", &self.action_lipschitz)
            .finish_non_exhaustive()
    }
}

impl ParameterizedGroup {
    /// `action_lipschitz` must satisfy
    /// `|chart(a) x - chart(b) x| <= L * |a - b| * (1 + |x|)` on the box;
    /// this is spot-checked on a coarse grid of parameters and probe points.
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        dim: usize,
        action_lipschitz: f64,
        chart: Chart,
    ) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidArgument(
                "parameter box needs matching, non-empty lower and upper bounds".into(),
            ));
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("parameter box must be bounded".into()));
        }
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::InvalidArgument(format!(
                "parameter box lower bound exceeds upper bound on axis {i}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("action dimension must be positive".into()));
        }
        if !(action_lipschitz >= 0.0 && action_lipschitz.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "action Lipschitz constant must be finite and non-negative, got {action_lipschitz}"
            )));
        }
        let group = ParameterizedGroup {
            name: name.into(),
            lower,
            upper,
            dim,
            action_lipschitz,
            chart,
        };
        group.spot_check()?;
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn param_dim(&self) -> usize {
        self.lower.len()
    }

    pub fn action_lipschitz(&self) -> f64 {
        self.action_lipschitz
    }

    pub fn element(&self, params: &[f64]) -> Result<GroupElement> {
        check_dim(self.param_dim(), params.len())?;
        let g = GroupElement::new((self.chart)(params))?;
        check_dim(self.dim, g.dim())?;
        Ok(g)
    }

    /// Clamps a parameter vector into the box.
    pub fn clamp(&self, params: &mut [f64]) {
        for ((p, lo), hi) in params.iter_mut().zip(&self.lower).zip(&self.upper) {
            *p = p.clamp(*lo, *hi);
        }
    }

    fn spot_check(&self) -> Result<()> {
        let k = self.param_dim();
        let per_axis = if k <= 2 { 9 } else { 3 };
        let axes: Vec<Vec<f64>> = (0..k)
            .map(|a| {
                (0..per_axis)
                    .map(|i| {
                        self.lower[a]
                            + (self.upper[a] - self.lower[a]) * i as f64 / (per_axis - 1) as f64
                    })
                    .collect()
            })
            .collect();
        let mut probes: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| {
                let mut e = vec![0.0; self.dim];
                e[i] = 1.0;
                e
            })
            .collect();
        probes.push(vec![1.0; self.dim]);
        probes.push((0..self.dim).map(|i| if i % 2 == 0 { 2.0 } else { -2.0 }).collect());

        let grid = cartesian(&axes);
        let elements = grid
            .iter()
            .map(|p| self.element(p))
            .collect::<Result<Vec<_>>>()?;
        let mut a_img = vec![0.0; self.dim];
        let mut b_img = vec![0.0; self.dim];
        for i in 0..grid.len() {
            for j in (i + 1)..grid.len() {
                let dtheta = sup_distance_slices(&grid[i], &grid[j]);
                for x in &probes {
                    elements[i].act_into(x, &mut a_img);
                    elements[j].act_into(x, &mut b_img);
                    let moved = sup_distance_slices(&a_img, &b_img);
                    let allowed = self.action_lipschitz * dtheta * (1.0 + sup_norm(x)) + GROUP_TOLERANCE;
                    if moved > allowed {
                        return Err(Error::GroupValidation(format!(
                            "chart '{}' violates its action Lipschitz bound between parameters \
                             {:?} and {:?} (moved {moved:e}, allowed {allowed:e})",
                            self.name, grid[i], grid[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn extend_trivially(&self) -> ParameterizedGroup {
        let chart = Arc::clone(&self.chart);
        let n = self.dim;
        ParameterizedGroup {
            name: format!("{}+trivial", self.name),
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            dim: n + 1,
            action_lipschitz: self.action_lipschitz,
            chart: Arc::new(move |p: &[f64]| {
                let inner = chart(p);
                let mut m = DMatrix::identity(n + 1, n + 1);
                m.view_mut((0, 0), (n, n)).copy_from(&inner);
                m
            }),
        }
    }
}

/// A definably compact group: closed and bounded in its ambient matrix space.
#[derive(Debug, Clone)]
pub enum CompactGroup {
    Finite { elements: Vec<GroupElement>, dim: usize },
    Parameterized(ParameterizedGroup),
}

/// Checks identity, closure, inverses and invertibility at [`GROUP_TOLERANCE`].
pub fn validate_finite_group(elements: Vec<GroupElement>) -> Result<CompactGroup> {
    let dim = elements
        .first()
        .ok_or_else(|| Error::GroupValidation("group must have at least one element".into()))?
        .dim();
    for (i, g) in elements.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::GroupValidation(format!(
                "element {i} is {0}x{0}, expected {dim}x{dim}",
                g.dim()
            )));
        }
        let det = g.matrix.determinant();
        if det.abs() <= SINGULAR_DET {
            return Err(Error::GroupValidation(format!(
                "element {i} is singular (det = {det:e})"
            )));
        }
    }
    let index = ElementIndex::new(&elements);
    if index.find(&GroupElement::identity(dim), GROUP_TOLERANCE).is_none() {
        return Err(Error::GroupValidation("identity element is missing".into()));
    }
    for (i, g) in elements.iter().enumerate() {
        for (j, h) in elements.iter().enumerate() {
            if index.find(&g.compose(h), GROUP_TOLERANCE).is_none() {
                return Err(Error::GroupValidation(format!(
                    "not closed: product of elements {i} and {j} is not in the list"
                )));
            }
        }
        let inverse = g
            .inverse()
            .ok_or_else(|| Error::GroupValidation(format!("element {i} is not invertible")))?;
        if index.find(&inverse, GROUP_TOLERANCE).is_none() {
            return Err(Error::GroupValidation(format!(
                "element {i} has no inverse in the list"
            )));
        }
    }
    Ok(CompactGroup::Finite { elements, dim })
}

impl CompactGroup {
    pub fn trivial(dim: usize) -> Self {
        CompactGroup::Finite {
            elements: vec![GroupElement::identity(dim)],
            dim,
        }
    }

    /// `{I, -I}`
    pub fn sign(dim: usize) -> Self {
        let neg = GroupElement {
            matrix: -DMatrix::<f64>::identity(dim, dim),
        };
        CompactGroup::Finite {
            elements: vec![GroupElement::identity(dim), neg],
            dim,
        }
    }

    /// Rotations of the plane by multiples of `2 pi / order`, starting at the identity.
    pub fn cyclic_rotations(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclic group order must be positive".into()));
        }
        let elements = (0..order)
            .map(|k| {
                if k == 0 {
                    GroupElement::identity(2)
                } else {
                    rotation_snapped(2.0 * std::f64::consts::PI * k as f64 / order as f64)
                }
            })
            .collect();
        validate_finite_group(elements)
    }

    /// The eight signed permutation matrices of the plane.
    pub fn dihedral4() -> Self {
        let mut elements = Vec::with_capacity(8);
        for swap in [false, true] {
            for (s0, s1) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let m = if swap {
                    DMatrix::from_row_slice(2, 2, &[0.0, s0, s1, 0.0])
                } else {
                    DMatrix::from_row_slice(2, 2, &[s0, 0.0, 0.0, s1])
                };
                elements.push(GroupElement { matrix: m });
            }
        }
        CompactGroup::Finite { elements, dim: 2 }
    }

    /// The symmetric group permuting coordinates of `R^n`, identity first.
    pub fn permutations(dim: usize) -> Result<Self> {
        if dim == 0 || dim > 7 {
            return Err(Error::InvalidArgument(format!(
                "coordinate permutation groups are supported for 1 <= n <= 7, got {dim}"
            )));
        }
        let mut perms = Vec::new();
        permute(&mut (0..dim).collect::<Vec<_>>(), 0, &mut perms);
        perms.sort();
        let elements = perms
            .iter()
            .map(|p| GroupElement {
                matrix: DMatrix::from_fn(dim, dim, |i, j| if p[i] == j { 1.0 } else { 0.0 }),
            })
            .collect();
        Ok(CompactGroup::Finite { elements, dim })
    }

    /// Rotations of the plane, `theta` in `[0, 2 pi]`. In the sup-norm
    /// `|R(a) x - R(b) x| <= |a - b| |x|_2 <= sqrt(2) |a - b| |x|_inf`.
    pub fn so2() -> Self {
        Self::so2_with(0.0, 2.0 * std::f64::consts::PI, std::f64::consts::SQRT_2)
            .expect("so2 chart is valid")
    }

    /// Plane rotations by angles in `[lower, upper]` with a caller-supplied
    /// action Lipschitz constant (spot-checked like any chart).
    pub fn so2_with(lower: f64, upper: f64, action_lipschitz: f64) -> Result<Self> {
        let chart: Chart = Arc::new(|p: &[f64]| {
            let (s, c) = p[0].sin_cos();
            DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        });
        ParameterizedGroup::new("so2", vec![lower], vec![upper], 2, action_lipschitz, chart)
            .map(CompactGroup::Parameterized)
    }

    pub fn dim(&self) -> usize {
        match self {
            CompactGroup::Finite { dim, .. } => *dim,
            CompactGroup::Parameterized(p) => p.dim,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CompactGroup::Finite { .. })
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            CompactGroup::Finite { elements, .. } => Some(elements.len()),
            CompactGroup::Parameterized(_) => None,
        }
    }

    pub fn action_lipschitz(&self) -> Option<f64> {
        match self {
            CompactGroup::Finite { .. } => None,
            CompactGroup::Parameterized(p) => Some(p.action_lipschitz),
        }
    }

    /// The same group acting on `R^(n+1)` by `(x, t) -> (g x, t)`.
    pub fn extend_trivially(&self) -> CompactGroup {
        match self {
            CompactGroup::Finite { elements, dim } => CompactGroup::Finite {
                elements: elements.iter().map(GroupElement::extend_trivially).collect(),
                dim: dim + 1,
            },
            CompactGroup::Parameterized(p) => CompactGroup::Parameterized(p.extend_trivially()),
        }
    }
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Rotation with entries within `1e-15` of `0` or `+-1` snapped exactly.
fn rotation_snapped(angle: f64) -> GroupElement {
    let mut g = GroupElement::rotation(angle);
    for v in g.matrix.iter_mut() {
        for target in [-1.0, 0.0, 1.0] {
            if (*v - target).abs() < 1e-15 {
                *v = target;
            }
        }
    }
    g
}

/// A finite subset of a compact group standing in for the whole group.
///
/// Every group element moves every point `x` by at most
/// `action_lipschitz * covering_radius * (1 + |x|)` away from the image of
/// some net element. Finite groups give the full group with radius zero.
#[derive(Debug, Clone)]
pub struct EpsNet {
    elements: Vec<GroupElement>,
    /// Chart parameters per element; `None` for finite groups and for an
    /// appended identity.
    params: Vec<Option<Vec<f64>>>,
    covering_radius: f64,
    action_lipschitz: Option<f64>,
    /// Per-axis grid spacing in parameter space (empty for finite groups).
    spacing: Vec<f64>,
    dim: usize,
}

impl EpsNet {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn params(&self, index: usize) -> Option<&[f64]> {
        self.params.get(index).and_then(|p| p.as_deref())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    pub fn action_lipschitz(&self) -> Option<f64> {
        self.action_lipschitz
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest sup-norm operator norm over the net.
    pub fn max_operator_norm(&self) -> f64 {
        self.elements
            .iter()
            .map(GroupElement::sup_operator_norm)
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, g: &GroupElement, tol: f64) -> bool {
        self.elements.iter().any(|h| h.approx_eq(g, tol))
    }
}

/// Finite groups: every element, radius zero. Parameterized groups: a dyadic
/// grid over the parameter box whose spacing is strictly below `epsilon` on
/// each axis, followed by the identity; duplicates (within
/// [`DEDUP_TOLERANCE`]) keep their first occurrence.
pub fn sample_net(group: &CompactGroup, epsilon: f64) -> Result<EpsNet> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "net epsilon must be positive and finite, got {epsilon}"
        )));
    }
    match group {
        CompactGroup::Finite { elements, dim } => {
            let params = vec![None; elements.len()];
            let (elements, params) = dedup(elements.clone(), params);
            Ok(EpsNet {
                elements,
                params,
                covering_radius: 0.0,
                action_lipschitz: None,
                spacing: Vec::new(),
                dim: *dim,
            })
        }
        CompactGroup::Parameterized(p) => {
            let mut axes = Vec::with_capacity(p.param_dim());
            let mut spacing = Vec::with_capacity(p.param_dim());
            let mut total: usize = 1;
            for (&lo, &hi) in p.lower.iter().zip(&p.upper) {
                let width = hi - lo;
                let (values, h) = dyadic_axis(lo, hi, width, epsilon)?;
                total = total.saturating_mul(values.len());
                if total > MAX_NET_SIZE {
                    return Err(Error::InvalidArgument(format!(
                        "net for epsilon {epsilon} exceeds {MAX_NET_SIZE} elements"
                    )));
                }
                axes.push(values);
                spacing.push(h);
            }
            let grid = cartesian(&axes);
            let mut elements = Vec::with_capacity(grid.len() + 1);
            let mut params = Vec::with_capacity(grid.len() + 1);
            for theta in grid {
                elements.push(p.element(&theta)?);
                params.push(Some(theta));
            }
            elements.push(GroupElement::identity(p.dim));
            params.push(None);
            let (elements, params) = dedup(elements, params);
            let covering_radius = spacing.iter().fold(0.0_f64, |m, h| m.max(h / 2.0));
            Ok(EpsNet {
                elements,
                params,
                covering_radius,
                action_lipschitz: Some(p.action_lipschitz),
                spacing,
                dim: p.dim,
            })
        }
    }
}

/// Grid `lo + i * width / 2^k`, `i = 0..=2^k`, with the smallest `k` such that
/// the spacing is strictly below `epsilon`.
fn dyadic_axis(lo: f64, hi: f64, width: f64, epsilon: f64) -> Result<(Vec<f64>, f64)> {
    if width == 0.0 {
        return Ok((vec![lo], 0.0));
    }
    let mut intervals: usize = 1;
    let mut h = width;
    while h >= epsilon {
        intervals = intervals.checked_mul(2).filter(|&n| n <= MAX_NET_SIZE).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "net for epsilon {epsilon} exceeds {MAX_NET_SIZE} elements"
            ))
        })?;
        h /= 2.0;
    }
    let values = (0..=intervals)
        .map(|i| if i == intervals { hi } else { lo + i as f64 * h })
        .collect();
    Ok((values, h))
}

fn dedup(
    elements: Vec<GroupElement>,
    params: Vec<Option<Vec<f64>>>,
) -> (Vec<GroupElement>, Vec<Option<Vec<f64>>>) {
    let index = ElementIndex::new(&elements);
    let mut keep = vec![true; elements.len()];
    for (i, g) in elements.iter().enumerate() {
        if index.matches(g, DEDUP_TOLERANCE).any(|j| j < i && keep[j]) {
            keep[i] = false;
        }
    }
    elements
        .into_iter()
        .zip(params)
        .zip(keep)
        .filter_map(|(pair, k)| k.then_some(pair))
        .unzip()
}

/// Images of `x` under the net, in net order.
pub fn orbit(net: &EpsNet, x: &Point) -> Result<Vec<Point>> {
    x.check_dim(net.dim)?;
    net.elements.iter().map(|g| g.act(x)).collect()
}
