//! Scenario files: a versioned TOML document describing the group, domain,
//! data and evaluation grid of one run.
//!
//! ```toml
//! version = 1
//! dim = 1
//! epsilon = 0.1
//!
//! [group]
//! kind = "sign"
//!
//! [data]
//! points = [[-1.0], [1.0]]
//! values = [5.0, 5.0]
//!
//! [grid]
//! lower = [-2.0]
//! upper = [2.0]
//! counts = [41]
//! ```
//!
//! See `scenarios/` for the full set of sections.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use invext_core::{
    ClosedSet, CompactGroup, GroupElement, LabeledSample, LocallyClosedDomain, Point, ScalarField,
};

pub const SCENARIO_VERSION: u32 = 1;

/// A parse or validation failure, anchored to a line of the scenario file.
#[derive(Debug, Error)]
#[error("{}{message}", match .line { Some(l) => format!("line {l}: "), None => String::new() })]
pub struct ScenarioError {
    pub line: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub dim: usize,
    pub epsilon: f64,
    pub group: GroupSpec,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub data: Option<DataSpec>,
    #[serde(default)]
    pub base: Option<BaseSpec>,
    pub grid: GridSpec,
    #[serde(default)]
    pub audit: AuditSpec,
    #[serde(default)]
    pub zeroset: Option<ZeroSetSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Trivial,
    Sign,
    Cyclic { order: usize },
    Dihedral4,
    Permutations,
    /// Explicit matrices, each a list of rows.
    Finite { matrices: Vec<Vec<Vec<f64>>> },
    So2 {
        #[serde(default)]
        lower: Option<f64>,
        #[serde(default)]
        upper: Option<f64>,
        #[serde(default)]
        action_lipschitz: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    FiniteSample { points: Vec<Vec<f64>> },
    Box { lower: Vec<f64>, upper: Vec<f64> },
    SupBall { center: Vec<f64>, radius: f64 },
    Union { members: Vec<SetSpec> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant { value: f64 },
    Coordinate { axis: usize },
    Linear { weights: Vec<f64>, #[serde(default)] bias: f64 },
    SupNorm,
    EuclideanNorm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default)]
    pub frontier: Option<SetSpec>,
}

/// Labeled data on `A`: explicit points and values, or a primitive set
/// densified at `resolution` and labeled by a catalog field.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    #[serde(default)]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub set: Option<SetSpec>,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default)]
    pub lipschitz: Option<f64>,
}

/// Symmetrize a catalog field directly, without an extension step.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub field: FieldSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ToleranceSpec {
    Absolute(f64),
    /// `"auto"`: twice the larger certified error bound of each compared pair.
    Keyword(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub lower: Option<Vec<f64>>,
    #[serde(default)]
    pub upper: Option<Vec<f64>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: ToleranceSpec,
    /// Net elements compared per sample for parameterized groups.
    #[serde(default = "default_elements_per_sample")]
    pub elements_per_sample: usize,
    #[serde(default = "default_restriction_tolerance")]
    pub restriction_tolerance: f64,
    #[serde(default)]
    pub oracle: Option<OracleSpec>,
}

impl Default for AuditSpec {
    fn default() -> Self {
        AuditSpec {
            samples: default_samples(),
            seed: 0,
            lower: None,
            upper: None,
            tolerance: default_tolerance(),
            elements_per_sample: default_elements_per_sample(),
            restriction_tolerance: default_restriction_tolerance(),
            oracle: None,
        }
    }
}

fn default_samples() -> usize {
    1000
}

fn default_tolerance() -> ToleranceSpec {
    ToleranceSpec::Absolute(1e-9)
}

fn default_elements_per_sample() -> usize {
    8
}

fn default_restriction_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// `-|x|_2`, the orbit minimum of a coordinate under plane rotations.
    NegEuclideanNorm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub kind: OracleKind,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroSetSpec {
    pub set: SetSpec,
    #[serde(default)]
    pub on: Vec<Vec<f64>>,
    #[serde(default)]
    pub off: Vec<OffSample>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffSample {
    pub point: Vec<f64>,
    pub clearance: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<String>,
}

/// The set, its on-samples, and off-samples with clearances.
pub type ZeroSetInputs = (ClosedSet, Vec<Point>, Vec<(Point, f64)>);

/// Invariance tolerance used by the audit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvarianceTolerance {
    Absolute(f64),
    /// `factor * max(bound(x), bound(g x))` per compared pair.
    ErrorBound { factor: f64 },
}

/// Where in the source a validation failure should point.
#[derive(Debug, Clone, Copy)]
struct Anchor<'a> {
    section: Option<&'a str>,
    key: &'a str,
}

/// A scenario with its source text, for line-anchored diagnostics.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub name: String,
    source: String,
}

pub fn load(path: &Path) -> Result<LoadedScenario, ScenarioError> {
    let source = std::fs::read_to_string(path).map_err(|e| ScenarioError {
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse(&source, name)
}

pub fn parse(source: &str, name: String) -> Result<LoadedScenario, ScenarioError> {
    let scenario: Scenario = toml::from_str(source).map_err(|e| ScenarioError {
        line: e.span().map(|s| line_of_offset(source, s.start)),
        message: e.message().trim().to_string(),
    })?;
    let loaded = LoadedScenario {
        scenario,
        name,
        source: source.to_string(),
    };
    loaded.validate()?;
    Ok(loaded)
}

fn line_of_offset(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

impl LoadedScenario {
    fn error(&self, anchor: Anchor<'_>, message: impl Into<String>) -> ScenarioError {
        ScenarioError {
            line: self.locate(anchor),
            message: message.into(),
        }
    }

    /// First line assigning `key` inside `[section]` (or at top level), else
    /// the section header.
    fn locate(&self, anchor: Anchor<'_>) -> Option<usize> {
        let mut in_section = anchor.section.is_none();
        let mut header_line = None;
        for (i, raw) in self.source.lines().enumerate() {
            let line = raw.trim();
            if line.starts_with('[') {
                let name = line.trim_matches(|c| c == '[' || c == ']').trim();
                in_section = Some(name) == anchor.section;
                if in_section {
                    header_line = Some(i + 1);
                }
                continue;
            }
            if in_section {
                if let Some((k, _)) = line.split_once('=') {
                    if k.trim() == anchor.key {
                        return Some(i + 1);
                    }
                }
            }
        }
        header_line
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let s = &self.scenario;
        let top = |key| Anchor { section: None, key };
        if s.version != SCENARIO_VERSION {
            return Err(self.error(
                top("version"),
                format!("unsupported scenario version {} (expected {SCENARIO_VERSION})", s.version),
            ));
        }
        if s.dim == 0 {
            return Err(self.error(top("dim"), "dim must be positive"));
        }
        if !(s.epsilon > 0.0 && s.epsilon.is_finite()) {
            return Err(self.error(top("epsilon"), "epsilon must be positive"));
        }
        let grid = |key| Anchor { section: Some("grid"), key };
        for (key, v) in [("lower", &s.grid.lower), ("upper", &s.grid.upper)] {
            if v.len() != s.dim {
                return Err(self.error(grid(key), format!("grid {key} has {} entries, dim is {}", v.len(), s.dim)));
            }
        }
        if s.grid.counts.len() != s.dim {
            return Err(self.error(grid("counts"), format!("grid counts has {} entries, dim is {}", s.grid.counts.len(), s.dim)));
        }
        if let Some(c) = s.grid.counts.iter().find(|&&c| c < 2) {
            return Err(self.error(grid("counts"), format!("grid counts must be at least 2 per axis, got {c}")));
        }
        if s.grid.lower.iter().zip(&s.grid.upper).any(|(l, u)| !(l <= u)) {
            return Err(self.error(grid("lower"), "grid lower bound exceeds upper bound"));
        }
        if s.data.is_some() && s.base.is_some() {
            return Err(self.error(
                Anchor { section: Some("base"), key: "field" },
                "a scenario takes either [data] or [base], not both",
            ));
        }
        let audit = |key| Anchor { section: Some("audit"), key };
        for (key, v) in [("lower", &s.audit.lower), ("upper", &s.audit.upper)] {
            if let Some(v) = v {
                if v.len() != s.dim {
                    return Err(self.error(audit(key), format!("audit {key} has {} entries, dim is {}", v.len(), s.dim)));
                }
            }
        }
        if s.audit.samples == 0 {
            return Err(self.error(audit("samples"), "audit samples must be positive"));
        }
        self.invariance_tolerance()?;
        // Build everything once so that reference and dimension errors surface here.
        let group = self.group()?;
        if group.dim() != s.dim {
            return Err(self.error(
                Anchor { section: Some("group"), key: "kind" },
                format!("group acts on dimension {}, scenario dim is {}", group.dim(), s.dim),
            ));
        }
        self.domain()?;
        if s.data.is_some() {
            self.data()?;
        }
        if s.base.is_some() {
            self.base_field()?;
        }
        if s.zeroset.is_some() {
            self.zeroset()?;
        }
        Ok(())
    }

    pub fn invariance_tolerance(&self) -> Result<InvarianceTolerance, ScenarioError> {
        let anchor = Anchor { section: Some("audit"), key: "tolerance" };
        match &self.scenario.audit.tolerance {
            ToleranceSpec::Absolute(t) if *t >= 0.0 && t.is_finite() => Ok(InvarianceTolerance::Absolute(*t)),
            ToleranceSpec::Absolute(t) => Err(self.error(anchor, format!("tolerance must be non-negative, got {t}"))),
            ToleranceSpec::Keyword(k) if k == "auto" => Ok(InvarianceTolerance::ErrorBound { factor: 2.0 }),
            ToleranceSpec::Keyword(k) => Err(self.error(anchor, format!("unknown tolerance keyword '{k}' (expected a number or \"auto\")"))),
        }
    }

    pub fn group(&self) -> Result<CompactGroup, ScenarioError> {
        let dim = self.scenario.dim;
        let anchor = Anchor { section: Some("group"), key: "kind" };
        let built = match &self.scenario.group {
            GroupSpec::Trivial => Ok(CompactGroup::trivial(dim)),
            GroupSpec::Sign => Ok(CompactGroup::sign(dim)),
            GroupSpec::Cyclic { order } => CompactGroup::cyclic_rotations(*order),
            GroupSpec::Dihedral4 => Ok(CompactGroup::dihedral4()),
            GroupSpec::Permutations => CompactGroup::permutations(dim),
            GroupSpec::Finite { matrices } => {
                let anchor = Anchor { section: Some("group"), key: "matrices" };
                let elements = matrices
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| {
                        GroupElement::from_rows(rows)
                            .map_err(|e| self.error(anchor, format!("matrix {i}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                invext_core::validate_finite_group(elements)
            }
            GroupSpec::So2 { lower, upper, action_lipschitz } => CompactGroup::so2_with(
                lower.unwrap_or(0.0),
                upper.unwrap_or(std::f64::consts::TAU),
                action_lipschitz.unwrap_or(std::f64::consts::SQRT_2),
            ),
        };
        built.map_err(|e| self.error(anchor, e.to_string()))
    }

    fn set(&self, spec: &SetSpec, anchor: Anchor<'_>) -> Result<ClosedSet, ScenarioError> {
        let dim = self.scenario.dim;
        let pt = |c: &Vec<f64>| -> Result<Point, ScenarioError> {
            if c.len() != dim {
                return Err(self.error(anchor, format!("point {c:?} has {} coordinates, dim is {dim}", c.len())));
            }
            Point::new(c.clone()).map_err(|e| self.error(anchor, e.to_string()))
        };
        let built = match spec {
            SetSpec::FiniteSample { points } => {
                ClosedSet::finite_sample(points.iter().map(pt).collect::<Result<_, _>>()?)
            }
            SetSpec::Box { lower, upper } => ClosedSet::new_box(pt(lower)?, pt(upper)?),
            SetSpec::SupBall { center, radius } => ClosedSet::sup_ball(pt(center)?, *radius),
            SetSpec::Union { members } => ClosedSet::union(
                members
                    .iter()
                    .map(|m| self.set(m, anchor))
                    .collect::<Result<_, _>>()?,
            ),
        };
        built.map_err(|e| self.error(anchor, e.to_string()))
    }

    fn field(&self, spec: &FieldSpec, anchor: Anchor<'_>) -> Result<ScalarField, ScenarioError> {
        let dim = self.scenario.dim;
        Ok(match spec {
            FieldSpec::Constant { value } => ScalarField::constant(dim, *value),
            FieldSpec::Coordinate { axis } => {
                if *axis >= dim {
                    return Err(self.error(anchor, format!("axis {axis} out of range for dim {dim}")));
                }
                ScalarField::coordinate(dim, *axis)
            }
            FieldSpec::Linear { weights, bias } => {
                if weights.len() != dim {
                    return Err(self.error(anchor, format!("linear field has {} weights, dim is {dim}", weights.len())));
                }
                ScalarField::linear(weights.clone(), *bias)
            }
            FieldSpec::SupNorm => {
                ScalarField::new(dim, |x| x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))).with_lipschitz(1.0)
            }
            // |x|_2 <= sqrt(n) |x|_inf
            FieldSpec::EuclideanNorm => ScalarField::new(dim, |x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
                .with_lipschitz((dim as f64).sqrt()),
        })
    }

    pub fn domain(&self) -> Result<LocallyClosedDomain, ScenarioError> {
        let frontier = self.scenario.domain.as_ref().and_then(|d| d.frontier.as_ref());
        match frontier {
            None => Ok(LocallyClosedDomain::closed(self.scenario.dim)),
            Some(spec) => Ok(LocallyClosedDomain::with_frontier(
                self.set(spec, Anchor { section: Some("domain"), key: "frontier" })?,
            )),
        }
    }

    pub fn data(&self) -> Result<LabeledSample, ScenarioError> {
        let anchor = |key| Anchor { section: Some("data"), key };
        let spec = self
            .scenario
            .data
            .as_ref()
            .ok_or_else(|| self.error(anchor("points"), "scenario has no [data] section"))?;
        let dim = self.scenario.dim;
        let sample = match (&spec.points, &spec.set) {
            (Some(points), None) => {
                let values = spec
                    .values
                    .as_ref()
                    .ok_or_else(|| self.error(anchor("points"), "explicit points need a values list"))?;
                let pts = points
                    .iter()
                    .map(|c| {
                        if c.len() != dim {
                            return Err(self.error(anchor("points"), format!("point {c:?} has {} coordinates, dim is {dim}", c.len())));
                        }
                        Point::new(c.clone()).map_err(|e| self.error(anchor("points"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                LabeledSample::new(pts, values.clone()).map_err(|e| self.error(anchor("values"), e.to_string()))?
            }
            (None, Some(set)) => {
                let set = self.set(set, anchor("set"))?;
                let resolution = spec
                    .resolution
                    .ok_or_else(|| self.error(anchor("set"), "a primitive set needs a resolution"))?;
                let field_spec = spec
                    .field
                    .as_ref()
                    .ok_or_else(|| self.error(anchor("set"), "a primitive set needs a field to label it"))?;
                let field = self.field(field_spec, anchor("field"))?;
                let points = set.densify(resolution).map_err(|e| self.error(anchor("resolution"), e.to_string()))?;
                LabeledSample::from_field(points, &field).map_err(|e| self.error(anchor("field"), e.to_string()))?
            }
            _ => {
                return Err(self.error(
                    anchor("points"),
                    "[data] needs exactly one of `points` (with `values`) or `set`",
                ))
            }
        };
        if let Some(l) = spec.lipschitz {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(self.error(anchor("lipschitz"), format!("lipschitz must be finite and non-negative, got {l}")));
            }
        }
        Ok(sample)
    }

    pub fn base_field(&self) -> Result<ScalarField, ScenarioError> {
        let anchor = Anchor { section: Some("base"), key: "field" };
        let spec = self
            .scenario
            .base
            .as_ref()
            .ok_or_else(|| self.error(anchor, "scenario has no [base] section"))?;
        self.field(&spec.field, anchor)
    }

    pub fn zeroset(&self) -> Result<ZeroSetInputs, ScenarioError> {
        let anchor = |key| Anchor { section: Some("zeroset"), key };
        let spec = self
            .scenario
            .zeroset
            .as_ref()
            .ok_or_else(|| self.error(anchor("set"), "scenario has no [zeroset] section"))?;
        let dim = self.scenario.dim;
        let set = self.set(&spec.set, anchor("set"))?;
        let pt = |c: &Vec<f64>, key| {
            if c.len() != dim {
                return Err(self.error(anchor(key), format!("point {c:?} has {} coordinates, dim is {dim}", c.len())));
            }
            Point::new(c.clone()).map_err(|e| self.error(anchor(key), e.to_string()))
        };
        let on = spec.on.iter().map(|c| pt(c, "on")).collect::<Result<Vec<_>, _>>()?;
        let off = spec
            .off
            .iter()
            .map(|o| Ok((pt(&o.point, "off")?, o.clearance)))
            .collect::<Result<Vec<_>, ScenarioError>>()?;
        Ok((set, on, off))
    }

    /// Grid points in row-major order, last axis fastest.
    pub fn grid_points(&self) -> Vec<Point> {
        let g = &self.scenario.grid;
        let axes: Vec<Vec<f64>> = g
            .lower
            .iter()
            .zip(&g.upper)
            .zip(&g.counts)
            .map(|((&lo, &hi), &n)| {
                (0..n)
                    .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &axes {
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
        out.into_iter()
            .map(|c| Point::new(c).expect("grid bounds are finite"))
            .collect()
    }

    /// Box sampled by the invariance audit (defaults to the grid box).
    pub fn audit_box(&self) -> (Vec<f64>, Vec<f64>) {
        let s = &self.scenario;
        (
            s.audit.lower.clone().unwrap_or_else(|| s.grid.lower.clone()),
            s.audit.upper.clone().unwrap_or_else(|| s.grid.upper.clone()),
        )
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self, ScenarioError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ScenarioError {
                line: None,
                message: format!("--epsilon must be positive, got {epsilon}"),
            });
        }
        self.scenario.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.scenario.audit.seed = seed;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFLECTION: &str = r#"
version = 1
dim = 1
epsilon = 0.1

[group]
kind = "sign"

[data]
points = [[-1.0], [1.0]]
values = [5.0, 5.0]

[grid]
lower = [-2.0]
upper = [2.0]
counts = [5]
"#;

    #[test]
    fn parses_minimal_scenario() {
        let s = parse(REFLECTION, "r.toml".into()).unwrap();
        assert_eq!(s.data().unwrap().len(), 2);
        let grid = s.grid_points();
        assert_eq!(grid.len(), 5);
        assert_eq!(grid[2].coords(), &[0.0]);
        assert_eq!(s.invariance_tolerance().unwrap(), InvarianceTolerance::Absolute(1e-9));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let broken = REFLECTION.replace("counts = [5]", "counts = [5");
        let err = parse(&broken, "r.toml".into()).unwrap_err();
        assert!(err.line.is_some(), "{err}");
    }

    #[test]
    fn validation_errors_point_at_the_key() {
        let bad = REFLECTION.replace("counts = [5]", "counts = [1]");
        let err = parse(&bad, "r.toml".into()).unwrap_err();
        assert_eq!(err.line, Some(16));
        assert!(err.to_string().starts_with("line 16: "));

        let bad_version = REFLECTION.replace("version = 1", "version = 2");
        assert_eq!(parse(&bad_version, "r.toml".into()).unwrap_err().line, Some(2));

        let bad_group = REFLECTION.replace("kind = \"sign\"", "kind = \"dihedral4\"");
        let err = parse(&bad_group, "r.toml".into()).unwrap_err();
        assert_eq!(err.line, Some(7));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let typo = REFLECTION.replace("epsilon = 0.1", "epsilon = 0.1\nepsilom = 0.2");
        assert!(parse(&typo, "r.toml".into()).is_err());
    }

    #[test]
    fn non_group_matrices_rejected() {
        let src = REFLECTION
            .replace("dim = 1", "dim = 2")
            .replace("kind = \"sign\"", "kind = \"finite\"\nmatrices = [[[1.0, 0.0], [0.0, 1.0]], [[0.0, -1.0], [1.0, 0.0]]]")
            .replace("[[-1.0], [1.0]]", "[[1.0, 0.0]]")
            .replace("[5.0, 5.0]", "[5.0]")
            .replace("[-2.0]", "[-2.0, -2.0]")
            .replace("[2.0]", "[2.0, 2.0]")
            .replace("[5]", "[3, 3]");
        let err = parse(&src, "r.toml".into()).unwrap_err();
        assert!(err.message.contains("not closed"), "{err}");
        assert_eq!(err.line, Some(7));
    }
}
