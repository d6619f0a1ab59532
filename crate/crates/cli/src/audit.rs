//! Executable invariance audit: sample points in a box, act on them with net
//! elements and measure `|phi(g x) - phi(x)|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invext_core::parallel;
use invext_core::{EpsNet, Execution, InvariantExtension, Point, SymmetrizedField};

use crate::scenario::InvarianceTolerance;

/// A field the audit can probe: values plus a certified evaluation error.
pub trait InvariantField: Sync {
    fn ambient_dim(&self) -> usize;
    fn value(&self, x: &Point) -> invext_core::Result<f64>;
    fn bound(&self, x: &Point) -> invext_core::Result<f64>;
}

impl InvariantField for SymmetrizedField {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn value(&self, x: &Point) -> invext_core::Result<f64> {
        self.eval(x)
    }

    fn bound(&self, x: &Point) -> invext_core::Result<f64> {
        self.error_bound(x)
    }
}

impl InvariantField for InvariantExtension {
    fn ambient_dim(&self) -> usize {
        InvariantExtension::ambient_dim(self)
    }

    fn value(&self, x: &Point) -> invext_core::Result<f64> {
        self.eval(x)
    }

    fn bound(&self, x: &Point) -> invext_core::Result<f64> {
        self.error_bound(x)
    }
}

#[derive(Debug, Clone)]
pub struct InvarianceCheck {
    pub samples: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub tolerance: InvarianceTolerance,
    /// Net elements per sample when the net is larger than this; otherwise all of them.
    pub elements_per_sample: usize,
    pub seed: u64,
}

/// The comparison with the largest excess over its allowance.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstPair {
    pub sample: usize,
    pub point: Vec<f64>,
    pub element: usize,
    pub deviation: f64,
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub samples: usize,
    /// Samples (or images) that could not be evaluated, e.g. on a frontier.
    pub skipped: usize,
    pub comparisons: usize,
    pub violations: usize,
    pub max_deviation: f64,
    pub worst: Option<WorstPair>,
    pub passed: bool,
}

impl InvarianceReport {
    pub fn describe(&self, tolerance: InvarianceTolerance) -> String {
        let tol = match tolerance {
            InvarianceTolerance::Absolute(t) => format!("{t:e}"),
            InvarianceTolerance::ErrorBound { factor } => format!("{factor} * error bound"),
        };
        let mut out = format!(
            "invariance: {} ({} samples, {} comparisons, {} skipped, max |phi(gx) - phi(x)| = {:e}, tolerance {tol})\n",
            verdict(self.passed),
            self.samples,
            self.comparisons,
            self.skipped,
            self.max_deviation,
        );
        if self.comparisons == 0 {
            out.push_str("  no comparable samples\n");
        }
        if let Some(w) = &self.worst {
            if self.violations > 0 {
                out.push_str(&format!(
                    "  {} violations; worst: sample {} at {} under net element {}, deviation {:e} > {:e}\n",
                    self.violations,
                    w.sample,
                    fmt_coords(&w.point),
                    w.element,
                    w.deviation,
                    w.allowed
                ));
            }
        }
        out
    }
}

pub fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn fmt_coords(c: &[f64]) -> String {
    let parts: Vec<String> = c.iter().map(|v| format!("{v:?}")).collect();
    format!("({})", parts.join(", "))
}

#[derive(Default)]
struct SampleOutcome {
    skipped: usize,
    comparisons: usize,
    violations: usize,
    max_deviation: f64,
    worst: Option<(f64, usize, f64, f64)>,
}

/// Pass iff every comparison is within tolerance and at least one was made.
/// Samples and element choices depend only on `seed`; evaluation order does not
/// affect the report.
pub fn check_invariance<F: InvariantField>(
    field: &F,
    net: &EpsNet,
    check: &InvarianceCheck,
    exec: Execution,
) -> InvarianceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let all: Vec<usize> = (0..net.len()).collect();
    let plan: Vec<(Point, Vec<usize>)> = (0..check.samples)
        .map(|_| {
            let coords: Vec<f64> = check
                .lower
                .iter()
                .zip(&check.upper)
                .map(|(&lo, &hi)| if lo < hi { rng.gen_range(lo..=hi) } else { lo })
                .collect();
            let elements = if net.len() <= check.elements_per_sample {
                all.clone()
            } else {
                (0..check.elements_per_sample)
                    .map(|_| rng.gen_range(0..net.len()))
                    .collect()
            };
            (Point::new(coords).expect("audit box is finite"), elements)
        })
        .collect();

    let outcomes = parallel::map(exec, &plan, |(x, elements)| {
        let mut out = SampleOutcome::default();
        let (fx, bx) = match (field.value(x), allowance_base(field, x, check.tolerance)) {
            (Ok(v), Ok(b)) => (v, b),
            _ => {
                out.skipped = 1;
                return out;
            }
        };
        for &e in elements {
            let gx = match net.elements()[e].act(x) {
                Ok(p) => p,
                Err(_) => {
                    out.skipped += 1;
                    continue;
                }
            };
            let (fgx, bgx) = match (field.value(&gx), allowance_base(field, &gx, check.tolerance)) {
                (Ok(v), Ok(b)) => (v, b),
                _ => {
                    out.skipped += 1;
                    continue;
                }
            };
            let allowed = match check.tolerance {
                InvarianceTolerance::Absolute(t) => t,
                InvarianceTolerance::ErrorBound { factor } => factor * bx.max(bgx),
            };
            let deviation = (fgx - fx).abs();
            out.comparisons += 1;
            out.max_deviation = out.max_deviation.max(deviation);
            if !(deviation <= allowed) {
                out.violations += 1;
            }
            let excess = deviation - allowed;
            if out.worst.is_none_or(|w| excess > w.0) {
                out.worst = Some((excess, e, deviation, allowed));
            }
        }
        out
    });

    let mut report = InvarianceReport {
        samples: check.samples,
        skipped: 0,
        comparisons: 0,
        violations: 0,
        max_deviation: 0.0,
        worst: None,
        passed: false,
    };
    let mut worst_excess = f64::NEG_INFINITY;
    for (i, o) in outcomes.into_iter().enumerate() {
        report.skipped += o.skipped;
        report.comparisons += o.comparisons;
        report.violations += o.violations;
        report.max_deviation = report.max_deviation.max(o.max_deviation);
        if let Some((excess, element, deviation, allowed)) = o.worst {
            if excess > worst_excess {
                worst_excess = excess;
                report.worst = Some(WorstPair {
                    sample: i,
                    point: plan[i].0.coords().to_vec(),
                    element,
                    deviation,
                    allowed,
                });
            }
        }
    }
    report.passed = report.comparisons > 0 && report.violations == 0;
    report
}

fn allowance_base<F: InvariantField>(
    field: &F,
    x: &Point,
    tolerance: InvarianceTolerance,
) -> invext_core::Result<f64> {
    match tolerance {
        InvarianceTolerance::Absolute(_) => Ok(0.0),
        InvarianceTolerance::ErrorBound { .. } => field.bound(x),
    }
}
