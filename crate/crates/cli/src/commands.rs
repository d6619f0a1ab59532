//! The `run`, `audit` and `zeroset` subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use invext_core::groups::sample_net;
use invext_core::{
    audit_zero_set, extend_invariant, invariant_zero_function, symmetrize, CompactGroup, Error as CoreError,
    Execution, InvariantExtension, LabeledSample, Point, SymmetrizedField, Witness,
};

use crate::audit::{check_invariance, fmt_coords, verdict, InvarianceCheck, InvariantField};
use crate::scenario::{self, LoadedScenario, OracleKind, ScenarioError};

/// Largest accepted gap between the unsymmetrized extension and the data.
pub const RESTRICTION_BEFORE: f64 = 1e-12;

pub const GRID_FILE: &str = "grid.csv";
pub const REPORT_FILE: &str = "report.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Audit,
    ZeroSet,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Audit => "audit",
            Command::ZeroSet => "zeroset",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub exec: Execution,
}

/// Failures that stop a command before any verdict (exit status 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{file}:{}", format_scenario_error(.source))]
    Scenario { file: String, source: ScenarioError },
    #[error("{file}: {source}")]
    Core { file: String, source: CoreError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn format_scenario_error(e: &ScenarioError) -> String {
    match e.line {
        Some(l) => format!("{l}: {}", e.message),
        None => format!(" {}", e.message),
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub report: String,
    pub out_dir: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

enum Built {
    Symmetrized(SymmetrizedField),
    Extension(InvariantExtension, LabeledSample),
}

impl Built {
    fn field(&self) -> &SymmetrizedField {
        match self {
            Built::Symmetrized(f) => f,
            Built::Extension(e, _) => e.field(),
        }
    }

    fn value(&self, x: &Point) -> invext_core::Result<f64> {
        match self {
            Built::Symmetrized(f) => f.value(x),
            Built::Extension(e, _) => e.value(x),
        }
    }

    fn witness(&self, points: &[Point], exec: Execution) -> Vec<invext_core::Result<(Witness, f64)>> {
        let with_bound = |w: invext_core::Result<Witness>, p: &Point| {
            w.and_then(|w| Ok((w, self.bound(p)?)))
        };
        match self {
            Built::Symmetrized(f) => invext_core::parallel::map(exec, points, |p| with_bound(f.eval_with_witness(p), p)),
            Built::Extension(e, _) => invext_core::parallel::map(exec, points, |p| with_bound(e.eval_with_witness(p), p)),
        }
    }

    fn bound(&self, x: &Point) -> invext_core::Result<f64> {
        match self {
            Built::Symmetrized(f) => f.bound(x),
            Built::Extension(e, _) => e.bound(x),
        }
    }
}

pub fn execute(command: Command, path: &Path, options: &Options) -> Result<Outcome, CliError> {
    let file = path.display().to_string();
    let scenario_err = |source| CliError::Scenario { file: file.clone(), source };
    let mut loaded = scenario::load(path).map_err(scenario_err)?;
    if let Some(eps) = options.epsilon {
        loaded = loaded.with_epsilon(eps).map_err(scenario_err)?;
    }
    if let Some(seed) = options.seed {
        loaded = loaded.with_seed(seed);
    }
    let out_dir = options
        .out
        .clone()
        .or_else(|| {
            loaded
                .scenario
                .output
                .as_ref()
                .and_then(|o| o.dir.as_ref())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from("."));
    let group = loaded.group().map_err(scenario_err)?;

    let mut report = header(command, &loaded, &group);
    let mut grid_csv = None;
    let passed = match command {
        Command::Run | Command::Audit if only_zero_set(&loaded) => {
            let slot = (command == Command::Run).then_some(&mut grid_csv);
            zero_set(&loaded, &group, options.exec, &file, &mut report, slot)?
        }
        Command::Run | Command::Audit => {
            match build(&loaded, &group, &file)? {
                Err(violation) => {
                    report.push_str(&violation);
                    false
                }
                Ok(built) => {
                    let mut passed = true;
                    if command == Command::Run {
                        let (csv, summary) = grid(&loaded, &built, options.exec);
                        grid_csv = Some(csv);
                        report.push_str(&summary);
                    }
                    passed &= invariance(&loaded, &group, &built, options.exec, &file, &mut report)?;
                    if let Built::Extension(ext, data) = &built {
                        passed &= restriction(&loaded, ext, data, &mut report);
                    }
                    passed &= oracle(&loaded, &built, &mut report);
                    if command == Command::Run && loaded.scenario.zeroset.is_some() {
                        passed &= zero_set(&loaded, &group, options.exec, &file, &mut report, None)?;
                    }
                    passed
                }
            }
        }
        Command::ZeroSet => {
            if loaded.scenario.zeroset.is_none() {
                return Err(CliError::Scenario {
                    file,
                    source: ScenarioError {
                        line: None,
                        message: "the zeroset command needs a [zeroset] section".into(),
                    },
                });
            }
            zero_set(&loaded, &group, options.exec, &file, &mut report, Some(&mut grid_csv))?
        }
    };
    let _ = writeln!(report, "verdict: {}", verdict(passed));

    fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    if let Some(csv) = grid_csv {
        write(&out_dir.join(GRID_FILE), &csv)?;
    }
    write(&out_dir.join(REPORT_FILE), &report)?;
    Ok(Outcome {
        passed,
        report,
        out_dir,
    })
}

fn only_zero_set(loaded: &LoadedScenario) -> bool {
    let s = &loaded.scenario;
    s.data.is_none() && s.base.is_none() && s.zeroset.is_some()
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn header(command: Command, loaded: &LoadedScenario, group: &CompactGroup) -> String {
    let s = &loaded.scenario;
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", loaded.name);
    let _ = writeln!(out, "command: {}", command.name());
    let _ = writeln!(out, "dim: {}", s.dim);
    let _ = writeln!(out, "group: {}", describe_group(group));
    let _ = writeln!(out, "epsilon: {:?}", s.epsilon);
    if let Ok(net) = sample_net(group, s.epsilon) {
        let _ = writeln!(
            out,
            "net: {} elements, covering radius {:e}",
            net.len(),
            net.covering_radius()
        );
    }
    let _ = writeln!(out, "seed: {}", s.audit.seed);
    out
}

fn describe_group(group: &CompactGroup) -> String {
    match group {
        CompactGroup::Finite { elements, dim } => format!("finite, order {} on R^{dim}", elements.len()),
        CompactGroup::Parameterized(p) => format!(
            "{} on {} to {}, action lipschitz {:?}",
            p.name(),
            fmt_coords(p.lower()),
            fmt_coords(p.upper()),
            p.action_lipschitz()
        ),
    }
}

/// Builds the field; an invariance violation in the data becomes report text.
fn build(loaded: &LoadedScenario, group: &CompactGroup, file: &str) -> Result<Result<Built, String>, CliError> {
    let core = |source| CliError::Core {
        file: file.to_string(),
        source,
    };
    let scenario_err = |source| CliError::Scenario {
        file: file.to_string(),
        source,
    };
    let eps = loaded.scenario.epsilon;
    if loaded.scenario.base.is_some() {
        let base = loaded.base_field().map_err(scenario_err)?;
        return Ok(Ok(Built::Symmetrized(symmetrize(base, group, eps).map_err(core)?)));
    }
    let Some(spec) = &loaded.scenario.data else {
        return Err(scenario_err(ScenarioError {
            line: None,
            message: "scenario needs a [data] or [base] section".into(),
        }));
    };
    let data = loaded.data().map_err(scenario_err)?;
    let domain = loaded.domain().map_err(scenario_err)?;
    match extend_invariant(&domain, &data, group, eps, spec.lipschitz) {
        Ok(ext) => Ok(Ok(Built::Extension(ext, data))),
        Err(CoreError::InvarianceViolation {
            point,
            element,
            partner,
            discrepancy,
        }) => {
            let net = sample_net(group, eps).map_err(core)?;
            let x = &data.points()[point];
            let gx = net.elements()[element].act(x).map_err(core)?;
            let mut out = format!(
                "invariance: FAIL (labeled data is not group-invariant, discrepancy {discrepancy:e})\n"
            );
            let _ = write!(
                out,
                "  orbit pair: sample {point} at {} with value {:?} maps under net element {element} to {}",
                fmt_coords(x.coords()),
                data.values()[point],
                fmt_coords(gx.coords()),
            );
            match partner {
                Some(j) => {
                    let _ = writeln!(out, " = sample {j} with value {:?}", data.values()[j]);
                }
                None => out.push_str(", which is not a sample\n"),
            }
            Ok(Err(out))
        }
        Err(e) => Err(core(e)),
    }
}

/// Evaluates the grid; frontier points get `nan` and empty witness fields.
fn grid(loaded: &LoadedScenario, built: &Built, exec: Execution) -> (String, String) {
    let points = loaded.grid_points();
    let rows = built.witness(&points, exec);
    let dim = loaded.scenario.dim;
    let mut csv = String::new();
    for i in 1..=dim {
        let _ = write!(csv, "x{i},");
    }
    csv.push_str("phi_value,witness_index,error_bound\n");
    let mut unevaluated = 0;
    for (p, row) in points.iter().zip(&rows) {
        for c in p.coords() {
            let _ = write!(csv, "{c:?},");
        }
        match row {
            Ok((w, bound)) => {
                let _ = writeln!(csv, "{:?},{},{:?}", w.value, w.net_index, bound);
            }
            Err(_) => {
                unevaluated += 1;
                csv.push_str("nan,,\n");
            }
        }
    }
    let summary = format!(
        "grid: {} points, {} not evaluated (frontier or outside the domain)\n",
        points.len(),
        unevaluated
    );
    (csv, summary)
}

fn invariance(
    loaded: &LoadedScenario,
    group: &CompactGroup,
    built: &Built,
    exec: Execution,
    file: &str,
    report: &mut String,
) -> Result<bool, CliError> {
    let tolerance = loaded.invariance_tolerance().map_err(|source| CliError::Scenario {
        file: file.to_string(),
        source,
    })?;
    let (lower, upper) = loaded.audit_box();
    let audit = &loaded.scenario.audit;
    let check = InvarianceCheck {
        samples: audit.samples,
        lower,
        upper,
        tolerance,
        elements_per_sample: audit.elements_per_sample,
        seed: audit.seed,
    };
    // Ambient net: the extension's own net acts on the embedded space.
    let net = sample_net(group, loaded.scenario.epsilon).map_err(|source| CliError::Core {
        file: file.to_string(),
        source,
    })?;
    let result = match built {
        Built::Symmetrized(f) => check_invariance(f, &net, &check, exec),
        Built::Extension(e, _) => check_invariance(e, &net, &check, exec),
    };
    report.push_str(&result.describe(tolerance));
    Ok(result.passed)
}

/// Data values before symmetrization (within [`RESTRICTION_BEFORE`]) and
/// after (within the scenario tolerance plus the certified error bound).
fn restriction(loaded: &LoadedScenario, ext: &InvariantExtension, data: &LabeledSample, report: &mut String) -> bool {
    let tol = loaded.scenario.audit.restriction_tolerance;
    let mut before = 0.0_f64;
    let mut after = 0.0_f64;
    let mut failures = Vec::new();
    for (i, (a, &v)) in data.points().iter().zip(data.values()).enumerate() {
        let lifted = ext.lift(a).and_then(|p| ext.field().base().eval(&p));
        let sym = ext.eval(a);
        let bound = ext.error_bound(a);
        match (lifted, sym, bound) {
            (Ok(b), Ok(s), Ok(e)) => {
                before = before.max((b - v).abs());
                after = after.max((s - v).abs());
                if !((b - v).abs() <= RESTRICTION_BEFORE && (s - v).abs() <= tol + e) {
                    failures.push(i);
                }
            }
            _ => failures.push(i),
        }
    }
    let passed = failures.is_empty();
    let _ = writeln!(
        report,
        "restriction: {} ({} samples, max deviation {before:e} before symmetrization, {after:e} after, tolerance {RESTRICTION_BEFORE:e} / {tol:e})",
        verdict(passed),
        data.len()
    );
    if let Some(first) = failures.first() {
        let _ = writeln!(report, "  {} samples off; first: sample {first}", failures.len());
    }
    passed
}

fn oracle(loaded: &LoadedScenario, built: &Built, report: &mut String) -> bool {
    let Some(spec) = &loaded.scenario.audit.oracle else {
        return true;
    };
    let points = loaded.grid_points();
    let mut max_dev = 0.0_f64;
    let mut failed = 0;
    for p in &points {
        let expected = match spec.kind {
            OracleKind::NegEuclideanNorm => -p.coords().iter().map(|v| v * v).sum::<f64>().sqrt(),
        };
        match built.value(p) {
            Ok(v) => max_dev = max_dev.max((v - expected).abs()),
            Err(_) => failed += 1,
        }
    }
    let passed = failed == 0 && max_dev <= spec.tolerance;
    let _ = writeln!(
        report,
        "oracle: {} (neg_euclidean_norm on {} grid points, max |phi - oracle| = {max_dev:e}, tolerance {:e}, net lipschitz bound {})",
        verdict(passed),
        points.len(),
        spec.tolerance,
        built
            .field()
            .lipschitz_bound()
            .map_or("none".to_string(), |l| format!("{l:?}"))
    );
    passed
}

fn zero_set(
    loaded: &LoadedScenario,
    group: &CompactGroup,
    exec: Execution,
    file: &str,
    report: &mut String,
    grid_csv: Option<&mut Option<String>>,
) -> Result<bool, CliError> {
    let (set, on, off) = loaded.zeroset().map_err(|source| CliError::Scenario {
        file: file.to_string(),
        source,
    })?;
    let core = |source| CliError::Core {
        file: file.to_string(),
        source,
    };
    let d = invariant_zero_function(&set, group, loaded.scenario.epsilon).map_err(core)?;
    let audit = audit_zero_set(&d, &on, &off).map_err(core)?;
    report.push_str(&audit.describe());
    if let Some(slot) = grid_csv {
        let (csv, summary) = grid(loaded, &Built::Symmetrized(d), exec);
        report.push_str(&summary);
        *slot = Some(csv);
    }
    Ok(audit.passed)
}
