//! Command-line front end. `run` parses arguments, dispatches to a check
//! suite and renders the report; the binary only prints and exits.

use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approach::{check_approach_axioms, ApproachTable};
use crate::domain::{check_continuity, check_continuity_param, is_compact, way_below, way_below_param};
use crate::error::{Error, Result};
use crate::interval::{ParamStructure, Shape};
use crate::order::{check_q_order, FiniteQOrder, StructureFile};
use crate::scott::{classify_injectivity, sigma_product_check, verify_certificate, ContinuousSnapshot, InjectivityVerdict, Verdict};
use crate::tnorm::{verify_laws, TNorm};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qdomain", version, about = "Checks for [0,1]-valued orders, domains and approach spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid subdivisions for sampled checks.
    #[arg(long, global = true, default_value_t = 32)]
    grid: usize,

    /// Comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,

    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,

    /// Rational arithmetic for the t-norm law suite.
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Debug, clap::Args)]
struct Target {
    /// Finite structure file.
    #[arg(long, conflicts_with = "shape")]
    file: Option<String>,

    /// Parametric shape: alphaL, alphaR, xinf or power:<shape>:<k>.
    #[arg(long)]
    shape: Option<String>,

    /// T-norm file, or one of godel, lukasiewicz, product.
    #[arg(long)]
    spec: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantale laws and classification of a t-norm.
    CheckTnorm {
        #[arg(long)]
        spec: String,
    },
    /// Axioms of a finite [0,1]-order table.
    CheckOrder {
        #[arg(long)]
        file: String,
    },
    /// Axioms (A1)-(A4) of a finite approach table.
    CheckApproach {
        #[arg(long)]
        file: String,
    },
    /// Way-below table with its laws and compact elements.
    WayBelow {
        #[command(flatten)]
        target: Target,
    },
    /// Continuity of a finite snapshot or of alphaL/alphaR.
    CheckContinuity {
        #[command(flatten)]
        target: Target,
    },
    /// Scott distance from a point to a set.
    ScottDelta {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        point: String,
        /// Comma-separated element labels.
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Sobriety witnesses for representable closed sets.
    Sobriety {
        #[command(flatten)]
        target: Target,
        /// Only the representable at this point.
        #[arg(long)]
        point: Option<String>,
    },
    /// Scott structure of a power against the power of the Scott structure.
    SigmaProduct {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Whether every continuous [0,1]-lattice is injective under a t-norm.
    ClassifyInjectivity {
        #[arg(long)]
        spec: String,
    },
    /// Replays a classification certificate.
    VerifyCertificate {
        #[arg(long)]
        file: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckTnorm { .. } => "check-tnorm",
            Command::CheckOrder { .. } => "check-order",
            Command::CheckApproach { .. } => "check-approach",
            Command::WayBelow { .. } => "way-below",
            Command::CheckContinuity { .. } => "check-continuity",
            Command::ScottDelta { .. } => "scott-delta",
            Command::Sobriety { .. } => "sobriety",
            Command::SigmaProduct { .. } => "sigma-product",
            Command::ClassifyInjectivity { .. } => "classify-injectivity",
            Command::VerifyCertificate { .. } => "verify-certificate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    Error,
}

impl Outcome {
    fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail | Outcome::Inconclusive => 1,
            Outcome::Error => 2,
        }
    }

    fn of(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// One command execution, as written to the machine-readable report.
#[derive(Debug, Serialize)]
pub struct CheckRun {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Value,
    pub grid_n: usize,
    pub epsilon: f64,
    pub outcome: Outcome,
    pub report: Value,
}

/// Result of `run`: exit status and the rendered report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub output: String,
    /// Diagnostics meant for standard error.
    pub diagnostics: String,
}

pub fn run<I, S>(args: I) -> Execution
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution { code, output: text, diagnostics: String::new() }
            } else {
                Execution { code, output: String::new(), diagnostics: text }
            };
        }
    };
    let command = cli.command.name().to_string();
    let (outcome, inputs, report) = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            let message = e.to_string();
            let run = CheckRun {
                schema_version: SCHEMA_VERSION,
                command,
                inputs: Value::Null,
                grid_n: cli.grid,
                epsilon: cli.eps,
                outcome: Outcome::Error,
                report: json!({ "error": message }),
            };
            let output = if cli.report == ReportFormat::Json { render_json(&run) } else { String::new() };
            return Execution { code: 2, output, diagnostics: format!("error: {message}\n") };
        }
    };
    let run = CheckRun {
        schema_version: SCHEMA_VERSION,
        command,
        inputs,
        grid_n: cli.grid,
        epsilon: cli.eps,
        outcome,
        report,
    };
    let output = match cli.report {
        ReportFormat::Json => render_json(&run),
        ReportFormat::Text => render_text(&run),
    };
    Execution { code: outcome.exit_code(), output, diagnostics: String::new() }
}

fn render_json(run: &CheckRun) -> String {
    let mut s = serde_json::to_string_pretty(run).expect("reports serialize");
    s.push('\n');
    s
}

fn render_text(run: &CheckRun) -> String {
    let mut out = format!("{}: {}\n", run.command, serde_json::to_value(run.outcome).unwrap().as_str().unwrap());
    if let Value::Object(map) = &run.report {
        for (k, v) in map {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k}: {shown}\n"));
        }
    }
    out
}

type Dispatched = (Outcome, Value, Value);

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn located(path: &str, e: Error) -> Error {
    match e {
        Error::Json(j) => Error::Parse(format!("{path}: {j}")),
        other => other,
    }
}

/// Reads a t-norm from a file, or takes a built-in by name.
pub fn load_tnorm(spec: &str) -> Result<TNorm> {
    if !Path::new(spec).exists() {
        match spec {
            "godel" => return Ok(TNorm::godel()),
            "lukasiewicz" => return Ok(TNorm::lukasiewicz()),
            "product" => return Ok(TNorm::product()),
            _ => {}
        }
    }
    TNorm::from_json(&read(spec)?).map_err(|e| located(spec, e))
}

fn load_order(path: &str, eps: f64) -> Result<FiniteQOrder> {
    Ok(FiniteQOrder::from_json(&read(path)?).map_err(|e| located(path, e))?.with_eps(eps))
}

enum Source {
    Finite(FiniteQOrder),
    Param(ParamStructure),
}

fn source(target: &Target, eps: f64) -> Result<(Source, Value)> {
    match (&target.file, &target.shape) {
        (Some(f), None) => Ok((Source::Finite(load_order(f, eps)?), json!({ "file": f }))),
        (None, Some(shape)) => {
            let spec = target
                .spec
                .as_deref()
                .ok_or_else(|| Error::Parse("--shape needs --spec".into()))?;
            let shape: Shape = shape.parse()?;
            let inputs = json!({ "shape": shape.to_string(), "spec": spec });
            Ok((Source::Param(ParamStructure::new(load_tnorm(spec)?, shape)), inputs))
        }
        _ => Err(Error::Parse("give either --file or --shape with --spec".into())),
    }
}

fn snapshot(src: Source, cli: &Cli) -> Result<ContinuousSnapshot> {
    match src {
        Source::Finite(x) => ContinuousSnapshot::finite(x),
        Source::Param(s) => ContinuousSnapshot::parametric(s, cli.grid),
    }
}

/// Index of a label, or on grids of the interval of the grid value it names.
fn point_index(x: &FiniteQOrder, label: &str) -> Result<usize> {
    let label = label.trim();
    if let Ok(i) = x.index_of(label) {
        return Ok(i);
    }
    let v: f64 = label.parse().map_err(|_| Error::UnknownElement(label.into()))?;
    (0..x.len())
        .find(|&i| x.label(i).parse::<f64>().is_ok_and(|w| (w - v).abs() < 1e-9))
        .ok_or_else(|| Error::UnknownElement(label.into()))
}

fn dispatch(cli: &Cli) -> Result<Dispatched> {
    if cli.grid == 0 {
        return Err(Error::Parse("--grid must be positive".into()));
    }
    if !(cli.eps >= 0.0 && cli.eps < 1.0) {
        return Err(Error::Parse("--eps must lie in [0, 1)".into()));
    }
    if cli.exact && !matches!(cli.command, Command::CheckTnorm { .. }) {
        return Err(Error::Unsupported("--exact applies to check-tnorm only".into()));
    }
    match &cli.command {
        Command::CheckTnorm { spec } => {
            let t = load_tnorm(spec)?;
            let laws = verify_laws(&t, cli.grid, cli.exact)?;
            let pass = laws.passes(cli.eps);
            let report = json!({
                "laws": to_value(&laws)?,
                "classification": to_value(&t.classify())?,
                "regions": to_value(&t.regions())?,
            });
            Ok((Outcome::of(pass), json!({ "spec": spec, "exact": cli.exact }), report))
        }
        Command::CheckOrder { file } => {
            let parsed: StructureFile = serde_json::from_str(&read(file)?).map_err(|e| located(file, e.into()))?;
            if parsed.elements.len() != parsed.alpha.len() {
                return Err(Error::CarrierMismatch { expected: parsed.elements.len(), found: parsed.alpha.len() });
            }
            let r = check_q_order(&parsed.tnorm, &parsed.alpha, cli.eps)?;
            Ok((Outcome::of(r.valid), json!({ "file": file }), to_value(&r)?))
        }
        Command::CheckApproach { file } => {
            let t = ApproachTable::from_json(&read(file)?).map_err(|e| located(file, e))?.with_eps(cli.eps);
            let r = check_approach_axioms(&t);
            Ok((Outcome::of(r.valid), json!({ "file": file }), to_value(&r)?))
        }
        Command::WayBelow { target } => {
            let (src, inputs) = source(target, cli.eps)?;
            let (x, w) = match src {
                Source::Finite(x) => {
                    let w = way_below(&x)?;
                    (x, w)
                }
                Source::Param(s) => {
                    let (x, w) = way_below_param(&s, cli.grid)?;
                    (x.with_eps(cli.eps), w)
                }
            };
            let laws = w.check_laws(&x)?;
            let compact: Vec<&str> = (0..x.len()).filter(|&a| is_compact(&x, &w, a)).map(|a| x.label(a)).collect();
            let report = json!({
                "elements": x.elements(),
                "mode": to_value(&w.mode())?,
                "w": w.table(),
                "laws": to_value(&laws)?,
                "compact": compact,
            });
            Ok((Outcome::of(laws.holds), inputs, report))
        }
        Command::CheckContinuity { target } => {
            let (src, inputs) = source(target, cli.eps)?;
            let r = match src {
                Source::Finite(x) => check_continuity(&x)?,
                Source::Param(s) => check_continuity_param(&s, cli.grid, cli.eps)?,
            };
            Ok((Outcome::of(r.is_continuous_lattice && r.chacl_agreement), inputs, to_value(&r)?))
        }
        Command::ScottDelta { target, point, set } => {
            let (src, mut inputs) = source(target, cli.eps)?;
            let cs = snapshot(src, cli)?;
            let x = point_index(cs.order(), point)?;
            let members = set
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| point_index(cs.order(), s))
                .collect::<Result<Vec<usize>>>()?;
            let value = cs.sigma_delta(x, &members)?;
            inputs["point"] = json!(point);
            inputs["set"] = json!(set);
            let names: Vec<&str> = members.iter().map(|&i| cs.order().label(i)).collect();
            let report = json!({
                "mode": to_value(&cs.mode())?,
                "point": cs.order().label(x),
                "set": names,
                "delta": value,
            });
            Ok((Outcome::Pass, inputs, report))
        }
        Command::Sobriety { target, point } => {
            let (src, mut inputs) = source(target, cli.eps)?;
            let cs = snapshot(src, cli)?;
            let points = match point {
                Some(p) => {
                    inputs["point"] = json!(p);
                    vec![point_index(cs.order(), p)?]
                }
                None => (0..cs.len()).collect(),
            };
            let mut witnesses = Vec::new();
            let mut all = true;
            for b in points {
                let w = cs.sobriety_witness(cs.order().yoneda(b).values())?;
                let ok = w.validates && w.sup_point.as_deref() == Some(cs.order().label(b));
                all &= ok;
                witnesses.push(json!({ "point": cs.order().label(b), "ok": ok, "witness": to_value(&w)? }));
            }
            let report = json!({ "mode": to_value(&cs.mode())?, "all_validate": all, "witnesses": witnesses });
            Ok((Outcome::of(all), inputs, report))
        }
        Command::SigmaProduct { target, k } => {
            let (src, mut inputs) = source(target, cli.eps)?;
            let x = match src {
                Source::Finite(x) => x,
                Source::Param(s) => s.grid_snapshot(cli.grid)?.with_eps(cli.eps),
            };
            let cs = ContinuousSnapshot::finite(x)?;
            let r = sigma_product_check(&cs, *k)?;
            inputs["k"] = json!(k);
            Ok((Outcome::of(r.equal), inputs, to_value(&r)?))
        }
        Command::ClassifyInjectivity { spec } => {
            let t = load_tnorm(spec)?;
            let v = classify_injectivity(&t, cli.grid, cli.eps)?;
            let check = verify_certificate(&v, cli.eps)?;
            let outcome = match v.verdict {
                Verdict::Inconclusive => Outcome::Inconclusive,
                _ => Outcome::of(check.valid),
            };
            Ok((outcome, json!({ "spec": spec }), to_value(&v)?))
        }
        Command::VerifyCertificate { file } => {
            let text = read(file)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| located(file, e.into()))?;
            let payload = match value.get("report") {
                Some(r) if value.get("schema_version").is_some() => r.clone(),
                _ => value,
            };
            let v: InjectivityVerdict = serde_json::from_value(payload).map_err(|e| located(file, e.into()))?;
            let check = verify_certificate(&v, cli.eps)?;
            let report = json!({ "valid": check.valid, "verdict": to_value(&check.verdict)?, "detail": check.detail });
            Ok((Outcome::of(check.valid), json!({ "file": file }), report))
        }
    }
}
