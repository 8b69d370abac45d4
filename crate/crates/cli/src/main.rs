//! `sharpquad`: build quadrature nodes, compare rules with the oracle, run
//! the verification suites and sweep node trajectories.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or validation error,
//! 3 solver failure, 4 inadmissible function, 5 oracle non-convergence.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sharpquad::json::format_f64;
use sharpquad::quadrature;
use sharpquad::rational::{RationalFunction, SimplePartialFraction};
use sharpquad::verify::{self, RunManifest, Selection};
use sharpquad::{BlaschkeSystem, Error, PoleConfig};

const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "sharpquad", version, about = "Exact quadrature for rational functions and sharp norm inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve B^s = e^{iφ} and write the nodes with their weights and residuals.
    Nodes {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply a rule to a function and compare with the adaptive oracle.
    Integrate {
        #[arg(long)]
        config: PathBuf,
        /// Rational function JSON; not used by `--mode spf`, which takes
        /// the poles of a half-plane configuration.
        #[arg(long)]
        function: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write its manifest.
    Verify {
        /// lemma1, exactness, phi-invariance, inequalities, sharpness,
        /// closed-norms, negative-controls or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Track the nodes through φ ∈ [0, 2π) and check that they move forward
    /// without crossing.
    SweepPhi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 360)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    CircleInt,
    CircleL2,
    CircleL2m,
    SegmentInt,
    SegmentL2,
    LineL2,
    Spf,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidConfig(_) | Error::InvalidArgument(_) | Error::Json(_) => 2,
            Error::PoleProximity { .. }
            | Error::OffContour { .. }
            | Error::BranchAmbiguity { .. }
            | Error::NodeResidual { .. }
            | Error::PhiAtInfinityNode { .. } => 3,
            Error::NotAdmissible(_) => 4,
            Error::NonConvergence { .. } => 5,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self { code: 2, message: format!("csv: {e}") }
    }
}

type CliResult = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<PoleConfig, Failure> {
    Ok(PoleConfig::from_json(&read(path)?)?)
}

fn read_function(path: &Path) -> Result<RationalFunction, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_text(v: &impl serde::Serialize) -> Result<String, Failure> {
    let mut s = sharpquad::json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn cmd_nodes(config: &Path, s: u32, phi: f64, out: Option<&Path>, format: Format) -> CliResult {
    let cfg = read_config(config)?;
    let sys = BlaschkeSystem::from_config(&cfg)?;
    let nodes = sys.solve_nodes(s, phi)?;
    let text = match format {
        Format::Json => json_text(&nodes.to_json())?,
        Format::Csv => csv_text(
            &nodes.csv_header(),
            nodes.csv_rows().into_iter().map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, &v)| if i == 0 { format!("{}", v as usize) } else { format_f64(v) })
                    .collect()
            }),
        )?,
    };
    emit(out, &text)?;
    Ok(0)
}

fn complex_json(z: sharpquad::Complex64) -> Value {
    json!([z.re, z.im])
}

#[allow(clippy::too_many_arguments)]
fn cmd_integrate(
    config: &Path,
    function: Option<&Path>,
    mode: Mode,
    s: u32,
    m: u32,
    phi: f64,
    out: Option<&Path>,
) -> CliResult {
    let cfg = read_config(config)?;
    let wrong_domain = || Failure::usage("configuration domain does not match --mode");
    let load = || -> Result<RationalFunction, Failure> {
        read_function(function.ok_or_else(|| Failure::usage("--function is required for this mode"))?)
    };

    let (rule, oracle, gap, extra) = match mode {
        Mode::CircleInt => {
            let PoleConfig::Circle(c) = &cfg else { return Err(wrong_domain()) };
            let f = load()?;
            let rule = quadrature::circle_integral(&f, c, s, phi)?;
            let oracle = verify::oracle_circle_integral(&f, c.radius())?;
            (complex_json(rule), complex_json(oracle), (rule - oracle).norm() / oracle.norm(), Value::Null)
        }
        Mode::CircleL2 | Mode::CircleL2m => {
            let PoleConfig::Circle(c) = &cfg else { return Err(wrong_domain()) };
            let f = load()?;
            let m = if mode == Mode::CircleL2 { 1 } else { m };
            let rule = quadrature::circle_l2m(&f, c, s, m, phi)?;
            let oracle = verify::oracle_circle_abs_pow(&f, c.radius(), 2 * m)?;
            (json!(rule), json!(oracle), (rule - oracle).abs() / oracle.abs(), json!({"m": m}))
        }
        Mode::SegmentInt => {
            let PoleConfig::Segment(c) = &cfg else { return Err(wrong_domain()) };
            let f = load()?;
            let rule = quadrature::segment_integral(&f, c, s, phi)?;
            let oracle = verify::oracle_segment_integral(&f)?;
            (complex_json(rule), complex_json(oracle), (rule - oracle).norm() / oracle.norm(), Value::Null)
        }
        Mode::SegmentL2 => {
            let PoleConfig::Segment(c) = &cfg else { return Err(wrong_domain()) };
            let f = load()?;
            let rule = quadrature::segment_l2(&f, c, s, phi)?;
            let oracle = verify::oracle_segment_l2(&f)?;
            (json!(rule), json!(oracle), (rule - oracle).abs() / oracle.abs(), Value::Null)
        }
        Mode::LineL2 => {
            let PoleConfig::HalfPlane(c) = &cfg else { return Err(wrong_domain()) };
            let f = load()?;
            let rule = quadrature::halfplane_l2(&f, c, s, phi)?;
            let oracle = verify::oracle_line_l2(&f)?;
            (json!(rule), json!(oracle), (rule - oracle).abs() / oracle.abs(), Value::Null)
        }
        Mode::Spf => {
            let PoleConfig::HalfPlane(c) = &cfg else { return Err(wrong_domain()) };
            let p = SimplePartialFraction::new(c.upper_poles().to_vec());
            let id = quadrature::spf_l2_identities(&p, phi)?;
            (
                json!(id.via_mu),
                json!(id.norm_sq),
                id.max_relative_gap(),
                json!({"via_re": id.via_re, "via_mu": id.via_mu, "rule": id.rule, "mu_im_gap": id.mu_im_gap}),
            )
        }
    };

    let pass = gap < GAP_TOLERANCE;
    let mut record = json!({
        "mode": mode.to_possible_value().expect("no skipped variants").get_name(),
        "s": s,
        "phi": phi,
        "rule": rule,
        "oracle": oracle,
        "relative_gap": gap,
        "pass": pass,
    });
    if let Value::Object(extra) = extra {
        record.as_object_mut().expect("object").extend(extra);
    }
    emit(out, &json_text(&record)?)?;
    Ok(if pass { 0 } else { 1 })
}

fn cmd_verify(suite: &str, seed: u64, out: Option<&Path>, format: Format) -> CliResult {
    let selection: Selection = suite.parse()?;
    let command = std::env::args().collect::<Vec<_>>().join(" ");
    let manifest = RunManifest::run(selection, seed, &command)?;
    let text = match format {
        Format::Json => {
            let mut t = manifest.to_json()?;
            t.push('\n');
            t
        }
        Format::Csv => csv_text(
            &["suite", "criterion", "check", "case", "value", "comparison", "threshold", "pass"],
            manifest.rows.iter().map(|r| {
                vec![
                    r.suite.to_string(),
                    r.criterion.to_string(),
                    r.check.clone(),
                    r.case.to_string(),
                    format_f64(r.value),
                    r.comparison.clone(),
                    format_f64(r.threshold),
                    r.pass.to_string(),
                ]
            }),
        )?,
    };
    emit(out, &text)?;
    for row in manifest.failures() {
        eprintln!(
            "FAIL {} {} case {}: {} {} {} {}",
            row.suite,
            row.check,
            row.case,
            format_f64(row.value),
            row.comparison,
            format_f64(row.threshold),
            serde_json::to_string(&row.details).unwrap_or_default()
        );
    }
    Ok(if manifest.pass { 0 } else { 1 })
}

fn cmd_sweep_phi(config: &Path, s: u32, steps: usize, out: Option<&Path>, format: Format) -> CliResult {
    if steps < 2 {
        return Err(Failure::usage("--steps must be at least 2"));
    }
    let cfg = read_config(config)?;
    let sys = BlaschkeSystem::from_config(&cfg)?;
    // The real line has a node at infinity for φ ≡ 0, so its sweep stays
    // strictly inside (0, 2π).
    let phis: Vec<f64> = match cfg {
        PoleConfig::HalfPlane(_) => (0..steps).map(|k| 2.0 * PI * (k as f64 + 0.5) / steps as f64).collect(),
        _ => (0..steps).map(|k| 2.0 * PI * k as f64 / steps as f64).collect(),
    };
    let tr = sys.track_nodes(s, &phis)?;
    let monotone = tr.is_monotone();
    let ordered = tr.preserves_order();
    let text = match format {
        Format::Csv => {
            let mut rows = Vec::new();
            for (i, &phi) in tr.phis.iter().enumerate() {
                for (j, z) in tr.nodes[i].iter().enumerate() {
                    rows.push(vec![
                        format_f64(phi),
                        j.to_string(),
                        format_f64(z.re),
                        format_f64(z.im),
                        format_f64(tr.params[i][j]),
                    ]);
                }
            }
            csv_text(&["phi", "node", "re", "im", "param"], rows)?
        }
        Format::Json => json_text(&json!({
            "s": s,
            "phis": tr.phis,
            "params": tr.params,
            "nodes": tr.nodes.iter().map(|row| row.iter().map(|&z| complex_json(z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "monotone": monotone,
            "order_preserved": ordered,
        }))?,
    };
    emit(out, &text)?;
    if !(monotone && ordered) {
        eprintln!("node motion check failed: monotone = {monotone}, order preserved = {ordered}");
        return Ok(1);
    }
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Nodes { config, s, phi, out, format } => cmd_nodes(&config, s, phi, out.as_deref(), format),
        Command::Integrate { config, function, mode, s, m, phi, out } => {
            cmd_integrate(&config, function.as_deref(), mode, s, m, phi, out.as_deref())
        }
        Command::Verify { suite, seed, out, format } => cmd_verify(&suite, seed, out.as_deref(), format),
        Command::SweepPhi { config, s, steps, out, format } => cmd_sweep_phi(&config, s, steps, out.as_deref(), format),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
