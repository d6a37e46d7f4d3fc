//! Command-line front end.
//!
//! Every command prints a human-readable summary to stdout and can emit a
//! machine-readable artifact instead (`--format` alone) or alongside
//! (`--out` with an optional `--format`). Outputs are deterministic: the
//! same invocation produces byte-identical bytes.
//!
//! Exit codes: 0 on success, 1 when a solver or builder fails, 2 when a
//! verification check fails, 64 for invalid usage.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sofa_core::algebraic::check_curve_membership;
use sofa_core::path::{
    hammersley_area, hammersley_optimal_radius, hammersley_path,
};
use sofa_core::render::{
    animation_frames, polygon_csv, shape_svg, to_json_string, SvgOptions,
};
use sofa_core::shape::{
    area_by_boundary, attribute_boundary, build_shape, symmetrize_ambidextrous,
};
use sofa_core::{ambi, gerver, report};
use sofa_core::{BuildOptions, RotationPath, SofaShape};

// ---- argument surface ----

#[derive(Parser)]
#[command(name = "sofa", version, about = "Moving-sofa solvers and artifacts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Solver tolerance.
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = parse_tol)]
    tol: f64,

    /// Number of sweep panels for built shapes.
    #[arg(long, global = true, default_value_t = 1024, value_parser = parse_n_angles)]
    n_angles: usize,

    /// Write the artifact to this file (stdout keeps the summary).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Artifact format; without --out the artifact replaces the summary.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Hammersley's one-parameter family of sofas.
    Hammersley {
        /// Corner radius of the family member.
        #[arg(long, default_value_t = 2.0 / PI)]
        r: f64,
    },
    /// Solve the five-phase junction system.
    Gerver,
    /// Solve the classic four-equation formulation.
    GerverClassic,
    /// Closed-form ambidextrous sofa constants, area, and length.
    Ambi,
    /// Run the full verification suite.
    Verify {
        /// Check a single boundary segment against its declared curve.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=18))]
        segment: Option<u8>,
    },
    /// Draw a built shape.
    Render {
        /// Which sofa to draw.
        #[arg(value_enum, default_value_t = Target::Ambi)]
        shape: Target,
        /// Corner radius when drawing the Hammersley sofa.
        #[arg(long, default_value_t = 2.0 / PI)]
        r: f64,
    },
    /// Write an animation of the hallway sweep as numbered SVG files.
    Frames {
        /// Which sofa to sweep.
        #[arg(value_enum, default_value_t = Target::Ambi)]
        shape: Target,
        /// Corner radius when sweeping the Hammersley sofa.
        #[arg(long, default_value_t = 2.0 / PI)]
        r: f64,
        /// Number of frames.
        #[arg(long, default_value_t = 32)]
        frames: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Gerver,
    Ambi,
    Hammersley,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-15..=1e-3).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} not in [1e-15, 1e-3]"))
    }
}

fn parse_n_angles(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if (8..=65536).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} not in [8, 65536]"))
    }
}

// ---- outcome plumbing ----

enum Failure {
    /// Flag combination that parsing alone cannot reject.
    Usage(String),
    /// Solver, builder, or I/O failure.
    Run(String),
}

impl From<sofa_core::Error> for Failure {
    fn from(e: sofa_core::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(64);
        }
    };

    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Hammersley { r } => hammersley_command(&cli, r),
        Command::Gerver => gerver_command(&cli),
        Command::GerverClassic => classic_command(&cli),
        Command::Ambi => ambi_command(&cli),
        Command::Verify { segment } => verify_command(&cli, segment),
        Command::Render { shape, r } => render_command(&cli, shape, r),
        Command::Frames { shape, r, frames } => frames_command(&cli, shape, r, frames),
    }
}

// ---- artifact routing ----

/// Send the artifact where the flags ask: to `--out` if given, to stdout
/// if only `--format` is given, nowhere otherwise. Returns whether the
/// summary still belongs on stdout.
fn emit(cli: &Cli, artifact: &str) -> Result<bool, Failure> {
    if let Some(path) = &cli.out {
        std::fs::write(path, artifact)?;
        Ok(true)
    } else if cli.format.is_some() {
        print!("{artifact}");
        Ok(false)
    } else {
        Ok(true)
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

/// `name,value` rows with full-precision values.
fn constants_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("name,value\n");
    for (name, value) in rows {
        let _ = writeln!(out, "{name},{value:.16e}");
    }
    out
}

/// A summary line: name, computed value, and an optional
/// `(reference, relative tolerance)` pair to mark it against.
type SummaryRow<'a> = (&'a str, f64, Option<(f64, f64)>);

/// Summary rows, marking values that have a reference to compare against.
fn summary_table(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|(n, _, _)| n.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (name, value, against) in rows {
        match against {
            Some((reference, rel)) => {
                let pass = (value - reference).abs() <= rel * (1.0 + reference.abs());
                let _ = writeln!(
                    out,
                    "[{}] {name:width$}  {value:>23.16e}",
                    if pass { "PASS" } else { "FAIL" },
                );
            }
            None => {
                let _ = writeln!(out, "       {name:width$}  {value:>23.16e}");
            }
        }
    }
    out
}

fn all_marks_pass(rows: &[SummaryRow]) -> bool {
    rows.iter().all(|(_, value, against)| {
        against.map_or(true, |(reference, rel)| {
            (value - reference).abs() <= rel * (1.0 + reference.abs())
        })
    })
}

// ---- shape helpers ----

fn target_path(target: Target, r: f64, tol: f64) -> Result<RotationPath, Failure> {
    match target {
        Target::Gerver => Ok(gerver::solve_gerver(tol)?.path()?),
        Target::Ambi => Ok(ambi::closed_form_params().path()?),
        Target::Hammersley => Ok(hammersley_path(r)?),
    }
}

fn target_shape(target: Target, path: &RotationPath, n_angles: usize) -> Result<SofaShape, Failure> {
    let built = build_shape(
        path,
        &BuildOptions {
            n_angles,
            include_ends: true,
        },
    )?;
    if target == Target::Ambi {
        Ok(symmetrize_ambidextrous(&built)?)
    } else {
        Ok(built)
    }
}

#[derive(Serialize)]
struct ShapePayload {
    shape: &'static str,
    n_angles: usize,
    polygon_area: f64,
    vertices: Vec<[f64; 2]>,
}

fn shape_payload(name: &'static str, shape: &SofaShape) -> ShapePayload {
    ShapePayload {
        shape: name,
        n_angles: shape.n_angles(),
        polygon_area: shape.polygon().area(),
        vertices: shape
            .polygon()
            .vertices()
            .iter()
            .map(|v| [v.x, v.y])
            .collect(),
    }
}

// ---- commands ----

#[derive(Serialize)]
struct HammersleyPayload {
    r: f64,
    area: f64,
    optimal_radius: f64,
    peak_area: f64,
    n_angles: usize,
    polygon_area: f64,
}

fn hammersley_command(cli: &Cli, r: f64) -> Outcome {
    let path = hammersley_path(r)?;
    let shape = build_shape(
        &path,
        &BuildOptions {
            n_angles: cli.n_angles,
            include_ends: true,
        },
    )?;
    let payload = HammersleyPayload {
        r,
        area: hammersley_area(r),
        optimal_radius: hammersley_optimal_radius(),
        peak_area: hammersley_area(hammersley_optimal_radius()),
        n_angles: cli.n_angles,
        polygon_area: shape.polygon().area(),
    };

    let artifact = match format_or(cli, Format::Json) {
        Format::Json => to_json_string(&payload),
        Format::Csv => polygon_csv(shape.polygon()),
        Format::Svg => shape_svg(&shape, None, &SvgOptions::default()),
    };
    if emit(cli, &artifact)? {
        let rows = [
            ("r", payload.r, None),
            ("area", payload.area, None),
            (
                "optimal radius",
                payload.optimal_radius,
                Some((2.0 / PI, 1e-14)),
            ),
            (
                "peak area",
                payload.peak_area,
                Some((FRAC_PI_2 + 2.0 / PI, 1e-14)),
            ),
            ("polygon area", payload.polygon_area, None),
        ];
        print!("{}", summary_table(&rows));
    }
    Ok(0)
}

#[derive(Serialize)]
struct ConstantsPayload {
    constants: Vec<ConstantRow>,
    area_by_boundary: Option<f64>,
    polygon_area: f64,
    n_angles: usize,
}

#[derive(Serialize)]
struct ConstantRow {
    name: &'static str,
    value: f64,
}

fn gerver_command(cli: &Cli) -> Outcome {
    let params = gerver::solve_gerver(cli.tol)?;
    let shape = target_shape(Target::Gerver, &params.path()?, cli.n_angles)?;
    let attribution = attribute_boundary(&shape)?;
    let exact_area = area_by_boundary(&shape, &attribution)?;

    let payload = ConstantsPayload {
        constants: params
            .table()
            .iter()
            .map(|&(name, value)| ConstantRow { name, value })
            .collect(),
        area_by_boundary: Some(exact_area),
        polygon_area: shape.polygon().area(),
        n_angles: cli.n_angles,
    };
    let artifact = match format_or(cli, Format::Json) {
        Format::Json => to_json_string(&payload),
        Format::Csv => constants_csv(&params.table()),
        Format::Svg => shape_svg(&shape, Some(&attribution), &SvgOptions::default()),
    };

    let rows: Vec<SummaryRow> = params
        .table()
        .iter()
        .zip(gerver::reference::TABLE)
        .map(|(&(name, value), (_, reference))| (name, value, Some((reference, 1e-11))))
        .chain([(
            "area by boundary",
            exact_area,
            Some((gerver::reference::AREA, 1e-6)),
        )])
        .collect();
    if emit(cli, &artifact)? {
        print!("{}", summary_table(&rows));
    }
    if all_marks_pass(&rows) {
        Ok(0)
    } else {
        Ok(2)
    }
}

#[derive(Serialize)]
struct ClassicPayload {
    phi: f64,
    theta: f64,
    a: f64,
    b: f64,
    residuals: [f64; 4],
}

fn classic_command(cli: &Cli) -> Outcome {
    if cli.format == Some(Format::Svg) {
        return Err(Failure::Usage(
            "gerver-classic has no drawing; use json or csv".into(),
        ));
    }
    let params = gerver::solve_classic(cli.tol)?;
    let payload = ClassicPayload {
        phi: params.phi,
        theta: params.theta,
        a: params.a,
        b: params.b,
        residuals: gerver::classic_residuals(&params),
    };
    let named = [
        ("phi", params.phi),
        ("theta", params.theta),
        ("a", params.a),
        ("b", params.b),
    ];
    let artifact = match format_or(cli, Format::Json) {
        Format::Json => to_json_string(&payload),
        Format::Csv => constants_csv(&named),
        Format::Svg => unreachable!(),
    };

    let rows = [
        ("phi", params.phi, Some((gerver::reference::PHI, 1e-10))),
        ("theta", params.theta, Some((gerver::reference::THETA, 1e-10))),
        ("a", params.a, None),
        ("b", params.b, None),
    ];
    if emit(cli, &artifact)? {
        print!("{}", summary_table(&rows));
    }
    if all_marks_pass(&rows) {
        Ok(0)
    } else {
        Ok(2)
    }
}

#[derive(Serialize)]
struct AmbiPayload {
    beta: f64,
    area: f64,
    length: f64,
    constants: Vec<ConstantRow>,
}

fn ambi_command(cli: &Cli) -> Outcome {
    let params = ambi::closed_form_params();
    let area = ambi::area_by_integral(&params, cli.tol.max(1e-13))?;
    let length = ambi::length(&params)?;

    let payload = AmbiPayload {
        beta: params.beta,
        area,
        length,
        constants: params
            .table()
            .iter()
            .map(|&(name, value)| ConstantRow { name, value })
            .collect(),
    };
    let artifact = match format_or(cli, Format::Json) {
        Format::Json => to_json_string(&payload),
        Format::Csv => constants_csv(&params.table()),
        Format::Svg => {
            let shape = target_shape(Target::Ambi, &params.path()?, cli.n_angles)?;
            let attribution = attribute_boundary(&shape)?;
            shape_svg(&shape, Some(&attribution), &SvgOptions::default())
        }
    };

    let rows: Vec<SummaryRow> = params
        .table()
        .iter()
        .zip(ambi::reference::TABLE)
        .map(|(&(name, value), (_, reference))| (name, value, Some((reference, 1e-13))))
        .chain([
            ("area", area, Some((ambi::reference::AREA, 1e-11))),
            ("length", length, Some((ambi::reference::LENGTH, 1e-12))),
        ])
        .collect();
    if emit(cli, &artifact)? {
        print!("{}", summary_table(&rows));
    }
    if all_marks_pass(&rows) {
        Ok(0)
    } else {
        Ok(2)
    }
}

fn verify_command(cli: &Cli, segment: Option<u8>) -> Outcome {
    if cli.format == Some(Format::Svg) {
        return Err(Failure::Usage(
            "verify reports have no drawing; use json or csv".into(),
        ));
    }

    if let Some(id) = segment {
        let params = ambi::closed_form_params();
        let check = check_curve_membership(&params, id as usize, 256)?;
        let line = format!(
            "[{}] segment {} on {:?}: max residual {:.3e} over {} samples (limit {:.1e})\n",
            if check.passes() { "PASS" } else { "FAIL" },
            check.segment,
            check.curve,
            check.max_residual,
            check.samples,
            check.threshold,
        );
        let artifact = match format_or(cli, Format::Json) {
            Format::Json => to_json_string(&check_entry_payload(&check)),
            Format::Csv => format!(
                "segment,max_residual,threshold,pass\n{},{:.16e},{:.16e},{}\n",
                check.segment,
                check.max_residual,
                check.threshold,
                check.passes()
            ),
            Format::Svg => unreachable!(),
        };
        if emit(cli, &artifact)? {
            print!("{line}");
        }
        return Ok(if check.passes() { 0 } else { 2 });
    }

    let report = report::run_verification()?;
    let artifact = match format_or(cli, Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => {
            let mut out = String::from("check,value,residual,threshold,pass\n");
            for c in &report.checks {
                let _ = writeln!(
                    out,
                    "{},{:.16e},{:.16e},{:.16e},{}",
                    c.check, c.value, c.residual, c.threshold, c.pass
                );
            }
            out
        }
        Format::Svg => unreachable!(),
    };
    if emit(cli, &artifact)? {
        print!("{}", report.format_table());
    }
    Ok(if report.all_pass { 0 } else { 2 })
}

#[derive(Serialize)]
struct SegmentCheckPayload {
    segment: usize,
    curve: String,
    samples: usize,
    max_residual: f64,
    threshold: f64,
    pass: bool,
}

fn check_entry_payload(check: &sofa_core::algebraic::CurveCheck) -> SegmentCheckPayload {
    SegmentCheckPayload {
        segment: check.segment,
        curve: format!("{:?}", check.curve),
        samples: check.samples,
        max_residual: check.max_residual,
        threshold: check.threshold,
        pass: check.passes(),
    }
}

fn render_command(cli: &Cli, target: Target, r: f64) -> Outcome {
    let path = target_path(target, r, cli.tol)?;
    let shape = target_shape(target, &path, cli.n_angles)?;
    let name = match target {
        Target::Gerver => "gerver",
        Target::Ambi => "ambi",
        Target::Hammersley => "hammersley",
    };

    let artifact = match format_or(cli, Format::Svg) {
        Format::Svg => {
            let attribution = attribute_boundary(&shape)?;
            shape_svg(&shape, Some(&attribution), &SvgOptions::default())
        }
        Format::Csv => polygon_csv(shape.polygon()),
        Format::Json => to_json_string(&shape_payload(name, &shape)),
    };
    if emit(cli, &artifact)? {
        println!(
            "{name}: {} vertices, polygon area {:.12}",
            shape.polygon().vertices().len(),
            shape.polygon().area()
        );
    }
    Ok(0)
}

fn frames_command(cli: &Cli, target: Target, r: f64, frames: usize) -> Outcome {
    if matches!(cli.format, Some(f) if f != Format::Svg) {
        return Err(Failure::Usage("frames are always SVG".into()));
    }
    if frames == 0 || frames > 4096 {
        return Err(Failure::Usage(format!("{frames} frames not in [1, 4096]")));
    }
    let path = target_path(target, r, cli.tol)?;
    let shape = target_shape(target, &path, cli.n_angles)?;

    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)?;
    let rendered = animation_frames(&path, Some(&shape), frames, &SvgOptions::default());
    for (i, svg) in rendered.iter().enumerate() {
        std::fs::write(dir.join(format!("frame_{i:04}.svg")), svg)?;
    }
    println!("wrote {} frames to {}", rendered.len(), dir.display());
    Ok(0)
}
