//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage or
//! input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cover::{refine, uniform_cover, uniform_cover_of_image, Cover};
use crate::fixtures::{canned, random_test_boxes, CANNED_NAMES};
use crate::interleave::{build_interleaving_with, verify_interleaving, BuildOptions, DiagramReport};
use crate::mapper::{categorical_mapper, jcn, lemma61_check_with, mapper_nerve, Lemma61Report};
use crate::reeb::{adapted_cover, geometric_mapper, nerve_betti, reeb_graph, rgraph_isomorphic, IsoMode};
use crate::{load_mesh, set_tolerance, Error, RdSpace, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the intersection tolerance.
pub const TOLERANCE_ENV: &str = "REEBMAPPER_TOL";

/// Shortest representation of `v` after rounding to 12 significant digits.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

#[derive(Parser, Debug)]
#[command(
    name = "reebmapper",
    version,
    about = "Mapper, JCN and Reeb graphs of PL maps with certified interleaving bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mapper nerve of a uniform cover.
    Mapper(CoverArgs),
    /// Reeb graph of a real-valued mesh.
    Reeb(ReebArgs),
    /// Joint Contour Net over the bounding box of the image.
    Jcn(CoverArgs),
    /// Check the colimit formula and verify the interleaving at the cover resolution.
    Verify(VerifyArgs),
    /// Refine the cover repeatedly and report one CSV row per step.
    Converge(ConvergeArgs),
    /// Write a canned fixture as a mesh file.
    Fixture(FixtureArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[arg(long)]
    mesh: PathBuf,
    /// Interval counts per axis, comma separated.
    #[arg(long, default_value = "2")]
    intervals: String,
    #[arg(long, default_value_t = 0.5)]
    gain: f64,
    /// `auto` or `lo,hi[;lo,hi...]`.
    #[arg(long, default_value = "auto")]
    range: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ReebArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    cover: CoverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Redirect one label of the witness before checking it.
    #[arg(long, hide = true)]
    corrupt_witness: bool,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    cover: CoverArgs,
    #[arg(long, default_value_t = 3)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append a wall-time column (milliseconds).
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    /// One of tent, circle4, torus, square_grid_2d.
    #[arg(long)]
    name: String,
    #[arg(long)]
    out: PathBuf,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    if let Ok(tol) = std::env::var(TOLERANCE_ENV) {
        let parsed = tol.trim().parse::<f64>().map_err(|e| Error::Validation(format!("{TOLERANCE_ENV}: {e}")));
        if let Err(e) = parsed.and_then(set_tolerance) {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    }
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Containment(_) | Error::WellDefinedness(_) | Error::Verification(_) => EXIT_CHECK_FAILED,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> Result<i32> {
    match cmd {
        Command::Mapper(a) => cmd_mapper(&a, stdout),
        Command::Reeb(a) => cmd_reeb(&a, stdout),
        Command::Jcn(a) => cmd_jcn(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout, stderr),
        Command::Converge(a) => cmd_converge(&a, stdout),
        Command::Fixture(a) => {
            let fixture = canned(&a.name).map_err(|_| {
                Error::Validation(format!("unknown fixture {:?}; expected one of {CANNED_NAMES:?}", a.name))
            })?;
            fixture.space.save(&a.out)?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_counts(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Validation(format!("--intervals {s:?}: {e}"))))
        .collect()
}

fn parse_range(s: &str) -> Result<Option<Vec<(f64, f64)>>> {
    if s.trim() == "auto" {
        return Ok(None);
    }
    let bad = |why: String| Error::Validation(format!("--range {s:?}: {why}"));
    s.split(';')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(',').collect();
            if parts.len() != 2 {
                return Err(bad("expected lo,hi per axis".into()));
            }
            let lo = parts[0].trim().parse::<f64>().map_err(|e| bad(e.to_string()))?;
            let hi = parts[1].trim().parse::<f64>().map_err(|e| bad(e.to_string()))?;
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn build_cover(x: &RdSpace, a: &CoverArgs) -> Result<Cover> {
    let counts = parse_counts(&a.intervals)?;
    if counts.len() != x.dim_range() {
        return Err(Error::Dimension { expected: x.dim_range(), got: counts.len() });
    }
    match parse_range(&a.range)? {
        None => uniform_cover_of_image(x, &counts, a.gain),
        Some(range) => uniform_cover(&range, &counts, a.gain),
    }
}

fn emit(
    out: Option<&Path>,
    stem: &str,
    format: Format,
    json: &str,
    dot: Option<&str>,
    stdout: &mut dyn std::io::Write,
) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{stem}.json")), json)?;
            if let Some(dot) = dot {
                fs::write(dir.join(format!("{stem}.dot")), dot)?;
            }
        }
        None => {
            let body = match (format, dot) {
                (Format::Dot, Some(dot)) => dot,
                (Format::Dot, None) | (Format::Csv, _) => {
                    return Err(Error::Validation(format!("format {format:?} is not available here")))
                }
                (Format::Json, _) => json,
            };
            stdout.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn cmd_mapper(a: &CoverArgs, stdout: &mut dyn std::io::Write) -> Result<i32> {
    let x = load_mesh(&a.mesh)?;
    let c = build_cover(&x, a)?;
    let m = mapper_nerve(&categorical_mapper(&x, &c)?);
    emit(a.out.as_deref(), "mapper", a.format, &m.to_json_string(), Some(&m.to_dot()), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_reeb(a: &ReebArgs, stdout: &mut dyn std::io::Write) -> Result<i32> {
    let x = load_mesh(&a.mesh)?;
    let g = reeb_graph(&x)?;
    emit(a.out.as_deref(), "reeb", a.format, &g.to_json_string(), Some(&g.to_dot()), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_jcn(a: &CoverArgs, stdout: &mut dyn std::io::Write) -> Result<i32> {
    let x = load_mesh(&a.mesh)?;
    let counts = parse_counts(&a.intervals)?;
    let m = jcn(&x, &counts, a.gain)?;
    emit(a.out.as_deref(), "jcn", a.format, &m.to_json_string(), Some(&m.to_dot()), stdout)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    certified_upper_bound: Option<f64>,
    lemma61: Lemma61Report,
    interleaving: DiagramReport,
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> Result<i32> {
    let x = load_mesh(&a.cover.mesh)?;
    let c = build_cover(&x, &a.cover)?;
    let cm = categorical_mapper(&x, &c)?;
    let boxes = random_test_boxes(&x, &c, 64, a.seed);
    let lemma = lemma61_check_with(&x, &cm, &boxes)?;
    let res = c.resolution();
    let opts = BuildOptions { seed: a.seed, ..BuildOptions::default() };
    let mut w = build_interleaving_with(&x, &c, res, &opts)?;
    if a.corrupt_witness && !w.corrupt_phi() {
        return Err(Error::Validation("witness has no label that can be redirected".into()));
    }
    let report = verify_interleaving(&w);
    let passed = lemma.passed() && report.passed;
    let out =
        VerifyOutput { passed, certified_upper_bound: passed.then_some(res), lemma61: lemma, interleaving: report };
    let json = serde_json::to_string_pretty(&out)?;
    emit(a.cover.out.as_deref(), "verify", Format::Json, &json, None, stdout)?;
    if passed {
        writeln!(stderr, "verified ({}): interleaving distance <= {}", out.interleaving.coverage, format_float(res))?;
        Ok(EXIT_OK)
    } else {
        writeln!(stderr, "verification failed")?;
        Ok(EXIT_CHECK_FAILED)
    }
}

/// Column header of the convergence CSV.
pub const CONVERGE_COLUMNS: &str = "step,resolution,vertices,edges,b0,b1,verified,adapted,reeb_isomorphic";

fn cmd_converge(a: &ConvergeArgs, stdout: &mut dyn std::io::Write) -> Result<i32> {
    if a.steps == 0 {
        return Err(Error::Validation("--steps must be at least 1".into()));
    }
    if a.cover.format == Format::Dot {
        return Err(Error::Validation("converge writes CSV or JSON only".into()));
    }
    let x = load_mesh(&a.cover.mesh)?;
    let mut c = build_cover(&x, &a.cover)?;
    let reeb = if x.dim_range() == 1 { Some(reeb_graph(&x)?) } else { None };
    let mut csv = String::from(CONVERGE_COLUMNS);
    csv.push_str(if a.timings { ",wall_ms\n" } else { "\n" });
    let mut all_verified = true;
    for step in 0..a.steps {
        if step > 0 {
            c = refine(&c)?;
        }
        let start = Instant::now();
        let cm = categorical_mapper(&x, &c)?;
        let m = mapper_nerve(&cm);
        let b = nerve_betti(&m);
        let opts = BuildOptions { seed: a.seed, ..BuildOptions::default() };
        let verified = verify_interleaving(&build_interleaving_with(&x, &c, c.resolution(), &opts)?).passed;
        all_verified &= verified;
        let (adapted, iso) = match &reeb {
            Some(r) => {
                let adapted = adapted_cover(&x, &cm)?;
                let g = geometric_mapper(&cm)?.contract_regular();
                (adapted.to_string(), rgraph_isomorphic(&g, r, IsoMode::Monotone)?.to_string())
            }
            None => ("NA".to_string(), "NA".to_string()),
        };
        write!(
            csv,
            "{step},{},{},{},{},{},{verified},{adapted},{iso}",
            format_float(c.resolution()),
            m.vertex_count(),
            m.edge_count(),
            b.b0,
            b.b1
        )
        .unwrap();
        if a.timings {
            write!(csv, ",{}", format_float(start.elapsed().as_secs_f64() * 1e3)).unwrap();
        }
        csv.push('\n');
    }
    match &a.cover.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("converge.csv"), &csv)?;
        }
        None => stdout.write_all(csv.as_bytes())?,
    }
    Ok(if all_verified { EXIT_OK } else { EXIT_CHECK_FAILED })
}
