//! The `anglers` command line. Every subcommand returns a
//! [`CommandOutcome`]; files are written as pretty JSON with sorted keys.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::angles::{
    build_polytope, build_polytope_with_flats, parse_ratio, perturb, read_flat_skeleton, solve,
    t_max, verify, AngleAssignment, AngleError, AngleFile, AngleScalar, FeasibilityStatus,
    PartiallyFlatAssignment, PartiallyFlatFile,
};
use crate::config::Tolerances;
use crate::layered::{build, BuildMode, Decomposition, LayeredError};
use crate::surfaces::{
    check_admissibility, check_disk_angle_bounds, euler_characteristics, euler_verdict,
    inner_angles, EulerVerdict, SurfaceComplex,
};
use crate::triangulation::{validate, IdealTriangulation, TriangulationData};
use crate::volume_opt::{maximize, total_volume, AscentStatus, MaximizeOptions, VolumeError};

pub const EXIT_OK: i32 = 0;
/// The mathematics says no: infeasible, failed check, violated bound.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "anglers",
    version,
    about = "Angle structures on ideal triangulations with geodesic boundary"
)]
pub struct Cli {
    /// Worker threads for per-tetrahedron computations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a triangulation file and print its edge classes and boundary.
    Validate { triangulation: PathBuf },
    /// Find, verify or perturb angle structures.
    #[command(subcommand)]
    Angles(AnglesCommand),
    /// Evaluate or maximize the volume functional.
    #[command(subcommand)]
    Volume(VolumeCommand),
    /// Check a surface complex and its Euler characteristic.
    #[command(subcommand)]
    Surface(SurfaceCommand),
    /// Build a layered triangulation from a polyhedral decomposition.
    #[command(subcommand)]
    Layered(LayeredCommand),
}

#[derive(Subcommand, Debug)]
pub enum AnglesCommand {
    /// Solve the max-slack program; write a witness or a certificate.
    Find {
        triangulation: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Where to write the certificate; defaults next to `--out`.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Write the witness in units of π (`false` writes radians).
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        exact: bool,
        /// Tags and flat values to hold fixed.
        #[arg(long)]
        flats: Option<PathBuf>,
    },
    /// Check that an angle file is a strict angle structure.
    Verify {
        triangulation: PathBuf,
        angles: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Perturb a partially flat assignment into a strict one.
    Perturb {
        triangulation: PathBuf,
        beta: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// In units of π for rational files, radians otherwise. Defaults to t_max/2.
        #[arg(long)]
        t: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VolumeCommand {
    /// Volume, gradient norm and edge-length residual at a strict point.
    Eval {
        triangulation: PathBuf,
        angles: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Projected gradient ascent of the volume.
    Maximize {
        triangulation: PathBuf,
        angles: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = MaximizeOptions::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = MaximizeOptions::default().max_iters)]
        max_iters: usize,
        #[arg(long, default_value_t = MaximizeOptions::default().guard)]
        guard: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCommand {
    /// Admissibility, disk angle bounds and the Euler characteristic verdict.
    Check {
        triangulation: PathBuf,
        angles: PathBuf,
        surface: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum LayeredCommand {
    /// Cone the cells of a decomposition and insert flat layers.
    Build {
        decomposition: PathBuf,
        /// Compute β from the vertex coordinates.
        #[arg(long)]
        geometry: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub report: String,
    pub artifacts: Vec<PathBuf>,
}

impl fmt::Display for CommandOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report)?;
        for a in &self.artifacts {
            writeln!(f, "wrote {}", a.display())?;
        }
        Ok(())
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

type Outcome = Result<CommandOutcome, Failure>;

fn input(e: impl fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

fn negative(e: impl fmt::Display) -> Failure {
    Failure {
        code: EXIT_NEGATIVE,
        message: e.to_string(),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, value: &Value, artifacts: &mut Vec<PathBuf>) -> Result<(), Failure> {
    fs::write(path, canonical_json(value))
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    artifacts.push(path.to_path_buf());
    Ok(())
}

fn read_triangulation(path: &Path) -> Result<IdealTriangulation, Failure> {
    let data: TriangulationData = serde_json::from_value(read_json(path)?)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    IdealTriangulation::from_data(&data).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_angles(path: &Path) -> Result<AngleFile, Failure> {
    AngleFile::from_value(&read_json(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn triangulation_value(tri: &IdealTriangulation) -> Value {
    serde_json::to_value(tri.to_data()).expect("triangulation serializes")
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CommandOutcome {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let result = match cli.command {
        Command::Validate { triangulation } => cmd_validate(&triangulation),
        Command::Angles(c) => cmd_angles(c),
        Command::Volume(c) => cmd_volume(c),
        Command::Surface(SurfaceCommand::Check {
            triangulation,
            angles,
            surface,
        }) => cmd_surface(&triangulation, &angles, &surface),
        Command::Layered(LayeredCommand::Build {
            decomposition,
            geometry,
            out_dir,
        }) => cmd_layered(&decomposition, geometry, &out_dir),
    };
    result.unwrap_or_else(|f| CommandOutcome {
        code: f.code,
        report: format!("error: {}\n", f.message),
        artifacts: Vec::new(),
    })
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// give exit code 2.
pub fn run_from<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => CommandOutcome {
            code: if e.use_stderr() { EXIT_INPUT } else { EXIT_OK },
            report: e.to_string(),
            artifacts: Vec::new(),
        },
    }
}

fn cmd_validate(path: &Path) -> Outcome {
    let data: TriangulationData = serde_json::from_value(read_json(path)?)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    let report = validate(&data);
    let mut out = String::new();
    writeln!(out, "tetrahedra: {}", data.tets).unwrap();
    if !report.edge_classes.is_empty() {
        writeln!(out, "edge class  valence  corners").unwrap();
        for class in &report.edge_classes {
            let corners: Vec<String> = class.corners.iter().map(|c| c.to_string()).collect();
            let folded = if class.folded { "  (folded)" } else { "" };
            writeln!(
                out,
                "{:>10}  {:>7}  {}{folded}",
                class.id,
                class.valence(),
                corners.join(" ")
            )
            .unwrap();
        }
        let chis: Vec<i64> = report
            .boundary
            .iter()
            .map(|b| b.euler_characteristic())
            .collect();
        writeln!(out, "boundary euler characteristics: {chis:?}").unwrap();
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    for f in &report.failures {
        writeln!(out, "failure: {f}").unwrap();
    }
    writeln!(out, "{}", if report.passed() { "valid" } else { "invalid" }).unwrap();
    Ok(CommandOutcome {
        code: if report.passed() {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        },
        report: out,
        artifacts: Vec::new(),
    })
}

fn float_tol(flag: Option<f64>) -> f64 {
    flag.unwrap_or_else(|| Tolerances::from_env().verify)
}

fn cmd_angles(c: AnglesCommand) -> Outcome {
    match c {
        AnglesCommand::Find {
            triangulation,
            out,
            certificate,
            exact,
            flats,
        } => {
            let certificate = certificate.unwrap_or_else(|| out.with_extension("certificate.json"));
            cmd_find(&triangulation, &out, &certificate, exact, flats.as_deref())
        }
        AnglesCommand::Verify {
            triangulation,
            angles,
            tol,
        } => cmd_verify(&triangulation, &angles, float_tol(tol)),
        AnglesCommand::Perturb {
            triangulation,
            beta,
            out,
            t,
            tol,
        } => cmd_perturb(&triangulation, &beta, &out, t.as_deref(), float_tol(tol)),
    }
}

fn angle_error(e: AngleError) -> Failure {
    match e {
        AngleError::NoInteriorAngle { .. } => negative(e),
        _ => input(e),
    }
}

fn cmd_find(
    tri_path: &Path,
    out_path: &Path,
    certificate_path: &Path,
    exact: bool,
    flats: Option<&Path>,
) -> Outcome {
    let tri = read_triangulation(tri_path)?;
    let fixed = match flats {
        Some(p) => Some(read_flat_skeleton(&read_json(p)?).map_err(input)?),
        None => None,
    };
    let polytope = match &fixed {
        Some((tags, values)) => {
            build_polytope_with_flats(&tri, tags, values).map_err(angle_error)?
        }
        None => build_polytope(&tri),
    };
    let outcome = solve(&polytope);
    let mut report = String::new();
    let mut artifacts = Vec::new();
    writeln!(report, "status: {}", outcome.status.as_str()).unwrap();
    writeln!(report, "optimal slack: {} π", outcome.slack).unwrap();
    if outcome.status == FeasibilityStatus::StrictlyFeasible {
        let witness = outcome.witness.expect("feasible outcomes carry a witness");
        let value = match (&fixed, exact) {
            (Some((tags, _)), true) => PartiallyFlatFile::Exact(PartiallyFlatAssignment {
                values: witness.values,
                tags: tags.clone(),
            })
            .to_value(),
            (Some((tags, _)), false) => PartiallyFlatFile::Radians(PartiallyFlatAssignment {
                values: witness.to_radians().values,
                tags: tags.clone(),
            })
            .to_value(),
            (None, true) => AngleFile::Exact(witness).to_value(),
            (None, false) => AngleFile::Radians(witness.to_radians()).to_value(),
        };
        write(out_path, &value, &mut artifacts)?;
        return Ok(CommandOutcome {
            code: EXIT_OK,
            report,
            artifacts,
        });
    }
    let cert = outcome
        .certificate
        .expect("outcomes without a strict witness carry a certificate");
    match cert.check(&polytope) {
        Ok(bound) => writeln!(
            report,
            "certificate verified: combination bound {bound} <= 0"
        )
        .unwrap(),
        Err(e) => writeln!(report, "certificate does not verify: {e}").unwrap(),
    }
    let mut value = cert.to_value();
    let obj = value.as_object_mut().expect("certificate is an object");
    obj.insert(
        "status".into(),
        Value::String(outcome.status.as_str().into()),
    );
    obj.insert(
        "slack".into(),
        Value::String(format!(
            "{}/{}",
            outcome.slack.numer(),
            outcome.slack.denom()
        )),
    );
    write(certificate_path, &value, &mut artifacts)?;
    Ok(CommandOutcome {
        code: EXIT_NEGATIVE,
        report,
        artifacts,
    })
}

fn cmd_verify(tri_path: &Path, angles_path: &Path, tol: f64) -> Outcome {
    let tri = read_triangulation(tri_path)?;
    let report = match read_angles(angles_path)? {
        AngleFile::Exact(a) => verify(&tri, &a, tol),
        AngleFile::Radians(a) => verify(&tri, &a, tol),
    }
    .map_err(input)?;
    Ok(CommandOutcome {
        code: if report.passed() {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        },
        report: report.to_string(),
        artifacts: Vec::new(),
    })
}

fn perturb_with<S: AngleScalar>(
    tri: &IdealTriangulation,
    beta: &PartiallyFlatAssignment<S>,
    t: Option<S>,
    tol: f64,
    report: &mut String,
) -> Result<AngleAssignment<S>, Failure> {
    beta.validate(tri, tol).map_err(angle_error)?;
    let bound = t_max(tri, beta).map_err(angle_error)?;
    writeln!(
        report,
        "t_max: {:?} (bound by {})",
        bound.value, bound.binding
    )
    .unwrap();
    let t = t.unwrap_or_else(|| bound.value.clone() / S::from_i64(2));
    writeln!(report, "t: {t:?}").unwrap();
    let alpha = perturb(tri, beta, &t).map_err(input)?;
    let check = verify(tri, &alpha, tol).map_err(input)?;
    if !check.passed() {
        return Err(negative(format!(
            "perturbed assignment fails verification:\n{check}"
        )));
    }
    writeln!(report, "strict angle structure verified").unwrap();
    Ok(alpha)
}

fn cmd_perturb(
    tri_path: &Path,
    beta_path: &Path,
    out_path: &Path,
    t: Option<&str>,
    tol: f64,
) -> Outcome {
    let tri = read_triangulation(tri_path)?;
    let beta = PartiallyFlatFile::from_value(&read_json(beta_path)?)
        .map_err(|e| input(format!("{}: {e}", beta_path.display())))?;
    let mut report = String::new();
    let value = match beta {
        PartiallyFlatFile::Exact(b) => {
            let t = t
                .map(|s| {
                    parse_ratio(s).ok_or_else(|| input(format!("bad --t {s:?}, expected p/q")))
                })
                .transpose()?;
            AngleFile::Exact(perturb_with(&tri, &b, t, tol, &mut report)?).to_value()
        }
        PartiallyFlatFile::Radians(b) => {
            let t = t
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| input(format!("bad --t {s:?}, expected radians")))
                })
                .transpose()?;
            AngleFile::Radians(perturb_with(&tri, &b, t, tol, &mut report)?).to_value()
        }
    };
    let mut artifacts = Vec::new();
    write(out_path, &value, &mut artifacts)?;
    Ok(CommandOutcome {
        code: EXIT_OK,
        report,
        artifacts,
    })
}

fn strict_start(tri: &IdealTriangulation, path: &Path) -> Result<AngleAssignment<f64>, Failure> {
    let alpha = read_angles(path)?.to_radians();
    let tol = Tolerances::from_env().verify.max(1e-9);
    let check = verify(tri, &alpha, tol).map_err(input)?;
    if !check.passed() {
        return Err(input(format!(
            "{} is not a strict angle structure: {}",
            path.display(),
            check.failures.join("; ")
        )));
    }
    Ok(alpha)
}

fn volume_error(e: VolumeError) -> Failure {
    match e {
        VolumeError::Geometry { .. } => negative(e),
        _ => input(e),
    }
}

fn cmd_volume(c: VolumeCommand) -> Outcome {
    match c {
        VolumeCommand::Eval {
            triangulation,
            angles,
            out,
        } => {
            let tri = read_triangulation(&triangulation)?;
            let alpha = strict_start(&tri, &angles)?;
            let report = total_volume(&tri, &alpha).map_err(volume_error)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            let mut artifacts = Vec::new();
            if let Some(out) = out {
                write(&out, &value, &mut artifacts)?;
            }
            Ok(CommandOutcome {
                code: EXIT_OK,
                report: canonical_json(&value),
                artifacts,
            })
        }
        VolumeCommand::Maximize {
            triangulation,
            angles,
            out,
            report,
            tol,
            max_iters,
            guard,
        } => {
            let tri = read_triangulation(&triangulation)?;
            let start = strict_start(&tri, &angles)?;
            let options = MaximizeOptions {
                tol,
                max_iters,
                guard,
                ..MaximizeOptions::default()
            };
            let result = maximize(&tri, &start, &options).map_err(volume_error)?;
            let summary = serde_json::json!({
                "volume": result.report.total_volume,
                "iterations": result.iterations,
                "status": result.status.as_str(),
                "residuals": {
                    "gradient_norm": result.report.gradient_norm,
                    "edge_length": result.report.edge_length_residual,
                },
                "pinned": result.pinned,
                "per_tet_volumes": result.report.per_tet_volumes,
            });
            let mut artifacts = Vec::new();
            write(
                &out,
                &AngleFile::Radians(result.alpha.clone()).to_value(),
                &mut artifacts,
            )?;
            if let Some(path) = report {
                write(&path, &summary, &mut artifacts)?;
            }
            let mut text = canonical_json(&summary);
            let code = match result.status {
                AscentStatus::Critical => EXIT_OK,
                AscentStatus::Boundary => {
                    writeln!(
                        text,
                        "warning: the ascent reached the boundary of the angle polytope ({})",
                        result.pinned.join("; ")
                    )
                    .unwrap();
                    EXIT_OK
                }
                AscentStatus::MaxIters | AscentStatus::Stalled => {
                    writeln!(
                        text,
                        "warning: no critical point reached ({})",
                        result.status
                    )
                    .unwrap();
                    EXIT_NEGATIVE
                }
            };
            Ok(CommandOutcome {
                code,
                report: text,
                artifacts,
            })
        }
    }
}

fn surface_report<S: AngleScalar>(
    tri: &IdealTriangulation,
    surface: &SurfaceComplex,
    alpha: &AngleAssignment<S>,
    tol: f64,
    out: &mut String,
) -> Result<bool, Failure> {
    let admissible = check_admissibility(tri, surface).map_err(input)?;
    write!(out, "{admissible}").unwrap();
    let theta = inner_angles(tri, surface, alpha).map_err(input)?;
    let bounds = check_disk_angle_bounds(tri, surface, &theta, tol).map_err(input)?;
    write!(out, "{bounds}").unwrap();
    let euler = euler_characteristics(tri, surface, &theta).map_err(input)?;
    writeln!(out, "chi (cells): {}", euler.chi_combinatorial).unwrap();
    writeln!(out, "chi (angles): {:?}", euler.chi_angle).unwrap();
    if let Some((chi, angle)) = &euler.double {
        writeln!(out, "double: chi (cells) {chi}, chi (angles) {angle:?}").unwrap();
    }
    let verdict = euler_verdict(&euler, &surface.disk_types(), tol);
    let label = match verdict {
        EulerVerdict::Zero => "tube",
        EulerVerdict::Negative { .. } => "negative",
        EulerVerdict::Inconsistent { .. } => "inconsistent",
        EulerVerdict::Contradiction { .. } => "contradiction",
    };
    writeln!(out, "verdict: {label}: {verdict}").unwrap();
    Ok(admissible.passed() && bounds.passed() && verdict.holds())
}

fn cmd_surface(tri_path: &Path, angles_path: &Path, surface_path: &Path) -> Outcome {
    let tri = read_triangulation(tri_path)?;
    let surface = SurfaceComplex::from_json(&read(surface_path)?)
        .map_err(|e| input(format!("{}: {e}", surface_path.display())))?;
    let tol = Tolerances::from_env().verify.max(1e-9);
    let angles = read_angles(angles_path)?;
    let check = verify(&tri, &angles.to_radians(), tol).map_err(input)?;
    if !check.passed() {
        return Err(input(format!(
            "{} is not a strict angle structure: {}",
            angles_path.display(),
            check.failures.join("; ")
        )));
    }
    let mut report = String::new();
    let ok = match &angles {
        AngleFile::Exact(a) => surface_report(&tri, &surface, a, tol, &mut report)?,
        AngleFile::Radians(a) => surface_report(&tri, &surface, a, tol, &mut report)?,
    };
    Ok(CommandOutcome {
        code: if ok { EXIT_OK } else { EXIT_NEGATIVE },
        report,
        artifacts: Vec::new(),
    })
}

fn layered_error(e: LayeredError) -> Failure {
    match e {
        LayeredError::SegmentMissesHyperbolicSpace { .. }
        | LayeredError::NotHyperideal { .. }
        | LayeredError::Geometry { .. }
        | LayeredError::EdgeSum { .. }
        | LayeredError::EdgeWithoutConeCorner { .. }
        | LayeredError::NonOrientable { .. } => negative(e),
        _ => input(e),
    }
}

fn cmd_layered(decomp_path: &Path, geometry: bool, out_dir: &Path) -> Outcome {
    let decomp = Decomposition::from_json(&read(decomp_path)?)
        .map_err(|e| input(format!("{}: {e}", decomp_path.display())))?;
    let mode = if geometry {
        BuildMode::Geometric
    } else {
        BuildMode::Combinatorial
    };
    let out = build(&decomp, mode).map_err(layered_error)?;
    fs::create_dir_all(out_dir).map_err(|e| input(format!("{}: {e}", out_dir.display())))?;
    let mut artifacts = Vec::new();
    write(
        &out_dir.join("triangulation.json"),
        &triangulation_value(&out.triangulation),
        &mut artifacts,
    )?;
    match out.beta_file() {
        Some(beta) => write(&out_dir.join("beta.json"), &beta.to_value(), &mut artifacts)?,
        None => write(
            &out_dir.join("tags.json"),
            &out.skeleton_value(),
            &mut artifacts,
        )?,
    }
    write(
        &out_dir.join("provenance.json"),
        &out.provenance_value(),
        &mut artifacts,
    )?;
    let mut report = String::new();
    writeln!(
        report,
        "tetrahedra: {} ({} cone, {} flat)",
        out.triangulation.tet_count(),
        out.triangulation.tet_count() - out.flat_count(),
        out.flat_count()
    )
    .unwrap();
    for p in 0..decomp.pairings.len() {
        let flats = out.flats_on(p);
        if !flats.is_empty() {
            writeln!(report, "pairing {p}: flats {flats:?}").unwrap();
        }
    }
    Ok(CommandOutcome {
        code: EXIT_OK,
        report,
        artifacts,
    })
}
