use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use polymix::budget::Budget;
use polymix::haar_measure::{
    cylinder_measure, cylinder_measure_boxed, joint_measure, mixing_experiment, CylinderSpec, Family,
};
use polymix::mixing_analysis::{frobenius_certificate, mixing_bounds, search_relations};
use polymix::parallel_redraw::{catalog, redraw_space, Skeleton, SkeletonJson};
use polymix::report::{analyze, detect_report, exit_code, parse_poly_json, to_json, DEFAULT_K_MAX};
use polymix::{Error, ExponentVec, LaurentPoly, Result};

/// Exact mixing analysis for Z^d-actions given by a Laurent polynomial over F_p.
#[derive(Parser)]
#[command(name = "polymix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureMethod {
    Exact,
    Box,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: support, hull, tightness, bounds, certificate.
    Analyze {
        poly: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        max_k: u32,
    },
    /// Redrawing space of a skeleton file, or of a named catalog polytope.
    Tightness {
        skeleton: Option<PathBuf>,
        #[arg(long, conflicts_with = "skeleton")]
        catalog: Option<String>,
    },
    /// Mixing-order bounds only.
    Bounds { poly: PathBuf },
    /// Frobenius shape certificate for k = 0..=max_k.
    Certify {
        poly: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        max_k: u32,
    },
    /// Haar measure of a cylinder, or of the intersection of its shifts.
    Measure {
        poly: PathBuf,
        /// Cylinder JSON file or inline JSON.
        #[arg(long)]
        cylinder: String,
        /// Shifts as inline JSON `[[..],..]` or a file.
        #[arg(long)]
        shifts: Option<String>,
        #[arg(long, value_enum, default_value = "exact")]
        method: MeasureMethod,
    },
    /// Joint measure versus product of marginals along dilations of a shape.
    Experiment {
        poly: PathBuf,
        /// Shape as inline JSON `[[..],..]` or a file.
        #[arg(long)]
        shape: String,
        /// Cylinder JSON file or inline JSON (one per shape point, or one for all).
        #[arg(long, num_args = 1..)]
        cylinder: Vec<String>,
        /// Dilation factors: `a..b` or a comma list.
        #[arg(long, default_value = "1..8")]
        k_range: String,
    },
    /// Look for a parallel redrawing of N(f) in a tuple of points.
    Detect {
        poly: PathBuf,
        /// Tuple as inline JSON `[[..],..]` or a file.
        #[arg(long)]
        tuple: String,
        #[arg(long = "K", default_value_t = 0)]
        k: u32,
    },
    /// Bounded search for small relations.
    Search {
        poly: PathBuf,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        degree: u32,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_poly(path: &Path) -> Result<LaurentPoly> {
    parse_poly_json(&read(path)?)
}

/// Inline JSON, or else the contents of the named file.
fn json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T> {
    let text = match serde_json::from_str::<Value>(arg) {
        Ok(_) => arg.to_string(),
        Err(_) => read(Path::new(arg))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn parse_ks(text: &str) -> Result<Vec<i64>> {
    let bad = || Error::Parse(format!("bad k range {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    }
}

fn emit<T: Serialize>(value: &T) {
    // a closed pipe downstream is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{}", to_json(value));
}

fn run(cli: Cli) -> Result<ExitCode> {
    let budget = Budget::from_env()?;
    match cli.command {
        Command::Analyze { poly, max_k } => emit(&analyze(&load_poly(&poly)?, max_k)?),
        Command::Tightness { skeleton, catalog: name } => {
            let sk = match (skeleton, name) {
                (Some(path), _) => {
                    let j: SkeletonJson =
                        serde_json::from_str(&read(&path)?).map_err(|e| Error::Parse(e.to_string()))?;
                    Skeleton::try_from(j)?
                }
                (None, Some(name)) => catalog::by_name(&name).ok_or_else(|| {
                    Error::Parse(format!("unknown catalog polytope {name:?}; known: {}", catalog::NAMES.join(", ")))
                })?,
                (None, None) => return Err(Error::Parse("give a skeleton file or --catalog NAME".into())),
            };
            emit(&redraw_space(&sk)?);
        }
        Command::Bounds { poly } => emit(&mixing_bounds(&load_poly(&poly)?)?),
        Command::Certify { poly, max_k } => emit(&frobenius_certificate(&load_poly(&poly)?, max_k)?),
        Command::Measure { poly, cylinder, shifts, method } => {
            let f = load_poly(&poly)?;
            let cyl: CylinderSpec = json_arg(&cylinder)?;
            let cyl = CylinderSpec::new(cyl.window, cyl.values)?;
            let result = match (shifts, method) {
                (None, MeasureMethod::Exact) => cylinder_measure(&f, &cyl)?,
                (None, MeasureMethod::Box) => cylinder_measure_boxed(&f, &cyl, &budget)?,
                (Some(s), MeasureMethod::Exact) => {
                    let shifts: Vec<ExponentVec> = json_arg(&s)?;
                    let events: Vec<_> = shifts.into_iter().map(|n| (n, cyl.clone())).collect();
                    joint_measure(&f, &events)?
                }
                (Some(_), MeasureMethod::Box) => {
                    return Err(Error::Parse("--shifts is only supported with the exact method".into()))
                }
            };
            emit(&result);
            if !result.stabilized {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Experiment { poly, shape, cylinder, k_range } => {
            let f = load_poly(&poly)?;
            let shape: Vec<ExponentVec> = json_arg(&shape)?;
            let cylinders: Vec<CylinderSpec> = cylinder
                .iter()
                .map(|c| json_arg::<CylinderSpec>(c).and_then(|c| CylinderSpec::new(c.window, c.values)))
                .collect::<Result<_>>()?;
            let ks = parse_ks(&k_range)?;
            emit(&mixing_experiment(&f, &Family::Shape { shape, ks }, &cylinders)?);
        }
        Command::Detect { poly, tuple, k } => {
            let f = load_poly(&poly)?;
            let tuple: Vec<ExponentVec> = json_arg(&tuple)?;
            emit(&detect_report(&f, &tuple, k)?);
        }
        Command::Search { poly, r, radius, degree } => {
            emit(&search_relations(&load_poly(&poly)?, r, radius, degree, &budget)?)
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", json!({ "error": e.to_string(), "exit_code": code }));
            ExitCode::from(code as u8)
        }
    }
}
