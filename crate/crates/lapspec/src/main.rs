//! `lapspec`: spectra, checks and figures for standardized Laplacians.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad usage or
//! input, 3 numerical failure.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use lapspec_core::explorer::formats::{parse_input, parse_matrix_csv, spectrum_json, write_matrix_csv};
use lapspec_core::explorer::{
    emit_figure, run_conjecture, run_verify_suite, sample_mixed, trial_rng, FigureError, FigureKind, TrialConfig,
};
use lapspec_core::linalg::{eigenvalues, eigvals, DEFAULT_EIG_TOL};
use lapspec_core::region::{cycloid_gap, polygon_s, witness_matrix, z_bounds, RegionError};
use lapspec_core::theory::{TheoryError, Tolerances};

#[derive(Parser)]
#[command(name = "lapspec", version, about = "Spectra of standardized digraph Laplacians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the eigenvalues of a square matrix as JSON.
    Spectrum {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EIG_TOL)]
        tol: f64,
    },
    /// Run every applicable spectral check on a digraph (.tsv) or a
    /// standardized Laplacian (.csv).
    Verify {
        input: PathBuf,
        /// Use rational arithmetic for ranks, multiplicities and
        /// characteristic polynomials.
        #[arg(long)]
        exact: bool,
    },
    /// Draw region R and polygon S as SVG.
    Region {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        svg: PathBuf,
        /// Draw the coarser disk-and-sector region instead.
        #[arg(long, conflicts_with = "samples")]
        coarse: bool,
        /// Overlay the eigenvalues of this many sampled matrices.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the vertices of polygon S.
    Polygon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Test sampled spectra against polygon S and region R.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Arc density; given, off-diagonal entries are zero with probability 1 − D.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for matrices with violating eigenvalues.
        #[arg(long)]
        violations_dir: Option<PathBuf>,
        /// Worker threads; capped by LAPSPEC_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Build a standardized Laplacian with eigenvalue X + iY.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true)]
        im: f64,
        /// Also write the matrix as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw polygon S against its limiting cycloid as SVG.
    Cycloid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        svg: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn numerical(message: impl ToString) -> Failure {
    Failure {
        code: 3,
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn figure(kind: FigureKind, n: usize, samples: &[Complex64], path: &Path) -> Result<(), Failure> {
    emit_figure(kind, n, samples, path).map_err(|e| match e {
        FigureError::Io(e) => usage(format!("{}: {e}", path.display())),
        FigureError::Region(e) => usage(e),
    })
}

/// Requested workers, defaulting to the available cores, never above `LAPSPEC_THREADS`.
fn thread_count(requested: Option<usize>) -> Result<usize, Failure> {
    let default = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut threads = requested.unwrap_or(default).max(1);
    if let Ok(cap) = std::env::var("LAPSPEC_THREADS") {
        let cap: usize = cap
            .trim()
            .parse()
            .map_err(|_| usage(format!("LAPSPEC_THREADS: not a count: `{cap}`")))?;
        threads = threads.min(cap.max(1));
    }
    Ok(threads)
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(value: &serde_json::Value) {
    out(&(serde_json::to_string_pretty(value).expect("json value serializes") + "\n"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Spectrum { matrix, tol } => {
            let m = parse_matrix_csv(&read(&matrix)?).map_err(|e| usage(format!("{}: {e}", matrix.display())))?;
            let spec = eigenvalues(&m, tol).map_err(numerical)?;
            print_json(&spectrum_json(&spec));
            Ok(0)
        }
        Command::Verify { input, exact } => {
            let name = input.display().to_string();
            let parsed = parse_input(&name, &read(&input)?).map_err(|e| usage(format!("{name}: {e}")))?;
            let report = run_verify_suite(&parsed, exact, &Tolerances::default()).map_err(|e| match e {
                TheoryError::Linalg(e) => numerical(e),
                e => usage(format!("{name}: {e}")),
            })?;
            print_json(&serde_json::to_value(&report).expect("report serializes"));
            for c in report.failed() {
                eprintln!("FAIL {}: {:e} > {:e}", c.name, c.value, c.bound);
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Region {
            n,
            svg,
            coarse,
            samples,
            seed,
        } => {
            let kind = match (coarse, samples) {
                (true, _) => FigureKind::Region,
                (false, 0) => FigureKind::Polygon,
                _ => FigureKind::Overlay,
            };
            if n < 2 {
                return Err(usage(RegionError::BadOrder(n)));
            }
            let mut points = Vec::new();
            for t in 0..samples {
                let l = sample_mixed(n, &mut trial_rng(seed, t));
                points.extend(eigvals(l.matrix()).map_err(numerical)?);
            }
            figure(kind, n, &points, &svg)?;
            Ok(0)
        }
        Command::Polygon { n, json } => {
            let s = polygon_s(n).map_err(usage)?;
            let z = z_bounds(n).map_err(usage)?;
            if json {
                let vertices: Vec<[f64; 2]> = s.vertices.iter().map(|v| [v.re, v.im]).collect();
                print_json(&json!({ "n": n, "vertices": vertices, "z_bounds": z }));
            } else {
                let text: String = s
                    .vertices
                    .iter()
                    .map(|v| format!("{:.15}\t{:.15}\n", v.re, v.im))
                    .collect();
                out(&text);
            }
            Ok(0)
        }
        Command::Conjecture {
            n,
            trials,
            seed,
            density,
            out: out_path,
            violations_dir,
            threads,
        } => {
            let mut cfg = TrialConfig::new(n, trials, seed);
            if let Some(d) = density {
                cfg = cfg.with_density(d);
            }
            cfg.validate().map_err(usage)?;
            let threads = thread_count(threads)?;
            let report = run_conjecture(&cfg, threads, violations_dir.as_deref()).map_err(usage)?;
            match &out_path {
                Some(path) => write(path, &report.to_json())?,
                None => out(&report.to_json()),
            }
            eprintln!(
                "{} eigenvalues in {} trials on {threads} thread(s), {:.2}s, {} violation(s)",
                report.eigenvalues_tested, trials, report.runtime_secs, report.violation_count
            );
            if report.has_violations() {
                Ok(1)
            } else if !report.numerical_failures.is_empty() {
                Err(numerical(format!(
                    "eigensolver failed on trials {:?}",
                    report.numerical_failures
                )))
            } else {
                Ok(0)
            }
        }
        Command::Witness { n, re, im, out: csv } => {
            let w = match witness_matrix(n, Complex64::new(re, im)) {
                Ok(w) => w,
                Err(e @ RegionError::OutsidePolygon { .. }) => {
                    eprintln!("{e}");
                    return Ok(1);
                }
                Err(e @ RegionError::NotRealized { .. }) => return Err(numerical(e)),
                Err(e) => return Err(usage(e)),
            };
            let m = w.matrix.matrix();
            let rows: Vec<&[f64]> = (0..m.n()).map(|i| m.row(i)).collect();
            print_json(&json!({
                "n": n,
                "eigenvalue": [re, im],
                "coefficients": w.coefficients,
                "segment": w.segment,
                "conjugated": w.conjugated,
                "residual": w.residual,
                "matrix": rows,
            }));
            if let Some(path) = csv {
                write(&path, &write_matrix_csv(m))?;
            }
            Ok(0)
        }
        Command::Cycloid { n, svg } => {
            polygon_s(n).map_err(usage)?;
            figure(FigureKind::Cycloid, n, &[], &svg)?;
            out(&format!("{:e}\n", cycloid_gap(n)));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("lapspec: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
