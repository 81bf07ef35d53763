use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::formats::write_matrix_csv;
use super::sampling::{sample_with_mode, trial_rng, SampleMode};
use crate::laplacian::StandardizedLaplacian;
use crate::linalg::{eigvals, DEFAULT_CLUSTER_TOL, DEFAULT_EIG_TOL};
use crate::region::{polygon_s, region_r, PolygonS, RegionR, DEFAULT_GEO_TOL};

#[derive(Debug, Clone, Serialize)]
pub struct TrialConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub density: f64,
    pub mode: SampleMode,
    pub cluster_tol: f64,
    pub geo_tol: f64,
    pub eig_tol: f64,
}

impl TrialConfig {
    pub fn new(n: usize, trials: u64, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            density: 1.0,
            mode: SampleMode::DenseUniform,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            geo_tol: DEFAULT_GEO_TOL,
            eig_tol: DEFAULT_EIG_TOL,
        }
    }

    /// Sparse sampling with the given arc density.
    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self.mode = SampleMode::SparseDigraph;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("n must be at least 2, got {}", self.n));
        }
        if self.trials < 1 {
            return Err("trials must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(format!("density must lie in [0, 1], got {}", self.density));
        }
        Ok(())
    }
}

/// An eigenvalue found outside `S` (or, worse, outside `R`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub eigenvalue: [f64; 2],
    /// Largest signed distance beyond an edge of `S`.
    pub distance: f64,
    pub outside_region_r: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_file: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub config: TrialConfig,
    pub eigenvalues_tested: u64,
    pub inside: u64,
    pub violation_count: u64,
    /// Largest signed distance of any tested eigenvalue beyond the edges of
    /// `S`; nonpositive when every eigenvalue is inside.
    pub max_outward_distance: f64,
    pub region_r_failures: u64,
    /// Trials whose eigensolver did not converge; their eigenvalues are not counted.
    pub numerical_failures: Vec<u64>,
    pub violations: Vec<Violation>,
    /// Wall-clock time; kept out of the JSON so that reports are reproducible.
    #[serde(skip)]
    pub runtime_secs: f64,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn has_violations(&self) -> bool {
        self.violation_count > 0 || self.region_r_failures > 0
    }
}

/// Signed distance beyond the nearest-violated edge; `≤ 0` inside.
fn outward_distance(s: &PolygonS, z: Complex64) -> f64 {
    if s.n == 2 {
        return z.im.abs().max(-z.re).max(z.re - 1.0);
    }
    let v = &s.vertices;
    let m = v.len();
    (0..m)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % m]);
            let e = q - p;
            let w = z - p;
            (e.re * w.im - e.im * w.re) / e.norm()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Default)]
struct Partial {
    tested: u64,
    inside: u64,
    max_dist: f64,
    r_fail: u64,
    numerical: Vec<u64>,
    violations: Vec<Violation>,
}

impl Partial {
    fn merge(mut self, mut other: Partial) -> Partial {
        self.tested += other.tested;
        self.inside += other.inside;
        self.max_dist = self.max_dist.max(other.max_dist);
        self.r_fail += other.r_fail;
        self.numerical.append(&mut other.numerical);
        self.violations.append(&mut other.violations);
        self
    }
}

fn run_trial(cfg: &TrialConfig, poly: &PolygonS, region: &RegionR, trial: u64, out_dir: Option<&Path>) -> Partial {
    let mut rng = trial_rng(cfg.seed, trial);
    let l = sample_with_mode(cfg.n, &mut rng, cfg.mode, cfg.density);
    let mut part = Partial {
        max_dist: f64::NEG_INFINITY,
        ..Partial::default()
    };
    let Ok(eigs) = eigvals(l.matrix()) else {
        part.numerical.push(trial);
        return part;
    };
    let mut saved: Option<String> = None;
    for z in eigs {
        part.tested += 1;
        let dist = outward_distance(poly, z);
        part.max_dist = part.max_dist.max(dist);
        let in_r = region.contains(z, cfg.geo_tol);
        part.r_fail += u64::from(!in_r);
        if dist <= cfg.geo_tol && in_r {
            part.inside += 1;
            continue;
        }
        if saved.is_none() {
            saved = out_dir.map(|dir| persist(dir, cfg, trial, &l, z, dist));
        }
        part.violations.push(Violation {
            trial,
            eigenvalue: [z.re, z.im],
            distance: dist,
            outside_region_r: !in_r,
            matrix_file: saved.clone(),
        });
    }
    part
}

/// Writes the matrix and a JSON note before the run goes on; a write failure
/// is reported in the returned path rather than aborting the run.
fn persist(dir: &Path, cfg: &TrialConfig, trial: u64, l: &StandardizedLaplacian, z: Complex64, dist: f64) -> String {
    let stem = format!("violation-n{}-seed{}-trial{}", cfg.n, cfg.seed, trial);
    let csv: PathBuf = dir.join(format!("{stem}.csv"));
    let note = json!({
        "n": cfg.n, "seed": cfg.seed, "trial": trial, "mode": cfg.mode, "density": cfg.density,
        "eigenvalue": [z.re, z.im], "distance": dist,
    });
    let written = fs::create_dir_all(dir)
        .and_then(|_| fs::write(&csv, write_matrix_csv(l.matrix())))
        .and_then(|_| fs::write(dir.join(format!("{stem}.json")), note.to_string() + "\n"));
    match written {
        Ok(()) => csv.display().to_string(),
        Err(e) => format!("unsaved: {e}"),
    }
}

/// Samples `trials` standardized Laplacians and tests every eigenvalue for
/// membership in `S` and in `R`. Trials run on `threads` workers; the report
/// does not depend on the thread count. Matrices with a violating eigenvalue
/// are written to `violations_dir` as soon as they are found.
pub fn run_conjecture(
    cfg: &TrialConfig,
    threads: usize,
    violations_dir: Option<&Path>,
) -> Result<ConjectureReport, String> {
    cfg.validate()?;
    let start = Instant::now();
    let poly = polygon_s(cfg.n).map_err(|e| e.to_string())?;
    let region = region_r(cfg.n).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let total = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, &poly, &region, t, violations_dir))
            .reduce(
                || Partial {
                    max_dist: f64::NEG_INFINITY,
                    ..Partial::default()
                },
                Partial::merge,
            )
    });
    let mut violations = total.violations;
    violations.sort_by(|a, b| {
        a.trial
            .cmp(&b.trial)
            .then(a.eigenvalue[0].total_cmp(&b.eigenvalue[0]))
            .then(a.eigenvalue[1].total_cmp(&b.eigenvalue[1]))
    });
    let mut numerical = total.numerical;
    numerical.sort_unstable();
    Ok(ConjectureReport {
        config: cfg.clone(),
        eigenvalues_tested: total.tested,
        inside: total.inside,
        violation_count: violations.len() as u64,
        max_outward_distance: total.max_dist,
        region_r_failures: total.r_fail,
        numerical_failures: numerical,
        violations,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}
