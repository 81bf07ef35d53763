use std::f64::consts::TAU;

use num_complex::Complex64;

use super::polygon::vertex;

/// `((τ − sin τ)/2π, (1 − cos τ)/2π)` for `τ ∈ [0, 2π]`.
pub fn cycloid_point(tau: f64) -> Complex64 {
    Complex64::new((tau - tau.sin()) / TAU, (1.0 - tau.cos()) / TAU)
}

const GRID: usize = 256;
const BRACKET: f64 = 1e-10;

/// Distance from `z` to the upper cycloid arch: a coarse scan over `τ`
/// followed by golden-section refinement around the best grid point.
pub fn distance_to_cycloid(z: Complex64) -> f64 {
    let dist = |t: f64| (cycloid_point(t) - z).norm();
    let h = TAU / GRID as f64;
    let best = (0..=GRID)
        .min_by(|&a, &b| dist(a as f64 * h).total_cmp(&dist(b as f64 * h)))
        .unwrap_or(0);
    let (mut lo, mut hi) = (((best as f64) - 1.0) * h, ((best as f64) + 1.0) * h);
    lo = lo.max(0.0);
    hi = hi.min(TAU);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (dist(x1), dist(x2));
    while hi - lo > BRACKET {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist(x2);
        }
    }
    f1.min(f2).min(dist(lo)).min(dist(hi))
}

/// Largest distance from an upper vertex of `S(n)` to the cycloid.
pub fn cycloid_gap(n: usize) -> f64 {
    (0..n).map(|k| distance_to_cycloid(vertex(n, k))).fold(0.0, f64::max)
}
