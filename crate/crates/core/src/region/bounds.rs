use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{band_height, RegionError};

/// Intersection of two disks, two angular sectors and a horizontal band that
/// contains every eigenvalue of every standardized Laplacian of order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionR {
    pub n: usize,
    /// Centers `1/n` and `1 − 1/n`.
    pub centers: [f64; 2],
    pub radius: f64,
    /// Half-angle `π/2 − π/n` of the sector at `0`; the sector at `1` is its mirror image.
    pub half_angle: f64,
    /// `(1/2n) cot(π/2n)`.
    pub band: f64,
}

pub fn region_r(n: usize) -> Result<RegionR, RegionError> {
    if n < 2 {
        return Err(RegionError::BadOrder(n));
    }
    let inv = 1.0 / n as f64;
    Ok(RegionR {
        n,
        centers: [inv, 1.0 - inv],
        radius: 1.0 - inv,
        half_angle: PI / 2.0 - PI * inv,
        band: band_height(n),
    })
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closed sector with apex `0`, symmetric about the positive real axis,
/// grown outward by `tol`. Membership uses signed distances to the two
/// bounding rays, plus the bisector side so that a zero half-angle still
/// gives a ray rather than a line.
pub(super) fn in_sector_at_zero(z: Complex64, half_angle: f64, tol: f64) -> bool {
    let upper = Complex64::from_polar(1.0, half_angle);
    let lower = upper.conj();
    cross(lower, z) >= -tol && cross(z, upper) >= -tol && z.re >= -tol
}

fn in_disk(z: Complex64, center: f64, radius: f64, tol: f64) -> bool {
    (z - center).norm() <= radius + tol
}

impl RegionR {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        in_disk(z, self.centers[0], self.radius, tol)
            && in_disk(z, self.centers[1], self.radius, tol)
            && in_sector_at_zero(z, self.half_angle, tol)
            // Reflection in the line Re z = 1/2 maps the sector at 0 to the one at 1.
            && in_sector_at_zero(1.0 - z.conj(), self.half_angle, tol)
            && z.im.abs() <= self.band + tol
    }

    /// Upper corners where the band meets the two sectors, left then right.
    pub fn band_corners(&self) -> [Complex64; 2] {
        let x = self.band * (PI / self.n as f64).tan();
        [Complex64::new(x, self.band), Complex64::new(1.0 - x, self.band)]
    }

    /// The intersection of the sectors and the band, counterclockwise from `0`:
    /// a rhombus for `n = 3`, otherwise a hexagon (a segment for `n = 2`).
    pub fn sector_band_polygon(&self) -> Vec<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        if self.n == 2 {
            return vec![zero, one];
        }
        let [a, b] = self.band_corners();
        if self.n == 3 {
            return vec![zero, a.conj(), one, a];
        }
        vec![zero, a.conj(), b.conj(), one, b, a]
    }

    /// Whether the disks cut nothing off the sector-band polygon, so that `R`
    /// is that polygon and its boundary has no circular arcs.
    pub fn is_polygonal(&self) -> bool {
        self.sector_band_polygon().iter().all(|&v| {
            in_disk(v, self.centers[0], self.radius, 1e-12) && in_disk(v, self.centers[1], self.radius, 1e-12)
        })
    }
}

pub fn region_r_contains(r: &RegionR, z: Complex64, geo_tol: f64) -> bool {
    r.contains(z, geo_tol)
}

/// The coarser region: the disk of radius `1 − 1/n` centered at `1 − 1/n`
/// together with the sector at `0` of half-angle `π/2 − π/n`.
pub fn prop1_region_contains(n: usize, z: Complex64, geo_tol: f64) -> bool {
    let Ok(r) = region_r(n) else { return false };
    in_disk(z, r.centers[1], r.radius, geo_tol) && in_sector_at_zero(z, r.half_angle, geo_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn corners_inside() {
        for n in 2..=40 {
            let r = region_r(n).unwrap();
            assert!(r.contains(c(0.0, 0.0), 0.0) && r.contains(c(1.0, 0.0), 0.0), "n={n}");
            assert!(r.band < r.radius);
        }
    }

    #[test]
    fn order_three_rhombus() {
        let r = region_r(3).unwrap();
        let h = 1.0 / (2.0 * 3f64.sqrt());
        assert!((h - 0.288675).abs() < 1e-6);
        assert!(r.contains(c(0.5, h), 1e-9));
        assert!(!r.contains(c(0.5, h + 1e-6), 1e-9));
        assert!(!r.contains(c(0.25, 0.2), 1e-9));
        assert!(r.contains(c(0.25, 0.14), 1e-9));
        let [a, b] = r.band_corners();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn order_seven_band() {
        let r = region_r(7).unwrap();
        assert!((r.band - 0.3130).abs() < 1e-4);
        assert!(!r.contains(c(0.5, 0.35), 1e-9));
        assert!(r.contains(c(0.5, 0.3), 1e-9));
    }

    #[test]
    fn order_two_is_the_unit_interval() {
        let r = region_r(2).unwrap();
        assert!(r.contains(c(0.3, 0.0), 0.0));
        assert!(!r.contains(c(0.3, 0.01), 1e-9));
        assert!(!r.contains(c(-0.01, 0.0), 1e-9));
        assert!(!r.contains(c(1.01, 0.0), 1e-9));
    }

    #[test]
    fn hexagon_until_eighteen() {
        for n in 4..=18 {
            assert!(region_r(n).unwrap().is_polygonal(), "n={n}");
        }
        for n in 19..=60 {
            assert!(!region_r(n).unwrap().is_polygonal(), "n={n}");
        }
        assert!(region_r(3).unwrap().is_polygonal());
    }

    #[test]
    fn prop1_examples() {
        for n in 2..=9 {
            assert!(prop1_region_contains(n, c(1.0, 0.0), 0.0));
            let eps = 1e-6;
            assert!(!prop1_region_contains(n, c(2.0 - 2.0 / n as f64 + eps, 0.0), 1e-9));
        }
    }

    #[test]
    fn prop1_contains_region_r_on_grid() {
        for n in 2..=12 {
            let r = region_r(n).unwrap();
            for i in 0..=240 {
                for j in 0..=120 {
                    let z = c(-0.2 + 2.4 * i as f64 / 240.0, -0.6 + 1.2 * j as f64 / 120.0);
                    if r.contains(z, 1e-9) {
                        assert!(prop1_region_contains(n, z, 1e-9), "n={n} z={z}");
                    }
                }
            }
        }
    }
}
