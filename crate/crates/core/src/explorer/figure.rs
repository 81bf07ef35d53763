//! SVG figures of the eigenvalue regions. Output bytes depend only on the
//! arguments: coordinates are printed with two decimals on a fixed
//! 800 x 500 canvas.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::region::{cycloid_point, polygon_s, prop1_region_contains, region_r, RegionError};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 30.0;
const RAYS: usize = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// The disk-and-sector region containing all spectra.
    Region,
    /// Region `R` hatched, with the polygon `S` drawn over it.
    Polygon,
    /// The polygon `S` against the limiting cycloid arches.
    Cycloid,
    /// As `Polygon`, with sampled eigenvalues as dots.
    Overlay,
}

#[derive(Debug, Error)]
pub enum FigureError {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct Frame {
    scale: f64,
    ox: f64,
    oy: f64,
}

impl Frame {
    /// Equal-aspect map of `[x0, x1] × [−y, y]` centered in the canvas.
    fn new(x0: f64, x1: f64, y: f64) -> Self {
        let scale = ((WIDTH - 2.0 * MARGIN) / (x1 - x0)).min((HEIGHT - 2.0 * MARGIN) / (2.0 * y));
        let ox = WIDTH / 2.0 - scale * (x0 + x1) / 2.0;
        Frame {
            scale,
            ox,
            oy: HEIGHT / 2.0,
        }
    }

    fn pt(&self, z: Complex64) -> (f64, f64) {
        (self.ox + self.scale * z.re, self.oy - self.scale * z.im)
    }

    fn path(&self, pts: &[Complex64], close: bool) -> String {
        let mut d = String::new();
        for (i, &z) in pts.iter().enumerate() {
            let (x, y) = self.pt(z);
            let _ = write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
        }
        if close {
            d.push_str(" Z");
        }
        d
    }
}

/// Boundary of a convex set containing `center`, by bisection along rays.
fn convex_boundary(center: Complex64, contains: impl Fn(Complex64) -> bool) -> Vec<Complex64> {
    (0..RAYS)
        .map(|i| {
            let dir = Complex64::from_polar(1.0, TAU * i as f64 / RAYS as f64);
            let (mut lo, mut hi) = (0.0, 4.0);
            for _ in 0..48 {
                let mid = 0.5 * (lo + hi);
                if contains(center + dir * mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            center + dir * lo
        })
        .collect()
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"##
    );
    out.push_str(concat!(
        "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\" ",
        "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" ",
        "stroke=\"#2a5d9f\" stroke-width=\"1\"/></pattern></defs>\n",
    ));
    let _ = writeln!(out, r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"##);
}

fn axes(out: &mut String, f: &Frame, x0: f64, x1: f64, y: f64) {
    let (ax0, ay) = f.pt(Complex64::new(x0, 0.0));
    let (ax1, _) = f.pt(Complex64::new(x1, 0.0));
    let (ox, oy0) = f.pt(Complex64::new(0.0, y));
    let (_, oy1) = f.pt(Complex64::new(0.0, -y));
    let _ = writeln!(
        out,
        r##"<g stroke="#888" stroke-width="0.8"><line x1="{ax0:.2}" y1="{ay:.2}" x2="{ax1:.2}" y2="{ay:.2}"/><line x1="{ox:.2}" y1="{oy0:.2}" x2="{ox:.2}" y2="{oy1:.2}"/></g>"##
    );
    for t in [0.0, 1.0] {
        let (tx, ty) = f.pt(Complex64::new(t, 0.0));
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#444">{t}</text>"##,
            tx + 3.0,
            ty + 14.0
        );
    }
}

fn title(out: &mut String, text: &str) {
    let _ = writeln!(
        out,
        r##"<text x="{MARGIN}" y="{:.2}" font-family="sans-serif" font-size="14" fill="#222">{text}</text>"##,
        MARGIN - 8.0
    );
}

/// SVG text of a figure.
pub fn render_figure(kind: FigureKind, n: usize, samples: &[Complex64]) -> Result<String, FigureError> {
    let r = region_r(n)?;
    let s = polygon_s(n)?;
    let mut out = String::new();
    header(&mut out);
    match kind {
        FigureKind::Region => {
            let x1 = 2.0 * r.radius + 0.1;
            let y = r.radius + 0.1;
            let f = Frame::new(-0.1, x1, y);
            axes(&mut out, &f, -0.1, x1, y);
            let b = convex_boundary(Complex64::new(0.5, 0.0), |z| prop1_region_contains(n, z, 0.0));
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="#dbe8f6" stroke="#2a5d9f" stroke-width="1.5"/>"##,
                f.path(&b, true)
            );
            title(&mut out, &format!("disk and sector, n = {n}"));
        }
        FigureKind::Polygon | FigureKind::Overlay => {
            let f = Frame::new(-0.1, 1.1, 0.45);
            axes(&mut out, &f, -0.1, 1.1, 0.45);
            let b = convex_boundary(Complex64::new(0.5, 0.0), |z| r.contains(z, 0.0));
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="url(#hatch)" stroke="#2a5d9f" stroke-width="1.2"/>"##,
                f.path(&b, true)
            );
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="none" stroke="#b03a2e" stroke-width="1.5"/>"##,
                f.path(&s.vertices, true)
            );
            if kind == FigureKind::Overlay {
                out.push_str("<g fill=\"#222\">\n");
                for &z in samples {
                    let (x, y) = f.pt(z);
                    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
                }
                out.push_str("</g>\n");
            }
            title(&mut out, &format!("region R and polygon S, n = {n}"));
        }
        FigureKind::Cycloid => {
            let f = Frame::new(-0.1, 1.1, 0.45);
            axes(&mut out, &f, -0.1, 1.1, 0.45);
            let arch: Vec<Complex64> = (0..=400).map(|i| cycloid_point(TAU * i as f64 / 400.0)).collect();
            let lower: Vec<Complex64> = arch.iter().map(|z| z.conj()).collect();
            for c in [&arch, &lower] {
                let _ = writeln!(
                    out,
                    r##"<path d="{}" fill="none" stroke="#555" stroke-width="1" stroke-dasharray="4 3"/>"##,
                    f.path(c, false)
                );
            }
            let _ = writeln!(
                out,
                r##"<path d="{}" fill="none" stroke="#b03a2e" stroke-width="1.5"/>"##,
                f.path(&s.vertices, true)
            );
            let (ax, ay) = f.pt(Complex64::new(0.5, 1.0 / PI));
            let _ = writeln!(out, r##"<circle cx="{ax:.2}" cy="{ay:.2}" r="2" fill="#555"/>"##);
            title(&mut out, &format!("polygon S and cycloid limit, n = {n}"));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_figure(kind: FigureKind, n: usize, samples: &[Complex64], path: &Path) -> Result<(), FigureError> {
    std::fs::write(path, render_figure(kind, n, samples)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        for kind in [
            FigureKind::Region,
            FigureKind::Polygon,
            FigureKind::Cycloid,
            FigureKind::Overlay,
        ] {
            let a = render_figure(kind, 7, &[Complex64::new(0.3, 0.1)]).unwrap();
            let b = render_figure(kind, 7, &[Complex64::new(0.3, 0.1)]).unwrap();
            assert_eq!(a, b);
            assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
            assert!(a.contains(r#"viewBox="0 0 800 500""#));
        }
        assert!(render_figure(FigureKind::Region, 1, &[]).is_err());
    }

    #[test]
    fn region_boundary_reaches_the_disk_edge() {
        let n = 7;
        let b = convex_boundary(Complex64::new(0.5, 0.0), |z| prop1_region_contains(n, z, 0.0));
        let far = b.iter().map(|z| z.re).fold(0.0, f64::max);
        assert!((far - 2.0 * (1.0 - 1.0 / n as f64)).abs() < 1e-9);
    }

    #[test]
    fn overlay_region_is_the_hexagon() {
        let r = region_r(7).unwrap();
        let b = convex_boundary(Complex64::new(0.5, 0.0), |z| r.contains(z, 0.0));
        let top = b.iter().map(|z| z.im).fold(0.0, f64::max);
        assert!((top - r.band).abs() < 1e-9);
        assert!(r.is_polygonal());
        let svg = render_figure(FigureKind::Overlay, 7, &[Complex64::new(0.2, 0.1); 3]).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("url(#hatch)"));
    }

    #[test]
    fn cycloid_figure_polygon_inside_envelope() {
        let s = polygon_s(4).unwrap();
        for &v in s.upper() {
            // Height of the arch at the vertex abscissa bounds the vertex from above.
            let mut lo = 0.0;
            let mut hi = TAU;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if cycloid_point(mid).re < v.re {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!(v.im <= cycloid_point(lo).im + 1e-12);
        }
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.svg");
        emit_figure(FigureKind::Cycloid, 4, &[], &p).unwrap();
        assert!(std::fs::read_to_string(p).unwrap().contains("stroke-dasharray"));
    }
}
