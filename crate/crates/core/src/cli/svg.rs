//! Planar cross-sections of chamber decompositions.
//!
//! The section plane is the one through the primitive Eff generators listed
//! in the model's `section_frame`: each ray is written in barycentric
//! coordinates with respect to that frame, and the frame is drawn as a fixed
//! triangle (or a segment in Picard rank two). Everything up to the final
//! pixel coordinates is exact.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cones::ChamberDecomposition;
use crate::lattice::{
    primitive_integer, solve_rational, to_rationals, IntegerMatrix, RationalVector,
};
use crate::spaces::{SpaceError, SpaceModel};

pub const WIDTH: u32 = 600;
pub const HEIGHT: u32 = 400;

const PALETTE: [&str; 5] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3"];
const TRIANGLE: [(f64, f64); 3] = [(70.0, 360.0), (530.0, 360.0), (300.0, 40.0)];
const SEGMENT: [(f64, f64); 2] = [(70.0, 200.0), (530.0, 200.0)];
const BAND: f64 = 40.0;

struct Section {
    frame: IntegerMatrix,
}

impl Section {
    fn new(model: &SpaceModel) -> Result<Self, SpaceError> {
        let d = model.basis.len();
        if model.section_frame.len() != d || !(2..=3).contains(&d) {
            return Err(SpaceError::OutOfScope(format!(
                "no planar section for {}",
                model.kind
            )));
        }
        let cols: Vec<Vec<BigInt>> = model
            .section_frame
            .iter()
            .map(|l| {
                let c = model
                    .class(l)
                    .ok_or_else(|| SpaceError::CoordinatesUnknown(model.kind.to_string()))?;
                Ok(primitive_integer(c.coefficients.as_slice()))
            })
            .collect::<Result<_, SpaceError>>()?;
        let rows: Vec<Vec<BigInt>> = (0..d)
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        Ok(Self {
            frame: IntegerMatrix::from_rows(&rows)?,
        })
    }

    /// Barycentric coordinates of the ray through `x`, summing to one.
    fn barycentric(&self, x: &[BigInt]) -> Result<Vec<BigRational>, SpaceError> {
        let lambda = solve_rational(&self.frame, &RationalVector(to_rationals(x)))?
            .ok_or_else(|| SpaceError::OutOfScope("ray outside the section frame".to_string()))?;
        let total: BigRational = lambda.iter().fold(BigRational::zero(), |a, b| a + b);
        if total <= BigRational::zero() {
            return Err(SpaceError::OutOfScope(
                "ray does not meet the section".to_string(),
            ));
        }
        Ok(lambda.iter().map(|l| l / &total).collect())
    }

    fn point(&self, x: &[BigInt]) -> Result<(f64, f64), SpaceError> {
        let lambda = self.barycentric(x)?;
        let vertices: &[(f64, f64)] = if lambda.len() == 3 {
            &TRIANGLE
        } else {
            &SEGMENT
        };
        let mut p = (0.0, 0.0);
        for (l, v) in lambda.iter().zip(vertices) {
            let l = l.to_f64().expect("finite");
            p.0 += l * v.0;
            p.1 += l * v.1;
        }
        Ok(p)
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Orders points counterclockwise around their centroid.
fn convex_order(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let n = pts.len() as f64;
    let c = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    pts.sort_by(|a, b| {
        let ta = (a.1 - c.1).atan2(a.0 - c.0);
        let tb = (b.1 - c.1).atan2(b.0 - c.0);
        ta.total_cmp(&tb)
    });
    pts
}

/// SVG 1.1 drawing of the chambers of `dec`, one filled face per chamber.
pub fn render(model: &SpaceModel, dec: &ChamberDecomposition) -> Result<String, SpaceError> {
    let section = Section::new(model)?;
    let planar = model.basis.len() == 3;
    let nef = model.nef_cone()?;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&model.kind.to_string()));
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    for (i, chamber) in dec.chambers.iter().enumerate() {
        let pts = chamber
            .rays()
            .iter()
            .map(|r| section.point(r))
            .collect::<Result<Vec<_>, _>>()?;
        let fill = PALETTE[i % PALETTE.len()];
        let width = if *chamber == nef { "2.5" } else { "1" };
        if planar {
            let pts: Vec<String> = convex_order(pts)
                .iter()
                .map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="{width}"/>"#,
                pts.join(" ")
            );
        } else {
            let (lo, hi) = pts
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p.0), hi.max(p.0))
                });
            let y = SEGMENT[0].1 - BAND / 2.0;
            let _ = writeln!(
                s,
                r#"<polygon points="{a},{y0} {b},{y0} {b},{y1} {a},{y1}" fill="{fill}" stroke="black" stroke-width="{width}"/>"#,
                a = fmt(lo),
                b = fmt(hi),
                y0 = fmt(y),
                y1 = fmt(y + BAND),
            );
        }
    }

    // Labels sit just outside the drawing, away from its center.
    let center = if planar {
        (300.0, 253.33)
    } else {
        (300.0, SEGMENT[0].1)
    };
    for ray in &dec.rays {
        let (x, y) = section.point(ray)?;
        let label = model
            .label_of_ray(ray)
            .map(str::to_string)
            .unwrap_or_else(|| RationalVector(to_rationals(ray)).to_string());
        let (dx, dy) = if planar {
            let (vx, vy) = (x - center.0, y - center.1);
            let len = (vx * vx + vy * vy).sqrt();
            if len < 1e-9 {
                (0.0, -14.0)
            } else {
                (vx / len * 16.0, vy / len * 16.0 + 4.0)
            }
        } else {
            (0.0, -BAND / 2.0 - 8.0)
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#,
            fmt(x),
            fmt(y)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
            fmt(x + dx),
            fmt(y + dy),
            escape(&label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
