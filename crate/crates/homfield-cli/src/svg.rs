//! Direction-field picture: normalized arrows on a grid over [-1,1]² with
//! the invariant lines drawn through. A visual aid for eyeballing a field,
//! not a faithful topological rendering.

use homfield::band;
use homfield::invlines::{self, DirectionPoly};
use homfield::realroots::{self, Poly, RootError};
use homfield::VectorField;
use std::fmt::Write;

pub const DEFAULT_GRID: usize = 17;

// Minimum padding around the [-1,1]² data square, so the overlays visibly
// run off the sampled region.
const PAD_MIN: f64 = 0.15;

#[derive(Debug, Clone, PartialEq)]
pub enum OverlayError {
    /// Every direction is invariant; the overlay has no content.
    EveryDirectionInvariant,
    /// The slope-root solve failed.
    Roots(RootError),
}

/// Invariant-line slopes of the field, plus whether the vertical line x = 0
/// is invariant. Uses the full root solver rather than the counting lemmas:
/// the picture needs positions, and near-degenerate root patterns that the
/// classifier would refuse still draw fine.
pub fn overlay_slopes(f: &VectorField) -> Result<(Vec<f64>, bool), OverlayError> {
    let dp: DirectionPoly = invlines::direction_poly(f);
    if dp.identically_zero {
        return Err(OverlayError::EveryDirectionInvariant);
    }
    let mut coeffs = dp.coeffs.clone();
    if dp.x_axis_invariant {
        let tol = band::threshold(f.coeff_scale(), 1);
        coeffs.pop();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() < tol) {
            coeffs.pop();
        }
    }
    match realroots::real_roots(&Poly::new(coeffs)) {
        Ok(slopes) => Ok((slopes, dp.x_axis_invariant)),
        Err(RootError::ConstantPolynomial) => Ok((Vec::new(), dp.x_axis_invariant)),
        Err(e) => Err(OverlayError::Roots(e)),
    }
}

/// Renders the field as a standalone SVG 1.1 document: a `grid` × `grid`
/// lattice of direction arrows (the origin is skipped; every homogeneous
/// field vanishes there) and one `class="invariant"` line per invariant
/// line, edge to edge.
pub fn render(f: &VectorField, grid: usize, slopes: &[f64], vertical: bool) -> String {
    assert!(grid >= 2, "need at least a 2x2 arrow grid");
    let cell = 2.0 / (grid - 1) as f64;
    let half = 0.4 * cell;
    let head = 0.35 * half;
    // An arrow centered on the rim of the data square reaches half + head
    // past it; widen the frame for coarse grids so nothing pokes outside
    // the viewBox.
    let frame = 1.0 + (half + head).max(PAD_MIN);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"480\" \
         viewBox=\"{:.4} {:.4} {:.4} {:.4}\">",
        -frame,
        -frame,
        2.0 * frame,
        2.0 * frame
    );
    let _ = writeln!(out, "<desc>direction field of {}</desc>", escape(&f.to_string()));
    let _ = writeln!(
        out,
        "<rect x=\"{:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"white\"/>",
        -frame,
        -frame,
        2.0 * frame,
        2.0 * frame
    );

    out.push_str(
        "<g class=\"invariant\" stroke=\"#b03030\" stroke-width=\"0.02\" stroke-linecap=\"round\">\n",
    );
    for &u in slopes {
        // y = u x, clipped to the frame square
        let t = if u.abs() <= 1.0 { frame } else { frame / u.abs() };
        push_line(&mut out, -t, -t * u, t, t * u);
    }
    if vertical {
        push_line(&mut out, 0.0, -frame, 0.0, frame);
    }
    out.push_str("</g>\n");

    out.push_str(
        "<g class=\"arrows\" stroke=\"#204060\" stroke-width=\"0.01\" stroke-linecap=\"round\">\n",
    );
    for i in 0..grid {
        for j in 0..grid {
            let x = -1.0 + cell * i as f64;
            let y = -1.0 + cell * j as f64;
            let (vx, vy) = f.eval(x, y);
            let norm = vx.hypot(vy);
            if norm < 1e-12 {
                continue;
            }
            let (dx, dy) = (vx / norm, vy / norm);
            let (tip_x, tip_y) = (x + half * dx, y + half * dy);
            push_line(&mut out, x - half * dx, y - half * dy, tip_x, tip_y);
            // arrowhead: two barbs rotated +-150 degrees from the direction
            let (c, s) = (-(3f64.sqrt()) / 2.0, 0.5);
            push_line(
                &mut out,
                tip_x,
                tip_y,
                tip_x + head * (c * dx - s * dy),
                tip_y + head * (s * dx + c * dy),
            );
            push_line(
                &mut out,
                tip_x,
                tip_y,
                tip_x + head * (c * dx + s * dy),
                tip_y + head * (-s * dx + c * dy),
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

// SVG's y axis points down; flip on output so the picture matches the
// mathematical plane.
fn push_line(out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64) {
    let _ = writeln!(
        out,
        "<line x1=\"{x1:.4}\" y1=\"{:.4}\" x2=\"{x2:.4}\" y2=\"{:.4}\"/>",
        -y1, -y2
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
