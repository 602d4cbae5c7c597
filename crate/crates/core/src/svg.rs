//! Minimal SVG 1.1 scenes: polylines, marked points, a domain outline and an
//! optional coarse raster of a scalar field.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt::Write as _;
use std::path::Path;

/// Largest raster emitted per axis; finer fields are block-averaged.
const MAX_RASTER: usize = 64;

/// Plain decimal with `sig` significant digits and trailing zeros removed.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Path data `M x y L x y ...` in absolute coordinates, 12 significant digits.
pub fn path_data(points: &[Complex64], closed: bool) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{} {} ", cmd, fmt_sig(p.re, 12), fmt_sig(p.im, 12));
    }
    if closed {
        d.push('Z');
    }
    d.trim_end().to_string()
}

/// Samples on a regular grid, row-major (`values[j * nx + i]` at
/// `(x0 + i dx, y0 + j dy)`).
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Curve {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub curves: Vec<Curve>,
    pub points: Vec<Complex64>,
    pub outline: Option<Curve>,
    pub field: Option<ScalarField>,
}

impl Scene {
    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.points.is_empty() && self.outline.is_none() && self.field.is_none()
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Complex64| {
            if p.re.is_finite() && p.im.is_finite() {
                b = (b.0.min(p.re), b.1.min(p.im), b.2.max(p.re), b.3.max(p.im));
            }
        };
        for c in self.curves.iter().chain(self.outline.iter()) {
            c.points.iter().copied().for_each(&mut add);
        }
        self.points.iter().copied().for_each(&mut add);
        if let Some(f) = &self.field {
            add(Complex64::new(f.x0, f.y0));
            add(Complex64::new(f.x0 + f.dx * (f.nx.max(1) - 1) as f64, f.y0 + f.dy * (f.ny.max(1) - 1) as f64));
        }
        if !b.0.is_finite() {
            return (-1.0, -1.0, 1.0, 1.0);
        }
        b
    }
}

fn grey(t: f64) -> String {
    let v = (255.0 * t.clamp(0.0, 1.0)).round() as u8;
    format!("#{v:02x}{v:02x}{v:02x}")
}

pub fn render_svg(scene: &Scene) -> Result<String> {
    if scene.is_empty() {
        return Err(Error::EmptyScene);
    }
    let (x0, y0, x1, y1) = scene.bounds();
    let (mut w, mut h) = (x1 - x0, y1 - y0);
    if w <= 0.0 {
        w = h.max(1.0);
    }
    if h <= 0.0 {
        h = w;
    }
    let (mx, my) = (0.05 * w, 0.05 * h);
    // content is drawn with y up; the group flips it
    let (vx, vy, vw, vh) = (x0 - mx, -(y1 + my), w + 2.0 * mx, h + 2.0 * my);
    let stroke = fmt_sig(0.002 * vw.max(vh), 6);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}">"#,
        fmt_sig(vx, 12),
        fmt_sig(vy, 12),
        fmt_sig(vw, 12),
        fmt_sig(vh, 12)
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    if let Some(f) = &scene.field {
        let bx = f.nx.div_ceil(MAX_RASTER).max(1);
        let by = f.ny.div_ceil(MAX_RASTER).max(1);
        let finite = f.values.iter().copied().filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        for j0 in (0..f.ny).step_by(by) {
            for i0 in (0..f.nx).step_by(bx) {
                let mut acc = (0.0, 0usize);
                for j in j0..(j0 + by).min(f.ny) {
                    for i in i0..(i0 + bx).min(f.nx) {
                        let v = f.values[j * f.nx + i];
                        if v.is_finite() {
                            acc = (acc.0 + v, acc.1 + 1);
                        }
                    }
                }
                if acc.1 == 0 {
                    continue;
                }
                let t = (acc.0 / acc.1 as f64 - lo) / span;
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                    fmt_sig(f.x0 + (i0 as f64 - 0.5) * f.dx, 12),
                    fmt_sig(f.y0 + (j0 as f64 - 0.5) * f.dy, 12),
                    fmt_sig(f.dx * bx as f64, 12),
                    fmt_sig(f.dy * by as f64, 12),
                    grey(t)
                );
            }
        }
    }
    if let Some(o) = &scene.outline {
        let _ = writeln!(
            s,
            r##"<path class="outline" d="{}" fill="none" stroke="#888888" stroke-width="{stroke}"/>"##,
            path_data(&o.points, o.closed)
        );
    }
    for c in &scene.curves {
        let _ = writeln!(
            s,
            r##"<path class="curve" d="{}" fill="none" stroke="#1f4e9c" stroke-width="{stroke}"/>"##,
            path_data(&c.points, c.closed)
        );
    }
    let radius = fmt_sig(0.008 * vw.max(vh), 6);
    for p in &scene.points {
        let _ = writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="{radius}" fill="#c0392b"/>"##,
            fmt_sig(p.re, 12),
            fmt_sig(p.im, 12)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn emit_svg(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let text = render_svg(scene)?;
    std::fs::write(path, text)?;
    Ok(())
}
