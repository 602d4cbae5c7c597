//! Curve families through two image points `w1`, `w2`.
//!
//! Both families are described in normalized coordinates
//! `ζ = (2w − w1 − w2)/(w2 − w1)`, which send `w1 ↦ −1` and `w2 ↦ 1`.
//!
//! * [`GammaCircle`]: circles through `w1`, `w2`. The center is
//!   `ζ = i s`; `s = ∞` is the straight line.
//! * [`DeltaCurve`]: `|ζ² − 1 − i t| = |t|`, `t ≠ 0`. The branch labelled
//!   [`Branch::Plus`] passes through `w2` (`ζ = 1`), [`Branch::Minus`] through
//!   `w1` (`ζ = −1`). The labels are a convention of this crate.

use crate::error::{Error, Result};
use crate::svg::path_data;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn half_chord(w1: Complex64, w2: Complex64) -> Result<(Complex64, Complex64)> {
    let h = (w2 - w1) * 0.5;
    if h.norm() == 0.0 || !h.re.is_finite() || !h.im.is_finite() {
        return Err(Error::DegeneratePair);
    }
    Ok(((w1 + w2) * 0.5, h))
}

fn to_zeta(w1: Complex64, w2: Complex64, w: Complex64) -> Result<Complex64> {
    let (m, h) = half_chord(w1, w2)?;
    Ok((w - m) / h)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaCircle {
    pub w1: Complex64,
    pub w2: Complex64,
    /// Center offset along the bisector; infinite for the line.
    pub s: f64,
}

/// A traced Γ member. `points[0] == w1`, `points[w2_index] == w2`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTrace {
    pub points: Vec<Complex64>,
    pub w2_index: usize,
    /// Whether the member is the line (arc B then jumps through ∞).
    pub is_line: bool,
}

impl GammaTrace {
    /// Arc from `w1` to `w2` in increasing parameter.
    pub fn arc_a(&self) -> &[Complex64] {
        &self.points[..=self.w2_index]
    }

    /// Complementary arc from `w2` back to `w1`, endpoints included.
    pub fn arc_b(&self) -> Vec<Complex64> {
        let mut v = self.points[self.w2_index..].to_vec();
        v.push(self.points[0]);
        v
    }

    pub fn svg_path(&self) -> String {
        path_data(&self.points, !self.is_line)
    }
}

impl GammaCircle {
    pub fn new(w1: Complex64, w2: Complex64, s: f64) -> Result<Self> {
        half_chord(w1, w2)?;
        if s.is_nan() {
            return Err(Error::ParameterOutOfRange("s is NaN".into()));
        }
        Ok(GammaCircle { w1, w2, s: if s.is_infinite() { f64::INFINITY } else { s } })
    }

    pub fn line(w1: Complex64, w2: Complex64) -> Result<Self> {
        Self::new(w1, w2, f64::INFINITY)
    }

    /// The unique member through `w`; the line when `w` is collinear.
    pub fn through(w1: Complex64, w2: Complex64, w: Complex64) -> Result<Self> {
        let z = to_zeta(w1, w2, w)?;
        if (z - 1.0).norm() == 0.0 || (z + 1.0).norm() == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        // |i s + 1|² = |i s − ζ|²  ⇔  2 s Im ζ = |ζ|² − 1
        let s = if z.im.abs() <= 1e-15 * z.norm().max(1.0) {
            f64::INFINITY
        } else {
            (z.norm_sqr() - 1.0) / (2.0 * z.im)
        };
        Self::new(w1, w2, s)
    }

    pub fn is_line(&self) -> bool {
        self.s.is_infinite()
    }

    pub fn center(&self) -> Option<Complex64> {
        if self.is_line() {
            return None;
        }
        let (m, h) = half_chord(self.w1, self.w2).ok()?;
        Some(m + Complex64::new(0.0, self.s) * h)
    }

    pub fn radius(&self) -> f64 {
        (self.w2 - self.w1).norm() * 0.5 * (1.0 + self.s * self.s).sqrt()
    }

    /// Distance of `w` from the member.
    pub fn residual(&self, w: Complex64) -> f64 {
        match self.center() {
            Some(c) => ((w - c).norm() - self.radius()).abs(),
            None => {
                let d = self.w2 - self.w1;
                ((w - self.w1) * d.conj()).im.abs() / d.norm()
            }
        }
    }

    /// `n` vertices: arc A (`w1 → w2`) gets `n/2` segments, arc B the rest.
    /// For the line, arc B runs from `w2` out to `m + 2(w2 − w1)` and resumes
    /// at `m − 2(w2 − w1)`, so the polyline has one jump through infinity.
    pub fn trace(&self, n: usize) -> Result<GammaTrace> {
        if n < 8 {
            return Err(Error::ParameterOutOfRange(format!("n = {n} < 8")));
        }
        let (m, h) = half_chord(self.w1, self.w2)?;
        let na = n / 2;
        let nb = n - na;
        let mut pts = Vec::with_capacity(n);
        match self.center() {
            Some(c) => {
                let r = self.radius();
                let a1 = (self.w1 - c).arg();
                let a2 = (self.w2 - c).arg();
                let mut da = (a2 - a1).rem_euclid(2.0 * PI);
                if da == 0.0 {
                    da = 2.0 * PI;
                }
                for k in 0..na {
                    pts.push(c + Complex64::from_polar(r, a1 + da * k as f64 / na as f64));
                }
                let db = 2.0 * PI - da;
                for k in 0..nb {
                    pts.push(c + Complex64::from_polar(r, a2 + db * k as f64 / nb as f64));
                }
            }
            None => {
                for k in 0..na {
                    pts.push(self.w1 + (self.w2 - self.w1) * (k as f64 / na as f64));
                }
                // w2 → m + 4h, then m − 4h → w1 (last vertex before w1 excluded)
                let out = nb / 2;
                let back = nb - out;
                for k in 0..out {
                    pts.push(m + h * (1.0 + 3.0 * k as f64 / out as f64));
                }
                for k in 0..back {
                    pts.push(m - h * (4.0 - 3.0 * k as f64 / back as f64));
                }
            }
        }
        pts[0] = self.w1;
        pts[na] = self.w2;
        Ok(GammaTrace { points: pts, w2_index: na, is_line: self.is_line() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaCurve {
    pub w1: Complex64,
    pub w2: Complex64,
    pub t: f64,
    pub branch: Branch,
}

/// `| |ζ² − 1 − i t| − |t| |` with `ζ` the normalized coordinate of `w`.
pub fn delta_residual(w1: Complex64, w2: Complex64, t: f64, w: Complex64) -> f64 {
    let (m, h) = ((w1 + w2) * 0.5, (w2 - w1) * 0.5);
    let z = (w - m) / h;
    ((z * z - Complex64::new(1.0, t)).norm() - t.abs()).abs()
}

impl DeltaCurve {
    pub fn new(w1: Complex64, w2: Complex64, t: f64, branch: Branch) -> Result<Self> {
        half_chord(w1, w2)?;
        if t == 0.0 || !t.is_finite() {
            return Err(Error::ZeroParameter);
        }
        Ok(DeltaCurve { w1, w2, t, branch })
    }

    pub fn residual(&self, w: Complex64) -> f64 {
        delta_residual(self.w1, self.w2, self.t, w)
    }

    /// Closed polyline of `n` vertices, the last equal to the first, which
    /// is `w2` (plus) or `w1` (minus).
    pub fn trace(&self, n: usize) -> Result<Vec<Complex64>> {
        if n < 16 {
            return Err(Error::ParameterOutOfRange(format!("n = {n} < 16")));
        }
        if self.t == 0.0 {
            return Err(Error::ZeroParameter);
        }
        let (m, h) = half_chord(self.w1, self.w2)?;
        let (t, at) = (self.t, self.t.abs());
        let centre = Complex64::new(1.0, t);
        // origin strictly outside the ζ²-circle keeps the branches disjoint
        assert!(centre.norm() > at, "ζ²-circle encloses the origin");
        // c(θ0) = 1
        let theta0 = -0.5 * PI * t.signum();
        let sign = match self.branch {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        };
        let mut prev = Complex64::new(sign, 0.0);
        let mut pts = Vec::with_capacity(n);
        pts.push(m + h * prev);
        for k in 1..n - 1 {
            let th = theta0 + 2.0 * PI * k as f64 / (n - 1) as f64;
            let r = (centre + Complex64::from_polar(at, th)).sqrt();
            prev = if (r - prev).norm_sqr() <= (r + prev).norm_sqr() { r } else { -r };
            pts.push(m + h * prev);
        }
        pts.push(pts[0]);
        Ok(pts)
    }

    pub fn svg_path(&self, n: usize) -> Result<String> {
        let pts = self.trace(n)?;
        Ok(path_data(&pts[..pts.len() - 1], true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;

    #[test]
    fn gamma_unit_circle() {
        let g = GammaCircle::new(c64(-1.0, 0.0), c64(1.0, 0.0), 0.0).unwrap();
        let tr = g.trace(64).unwrap();
        assert_eq!(tr.points.len(), 64);
        assert!(tr.points.iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
        assert_eq!(tr.points[0], c64(-1.0, 0.0));
        assert_eq!(tr.points[tr.w2_index], c64(1.0, 0.0));
    }

    #[test]
    fn gamma_line_is_real_segment() {
        let g = GammaCircle::line(c64(-1.0, 0.0), c64(1.0, 0.0)).unwrap();
        let tr = g.trace(40).unwrap();
        assert!(tr.points.iter().all(|p| p.im == 0.0 && p.re.abs() <= 4.0));
        assert!(tr.arc_a().iter().all(|p| p.re.abs() <= 1.0));
        assert!(tr.arc_b()[1..tr.arc_b().len() - 1].iter().all(|p| p.re.abs() > 1.0));
    }

    #[test]
    fn gamma_offset_circle() {
        let g = GammaCircle::new(c64(-1.0, 0.0), c64(1.0, 0.0), 1.0).unwrap();
        assert!((g.center().unwrap() - c64(0.0, 1.0)).norm() < 1e-15);
        for p in g.trace(100).unwrap().points {
            assert!(((p - c64(0.0, 1.0)).norm() - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_rejects_degenerate() {
        assert!(matches!(GammaCircle::new(c64(1.0, 1.0), c64(1.0, 1.0), 0.0), Err(Error::DegeneratePair)));
        let g = GammaCircle::new(c64(0.0, 0.0), c64(1.0, 0.0), 0.0).unwrap();
        assert!(g.trace(7).is_err());
    }

    #[test]
    fn delta_plus_passes_w2() {
        let d = DeltaCurve::new(c64(-1.0, 0.0), c64(1.0, 0.0), 1.0, Branch::Plus).unwrap();
        let pts = d.trace(400).unwrap();
        assert!((pts[0] - c64(1.0, 0.0)).norm() < 1e-10);
        assert_eq!(pts[0], pts[399]);
        assert!(pts.iter().all(|&p| d.residual(p) < 1e-10));
    }

    #[test]
    fn delta_sample_point_on_plus_branch() {
        let z = c64(1.0, 2.0).sqrt();
        assert!((z - c64(1.2720196495, 0.7861513778)).norm() < 1e-9);
        assert!(delta_residual(c64(-1.0, 0.0), c64(1.0, 0.0), 1.0, z) < 1e-10);
        // the plus trace is the branch with Re ζ > 0 here
        let pts = DeltaCurve::new(c64(-1.0, 0.0), c64(1.0, 0.0), 1.0, Branch::Plus).unwrap().trace(4001).unwrap();
        let best = pts.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 5e-3);
    }

    #[test]
    fn residual_examples() {
        let (a, b) = (c64(0.3, -0.2), c64(-1.0, 0.7));
        assert!(delta_residual(a, b, 0.7, b) < 1e-15);
        assert!(delta_residual(a, b, -2.0, a) < 1e-15);
        let r = delta_residual(c64(-1.0, 0.0), c64(1.0, 0.0), 1.0, c64(0.0, 0.0));
        assert!((r - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn zero_parameter_rejected() {
        assert!(matches!(DeltaCurve::new(c64(-1.0, 0.0), c64(1.0, 0.0), 0.0, Branch::Plus), Err(Error::ZeroParameter)));
    }

    fn cpx() -> impl Strategy<Value = Complex64> {
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c64(a, b))
    }

    fn tval() -> impl Strategy<Value = f64> {
        prop_oneof![0.05..20.0f64, -20.0..-0.05f64]
    }

    proptest! {
        #[test]
        fn delta_branches_symmetric(w1 in cpx(), w2 in cpx(), t in tval()) {
            prop_assume!((w1 - w2).norm() > 1e-2);
            let p = DeltaCurve::new(w1, w2, t, Branch::Plus).unwrap().trace(64).unwrap();
            let q = DeltaCurve::new(w1, w2, t, Branch::Minus).unwrap().trace(64).unwrap();
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((*b - (w1 + w2 - a)).norm() < 1e-10 * (1.0 + a.norm()));
            }
            prop_assert!((p[0] - w2).norm() < 1e-10 && (q[0] - w1).norm() < 1e-10);
        }

        #[test]
        fn delta_affine_equivariant(w1 in cpx(), w2 in cpx(), t in tval(), a in cpx(), b in cpx()) {
            prop_assume!((w1 - w2).norm() > 1e-2 && a.norm() > 1e-2);
            let p = DeltaCurve::new(w1, w2, t, Branch::Plus).unwrap().trace(48).unwrap();
            let q = DeltaCurve::new(a * w1 + b, a * w2 + b, t, Branch::Plus).unwrap().trace(48).unwrap();
            for (x, y) in p.iter().zip(&q) {
                prop_assert!((a * x + b - y).norm() < 1e-10 * (1.0 + y.norm()));
            }
        }

        #[test]
        fn delta_closed_and_on_curve(w1 in cpx(), w2 in cpx(), t in tval()) {
            prop_assume!((w1 - w2).norm() > 1e-2);
            let d = DeltaCurve::new(w1, w2, t, Branch::Minus).unwrap();
            let p = d.trace(100).unwrap();
            prop_assert!((p[0] - p[99]).norm() < 1e-9);
            for x in &p {
                prop_assert!(d.residual(*x) < 1e-10 * (1.0 + t.abs()));
            }
        }

        #[test]
        fn gamma_through_point_unique(w1 in cpx(), w2 in cpx(), w in cpx()) {
            let d = w2 - w1;
            prop_assume!(d.norm() > 1e-2 && (w - w1).norm() > 1e-2 && (w - w2).norm() > 1e-2);
            prop_assume!(((w - w1) * d.conj()).im.abs() > 1e-3 * d.norm());
            let g = GammaCircle::through(w1, w2, w).unwrap();
            prop_assert!(g.s.is_finite());
            let scale = 1.0 + g.radius();
            prop_assert!(g.residual(w) < 1e-10 * scale);
            prop_assert!(g.residual(w1) < 1e-12 * scale && g.residual(w2) < 1e-12 * scale);
        }
    }
}
