//! Sampling-based checks that the relevant curves through `w1 = f(z1)` and
//! `w2 = f(z2)` lying in `f(U)` are covered exactly once.
//!
//! A sample `w` lies in `f(U)` when `f(z) = w` has a root with
//! `|z| < 1 − GUARD`. A violation is a sample with two or more such roots
//! (counted with multiplicity). Every reported witness is re-solved with the
//! general root finder before it is returned.

use crate::curves::{Branch, DeltaCurve, GammaCircle};
use crate::error::{Error, Result};
use crate::rational::{DiskPoint, RationalMap, CLUSTER_RADIUS, SINGULAR_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Width of the boundary guard band.
pub const GUARD: f64 = 1e-6;
pub const DEFAULT_CURVE_SAMPLES: usize = 512;
pub const DEFAULT_FAMILY_SAMPLES: usize = 257;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringStatus {
    NoViolationFound,
    MultiplePreimage,
    /// Reserved in the schema; the checks skip curves that leave `f(U)`
    /// instead of reporting them.
    ExitsImage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gamma,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub w: Complex64,
    pub preimages: Vec<DiskPoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub curve_samples: usize,
    pub family_samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringVerdict {
    pub family: Family,
    pub status: CoveringStatus,
    pub witness: Option<Witness>,
    pub resolution: Resolution,
}

impl CoveringVerdict {
    pub fn passed(&self) -> bool {
        self.status == CoveringStatus::NoViolationFound
    }
}

/// Tangent-warped grid point `tan(π(j/m − 1/2))`; `j = 0` gives `−∞`.
/// Nested under `m ↦ 2m`.
pub fn warped(j: usize, m: usize) -> f64 {
    if j == 0 {
        return f64::NEG_INFINITY;
    }
    let x = j as f64 / m as f64 - 0.5;
    if x == 0.0 {
        0.0
    } else {
        (PI * x).tan()
    }
}

/// Solver for `P − wQ = 0` with closed forms up to degree two.
enum Solver<'a> {
    Closed { p: [Complex64; 3], q: [Complex64; 3], scale: f64 },
    General(&'a RationalMap),
}

impl<'a> Solver<'a> {
    fn new(map: &'a RationalMap) -> Self {
        if map.degree() > 2 {
            return Solver::General(map);
        }
        let mut p = [Complex64::new(0.0, 0.0); 3];
        let mut q = p;
        for (i, c) in map.numerator().coeffs().iter().enumerate() {
            p[i] = *c;
        }
        for (i, c) in map.denominator().coeffs().iter().enumerate() {
            q[i] = *c;
        }
        let scale = p.iter().chain(&q).map(|c| c.norm()).fold(0.0, f64::max);
        Solver::Closed { p, q, scale }
    }

    /// Roots with `|z| < 1 − GUARD`, repeated by multiplicity, into `out`.
    fn inside(&self, w: Complex64, out: &mut Vec<Complex64>) -> Result<()> {
        out.clear();
        let limit = 1.0 - GUARD;
        match self {
            Solver::General(map) => {
                for (z, mult) in map.preimages_within(w, limit)? {
                    out.extend(std::iter::repeat_n(z, mult));
                }
            }
            Solver::Closed { p, q, scale } => {
                let a = [p[0] - w * q[0], p[1] - w * q[1], p[2] - w * q[2]];
                let tol = 1e-14 * scale * (1.0 + w.norm());
                let mut push = |z: Complex64| {
                    if z.norm() < limit {
                        out.push(z);
                    }
                };
                if a[2].norm() > tol {
                    let disc = (a[1] * a[1] - a[2] * a[0] * 4.0).sqrt();
                    let s = if (a[1].conj() * disc).re >= 0.0 { a[1] + disc } else { a[1] - disc };
                    let qq = -s * 0.5;
                    if qq.norm() == 0.0 {
                        push(Complex64::new(0.0, 0.0));
                        push(Complex64::new(0.0, 0.0));
                    } else {
                        let (r1, r2) = (qq / a[2], a[0] / qq);
                        if (r1 - r2).norm() < CLUSTER_RADIUS {
                            let c = (r1 + r2) * 0.5;
                            push(c);
                            push(c);
                        } else {
                            push(r1);
                            push(r2);
                        }
                    }
                } else if a[1].norm() > tol {
                    push(-a[0] / a[1]);
                } else if a[0].norm() <= tol {
                    return Err(Error::DegenerateEquation);
                }
            }
        }
        Ok(())
    }
}

/// Re-solves `f(z) = w` from scratch and returns the inside preimages if there
/// are at least two.
fn verify_witness(map: &RationalMap, w: Complex64) -> Option<Witness> {
    let pre = map.preimages_within(w, 1.0 - GUARD).ok()?;
    let mut pts = Vec::new();
    for (z, mult) in pre {
        let fz = map.eval(z).ok()?;
        if (fz - w).norm() > 1e-8 * (1.0 + w.norm()) {
            return None;
        }
        for _ in 0..mult {
            pts.push(DiskPoint::new(z).ok()?);
        }
    }
    (pts.len() >= 2).then_some(Witness { w, preimages: pts })
}

/// Outcome of scanning one closed or open sample list.
enum Scan {
    Leaves,
    Univalent,
    Multiple(Complex64),
}

/// The curve counts only if every sample lies in `f(U)`; the first sample
/// with two or more preimages is then reported.
fn scan(solver: &Solver, samples: &[Complex64], buf: &mut Vec<Complex64>) -> Result<Scan> {
    let mut first_multiple = None;
    for &w in samples {
        solver.inside(w, buf)?;
        match buf.len() {
            0 => return Ok(Scan::Leaves),
            1 => {}
            _ => {
                first_multiple.get_or_insert(w);
            }
        }
    }
    Ok(match first_multiple {
        Some(w) => Scan::Multiple(w),
        None => Scan::Univalent,
    })
}

fn image_pair(map: &RationalMap, z1: DiskPoint, z2: DiskPoint, critical: bool) -> Result<(Complex64, Complex64)> {
    let j1 = map.jet_eval(z1.z())?;
    let j2 = map.jet_eval(z2.z())?;
    if critical {
        for (z, j) in [(z1, j1), (z2, j2)] {
            if j.f1.norm() <= SINGULAR_TOL {
                return Err(Error::CriticalPoint(z.z(), SINGULAR_TOL));
            }
        }
    }
    let (w1, w2) = (j1.f, j2.f);
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    if !finite(w1) || !finite(w2) || (w1 - w2).norm() <= 1e-14 * (1.0 + w1.norm().max(w2.norm())) {
        return Err(Error::CoincidentImages);
    }
    Ok((w1, w2))
}

fn check_resolution(n: usize, m: usize) -> Result<Resolution> {
    if n < 16 || m < 2 {
        return Err(Error::ParameterOutOfRange(format!("resolution (n = {n}, m = {m}) too small")));
    }
    Ok(Resolution { curve_samples: n, family_samples: m })
}

/// Γ-family check: each arc of each sampled circle joining `w1` and `w2`.
pub fn check_gamma_covering(
    map: &RationalMap,
    z1: DiskPoint,
    z2: DiskPoint,
    n: usize,
    m: usize,
) -> Result<CoveringVerdict> {
    let resolution = check_resolution(n, m)?;
    let (w1, w2) = image_pair(map, z1, z2, false)?;
    let solver = Solver::new(map);
    let mut buf = Vec::with_capacity(8);
    for j in 0..m {
        let trace = GammaCircle::new(w1, w2, warped(j, m))?.trace(n)?;
        for arc in [trace.arc_a().to_vec(), trace.arc_b()] {
            if let Scan::Multiple(w) = scan(&solver, &arc, &mut buf)? {
                if let Some(witness) = verify_witness(map, w) {
                    return Ok(CoveringVerdict {
                        family: Family::Gamma,
                        status: CoveringStatus::MultiplePreimage,
                        witness: Some(witness),
                        resolution,
                    });
                }
            }
        }
    }
    Ok(CoveringVerdict { family: Family::Gamma, status: CoveringStatus::NoViolationFound, witness: None, resolution })
}

/// Δ-family check: both branches for each sampled `t ≠ 0`.
pub fn check_delta_covering(
    map: &RationalMap,
    z1: DiskPoint,
    z2: DiskPoint,
    n: usize,
    m: usize,
) -> Result<CoveringVerdict> {
    let resolution = check_resolution(n, m)?;
    let (w1, w2) = image_pair(map, z1, z2, true)?;
    let solver = Solver::new(map);
    let mut buf = Vec::with_capacity(8);
    for j in 1..m {
        let t = warped(j, m);
        if t == 0.0 {
            continue;
        }
        for branch in [Branch::Plus, Branch::Minus] {
            let mut pts = DeltaCurve::new(w1, w2, t, branch)?.trace(n + 1)?;
            pts.pop();
            if let Scan::Multiple(w) = scan(&solver, &pts, &mut buf)? {
                if let Some(witness) = verify_witness(map, w) {
                    return Ok(CoveringVerdict {
                        family: Family::Delta,
                        status: CoveringStatus::MultiplePreimage,
                        witness: Some(witness),
                        resolution,
                    });
                }
            }
        }
    }
    Ok(CoveringVerdict { family: Family::Delta, status: CoveringStatus::NoViolationFound, witness: None, resolution })
}
