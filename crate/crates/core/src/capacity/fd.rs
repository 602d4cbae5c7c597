//! Symmetric cut-cell 5-point discretization of the Dirichlet problem on a
//! uniform square grid, solved by conjugate gradients with a multigrid
//! V-cycle preconditioner.
//!
//! An edge from an unknown node to a fixed node is cut where it first meets
//! the boundary, at fraction `θ` of its length; it then carries weight `1/θ`
//! towards the boundary value at the crossing. The resulting matrix is
//! symmetric positive definite and the discrete Dirichlet energy is
//! `Σ w_e (Δu)²` over all edges touching an unknown node.

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Smallest admitted cut fraction.
const MIN_THETA: f64 = 1e-3;
/// Grids at or below this many cells per side are solved directly.
const COARSEST: usize = 32;
const SWEEPS: usize = 2;

#[derive(Clone, Copy, Debug)]
pub(crate) enum Shape {
    Disk { c: Complex64, r: f64 },
    /// Image under the sector-unfolding map `p_k` of the part of the disk
    /// `|w − c| ≤ r` lying in the closed sector `D_k`, together with its
    /// mirror image in the imaginary axis.
    Sector { k: u8, c: Complex64, r: f64 },
}

impl Shape {
    fn inside(&self, z: Complex64) -> bool {
        match *self {
            Shape::Disk { c, r } => (z - c).norm_sqr() <= r * r,
            Shape::Sector { k, c, r } => {
                let zr = if z.re < 0.0 { Complex64::new(-z.re, z.im) } else { z };
                if (zr - super::separating_transform(k, c)).norm() > r * (2.0 * c.norm() + r) {
                    return false;
                }
                match super::sector_preimage(k, zr) {
                    Some(w) => (w - c).norm_sqr() <= r * r,
                    None => false,
                }
            }
        }
    }

    /// Fraction along `p → q` (with `p` outside, `q` inside) of the first
    /// crossing.
    fn entry(&self, p: Complex64, q: Complex64) -> f64 {
        match *self {
            Shape::Disk { c, r } => {
                let e = q - p;
                let d = p - c;
                let a = e.norm_sqr();
                let b = 2.0 * (e.conj() * d).re;
                let cc = d.norm_sqr() - r * r;
                let disc = (b * b - 4.0 * a * cc).max(0.0);
                let den = -b + disc.sqrt();
                if den <= 0.0 {
                    1.0
                } else {
                    (2.0 * cc / den).clamp(0.0, 1.0)
                }
            }
            Shape::Sector { .. } => bisect(p, q, |z| self.inside(z)),
        }
    }

    pub fn scale(&self) -> f64 {
        match *self {
            Shape::Disk { r, .. } => r,
            Shape::Sector { c, r, .. } => 2.0 * c.norm() * r,
        }
    }
}

/// First `t` where `inside(p + t (q − p))` becomes true, assuming it is
/// false at `t = 0` and true at `t = 1`.
fn bisect(p: Complex64, q: Complex64, inside: impl Fn(Complex64) -> bool) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..55 {
        let mid = 0.5 * (lo + hi);
        if inside(p + (q - p) * mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Value {
    Const(f64),
    /// Supplied per solve by an annular patch.
    Hole(usize),
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Obstacle {
    pub shape: Shape,
    pub value: Value,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Source {
    Const(f64),
    Hole { index: usize, point: Complex64 },
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct CutEdge {
    pub node: usize,
    pub theta: f64,
    pub src: Source,
}

/// Geometry of a Dirichlet problem: `u = 0` outside `domain` and on the
/// edge of the square box, `u` prescribed on each obstacle.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub domain: DomainSpec,
    pub obstacles: Vec<Obstacle>,
    /// Lower-left corner and side of the square box.
    pub corner: Complex64,
    pub side: f64,
}

impl Problem {
    fn domain_exit(&self, p: Complex64, q: Complex64) -> f64 {
        match &self.domain {
            DomainSpec::UnitDisk => circle_exit(p, q, Complex64::new(0.0, 0.0), 1.0),
            DomainSpec::Disk { center, radius } => circle_exit(p, q, *center, *radius),
            DomainSpec::HalfPlane { .. } => {
                let (lp, lq) = (self.domain.level(p), self.domain.level(q));
                (lp / (lp - lq)).clamp(0.0, 1.0)
            }
            d => bisect(p, q, |z| !d.contains(z)),
        }
    }
}

fn circle_exit(p: Complex64, q: Complex64, c: Complex64, r: f64) -> f64 {
    let e = q - p;
    let d = p - c;
    let a = e.norm_sqr();
    let b = 2.0 * (e.conj() * d).re;
    let cc = d.norm_sqr() - r * r;
    let disc = (b * b - 4.0 * a * cc).max(0.0);
    ((-b + disc.sqrt()) / (2.0 * a)).clamp(0.0, 1.0)
}

/// One grid level. Fixed nodes have `diag = inv_diag = 0`.
pub(crate) struct Level {
    pub n: usize,
    pub h: f64,
    pub corner: Complex64,
    pub diag: Vec<f64>,
    pub inv_diag: Vec<f64>,
    /// Boundary data on the fine level only.
    pub cuts: Vec<CutEdge>,
    /// Fixed-node values (fine level only; holes read as 0).
    pub fixed: Vec<f64>,
}

impl Level {
    pub fn stride(&self) -> usize {
        self.n + 1
    }

}

const NEIGHBOURS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

pub(crate) fn build_level(problem: &Problem, n: usize, fine: bool) -> Level {
    let s = n + 1;
    let h = problem.side / n as f64;
    let corner = problem.corner;
    let point = |i: usize, j: usize| corner + Complex64::new(i as f64 * h, j as f64 * h);
    // 0: unknown, 1: box edge or outside the domain, 2 + k: inside obstacle k
    let mut state = vec![0u16; s * s];
    for j in 0..s {
        for i in 0..s {
            let z = point(i, j);
            let st = if i == 0 || j == 0 || i == n || j == n || !problem.domain.contains(z) {
                1
            } else {
                match problem.obstacles.iter().position(|o| o.shape.inside(z)) {
                    Some(k) => 2 + k as u16,
                    None => 0,
                }
            };
            state[j * s + i] = st;
        }
    }
    let mut diag = vec![0.0; s * s];
    let mut inv_diag = vec![0.0; s * s];
    let mut cuts = Vec::new();
    let mut fixed = vec![0.0; if fine { s * s } else { 0 }];
    if fine {
        for (p, st) in state.iter().enumerate() {
            if *st >= 2 {
                if let Value::Const(v) = problem.obstacles[(*st - 2) as usize].value {
                    fixed[p] = v;
                }
            }
        }
    }
    for j in 1..n {
        for i in 1..n {
            let p = j * s + i;
            if state[p] != 0 {
                continue;
            }
            let zp = point(i, j);
            let mut d = 0.0;
            for (di, dj) in NEIGHBOURS {
                let (qi, qj) = ((i as isize + di) as usize, (j as isize + dj) as usize);
                let q = qj * s + qi;
                if state[q] == 0 {
                    d += 1.0;
                    continue;
                }
                let zq = point(qi, qj);
                // earliest boundary crossed on the way to q
                let mut best = (f64::INFINITY, Source::Const(0.0));
                if !problem.domain.contains(zq) {
                    best = (problem.domain_exit(zp, zq), Source::Const(0.0));
                } else if qi == 0 || qj == 0 || qi == n || qj == n {
                    best = (1.0, Source::Const(0.0));
                }
                for (k, o) in problem.obstacles.iter().enumerate() {
                    if o.shape.inside(zq) {
                        let t = o.shape.entry(zp, zq);
                        if t < best.0 {
                            let src = match o.value {
                                Value::Const(v) => Source::Const(v),
                                Value::Hole(_) => Source::Hole { index: k, point: zp + (zq - zp) * t },
                            };
                            best = (t, src);
                        }
                    }
                }
                let theta = best.0.clamp(MIN_THETA, 1.0);
                d += 1.0 / theta;
                if fine {
                    let src = match best.1 {
                        Source::Hole { index, .. } => {
                            let idx = match problem.obstacles[index].value {
                                Value::Hole(m) => m,
                                Value::Const(_) => unreachable!(),
                            };
                            Source::Hole { index: idx, point: zp + (zq - zp) * best.0.clamp(0.0, 1.0) }
                        }
                        c => c,
                    };
                    cuts.push(CutEdge { node: p, theta, src });
                }
            }
            diag[p] = d;
            inv_diag[p] = 1.0 / d;
        }
    }
    Level { n, h, corner, diag, inv_diag, cuts, fixed }
}

fn apply(l: &Level, u: &[f64], out: &mut [f64]) {
    let s = l.stride();
    out.iter_mut().for_each(|x| *x = 0.0);
    for j in 1..l.n {
        for i in 1..l.n {
            let p = j * s + i;
            let d = l.diag[p];
            if d > 0.0 {
                out[p] = d * u[p] - u[p - 1] - u[p + 1] - u[p - s] - u[p + s];
            }
        }
    }
}

fn sweep(l: &Level, u: &mut [f64], f: &[f64], colour: usize) {
    let s = l.stride();
    for j in 1..l.n {
        let start = 1 + ((j + colour + 1) & 1);
        let row = j * s;
        for i in (start..l.n).step_by(2) {
            let p = row + i;
            let inv = l.inv_diag[p];
            if inv > 0.0 {
                u[p] = (f[p] + u[p - 1] + u[p + 1] + u[p - s] + u[p + s]) * inv;
            }
        }
    }
}

fn residual(l: &Level, u: &[f64], f: &[f64], r: &mut [f64]) {
    apply(l, u, r);
    for p in 0..r.len() {
        r[p] = if l.diag[p] > 0.0 { f[p] - r[p] } else { 0.0 };
    }
}

fn restrict(fine: &Level, r: &[f64], coarse: &Level, fc: &mut [f64]) {
    let (sf, sc) = (fine.stride(), coarse.stride());
    fc.iter_mut().for_each(|x| *x = 0.0);
    for jc in 1..coarse.n {
        for ic in 1..coarse.n {
            let pc = jc * sc + ic;
            if coarse.diag[pc] <= 0.0 {
                continue;
            }
            let pf = 2 * jc * sf + 2 * ic;
            fc[pc] = r[pf]
                + 0.5 * (r[pf - 1] + r[pf + 1] + r[pf - sf] + r[pf + sf])
                + 0.25 * (r[pf - sf - 1] + r[pf - sf + 1] + r[pf + sf - 1] + r[pf + sf + 1]);
        }
    }
}

fn prolong_add(coarse: &Level, ec: &[f64], fine: &Level, u: &mut [f64]) {
    let (sf, sc) = (fine.stride(), coarse.stride());
    for jf in 1..fine.n {
        for i_f in 1..fine.n {
            let pf = jf * sf + i_f;
            if fine.diag[pf] <= 0.0 {
                continue;
            }
            let (ic, jc) = (i_f / 2, jf / 2);
            let pc = jc * sc + ic;
            let v = match (i_f & 1, jf & 1) {
                (0, 0) => ec[pc],
                (1, 0) => 0.5 * (ec[pc] + ec[pc + 1]),
                (0, 1) => 0.5 * (ec[pc] + ec[pc + sc]),
                _ => 0.25 * (ec[pc] + ec[pc + 1] + ec[pc + sc] + ec[pc + sc + 1]),
            };
            u[pf] += v;
        }
    }
}

struct Direct {
    nodes: Vec<usize>,
    chol: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
}

impl Direct {
    fn new(l: &Level) -> Self {
        let s = l.stride();
        let nodes: Vec<usize> = (0..l.diag.len()).filter(|&p| l.diag[p] > 0.0).collect();
        let mut index = vec![usize::MAX; l.diag.len()];
        for (k, &p) in nodes.iter().enumerate() {
            index[p] = k;
        }
        let m = nodes.len();
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (k, &p) in nodes.iter().enumerate() {
            a[(k, k)] = l.diag[p];
            for q in [p - 1, p + 1, p - s, p + s] {
                if index[q] != usize::MAX {
                    a[(k, index[q])] = -1.0;
                }
            }
        }
        Direct { nodes, chol: if m > 0 { a.cholesky() } else { None } }
    }

    fn solve(&self, l: &Level, f: &[f64], u: &mut [f64]) {
        u.iter_mut().for_each(|x| *x = 0.0);
        match &self.chol {
            Some(ch) => {
                let b = DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|&p| f[p]));
                let x = ch.solve(&b);
                for (k, &p) in self.nodes.iter().enumerate() {
                    u[p] = x[k];
                }
            }
            None => {
                for _ in 0..200 {
                    sweep(l, u, f, 0);
                    sweep(l, u, f, 1);
                }
                for _ in 0..200 {
                    sweep(l, u, f, 1);
                    sweep(l, u, f, 0);
                }
            }
        }
    }
}

/// Grid hierarchy with work buffers for the V-cycle.
pub(crate) struct Hierarchy {
    pub levels: Vec<Level>,
    direct: Direct,
    u: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl Hierarchy {
    pub fn new(problem: &Problem, n: usize) -> Self {
        let mut levels = vec![build_level(problem, n, true)];
        let mut m = n;
        while m > COARSEST && m.is_multiple_of(2) {
            m /= 2;
            levels.push(build_level(problem, m, false));
        }
        let direct = Direct::new(levels.last().expect("at least one level"));
        let size = |l: &Level| l.diag.len();
        let u = levels.iter().map(|l| vec![0.0; size(l)]).collect();
        let f = levels.iter().map(|l| vec![0.0; size(l)]).collect();
        let r = levels.iter().map(|l| vec![0.0; size(l)]).collect();
        Hierarchy { levels, direct, u, f, r }
    }

    pub fn fine(&self) -> &Level {
        &self.levels[0]
    }

    /// Right-hand side from the cut edges; `hole(index, point)` supplies the
    /// patch values.
    pub fn rhs(&self, hole: impl Fn(usize, Complex64) -> f64) -> Vec<f64> {
        let l = self.fine();
        let mut b = vec![0.0; l.diag.len()];
        for c in &l.cuts {
            let v = match c.src {
                Source::Const(v) => v,
                Source::Hole { index, point } => hole(index, point),
            };
            b[c.node] += v / c.theta;
        }
        b
    }

    fn vcycle(&mut self, k: usize) {
        let last = self.levels.len() - 1;
        if k == last {
            let (l, f, u) = (&self.levels[k], &self.f[k], &mut self.u[k]);
            self.direct.solve(l, f, u);
            return;
        }
        {
            let (l, f, u) = (&self.levels[k], &self.f[k], &mut self.u[k]);
            u.iter_mut().for_each(|x| *x = 0.0);
            for _ in 0..SWEEPS {
                sweep(l, u, f, 0);
                sweep(l, u, f, 1);
            }
            residual(l, u, f, &mut self.r[k]);
        }
        {
            let (fine, coarse) = (&self.levels[k], &self.levels[k + 1]);
            restrict(fine, &self.r[k], coarse, &mut self.f[k + 1]);
        }
        self.vcycle(k + 1);
        {
            let (fine, coarse) = (&self.levels[k], &self.levels[k + 1]);
            let (lo, hi) = self.u.split_at_mut(k + 1);
            prolong_add(coarse, &hi[0], fine, &mut lo[k]);
        }
        let (l, f, u) = (&self.levels[k], &self.f[k], &mut self.u[k]);
        for _ in 0..SWEEPS {
            sweep(l, u, f, 1);
            sweep(l, u, f, 0);
        }
    }

    /// `z = M⁻¹ r` by one V-cycle from zero.
    fn precondition(&mut self, r: &[f64], z: &mut [f64]) {
        self.f[0].copy_from_slice(r);
        self.vcycle(0);
        z.copy_from_slice(&self.u[0]);
    }

    /// Preconditioned CG on the fine level; `x` holds the initial guess.
    pub fn solve(&mut self, b: &[f64], x: &mut [f64], tol: f64) -> Result<usize> {
        let len = b.len();
        let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(p, q)| p * q).sum::<f64>();
        let bnorm = dot(b, b).sqrt();
        if bnorm == 0.0 {
            x.iter_mut().for_each(|v| *v = 0.0);
            return Ok(0);
        }
        let mut r = vec![0.0; len];
        residual(&self.levels[0], x, b, &mut r);
        let mut z = vec![0.0; len];
        self.precondition(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; len];
        for it in 1..=500 {
            apply(&self.levels[0], &p, &mut ap);
            let alpha = rz / dot(&p, &ap);
            for k in 0..len {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            if dot(&r, &r).sqrt() <= tol * bnorm {
                return Ok(it);
            }
            self.precondition(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for k in 0..len {
                p[k] = z[k] + beta * p[k];
            }
        }
        Err(Error::NoConvergence("multigrid-preconditioned CG".into()))
    }

    /// Discrete Dirichlet energy of the solution `u`.
    pub fn energy(&self, u: &[f64], hole: impl Fn(usize, Complex64) -> f64) -> f64 {
        let l = self.fine();
        let s = l.stride();
        let mut e = 0.0;
        for j in 1..l.n {
            for i in 1..l.n {
                let p = j * s + i;
                if l.diag[p] <= 0.0 {
                    continue;
                }
                for q in [p + 1, p + s] {
                    if l.diag[q] > 0.0 {
                        let d = u[p] - u[q];
                        e += d * d;
                    }
                }
            }
        }
        for c in &l.cuts {
            let v = match c.src {
                Source::Const(v) => v,
                Source::Hole { index, point } => hole(index, point),
            };
            let d = u[c.node] - v;
            e += d * d / c.theta;
        }
        e
    }

    /// Full field: unknowns from `u`, fixed nodes at their boundary values.
    pub fn field(&self, u: &[f64]) -> Vec<f64> {
        let l = self.fine();
        u.iter()
            .zip(&l.diag)
            .zip(&l.fixed)
            .map(|((x, d), v)| if *d > 0.0 { *x } else { *v })
            .collect()
    }

    /// Bilinear interpolation of the full field at `z`.
    pub fn interpolate(&self, field: &[f64], z: Complex64) -> f64 {
        let l = self.fine();
        let s = l.stride();
        let x = (z.re - l.corner.re) / l.h;
        let y = (z.im - l.corner.im) / l.h;
        let i = (x.floor() as usize).min(l.n - 1);
        let j = (y.floor() as usize).min(l.n - 1);
        let (fx, fy) = (x - i as f64, y - j as f64);
        let p = j * s + i;
        (1.0 - fx) * (1.0 - fy) * field[p]
            + fx * (1.0 - fy) * field[p + 1]
            + (1.0 - fx) * fy * field[p + s]
            + fx * fy * field[p + s + 1]
    }
}
