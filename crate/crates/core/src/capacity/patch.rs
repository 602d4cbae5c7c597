//! Plates far below grid resolution: each plate sits in a hole of the grid
//! domain, surrounded by an annulus on which the potential is an exact
//! Fourier series. The unknown is the trace `g` of the potential on the
//! outer patch circle; it solves the fixed point `g = T(g)` where `T` feeds
//! the patch solution to the grid as hole boundary data and interpolates the
//! grid solution back onto the circle.

use super::fd::Hierarchy;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;

pub(crate) const ANGLES: usize = 32;
const GMRES_TOL: f64 = 1e-10;
const GMRES_MAX: usize = 80;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Patch {
    pub center: Complex64,
    /// Plate radius.
    pub r: f64,
    /// Outer radius; data on this circle are the unknowns.
    pub outer: f64,
    pub potential: f64,
}

/// Real Fourier coefficients of samples at equispaced angles.
struct Modes {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Modes {
    fn from_samples(g: &[f64]) -> Self {
        let m = g.len();
        let half = m / 2;
        let a0 = g.iter().sum::<f64>() / m as f64;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for k in 1..=half {
            let w = if 2 * k == m { 1.0 } else { 2.0 } / m as f64;
            for (j, v) in g.iter().enumerate() {
                let t = TAU * (k * j) as f64 / m as f64;
                a[k] += w * v * t.cos();
                b[k] += w * v * t.sin();
            }
        }
        Modes { a0, a, b }
    }
}

impl Patch {
    fn ring(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..ANGLES).map(move |j| self.center + Complex64::from_polar(self.outer, TAU * j as f64 / ANGLES as f64))
    }

    fn log_ratio(&self) -> f64 {
        (self.outer / self.r).ln()
    }

    /// Potential at `z` in the annulus for outer data `modes`; the plate
    /// potential enters only when `with_plate` is set.
    fn eval(&self, modes: &Modes, z: Complex64, with_plate: bool) -> f64 {
        let d = z - self.center;
        let (rho, theta) = (d.norm(), d.arg());
        let t = (rho / self.r).ln() / self.log_ratio();
        let mut v = modes.a0 * t;
        if with_plate {
            v += self.potential * (1.0 - t);
        }
        let q = self.r / self.outer;
        for k in 1..modes.a.len() {
            let kk = k as i32;
            let f = ((rho / self.outer).powi(kk) - (self.r * q / rho).powi(kk)) / (1.0 - q.powi(2 * kk));
            let (s, c) = (k as f64 * theta).sin_cos();
            v += f * (modes.a[k] * c + modes.b[k] * s);
        }
        v
    }
}

/// Grid solve with patch data `g`, sampled back on the patch circles.
fn transfer(h: &mut Hierarchy, patches: &[Patch], g: &[f64], with_plate: bool, tol: f64) -> Result<Vec<f64>> {
    let modes: Vec<Modes> = g.chunks(ANGLES).map(Modes::from_samples).collect();
    let b = h.rhs(|k, z| patches[k].eval(&modes[k], z, with_plate));
    let mut u = vec![0.0; b.len()];
    h.solve(&b, &mut u, tol)?;
    let field = h.field(&u);
    Ok(patches.iter().flat_map(|p| p.ring().map(|z| h.interpolate(&field, z)).collect::<Vec<_>>()).collect())
}

/// Capacity via the plate fluxes `2π(δ − ḡ)/log(R/r)`.
pub(crate) fn capacity(h: &mut Hierarchy, patches: &[Patch], tol: f64) -> Result<(f64, usize)> {
    let n = patches.len() * ANGLES;
    let rhs = transfer(h, patches, &vec![0.0; n], true, tol)?;
    let (g, its) = gmres(
        |x| {
            let lx = transfer(h, patches, x, false, tol)?;
            Ok(x.iter().zip(lx).map(|(a, b)| a - b).collect())
        },
        &rhs,
    )?;
    let value = patches
        .iter()
        .zip(g.chunks(ANGLES))
        .map(|(p, gk)| {
            let mean = gk.iter().sum::<f64>() / ANGLES as f64;
            p.potential * TAU * (p.potential - mean) / p.log_ratio()
        })
        .sum();
    Ok((value, its))
}

/// Unrestarted GMRES from a zero initial guess.
fn gmres(mut apply: impl FnMut(&[f64]) -> Result<Vec<f64>>, b: &[f64]) -> Result<(Vec<f64>, usize)> {
    let n = b.len();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let beta = norm(b);
    if beta == 0.0 {
        return Ok((vec![0.0; n], 0));
    }
    let mut basis = vec![b.iter().map(|x| x / beta).collect::<Vec<f64>>()];
    let mut hess: Vec<Vec<f64>> = Vec::new();
    let (mut cs, mut sn): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut rot = vec![beta];
    for j in 0..GMRES_MAX.min(n) {
        let mut w = apply(&basis[j])?;
        let mut col = vec![0.0; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
            col[i] = hij;
            w.iter_mut().zip(v).for_each(|(a, b)| *a -= hij * b);
        }
        let wn = norm(&w);
        col[j + 1] = wn;
        for i in 0..j {
            let t = cs[i] * col[i] + sn[i] * col[i + 1];
            col[i + 1] = -sn[i] * col[i] + cs[i] * col[i + 1];
            col[i] = t;
        }
        let d = col[j].hypot(col[j + 1]);
        let (c, s) = (col[j] / d, col[j + 1] / d);
        cs.push(c);
        sn.push(s);
        col[j] = d;
        col[j + 1] = 0.0;
        rot.push(-s * rot[j]);
        rot[j] *= c;
        hess.push(col);
        if rot[j + 1].abs() <= GMRES_TOL * beta || wn <= 1e-14 * beta {
            let k = j + 1;
            let mut y = vec![0.0; k];
            for i in (0..k).rev() {
                let s: f64 = (i + 1..k).map(|l| hess[l][i] * y[l]).sum();
                y[i] = (rot[i] - s) / hess[i][i];
            }
            let mut x = vec![0.0; n];
            for (yi, v) in y.iter().zip(&basis) {
                x.iter_mut().zip(v).for_each(|(a, b)| *a += yi * b);
            }
            return Ok((x, k));
        }
        basis.push(w.iter().map(|x| x / wn).collect());
    }
    Err(Error::NoConvergence("patch coupling".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gmres_solves_small_system() {
        let a = [[4.0, 1.0, 0.0], [1.0, 3.0, -1.0], [0.5, 0.0, 2.0]];
        let b = [1.0, 2.0, 3.0];
        let (x, _) = gmres(|v| Ok((0..3).map(|i| (0..3).map(|j| a[i][j] * v[j]).sum()).collect()), &b).unwrap();
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i][j] * x[j]).sum::<f64>() - b[i];
            assert!(r.abs() < 1e-9);
        }
    }

    #[test]
    fn patch_reproduces_boundary_data() {
        let p = Patch { center: Complex64::new(0.1, 0.2), r: 1e-3, outer: 0.05, potential: 1.0 };
        let g: Vec<f64> = (0..ANGLES).map(|j| 0.3 + 0.1 * (TAU * j as f64 / ANGLES as f64).cos()).collect();
        let modes = Modes::from_samples(&g);
        for (z, v) in p.ring().zip(&g) {
            assert!((p.eval(&modes, z, true) - v).abs() < 1e-12);
        }
        let on_plate = p.center + Complex64::from_polar(p.r, 0.7);
        assert!((p.eval(&modes, on_plate, true) - 1.0).abs() < 1e-12);
    }
}
