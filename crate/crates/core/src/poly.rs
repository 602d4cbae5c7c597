//! Dense complex polynomials in ascending-degree storage, with root finding.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

const NEWTON_STEPS: usize = 30;

/// Polynomial `c[0] + c[1] z + ... + c[n] z^n`. Trailing zero coefficients
/// are trimmed on construction, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops trailing coefficients that are below `rel_tol` times the largest
    /// coefficient. Used after subtractions that cancel the leading term.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let scale = self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= rel_tol * scale) {
            c.pop();
        }
        Poly::new(c)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first three derivatives at `z`, by Horner's scheme.
    pub fn eval_jet(&self, z: Complex64) -> [Complex64; 4] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1, mut p2, mut p3) = (zero, zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            p3 = p3 * z + p2;
            p2 = p2 * z + p1;
            p1 = p1 * z + p0;
            p0 = p0 * z + c;
        }
        [p0, p1, p2 * 2.0, p3 * 6.0]
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Poly::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// All complex roots, with multiplicity.
    ///
    /// Eigenvalues of the companion matrix (complex Schur form) seed a
    /// Newton polish on the original coefficients. Each Newton step is only
    /// accepted if it reduces `|p|`, so clustered roots are left where the
    /// eigen-solver put them.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(n) => n,
        };
        let lead = self.coeffs[n];
        if n == 1 {
            return vec![-self.coeffs[0] / lead];
        }
        if n == 2 {
            let (a, b, c) = (lead, self.coeffs[1], self.coeffs[0]);
            let disc = (b * b - a * c * 4.0).sqrt();
            // pick the sign that avoids cancellation
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q.norm() == 0.0 {
                return vec![Complex64::new(0.0, 0.0); 2];
            }
            return vec![q / a, c / q]
                .into_iter()
                .map(|r| self.polish(r))
                .collect();
        }
        let seeds = self.companion_eigenvalues().unwrap_or_else(|| self.aberth());
        seeds.into_iter().map(|r| self.polish(r)).collect()
    }

    fn companion_eigenvalues(&self) -> Option<Vec<Complex64>> {
        let n = self.degree()?;
        let lead = self.coeffs[n];
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -self.coeffs[i] / lead;
        }
        let schur = Schur::try_new(m, f64::EPSILON, 10_000)?;
        let ev = schur.eigenvalues()?;
        let out: Vec<Complex64> = ev.iter().copied().collect();
        out.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(out)
    }

    /// Aberth-Ehrlich simultaneous iteration, used only if the Schur
    /// decomposition fails to converge.
    fn aberth(&self) -> Vec<Complex64> {
        let n = self.degree().unwrap_or(0);
        let d = self.derivative();
        let radius = 1.0
            + self.coeffs[..n]
                .iter()
                .map(|c| (c / self.coeffs[n]).norm())
                .fold(0.0, f64::max);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let ratio = self.eval(z[i]) / d.eval(z[i]);
                let s: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm());
                }
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }

    /// Newton refinement that never increases the residual.
    pub fn polish(&self, mut z: Complex64) -> Complex64 {
        let d = self.derivative();
        let mut res = self.eval(z).norm();
        for _ in 0..NEWTON_STEPS {
            if res == 0.0 {
                break;
            }
            let dp = d.eval(z);
            if dp.norm() == 0.0 {
                break;
            }
            let next = z - self.eval(z) / dp;
            let next_res = self.eval(next).norm();
            if next_res < res {
                z = next;
                res = next_res;
            } else {
                break;
            }
        }
        z
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::default();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Groups points closer than `radius` (single linkage) and returns each
/// group's centroid with its size.
pub fn cluster(points: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() < radius {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                if a != b {
                    group[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        let r = find(&mut group, i);
        match out.iter_mut().find(|(root, _, _)| *root == r) {
            Some((_, sum, count)) => {
                *sum += p;
                *count += 1;
            }
            None => out.push((r, p, 1)),
        }
    }
    out.into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect()
}
