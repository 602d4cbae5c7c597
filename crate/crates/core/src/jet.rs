//! Third-order jets: a value together with its first three complex derivatives.
//!
//! Arithmetic follows the Leibniz rule truncated at order three, and
//! [`Jet3::compose`] applies Faà di Bruno's formula, so derivatives of rational
//! expressions come out exact up to rounding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet3 {
    pub f: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
}

impl Jet3 {
    pub const fn new(f: Complex64, f1: Complex64, f2: Complex64, f3: Complex64) -> Self {
        Jet3 { f, f1, f2, f3 }
    }

    pub fn constant(c: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Jet3::new(c, z, z, z)
    }

    /// Jet of the identity at `z`.
    pub fn variable(z: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Jet3::new(z, Complex64::new(1.0, 0.0), zero, zero)
    }

    pub fn from_array(a: [Complex64; 4]) -> Self {
        Jet3::new(a[0], a[1], a[2], a[3])
    }

    /// Jet of `g ∘ h` from the jet of `g` at `h(z)` (`self`) and the jet of
    /// `h` at `z`.
    pub fn compose(self, inner: Jet3) -> Jet3 {
        let (g1, g2, g3) = (self.f1, self.f2, self.f3);
        let (h1, h2, h3) = (inner.f1, inner.f2, inner.f3);
        Jet3::new(
            self.f,
            g1 * h1,
            g2 * h1 * h1 + g1 * h2,
            g3 * h1 * h1 * h1 + g2 * h1 * h2 * 3.0 + g1 * h3,
        )
    }

    pub fn recip(self) -> Jet3 {
        Jet3::constant(Complex64::new(1.0, 0.0)) / self
    }

    /// `f'''/f' - (3/2)(f''/f')^2`.
    pub fn schwarzian(&self) -> Complex64 {
        let r = self.f2 / self.f1;
        self.f3 / self.f1 - r * r * 1.5
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(self.f + o.f, self.f1 + o.f1, self.f2 + o.f2, self.f3 + o.f3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.f, -self.f1, -self.f2, -self.f3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3::new(
            self.f * o.f,
            self.f1 * o.f + self.f * o.f1,
            self.f2 * o.f + self.f1 * o.f1 * 2.0 + self.f * o.f2,
            self.f3 * o.f + (self.f2 * o.f1 + self.f1 * o.f2) * 3.0 + self.f * o.f3,
        )
    }
}

impl Mul<Complex64> for Jet3 {
    type Output = Jet3;
    fn mul(self, s: Complex64) -> Jet3 {
        Jet3::new(self.f * s, self.f1 * s, self.f2 * s, self.f3 * s)
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    /// Solves `self = q * o` order by order.
    fn div(self, o: Jet3) -> Jet3 {
        let inv = o.f.inv();
        let q0 = self.f * inv;
        let q1 = (self.f1 - q0 * o.f1) * inv;
        let q2 = (self.f2 - q1 * o.f1 * 2.0 - q0 * o.f2) * inv;
        let q3 = (self.f3 - (q2 * o.f1 + q1 * o.f2) * 3.0 - q0 * o.f3) * inv;
        Jet3::new(q0, q1, q2, q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn close(a: Jet3, b: Jet3, tol: f64) -> bool {
        [(a.f, b.f), (a.f1, b.f1), (a.f2, b.f2), (a.f3, b.f3)]
            .iter()
            .all(|(x, y)| (x - y).norm() <= tol * (1.0 + y.norm()))
    }

    #[test]
    fn product_and_quotient_invert() {
        let z = c64(0.3, -0.2);
        let x = Jet3::variable(z);
        let a = x * x + Jet3::constant(c64(1.0, 0.5));
        let b = x * x * x - x;
        assert!(close((a * b) / b, a, 1e-13));
    }

    #[test]
    fn reciprocal_of_variable() {
        // 1/z at z=2: (1/2, -1/4, 2/8, -6/16)
        let j = Jet3::variable(c64(2.0, 0.0)).recip();
        assert!(close(j, Jet3::new(c64(0.5, 0.0), c64(-0.25, 0.0), c64(0.25, 0.0), c64(-0.375, 0.0)), 1e-15));
    }

    #[test]
    fn composition_of_squares_is_fourth_power() {
        let z = c64(0.7, 0.1);
        let sq = |w: Complex64| Jet3::variable(w) * Jet3::variable(w);
        let inner = sq(z);
        let outer = sq(inner.f);
        let x = Jet3::variable(z);
        assert!(close(outer.compose(inner), x * x * x * x, 1e-14));
    }

    #[test]
    fn schwarzian_of_square() {
        let j = Jet3::variable(c64(1.0, 0.0)) * Jet3::variable(c64(1.0, 0.0));
        assert!((j.schwarzian() - c64(-1.5, 0.0)).norm() < 1e-15);
    }
}
