use crate::error::{Error, Result};
use crate::rational::RationalMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `z ↦ (az + b)/(cz + d)` with `ad − bc ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusTransform {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusTransform {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if det.norm() <= 1e-300 || !det.re.is_finite() || !det.im.is_finite() {
            return Err(Error::InvalidMap("Möbius determinant vanishes".into()));
        }
        Ok(MobiusTransform { a, b, c, d })
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MobiusTransform { a: one, b: zero, c: zero, d: one }
    }

    /// Disk automorphism `z ↦ (z + p)/(1 + conj(p) z)`, sending 0 to `p`.
    pub fn disk_shift(p: Complex64) -> Result<Self> {
        if p.norm() >= 1.0 {
            return Err(Error::InvalidPoint(format!("{p} is not in the open unit disk")));
        }
        let one = Complex64::new(1.0, 0.0);
        Self::new(one, p, p.conj(), one)
    }

    /// `z ↦ e^{iθ} z`.
    pub fn rotation(theta: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        MobiusTransform {
            a: Complex64::from_polar(1.0, theta),
            b: zero,
            c: zero,
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// General disk automorphism `e^{iθ}(z − p)/(1 − conj(p) z)`.
    pub fn disk_automorphism(p: Complex64, theta: f64) -> Result<Self> {
        Ok(Self::rotation(theta).compose(&Self::disk_shift(-p)?))
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MobiusTransform) -> MobiusTransform {
        MobiusTransform {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    pub fn inverse(&self) -> MobiusTransform {
        MobiusTransform { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescaled so that `ad − bc = 1`.
    pub fn normalized(&self) -> MobiusTransform {
        let k = self.determinant().sqrt().inv();
        MobiusTransform { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    /// Checks `|T(e^{iθ})| = 1` at eight boundary samples.
    pub fn is_disk_automorphism(&self) -> bool {
        (0..8).all(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0);
            (self.apply(z).norm() - 1.0).abs() <= 1e-10
        }) && self.apply(Complex64::new(0.0, 0.0)).norm() < 1.0
    }

    pub fn to_rational(&self) -> RationalMap {
        RationalMap::from_coeffs(vec![self.b, self.a], vec![self.d, self.c])
            .expect("nondegenerate Möbius map is a valid rational map")
    }
}
