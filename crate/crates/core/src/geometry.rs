//! Hyperbolic geometry of the unit disk and closed-form Green functions and
//! inner radii for the disk, disks, half-planes and half-disks.
//!
//! Distances use the convention `tanh d(z1, z2) = |z1 − z2| / |1 − conj(z1) z2|`.

use crate::error::{Error, Result};
use crate::mobius::MobiusTransform;
use crate::rational::DiskPoint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub fn pseudo_hyperbolic(z1: Complex64, z2: Complex64) -> f64 {
    (z1 - z2).norm() / (Complex64::new(1.0, 0.0) - z1.conj() * z2).norm()
}

pub fn hyp_distance(z1: DiskPoint, z2: DiskPoint) -> f64 {
    pseudo_hyperbolic(z1.z(), z2.z()).atanh()
}

/// Disk automorphism `φ` and `λ ∈ (0, 1)` with `φ(−λ) = z1`, `φ(λ) = z2`.
pub fn normalize_pair(z1: DiskPoint, z2: DiskPoint) -> Result<(MobiusTransform, f64)> {
    if z1 == z2 {
        return Err(Error::CoincidentPoints);
    }
    let d = hyp_distance(z1, z2);
    let lambda = (d / 2.0).tanh();
    // send z1 to 0, rotate the image of z2 onto the positive axis, then
    // recentre the symmetric pair
    let to_origin = MobiusTransform::disk_shift(-z1.z())?;
    let u = to_origin.apply(z2.z());
    let rot = MobiusTransform::rotation(u.arg());
    let centre = MobiusTransform::disk_shift(Complex64::new(lambda, 0.0))?;
    let phi = to_origin.inverse().compose(&rot).compose(&centre).normalized();
    debug_assert!((phi.apply(Complex64::new(-lambda, 0.0)) - z1.z()).norm() < 1e-12);
    debug_assert!((phi.apply(Complex64::new(lambda, 0.0)) - z2.z()).norm() < 1e-12);
    Ok((phi, lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelSign {
    /// The part where `g(Z, Z1) > g(Z, Z2)`, containing `Z1`.
    Positive,
    /// The part where `g(Z, Z1) < g(Z, Z2)`, containing `Z2`.
    Negative,
}

impl LevelSign {
    fn factor(self) -> f64 {
        match self {
            LevelSign::Positive => 1.0,
            LevelSign::Negative => -1.0,
        }
    }
}

/// Plane domains with known (or numerically reachable) Green functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    UnitDisk,
    /// `|z − center| < radius`.
    Disk { center: Complex64, radius: f64 },
    /// `Re(conj(normal)·z) < offset`, with `normal` of unit length.
    HalfPlane { normal: Complex64, offset: f64 },
    /// `{|z| < 1, Re z < 0}` or `{|z| < 1, Re z > 0}`.
    HalfDisk { side: Side },
    /// `{Z ∈ base : sign·(g(Z, z1) − g(Z, z2)) > 0}`.
    GreenLevelSubdomain {
        base: Box<DomainSpec>,
        z1: Complex64,
        z2: Complex64,
        sign: LevelSign,
    },
}

impl DomainSpec {
    /// Half-plane `{Re(conj(n) z) < offset}`; `normal` is rescaled to unit length.
    pub fn half_plane(normal: Complex64, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::UnsupportedDomain("half-plane normal must be nonzero".into()));
        }
        Ok(DomainSpec::HalfPlane { normal: normal / n, offset })
    }

    pub fn disk(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::UnsupportedDomain("disk radius must be positive".into()));
        }
        Ok(DomainSpec::Disk { center, radius })
    }

    pub fn green_level(base: DomainSpec, z1: Complex64, z2: Complex64, sign: LevelSign) -> Result<Self> {
        if matches!(base, DomainSpec::GreenLevelSubdomain { .. }) {
            return Err(Error::UnsupportedDomain("nested level subdomains".into()));
        }
        if z1 == z2 {
            return Err(Error::CoincidentPoints);
        }
        for z in [z1, z2] {
            if !base.contains(z) {
                return Err(Error::NotInterior(z));
            }
        }
        Ok(DomainSpec::GreenLevelSubdomain { base: Box::new(base), z1, z2, sign })
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self, DomainSpec::GreenLevelSubdomain { .. })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            DomainSpec::GreenLevelSubdomain { base, z1, z2, sign } => {
                if !base.contains(z) {
                    return false;
                }
                if z == *z1 {
                    return *sign == LevelSign::Positive;
                }
                if z == *z2 {
                    return *sign == LevelSign::Negative;
                }
                match (base.green(z, *z1), base.green(z, *z2)) {
                    (Ok(g1), Ok(g2)) => sign.factor() * (g1 - g2) > 0.0,
                    _ => false,
                }
            }
            _ => self.level(z) < 0.0,
        }
    }

    /// Signed level function, negative exactly inside the domain. For the
    /// closed-form kinds it is a distance-like function that is smooth away
    /// from corners.
    pub fn level(&self, z: Complex64) -> f64 {
        match self {
            DomainSpec::UnitDisk => z.norm() - 1.0,
            DomainSpec::Disk { center, radius } => (z - center).norm() - radius,
            DomainSpec::HalfPlane { normal, offset } => (normal.conj() * z).re - offset,
            DomainSpec::HalfDisk { side } => {
                let x = match side {
                    Side::Left => z.re,
                    Side::Right => -z.re,
                };
                (z.norm() - 1.0).max(x)
            }
            DomainSpec::GreenLevelSubdomain { .. } => {
                if self.contains(z) {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Euclidean distance from an interior point to the boundary, for the
    /// closed-form kinds.
    pub fn boundary_distance(&self, z: Complex64) -> Option<f64> {
        let d = match self {
            DomainSpec::UnitDisk => 1.0 - z.norm(),
            DomainSpec::Disk { center, radius } => radius - (z - center).norm(),
            DomainSpec::HalfPlane { normal, offset } => offset - (normal.conj() * z).re,
            DomainSpec::HalfDisk { side } => {
                let x = match side {
                    Side::Left => -z.re,
                    Side::Right => z.re,
                };
                let to_arc = 1.0 - z.norm();
                // nearest point of the diameter segment
                let y = z.im.clamp(-1.0, 1.0);
                let to_diameter = (Complex64::new(0.0, y) - z).norm();
                if x < 0.0 {
                    return Some(-to_diameter);
                }
                to_arc.min(to_diameter)
            }
            DomainSpec::GreenLevelSubdomain { .. } => return None,
        };
        Some(d)
    }

    /// Conformal map `F` of the domain onto the unit disk and `F'`, for kinds
    /// that are bounded and have one.
    fn to_unit_disk(&self, z: Complex64) -> Option<(Complex64, Complex64)> {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            DomainSpec::UnitDisk => Some((z, one)),
            DomainSpec::Disk { center, radius } => Some(((z - center) / *radius, one / *radius)),
            DomainSpec::HalfDisk { side } => {
                let (sgn, zz) = match side {
                    Side::Left => (1.0, z),
                    Side::Right => (-1.0, -z),
                };
                // left half-disk → upper half-disk → first quadrant →
                // upper half-plane → unit disk
                let u = -i * zz;
                let c = (one + u) / (one - u);
                let s = c * c;
                let f = (s - i) / (s + i);
                let df = (-i) * (2.0 / ((one - u) * (one - u))) * (c * 2.0) * (i * 2.0 / ((s + i) * (s + i)));
                Some((f, df * sgn))
            }
            _ => None,
        }
    }

    fn require_interior(&self, z: Complex64) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::NotInterior(z))
        }
    }

    /// Closed-form Green function `g(z, z0)`.
    pub fn green(&self, z: Complex64, z0: Complex64) -> Result<f64> {
        if let DomainSpec::GreenLevelSubdomain { .. } = self {
            return Err(Error::UnsupportedDomain("level subdomains are numeric only".into()));
        }
        self.require_interior(z)?;
        self.require_interior(z0)?;
        if z == z0 {
            return Ok(f64::INFINITY);
        }
        if let DomainSpec::HalfPlane { normal, .. } = self {
            let d0 = self.boundary_distance(z0).unwrap_or(0.0);
            let mirror = z0 + normal * (2.0 * d0);
            return Ok(((z - mirror).norm() / (z - z0).norm()).ln());
        }
        let (w, _) = self.to_unit_disk(z).expect("closed-form kind");
        let (w0, _) = self.to_unit_disk(z0).expect("closed-form kind");
        let one = Complex64::new(1.0, 0.0);
        Ok(((one - w0.conj() * w).norm() / (w - w0).norm()).ln())
    }

    /// Complex derivative `G'(z)` of a local holomorphic `G` with
    /// `Re G = g(·, z0)`; `|∇g(z)| = |G'(z)|`.
    pub fn green_gradient(&self, z: Complex64, z0: Complex64) -> Result<Complex64> {
        if let DomainSpec::GreenLevelSubdomain { .. } = self {
            return Err(Error::UnsupportedDomain("level subdomains are numeric only".into()));
        }
        let one = Complex64::new(1.0, 0.0);
        if let DomainSpec::HalfPlane { normal, .. } = self {
            let d0 = self.boundary_distance(z0).unwrap_or(0.0);
            let mirror = z0 + normal * (2.0 * d0);
            return Ok(one / (z - mirror) - one / (z - z0));
        }
        let (w, dw) = self.to_unit_disk(z).ok_or(Error::NotInterior(z))?;
        let (w0, _) = self.to_unit_disk(z0).ok_or(Error::NotInterior(z0))?;
        Ok(dw * (-w0.conj() / (one - w0.conj() * w) - one / (w - w0)))
    }

    /// Closed-form inner radius `r(D, z)`.
    pub fn inner_radius(&self, z: Complex64) -> Result<f64> {
        if let DomainSpec::GreenLevelSubdomain { .. } = self {
            return Err(Error::UnsupportedDomain("level subdomains are numeric only".into()));
        }
        self.require_interior(z)?;
        if let DomainSpec::HalfPlane { .. } = self {
            return Ok(2.0 * self.boundary_distance(z).unwrap_or(0.0));
        }
        let (w, dw) = self.to_unit_disk(z).expect("closed-form kind");
        Ok((1.0 - w.norm_sqr()) / dw.norm())
    }
}

/// Green function (when `z0` is given) and inner radius at `z`, by closed form.
pub fn closed_form_invariants(
    domain: &DomainSpec,
    z: Complex64,
    z0: Option<Complex64>,
) -> Result<(Option<f64>, f64)> {
    if !domain.is_closed_form() {
        return Err(Error::UnsupportedDomain(
            "Green level subdomains are handled numerically".into(),
        ));
    }
    let green = match z0 {
        Some(z0) if z0 == z => return Err(Error::CoincidentPoints),
        Some(z0) => Some(domain.green(z, z0)?),
        None => None,
    };
    Ok((green, domain.inner_radius(z)?))
}
