//! Rational maps of the unit disk: evaluation with derivatives, Schwarzian
//! derivatives, singular points and preimage sets.

use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::poly::{cluster, Poly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point is rejected as a pole (or critical point) within this distance.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Roots closer than this are merged into one point with multiplicity.
pub const CLUSTER_RADIUS: f64 = 1e-7;
/// Numerator and denominator roots must be at least this far apart.
pub const COMMON_ROOT_TOL: f64 = 1e-9;
/// Singular points are reported up to this radius.
const SINGULAR_RADIUS: f64 = 1.0 + 1e-9;

/// A point of the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 {
            Ok(DiskPoint(z))
        } else {
            Err(Error::InvalidPoint(format!("{z} is not in the open unit disk")))
        }
    }

    pub fn z(self) -> Complex64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for DiskPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let z = Complex64::deserialize(d)?;
        DiskPoint::new(z).map_err(serde::de::Error::custom)
    }
}

/// JSON shape of a map: coefficient pairs `[re, im]` in ascending degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapSpec {
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
}

/// `P(z) / Q(z)` with `P`, `Q` coprime and `Q` not identically zero.
#[derive(Clone, Debug)]
pub struct RationalMap {
    num: Poly,
    den: Poly,
    poles: Vec<Complex64>,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl RationalMap {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidMap("denominator is identically zero".into()));
        }
        if num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidMap("non-finite coefficient".into()));
        }
        let poles = den.roots();
        if !num.is_zero() {
            for a in num.roots() {
                if poles.iter().any(|p| (a - p).norm() <= COMMON_ROOT_TOL) {
                    return Err(Error::InvalidMap(format!(
                        "numerator and denominator share the root {a}"
                    )));
                }
            }
        }
        Ok(RationalMap { num, den, poles })
    }

    pub fn from_coeffs(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        Self::new(Poly::new(num), Poly::new(den))
    }

    pub fn polynomial(p: Poly) -> Result<Self> {
        Self::new(p, Poly::constant(Complex64::new(1.0, 0.0)))
    }

    pub fn identity() -> Self {
        Self::polynomial(Poly::z()).expect("identity is a valid map")
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[n] = Complex64::new(1.0, 0.0);
        Self::polynomial(Poly::new(c)).expect("monomial is a valid map")
    }

    /// `e^{iθ} ∏ (z − a_k)/(1 − conj(a_k) z)` for zeros `a_k` in the disk.
    pub fn blaschke(zeros: &[Complex64], theta: f64) -> Result<Self> {
        if zeros.iter().any(|a| a.norm() >= 1.0) {
            return Err(Error::InvalidMap("Blaschke zeros must lie in the open disk".into()));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut num = Poly::constant(Complex64::from_polar(1.0, theta));
        let mut den = Poly::constant(one);
        for &a in zeros {
            num = &num * &Poly::new(vec![-a, one]);
            den = &den * &Poly::new(vec![one, -a.conj()]);
        }
        Self::new(num, den)
    }

    pub fn from_spec(spec: &MapSpec) -> Result<Self> {
        let conv = |v: &[[f64; 2]]| v.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        Self::from_coeffs(conv(&spec.numerator), conv(&spec.denominator))
    }

    pub fn to_spec(&self) -> MapSpec {
        let conv = |p: &Poly| p.coeffs().iter().map(|c| [c.re, c.im]).collect();
        MapSpec {
            numerator: conv(&self.num),
            denominator: conv(&self.den),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("map spec serializes")
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// All poles in the finite plane, with multiplicity.
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        if self.poles.iter().any(|p| (z - p).norm() <= SINGULAR_TOL) || self.den.eval(z).norm() == 0.0 {
            Err(Error::PoleAtPoint(z))
        } else {
            Ok(())
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.num.eval(z) / self.den.eval(z))
    }

    /// `f(z), f'(z), f''(z), f'''(z)` by jet arithmetic on `P/Q`.
    pub fn jet_eval(&self, z: Complex64) -> Result<Jet3> {
        self.check_pole(z)?;
        let p = Jet3::from_array(self.num.eval_jet(z));
        let q = Jet3::from_array(self.den.eval_jet(z));
        Ok(p / q)
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.jet_eval(z)?.f1)
    }

    /// Schwarzian derivative `f'''/f' − (3/2)(f''/f')²`.
    pub fn schwarzian_at(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jet_eval(z)?;
        if j.f1.norm() <= SINGULAR_TOL {
            return Err(Error::CriticalPoint(z, SINGULAR_TOL));
        }
        Ok(j.schwarzian())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap> {
        let n = self.degree();
        // g(P/Q) = Σ g_k P^k Q^{n-k} / Σ h_k P^k Q^{n-k}
        let homogenize = |g: &Poly| {
            let mut acc = Poly::default();
            for (k, &c) in g.coeffs().iter().enumerate() {
                let term = &inner.num.pow(k) * &inner.den.pow(n - k);
                acc = &acc + &term.scale(c);
            }
            acc
        };
        RationalMap::new(homogenize(&self.num), homogenize(&self.den))
    }

    /// `a·f + b`.
    pub fn affine(&self, a: Complex64, b: Complex64) -> Result<RationalMap> {
        if a.norm() == 0.0 {
            return Err(Error::InvalidMap("affine factor must be nonzero".into()));
        }
        RationalMap::new(&self.num.scale(a) + &self.den.scale(b), self.den.clone())
    }

    /// Roots of `P − wQ` with `|z| < radius`, merged into clusters.
    pub fn preimages_within(&self, w: Complex64, radius: f64) -> Result<Vec<(Complex64, usize)>> {
        let eq = (&self.num - &self.den.scale(w)).trimmed(1e-14);
        if eq.is_zero() {
            return Err(Error::DegenerateEquation);
        }
        let roots: Vec<Complex64> = eq
            .roots()
            .into_iter()
            .filter(|z| z.norm() < radius)
            .collect();
        Ok(cluster(&roots, CLUSTER_RADIUS))
    }

    /// Solutions of `f(z) = w` in the unit disk with their multiplicities.
    pub fn preimages_in_disk(&self, w: Complex64) -> Result<Vec<(DiskPoint, usize)>> {
        let pts = self.preimages_within(w, 1.0)?;
        Ok(pts.into_iter().map(|(z, m)| (DiskPoint(z), m)).collect())
    }

    /// Poles and critical points (roots of `P'Q − PQ'`) in the closed disk.
    pub fn singular_points(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let pick = |pts: Vec<Complex64>| -> Vec<Complex64> {
            cluster(
                &pts.into_iter().filter(|z| z.norm() < SINGULAR_RADIUS).collect::<Vec<_>>(),
                CLUSTER_RADIUS,
            )
            .into_iter()
            .map(|(z, _)| z)
            .collect()
        };
        let wronskian = (&(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative()))
            .trimmed(1e-14);
        (pick(self.poles.clone()), pick(wronskian.roots()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> RationalMap {
        RationalMap::from_coeffs(vec![b, a], vec![d, c]).unwrap()
    }

    #[test]
    fn identity_jet() {
        let j = RationalMap::identity().jet_eval(c64(0.3, 0.1)).unwrap();
        assert_eq!(j.f, c64(0.3, 0.1));
        assert_eq!(j.f1, c64(1.0, 0.0));
        assert_eq!(j.f2, c64(0.0, 0.0));
        assert_eq!(j.f3, c64(0.0, 0.0));
    }

    #[test]
    fn square_jet() {
        let j = RationalMap::monomial(2).jet_eval(c64(0.5, 0.0)).unwrap();
        assert_eq!((j.f, j.f1, j.f2, j.f3), (c64(0.25, 0.0), c64(1.0, 0.0), c64(2.0, 0.0), c64(0.0, 0.0)));
    }

    #[test]
    fn schwarzian_of_square_at_one() {
        let s = RationalMap::monomial(2).schwarzian_at(c64(1.0, 0.0)).unwrap();
        assert!((s - c64(-1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mobius_schwarzian_vanishes() {
        let m = mobius(c64(1.0, 0.2), c64(0.3, -0.1), c64(0.4, 0.4), c64(2.0, 0.0));
        for z in [c64(0.1, 0.2), c64(-0.7, 0.3), c64(0.0, -0.9)] {
            assert!(m.schwarzian_at(z).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn pole_and_critical_errors() {
        let inv = RationalMap::from_coeffs(vec![c64(1.0, 0.0)], vec![c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
        assert!(matches!(inv.jet_eval(c64(0.0, 0.0)), Err(Error::PoleAtPoint(_))));
        assert!(matches!(inv.jet_eval(c64(1e-13, 0.0)), Err(Error::PoleAtPoint(_))));
        assert!(matches!(
            RationalMap::monomial(2).schwarzian_at(c64(0.0, 0.0)),
            Err(Error::CriticalPoint(..))
        ));
    }

    #[test]
    fn rejects_common_roots_and_zero_denominator() {
        let bad = RationalMap::from_coeffs(
            vec![c64(-0.5, 0.0), c64(1.0, 0.0)],
            vec![c64(-0.5, 0.0), c64(1.0, 0.0)],
        );
        assert!(matches!(bad, Err(Error::InvalidMap(_))));
        assert!(RationalMap::from_coeffs(vec![c64(1.0, 0.0)], vec![c64(0.0, 0.0)]).is_err());
    }

    #[test]
    fn preimages_of_square() {
        let mut pre = RationalMap::monomial(2).preimages_in_disk(c64(0.25, 0.0)).unwrap();
        pre.sort_by(|a, b| a.0.z().re.total_cmp(&b.0.z().re));
        assert_eq!(pre.len(), 2);
        assert!((pre[0].0.z() - c64(-0.5, 0.0)).norm() < 1e-14 && pre[0].1 == 1);
        assert!((pre[1].0.z() - c64(0.5, 0.0)).norm() < 1e-14 && pre[1].1 == 1);
    }

    #[test]
    fn preimage_of_mobius_is_unique() {
        let m = mobius(c64(1.0, 0.0), c64(0.3, 0.0), c64(0.3, 0.0), c64(1.0, 0.0));
        let pre = m.preimages_in_disk(c64(0.3, 0.0)).unwrap();
        assert_eq!(pre.len(), 1);
        assert!(pre[0].0.z().norm() < 1e-14 && pre[0].1 == 1);
    }

    #[test]
    fn critical_value_has_double_preimage() {
        let pre = RationalMap::monomial(2).preimages_in_disk(c64(0.0, 0.0)).unwrap();
        assert_eq!(pre, vec![(DiskPoint(c64(0.0, 0.0)), 2)]);
    }

    #[test]
    fn degenerate_equation() {
        let constant = RationalMap::polynomial(Poly::constant(c64(2.0, 0.0))).unwrap();
        assert!(matches!(constant.preimages_in_disk(c64(2.0, 0.0)), Err(Error::DegenerateEquation)));
    }

    #[test]
    fn singular_points_of_simple_maps() {
        let inv = RationalMap::from_coeffs(vec![c64(1.0, 0.0)], vec![c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
        let (p, c) = inv.singular_points();
        assert_eq!(p.len(), 1);
        assert!(p[0].norm() < 1e-15);
        assert!(c.is_empty());
        let (p, c) = RationalMap::monomial(2).singular_points();
        assert!(p.is_empty());
        assert_eq!(c.len(), 1);
        assert!(c[0].norm() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let m = RationalMap::blaschke(&[c64(0.2, 0.3), c64(-0.5, 0.1)], 0.7).unwrap();
        let back = RationalMap::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
        let id = RationalMap::from_json(r#"{"numerator": [[0,0],[1,0]], "denominator": [[1,0]]}"#).unwrap();
        assert_eq!(id, RationalMap::identity());
    }

    #[test]
    fn composition_and_affine() {
        let sq = RationalMap::monomial(2);
        let m = mobius(c64(1.0, 0.0), c64(0.5, 0.0), c64(0.5, 0.0), c64(1.0, 0.0));
        let comp = sq.compose(&m).unwrap();
        let z = c64(0.1, -0.4);
        let direct = m.eval(z).unwrap().powi(2);
        assert!((comp.eval(z).unwrap() - direct).norm() < 1e-14);
        let aff = sq.affine(c64(2.0, 1.0), c64(0.0, -1.0)).unwrap();
        assert!((aff.eval(z).unwrap() - (z * z * c64(2.0, 1.0) + c64(0.0, -1.0))).norm() < 1e-14);
    }

    #[test]
    fn disk_point_validation() {
        assert!(DiskPoint::new(c64(0.6, 0.8)).is_err());
        assert!(DiskPoint::new(c64(0.6, 0.7)).is_ok());
        assert!(serde_json::from_str::<DiskPoint>("[1.5, 0.0]").is_err());
    }
}
