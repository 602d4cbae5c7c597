//! Two-point distortion bounds: both sides, slack and hypothesis status.

use crate::capacity::walk::{inner_radius_numeric, WalkBudget};
use crate::covering::{
    check_delta_covering, check_gamma_covering, CoveringVerdict, DEFAULT_CURVE_SAMPLES, DEFAULT_FAMILY_SAMPLES,
};
use crate::error::{Error, Result};
use crate::geometry::{normalize_pair, pseudo_hyperbolic, DomainSpec};
use crate::jet::Jet3;
use crate::rational::{DiskPoint, RationalMap, SINGULAR_TOL};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Slack above `−DEFAULT_SLACK_TOL` counts as "holds".
pub const DEFAULT_SLACK_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "goluzin_1")]
    Goluzin1,
    #[serde(rename = "lemma_2")]
    Lemma2,
    #[serde(rename = "schwarzian_5")]
    Schwarzian5,
    #[serde(rename = "rho_12_13")]
    Rho1213,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Goluzin1 => "goluzin_1",
            InequalityId::Lemma2 => "lemma_2",
            InequalityId::Schwarzian5 => "schwarzian_5",
            InequalityId::Rho1213 => "rho_12_13",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    CheckedOk,
    CheckedViolated,
    Assumed,
}

impl Hypothesis {
    pub fn as_str(self) -> &'static str {
        match self {
            Hypothesis::CheckedOk => "checked_ok",
            Hypothesis::CheckedViolated => "checked_violated",
            Hypothesis::Assumed => "assumed",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub map_digest: Option<String>,
    pub points: Vec<Complex64>,
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub hypothesis: Hypothesis,
    pub inputs: BoundInputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringVerdict>,
    /// ρ-family only: slack of the finite-ρ bound divided by ρ².
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescaled_slack: Option<f64>,
    /// ρ-family only: `|rescaled_slack − schwarzian slack|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_gap: Option<f64>,
}

impl BoundReport {
    fn new(id: InequalityId, lhs: f64, rhs: f64, inputs: BoundInputs) -> Self {
        BoundReport {
            inequality_id: id,
            lhs,
            rhs,
            slack: rhs - lhs,
            hypothesis: Hypothesis::Assumed,
            inputs,
            covering: None,
            rescaled_slack: None,
            limit_gap: None,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }

    fn with_verdict(mut self, v: CoveringVerdict) -> Self {
        self.hypothesis = if v.passed() { Hypothesis::CheckedOk } else { Hypothesis::CheckedViolated };
        self.covering = Some(v);
        self
    }
}

/// SHA-256 of the map's canonical JSON, in hex.
pub fn map_digest(map: &RationalMap) -> String {
    let d = Sha256::digest(map.to_json().as_bytes());
    let mut s = String::with_capacity(64);
    for b in d.iter() {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn inputs(map: &RationalMap, points: &[Complex64], params: &[(&str, f64)]) -> BoundInputs {
    BoundInputs {
        map_digest: Some(map_digest(map)),
        points: points.to_vec(),
        parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}

/// Jets at `z1`, `z2` with finite, distinct values.
fn pair_jets(map: &RationalMap, z1: DiskPoint, z2: DiskPoint) -> Result<(Jet3, Jet3)> {
    if z1 == z2 {
        return Err(Error::CoincidentPoints);
    }
    let j1 = map.jet_eval(z1.z())?;
    let j2 = map.jet_eval(z2.z())?;
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    if !finite(j1.f) || !finite(j2.f) || j1.f == j2.f {
        return Err(Error::CoincidentImages);
    }
    Ok((j1, j2))
}

fn nonsingular(z: DiskPoint, j: &Jet3) -> Result<()> {
    if j.f1.norm() <= SINGULAR_TOL {
        Err(Error::CriticalPoint(z.z(), SINGULAR_TOL))
    } else {
        Ok(())
    }
}

/// `|(1−|z1|²) f'(z1) (1−|z2|²) f'(z2)| tanh² d(z1, z2)` against `|w1 − w2|²`.
pub fn goluzin_report(map: &RationalMap, z1: DiskPoint, z2: DiskPoint, check: bool) -> Result<BoundReport> {
    let (j1, j2) = pair_jets(map, z1, z2)?;
    let (a, b) = (z1.z(), z2.z());
    let t = pseudo_hyperbolic(a, b);
    let lhs = ((1.0 - a.norm_sqr()) * j1.f1 * (1.0 - b.norm_sqr()) * j2.f1).norm() * t * t;
    let rhs = (j1.f - j2.f).norm_sqr();
    let report = BoundReport::new(InequalityId::Goluzin1, lhs, rhs, inputs(map, &[a, b], &[]));
    if check {
        let v = check_gamma_covering(map, z1, z2, DEFAULT_CURVE_SAMPLES, DEFAULT_FAMILY_SAMPLES)?;
        return Ok(report.with_verdict(v));
    }
    Ok(report)
}

/// Both sides of the Schwarzian bound from the jets at `z1`, `z2`.
fn schwarzian_sides(a: Complex64, b: Complex64, j1: &Jet3, j2: &Jet3) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let dw = j2.f - j1.f;
    let dw2 = dw * dw;
    let (f1, f2) = (j1.f1, j2.f1);
    let s1 = j1.schwarzian();
    let s2 = j2.schwarzian();
    let dz = a - b;
    let q = one - a * b.conj();
    let sum = s1 * dw2 / (f1 * f1 * 6.0)
        + s2 * dw2 / (f2 * f2 * 6.0)
        + dw2 * 2.0 / (f1 * f2 * dz * dz)
        + dw.norm_sqr() * 2.0 / (f1 * f2.conj() * q * q);
    let rhs = 2.0
        + dw.norm_sqr() / (f1.norm_sqr() * (1.0 - a.norm_sqr()).powi(2))
        + dw.norm_sqr() / (f2.norm_sqr() * (1.0 - b.norm_sqr()).powi(2));
    (sum.re, rhs)
}

/// `(2f − w1 − w2)/(w2 − w1)`, sending `w1 ↦ −1`, `w2 ↦ 1`.
pub fn normalize_map(map: &RationalMap, w1: Complex64, w2: Complex64) -> Result<RationalMap> {
    let d = w2 - w1;
    map.affine(Complex64::new(2.0, 0.0) / d, -(w1 + w2) / d)
}

/// Schwarzian two-point bound, evaluated on the normalized map.
pub fn schwarzian_report(map: &RationalMap, z1: DiskPoint, z2: DiskPoint, check: bool) -> Result<BoundReport> {
    let (j1, j2) = pair_jets(map, z1, z2)?;
    nonsingular(z1, &j1)?;
    nonsingular(z2, &j2)?;
    let g = normalize_map(map, j1.f, j2.f)?;
    let (k1, k2) = (g.jet_eval(z1.z())?, g.jet_eval(z2.z())?);
    let (lhs, rhs) = schwarzian_sides(z1.z(), z2.z(), &k1, &k2);
    let report = BoundReport::new(InequalityId::Schwarzian5, lhs, rhs, inputs(map, &[z1.z(), z2.z()], &[]));
    if check {
        let v = check_delta_covering(map, z1, z2, DEFAULT_CURVE_SAMPLES, DEFAULT_FAMILY_SAMPLES)?;
        return Ok(report.with_verdict(v));
    }
    Ok(report)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("λ = {lambda} not in (0, 1)")))
    }
}

/// Equality map of the Schwarzian bound at `(−λ, λ)`; maps `U` onto the
/// plane slit along an arc of the unit circle.
pub fn extremal_schwarzian_map(lambda: f64) -> Result<RationalMap> {
    check_lambda(lambda)?;
    let (l, s) = (lambda, 1.0 + lambda * lambda);
    let c = Complex64::new;
    RationalMap::from_coeffs(vec![c(0.0, -l), c(s, 0.0), c(0.0, -l)], vec![c(l, 0.0), c(0.0, -s), c(l, 0.0)])
}

/// `A·z/(1 − z²) + B` with `f(−λ) = w1`, `f(λ) = w2`.
pub fn goluzin_extremal_map(lambda: f64, w1: Complex64, w2: Complex64) -> Result<RationalMap> {
    check_lambda(lambda)?;
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    if w1 == w2 || !finite(w1) || !finite(w2) {
        return Err(Error::CoincidentImages);
    }
    let a = (w2 - w1) * ((1.0 - lambda * lambda) / (2.0 * lambda));
    let b = (w1 + w2) * 0.5;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    RationalMap::from_coeffs(vec![b, a, -b], vec![one, zero, -one])
}

/// Goluzin equality map for an arbitrary pair: the symmetric extremal
/// precomposed with the inverse of the pair's normalizing automorphism.
pub fn goluzin_extremal_for_pair(z1: DiskPoint, z2: DiskPoint, w1: Complex64, w2: Complex64) -> Result<RationalMap> {
    let (phi, lambda) = normalize_pair(z1, z2)?;
    goluzin_extremal_map(lambda, w1, w2)?.compose(&phi.inverse().to_rational())
}

/// Inner radius by closed form, or by walk-on-spheres for level subdomains.
fn inner_radius_any(domain: &DomainSpec, w: Complex64) -> Result<f64> {
    if !domain.contains(w) {
        return Err(Error::NotInterior(w));
    }
    if domain.is_closed_form() {
        domain.inner_radius(w)
    } else {
        Ok(inner_radius_numeric(domain, w, &WalkBudget::default())?.value)
    }
}

/// `r(B1, W1) r(B2, W2)` against `|W1 − W2|²`; disjointness is assumed.
pub fn lemma_product_check(b1: &DomainSpec, w1: Complex64, b2: &DomainSpec, w2: Complex64) -> Result<BoundReport> {
    let lhs = inner_radius_any(b1, w1)? * inner_radius_any(b2, w2)?;
    let rhs = (w1 - w2).norm_sqr();
    let inputs = BoundInputs { map_digest: None, points: vec![w1, w2], parameters: BTreeMap::new() };
    Ok(BoundReport::new(InequalityId::Lemma2, lhs, rhs, inputs))
}

/// `Σ log[(1−|ζ_k|²)|f'(ζ_k)|] + Σ_{k≠l} δ_k δ_l log|(1 − conj(ζ_k) ζ_l)/(ζ_k − ζ_l)|`.
pub fn reduced_energy(points: &[DiskPoint], potentials: &[f64], map: &RationalMap) -> Result<f64> {
    if points.len() != potentials.len() {
        return Err(Error::ParameterOutOfRange("points and potentials differ in length".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut sum = 0.0;
    for (k, p) in points.iter().enumerate() {
        let j = map.jet_eval(p.z())?;
        nonsingular(*p, &j)?;
        sum += ((1.0 - p.z().norm_sqr()) * j.f1.norm()).ln();
        for (l, q) in points.iter().enumerate() {
            if l == k {
                continue;
            }
            let (a, b) = (p.z(), q.z());
            if (a - b).norm() <= SINGULAR_TOL {
                return Err(Error::DuplicatePoints);
            }
            sum += potentials[k] * potentials[l] * ((one - a.conj() * b).norm() / (a - b).norm()).ln();
        }
    }
    Ok(sum)
}

/// Coefficients of `p(z0 + d)` in powers of `d`.
fn taylor_shift(coeffs: &[Complex64], z0: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for k in (i..n.saturating_sub(1)).rev() {
            let next = c[k + 1];
            c[k] += z0 * next;
        }
    }
    c
}

/// `f(z0 + d) − f(z0)` without forming `z0 + d`, so that it keeps full
/// relative precision for small `d`.
struct Increment {
    /// `p_k q_0 − p_0 q_k`, `k ≥ 1`, of the shifted numerator and denominator.
    cross: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl Increment {
    fn new(f: &RationalMap, z0: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let p = taylor_shift(f.numerator().coeffs(), z0);
        let q = taylor_shift(f.denominator().coeffs(), z0);
        let n = p.len().max(q.len());
        let at = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or(zero);
        let cross = (1..n).map(|k| at(&p, k) * at(&q, 0) - at(&p, 0) * at(&q, k)).collect();
        Increment { cross, den: q }
    }

    fn eval(&self, d: Complex64) -> Complex64 {
        let horner = |v: &[Complex64]| v.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * d + c);
        d * horner(&self.cross) / (self.den[0] * horner(&self.den))
    }
}

/// Follows the local inverse of `f` from `z0` until `f(z0 + d) − f(z0) = dw`;
/// returns `d`.
fn continue_inverse(f: &RationalMap, z0: Complex64, dw: Complex64) -> Result<Complex64> {
    const STEPS: usize = 16;
    let inc = Increment::new(f, z0);
    let mut d = Complex64::new(0.0, 0.0);
    for s in 1..=STEPS {
        let target = dw * (s as f64 / STEPS as f64);
        let mut converged = false;
        for _ in 0..60 {
            let slope = f.derivative_at(z0 + d)?;
            if slope.norm() <= SINGULAR_TOL {
                return Err(Error::ContinuationFailed(z0 + d));
            }
            let step = (inc.eval(d) - target) / slope;
            d -= step;
            if step.norm() <= 1e-15 * d.norm() {
                converged = true;
                break;
            }
        }
        let z = z0 + d;
        let resid = (inc.eval(d) - target).norm();
        if !(converged || resid <= 1e-14 * target.norm()) || z.norm() >= 1.0 {
            return Err(Error::ContinuationFailed(z));
        }
    }
    Ok(d)
}

/// Finite-ρ form of the four-point bound for a map normalized to
/// `f(z1) = −1`, `f(z2) = 1`. The slack divided by ρ² tends to the
/// Schwarzian slack as ρ → 0.
pub fn rho_family_report(map: &RationalMap, z1: DiskPoint, z2: DiskPoint, rho: f64) -> Result<BoundReport> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::ParameterOutOfRange(format!("ρ = {rho} not in (0, 1/2)")));
    }
    let (j1, j2) = pair_jets(map, z1, z2)?;
    nonsingular(z1, &j1)?;
    nonsingular(z2, &j2)?;
    let (m1, p1) = (Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0));
    if (j1.f - m1).norm() > 1e-9 || (j2.f - p1).norm() > 1e-9 {
        return Err(Error::NotNormalized);
    }
    let delta = [-1.0, 1.0, 1.0, -1.0];
    let mut disp = [Complex64::new(0.0, 0.0); 4];
    let mut h = disp;
    for k in 0..4 {
        // ω_k − f(z_k) is exactly ±ρ for a normalized map
        let z0 = if k < 2 { z1.z() } else { z2.z() };
        let dw = if k % 2 == 0 { -rho } else { rho };
        disp[k] = continue_inverse(map, z0, Complex64::new(dw, 0.0))?;
        h[k] = z0 + disp[k];
    }
    let pts: Vec<DiskPoint> = h.iter().map(|&z| DiskPoint::new(z)).collect::<Result<_>>()?;
    let lhs = reduced_energy(&pts, &delta, map)?;
    let rhs = 2.0 * (4.0 * rho * rho / (1.0 - rho * rho)).ln();

    // Same difference with the log ρ terms cancelled analytically.
    let one = Complex64::new(1.0, 0.0);
    let pair = |k: usize, l: usize| ((one - h[k].conj() * h[l]).norm() / (h[k] - h[l]).norm()).ln();
    let mut rest = 0.0;
    for hk in &h {
        rest += ((1.0 - hk.norm_sqr()) * map.derivative_at(*hk)?.norm()).ln();
    }
    for (k, l) in [(0, 1), (2, 3)] {
        rest -= 2.0 * (one - h[k].conj() * h[l]).norm().ln();
    }
    for k in 0..2 {
        for l in 2..4 {
            rest += 2.0 * delta[k] * delta[l] * pair(k, l);
        }
    }
    let near = |k: usize, l: usize| ((disp[k] - disp[l]).norm() / (2.0 * rho)).ln();
    let grouped = -2.0 * (-rho * rho).ln_1p() - 2.0 * near(0, 1) - 2.0 * near(2, 3) - rest;
    let rescaled = grouped / (rho * rho);

    let (lhs5, rhs5) = schwarzian_sides(z1.z(), z2.z(), &j1, &j2);
    let mut report =
        BoundReport::new(InequalityId::Rho1213, lhs, rhs, inputs(map, &[z1.z(), z2.z()], &[("rho", rho)]));
    report.rescaled_slack = Some(rescaled);
    report.limit_gap = Some((rescaled - (rhs5 - lhs5)).abs());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::geometry::Side;
    use crate::mobius::MobiusTransform;
    use proptest::prelude::*;

    fn dp(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c64(re, im)).unwrap()
    }

    fn koebe_like() -> RationalMap {
        goluzin_extremal_map(0.5, c64(-2.0 / 3.0, 0.0), c64(2.0 / 3.0, 0.0)).unwrap()
    }

    #[test]
    fn goluzin_identity() {
        let r = goluzin_report(&RationalMap::identity(), dp(-0.5, 0.0), dp(0.5, 0.0), false).unwrap();
        assert!((r.lhs - 0.36).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        assert!((r.slack - 0.64).abs() < 1e-15);
        assert_eq!(r.hypothesis, Hypothesis::Assumed);
    }

    #[test]
    fn goluzin_koebe_equality() {
        // z/(1 − z²) at ±1/2 takes the values ±2/3
        let k = koebe_like();
        assert!((k.eval(c64(0.5, 0.0)).unwrap() - c64(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let r = goluzin_report(&k, dp(-0.5, 0.0), dp(0.5, 0.0), true).unwrap();
        assert!((r.lhs - 16.0 / 9.0).abs() < 1e-14, "{}", r.lhs);
        assert!(r.slack.abs() < 1e-14);
        assert_eq!(r.hypothesis, Hypothesis::CheckedOk);
    }

    #[test]
    fn goluzin_extremal_example() {
        let f = goluzin_extremal_map(0.5, c64(-1.0, 0.0), c64(1.0, 0.0)).unwrap();
        let z = c64(0.3, 0.2);
        assert!((f.eval(z).unwrap() - z * 1.5 / (1.0 - z * z)).norm() < 1e-15);
        // the boundary goes onto the imaginary axis, outside (−i·0.75, i·0.75)
        for k in 1..40 {
            let w = f.eval(Complex64::from_polar(1.0, 0.157 * k as f64)).unwrap();
            assert!(w.re.abs() < 1e-12 * w.norm() && w.im.abs() >= 0.75 - 1e-12);
        }
    }

    #[test]
    fn goluzin_extremal_for_general_pair() {
        let (z1, z2) = (dp(0.1, -0.3), dp(-0.2, 0.5));
        let f = goluzin_extremal_for_pair(z1, z2, c64(1.0, 1.0), c64(-0.5, 2.0)).unwrap();
        assert!((f.eval(z1.z()).unwrap() - c64(1.0, 1.0)).norm() < 1e-12);
        let r = goluzin_report(&f, z1, z2, false).unwrap();
        assert!(r.slack.abs() < 1e-10 * r.rhs);
    }

    #[test]
    fn schwarzian_identity() {
        let r = schwarzian_report(&RationalMap::identity(), dp(-0.5, 0.0), dp(0.5, 0.0), false).unwrap();
        assert!((r.lhs - 3.28).abs() < 1e-14);
        assert!((r.rhs - 50.0 / 9.0).abs() < 1e-14);
        assert!((r.slack - 2.2755555555555556).abs() < 1e-14);
    }

    #[test]
    fn extremal_schwarzian_values() {
        let f = extremal_schwarzian_map(0.5).unwrap();
        assert!((f.eval(c64(0.5, 0.0)).unwrap() - c64(1.0, 0.0)).norm() < 1e-12);
        assert!((f.eval(c64(-0.5, 0.0)).unwrap() - c64(-1.0, 0.0)).norm() < 1e-12);
        assert!((f.eval(c64(0.0, 0.0)).unwrap() - c64(0.0, -1.0)).norm() < 1e-15);
        let w = f.eval(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3)).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-10);
        assert!(matches!(extremal_schwarzian_map(1.0), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn extremal_schwarzian_equality() {
        for k in 1..10 {
            let l = 0.1 * k as f64;
            let f = extremal_schwarzian_map(l).unwrap();
            let r = schwarzian_report(&f, dp(-l, 0.0), dp(l, 0.0), false).unwrap();
            assert!(r.slack.abs() < 1e-9, "λ = {l}: {}", r.slack);
        }
    }

    #[test]
    fn lemma_examples() {
        let left = DomainSpec::half_plane(c64(1.0, 0.0), 0.0).unwrap();
        let right = DomainSpec::half_plane(c64(-1.0, 0.0), 0.0).unwrap();
        let r = lemma_product_check(&left, c64(-1.0, 0.0), &right, c64(1.0, 0.0)).unwrap();
        assert!((r.lhs - 4.0).abs() < 1e-15 && r.slack.abs() < 1e-15);
        let (l, rr) = (DomainSpec::HalfDisk { side: Side::Left }, DomainSpec::HalfDisk { side: Side::Right });
        let r = lemma_product_check(&l, c64(-0.5, 0.0), &rr, c64(0.5, 0.0)).unwrap();
        assert!((r.lhs - 0.36).abs() < 1e-14 && (r.rhs - 1.0).abs() < 1e-15);
        let small = DomainSpec::disk(c64(-1.0, 0.0), 0.1).unwrap();
        let r = lemma_product_check(&small, c64(-1.0, 0.0), &right, c64(1.0, 0.0)).unwrap();
        assert!((r.lhs - 0.2).abs() < 1e-15 && r.slack > 0.0);
        assert!(matches!(
            lemma_product_check(&small, c64(1.0, 0.0), &right, c64(1.0, 0.0)),
            Err(Error::NotInterior(_))
        ));
    }

    #[test]
    fn reduced_energy_examples() {
        let pts = [dp(-0.8, 0.0), dp(-0.6, 0.0), dp(0.6, 0.0), dp(0.8, 0.0)];
        let e = reduced_energy(&pts, &[-1.0, 1.0, 1.0, -1.0], &RationalMap::identity()).unwrap();
        assert!((e - -6.680490373961034).abs() < 1e-12, "{e}");
        let a: f64 = 0.3;
        let e = reduced_energy(&[dp(-a, 0.0), dp(a, 0.0)], &[1.0, -1.0], &RationalMap::identity()).unwrap();
        let expect = 2.0 * (1.0 - a * a).ln() - 2.0 * ((1.0 + a * a) / (2.0 * a)).ln();
        assert!((e - expect).abs() < 1e-14);
        assert!(matches!(
            reduced_energy(&[dp(0.1, 0.0), dp(0.1, 0.0)], &[1.0, 1.0], &RationalMap::identity()),
            Err(Error::DuplicatePoints)
        ));
    }

    #[test]
    fn reduced_energy_rotation_invariant() {
        let pts = [dp(-0.3, 0.1), dp(0.2, 0.4), dp(0.5, -0.5)];
        let f = extremal_schwarzian_map(0.4).unwrap();
        let g = f.affine(Complex64::from_polar(1.0, 0.9), c64(0.0, 0.0)).unwrap();
        let d = [1.0, -1.0, 0.5];
        let (a, b) = (reduced_energy(&pts, &d, &f).unwrap(), reduced_energy(&pts, &d, &g).unwrap());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rho_limit_identity_like() {
        let f = RationalMap::identity().affine(c64(2.0, 0.0), c64(0.0, 0.0)).unwrap();
        let r2 = rho_family_report(&f, dp(-0.5, 0.0), dp(0.5, 0.0), 1e-2).unwrap();
        let r3 = rho_family_report(&f, dp(-0.5, 0.0), dp(0.5, 0.0), 1e-3).unwrap();
        assert!((r2.rescaled_slack.unwrap() - 2.2756243).abs() < 1e-6, "{:?}", r2.rescaled_slack);
        assert!((r3.rescaled_slack.unwrap() - 2.27555624).abs() < 1e-7, "{:?}", r3.rescaled_slack);
        assert!(r3.limit_gap.unwrap() < r2.limit_gap.unwrap());
        assert!((r3.slack - r3.rescaled_slack.unwrap() * 1e-6).abs() < 1e-9);
    }

    #[test]
    fn increment_matches_direct_difference() {
        let f = extremal_schwarzian_map(0.3).unwrap();
        let z0 = c64(0.2, -0.1);
        let inc = Increment::new(&f, z0);
        let d = c64(0.05, 0.02);
        let direct = f.eval(z0 + d).unwrap() - f.eval(z0).unwrap();
        assert!((inc.eval(d) - direct).norm() < 1e-14);
        assert_eq!(taylor_shift(&[c64(1.0, 0.0), c64(2.0, 0.0), c64(3.0, 0.0)], c64(1.0, 0.0)), vec![
            c64(6.0, 0.0),
            c64(8.0, 0.0),
            c64(3.0, 0.0)
        ]);
    }

    #[test]
    fn rho_requires_normalization() {
        let r = rho_family_report(&RationalMap::identity(), dp(-0.5, 0.0), dp(0.5, 0.0), 1e-2);
        assert!(matches!(r, Err(Error::NotNormalized)));
    }

    #[test]
    fn digest_is_stable_hex() {
        let d = map_digest(&RationalMap::identity());
        assert_eq!(d.len(), 64);
        assert_eq!(d, map_digest(&RationalMap::identity()));
        assert_ne!(d, map_digest(&RationalMap::monomial(2)));
    }

    #[test]
    fn report_json_names() {
        let r = goluzin_report(&RationalMap::identity(), dp(-0.5, 0.0), dp(0.5, 0.0), false).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"inequality_id\":\"goluzin_1\"") && s.contains("\"hypothesis\":\"assumed\""));
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    fn disk_pt() -> impl Strategy<Value = Complex64> {
        (0.0..0.9f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn goluzin_mobius_invariance(a in disk_pt(), b in disk_pt(), p in disk_pt(), th in 0.0..std::f64::consts::TAU) {
            prop_assume!((a - b).norm() > 1e-2);
            let f = extremal_schwarzian_map(0.35).unwrap();
            let phi = MobiusTransform::disk_automorphism(p, th).unwrap();
            let g = f.compose(&phi.to_rational()).unwrap();
            let inv = phi.inverse();
            let (za, zb) = (DiskPoint::new(inv.apply(a)).unwrap(), DiskPoint::new(inv.apply(b)).unwrap());
            let r1 = goluzin_report(&f, DiskPoint::new(a).unwrap(), DiskPoint::new(b).unwrap(), false);
            let r2 = goluzin_report(&g, za, zb, false);
            if let (Ok(r1), Ok(r2)) = (r1, r2) {
                let s = 1.0 + r1.rhs;
                prop_assert!((r1.lhs - r2.lhs).abs() < 1e-10 * s);
                prop_assert!((r1.slack - r2.slack).abs() < 1e-10 * s);
            }
        }

        #[test]
        fn goluzin_affine_equivariance(a in disk_pt(), b in disk_pt(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
            let k = c64(re, im);
            prop_assume!((a - b).norm() > 1e-2 && k.norm() > 0.1);
            let f = koebe_like();
            let g = f.affine(k, c64(0.7, -0.2)).unwrap();
            let (za, zb) = (DiskPoint::new(a).unwrap(), DiskPoint::new(b).unwrap());
            let r1 = goluzin_report(&f, za, zb, false).unwrap();
            let r2 = goluzin_report(&g, za, zb, false).unwrap();
            let s = k.norm_sqr();
            prop_assert!((r2.lhs - s * r1.lhs).abs() < 1e-9 * (1.0 + r2.lhs));
            prop_assert!((r2.rhs - s * r1.rhs).abs() < 1e-9 * (1.0 + r2.rhs));
            prop_assert!(r1.slack >= -1e-10 && r2.slack >= -1e-10);
        }

        #[test]
        fn schwarzian_normalization_invariant(a in disk_pt(), b in disk_pt()) {
            prop_assume!((a - b).norm() > 1e-2);
            let f = extremal_schwarzian_map(0.6).unwrap();
            let (za, zb) = (DiskPoint::new(a).unwrap(), DiskPoint::new(b).unwrap());
            if let (Ok(j1), Ok(j2)) = (f.jet_eval(a), f.jet_eval(b)) {
                prop_assume!(j1.f1.norm() > 1e-6 && j2.f1.norm() > 1e-6 && (j1.f - j2.f).norm() > 1e-6);
                let r = schwarzian_report(&f, za, zb, false).unwrap();
                let (lhs, rhs) = schwarzian_sides(a, b, &j1, &j2);
                prop_assert!((r.lhs - lhs).abs() < 1e-10 * (1.0 + lhs.abs()));
                prop_assert!((r.rhs - rhs).abs() < 1e-10 * (1.0 + rhs));
            }
        }

        #[test]
        fn extremal_grid_equality(l in 0.05..0.95f64) {
            let f = extremal_schwarzian_map(l).unwrap();
            let r = schwarzian_report(&f, dp(-l, 0.0), dp(l, 0.0), false).unwrap();
            prop_assert!(r.slack.abs() < 1e-9 * (1.0 + r.rhs.abs()));
            let g = goluzin_extremal_map(l, c64(-1.0, 0.3), c64(2.0, 0.1)).unwrap();
            let r = goluzin_report(&g, dp(-l, 0.0), dp(l, 0.0), false).unwrap();
            prop_assert!(r.slack.abs() < 1e-10 * (1.0 + r.rhs));
        }
    }
}
