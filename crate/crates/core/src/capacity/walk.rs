//! Walk-on-spheres estimates of Green functions and inner radii.
//!
//! Singularity splitting: on a closed-form domain `g(z, z0) = −log|z − z0| +
//! E_z[log|X − z0|]`; on a Green level subdomain `B ⊂ D` the base Green
//! function is split off instead, `g_B(z, z0) = g_D(z, z0) − E_z[g_D(X, z0)]`,
//! where `X` is the exit point of Brownian motion from `B`. The remaining
//! expectation is harmonic in `z`, so the Robin constant is its value at
//! `z0` itself.
//!
//! Walks run in fixed chunks, each with its own ChaCha stream; chunk
//! statistics are merged pairwise in chunk order, so results do not depend on
//! the number of worker threads.

use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::mobius::MobiusTransform;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

const CHUNK: usize = 1024;
const BATCH_CHUNKS: usize = 16;
const MAX_STEPS: usize = 100_000;
/// Fraction of the first-order distance to a level line used as ball radius
/// when the line has no closed form.
const LEVEL_SAFETY: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkBudget {
    /// Upper bound on the number of walks.
    pub max_walks: usize,
    /// Target standard error (of the Green value, or of `log r`).
    pub tolerance: f64,
    pub seed: u64,
    /// Walks stop within this distance of the boundary.
    pub epsilon: f64,
}

impl Default for WalkBudget {
    fn default() -> Self {
        WalkBudget { max_walks: 1 << 20, tolerance: 2e-3, seed: 0x7a3c_91d5_04e2_b86f, epsilon: 1e-6 }
    }
}

impl WalkBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_walks(mut self, max_walks: usize) -> Self {
        self.max_walks = max_walks;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkEstimate {
    pub value: f64,
    pub stderr: f64,
    pub walks: usize,
}

/// Count, mean and centred sum of squares.
#[derive(Clone, Copy, Debug, Default)]
struct Stats {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Stats {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Stats, b: Stats) -> Stats {
        if a.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        Stats { n, mean: a.mean + d * b.n / n, m2: a.m2 + b.m2 + d * d * a.n * b.n / n }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

fn pairwise(parts: &[Stats]) -> Stats {
    match parts.len() {
        0 => Stats::default(),
        1 => parts[0],
        n => Stats::merge(pairwise(&parts[..n / 2]), pairwise(&parts[n / 2..])),
    }
}

/// Level line of a Green level subdomain when the base is a Möbius image of
/// the disk: the hyperbolic bisector of `z1, z2`, a circle or a line.
#[derive(Clone, Copy, Debug)]
enum Bisector {
    Circle { center: Complex64, radius: f64 },
    Line { point: Complex64, dir: Complex64 },
}

impl Bisector {
    fn distance(&self, x: Complex64) -> f64 {
        match *self {
            Bisector::Circle { center, radius } => ((x - center).norm() - radius).abs(),
            Bisector::Line { point, dir } => ((x - point) * dir.conj()).im.abs(),
        }
    }

    fn through(p: [Complex64; 3]) -> Option<Self> {
        let [a, b, c] = p;
        let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
        let scale = (a - b).norm().max((b - c).norm()).max((a - c).norm());
        if !scale.is_finite() || scale == 0.0 {
            return None;
        }
        if d.abs() <= 1e-12 * scale * scale {
            let (u, v) = if (a - b).norm() >= (a - c).norm() { (a, b) } else { (a, c) };
            return Some(Bisector::Line { point: u, dir: (v - u) / (v - u).norm() });
        }
        let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
        let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
        let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
        let center = Complex64::new(ux, uy);
        Some(Bisector::Circle { center, radius: (a - center).norm() })
    }

    fn of(domain: &DomainSpec) -> Option<Self> {
        let DomainSpec::GreenLevelSubdomain { base, z1, z2, .. } = domain else {
            return None;
        };
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let to_disk = match base.as_ref() {
            DomainSpec::UnitDisk => MobiusTransform::identity(),
            DomainSpec::Disk { center, radius } => MobiusTransform::new(one, -center, zero, one * *radius).ok()?,
            DomainSpec::HalfPlane { normal, offset } => {
                let p0 = normal * *offset;
                MobiusTransform::new(one, normal - p0, one, -p0 - normal).ok()?
            }
            _ => return None,
        };
        let (w1, w2) = (to_disk.apply(*z1), to_disk.apply(*z2));
        let shift = MobiusTransform::disk_shift(-w1).ok()?;
        let b = shift.apply(w2);
        let nb = b.norm();
        if nb == 0.0 || nb >= 1.0 {
            return None;
        }
        // bisector of 0 and b: geodesic through s·b/|b|, orthogonal to that radius
        let s = nb / (1.0 + (1.0 - nb * nb).sqrt());
        let u = b / nb;
        let (c, r) = (u * ((1.0 + s * s) / (2.0 * s)), (1.0 - s * s) / (2.0 * s));
        let back = to_disk.inverse().compose(&shift.inverse());
        for offset in [0.0, 0.37, 1.1] {
            let pts = [0.0, TAU / 3.0, 2.0 * TAU / 3.0]
                .map(|t| back.apply(c + Complex64::from_polar(r, PI + offset + t) * u));
            if pts.iter().all(|z| z.norm() < 1e12) {
                return Bisector::through(pts);
            }
        }
        None
    }
}

/// Domain with its level line, if that has a closed form.
struct Region<'a> {
    domain: &'a DomainSpec,
    bisector: Option<Bisector>,
}

impl<'a> Region<'a> {
    fn new(domain: &'a DomainSpec) -> Self {
        Region { domain, bisector: Bisector::of(domain) }
    }

    /// Ball radius at `x`, or `None` once `x` is within `eps` of the
    /// boundary (or outside).
    fn safe_radius(&self, x: Complex64, eps: f64) -> Option<f64> {
        match self.domain {
            DomainSpec::GreenLevelSubdomain { base, z1, z2, sign } => {
                let db = base.boundary_distance(x)?;
                if db < eps {
                    return None;
                }
                let s = match sign {
                    crate::geometry::LevelSign::Positive => 1.0,
                    crate::geometry::LevelSign::Negative => -1.0,
                };
                let level = |y: Complex64| -> Option<f64> { Some(s * (base.green(y, *z1).ok()? - base.green(y, *z2).ok()?)) };
                let l = level(x)?;
                if l.is_nan() || l <= 0.0 {
                    return None;
                }
                let dl = match self.bisector {
                    Some(b) => b.distance(x),
                    None => {
                        // first-order distance to the level line, from a
                        // nearby point at the pole of the level function
                        let y = if l.is_infinite() { x + 1e-3 * db } else { x };
                        let grad = (base.green_gradient(y, *z1).ok()? - base.green_gradient(y, *z2).ok()?).norm();
                        if grad > 0.0 { LEVEL_SAFETY * level(y)? / grad } else { f64::INFINITY }
                    }
                };
                if dl < eps {
                    return None;
                }
                Some(db.min(dl))
            }
            _ => {
                let d = self.domain.boundary_distance(x)?;
                (d >= eps).then_some(d)
            }
        }
    }
}

fn walk(region: &Region, start: Complex64, eps: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    let mut x = start;
    for _ in 0..MAX_STEPS {
        match region.safe_radius(x, eps) {
            None => return x,
            Some(r) => x += Complex64::from_polar(r, rng.random::<f64>() * TAU),
        }
    }
    x
}

/// Mean of `score(X)` over exit points of walks started at `start`, with
/// adaptive stopping once the standard error reaches the tolerance.
fn exit_mean<F>(domain: &DomainSpec, start: Complex64, budget: &WalkBudget, score: F) -> Result<Stats>
where
    F: Fn(Complex64) -> f64 + Sync,
{
    let region = Region::new(domain);
    let mut chunks: Vec<Stats> = Vec::new();
    let max_chunks = budget.max_walks.div_ceil(CHUNK).max(1);
    loop {
        let first = chunks.len();
        let last = (first + BATCH_CHUNKS).min(max_chunks);
        let batch: Vec<Stats> = (first..last)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
                rng.set_stream(c as u64);
                let mut s = Stats::default();
                for _ in 0..CHUNK {
                    s.push(score(walk(&region, start, budget.epsilon, &mut rng)));
                }
                s
            })
            .collect();
        chunks.extend(batch);
        let total = pairwise(&chunks);
        if total.stderr() <= budget.tolerance {
            return Ok(total);
        }
        if chunks.len() >= max_chunks {
            return Err(Error::BudgetExhausted { stderr: total.stderr(), tolerance: budget.tolerance });
        }
    }
}

fn require_interior(domain: &DomainSpec, z: Complex64) -> Result<()> {
    if domain.contains(z) {
        Ok(())
    } else {
        Err(Error::NotInterior(z))
    }
}

/// Green function `g_D(z, z0)` by walk-on-spheres.
pub fn green_numeric(domain: &DomainSpec, z: Complex64, z0: Complex64, budget: &WalkBudget) -> Result<WalkEstimate> {
    require_interior(domain, z)?;
    require_interior(domain, z0)?;
    if z == z0 {
        return Err(Error::CoincidentPoints);
    }
    let (value, stats) = match domain {
        DomainSpec::GreenLevelSubdomain { base, .. } => {
            let s = exit_mean(domain, z, budget, |x| base.green(x, z0).unwrap_or(0.0).max(0.0))?;
            (base.green(z, z0)? - s.mean, s)
        }
        _ => {
            let s = exit_mean(domain, z, budget, |x| (x - z0).norm().ln())?;
            (-(z - z0).norm().ln() + s.mean, s)
        }
    };
    Ok(WalkEstimate { value, stderr: stats.stderr(), walks: stats.n as usize })
}

/// Inner radius `r(D, z)`; the standard error is that of `r` (the tolerance
/// applies to `log r`).
pub fn inner_radius_numeric(domain: &DomainSpec, z: Complex64, budget: &WalkBudget) -> Result<WalkEstimate> {
    require_interior(domain, z)?;
    let (log_r, stats) = match domain {
        DomainSpec::GreenLevelSubdomain { base, .. } => {
            let s = exit_mean(domain, z, budget, |x| base.green(x, z).unwrap_or(0.0).max(0.0))?;
            (base.inner_radius(z)?.ln() - s.mean, s)
        }
        _ => {
            let s = exit_mean(domain, z, budget, |x| (x - z).norm().ln())?;
            (s.mean, s)
        }
    };
    let r = log_r.exp();
    Ok(WalkEstimate { value: r, stderr: r * stats.stderr(), walks: stats.n as usize })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::geometry::{LevelSign, Side};

    fn budget(tol: f64) -> WalkBudget {
        WalkBudget::default().with_tolerance(tol)
    }

    #[test]
    fn disk_green_matches_closed_form() {
        let e = green_numeric(&DomainSpec::UnitDisk, c64(-0.4, 0.0), c64(0.4, 0.0), &budget(3e-3)).unwrap();
        assert!((e.value - 1.45f64.ln()).abs() < 3.0 * e.stderr + 1e-4, "{e:?}");
    }

    #[test]
    fn half_plane_green_matches_reflection() {
        let d = DomainSpec::half_plane(c64(1.0, 0.0), 0.0).unwrap();
        let e = green_numeric(&d, c64(-1.0, 0.0), c64(-2.0, 0.0), &budget(5e-3)).unwrap();
        assert!((e.value - 3f64.ln()).abs() < 3.0 * e.stderr + 1e-4, "{e:?}");
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let b = budget(1e-2).with_seed(42);
        let a = green_numeric(&DomainSpec::UnitDisk, c64(0.1, 0.2), c64(-0.3, 0.0), &b).unwrap();
        let c = green_numeric(&DomainSpec::UnitDisk, c64(0.1, 0.2), c64(-0.3, 0.0), &b).unwrap();
        assert_eq!(a.value.to_bits(), c.value.to_bits());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let d = pool.install(|| green_numeric(&DomainSpec::UnitDisk, c64(0.1, 0.2), c64(-0.3, 0.0), &b).unwrap());
        assert_eq!(a.value.to_bits(), d.value.to_bits());
    }

    #[test]
    fn inner_radius_half_disk() {
        let d = DomainSpec::HalfDisk { side: Side::Left };
        let e = inner_radius_numeric(&d, c64(-0.5, 0.0), &budget(1e-3)).unwrap();
        assert!((e.value / 0.6 - 1.0).abs() < 5e-3, "{e:?}");
    }

    #[test]
    fn inner_radius_level_subdomain() {
        let d = DomainSpec::green_level(DomainSpec::UnitDisk, c64(-0.4, 0.0), c64(0.4, 0.0), LevelSign::Positive)
            .unwrap();
        let e = inner_radius_numeric(&d, c64(-0.4, 0.0), &budget(2e-3)).unwrap();
        let exact = 2.0 * 0.4 * 0.84 / 1.16;
        assert!((e.value / exact - 1.0).abs() < 1e-2, "{e:?}");
    }

    #[test]
    fn bisector_is_the_level_line() {
        let cases = [
            (DomainSpec::UnitDisk, c64(-0.4, 0.0), c64(0.4, 0.0)),
            (DomainSpec::UnitDisk, c64(0.1, 0.5), c64(-0.3, -0.2)),
            (DomainSpec::disk(c64(1.0, 2.0), 3.0).unwrap(), c64(0.0, 1.0), c64(2.5, 2.0)),
            (DomainSpec::half_plane(c64(1.0, 1.0), 0.5).unwrap(), c64(-1.0, 0.0), c64(0.0, -2.0)),
        ];
        for (base, z1, z2) in cases {
            let d = DomainSpec::green_level(base.clone(), z1, z2, LevelSign::Positive).unwrap();
            let b = Bisector::of(&d).unwrap();
            let mut on_line = 0;
            for k in 0..400 {
                let t = k as f64 / 400.0 * TAU;
                let x = match b {
                    Bisector::Circle { center, radius } => center + Complex64::from_polar(radius, t),
                    Bisector::Line { point, dir } => point + dir * (t - PI),
                };
                if base.contains(x) {
                    on_line += 1;
                    let level = base.green(x, z1).unwrap() - base.green(x, z2).unwrap();
                    assert!(level.abs() < 1e-9, "{base:?} {x} {level}");
                }
            }
            assert!(on_line > 0);
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        let b = budget(1e-9).with_max_walks(2048);
        let r = green_numeric(&DomainSpec::UnitDisk, c64(0.0, 0.0), c64(0.5, 0.0), &b);
        assert!(matches!(r, Err(Error::BudgetExhausted { .. })));
    }
}
