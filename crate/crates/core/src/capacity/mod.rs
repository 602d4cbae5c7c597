//! Potential theory on plane domains.
//!
//! The capacity of a condenser is the Dirichlet energy `∬|∇u|²` of its
//! potential (`u = δ_k` on plate `k`, `u = 0` on the domain boundary); a
//! single plate of radius `r` centred in a disk of radius `R` has capacity
//! `2π/log(R/r)`.

mod fd;
mod patch;
pub mod walk;

pub use walk::{green_numeric, inner_radius_numeric, WalkBudget, WalkEstimate};

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, LevelSign};
use crate::inequalities::reduced_energy;
use crate::rational::{DiskPoint, RationalMap};
use fd::{Hierarchy, Obstacle, Problem, Shape, Value};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;

/// Relative residual at which the linear solves stop.
const SOLVE_TOL: f64 = 1e-10;
/// Smallest admitted plate radius in grid cells.
const MIN_CELLS: f64 = 3.0;
/// Box side over configuration diameter, for unbounded domains.
const BOX_FACTOR: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plate {
    pub center: Complex64,
    pub radius: f64,
    pub potential: f64,
}

impl Plate {
    pub fn new(center: Complex64, radius: f64, potential: f64) -> Self {
        Plate { center, radius, potential }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCondenser")]
pub struct Condenser {
    domain: DomainSpec,
    plates: Vec<Plate>,
}

#[derive(Deserialize)]
struct RawCondenser {
    domain: DomainSpec,
    plates: Vec<Plate>,
}

impl TryFrom<RawCondenser> for Condenser {
    type Error = Error;

    fn try_from(raw: RawCondenser) -> Result<Self> {
        Condenser::new(raw.domain, raw.plates)
    }
}

impl Condenser {
    /// Plates must be pairwise disjoint closed disks strictly inside
    /// `domain`.
    pub fn new(domain: DomainSpec, plates: Vec<Plate>) -> Result<Self> {
        if !domain.is_closed_form() {
            return Err(Error::UnsupportedDomain("condensers need a closed-form domain".into()));
        }
        for (k, p) in plates.iter().enumerate() {
            if !(p.radius > 0.0 && p.radius.is_finite() && p.potential.is_finite()) {
                return Err(Error::ParameterOutOfRange(format!("plate {k}: radius must be positive")));
            }
            match domain.boundary_distance(p.center) {
                Some(d) if d > p.radius => {}
                _ => return Err(Error::PlateOutsideDomain(k)),
            }
        }
        for i in 0..plates.len() {
            for j in i + 1..plates.len() {
                if (plates[i].center - plates[j].center).norm() <= plates[i].radius + plates[j].radius {
                    return Err(Error::PlateOverlap(i, j));
                }
            }
        }
        Ok(Condenser { domain, plates })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn plates(&self) -> &[Plate] {
        &self.plates
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("condenser serializes")
    }

    /// Square box `(corner, side)` carrying the grid.
    fn bounding_box(&self) -> (Complex64, f64) {
        let c = Complex64::new;
        match &self.domain {
            DomainSpec::Disk { center, radius } => (center - c(*radius, *radius), 2.0 * radius),
            DomainSpec::HalfDisk { side } => {
                let x = match side {
                    crate::geometry::Side::Left => -1.5,
                    crate::geometry::Side::Right => -0.5,
                };
                (c(x, -1.0), 2.0)
            }
            DomainSpec::HalfPlane { normal, .. } => {
                // plates together with their feet on the boundary line
                let mut pts = Vec::new();
                let mut rmax: f64 = 0.0;
                for p in &self.plates {
                    let d = self.domain.boundary_distance(p.center).unwrap_or(0.0);
                    pts.push(p.center);
                    pts.push(p.center + normal * d);
                    rmax = rmax.max(p.radius);
                }
                let mut diam: f64 = 0.0;
                for a in &pts {
                    for b in &pts {
                        diam = diam.max((a - b).norm());
                    }
                }
                let diam = (diam + 2.0 * rmax).max(f64::MIN_POSITIVE);
                let centroid = pts.iter().sum::<Complex64>() / pts.len().max(1) as f64;
                let side = BOX_FACTOR * diam;
                (centroid - c(side / 2.0, side / 2.0), side)
            }
            _ => (c(-1.0, -1.0), 2.0),
        }
    }
}

/// Annular patches around plates below grid resolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchSpec {
    /// Radius of the grid hole around each plate; the patch data live on
    /// the circle of twice this radius. Chosen from the geometry when unset.
    pub hole_radius: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Cells per side of the square box.
    pub cells: usize,
    /// Also solve with `cells / 2` and extrapolate.
    pub richardson: bool,
    pub patches: Option<PatchSpec>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { cells: 2048, richardson: false, patches: None }
    }
}

impl GridSpec {
    pub fn new(cells: usize) -> Self {
        GridSpec { cells, ..Default::default() }
    }

    pub fn with_richardson(mut self) -> Self {
        self.richardson = true;
        self
    }

    pub fn with_patches(mut self, hole_radius: Option<f64>) -> Self {
        self.patches = Some(PatchSpec { hole_radius });
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FiniteDifference,
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Discretization {
    Grid {
        cells: usize,
        box_corner: Complex64,
        box_side: f64,
        fine: f64,
        /// Value on the grid with `cells / 2`, when extrapolated.
        coarse: Option<f64>,
        hole_radius: Option<f64>,
        iterations: usize,
    },
    Formula {
        tag: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub method: Method,
    pub discretization: Discretization,
    pub error_bar: Option<f64>,
}

impl CapacityEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimate serializes")
    }
}

/// A grid problem with the data needed for patching.
struct Setup {
    problem: Problem,
    patches: Option<Vec<patch::Patch>>,
    hole_radius: Option<f64>,
    /// `(index, radius)` of each resolved feature, for the grid check.
    features: Vec<(usize, f64)>,
}

fn setup(domain: &DomainSpec, plates: &[(Shape, f64)], corner: Complex64, side: f64, grid: &GridSpec) -> Result<Setup> {
    let features: Vec<(usize, f64)>;
    let (obstacles, patches, hole_radius) = match grid.patches {
        None => {
            features = plates.iter().enumerate().map(|(k, (s, _))| (k, s.scale())).collect();
            let obstacles = plates.iter().map(|&(shape, v)| Obstacle { shape, value: Value::Const(v) }).collect();
            (obstacles, None, None)
        }
        Some(spec) => {
            let disks: Vec<(Complex64, f64, f64)> = plates
                .iter()
                .map(|(s, v)| match *s {
                    Shape::Disk { c, r } => Ok((c, r, *v)),
                    Shape::Sector { .. } => Err(Error::UnsupportedDomain("patches need circular plates".into())),
                })
                .collect::<Result<_>>()?;
            let rh = match spec.hole_radius {
                Some(rh) => rh,
                None => auto_hole_radius(domain, &disks),
            };
            let h = side / grid.cells as f64;
            for (k, &(c, r, _)) in disks.iter().enumerate() {
                let fits = domain.boundary_distance(c).is_some_and(|d| d > 2.0 * rh + 2.0 * h);
                let apart = disks.iter().enumerate().all(|(j, &(cj, _, _))| j == k || (c - cj).norm() > 3.0 * rh + 2.0 * h);
                if !(rh > r && fits && apart) {
                    return Err(Error::ParameterOutOfRange(format!("hole radius {rh:e} does not fit plate {k}")));
                }
            }
            features = (0..disks.len()).map(|k| (k, rh)).collect();
            let obstacles = disks
                .iter()
                .enumerate()
                .map(|(k, &(c, _, _))| Obstacle { shape: Shape::Disk { c, r: rh }, value: Value::Hole(k) })
                .collect();
            let patches = disks
                .iter()
                .map(|&(c, r, v)| patch::Patch { center: c, r, outer: 2.0 * rh, potential: v })
                .collect();
            (obstacles, Some(patches), Some(rh))
        }
    };
    Ok(Setup { problem: Problem { domain: domain.clone(), obstacles, corner, side }, patches, hole_radius, features })
}

fn auto_hole_radius(domain: &DomainSpec, disks: &[(Complex64, f64, f64)]) -> f64 {
    let mut rh = f64::INFINITY;
    for (k, &(c, _, _)) in disks.iter().enumerate() {
        rh = rh.min(domain.boundary_distance(c).unwrap_or(0.0) / 2.5);
        for &(cj, _, _) in &disks[k + 1..] {
            rh = rh.min((c - cj).norm() / 3.5);
        }
    }
    rh
}

fn check_grid(s: &Setup, cells: usize) -> Result<()> {
    let h = s.problem.side / cells as f64;
    for &(index, radius) in &s.features {
        if radius < MIN_CELLS * h {
            return Err(Error::GridTooCoarse { index, radius, h });
        }
    }
    Ok(())
}

fn solve_once(s: &Setup, cells: usize) -> Result<(f64, usize)> {
    let mut h = Hierarchy::new(&s.problem, cells);
    match &s.patches {
        Some(p) => patch::capacity(&mut h, p, SOLVE_TOL),
        None => {
            let b = h.rhs(|_, _| 0.0);
            let mut u = vec![0.0; b.len()];
            let its = h.solve(&b, &mut u, SOLVE_TOL)?;
            Ok((h.energy(&u, |_, _| 0.0), its))
        }
    }
}

fn solve_setup(s: &Setup, grid: &GridSpec) -> Result<CapacityEstimate> {
    if grid.cells < 8 || (grid.richardson && !grid.cells.is_multiple_of(2)) {
        return Err(Error::ParameterOutOfRange(format!("grid cells {}", grid.cells)));
    }
    check_grid(s, grid.cells)?;
    if grid.richardson {
        check_grid(s, grid.cells / 2)?;
    }
    let (fine, iterations) = solve_once(s, grid.cells)?;
    let (value, coarse, error_bar) = if grid.richardson {
        let (coarse, _) = solve_once(s, grid.cells / 2)?;
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        (extrapolated, Some(coarse), Some((extrapolated - fine).abs()))
    } else {
        (fine, None, None)
    };
    Ok(CapacityEstimate {
        value: value.max(0.0),
        method: Method::FiniteDifference,
        discretization: Discretization::Grid {
            cells: grid.cells,
            box_corner: s.problem.corner,
            box_side: s.problem.side,
            fine,
            coarse,
            hole_radius: s.hole_radius,
            iterations,
        },
        error_bar,
    })
}

fn require_fd_domain(domain: &DomainSpec) -> Result<()> {
    match domain {
        DomainSpec::UnitDisk | DomainSpec::Disk { .. } | DomainSpec::HalfPlane { .. } | DomainSpec::HalfDisk { .. } => Ok(()),
        _ => Err(Error::UnsupportedDomain("finite differences need a closed-form domain".into())),
    }
}

fn disk_plates(c: &Condenser) -> Vec<(Shape, f64)> {
    c.plates.iter().map(|p| (Shape::Disk { c: p.center, r: p.radius }, p.potential)).collect()
}

/// Capacity by cut-cell finite differences on a uniform square grid.
pub fn solve_condenser(c: &Condenser, grid: &GridSpec) -> Result<CapacityEstimate> {
    require_fd_domain(&c.domain)?;
    if c.plates.is_empty() || c.plates.iter().all(|p| p.potential == 0.0) {
        return Ok(CapacityEstimate {
            value: 0.0,
            method: Method::ClosedForm,
            discretization: Discretization::Formula { tag: "zero_potential".into() },
            error_bar: None,
        });
    }
    let (corner, side) = c.bounding_box();
    let s = setup(&c.domain, &disk_plates(c), corner, side, grid)?;
    solve_setup(&s, grid)
}

/// Sampled potential of a condenser on the box grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    /// Row-major, `values[j * nx + i]` at `(x0 + i h, y0 + j h)`.
    pub values: Vec<f64>,
}

impl GridField {
    /// Little-endian `u64 nx, u64 ny, f64 x0, y0, h`, then the values.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(40 + 8 * self.values.len());
        out.extend((self.nx as u64).to_le_bytes());
        out.extend((self.ny as u64).to_le_bytes());
        for x in [self.x0, self.y0, self.h] {
            out.extend(x.to_le_bytes());
        }
        for v in &self.values {
            out.extend(v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = || Error::ParameterOutOfRange("malformed grid dump".into());
        let word = |k: usize| -> Result<[u8; 8]> { bytes.get(8 * k..8 * k + 8).ok_or_else(bad)?.try_into().map_err(|_| bad()) };
        let nx = u64::from_le_bytes(word(0)?) as usize;
        let ny = u64::from_le_bytes(word(1)?) as usize;
        let (x0, y0, h) = (f64::from_le_bytes(word(2)?), f64::from_le_bytes(word(3)?), f64::from_le_bytes(word(4)?));
        if bytes.len() != 40 + 8 * nx.checked_mul(ny).ok_or_else(bad)? {
            return Err(bad());
        }
        let values = (0..nx * ny).map(|k| word(5 + k).map(f64::from_le_bytes)).collect::<Result<_>>()?;
        Ok(GridField { nx, ny, x0, y0, h, values })
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn to_scalar_field(&self) -> crate::svg::ScalarField {
        crate::svg::ScalarField {
            x0: self.x0,
            y0: self.y0,
            dx: self.h,
            dy: self.h,
            nx: self.nx,
            ny: self.ny,
            values: self.values.clone(),
        }
    }
}

/// Equilibrium potential on the `cells × cells` grid (nodes outside the
/// domain hold 0, plate nodes their potential).
pub fn potential_field(c: &Condenser, cells: usize) -> Result<GridField> {
    require_fd_domain(&c.domain)?;
    let (corner, side) = c.bounding_box();
    let grid = GridSpec::new(cells);
    let s = setup(&c.domain, &disk_plates(c), corner, side, &grid)?;
    check_grid(&s, cells)?;
    let mut h = Hierarchy::new(&s.problem, cells);
    let b = h.rhs(|_, _| 0.0);
    let mut u = vec![0.0; b.len()];
    h.solve(&b, &mut u, SOLVE_TOL)?;
    let values = h.field(&u);
    Ok(GridField { nx: cells + 1, ny: cells + 1, x0: corner.re, y0: corner.im, h: side / cells as f64, values })
}

/// `−2πn/log r − 2π·E·(1/log r)²` with `E = reduced_energy(points,
/// potentials, map)`.
pub fn asymptotic_cap(points: &[DiskPoint], potentials: &[f64], map: &RationalMap, r: f64) -> Result<f64> {
    let mut limit: f64 = 1.0;
    for (k, a) in points.iter().enumerate() {
        for b in &points[k + 1..] {
            limit = limit.min((a.z() - b.z()).norm() / 4.0);
        }
    }
    if !(r > 0.0 && r < limit) {
        return Err(Error::RadiusTooLarge(r));
    }
    let e = reduced_energy(points, potentials, map)?;
    let l = r.ln();
    Ok(-TAU * points.len() as f64 / l - TAU * e / (l * l))
}

fn inner_radius_any(d: &DomainSpec, z: Complex64, budget: &WalkBudget) -> Result<f64> {
    if d.is_closed_form() {
        d.inner_radius(z)
    } else {
        Ok(inner_radius_numeric(d, z, budget)?.value)
    }
}

fn green_any(d: &DomainSpec, z: Complex64, z0: Complex64, budget: &WalkBudget) -> Result<f64> {
    if d.is_closed_form() {
        d.green(z, z0)
    } else {
        Ok(green_numeric(d, z, z0, budget)?.value)
    }
}

/// Two-term expansion for a pair of almost-disc plates of radii
/// `2r(1−ρ)` at `z1` (potential 1) and `2r(1+ρ)` at `z2` (potential −1).
pub fn asymptotic_cap_pair(
    rho: f64,
    r: f64,
    h1: &DomainSpec,
    z1: Complex64,
    z2: Complex64,
    budget: &WalkBudget,
) -> Result<f64> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::ParameterOutOfRange(format!("rho = {rho}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusTooLarge(r));
    }
    if z1 == z2 {
        return Err(Error::CoincidentPoints);
    }
    let r1 = inner_radius_any(h1, z1, budget)?;
    let r2 = inner_radius_any(h1, z2, budget)?;
    let g = green_any(h1, z1, z2, budget)?;
    let l = r.ln();
    let bracket = (r1 / (2.0 * (1.0 - rho))).ln() + (r2 / (2.0 * (1.0 + rho))).ln() - 2.0 * g;
    Ok(-4.0 * PI / l - TAU * bracket / (l * l))
}

/// Both sides of `log[r(H,Z1) r(H,Z2)] − 2g_H(Z1,Z2) = log[r(B1,Z1) r(B2,Z2)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentitySides {
    pub lhs: f64,
    pub rhs: f64,
    /// Standard error of `rhs` (0 when evaluated in closed form).
    pub stderr: f64,
}

impl IdentitySides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Level subdomains `B1 ∋ Z1`, `B2 ∋ Z2` of `base`.
fn level_pair(base: &DomainSpec, z1: Complex64, z2: Complex64) -> Result<(DomainSpec, DomainSpec)> {
    Ok((
        DomainSpec::green_level(base.clone(), z1, z2, LevelSign::Positive)?,
        DomainSpec::green_level(base.clone(), z1, z2, LevelSign::Negative)?,
    ))
}

/// Identity sides with the right-hand side by walk-on-spheres.
pub fn green_identity_sides(base: &DomainSpec, z1: Complex64, z2: Complex64, budget: &WalkBudget) -> Result<IdentitySides> {
    let (b1, b2) = level_pair(base, z1, z2)?;
    let lhs = (base.inner_radius(z1)? * base.inner_radius(z2)?).ln() - 2.0 * base.green(z1, z2)?;
    let e1 = inner_radius_numeric(&b1, z1, budget)?;
    let e2 = inner_radius_numeric(&b2, z2, budget)?;
    let rhs = (e1.value * e2.value).ln();
    let stderr = (e1.stderr / e1.value).hypot(e2.stderr / e2.value);
    Ok(IdentitySides { lhs, rhs, stderr })
}

/// `|LHS − RHS|` of the level-subdomain identity, right-hand side numeric.
pub fn green_identity_residual(base: &DomainSpec, z1: Complex64, z2: Complex64, budget: &WalkBudget) -> Result<f64> {
    Ok(green_identity_sides(base, z1, z2, budget)?.residual())
}

/// Closed-form sides for pairs symmetric under a reflection of `base` that
/// swaps them; each level subdomain is then the half of `base` on one side
/// of the mirror, which is a half-disk or half-plane again.
pub fn green_identity_closed_form(base: &DomainSpec, z1: Complex64, z2: Complex64) -> Result<IdentitySides> {
    let lhs = (base.inner_radius(z1)? * base.inner_radius(z2)?).ln() - 2.0 * base.green(z1, z2)?;
    let halves = |z: Complex64| -> Result<f64> {
        match base {
            DomainSpec::UnitDisk if (z1.norm() - z2.norm()).abs() < 1e-15 => {
                // rotate so that the mirror is the imaginary axis
                let rot = Complex64::from_polar(1.0, -((z2 - z1).arg()));
                let side = if (z * rot).re < 0.0 { crate::geometry::Side::Left } else { crate::geometry::Side::Right };
                let mid = (z1 + z2) * rot;
                if mid.re.abs() > 1e-12 {
                    return Err(Error::UnsupportedDomain("pair is not mirror symmetric".into()));
                }
                DomainSpec::HalfDisk { side }.inner_radius(z * rot)
            }
            DomainSpec::HalfPlane { normal, .. } => {
                let d1 = base.boundary_distance(z1).unwrap_or(0.0);
                let d2 = base.boundary_distance(z2).unwrap_or(0.0);
                let along = (z2 - z1) / normal;
                if (d1 - d2).abs() > 1e-12 * (1.0 + d1) || along.re.abs() > 1e-12 * (1.0 + along.norm()) {
                    return Err(Error::UnsupportedDomain("pair is not mirror symmetric".into()));
                }
                // quarter-plane with corner on the boundary below the midpoint
                let foot = (z1 + z2) / 2.0 + normal * d1;
                let q = (z - foot) / (-normal);
                let (x, y) = (q.re.abs(), q.im.abs());
                Ok(2.0 * x * y / x.hypot(y))
            }
            _ => Err(Error::UnsupportedDomain("closed form needs a disk or half-plane".into())),
        }
    };
    let rhs = (halves(z1)? * halves(z2)?).ln();
    Ok(IdentitySides { lhs, rhs, stderr: 0.0 })
}

/// `p_k(w) = (−1)^k i w²`, unfolding the sector `D_k` onto the right
/// half-plane.
pub fn separating_transform(k: u8, w: Complex64) -> Complex64 {
    let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Complex64::new(0.0, s) * w * w
}

/// Closed sector `π(k−1)/2 ≤ arg w ≤ πk/2`, `k ∈ 1..=4`.
pub fn in_sector(k: u8, w: Complex64) -> bool {
    if w == Complex64::new(0.0, 0.0) {
        return true;
    }
    let (x, y) = (w.re, w.im);
    match k {
        1 => x >= 0.0 && y >= 0.0,
        2 => x <= 0.0 && y >= 0.0,
        3 => x <= 0.0 && y <= 0.0,
        4 => x >= 0.0 && y <= 0.0,
        _ => false,
    }
}

/// Preimage of `ζ` (with `Re ζ ≥ 0`) under `p_k` in the closed sector.
fn sector_preimage(k: u8, zeta: Complex64) -> Option<Complex64> {
    let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let w = (zeta / Complex64::new(0.0, s)).sqrt();
    let mid = Complex64::from_polar(1.0, PI * (2.0 * k as f64 - 1.0) / 4.0);
    let w = if (w * mid.conj()).re >= 0.0 { w } else { -w };
    Some(w)
}

fn check_sector(k: u8) -> Result<()> {
    if (1..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(format!("sector index {k}")))
    }
}

/// Distance from `c` to the closed sector `D_k`.
fn sector_distance(k: u8, c: Complex64) -> f64 {
    if in_sector(k, c) {
        return 0.0;
    }
    let ray = |e: Complex64| {
        let t = (c * e.conj()).re;
        if t >= 0.0 {
            (c * e.conj()).im.abs()
        } else {
            c.norm()
        }
    };
    let a = Complex64::from_polar(1.0, PI * (k as f64 - 1.0) / 2.0);
    let b = Complex64::from_polar(1.0, PI * k as f64 / 2.0);
    ray(a).min(ray(b))
}

/// Sides of the separation inequality for a condenser in the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Capacity of the condenser.
    pub lhs: f64,
    /// Half the sum of the sector condenser capacities.
    pub rhs: f64,
    pub sectors: [f64; 4],
}

impl SeparationReport {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Capacity of the condenser against half the summed capacities of its four
/// unfolded sector condensers. Supported for disks centred at the origin,
/// whose unfolded sector domains are again centred disks.
pub fn separation_inequality_check(c: &Condenser, grid: &GridSpec) -> Result<SeparationReport> {
    let radius = match c.domain {
        DomainSpec::UnitDisk => 1.0,
        DomainSpec::Disk { center, radius } if center == Complex64::new(0.0, 0.0) => radius,
        _ => return Err(Error::UnsupportedDomain("sector unfolding needs a disk centred at the origin".into())),
    };
    for (k, p) in c.plates.iter().enumerate() {
        if p.center.re.abs() <= p.radius {
            return Err(Error::PlateOnAxis(k));
        }
    }
    let sector_grid = GridSpec { patches: None, ..*grid };
    let lhs = solve_condenser(c, &GridSpec { patches: None, ..*grid })?.value;
    let unfolded = DomainSpec::disk(Complex64::new(0.0, 0.0), radius * radius)?;
    let corner = Complex64::new(-radius * radius, -radius * radius);
    let mut sectors = [0.0; 4];
    for k in 1..=4u8 {
        check_sector(k)?;
        let plates: Vec<(Shape, f64)> = c
            .plates
            .iter()
            .filter(|p| sector_distance(k, p.center) <= p.radius && p.potential != 0.0)
            .map(|p| (Shape::Sector { k, c: p.center, r: p.radius }, p.potential))
            .collect();
        if plates.is_empty() {
            continue;
        }
        let s = setup(&unfolded, &plates, corner, 2.0 * radius * radius, &sector_grid)?;
        sectors[k as usize - 1] = solve_setup(&s, &sector_grid)?.value;
    }
    Ok(SeparationReport { lhs, rhs: 0.5 * sectors.iter().sum::<f64>(), sectors })
}
