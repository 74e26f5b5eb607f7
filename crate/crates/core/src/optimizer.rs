//! Fixed-density search over planar lattice shapes, and comparison tables of
//! named lattices in higher dimensions.
//!
//! Shapes are points `τ = x + iy` of the modular fundamental domain. All
//! objectives are rotation invariant in phase-space dimension 2, so the domain
//! is a complete set of representatives, and reflection `x → −x` lets the scan
//! use `x ∈ [0, 1/2]`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gabor::{
    condition_a_upper, energy_lower_bound_series, janssen_frame_bounds, relaxed_bounds, FrameBounds, Method,
    PhasePoint,
};
use crate::lattice::{lattice_from_tau, named_lattice, NamedLattice, ShapeParam2D};
use crate::optim::NelderMead;
use crate::theta::{theta_series_sum, theta_translate, GaussWidth, TruncationPolicy};

/// Upper edge of the scanned part of the fundamental domain.
pub const SHAPE_Y_MAX: f64 = 2.0;
/// Grid resolution of the inner theta extremum search.
pub const SCAN_EXTREMUM_GRID: usize = 16;
const MIN_SCAN_GRID: usize = 16;
/// Objective values closer than this (relative) count as tied.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// Minimize the upper bound `B`.
    QuantumPacking,
    /// Maximize the lower bound `A`.
    QuantumCovering,
    /// Minimize `B/A`.
    QuantumPaving,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 3] = [Self::QuantumPacking, Self::QuantumCovering, Self::QuantumPaving];

    pub fn tag(&self) -> &'static str {
        match self {
            Self::QuantumPacking => "packing",
            Self::QuantumCovering => "covering",
            Self::QuantumPaving => "paving",
        }
    }

    /// The natural objective value (`B`, `A` or `B/A`).
    pub fn value(&self, f: &FrameBounds) -> f64 {
        match self {
            Self::QuantumPacking => f.b,
            Self::QuantumCovering => f.a,
            Self::QuantumPaving => f.ratio,
        }
    }

    /// A quantity to be minimized.
    fn cost(&self, f: &FrameBounds) -> f64 {
        match self {
            Self::QuantumCovering => -f.a,
            _ => self.value(f),
        }
    }
}

impl std::str::FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "packing" => Ok(Self::QuantumPacking),
            "covering" => Ok(Self::QuantumCovering),
            "paving" => Ok(Self::QuantumPaving),
            _ => Err(Error::Parse(format!("unknown objective {s:?} (packing, covering, paving)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundMethod {
    Janssen,
    Relaxed,
}

impl std::str::FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "janssen" => Ok(Self::Janssen),
            "relaxed" => Ok(Self::Relaxed),
            _ => Err(Error::Parse(format!("unknown bound method {s:?} (janssen, relaxed)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub bound_method: BoundMethod,
}

impl Objective {
    pub fn new(kind: ObjectiveKind, bound_method: BoundMethod) -> Self {
        Self { kind, bound_method }
    }
}

/// Frame bounds of the shape `(x, y)` at `density` by the given method.
pub fn shape_bounds(x: f64, y: f64, density: f64, method: BoundMethod, p: &TruncationPolicy) -> Result<FrameBounds> {
    let l = lattice_from_tau(x, y, density)?;
    match method {
        BoundMethod::Janssen => janssen_frame_bounds(&l, p, SCAN_EXTREMUM_GRID),
        BoundMethod::Relaxed => relaxed_bounds(&l, GaussWidth::default(), SCAN_EXTREMUM_GRID, p),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSample {
    pub shape: ShapeParam2D,
    pub bounds: FrameBounds,
}

/// Bounds on a grid over the scanned domain, shared by all three objectives.
#[derive(Debug, Clone)]
pub struct ShapeScan {
    pub density: f64,
    pub method: BoundMethod,
    pub grid: usize,
    pub samples: Vec<ShapeSample>,
    /// Shapes whose bounds could not be computed, with the reason.
    pub flagged: Vec<(ShapeParam2D, String)>,
}

/// Grid point `(i, j)` of an `n × n` grid: `x = i/(2(n−1))` and `y` linear
/// from the unit circle to [`SHAPE_Y_MAX`]. Includes the square `(0, 1)` and
/// the hexagonal corner `(1/2, √3/2)`.
fn grid_shape(i: usize, j: usize, n: usize) -> (f64, f64) {
    let x = 0.5 * i as f64 / (n - 1) as f64;
    let y0 = (1.0 - x * x).sqrt();
    (x, y0 + (SHAPE_Y_MAX - y0) * j as f64 / (n - 1) as f64)
}

/// Clamps `(x, y)` into the scanned domain.
fn project(z: &mut [f64]) {
    z[0] = z[0].clamp(0.0, 0.5);
    z[1] = z[1].clamp((1.0 - z[0] * z[0]).sqrt(), SHAPE_Y_MAX);
}

impl ShapeScan {
    pub fn new(density: f64, method: BoundMethod, grid: usize, p: &TruncationPolicy) -> Result<Self> {
        if !(density > 1.0) {
            return Err(Error::NotAFrame(format!("shape scans need density > 1, got {density}")));
        }
        if grid < MIN_SCAN_GRID {
            return Err(Error::Domain(format!("scan grid must be at least {MIN_SCAN_GRID}, got {grid}")));
        }
        let results: Vec<(ShapeParam2D, Result<FrameBounds>)> = (0..grid * grid)
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid_shape(k / grid, k % grid, grid);
                let shape = ShapeParam2D { x, y, density };
                (shape, shape_bounds(x, y, density, method, p))
            })
            .collect();
        let mut samples = Vec::with_capacity(results.len());
        let mut flagged = Vec::new();
        for (shape, r) in results {
            match r {
                Ok(bounds) => samples.push(ShapeSample { shape, bounds }),
                Err(e @ (Error::NotAFrame(_) | Error::Numeric(_) | Error::InternalConsistency(_))) => {
                    flagged.push((shape, e.to_string()))
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Self {
            density,
            method,
            grid,
            samples,
            flagged,
        })
    }

    /// Best sample for `kind`, ties broken toward smaller `y`, then smaller `x`.
    pub fn best(&self, kind: ObjectiveKind) -> Option<&ShapeSample> {
        let mut best: Option<&ShapeSample> = None;
        for s in &self.samples {
            let c = kind.cost(&s.bounds);
            best = match best {
                None => Some(s),
                Some(b) => {
                    let cb = kind.cost(&b.bounds);
                    let tie = (c - cb).abs() <= TIE_TOL * cb.abs().max(1.0);
                    let earlier = (s.shape.y, s.shape.x) < (b.shape.y, b.shape.x);
                    if (!tie && c < cb) || (tie && earlier) {
                        Some(s)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    /// Landscape for one objective, optionally refined by Nelder–Mead from
    /// the best grid sample.
    pub fn landscape(&self, kind: ObjectiveKind, refine: bool, p: &TruncationPolicy) -> Result<Landscape> {
        let best = self
            .best(kind)
            .ok_or_else(|| Error::NotAFrame("no shape sample produced frame bounds".into()))?;
        let grid_value = kind.value(&best.bounds);
        let (mut argopt, mut opt_value, mut argopt_bounds) = (best.shape, grid_value, best.bounds);
        if refine {
            let (density, method) = (self.density, self.method);
            let cost = |z: &[f64]| match shape_bounds(z[0], z[1], density, method, p) {
                Ok(f) => kind.cost(&f),
                Err(_) => f64::INFINITY,
            };
            let step = 0.5 / (self.grid - 1) as f64;
            let m = NelderMead::default().minimize_projected(cost, &[best.shape.x, best.shape.y], step, project);
            if m.value.is_finite() && m.value < kind.cost(&best.bounds) {
                argopt = ShapeParam2D {
                    x: m.x[0],
                    y: m.x[1],
                    density,
                };
                argopt_bounds = shape_bounds(m.x[0], m.x[1], density, method, p)?;
                opt_value = kind.value(&argopt_bounds);
            }
        }
        Ok(Landscape {
            kind,
            samples: self.samples.clone(),
            flagged: self.flagged.clone(),
            argopt,
            argopt_bounds,
            opt_value,
            grid_value,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Landscape {
    pub kind: ObjectiveKind,
    pub samples: Vec<ShapeSample>,
    pub flagged: Vec<(ShapeParam2D, String)>,
    pub argopt: ShapeParam2D,
    pub argopt_bounds: FrameBounds,
    /// Objective value at `argopt` (`B`, `A` or `B/A`).
    pub opt_value: f64,
    /// Best value on the grid, before refinement.
    pub grid_value: f64,
}

/// Scans the fundamental domain at fixed density for one objective.
pub fn scan_shapes(
    density: f64,
    obj: Objective,
    grid: usize,
    refine: bool,
    p: &TruncationPolicy,
) -> Result<Landscape> {
    ShapeScan::new(density, obj.bound_method, grid, p)?.landscape(obj.kind, refine, p)
}

/// One row of a named-lattice comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub name: String,
    pub density: f64,
    /// `Σ_λ e^{−πα|λ|²}`.
    pub energy_lower: f64,
    /// `δ Σ_{λ°} e^{−πα|λ°|²/2}`.
    pub btilde: f64,
    pub method: Method,
    /// Absolute error bound of both sums.
    pub error_bound: f64,
}

/// `energy_lower` and `B̃` for each named lattice at `density`, sorted by `B̃`
/// (ties by name). At `α = 1` these bracket the upper frame bound.
///
/// Table-backed entries (`Z^n` for `n > 8`, Leech) are unimodular, so the
/// adjoint of the density-`δ` copy has the theta series of the density-`1/δ`
/// copy.
pub fn compare_named(
    dim: usize,
    names: &[&str],
    w: GaussWidth,
    density: f64,
    p: &TruncationPolicy,
) -> Result<Vec<ComparisonRow>> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Domain(format!("density must be positive, got {density}")));
    }
    let mut rows = names
        .par_iter()
        .map(|name| compare_one(dim, name, w, density, p))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.btilde.total_cmp(&b.btilde).then_with(|| a.name.cmp(&b.name)));
    Ok(rows)
}

fn compare_one(dim: usize, name: &str, w: GaussWidth, density: f64, p: &TruncationPolicy) -> Result<ComparisonRow> {
    let entry = named_lattice(name, density)?;
    if entry.dim() != dim {
        return Err(Error::Dimension(format!(
            "{} has dimension {}, comparison is in dimension {dim}",
            entry.name(),
            entry.dim()
        )));
    }
    let half = GaussWidth::new(w.alpha() / 2.0)?;
    match entry {
        NamedLattice::Lattice(l) => {
            let origin = PhasePoint::origin(l.signal_dim());
            let energy_lower = theta_translate(&l, &origin, w, p)?;
            let btilde = if w.alpha() == 1.0 {
                condition_a_upper(&l, p)?
            } else {
                let scaled = TruncationPolicy { tol: p.tol / density, ..*p };
                density * theta_translate(&l.adjoint_lattice()?, &origin, half, &scaled)?
            };
            Ok(ComparisonRow {
                name: l.name().unwrap_or(name).to_string(),
                density,
                energy_lower,
                btilde,
                method: Method::ConditionAUpper,
                error_bound: p.tol,
            })
        }
        NamedLattice::Table(t) => {
            let lower = if w.alpha() == 1.0 {
                energy_lower_bound_series(&t)
            } else {
                theta_series_sum(&t, w, 1.0)
            };
            let adjoint = t.scaled_to_density(1.0 / density)?;
            let upper = theta_series_sum(&adjoint, half, 1.0);
            let energy_lower = lower.within(p.tol)?;
            let btilde = density * upper.within(p.tol / density)?;
            Ok(ComparisonRow {
                name: t.lattice_name().to_string(),
                density,
                energy_lower,
                btilde,
                method: Method::ConditionAUpper,
                error_bound: p.tol.max(lower.tail_bound + density * upper.tail_bound),
            })
        }
    }
}

/// Bounds of one shape over several densities.
#[derive(Debug, Clone)]
pub struct DensitySweep {
    pub shape: (f64, f64),
    pub entries: Vec<(f64, Result<FrameBounds>)>,
}

impl DensitySweep {
    /// Whether `B` increases with density over the successful entries,
    /// taken in the given order.
    pub fn b_monotone(&self) -> bool {
        let bs: Vec<f64> = self
            .entries
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok().map(|f| f.b))
            .collect();
        bs.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Frame bounds of the shape `(x, y)` at each density; densities `≤ 1` are
/// rejected individually.
pub fn density_sweep(
    shape: (f64, f64),
    densities: &[f64],
    method: BoundMethod,
    p: &TruncationPolicy,
) -> Result<DensitySweep> {
    let (x, y) = shape;
    lattice_from_tau(x, y, 1.0)?;
    let entries = densities
        .par_iter()
        .map(|&d| {
            let r = if d > 1.0 {
                shape_bounds(x, y, d, method, p)
            } else {
                Err(Error::NotAFrame(format!("density {d} ≤ 1: the Gaussian system is not a frame")))
            };
            (d, r)
        })
        .collect();
    Ok(DensitySweep { shape, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_covers_square_and_hexagon() {
        let n = 17;
        assert_eq!(grid_shape(0, 0, n), (0.0, 1.0));
        let (x, y) = grid_shape(n - 1, 0, n);
        assert_eq!(x, 0.5);
        assert!((y - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(grid_shape(0, n - 1, n).1, SHAPE_Y_MAX);
    }

    #[test]
    fn small_paving_scan_finds_hexagon() {
        let p = TruncationPolicy::default();
        let l = scan_shapes(
            2.0,
            Objective::new(ObjectiveKind::QuantumPaving, BoundMethod::Janssen),
            16,
            true,
            &p,
        )
        .unwrap();
        assert!(l.flagged.is_empty());
        assert!(l.opt_value <= l.grid_value);
        assert!((l.argopt.x - 0.5).abs() < 1e-3 && (l.argopt.y - 3f64.sqrt() / 2.0).abs() < 1e-3, "{:?}", l.argopt);
        assert!((l.opt_value - 2f64.powf(1.0 / 3.0)).abs() < 1e-8, "{}", l.opt_value);
    }

    #[test]
    fn rejects_bad_scans() {
        let p = TruncationPolicy::default();
        let o = Objective::new(ObjectiveKind::QuantumPacking, BoundMethod::Janssen);
        assert!(matches!(scan_shapes(1.0, o, 16, false, &p), Err(Error::NotAFrame(_))));
        assert!(scan_shapes(2.0, o, 8, false, &p).is_err());
    }

    #[test]
    fn e8_beats_cubic_lattice() {
        let p = TruncationPolicy::default();
        let rows = compare_named(8, &["Z^8", "E8", "D8", "A8*"], GaussWidth::default(), 1.0, &p).unwrap();
        assert_eq!(rows[0].name, "E8");
        for r in &rows {
            assert!(r.energy_lower <= r.btilde, "{r:?}");
        }
        let e8 = &rows[0];
        assert!((e8.energy_lower - 1.455_762_892_268_709_3).abs() < 1e-11, "{e8:?}");
    }

    #[test]
    fn compare_rejects_dimension_mismatch() {
        let p = TruncationPolicy::default();
        assert!(matches!(
            compare_named(8, &["Leech"], GaussWidth::default(), 1.0, &p),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn sweep_rejects_low_densities_individually() {
        let p = TruncationPolicy::default();
        let s = density_sweep((0.0, 1.0), &[0.5, 2.0, 4.0], BoundMethod::Janssen, &p).unwrap();
        assert!(s.entries[0].1.is_err());
        assert!(s.entries[1].1.is_ok() && s.entries[2].1.is_ok());
        assert!(s.b_monotone());
    }
}
