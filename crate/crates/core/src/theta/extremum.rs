use rayon::prelude::*;

use super::{GaussWidth, ThetaEvaluator, TruncationPolicy};
use crate::error::{Error, Result};
use crate::gabor::PhasePoint;
use crate::lattice::{lagrange_reduce, Lattice};
use crate::optim::NelderMead;

/// Number of distinct grid-local optima refined independently.
const MULTI_START: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaForm {
    /// `F_Λ(z) = Σ e^{−πα|λ+z|²}`, periodic under Λ.
    Translate,
    /// `F̂_Λ(z) = Re Σ e^{−πα|λ|²} e^{2πiσ(λ,z)}`, periodic under the adjoint.
    DualPhase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremumCertificate {
    pub grid_value: f64,
    pub refined_value: f64,
    /// Distance between the best grid point and the refined location.
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremumResult {
    pub location: PhasePoint,
    pub value: f64,
    pub grid_resolution: usize,
    pub refined: bool,
    pub certificate: ExtremumCertificate,
}

/// Values of the chosen theta form on a `grid_n × grid_n` grid over the
/// reduced fundamental cell of its period lattice, row-major in the two
/// grid indices. Returns `(z, value)` pairs.
pub fn sample_cell(
    l: &Lattice,
    w: GaussWidth,
    form: ThetaForm,
    grid_n: usize,
    p: &TruncationPolicy,
) -> Result<Vec<([f64; 2], f64)>> {
    let (ev, cell) = setup(l, w, form, grid_n, p)?;
    let pts = grid_points(&cell, grid_n);
    let vals = evaluate_all(&ev, form, &pts)?;
    Ok(pts.into_iter().zip(vals).collect())
}

fn setup(
    l: &Lattice,
    w: GaussWidth,
    form: ThetaForm,
    grid_n: usize,
    p: &TruncationPolicy,
) -> Result<(ThetaEvaluator, [[f64; 2]; 2])> {
    if l.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            got: l.dim(),
            what: "extremum search runs on planar lattices only",
        });
    }
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid resolution must be at least 16, got {grid_n}")));
    }
    let period = match form {
        ThetaForm::Translate => l.clone(),
        ThetaForm::DualPhase => l.adjoint_lattice()?,
    };
    let g1 = period.generator(0);
    let g2 = period.generator(1);
    let (u, v) = lagrange_reduce([g1[0], g1[1]], [g2[0], g2[1]]);
    Ok((ThetaEvaluator::new(l, w, p)?, [u, v]))
}

fn grid_points(cell: &[[f64; 2]; 2], n: usize) -> Vec<[f64; 2]> {
    let [u, v] = *cell;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (i as f64 / n as f64, j as f64 / n as f64);
            out.push([a * u[0] + b * v[0], a * u[1] + b * v[1]]);
        }
    }
    out
}

fn evaluate(ev: &ThetaEvaluator, form: ThetaForm, z: &[f64]) -> Result<f64> {
    match form {
        ThetaForm::Translate => Ok(ev.translate(z)),
        ThetaForm::DualPhase => ev.dual_phase(z),
    }
}

fn evaluate_all(ev: &ThetaEvaluator, form: ThetaForm, pts: &[[f64; 2]]) -> Result<Vec<f64>> {
    pts.par_iter().map(|z| evaluate(ev, form, z)).collect()
}

/// Global extremum of a theta form over its period cell: grid search, then
/// Nelder–Mead refinement (200 iterations, simplex diameter 1e-10) from the
/// best few grid-local optima. Grid ties resolve to the lexicographically
/// first index pair.
pub fn find_extremum(
    l: &Lattice,
    w: GaussWidth,
    kind: ExtremumKind,
    form: ThetaForm,
    grid_n: usize,
    p: &TruncationPolicy,
) -> Result<ExtremumResult> {
    let (ev, cell) = setup(l, w, form, grid_n, p)?;
    let pts = grid_points(&cell, grid_n);
    let sign = match kind {
        ExtremumKind::Min => 1.0,
        ExtremumKind::Max => -1.0,
    };
    let vals: Vec<f64> = evaluate_all(&ev, form, &pts)?.into_iter().map(|v| sign * v).collect();

    let n = grid_n;
    let at = |i: usize, j: usize| vals[(i % n) * n + (j % n)];
    let mut candidates: Vec<usize> = (0..n * n)
        .filter(|&k| {
            let (i, j) = (k / n, k % n);
            let v = vals[k];
            (0..3).all(|di| (0..3).all(|dj| (di == 1 && dj == 1) || v <= at(i + n + di - 1, j + n + dj - 1)))
        })
        .collect();
    if candidates.is_empty() {
        candidates = (0..n * n).collect();
    }
    // Stable: equal values keep lexicographic index order.
    candidates.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let grid_best = candidates[0];

    let step = (cell[0][0].hypot(cell[0][1])) / n as f64;
    let nm = NelderMead::default();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for &k in candidates.iter().take(MULTI_START) {
        let start = pts[k];
        let m = nm.minimize(|z| evaluate(&ev, form, z).map(|v| sign * v).unwrap_or(f64::NAN), &start, step);
        let (x, v) = if m.value <= vals[k] { (m.x, m.value) } else { (start.to_vec(), vals[k]) };
        if best.as_ref().map_or(true, |b| v < b.1) {
            best = Some((x, v));
        }
    }
    let (x, v) = best.expect("at least one candidate");
    let g = pts[grid_best];
    Ok(ExtremumResult {
        location: PhasePoint::new(vec![x[0]], vec![x[1]]),
        value: sign * v,
        grid_resolution: grid_n,
        refined: true,
        certificate: ExtremumCertificate {
            grid_value: sign * vals[grid_best],
            refined_value: sign * v,
            displacement: (x[0] - g[0]).hypot(x[1] - g[1]),
        },
    })
}
