//! Canonical dual window `γ = S⁻¹φ` by conjugate gradients on the frame
//! operator in its Janssen form `S = δ Σ_{μ∈Λ°} V_φφ(μ) π(μ)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::sampled::inner_slices;
use super::{ambiguity_gauss, janssen_frame_bounds, FrameBounds, Grid1D, PhasePoint, SampledFunction, TfShifter};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::theta::{truncation_radius_for, TruncationPolicy};

/// Extra iterations allowed beyond the condition-number estimate.
const CG_MARGIN: usize = 5;
/// Grid resolution for the Janssen lower bound that sizes the CG budget.
const BOUNDS_GRID: usize = 32;
/// Edge samples of `γ` may reach this multiple of the CG tolerance.
const EDGE_FACTOR: f64 = 10.0;

/// Frame operator of the Gaussian system over a planar lattice, applied via
/// the truncated Janssen representation. The discarded terms have total
/// operator norm at most `truncation_error`.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    shifter: TfShifter,
    terms: Vec<(f64, f64, Complex64)>,
    truncation_error: f64,
}

impl FrameOperator {
    pub fn new(l: &Lattice, grid: Grid1D, op_tol: f64) -> Result<Self> {
        if l.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                got: l.dim(),
                what: "the sampled frame operator is one-dimensional",
            });
        }
        let delta = l.density();
        let adj = l.adjoint_lattice()?;
        // |V_φφ(μ)| = e^{−π|μ|²/2}.
        let radius = truncation_radius_for(0.5, op_tol / delta, 2, adj.covolume(), adj.covering_radius_bound());
        let terms = adj
            .enumerate_points(radius)?
            .into_iter()
            .map(|m| {
                let c = delta * ambiguity_gauss(&PhasePoint::new(vec![m[0]], vec![m[1]]));
                (m[0], m[1], c)
            })
            .collect();
        Ok(Self {
            shifter: TfShifter::new(grid),
            terms,
            truncation_error: op_tol,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    pub fn grid(&self) -> Grid1D {
        self.shifter.grid()
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let parts: Vec<Vec<Complex64>> = self
            .terms
            .par_iter()
            .map(|&(x, w, c)| {
                let mut v = self.shifter.tf_shift(f, x, w);
                for s in v.iter_mut() {
                    *s *= c;
                }
                v
            })
            .collect();
        // Summed in enumeration order, independent of the thread count.
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for p in &parts {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct DualWindow {
    pub gamma: SampledFunction,
    pub iterations: usize,
    /// `‖Sγ − φ‖₂` for the truncated operator.
    pub residual: f64,
    /// Iteration budget `⌈√(B/A)·ln(2/tol)⌉ + margin`.
    pub budget: usize,
    pub bounds: FrameBounds,
}

/// Dual window on the standard grid (step 1/32 on `[−8, 8)`).
pub fn dual_window(l: &Lattice, p: &TruncationPolicy, cg_tol: f64) -> Result<DualWindow> {
    dual_window_on(l, Grid1D::standard(), p, cg_tol)
}

pub fn dual_window_on(l: &Lattice, grid: Grid1D, p: &TruncationPolicy, cg_tol: f64) -> Result<DualWindow> {
    if !(cg_tol > 0.0 && cg_tol < 1.0) {
        return Err(Error::Domain(format!("CG tolerance must lie in (0, 1), got {cg_tol}")));
    }
    let bounds = janssen_frame_bounds(l, p, BOUNDS_GRID)?;
    let budget = ((bounds.ratio).sqrt() * (2.0 / cg_tol).ln()).ceil() as usize + CG_MARGIN;
    let op = FrameOperator::new(l, grid, p.tol)?;
    let h = grid.h;
    let phi = SampledFunction::gaussian(grid);
    let b = phi.samples();

    let inv_delta = Complex64::new(1.0 / l.density(), 0.0);
    let mut x: Vec<Complex64> = b.iter().map(|v| v * inv_delta).collect();
    let sx = op.apply(&x);
    let mut r: Vec<Complex64> = b.iter().zip(&sx).map(|(a, s)| a - s).collect();
    let mut d = r.clone();
    let mut rr = inner_slices(&r, &r, h).re;
    let mut iterations = 0;
    while rr.sqrt() > cg_tol {
        if iterations >= 10 * budget {
            return Err(Error::Numeric(format!(
                "conjugate gradients did not reach {cg_tol:e} within {} iterations (residual {:e})",
                10 * budget,
                rr.sqrt()
            )));
        }
        iterations += 1;
        let sd = op.apply(&d);
        let step = rr / inner_slices(&d, &sd, h).re;
        for i in 0..x.len() {
            x[i] += d[i] * step;
            r[i] -= sd[i] * step;
        }
        let rr_new = inner_slices(&r, &r, h).re;
        let beta = rr_new / rr;
        for i in 0..d.len() {
            d[i] = r[i] + d[i] * beta;
        }
        rr = rr_new;
    }
    let sx = op.apply(&x);
    let residual = (sx.iter().zip(b).map(|(s, v)| (s - v).norm_sqr()).sum::<f64>() * h).sqrt();
    let gamma = SampledFunction::new(grid, x)?;
    // An iterate solved to `cg_tol` carries errors of that size everywhere.
    gamma.check_decay_to("dual window", (EDGE_FACTOR * cg_tol).max(super::sampled::EDGE_DECAY))?;
    Ok(DualWindow {
        gamma,
        iterations,
        residual,
        budget,
        bounds,
    })
}

/// `max_μ |⟨γ, π(μ)φ⟩ − covol·[μ = 0]|` over adjoint points within `radius`.
pub fn biorthogonality_error(l: &Lattice, gamma: &SampledFunction, radius: f64) -> Result<f64> {
    let adj = l.adjoint_lattice()?;
    let grid = gamma.grid();
    let mut worst: f64 = 0.0;
    for m in adj.enumerate_points(radius)? {
        let z = PhasePoint::new(vec![m[0]], vec![m[1]]);
        let g = SampledFunction::shifted_gaussian(grid, &z);
        let target = if z.norm2() == 0.0 { l.covolume() } else { 0.0 };
        worst = worst.max((gamma.inner(&g)? - target).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_from_tau;

    #[test]
    fn operator_is_nearly_density_on_phi() {
        let l = lattice_from_tau(0.0, 1.0, 4.0).unwrap();
        let op = FrameOperator::new(&l, Grid1D::standard(), 1e-12).unwrap();
        let phi = SampledFunction::gaussian(Grid1D::standard());
        let s = op.apply(phi.samples());
        let ratio = inner_slices(&s, phi.samples(), 1.0 / 32.0).re;
        // ⟨Sφ, φ⟩ lies in [A, B], both within 1e-4 of 4 at this density.
        assert!((ratio - 4.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn square_dual_window_biorthogonal() {
        let l = lattice_from_tau(0.0, 1.0, 2.0).unwrap();
        let dw = dual_window(&l, &TruncationPolicy::default(), 1e-8).unwrap();
        assert!(dw.residual <= 1e-8);
        assert!(dw.iterations <= dw.budget, "{} > {}", dw.iterations, dw.budget);
        let e = biorthogonality_error(&l, &dw.gamma, 5.0).unwrap();
        assert!(e <= 1e-6, "{e}");
        // Near-tight frame: γ close to φ/δ.
        let phi = SampledFunction::gaussian(Grid1D::standard());
        let d = dw.gamma.distance(&phi.scale(Complex64::new(0.5, 0.0))).unwrap();
        // ‖S⁻¹ − δ⁻¹‖ ≤ (B − A)/(A δ).
        let f = dw.bounds;
        assert!(d <= (f.b - f.a) / (f.a * 2.0) + 1e-9, "{d}");
    }

    #[test]
    fn non_frame_rejected() {
        let l = lattice_from_tau(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            dual_window(&l, &TruncationPolicy::default(), 1e-8),
            Err(Error::NotAFrame(_))
        ));
    }
}
