//! Tensor lattices in phase-space dimension 4 that differ only by a
//! relabelling of coordinates, yet behave differently as Gabor systems.
//!
//! With coordinates `(x₁, x₂, ω₁, ω₂)`:
//!
//! * `Λ₁(α) = α·diag(β, β, 1/β, 1/β) Z⁴` is symplectic up to scaling and is a
//!   frame iff `α < 1`;
//! * `Λ₂(α) = α·diag(β, 1/β, β, 1/β) Z⁴` factors into the planar lattices
//!   `α·diag(β, β)` and `α·diag(1/β, 1/β)`, so it is a frame iff both factors
//!   have density above 1: `αβ < 1` and `α/β < 1`.

use nalgebra::DMatrix;

use super::gram_spectral_bounds;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Truncation radii used for the numerical classification.
pub const CLASSIFICATION_RADII: [f64; 3] = [2.0, 3.0, 4.0];
/// A frame keeps at least this fraction of its lower estimate from radius 3 to 4.
const STABILITY_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorLattice {
    Symplectic,
    Relabelled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorFrameCheck {
    pub lambda1_is_frame: bool,
    pub lambda2_is_frame: bool,
}

pub fn tensor_lattice(kind: TensorLattice, alpha: f64, beta: f64) -> Result<Lattice> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("alpha and beta must be positive, got {alpha}, {beta}")));
    }
    let d = match kind {
        TensorLattice::Symplectic => [beta, beta, 1.0 / beta, 1.0 / beta],
        TensorLattice::Relabelled => [beta, 1.0 / beta, beta, 1.0 / beta],
    };
    Lattice::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d)) * alpha)
}

/// Frame property of `Λ₁(α)` and `Λ₂(α)` from the one-dimensional density
/// criterion applied to each tensor factor.
pub fn tensor_frame_check(alpha: f64, beta: f64) -> Result<TensorFrameCheck> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("alpha and beta must be positive, got {alpha}, {beta}")));
    }
    Ok(TensorFrameCheck {
        lambda1_is_frame: alpha < 1.0,
        lambda2_is_frame: alpha * beta < 1.0 && alpha / beta < 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramClassification {
    /// Lower estimates `δ λ_min(G°)` at each of [`CLASSIFICATION_RADII`].
    pub lower_estimates: Vec<f64>,
    pub is_frame: bool,
}

/// Numerical frame test: the lower Gram-spectral estimate of a frame
/// stabilizes as the truncation radius grows, while for a non-frame it keeps
/// collapsing toward 0. Density ≤ 1 is classified as non-frame outright.
pub fn tensor_gram_classification(kind: TensorLattice, alpha: f64, beta: f64) -> Result<GramClassification> {
    let l = tensor_lattice(kind, alpha, beta)?;
    if l.density() <= 1.0 {
        return Ok(GramClassification {
            lower_estimates: Vec::new(),
            is_frame: false,
        });
    }
    let lower_estimates = CLASSIFICATION_RADII
        .iter()
        .map(|&r| gram_spectral_bounds(&l, r).map(|f| f.a))
        .collect::<Result<Vec<_>>>()?;
    let n = lower_estimates.len();
    let is_frame = lower_estimates[n - 1] >= STABILITY_FRACTION * lower_estimates[n - 2];
    Ok(GramClassification {
        lower_estimates,
        is_frame,
    })
}
