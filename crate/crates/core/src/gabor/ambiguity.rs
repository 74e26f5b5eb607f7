use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::PhasePoint;
use crate::error::{Error, Result};
use crate::lattice::Lattice;

use std::f64::consts::PI;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `V_φφ(z) = e^{−πi x·ω} e^{−π|z|²/2}`.
pub fn ambiguity_gauss(z: &PhasePoint) -> Complex64 {
    Complex64::from_polar((-PI * z.norm2() / 2.0).exp(), -PI * dot(&z.x, &z.omega))
}

fn ambiguity_slice(z: &[f64]) -> Complex64 {
    let d = z.len() / 2;
    let n2: f64 = z.iter().map(|v| v * v).sum();
    Complex64::from_polar((-PI * n2 / 2.0).exp(), -PI * dot(&z[..d], &z[d..]))
}

/// `⟨π(ν)φ, π(λ)φ⟩ = e^{−2πi(ω_λ−ω_ν)·x_ν} V_φφ(λ − ν)`, from
/// `π(ν)* π(λ) = e^{−2πi(ω_λ−ω_ν)·x_ν} π(λ − ν)`.
pub fn gram_entry(lambda: &[f64], nu: &[f64]) -> Complex64 {
    let d = lambda.len() / 2;
    let diff: Vec<f64> = lambda.iter().zip(nu).map(|(a, b)| a - b).collect();
    let phase = -2.0 * PI * dot(&diff[d..], &nu[..d]);
    Complex64::from_polar(1.0, phase) * ambiguity_slice(&diff)
}

/// Gram matrix `G_{λ,ν} = ⟨π(ν)φ, π(λ)φ⟩` of the Gaussian system over a
/// finite subset of a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<Complex64>,
    /// Lattice points indexing rows and columns, in enumeration order.
    pub index_map: Vec<Vec<f64>>,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.index_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index_map.is_empty()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                d = d.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        d
    }

    /// Extreme eigenvalues `(λ_min, λ_max)`.
    pub fn extreme_eigenvalues(&self) -> Result<(f64, f64)> {
        if self.is_empty() {
            return Err(Error::Numeric("empty Gram matrix".into()));
        }
        let ev = self.entries.clone().symmetric_eigenvalues();
        if ev.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("eigen-solver returned non-finite values".into()));
        }
        let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((lo, hi))
    }
}

/// Gram matrix over the points of `l` within `radius` of the origin.
pub fn gram_matrix(l: &Lattice, radius: f64) -> Result<GramMatrix> {
    let pts = l.enumerate_points(radius)?;
    let n = pts.len();
    let rows: Vec<Vec<Complex64>> = pts
        .par_iter()
        .map(|lam| pts.iter().map(|nu| gram_entry(lam, nu)).collect())
        .collect();
    let entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    Ok(GramMatrix { entries, index_map: pts })
}
