//! Planar lattice shapes at fixed density, parameterized by a point `τ = x + iy`
//! of the modular fundamental domain.

use nalgebra::DMatrix;

use super::Lattice;
use crate::error::{Error, Result};

const DOMAIN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParam2D {
    pub x: f64,
    pub y: f64,
    pub density: f64,
}

impl ShapeParam2D {
    /// Validates that `(x, y)` lies in the closed fundamental domain
    /// `|x| ≤ 1/2`, `x² + y² ≥ 1`, `y > 0`.
    pub fn new(x: f64, y: f64, density: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() {
            return Err(Error::Domain(format!("shape parameter y must be positive, got {y}")));
        }
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::Domain(format!("density must be positive, got {density}")));
        }
        if x.abs() > 0.5 + DOMAIN_TOL || x * x + y * y < 1.0 - DOMAIN_TOL {
            return Err(Error::Domain(format!(
                "({x}, {y}) is outside the fundamental domain |x| <= 1/2, x^2 + y^2 >= 1"
            )));
        }
        Ok(Self { x, y, density })
    }

    pub fn square(density: f64) -> Result<Self> {
        Self::new(0.0, 1.0, density)
    }

    pub fn hexagonal(density: f64) -> Result<Self> {
        Self::new(0.5, 3f64.sqrt() / 2.0, density)
    }
}

/// Basis `c [[1, x], [0, y]]` with `c = (y·density)^{-1/2}`, so that the
/// covolume is exactly `1/density`. Works for any `y > 0`.
pub fn lattice_from_tau(x: f64, y: f64, density: f64) -> Result<Lattice> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("shape parameter y must be positive, got {y}")));
    }
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Domain(format!("density must be positive, got {density}")));
    }
    let c = 1.0 / (y * density).sqrt();
    Lattice::new(DMatrix::from_row_slice(2, 2, &[c, c * x, 0.0, c * y]))
}

pub fn shape_to_lattice(s: &ShapeParam2D) -> Result<Lattice> {
    lattice_from_tau(s.x, s.y, s.density)
}

/// Maps `τ` in the upper half plane to the fundamental domain using
/// `τ → τ + n` and `τ → −1/τ`, then folds `x → |x|`.
pub fn reduce_to_fundamental_domain(mut x: f64, mut y: f64) -> Result<(f64, f64)> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("shape parameter y must be positive, got {y}")));
    }
    for _ in 0..10_000 {
        x -= x.round();
        let r2 = x * x + y * y;
        if r2 >= 1.0 - DOMAIN_TOL {
            return Ok((x.abs(), y));
        }
        x = -x / r2;
        y /= r2;
    }
    Err(Error::Numeric("modular reduction did not terminate".into()))
}
