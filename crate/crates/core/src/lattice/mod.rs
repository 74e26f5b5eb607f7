//! Lattices in even-dimensional phase space.
//!
//! A [`Lattice`] is stored through a full-rank generator matrix whose columns
//! are the generators. Coordinates are ordered `(x₁…x_d, ω₁…ω_d)`, so the
//! standard symplectic matrix acts blockwise as `[[0, I], [-I, 0]]`.

mod catalog;
mod deep_holes;
mod enumerate;
mod io;
mod shape;
mod theta_series;

pub use catalog::{leech_table, named_lattice, NamedLattice, LEECH_THETA_CSV};
pub use deep_holes::{deep_holes_2d, lagrange_reduce, DeepHoles};
pub use enumerate::{LatticePoint, DEFAULT_POINT_CAP};
pub use io::LatticeDescriptor;
pub use shape::{lattice_from_tau, reduce_to_fundamental_domain, shape_to_lattice, ShapeParam2D};
pub use theta_series::ThetaSeries;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance below which a basis counts as singular.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    basis: DMatrix<f64>,
    covolume: f64,
    name: Option<String>,
}

impl Lattice {
    /// Builds a lattice from a generator matrix whose columns are the generators.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let n = basis.nrows();
        if n == 0 || basis.ncols() != n {
            return Err(Error::Dimension(format!(
                "basis must be square, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        if n % 2 != 0 {
            return Err(Error::Dimension(format!(
                "phase-space dimension must be even, got {n}"
            )));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidLattice("basis has non-finite entries".into()));
        }
        let det = basis.determinant();
        // Hadamard ratio: |det| / prod |b_i| lies in (0, 1].
        let col_norms: f64 = basis.column_iter().map(|c| c.norm()).product();
        if col_norms == 0.0 || !(det.abs() / col_norms > SINGULAR_TOL) {
            return Err(Error::InvalidLattice(format!(
                "singular basis (|det| = {:e})",
                det.abs()
            )));
        }
        Ok(Self {
            basis,
            covolume: det.abs(),
            name: None,
        })
    }

    /// Generator matrix given row by row, as in the JSON descriptor format.
    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} basis entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Half the phase-space dimension.
    pub fn signal_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn density(&self) -> f64 {
        1.0 / self.covolume
    }

    pub fn generator(&self, i: usize) -> Vec<f64> {
        self.basis.column(i).iter().copied().collect()
    }

    /// The point `B k` for integer coordinates `k`.
    pub fn point(&self, coords: &[i64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (j, &k) in coords.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let kf = k as f64;
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.basis[(i, j)] * kf;
            }
        }
        out
    }

    /// Same point set scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut l = Self::new(&self.basis * factor)?;
        l.name = self.name.clone();
        Ok(l)
    }

    /// Uniformly rescaled copy with the requested density.
    pub fn scaled_to_density(&self, density: f64) -> Result<Self> {
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::Domain(format!("density must be positive, got {density}")));
        }
        let n = self.dim() as f64;
        let factor = (self.covolume * density).powf(-1.0 / n);
        self.scaled(factor)
    }

    /// Classical dual `B^{-T} Z^n`.
    pub fn dual_lattice(&self) -> Result<Self> {
        let inv = self
            .basis
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidLattice("basis is not invertible".into()))?;
        Self::new(inv.transpose())
    }

    /// Symplectic dual `Λ° = J Λ^⊥`: all points whose symplectic pairing with
    /// every lattice vector is an integer.
    pub fn adjoint_lattice(&self) -> Result<Self> {
        let dual = self.dual_lattice()?;
        let j = SymplecticForm::new(self.signal_dim()).matrix;
        Self::new(j * dual.basis)
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        is_symplectic(&self.basis, tol).unwrap_or(false)
    }

    /// Integer coordinates of `p` in this basis, if they are integral to `tol`.
    pub fn coordinates_of(&self, p: &[f64], tol: f64) -> Option<Vec<i64>> {
        let inv = self.basis.clone().try_inverse()?;
        let v = nalgebra::DVector::from_column_slice(p);
        let u = inv * v;
        let mut out = Vec::with_capacity(u.len());
        for c in u.iter() {
            let r = c.round();
            if (c - r).abs() > tol {
                return None;
            }
            out.push(r as i64);
        }
        Some(out)
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        self.coordinates_of(p, tol).is_some()
    }

    /// Point-set equality tested by mutual membership of the points within
    /// `radius`, with integrality tolerance `tol`.
    pub fn same_point_set(&self, other: &Lattice, radius: f64, tol: f64) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for (a, b) in [(self, other), (other, self)] {
            for p in a.enumerate_points(radius)? {
                if !b.contains(&p, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Upper bound on the covering radius from the Gram–Schmidt lengths,
    /// `½ (Σ |b_i*|²)^{1/2}`.
    pub fn covering_radius_bound(&self) -> f64 {
        let r = enumerate::cholesky_upper(&self.basis);
        let s: f64 = (0..self.dim()).map(|i| r[(i, i)] * r[(i, i)]).sum();
        0.5 * s.sqrt()
    }

    /// Length of a shortest nonzero vector.
    pub fn minimal_norm(&self) -> Result<f64> {
        let mut radius = self
            .basis
            .column_iter()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min);
        let pts = self.points_near(&vec![0.0; self.dim()], radius * (1.0 + 1e-9), DEFAULT_POINT_CAP)?;
        for p in pts {
            if p.norm2 > 0.0 {
                radius = radius.min(p.norm2.sqrt());
            }
        }
        Ok(radius)
    }
}

/// The standard symplectic matrix `J = [[0, I], [-I, 0]]` in `R^{2d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(d: usize) -> Self {
        let n = 2 * d;
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..d {
            matrix[(i, d + i)] = 1.0;
            matrix[(d + i, i)] = -1.0;
        }
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `σ(z, z') = z · J z' = x·ω' − ω·x'`.
    pub fn apply(&self, z: &[f64], zp: &[f64]) -> f64 {
        sigma(z, zp)
    }
}

/// Standard symplectic form `σ(z, z') = z · J z'` without building `J`.
#[inline]
pub fn sigma(z: &[f64], zp: &[f64]) -> f64 {
    let d = z.len() / 2;
    let mut s = 0.0;
    for i in 0..d {
        s += z[i] * zp[d + i] - z[d + i] * zp[i];
    }
    s
}

/// True iff `max |BᵀJB − J| ≤ tol`.
pub fn is_symplectic(b: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let n = b.nrows();
    if b.ncols() != n {
        return Err(Error::Dimension("matrix must be square".into()));
    }
    if n % 2 != 0 {
        return Err(Error::Dimension(format!("odd dimension {n}")));
    }
    let j = SymplecticForm::new(n / 2).matrix;
    let diff = b.transpose() * &j * b - j;
    Ok(diff.amax() <= tol)
}
