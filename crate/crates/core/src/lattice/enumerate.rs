//! Fincke–Pohst enumeration of lattice points in a ball.
//!
//! The Gram matrix `BᵀB = RᵀR` is factored through a QR decomposition of the
//! basis; coordinates are then bounded recursively from the last one down.
//! No basis reduction is performed, which is adequate for the small
//! dimensions and radii used here. The outermost coordinate is split across
//! rayon workers; results are merged and sorted, so the output does not
//! depend on the thread count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::Lattice;
use crate::error::{Error, Result};

/// Default cap on the number of enumerated points.
pub const DEFAULT_POINT_CAP: usize = 5_000_000;

/// Relative slack when pruning the search tree, so that points on the sphere
/// are not lost to rounding in `R`.
const PRUNE_SLACK: f64 = 1e-9;
/// Relative slack on the final distance test.
const ACCEPT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
    pub point: Vec<f64>,
    /// Squared distance to the enumeration center.
    pub norm2: f64,
}

/// Upper-triangular `R` with positive diagonal and `BᵀB = RᵀR`.
pub(crate) fn cholesky_upper(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let mut r = basis.clone().qr().r();
    for i in 0..r.nrows() {
        if r[(i, i)] < 0.0 {
            let mut row = r.row_mut(i);
            row *= -1.0;
        }
    }
    r
}

struct Search<'a> {
    r: &'a DMatrix<f64>,
    target: Vec<f64>,
    bound2: f64,
}

impl Search<'_> {
    fn range(&self, level: usize, k: &[i64], partial: f64) -> Option<(i64, i64, f64)> {
        let n = self.target.len();
        let rii = self.r[(level, level)];
        let mut s = 0.0;
        for j in level + 1..n {
            s += self.r[(level, j)] * (k[j] as f64 - self.target[j]);
        }
        let rem = self.bound2 - partial;
        if rem < 0.0 {
            return None;
        }
        let center = self.target[level] - s / rii;
        let w = rem.sqrt() / rii;
        let lo = (center - w - 1e-12).ceil();
        let hi = (center + w + 1e-12).floor();
        if lo > hi {
            return None;
        }
        Some((lo as i64, hi as i64, s))
    }

    /// Depth-first walk; `visit` returns false to abort.
    fn walk(&self, level: usize, k: &mut [i64], partial: f64, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let Some((lo, hi, s)) = self.range(level, k, partial) else {
            return true;
        };
        let rii = self.r[(level, level)];
        for v in lo..=hi {
            let y = rii * (v as f64 - self.target[level]) + s;
            let p = partial + y * y;
            if p > self.bound2 {
                continue;
            }
            k[level] = v;
            let ok = if level == 0 {
                visit(k)
            } else {
                self.walk(level - 1, k, p, visit)
            };
            if !ok {
                return false;
            }
        }
        k[level] = 0;
        true
    }
}

impl Lattice {
    fn search(&self, center: &[f64], radius: f64) -> Result<(DMatrix<f64>, Vec<f64>, f64)> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("enumeration radius must be positive, got {radius}")));
        }
        if center.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "center has length {}, lattice dimension is {}",
                center.len(),
                self.dim()
            )));
        }
        let inv = self
            .basis()
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidLattice("basis is not invertible".into()))?;
        let target: Vec<f64> = (inv * nalgebra::DVector::from_column_slice(center)).iter().copied().collect();
        let bound2 = radius * radius * (1.0 + PRUNE_SLACK) + 1e-14;
        Ok((cholesky_upper(self.basis()), target, bound2))
    }

    /// Runs the enumeration in parallel over the outermost coordinate and
    /// hands every leaf to `leaf`, which returns `None` to skip the point.
    fn par_enumerate<T, F>(&self, center: &[f64], radius: f64, cap: usize, leaf: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(&[i64]) -> Option<T> + Sync,
    {
        let (r, target, bound2) = self.search(center, radius)?;
        let n = self.dim();
        let search = Search { r: &r, target, bound2 };
        let zero = vec![0i64; n];
        let Some((lo, hi, _)) = search.range(n - 1, &zero, 0.0) else {
            return Ok(Vec::new());
        };
        let count = AtomicUsize::new(0);
        let overflow = AtomicBool::new(false);
        let chunks: Vec<Vec<T>> = (lo..=hi)
            .into_par_iter()
            .map(|top| {
                let mut out = Vec::new();
                if overflow.load(Ordering::Relaxed) {
                    return out;
                }
                let rii = search.r[(n - 1, n - 1)];
                let y = rii * (top as f64 - search.target[n - 1]);
                let p = y * y;
                if p > search.bound2 {
                    return out;
                }
                let mut k = vec![0i64; n];
                k[n - 1] = top;
                let mut visit = |coords: &[i64]| -> bool {
                    if let Some(item) = leaf(coords) {
                        out.push(item);
                        if count.fetch_add(1, Ordering::Relaxed) + 1 > cap {
                            overflow.store(true, Ordering::Relaxed);
                            return false;
                        }
                    }
                    !overflow.load(Ordering::Relaxed)
                };
                if n == 1 {
                    visit(&k);
                } else {
                    search.walk(n - 2, &mut k, p, &mut visit);
                }
                out
            })
            .collect();
        if overflow.load(Ordering::Relaxed) {
            return Err(Error::Resource {
                what: "lattice point enumeration",
                cap,
                needed_radius: radius,
            });
        }
        Ok(chunks.into_iter().flatten().collect())
    }

    /// All lattice points within `radius` of `center`, sorted
    /// lexicographically by integer coordinates.
    pub fn points_near(&self, center: &[f64], radius: f64, cap: usize) -> Result<Vec<LatticePoint>> {
        let limit = radius * radius * (1.0 + ACCEPT_SLACK);
        let mut pts = self.par_enumerate(center, radius, cap, |coords| {
            let point = self.point(coords);
            let norm2: f64 = point.iter().zip(center).map(|(p, c)| (p - c) * (p - c)).sum();
            (norm2 <= limit).then(|| LatticePoint {
                coords: coords.to_vec(),
                point,
                norm2,
            })
        })?;
        pts.sort_by(|a, b| a.coords.cmp(&b.coords));
        Ok(pts)
    }

    /// Lattice points of Euclidean norm at most `radius`, each once, in
    /// lexicographic order of their integer coordinates.
    pub fn enumerate_points(&self, radius: f64) -> Result<Vec<Vec<f64>>> {
        self.enumerate_points_capped(radius, DEFAULT_POINT_CAP)
    }

    pub fn enumerate_points_capped(&self, radius: f64, cap: usize) -> Result<Vec<Vec<f64>>> {
        let origin = vec![0.0; self.dim()];
        Ok(self.points_near(&origin, radius, cap)?.into_iter().map(|p| p.point).collect())
    }

    /// Sorted squared norms of all points within `radius` of the origin.
    /// Points are not stored, so this reaches much larger counts.
    pub fn norms_within(&self, radius: f64, cap: usize) -> Result<Vec<f64>> {
        let limit = radius * radius * (1.0 + ACCEPT_SLACK);
        let origin = vec![0.0; self.dim()];
        let basis = self.basis();
        let n = self.dim();
        let mut norms = self.par_enumerate(&origin, radius, cap, |coords| {
            let mut norm2 = 0.0;
            for i in 0..n {
                let mut v = 0.0;
                for (j, &k) in coords.iter().enumerate() {
                    v += basis[(i, j)] * k as f64;
                }
                norm2 += v * v;
            }
            (norm2 <= limit).then_some(norm2)
        })?;
        norms.sort_by(f64::total_cmp);
        Ok(norms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(l: &Lattice, radius: f64, box_half: i64) -> Vec<Vec<i64>> {
        let n = l.dim();
        let mut out = Vec::new();
        let mut k = vec![-box_half; n];
        loop {
            let p = l.point(&k);
            if p.iter().map(|v| v * v).sum::<f64>() <= radius * radius * (1.0 + 1e-12) {
                out.push(k.clone());
            }
            let mut i = n - 1;
            loop {
                if k[i] < box_half {
                    k[i] += 1;
                    break;
                }
                k[i] = -box_half;
                if i == 0 {
                    return out;
                }
                i -= 1;
            }
        }
    }

    #[test]
    fn z2_unit_ball() {
        let l = Lattice::new(DMatrix::identity(2, 2)).unwrap();
        let pts = l.enumerate_points(1.0).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts, vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn hexagonal_matches_brute_force() {
        let c = (2.0 / 3f64.sqrt()).sqrt();
        let l = Lattice::from_row_major(2, &[c, c * 0.5, 0.0, c * 3f64.sqrt() / 2.0]).unwrap();
        let fp: Vec<Vec<i64>> = l
            .points_near(&[0.0, 0.0], 1.1, 100)
            .unwrap()
            .into_iter()
            .map(|p| p.coords)
            .collect();
        let bf = brute_force(&l, 1.1, 3);
        assert_eq!(fp, bf);
        assert_eq!(fp.len(), 7);
    }

    #[test]
    fn skewed_basis_off_center() {
        let l = Lattice::from_row_major(2, &[1.0, 3.2, 0.1, 0.7]).unwrap();
        let center = [0.37, -0.81];
        let pts = l.points_near(&center, 2.5, 1000).unwrap();
        let mut bf = Vec::new();
        for a in -60..=60 {
            for b in -20..=20 {
                let p = l.point(&[a, b]);
                let d = (p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2);
                if d <= 2.5 * 2.5 {
                    bf.push(vec![a, b]);
                }
            }
        }
        assert_eq!(pts.into_iter().map(|p| p.coords).collect::<Vec<_>>(), bf);
    }

    #[test]
    fn cap_is_enforced() {
        let l = Lattice::new(DMatrix::identity(2, 2)).unwrap();
        let err = l.enumerate_points_capped(10.0, 50).unwrap_err();
        assert!(matches!(err, Error::Resource { cap: 50, .. }));
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let l = Lattice::new(DMatrix::identity(2, 2)).unwrap();
        assert!(l.enumerate_points(0.0).is_err());
    }

    #[test]
    fn norms_agree_with_points() {
        let l = Lattice::from_row_major(4, &[1.0, 0.5, 0.0, 0.0, 0.0, 1.0, 0.3, 0.0, 0.0, 0.0, 1.2, 0.1, 0.2, 0.0, 0.0, 0.9])
            .unwrap();
        let pts = l.points_near(&[0.0; 4], 2.3, 10_000).unwrap();
        let mut a: Vec<f64> = pts.iter().map(|p| p.norm2).collect();
        a.sort_by(f64::total_cmp);
        let b = l.norms_within(2.3, 10_000).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
