//! Deep holes of planar lattices via the Voronoi cell of the origin.

use nalgebra::DMatrix;

use super::Lattice;
use crate::error::{Error, Result};
use crate::gabor::PhasePoint;

#[derive(Debug, Clone, PartialEq)]
pub struct DeepHoles {
    /// Inequivalent deep holes, reduced into the basis parallelepiped `B[0,1)²`.
    pub holes: Vec<PhasePoint>,
    pub covering_radius: f64,
    /// Vertices of the Voronoi cell of the origin, counter-clockwise.
    pub voronoi_vertices: Vec<[f64; 2]>,
}

/// Lagrange–Gauss reduction of a planar basis; returns `(b1, b2)` with
/// `|b1| ≤ |b2|` and `|b1·b2| ≤ |b1|²/2`.
pub fn lagrange_reduce(b1: [f64; 2], b2: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let dot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let (mut u, mut v) = (b1, b2);
    if dot(u, u) > dot(v, v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let mu = (dot(u, v) / dot(u, u)).round();
        v = [v[0] - mu * u[0], v[1] - mu * u[1]];
        if dot(v, v) >= dot(u, u) * (1.0 - 1e-15) {
            return (u, v);
        }
        std::mem::swap(&mut u, &mut v);
    }
}

/// Clips a convex polygon by the half-plane `p·n ≤ c`.
fn clip(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let side = |p: [f64; 2]| p[0] * n[0] + p[1] * n[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// Deep holes and covering radius of a 2-D lattice.
pub fn deep_holes_2d(lattice: &Lattice) -> Result<DeepHoles> {
    if lattice.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            got: lattice.dim(),
            what: "deep holes are computed only for planar lattices",
        });
    }
    let g1 = lattice.generator(0);
    let g2 = lattice.generator(1);
    let (_, v) = lagrange_reduce([g1[0], g1[1]], [g2[0], g2[1]]);
    let scale = (v[0] * v[0] + v[1] * v[1]).sqrt();

    // Relevant vectors of a reduced planar basis lie within 2|b2|.
    let neighbours = lattice.enumerate_points(2.0 * scale * (1.0 + 1e-9))?;
    let m = 2.0 * scale;
    let mut poly = vec![[-m, -m], [m, -m], [m, m], [-m, m]];
    for p in neighbours {
        let n2 = p[0] * p[0] + p[1] * p[1];
        if n2 > 0.0 {
            poly = clip(&poly, [p[0], p[1]], n2 / 2.0);
        }
    }

    let tol = 1e-9 * scale;
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    for p in poly {
        if !vertices
            .iter()
            .any(|q| ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt() < tol)
        {
            vertices.push(p);
        }
    }
    let radius_of = |p: &[f64; 2]| (p[0] * p[0] + p[1] * p[1]).sqrt();
    let covering_radius = vertices.iter().map(radius_of).fold(0.0, f64::max);

    let inv: DMatrix<f64> = lattice
        .basis()
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidLattice("basis is not invertible".into()))?;
    let mut holes: Vec<[f64; 2]> = Vec::new();
    for p in vertices.iter().filter(|p| radius_of(p) >= covering_radius - tol) {
        let mut u = [
            inv[(0, 0)] * p[0] + inv[(0, 1)] * p[1],
            inv[(1, 0)] * p[0] + inv[(1, 1)] * p[1],
        ];
        for c in u.iter_mut() {
            *c -= c.floor();
            if *c > 1.0 - 1e-9 || *c < 1e-9 {
                *c = 0.0;
            }
        }
        let b = lattice.basis();
        let q = [b[(0, 0)] * u[0] + b[(0, 1)] * u[1], b[(1, 0)] * u[0] + b[(1, 1)] * u[1]];
        if !holes
            .iter()
            .any(|h| ((h[0] - q[0]).powi(2) + (h[1] - q[1]).powi(2)).sqrt() < tol)
        {
            holes.push(q);
        }
    }
    holes.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));

    Ok(DeepHoles {
        holes: holes.into_iter().map(|h| PhasePoint::new(vec![h[0]], vec![h[1]])).collect(),
        covering_radius,
        voronoi_vertices: vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(rows: [f64; 4]) -> Lattice {
        Lattice::from_row_major(2, &rows).unwrap()
    }

    /// Grid oracle: max over the fundamental cell of the distance to the lattice.
    fn grid_covering_radius(l: &Lattice, n: usize) -> f64 {
        let pts = l.enumerate_points(4.0 * l.covering_radius_bound().max(1.0)).unwrap();
        let b = l.basis();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (i as f64 / n as f64, j as f64 / n as f64);
                let z = [b[(0, 0)] * u + b[(0, 1)] * v, b[(1, 0)] * u + b[(1, 1)] * v];
                let d = pts
                    .iter()
                    .map(|p| ((p[0] - z[0]).powi(2) + (p[1] - z[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                best = best.max(d);
            }
        }
        best
    }

    #[test]
    fn square_deep_hole() {
        let dh = deep_holes_2d(&lat([1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(dh.holes.len(), 1);
        assert!((dh.holes[0].x[0] - 0.5).abs() < 1e-12 && (dh.holes[0].omega[0] - 0.5).abs() < 1e-12);
        assert!((dh.covering_radius - 2f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rectangle_center() {
        let dh = deep_holes_2d(&lat([2.0, 0.0, 0.0, 0.5])).unwrap();
        assert_eq!(dh.holes.len(), 1);
        assert!((dh.holes[0].x[0] - 1.0).abs() < 1e-12 && (dh.holes[0].omega[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn hexagonal_has_two_deep_hole_classes() {
        let c = (2.0 / 3f64.sqrt()).sqrt();
        let l = lat([c, c * 0.5, 0.0, c * 3f64.sqrt() / 2.0]);
        let dh = deep_holes_2d(&l).unwrap();
        assert_eq!(dh.holes.len(), 2);
        assert_eq!(dh.voronoi_vertices.len(), 6);
        assert!((dh.covering_radius - c / 3f64.sqrt()).abs() < 1e-12);
        let oracle = grid_covering_radius(&l, 400);
        assert!(dh.covering_radius >= oracle - 1e-12);
        assert!(dh.covering_radius - oracle < 5e-3);
    }

    #[test]
    fn skewed_lattice_against_grid() {
        let l = lat([1.0, 2.3, 0.2, 0.9]);
        let dh = deep_holes_2d(&l).unwrap();
        let oracle = grid_covering_radius(&l, 300);
        assert!(dh.covering_radius >= oracle - 1e-12);
        assert!(dh.covering_radius - oracle < 1e-2);
        assert!(dh.covering_radius >= 0.5 * l.minimal_norm().unwrap());
    }

    #[test]
    fn rejects_higher_dimensions() {
        let l = Lattice::new(DMatrix::identity(4, 4)).unwrap();
        assert!(matches!(deep_holes_2d(&l), Err(Error::UnsupportedDimension { got: 4, .. })));
    }

    #[test]
    fn lagrange_reduction_is_reduced() {
        let (u, v) = lagrange_reduce([1.0, 0.0], [7.3, 0.4]);
        let dot = u[0] * v[0] + u[1] * v[1];
        assert!(dot.abs() <= 0.5 * (u[0] * u[0] + u[1] * u[1]) + 1e-12);
    }
}
