use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{truncation_radius, truncation_radius_for, GaussWidth, TruncationPolicy};
use crate::error::{Error, Result};
use crate::gabor::PhasePoint;
use crate::lattice::{sigma, Lattice};
use crate::sum::{ComplexNeumaier, Neumaier};

use std::f64::consts::PI;

fn check_radius(radius: f64, p: &TruncationPolicy, what: &'static str) -> Result<()> {
    if !radius.is_finite() || radius > p.max_radius {
        return Err(Error::Resource {
            what,
            cap: p.max_radius as usize,
            needed_radius: radius,
        });
    }
    Ok(())
}

fn check_point(l: &Lattice, z: &PhasePoint) -> Result<Vec<f64>> {
    let v = z.to_vec();
    if v.len() != l.dim() {
        return Err(Error::Dimension(format!(
            "phase point has dimension {}, lattice has {}",
            v.len(),
            l.dim()
        )));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("phase point has non-finite entries".into()));
    }
    Ok(v)
}

/// Lattice points within `radius`, ordered by norm (ties by coordinates).
fn sorted_points(l: &Lattice, center: &[f64], radius: f64, cap: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut pts: Vec<(Vec<f64>, f64)> = l
        .points_near(center, radius, cap)?
        .into_iter()
        .map(|p| (p.point, p.norm2))
        .collect();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(pts)
}

/// `Σ_λ e^{−πα|λ+z|²}` with absolute truncation error at most `p.tol`.
pub fn theta_translate(l: &Lattice, z: &PhasePoint, w: GaussWidth, p: &TruncationPolicy) -> Result<f64> {
    let zv = check_point(l, z)?;
    let radius = truncation_radius(w, p.tol, l);
    check_radius(radius, p, "theta sum truncation radius")?;
    let center: Vec<f64> = zv.iter().map(|c| -c).collect();
    let pts = sorted_points(l, &center, radius, p.max_points)?;
    let a = PI * w.alpha();
    Ok(pts.iter().map(|(_, n2)| (-a * n2).exp()).collect::<Neumaier>().value())
}

/// `Σ_λ e^{−πα|λ|²} e^{2πiσ(λ,z)}` with truncation error at most `tol`.
fn dual_sum(l: &Lattice, z: &[f64], alpha: f64, tol: f64, p: &TruncationPolicy) -> Result<(Complex64, f64)> {
    let radius = truncation_radius_for(alpha, tol, l.dim(), l.covolume(), l.covering_radius_bound());
    check_radius(radius, p, "theta sum truncation radius")?;
    let pts = sorted_points(l, &vec![0.0; l.dim()], radius, p.max_points)?;
    let a = PI * alpha;
    let mut acc = ComplexNeumaier::new();
    let mut abs = Neumaier::new();
    for (pt, n2) in &pts {
        let m = (-a * n2).exp();
        acc.add(Complex64::from_polar(m, 2.0 * PI * sigma(pt, z)));
        abs.add(m);
    }
    Ok((acc.value(), abs.value()))
}

fn real_part_checked(v: Complex64, magnitude: f64, tol: f64) -> Result<f64> {
    let limit = tol.max(1e-14 * magnitude);
    if v.im.abs() > limit {
        return Err(Error::InternalConsistency(format!(
            "imaginary residue {:e} of a symmetric theta sum exceeds {:e}",
            v.im.abs(),
            limit
        )));
    }
    Ok(v.re)
}

/// `Re Σ_λ e^{−π|λ|²} e^{2πiσ(λ,z)}`; the imaginary part vanishes by `±λ`
/// symmetry and is checked.
pub fn theta_dual_phase(l: &Lattice, z: &PhasePoint, p: &TruncationPolicy) -> Result<f64> {
    theta_dual_phase_width(l, z, GaussWidth::default(), p)
}

/// `Re Σ_λ e^{−πα|λ|²} e^{2πiσ(λ,z)}` for a general width.
pub fn theta_dual_phase_width(l: &Lattice, z: &PhasePoint, w: GaussWidth, p: &TruncationPolicy) -> Result<f64> {
    let zv = check_point(l, z)?;
    let (v, mag) = dual_sum(l, &zv, w.alpha(), p.tol, p)?;
    real_part_checked(v, mag, p.tol)
}

/// `|Σ_λ F(λ+z) − covol⁻¹ Σ_{λ°} 𝓕_σF(λ°) e^{2πiσ(z,λ°)}|` for the Gaussian
/// `F(u) = e^{−πα|u|²}`, whose symplectic Fourier transform is
/// `α^{−d} e^{−π|u|²/α}`. Each side is truncated at `p.tol`.
pub fn symplectic_psf_check(l: &Lattice, z: &PhasePoint, w: GaussWidth, p: &TruncationPolicy) -> Result<f64> {
    let zv = check_point(l, z)?;
    let lhs = theta_translate(l, z, w, p)?;
    let adj = l.adjoint_lattice()?;
    let d = l.signal_dim() as i32;
    let scale = l.density() * w.alpha().powi(-d);
    let (v, mag) = dual_sum(&adj, &zv, 1.0 / w.alpha(), p.tol / scale, p)?;
    let rhs = scale * real_part_checked(v, mag, p.tol / scale)?;
    Ok((lhs - rhs).abs())
}

/// Theta evaluator with precomputed points, for repeated evaluation on grids.
///
/// For the translate form the argument is first reduced modulo the lattice
/// by rounding its coordinates, so that `|z'| ≤ ½ Σ|b_i|`; the stored points
/// cover the truncation radius around every such `z'`.
#[derive(Debug, Clone)]
pub struct ThetaEvaluator {
    lattice: Lattice,
    alpha: f64,
    tol: f64,
    inv_basis: DMatrix<f64>,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl ThetaEvaluator {
    pub fn new(l: &Lattice, w: GaussWidth, p: &TruncationPolicy) -> Result<Self> {
        let radius = truncation_radius(w, p.tol, l);
        let reach: f64 = 0.5 * l.basis().column_iter().map(|c| c.norm()).sum::<f64>();
        check_radius(radius + reach, p, "theta evaluator radius")?;
        let pts = sorted_points(l, &vec![0.0; l.dim()], radius + reach, p.max_points)?;
        let a = PI * w.alpha();
        let inv_basis = l
            .basis()
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidLattice("basis is not invertible".into()))?;
        Ok(Self {
            lattice: l.clone(),
            alpha: w.alpha(),
            tol: p.tol,
            inv_basis,
            weights: pts.iter().map(|(_, n2)| (-a * n2).exp()).collect(),
            points: pts.into_iter().map(|(v, _)| v).collect(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// `z` minus the lattice vector nearest in basis coordinates.
    pub fn reduce(&self, z: &[f64]) -> Vec<f64> {
        let u = &self.inv_basis * nalgebra::DVector::from_column_slice(z);
        let k: Vec<i64> = u.iter().map(|c| c.round() as i64).collect();
        let v = self.lattice.point(&k);
        z.iter().zip(&v).map(|(a, b)| a - b).collect()
    }

    /// `F(z) = Σ_λ e^{−πα|λ+z|²}`.
    pub fn translate(&self, z: &[f64]) -> f64 {
        let zr = self.reduce(z);
        let a = PI * self.alpha;
        let mut acc = Neumaier::new();
        for p in &self.points {
            let d2: f64 = p.iter().zip(&zr).map(|(x, y)| (x + y) * (x + y)).sum();
            acc.add((-a * d2).exp());
        }
        acc.value()
    }

    /// `Re Σ_λ e^{−πα|λ|²} e^{2πiσ(λ,z)}` with the imaginary residue checked.
    pub fn dual_phase(&self, z: &[f64]) -> Result<f64> {
        let mut acc = ComplexNeumaier::new();
        for (p, &m) in self.points.iter().zip(&self.weights) {
            acc.add(Complex64::from_polar(m, 2.0 * PI * sigma(p, z)));
        }
        let mag: f64 = self.weights.iter().sum();
        real_part_checked(acc.value(), mag, self.tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: f64, w: f64) -> PhasePoint {
        PhasePoint::new(vec![x], vec![w])
    }

    fn z2() -> Lattice {
        Lattice::from_row_major(2, &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn hex() -> Lattice {
        crate::lattice::lattice_from_tau(0.5, 3f64.sqrt() / 2.0, 1.0).unwrap()
    }

    const THETA3_SQ: f64 = 1.180_340_599_016_096_2;

    #[test]
    fn z2_at_origin() {
        let p = TruncationPolicy::default();
        let v = theta_translate(&z2(), &pp(0.0, 0.0), GaussWidth::default(), &p).unwrap();
        assert!((v - THETA3_SQ).abs() <= 1e-12);
        let d = theta_dual_phase(&z2(), &pp(0.0, 0.0), &p).unwrap();
        assert!((d - v).abs() <= 1e-13);
    }

    #[test]
    fn sqrt2_lattice_dual_phase_at_half_diagonal() {
        let l = z2().scaled(2f64.sqrt()).unwrap();
        let c = 1.0 / (2.0 * 2f64.sqrt());
        let v = theta_dual_phase(&l, &pp(c, c), &TruncationPolicy::default()).unwrap();
        assert!((v - 0.992_544_178_491_057_4).abs() <= 1e-12, "{v}");
    }

    #[test]
    fn periodicity_and_evaluator_agree() {
        let l = hex();
        let p = TruncationPolicy::default();
        let ev = ThetaEvaluator::new(&l, GaussWidth::default(), &p).unwrap();
        let z = [0.31, -0.17];
        let g = l.point(&[3, -2]);
        let direct = theta_translate(&l, &pp(z[0], z[1]), GaussWidth::default(), &p).unwrap();
        let shifted = ev.translate(&[z[0] + g[0], z[1] + g[1]]);
        assert!((direct - shifted).abs() <= 2e-12);
        let adj = l.adjoint_lattice().unwrap();
        let mu = adj.point(&[1, 2]);
        let a = ev.dual_phase(&z).unwrap();
        let b = ev.dual_phase(&[z[0] + mu[0], z[1] + mu[1]]).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn hexagonal_deep_hole_below_origin() {
        let l = hex();
        let p = TruncationPolicy::default();
        let dh = crate::lattice::deep_holes_2d(&l).unwrap();
        let at0 = theta_translate(&l, &pp(0.0, 0.0), GaussWidth::default(), &p).unwrap();
        let hole = theta_translate(&l, &dh.holes[0], GaussWidth::default(), &p).unwrap();
        assert!(hole < at0);
    }

    #[test]
    fn psf_on_z2_and_hexagonal() {
        let p = TruncationPolicy::default();
        let r = symplectic_psf_check(&z2(), &pp(0.0, 0.0), GaussWidth::default(), &p).unwrap();
        assert!(r <= 1e-10);
        for alpha in [0.5, 2.0] {
            let r = symplectic_psf_check(&hex(), &pp(0.2, 0.7), GaussWidth::new(alpha).unwrap(), &p).unwrap();
            assert!(r <= 1e-9, "alpha {alpha}: {r}");
        }
    }

    #[test]
    fn cap_yields_resource_error() {
        let p = TruncationPolicy::new(1e-12, 1.0, 1000).unwrap();
        let l = z2().scaled(0.05).unwrap();
        let err = theta_translate(&l, &pp(0.0, 0.0), GaussWidth::default(), &p).unwrap_err();
        assert!(err.is_resource());
    }
}
