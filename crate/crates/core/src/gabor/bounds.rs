//! Frame-bound computations for the Gaussian Gabor system over a lattice.
//!
//! With `δ = density(Λ)` and the adjoint `Λ°`:
//!
//! * Janssen: `B = δ F̂_{Λ°}(0)`, `A = δ min_z F̂_{Λ°}(z)` with
//!   `F̂_{Λ°}(z) = Σ_{λ°} e^{−π|λ°|²/2} e^{2πiσ(λ°,z)}`;
//! * Condition A: `B̃ = δ Σ_{λ°} e^{−π|λ°|²/2} ≥ B`;
//! * energy: `Σ_λ e^{−π|λ|²} ≤ B`;
//! * Gram spectrum: `δ λ_min(G°) ≥ A` and `δ λ_max(G°) ≤ B` for every finite
//!   section `G°` of the adjoint Gram matrix (Cauchy interlacing);
//! * relaxed: min and max over `z` of `Σ_λ e^{−πα|λ−z|²}`.

use super::{gram_matrix, FrameBounds, Method, PhasePoint};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ThetaSeries};
use crate::theta::{
    find_extremum, theta_dual_phase_width, theta_series_sum, theta_translate, ExtremumKind, GaussWidth, SeriesSum,
    ThetaForm, TruncationPolicy,
};

/// Density within this distance of an even integer counts as even.
const EVEN_DENSITY_TOL: f64 = 1e-9;

fn require_planar(l: &Lattice, what: &'static str) -> Result<()> {
    if l.dim() != 2 {
        return Err(Error::UnsupportedDimension { got: l.dim(), what });
    }
    Ok(())
}

fn is_even_integer(v: f64) -> bool {
    let r = v.round();
    (v - r).abs() <= EVEN_DENSITY_TOL && r >= 2.0 && (r as i64) % 2 == 0
}

/// Width of the Janssen symbol: `|⟨φ, π(μ)φ⟩| = e^{−π|μ|²/2}`.
const JANSSEN_WIDTH: f64 = 0.5;

/// Janssen frame bounds of the Gaussian system over a planar lattice.
///
/// The frame operator is `S = δ Σ_{μ∈Λ°} e^{−π|μ|²/2} ρ(μ)` with the
/// symmetric shifts `ρ(μ) = e^{−πix·ω} π(μ)`. At even integer density
/// `σ(Λ°, Λ°) ⊂ 2Z`, so `ρ` is a unitary representation of `Λ°` whose joint
/// spectrum is every character `μ ↦ e^{2πiσ(μ,z)}`; the spectrum of `S` is
/// then exactly the range of `δ F̂_{Λ°}`. Labelled [`Method::JanssenExact`]
/// there and [`Method::JanssenHeuristic`] otherwise. `error_bound` covers
/// truncation of both theta sums; the minimum is a refined numerical minimum.
pub fn janssen_frame_bounds(l: &Lattice, p: &TruncationPolicy, grid_n: usize) -> Result<FrameBounds> {
    require_planar(l, "Janssen bounds are computed in phase-space dimension 2")?;
    let delta = l.density();
    if delta <= 1.0 {
        return Err(Error::NotAFrame(format!(
            "density {delta} ≤ 1: the Gaussian system is not a frame"
        )));
    }
    let adj = l.adjoint_lattice()?;
    let w = GaussWidth::new(JANSSEN_WIDTH)?;
    let b = delta * theta_dual_phase_width(&adj, &PhasePoint::origin(1), w, p)?;
    let m = find_extremum(&adj, w, ExtremumKind::Min, ThetaForm::DualPhase, grid_n, p)?;
    let a = delta * m.value;
    if a <= 0.0 {
        return Err(Error::NotAFrame(format!("lower Janssen bound {a:e} is not positive")));
    }
    let method = if is_even_integer(delta) {
        Method::JanssenExact
    } else {
        Method::JanssenHeuristic
    };
    FrameBounds::new(a, b, method, delta * p.tol)
}

/// `Σ_λ e^{−π|λ|²}`, a lower estimate of the upper frame bound.
pub fn energy_lower_bound(l: &Lattice, p: &TruncationPolicy) -> Result<f64> {
    theta_translate(l, &PhasePoint::origin(l.signal_dim()), GaussWidth::default(), p)
}

/// `B̃ = δ Σ_{λ°∈Λ°} e^{−π|λ°|²/2}`, an upper frame bound (Condition A).
pub fn condition_a_upper(l: &Lattice, p: &TruncationPolicy) -> Result<f64> {
    let adj = l.adjoint_lattice()?;
    let delta = l.density();
    let scaled = TruncationPolicy { tol: p.tol / delta, ..*p };
    Ok(delta * theta_translate(&adj, &PhasePoint::origin(l.signal_dim()), GaussWidth::new(0.5)?, &scaled)?)
}

/// Energy lower bound from a theta table of the lattice itself.
pub fn energy_lower_bound_series(table: &ThetaSeries) -> SeriesSum {
    theta_series_sum(table, GaussWidth::default(), 1.0)
}

/// `B̃` from a theta table of the adjoint lattice and the density of the
/// lattice itself.
pub fn condition_a_upper_series(adjoint_table: &ThetaSeries, density: f64) -> SeriesSum {
    let s = theta_series_sum(adjoint_table, GaussWidth::default(), 0.5);
    SeriesSum {
        value: density * s.value,
        tail_bound: density * s.tail_bound,
    }
}

/// Extreme eigenvalues of the Gram matrix of the adjoint system within
/// `radius`, scaled by the density. Requires density > 1, where the adjoint
/// system is a Riesz sequence.
///
/// The estimates lie inside the true `[A, B]` and tighten monotonically as
/// the radius grows. `error_bound` reflects eigen-solver rounding only.
pub fn gram_spectral_bounds(l: &Lattice, radius: f64) -> Result<FrameBounds> {
    let delta = l.density();
    if delta <= 1.0 {
        return Err(Error::DualityPrecondition { density: delta });
    }
    let g = gram_matrix(&l.adjoint_lattice()?, radius)?;
    let (lo, hi) = g.extreme_eigenvalues()?;
    let err = delta * 1e-13 * g.len() as f64;
    FrameBounds::new(delta * lo, delta * hi, Method::GramSpectral, err)
}

/// Relaxed constants: `A = min_z Σ e^{−πα|λ−z|²}`, `B = max_z` of the same
/// sum. These approximate the frame bounds with no guaranteed side.
pub fn relaxed_bounds(l: &Lattice, w: GaussWidth, grid_n: usize, p: &TruncationPolicy) -> Result<FrameBounds> {
    require_planar(l, "relaxed bounds are computed in phase-space dimension 2")?;
    let lo = find_extremum(l, w, ExtremumKind::Min, ThetaForm::Translate, grid_n, p)?;
    let hi = find_extremum(l, w, ExtremumKind::Max, ThetaForm::Translate, grid_n, p)?;
    FrameBounds::new(lo.value, hi.value, Method::Relaxed, p.tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::lattice_from_tau;

    fn square(density: f64) -> Lattice {
        lattice_from_tau(0.0, 1.0, density).unwrap()
    }

    #[test]
    fn square_density_two() {
        let p = TruncationPolicy::default();
        let f = janssen_frame_bounds(&square(2.0), &p, 32).unwrap();
        assert_eq!(f.method, Method::JanssenExact);
        // 2θ₃(e^{−π})² and 2θ₄(e^{−π})²; the ratio is exactly √2.
        assert!((f.b - 2.360_681_198_032_192_4).abs() < 1e-10, "{f:?}");
        assert!((f.a - 1.669_253_683_348_146_4).abs() < 1e-10, "{f:?}");
        assert!((f.ratio - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn heuristic_label_and_not_a_frame() {
        let p = TruncationPolicy::default();
        let f = janssen_frame_bounds(&square(3.0), &p, 24).unwrap();
        assert_eq!(f.method, Method::JanssenHeuristic);
        assert!(matches!(janssen_frame_bounds(&square(1.0), &p, 24), Err(Error::NotAFrame(_))));
        assert!(matches!(
            gram_spectral_bounds(&square(0.8), 3.0),
            Err(Error::DualityPrecondition { .. })
        ));
    }

    #[test]
    fn condition_a_and_energy_on_squares() {
        let p = TruncationPolicy::default();
        let s2 = square(2.0);
        assert!((condition_a_upper(&s2, &p).unwrap() - 2.360_681_198_032_192_5).abs() < 1e-11);
        assert!((energy_lower_bound(&s2, &p).unwrap() - 2.014_967_440_690_169_4).abs() < 1e-11);
        let z2 = square(1.0);
        assert!((condition_a_upper(&z2, &p).unwrap() - 2.014_967_440_690_169_4).abs() < 1e-11);
        assert!((energy_lower_bound(&z2, &p).unwrap() - 1.180_340_599_016_096_2).abs() < 1e-11);
    }

    #[test]
    fn relaxed_on_z2() {
        let p = TruncationPolicy::default();
        let r = relaxed_bounds(&square(1.0), GaussWidth::default(), 32, &p).unwrap();
        assert!((r.b - 1.180_340_599_016_096_2).abs() < 1e-11);
        assert!((r.a - 0.834_626_841_674_073_2).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn gram_spectral_inside_janssen() {
        let p = TruncationPolicy::default();
        let l = square(2.0);
        let j = janssen_frame_bounds(&l, &p, 32).unwrap();
        let g3 = gram_spectral_bounds(&l, 3.0).unwrap();
        let g5 = gram_spectral_bounds(&l, 5.0).unwrap();
        assert!(g5.a <= g3.a + 1e-12 && g5.b >= g3.b - 1e-12);
        assert!(g5.a >= j.a - 1e-9 && g5.b <= j.b + 1e-9, "{g3:?} {g5:?} {j:?}");
        // At even density the upper Janssen bound is the Condition-A bound.
        assert!((j.b - condition_a_upper(&l, &p).unwrap()).abs() < 1e-11);
        // Extremal vectors are plane-wave-like, so sections converge slowly:
        // about 1.9% at radius 5 and below 1% from radius 8.
        assert!((g5.a - j.a).abs() / j.a < 0.02 && (g5.b - j.b).abs() / j.b < 0.02);
        let g8 = gram_spectral_bounds(&l, 8.0).unwrap();
        assert!((g8.a - j.a).abs() / j.a < 0.01 && (g8.b - j.b).abs() / j.b < 0.01, "{g8:?}");
    }
}
