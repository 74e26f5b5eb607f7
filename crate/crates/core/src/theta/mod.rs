//! Rigorously truncated Gaussian lattice sums.
//!
//! Two phase-space theta functions are evaluated:
//!
//! * `F_Λ(z) = Σ_λ e^{−πα|λ+z|²}` (translate form), Λ-periodic in `z`;
//! * `F̂_Λ(z) = Re Σ_λ e^{−π|λ|²} e^{2πiσ(λ,z)}` (dual-phase form), periodic
//!   under the adjoint lattice and maximal at `z = 0`.
//!
//! # Truncation
//!
//! Let `ρ` bound the covering radius. Every lattice point within distance `r`
//! of any center owns a fundamental cell inside the ball of radius `r + ρ`, so
//! the number of such points satisfies `N(r) ≤ V_n (r+ρ)^n / covol`. For a
//! decreasing radial weight `f`, summation by parts gives
//!
//! ```text
//! Σ_{|λ−c|>R} f(|λ−c|) ≤ ∫_R^∞ N(r) (−f′(r)) dr,
//! ```
//!
//! which is evaluated by Simpson quadrature with a safety factor. The bound
//! does not depend on the center, so it covers translated sums as well.

mod eval;
mod extremum;
mod series;

pub use eval::{symplectic_psf_check, theta_dual_phase, theta_dual_phase_width, theta_translate, ThetaEvaluator};
pub use extremum::{find_extremum, sample_cell, ExtremumCertificate, ExtremumKind, ExtremumResult, ThetaForm};
pub use series::{theta_series_sum, SeriesSum};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, DEFAULT_POINT_CAP};

/// Gaussian width `α` in `e^{−πα|·|²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussWidth {
    alpha: f64,
}

impl GaussWidth {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("Gaussian width must be positive, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for GaussWidth {
    fn default() -> Self {
        Self { alpha: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Absolute bound on the discarded tail.
    pub tol: f64,
    pub max_radius: f64,
    pub max_points: usize,
}

impl TruncationPolicy {
    pub fn new(tol: f64, max_radius: f64, max_points: usize) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Domain(format!("truncation tolerance must lie in (0, 1), got {tol}")));
        }
        if !(max_radius > 0.0) || max_points == 0 {
            return Err(Error::Domain("truncation caps must be positive".into()));
        }
        Ok(Self {
            tol,
            max_radius,
            max_points,
        })
    }

    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(tol, Self::default().max_radius, Self::default().max_points)
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_radius: 50.0,
            max_points: DEFAULT_POINT_CAP,
        }
    }
}

/// Safety factor applied to the quadrature of the tail integral.
const TAIL_SAFETY: f64 = 1.5;
const SIMPSON_INTERVALS: usize = 2000;

fn ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma_half_integer(half + 1.0)
}

/// `Γ(s)` for `s` a positive integer or half-integer.
fn gamma_half_integer(s: f64) -> f64 {
    let mut v = if s.fract() == 0.0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut t = if s.fract() == 0.0 { 1.0 } else { 0.5 };
    while t < s - 1e-9 {
        v *= t;
        t += 1.0;
    }
    v
}

/// Upper bound on `Σ_{|λ−c|>R} e^{−πα|λ−c|²}` for an `n`-dimensional lattice
/// of covolume `covol` whose covering radius is at most `rho`.
pub fn tail_bound(alpha: f64, n: usize, covol: f64, rho: f64, radius: f64) -> f64 {
    let pa = std::f64::consts::PI * alpha;
    let vn = ball_volume(n) / covol;
    // log of the integrand N(r)·2παr·e^{−παr²}
    let log_g = |r: f64| {
        if r <= 0.0 {
            return f64::NEG_INFINITY;
        }
        vn.ln() + n as f64 * (r + rho).ln() + (2.0 * pa * r).ln() - pa * r * r
    };
    let r0 = radius.max(0.0);
    // The integrand is log-concave beyond its mode; 40 e-foldings past both
    // the mode and R leave a negligible remainder.
    let mode = ((n as f64 + 1.0) / (2.0 * pa)).sqrt() + rho;
    let end = r0.max(mode) + (80.0 / pa).sqrt() + 1.0;
    let h = (end - r0) / SIMPSON_INTERVALS as f64;
    let mut acc = 0.0;
    for k in 0..=SIMPSON_INTERVALS {
        let w = if k == 0 || k == SIMPSON_INTERVALS {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * log_g(r0 + k as f64 * h).exp();
    }
    // Remainder beyond `end`: bounded by a geometric-type envelope.
    let rem = log_g(end).exp() / (2.0 * pa * end - n as f64 / (end + rho) - 1.0 / end).max(1.0);
    TAIL_SAFETY * (acc * h / 3.0 + rem)
}

/// Smallest radius `R` (to bisection precision, rounded up) with
/// `tail_bound(R) ≤ tol`.
pub fn truncation_radius_for(alpha: f64, tol: f64, n: usize, covol: f64, rho: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while tail_bound(alpha, n, covol, rho, hi) > tol {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return f64::INFINITY;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail_bound(alpha, n, covol, rho, mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    hi
}

/// Radius beyond which `Σ e^{−πα|λ|²}` over `L` (or any translate) is below `tol`.
/// Non-increasing in `tol` and in `α`.
pub fn truncation_radius(w: GaussWidth, tol: f64, l: &Lattice) -> f64 {
    truncation_radius_for(w.alpha(), tol, l.dim(), l.covolume(), l.covering_radius_bound())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Lattice {
        Lattice::from_row_major(2, &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_half_integer(3.0) - 2.0).abs() < 1e-15);
        assert!((gamma_half_integer(2.5) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((ball_volume(2) - std::f64::consts::PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn z2_radius_is_small_enough_and_safe() {
        let r = truncation_radius(GaussWidth::default(), 1e-12, &z2());
        assert!(r <= 4.0, "R = {r}");
        // Actual tail beyond R, summed directly.
        let mut tail = 0.0;
        for m in -40i64..=40 {
            for n in -40i64..=40 {
                let q = (m * m + n * n) as f64;
                if q.sqrt() > r {
                    tail += (-std::f64::consts::PI * q).exp();
                }
            }
        }
        assert!(tail <= 1e-12);
    }

    #[test]
    fn monotone_in_tol_and_alpha() {
        let l = z2();
        let r1 = truncation_radius(GaussWidth::new(1.0).unwrap(), 1e-12, &l);
        let r2 = truncation_radius(GaussWidth::new(2.0).unwrap(), 1e-12, &l);
        let r3 = truncation_radius(GaussWidth::new(1.0).unwrap(), 1e-6, &l);
        assert!(r2 < r1 && r3 < r1);
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(1.5, 10.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-9, 0.0, 10).is_err());
        assert!(GaussWidth::new(0.0).is_err());
    }
}
