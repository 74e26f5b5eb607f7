//! Gaussian time-frequency analysis.
//!
//! Conventions, fixed once:
//!
//! * `π(z) = M_ω T_x`, with `T_x f(t) = f(t − x)` and `M_ω f(t) = e^{2πiω·t} f(t)`;
//! * `V_g f(z) = ⟨f, π(z)g⟩ = ∫ f(t) conj(g(t − x)) e^{−2πit·ω} dt`;
//! * `φ(t) = 2^{d/4} e^{−π|t|²}`, so `V_φφ(z) = e^{−πix·ω} e^{−π|z|²/2}`.
//!
//! Every phase-bearing closed form in this module is tested against direct
//! quadrature of the defining integral.

mod ambiguity;
mod bounds;
mod dual;
mod identities;
mod sampled;
mod tensor;

pub use ambiguity::{ambiguity_gauss, gram_entry, gram_matrix, GramMatrix};
pub use bounds::{
    condition_a_upper, condition_a_upper_series, energy_lower_bound, energy_lower_bound_series,
    gram_spectral_bounds, janssen_frame_bounds, relaxed_bounds,
};
pub use dual::{biorthogonality_error, dual_window, dual_window_on, DualWindow, FrameOperator};
pub use identities::{figa_default_radius, figa_residual, moyal_wigner_check, MoyalReport};
pub use sampled::{stft_quadrature, Grid1D, SampledFunction, TfShifter};
pub use tensor::{
    tensor_frame_check, tensor_gram_classification, tensor_lattice, GramClassification, TensorFrameCheck, TensorLattice,
    CLASSIFICATION_RADII,
};

use crate::error::{Error, Result};

/// A point `z = (x, ω)` of phase space `R^{2d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub omega: Vec<f64>,
}

impl PhasePoint {
    /// # Panics
    /// If `x` and `omega` differ in length.
    pub fn new(x: Vec<f64>, omega: Vec<f64>) -> Self {
        assert_eq!(x.len(), omega.len(), "time and frequency parts must have equal length");
        Self { x, omega }
    }

    /// Splits a phase-space vector `(x₁…x_d, ω₁…ω_d)`.
    pub fn from_slice(z: &[f64]) -> Result<Self> {
        if z.len() % 2 != 0 || z.is_empty() {
            return Err(Error::Dimension(format!("phase-space vector has odd length {}", z.len())));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("phase point has non-finite entries".into()));
        }
        let d = z.len() / 2;
        Ok(Self::new(z[..d].to_vec(), z[d..].to_vec()))
    }

    pub fn origin(d: usize) -> Self {
        Self::new(vec![0.0; d], vec![0.0; d])
    }

    pub fn signal_dim(&self) -> usize {
        self.x.len()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.x.iter().chain(&self.omega).copied().collect()
    }

    pub fn norm2(&self) -> f64 {
        self.x.iter().chain(&self.omega).map(|v| v * v).sum()
    }
}

/// The normalized standard Gaussian `φ(t) = 2^{d/4} e^{−π|t|²}` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianWindow {
    pub d: usize,
}

impl GaussianWindow {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("window dimension must be positive".into()));
        }
        Ok(Self { d })
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        let r2: f64 = t.iter().map(|v| v * v).sum();
        2f64.powf(self.d as f64 / 4.0) * (-std::f64::consts::PI * r2).exp()
    }
}

/// How a pair of frame-bound values was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Janssen bounds in their proven regime (d = 1, even integer density).
    JanssenExact,
    /// The same formula outside that regime.
    JanssenHeuristic,
    /// Extreme eigenvalues of a truncated Gram matrix of the adjoint system.
    GramSpectral,
    /// Min and max of a Gaussian energy over phase space.
    Relaxed,
    /// Condition-A upper bound.
    ConditionAUpper,
    /// Gaussian-energy lower estimate of the upper bound.
    EnergyLower,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::JanssenExact => "janssen-exact",
            Self::JanssenHeuristic => "janssen-heuristic",
            Self::GramSpectral => "gram-spectral",
            Self::Relaxed => "relaxed",
            Self::ConditionAUpper => "condition-A-upper",
            Self::EnergyLower => "energy-lower",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Frame bounds `A ≤ B` with provenance. `error_bound` bounds the absolute
/// error of each of `A` and `B`; the ratio error follows as
/// `(ε·A + ε·B)/A²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub a: f64,
    pub b: f64,
    pub ratio: f64,
    pub method: Method,
    pub error_bound: f64,
}

impl FrameBounds {
    pub fn new(a: f64, b: f64, method: Method, error_bound: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::NotAFrame(format!("lower bound {a:e} is not positive ({method})")));
        }
        if !(b >= a - error_bound.max(1e-12 * b.abs())) || !b.is_finite() {
            return Err(Error::InternalConsistency(format!("bounds out of order: A = {a}, B = {b} ({method})")));
        }
        Ok(Self {
            a,
            b,
            ratio: b / a,
            method,
            error_bound: error_bound.max(0.0),
        })
    }

    /// Propagated error bound of `B/A`.
    pub fn ratio_error_bound(&self) -> f64 {
        self.error_bound * (self.a + self.b) / (self.a * self.a)
    }
}
