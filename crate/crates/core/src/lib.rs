//! Gaussian Gabor frame bounds over arbitrary phase-space lattices.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] holds bases, duals, symplectic adjoints, Fincke–Pohst point
//!   enumeration, 2-D deep holes, the named-lattice catalog and theta-series
//!   tables.
//! * [`theta`] evaluates rigorously truncated Gaussian lattice sums `F_Λ(z)`
//!   and `F̂_Λ(z)`, locates their extrema and checks the symplectic Poisson
//!   summation formula.
//! * [`gabor`] contains the time-frequency side: ambiguity functions,
//!   quadrature STFTs, Gram matrices, exact (Janssen) and estimated frame
//!   bounds, dual windows and the FIGA / Moyal identity checks.
//! * [`optimizer`] searches lattice shapes at fixed density for the packing,
//!   covering and paving objectives and compares high-dimensional lattices.
//! * [`ofdm`] simulates lattice-OFDM transmission over a delay–Doppler channel.
//!
//! Phase-space vectors are always ordered `(x₁…x_d, ω₁…ω_d)`.

pub mod error;
pub mod export;
pub mod gabor;
pub mod lattice;
pub mod ofdm;
pub mod optim;
pub mod optimizer;
pub mod sum;
pub mod theta;

pub use error::{Error, Result};
pub use gabor::{FrameBounds, Method, PhasePoint};
pub use lattice::{Lattice, ThetaSeries};
pub use theta::{GaussWidth, TruncationPolicy};
