//! Functions sampled on a uniform periodic grid, time-frequency shifts by FFT,
//! and quadrature short-time Fourier transforms.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::PhasePoint;
use crate::error::{Error, Result};
use crate::sum::ComplexNeumaier;

/// Samples at the edges must fall below this fraction of the peak modulus.
pub const EDGE_DECAY: f64 = 1e-14;
/// Number of samples at each end inspected by the decay check.
const EDGE_SAMPLES: usize = 4;

/// Uniform grid `t_j = (j − n/2)·h`, `j = 0…n−1`, treated as periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n: usize,
    pub h: f64,
}

impl Grid1D {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::Domain(format!("grid size must be even and at least 8, got {n}")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("grid step must be positive, got {h}")));
        }
        Ok(Self { n, h })
    }

    /// Step 1/32 on `[−8, 8)`.
    pub fn standard() -> Self {
        Self { n: 512, h: 1.0 / 32.0 }
    }

    /// Step 1/32 on `[−16, 16)`.
    pub fn wide() -> Self {
        Self { n: 1024, h: 1.0 / 32.0 }
    }

    pub fn t(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    /// Half-width of the grid: samples lie in `[−extent, extent)`.
    pub fn extent(&self) -> f64 {
        (self.n / 2) as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.t(j))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid1D,
    samples: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::Dimension(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            grid,
            samples: grid.times().map(f).collect(),
        }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.n],
        }
    }

    /// `φ(t) = 2^{1/4} e^{−πt²}`.
    pub fn gaussian(grid: Grid1D) -> Self {
        Self::from_fn(grid, |t| Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0))
    }

    /// First Hermite function `2^{5/4} √π t e^{−πt²}`, unit norm and orthogonal to `φ`.
    pub fn hermite1(grid: Grid1D) -> Self {
        let c = 2f64.powf(1.25) * PI.sqrt();
        Self::from_fn(grid, |t| Complex64::new(c * t * (-PI * t * t).exp(), 0.0))
    }

    /// `π(z)φ(t) = e^{2πiωt} φ(t − x)` in closed form.
    pub fn shifted_gaussian(grid: Grid1D, z: &PhasePoint) -> Self {
        let (x, w) = (z.x[0], z.omega[0]);
        Self::from_fn(grid, |t| {
            Complex64::from_polar(2f64.powf(0.25) * (-PI * (t - x) * (t - x)).exp(), 2.0 * PI * w * t)
        })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Dimension("sampled functions live on different grids".into()));
        }
        Ok(())
    }

    /// `⟨f, g⟩ = ∫ f conj(g)` by the periodic trapezoidal rule.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        Ok(inner_slices(&self.samples, &other.samples, self.grid.h))
    }

    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.h).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among the outermost samples, relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        let n = self.samples.len();
        let edge = self.samples[..EDGE_SAMPLES]
            .iter()
            .chain(&self.samples[n - EDGE_SAMPLES..])
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let peak = self.max_abs();
        if peak == 0.0 {
            0.0
        } else {
            edge / peak
        }
    }

    /// Errors unless the function has decayed below `EDGE_DECAY` at both ends.
    pub fn check_decay(&self, what: &str) -> Result<()> {
        self.check_decay_to(what, EDGE_DECAY)
    }

    /// Errors unless the edge samples are at most `threshold` of the peak.
    pub fn check_decay_to(&self, what: &str, threshold: f64) -> Result<()> {
        let r = self.edge_ratio();
        if r > threshold {
            return Err(Error::DomainTruncation(format!(
                "{what}: edge samples at {r:e} of the peak (need ≤ {threshold:e}); enlarge the grid"
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|a| a * c).collect(),
        }
    }

    /// `‖f − g‖₂`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let s: f64 = self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.h).sqrt())
    }
}

pub(crate) fn inner_slices(f: &[Complex64], g: &[Complex64], h: f64) -> Complex64 {
    let mut acc = ComplexNeumaier::new();
    for (a, b) in f.iter().zip(g) {
        acc.add(a * b.conj());
    }
    acc.value() * h
}

/// Time-frequency shifts on a fixed grid: translation by FFT phase ramp,
/// modulation by pointwise multiplication.
#[derive(Clone)]
pub struct TfShifter {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    freqs: Vec<f64>,
}

impl std::fmt::Debug for TfShifter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TfShifter").field("grid", &self.grid).finish()
    }
}

impl TfShifter {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n;
        let span = n as f64 * grid.h;
        let freqs = (0..n)
            .map(|k| if k < n / 2 { k as f64 / span } else { (k as f64 - n as f64) / span })
            .collect();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            freqs,
        }
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// `T_x f(t) = f(t − x)`, band-limited interpolation on the periodic grid.
    pub fn translate(&self, f: &[Complex64], x: f64) -> Vec<Complex64> {
        let n = self.grid.n;
        let mut buf = f.to_vec();
        if x == 0.0 {
            return buf;
        }
        // A translation by whole grid steps is an exact rotation.
        let steps = x / self.grid.h;
        if (steps - steps.round()).abs() < 1e-12 {
            let s = steps.round() as i64;
            let r = s.rem_euclid(n as i64) as usize;
            buf.rotate_right(r);
            return buf;
        }
        self.forward.process(&mut buf);
        for (c, &k) in buf.iter_mut().zip(&self.freqs) {
            *c *= Complex64::from_polar(1.0 / n as f64, -2.0 * PI * k * x);
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// `M_ω f(t) = e^{2πiωt} f(t)`.
    pub fn modulate_in_place(&self, f: &mut [Complex64], omega: f64) {
        if omega == 0.0 {
            return;
        }
        for (j, c) in f.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, 2.0 * PI * omega * self.grid.t(j));
        }
    }

    /// `π(x, ω) f = M_ω T_x f`.
    pub fn tf_shift(&self, f: &[Complex64], x: f64, omega: f64) -> Vec<Complex64> {
        let mut v = self.translate(f, x);
        self.modulate_in_place(&mut v, omega);
        v
    }

    /// `V_g f(z)` by quadrature.
    pub fn stft(&self, f: &SampledFunction, g: &SampledFunction, z: &PhasePoint) -> Result<Complex64> {
        if f.grid != self.grid || g.grid != self.grid {
            return Err(Error::Dimension("STFT arguments must share the shifter grid".into()));
        }
        if z.signal_dim() != 1 {
            return Err(Error::UnsupportedDimension {
                got: 2 * z.signal_dim(),
                what: "sampled STFT is one-dimensional",
            });
        }
        let shifted = SampledFunction {
            grid: self.grid,
            samples: self.tf_shift(&g.samples, z.x[0], z.omega[0]),
        };
        shifted.check_decay("shifted window")?;
        Ok(inner_slices(&f.samples, &shifted.samples, self.grid.h))
    }
}

/// `V_g f(z) = ∫ f(t) conj(g(t − x)) e^{−2πitω} dt` by the trapezoidal rule.
///
/// For Gaussian-type integrands on the standard grid (step 1/32, `|t| ≤ 8`)
/// both the aliasing and the truncation error are far below 1e-12.
pub fn stft_quadrature(f: &SampledFunction, g: &SampledFunction, z: &PhasePoint) -> Result<Complex64> {
    f.check_decay("f")?;
    g.check_decay("g")?;
    TfShifter::new(f.grid).stft(f, g, z)
}
