//! Numerical checks of the fundamental identity of Gabor analysis and of
//! Moyal's identity for the cross-Wigner distribution.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Grid1D, PhasePoint, SampledFunction, TfShifter};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::sum::{ComplexNeumaier, Neumaier};

/// Distance kept between the summation radius and the grid edge, so that
/// shifted Gaussian-type windows still decay below the edge threshold.
const EDGE_CLEARANCE: f64 = 3.5;
const MAX_FIGA_RADIUS: f64 = 6.5;

/// Largest summation radius for which shifted windows fit on `grid`.
pub fn figa_default_radius(grid: Grid1D) -> f64 {
    (grid.extent() - EDGE_CLEARANCE).min(MAX_FIGA_RADIUS)
}

/// `|Σ_λ V_{g1}f1(λ) conj(V_{g2}f2(λ)) − covol⁻¹ Σ_{λ°} V_{g1}g2(λ°) conj(V_{f1}f2(λ°))|`
/// with both sums over points within `radius`.
pub fn figa_residual(
    f1: &SampledFunction,
    f2: &SampledFunction,
    g1: &SampledFunction,
    g2: &SampledFunction,
    l: &Lattice,
    radius: f64,
) -> Result<f64> {
    if l.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            got: l.dim(),
            what: "the sampled identity check is one-dimensional",
        });
    }
    for (f, name) in [(f1, "f1"), (f2, "f2"), (g1, "g1"), (g2, "g2")] {
        f.check_decay(name)?;
    }
    let s = TfShifter::new(f1.grid());
    let pair_sum = |lat: &Lattice, a: (&SampledFunction, &SampledFunction), b: (&SampledFunction, &SampledFunction)| -> Result<Complex64> {
        let mut acc = ComplexNeumaier::new();
        for p in lat.enumerate_points(radius)? {
            let z = PhasePoint::new(vec![p[0]], vec![p[1]]);
            acc.add(s.stft(a.0, a.1, &z)? * s.stft(b.0, b.1, &z)?.conj());
        }
        Ok(acc.value())
    };
    let lhs = pair_sum(l, (f1, g1), (f2, g2))?;
    let rhs = pair_sum(&l.adjoint_lattice()?, (g2, g1), (f2, f1))? * l.density();
    Ok((lhs - rhs).norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoyalReport {
    /// `⟨W(f1,g1), W(f2,g2)⟩` by quadrature.
    pub wigner_inner: Complex64,
    /// `⟨f1,f2⟩ conj(⟨g1,g2⟩)`.
    pub expected: Complex64,
    pub residual: f64,
    /// `| ‖W(f1,φ)‖ − ‖f1‖ |`.
    pub norm_residual: f64,
}

/// Cross-Wigner distribution `W(f,g)(x,ω) = ∫ f(x+t/2) conj(g(x−t/2)) e^{−2πitω} dt`
/// at every grid time `x_j`, on the frequency grid `ω_m = m/(2hn)`.
///
/// With `t = 2kh` the arguments `x_j ± kh` are grid points, so no
/// interpolation is needed.
fn wigner_rows(f: &SampledFunction, g: &SampledFunction, mut row: impl FnMut(usize, &[Complex64])) {
    let grid = f.grid();
    let n = grid.n;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let (fs, gs) = (f.samples(), g.samples());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for (slot, k) in buf.iter_mut().zip(0..n as i64) {
            // FFT index k ↔ lag k for k < n/2, k − n otherwise.
            let lag = if k < n as i64 / 2 { k } else { k - n as i64 };
            let (a, b) = (j as i64 + lag, j as i64 - lag);
            *slot = if (0..n as i64).contains(&a) && (0..n as i64).contains(&b) {
                fs[a as usize] * gs[b as usize].conj() * (2.0 * grid.h)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        fft.process(&mut buf);
        row(j, &buf);
    }
}

/// Moyal's identity `⟨W(f1,g1), W(f2,g2)⟩ = ⟨f1,f2⟩ conj(⟨g1,g2⟩)` by
/// quadrature, together with `‖W(f1,φ)‖ = ‖f1‖`.
pub fn moyal_wigner_check(
    f1: &SampledFunction,
    g1: &SampledFunction,
    f2: &SampledFunction,
    g2: &SampledFunction,
) -> Result<MoyalReport> {
    for (f, name) in [(f1, "f1"), (f2, "f2"), (g1, "g1"), (g2, "g2")] {
        f.check_decay(name)?;
    }
    let grid = f1.grid();
    let cell = grid.h / (2.0 * grid.h * grid.n as f64);

    let mut w1_rows = Vec::with_capacity(grid.n);
    wigner_rows(f1, g1, |_, r| w1_rows.push(r.to_vec()));
    let mut acc = ComplexNeumaier::new();
    wigner_rows(f2, g2, |j, r| {
        for (a, b) in w1_rows[j].iter().zip(r) {
            acc.add(a * b.conj());
        }
    });
    let wigner_inner = acc.value() * cell;
    let expected = f1.inner(f2)? * g1.inner(g2)?.conj();

    let phi = SampledFunction::gaussian(grid);
    let mut n2 = Neumaier::new();
    wigner_rows(f1, &phi, |_, r| {
        for a in r {
            n2.add(a.norm_sqr());
        }
    });
    let wnorm = (n2.value() * cell).sqrt();
    Ok(MoyalReport {
        wigner_inner,
        expected,
        residual: (wigner_inner - expected).norm(),
        norm_residual: (wnorm - f1.norm()).abs(),
    })
}
