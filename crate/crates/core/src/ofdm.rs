//! Lattice-OFDM with Gaussian pulses over a delay–Doppler tap channel.
//!
//! Symbols `c_μ` ride on the pulses `g_μ = π(μ)φ` for `μ = k b₁ + l b₂` in a
//! transmission lattice `Λ_t` of density below 1, where the pulses form a
//! Riesz sequence. The receiver uses the frame lattice `Λ_f = Λ_t°`, its
//! canonical dual window `γ` and the filters `f_ν = δ_f π(ν)γ`. Since
//! `Λ_f° = Λ_t`, biorthogonality gives `⟨g_μ, f_ν⟩ = δ_{μν}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabor::{dual_window_on, DualWindow, Grid1D, PhasePoint, SampledFunction, TfShifter};
use crate::lattice::{lattice_from_tau, Lattice, LatticeDescriptor};
use crate::sum::Neumaier;
use crate::theta::TruncationPolicy;

/// Transmission density of the default configurations.
pub const DEFAULT_TRANSMISSION_DENSITY: f64 = 0.5;
pub const DEFAULT_SYMBOL_EXTENT: usize = 3;
/// CG tolerance of the receiver's dual window.
pub const DUAL_CG_TOL: f64 = 1e-10;
/// Upper limit on `K`; the interference matrix has `(2K−1)²(2K+1)²` entries.
pub const MAX_SYMBOL_EXTENT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tap {
    pub delay: f64,
    pub doppler: f64,
    #[serde(default = "one")]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

fn one() -> f64 {
    1.0
}

impl Tap {
    pub fn new(delay: f64, doppler: f64, gain: Complex64) -> Self {
        Self {
            delay,
            doppler,
            re: gain.re,
            im: gain.im,
        }
    }

    pub fn gain(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `H s = Σ gain · M_doppler T_delay s`, gains normalized to `Σ|gain|² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelModel {
    taps: Vec<Tap>,
}

impl ChannelModel {
    pub fn new(taps: Vec<Tap>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::Domain("a channel needs at least one tap".into()));
        }
        if taps
            .iter()
            .any(|t| !(t.delay.is_finite() && t.doppler.is_finite() && t.re.is_finite() && t.im.is_finite()))
        {
            return Err(Error::Domain("channel taps must be finite".into()));
        }
        let power: f64 = taps.iter().map(|t| t.gain().norm_sqr()).sum();
        if !(power > 0.0) {
            return Err(Error::Domain("channel gains are all zero".into()));
        }
        let s = 1.0 / power.sqrt();
        Ok(Self {
            taps: taps.into_iter().map(|t| Tap::new(t.delay, t.doppler, t.gain() * s)).collect(),
        })
    }

    pub fn identity() -> Self {
        Self {
            taps: vec![Tap::new(0.0, 0.0, Complex64::new(1.0, 0.0))],
        }
    }

    /// Taps on `{−n…n}·step` in delay and Doppler with gains
    /// `exp(−(τ² + ν²)/(4σ²))`, symmetric in time and frequency.
    pub fn gaussian_spread(sigma: f64, step: f64, n: usize) -> Result<Self> {
        if !(sigma > 0.0 && step > 0.0) {
            return Err(Error::Domain(format!("sigma and step must be positive, got {sigma}, {step}")));
        }
        let r = n as i64;
        let mut taps = Vec::with_capacity((2 * n + 1).pow(2));
        for i in -r..=r {
            for j in -r..=r {
                let (tau, nu) = (i as f64 * step, j as f64 * step);
                let g = (-(tau * tau + nu * nu) / (4.0 * sigma * sigma)).exp();
                taps.push(Tap::new(tau, nu, Complex64::new(g, 0.0)));
            }
        }
        Self::new(taps)
    }

    /// The 5 × 5 tap channel with `σ = 0.1` and step `0.05`.
    pub fn default_spread() -> Self {
        Self::gaussian_spread(0.1, 0.05, 2).expect("constant parameters are valid")
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    /// `(max |delay|, max |doppler|)`.
    pub fn spread(&self) -> (f64, f64) {
        self.taps
            .iter()
            .fold((0.0, 0.0), |(d, n), t| (f64::max(d, t.delay.abs()), f64::max(n, t.doppler.abs())))
    }

    /// Same channel with every gain multiplied by `c` (renormalized).
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.taps.iter().map(|t| Tap::new(t.delay, t.doppler, t.gain() * c)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OFDMConfig {
    lattice: Lattice,
    k: usize,
    grid: Grid1D,
}

impl OFDMConfig {
    pub fn new(lattice: Lattice, k: usize, grid: Grid1D) -> Result<Self> {
        if lattice.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                got: lattice.dim(),
                what: "OFDM transmission lattices live in phase-space dimension 2",
            });
        }
        if !(lattice.density() < 1.0) {
            return Err(Error::Domain(format!(
                "transmission lattice density must be below 1, got {}",
                lattice.density()
            )));
        }
        if k < 2 {
            return Err(Error::Domain(format!("symbol extent K must be at least 2, got {k}")));
        }
        if k > MAX_SYMBOL_EXTENT {
            return Err(Error::Resource {
                what: "symbol extent K",
                cap: MAX_SYMBOL_EXTENT,
                needed_radius: k as f64,
            });
        }
        Ok(Self { lattice, k, grid })
    }

    /// Shape `τ = x + iy` at the default transmission density, `K = 3`, wide grid.
    pub fn from_shape(x: f64, y: f64) -> Result<Self> {
        Self::new(
            lattice_from_tau(x, y, DEFAULT_TRANSMISSION_DENSITY)?,
            DEFAULT_SYMBOL_EXTENT,
            Grid1D::wide(),
        )
    }

    pub fn square() -> Result<Self> {
        Self::from_shape(0.0, 1.0)
    }

    pub fn hexagonal() -> Result<Self> {
        Self::from_shape(0.5, 3f64.sqrt() / 2.0)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn symbol_extent(&self) -> usize {
        self.k
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// The adjoint of the transmission lattice, a frame lattice of density
    /// `1/δ_t`.
    pub fn frame_lattice(&self) -> Result<Lattice> {
        self.lattice.adjoint_lattice()
    }

    /// All `(k, l)` with `|k|, |l| ≤ K`, ordered by `k` then `l`.
    pub fn indices(&self) -> Vec<(i64, i64)> {
        square_indices(self.k as i64)
    }

    /// Interior indices `|k|, |l| ≤ K − 1`, where interference is measured.
    pub fn interior_indices(&self) -> Vec<(i64, i64)> {
        square_indices(self.k as i64 - 1)
    }

    pub fn point(&self, (k, l): (i64, i64)) -> PhasePoint {
        let p = self.lattice.point(&[k, l]);
        PhasePoint::new(vec![p[0]], vec![p[1]])
    }

    /// The canonical dual window of the frame lattice on this grid.
    pub fn dual_window(&self, p: &TruncationPolicy) -> Result<DualWindow> {
        dual_window_on(&self.frame_lattice()?, self.grid, p, DUAL_CG_TOL)
    }
}

fn square_indices(k: i64) -> Vec<(i64, i64)> {
    (-k..=k).flat_map(|a| (-k..=k).map(move |b| (a, b))).collect()
}

/// `s = Σ c_{k,l} π(k b₁ + l b₂) φ`, with `data` ordered as
/// [`OFDMConfig::indices`].
pub fn synthesize(cfg: &OFDMConfig, data: &[Complex64]) -> Result<SampledFunction> {
    let idx = cfg.indices();
    if data.len() != idx.len() {
        return Err(Error::Dimension(format!(
            "expected {} symbols for K = {}, got {}",
            idx.len(),
            cfg.k,
            data.len()
        )));
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); cfg.grid.n];
    for (&c, &i) in data.iter().zip(&idx) {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let g = SampledFunction::shifted_gaussian(cfg.grid, &cfg.point(i));
        for (a, v) in acc.iter_mut().zip(g.samples()) {
            *a += c * v;
        }
    }
    let s = SampledFunction::new(cfg.grid, acc)?;
    s.check_decay("transmitted signal")?;
    Ok(s)
}

/// `r = Σ gain · M_ν T_τ s`.
pub fn apply_channel(ch: &ChannelModel, s: &SampledFunction) -> Result<SampledFunction> {
    let grid = s.grid();
    let (max_delay, _) = ch.spread();
    if max_delay >= grid.extent() {
        return Err(Error::Domain(format!(
            "channel delay {max_delay} exceeds the grid half-width {}",
            grid.extent()
        )));
    }
    let shifter = TfShifter::new(grid);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n];
    for t in ch.taps() {
        let v = shifter.tf_shift(s.samples(), t.delay, t.doppler);
        let g = t.gain();
        for (o, x) in out.iter_mut().zip(&v) {
            *o += g * x;
        }
    }
    SampledFunction::new(grid, out)
}

/// Receive filters `f_ν = δ_f π(ν)γ` for the given indices.
fn receive_filters(cfg: &OFDMConfig, gamma: &SampledFunction, idx: &[(i64, i64)]) -> Result<Vec<SampledFunction>> {
    if gamma.grid() != cfg.grid {
        return Err(Error::Domain("dual window and configuration use different grids".into()));
    }
    let shifter = TfShifter::new(cfg.grid);
    let delta_f = 1.0 / cfg.lattice.density();
    idx.iter()
        .map(|&i| {
            let z = cfg.point(i);
            let v = shifter.tf_shift(gamma.samples(), z.x[0], z.omega[0]);
            SampledFunction::new(cfg.grid, v.into_iter().map(|c| c * delta_f).collect())
        })
        .collect()
}

/// `d_ν = ⟨r, f_ν⟩` for every index of the configuration.
pub fn equalize(cfg: &OFDMConfig, r: &SampledFunction, dual: &SampledFunction) -> Result<Vec<Complex64>> {
    if r.grid() != cfg.grid {
        return Err(Error::Domain("received signal and configuration use different grids".into()));
    }
    receive_filters(cfg, dual, &cfg.indices())?
        .iter()
        .map(|f| r.inner(f))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceReport {
    /// Receiver indices (rows), the interior of the symbol range.
    pub receivers: Vec<(i64, i64)>,
    /// Transmitter indices (columns), the full symbol range.
    pub transmitters: Vec<(i64, i64)>,
    /// `⟨H g_μ, f_ν⟩` with `ν` by row and `μ` by column.
    pub matrix: DMatrix<Complex64>,
    pub diagonal_power: f64,
    pub offdiag_power: f64,
    pub sir_db: f64,
}

/// Interference report with the receiver's dual window computed on the fly.
pub fn interference_report(cfg: &OFDMConfig, ch: &ChannelModel, p: &TruncationPolicy) -> Result<InterferenceReport> {
    let dual = cfg.dual_window(p)?;
    interference_report_with(cfg, ch, &dual.gamma)
}

/// Interference report for a given dual window.
pub fn interference_report_with(
    cfg: &OFDMConfig,
    ch: &ChannelModel,
    gamma: &SampledFunction,
) -> Result<InterferenceReport> {
    let receivers = cfg.interior_indices();
    let transmitters = cfg.indices();
    let filters = receive_filters(cfg, gamma, &receivers)?;
    let columns: Vec<Vec<Complex64>> = transmitters
        .par_iter()
        .map(|&mu| {
            let g = SampledFunction::shifted_gaussian(cfg.grid, &cfg.point(mu));
            let hg = apply_channel(ch, &g)?;
            filters.iter().map(|f| hg.inner(f)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let matrix = DMatrix::from_fn(receivers.len(), transmitters.len(), |i, j| columns[j][i]);
    let mut diag = Neumaier::new();
    let mut off = Neumaier::new();
    for (i, nu) in receivers.iter().enumerate() {
        for (j, mu) in transmitters.iter().enumerate() {
            let p = matrix[(i, j)].norm_sqr();
            if nu == mu {
                diag.add(p);
            } else {
                off.add(p);
            }
        }
    }
    let (diagonal_power, offdiag_power) = (diag.value(), off.value());
    let sir_db = if offdiag_power > 0.0 {
        10.0 * (diagonal_power / offdiag_power).log10()
    } else {
        f64::INFINITY
    };
    Ok(InterferenceReport {
        receivers,
        transmitters,
        matrix,
        diagonal_power,
        offdiag_power,
        sir_db,
    })
}

/// OFDM scenario file: `{"lattice": {…}, "K": 3, "taps": [{"delay", "doppler", "re", "im"}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub lattice: LatticeDescriptor,
    #[serde(rename = "K")]
    pub k: usize,
    pub taps: Vec<Tap>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if s.lattice.basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("lattice basis has non-finite entries".into()));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    /// Configuration on the wide grid, and the normalized channel.
    pub fn build(&self) -> Result<(OFDMConfig, ChannelModel)> {
        let cfg = OFDMConfig::new(self.lattice.to_lattice()?, self.k, Grid1D::wide())?;
        Ok((cfg, ChannelModel::new(self.taps.clone())?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpsk(n: usize, seed: u64) -> Vec<Complex64> {
        // Small deterministic generator; the values only need to vary.
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = (s >> 33) as u32;
                Complex64::new(if b & 1 == 0 { 1.0 } else { -1.0 }, if b & 2 == 0 { 1.0 } else { -1.0 })
                    / 2f64.sqrt()
            })
            .collect()
    }

    #[test]
    fn channel_normalization_and_spread() {
        let ch = ChannelModel::default_spread();
        assert_eq!(ch.taps().len(), 25);
        let p: f64 = ch.taps().iter().map(|t| t.gain().norm_sqr()).sum();
        assert!((p - 1.0).abs() < 1e-14);
        assert_eq!(ch.spread(), (0.1, 0.1));
        assert!(ChannelModel::new(vec![]).is_err());
    }

    #[test]
    fn config_validation() {
        let dense = lattice_from_tau(0.0, 1.0, 2.0).unwrap();
        assert!(OFDMConfig::new(dense, 3, Grid1D::wide()).is_err());
        let l = lattice_from_tau(0.0, 1.0, 0.5).unwrap();
        assert!(OFDMConfig::new(l.clone(), 1, Grid1D::wide()).is_err());
        assert!(matches!(OFDMConfig::new(l, 40, Grid1D::wide()), Err(Error::Resource { .. })));
    }

    #[test]
    fn single_symbol_is_the_pulse() {
        let cfg = OFDMConfig::square().unwrap();
        let mut data = vec![Complex64::new(0.0, 0.0); cfg.indices().len()];
        let centre = cfg.indices().iter().position(|&i| i == (0, 0)).unwrap();
        data[centre] = Complex64::new(1.0, 0.0);
        let s = synthesize(&cfg, &data).unwrap();
        assert!(s.distance(&SampledFunction::gaussian(cfg.grid())).unwrap() < 1e-14);
        assert!(synthesize(&cfg, &data[1..]).is_err());
    }

    #[test]
    fn identity_round_trip_and_linearity() {
        let cfg = OFDMConfig::hexagonal().unwrap();
        let dual = cfg.dual_window(&TruncationPolicy::default()).unwrap();
        let n = cfg.indices().len();
        let (c1, c2) = (qpsk(n, 1), qpsk(n, 2));
        let ch = ChannelModel::identity();
        let r1 = apply_channel(&ch, &synthesize(&cfg, &c1).unwrap()).unwrap();
        let d1 = equalize(&cfg, &r1, &dual.gamma).unwrap();
        let err = d1.iter().zip(&c1).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-6, "{err}");

        let r2 = synthesize(&cfg, &c2).unwrap();
        let d2 = equalize(&cfg, &r2, &dual.gamma).unwrap();
        let d12 = equalize(&cfg, &r1.add(&r2).unwrap(), &dual.gamma).unwrap();
        for i in 0..n {
            assert!((d12[i] - d1[i] - d2[i]).norm() <= 1e-12);
        }
    }

    #[test]
    fn hexagonal_beats_square_under_spread() {
        let p = TruncationPolicy::default();
        let ch = ChannelModel::default_spread();
        let hex = interference_report(&OFDMConfig::hexagonal().unwrap(), &ch, &p).unwrap();
        let sq = interference_report(&OFDMConfig::square().unwrap(), &ch, &p).unwrap();
        assert!(hex.sir_db > sq.sir_db + 0.5, "{} vs {}", hex.sir_db, sq.sir_db);
        let id = interference_report(&OFDMConfig::square().unwrap(), &ChannelModel::identity(), &p).unwrap();
        assert!(id.offdiag_power <= 1e-10 && id.sir_db >= 100.0, "{}", id.sir_db);
    }

    #[test]
    fn scenario_round_trip() {
        let l = lattice_from_tau(0.5, 3f64.sqrt() / 2.0, 0.5).unwrap();
        let s = Scenario {
            lattice: LatticeDescriptor::from_lattice(&l),
            k: 3,
            taps: vec![Tap::new(0.05, -0.05, Complex64::new(0.5, 0.5))],
        };
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let (_, ch) = back.build().unwrap();
        assert!((ch.taps()[0].gain().norm() - 1.0).abs() < 1e-15);
        let err = Scenario::from_json("{\n \"K\": 3,\n \"oops\": 1}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
