//! PNG rendering. This is the only module that touches the image crate.

use std::path::Path;

use gabor_lattice::optimizer::{Landscape, SHAPE_Y_MAX};
use gabor_lattice::theta::ThetaEvaluator;
use gabor_lattice::{GaussWidth, Lattice, TruncationPolicy};
use image::{Rgb, RgbImage};

use crate::Failure;

const PHASE_SPACE_PX: u32 = 480;
/// Half-width of the plotted phase-space window.
const PHASE_SPACE_EXTENT: f64 = 3.0;
const LANDSCAPE_PX: (u32, u32) = (360, 480);

/// Stops of a perceptually ordered dark-to-bright colormap.
const STOPS: [[f64; 3]; 5] = [
    [0.267, 0.005, 0.329],
    [0.229, 0.322, 0.546],
    [0.128, 0.567, 0.551],
    [0.369, 0.789, 0.383],
    [0.993, 0.906, 0.144],
];

/// Color for `t ∈ [0, 1]`; out-of-range values are clamped.
fn color(t: f64) -> Rgb<u8> {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let s = t * (STOPS.len() - 1) as f64;
    let k = (s.floor() as usize).min(STOPS.len() - 2);
    let f = s - k as f64;
    let c = |i: usize| ((STOPS[k][i] * (1.0 - f) + STOPS[k + 1][i] * f) * 255.0).round() as u8;
    Rgb([c(0), c(1), c(2)])
}

fn save(img: &RgbImage, path: &Path) -> Result<(), Failure> {
    img.save(path)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

/// `Σ_λ |V_φφ(z − λ)|² = Σ_λ e^{−π|z−λ|²}` on `[−3, 3]²` with lattice
/// points marked: the Gaussian atoms in the time-frequency plane. Colors
/// span the observed range, so the residual ripple of a dense system shows.
pub fn phase_space_png(l: &Lattice, p: &TruncationPolicy, path: &Path) -> Result<(), Failure> {
    let ev = ThetaEvaluator::new(l, GaussWidth::default(), p)?;
    let n = PHASE_SPACE_PX;
    let coord = |k: u32| -PHASE_SPACE_EXTENT + 2.0 * PHASE_SPACE_EXTENT * (k as f64 + 0.5) / n as f64;
    let vals: Vec<f64> = (0..n * n)
        .map(|k| ev.translate(&[coord(k % n), -coord(k / n)]))
        .collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let mut img = RgbImage::from_fn(n, n, |i, j| color((vals[(j * n + i) as usize] - lo) / span));
    let to_px = |v: f64| ((v + PHASE_SPACE_EXTENT) / (2.0 * PHASE_SPACE_EXTENT) * n as f64).floor() as i64;
    for pt in l.enumerate_points(PHASE_SPACE_EXTENT * 2f64.sqrt())? {
        mark(&mut img, to_px(pt[0]), to_px(-pt[1]), 2, Rgb([255, 255, 255]));
    }
    save(&img, path)
}

/// Heatmap of the objective over the scanned shape domain, x to the right
/// and y upward, with the optimum marked in white. Better values are
/// brighter; pixels outside the domain are grey.
pub fn landscape_png(l: &Landscape, grid: usize, path: &Path) -> Result<(), Failure> {
    let m = grid - 1;
    let mut cells = vec![None; grid * grid];
    for s in &l.samples {
        let y0 = (1.0 - s.shape.x * s.shape.x).sqrt();
        let i = (s.shape.x * 2.0 * m as f64).round() as usize;
        let j = ((s.shape.y - y0) / (SHAPE_Y_MAX - y0) * m as f64).round() as usize;
        cells[i.min(m) * grid + j.min(m)] = Some(l.kind.value(&s.bounds));
    }
    let vals: Vec<f64> = cells.iter().flatten().cloned().collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    // Covering maximizes A; packing and paving minimize.
    let maximize = l.kind.tag() == "covering";
    let y_min = 0.75f64.sqrt();
    let (w, h) = LANDSCAPE_PX;
    let to_xy = |i: u32, j: u32| {
        let x = 0.5 * (i as f64 + 0.5) / w as f64;
        let y = SHAPE_Y_MAX - (SHAPE_Y_MAX - y_min) * (j as f64 + 0.5) / h as f64;
        (x, y)
    };
    let mut img = RgbImage::from_fn(w, h, |i, j| {
        let (x, y) = to_xy(i, j);
        let y0 = (1.0 - x * x).sqrt();
        if y < y0 {
            return Rgb([96, 96, 96]);
        }
        let gi = (x * 2.0 * m as f64).round() as usize;
        let gj = ((y - y0) / (SHAPE_Y_MAX - y0) * m as f64).round() as usize;
        match cells[gi.min(m) * grid + gj.min(m)] {
            Some(v) => {
                let t = (v - lo) / span;
                color(if maximize { t } else { 1.0 - t })
            }
            None => Rgb([0, 0, 0]),
        }
    });
    let px = ((l.argopt.x / 0.5) * w as f64) as i64;
    let py = ((SHAPE_Y_MAX - l.argopt.y) / (SHAPE_Y_MAX - y_min) * h as f64) as i64;
    mark(&mut img, px.min(w as i64 - 1), py.min(h as i64 - 1), 6, Rgb([255, 255, 255]));
    save(&img, path)
}

/// A cross of half-length `r` centred at `(px, py)`, clipped to the image.
fn mark(img: &mut RgbImage, px: i64, py: i64, r: i64, c: Rgb<u8>) {
    let (w, h) = (img.width() as i64, img.height() as i64);
    for d in -r..=r {
        for (a, b) in [(px + d, py), (px, py + d)] {
            if (0..w).contains(&a) && (0..h).contains(&b) {
                img.put_pixel(a as u32, b as u32, c);
            }
        }
    }
}
