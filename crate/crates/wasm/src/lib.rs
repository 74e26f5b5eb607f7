//! Browser bindings for the demo page in `www/`.
//!
//! Every export is a thin wrapper over a plain Rust function in [`demo`], so
//! the numerics are tested natively without a JavaScript host.

use wasm_bindgen::prelude::*;

pub mod demo {
    use gabor_lattice::gabor::janssen_frame_bounds;
    use gabor_lattice::lattice::{lattice_from_tau, reduce_to_fundamental_domain};
    use gabor_lattice::optimizer::{BoundMethod, ObjectiveKind, ShapeScan, SHAPE_Y_MAX};
    use gabor_lattice::theta::ThetaEvaluator;
    use gabor_lattice::{GaussWidth, TruncationPolicy};

    /// Extremum grid for single-shape bounds; the refinement does the rest.
    const BOUNDS_GRID: usize = 16;
    /// Largest square image the phase-space view will compute.
    pub const MAX_IMAGE: usize = 512;
    pub const MAX_SCAN_GRID: usize = 40;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct Bounds {
        pub x: f64,
        pub y: f64,
        pub a: f64,
        pub b: f64,
        pub ratio: f64,
        pub method: &'static str,
    }

    /// Frame bounds of the shape `τ = x + iy` at the given density. The shape
    /// is first reduced to the fundamental domain, so any `y > 0` works.
    pub fn frame_bounds(x: f64, y: f64, density: f64) -> Result<Bounds, String> {
        let (x, y) = reduce_to_fundamental_domain(x, y).map_err(|e| e.to_string())?;
        let l = lattice_from_tau(x, y, density).map_err(|e| e.to_string())?;
        let f = janssen_frame_bounds(&l, &TruncationPolicy::default(), BOUNDS_GRID).map_err(|e| e.to_string())?;
        Ok(Bounds {
            x,
            y,
            a: f.a,
            b: f.b,
            ratio: f.ratio,
            method: f.method.tag(),
        })
    }

    /// `Σ_λ e^{−π|z−λ|²}` on an `n × n` pixel grid over `[−extent, extent]²`,
    /// row-major from the top-left pixel, time to the right and frequency up.
    pub fn phase_space(x: f64, y: f64, density: f64, n: usize, extent: f64) -> Result<Vec<f64>, String> {
        if n == 0 || n > MAX_IMAGE {
            return Err(format!("image size must be in 1..={MAX_IMAGE}, got {n}"));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(format!("extent must be positive, got {extent}"));
        }
        let l = lattice_from_tau(x, y, density).map_err(|e| e.to_string())?;
        let ev = ThetaEvaluator::new(&l, GaussWidth::default(), &TruncationPolicy::default())
            .map_err(|e| e.to_string())?;
        let c = |k: usize| -extent + 2.0 * extent * (k as f64 + 0.5) / n as f64;
        Ok((0..n * n).map(|k| ev.translate(&[c(k % n), -c(k / n)])).collect())
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct ShapeLandscape {
        pub grid: usize,
        /// Objective value per grid sample, indexed `i * grid + j` with `x`
        /// along `i` and `y` along `j`; NaN where bounds do not exist.
        pub values: Vec<f64>,
        pub argopt_x: f64,
        pub argopt_y: f64,
        pub opt_value: f64,
    }

    pub fn objective(name: &str) -> Result<ObjectiveKind, String> {
        name.parse::<ObjectiveKind>().map_err(|e| e.to_string())
    }

    /// Objective values over the shape domain, refined at the optimum.
    pub fn shape_landscape(density: f64, objective_name: &str, grid: usize) -> Result<ShapeLandscape, String> {
        if grid > MAX_SCAN_GRID {
            return Err(format!("grid must be at most {MAX_SCAN_GRID} in the browser, got {grid}"));
        }
        let kind = objective(objective_name)?;
        let p = TruncationPolicy::default();
        let scan = ShapeScan::new(density, BoundMethod::Janssen, grid, &p).map_err(|e| e.to_string())?;
        let land = scan.landscape(kind, true, &p).map_err(|e| e.to_string())?;
        let m = (grid - 1) as f64;
        let mut values = vec![f64::NAN; grid * grid];
        for s in &land.samples {
            let y0 = (1.0 - s.shape.x * s.shape.x).sqrt();
            let i = (s.shape.x * 2.0 * m).round() as usize;
            let j = ((s.shape.y - y0) / (SHAPE_Y_MAX - y0) * m).round() as usize;
            values[i.min(grid - 1) * grid + j.min(grid - 1)] = kind.value(&s.bounds);
        }
        Ok(ShapeLandscape {
            grid,
            values,
            argopt_x: land.argopt.x,
            argopt_y: land.argopt.y,
            opt_value: land.opt_value,
        })
    }
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

/// Frame bounds of one lattice shape.
#[wasm_bindgen]
pub struct FrameBounds(demo::Bounds);

#[wasm_bindgen]
impl FrameBounds {
    /// Reduced shape coordinates actually evaluated.
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> f64 {
        self.0.x
    }
    #[wasm_bindgen(getter)]
    pub fn y(&self) -> f64 {
        self.0.y
    }
    #[wasm_bindgen(getter)]
    pub fn a(&self) -> f64 {
        self.0.a
    }
    #[wasm_bindgen(getter)]
    pub fn b(&self) -> f64 {
        self.0.b
    }
    #[wasm_bindgen(getter)]
    pub fn ratio(&self) -> f64 {
        self.0.ratio
    }
    #[wasm_bindgen(getter)]
    pub fn method(&self) -> String {
        self.0.method.to_string()
    }
}

#[wasm_bindgen]
pub fn frame_bounds(x: f64, y: f64, density: f64) -> Result<FrameBounds, JsError> {
    demo::frame_bounds(x, y, density).map(FrameBounds).map_err(js_err)
}

#[wasm_bindgen]
pub fn phase_space(x: f64, y: f64, density: f64, n: usize, extent: f64) -> Result<Vec<f64>, JsError> {
    demo::phase_space(x, y, density, n, extent).map_err(js_err)
}

#[wasm_bindgen]
pub struct ShapeLandscape(demo::ShapeLandscape);

#[wasm_bindgen]
impl ShapeLandscape {
    #[wasm_bindgen(getter)]
    pub fn grid(&self) -> usize {
        self.0.grid
    }
    /// Values indexed `i * grid + j` (x along `i`, y along `j`).
    pub fn values(&self) -> Vec<f64> {
        self.0.values.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn argopt_x(&self) -> f64 {
        self.0.argopt_x
    }
    #[wasm_bindgen(getter)]
    pub fn argopt_y(&self) -> f64 {
        self.0.argopt_y
    }
    #[wasm_bindgen(getter)]
    pub fn opt_value(&self) -> f64 {
        self.0.opt_value
    }
}

#[wasm_bindgen]
pub fn shape_landscape(density: f64, objective: &str, grid: usize) -> Result<ShapeLandscape, JsError> {
    demo::shape_landscape(density, objective, grid).map(ShapeLandscape).map_err(js_err)
}

/// Upper end of the scanned `y` range, for drawing the domain.
#[wasm_bindgen]
pub fn shape_y_max() -> f64 {
    gabor_lattice::optimizer::SHAPE_Y_MAX
}
