//! CSV writers. Every numeric row carries its method tag and error bound;
//! floats use the shortest representation that round-trips.

use std::io::Write;

use crate::error::{Error, Result};
use crate::gabor::{FrameBounds, SampledFunction};
use crate::ofdm::InterferenceReport;
use crate::optimizer::{ComparisonRow, Landscape};

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`. Negative
/// zero prints as `0`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("CSV output: {e}"))
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(|e| Error::Parse(format!("CSV output: {e}")))
}

pub const FRAME_BOUNDS_HEADER: [&str; 7] = ["lattice_id", "density", "method", "A", "B", "ratio", "error_bound"];

/// One header row and one row per `(lattice id, bounds)`.
pub fn write_frame_bounds<W: Write>(w: W, rows: &[(String, f64, FrameBounds)]) -> Result<()> {
    let mut w = writer(w);
    w.write_record(FRAME_BOUNDS_HEADER).map_err(csv_err)?;
    for (id, density, f) in rows {
        w.write_record([
            id.clone(),
            fmt_f64(*density),
            f.method.tag().to_string(),
            fmt_f64(f.a),
            fmt_f64(f.b),
            fmt_f64(f.ratio),
            fmt_f64(f.error_bound),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub const LANDSCAPE_HEADER: [&str; 9] = ["role", "objective", "x", "y", "A", "B", "ratio", "method", "error_bound"];

/// Rows with role `sample` for every grid sample, then one `argopt` row.
pub fn write_landscape<W: Write>(w: W, l: &Landscape) -> Result<()> {
    let mut w = writer(w);
    w.write_record(LANDSCAPE_HEADER).map_err(csv_err)?;
    let rows = l
        .samples
        .iter()
        .map(|s| ("sample", s.shape.x, s.shape.y, s.bounds))
        .chain(std::iter::once(("argopt", l.argopt.x, l.argopt.y, l.argopt_bounds)));
    for (role, x, y, f) in rows {
        w.write_record([
            role.to_string(),
            l.kind.tag().to_string(),
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(f.a),
            fmt_f64(f.b),
            fmt_f64(f.ratio),
            f.method.tag().to_string(),
            fmt_f64(f.error_bound),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub const COMPARISON_HEADER: [&str; 6] = ["name", "density", "lower", "btilde", "method", "error_bound"];

pub fn write_comparison<W: Write>(w: W, rows: &[ComparisonRow]) -> Result<()> {
    let mut w = writer(w);
    w.write_record(COMPARISON_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.name.clone(),
            fmt_f64(r.density),
            fmt_f64(r.energy_lower),
            fmt_f64(r.btilde),
            r.method.tag().to_string(),
            fmt_f64(r.error_bound),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub const EXTREMUM_LANDSCAPE_HEADER: [&str; 5] = ["zx", "zy", "value", "form", "error_bound"];

/// Theta values over a cell, tagged with the form name.
pub fn write_extremum_landscape<W: Write>(w: W, samples: &[([f64; 2], f64)], form: &str, error_bound: f64) -> Result<()> {
    let mut w = writer(w);
    w.write_record(EXTREMUM_LANDSCAPE_HEADER).map_err(csv_err)?;
    for (z, v) in samples {
        w.write_record([
            fmt_f64(z[0]),
            fmt_f64(z[1]),
            fmt_f64(*v),
            form.to_string(),
            fmt_f64(error_bound),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

pub const SAMPLED_FUNCTION_HEADER: [&str; 3] = ["t", "re", "im"];

pub fn write_sampled_function<W: Write>(w: W, f: &SampledFunction) -> Result<()> {
    let mut w = writer(w);
    w.write_record(SAMPLED_FUNCTION_HEADER).map_err(csv_err)?;
    for (t, c) in f.grid().times().zip(f.samples()) {
        w.write_record([fmt_f64(t), fmt_f64(c.re), fmt_f64(c.im)])
            .map_err(csv_err)?;
    }
    finish(w)
}

pub const INTERFERENCE_HEADER: [&str; 10] = [
    "row", "mu_k", "mu_l", "nu_k", "nu_l", "re", "im", "diagonal_power", "offdiag_power", "sir_db",
];

/// One `entry` row per matrix element `⟨H g_μ, f_ν⟩`, then a `summary` row
/// with the powers and the SIR in dB.
pub fn write_interference<W: Write>(w: W, r: &InterferenceReport) -> Result<()> {
    let mut w = writer(w);
    w.write_record(INTERFERENCE_HEADER).map_err(csv_err)?;
    for (i, nu) in r.receivers.iter().enumerate() {
        for (j, mu) in r.transmitters.iter().enumerate() {
            let c = r.matrix[(i, j)];
            w.write_record([
                "entry".to_string(),
                mu.0.to_string(),
                mu.1.to_string(),
                nu.0.to_string(),
                nu.1.to_string(),
                fmt_f64(c.re),
                fmt_f64(c.im),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(csv_err)?;
        }
    }
    let mut summary = vec![String::new(); INTERFERENCE_HEADER.len()];
    summary[0] = "summary".into();
    summary[7] = fmt_f64(r.diagonal_power);
    summary[8] = fmt_f64(r.offdiag_power);
    summary[9] = fmt_f64(r.sir_db);
    w.write_record(&summary).map_err(csv_err)?;
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::{Grid1D, Method};

    #[test]
    fn frame_bounds_row() {
        let f = FrameBounds::new(1.5, 2.0, Method::GramSpectral, 1e-12).unwrap();
        let mut out = Vec::new();
        write_frame_bounds(&mut out, &[("sq".into(), 2.0, f)]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "lattice_id,density,method,A,B,ratio,error_bound\nsq,2,gram-spectral,1.5,2,1.3333333333333333,1e-12\n"
        );
    }

    #[test]
    fn sampled_function_rows() {
        let g = Grid1D::new(16, 0.5).unwrap();
        let f = SampledFunction::gaussian(g);
        let mut out = Vec::new();
        write_sampled_function(&mut out, &f).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("t,re,im\n-4,"));
    }
}
