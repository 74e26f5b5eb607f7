use super::{tail_bound, GaussWidth};
use crate::error::{Error, Result};
use crate::lattice::ThetaSeries;
use crate::sum::Neumaier;

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Bound on the contribution of norms beyond the table's completeness limit.
    pub tail_bound: f64,
}

impl SeriesSum {
    /// The value, or a truncation warning when the tail bound exceeds `tol`.
    pub fn within(&self, tol: f64) -> Result<f64> {
        if self.tail_bound > tol {
            return Err(Error::TruncationWarning {
                bound: self.tail_bound,
                tol,
            });
        }
        Ok(self.value)
    }
}

/// `Σ count · e^{−πα·s·norm²}` over the table, with `s = exponent_scale`.
pub fn theta_series_sum(t: &ThetaSeries, w: GaussWidth, exponent_scale: f64) -> SeriesSum {
    let a = PI * w.alpha() * exponent_scale;
    let value = t
        .entries()
        .iter()
        .map(|&(n2, c)| c as f64 * (-a * n2).exp())
        .collect::<Neumaier>()
        .value();
    let tail_bound = tail_bound(
        w.alpha() * exponent_scale,
        t.dim(),
        t.covolume(),
        t.covering_radius(),
        t.complete_to().sqrt(),
    );
    SeriesSum { value, tail_bound }
}
