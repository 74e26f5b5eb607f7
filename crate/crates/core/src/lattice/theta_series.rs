//! Theta-series tables: squared norm → number of lattice vectors.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to merge numerically equal squared norms.
const NORM_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSeries {
    entries: Vec<(f64, u64)>,
    lattice_name: String,
    covolume: f64,
    dim: usize,
    covering_radius: f64,
    complete_to: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    norm2: f64,
    count: u64,
}

impl ThetaSeries {
    /// `covering_radius` may be any upper bound; it only feeds tail estimates.
    /// Counts are complete for all squared norms `≤ complete_to`.
    pub fn new(
        entries: Vec<(f64, u64)>,
        lattice_name: impl Into<String>,
        dim: usize,
        covolume: f64,
        covering_radius: f64,
        complete_to: f64,
    ) -> Result<Self> {
        let t = Self {
            entries,
            lattice_name: lattice_name.into(),
            covolume,
            dim,
            covering_radius,
            complete_to,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parse(format!("theta series `{}`: {m}", self.lattice_name)));
        match self.entries.first() {
            Some(&(n, 1)) if n == 0.0 => {}
            _ => return bad("first entry must be (0, 1)".into()),
        }
        for w in self.entries.windows(2) {
            if !(w[1].0 > w[0].0) {
                return bad(format!("squared norms must be strictly increasing ({} then {})", w[0].0, w[1].0));
            }
        }
        for &(n, c) in &self.entries[1..] {
            if !n.is_finite() {
                return bad("non-finite squared norm".into());
            }
            if c == 0 || c % 2 != 0 {
                return bad(format!("count {c} at norm {n} must be positive and even"));
            }
        }
        if !(self.covolume > 0.0 && self.covolume.is_finite()) {
            return bad("covolume must be positive".into());
        }
        if self.dim == 0 {
            return bad("dimension must be positive".into());
        }
        if !(self.covering_radius >= 0.0 && self.covering_radius.is_finite()) {
            return bad("covering radius bound must be finite".into());
        }
        if self.complete_to < self.entries.last().map(|e| e.0).unwrap_or(0.0) {
            return bad("completeness bound below the largest tabulated norm".into());
        }
        Ok(())
    }

    /// Groups sorted squared norms into a table complete up to `radius²`.
    pub fn from_sorted_norms(
        norms: &[f64],
        radius: f64,
        lattice_name: impl Into<String>,
        dim: usize,
        covolume: f64,
        covering_radius: f64,
    ) -> Result<Self> {
        let mut entries: Vec<(f64, u64)> = vec![(0.0, 1)];
        for &n in norms {
            let scale = n.abs().max(1.0);
            if n <= NORM_MERGE_TOL {
                continue;
            }
            match entries.last_mut() {
                Some(last) if last.0 > 0.0 && (n - last.0).abs() <= NORM_MERGE_TOL * scale => last.1 += 1,
                _ => entries.push((n, 1)),
            }
        }
        Self::new(entries, lattice_name, dim, covolume, covering_radius, radius * radius)
    }

    /// Reads the `norm2,count` CSV format. The header must be exactly `norm2,count`.
    pub fn from_csv<R: Read>(
        reader: R,
        lattice_name: impl Into<String>,
        dim: usize,
        covolume: f64,
        covering_radius: f64,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["norm2", "count"] {
            return Err(Error::Parse(format!(
                "line 1: expected header `norm2,count`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut entries = Vec::new();
        for rec in rdr.deserialize::<Row>() {
            let row = rec.map_err(|e| {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                Error::Parse(format!("line {line}: {e}"))
            })?;
            if !row.norm2.is_finite() {
                return Err(Error::Parse(format!("non-finite squared norm {}", row.norm2)));
            }
            entries.push((row.norm2, row.count));
        }
        let complete_to = entries.last().map(|e: &(f64, u64)| e.0).unwrap_or(0.0);
        Self::new(entries, lattice_name, dim, covolume, covering_radius, complete_to)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for &(norm2, count) in &self.entries {
            w.serialize(Row { norm2, count }).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }

    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    pub fn lattice_name(&self) -> &str {
        &self.lattice_name
    }

    pub fn covolume(&self) -> f64 {
        self.covolume
    }

    pub fn density(&self) -> f64 {
        1.0 / self.covolume
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    pub fn complete_to(&self) -> f64 {
        self.complete_to
    }

    /// Number of vectors of squared norm `norm2` (relative match 1e-9).
    pub fn count_at(&self, norm2: f64) -> u64 {
        let scale = norm2.abs().max(1.0);
        self.entries
            .iter()
            .find(|e| (e.0 - norm2).abs() <= NORM_MERGE_TOL * scale)
            .map(|e| e.1)
            .unwrap_or(0)
    }

    /// Table of the lattice scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let f2 = factor * factor;
        Self::new(
            self.entries.iter().map(|&(n, c)| (n * f2, c)).collect(),
            self.lattice_name.clone(),
            self.dim,
            self.covolume * factor.powi(self.dim as i32),
            self.covering_radius * factor,
            self.complete_to * f2,
        )
    }

    pub fn scaled_to_density(&self, density: f64) -> Result<Self> {
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::Domain(format!("density must be positive, got {density}")));
        }
        self.scaled((self.covolume * density).powf(-1.0 / self.dim as f64))
    }

    /// Truncated copy keeping norms `≤ max_norm2`.
    pub fn truncated(&self, max_norm2: f64) -> Result<Self> {
        Self::new(
            self.entries.iter().copied().filter(|e| e.0 <= max_norm2).collect(),
            self.lattice_name.clone(),
            self.dim,
            self.covolume,
            self.covering_radius,
            max_norm2.min(self.complete_to),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let t = ThetaSeries::new(vec![(0.0, 1), (1.0, 4), (2.0, 4)], "Z2", 2, 1.0, 0.8, 2.0).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("norm2,count\n0.0,1\n"));
        let back = ThetaSeries::from_csv(buf.as_slice(), "Z2", 2, 1.0, 0.8).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(ThetaSeries::new(vec![(1.0, 4)], "x", 2, 1.0, 1.0, 1.0).is_err());
        assert!(ThetaSeries::new(vec![(0.0, 1), (1.0, 3)], "x", 2, 1.0, 1.0, 1.0).is_err());
        assert!(ThetaSeries::new(vec![(0.0, 1), (2.0, 4), (1.0, 4)], "x", 2, 1.0, 1.0, 2.0).is_err());
        let bad_header = "norm,count\n0,1\n";
        assert!(ThetaSeries::from_csv(bad_header.as_bytes(), "x", 2, 1.0, 1.0).is_err());
        let nan = "norm2,count\n0,1\nNaN,4\n";
        assert!(ThetaSeries::from_csv(nan.as_bytes(), "x", 2, 1.0, 1.0).is_err());
        let inf = "norm2,count\n0,1\ninf,4\n";
        assert!(ThetaSeries::from_csv(inf.as_bytes(), "x", 2, 1.0, 1.0).is_err());
    }

    #[test]
    fn parse_error_names_the_line() {
        let text = "norm2,count\n0,1\n1,four\n";
        let err = ThetaSeries::from_csv(text.as_bytes(), "x", 2, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn grouping_and_scaling() {
        let norms = [0.0, 1.0, 1.0, 1.0 + 1e-13, 1.0, 2.0, 2.0, 2.0, 2.0];
        let t = ThetaSeries::from_sorted_norms(&norms, 1.5, "Z2", 2, 1.0, 0.75).unwrap();
        assert_eq!(t.entries(), &[(0.0, 1), (1.0, 4), (2.0, 4)]);
        let s = t.scaled_to_density(4.0).unwrap();
        assert!((s.covolume() - 0.25).abs() < 1e-15);
        assert_eq!(s.count_at(0.25), 4);
    }
}
