//! JSON lattice descriptors: `{"dim": n, "basis": [row-major n² floats], "name": "…"}`.

use serde::{Deserialize, Serialize};

use super::Lattice;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDescriptor {
    pub dim: usize,
    /// Generator matrix, row by row; columns are the generators.
    pub basis: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl LatticeDescriptor {
    /// Parses a descriptor. Errors carry the line and column reported by the
    /// JSON parser.
    pub fn from_json(text: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if let Some(i) = d.basis.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("basis entry {i} is not finite")));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialization cannot fail")
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        let l = Lattice::from_row_major(self.dim, &self.basis)?;
        Ok(match &self.name {
            Some(n) => l.with_name(n.clone()),
            None => l,
        })
    }

    pub fn from_lattice(l: &Lattice) -> Self {
        let n = l.dim();
        let b = l.basis();
        Self {
            dim: n,
            basis: (0..n).flat_map(|i| (0..n).map(move |j| b[(i, j)])).collect(),
            name: l.name().map(str::to_string),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"dim": 2, "basis": [1.0, 0.5, 0.0, 2.0], "name": "skew"}"#;
        let d = LatticeDescriptor::from_json(text).unwrap();
        let l = d.to_lattice().unwrap();
        assert_eq!(l.name(), Some("skew"));
        assert_eq!(l.basis()[(0, 1)], 0.5);
        let back = LatticeDescriptor::from_json(&LatticeDescriptor::from_lattice(&l).to_json()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn errors_carry_position() {
        let err = LatticeDescriptor::from_json("{\n  \"dim\": 2,\n  \"basis\": [1, 0, 0 1]\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(LatticeDescriptor::from_json(r#"{"dim": 2, "basis": [1, 0, 0, NaN]}"#).is_err());
        assert!(LatticeDescriptor::from_json(r#"{"dim": 2, "basis": [1, 0, 0, 1e999]}"#).is_err());
        assert!(LatticeDescriptor::from_json(r#"{"dim": 2, "basis": [1, 0, 0]}"#)
            .unwrap()
            .to_lattice()
            .is_err());
    }
}
