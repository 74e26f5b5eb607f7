//! Named lattices: explicit generators up to dimension 8, theta-series tables
//! beyond.
//!
//! The fixed generators are one conventional choice each. Objectives that
//! depend on the embedding into phase space (rotations, relabelled axes) are
//! therefore evaluated for this choice only.

use nalgebra::DMatrix;

use super::shape::lattice_from_tau;
use super::{Lattice, ThetaSeries};
use crate::error::{Error, Result};

/// Theta series of the Leech lattice at its unimodular scale (minimal norm 4).
pub const LEECH_THETA_CSV: &str = include_str!("../../data/leech_theta.csv");

/// Kissing number and second shell of the Leech lattice, checked at load.
const LEECH_CHECKSUMS: [(f64, u64); 2] = [(4.0, 196_560), (6.0, 16_773_120)];

/// Largest squared norm tabulated for `Z^n` tables.
const ZN_TABLE_NORM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum NamedLattice {
    Lattice(Lattice),
    Table(ThetaSeries),
}

impl NamedLattice {
    pub fn dim(&self) -> usize {
        match self {
            Self::Lattice(l) => l.dim(),
            Self::Table(t) => t.dim(),
        }
    }

    pub fn density(&self) -> f64 {
        match self {
            Self::Lattice(l) => l.density(),
            Self::Table(t) => t.density(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Lattice(l) => l.name().unwrap_or("lattice"),
            Self::Table(t) => t.lattice_name(),
        }
    }

    pub fn as_lattice(&self) -> Option<&Lattice> {
        match self {
            Self::Lattice(l) => Some(l),
            Self::Table(_) => None,
        }
    }

    pub fn as_table(&self) -> Option<&ThetaSeries> {
        match self {
            Self::Table(t) => Some(t),
            Self::Lattice(_) => None,
        }
    }
}

enum Entry {
    Zn(usize),
    Hexagonal,
    D(usize),
    E8,
    A8Dual,
    Leech,
}

fn parse_name(name: &str) -> Result<(Entry, String)> {
    let key: String = name.trim().chars().filter(|c| !matches!(c, '{' | '}' | ' ' | '_')).collect();
    let lower = key.to_ascii_lowercase();
    let zn = lower
        .strip_prefix("z^")
        .or_else(|| lower.strip_prefix('z'))
        .and_then(|s| s.parse::<usize>().ok());
    let entry = match (lower.as_str(), zn) {
        (_, Some(n)) => {
            if n == 0 || n % 2 != 0 {
                return Err(Error::Catalog(format!("Z^{n}: phase-space dimension must be even and positive")));
            }
            return Ok((Entry::Zn(n), format!("Z^{n}")));
        }
        ("hexagonal" | "hex" | "a2", _) => (Entry::Hexagonal, "hexagonal"),
        ("d4", _) => (Entry::D(4), "D4"),
        ("d8", _) => (Entry::D(8), "D8"),
        ("e8", _) => (Entry::E8, "E8"),
        ("a8*" | "a8dual", _) => (Entry::A8Dual, "A8*"),
        ("leech" | "lambda24", _) => (Entry::Leech, "Leech"),
        _ => {
            return Err(Error::Catalog(format!(
                "unknown lattice `{name}` (known: Z^n, hexagonal, D4, D8, A8*, E8, Z^24, Leech)"
            )))
        }
    };
    Ok((entry.0, entry.1.to_string()))
}

/// Columns `(−1,−1,0,…)`, `(1,−1,0,…)`, `(0,1,−1,0,…)`, …: a basis of `D_n`.
fn d_basis(n: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, n);
    b[(0, 0)] = -1.0;
    b[(1, 0)] = -1.0;
    for j in 1..n {
        b[(j - 1, j)] = 1.0;
        b[(j, j)] = -1.0;
    }
    b
}

/// `E8 = D8 ∪ (D8 + (½)^8)`, generated by `2e₁`, `e_{i+1} − e_i` (i = 1…6) and `(½)^8`.
fn e8_basis() -> DMatrix<f64> {
    let mut b = DMatrix::zeros(8, 8);
    b[(0, 0)] = 2.0;
    for j in 1..7 {
        b[(j - 1, j)] = -1.0;
        b[(j, j)] = 1.0;
    }
    for i in 0..8 {
        b[(i, 7)] = 0.5;
    }
    b
}

/// Generator of `A8` with Gram matrix equal to the Cartan matrix.
fn a8_basis() -> Result<DMatrix<f64>> {
    let cartan = DMatrix::from_fn(8, 8, |i, j| match i.abs_diff(j) {
        0 => 2.0,
        1 => -1.0,
        _ => 0.0,
    });
    let chol = cartan
        .cholesky()
        .ok_or_else(|| Error::InternalConsistency("A8 Cartan matrix is not positive definite".into()))?;
    Ok(chol.l().transpose())
}

/// Theta table of `Z^n` up to squared norm `max_norm`, truncated further
/// where counts would overflow `u64`.
fn zn_table(n: usize, max_norm: usize) -> Result<ThetaSeries> {
    let mut one = vec![0u128; max_norm + 1];
    for k in 0.. {
        let s = k * k;
        if s > max_norm {
            break;
        }
        one[s] = if k == 0 { 1 } else { 2 };
    }
    let mut acc = vec![0u128; max_norm + 1];
    acc[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; max_norm + 1];
        for (i, &a) in acc.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in one.iter().enumerate().take(max_norm + 1 - i).filter(|(_, b)| **b != 0) {
                next[i + j] = next[i + j].saturating_add(a.saturating_mul(b));
            }
        }
        acc = next;
    }
    let mut entries = Vec::new();
    let mut complete_to = 0.0;
    for (m, &c) in acc.iter().enumerate() {
        let Ok(c) = u64::try_from(c) else { break };
        complete_to = m as f64;
        if c > 0 {
            entries.push((m as f64, c));
        }
    }
    let covering = (n as f64).sqrt() / 2.0;
    ThetaSeries::new(entries, format!("Z^{n}"), n, 1.0, covering, complete_to)
}

/// Leech theta table from the shipped CSV, checked against its first two shells.
pub fn leech_table() -> Result<ThetaSeries> {
    let t = ThetaSeries::from_csv(LEECH_THETA_CSV.as_bytes(), "Leech", 24, 1.0, 2f64.sqrt())
        .map_err(|e| Error::Catalog(format!("shipped Leech table: {e}")))?;
    for (norm, count) in LEECH_CHECKSUMS {
        if t.count_at(norm) != count {
            return Err(Error::Catalog(format!(
                "Leech table checksum failed at norm {norm}: expected {count}, found {}",
                t.count_at(norm)
            )));
        }
    }
    Ok(t)
}

/// Looks up a named lattice and scales it to `density`.
///
/// Names up to dimension 8 yield explicit generators; `Z^n` with `n > 8` and
/// Leech yield theta-series tables.
pub fn named_lattice(name: &str, density: f64) -> Result<NamedLattice> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::Domain(format!("density must be positive, got {density}")));
    }
    let (entry, canonical) = parse_name(name)?;
    let basis = match entry {
        Entry::Zn(n) if n > 8 => {
            return Ok(NamedLattice::Table(zn_table(n, ZN_TABLE_NORM)?.scaled_to_density(density)?))
        }
        Entry::Leech => return Ok(NamedLattice::Table(leech_table()?.scaled_to_density(density)?)),
        Entry::Hexagonal => {
            let l = lattice_from_tau(0.5, 3f64.sqrt() / 2.0, density)?;
            return Ok(NamedLattice::Lattice(l.with_name(canonical)));
        }
        Entry::Zn(n) => DMatrix::identity(n, n),
        Entry::D(n) => d_basis(n),
        Entry::E8 => e8_basis(),
        Entry::A8Dual => {
            let a8 = Lattice::new(a8_basis()?)?;
            a8.dual_lattice()?.basis().clone()
        }
    };
    let l = Lattice::new(basis)?.scaled_to_density(density)?;
    Ok(NamedLattice::Lattice(l.with_name(canonical)))
}
