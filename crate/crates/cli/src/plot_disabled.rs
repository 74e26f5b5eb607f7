//! Stand-in used when the `png` feature is off: every request is refused.

use std::path::Path;

use gabor_lattice::optimizer::Landscape;
use gabor_lattice::{Lattice, TruncationPolicy};

use crate::Failure;

fn refuse(path: &Path) -> Result<(), Failure> {
    Err(Failure::Usage(format!("cannot write {}: built without the `png` feature", path.display())))
}

pub fn phase_space_png(_: &Lattice, _: &TruncationPolicy, path: &Path) -> Result<(), Failure> {
    refuse(path)
}

pub fn landscape_png(_: &Landscape, _: usize, path: &Path) -> Result<(), Failure> {
    refuse(path)
}
