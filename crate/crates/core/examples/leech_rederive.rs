//! Re-derives Leech lattice shell counts from the extended Golay code and
//! from the modular-form identity, and compares both with the shipped table.
//!
//! ```text
//! cargo run --release -p gabor-lattice --example leech_rederive [max_norm]
//! ```

#[path = "../tests/common/leech.rs"]
mod leech;

use gabor_lattice::lattice::leech_table;

fn main() {
    let max_norm: usize = std::env::args().nth(1).map_or(6, |a| a.parse().expect("max_norm must be an integer"));
    let table = leech_table().expect("shipped table loads");
    let dp = leech::leech_counts(max_norm);
    let modular = leech::leech_counts_modular(max_norm / 2);
    println!("norm2,golay_dp,modular,shipped");
    let mut ok = true;
    for (n, &c) in dp.iter().enumerate() {
        let m = if n == 0 {
            1
        } else if n % 2 == 0 {
            modular[n / 2 - 1].1 as u64
        } else {
            0
        };
        let s = table.count_at(n as f64);
        ok &= c == m && c == s;
        println!("{n},{c},{m},{s}");
    }
    if !ok {
        eprintln!("mismatch between derivations and the shipped table");
        std::process::exit(1);
    }
}
