//! Independent derivation of Leech lattice shell counts.
//!
//! `√8 Λ₂₄ = {x ∈ Z²⁴ : x ≡ m·1 + 2c (mod 4) for a Golay codeword c and
//! m ∈ {0, 1}, Σx ≡ 4m (mod 8)}`, so `|v|² = |x|²/8`. Coordinates are
//! exchangeable within the code's support, so the count depends on each
//! codeword only through its weight.
//!
//! A second, unrelated check uses `θ_Λ₂₄ = E₁₂ − (65520/691)Δ`, which gives
//! `N(2m) = (65520/691)(σ₁₁(m) − τ(m))` for `m ≥ 1`.

/// Generator polynomial `x¹¹ + x¹⁰ + x⁶ + x⁵ + x⁴ + x² + 1` of the binary
/// Golay code of length 23.
const GOLAY_POLY: u32 = 0b1100_0111_0101;

/// All 4096 words of the extended Golay code as 24-bit masks.
pub fn golay_code() -> Vec<u32> {
    let rows: Vec<u32> = (0..12)
        .map(|s| {
            let r = GOLAY_POLY << s;
            r | ((r.count_ones() & 1) << 23)
        })
        .collect();
    (0..4096u32)
        .map(|m| (0..12).filter(|i| m >> i & 1 == 1).fold(0, |w, i| w ^ rows[i]))
        .collect()
}

/// All `x ∈ Z` with `x ≡ r (mod 4)` and `x² ≤ max`.
fn residue_values(r: i64, max: i64) -> Vec<i64> {
    let b = (max as f64).sqrt() as i64 + 1;
    (-b..=b).filter(|v| v.rem_euclid(4) == r && v * v <= max).collect()
}

/// Counts of vectors by `|x|²` for residues `ones` times `r1` and
/// `24 − ones` times `r0`, with `Σx ≡ target (mod 8)`.
fn dp(ones: usize, r1: i64, r0: i64, target: i64, max: i64) -> Vec<u64> {
    let m = max as usize;
    // state[s][q]: sum ≡ s (mod 8), squared norm q.
    let mut st = vec![vec![0u64; m + 1]; 8];
    st[0][0] = 1;
    let (v1, v0) = (residue_values(r1, max), residue_values(r0, max));
    for i in 0..24 {
        let vals = if i < ones { &v1 } else { &v0 };
        let mut ns = vec![vec![0u64; m + 1]; 8];
        for s in 0..8 {
            for q in 0..=m {
                let c = st[s][q];
                if c == 0 {
                    continue;
                }
                for &v in vals {
                    let q2 = q + (v * v) as usize;
                    if q2 <= m {
                        ns[(s as i64 + v).rem_euclid(8) as usize][q2] += c;
                    }
                }
            }
        }
        st = ns;
    }
    st[target as usize].clone()
}

/// Shell counts of the unimodular Leech lattice, indexed by squared norm
/// `0..=max_norm`.
pub fn leech_counts(max_norm: usize) -> Vec<u64> {
    let max = 8 * max_norm as i64;
    let mut by_weight = [0u64; 25];
    for w in golay_code() {
        by_weight[w.count_ones() as usize] += 1;
    }
    let mut total = vec![0u64; max as usize + 1];
    for (wt, &mult) in by_weight.iter().enumerate() {
        if mult == 0 {
            continue;
        }
        // m = 0: x ≡ 2c (mod 4); m = 1: x ≡ 1 + 2c (mod 4).
        for (r1, r0, target) in [(2, 0, 0), (3, 1, 4)] {
            for (q, c) in dp(wt, r1, r0, target, max).into_iter().enumerate() {
                total[q] += mult * c;
            }
        }
    }
    (0..=max_norm).map(|n| total[8 * n]).collect()
}

/// Ramanujan `τ(1..=n)` from `q ∏(1 − qᵏ)²⁴`.
pub fn ramanujan_tau(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for k in 1..=n {
        for _ in 0..24 {
            for i in (k..=n).rev() {
                p[i] -= p[i - k];
            }
        }
    }
    // Coefficient of qᵐ in Δ is p[m − 1].
    (0..=n).map(|m| if m == 0 { 0 } else { p[m - 1] }).collect()
}

fn sigma11(m: usize) -> i128 {
    (1..=m).filter(|d| m % d == 0).map(|d| (d as i128).pow(11)).sum()
}

/// `N(2m)` for `m = 1..=max_m` from the modular-form identity.
pub fn leech_counts_modular(max_m: usize) -> Vec<(u64, u128)> {
    let tau = ramanujan_tau(max_m);
    (1..=max_m)
        .map(|m| {
            let num = 65520 * (sigma11(m) - tau[m]);
            assert_eq!(num % 691, 0, "non-integral coefficient at m = {m}");
            (2 * m as u64, (num / 691) as u128)
        })
        .collect()
}
