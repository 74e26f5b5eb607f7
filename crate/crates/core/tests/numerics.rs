mod common;

use gabor_lattice::export::write_landscape;
use gabor_lattice::gabor::gram_spectral_bounds;
use gabor_lattice::lattice::lattice_from_tau;
use gabor_lattice::ofdm::{interference_report, ChannelModel, OFDMConfig, Tap};
use gabor_lattice::optimizer::{scan_shapes, BoundMethod, Objective, ObjectiveKind};
use gabor_lattice::theta::{find_extremum, symplectic_psf_check, ExtremumKind, ThetaForm};
use gabor_lattice::{GaussWidth, PhasePoint, TruncationPolicy};
use num_complex::Complex64;

use common::{random_lattice, rng};

#[test]
fn doubling_grid_never_worsens_refined_minimum() {
    let p = TruncationPolicy::default();
    let mut r = rng(21);
    for _ in 0..5 {
        let l = random_lattice(&mut r, 2.0);
        for form in [ThetaForm::Translate, ThetaForm::DualPhase] {
            let coarse = find_extremum(&l, GaussWidth::default(), ExtremumKind::Min, form, 16, &p).unwrap();
            let fine = find_extremum(&l, GaussWidth::default(), ExtremumKind::Min, form, 32, &p).unwrap();
            assert!(fine.value <= coarse.value + 2.0 * p.tol, "{form:?}: {} vs {}", fine.value, coarse.value);
            for res in [&coarse, &fine] {
                assert!(res.certificate.refined_value <= res.certificate.grid_value + 1e-15);
            }
        }
    }
}

#[test]
fn refined_maximum_never_below_grid() {
    let p = TruncationPolicy::default();
    let l = lattice_from_tau(0.3, 1.2, 2.0).unwrap();
    let res = find_extremum(&l, GaussWidth::default(), ExtremumKind::Max, ThetaForm::Translate, 16, &p).unwrap();
    assert!(res.certificate.refined_value >= res.certificate.grid_value - 1e-15);
}

#[test]
fn psf_residual_tracks_tolerance_over_two_decades() {
    let l = lattice_from_tau(0.2, 1.1, 2.5).unwrap();
    let z = PhasePoint::new(vec![0.37], vec![-0.81]);
    for tol in [1e-8, 1e-9, 1e-10] {
        let p = TruncationPolicy::with_tol(tol).unwrap();
        for alpha in [0.5, 1.0, 2.0] {
            let res = symplectic_psf_check(&l, &z, GaussWidth::new(alpha).unwrap(), &p).unwrap();
            assert!(res <= 10.0 * tol, "tol {tol} alpha {alpha}: residual {res}");
        }
    }
}

#[test]
fn gram_estimates_monotone_in_radius() {
    // Principal submatrices interlace: A estimates fall and B estimates rise.
    let mut r = rng(22);
    for _ in 0..3 {
        let l = random_lattice(&mut r, 2.0);
        let b: Vec<_> = [2.0, 3.0, 4.0].iter().map(|&rad| gram_spectral_bounds(&l, rad).unwrap()).collect();
        for w in b.windows(2) {
            assert!(w[1].a <= w[0].a + 1e-12 && w[1].b >= w[0].b - 1e-12);
        }
    }
}

#[test]
fn landscape_csv_is_deterministic() {
    let p = TruncationPolicy::default();
    let obj = Objective::new(ObjectiveKind::QuantumPaving, BoundMethod::Janssen);
    let render = || {
        let l = scan_shapes(2.0, obj, 16, true, &p).unwrap();
        let mut out = Vec::new();
        write_landscape(&mut out, &l).unwrap();
        out
    };
    let (first, second) = (render(), render());
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    // Every data row is tagged and carries an error bound.
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 9);
        assert!(cols[7].starts_with("janssen"));
        assert!(cols[8].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn delay_only_spread_prefers_matched_rectangle() {
    // With the pulse fixed to the standard Gaussian, a time-dispersive channel
    // favors a slightly wider time spacing; stretching the other way loses.
    let taps: Vec<Tap> = (-2..=2)
        .map(|i| {
            let tau = 0.06 * i as f64;
            Tap::new(tau, 0.0, Complex64::new((-(tau * tau) / (4.0 * 0.06f64.powi(2))).exp(), 0.0))
        })
        .collect();
    let ch = ChannelModel::new(taps).unwrap();
    let p = TruncationPolicy::default();
    let sir = |y: f64| interference_report(&OFDMConfig::from_shape(0.0, y).unwrap(), &ch, &p).unwrap().sir_db;
    let square = sir(1.0);
    let matched = sir(0.95);
    let mismatched = sir(1.05);
    assert!(matched > square + 0.05, "matched {matched} dB vs square {square} dB");
    assert!(mismatched < square, "mismatched {mismatched} dB vs square {square} dB");
}
