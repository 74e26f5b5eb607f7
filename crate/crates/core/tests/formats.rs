use gabor_lattice::export::{
    write_comparison, write_extremum_landscape, write_interference, COMPARISON_HEADER, INTERFERENCE_HEADER,
};
use gabor_lattice::lattice::{named_lattice, LatticeDescriptor};
use gabor_lattice::ofdm::{interference_report, ChannelModel, OFDMConfig, Scenario};
use gabor_lattice::optimizer::compare_named;
use gabor_lattice::theta::{sample_cell, ThetaForm};
use gabor_lattice::{Error, GaussWidth, Lattice, ThetaSeries, TruncationPolicy};

#[test]
fn descriptor_round_trips_through_lattice() {
    let text = r#"{
        "dim": 2,
        "basis": [1.0, 0.5, 0.0, 0.8660254037844386],
        "name": "hex"
    }"#;
    let d = LatticeDescriptor::from_json(text).unwrap();
    let l = d.to_lattice().unwrap();
    assert_eq!(l.name(), Some("hex"));
    let back = LatticeDescriptor::from_json(&LatticeDescriptor::from_lattice(&l).to_json()).unwrap();
    assert_eq!(back, d);
}

#[test]
fn descriptor_errors_report_position() {
    let err = LatticeDescriptor::from_json("{\n  \"dim\": 2,\n  \"basis\": [1, 0, 0]\n  \"name\": 1\n}").unwrap_err();
    assert!(matches!(&err, Error::Parse(m) if m.starts_with("line 4")), "{err}");
    let unknown = LatticeDescriptor::from_json(r#"{"dim": 2, "basis": [1,0,0,1], "extra": 0}"#).unwrap_err();
    assert!(matches!(unknown, Error::Parse(_)));
    // Wrong basis length is caught when building the lattice.
    let short = LatticeDescriptor::from_json(r#"{"dim": 2, "basis": [1,0,0]}"#).unwrap();
    assert!(short.to_lattice().is_err());
}

#[test]
fn theta_csv_round_trip_and_scaling() {
    let csv = "norm2,count\n0,1\n2,240\n4,2160\n6,6720\n";
    let t = ThetaSeries::from_csv(csv.as_bytes(), "E8", 8, 1.0, 1.0).unwrap();
    let mut out = Vec::new();
    t.write_csv(&mut out).unwrap();
    let again = ThetaSeries::from_csv(out.as_slice(), "E8", 8, 1.0, 1.0).unwrap();
    assert_eq!(again.entries(), t.entries());
    let s = t.scaled_to_density(2.0).unwrap();
    assert!((s.density() - 2.0).abs() < 1e-12);
    assert_eq!(s.entries()[1].1, 240);
}

#[test]
fn theta_csv_rejects_malformed_input() {
    for bad in [
        "norm,count\n0,1\n",
        "norm2,count\n0,1\n2,abc\n",
        "norm2,count\n1,1\n",
        "norm2,count\n0,1\n4,2\n2,2\n",
        "norm2,count\n0,1\n2,3\n",
    ] {
        assert!(ThetaSeries::from_csv(bad.as_bytes(), "t", 2, 1.0, 1.0).is_err(), "{bad:?}");
    }
}

#[test]
fn scenario_file_builds_a_simulation() {
    let text = r#"{
        "lattice": {"dim": 2, "basis": [1.4142135623730951, 0.0, 0.0, 1.4142135623730951]},
        "K": 2,
        "taps": [
            {"delay": 0.0, "doppler": 0.0, "re": 1.0},
            {"delay": 0.05, "doppler": -0.05, "re": 0.3, "im": 0.1}
        ]
    }"#;
    let s = Scenario::from_json(text).unwrap();
    assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    let (cfg, ch) = s.build().unwrap();
    assert_eq!(cfg.symbol_extent(), 2);
    let p: f64 = ch.taps().iter().map(|t| t.gain().norm_sqr()).sum();
    assert!((p - 1.0).abs() < 1e-14);
    let r = interference_report(&cfg, &ch, &TruncationPolicy::default()).unwrap();
    assert!(r.sir_db.is_finite() && r.diagonal_power > 0.0 && r.offdiag_power >= 0.0);
}

#[test]
fn scenario_validation() {
    // Density 1 is not a transmission lattice.
    let unit = r#"{"lattice": {"dim": 2, "basis": [1,0,0,1]}, "K": 3, "taps": [{"delay": 0, "doppler": 0}]}"#;
    assert!(matches!(Scenario::from_json(unit).unwrap().build(), Err(Error::Domain(_))));
    let typo = r#"{"lattice": {"dim": 2, "basis": [2,0,0,2]}, "k": 3, "taps": []}"#;
    assert!(matches!(Scenario::from_json(typo), Err(Error::Parse(_))));
    let no_taps = r#"{"lattice": {"dim": 2, "basis": [2,0,0,2]}, "K": 3, "taps": []}"#;
    assert!(Scenario::from_json(no_taps).unwrap().build().is_err());
}

#[test]
fn comparison_csv_rows() {
    let p = TruncationPolicy::default();
    let rows = compare_named(8, &["Z^8", "E8"], GaussWidth::default(), 1.0, &p).unwrap();
    let mut out = Vec::new();
    write_comparison(&mut out, &rows).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), COMPARISON_HEADER.join(","));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "E8");
    assert_eq!(first[4], rows[0].method.tag());
    assert_eq!(lines.count(), 1);
}

#[test]
fn extremum_landscape_csv_rows() {
    let l = Lattice::from_row_major(2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
    let cell = sample_cell(&l, GaussWidth::default(), ThetaForm::Translate, 16, &TruncationPolicy::default()).unwrap();
    let mut out = Vec::new();
    write_extremum_landscape(&mut out, &cell, "translate", 1e-12).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 256);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",translate,1e-12")));
}

#[test]
fn interference_csv_has_entries_and_summary() {
    let cfg = OFDMConfig::square().unwrap();
    let r = interference_report(&cfg, &ChannelModel::identity(), &TruncationPolicy::default()).unwrap();
    let mut out = Vec::new();
    write_interference(&mut out, &r).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], INTERFERENCE_HEADER.join(","));
    assert_eq!(lines.len(), 2 + r.receivers.len() * r.transmitters.len());
    assert!(lines[1..lines.len() - 1].iter().all(|l| l.starts_with("entry,")));
    assert!(lines.last().unwrap().starts_with("summary,"));
}

#[test]
fn named_lattices_are_at_requested_density() {
    for (name, dim) in [("E8", 8), ("D8", 8), ("Z^8", 8), ("hexagonal", 2), ("Leech", 24)] {
        let n = named_lattice(name, 2.0).unwrap();
        assert_eq!(n.dim(), dim);
        assert!((n.density() - 2.0).abs() < 1e-12, "{name}");
    }
}
