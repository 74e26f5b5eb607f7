use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gabor_lattice::export::{
    fmt_f64, write_comparison, write_extremum_landscape, write_frame_bounds, write_interference, write_landscape,
};
use gabor_lattice::gabor::{
    ambiguity_gauss, figa_default_radius, figa_residual, gram_spectral_bounds, janssen_frame_bounds,
    moyal_wigner_check, relaxed_bounds, stft_quadrature, FrameBounds, Grid1D, SampledFunction,
};
use gabor_lattice::lattice::{deep_holes_2d, lattice_from_tau, named_lattice, LatticeDescriptor, NamedLattice};
use gabor_lattice::ofdm::{interference_report, ChannelModel, OFDMConfig, Scenario};
use gabor_lattice::optimizer::{compare_named, scan_shapes, BoundMethod, Objective, ObjectiveKind};
use gabor_lattice::theta::{sample_cell, symplectic_psf_check, ThetaForm};
use gabor_lattice::{GaussWidth, Lattice, PhasePoint, TruncationPolicy};

use crate::args::{
    BoundsArgs, BoundsMethodArg, Cli, Command, CompareArgs, GlobalOpts, InfoArgs, ObjectiveArg, OfdmArgs,
    OfdmLatticeArg, ScanArgs, ScanMethodArg,
};
use crate::Failure;

/// Width of the frame-operator symbol on the adjoint lattice.
const SYMBOL_WIDTH: f64 = 0.5;

pub fn run(cli: Cli) -> Result<(), Failure> {
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot configure {} threads: {e}", cli.global.threads)))?;
    }
    let p = TruncationPolicy::with_tol(cli.global.tol)?;
    let g = &cli.global;
    match &cli.command {
        Command::Info(a) => info(g, a),
        Command::Bounds(a) => bounds(g, a, &p),
        Command::Scan(a) => scan(g, a, &p),
        Command::Compare(a) => compare(g, a, &p),
        Command::Ofdm(a) => ofdm(g, a, &p),
        Command::Verify => verify(g, &p),
    }
}

/// Buffered CSV sink: the `--output` file or standard output.
fn sink(g: &GlobalOpts) -> Result<Box<dyn Write>, Failure> {
    Ok(match &g.output {
        Some(path) => Box::new(BufWriter::new(create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))
}

/// A descriptor path (anything naming an existing file or ending in `.json`)
/// or a catalog name; `square` is an alias for `Z^2`.
fn load(arg: &str, density: Option<f64>) -> Result<NamedLattice, Failure> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".json") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let d = LatticeDescriptor::from_json(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let mut l = d.to_lattice()?;
        if l.name().is_none() {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("lattice").to_string();
            l = l.with_name(stem);
        }
        if let Some(dens) = density {
            let name = l.name().map(str::to_string);
            l = l.scaled_to_density(dens)?;
            if let Some(n) = name {
                l = l.with_name(n);
            }
        }
        return Ok(NamedLattice::Lattice(l));
    }
    let name = if arg.eq_ignore_ascii_case("square") { "Z^2" } else { arg };
    // Catalog entries default to density 1.
    Ok(named_lattice(name, density.unwrap_or(1.0))?)
}

fn planar(n: NamedLattice) -> Result<Lattice, Failure> {
    match n.as_lattice() {
        Some(l) if l.dim() == 2 => Ok(l.clone()),
        _ => Err(Failure::Usage(format!(
            "`{}` is not a planar lattice; this command needs phase-space dimension 2",
            n.name()
        ))),
    }
}

fn renamed(l: Lattice, name: &str) -> Lattice {
    l.with_name(name.to_string())
}

fn info(g: &GlobalOpts, a: &InfoArgs) -> Result<(), Failure> {
    let n = load(&a.lattice, a.density)?;
    let mut rows: Vec<(String, String, &str, f64)> = vec![
        ("name".into(), n.name().to_string(), "input", 0.0),
        ("dim".into(), n.dim().to_string(), "input", 0.0),
        ("density".into(), fmt_f64(n.density()), "exact", 0.0),
    ];
    match &n {
        NamedLattice::Lattice(l) => {
            rows.push(("covolume".into(), fmt_f64(l.covolume()), "exact", 0.0));
            rows.push(("minimal_norm".into(), fmt_f64(l.minimal_norm()?), "enumeration", 0.0));
            rows.push(("symplectic".into(), l.is_symplectic(1e-10).to_string(), "exact", 1e-10));
            if l.dim() == 2 {
                let h = deep_holes_2d(l)?;
                rows.push(("covering_radius".into(), fmt_f64(h.covering_radius), "voronoi", 1e-12));
                rows.push(("deep_hole_classes".into(), h.holes.len().to_string(), "voronoi", 0.0));
            }
        }
        NamedLattice::Table(t) => {
            rows.push(("covolume".into(), fmt_f64(t.covolume()), "exact", 0.0));
            let min = t.entries().get(1).map(|e| e.0.sqrt()).unwrap_or(f64::NAN);
            rows.push(("minimal_norm".into(), fmt_f64(min), "theta-table", 0.0));
            rows.push(("table_complete_to_norm2".into(), fmt_f64(t.complete_to()), "theta-table", 0.0));
        }
    }
    let mut out = sink(g)?;
    writeln!(out, "quantity,value,method,error_bound")?;
    for (q, v, m, e) in rows {
        writeln!(out, "{q},{v},{m},{}", fmt_f64(e))?;
    }
    out.flush()?;
    Ok(())
}

fn frame_bounds(l: &Lattice, a: &BoundsArgs, g: &GlobalOpts, p: &TruncationPolicy) -> Result<FrameBounds, Failure> {
    Ok(match a.method {
        BoundsMethodArg::Janssen => janssen_frame_bounds(l, p, g.grid)?,
        BoundsMethodArg::Gram => gram_spectral_bounds(l, a.radius)?,
        BoundsMethodArg::Relaxed => relaxed_bounds(l, GaussWidth::default(), g.grid, p)?,
    })
}

fn bounds(g: &GlobalOpts, a: &BoundsArgs, p: &TruncationPolicy) -> Result<(), Failure> {
    let base = planar(load(&a.lattice, a.density)?)?;
    let id = base.name().unwrap_or("lattice").to_string();
    // Rows report the requested density, not the rescaled covolume's inverse.
    let lattices = match &a.densities {
        Some(ds) => ds
            .iter()
            .map(|&d| Ok((d, renamed(base.scaled_to_density(d)?, &id))))
            .collect::<Result<Vec<_>, Failure>>()?,
        None => vec![(a.density.unwrap_or_else(|| base.density()), base.clone())],
    };
    let mut rows = Vec::with_capacity(lattices.len());
    for (d, l) in &lattices {
        rows.push((id.clone(), *d, frame_bounds(l, a, g, p)?));
    }
    let mut out = sink(g)?;
    write_frame_bounds(&mut out, &rows)?;
    out.flush()?;

    if let Some(path) = &a.landscape {
        let l = &lattices[0].1;
        let delta = l.density();
        let adj = l.adjoint_lattice()?;
        let cell = sample_cell(&adj, GaussWidth::new(SYMBOL_WIDTH)?, ThetaForm::DualPhase, g.grid, p)?;
        let scaled: Vec<([f64; 2], f64)> = cell.into_iter().map(|(z, v)| (z, delta * v)).collect();
        let mut w = BufWriter::new(create(path)?);
        write_extremum_landscape(&mut w, &scaled, "frame-symbol", delta * p.tol)?;
        w.flush()?;
    }
    if let Some(path) = &a.png {
        crate::plot::phase_space_png(&lattices[0].1, p, path)?;
    }
    Ok(())
}

fn scan(g: &GlobalOpts, a: &ScanArgs, p: &TruncationPolicy) -> Result<(), Failure> {
    let kind = match a.objective {
        ObjectiveArg::Packing => ObjectiveKind::QuantumPacking,
        ObjectiveArg::Covering => ObjectiveKind::QuantumCovering,
        ObjectiveArg::Paving => ObjectiveKind::QuantumPaving,
    };
    let method = match a.method {
        ScanMethodArg::Janssen => BoundMethod::Janssen,
        ScanMethodArg::Relaxed => BoundMethod::Relaxed,
    };
    let landscape = scan_shapes(a.density, Objective::new(kind, method), g.grid, !a.no_refine, p)?;
    for (s, why) in &landscape.flagged {
        eprintln!("gablat: shape ({}, {}) skipped: {why}", fmt_f64(s.x), fmt_f64(s.y));
    }
    let mut out = sink(g)?;
    write_landscape(&mut out, &landscape)?;
    out.flush()?;
    if let Some(path) = &a.png {
        crate::plot::landscape_png(&landscape, g.grid, path)?;
    }
    Ok(())
}

fn default_names(dim: usize) -> Result<Vec<String>, Failure> {
    let names: &[&str] = match dim {
        2 => &["hexagonal", "Z^2"],
        4 => &["D4", "Z^4"],
        8 => &["E8", "D8", "A8*", "Z^8"],
        24 => &["Leech", "Z^24"],
        _ => return Err(Failure::Usage(format!("no default lattices in dimension {dim}; pass --names"))),
    };
    Ok(names.iter().map(|s| s.to_string()).collect())
}

fn compare(g: &GlobalOpts, a: &CompareArgs, p: &TruncationPolicy) -> Result<(), Failure> {
    let names = match &a.names {
        Some(n) => n.clone(),
        None => default_names(a.dim)?,
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rows = compare_named(a.dim, &refs, GaussWidth::new(a.alpha)?, a.density, p)?;
    let mut out = sink(g)?;
    write_comparison(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn ofdm(g: &GlobalOpts, a: &OfdmArgs, p: &TruncationPolicy) -> Result<(), Failure> {
    let (cfg, ch) = match &a.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Scenario::from_json(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
                .build()?
        }
        None => {
            let cfg = match a.lattice {
                OfdmLatticeArg::Square => OFDMConfig::square()?,
                OfdmLatticeArg::Hexagonal => OFDMConfig::hexagonal()?,
            };
            (cfg, ChannelModel::default_spread())
        }
    };
    let report = interference_report(&cfg, &ch, p)?;
    let mut out = sink(g)?;
    write_interference(&mut out, &report)?;
    out.flush()?;
    Ok(())
}

struct CheckRow {
    check: String,
    residual: f64,
    threshold: f64,
    method: &'static str,
}

/// Identity suite: quadrature against closed forms, the symplectic Poisson
/// summation formula, the fundamental identity, Moyal's identity and the
/// exact square-lattice bounds against one-dimensional theta values.
fn verify(g: &GlobalOpts, p: &TruncationPolicy) -> Result<(), Failure> {
    let grid = Grid1D::standard();
    let phi = SampledFunction::gaussian(grid);
    let h1 = SampledFunction::hermite1(grid);
    let mut rows = Vec::new();

    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let z = PhasePoint::new(vec![-3.0 + 0.61 * i as f64], vec![-2.95 + 0.6 * j as f64]);
            worst = worst.max((stft_quadrature(&phi, &phi, &z)? - ambiguity_gauss(&z)).norm());
        }
    }
    rows.push(CheckRow {
        check: "ambiguity-vs-quadrature".into(),
        residual: worst,
        threshold: 1e-10,
        method: "quadrature",
    });

    let psf_threshold = (10.0 * p.tol).max(1e-12);
    let lattices = [
        ("square", lattice_from_tau(0.0, 1.0, 2.0)?),
        ("hexagonal", lattice_from_tau(0.5, 3f64.sqrt() / 2.0, 2.0)?),
        ("skew", lattice_from_tau(0.31, 1.27, 3.3)?),
        ("thin", lattice_from_tau(-0.2, 1.9, 1.5)?),
    ];
    for (name, l) in &lattices {
        let mut worst: f64 = 0.0;
        for alpha in [0.5, 1.0, 2.0] {
            let z = PhasePoint::new(vec![0.37], vec![-0.21]);
            worst = worst.max(symplectic_psf_check(l, &z, GaussWidth::new(alpha)?, p)?);
        }
        rows.push(CheckRow {
            check: format!("poisson-summation-{name}"),
            residual: worst,
            threshold: psf_threshold,
            method: "theta-sum",
        });
    }

    let radius = figa_default_radius(grid);
    for (name, l) in &lattices[..3] {
        let l = l.scaled_to_density(2.0)?;
        let r = figa_residual(&phi, &phi, &phi, &phi, &l, radius)?.max(figa_residual(&h1, &phi, &phi, &h1, &l, radius)?);
        rows.push(CheckRow {
            check: format!("fundamental-identity-{name}"),
            residual: r,
            threshold: 1e-8,
            method: "quadrature",
        });
    }

    let m1 = moyal_wigner_check(&phi, &phi, &phi, &phi)?;
    let m2 = moyal_wigner_check(&h1, &phi, &phi, &h1)?;
    rows.push(CheckRow {
        check: "moyal".into(),
        residual: m1.residual.max(m2.residual).max(m1.norm_residual).max(m2.norm_residual),
        threshold: 1e-8,
        method: "quadrature",
    });

    let sq = janssen_frame_bounds(&lattices[0].1, p, g.grid)?;
    let theta = |alt: bool| -> f64 {
        (-6i32..=6)
            .map(|n| if alt && n % 2 != 0 { -1.0 } else { 1.0 } * (-std::f64::consts::PI * (n * n) as f64).exp())
            .sum()
    };
    rows.push(CheckRow {
        check: "square-bounds-vs-1d-theta".into(),
        residual: (sq.a - 2.0 * theta(true).powi(2)).abs().max((sq.b - 2.0 * theta(false).powi(2)).abs()),
        threshold: 1e-9,
        method: sq.method.tag(),
    });

    let mut out = sink(g)?;
    writeln!(out, "check,residual,threshold,status,method,error_bound")?;
    let mut failed = Vec::new();
    for r in &rows {
        let ok = r.residual <= r.threshold;
        if !ok {
            failed.push(r.check.clone());
        }
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.check,
            fmt_f64(r.residual),
            fmt_f64(r.threshold),
            if ok { "pass" } else { "fail" },
            r.method,
            fmt_f64(p.tol)
        )?;
    }
    out.flush()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Numeric(format!("identity checks failed: {}", failed.join(", "))))
    }
}
