use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gablat",
    version,
    about = "Gaussian Gabor frame bounds over phase-space lattices",
    long_about = "Gaussian Gabor frame bounds over phase-space lattices.\n\n\
        Lattices are given either as a JSON descriptor file \
        {\"dim\": n, \"basis\": [row-major n*n floats], \"name\": \"optional\"} \
        whose basis columns are the generators, or by catalog name \
        (Z^n, square, hexagonal, D4, D8, A8*, E8, Z^24, Leech).\n\n\
        Exit codes: 0 success, 1 usage or input error, 2 numeric failure, 3 resource cap exceeded."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Absolute truncation tolerance for every lattice sum, in (1e-15, 1e-3).
    #[arg(long, global = true, default_value_t = 1e-12, value_parser = parse_tol)]
    pub tol: f64,
    /// Grid resolution per axis for scans and extremum searches (at least 16).
    #[arg(long, global = true, default_value_t = 48, value_parser = parse_grid)]
    pub grid: usize,
    /// Worker threads for data-parallel work (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write CSV here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basic geometry of a lattice.
    #[command(after_long_help = "CSV columns: quantity,value,method,error_bound")]
    Info(InfoArgs),
    /// Frame bounds of the Gaussian Gabor system on a planar lattice.
    #[command(after_long_help = "CSV columns: lattice_id,density,method,A,B,ratio,error_bound\n\
        --landscape columns: zx,zy,value,form,error_bound (value is the frame-operator symbol over a cell of the adjoint lattice)")]
    Bounds(BoundsArgs),
    /// Scan lattice shapes at fixed density for an objective.
    #[command(after_long_help = "CSV columns: role,objective,x,y,A,B,ratio,method,error_bound\n\
        role is `sample` for grid points and `argopt` for the refined optimum")]
    Scan(ScanArgs),
    /// Compare named lattices by the Condition-A upper bound.
    #[command(after_long_help = "CSV columns: name,density,lower,btilde,method,error_bound")]
    Compare(CompareArgs),
    /// Interference of a lattice-OFDM scenario.
    #[command(after_long_help = "CSV columns: row,mu_k,mu_l,nu_k,nu_l,re,im,diagonal_power,offdiag_power,sir_db\n\
        `entry` rows hold <H g_mu, f_nu>; the final `summary` row holds the powers and the SIR in dB")]
    Ofdm(OfdmArgs),
    /// Run the identity suite and fail on any residual breach.
    #[command(after_long_help = "CSV columns: check,residual,threshold,status,method,error_bound")]
    Verify,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    /// Descriptor file or catalog name.
    #[arg(long)]
    pub lattice: String,
    /// Rescale to this density first.
    #[arg(long)]
    pub density: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundsMethodArg {
    /// Exact bounds from the frame-operator symbol.
    Janssen,
    /// Extreme eigenvalues of a truncated Gram matrix.
    Gram,
    /// Closed-form theta approximations.
    Relaxed,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Descriptor file or catalog name of a planar lattice.
    #[arg(long)]
    pub lattice: String,
    /// Rescale to this density.
    #[arg(long, conflicts_with = "densities")]
    pub density: Option<f64>,
    /// Comma-separated densities; one row per density.
    #[arg(long, value_delimiter = ',')]
    pub densities: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = BoundsMethodArg::Janssen)]
    pub method: BoundsMethodArg,
    /// Truncation radius of the Gram matrix (method gram).
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    /// Also write the frame-operator symbol over a cell as CSV.
    #[arg(long)]
    pub landscape: Option<PathBuf>,
    /// Also write a phase-space picture of the lattice atoms as PNG.
    #[arg(long)]
    pub png: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Packing,
    Covering,
    Paving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanMethodArg {
    Janssen,
    Relaxed,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 2.0)]
    pub density: f64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Paving)]
    pub objective: ObjectiveArg,
    #[arg(long, value_enum, default_value_t = ScanMethodArg::Janssen)]
    pub method: ScanMethodArg,
    /// Skip the Nelder–Mead refinement of the best grid sample.
    #[arg(long)]
    pub no_refine: bool,
    /// Also write the landscape as a PNG heatmap.
    #[arg(long)]
    pub png: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Phase-space dimension.
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    /// Comma-separated catalog names (default: the catalog lattices of that dimension).
    #[arg(long, value_delimiter = ',')]
    pub names: Option<Vec<String>>,
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    /// Gaussian width parameter of the theta sums.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OfdmLatticeArg {
    Square,
    Hexagonal,
}

#[derive(Debug, Args)]
pub struct OfdmArgs {
    /// JSON scenario {"lattice": {...}, "K": k, "taps": [{"delay", "doppler", "re", "im"}]}.
    #[arg(long, conflicts_with = "lattice")]
    pub scenario: Option<PathBuf>,
    /// Built-in transmission lattice at density 1/2 with the default channel.
    #[arg(long, value_enum, default_value_t = OfdmLatticeArg::Hexagonal)]
    pub lattice: OfdmLatticeArg,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 1e-15 && v < 1e-3 {
        Ok(v)
    } else {
        Err(format!("tolerance must lie in (1e-15, 1e-3), got {v}"))
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 16 {
        Ok(v)
    } else {
        Err(format!("grid must be at least 16, got {v}"))
    }
}
