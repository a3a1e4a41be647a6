//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "herglotz", version, about = "Toeplitz operators on Herglotz wave functions: reproducible experiments")]
pub struct Cli {
    /// Directory receiving the artifacts and manifest.json.
    #[arg(long, global = true, default_value = "herglotz-out")]
    pub out: PathBuf,
    /// Format of tabular artifacts; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Spectral sequence of a radial symbol with closed-form comparison.
    Gamma(GammaArgs),
    /// Sphere-operator eigenvalues from the spectral sequence and the nodal matrix.
    Spectrum(SpectrumArgs),
    /// Reproducing kernel profile against its harmonic series.
    Kernel(KernelArgs),
    /// Forms of the degenerate part of a symbol against the full symbol.
    Degenerate(DegenerateArgs),
    /// Boundedness constant, homogeneous-decay and gauge checks.
    Bounds(BoundsArgs),
    /// Algebra of multiplication operators and convolution factorization.
    Hconv(HconvArgs),
    /// Averaged ball norms of a field against the sphere norm.
    Isometry(IsometryArgs),
    /// Far-field remainder on growing shells.
    Farfield(FarfieldArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GammaArgs {
    /// Dimension, 2 or 3.
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Radial symbol, e.g. power:mu=2, gauss:s=1, exp:rate=1, indicator:rho=1, chirp.
    #[arg(long, default_value = "power:mu=2")]
    pub symbol: String,
    #[arg(long, default_value_t = 20)]
    pub nmax: usize,
    /// Relative tolerance of the tail extrapolation.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value = "gauss:s=1")]
    pub symbol: String,
    /// Sphere grid resolution of the nodal matrix.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Largest degree of the spectral sequence.
    #[arg(long, default_value_t = 32)]
    pub nmax: usize,
    /// Number of leading eigenvalues compared.
    #[arg(long, default_value_t = 20)]
    pub top: usize,
    /// Relative gap accepted on the compared eigenvalues.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Largest distance |x - y| tabulated.
    #[arg(long, default_value_t = 20.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Truncation degree of the harmonic series.
    #[arg(long, default_value_t = 40)]
    pub nmax: usize,
    /// Series values are compared where |x|, |y| <= this radius.
    #[arg(long, default_value_t = 3.0)]
    pub series_radius: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DegenerateArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value = "gauss:s=1")]
    pub symbol: String,
    /// Outer radius of the cutoff ramp in frequency; must exceed 2.
    #[arg(long = "R0", default_value_t = 3.0)]
    pub r0: f64,
    /// Forms are taken over basis densities of degree <= nmax.
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    /// Ball radius of the truncated forms.
    #[arg(long = "R", default_value_t = 60.0)]
    pub r: f64,
    /// Radial quadrature nodes per unit length.
    #[arg(long, default_value_t = 12.0)]
    pub nodes_per_unit: f64,
    /// Accepted size of the degenerate forms relative to the L1 norm.
    #[arg(long, default_value_t = 1e-4)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value = "exp:rate=1")]
    pub symbol: String,
    /// Homogeneous decay degree checked against the symbol.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// When given, the nodal operator norm on a grid of this resolution is compared with the bound.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Accepted ratio of the nodal operator norm to the bound.
    #[arg(long, default_value_t = 1.001)]
    pub slack: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct HconvArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// First sphere symbol, e.g. sphere:half, sphere:cos, sphere:2+sin, sphere:phase:k=1.
    #[arg(long, default_value = "sphere:half")]
    pub a: String,
    #[arg(long, default_value = "sphere:cos")]
    pub b: String,
    /// Truncation degrees of the harmonic norm ladder, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    pub ladder: Vec<usize>,
    /// Harmonic index n,j of the first convolution factor.
    #[arg(long, default_value = "0,1")]
    pub u: String,
    #[arg(long, default_value = "0,1")]
    pub v: String,
    /// Ball radii of the factorization check, comma separated.
    #[arg(long = "R", value_delimiter = ',', default_value = "400,800")]
    pub radii: Vec<f64>,
    /// Accepted factorization residual at the first radius.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct IsometryArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Harmonic indices n,j of the unit densities, separated by ';'.
    #[arg(long, value_delimiter = ';', default_value = "0,1;1,1;2,1;3,1")]
    pub fields: Vec<String>,
    #[arg(long = "R", value_delimiter = ',', default_value = "500,1000")]
    pub radii: Vec<f64>,
    /// Sphere grid resolution; chosen from the degree when omitted.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Accepted deviation from the unit norm at the first radius.
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
    /// Accepted ratio of consecutive deviations.
    #[arg(long, default_value_t = 0.7)]
    pub ratio: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct FarfieldArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, value_delimiter = ';', default_value = "0,1;1,1;2,1")]
    pub fields: Vec<String>,
    #[arg(long = "R", value_delimiter = ',', default_value = "100,200")]
    pub radii: Vec<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Accepted ratio of consecutive residuals.
    #[arg(long, default_value_t = 0.8)]
    pub ratio: f64,
}
