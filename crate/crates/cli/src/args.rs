use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metric_embed::qcbounds::Angle;

/// Metric geometry checks for piecewise-linear isometric embeddings.
///
/// Every command prints one JSON document (schema_version 1). Exit status:
/// 0 success, 1 computed verdict is false, 2 input or domain error,
/// 64 usage error.
#[derive(Debug, Parser)]
#[command(name = "metric-embed", version)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embedding curvature of a metric quadruple.
    Wald(WaldArgs),
    /// Embeddability of a quadruple in the 3-dimensional model space.
    EmbedCheck(EmbedArgs),
    /// Local compatibility system at one vertex of a metric graph.
    CheckLocal(LocalArgs),
    /// Local systems at every vertex of a metric graph.
    CheckGlobal(GlobalArgs),
    /// Dihedral-angle bound on the quasiconformality coefficient of a mesh.
    QcBound(QcBoundArgs),
    /// Coefficients of wedges, dihedral wedges, convex polyhedra and folds.
    Wedge(WedgeArgs),
    /// Upper bound on the infimum of the local topological index.
    IndexBound(IndexArgs),
    /// Normalized link volume (solid angle / 4π) at mesh vertices.
    LinkVolume(LinkArgs),
    /// Standard vertex map or contraction map on a cone.
    Fold(FoldArgs),
    /// Pleated construction element and its isometry defect.
    BzElement(BzArgs),
    /// Discrete curvature of a polygonal curve at its middle point.
    CurveCurvature(CurveArgs),
}

pub fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

pub fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

/// Comma-separated numbers; `len` fixes the count when given.
pub fn numbers(s: &str, len: Option<usize>) -> Result<Vec<f64>, String> {
    let xs = s
        .split(',')
        .map(|t| finite(t.trim()))
        .collect::<Result<Vec<f64>, String>>()?;
    match len {
        Some(n) if xs.len() != n => Err(format!("expected {n} comma-separated numbers, got {}", xs.len())),
        _ => Ok(xs),
    }
}

fn triple(s: &str) -> Result<[f64; 3], String> {
    let v = numbers(s, Some(3))?;
    Ok([v[0], v[1], v[2]])
}

fn pair(s: &str) -> Result<[f64; 2], String> {
    let v = numbers(s, Some(2))?;
    Ok([v[0], v[1]])
}

#[derive(Debug, Args)]
pub struct WaldArgs {
    /// Distances d12,d13,d14,d23,d24,d34.
    #[arg(long, short)]
    pub quadruple: String,
    /// Scan samples over the search interval.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Most negative curvature searched (default 1e4 / (min d)²).
    #[arg(long, value_parser = positive)]
    pub kappa_cap: Option<f64>,
    #[arg(long, value_parser = positive, default_value_t = 1e-8)]
    pub residual_tol: f64,
    /// Flatness test |CM| ≤ tol · (max d)⁶.
    #[arg(long, value_parser = positive, default_value_t = 1e-9)]
    pub flat_tol: f64,
    #[arg(long, value_parser = positive, default_value_t = 1e-8)]
    pub realization_tol: f64,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Distances d12,d13,d14,d23,d24,d34.
    #[arg(long, short)]
    pub quadruple: String,
    #[arg(long, short, value_parser = finite, allow_hyphen_values = true, default_value_t = 0.0)]
    pub kappa: f64,
}

#[derive(Debug, Args)]
pub struct LocalArgs {
    /// Edge list or JSON graph document.
    #[arg(long, short)]
    pub graph: PathBuf,
    /// Vertex label.
    #[arg(long, short)]
    pub vertex: String,
    /// Curvature; defaults to the value declared for the vertex.
    #[arg(long, short, value_parser = finite, allow_hyphen_values = true)]
    pub kappa: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Edge list or JSON graph document.
    #[arg(long, short)]
    pub graph: PathBuf,
    /// Constant curvature for every vertex.
    #[arg(long, short, value_parser = finite, allow_hyphen_values = true, conflicts_with = "kappa_file")]
    pub kappa: Option<f64>,
    /// JSON object mapping vertex labels to curvatures.
    #[arg(long)]
    pub kappa_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct QcBoundArgs {
    /// OFF mesh.
    #[arg(long, short)]
    pub mesh: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["angle", "faces", "fold"])))]
pub struct WedgeArgs {
    /// Ambient dimension.
    #[arg(long, short, default_value_t = 3)]
    pub dim: usize,
    /// Dihedral angle, radians or a multiple of pi (`pi/2`, `2pi/3`).
    /// Repeat for dihedral wedges of lower type.
    #[arg(long, short)]
    pub angle: Vec<Angle>,
    /// Wedge type k; defaults to dim − 1 − (number of angles).
    #[arg(long, short = 't')]
    pub wedge_type: Option<usize>,
    /// Face count of a convex polyhedron.
    #[arg(long, short)]
    pub faces: Option<u64>,
    /// Folding from angle alpha to angle beta, as `alpha,beta`.
    #[arg(long, value_delimiter = ',')]
    pub fold: Vec<Angle>,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long, short)]
    pub dim: u32,
    /// Inner dilatation K_I ≥ 1.
    #[arg(long, value_parser = positive)]
    pub k_i: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// OFF mesh.
    #[arg(long, short)]
    pub mesh: PathBuf,
    /// Vertex index (0-based); every vertex when omitted.
    #[arg(long, short)]
    pub vertex: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,
    #[arg(long, default_value_t = metric_embed::qcbounds::DEFAULT_SAMPLES)]
    pub samples: u64,
    /// Monte Carlo seed.
    #[arg(long, env = "METRIC_EMBED_SEED", default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FoldArgs {
    /// Source cone angle.
    #[arg(long, value_parser = positive)]
    pub theta: f64,
    /// Target cone angle (standard map only).
    #[arg(long, value_parser = positive, required_unless_present = "contraction")]
    pub lambda: Option<f64>,
    #[arg(long, value_parser = positive, default_value_t = 1.0)]
    pub a: f64,
    /// Use the contraction map (theta > 2pi) instead of the standard map.
    #[arg(long, conflicts_with = "lambda")]
    pub contraction: bool,
    /// Point `rho,phi`; repeatable.
    #[arg(long, short, required = true, value_parser = pair)]
    pub point: Vec<[f64; 2]>,
}

#[derive(Debug, Args)]
pub struct BzArgs {
    /// Side lengths |A2A3|,|A1A3|,|A1A2| of the source triangle T.
    #[arg(long, value_parser = triple)]
    pub big: [f64; 3],
    /// Side lengths of the base triangle t.
    #[arg(long, value_parser = triple)]
    pub small: [f64; 3],
    /// Also write the element as Wavefront OBJ.
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// Largest difference of corresponding angles (radians).
    #[arg(long, value_parser = positive, default_value_t = 1e-2)]
    pub angle_tol: f64,
    /// Smallest edge ratio t/T.
    #[arg(long, value_parser = positive, default_value_t = 0.5)]
    pub c_min: f64,
    /// Smallest allowed angle of either triangle.
    #[arg(long, value_parser = positive, default_value_t = 0.05)]
    pub min_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveMode {
    Menger,
    FinslerHaantjes,
    Both,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("input").required(true).args(["lengths", "points"])))]
pub struct CurveArgs {
    /// Chords a,b and span l.
    #[arg(long, value_parser = triple)]
    pub lengths: Option<[f64; 3]>,
    /// Three points as `x,y[,z];x,y[,z];x,y[,z]`.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    #[arg(long, value_enum, default_value_t = CurveMode::Both)]
    pub mode: CurveMode,
}
