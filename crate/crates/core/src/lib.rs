//! Metric geometry toolkit for piecewise-linear isometric embedding problems.
//!
//! The crate is organized around five layers:
//!
//! - [`spaceform`]: trigonometry of the constant-curvature model planes
//!   (comparison angles, triple embeddability, model triangles).
//! - [`quadruple`]: metric quadruples, the Cayley-Menger determinant,
//!   vertex angle sums, the Wald embedding-curvature solver and
//!   coordinate realization.
//! - [`skeleton`]: weighted graphs with their shortest-path metric, star
//!   quadruples, the local and global compatibility systems and discrete
//!   curvature of polygonal curves.
//! - [`qcbounds`]: quasiconformality coefficients of wedges and polyhedra,
//!   dihedral-angle audits of meshes, normalized link volumes.
//! - [`bzelement`]: the folding vertex maps and the pleated construction
//!   element with its isometry defect.

pub mod bzelement;
pub mod error;
pub mod qcbounds;
pub mod quadruple;
pub mod skeleton;
pub mod spaceform;

mod linalg;

pub use error::{Error, Result};
pub use quadruple::{MetricQuadruple, WaldOptions, WaldResult};
pub use spaceform::{Curvature, MetricTriple};

/// Tolerance on angle identities (radians): angle-sum bounds and angle
/// additivity are decided up to this slack.
pub const ANGLE_TOLERANCE: f64 = 1e-9;
