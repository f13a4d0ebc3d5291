//! Lower bounds for coefficients of quasiconformality: wedges, convex
//! polyhedra, triangle meshes, and normalized link volumes at corners.

mod link;
mod mesh;
mod wedge;

pub use link::{normalized_link_volume, LinkMethod, LinkVolume, DEFAULT_SAMPLES};
pub use mesh::{mesh_edge_dilatation_bound, parse_off, EdgeAngleReport, PolyMesh, SMALL_ANGLE};
pub use wedge::{
    convex_face_count_bound, dihedral_wedge_coefficients, folding_dilatation, uniform_index_bound,
    Angle, DihedralWedgeSpec, DilatationBounds, Rational,
};
