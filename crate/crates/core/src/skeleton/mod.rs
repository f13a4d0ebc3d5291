//! Metric graphs, their star quadruples, and the local and global
//! curvature compatibility systems.

mod compat;
mod curve;
mod graph;

pub use compat::{
    global_compatibility, local_compatibility, region_of_curvature, star_quadruples,
    CompatibilityReport, Condition, ConditionSlack, KappaAssignment, RegionVerdict, RegionWitness,
    StarCheck, StarQuadruple, VertexReport, Witness,
};
pub use curve::{polyline_curvature, CurvatureMode, CurveTriple};
pub use graph::{parse_edge_list, parse_graph_json, parse_metric_graph, Edge, MetricGraph};
