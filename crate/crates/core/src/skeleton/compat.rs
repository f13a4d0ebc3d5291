use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::graph::MetricGraph;
use crate::error::{Error, Result};
use crate::quadruple::{
    nondegenerate, s3_embeddability, vertex_angles, vertex_excess, EmbeddabilityCertificate,
    MetricQuadruple,
};
use crate::spaceform::{triple_embeddable, Curvature};
use crate::ANGLE_TOLERANCE;

/// A base vertex and three of its neighbors, with the restriction of the
/// graph metric. Point 0 of `quadruple` is the base; points 1..=3 are the
/// neighbors in ascending index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarQuadruple {
    pub base: usize,
    pub neighbors: [usize; 3],
    pub quadruple: MetricQuadruple,
}

/// All C(deg v, 3) star quadruples at `v`, ordered lexicographically by
/// neighbor indices.
pub fn star_quadruples(g: &MetricGraph, v: usize) -> Result<Vec<StarQuadruple>> {
    g.check_vertex(v)?;
    let nb = g.neighbors(v);
    let mut out = Vec::new();
    for a in 0..nb.len() {
        for b in a + 1..nb.len() {
            for c in b + 1..nb.len() {
                let pts = [v, nb[a], nb[b], nb[c]];
                let mut m = [[0.0; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        m[i][j] = g.distance(pts[i], pts[j]);
                    }
                }
                let quadruple = MetricQuadruple::from_matrix(m)?;
                out.push(StarQuadruple {
                    base: v,
                    neighbors: [nb[a], nb[b], nb[c]],
                    quadruple,
                });
            }
        }
    }
    Ok(out)
}

/// Failing (quadruple, point) pair of a region-of-curvature test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionWitness {
    /// Position in the input list.
    pub quadruple: usize,
    /// Point of the quadruple (0 is the base).
    pub point: usize,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub holds: bool,
    pub witness: Option<RegionWitness>,
    /// Positions of degenerate quadruples that were not evaluated.
    pub skipped: Vec<usize>,
}

/// True iff every nondegenerate quadruple has all four angle sums
/// `V_κ ≤ 2π` (up to the angle tolerance).
pub fn region_of_curvature(quads: &[StarQuadruple], kappa: Curvature) -> Result<RegionVerdict> {
    let mut skipped = Vec::new();
    for (n, sq) in quads.iter().enumerate() {
        if !nondegenerate(&sq.quadruple) {
            skipped.push(n);
            continue;
        }
        let excess = vertex_excess(&sq.quadruple, kappa)?;
        if let Some(point) = excess
            .sums
            .iter()
            .position(|&s| s > 2.0 * PI + ANGLE_TOLERANCE)
        {
            return Ok(RegionVerdict {
                holds: false,
                witness: Some(RegionWitness {
                    quadruple: n,
                    point,
                    excess: excess.sums[point],
                }),
                skipped,
            });
        }
    }
    Ok(RegionVerdict {
        holds: true,
        witness: None,
        skipped,
    })
}

/// One inequality of the local system at a base vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Condition {
    /// Largest flat angle sum over the quadruple, `A_0 ≤ 2π`.
    FlatExcess,
    /// Flat comparison angle number `angle` at the base is at most the sum
    /// of the other two (angles ordered as in `vertex_angles`).
    AngleTriangle { angle: usize },
    /// Angle sum at the base at the prescribed curvature, `V_κ(v) ≤ 2π`.
    CurvedExcess,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionSlack {
    pub condition: Condition,
    /// Signed slack; negative means violated.
    pub value: f64,
}

/// Checks made on one star quadruple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarCheck {
    pub neighbors: [usize; 3],
    pub distances: [f64; 6],
    /// Flat embeddability certificate of the whole quadruple.
    pub certificate: EmbeddabilityCertificate,
    /// `V_κ` at the base.
    pub base_excess: f64,
    /// Flat excess, the three angle inequalities at the base, curved excess.
    pub slacks: Vec<ConditionSlack>,
    pub verdict: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub vertex: usize,
    pub label: String,
    pub neighbors: [usize; 3],
    pub distances: [f64; 6],
    pub kappa: f64,
    pub condition: Condition,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    pub vertex: usize,
    pub label: String,
    pub kappa: f64,
    pub verdict: bool,
    pub quadruples: Vec<StarCheck>,
    /// Neighbor triples whose quadruple is degenerate and was not checked.
    pub skipped: Vec<[usize; 3]>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub verdict: bool,
    pub vertices: Vec<VertexReport>,
    pub first_failure: Option<Witness>,
}

fn star_error(g: &MetricGraph, sq: &StarQuadruple, e: Error) -> Error {
    Error::StarQuadruple {
        vertex: g.label(sq.base).to_string(),
        neighbors: sq.neighbors.map(|n| g.label(n).to_string()),
        message: e.to_string(),
    }
}

fn check_star(g: &MetricGraph, sq: &StarQuadruple, kappa: Curvature) -> Result<StarCheck> {
    let q = &sq.quadruple;
    let certificate = s3_embeddability(q, Curvature::FLAT).map_err(|e| star_error(g, sq, e))?;
    for (j, l) in [(1, 2), (1, 3), (2, 3)] {
        if !triple_embeddable(kappa, &q.triple(0, j, l)) {
            let e = Error::Domain(format!(
                "triple at the base exceeds the perimeter bound for curvature {}",
                kappa.value()
            ));
            return Err(star_error(g, sq, e));
        }
    }
    let base_excess: f64 = vertex_angles(q, kappa, 0)
        .map_err(|e| star_error(g, sq, e))?
        .iter()
        .sum();

    let flat = certificate.angles[0];
    let total: f64 = flat.iter().sum();
    let mut slacks = vec![ConditionSlack {
        condition: Condition::FlatExcess,
        value: 2.0 * PI - certificate.excess.max,
    }];
    slacks.extend((0..3).map(|angle| ConditionSlack {
        condition: Condition::AngleTriangle { angle },
        value: total - 2.0 * flat[angle],
    }));
    slacks.push(ConditionSlack {
        condition: Condition::CurvedExcess,
        value: 2.0 * PI - base_excess,
    });
    let verdict = slacks.iter().all(|s| s.value >= -ANGLE_TOLERANCE);
    Ok(StarCheck {
        neighbors: sq.neighbors,
        distances: q.distances(),
        certificate,
        base_excess,
        slacks,
        verdict,
    })
}

/// Runs the local system at `v`: over every nondegenerate star quadruple,
/// the flat excess bound, the flat angle triangle inequalities at `v`, and
/// the angle sum bound at `v` for the prescribed curvature.
pub fn local_compatibility(g: &MetricGraph, v: usize, kappa: Curvature) -> Result<VertexReport> {
    let quads = star_quadruples(g, v)?;
    let mut checks = Vec::with_capacity(quads.len());
    let mut skipped = Vec::new();
    let mut witness = None;
    for sq in &quads {
        if !nondegenerate(&sq.quadruple) {
            skipped.push(sq.neighbors);
            continue;
        }
        let check = check_star(g, sq, kappa)?;
        if witness.is_none() {
            if let Some(s) = check.slacks.iter().find(|s| s.value < -ANGLE_TOLERANCE) {
                witness = Some(Witness {
                    vertex: v,
                    label: g.label(v).to_string(),
                    neighbors: sq.neighbors,
                    distances: check.distances,
                    kappa: kappa.value(),
                    condition: s.condition,
                    slack: s.value,
                });
            }
        }
        checks.push(check);
    }
    Ok(VertexReport {
        vertex: v,
        label: g.label(v).to_string(),
        kappa: kappa.value(),
        verdict: witness.is_none(),
        quadruples: checks,
        skipped,
        witness,
    })
}

/// Curvature prescription for the global system.
#[derive(Clone, Debug, PartialEq)]
pub enum KappaAssignment {
    Constant(f64),
    /// Values by vertex label.
    PerVertex(HashMap<String, f64>),
}

impl KappaAssignment {
    /// The per-vertex values declared in a structured graph document.
    pub fn declared(g: &MetricGraph) -> Self {
        let map = (0..g.vertex_count())
            .filter_map(|v| g.declared_kappa(v).map(|k| (g.label(v).to_string(), k)))
            .collect();
        KappaAssignment::PerVertex(map)
    }

    fn resolve(&self, g: &MetricGraph, v: usize) -> Result<Curvature> {
        match self {
            KappaAssignment::Constant(k) => Curvature::new(*k),
            KappaAssignment::PerVertex(map) => map
                .get(g.label(v))
                .ok_or_else(|| Error::MissingKappa(g.label(v).to_string()))
                .and_then(|&k| Curvature::new(k)),
        }
    }
}

/// Aggregates the local system over all vertices. Vertices are checked in
/// parallel; the report and any error follow vertex index order.
pub fn global_compatibility(
    g: &MetricGraph,
    kappa: &KappaAssignment,
) -> Result<CompatibilityReport> {
    let kappas = (0..g.vertex_count())
        .map(|v| kappa.resolve(g, v))
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Result<VertexReport>> = kappas
        .par_iter()
        .enumerate()
        .map(|(v, &k)| local_compatibility(g, v, k))
        .collect();
    let vertices = results.into_iter().collect::<Result<Vec<_>>>()?;
    let first_failure = vertices.iter().find_map(|r| r.witness.clone());
    Ok(CompatibilityReport {
        verdict: first_failure.is_none(),
        vertices,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::parse_metric_graph;

    fn k4() -> MetricGraph {
        parse_metric_graph("a b 1\na c 1\na d 1\nb c 1\nb d 1\nc d 1\n").unwrap()
    }

    /// Hub `h` at distance 1 from three leaves that are pairwise 1.99 apart.
    fn tripod_star() -> MetricGraph {
        parse_metric_graph("h x 1\nh y 1\nh z 1\nx y 1.99\ny z 1.99\nx z 1.99\n").unwrap()
    }

    fn star(deg: usize) -> MetricGraph {
        let edges: Vec<(String, String, f64)> = (0..deg)
            .map(|i| ("c".to_string(), format!("n{i}"), 1.0))
            .collect();
        MetricGraph::from_edges(&edges).unwrap()
    }

    #[test]
    fn star_counts() {
        assert_eq!(star_quadruples(&star(3), 0).unwrap().len(), 1);
        assert_eq!(star_quadruples(&star(5), 0).unwrap().len(), 10);
        assert!(star_quadruples(&star(2), 0).unwrap().is_empty());
        assert!(matches!(
            star_quadruples(&star(2), 9),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn star_ordering_is_lexicographic() {
        let quads = star_quadruples(&star(4), 0).unwrap();
        let order: Vec<[usize; 3]> = quads.iter().map(|q| q.neighbors).collect();
        assert_eq!(order, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]);
    }

    #[test]
    fn empty_region_is_vacuous() {
        let r = region_of_curvature(&[], Curvature::FLAT).unwrap();
        assert!(r.holds && r.witness.is_none());
    }

    #[test]
    fn k4_region_holds() {
        let g = k4();
        let r = region_of_curvature(&star_quadruples(&g, 0).unwrap(), Curvature::FLAT).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn tripod_region_fails_at_hub() {
        let g = tripod_star();
        let r = region_of_curvature(&star_quadruples(&g, 0).unwrap(), Curvature::FLAT).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.point, 0);
        let oracle = 3.0 * (1.0 - 1.99f64 * 1.99 / 2.0).acos();
        assert!((w.excess - oracle).abs() < 1e-12);
    }

    #[test]
    fn star_graph_metric_is_degenerate() {
        // leaves are 2 apart through the center, so every quadruple is flat-collinear
        let r =
            region_of_curvature(&star_quadruples(&star(4), 0).unwrap(), Curvature::FLAT).unwrap();
        assert!(r.holds);
        assert_eq!(r.skipped.len(), 4);
    }

    #[test]
    fn k4_local_and_global() {
        let g = k4();
        let local = local_compatibility(&g, 2, Curvature::FLAT).unwrap();
        assert!(local.verdict);
        assert_eq!(local.quadruples.len(), 1);
        let report = global_compatibility(&g, &KappaAssignment::Constant(0.0)).unwrap();
        assert!(report.verdict);
        assert_eq!(report.vertices.len(), 4);
    }

    #[test]
    fn tripod_hub_violates_flat_excess() {
        let g = tripod_star();
        let local = local_compatibility(&g, 0, Curvature::FLAT).unwrap();
        assert!(!local.verdict);
        assert_eq!(local.witness.unwrap().condition, Condition::FlatExcess);
        let report = global_compatibility(&g, &KappaAssignment::Constant(0.0)).unwrap();
        assert_eq!(report.first_failure.unwrap().label, "h");
    }

    #[test]
    fn single_edge_is_vacuous() {
        let g = parse_metric_graph("a b 1\n").unwrap();
        assert!(
            global_compatibility(&g, &KappaAssignment::Constant(1.0))
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn missing_kappa_names_vertex() {
        let g = k4();
        let map = [("a", 0.0), ("b", 0.0), ("d", 0.0)]
            .into_iter()
            .map(|(l, k)| (l.to_string(), k))
            .collect();
        let err = global_compatibility(&g, &KappaAssignment::PerVertex(map)).unwrap_err();
        assert_eq!(err, Error::MissingKappa("c".into()));
    }

    #[test]
    fn spherical_domain_error_names_quadruple() {
        let g = k4().clone();
        let err = local_compatibility(&g, 0, Curvature::new(10.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::StarQuadruple { .. }), "{err:?}");
    }
}
