use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{v3, Vec3};

/// Edges with an interior angle below this get a conditioning warning.
pub const SMALL_ANGLE: f64 = 1e-6;

/// Angles within this of π count as flat rather than reflex.
const FLAT_TOLERANCE: f64 = 1e-12;

/// Triangle mesh in space. Polygonal input faces are fan-triangulated on
/// ingestion; `source_face` maps each triangle back to its input face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyMesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub source_face: Vec<usize>,
}

impl PolyMesh {
    /// Builds a mesh from polygons given as vertex index lists.
    pub fn new(vertices: Vec<[f64; 3]>, polygons: &[Vec<usize>]) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::Domain(format!("non-finite vertex coordinate {p:?}")));
        }
        let mut faces = Vec::new();
        let mut source_face = Vec::new();
        for (f, poly) in polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(Error::DegenerateFace(f));
            }
            if let Some(&bad) = poly.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::Domain(format!(
                    "face {f} references missing vertex {bad}"
                )));
            }
            for k in 1..poly.len() - 1 {
                faces.push([poly[0], poly[k], poly[k + 1]]);
                source_face.push(f);
            }
        }
        let mesh = PolyMesh {
            vertices,
            faces,
            source_face,
        };
        for (t, face) in mesh.faces.iter().enumerate() {
            let [a, b, c] = face.map(|i| mesh.point(i));
            let scale = (b - a)
                .norm_squared()
                .max((c - a).norm_squared())
                .max((c - b).norm_squared());
            let area2 = (b - a).cross(&(c - a)).norm();
            if face[0] == face[1]
                || face[1] == face[2]
                || face[0] == face[2]
                || !(area2 > 1e-12 * scale)
            {
                return Err(Error::DegenerateFace(mesh.source_face[t]));
            }
        }
        Ok(mesh)
    }

    pub(crate) fn point(&self, i: usize) -> Vec3 {
        v3(self.vertices[i])
    }

    /// Unnormalized normal `(b − a) × (c − a)` of triangle `t`.
    pub(crate) fn face_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.faces[t].map(|i| self.point(i));
        (b - a).cross(&(c - a))
    }

    /// Six times the signed enclosed volume; positive for outward-oriented
    /// closed meshes.
    pub fn signed_volume6(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = f.map(|i| self.point(i));
                a.dot(&b.cross(&c))
            })
            .sum()
    }

    /// Undirected edges with their incident (triangle, directed edge) pairs,
    /// ordered by vertex pair.
    pub(crate) fn edge_map(&self) -> BTreeMap<(usize, usize), Vec<(usize, usize, usize)>> {
        let mut map: BTreeMap<(usize, usize), Vec<(usize, usize, usize)>> = BTreeMap::new();
        for (t, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                map.entry((a.min(b), a.max(b))).or_default().push((t, a, b));
            }
        }
        map
    }

    pub fn is_closed(&self) -> bool {
        self.edge_map().values().all(|inc| inc.len() == 2)
    }

    /// +1 when the face orientation is outward (or the mesh is open), −1
    /// when a closed mesh is oriented inward.
    pub(crate) fn orientation_sign(&self) -> f64 {
        if self.is_closed() && self.signed_volume6() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Same mesh with every face reversed.
    pub fn flipped(&self) -> Self {
        PolyMesh {
            vertices: self.vertices.clone(),
            faces: self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
            source_face: self.source_face.clone(),
        }
    }
}

/// Reads an ASCII OFF document. An optional `OFF` header may carry the
/// counts on the same line; `#` starts a comment; trailing per-face color
/// values are ignored.
pub fn parse_off(text: &str) -> Result<PolyMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let eof = |what: &str| Error::Parse {
        line: text.lines().count().max(1),
        message: format!("unexpected end of input, expected {what}"),
    };
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (mut line, mut head) = lines.next().ok_or_else(|| eof("OFF header"))?;
    if let Some(rest) = head.strip_prefix("OFF") {
        if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
            return Err(parse_err(line, format!("unsupported header {head:?}")));
        }
        head = rest.trim();
        if head.is_empty() {
            (line, head) = lines.next().ok_or_else(|| eof("counts"))?;
        }
    }
    let counts: Vec<usize> = head
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(line, format!("invalid counts {head:?}")))?;
    let (nv, nf) = match counts.as_slice() {
        [nv, nf] | [nv, nf, _] => (*nv, *nf),
        _ => return Err(parse_err(line, "expected `vertices faces [edges]`".into())),
    };

    let mut vertices = Vec::with_capacity(nv.min(1 << 20));
    for _ in 0..nv {
        let (line, l) = lines.next().ok_or_else(|| eof("vertex"))?;
        let xs: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(line, format!("invalid vertex {l:?}")))?;
        if xs.len() < 3 || xs[..3].iter().any(|x| !x.is_finite()) {
            return Err(parse_err(
                line,
                "vertex needs three finite coordinates".into(),
            ));
        }
        vertices.push([xs[0], xs[1], xs[2]]);
    }

    let mut polygons = Vec::with_capacity(nf.min(1 << 20));
    let mut face_lines = Vec::with_capacity(nf.min(1 << 20));
    for _ in 0..nf {
        let (line, l) = lines.next().ok_or_else(|| eof("face"))?;
        let mut tokens = l.split_whitespace();
        let k: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(line, format!("invalid face {l:?}")))?;
        let idx: Vec<usize> = tokens
            .by_ref()
            .take(k)
            .map(|t| t.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(line, format!("invalid face index in {l:?}")))?;
        if idx.len() != k || k < 3 {
            return Err(parse_err(
                line,
                format!("face needs at least 3 indices, got {l:?}"),
            ));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
            return Err(parse_err(line, format!("vertex index {bad} out of range")));
        }
        polygons.push(idx);
        face_lines.push(line);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after faces".into()));
    }
    PolyMesh::new(vertices, &polygons).map_err(|e| match e {
        Error::DegenerateFace(f) => parse_err(face_lines[f], format!("face {f} has zero area")),
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeAngleReport {
    /// Interior edges as sorted vertex pairs, ascending.
    pub edges: Vec<[usize; 2]>,
    /// Interior dihedral angle of each edge, in (0, 2π).
    pub angles: Vec<f64>,
    /// `π/α` for convex edges, `None` for reflex edges.
    pub contributions: Vec<Option<f64>>,
    /// Largest contribution, or 1 when no edge is convex.
    pub bound: f64,
    /// Positions (into `edges`) of reflex edges.
    pub reflex: Vec<usize>,
    /// Edges with a single incident face, not measured.
    pub boundary: Vec<[usize; 2]>,
    pub warnings: Vec<String>,
}

/// Interior dihedral angle at every edge shared by two faces, and the lower
/// bound `max π/α` over convex edges. Closed meshes are normalized to
/// outward orientation first, so the result does not depend on the input
/// orientation.
pub fn mesh_edge_dilatation_bound(mesh: &PolyMesh) -> Result<EdgeAngleReport> {
    let sign = mesh.orientation_sign();
    let mut report = EdgeAngleReport {
        edges: Vec::new(),
        angles: Vec::new(),
        contributions: Vec::new(),
        bound: 1.0,
        reflex: Vec::new(),
        boundary: Vec::new(),
        warnings: Vec::new(),
    };
    for (&(u, v), inc) in &mesh.edge_map() {
        match inc.as_slice() {
            [_] => {
                report.boundary.push([u, v]);
                continue;
            }
            [(f1, a, b), (f2, c, _)] => {
                if a == c {
                    return Err(Error::InconsistentOrientation(u, v));
                }
                let n1 = mesh.face_normal(*f1).normalize() * sign;
                let n2 = mesh.face_normal(*f2).normalize() * sign;
                let d = (mesh.point(*b) - mesh.point(*a)).normalize() * sign;
                // signed turn from n1 to n2 about the edge, positive when convex
                let turn = n1.cross(&n2).dot(&d).atan2(n1.dot(&n2));
                let alpha = PI - turn;
                let pos = report.edges.len();
                report.edges.push([u, v]);
                report.angles.push(alpha);
                if alpha <= PI + FLAT_TOLERANCE {
                    let c = PI / alpha.min(PI);
                    report.bound = report.bound.max(c);
                    report.contributions.push(Some(c));
                    if alpha < SMALL_ANGLE {
                        report.warnings.push(format!(
                            "edge ({u}, {v}) has angle {alpha:e}; bound is ill-conditioned"
                        ));
                    }
                } else {
                    report.contributions.push(None);
                    report.reflex.push(pos);
                }
            }
            _ => return Err(Error::NonManifoldEdge(u, v, inc.len())),
        }
    }
    Ok(report)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::PolyMesh;

    /// Unit cube with outward quad faces.
    pub fn cube() -> PolyMesh {
        let vertices = (0..8)
            .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        let quads = [
            vec![0, 2, 3, 1],
            vec![4, 5, 7, 6],
            vec![0, 1, 5, 4],
            vec![2, 6, 7, 3],
            vec![0, 4, 6, 2],
            vec![1, 3, 7, 5],
        ];
        PolyMesh::new(vertices, &quads).unwrap()
    }

    /// Regular tetrahedron with outward faces.
    pub fn tetrahedron() -> PolyMesh {
        let vertices = vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let faces = [vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]];
        PolyMesh::new(vertices, &faces).unwrap()
    }
}
