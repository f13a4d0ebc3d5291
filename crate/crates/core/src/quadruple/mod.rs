//! Four-point metric spaces: Cayley-Menger determinant, vertex angle sums,
//! embeddability certificates in the three-dimensional model spaces, the
//! Wald embedding-curvature solver and coordinate realization.

mod realize;
mod wald;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::bordered_det;
use crate::spaceform::{comparison_angle, triple_embeddable, Curvature, MetricTriple, GUARD_BAND};
use crate::ANGLE_TOLERANCE;

pub use realize::{
    realize_quadruple, realize_quadruple_with_tolerance, Realization, REALIZATION_TOLERANCE,
};
pub use wald::{wald_curvature, Classification, WaldOptions, WaldResult, WaldRoot};

/// Index pairs in the order used for the six-distance form `d12,d13,d14,d23,d24,d34`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// A four-point metric space given by its pairwise distances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 6]", into = "[f64; 6]")]
pub struct MetricQuadruple {
    d: [[f64; 4]; 4],
}

impl MetricQuadruple {
    /// Builds a quadruple from `d12, d13, d14, d23, d24, d34`.
    pub fn from_distances(distances: [f64; 6]) -> Result<Self> {
        let mut d = [[0.0; 4]; 4];
        for (&(i, j), &v) in PAIRS.iter().zip(distances.iter()) {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "distance d{}{} must be positive and finite, got {v}",
                    i + 1,
                    j + 1
                )));
            }
            d[i][j] = v;
            d[j][i] = v;
        }
        let q = MetricQuadruple { d };
        let band = GUARD_BAND * q.max_distance();
        for (i, j, k) in ordered_triples() {
            if q.d[i][k] > q.d[i][j] + q.d[j][k] + band {
                return Err(Error::Domain(format!(
                    "triangle inequality fails: d{}{} > d{}{} + d{}{}",
                    i + 1,
                    k + 1,
                    i + 1,
                    j + 1,
                    j + 1,
                    k + 1
                )));
            }
        }
        Ok(q)
    }

    /// Builds a quadruple from a full symmetric matrix with zero diagonal.
    pub fn from_matrix(m: [[f64; 4]; 4]) -> Result<Self> {
        for (i, row) in m.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::Domain(format!(
                    "diagonal entry {} is nonzero",
                    i + 1
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != m[j][i] {
                    return Err(Error::Domain(format!(
                        "matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Self::from_distances(PAIRS.map(|(i, j)| m[i][j]))
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn matrix(&self) -> [[f64; 4]; 4] {
        self.d
    }

    pub fn distances(&self) -> [f64; 6] {
        PAIRS.map(|(i, j)| self.d[i][j])
    }

    pub fn max_distance(&self) -> f64 {
        self.distances().into_iter().fold(0.0, f64::max)
    }

    pub fn min_distance(&self) -> f64 {
        self.distances().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// The triple formed by points `i, j, l` (in that order).
    pub fn triple(&self, i: usize, j: usize, l: usize) -> MetricTriple {
        MetricTriple {
            d12: self.d[i][j],
            d13: self.d[i][l],
            d23: self.d[j][l],
        }
    }

    /// Relabels the points: point `k` of the result is point `perm[k]` of `self`.
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                d[i][j] = self.d[perm[i]][perm[j]];
            }
        }
        MetricQuadruple { d }
    }

    /// Multiplies every distance by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut d = self.d;
        d.iter_mut().flatten().for_each(|v| *v *= factor);
        MetricQuadruple { d }
    }

    pub fn cayley_menger(&self) -> f64 {
        cayley_menger(&self.distances())
    }
}

impl TryFrom<[f64; 6]> for MetricQuadruple {
    type Error = Error;

    fn try_from(value: [f64; 6]) -> Result<Self> {
        Self::from_distances(value)
    }
}

impl From<MetricQuadruple> for [f64; 6] {
    fn from(q: MetricQuadruple) -> Self {
        q.distances()
    }
}

impl fmt::Display for MetricQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.distances().iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses six comma-separated distances `d12,d13,d14,d23,d24,d34`.
impl FromStr for MetricQuadruple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected 6 comma-separated distances, got {}", fields.len()),
            });
        }
        let mut d = [0.0; 6];
        for (slot, field) in d.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| Error::Parse {
                line: 1,
                message: format!("invalid distance {field:?}"),
            })?;
        }
        Self::from_distances(d)
    }
}

fn ordered_triples() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..4).flat_map(|i| {
        (0..4).flat_map(move |j| {
            (0..4)
                .filter(move |&k| i != j && j != k && i != k)
                .map(move |k| (i, j, k))
        })
    })
}

/// Cayley-Menger determinant of six distances `d12, d13, d14, d23, d24, d34`:
/// the 5×5 bordered determinant of squared distances. Zero distances are
/// accepted here.
pub fn cayley_menger(distances: &[f64; 6]) -> f64 {
    let mut m = Matrix4::<f64>::zeros();
    for (&(i, j), &v) in PAIRS.iter().zip(distances.iter()) {
        m[(i, j)] = v * v;
        m[(j, i)] = v * v;
    }
    bordered_det(&m)
}

/// True iff no point lies between two others, i.e. every triangle
/// inequality holds strictly by more than `1e-12 · max d`.
pub fn nondegenerate(q: &MetricQuadruple) -> bool {
    let margin = GUARD_BAND * q.max_distance();
    ordered_triples().all(|(i, j, k)| q.d[i][k] < q.d[i][j] + q.d[j][k] - margin)
}

/// The other three indices of a quadruple, ascending.
pub(crate) fn others(i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut n = 0;
    for j in (0..4).filter(|&j| j != i) {
        out[n] = j;
        n += 1;
    }
    out
}

/// Comparison angles at point `i`, for others `j < l < m`:
/// `[α(i; j,l), α(i; j,m), α(i; l,m)]`.
pub fn vertex_angles(q: &MetricQuadruple, kappa: Curvature, i: usize) -> Result<[f64; 3]> {
    let [j, l, m] = others(i);
    let angle = |a: usize, b: usize| comparison_angle(kappa, q.d[a][b], q.d[i][a], q.d[i][b]);
    Ok([angle(j, l)?, angle(j, m)?, angle(l, m)?])
}

/// Vertex angle sums of a quadruple at a given curvature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexExcess {
    /// Sum of the three comparison angles at each point.
    pub sums: [f64; 4],
    /// Largest of the four sums.
    pub max: f64,
}

fn check_triples(q: &MetricQuadruple, kappa: Curvature) -> Result<()> {
    for (i, j, l) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if !triple_embeddable(kappa, &q.triple(i, j, l)) {
            return Err(Error::Domain(format!(
                "triple ({}, {}, {}) does not fit in the sphere of curvature {}",
                i + 1,
                j + 1,
                l + 1,
                kappa.value()
            )));
        }
    }
    Ok(())
}

pub fn vertex_excess(q: &MetricQuadruple, kappa: Curvature) -> Result<VertexExcess> {
    check_triples(q, kappa)?;
    let mut sums = [0.0; 4];
    for (i, slot) in sums.iter_mut().enumerate() {
        *slot = vertex_angles(q, kappa, i)?.iter().sum();
    }
    let max = sums.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(VertexExcess { sums, max })
}

/// One inequality of the three-dimensional embeddability test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Inequality {
    /// `max_i V_κ(x_i) ≤ 2π`.
    ExcessBound,
    /// At `vertex`, angle number `angle` (see [`vertex_angles`]) is at most
    /// the sum of the other two.
    AngleTriangle { vertex: usize, angle: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub inequality: Inequality,
    /// Signed slack; negative means violated.
    pub value: f64,
}

/// Outcome of the embeddability test of a quadruple in the three-dimensional
/// model space of curvature κ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddabilityCertificate {
    pub kappa: Curvature,
    pub verdict: bool,
    pub planar: bool,
    pub angles: [[f64; 3]; 4],
    pub excess: VertexExcess,
    /// The excess bound first, then the three angle inequalities at each vertex.
    pub slacks: Vec<Slack>,
    pub witness: Option<Inequality>,
}

/// Decides whether a nondegenerate quadruple embeds isometrically in the
/// three-dimensional model space of curvature `kappa`: the largest vertex
/// angle sum is at most 2π and, at every vertex, the three comparison angles
/// satisfy the triangle inequality. Slacks above `-ANGLE_TOLERANCE` count as
/// satisfied. The embedding is planar when, in addition, one angle at some
/// vertex equals the sum of the other two.
pub fn s3_embeddability(q: &MetricQuadruple, kappa: Curvature) -> Result<EmbeddabilityCertificate> {
    if !nondegenerate(q) {
        return Err(Error::Degenerate(format!("{q}")));
    }
    let excess = vertex_excess(q, kappa)?;
    let mut angles = [[0.0; 3]; 4];
    for (i, slot) in angles.iter_mut().enumerate() {
        *slot = vertex_angles(q, kappa, i)?;
    }

    let mut slacks = vec![Slack {
        inequality: Inequality::ExcessBound,
        value: 2.0 * PI - excess.max,
    }];
    let mut planar = false;
    for (vertex, a) in angles.iter().enumerate() {
        let total: f64 = a.iter().sum();
        for angle in 0..3 {
            let value = total - 2.0 * a[angle];
            if value.abs() <= ANGLE_TOLERANCE {
                planar = true;
            }
            slacks.push(Slack {
                inequality: Inequality::AngleTriangle { vertex, angle },
                value,
            });
        }
    }
    let witness = slacks
        .iter()
        .find(|s| s.value < -ANGLE_TOLERANCE)
        .map(|s| s.inequality);
    let verdict = witness.is_none();
    Ok(EmbeddabilityCertificate {
        kappa,
        verdict,
        planar: planar && verdict,
        angles,
        excess,
        slacks,
        witness,
    })
}
