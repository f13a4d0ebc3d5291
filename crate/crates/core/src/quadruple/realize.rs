use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::{MetricQuadruple, PAIRS};
use crate::spaceform::{
    comparison_angle, model_distance, polar_distance, polar_point, realize_triple,
    triple_embeddable, Curvature, ModelPoint,
};

/// Default acceptance tolerance for realized distances, relative to the
/// largest distance of the quadruple.
pub const REALIZATION_TOLERANCE: f64 = 1e-8;

/// Result of placing a quadruple in a model space. Failure is an ordinary
/// outcome, not an error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Realization {
    Embedded {
        points: [ModelPoint; 4],
        max_error: f64,
    },
    Failed {
        reason: String,
    },
}

impl Realization {
    pub fn is_embedded(&self) -> bool {
        matches!(self, Realization::Embedded { .. })
    }
}

pub fn realize_quadruple(q: &MetricQuadruple, kappa: Curvature, dim: usize) -> Realization {
    realize_quadruple_with_tolerance(q, kappa, dim, REALIZATION_TOLERANCE)
}

/// Places the quadruple in the `dim`-dimensional (2 or 3) model space of
/// curvature `kappa`.
///
/// The best-shaped triangle of the quadruple is laid out first. In
/// dimension 2 every point is placed in geodesic polar coordinates around
/// one vertex of that triangle, which stays accurate for strongly curved
/// hyperbolic data. In dimension 3 the remaining point is solved from its
/// three prescribed distances in ambient coordinates and lifted off the
/// plane. Success requires every recomputed distance to match within
/// `rel_tol · max d`.
pub fn realize_quadruple_with_tolerance(
    q: &MetricQuadruple,
    kappa: Curvature,
    dim: usize,
    rel_tol: f64,
) -> Realization {
    let fail = |reason: String| Realization::Failed { reason };
    if dim != 2 && dim != 3 {
        return fail(format!("unsupported dimension {dim}"));
    }
    for (i, j, l) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if !triple_embeddable(kappa, &q.triple(i, j, l)) {
            return fail(format!(
                "triple ({}, {}, {}) exceeds the perimeter bound",
                i + 1,
                j + 1,
                l + 1
            ));
        }
    }

    let Some((base, free)) = best_base(q, kappa) else {
        return fail("no nondegenerate base triangle".into());
    };
    let [i, j, l] = base;
    let triangle = match realize_triple(kappa, &q.triple(i, j, l)) {
        Ok(t) => t,
        Err(e) => return fail(e.to_string()),
    };
    if dim == 2 {
        return realize_planar(q, kappa, [i, j, l], free, rel_tol);
    }
    let target = [q.d[free][i], q.d[free][j], q.d[free][l]];
    let Some(p) = solve_free_point(kappa, &triangle.points, target, dim) else {
        return fail("free point has no solution in the model space".into());
    };
    let mut points = [[0.0; 4]; 4];
    points[i] = triangle.points[0];
    points[j] = triangle.points[1];
    points[l] = triangle.points[2];
    points[free] = p;
    let max_error = PAIRS
        .iter()
        .map(|&(a, b)| (model_distance(kappa, &points[a], &points[b]) - q.d[a][b]).abs())
        .fold(0.0, f64::max);
    if !max_error.is_finite() || max_error > rel_tol * q.max_distance() {
        return fail(format!("distance mismatch {max_error:e} after placement"));
    }
    Realization::Embedded { points, max_error }
}

/// Two-dimensional placement in geodesic polar coordinates about point
/// `i`: `j` on the reference ray, `l` and `free` at their comparison angles
/// from it. The free point takes whichever side matches `d(l, free)` best,
/// and all distances are checked in polar form.
fn realize_planar(
    q: &MetricQuadruple,
    kappa: Curvature,
    [i, j, l]: [usize; 3],
    free: usize,
    rel_tol: f64,
) -> Realization {
    let fail = |reason: String| Realization::Failed { reason };
    let (Ok(alpha_l), Ok(alpha_f)) = (
        comparison_angle(kappa, q.d[j][l], q.d[i][j], q.d[i][l]),
        comparison_angle(kappa, q.d[j][free], q.d[i][j], q.d[i][free]),
    ) else {
        return fail("free point has no solution in the model space".into());
    };
    let mut best: Option<([(f64, f64); 4], f64)> = None;
    for sign in [1.0, -1.0] {
        let mut polar = [(0.0, 0.0); 4];
        polar[j] = (q.d[i][j], 0.0);
        polar[l] = (q.d[i][l], alpha_l);
        polar[free] = (q.d[i][free], sign * alpha_f);
        let error = PAIRS
            .iter()
            .map(|&(a, b)| (polar_distance(kappa, polar[a], polar[b]) - q.d[a][b]).abs())
            .fold(0.0, f64::max);
        if error.is_finite() && best.is_none_or(|(_, e)| error < e) {
            best = Some((polar, error));
        }
    }
    let Some((polar, max_error)) = best else {
        return fail("placement overflowed".into());
    };
    if max_error > rel_tol * q.max_distance() {
        return fail(format!("distance mismatch {max_error:e} after placement"));
    }
    let points = polar.map(|(r, a)| polar_point(kappa, r, a));
    Realization::Embedded { points, max_error }
}

/// Picks the triangle whose smallest model angle has the largest sine,
/// preferring lower point indices on ties.
fn best_base(q: &MetricQuadruple, kappa: Curvature) -> Option<([usize; 3], usize)> {
    let mut best: Option<(f64, [usize; 3], usize)> = None;
    for free in (0..4).rev() {
        let base = super::others(free);
        let [i, j, l] = base;
        let angles = [
            comparison_angle(kappa, q.d[j][l], q.d[i][j], q.d[i][l]),
            comparison_angle(kappa, q.d[i][l], q.d[i][j], q.d[j][l]),
            comparison_angle(kappa, q.d[i][j], q.d[i][l], q.d[j][l]),
        ];
        let Ok(quality) = angles
            .into_iter()
            .try_fold(f64::INFINITY, |acc, a| a.map(|a| acc.min(a.sin())))
        else {
            continue;
        };
        if best.is_none_or(|(b, _, _)| quality > b) {
            best = Some((quality, base, free));
        }
    }
    best.filter(|(quality, _, _)| *quality > 0.0)
        .map(|(_, base, free)| (base, free))
}

fn solve_free_point(
    kappa: Curvature,
    base: &[ModelPoint; 3],
    target: [f64; 3],
    dim: usize,
) -> Option<ModelPoint> {
    let k = kappa.value();
    if k == 0.0 {
        // |p|² = t0², 2 P_a·p = |P_a|² + t0² − t_a² for a = 1, 2
        let a = Matrix2::new(base[1][0], base[1][1], base[2][0], base[2][1]) * 2.0;
        let norm2 = |p: &ModelPoint| p[0] * p[0] + p[1] * p[1];
        let rhs = Vector2::new(
            norm2(&base[1]) + target[0] * target[0] - target[1] * target[1],
            norm2(&base[2]) + target[0] * target[0] - target[2] * target[2],
        );
        let xy = a.lu().solve(&rhs)?;
        let lift = target[0] * target[0] - xy.x * xy.x - xy.y * xy.y;
        let z = if dim == 3 { lift.max(0.0).sqrt() } else { 0.0 };
        return Some([xy.x, xy.y, z, 0.0]);
    }

    // ⟨P_a, p⟩ = g(t_a) with ⟨u, v⟩ = ux vx + uy vy ± uw vw
    let radius = kappa.radius();
    let sign = if k > 0.0 { 1.0 } else { -1.0 };
    let gram = |d: f64| {
        if k > 0.0 {
            radius * radius * (d / radius).cos()
        } else {
            -radius * radius * (d / radius).cosh()
        }
    };
    let a = Matrix3::from_fn(|r, c| match c {
        0 => base[r][0],
        1 => base[r][1],
        _ => sign * base[r][3],
    });
    let rhs = Vector3::new(gram(target[0]), gram(target[1]), gram(target[2]));
    let sol = a.lu().solve(&rhs)?;
    let (x, y, w) = (sol[0], sol[1], sol[2]);
    let planar_form = x * x + y * y + sign * w * w;
    let lift = sign * radius * radius - planar_form;
    if dim == 3 && lift >= 0.0 {
        return Some([x, y, lift.sqrt(), w]);
    }
    // Project back onto the two-dimensional model surface.
    let scale = (sign * radius * radius / planar_form).sqrt();
    if !scale.is_finite() || (k < 0.0 && w <= 0.0) {
        return None;
    }
    Some([x * scale, y * scale, 0.0, w * scale])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: [f64; 6]) -> MetricQuadruple {
        MetricQuadruple::from_distances(d).unwrap()
    }

    #[test]
    fn unit_square_in_plane() {
        let s = 2f64.sqrt();
        let r = realize_quadruple(&q([1.0, s, 1.0, 1.0, s, 1.0]), Curvature::FLAT, 2);
        assert!(r.is_embedded(), "{r:?}");
    }

    #[test]
    fn regular_tetrahedron_needs_three_dimensions() {
        let t = q([1.0; 6]);
        assert!(!realize_quadruple(&t, Curvature::FLAT, 2).is_embedded());
        assert!(realize_quadruple(&t, Curvature::FLAT, 3).is_embedded());
    }

    #[test]
    fn tripod_fails_in_plane_and_space() {
        let t = q([1.99, 1.99, 1.0, 1.99, 1.0, 1.0]);
        assert!(!realize_quadruple(&t, Curvature::FLAT, 2).is_embedded());
        assert!(!realize_quadruple(&t, Curvature::FLAT, 3).is_embedded());
    }

    #[test]
    fn inscribed_tetrahedron_on_unit_sphere() {
        let d = (-1.0f64 / 3.0).acos();
        let r = realize_quadruple(&q([d; 6]), Curvature::new(1.0).unwrap(), 2);
        assert!(r.is_embedded(), "{r:?}");
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(!realize_quadruple(&q([1.0; 6]), Curvature::FLAT, 4).is_embedded());
    }
}
