use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::triangle::{side_ends, AcuteTriangle};
use crate::error::{domain, Error, Result};

/// Tolerances for the "almost similar" precondition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementOptions {
    /// Largest allowed difference between corresponding angles, radians.
    pub angle_tolerance: f64,
    /// Smallest allowed edge ratio `|a_k a_l| / |A_k A_l|`.
    pub c_min: f64,
    /// Every angle of both triangles must exceed this.
    pub min_angle: f64,
}

impl Default for ElementOptions {
    fn default() -> Self {
        ElementOptions {
            angle_tolerance: 1e-2,
            c_min: 0.5,
            min_angle: 0.05,
        }
    }
}

/// The pleated surface over the base `t`: apex `B'` above the circumcenter
/// of `t`, and face points `E'_p` above the side midpoints of `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PleatedElement {
    /// Base vertices `a_1..a_3` in the plane z = 0.
    pub base: [[f64; 3]; 3],
    pub apex: [f64; 3],
    pub face_points: [[f64; 3]; 3],
    pub apex_height: f64,
    pub face_heights: [f64; 3],
    /// Side lengths of the source triangle `T` the element was built for.
    pub source_sides: [f64; 3],
    /// Circumradius of `T`.
    pub source_radius: f64,
    /// Six spatial triangles as (apex, point, point) with points indexed
    /// 0..3 for base vertices and 3..6 for face points.
    pub triangles: [[usize; 3]; 6],
    /// The matching sub-triangle of `T` for each spatial triangle, as
    /// (side, vertex): the triangle `B E_side A_vertex`.
    pub pairing: [(usize, usize); 6],
}

fn lift(p: [f64; 2], z: f64) -> [f64; 3] {
    [p[0], p[1], z]
}

pub(crate) fn dist3(p: [f64; 3], q: [f64; 3]) -> f64 {
    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

pub fn canonical_element(big: &AcuteTriangle, small: &AcuteTriangle) -> Result<PleatedElement> {
    canonical_element_with(big, small, &ElementOptions::default())
}

/// Builds the pleated element embedding `big` (T) over the base `small` (t).
///
/// The apex height `h = √(R² − r²)` puts every base vertex at distance `R`
/// from `B'`, and the face heights `z_p = √((½A_kA_l)² − (½a_ka_l)²)` make
/// each boundary pleat `a_k E'_p a_l` exactly as long as `A_kA_l`.
/// `t = T` is allowed and gives the flat triangle.
pub fn canonical_element_with(
    big: &AcuteTriangle,
    small: &AcuteTriangle,
    opts: &ElementOptions,
) -> Result<PleatedElement> {
    let (ab, aa) = (big.angles(), small.angles());
    if let Some(a) = ab.iter().chain(&aa).find(|&&a| a <= opts.min_angle) {
        return domain(format!("angle {a} is below the minimum {}", opts.min_angle));
    }
    for i in 0..3 {
        if (ab[i] - aa[i]).abs() > opts.angle_tolerance {
            return domain(format!(
                "angles at vertex {} differ by {} (tolerance {})",
                i + 1,
                (ab[i] - aa[i]).abs(),
                opts.angle_tolerance
            ));
        }
    }
    let (sb, ss) = (big.sides(), small.sides());
    for p in 0..3 {
        let ratio = ss[p] / sb[p];
        if ratio > 1.0 || ratio < opts.c_min {
            return domain(format!(
                "edge ratio {ratio} of side {} is outside [{}, 1]",
                p + 1,
                opts.c_min
            ));
        }
    }
    let (rb, rs) = (big.circumradius(), small.circumradius());
    if rs > rb {
        return domain(format!("base circumradius {rs} exceeds {rb}"));
    }

    let b = small.circumcenter();
    // distances from b to the base vertices, so |B'a_i| = R up to rounding
    let apex_height = (rb * rb - rs * rs).max(0.0).sqrt();
    let apex = lift(b, apex_height);
    let face_heights = [0, 1, 2].map(|p| {
        let (big_half, small_half) = (sb[p] / 2.0, ss[p] / 2.0);
        ((big_half - small_half) * (big_half + small_half))
            .max(0.0)
            .sqrt()
    });
    let face_points = [0, 1, 2].map(|p| lift(small.midpoint(p), face_heights[p]));
    let base = small.vertices.map(|v| lift(v, 0.0));

    let mut triangles = [[0; 3]; 6];
    let mut pairing = [(0, 0); 6];
    for p in 0..3 {
        let (k, l) = side_ends(p);
        triangles[2 * p] = [6, k, 3 + p];
        triangles[2 * p + 1] = [6, 3 + p, l];
        pairing[2 * p] = (p, k);
        pairing[2 * p + 1] = (p, l);
    }
    Ok(PleatedElement {
        base,
        apex,
        face_points,
        apex_height,
        face_heights,
        source_sides: sb,
        source_radius: rb,
        triangles,
        pairing,
    })
}

impl PleatedElement {
    /// Points in export order: base vertices, face points, apex.
    pub fn points(&self) -> [[f64; 3]; 7] {
        let mut out = [[0.0; 3]; 7];
        out[..3].copy_from_slice(&self.base);
        out[3..6].copy_from_slice(&self.face_points);
        out[6] = self.apex;
        out
    }

    /// Wavefront OBJ text: seven vertices and six triangles.
    pub fn to_obj(&self) -> String {
        let mut s = String::from("# pleated construction element\n");
        for p in self.points() {
            let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]);
        }
        for t in self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    /// `| |B'E'_p| − H_p |` per side.
    pub pleat_residuals: [f64; 3],
    /// `| |a_kE'_p| + |E'_pa_l| − |A_kA_l| |` per side.
    pub boundary_residuals: [f64; 3],
    /// `| |B'a_i| − R |` per vertex.
    pub apex_residuals: [f64; 3],
    pub max_defect: f64,
    /// Edge ratios `|a_ka_l| / |A_kA_l|`.
    pub ratios: [f64; 3],
    /// Perimeter ratio of t to T.
    pub c: f64,
}

/// Measures how far the element is from an isometric copy of `big`.
pub fn isometry_defect(e: &PleatedElement, big: &AcuteTriangle) -> Result<DefectReport> {
    let sides = big.sides();
    let scale = sides.iter().fold(0.0f64, |m, s| m.max(*s));
    if (0..3).any(|p| (sides[p] - e.source_sides[p]).abs() > 1e-12 * scale) {
        return Err(Error::ElementMismatch);
    }
    let apothems = big.apothems();
    let radius = big.circumradius();
    let pleat_residuals = [0, 1, 2].map(|p| (dist3(e.apex, e.face_points[p]) - apothems[p]).abs());
    let boundary_residuals = [0, 1, 2].map(|p| {
        let (k, l) = side_ends(p);
        let pleat = dist3(e.base[k], e.face_points[p]) + dist3(e.face_points[p], e.base[l]);
        (pleat - sides[p]).abs()
    });
    let apex_residuals = [0, 1, 2].map(|i| (dist3(e.apex, e.base[i]) - radius).abs());
    let max_defect = pleat_residuals
        .iter()
        .chain(&boundary_residuals)
        .chain(&apex_residuals)
        .fold(0.0f64, |m, x| m.max(*x));
    let small_sides = [0, 1, 2].map(|p| {
        let (k, l) = side_ends(p);
        dist3(e.base[k], e.base[l])
    });
    let ratios = [0, 1, 2].map(|p| small_sides[p] / sides[p]);
    let c = small_sides.iter().sum::<f64>() / sides.iter().sum::<f64>();
    Ok(DefectReport {
        pleat_residuals,
        boundary_residuals,
        apex_residuals,
        max_defect,
        ratios,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equilateral(side: f64) -> AcuteTriangle {
        AcuteTriangle::from_sides([side; 3]).unwrap()
    }

    #[test]
    fn equilateral_heights() {
        let e = canonical_element(&equilateral(1.0), &equilateral(0.9)).unwrap();
        let h = ((1.0 - 0.81) / 3.0f64).sqrt();
        let z = (0.25 - 0.2025f64).sqrt();
        assert!((e.apex_height - h).abs() < 1e-15);
        assert!((h - 0.25166).abs() < 1e-5 && (z - 0.21794).abs() < 1e-5);
        for zp in e.face_heights {
            assert!((zp - z).abs() < 1e-15);
        }
        // recompute the constraints from output coordinates
        let r = 1.0 / 3f64.sqrt();
        for a in e.base {
            assert!((dist3(e.apex, a) - r).abs() < 1e-15);
        }
        for p in 0..3 {
            let (k, l) = side_ends(p);
            assert!((dist3(e.base[k], e.face_points[p]) - 0.5).abs() < 1e-15);
            assert!((dist3(e.face_points[p], e.base[l]) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_element_is_flat() {
        let t = AcuteTriangle::from_sides([1.0, 1.1, 1.2]).unwrap();
        let e = canonical_element(&t, &t).unwrap();
        assert_eq!(e.apex_height, 0.0);
        assert_eq!(e.face_heights, [0.0; 3]);
        assert!(isometry_defect(&e, &t).unwrap().max_defect < 1e-15);
    }

    #[test]
    fn defect_shrinks_with_ratio() {
        let big = equilateral(1.0);
        let d = |c: f64| {
            let e = canonical_element(&big, &equilateral(c)).unwrap();
            isometry_defect(&e, &big).unwrap().max_defect
        };
        assert!(d(0.99) < d(0.9));
    }

    #[test]
    fn preconditions() {
        let big = equilateral(1.0);
        assert!(canonical_element(&big, &equilateral(1.1)).is_err());
        assert!(canonical_element(&big, &equilateral(0.3)).is_err());
        let skew = AcuteTriangle::from_sides([0.9, 0.95, 0.85]).unwrap();
        assert!(canonical_element(&big, &skew).is_err());
    }

    #[test]
    fn mismatched_triangle() {
        let e = canonical_element(&equilateral(1.0), &equilateral(0.9)).unwrap();
        assert_eq!(
            isometry_defect(&e, &equilateral(2.0)),
            Err(Error::ElementMismatch)
        );
    }

    #[test]
    fn obj_export() {
        let e = canonical_element(&equilateral(1.0), &equilateral(0.9)).unwrap();
        let obj = e.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 7);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 6);
        assert!(obj.contains("f 7 2 4\n"));
    }
}
