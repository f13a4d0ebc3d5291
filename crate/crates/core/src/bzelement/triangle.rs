use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A planar triangle with all angles below π/2.
///
/// Side `p` is opposite vertex `p`, joining the other two vertices `k < l`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcuteTriangle {
    pub vertices: [[f64; 2]; 3],
}

pub(crate) fn dist2(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Endpoints `(k, l)` of side `p`.
pub(crate) fn side_ends(p: usize) -> (usize, usize) {
    match p {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl AcuteTriangle {
    pub fn from_points(vertices: [[f64; 2]; 3]) -> Result<Self> {
        if vertices.iter().flatten().any(|x| !x.is_finite()) {
            return domain("triangle coordinates must be finite");
        }
        let t = AcuteTriangle { vertices };
        let angles = t.angles();
        if angles.iter().any(|a| !(*a > 0.0)) {
            return domain("triangle is degenerate");
        }
        if let Some(a) = angles.iter().find(|&&a| a >= FRAC_PI_2) {
            return domain(format!("triangle is not acute: angle {a}"));
        }
        Ok(t)
    }

    /// Places the triangle with side lengths `[|A2A3|, |A1A3|, |A1A2|]`
    /// with `A1` at the origin, `A2` on the positive x-axis and `A3` above.
    pub fn from_sides(sides: [f64; 3]) -> Result<Self> {
        let [s0, s1, s2] = sides;
        if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return domain("side lengths must be positive and finite");
        }
        let x = (s1 * s1 + s2 * s2 - s0 * s0) / (2.0 * s2);
        let y2 = s1 * s1 - x * x;
        if !(y2 > 0.0) {
            return domain(format!("sides {sides:?} do not form a triangle"));
        }
        Self::from_points([[0.0, 0.0], [s2, 0.0], [x, y2.sqrt()]])
    }

    pub fn side(&self, p: usize) -> f64 {
        let (k, l) = side_ends(p);
        dist2(self.vertices[k], self.vertices[l])
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.side(0), self.side(1), self.side(2)]
    }

    /// Interior angle at each vertex.
    pub fn angles(&self) -> [f64; 3] {
        let v = self.vertices;
        [0, 1, 2].map(|i| {
            let (k, l) = side_ends(i);
            let u = [v[k][0] - v[i][0], v[k][1] - v[i][1]];
            let w = [v[l][0] - v[i][0], v[l][1] - v[i][1]];
            (u[0] * w[1] - u[1] * w[0])
                .abs()
                .atan2(u[0] * w[0] + u[1] * w[1])
        })
    }

    pub fn circumcenter(&self) -> [f64; 2] {
        let [a, b, c] = self.vertices;
        // relative to a for accuracy
        let (bx, by) = (b[0] - a[0], b[1] - a[1]);
        let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
        let d = 2.0 * (bx * cy - by * cx);
        let (b2, c2) = (bx * bx + by * by, cx * cx + cy * cy);
        [
            a[0] + (cy * b2 - by * c2) / d,
            a[1] + (bx * c2 - cx * b2) / d,
        ]
    }

    pub fn circumradius(&self) -> f64 {
        let b = self.circumcenter();
        self.vertices.iter().map(|&v| dist2(b, v)).sum::<f64>() / 3.0
    }

    /// Midpoint of side `p`.
    pub fn midpoint(&self, p: usize) -> [f64; 2] {
        let (k, l) = side_ends(p);
        let (a, b) = (self.vertices[k], self.vertices[l]);
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
    }

    /// Distances from the circumcenter to the side midpoints.
    pub fn apothems(&self) -> [f64; 3] {
        let b = self.circumcenter();
        [0, 1, 2].map(|p| dist2(b, self.midpoint(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_quantities() {
        let t = AcuteTriangle::from_sides([1.0; 3]).unwrap();
        assert!((t.circumradius() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        for h in t.apothems() {
            assert!((h - 0.5 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn obtuse_and_right_rejected() {
        // 100 degrees at A1
        let a = 100f64.to_radians();
        assert!(AcuteTriangle::from_points([[0.0, 0.0], [1.0, 0.0], [a.cos(), a.sin()]]).is_err());
        assert!(AcuteTriangle::from_sides([5.0, 4.0, 3.0]).is_err());
        assert!(AcuteTriangle::from_sides([1.0, 1.0, 3.0]).is_err());
    }

    #[test]
    fn sides_round_trip() {
        let t = AcuteTriangle::from_sides([1.0, 1.1, 1.2]).unwrap();
        let s = t.sides();
        assert!(
            (s[0] - 1.0).abs() < 1e-15 && (s[1] - 1.1).abs() < 1e-15 && (s[2] - 1.2).abs() < 1e-15
        );
    }
}
