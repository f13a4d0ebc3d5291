#![allow(dead_code)]

//! Point samplers for the constant-curvature model planes, written against
//! the textbook distance formulas rather than the library's coordinates.

use rand::Rng;

/// Random point of the model plane of curvature `kappa`, as ambient
/// coordinates `[x, y, z]` (sphere of radius 1/√κ in ℝ³, the plane z = 0,
/// or the upper sheet of x² + y² − z² = −1/|κ|). Points stay within a
/// geodesic distance of roughly `spread / √|κ|` of a base point.
pub fn sample_point<R: Rng>(rng: &mut R, kappa: f64, spread: f64) -> [f64; 3] {
    if kappa > 0.0 {
        let r = 1.0 / kappa.sqrt();
        let polar = spread * rng.random::<f64>().sqrt();
        let az = rng.random::<f64>() * std::f64::consts::TAU;
        [
            r * polar.sin() * az.cos(),
            r * polar.sin() * az.sin(),
            r * polar.cos(),
        ]
    } else if kappa == 0.0 {
        [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            0.0,
        ]
    } else {
        let r = 1.0 / (-kappa).sqrt();
        let t = spread * rng.random::<f64>().sqrt();
        let az = rng.random::<f64>() * std::f64::consts::TAU;
        [
            r * t.sinh() * az.cos(),
            r * t.sinh() * az.sin(),
            r * t.cosh(),
        ]
    }
}

/// Geodesic distance in the model plane of curvature `kappa`.
pub fn geodesic(kappa: f64, p: &[f64; 3], q: &[f64; 3]) -> f64 {
    if kappa > 0.0 {
        let r2 = 1.0 / kappa;
        let c = (p[0] * q[0] + p[1] * q[1] + p[2] * q[2]) / r2;
        r2.sqrt() * c.clamp(-1.0, 1.0).acos()
    } else if kappa == 0.0 {
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
    } else {
        let r2 = -1.0 / kappa;
        let c = -(p[0] * q[0] + p[1] * q[1] - p[2] * q[2]) / r2;
        r2.sqrt() * c.max(1.0).acosh()
    }
}

/// Six pairwise distances `d12, d13, d14, d23, d24, d34`.
pub fn pairwise(kappa: f64, pts: &[[f64; 3]; 4]) -> [f64; 6] {
    let d = |i: usize, j: usize| geodesic(kappa, &pts[i], &pts[j]);
    [d(0, 1), d(0, 2), d(0, 3), d(1, 2), d(1, 3), d(2, 3)]
}

/// Spherical law of cosines / hyperbolic law of cosines / Euclidean law,
/// solved for the angle opposite `a`.
pub fn oracle_angle(kappa: f64, a: f64, b: f64, c: f64) -> f64 {
    if kappa > 0.0 {
        let s = kappa.sqrt();
        let (ca, cb, cc) = ((s * a).cos(), (s * b).cos(), (s * c).cos());
        ((ca - cb * cc) / ((s * b).sin() * (s * c).sin()))
            .clamp(-1.0, 1.0)
            .acos()
    } else if kappa == 0.0 {
        ((b * b + c * c - a * a) / (2.0 * b * c))
            .clamp(-1.0, 1.0)
            .acos()
    } else {
        let s = (-kappa).sqrt();
        let (ca, cb, cc) = ((s * a).cosh(), (s * b).cosh(), (s * c).cosh());
        ((cb * cc - ca) / ((s * b).sinh() * (s * c).sinh()))
            .clamp(-1.0, 1.0)
            .acos()
    }
}
