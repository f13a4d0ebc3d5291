//! Trigonometry of the simply connected constant-curvature model spaces.
//!
//! A model space of curvature κ is the sphere of radius 1/√κ when κ > 0,
//! Euclidean space when κ = 0 and the hyperboloid model of hyperbolic space
//! scaled by 1/√−κ when κ < 0. Points of the models are stored as
//! [`ModelPoint`]s: four ambient coordinates `[x, y, z, w]`.
//!
//! - κ = 0: `(x, y, z)` are Cartesian coordinates and `w` is always 0.
//! - κ > 0: the point lies on `x² + y² + z² + w² = 1/κ`; the pole is `w = 1/√κ`.
//! - κ < 0: the point lies on `x² + y² + z² − w² = 1/κ` with `w > 0`.
//!
//! Two-dimensional configurations keep `z = 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative guard band applied to triangle inequalities and to the
/// spherical side and perimeter bounds before declaring a domain error.
pub const GUARD_BAND: f64 = 1e-12;

/// Curvature κ of a model space.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Curvature(f64);

impl Curvature {
    pub const FLAT: Curvature = Curvature(0.0);

    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return domain(format!("curvature must be finite, got {kappa}"));
        }
        Ok(Curvature(kappa))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_spherical(self) -> bool {
        self.0 > 0.0
    }

    /// Radius of the model (1/√|κ|); infinite when flat.
    pub fn radius(self) -> f64 {
        if self.0 == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.0.abs().sqrt()
        }
    }
}

/// Which perimeter bound decides whether a triple fits in the sphere.
///
/// The embedding condition for a triple in the sphere of curvature κ is
/// usually stated as `perimeter ≤ 2π` for the unit sphere. For general
/// κ > 0 it scales to `perimeter ≤ 2π/√κ` ([`PerimeterBound::Scaled`], the
/// default). [`PerimeterBound::Literal`] keeps the unscaled `2π` for every
/// κ, which only agrees with the geometry at κ = 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerimeterBound {
    #[default]
    Scaled,
    Literal,
}

impl PerimeterBound {
    pub fn limit(self, kappa: Curvature) -> f64 {
        if !kappa.is_spherical() {
            return f64::INFINITY;
        }
        match self {
            PerimeterBound::Scaled => 2.0 * PI / kappa.value().sqrt(),
            PerimeterBound::Literal => 2.0 * PI,
        }
    }
}

/// Three pairwise distances of a three-point metric space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple {
    pub d12: f64,
    pub d13: f64,
    pub d23: f64,
}

impl MetricTriple {
    pub fn new(d12: f64, d13: f64, d23: f64) -> Result<Self> {
        for d in [d12, d13, d23] {
            if !(d.is_finite() && d > 0.0) {
                return domain(format!("distances must be positive and finite, got {d}"));
            }
        }
        let band = GUARD_BAND * d12.max(d13).max(d23);
        if d12 > d13 + d23 + band || d13 > d12 + d23 + band || d23 > d12 + d13 + band {
            return domain(format!(
                "triangle inequality fails for ({d12}, {d13}, {d23})"
            ));
        }
        Ok(MetricTriple { d12, d13, d23 })
    }

    pub fn perimeter(&self) -> f64 {
        self.d12 + self.d13 + self.d23
    }

    pub fn max_side(&self) -> f64 {
        self.d12.max(self.d13).max(self.d23)
    }
}

/// Apex angle of the model triangle in the plane of curvature `kappa` with
/// side `opposite` facing the apex and sides `b`, `c` meeting at it.
///
/// Uses the half-angle form of the law of cosines,
/// `tan²(A/2) = f(s−b) f(s−c) / (f(s) f(s−a))` with `f = sin(√κ·)`,
/// identity or `sinh(√−κ·)`, which stays accurate for thin triangles.
/// Degenerate triples give exactly 0 or π.
pub fn comparison_angle(kappa: Curvature, opposite: f64, b: f64, c: f64) -> Result<f64> {
    if !(opposite.is_finite() && opposite >= 0.0) {
        return domain(format!("opposite side must be nonnegative, got {opposite}"));
    }
    if !(b.is_finite() && b > 0.0 && c.is_finite() && c > 0.0) {
        return domain(format!("adjacent sides must be positive, got {b}, {c}"));
    }
    let scale = opposite.max(b).max(c);
    let band = GUARD_BAND * scale;
    let ea = 0.5 * (b + c - opposite);
    let eb = 0.5 * (opposite + c - b);
    let ec = 0.5 * (opposite + b - c);
    if ea < -band || eb < -band || ec < -band {
        return domain(format!(
            "triangle inequality fails for ({opposite}, {b}, {c})"
        ));
    }
    let (ea, eb, ec) = (ea.max(0.0), eb.max(0.0), ec.max(0.0));
    let s = 0.5 * (opposite + b + c);

    let k = kappa.value();
    let (num, den) = if k == 0.0 {
        (eb * ec, s * ea)
    } else if k > 0.0 {
        let r = k.sqrt();
        if r * scale > PI * (1.0 + GUARD_BAND) {
            return domain(format!("side {scale} exceeds π/√κ = {} at κ = {k}", PI / r));
        }
        if r * s > PI * (1.0 + GUARD_BAND) {
            return domain(format!(
                "perimeter {} exceeds 2π/√κ = {} at κ = {k}",
                2.0 * s,
                2.0 * PI / r
            ));
        }
        let f = |x: f64| (r * x).min(PI).sin();
        (f(eb) * f(ec), f(s) * f(ea))
    } else {
        let r = (-k).sqrt();
        let f = |x: f64| (r * x).sinh();
        (f(eb) * f(ec), f(s) * f(ea))
    };
    Ok(2.0 * num.max(0.0).sqrt().atan2(den.max(0.0).sqrt()))
}

/// Whether the triple embeds isometrically in the model space of curvature
/// `kappa` (always true for κ ≤ 0).
pub fn triple_embeddable(kappa: Curvature, t: &MetricTriple) -> bool {
    triple_embeddable_with(kappa, t, PerimeterBound::default())
}

pub fn triple_embeddable_with(kappa: Curvature, t: &MetricTriple, bound: PerimeterBound) -> bool {
    let limit = bound.limit(kappa);
    t.perimeter() <= limit * (1.0 + GUARD_BAND)
}

/// Ambient coordinates `[x, y, z, w]` of a point of a model space.
pub type ModelPoint = [f64; 4];

/// Geodesic distance between two points of the model space of curvature `kappa`.
pub fn model_distance(kappa: Curvature, p: &ModelPoint, q: &ModelPoint) -> f64 {
    let k = kappa.value();
    let diff: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
    if k == 0.0 {
        (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt()
    } else if k > 0.0 {
        let radius = kappa.radius();
        let chord = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
        let sum = p
            .iter()
            .zip(q)
            .map(|(a, b)| (a + b) * (a + b))
            .sum::<f64>()
            .sqrt();
        2.0 * radius * chord.atan2(sum)
    } else {
        let radius = kappa.radius();
        let interval =
            diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2] - diff[3] * diff[3];
        2.0 * radius * (interval.max(0.0).sqrt() / (2.0 * radius)).asinh()
    }
}

/// Point at geodesic distance `d` from the base point in direction `angle`
/// (measured from the positive x-axis in the `xy` plane).
pub(crate) fn polar_point(kappa: Curvature, d: f64, angle: f64) -> ModelPoint {
    let k = kappa.value();
    let (radial, height) = if k == 0.0 {
        (d, 0.0)
    } else if k > 0.0 {
        let radius = kappa.radius();
        (radius * (d / radius).sin(), radius * (d / radius).cos())
    } else {
        let radius = kappa.radius();
        (radius * (d / radius).sinh(), radius * (d / radius).cosh())
    };
    [radial * angle.cos(), radial * angle.sin(), 0.0, height]
}

/// Distance between two points given in geodesic polar coordinates
/// `(r, angle)` about the pole, from the half-angle form of the law of
/// cosines; stable for thin and far-apart configurations.
pub(crate) fn polar_distance(kappa: Curvature, a: (f64, f64), b: (f64, f64)) -> f64 {
    let h = ((a.1 - b.1) / 2.0).sin();
    let h2 = h * h;
    let k = kappa.value();
    if k == 0.0 {
        return ((a.0 - b.0).powi(2) + 4.0 * a.0 * b.0 * h2).sqrt();
    }
    let radius = kappa.radius();
    let (u, v, w) = (a.0 / radius, b.0 / radius, (a.0 - b.0) / (2.0 * radius));
    if k > 0.0 {
        let s = w.sin().powi(2) + u.sin() * v.sin() * h2;
        2.0 * radius * s.clamp(0.0, 1.0).sqrt().asin()
    } else {
        let s = w.sinh().powi(2) + u.sinh() * v.sinh() * h2;
        2.0 * radius * s.max(0.0).sqrt().asinh()
    }
}

/// The model triangle of a triple: coordinates in the two-dimensional model
/// space of curvature `kappa`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTriangle {
    pub kappa: Curvature,
    pub points: [ModelPoint; 3],
    pub sides: MetricTriple,
}

impl ModelTriangle {
    /// Largest deviation between recomputed and prescribed side lengths.
    pub fn max_side_error(&self) -> f64 {
        let d = |i: usize, j: usize| model_distance(self.kappa, &self.points[i], &self.points[j]);
        [
            (d(0, 1) - self.sides.d12).abs(),
            (d(0, 2) - self.sides.d13).abs(),
            (d(1, 2) - self.sides.d23).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Places the triple in the model plane: the first point at the origin (or
/// pole), the second along the positive x-axis and the third in the upper
/// half-plane.
pub fn realize_triple(kappa: Curvature, t: &MetricTriple) -> Result<ModelTriangle> {
    if !triple_embeddable(kappa, t) {
        return domain(format!(
            "perimeter {} exceeds 2π/√κ at κ = {}",
            t.perimeter(),
            kappa.value()
        ));
    }
    let apex = comparison_angle(kappa, t.d23, t.d12, t.d13)?;
    let origin = polar_point(kappa, 0.0, 0.0);
    let second = polar_point(kappa, t.d12, 0.0);
    let third = polar_point(kappa, t.d13, apex);
    Ok(ModelTriangle {
        kappa,
        points: [origin, second, third],
        sides: *t,
    })
}
