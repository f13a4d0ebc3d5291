use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::spaceform::GUARD_BAND;

/// Three consecutive points of a polygonal curve: the chords `first` and
/// `second` meeting at the middle point, and the end-to-end distance `span`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTriple {
    first: f64,
    second: f64,
    span: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureMode {
    Menger,
    FinslerHaantjes,
}

impl CurveTriple {
    pub fn new(first: f64, second: f64, span: f64) -> Result<Self> {
        for x in [first, second, span] {
            if !(x.is_finite() && x > 0.0) {
                return domain(format!(
                    "curve lengths must be positive and finite, got {x}"
                ));
            }
        }
        let tol = GUARD_BAND * first.max(second).max(span);
        if span > first + second + tol || first > second + span + tol || second > first + span + tol
        {
            return domain(format!(
                "lengths ({first}, {second}, {span}) violate the triangle inequality"
            ));
        }
        Ok(CurveTriple {
            first,
            second,
            span,
        })
    }

    /// Builds the triple from three points in the plane or space.
    pub fn from_points<const N: usize>(p: [[f64; N]; 3]) -> Result<Self> {
        let d = |a: &[f64; N], b: &[f64; N]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        Self::new(d(&p[0], &p[1]), d(&p[1], &p[2]), d(&p[0], &p[2]))
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.first, self.second, self.span]
    }
}

/// Discrete curvature at the middle point of a curve triple.
///
/// `Menger` is the reciprocal circumradius `4·Area/(abc)`, with the area
/// from Kahan's stable form of Heron's formula. `FinslerHaantjes` is the
/// arc-versus-chord surrogate `√(8(s − ℓ)/(abℓ))` with `s = a + b` and `ℓ`
/// the span; it equals `1/R` to second order for points on a circle of
/// radius `R`.
pub fn polyline_curvature(t: &CurveTriple, mode: CurvatureMode) -> f64 {
    let [a, b, l] = t.lengths();
    match mode {
        CurvatureMode::Menger => {
            let mut s = [a, b, l];
            s.sort_by(|x, y| y.total_cmp(x));
            let [x, y, z] = s;
            let p = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
            // 4·Area = sqrt(p)
            p.max(0.0).sqrt() / (a * b * l)
        }
        CurvatureMode::FinslerHaantjes => (8.0 * ((a + b) - l).max(0.0) / (a * b * l)).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(radius: f64, start: f64, step: f64) -> CurveTriple {
        let p = |t: f64| [radius * t.cos(), radius * t.sin()];
        CurveTriple::from_points([p(start), p(start + step), p(start + 2.0 * step)]).unwrap()
    }

    #[test]
    fn collinear_is_flat() {
        let t = CurveTriple::new(1.0, 1.0, 2.0).unwrap();
        assert_eq!(polyline_curvature(&t, CurvatureMode::Menger), 0.0);
        assert_eq!(polyline_curvature(&t, CurvatureMode::FinslerHaantjes), 0.0);
    }

    #[test]
    fn menger_on_unit_circle() {
        let k = polyline_curvature(&circle(1.0, 0.3, 0.2), CurvatureMode::Menger);
        assert!((k - 1.0).abs() < 1e-12, "{k}");
    }

    #[test]
    fn finsler_haantjes_converges_on_circle() {
        let mut last = f64::INFINITY;
        for step in [0.4, 0.2, 0.1, 0.05, 0.025] {
            // chords from the exact circle: a = b = 2 sin(h/2), span = 2 sin h
            let oracle = CurveTriple::new(
                2.0 * (step / 2.0f64).sin(),
                2.0 * (step / 2.0f64).sin(),
                2.0 * step.sin(),
            )
            .unwrap();
            let err = (polyline_curvature(&oracle, CurvatureMode::FinslerHaantjes) - 1.0).abs();
            if step == 0.2 {
                assert!(err < 0.02, "{err}");
            }
            assert!(err < last);
            last = err;
        }
    }

    #[test]
    fn rejects_bad_triples() {
        assert!(CurveTriple::new(1.0, 1.0, 3.0).is_err());
        assert!(CurveTriple::new(0.0, 1.0, 1.0).is_err());
    }
}
