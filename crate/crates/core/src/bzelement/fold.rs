use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Cone angles and scale of the standard vertex map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldParams {
    pub theta: f64,
    pub lambda: f64,
    pub a: f64,
}

impl FoldParams {
    pub fn new(theta: f64, lambda: f64, a: f64) -> Result<Self> {
        for (name, x) in [("theta", theta), ("lambda", lambda), ("a", a)] {
            if !(x.is_finite() && x > 0.0) {
                return domain(format!("{name} must be positive and finite, got {x}"));
            }
        }
        Ok(FoldParams { theta, lambda, a })
    }
}

/// Polar coordinates on a cone: radius and angle from the reference ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polar {
    pub rho: f64,
    pub phi: f64,
}

fn check_point(theta: f64, p: Polar) -> Result<()> {
    if !(p.rho.is_finite() && p.rho >= 0.0) {
        return domain(format!("radius must be nonnegative, got {}", p.rho));
    }
    if !(0.0..=theta).contains(&p.phi) {
        return domain(format!("angle {} outside [0, {theta}]", p.phi));
    }
    Ok(())
}

/// `(ρ, φ) ↦ (a ρ^{λ/θ}, (λ/θ) φ)`, mapping the cone of angle θ onto the
/// cone of angle λ. The apex maps to the apex.
pub fn standard_vertex_map(params: &FoldParams, p: Polar) -> Result<Polar> {
    check_point(params.theta, p)?;
    let s = params.lambda / params.theta;
    let rho = if p.rho == 0.0 {
        0.0
    } else {
        params.a * p.rho.powf(s)
    };
    Ok(Polar {
        rho,
        phi: s * p.phi,
    })
}

/// `(ρ, φ) ↦ (ρ, (2π/θ) φ)` for a cone angle θ > 2π: isometric along rays,
/// contracting circles by the factor θ/2π.
pub fn contraction_map(theta: f64, p: Polar) -> Result<Polar> {
    if !(theta.is_finite() && theta > 2.0 * PI) {
        return domain(format!(
            "contraction needs a cone angle above 2pi, got {theta}"
        ));
    }
    check_point(theta, p)?;
    Ok(Polar {
        rho: p.rho,
        phi: 2.0 * PI / theta * p.phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_doubles_angle() {
        let params = FoldParams::new(PI, 2.0 * PI, 1.0).unwrap();
        let out = standard_vertex_map(
            &params,
            Polar {
                rho: 1.0,
                phi: PI / 2.0,
            },
        )
        .unwrap();
        assert_eq!(out, Polar { rho: 1.0, phi: PI });
    }

    #[test]
    fn equal_angles_are_identity() {
        let params = FoldParams::new(1.3, 1.3, 1.0).unwrap();
        let p = Polar {
            rho: 0.37,
            phi: 0.9,
        };
        assert_eq!(standard_vertex_map(&params, p).unwrap(), p);
    }

    #[test]
    fn apex_and_domain() {
        let params = FoldParams::new(PI, 2.0 * PI, 2.0).unwrap();
        assert_eq!(
            standard_vertex_map(&params, Polar { rho: 0.0, phi: 1.0 })
                .unwrap()
                .rho,
            0.0
        );
        assert!(standard_vertex_map(&params, Polar { rho: 1.0, phi: 4.0 }).is_err());
        assert!(standard_vertex_map(
            &params,
            Polar {
                rho: -1.0,
                phi: 1.0
            }
        )
        .is_err());
        assert!(FoldParams::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn contraction_halves_circles() {
        let out = contraction_map(
            4.0 * PI,
            Polar {
                rho: 0.5,
                phi: 2.0 * PI,
            },
        )
        .unwrap();
        assert_eq!(out, Polar { rho: 0.5, phi: PI });
        assert!(contraction_map(2.0 * PI, Polar { rho: 0.5, phi: 1.0 }).is_err());
    }
}
