use metric_embed::bzelement::{
    canonical_element, contraction_map, isometry_defect, standard_vertex_map, AcuteTriangle,
    FoldParams, Polar,
};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Acute triangle with the given angles at A1, A2 and the circumradius `r`.
fn from_angles(a1: f64, a2: f64, r: f64) -> AcuteTriangle {
    let a3 = PI - a1 - a2;
    AcuteTriangle::from_sides([a1, a2, a3].map(|a| 2.0 * r * a.sin())).unwrap()
}

/// Two angles in (0.2, π/2 − 0.05) whose complement is acute as well.
fn acute_angles() -> impl Strategy<Value = (f64, f64)> {
    (0.2..PI / 2.0 - 0.05, 0.2..PI / 2.0 - 0.05)
        .prop_filter("third angle acute", |(a, b)| {
            let c = PI - a - b;
            c > 0.2 && c < PI / 2.0 - 0.05
        })
}

fn dist(p: [f64; 3], q: [f64; 3]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

fn cart(rho: f64, phi: f64) -> [f64; 2] {
    [rho * phi.cos(), rho * phi.sin()]
}

/// Singular value ratio of the fold's Jacobian at (ρ, φ), by central
/// differences in a local Cartesian chart around the point.
fn fold_distortion(params: &FoldParams, rho: f64, phi: f64) -> f64 {
    const H: f64 = 1e-6;
    let image = |dx: f64, dy: f64| {
        // chart centred on the ray φ, so angles are measured relative to it
        let (x, y) = (rho + dx, dy);
        let p = Polar {
            rho: x.hypot(y),
            phi: phi + y.atan2(x),
        };
        let q = standard_vertex_map(params, p).unwrap();
        let psi0 = params.lambda / params.theta * phi;
        cart(q.rho, q.phi - psi0)
    };
    let col = |dx: f64, dy: f64| {
        let (p, m) = (image(dx, dy), image(-dx, -dy));
        [(p[0] - m[0]) / (2.0 * H), (p[1] - m[1]) / (2.0 * H)]
    };
    let (jx, jy) = (col(H, 0.0), col(0.0, H));
    let (a, b, c, d) = (jx[0], jy[0], jx[1], jy[1]);
    let frob = a * a + b * b + c * c + d * d;
    let det = (a * d - b * c).abs();
    let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
    let s_max = ((frob + disc) / 2.0).sqrt();
    let s_min = ((frob - disc) / 2.0).sqrt();
    s_max / s_min
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn element_constraints_hold(
        (a1, a2) in acute_angles(),
        r in 0.1..10.0f64,
        c in 0.5..1.0f64,
        wobble in prop::array::uniform2(-4e-3..4e-3f64),
    ) {
        let big = from_angles(a1, a2, r);
        let small = from_angles(a1 + wobble[0], a2 + wobble[1], c * r);
        prop_assume!(small.sides().iter().zip(big.sides()).all(|(s, b)| *s < b && *s >= 0.5 * b));
        let e = canonical_element(&big, &small).unwrap();
        let scale = r;
        for a in e.base {
            prop_assert!((dist(e.apex, a) - big.circumradius()).abs() <= 1e-12 * scale);
        }
        let ends = [(1, 2), (0, 2), (0, 1)];
        for (p, &(k, l)) in ends.iter().enumerate() {
            let half = big.side(p) / 2.0;
            prop_assert!((dist(e.base[k], e.face_points[p]) - half).abs() <= 1e-12 * scale);
            prop_assert!((dist(e.face_points[p], e.base[l]) - half).abs() <= 1e-12 * scale);
            // face point sits on the lateral face of the prism over side p
            let m = small.midpoint(p);
            prop_assert!((e.face_points[p][0] - m[0]).abs() <= 1e-14 * scale);
            prop_assert!((e.face_points[p][1] - m[1]).abs() <= 1e-14 * scale);
        }
        let b = small.circumcenter();
        prop_assert!(e.apex[0] == b[0] && e.apex[1] == b[1] && e.apex[2] >= 0.0);
        let d = isometry_defect(&e, &big).unwrap();
        prop_assert!(d.max_defect >= 0.0);
        prop_assert!(d.boundary_residuals.iter().all(|x| *x <= 1e-12 * scale));
    }

    #[test]
    fn defect_decreases_towards_similarity((a1, a2) in acute_angles(), r in 0.1..10.0f64) {
        let big = from_angles(a1, a2, r);
        let mut last = f64::INFINITY;
        for k in 1..=6 {
            let c = 1.0 - 10f64.powi(-k);
            let small = from_angles(a1, a2, c * r);
            let e = canonical_element(&big, &small).unwrap();
            let d = isometry_defect(&e, &big).unwrap().max_defect;
            prop_assert!(d < last, "k = {}: {} !< {}", k, d, last);
            last = d;
        }
    }

    #[test]
    fn fold_is_conformal_off_the_apex(
        pair in 0usize..3,
        rho in 0.1..1.0f64,
        t in 0.01..0.99f64,
        a in 0.5..2.0f64,
    ) {
        let (theta, lambda) = [(PI, 2.0 * PI), (3.0 * PI, 2.0 * PI), (2.0 * PI, PI)][pair];
        let params = FoldParams::new(theta, lambda, a).unwrap();
        let ratio = fold_distortion(&params, rho, t * theta);
        prop_assert!(ratio <= 1.0 + 1e-4, "{}", ratio);
    }

    #[test]
    fn contraction_metric_contract(
        theta in 2.0 * PI + 1e-3..8.0 * PI,
        rho1 in 0.0..5.0f64,
        rho2 in 0.0..5.0f64,
        t1 in 0.0..1.0f64,
        t2 in 0.0..1.0f64,
    ) {
        let (phi1, phi2) = (t1 * theta, t2 * theta);
        // radial segment keeps its length
        let p = contraction_map(theta, Polar { rho: rho1, phi: phi1 }).unwrap();
        let q = contraction_map(theta, Polar { rho: rho2, phi: phi1 }).unwrap();
        prop_assert_eq!(p.phi, q.phi);
        prop_assert_eq!((p.rho - q.rho).abs(), (rho1 - rho2).abs());
        // circular arc shrinks by θ/2π
        let q = contraction_map(theta, Polar { rho: rho1, phi: phi2 }).unwrap();
        let before = rho1 * (phi1 - phi2).abs();
        let after = p.rho * (p.phi - q.phi).abs();
        prop_assert!((after * theta / (2.0 * PI) - before).abs() <= 1e-12 * before.max(1e-300));
    }
}

#[test]
fn contraction_rejects_small_cone_angles() {
    assert!(contraction_map(2.0 * PI, Polar { rho: 1.0, phi: 0.0 }).is_err());
}
