//! Embedding curvature of a metric quadruple.
//!
//! A nondegenerate quadruple embeds in the model plane of curvature κ when
//! the matrix `C(κ)_ij = cos(√κ d_ij)` (`cosh(√−κ d_ij)` for κ < 0) is
//! singular, with side and principal-minor conditions for κ > 0, and in the
//! Euclidean plane when its Cayley-Menger determinant vanishes.
//!
//! `det C(κ)` always has a triple zero at κ = 0 because `C(0)` is the rank-one
//! all-ones matrix. Writing `C = J + κ S` with
//! `S_ij = −(d_ij²/2) · sinc²(√κ d_ij / 2)` gives
//!
//! ```text
//! det C(κ) / κ³ = κ det S − det [[0, 1ᵀ], [1, S]]
//! ```
//!
//! which is analytic in κ, equals `CM(Q)/8` at κ = 0 and has the same nonzero
//! roots. The solver scans that reduced determinant, in the dimensionless
//! variable `t = κ · (max d)²`, for sign changes and bisects each bracket;
//! local minima of |f| are resampled so close root pairs and double roots
//! are not lost. Every candidate is then re-validated by placing the quadruple in the
//! model plane.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::{cayley_menger, nondegenerate, realize_quadruple_with_tolerance, MetricQuadruple};
use crate::error::{Error, Result};
use crate::linalg::{bordered_det, principal_minors3};
use crate::spaceform::Curvature;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaldOptions {
    /// Number of scan samples over the search interval.
    pub samples: usize,
    /// Most negative curvature searched; defaults to `1e4 / (min d)²`.
    pub kappa_cap: Option<f64>,
    /// Bisection stops once the bracket is below `tol · ((max d)⁻² + |κ|)`,
    /// i.e. `|Δκ| ≤ tol · (1 + |κ|)` for unit-scale data.
    pub bisection_tol: f64,
    /// Bound on the scaled reduced determinant at an accepted root.
    pub residual_tol: f64,
    /// Flatness test `|CM(Q)| ≤ flat_tol · (max d)⁶`.
    pub flat_tol: f64,
    /// Spherical roots need every order-3 principal minor of `C(κ)` ≥ `-minor_tol`.
    pub minor_tol: f64,
    /// Relative distance tolerance for the realization check.
    pub realization_tol: f64,
}

impl Default for WaldOptions {
    fn default() -> Self {
        WaldOptions {
            samples: 512,
            kappa_cap: None,
            bisection_tol: 1e-12,
            residual_tol: 1e-8,
            flat_tol: 1e-9,
            minor_tol: 1e-9,
            realization_tol: super::REALIZATION_TOLERANCE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Flat,
    Spherical,
    Hyperbolic,
    Multiple,
    NoneFound,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaldRoot {
    pub kappa: f64,
    /// Scaled reduced determinant at the root.
    pub residual: f64,
    /// Principal-minor condition (always true for κ ≤ 0).
    pub minors_ok: bool,
    /// Whether the quadruple could be placed in the model plane at this κ.
    pub realized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaldResult {
    /// Validated embedding curvatures, ascending.
    pub roots: Vec<WaldRoot>,
    /// Sign changes that failed validation.
    pub rejected: Vec<WaldRoot>,
    pub classification: Classification,
    pub search_interval: (f64, f64),
    pub cayley_menger: f64,
}

impl WaldResult {
    /// The embedding curvature when exactly one root was validated.
    pub fn unique(&self) -> Option<f64> {
        match self.roots.as_slice() {
            [r] => Some(r.kappa),
            _ => None,
        }
    }
}

/// Quadruple rescaled to unit maximal distance.
struct Reduced {
    delta: [[f64; 4]; 4],
}

impl Reduced {
    fn new(q: &MetricQuadruple) -> Self {
        let scale = q.max_distance();
        let mut delta = q.matrix();
        delta.iter_mut().flatten().for_each(|v| *v /= scale);
        Reduced { delta }
    }

    fn s_matrix(&self, t: f64) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| {
            let d = self.delta[i][j];
            let s = sinc_k(t, d / 2.0);
            -0.5 * d * d * s * s
        })
    }

    /// Reduced determinant and its magnitude scale.
    fn eval(&self, t: f64) -> (f64, f64) {
        let s = self.s_matrix(t);
        let value = t * s.determinant() - bordered_det(&s);
        let m = s.amax().max(1.0);
        (value, m.powi(3) * (1.0 + t.abs() * m))
    }

    /// The reduced determinant where its sign can be trusted. Far out on
    /// the hyperbolic side the entries grow like `e^{√−t}` and the value is
    /// lost to cancellation.
    fn reliable(&self, t: f64) -> Option<f64> {
        let (value, scale) = self.eval(t);
        (value.is_finite() && scale.is_finite() && value.abs() > NOISE * scale).then_some(value)
    }

    fn residual(&self, t: f64) -> f64 {
        let (value, scale) = self.eval(t);
        if !(value.is_finite() && scale.is_finite()) {
            return f64::INFINITY;
        }
        (value / scale).abs()
    }

    fn cos_matrix(&self, t: f64) -> Matrix4<f64> {
        Matrix4::from_element(1.0) + self.s_matrix(t) * t
    }
}

/// `sin(√t x)/(√t x)`, `sinh(√−t x)/(√−t x)` for t < 0, continuous at 0.
fn sinc_k(t: f64, x: f64) -> f64 {
    let u2 = t * x * x;
    if u2.abs() < 1e-8 {
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    let u = u2.abs().sqrt();
    if t > 0.0 {
        u.sin() / u
    } else {
        u.sinh() / u
    }
}

fn scan_grid(samples: usize, t_neg: f64, t_pos: f64) -> Vec<f64> {
    const SMALLEST: f64 = 1e-8;
    let samples = samples.max(8);
    let n_pos = samples / 2;
    let n_neg = samples - n_pos - 1;
    let log_span = |n: usize, hi: f64| -> Vec<f64> {
        let (a, b) = (SMALLEST.log10(), hi.max(SMALLEST * 10.0).log10());
        (0..n)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
            .collect()
    };
    let mut grid: Vec<f64> = log_span(n_neg, t_neg)
        .into_iter()
        .rev()
        .map(|t| -t)
        .collect();
    grid.push(0.0);
    grid.extend(log_span(n_pos, t_pos));
    grid
}

/// Computes the embedding curvatures of a nondegenerate quadruple.
pub fn wald_curvature(q: &MetricQuadruple, opts: &WaldOptions) -> Result<WaldResult> {
    if !nondegenerate(q) {
        return Err(Error::Degenerate(format!("{q}")));
    }
    let scale = q.max_distance();
    let l2 = scale * scale;
    let kappa_cap = opts
        .kappa_cap
        .unwrap_or(1e4 / (q.min_distance() * q.min_distance()));
    let t_neg = kappa_cap * l2;
    let t_pos = PI * PI;
    let reduced = Reduced::new(q);

    let cm = cayley_menger(&q.distances());
    let flat = cm.abs() <= opts.flat_tol * l2 * l2 * l2;

    let mut candidates: Vec<f64> = Vec::new();
    if flat {
        candidates.push(0.0);
    }
    let grid = scan_grid(opts.samples, t_neg, t_pos);
    let values: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&t| reduced.reliable(t).map(|v| (t, v)))
        .collect();
    let f = |t: f64| reduced.eval(t).0;
    let sampled = |t: f64| reduced.reliable(t);
    let touches = |t: f64| reduced.residual(t) <= opts.residual_tol;
    collect_roots(
        &f,
        &sampled,
        &touches,
        &values,
        REFINE_DEPTH,
        opts.bisection_tol,
        l2,
        &mut candidates,
    );
    if flat {
        // The flat root shows up again as a sign change straddling t = 0.
        candidates.retain(|&t| t == 0.0 || t.abs() > 1e-7);
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * (1.0 + a.abs()));

    let mut roots = Vec::new();
    let mut rejected = Vec::new();
    for t in candidates {
        let kappa = t / l2;
        let residual = reduced.residual(t);
        let minors_ok = t <= 0.0
            || principal_minors3(&reduced.cos_matrix(t))
                .iter()
                .all(|&m| m >= -opts.minor_tol);
        let realized = Curvature::new(kappa).is_ok_and(|k| {
            realize_quadruple_with_tolerance(q, k, 2, opts.realization_tol).is_embedded()
        });
        let root = WaldRoot {
            kappa,
            residual,
            minors_ok,
            realized,
        };
        if residual <= opts.residual_tol && minors_ok && realized {
            roots.push(root);
        } else {
            rejected.push(root);
        }
    }

    // A vanishing Cayley-Menger determinant decides flatness outright; other
    // validated roots stay listed in `roots`.
    let flat_validated = roots.iter().any(|r| r.kappa == 0.0);
    let classification = match roots.as_slice() {
        _ if flat_validated => Classification::Flat,
        [] => Classification::NoneFound,
        [r] if r.kappa > 0.0 => Classification::Spherical,
        [_] => Classification::Hyperbolic,
        _ => Classification::Multiple,
    };
    Ok(WaldResult {
        roots,
        rejected,
        classification,
        search_interval: (-kappa_cap, t_pos / l2),
        cayley_menger: cm,
    })
}

/// Rounding level of the reduced determinant relative to its scale.
const NOISE: f64 = 1e3 * f64::EPSILON;

/// Levels of local resampling around same-sign minima of |f|.
const REFINE_DEPTH: usize = 4;
const REFINE_SAMPLES: usize = 17;

/// Bisects every sign change of the sampled values. A same-sign local
/// minimum of |f| may hide a pair of close roots inside one cell, so its
/// neighborhood is resampled more finely. At the finest level the minimum
/// itself is kept when |f| vanishes there, which catches double roots.
fn collect_roots(
    f: &impl Fn(f64) -> f64,
    sampled: &impl Fn(f64) -> Option<f64>,
    touches: &impl Fn(f64) -> bool,
    values: &[(f64, f64)],
    depth: usize,
    tol: f64,
    l2: f64,
    out: &mut Vec<f64>,
) {
    for (i, pair) in values.windows(2).enumerate() {
        let ((a, fa), (b, fb)) = (pair[0], pair[1]);
        if fa == 0.0 {
            out.push(a);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            out.push(bisect(f, a, b, fa, tol, l2));
        } else if depth > 0 && i + 2 < values.len() {
            let (c, fc) = values[i + 2];
            let same = fa.signum() == fc.signum() && fb.signum() == fa.signum();
            if same && fb.abs() <= fa.abs() && fb.abs() <= fc.abs() {
                if depth == 1 {
                    let t = minimize_abs(f, a, c, tol, l2);
                    if touches(t) {
                        out.push(t);
                    }
                }
                let fine: Vec<(f64, f64)> = (0..REFINE_SAMPLES)
                    .map(|k| a + (c - a) * k as f64 / (REFINE_SAMPLES - 1) as f64)
                    .filter_map(|t| sampled(t).map(|v| (t, v)))
                    .collect();
                collect_roots(f, sampled, touches, &fine, depth - 1, tol, l2, out);
            }
        }
    }
    if let Some(&(t, v)) = values.last() {
        if v == 0.0 {
            out.push(t);
        }
    }
}

/// Golden-section search for the minimum of |f| on `[lo, hi]`.
fn minimize_abs(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64, l2: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1).abs(), f(x2).abs());
    for _ in 0..200 {
        if (hi - lo) <= tol * (1.0 + lo.abs() / l2) * l2 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1).abs();
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2).abs();
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn bisect(
    f: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    tol: f64,
    l2: f64,
) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= tol * (1.0 + mid.abs() / l2) * l2 {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reduced_determinant_at_zero_is_cayley_menger_over_eight() {
        let q = MetricQuadruple::from_distances([1.3, 0.9, 1.7, 1.1, 1.4, 0.8]).unwrap();
        let r = Reduced::new(&q);
        let l = q.max_distance();
        assert_abs_diff_eq!(
            r.eval(0.0).0,
            q.cayley_menger() / 8.0 / l.powi(6),
            epsilon = 1e-14
        );
    }

    #[test]
    fn reduced_determinant_matches_direct_cos_determinant() {
        // Away from κ = 0 the direct determinant divided by t³ is accurate enough.
        let q = MetricQuadruple::from_distances([1.0; 6]).unwrap();
        let r = Reduced::new(&q);
        for t in [-3.0f64, -0.5, 0.7, 2.0, 5.0] {
            let direct = Matrix4::from_fn(|i, j| {
                let d: f64 = if i == j { 0.0 } else { 1.0 };
                if t > 0.0 {
                    (t.sqrt() * d).cos()
                } else {
                    ((-t).sqrt() * d).cosh()
                }
            })
            .determinant()
                / (t * t * t);
            assert_abs_diff_eq!(r.eval(t).0, direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn grid_shape() {
        let g = scan_grid(512, 1e4, PI * PI);
        assert_eq!(g.len(), 512);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_abs_diff_eq!(g[0], -1e4, epsilon = 1e-9);
        assert_abs_diff_eq!(*g.last().unwrap(), PI * PI, epsilon = 1e-12);
        assert!(g.contains(&0.0));
    }

    #[test]
    fn unit_square_is_flat() {
        let s = 2f64.sqrt();
        let q = MetricQuadruple::from_distances([1.0, s, 1.0, 1.0, s, 1.0]).unwrap();
        let w = wald_curvature(&q, &WaldOptions::default()).unwrap();
        assert_eq!(w.classification, Classification::Flat);
        assert_eq!(w.roots[0].kappa, 0.0);
        // The chord tetrahedron of the square metric is a disphenoid that is
        // inscribed in a sphere, so a spherical root is validated as well.
        assert!(w.roots.iter().any(|r| r.kappa > 0.0));
    }

    #[test]
    fn unit_tetrahedron_is_spherical() {
        let q = MetricQuadruple::from_distances([1.0; 6]).unwrap();
        let w = wald_curvature(&q, &WaldOptions::default()).unwrap();
        assert_eq!(w.classification, Classification::Spherical);
        let expected = (-1.0f64 / 3.0).acos().powi(2);
        assert_abs_diff_eq!(w.unique().unwrap(), expected, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_is_an_error() {
        let q = MetricQuadruple::from_distances([1.0, 2.0, 1.5, 1.0, 1.2, 1.3]).unwrap();
        assert!(matches!(
            wald_curvature(&q, &WaldOptions::default()),
            Err(Error::Degenerate(_))
        ));
    }
}
