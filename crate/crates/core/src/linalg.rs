use nalgebra::{Matrix3, Matrix4, Matrix5, Vector3};

pub(crate) type Vec3 = Vector3<f64>;

pub(crate) fn v3(p: [f64; 3]) -> Vec3 {
    Vec3::new(p[0], p[1], p[2])
}

/// Determinant of the matrix `[[0, 1ᵀ], [1, m]]`.
pub(crate) fn bordered_det(m: &Matrix4<f64>) -> f64 {
    let mut b = Matrix5::<f64>::zeros();
    for i in 0..4 {
        b[(0, i + 1)] = 1.0;
        b[(i + 1, 0)] = 1.0;
        for j in 0..4 {
            b[(i + 1, j + 1)] = m[(i, j)];
        }
    }
    b.determinant()
}

/// The four principal 3×3 minors of `m`, minor `i` omitting row/column `i`.
pub(crate) fn principal_minors3(m: &Matrix4<f64>) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (skip, slot) in out.iter_mut().enumerate() {
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        let sub = Matrix3::from_fn(|r, c| m[(idx[r], idx[c])]);
        *slot = sub.determinant();
    }
    out
}
