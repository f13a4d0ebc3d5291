use std::collections::HashMap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mesh::PolyMesh;
use crate::error::{Error, Result};
use crate::linalg::{v3, Vec3};

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Samples per random stream; fixes the work split independently of the
/// thread count.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum LinkMethod {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkVolume {
    pub vertex: usize,
    /// Solid angle of the interior cone divided by 4π.
    pub value: f64,
    /// Monte Carlo standard error; absent for the exact method.
    pub standard_error: Option<f64>,
    pub samples: Option<u64>,
    /// Normalized volume of the dual cone, for convex corners.
    pub exterior: Option<f64>,
    pub convex: bool,
}

/// Unit directions from `v` to its link vertices, in the order that keeps
/// the solid interior on the left when seen from outside the sphere.
fn link_polygon(mesh: &PolyMesh, v: usize) -> Result<Vec<Vec3>> {
    let unsupported = |message: &str| Error::UnsupportedVertex {
        vertex: v,
        message: message.to_string(),
    };
    if v >= mesh.vertices.len() {
        return Err(unsupported("no such vertex"));
    }
    // face (v, a, b) contributes the link arc a → b
    let mut next: HashMap<usize, usize> = HashMap::new();
    for f in &mesh.faces {
        let Some(k) = f.iter().position(|&i| i == v) else {
            continue;
        };
        let (a, b) = (f[(k + 1) % 3], f[(k + 2) % 3]);
        if next.insert(a, b).is_some() {
            return Err(unsupported("neighborhood is not a disk"));
        }
    }
    if next.len() < 3 {
        return Err(unsupported("fewer than three incident faces"));
    }
    let start = *next.keys().min().expect("nonempty");
    let mut cycle = vec![start];
    let mut cur = start;
    loop {
        cur = *next
            .get(&cur)
            .ok_or_else(|| unsupported("neighborhood has a boundary"))?;
        if cur == start {
            break;
        }
        if cycle.len() > next.len() {
            return Err(unsupported("link is not a simple cycle"));
        }
        cycle.push(cur);
    }
    if cycle.len() != next.len() {
        return Err(unsupported("link has several components"));
    }
    let apex = mesh.point(v);
    let mut dirs: Vec<Vec3> = cycle
        .iter()
        .map(|&i| (mesh.point(i) - apex).normalize())
        .collect();
    // outward faces put the interior on the right of a → b
    if mesh.orientation_sign() > 0.0 {
        dirs.reverse();
    }
    Ok(dirs)
}

/// Interior angle at each polygon vertex, in [0, 2π).
fn interior_angles(p: &[Vec3]) -> Vec<f64> {
    let m = p.len();
    (0..m)
        .map(|i| {
            let u = p[i];
            let tangent = |w: Vec3| w - u * u.dot(&w);
            let t_next = tangent(p[(i + 1) % m]);
            let t_prev = tangent(p[(i + m - 1) % m]);
            let a = t_next.cross(&t_prev).dot(&u).atan2(t_next.dot(&t_prev));
            if a < 0.0 {
                a + 2.0 * PI
            } else {
                a
            }
        })
        .collect()
}

/// Area of the spherical polygon to the left of the cycle (Girard).
fn polygon_area(p: &[Vec3]) -> f64 {
    interior_angles(p).iter().sum::<f64>() - (p.len() as f64 - 2.0) * PI
}

/// Signed area of the spherical triangle `(a, b, c)`.
fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// The fan sum of signed triangles from a point `c` equals the polygon area,
/// less 4π when `−c` lies inside; it jumps only where `−c` crosses an edge.
fn contains(p: &[Vec3], area: f64, u: &Vec3) -> bool {
    let m = p.len();
    let c = -u;
    let fan: f64 = (0..m)
        .map(|i| triangle_area(&c, &p[i], &p[(i + 1) % m]))
        .sum();
    fan < area - 2.0 * PI
}

#[derive(Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan's pairwise merge.
    fn merge(self, o: Welford) -> Welford {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    fn standard_error(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

fn monte_carlo(p: &[Vec3], area: f64, samples: u64, seed: u64) -> Welford {
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut w = Welford::default();
            for _ in 0..n {
                let u: [f64; 3] = UnitSphere.sample(&mut rng);
                w.push(if contains(p, area, &v3(u)) { 1.0 } else { 0.0 });
            }
            w
        })
        .collect();
    parts.into_iter().fold(Welford::default(), Welford::merge)
}

/// Normalized volume (solid angle over 4π) of the solid cone at vertex `v`.
///
/// The faces around `v` must form a single closed disk. Closed meshes are
/// normalized to outward orientation; open meshes are assumed outward.
pub fn normalized_link_volume(mesh: &PolyMesh, v: usize, method: LinkMethod) -> Result<LinkVolume> {
    let p = link_polygon(mesh, v)?;
    let angles = interior_angles(&p);
    let area = polygon_area(&p);
    let convex = angles.iter().all(|&a| a <= PI + 1e-12);
    let exterior = convex.then(|| {
        let m = p.len();
        let face_angles: f64 = (0..m)
            .map(|i| {
                let (a, b) = (p[i], p[(i + 1) % m]);
                a.cross(&b).norm().atan2(a.dot(&b))
            })
            .sum();
        (2.0 * PI - face_angles) / (4.0 * PI)
    });
    let (value, standard_error, samples) = match method {
        LinkMethod::Exact => (area / (4.0 * PI), None, None),
        LinkMethod::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::Domain(
                    "Monte Carlo needs at least one sample".into(),
                ));
            }
            let w = monte_carlo(&p, area, samples, seed);
            (w.mean, Some(w.standard_error()), Some(samples))
        }
    };
    Ok(LinkVolume {
        vertex: v,
        value,
        standard_error,
        samples,
        exterior,
        convex,
    })
}

#[cfg(test)]
mod tests {
    use super::super::mesh::fixtures::{cube, tetrahedron};
    use super::*;

    #[test]
    fn cube_corner_is_an_octant() {
        for v in 0..8 {
            let r = normalized_link_volume(&cube(), v, LinkMethod::Exact).unwrap();
            assert!((r.value - 0.125).abs() < 1e-12, "{v}: {}", r.value);
            // dual of an octant is an octant
            assert!((r.exterior.unwrap() - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn flipped_cube_gives_same_volume() {
        let r = normalized_link_volume(&cube().flipped(), 0, LinkMethod::Exact).unwrap();
        assert!((r.value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_corner() {
        let oracle = (23.0f64 / 27.0).acos() / (4.0 * PI);
        let r = normalized_link_volume(&tetrahedron(), 0, LinkMethod::Exact).unwrap();
        assert!((r.value - oracle).abs() < 1e-12);
    }

    #[test]
    fn flat_patch_is_half_space() {
        let vertices = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
        ];
        let faces: Vec<Vec<usize>> = (1..5).map(|i| vec![0, i, i % 4 + 1]).collect();
        let m = PolyMesh::new(vertices, &faces).unwrap();
        let r = normalized_link_volume(&m, 0, LinkMethod::Exact).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert!((r.exterior.unwrap()).abs() < 1e-12);
        assert!(normalized_link_volume(&m, 1, LinkMethod::Exact).is_err());
    }

    #[test]
    fn monte_carlo_is_reproducible_and_close() {
        let method = LinkMethod::MonteCarlo {
            samples: 200_000,
            seed: 7,
        };
        let a = normalized_link_volume(&cube(), 3, method).unwrap();
        let b = normalized_link_volume(&cube(), 3, method).unwrap();
        assert_eq!(a, b);
        let se = a.standard_error.unwrap();
        assert!((a.value - 0.125).abs() < 3.0 * se, "{} ± {se}", a.value);
    }

    #[test]
    fn welford_merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64).collect();
        let mut all = Welford::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Welford::default(), Welford::default());
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert!((m.mean - all.mean).abs() < 1e-12 && (m.m2 - all.m2).abs() < 1e-9);
    }
}
