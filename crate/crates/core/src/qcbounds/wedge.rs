use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Exact positive rational with reduced terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return domain("zero denominator");
        }
        let g = num.gcd(&den).max(1);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    fn checked_mul(self, other: Rational) -> Option<Rational> {
        // cross-reduce first to delay overflow
        let g1 = self.num.gcd(&other.den).max(1);
        let g2 = other.num.gcd(&self.den).max(1);
        let num = (self.num / g1).checked_mul(other.num / g2)?;
        let den = (self.den / g2).checked_mul(other.den / g1)?;
        Some(Rational { num, den })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An angle, either in radians or as an exact rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Angle {
    Radians(f64),
    /// `num·π/den`.
    PiFraction {
        num: u64,
        den: u64,
    },
}

impl Angle {
    pub fn pi_fraction(num: u64, den: u64) -> Result<Self> {
        let r = Rational::new(num, den)?;
        Ok(Angle::PiFraction {
            num: r.num,
            den: r.den,
        })
    }

    pub fn radians(self) -> f64 {
        match self {
            Angle::Radians(a) => a,
            Angle::PiFraction { num, den } => PI * num as f64 / den as f64,
        }
    }

    /// `α/π` when exactly known.
    fn over_pi(self) -> Option<Rational> {
        match self {
            Angle::PiFraction { num, den } => Some(Rational { num, den }),
            Angle::Radians(_) => None,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::Radians(a) => write!(f, "{a}"),
            Angle::PiFraction { num, den } => {
                let n = if num == 1 {
                    String::new()
                } else {
                    num.to_string()
                };
                if den == 1 {
                    write!(f, "{n}pi")
                } else {
                    write!(f, "{n}pi/{den}")
                }
            }
        }
    }
}

/// Accepts plain radians (`1.5708`) or multiples of π written as `pi`,
/// `2pi/3`, `3*pi/4`, `pi/6` (`π` is accepted for `pi`).
impl FromStr for Angle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            message: format!("invalid angle {s:?}: {msg}"),
        };
        let t = s.trim().replace('π', "pi");
        if let Some(pos) = t.find("pi") {
            let head = t[..pos].trim().trim_end_matches('*').trim();
            let tail = t[pos + 2..].trim();
            let num: u64 = if head.is_empty() {
                1
            } else {
                head.parse().map_err(|_| bad("bad multiplier"))?
            };
            let den: u64 = if tail.is_empty() {
                1
            } else {
                let d = tail.strip_prefix('/').ok_or_else(|| bad("expected /"))?;
                d.trim().parse().map_err(|_| bad("bad denominator"))?
            };
            if num == 0 || den == 0 {
                return Err(bad("angle must be positive"));
            }
            return Angle::pi_fraction(num, den);
        }
        let a: f64 = t.parse().map_err(|_| bad("not a number"))?;
        if !(a.is_finite() && a > 0.0) {
            return Err(bad("angle must be positive and finite"));
        }
        Ok(Angle::Radians(a))
    }
}

/// A dihedral wedge of type `k` in dimension `n` with `n − k − 1` angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DihedralWedgeSpec {
    pub n: usize,
    pub k: usize,
    pub angles: Vec<Angle>,
}

impl DihedralWedgeSpec {
    /// The classical wedge of angle `alpha` in dimension `n` (type `n − 2`).
    pub fn wedge(n: usize, alpha: Angle) -> Self {
        DihedralWedgeSpec {
            n,
            k: n.saturating_sub(2),
            angles: vec![alpha],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (n, k) = (self.n, self.k);
        // n = 2, k = 0 is the planar sector
        let type_ok = if n == 2 {
            k == 0
        } else {
            n >= 3 && k >= 1 && k <= n - 2
        };
        if !type_ok {
            return domain(format!(
                "wedge type k = {k} is invalid in dimension n = {n}"
            ));
        }
        if self.angles.len() != n - k - 1 {
            return domain(format!(
                "expected {} angles for n = {n}, k = {k}, got {}",
                n - k - 1,
                self.angles.len()
            ));
        }
        for a in &self.angles {
            let over_pi = a.over_pi();
            let reflex = match over_pi {
                Some(r) => r.num > r.den,
                None => a.radians() > PI,
            };
            if reflex {
                return domain(format!(
                    "angle {a} exceeds pi; coefficients of non-convex wedges are not known"
                ));
            }
            if !(a.radians() > 0.0) {
                return domain(format!("angle {a} must be positive"));
            }
        }
        Ok(())
    }
}

/// Inner, lower outer, and maximal dilatation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilatationBounds {
    pub k_i: f64,
    pub k_o_lower: f64,
    pub k: f64,
    /// `K_I` as an exact rational when all inputs are exact.
    pub exact_k_i: Option<Rational>,
}

impl DilatationBounds {
    fn from_inner(k_i: f64, n: usize, exact_k_i: Option<Rational>) -> Self {
        let k_o_lower = if n <= 2 {
            k_i
        } else {
            k_i.powf(1.0 / (n - 1) as f64)
        };
        DilatationBounds {
            k_i,
            k_o_lower,
            k: k_i,
            exact_k_i,
        }
    }
}

/// `K_I = π^{n−k−1} / ∏ α_i`, `K_O ≥ K_I^{1/(n−1)}`, `K = K_I`.
pub fn dihedral_wedge_coefficients(spec: &DihedralWedgeSpec) -> Result<DilatationBounds> {
    spec.validate()?;
    let exact = spec
        .angles
        .iter()
        .map(|a| {
            a.over_pi().map(|r| Rational {
                num: r.den,
                den: r.num,
            })
        })
        .try_fold(Rational { num: 1, den: 1 }, |acc, r| acc.checked_mul(r?));
    let k_i = match exact {
        Some(r) => r.value(),
        None => spec.angles.iter().map(|a| PI / a.radians()).product(),
    };
    Ok(DilatationBounds::from_inner(k_i, spec.n, exact))
}

/// Lower bounds for a convex polyhedron with `m` facets in dimension `n`:
/// `K_I ≥ (m − n + 2)/(m − n)`.
pub fn convex_face_count_bound(m: u64, n: u64) -> Result<DilatationBounds> {
    if n < 2 {
        return domain(format!("dimension must be at least 2, got {n}"));
    }
    if m <= n {
        return domain(format!(
            "a convex polyhedron in dimension {n} needs more than {n} facets, got {m}"
        ));
    }
    let r = Rational::new(m - n + 2, m - n)?;
    Ok(DilatationBounds::from_inner(r.value(), n as usize, Some(r)))
}

/// Strict ceiling `n^{n−1} · K_I` for the infimum of the local index on a
/// nondegenerate continuum.
pub fn uniform_index_bound(n: u32, k_i: f64) -> Result<f64> {
    if n < 3 {
        return domain(format!("index bound needs dimension at least 3, got {n}"));
    }
    if !(k_i >= 1.0 && k_i.is_finite()) {
        return domain(format!(
            "inner dilatation must be finite and at least 1, got {k_i}"
        ));
    }
    Ok((n as f64).powi(n as i32 - 1) * k_i)
}

/// Dilatation of the folding map between wedges of angles `alpha` and
/// `beta`: `max(α/β, β/α)`.
pub fn folding_dilatation(alpha: Angle, beta: Angle) -> Result<f64> {
    let (a, b) = (alpha.radians(), beta.radians());
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return domain("folding angles must be positive and finite");
    }
    if let (Some(x), Some(y)) = (alpha.over_pi(), beta.over_pi()) {
        // exact when both are multiples of π
        if let (Some(p), Some(q)) = (x.num.checked_mul(y.den), y.num.checked_mul(x.den)) {
            let r = Rational::new(p.max(q), p.min(q))?;
            return Ok(r.value());
        }
    }
    Ok((a / b).max(b / a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(num: u64, den: u64) -> Angle {
        Angle::pi_fraction(num, den).unwrap()
    }

    #[test]
    fn right_wedge_in_space() {
        let b = dihedral_wedge_coefficients(&DihedralWedgeSpec::wedge(3, pi(1, 2))).unwrap();
        assert_eq!(b.k, 2.0);
        assert_eq!(b.exact_k_i, Some(Rational { num: 2, den: 1 }));
        assert_eq!(b.k_o_lower, 2f64.sqrt());
    }

    #[test]
    fn two_right_angles_in_four_dimensions() {
        let spec = DihedralWedgeSpec {
            n: 4,
            k: 1,
            angles: vec![pi(1, 2), pi(1, 2)],
        };
        assert_eq!(dihedral_wedge_coefficients(&spec).unwrap().k_i, 4.0);
    }

    #[test]
    fn half_space_is_trivial() {
        let b = dihedral_wedge_coefficients(&DihedralWedgeSpec::wedge(3, pi(1, 1))).unwrap();
        assert_eq!(b.k, 1.0);
    }

    #[test]
    fn reflex_and_bad_types_rejected() {
        assert!(dihedral_wedge_coefficients(&DihedralWedgeSpec::wedge(3, pi(3, 2))).is_err());
        assert!(
            dihedral_wedge_coefficients(&DihedralWedgeSpec::wedge(3, Angle::Radians(3.2))).is_err()
        );
        let wrong_count = DihedralWedgeSpec {
            n: 4,
            k: 1,
            angles: vec![pi(1, 2)],
        };
        assert!(wrong_count.validate().is_err());
        let wrong_type = DihedralWedgeSpec {
            n: 3,
            k: 2,
            angles: vec![],
        };
        assert!(wrong_type.validate().is_err());
    }

    #[test]
    fn planar_sector() {
        let b = dihedral_wedge_coefficients(&DihedralWedgeSpec::wedge(2, pi(1, 3))).unwrap();
        assert_eq!((b.k_i, b.k_o_lower), (3.0, 3.0));
    }

    #[test]
    fn face_count_bounds() {
        assert_eq!(
            convex_face_count_bound(4, 3).unwrap().exact_k_i,
            Some(Rational { num: 3, den: 1 })
        );
        assert_eq!(
            convex_face_count_bound(6, 3).unwrap().exact_k_i,
            Some(Rational { num: 5, den: 3 })
        );
        assert!(convex_face_count_bound(3, 3).is_err());
    }

    #[test]
    fn index_bounds() {
        assert_eq!(uniform_index_bound(3, 2.0).unwrap(), 18.0);
        assert_eq!(uniform_index_bound(3, 1.0).unwrap(), 9.0);
        assert!(uniform_index_bound(2, 1.0).is_err());
        assert!(uniform_index_bound(3, 0.5).is_err());
    }

    #[test]
    fn folding_is_at_least_one() {
        assert_eq!(folding_dilatation(pi(1, 2), pi(1, 1)).unwrap(), 2.0);
        assert_eq!(folding_dilatation(pi(1, 1), pi(1, 2)).unwrap(), 2.0);
        assert_eq!(
            folding_dilatation(Angle::Radians(1.0), Angle::Radians(1.0)).unwrap(),
            1.0
        );
    }

    #[test]
    fn angle_parsing() {
        assert_eq!("pi/2".parse::<Angle>().unwrap(), pi(1, 2));
        assert_eq!("2pi/4".parse::<Angle>().unwrap(), pi(1, 2));
        assert_eq!("3*pi/4".parse::<Angle>().unwrap(), pi(3, 4));
        assert_eq!("π".parse::<Angle>().unwrap(), pi(1, 1));
        assert_eq!("0.5".parse::<Angle>().unwrap(), Angle::Radians(0.5));
        for bad in ["", "pi/0", "0pi", "-1", "nan", "pi*2", "x"] {
            assert!(bad.parse::<Angle>().is_err(), "{bad}");
        }
        assert_eq!(pi(2, 3).to_string().parse::<Angle>().unwrap(), pi(2, 3));
    }
}
