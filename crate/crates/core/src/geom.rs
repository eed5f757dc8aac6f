//! Small vector helpers over `&[f64]` and the unit `Direction` newtype.
//!
//! Ambient dimension is a runtime value (the suites run in 2 and 3); points
//! are plain `Vec<f64>` and the helpers here keep the arithmetic in one place.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Float shims so the crate builds without `std` (`f64::sqrt` etc. are std-only).
pub(crate) mod flt {
    #[inline]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    #[inline]
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    #[inline]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[inline]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
    #[inline]
    pub fn acos(x: f64) -> f64 {
        libm::acos(x.clamp(-1.0, 1.0))
    }
    #[inline]
    pub fn asin(x: f64) -> f64 {
        libm::asin(x.clamp(-1.0, 1.0))
    }
    #[inline]
    pub fn atan2(y: f64, x: f64) -> f64 {
        libm::atan2(y, x)
    }
    #[inline]
    pub fn powf(x: f64, p: f64) -> f64 {
        libm::pow(x, p)
    }
    #[inline]
    pub fn hypot(x: f64, y: f64) -> f64 {
        libm::hypot(x, y)
    }
    #[inline]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    #[inline]
    pub fn ceil(x: f64) -> f64 {
        libm::ceil(x)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    flt::sqrt(dot(a, a))
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    flt::sqrt(s)
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s·b`.
#[inline]
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalize(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Angle in `[0, π]` between unit vectors, stable near 0 via the chord length.
#[inline]
pub fn angle_between_units(a: &[f64], b: &[f64]) -> f64 {
    2.0 * flt::asin(0.5 * dist(a, b))
}

/// Lexicographic comparison used for touching-point tie-breaks.
pub fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for i in 0..a.len() {
        if a[i] > b[i] {
            return true;
        }
        if a[i] < b[i] {
            return false;
        }
    }
    false
}

/// Unit vector in R^d, d ≥ 2. Norm is checked to 1e-12 at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub const UNIT_TOL: f64 = 1e-12;

    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "direction needs dimension ≥ 2, got {}",
                components.len()
            )));
        }
        let n = norm(&components);
        if flt::abs(n - 1.0) > Self::UNIT_TOL {
            return Err(Error::InvalidInput(format!(
                "direction is not unit length (norm {n})"
            )));
        }
        Ok(Direction(components))
    }

    /// Normalizes an arbitrary non-zero vector.
    pub fn normalized(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "direction needs dimension ≥ 2, got {}",
                v.len()
            )));
        }
        let u = normalize(&v)
            .ok_or_else(|| Error::InvalidInput("cannot normalize zero vector".into()))?;
        Ok(Direction(u))
    }

    /// Canonical axis `e_k`.
    pub fn axis(dim: usize, k: usize) -> Result<Self> {
        if dim < 2 || k >= dim {
            return Err(Error::InvalidInput("bad axis index".into()));
        }
        let mut v = alloc::vec![0.0; dim];
        v[k] = 1.0;
        Ok(Direction(v))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    #[inline]
    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn neg(&self) -> Direction {
        Direction(self.0.iter().map(|x| -x).collect())
    }

    pub fn angle_to(&self, other: &Direction) -> f64 {
        angle_between_units(&self.0, &other.0)
    }
}

impl AsRef<[f64]> for Direction {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Orthonormal basis of the hyperplane orthogonal to `u` (Gram-Schmidt over
/// the coordinate axes, deterministic).
pub fn tangent_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for k in 0..d {
        if basis.len() == d - 1 {
            break;
        }
        let mut v = alloc::vec![0.0; d];
        v[k] = 1.0;
        let mut w = axpy(&v, -dot(&v, u), u);
        for b in &basis {
            w = axpy(&w, -dot(&w, b), b);
        }
        if let Some(unit) = normalize(&w) {
            if norm(&w) > 1e-7 {
                basis.push(unit);
            }
        }
    }
    debug_assert_eq!(basis.len(), d - 1);
    basis
}
