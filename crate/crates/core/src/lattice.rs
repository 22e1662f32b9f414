//! The rank-2 lattice `M` of Fourier modes and its dual `N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `M = Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub x: i64,
    pub y: i64,
}

/// An element of `N = Hom(M, Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct DualVector {
    pub x: i64,
    pub y: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticeVector { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Quarter turn anticlockwise, `(x, y) -> (-y, x)`, viewed as a dual vector.
    ///
    /// With the standard pairing this is the normal `n` satisfying
    /// `pairing(p, rot90(m)) = det(m, p)`.
    pub fn rot90(&self) -> DualVector {
        DualVector::new(-self.y, self.x)
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector::new(self.x * k, self.y * k)
    }

    pub fn norm_sq(&self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x as f64, self.y as f64]
    }

    /// Polar angle in `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        let a = (self.y as f64).atan2(self.x as f64);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

impl DualVector {
    pub const fn new(x: i64, y: i64) -> Self {
        DualVector { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn norm_sq(&self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn scale(&self, k: i64) -> Self {
        DualVector::new(self.x * k, self.y * k)
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x as f64, self.y as f64]
    }
}

impl From<[i64; 2]> for LatticeVector {
    fn from(v: [i64; 2]) -> Self {
        LatticeVector::new(v[0], v[1])
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.x, v.y]
    }
}

impl From<[i64; 2]> for DualVector {
    fn from(v: [i64; 2]) -> Self {
        DualVector::new(v[0], v[1])
    }
}

impl From<DualVector> for [i64; 2] {
    fn from(v: DualVector) -> Self {
        [v.x, v.y]
    }
}

impl Add for LatticeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        LatticeVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        LatticeVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for LatticeVector {
    type Output = Self;
    fn neg(self) -> Self {
        LatticeVector::new(-self.x, -self.y)
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, v: LatticeVector) -> LatticeVector {
        v.scale(self)
    }
}

impl Add for DualVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        DualVector::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for DualVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        DualVector::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for DualVector {
    type Output = Self;
    fn neg(self) -> Self {
        DualVector::new(-self.x, -self.y)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The natural pairing `M x N -> Z`.
pub fn pairing(m: LatticeVector, n: DualVector) -> i64 {
    m.x * n.x + m.y * n.y
}

/// `det(a, b) = a.x b.y - a.y b.x`, the oriented area spanned by `a` and `b`.
pub fn det(a: LatticeVector, b: LatticeVector) -> i64 {
    a.x * b.y - a.y * b.x
}

/// Splits `m = k * m0` with `m0` primitive and `k >= 1`.
pub fn primitive_part(m: LatticeVector) -> Result<(LatticeVector, i64)> {
    if m.is_zero() {
        return Err(Error::ZeroVector);
    }
    let k = m.x.gcd(&m.y);
    Ok((LatticeVector::new(m.x / k, m.y / k), k))
}

/// Primitive part of a dual vector, with the same sign convention as [`primitive_part`].
pub fn primitive_dual(n: DualVector) -> Result<(DualVector, i64)> {
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    let k = n.x.gcd(&n.y);
    Ok((DualVector::new(n.x / k, n.y / k), k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(LatticeVector::new(1, 0), DualVector::new(0, 1)), 0);
        assert_eq!(pairing(LatticeVector::new(1, 0), DualVector::new(1, 0)), 1);
        assert_eq!(pairing(LatticeVector::new(2, 3), DualVector::new(-3, 2)), 0);
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(LatticeVector::new(2, 4)).unwrap(), (LatticeVector::new(1, 2), 2));
        assert_eq!(primitive_part(LatticeVector::new(1, 1)).unwrap(), (LatticeVector::new(1, 1), 1));
        assert_eq!(primitive_part(LatticeVector::new(0, -3)).unwrap(), (LatticeVector::new(0, -1), 3));
        assert!(matches!(primitive_part(LatticeVector::ZERO), Err(Error::ZeroVector)));
    }

    #[test]
    fn rot90_pairs_as_determinant() {
        let m = LatticeVector::new(2, -1);
        let p = LatticeVector::new(3, 5);
        assert_eq!(pairing(p, m.rot90()), det(m, p));
        assert_eq!(pairing(m, m.rot90()), 0);
    }
}
