//! Exact 3-vectors over rational scalars.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{self, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec3 {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            scalar::format(&self.x),
            scalar::format(&self.y),
            scalar::format(&self.z)
        )
    }
}

impl Vec3 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3::new(scalar::int(x), scalar::int(y), scalar::int(z))
    }

    pub fn zero() -> Self {
        Vec3::new(Scalar::zero(), Scalar::zero(), Scalar::zero())
    }

    pub fn dot(&self, other: &Vec3) -> Scalar {
        &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        Vec3::new(
            &self.y * &other.z - &self.z * &other.y,
            &self.z * &other.x - &self.x * &other.z,
            &self.x * &other.y - &self.y * &other.x,
        )
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, s: &Scalar) -> Vec3 {
        Vec3::new(&self.x * s, &self.y * s, &self.z * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Lexicographic (x, y, z) order; the canonicalization order for
    /// vertex lists.
    pub fn lex_cmp(&self, other: &Vec3) -> Ordering {
        self.x
            .cmp(&other.x)
            .then_with(|| self.y.cmp(&other.y))
            .then_with(|| self.z.cmp(&other.z))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [
            scalar::to_f64(&self.x),
            scalar::to_f64(&self.y),
            scalar::to_f64(&self.z),
        ]
    }

    pub fn map<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Vec3 {
        Vec3::new(f(&self.x), f(&self.y), f(&self.z))
    }
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, rhs: &Vec3) -> Vec3 {
        Vec3::new(&self.x + &rhs.x, &self.y + &rhs.y, &self.z + &rhs.z)
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: &Vec3) -> Vec3 {
        Vec3::new(&self.x - &rhs.x, &self.y - &rhs.y, &self.z - &rhs.z)
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-&self.x, -&self.y, -&self.z)
    }
}

impl Mul<&Scalar> for &Vec3 {
    type Output = Vec3;
    fn mul(self, s: &Scalar) -> Vec3 {
        self.scale(s)
    }
}

/// Sign of det(b-a, c-a, d-a): positive when `d` lies on the side of the
/// plane through a,b,c that the right-handed normal (b-a)x(c-a) points to.
pub fn orient3d(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> Ordering {
    let u = b - a;
    let v = c - a;
    let w = d - a;
    u.cross(&v).dot(&w).cmp(&Scalar::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn cross_is_perpendicular() {
        let a = Vec3::from_ints(1, 2, 3);
        let b = Vec3::from_ints(-4, 5, 7);
        let c = a.cross(&b);
        assert!(c.dot(&a).is_zero());
        assert!(c.dot(&b).is_zero());
    }

    #[test]
    fn orient3d_signs() {
        let o = Vec3::zero();
        let e1 = Vec3::from_ints(1, 0, 0);
        let e2 = Vec3::from_ints(0, 1, 0);
        let up = Vec3::from_ints(0, 0, 1);
        let down = Vec3::from_ints(0, 0, -1);
        assert_eq!(orient3d(&o, &e1, &e2, &up), Ordering::Greater);
        assert_eq!(orient3d(&o, &e1, &e2, &down), Ordering::Less);
        assert_eq!(orient3d(&o, &e1, &e2, &Vec3::from_ints(5, 5, 0)), Ordering::Equal);
    }

    #[test]
    fn lex_order() {
        let a = Vec3::new(int(0), int(1), int(5));
        let b = Vec3::new(int(0), int(2), int(-9));
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
    }
}
