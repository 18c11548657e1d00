//! Paired-limb ("double-double") arithmetic.
//!
//! The extended evaluation mode represents a real as an unevaluated sum
//! `hi + lo` of two f64 limbs, roughly doubling the working mantissa
//! (~106 bits). Only the operations the evaluation and root-polishing paths
//! need are implemented. Algorithms are the classical error-free transforms
//! (TwoSum, TwoProd with FMA).

use num_complex::Complex64;

#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, rhs: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let s2 = s2 + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    pub fn sub(self, rhs: Dd) -> Dd {
        self.add(rhs.neg())
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul(self, rhs: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, rhs: Dd) -> Dd {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul(Dd::from_f64(q1)));
        let q2 = r.hi / rhs.hi;
        let r2 = r.sub(rhs.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

/// Complex double-double.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };

    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Cdd {
        Cdd {
            re: Dd::from_f64(re),
            im: Dd::from_f64(im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(rhs.re),
            im: self.im.add(rhs.im),
        }
    }

    pub fn sub(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.sub(rhs.re),
            im: self.im.sub(rhs.im),
        }
    }

    pub fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    pub fn div(self, rhs: Cdd) -> Cdd {
        let n = rhs.re.mul(rhs.re).add(rhs.im.mul(rhs.im));
        let conj = Cdd {
            re: rhs.re,
            im: rhs.im.neg(),
        };
        let p = self.mul(conj);
        Cdd {
            re: p.re.div(n),
            im: p.im.div(n),
        }
    }

    pub fn norm(self) -> f64 {
        self.to_c64().norm()
    }
}

impl std::ops::Add for Cdd {
    type Output = Cdd;
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd::add(self, rhs)
    }
}
impl std::ops::Sub for Cdd {
    type Output = Cdd;
    fn sub(self, rhs: Cdd) -> Cdd {
        Cdd::sub(self, rhs)
    }
}
impl std::ops::Mul for Cdd {
    type Output = Cdd;
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd::mul(self, rhs)
    }
}
impl std::ops::Div for Cdd {
    type Output = Cdd;
    fn div(self, rhs: Cdd) -> Cdd {
        Cdd::div(self, rhs)
    }
}
impl std::ops::Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

/// Complex scalar abstraction: the curvature pipeline runs over f64
/// complexes or paired-limb complexes with the same code.
pub trait CScalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    /// Unit roundoff of the representation.
    const EPS: f64;
    fn from_c64(z: num_complex::Complex64) -> Self;
    fn from_cdd(z: Cdd) -> Self;
    fn to_c64(self) -> num_complex::Complex64;
    fn s_zero() -> Self;
    fn norm(self) -> f64;
}

impl CScalar for num_complex::Complex64 {
    const EPS: f64 = 2.220446049250313e-16;
    fn from_c64(z: num_complex::Complex64) -> Self {
        z
    }
    fn from_cdd(z: Cdd) -> Self {
        z.to_c64()
    }
    fn to_c64(self) -> num_complex::Complex64 {
        self
    }
    fn s_zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        num_complex::Complex64::norm(self)
    }
}

impl CScalar for Cdd {
    const EPS: f64 = 4.93e-32;
    fn from_c64(z: num_complex::Complex64) -> Self {
        Cdd::from_c64(z)
    }
    fn from_cdd(z: Cdd) -> Self {
        z
    }
    fn to_c64(self) -> num_complex::Complex64 {
        Cdd::to_c64(self)
    }
    fn s_zero() -> Self {
        Cdd::ZERO
    }
    fn norm(self) -> f64 {
        Cdd::norm(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_recovers_lost_bits() {
        let a = Dd::from_f64(1.0);
        let b = Dd::from_f64(1e-20);
        let s = a.add(b);
        // Plain f64 would lose the 1e-20 entirely.
        assert_eq!(s.sub(a).to_f64(), 1e-20);
    }

    #[test]
    fn mul_div_inverse() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let q = a.mul(b).div(b);
        assert!((q.sub(a)).abs() < 1e-30);
    }

    #[test]
    fn complex_field_ops() {
        let a = Cdd::from_parts(1.5, -2.25);
        let b = Cdd::from_parts(-0.75, 0.5);
        let q = a.mul(b).div(b);
        assert!(q.sub(a).norm() < 1e-30);
    }
}
