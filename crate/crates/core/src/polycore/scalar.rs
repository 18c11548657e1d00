//! Exact scalars: rationals and Gaussian rationals.
//!
//! `Rat` is a reduced big rational with positive denominator (upheld by
//! `num-rational`). `GaussRat` is the field Q(i) used for every exact
//! polynomial coefficient in the crate.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Split a big rational into two f64 limbs hi + lo.
pub fn rat_to_dd(r: &Rat) -> crate::polycore::dd::Dd {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return crate::polycore::dd::Dd { hi, lo: 0.0 };
    }
    let hi_rat = Rat::from_float(hi).unwrap_or_else(|| Rat::zero());
    let lo = (r - &hi_rat).to_f64().unwrap_or(0.0);
    crate::polycore::dd::Dd { hi, lo }
}

/// Element of Q(i): `re + im*i` with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(rat_int(n), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        GaussRat::new(r, Rat::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::new(rat(num, den), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// re^2 + im^2, the field norm.
    pub fn norm2(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero GaussRat");
        let n = self.norm2();
        GaussRat::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Two-limb (hi + lo) image, exact to ~106 bits; rationals whose
    /// numerators exceed one f64 mantissa still convert faithfully.
    pub fn to_cdd(&self) -> crate::polycore::dd::Cdd {
        crate::polycore::dd::Cdd {
            re: rat_to_dd(&self.re),
            im: rat_to_dd(&self.im),
        }
    }

    /// Magnitude estimate used for scale-relative comparisons.
    pub fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &GaussRat {
    type Output = GaussRat;
    fn div(self, rhs: &GaussRat) -> GaussRat {
        self * &rhs.inv()
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussRat {
    /// "a", "b*i" or "a+b*i" in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut wrote = false;
        if !self.re.is_zero() {
            write!(f, "{}", self.re)?;
            wrote = true;
        }
        if !self.im.is_zero() {
            if wrote && self.im.is_positive() {
                write!(f, "+")?;
            }
            if self.im.is_one() {
                write!(f, "i")?;
            } else if (-self.im.clone()).is_one() {
                write!(f, "-i")?;
            } else {
                write!(f, "{}*i", self.im)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
