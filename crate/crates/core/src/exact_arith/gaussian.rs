use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{gcd, BigRational};
use crate::error::{Error, Result};

/// `re + i*im` with integer parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Self {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn i() -> Self {
        Self::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn square(&self) -> Self {
        Self {
            re: &self.re * &self.re - &self.im * &self.im,
            im: (&self.re * &self.im) << 1,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Divides both parts by their common gcd (made positive).
    pub fn primitive_part(&self) -> Self {
        let g = gcd(&self.re, &self.im);
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Self {
            re: &self.re / &g,
            im: &self.im / &g,
        }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

/// `(re + i*im) / den` with `den > 0` and the three integers coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GaussianInt,
    den: BigInt,
}

impl GaussianRational {
    pub fn new(num: GaussianInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = gcd(&gcd(&num.re, &num.im), &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                GaussianInt {
                    re: &num.re / &g,
                    im: &num.im / &g,
                },
                den / &g,
            )
        };
        if den.is_negative() {
            num = GaussianInt {
                re: -num.re,
                im: -num.im,
            };
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn from_int(z: GaussianInt) -> Self {
        Self {
            num: z,
            den: BigInt::one(),
        }
    }

    /// `re + i*im` from rational parts.
    pub fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        let den = re.denom() * im.denom();
        let num = GaussianInt {
            re: re.numer() * im.denom(),
            im: im.numer() * re.denom(),
        };
        Self::new(num, den).expect("denominators are positive")
    }

    pub fn re(&self) -> BigRational {
        BigRational::new(self.num.re.clone(), self.den.clone()).expect("positive denominator")
    }

    pub fn im(&self) -> BigRational {
        BigRational::new(self.num.im.clone(), self.den.clone()).expect("positive denominator")
    }

    pub fn numer(&self) -> &GaussianInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .scale(&other.den)
            .add(&other.num.scale(&self.den));
        Self::new(num, &self.den * &other.den).expect("positive denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        let num = self
            .num
            .scale(&other.den)
            .sub(&other.num.scale(&self.den));
        Self::new(num, &self.den * &other.den).expect("positive denominator")
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), &self.den * &other.den)
            .expect("positive denominator")
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        // den / (a + bi) = den (a - bi) / (a^2 + b^2)
        Self::new(self.num.conj().scale(&self.den), self.num.norm())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self::new(
            self.num.pow(exp),
            num_traits::pow(self.den.clone(), exp as usize),
        )
        .expect("positive denominator")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / {}", self.num, self.den)
        }
    }
}
