use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{div_ceil, div_floor, pow10, BigRational};
use crate::error::{Error, Result};

/// Direction used when an irrational value is turned into an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rounding {
    Floor,
    Ceiling,
}

/// A decimal fixed-point real with a certified error radius.
///
/// Represents the interval `[(center - radius) / 10^scale, (center + radius) / 10^scale]`.
/// Every operation returns a ball that contains the exact image of its
/// inputs, so any exact value tracked through a computation stays inside.
#[derive(Clone, PartialEq, Eq)]
pub struct RealBall {
    center: BigInt,
    radius: BigInt,
    scale: u32,
}

impl RealBall {
    /// Raw constructor. `radius` must be non-negative.
    pub fn from_parts(center: BigInt, radius: BigInt, scale: u32) -> Self {
        assert!(!radius.is_negative(), "ball radius must be non-negative");
        Self {
            center,
            radius,
            scale,
        }
    }

    pub fn from_integer(n: impl Into<BigInt>, scale: u32) -> Self {
        Self {
            center: n.into() * pow10(scale),
            radius: BigInt::zero(),
            scale,
        }
    }

    /// Smallest ball at `scale` containing `q`; exact when `q` has a
    /// terminating expansion at that scale.
    pub fn from_rational(q: &BigRational, scale: u32) -> Self {
        let (c, r) = (q.numer() * pow10(scale)).div_mod_floor(q.denom());
        Self {
            center: c,
            radius: if r.is_zero() {
                BigInt::zero()
            } else {
                BigInt::one()
            },
            scale,
        }
    }

    /// The ball covering `[lo, hi]` (given as rationals).
    pub fn from_bounds(lo: &BigRational, hi: &BigRational, scale: u32) -> Self {
        debug_assert!(lo <= hi);
        let s = pow10(scale);
        let lo_u = div_floor(&(lo.numer() * &s), lo.denom());
        let hi_u = div_ceil(&(hi.numer() * &s), hi.denom());
        Self::from_ulps_interval(lo_u, hi_u, scale)
    }

    fn from_ulps_interval(lo: BigInt, hi: BigInt, scale: u32) -> Self {
        let center = div_floor(&(&lo + &hi), &BigInt::from(2));
        let radius = (&hi - &center).max(&center - &lo);
        Self {
            center,
            radius,
            scale,
        }
    }

    pub fn center(&self) -> &BigInt {
        &self.center
    }

    pub fn radius(&self) -> &BigInt {
        &self.radius
    }

    /// Decimal digits after the point carried by the representation.
    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    /// Lower end in units of `10^-scale`.
    pub fn lower_ulps(&self) -> BigInt {
        &self.center - &self.radius
    }

    /// Upper end in units of `10^-scale`.
    pub fn upper_ulps(&self) -> BigInt {
        &self.center + &self.radius
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lower_ulps(), pow10(self.scale)).expect("positive power")
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.upper_ulps(), pow10(self.scale)).expect("positive power")
    }

    pub fn midpoint(&self) -> BigRational {
        BigRational::new(self.center.clone(), pow10(self.scale)).expect("positive power")
    }

    /// Same ball expressed at another scale. Going down rounds outward.
    pub fn rescale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let f = pow10(scale - self.scale);
                Self {
                    center: &self.center * &f,
                    radius: &self.radius * &f,
                    scale,
                }
            }
            Ordering::Less => {
                let f = pow10(self.scale - scale);
                let lo = div_floor(&self.lower_ulps(), &f);
                let hi = div_ceil(&self.upper_ulps(), &f);
                Self::from_ulps_interval(lo, hi, scale)
            }
        }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let s = self.scale.max(other.scale);
        (self.rescale(s), other.rescale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        Self {
            center: a.center + b.center,
            radius: a.radius + b.radius,
            scale: a.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            center: -&self.center,
            radius: self.radius.clone(),
            scale: self.scale,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.aligned(other);
        let s = pow10(a.scale);
        let product = &a.center * &b.center;
        let spread =
            a.center.abs() * &b.radius + b.center.abs() * &a.radius + &a.radius * &b.radius;
        let center = div_floor(&product, &s);
        // Flooring the center moves it by < 1 ulp; cover that too.
        let radius = div_ceil(&spread, &s) + 1u32;
        Self {
            center,
            radius,
            scale: a.scale,
        }
    }

    /// Exact multiplication by an integer.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self {
            center: &self.center * n,
            radius: &self.radius * n.abs(),
            scale: self.scale,
        }
    }

    /// Division by a non-zero integer.
    pub fn div_int(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division of a ball by zero");
        let (center, rem) = self.center.div_mod_floor(n);
        let slack = if rem.is_zero() { 0u32 } else { 1u32 };
        Self {
            center,
            radius: div_ceil(&self.radius, &n.abs()) + slack,
            scale: self.scale,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other);
        let cb = b.center.abs();
        if cb <= b.radius {
            return Err(Error::BallDivisionByZero);
        }
        let s = pow10(a.scale);
        let center = div_floor(&(&a.center * &s), &b.center);
        let spread = &a.radius * &cb + a.center.abs() * &b.radius;
        let radius = div_ceil(&(spread * &s), &((&cb - &b.radius) * &cb)) + 1u32;
        Ok(Self {
            center,
            radius,
            scale: a.scale,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_integer(1, self.scale).div(self)
    }

    /// Square root. The whole ball must be non-negative.
    pub fn sqrt(&self) -> Result<Self> {
        let lo = self.lower_ulps();
        if lo.is_negative() {
            return Err(Error::NegativeSqrt);
        }
        let s = pow10(self.scale);
        if self.radius.is_zero() {
            let v = &self.center * &s;
            let r = v.sqrt();
            if &r * &r == v {
                return Ok(Self {
                    center: r,
                    radius: BigInt::zero(),
                    scale: self.scale,
                });
            }
        }
        let lo_root = (&lo * &s).sqrt();
        let hi_root = (self.upper_ulps() * &s).sqrt() + 1u32;
        Ok(Self::from_ulps_interval(lo_root, hi_root, self.scale))
    }

    /// `true` when every point of the ball is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.lower_ulps().is_positive()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let x = q.numer() * pow10(self.scale);
        self.lower_ulps() * q.denom() <= x && x <= self.upper_ulps() * q.denom()
    }

    pub fn contains_ball(&self, inner: &Self) -> bool {
        let (a, b) = self.aligned(inner);
        a.lower_ulps() <= b.lower_ulps() && b.upper_ulps() <= a.upper_ulps()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.lower_ulps() <= b.upper_ulps() && b.lower_ulps() <= a.upper_ulps()
    }

    /// `true` when `radius <= 10^exp10` in real units.
    pub fn radius_at_most_pow10(&self, exp10: i64) -> bool {
        let shifted = exp10 + self.scale as i64;
        if shifted < 0 {
            return self.radius.is_zero();
        }
        self.radius <= pow10(shifted as u32)
    }

    /// Floor of the lower and upper ends.
    pub fn floor_bounds(&self) -> (BigInt, BigInt) {
        let s = pow10(self.scale);
        (
            div_floor(&self.lower_ulps(), &s),
            div_floor(&self.upper_ulps(), &s),
        )
    }

    /// Ceiling of the lower and upper ends.
    pub fn ceil_bounds(&self) -> (BigInt, BigInt) {
        let s = pow10(self.scale);
        (
            div_ceil(&self.lower_ulps(), &s),
            div_ceil(&self.upper_ulps(), &s),
        )
    }

    /// `floor(x * 10^decimals)` for the lower and upper ends.
    pub fn truncated_bounds(&self, decimals: u32) -> (BigInt, BigInt) {
        if decimals >= self.scale {
            let f = pow10(decimals - self.scale);
            (self.lower_ulps() * &f, self.upper_ulps() * &f)
        } else {
            let f = pow10(self.scale - decimals);
            (
                div_floor(&self.lower_ulps(), &f),
                div_floor(&self.upper_ulps(), &f),
            )
        }
    }

    /// Approximate value, for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    /// Radius in real units, approximately.
    pub fn radius_f64(&self) -> f64 {
        BigRational::new(self.radius.clone(), pow10(self.scale))
            .expect("positive power")
            .to_f64()
    }

    /// Center written out with `decimals` digits after the point (truncated).
    pub fn to_decimal_string(&self, decimals: u32) -> String {
        let (lo, _) = Self {
            center: self.center.clone(),
            radius: BigInt::zero(),
            scale: self.scale,
        }
        .truncated_bounds(decimals);
        format_fixed(&lo, decimals)
    }
}

/// Writes `value / 10^decimals` (value already truncated) as a decimal string.
pub(crate) fn format_fixed(value: &BigInt, decimals: u32) -> String {
    let negative = value.is_negative();
    let digits = value.abs().to_string();
    let d = decimals as usize;
    let body = if d == 0 {
        digits
    } else if digits.len() > d {
        let (int, frac) = digits.split_at(digits.len() - d);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{}", "0".repeat(d - digits.len()), digits)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.scale.min(40);
        write!(
            f,
            "{} +/- {:.3e}",
            self.to_decimal_string(shown),
            self.radius_f64()
        )
    }
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RealBall({} +/- {} @10^-{})",
            self.center, self.radius, self.scale
        )
    }
}

/// Certified floor (or ceiling) of a real known only through balls.
///
/// `refine(precision)` must return a ball for the same real at roughly
/// `precision` digits. Starting from `initial`, precision doubles until the
/// lower and upper ends of the ball round to the same integer. Past
/// `max_precision` the value is presumed to sit on an integer and
/// [`Error::FloorOnBoundary`] is returned.
pub fn ball_floor_certified<F>(
    initial: RealBall,
    rounding: Rounding,
    mut refine: F,
    max_precision: u32,
) -> Result<BigInt>
where
    F: FnMut(u32) -> Result<RealBall>,
{
    let mut ball = initial;
    let mut precision = ball.scale().max(1);
    loop {
        let (lo, hi) = match rounding {
            Rounding::Floor => ball.floor_bounds(),
            Rounding::Ceiling => ball.ceil_bounds(),
        };
        if lo == hi {
            return Ok(lo);
        }
        if precision >= max_precision {
            return Err(Error::FloorOnBoundary { max_precision });
        }
        precision = precision.saturating_mul(2).min(max_precision);
        ball = refine(precision)?;
    }
}
