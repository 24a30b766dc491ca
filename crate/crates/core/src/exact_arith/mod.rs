//! Exact integers and rationals, plus certified fixed-point reals ("balls").
//!
//! Every other module builds on these three carriers. Integers are
//! `num_bigint::BigInt`; rationals and balls are defined here.

mod ball;
mod gaussian;
mod rational;

pub use ball::{ball_floor_certified, Rounding, RealBall};
pub(crate) use ball::format_fixed;
pub use gaussian::{GaussianInt, GaussianRational};
pub use num_bigint::BigInt;
pub use rational::{rational_floor, BigRational};

use num_integer::Integer;
use num_traits::Signed;

/// Default ceiling for precision escalation, in decimal digits.
pub const DEFAULT_PRECISION_CAP: u32 = 1_000_000;

/// Environment variable overriding [`DEFAULT_PRECISION_CAP`].
pub const PRECISION_CAP_ENV: &str = "MACHIN_PRECISION_CAP";

/// The escalation ceiling in effect: `MACHIN_PRECISION_CAP` if set and valid,
/// otherwise [`DEFAULT_PRECISION_CAP`].
pub fn precision_cap() -> u32 {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}

/// `10^exp` as a big integer.
pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp as usize)
}

/// Number of decimal digits of `|n|` (1 for zero).
///
/// Works from the bit length so it never formats the number.
pub fn decimal_digits(n: &BigInt) -> usize {
    let bits = n.bits();
    if bits == 0 {
        return 1;
    }
    // floor((bits - 1) * log10(2)) + 1 is exact or one short; step the
    // estimate back once more to absorb float rounding, then walk up.
    let mut d = (((bits - 1) as f64) * std::f64::consts::LOG10_2).floor() as usize;
    d = d.saturating_sub(1).max(1);
    let magnitude = n.abs();
    let mut bound = pow10(d as u32);
    while magnitude >= bound {
        d += 1;
        bound *= 10u32;
    }
    d
}

/// Number of trailing zero bits, with `None` for zero.
pub(crate) fn twos(n: &BigInt) -> Option<u64> {
    n.trailing_zeros()
}

/// Divides every value by the largest power of two dividing all of them.
pub(crate) fn strip_common_twos(values: &mut [&mut BigInt]) {
    let shift = values.iter().filter_map(|v| twos(v)).min().unwrap_or(0);
    if shift > 0 {
        for v in values.iter_mut() {
            **v >>= shift;
        }
    }
}

/// Greatest common divisor of the magnitudes.
pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

/// Floor division toward negative infinity.
pub(crate) fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Ceiling division.
pub(crate) fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}
