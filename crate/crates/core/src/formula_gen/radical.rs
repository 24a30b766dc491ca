use crate::error::{Error, Result};
use crate::exact_arith::{
    ball_floor_certified, pow10, precision_cap, BigInt, BigRational, RealBall, Rounding,
};

/// Ball containing `a_k / sqrt(2 - a_{k-1})` where `a_0 = 0` and
/// `a_j = sqrt(2 + a_{j-1})`, with radius at most `10^-precision`.
///
/// The quotient equals `cot(pi / 2^(k+1))`, so it is about `2^(k+1)/pi`.
pub fn nested_radical_quotient(k: u32, precision: u32) -> Result<RealBall> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k == 1 {
        // sqrt(2) / sqrt(2)
        return Ok(RealBall::from_integer(1, precision));
    }
    // 2 - a_{k-1} is about 10 * 4^-k, so roughly 0.6k digits of it vanish
    // into leading zeros, and the quotient itself has about 0.3k integer
    // digits.
    let scale = precision + k + 10;
    let two = RealBall::from_integer(2, scale);
    // Track b_j = 2 - a_j through b_j = b_{j-1} / (2 + a_j), which avoids
    // the cancellation in computing 2 - a_j directly.
    let mut a = RealBall::from_integer(0, scale);
    let mut b = two.clone();
    for _ in 1..k {
        a = two.add(&a).sqrt()?;
        b = b.div(&two.add(&a))?;
    }
    let a_k = two.add(&a).sqrt()?;
    let q = a_k.div(&b.sqrt()?)?;
    Ok(q.rescale(precision))
}

/// `floor(10^ell * a_k / sqrt(2 - a_{k-1}))` (or the ceiling), certified.
///
/// Precision starts at `2k + 40` digits and doubles until the rounding is
/// decided or the precision cap is reached.
pub fn radical_floor(k: u32, ell: u32, rounding: Rounding) -> Result<BigInt> {
    if k == 1 {
        // The quotient is exactly 1.
        return Ok(pow10(ell));
    }
    let scaled = |p: u32| -> Result<RealBall> {
        Ok(nested_radical_quotient(k, p + ell)?.mul_int(&pow10(ell)))
    };
    let start = 2 * k + 40;
    ball_floor_certified(scaled(start)?, rounding, scaled, precision_cap().max(start))
}

/// The leading integer `A_k`: floor or ceiling of the radical quotient.
pub fn leading_integer(k: u32, rounding: Rounding) -> Result<BigInt> {
    radical_floor(k, 0, rounding)
}

/// The seed `10^-ell * floor(10^ell * a_k / sqrt(2 - a_{k-1}))`.
pub fn scaled_seed(k: u32, ell: u32) -> Result<BigRational> {
    let n = radical_floor(k, ell, Rounding::Floor)?;
    BigRational::new(n, pow10(ell))
}
