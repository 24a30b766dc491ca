//! Fixed-point series kernels for `arctan(q/p)` with `p, q > 0`.
//!
//! Each kernel works at `10^-scale` and tracks how many ulps of rounding
//! error it may have accumulated, then adds a rigorous bound for the
//! truncated tail.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exact_arith::{BigInt, RealBall};

/// Sum plus certified radius, in ulps at `scale`.
pub(crate) struct FixedSum {
    pub ball: RealBall,
    pub terms: usize,
}

/// `ceil(num / den)` for a non-negative numerator and positive denominator.
fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

/// Alternating Taylor series `x - x^3/3 + x^5/5 - ...` for `x = q/p <= 1`.
///
/// `tail` is the largest tail admitted, in ulps. `max_terms` guards runaway
/// loops (near `x = 1` the series needs about `10^precision` terms).
pub(crate) fn maclaurin(
    p: &BigInt,
    q: &BigInt,
    scale: u32,
    tail: &BigInt,
    max_terms: usize,
) -> Option<FixedSum> {
    let s = crate::exact_arith::pow10(scale);
    let p2 = p * p;
    let q2 = q * q;
    let mut power = (q * &s) / p;
    // Every floor loses < 1 ulp; multiplying by x^2 <= 1 never enlarges
    // an earlier error.
    let mut err_power = BigInt::from(1u32);
    let mut sum = BigInt::zero();
    let mut err_sum = BigInt::zero();
    let mut n = 0usize;
    loop {
        let d = BigInt::from(2 * n + 1);
        // The first omitted term bounds the remainder of an alternating
        // series with decreasing terms.
        let bound = &power + &err_power;
        if bound <= (tail * &d) {
            let radius = err_sum + ceil_div(&bound, &d);
            return Some(FixedSum {
                ball: RealBall::from_parts(sum, radius, scale),
                terms: n,
            });
        }
        if n >= max_terms {
            return None;
        }
        let term = &power / &d;
        err_sum += ceil_div(&err_power, &d) + 1u32;
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = (power * &q2) / &p2;
        err_power += 1u32;
        n += 1;
    }
}

/// Euler's series `sum 2^(2n)(n!)^2/(2n+1)! * x^(2n+1)/(1+x^2)^(n+1)`.
///
/// All terms are positive; the ratio between consecutive terms is below
/// `r = x^2/(1+x^2)`, so the tail after a term `t` is at most `t/(1-r)`.
pub(crate) fn euler(
    p: &BigInt,
    q: &BigInt,
    scale: u32,
    tail: &BigInt,
    max_terms: usize,
) -> Option<FixedSum> {
    let s = crate::exact_arith::pow10(scale);
    let q2 = q * q;
    let n2 = p * p + &q2;
    // 1/(1-r) = (p^2+q^2)/p^2 bounds both the tail factor and the
    // steady-state rounding error of each term.
    let inv_gap_num = n2.clone();
    let inv_gap_den = p * p;
    let err = ceil_div(&inv_gap_num, &inv_gap_den);
    let mut t = (p * q * &s) / &n2;
    let mut sum = BigInt::zero();
    let mut err_sum = BigInt::zero();
    let mut n = 0usize;
    loop {
        let bound = ceil_div(&((&t + &err) * &inv_gap_num), &inv_gap_den);
        if &bound <= tail {
            return Some(FixedSum {
                ball: RealBall::from_parts(sum, err_sum + bound, scale),
                terms: n,
            });
        }
        if n >= max_terms {
            return None;
        }
        sum += &t;
        err_sum += &err;
        n += 1;
        let k = n as u64;
        t = (t * &q2 * (2 * k)) / (&n2 * (2 * k + 1));
    }
}

/// The iterated series `2 sum g_n / ((2n-1)(g_n^2 + h_n^2))`.
///
/// With `z_n = 1/(g_n + i h_n)` the recurrence for `(g, h)` becomes
/// `z_n = z_{n-1} * x^2 (x + 2i)^2 / (x^2 + 4)^2`, so the summand is
/// `2 Re(z_n) / (2n-1)` and `|z_n|` shrinks by `rho = x^2/(x^2+4)` per step.
pub(crate) fn iterative_gh(
    p: &BigInt,
    q: &BigInt,
    scale: u32,
    tail: &BigInt,
    max_terms: usize,
) -> Option<FixedSum> {
    let s = crate::exact_arith::pow10(scale);
    let p2 = p * p;
    let q2 = q * q;
    let base = &q2 + (&p2 << 2u32);
    // z_1 = x(2 - ix)/(4 + x^2) = q(2p - iq)/(4p^2 + q^2)
    let mut u: BigInt = ((p * q) << 1u32) * &s / &base;
    let mut v: BigInt = -Integer::div_ceil(&(&q2 * &s), &base);
    // multiplier (a + ib)/d = q^2 (q + 2ip)^2 / (q^2 + 4p^2)^2
    let a = &q2 * (&q2 - (&p2 << 2u32));
    let b = (p * q * &q2) << 2u32;
    let d = &base * &base;
    // |error of z_n|_1 <= sqrt(2) rho E_{n-1} + 2 < 3 when rho <= 1/5.
    let err = BigInt::from(3u32);
    let tail_den = (&p2 << 2u32) * tail;
    let mut sum = BigInt::zero();
    let mut err_sum = BigInt::zero();
    let mut n = 1usize;
    loop {
        let m = BigInt::from(2 * n - 1);
        // sum_{j >= n} 2|z_j|/(2j-1) <= 2|z_n|/((2n-1)(1-rho))
        let mag = u.abs() + v.abs() + &err;
        let bound_num = (mag << 1u32) * &base;
        if bound_num <= &tail_den * &m {
            let bound = ceil_div(&bound_num, &((&p2 << 2u32) * &m));
            return Some(FixedSum {
                ball: RealBall::from_parts(sum, err_sum + bound, scale),
                terms: n - 1,
            });
        }
        if n > max_terms {
            return None;
        }
        sum += (&u << 1u32).div_floor(&m);
        err_sum += ceil_div(&(&err << 1u32), &m) + 1u32;
        let nu: BigInt = (&u * &a - &v * &b).div_floor(&d);
        let nv: BigInt = (&u * &b + &v * &a).div_floor(&d);
        u = nu;
        v = nv;
        n += 1;
    }
}

/// Limit sum `sum_{n=1..N} N x / (N^2 + (n-1) n x^2)` at `scale`, with every
/// quotient floored. Returns `(sum, N)`; the exact partial sum lies in
/// `[sum, sum + N]` ulps.
pub(crate) fn limit_sum(p: &BigInt, q: &BigInt, n_terms: u64, scale: u32) -> BigInt {
    let s = crate::exact_arith::pow10(scale);
    let nn = BigInt::from(n_terms);
    let num = &nn * q * p * &s;
    let base = &nn * &nn * p * p;
    let q2 = q * q;
    let mut sum = BigInt::zero();
    for n in 1..=n_terms {
        let den = &base + BigInt::from(n) * BigInt::from(n - 1) * &q2;
        sum += &num / den;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{pow10, BigRational};

    fn pi_over_4_contains(ball: &RealBall) -> bool {
        // pi/4 to 60 digits
        let pi4: BigRational = "785398163397448309615660845819875721049292349843776455243736/1000000000000000000000000000000000000000000000000000000000000"
            .parse()
            .unwrap();
        let slack = RealBall::from_parts(ball.center().clone(), ball.radius() + 1u32, ball.scale());
        slack.contains_rational(&pi4)
    }

    #[test]
    fn kernels_at_one() {
        let one = BigInt::from(1);
        let tail = pow10(3);
        let e = euler(&one, &one, 50, &tail, 100_000).unwrap();
        assert!(pi_over_4_contains(&e.ball));
        assert!(e.ball.radius_at_most_pow10(-46));
        let g = iterative_gh(&one, &one, 50, &tail, 100_000).unwrap();
        assert!(pi_over_4_contains(&g.ball));
        assert!(g.ball.radius_at_most_pow10(-46));
        // Maclaurin at x = 1 is hopeless beyond a few digits.
        assert!(maclaurin(&one, &one, 50, &tail, 10_000).is_none());
        let m = maclaurin(&one, &one, 8, &pow10(5), 10_000).unwrap();
        assert!(pi_over_4_contains(&m.ball));
    }

    #[test]
    fn limit_sum_brackets() {
        let one = BigInt::from(1);
        let s = limit_sum(&one, &one, 1, 10);
        assert_eq!(s, pow10(10));
    }
}
