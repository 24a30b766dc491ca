use num_traits::{One, Signed, Zero};

use super::formula::MachinFormula;
use crate::error::{Error, Result};
use crate::exact_arith::{pow10, BigInt, BigRational, RealBall};

/// Digits carried by [`lehmer_measure`].
pub const LEHMER_PRECISION: u32 = 30;

/// `atanh(a/b)` for `0 <= a/b <= 1/3`, at `10^-scale`.
fn atanh_fixed(a: &BigInt, b: &BigInt, scale: u32) -> RealBall {
    let s = pow10(scale);
    let t = (a * &s) / b;
    let t2 = (&t * &t) / &s;
    let mut pow = t;
    // Ulps of error in `pow`; grows by at most 3 per step because t^2 <= 1/9.
    let mut err: u64 = 1;
    let mut sum = BigInt::zero();
    let mut radius = BigInt::zero();
    let mut i: u64 = 0;
    while pow > BigInt::one() {
        let d = 2 * i + 1;
        sum += &pow / d;
        radius += err / d + 2;
        pow = (&pow * &t2) / &s;
        err += 3;
        i += 1;
    }
    // Tail sum_{j >= i} t^(2j+1)/(2j+1) <= pow * 9/8.
    radius += (pow + err) * 9u32 / 8u32 + 1u32;
    RealBall::from_parts(sum, radius, scale)
}

fn ln2_ball(scale: u32) -> RealBall {
    atanh_fixed(&BigInt::one(), &BigInt::from(3), scale).mul_int(&BigInt::from(2))
}

/// `ln n` for `n >= 1`, with radius a few ulps at `scale`.
///
/// Uses `n = 2^j y` with `y` in `[1, 2)` and `ln y = 2 atanh((y-1)/(y+1))`.
pub fn ln_ball(n: &BigInt, scale: u32) -> Result<RealBall> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("ln of non-positive {n}")));
    }
    let work = scale + 10;
    let j = n.bits() - 1;
    let base = BigInt::one() << j;
    let frac = atanh_fixed(&(n - &base), &(n + &base), work).mul_int(&BigInt::from(2));
    let whole = ln2_ball(work).mul_int(&BigInt::from(j));
    Ok(whole.add(&frac))
}

/// `ln 10 = 3 ln 2 + 2 atanh(1/9)`.
pub fn ln10_ball(scale: u32) -> RealBall {
    let work = scale + 10;
    ln2_ball(work)
        .mul_int(&BigInt::from(3))
        .add(&atanh_fixed(&BigInt::one(), &BigInt::from(9), work).mul_int(&BigInt::from(2)))
}

/// `log10 |q|` as a ball with radius well below `10^-digits`.
pub fn log10_ball(q: &BigRational, digits: u32) -> Result<RealBall> {
    if q.is_zero() {
        return Err(Error::InvalidArgument("log10 of zero".into()));
    }
    let scale = digits + 5;
    let ln = ln_ball(&q.numer().abs(), scale)?.sub(&ln_ball(q.denom(), scale)?);
    ln.div(&ln10_ball(scale))
}

/// Lehmer's measure `sum 1/log10 |beta_j|`, one summand per term whatever
/// its coefficient, skipping the term indices in `exclusions`.
pub fn lehmer_measure(formula: &MachinFormula, exclusions: &[usize]) -> Result<RealBall> {
    let mut acc = RealBall::from_integer(0, LEHMER_PRECISION + 5);
    for (idx, term) in formula.terms.iter().enumerate() {
        if exclusions.contains(&idx) {
            continue;
        }
        acc = acc.add(&reciprocal_log10(&term.beta, idx)?);
    }
    Ok(acc)
}

/// `1/log10 |beta|` for one term, with the measure's domain checks.
pub(crate) fn reciprocal_log10(beta: &BigRational, idx: usize) -> Result<RealBall> {
    let mag = beta.numer().abs();
    if mag == *beta.denom() {
        return Err(Error::MeasureUndefined(idx));
    }
    if mag < *beta.denom() {
        return Err(Error::NegativeLog(idx));
    }
    log10_ball(beta, LEHMER_PRECISION + 10)?.recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::Rounding;
    use crate::formula_gen::chain::split_chain;
    use crate::formula_gen::formula::known;

    fn near(b: &RealBall, want: f64, tol: f64) -> bool {
        b.radius_at_most_pow10(-20) && (b.to_f64() - want).abs() <= tol
    }

    #[test]
    fn logs_of_known_values() {
        let l = log10_ball(&BigRational::from_integer(1000), 30).unwrap();
        assert!(l.contains_rational(&BigRational::from_integer(3)));
        assert!(l.radius_at_most_pow10(-30));
        let ln2 = ln2_ball(40);
        assert!((ln2.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        let big = BigRational::from_integer(pow10(5000));
        assert!(log10_ball(&big, 25).unwrap().contains_rational(&BigRational::from_integer(5000)));
        let half = log10_ball(&"1/2".parse().unwrap(), 25).unwrap();
        assert!((half.to_f64() + std::f64::consts::LOG10_2).abs() < 1e-15);
    }

    #[test]
    fn classical_measures() {
        let cl = lehmer_measure(&known::chien_lih(), &[]).unwrap();
        assert!(near(&cl, 1.51244, 1e-5), "{}", cl.to_f64());
        let w = lehmer_measure(&known::wetherfield(), &[]).unwrap();
        assert!(near(&w, 1.26579, 1e-5), "{}", w.to_f64());
        let wd = lehmer_measure(&known::wetherfield_decomposed(), &[]).unwrap();
        assert!(near(&wd, 1.39524, 1e-5), "{}", wd.to_f64());
        let k6 = split_chain(6, 0, Rounding::Floor).unwrap().to_formula();
        let m = lehmer_measure(&k6, &[]).unwrap();
        assert!(near(&m, 1.16751, 1e-5), "{}", m.to_f64());
    }

    #[test]
    fn single_term_ten_is_one() {
        let f = MachinFormula::parse_pairs(&[("1", "10")]).unwrap();
        let m = lehmer_measure(&f, &[]).unwrap();
        assert!(m.contains_rational(&BigRational::one()));
        assert!(m.radius_at_most_pow10(-25));
    }

    #[test]
    fn k17_leading_term() {
        let f = MachinFormula::parse_pairs(&[("65536", "83443")]).unwrap();
        let m = lehmer_measure(&f, &[]).unwrap();
        assert!(near(&m, 0.203195, 1e-5), "{}", m.to_f64());
    }

    #[test]
    fn exclusions_and_domain() {
        let f = known::machin();
        let all = lehmer_measure(&f, &[]).unwrap();
        let first = lehmer_measure(&f, &[1]).unwrap();
        assert!(all.to_f64() > first.to_f64());
        let bad = MachinFormula::parse_pairs(&[("1", "1")]).unwrap();
        assert_eq!(lehmer_measure(&bad, &[]), Err(Error::MeasureUndefined(0)));
        assert!(lehmer_measure(&bad, &[0]).is_ok());
        let neg = MachinFormula::parse_pairs(&[("1", "2"), ("1", "-1/3")]).unwrap();
        assert_eq!(lehmer_measure(&neg, &[]), Err(Error::NegativeLog(1)));
    }
}
