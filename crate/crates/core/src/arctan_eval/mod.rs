//! Certified evaluation of `arctan(1/beta)` for rational `beta`.

mod bench;
mod series;
mod state;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::{decimal_digits, pow10, BigInt, BigRational, RealBall};
use crate::formula_gen::MachinFormula;

pub use bench::{convergence_benchmark, write_reports_csv, BenchEntry};
pub use state::SeriesState;

/// Hard ceiling on series terms for one evaluation.
pub const MAX_TERMS: usize = 20_000_000;

/// Largest `N` the limit formula is allowed to use.
pub const LIMIT_MAX_N: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum SeriesKernel {
    /// `x - x^3/3 + x^5/5 - ...`
    Maclaurin,
    /// `lim_N sum_{n=1..N} N x / (N^2 + (n-1) n x^2)`
    LimitFormula,
    /// Euler's hypergeometric series in `x^2/(1+x^2)`.
    Euler2F1,
    /// The `(g_n, h_n)` iterated series.
    #[default]
    IterativeGh,
}

impl SeriesKernel {
    pub const ALL: [SeriesKernel; 4] = [
        SeriesKernel::Maclaurin,
        SeriesKernel::LimitFormula,
        SeriesKernel::Euler2F1,
        SeriesKernel::IterativeGh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesKernel::Maclaurin => "maclaurin",
            SeriesKernel::LimitFormula => "limit_formula",
            SeriesKernel::Euler2F1 => "euler_2f1",
            SeriesKernel::IterativeGh => "iterative_gh",
        }
    }
}


impl fmt::Display for SeriesKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SeriesKernel::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown kernel {s:?}")))
    }
}

/// What one kernel run cost and how tight its result is.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub kernel: SeriesKernel,
    pub beta: BigRational,
    pub precision: u32,
    pub terms_used: usize,
    /// Radius of the returned ball, as a decimal magnitude.
    pub certified_error: ErrorBound,
    pub wall_time: Duration,
}

/// `mantissa * 10^exponent`, exact enough to print bounds far below `f64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorBound {
    pub mantissa: f64,
    pub exponent: i64,
}

impl ErrorBound {
    pub fn of(ball: &RealBall) -> Self {
        let r = ball.radius();
        if r.is_zero() {
            return Self {
                mantissa: 0.0,
                exponent: 0,
            };
        }
        let digits = decimal_digits(r) as i64;
        let keep = digits.min(17);
        let lead = r / pow10((digits - keep) as u32);
        let lead: f64 = lead.to_string().parse().unwrap_or(f64::NAN);
        Self {
            mantissa: lead / 10f64.powi(keep as i32 - 1),
            exponent: digits - 1 - ball.scale() as i64,
        }
    }

    /// `log10` of the bound (`-inf` for zero).
    pub fn log10(&self) -> f64 {
        self.mantissa.log10() + self.exponent as f64
    }
}

impl fmt::Display for ErrorBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa == 0.0 {
            return f.write_str("0");
        }
        write!(f, "{:.3}e{}", self.mantissa, self.exponent)
    }
}

/// Approximate `log10 |q|`, usable for planning only.
pub(crate) fn log10_abs(q: &BigRational) -> f64 {
    fn log10_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits <= 1000 {
            use num_traits::ToPrimitive;
            return n.abs().to_f64().unwrap_or(f64::MAX).log10();
        }
        let shift = bits - 64;
        let top = (n.abs() >> shift).to_string().parse::<f64>().unwrap_or(1.0);
        top.log10() + shift as f64 * std::f64::consts::LOG10_2
    }
    log10_int(q.numer()) - log10_int(q.denom())
}

fn kernel_domain(kernel: SeriesKernel, beta: &BigRational, reason: &'static str) -> Error {
    Error::KernelDomain {
        kernel: kernel.name(),
        beta: beta.to_string(),
        reason,
    }
}

/// Rough number of terms a kernel needs for `precision` digits; `None`
/// when it would not converge in any useful time.
fn estimate_terms(kernel: SeriesKernel, beta: &BigRational, precision: u32) -> Option<f64> {
    let lb = log10_abs(beta);
    let target = precision as f64 + 2.0;
    match kernel {
        SeriesKernel::Maclaurin if lb < 1e-12 => Some(10f64.powf(target) / 2.0),
        SeriesKernel::Maclaurin => Some(target / (2.0 * lb) + 2.0),
        SeriesKernel::Euler2F1 => {
            // per-term ratio x^2/(1+x^2)
            let r = -(1.0 + 10f64.powf(2.0 * lb)).log10();
            Some(target / (-r).max(1e-300) + 2.0)
        }
        SeriesKernel::IterativeGh => {
            let r = (1.0 + 4.0 * 10f64.powf(2.0 * lb)).log10();
            Some(target / r + 2.0)
        }
        SeriesKernel::LimitFormula => None,
    }
}

/// Ball for `arctan(1/beta)` with radius at most `10^-precision`.
pub fn arctan_reciprocal(
    beta: &BigRational,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<RealBall> {
    arctan_reciprocal_report(beta, precision, kernel).map(|(b, _)| b)
}

/// [`arctan_reciprocal`] together with its cost record.
pub fn arctan_reciprocal_report(
    beta: &BigRational,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<(RealBall, SeriesReport)> {
    if beta.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let start = Instant::now();
    let p = beta.numer().abs();
    let q = beta.denom().clone();
    let below_one = p < q;
    match kernel {
        SeriesKernel::Maclaurin if below_one => {
            return Err(Error::Divergence {
                kernel: kernel.name(),
                beta: beta.to_string(),
            })
        }
        SeriesKernel::IterativeGh if below_one => {
            return Err(kernel_domain(kernel, beta, "supported domain is |beta| >= 1"))
        }
        _ => {}
    }
    let (ball, terms) = if kernel == SeriesKernel::LimitFormula {
        limit_kernel(&p, &q, beta, precision)?
    } else {
        let est = estimate_terms(kernel, beta, precision).unwrap_or(f64::INFINITY);
        if est > MAX_TERMS as f64 {
            return Err(Error::TermBudget {
                kernel: kernel.name(),
                precision,
                max_terms: MAX_TERMS,
            });
        }
        let mut guard = est.max(1.0).log10().ceil() as u32 + 5;
        if kernel == SeriesKernel::Euler2F1 && below_one {
            // Rounding error per term scales with 1 + x^2.
            guard += (2.0 * -log10_abs(beta)).ceil().max(0.0) as u32;
        }
        let scale = precision + guard;
        let tail = pow10(guard - 1);
        let run = match kernel {
            SeriesKernel::Maclaurin => series::maclaurin(&p, &q, scale, &tail, MAX_TERMS),
            SeriesKernel::Euler2F1 => series::euler(&p, &q, scale, &tail, MAX_TERMS),
            SeriesKernel::IterativeGh => series::iterative_gh(&p, &q, scale, &tail, MAX_TERMS),
            SeriesKernel::LimitFormula => unreachable!(),
        };
        let run = run.ok_or(Error::TermBudget {
            kernel: kernel.name(),
            precision,
            max_terms: MAX_TERMS,
        })?;
        (run.ball, run.terms)
    };
    let ball = if beta.is_negative() { ball.neg() } else { ball };
    let report = SeriesReport {
        kernel,
        beta: beta.clone(),
        precision,
        terms_used: terms,
        certified_error: ErrorBound::of(&ball),
        wall_time: start.elapsed(),
    };
    Ok((ball, report))
}

/// The limit formula overestimates: every summand is `tan` of the exact
/// increment `arctan(n x/N) - arctan((n-1) x/N)`, so the sum lies within
/// `sum a_n^3/3 <= x^3/(3 N^2)` above `arctan x`.
fn limit_kernel(
    p: &BigInt,
    q: &BigInt,
    beta: &BigRational,
    precision: u32,
) -> Result<(RealBall, usize)> {
    // Smallest N with x^3 / (3 N^2) <= 10^-(precision+1).
    let lx = -log10_abs(beta);
    let log_n = (3.0 * lx + precision as f64 + 1.0 - 3f64.log10()) / 2.0;
    if log_n > (LIMIT_MAX_N as f64).log10() {
        return Err(Error::TermBudget {
            kernel: SeriesKernel::LimitFormula.name(),
            precision,
            max_terms: LIMIT_MAX_N as usize,
        });
    }
    let mut n_terms = 10f64.powf(log_n).ceil().max(1.0) as u64;
    // Float planning may fall short by a hair; settle it exactly.
    let fits = |n: u64| {
        // q^3 * 10^(precision+1) <= 3 N^2 p^3
        let lhs = q * q * q * pow10(precision + 1);
        let rhs = BigInt::from(3u32) * BigInt::from(n) * BigInt::from(n) * p * p * p;
        lhs <= rhs
    };
    while !fits(n_terms) {
        n_terms += 1 + n_terms / 64;
    }
    if n_terms > LIMIT_MAX_N {
        return Err(Error::TermBudget {
            kernel: SeriesKernel::LimitFormula.name(),
            precision,
            max_terms: LIMIT_MAX_N as usize,
        });
    }
    let guard = (n_terms as f64).log10().ceil() as u32 + 5;
    let scale = precision + guard;
    let sum = series::limit_sum(p, q, n_terms, scale);
    // The tail bound x^3/(3N^2) in ulps, rounded up.
    let s = pow10(scale);
    let bias_num = q * q * q * &s;
    let bias_den = BigInt::from(3u32) * BigInt::from(n_terms) * BigInt::from(n_terms) * p * p * p;
    let bias = (&bias_num + &bias_den - 1u32) / &bias_den;
    let lo = &sum - &bias;
    let hi = &sum + BigInt::from(n_terms);
    let center = (&lo + &hi) >> 1;
    let radius: BigInt = std::cmp::max(&hi - &center, &center - &lo);
    Ok((RealBall::from_parts(center, radius, scale), n_terms as usize))
}

/// Exact partial sum `sum_{n=1..N} N x / (N^2 + (n-1) n x^2)`.
pub fn arctan_limit(x: &BigRational, n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    // x = a/b: summand = N a b / (N^2 b^2 + (n-1) n a^2). Sum as a balanced
    // tree of unreduced fractions and reduce once at the end.
    let (a, b) = (x.numer(), x.denom());
    let nn = BigInt::from(n);
    let num = &nn * a * b;
    let base = &nn * &nn * b * b;
    let a2 = a * a;
    let mut parts: Vec<(BigInt, BigInt)> = (1..=n)
        .map(|i| {
            (
                num.clone(),
                &base + BigInt::from(i) * BigInt::from(i - 1) * &a2,
            )
        })
        .collect();
    while parts.len() > 1 {
        parts = parts
            .par_chunks(2)
            .map(|c| match c {
                [(n1, d1), (n2, d2)] => (n1 * d2 + n2 * d1, d1 * d2),
                [one] => one.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    let (num, den) = parts.pop().expect("n >= 1");
    BigRational::new(num, den)
}

/// `pi/4` by Machin's formula with the Taylor kernel.
pub fn pi_quarter(precision: u32) -> Result<RealBall> {
    let p = precision + 2;
    let a = arctan_reciprocal(&BigRational::from_integer(5), p, SeriesKernel::Maclaurin)?;
    let b = arctan_reciprocal(&BigRational::from_integer(239), p, SeriesKernel::Maclaurin)?;
    Ok(a.mul_int(&BigInt::from(4)).sub(&b))
}

/// `arctan(1/beta)` for any non-zero rational, using
/// `arctan(1/beta) = sign(beta) pi/2 - arctan(beta)` when `|beta| < 1`.
pub fn arctan_reciprocal_any(beta: &BigRational, precision: u32) -> Result<RealBall> {
    if beta.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if beta.numer().abs() >= *beta.denom() {
        return arctan_reciprocal(beta, precision, SeriesKernel::IterativeGh);
    }
    let inner = arctan_reciprocal(&beta.recip()?, precision + 1, SeriesKernel::IterativeGh)?;
    let half_pi = pi_quarter(precision + 1)?.mul_int(&BigInt::from(2));
    Ok(if beta.is_negative() {
        half_pi.neg().sub(&inner)
    } else {
        half_pi.sub(&inner)
    })
}

/// `sum c_j arctan(1/beta_j)` with radius at most `10^-precision`.
///
/// Terms are evaluated in parallel and summed in formula order, so the
/// result does not depend on the thread count.
pub fn evaluate_formula(
    formula: &MachinFormula,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<RealBall> {
    let count_digits = decimal_digits(&BigInt::from(formula.terms.len().max(1))) as u32;
    let balls: Vec<RealBall> = formula
        .terms
        .par_iter()
        .map(|t| {
            let p = precision + decimal_digits(&t.coefficient) as u32 + count_digits + 1;
            let ball = match kernel {
                SeriesKernel::IterativeGh | SeriesKernel::Maclaurin
                    if t.beta.numer().abs() < *t.beta.denom() =>
                {
                    arctan_reciprocal_any(&t.beta, p)?
                }
                _ => arctan_reciprocal(&t.beta, p, kernel)?,
            };
            Ok(ball.mul_int(&t.coefficient))
        })
        .collect::<Result<_>>()?;
    let mut acc = RealBall::from_integer(0, precision);
    for b in &balls {
        acc = acc.add(b);
    }
    Ok(acc)
}

/// `true` for `|beta| > 1`, where every kernel except the limit formula
/// converges at a usable rate.
pub fn in_common_domain(beta: &BigRational) -> bool {
    !beta.is_zero() && beta.numer().abs() > *beta.denom()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

    fn pi4_rational() -> BigRational {
        let digits: String = PI_50.chars().filter(|c| *c != '.').collect();
        let n: BigInt = digits.parse().unwrap();
        BigRational::new(n, pow10(50) * 4).unwrap()
    }

    #[test]
    fn beta_one() {
        let pi4 = pi4_rational();
        for k in [SeriesKernel::Euler2F1, SeriesKernel::IterativeGh] {
            let b = arctan_reciprocal(&q("1"), 40, k).unwrap();
            assert!(b.radius_at_most_pow10(-40), "{k}");
            let widened = RealBall::from_parts(b.center().clone(), b.radius() + 1u32, b.scale());
            assert!(widened.contains_rational(&pi4), "{k}");
        }
        let b = arctan_reciprocal(&q("1"), 4, SeriesKernel::Maclaurin).unwrap();
        assert!(b.overlaps(&RealBall::from_rational(&pi4, 8)));
        let b = arctan_reciprocal(&q("1"), 5, SeriesKernel::LimitFormula).unwrap();
        assert!(b.overlaps(&RealBall::from_rational(&pi4, 10)));
    }

    #[test]
    fn tiny_argument() {
        let beta = BigRational::from_integer(pow10(50));
        let b = arctan_reciprocal(&beta, 40, SeriesKernel::IterativeGh).unwrap();
        assert!(b.contains_rational(&beta.recip().unwrap()) || b.radius_at_most_pow10(-40));
        let diff = b.sub(&RealBall::from_rational(&beta.recip().unwrap(), b.scale()));
        assert!(diff.lower().abs() <= pow10(0).into() && diff.radius_at_most_pow10(-40));
        let rational = RealBall::from_rational(&beta.recip().unwrap(), 45);
        assert!(b.overlaps(&rational));
    }

    #[test]
    fn five_at_100_digits_all_kernels_agree() {
        let beta = q("5");
        let balls: Vec<RealBall> = [SeriesKernel::Maclaurin, SeriesKernel::Euler2F1, SeriesKernel::IterativeGh]
            .into_iter()
            .map(|k| arctan_reciprocal(&beta, 100, k).unwrap())
            .collect();
        for a in &balls {
            assert!(a.radius_at_most_pow10(-100));
            for b in &balls {
                assert!(a.overlaps(b));
                assert!(a.sub(b).lower_ulps().abs() <= pow10(a.scale() - 98));
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            arctan_reciprocal(&q("1/2"), 10, SeriesKernel::Maclaurin),
            Err(Error::Divergence { .. })
        ));
        assert!(matches!(
            arctan_reciprocal(&q("-1/3"), 10, SeriesKernel::IterativeGh),
            Err(Error::KernelDomain { .. })
        ));
        assert!(matches!(
            arctan_reciprocal(&q("1"), 30, SeriesKernel::Maclaurin),
            Err(Error::TermBudget { .. })
        ));
        assert!(matches!(
            arctan_reciprocal(&q("3"), 40, SeriesKernel::LimitFormula),
            Err(Error::TermBudget { .. })
        ));
        assert_eq!(
            arctan_reciprocal(&q("0"), 10, SeriesKernel::Euler2F1),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn euler_handles_small_beta() {
        // arctan(2) = pi/2 - arctan(1/2)
        let direct = arctan_reciprocal(&q("1/2"), 30, SeriesKernel::Euler2F1).unwrap();
        let complement = arctan_reciprocal_any(&q("1/2"), 30).unwrap();
        assert!(direct.overlaps(&complement));
        assert!(direct.radius_at_most_pow10(-30));
        let neg = arctan_reciprocal_any(&q("-1/2"), 30).unwrap();
        assert!(neg.overlaps(&complement.neg()));
    }

    #[test]
    fn limit_exact_examples() {
        assert_eq!(arctan_limit(&q("1"), 1).unwrap(), q("1"));
        assert_eq!(arctan_limit(&q("0"), 7).unwrap(), q("0"));
        assert!(arctan_limit(&q("1"), 0).is_err());
        // N = 2, x = 1: 2/4 + 2/6 = 5/6
        assert_eq!(arctan_limit(&q("1"), 2).unwrap(), q("5/6"));
    }

    #[test]
    fn limit_converges_to_pi_over_4() {
        let pi4 = pi4_rational();
        let err = |n: u64| (&arctan_limit(&q("1"), n).unwrap() - &pi4).abs();
        let e4 = err(10_000);
        assert!(e4 < q("1/10000"));
        for n0 in [100u64, 1000] {
            let a = err(n0);
            let b = err(2 * n0);
            assert!(&b * &q("10") <= &a * &q("6"), "N0={n0}");
        }
    }

    #[test]
    fn error_bound_formatting() {
        let b = RealBall::from_parts(BigInt::from(0), BigInt::from(25), 1003);
        let e = ErrorBound::of(&b);
        assert_eq!(e.exponent, -1002);
        assert!((e.mantissa - 2.5).abs() < 1e-12);
        assert_eq!(e.to_string(), "2.500e-1002");
    }

    #[test]
    fn kernel_names_round_trip() {
        for k in SeriesKernel::ALL {
            assert_eq!(k.name().parse::<SeriesKernel>().unwrap(), k);
        }
        assert!("taylor".parse::<SeriesKernel>().is_err());
    }

    #[test]
    fn euler_and_maclaurin_at_ten() {
        // Per-term ratios 1/101 against 1/100: at 100 digits both kernels
        // need 50 terms, so neither is strictly ahead.
        let (_, m) = arctan_reciprocal_report(&q("10"), 100, SeriesKernel::Maclaurin).unwrap();
        let (_, e) = arctan_reciprocal_report(&q("10"), 100, SeriesKernel::Euler2F1).unwrap();
        assert_eq!((e.terms_used, m.terms_used), (50, 50));
    }

    #[test]
    fn gh_beats_euler_at_1000_digits() {
        for beta in ["10", "40", "83443"] {
            let (_, e) = arctan_reciprocal_report(&q(beta), 1000, SeriesKernel::Euler2F1).unwrap();
            let (_, g) = arctan_reciprocal_report(&q(beta), 1000, SeriesKernel::IterativeGh).unwrap();
            assert!(g.terms_used < e.terms_used, "beta {beta}");
        }
    }

    fn arb_beta() -> impl Strategy<Value = BigRational> {
        (2u64..1_000_000_000, 1u64..1_000, any::<bool>()).prop_map(|(n, d, neg)| {
            let n = BigInt::from(n) * d + 1u32;
            let b = BigRational::new(n, d.into()).unwrap();
            if neg { -b } else { b }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn kernels_overlap(beta in arb_beta()) {
            let balls: Vec<RealBall> = [SeriesKernel::Maclaurin, SeriesKernel::Euler2F1, SeriesKernel::IterativeGh]
                .into_iter()
                .map(|k| arctan_reciprocal(&beta, 200, k).unwrap())
                .collect();
            for a in &balls {
                prop_assert!(a.radius_at_most_pow10(-200));
                for b in &balls {
                    prop_assert!(a.overlaps(b));
                }
            }
        }

        #[test]
        fn maclaurin_remainder_bound(n in 1usize..12, num in 1u64..100, extra in 1u64..50) {
            // |S_{N+10} - S_N| <= x^(2N+1)/(2N+1) for x = num/(num+extra)
            let x = BigRational::new(num.into(), (num + extra).into()).unwrap();
            let partial = |terms: usize| {
                let mut s = BigRational::zero();
                let x2 = &x * &x;
                let mut pw = x.clone();
                for i in 0..terms {
                    let t = &pw / &BigRational::from_integer(2 * i as i64 + 1);
                    s = if i % 2 == 0 { &s + &t } else { &s - &t };
                    pw = &pw * &x2;
                }
                s
            };
            let gap = (&partial(n + 10) - &partial(n)).abs();
            let bound = &x.pow(2 * n as u32 + 1) / &BigRational::from_integer(2 * n as i64 + 1);
            prop_assert!(gap <= bound);
        }
    }
}
