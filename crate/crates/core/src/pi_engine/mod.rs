//! Pi from truncated chains: the last arctangent is replaced by its
//! argument, and the result is scored against a doubly computed reference.

mod experiments;
mod reference;

use crate::arctan_eval::{evaluate_formula, log10_abs, SeriesKernel};
use crate::error::{Error, Result};
use crate::exact_arith::{format_fixed, precision_cap, BigInt, BigRational, RealBall, Rounding};
use crate::formula_gen::{
    alt_chain, lehmer_measure, split_chain, AltChainResult, ChainResult, MachinFormula,
};

pub use experiments::{
    digit_doubling_table, doubling_ratios_hold, lehmer_vs_m, write_lehmer_csv, write_table_csv,
    LehmerRow, LehmerTable, TableRow, STABILIZATION_STEP, TABLE1_EXPECTED, TABLE1_K,
};
pub use reference::{reference_pi, ReferencePi};

/// Guard digits added on top of twice the predicted digit count.
pub const GUARD_DIGITS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chain {
    Standard(ChainResult),
    Alternative(AltChainResult),
}

/// An evaluated approximation and its score.
#[derive(Clone, Debug)]
pub struct PiApproximation {
    pub chain: Chain,
    pub m: usize,
    /// Ball around the approximation itself (not around pi).
    pub value: RealBall,
    /// Leading decimals after "3." that agree with pi.
    pub correct_digits: u32,
    /// Lehmer measure of the formula actually summed.
    pub lehmer: RealBall,
    /// The formula is an identity, so `correct_digits` is limited only by
    /// the working precision.
    pub exact: bool,
    /// Decimal digits the value was evaluated to.
    pub precision: u32,
}

impl PiApproximation {
    /// `value` written out to `decimals` places (truncated center).
    pub fn digits(&self, decimals: u32) -> String {
        self.value.to_decimal_string(decimals)
    }

    /// The leading part of the value that matches pi, e.g. `"3.14159"`.
    pub fn correct_prefix(&self) -> String {
        let s = self.digits(self.correct_digits);
        if self.correct_digits == 0 {
            s.trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// Digits the linearized tail should leave correct: `3 log10 |B|`.
pub fn predicted_digits(terminal: &BigRational) -> f64 {
    3.0 * log10_abs(terminal)
}

/// The summed formula and the linearized remainder `1/B`, if any.
struct Plan {
    formula: MachinFormula,
    tail: Option<BigRational>,
    predicted: Option<f64>,
}

fn standard_plan(chain: &ChainResult) -> Result<Plan> {
    let mut f = chain.to_formula();
    match &chain.terminal {
        Some(t) if !chain.terminated_exactly => {
            f.terms.pop();
            Ok(Plan {
                formula: f,
                tail: Some(t.recip()?),
                predicted: Some(predicted_digits(t)),
            })
        }
        _ => Ok(Plan {
            formula: f,
            tail: None,
            predicted: None,
        }),
    }
}

fn alt_plan(chain: &AltChainResult) -> Result<Plan> {
    let mut f = chain.to_formula();
    f.terms.pop();
    Ok(Plan {
        formula: f,
        tail: Some(chain.companion.recip()?),
        predicted: Some(predicted_digits(&chain.companion)),
    })
}

/// Correct decimals of `value` against `pi`, or `None` if the ball is too
/// wide to decide.
fn score(value: &RealBall, pi: &ReferencePi, decimals: u32, exact: bool) -> Option<u32> {
    let (lo, hi) = value.truncated_bounds(decimals);
    let lo = format_fixed(&lo, decimals);
    let hi = format_fixed(&hi, decimals);
    let settled = lo.bytes().zip(hi.bytes()).take_while(|(a, b)| a == b).count();
    if !lo.starts_with("3.") {
        return (settled >= 1).then_some(0);
    }
    let reference = pi.digits.as_bytes();
    let matched = lo
        .bytes()
        .zip(reference.iter().copied())
        .take_while(|(a, b)| a == b)
        .count();
    if exact {
        return Some(matched.min(settled).saturating_sub(2) as u32);
    }
    let full = (decimals + 2) as usize;
    if matched < full {
        // The first mismatch must lie inside the settled prefix.
        return (matched < settled).then(|| matched.saturating_sub(2) as u32);
    }
    None
}

fn evaluate(
    plan: &Plan,
    k_exact: bool,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<(RealBall, u32, u32)> {
    let cap = precision_cap();
    let mut p = match plan.predicted {
        Some(pred) if !k_exact => {
            let want = (2.0 * pred.max(0.0)).ceil() as u32 + GUARD_DIGITS;
            precision.max(want)
        }
        _ => precision.max(1),
    };
    loop {
        if p > cap {
            return Err(Error::PrecisionCap {
                cap,
                what: "correct digits not resolved".into(),
            });
        }
        let scale = p + 5;
        let mut quarter = evaluate_formula(&plan.formula, scale, kernel)?;
        if let Some(t) = &plan.tail {
            quarter = quarter.add(&RealBall::from_rational(t, scale + 2));
        }
        let value = quarter.mul_int(&BigInt::from(4));
        let pi = reference_pi(p + 1)?;
        match score(&value, &pi, p, k_exact) {
            Some(cd) if k_exact || (cd + 2 < p && value.radius_at_most_pow10(-(cd as i64 + 2))) => {
                return Ok((value, cd, p));
            }
            _ => p = p.saturating_mul(2),
        }
    }
}

/// `4 (2^(k-1) arctan(1/A_k) + sum arctan(1/floor B_m) + 1/B_{M+1})`, or
/// the full identity when the chain closed exactly.
pub fn approximate_pi(k: u32, m: usize, precision: u32) -> Result<PiApproximation> {
    approximate_pi_with(k, m, precision, SeriesKernel::default())
}

pub fn approximate_pi_with(
    k: u32,
    m: usize,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<PiApproximation> {
    let chain = split_chain(k, m, Rounding::Floor)?;
    let plan = standard_plan(&chain)?;
    let exact = plan.tail.is_none();
    let (value, correct_digits, precision) = evaluate(&plan, exact, precision, kernel)?;
    let lehmer = measure_of(&plan.formula)?;
    Ok(PiApproximation {
        chain: Chain::Standard(chain),
        m,
        value,
        correct_digits,
        lehmer,
        exact,
        precision,
    })
}

/// `4 (2^(k-1) (sum arctan(1/floor A_m) + arctan(1/A_{M+1})) + 1/B)`.
///
/// The bracket is an identity for `arctan(1/A_1)`, so the score does not
/// move with `M`.
pub fn approximate_pi_alt(k: u32, ell: u32, m: usize, precision: u32) -> Result<PiApproximation> {
    approximate_pi_alt_with(k, ell, m, precision, SeriesKernel::default())
}

pub fn approximate_pi_alt_with(
    k: u32,
    ell: u32,
    m: usize,
    precision: u32,
    kernel: SeriesKernel,
) -> Result<PiApproximation> {
    let chain = alt_chain(k, ell, m)?;
    let plan = alt_plan(&chain)?;
    let (value, correct_digits, precision) = evaluate(&plan, false, precision, kernel)?;
    let lehmer = measure_of(&plan.formula)?;
    Ok(PiApproximation {
        chain: Chain::Alternative(chain),
        m,
        value,
        correct_digits,
        lehmer,
        exact: false,
        precision,
    })
}

/// Lehmer measure of a summed formula. A term `arctan(1)` (the degenerate
/// `k = 1` leading term) has no measure and is left out.
fn measure_of(formula: &MachinFormula) -> Result<RealBall> {
    let unit: Vec<usize> = formula
        .terms
        .iter()
        .enumerate()
        .filter(|(_, t)| t.beta.numer().magnitude() == t.beta.denom().magnitude())
        .map(|(i, _)| i)
        .collect();
    lehmer_measure(formula, &unit)
}

/// The formula behind a chain, with the linearized term restored as an
/// arctangent.
pub fn chain_formula(chain: &Chain) -> MachinFormula {
    match chain {
        Chain::Standard(c) => c.to_formula(),
        Chain::Alternative(a) => a.to_formula(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_m0_table_row() {
        let a = approximate_pi(4, 0, 10).unwrap();
        assert_eq!(a.correct_digits, 5);
        assert!(!a.exact);
        assert!(a.value.radius_at_most_pow10(-(a.correct_digits as i64 + 2)));
        assert!(a.digits(6).starts_with("3.14159"));
    }

    #[test]
    fn k4_full_chain_is_exact() {
        let a = approximate_pi(4, 5, 500).unwrap();
        assert!(a.exact);
        assert!(a.correct_digits >= 495);
        // Asking for more steps returns the same closed chain.
        let b = approximate_pi(4, 8, 60).unwrap();
        assert!(b.exact && b.correct_digits >= 55);
    }

    #[test]
    fn k6_rows() {
        for (m, want) in [(0usize, 4u32), (1, 11), (2, 26), (3, 54), (4, 110), (5, 221)] {
            assert_eq!(approximate_pi(6, m, 10).unwrap().correct_digits, want, "M={m}");
        }
    }

    #[test]
    fn k17_m0_gives_19() {
        assert_eq!(approximate_pi(17, 0, 30).unwrap().correct_digits, 19);
    }

    #[test]
    fn degenerate_k1() {
        let a = approximate_pi(1, 0, 30).unwrap();
        assert!(a.exact && a.correct_digits >= 30);
        assert_eq!(approximate_pi_alt(1, 0, 0, 30).unwrap_err(), Error::ExactQuadrant);
    }

    #[test]
    fn alt_is_flat_in_m_and_grows_with_ell() {
        let base = approximate_pi_alt(4, 2, 0, 10).unwrap().correct_digits;
        for m in 1..=4 {
            assert_eq!(approximate_pi_alt(4, 2, m, 10).unwrap().correct_digits, base, "M={m}");
        }
        let wider = approximate_pi_alt(4, 6, 0, 10).unwrap().correct_digits;
        assert!(wider > base, "{wider} vs {base}");
    }

    #[test]
    fn kernels_agree_on_score() {
        for kernel in [SeriesKernel::Maclaurin, SeriesKernel::Euler2F1] {
            let a = approximate_pi_with(6, 3, 10, kernel).unwrap();
            assert_eq!(a.correct_digits, 54);
        }
    }
}
