use std::sync::Mutex;

use crate::arctan_eval::{evaluate_formula, SeriesKernel};
use crate::error::{Error, Result};
use crate::exact_arith::{format_fixed, BigInt, RealBall};
use crate::formula_gen::{known, MachinFormula};

/// Digits of pi agreed on by two independent formula/kernel routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferencePi {
    /// `"3"` or `"3.1415..."`, truncated (not rounded).
    pub digits: String,
    /// Significant digits held, counting the leading `3`.
    pub precision: u32,
    pub provenance: &'static str,
}

pub const PROVENANCE: &str =
    "4*atan(1/5) - atan(1/239) by maclaurin; k = 4 seven-term identity by iterative_gh";

impl ReferencePi {
    /// The decimals after the point.
    pub fn decimals(&self) -> &str {
        self.digits.get(2..).unwrap_or("")
    }

    fn truncate(&self, digits: u32) -> Self {
        let len = if digits <= 1 { 1 } else { digits as usize + 1 };
        Self {
            digits: self.digits[..len].to_string(),
            precision: digits,
            provenance: self.provenance,
        }
    }
}

static CACHE: Mutex<Option<ReferencePi>> = Mutex::new(None);

/// Pi truncated to `digits` significant digits.
///
/// Computed by two routes in parallel and compared digit for digit; the
/// longest result so far is kept and sliced for shorter requests.
pub fn reference_pi(digits: u32) -> Result<ReferencePi> {
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be at least 1".into()));
    }
    if let Some(r) = CACHE.lock().expect("cache lock").as_ref() {
        if r.precision >= digits {
            return Ok(r.truncate(digits));
        }
    }
    let decimals = digits - 1;
    let (a, b) = rayon::join(
        || certified_digits(&known::machin(), decimals, SeriesKernel::Maclaurin),
        || certified_digits(&known::k4_full_chain(), decimals, SeriesKernel::IterativeGh),
    );
    let (a, b) = (a?, b?);
    if let Some(position) = a.bytes().zip(b.bytes()).position(|(x, y)| x != y) {
        return Err(Error::InternalConsistency {
            position: position.saturating_sub(1),
        });
    }
    let r = ReferencePi {
        digits: a,
        precision: digits,
        provenance: PROVENANCE,
    };
    let mut cache = CACHE.lock().expect("cache lock");
    if cache.as_ref().is_none_or(|c| c.precision < digits) {
        *cache = Some(r.clone());
    }
    Ok(r)
}

/// `4 * formula` truncated to `decimals`, certified: both ends of the ball
/// must truncate to the same digits.
fn certified_digits(formula: &MachinFormula, decimals: u32, kernel: SeriesKernel) -> Result<String> {
    let mut guard = 10;
    loop {
        let ball: RealBall = evaluate_formula(formula, decimals + guard, kernel)?
            .mul_int(&BigInt::from(4));
        let (lo, hi) = ball.truncated_bounds(decimals);
        if lo == hi {
            return Ok(format_fixed(&lo, decimals));
        }
        guard *= 2;
        if guard > 640 {
            return Err(Error::PrecisionCap {
                cap: decimals + guard,
                what: "reference digits sit on a truncation boundary".into(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_references() {
        assert_eq!(reference_pi(1).unwrap().digits, "3");
        assert_eq!(reference_pi(10).unwrap().digits, "3.141592653");
        let r = reference_pi(51).unwrap();
        assert_eq!(
            r.digits,
            "3.14159265358979323846264338327950288419716939937510"
        );
        assert_eq!(r.decimals().len(), 50);
        assert_eq!(reference_pi(10).unwrap().precision, 10);
        assert!(reference_pi(0).is_err());
    }
}
