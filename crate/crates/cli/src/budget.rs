//! Rough cost model used to refuse runs that would not finish at a desk.
//!
//! Calibrated on a single core: the k = 17 companion (about 3 * 10^5 digits)
//! takes about 0.15 s, and a 57 000-digit evaluation about 3 s.

use machin_core::BigRational;

pub const DEFAULT_BUDGET_SECS: f64 = 60.0;

/// Seconds to form a companion with `digits` digits.
pub fn companion_secs(digits: f64) -> f64 {
    0.15 * (digits / 3.2e5).powf(1.6)
}

/// Seconds to evaluate a formula and its reference at `precision` digits.
pub fn evaluation_secs(precision: f64) -> f64 {
    3.0 * (precision / 57_000.0).powi(2)
}

/// `Err` with a one-line refusal when `secs` exceeds `budget`.
pub fn check(secs: f64, budget: f64, what: &str) -> Result<(), String> {
    if secs.is_finite() && secs <= budget {
        Ok(())
    } else {
        Err(format!(
            "refusing: {what} is predicted to take {} s, above the --budget of {budget} s",
            fmt_secs(secs)
        ))
    }
}

fn fmt_secs(s: f64) -> String {
    if !s.is_finite() || s > 1e12 {
        "more than 1e12".to_string()
    } else if s >= 100.0 {
        format!("{s:.0}")
    } else {
        format!("{s:.2}")
    }
}

/// Predicted working precision for `M` steps past a chain quotient `b`:
/// each step doubles the digits `3 log10 |b|`.
pub fn working_precision(b: &BigRational, steps: u32) -> f64 {
    machin_core::pi_engine::predicted_digits(b) * 2f64.powi(steps as i32) * 2.0 + 20.0
}
