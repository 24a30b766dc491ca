use std::io::Write;

use num_traits::Signed;
use rayon::prelude::*;

use super::{approximate_pi, predicted_digits, reference_pi, GUARD_DIGITS};
use crate::error::{Error, Result};
use crate::exact_arith::{precision_cap, BigInt, BigRational, RealBall, Rounding};
use crate::formula_gen::{leading_integer, two_step_companion, FloorIter, LEHMER_PRECISION};

/// The `k` whose chain reproduces the published digit column.
pub const TABLE1_K: u32 = 6;

/// Published correct digits for `M = 0..=12`.
pub const TABLE1_EXPECTED: [u32; 13] =
    [5, 11, 27, 54, 98, 222, 444, 889, 1783, 3567, 7136, 14273, 28546];

/// A step is "stable" once it moves the measure by less than this.
pub const STABILIZATION_STEP: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub m: usize,
    pub correct_digits: u32,
    /// Published value, when `k` is [`TABLE1_K`] and the row exists.
    pub expected: Option<u32>,
    /// `correct_digits(M) / correct_digits(M - 1)`.
    pub ratio: Option<f64>,
}

impl TableRow {
    pub fn within(&self, tolerance: u32) -> Option<bool> {
        self.expected.map(|e| self.correct_digits.abs_diff(e) <= tolerance)
    }
}

/// Correct digits of the truncated chain for `M = 0..=m_max`.
pub fn digit_doubling_table(k: u32, m_max: usize) -> Result<Vec<TableRow>> {
    // Warm the reference once at the largest size any row will ask for.
    let last = crate::formula_gen::split_chain(k, m_max, Rounding::Floor)?;
    if let (Some(t), false) = (&last.terminal, last.terminated_exactly) {
        let want = (2.0 * predicted_digits(t)).ceil() as u32 + GUARD_DIGITS;
        if want < precision_cap() {
            reference_pi(want + 1)?;
        }
    }
    let digits: Vec<u32> = (0..=m_max)
        .into_par_iter()
        .map(|m| approximate_pi(k, m, 10).map(|a| a.correct_digits))
        .collect::<Result<_>>()?;
    Ok(digits
        .iter()
        .enumerate()
        .map(|(m, &cd)| TableRow {
            m,
            correct_digits: cd,
            expected: (k == TABLE1_K).then(|| TABLE1_EXPECTED.get(m).copied()).flatten(),
            ratio: (m > 0 && digits[m - 1] > 0).then(|| cd as f64 / digits[m - 1] as f64),
        })
        .collect())
}

/// Every ratio `cd(M+1)/cd(M)` for `M` in `from..` lies in `[lo, hi]`.
pub fn doubling_ratios_hold(rows: &[TableRow], from: usize, lo: f64, hi: f64) -> bool {
    rows.iter()
        .filter(|r| r.m > from)
        .filter_map(|r| r.ratio)
        .all(|x| (lo..=hi).contains(&x))
}

/// CSV `M,correct_digits,expected,status,ratio`; `status` is PASS or FAIL
/// against the published column with a tolerance of one digit.
pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["M", "correct_digits", "expected", "status", "ratio"]).map_err(io)?;
    for r in rows {
        let status = match r.within(1) {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "",
        };
        w.write_record([
            r.m.to_string(),
            r.correct_digits.to_string(),
            r.expected.map(|e| e.to_string()).unwrap_or_default(),
            status.to_string(),
            r.ratio.map(|x| format!("{x:.4}")).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Clone, Debug)]
pub struct LehmerRow {
    pub m: usize,
    pub mu: RealBall,
    /// `false` once floors are too large to form and only bounded.
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct LehmerTable {
    pub k: u32,
    pub rows: Vec<LehmerRow>,
    /// First `M` whose step moves the measure by less than
    /// [`STABILIZATION_STEP`].
    pub stabilization: Option<usize>,
}

impl LehmerTable {
    pub fn mu(&self, m: usize) -> Option<&RealBall> {
        self.rows.get(m).map(|r| &r.mu)
    }
}

/// Lower bound on `log10 |p/q|` from bit lengths, valid for `|p/q| >= 1`.
fn log10_lower(p: &BigInt, q: &BigInt) -> f64 {
    let bits = p.bits() as f64 - 1.0 - q.bits() as f64;
    (bits * std::f64::consts::LOG10_2).max(0.0)
}

/// Ball `[0, 1/l]` for a summand `1/log10 |f|` known only through
/// `log10 |f| >= l`.
fn bounded_summand(l: f64) -> Result<RealBall> {
    // Round the bound down a little so the float step stays conservative.
    let l = l * (1.0 - 1e-12);
    let upper = BigRational::from_f64_exact(1.0 / l)
        .ok_or_else(|| Error::InvalidArgument(format!("log bound {l}")))?;
    let upper = &upper * &BigRational::new(1_000_001.into(), 1_000_000.into())?;
    Ok(RealBall::from_bounds(
        &BigRational::zero(),
        &upper,
        LEHMER_PRECISION + 5,
    ))
}

/// Measure of the truncated formula for `M = 0..=m_max`, leaving out the
/// linearized `1/B_{M+1}` term.
///
/// Floors are formed exactly while the running quotient stays under the
/// precision cap. Past that, `|B'| >= (|f| - 1)^2` and `|f| >= |B| - 1`
/// give `log10 |f_m| >= 2 log10 |f_{m-1}| - log10 2`, and later rows carry
/// the resulting interval.
pub fn lehmer_vs_m(k: u32, m_max: usize) -> Result<LehmerTable> {
    let a = leading_integer(k, Rounding::Floor)?;
    let a_beta = BigRational::from_integer(a.clone());
    let mut mu = crate::formula_gen::lehmer_measure(
        &crate::formula_gen::MachinFormula::new(vec![crate::formula_gen::ArctanTerm::integer(1, a)]),
        &[],
    )?;
    let mut rows = vec![LehmerRow {
        m: 0,
        mu: mu.clone(),
        exact: true,
    }];
    let b1 = match two_step_companion(&a_beta, k) {
        Ok(b) => b,
        Err(Error::ExactQuadrant) => {
            return Ok(LehmerTable {
                k,
                rows,
                stabilization: None,
            })
        }
        Err(e) => return Err(e),
    };
    let cap_bits = (precision_cap() as f64 / std::f64::consts::LOG10_2) as u64;
    let mut iter = FloorIter::new(&b1);
    let mut last_log: Option<f64> = None;
    let mut bounded = false;
    let mut stabilization = None;
    for m in 1..=m_max {
        if !bounded && iter.current().0.bits() > cap_bits {
            bounded = true;
            let (p, q) = iter.current();
            // |f_m| >= |B_m| - 1 >= |B_m| / 2
            let from_b = log10_lower(&p.abs(), q) - std::f64::consts::LOG10_2;
            last_log = Some(from_b);
        }
        let (summand, exact) = if bounded {
            (bounded_summand(last_log.unwrap_or(0.0))?, false)
        } else {
            match iter.next() {
                None => break,
                Some(f) => {
                    let f = f?;
                    let s = crate::formula_gen::lehmer_measure(
                        &crate::formula_gen::MachinFormula::new(vec![
                            crate::formula_gen::ArctanTerm::integer(1, f.clone()),
                        ]),
                        &[],
                    )?;
                    let fa = f.abs();
                    last_log = Some(log10_lower(&fa, &BigInt::from(1)));
                    (s, true)
                }
            }
        };
        if stabilization.is_none() && summand.upper().to_f64() < STABILIZATION_STEP {
            stabilization = Some(m);
        }
        mu = mu.add(&summand);
        rows.push(LehmerRow {
            m,
            mu: mu.clone(),
            exact,
        });
        if bounded {
            // The next floor is at least the square of this one, halved.
            last_log = last_log.map(|l| 2.0 * l - std::f64::consts::LOG10_2);
        }
    }
    Ok(LehmerTable {
        k,
        rows,
        stabilization,
    })
}

/// CSV `M,mu,mu_lower,mu_upper,exact`.
pub fn write_lehmer_csv<W: Write>(table: &LehmerTable, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["M", "mu", "mu_lower", "mu_upper", "exact"]).map_err(io)?;
    for r in &table.rows {
        w.write_record([
            r.m.to_string(),
            r.mu.to_decimal_string(8),
            format!("{:.8}", r.mu.lower().to_f64()),
            format!("{:.8}", r.mu.upper().to_f64()),
            r.exact.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_table() {
        let rows = digit_doubling_table(TABLE1_K, 4).unwrap();
        let got: Vec<u32> = rows.iter().map(|r| r.correct_digits).collect();
        assert_eq!(got, [4, 11, 26, 54, 110]);
        assert_eq!(rows[4].within(1), Some(false));
        assert!(rows[..4].iter().all(|r| r.within(1) == Some(true)));
        assert!(doubling_ratios_hold(&rows, 2, 1.9, 2.1));
        let single = digit_doubling_table(4, 0).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].correct_digits, 5);
        assert_eq!(single[0].expected, None);
    }

    #[test]
    fn table_csv() {
        let rows = digit_doubling_table(TABLE1_K, 1).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "M,correct_digits,expected,status,ratio\n0,4,5,PASS,\n1,11,11,PASS,2.7500\n"
        );
    }

    #[test]
    fn lehmer_small_k() {
        let t = lehmer_vs_m(6, 6).unwrap();
        assert!((t.rows[0].mu.to_f64() - 1.0 / 40f64.log10()).abs() < 1e-12);
        assert!(t.rows.iter().all(|r| r.exact));
        for w in t.rows.windows(2) {
            assert!(w[1].mu.to_f64() > w[0].mu.to_f64());
        }
        // k = 4 closes at M = 5; later rows are not produced.
        assert_eq!(lehmer_vs_m(4, 9).unwrap().rows.len(), 6);
        assert_eq!(lehmer_vs_m(1, 3).unwrap_err(), Error::MeasureUndefined(0));
    }

    #[test]
    fn bounded_summand_contains_truth() {
        let b = bounded_summand(10.0).unwrap();
        assert!(b.contains_rational(&BigRational::new(1.into(), 10.into()).unwrap()));
        assert!(b.contains_rational(&BigRational::zero()));
    }
}
