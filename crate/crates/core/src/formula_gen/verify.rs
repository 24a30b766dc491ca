use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::formula::MachinFormula;
use crate::arctan_eval::{arctan_reciprocal_any, pi_quarter};
use crate::error::Result;
use crate::exact_arith::{BigInt, GaussianInt, RealBall};

/// Digits used to pin the winding number.
const WINDING_DIGITS: u32 = 20;

/// Outcome of [`verify_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    /// `Re == Im > 0` for the Gaussian product.
    pub on_diagonal: bool,
    /// The numeric sum lies within 1 of `pi/4`, so the product's argument
    /// is `pi/4` itself and not `pi/4 + 2 pi n`.
    pub winding_ok: bool,
}

impl Verification {
    pub fn holds(&self) -> bool {
        self.on_diagonal && self.winding_ok
    }
}

/// `p + i q` with `arg = arctan(1/beta)` for `beta = p/q`.
fn gaussian_of(term: &super::formula::ArctanTerm) -> GaussianInt {
    let p = term.beta.numer();
    let q = term.beta.denom().clone();
    let im = if p.is_negative() { -q } else { q };
    let z = GaussianInt {
        re: p.abs(),
        im,
    };
    if term.coefficient.is_negative() {
        z.conj()
    } else {
        z
    }
}

fn product(factors: Vec<GaussianInt>) -> GaussianInt {
    let mut v = factors;
    while v.len() > 1 {
        v = v
            .par_chunks(2)
            .map(|c| match c {
                [a, b] => a.mul(b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    v.pop().unwrap_or_else(GaussianInt::one)
}

/// Exact check plus winding check, reported separately.
pub fn verify_report(formula: &MachinFormula) -> Result<Verification> {
    let factors: Vec<GaussianInt> = formula
        .terms
        .par_iter()
        .map(|t| {
            let exp: u64 = t.coefficient.abs().try_into().unwrap_or(u64::MAX);
            gaussian_of(t).primitive_part().pow(exp)
        })
        .collect();
    let prod = product(factors);
    let on_diagonal = prod.re == prod.im && prod.re > BigInt::zero();
    let winding_ok = on_diagonal && near_pi_quarter(formula)?;
    Ok(Verification {
        on_diagonal,
        winding_ok,
    })
}

fn near_pi_quarter(formula: &MachinFormula) -> Result<bool> {
    let mut sum = RealBall::from_integer(0, WINDING_DIGITS);
    for t in &formula.terms {
        let a = arctan_reciprocal_any(&t.beta, WINDING_DIGITS)?;
        sum = sum.add(&a.mul_int(&t.coefficient));
    }
    let gap = sum.sub(&pi_quarter(WINDING_DIGITS)?).to_f64().abs();
    Ok(gap < 1.0)
}

/// `true` iff `sum c_j arctan(1/beta_j) = pi/4` holds exactly.
pub fn verify_formula_exact(formula: &MachinFormula) -> Result<bool> {
    Ok(verify_report(formula)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::Rounding;
    use crate::formula_gen::chain::{alt_chain, split_chain};
    use crate::formula_gen::formula::known;

    #[test]
    fn classical_identities() {
        for f in [
            known::machin(),
            known::euler(),
            known::two_seven(),
            known::three_seven(),
            known::chien_lih(),
            known::wetherfield(),
            known::wetherfield_decomposed(),
            known::k4_full_chain(),
        ] {
            assert!(verify_formula_exact(&f).unwrap(), "{f}");
        }
    }

    #[test]
    fn broken_identities() {
        let f = MachinFormula::parse_pairs(&[("1", "2"), ("1", "4")]).unwrap();
        assert!(!verify_formula_exact(&f).unwrap());
        let f = MachinFormula::parse_pairs(&[("5", "5"), ("-1", "239")]).unwrap();
        assert!(!verify_formula_exact(&f).unwrap());
        // Right ray, wrong turn: 9 pi/4.
        let f = MachinFormula::parse_pairs(&[("9", "1")]).unwrap();
        let r = verify_report(&f).unwrap();
        assert!(r.on_diagonal && !r.winding_ok);
        assert!(verify_formula_exact(&MachinFormula::parse_pairs(&[("1", "1")]).unwrap()).unwrap());
    }

    #[test]
    fn chains_verify() {
        for k in 2..=8 {
            for m in 0..=4 {
                for mode in [Rounding::Floor, Rounding::Ceiling] {
                    let Ok(c) = split_chain(k, m, mode) else { continue };
                    assert!(verify_formula_exact(&c.to_formula()).unwrap(), "k={k} M={m} {mode:?}");
                }
            }
        }
        for m in 0..=3 {
            let a = alt_chain(4, 2, m).unwrap();
            assert!(verify_formula_exact(&a.to_formula()).unwrap());
        }
    }
}
