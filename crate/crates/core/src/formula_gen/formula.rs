use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::chain::{decompose_arctan, AltChainResult, ChainResult};
use crate::error::{Error, Result};
use crate::exact_arith::{BigInt, BigRational};

/// `coefficient * arctan(1/beta)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArctanTerm {
    pub coefficient: BigInt,
    pub beta: BigRational,
}

impl ArctanTerm {
    pub fn new(coefficient: impl Into<BigInt>, beta: BigRational) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::InvalidArgument("beta must be non-zero".into()));
        }
        Ok(Self {
            coefficient: coefficient.into(),
            beta,
        })
    }

    /// `coefficient * arctan(1/n)`.
    pub fn integer(coefficient: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        assert!(!n.is_zero(), "beta must be non-zero");
        Self {
            coefficient: coefficient.into(),
            beta: BigRational::from_integer(n),
        }
    }

    /// The same value with a positive `beta` (the sign moves onto the
    /// coefficient, since arctan is odd).
    pub fn sign_folded(&self) -> Self {
        if self.beta.is_negative() {
            Self {
                coefficient: -&self.coefficient,
                beta: -&self.beta,
            }
        } else {
            self.clone()
        }
    }
}

/// A claimed identity `pi/4 = sum_j c_j arctan(1/beta_j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MachinFormula {
    pub terms: Vec<ArctanTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    coeff: String,
    beta: String,
}

#[derive(Serialize, Deserialize)]
struct WireFormula {
    target: String,
    terms: Vec<WireTerm>,
}

pub const TARGET: &str = "pi/4";

impl MachinFormula {
    pub fn new(terms: Vec<ArctanTerm>) -> Self {
        Self { terms }
    }

    /// From `(coefficient, beta)` pairs written as decimal strings.
    pub fn parse_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let terms = pairs
            .iter()
            .map(|(c, b)| {
                let c: BigInt = c.parse().map_err(|_| Error::Parse(c.to_string()))?;
                ArctanTerm::new(c, b.parse()?)
            })
            .collect::<Result<_>>()?;
        Ok(Self { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_json(&self) -> String {
        let wire = WireFormula {
            target: TARGET.into(),
            terms: self
                .terms
                .iter()
                .map(|t| WireTerm {
                    coeff: t.coefficient.to_string(),
                    beta: t.beta.to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("plain strings serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        let v: serde_json::Value = serde_json::from_str(&self.to_json()).expect("own output");
        serde_json::to_string_pretty(&v).expect("plain strings serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: WireFormula = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        if wire.target != TARGET {
            return Err(Error::Json(format!(
                "unsupported target {:?}, expected {TARGET:?}",
                wire.target
            )));
        }
        let terms = wire
            .terms
            .iter()
            .map(|t| {
                let c = t
                    .coeff
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(t.coeff.clone()))?;
                let beta: BigRational = t.beta.parse()?;
                ArctanTerm::new(c, beta)
            })
            .collect::<Result<_>>()?;
        Ok(Self { terms })
    }

    /// Replaces every non-integer `beta` by its integer-reciprocal
    /// expansion. Signs are folded first so each split starts from a
    /// positive quotient.
    pub fn decomposed(&self, max_steps: usize) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.beta.is_integer() {
                terms.push(t.clone());
            } else {
                terms.extend(decompose_term(t, max_steps)?);
            }
        }
        Ok(Self { terms })
    }
}

/// Expands one term into integer reciprocals, folding a negative `beta`
/// with `|beta| >= 1` into the coefficient before splitting.
///
/// The last term keeps a non-integer `beta` only if `max_steps` ran out.
pub fn decompose_term(term: &ArctanTerm, max_steps: usize) -> Result<Vec<ArctanTerm>> {
    // Folding a quotient in (-1, 0) would land it in [0, 1), where the
    // split is undefined; those are split as they stand.
    let t = if term.beta.numer().abs() >= *term.beta.denom() {
        term.sign_folded()
    } else {
        term.clone()
    };
    let d = decompose_arctan(&t.beta, max_steps)?;
    let mut out: Vec<ArctanTerm> = d
        .integers
        .into_iter()
        .map(|n| ArctanTerm::integer(t.coefficient.clone(), n))
        .collect();
    if let Some(rem) = d.remainder {
        out.push(ArctanTerm::new(t.coefficient.clone(), rem)?);
    }
    Ok(out)
}

/// `atan(1/n)` or `atan(q/p)` with `beta = p/q > 0`.
fn render_atan(beta: &BigRational) -> String {
    if beta.is_integer() {
        format!("atan(1/{})", beta.numer())
    } else {
        format!("atan({}/{})", beta.denom(), beta.numer())
    }
}

impl fmt::Display for MachinFormula {
    /// Human-readable form with signs folded into the coefficients, e.g.
    /// `pi/4 = 4*atan(1/5) - atan(1/239)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{TARGET} =")?;
        if self.terms.is_empty() {
            return write!(f, " 0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let t = term.sign_folded();
            let negative = t.coefficient.is_negative();
            let c = t.coefficient.abs();
            match (i, negative) {
                (0, true) => write!(f, " -")?,
                (0, false) => write!(f, " ")?,
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            write!(f, "{}", render_atan(&t.beta))?;
        }
        Ok(())
    }
}

impl ChainResult {
    /// `2^(k-1) arctan(1/A) + sum arctan(1/floor B_m) + arctan(1/B_{M+1})`.
    pub fn to_formula(&self) -> MachinFormula {
        let mut terms = vec![ArctanTerm::integer(
            self.leading_coefficient.clone(),
            self.leading_integer.clone(),
        )];
        terms.extend(self.floor_integers.iter().map(|f| ArctanTerm::integer(1, f.clone())));
        if let Some(t) = &self.terminal {
            terms.push(ArctanTerm {
                coefficient: BigInt::one(),
                beta: t.clone(),
            });
        }
        MachinFormula { terms }
    }
}

impl AltChainResult {
    /// `2^(k-1) (sum arctan(1/floor A_m) + arctan(1/A_{M+1})) + arctan(1/B)`.
    pub fn to_formula(&self) -> MachinFormula {
        let c = &self.leading_coefficient;
        let mut terms: Vec<ArctanTerm> = self
            .floor_integers
            .iter()
            .map(|f| ArctanTerm::integer(c.clone(), f.clone()))
            .collect();
        terms.push(ArctanTerm {
            coefficient: c.clone(),
            beta: self.terminal.clone(),
        });
        terms.push(ArctanTerm {
            coefficient: BigInt::one(),
            beta: self.companion.clone(),
        });
        MachinFormula { terms }
    }
}

/// Classical identities used as fixtures and CLI presets.
pub mod known {
    use super::MachinFormula;

    fn build(pairs: &[(&str, &str)]) -> MachinFormula {
        MachinFormula::parse_pairs(pairs).expect("fixture literals parse")
    }

    /// `4 arctan(1/5) - arctan(1/239)`.
    pub fn machin() -> MachinFormula {
        build(&[("4", "5"), ("-1", "239")])
    }

    /// `arctan(1/2) + arctan(1/3)`.
    pub fn euler() -> MachinFormula {
        build(&[("1", "2"), ("1", "3")])
    }

    /// `2 arctan(1/2) - arctan(1/7)`.
    pub fn two_seven() -> MachinFormula {
        build(&[("2", "2"), ("-1", "7")])
    }

    /// `2 arctan(1/3) + arctan(1/7)`.
    pub fn three_seven() -> MachinFormula {
        build(&[("2", "3"), ("1", "7")])
    }

    /// Six-term formula with integer reciprocals, largest 6826318.
    pub fn chien_lih() -> MachinFormula {
        build(&[
            ("183", "239"),
            ("32", "1023"),
            ("-68", "5832"),
            ("12", "110443"),
            ("-12", "4841182"),
            ("-100", "6826318"),
        ])
    }

    /// Five-term formula with two non-integer quotients.
    pub fn wetherfield() -> MachinFormula {
        build(&[
            ("83", "107"),
            ("17", "1710"),
            ("-22", "103697"),
            ("-12", "2513489/2"),
            ("-22", "18280007883/2"),
        ])
    }

    /// The seven-term expansion of [`wetherfield`].
    pub fn wetherfield_decomposed() -> MachinFormula {
        build(&[
            ("83", "107"),
            ("17", "1710"),
            ("-22", "103697"),
            ("-12", "1256744"),
            ("12", "3158812219818"),
            ("-22", "9140003941"),
            ("22", "167079344092131066905"),
        ])
    }

    /// The k = 4 chain closed exactly after five splits.
    pub fn k4_full_chain() -> MachinFormula {
        build(&[
            ("8", "10"),
            ("1", "-84"),
            ("1", "-21342"),
            ("1", "-991268848"),
            ("1", "-193018008592515208050"),
            ("1", "-197967899896401851763240424238758988350338"),
            (
                "1",
                "-117573868168175352930277752844194126767991915008537018836932014293678271636885792397",
            ),
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::Rounding;
    use crate::formula_gen::chain::{alt_chain, split_chain, DEFAULT_MAX_STEPS};

    #[test]
    fn text_rendering() {
        assert_eq!(known::machin().to_string(), "pi/4 = 4*atan(1/5) - atan(1/239)");
        let c0 = split_chain(4, 0, Rounding::Floor).unwrap().to_formula();
        assert_eq!(c0.to_string(), "pi/4 = 8*atan(1/10) - atan(1758719/147153121)");
        let c2 = split_chain(4, 2, Rounding::Floor).unwrap().to_formula();
        assert_eq!(
            c2.to_string(),
            "pi/4 = 8*atan(1/10) - atan(1/84) - atan(1/21342) - atan(266167/263843055464261)"
        );
        let a = alt_chain(4, 2, 0).unwrap().to_formula();
        assert_eq!(
            a.to_string(),
            "pi/4 = 8*atan(20/203) - atan(1033248635280959/4239006656613482881)"
        );
    }

    #[test]
    fn json_round_trip() {
        let f = split_chain(6, 4, Rounding::Floor).unwrap().to_formula();
        let json = f.to_json();
        assert!(json.starts_with(r#"{"target":"pi/4","terms":[{"coeff":"32","beta":"40"}"#));
        assert_eq!(MachinFormula::from_json(&json).unwrap(), f);
        assert_eq!(MachinFormula::from_json(&f.to_json_pretty()).unwrap(), f);
    }

    #[test]
    fn json_rejects_bad_input() {
        for bad in [
            r#"{"target":"pi/2","terms":[]}"#,
            r#"{"target":"pi/4","terms":[{"coeff":"x","beta":"2"}]}"#,
            r#"{"target":"pi/4","terms":[{"coeff":"1","beta":"0"}]}"#,
            r#"{"target":"pi/4","terms":[{"coeff":"1","beta":"1/0"}]}"#,
            r#"{"target":"pi/4""#,
        ] {
            assert!(MachinFormula::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn wetherfield_expansion() {
        let d = known::wetherfield().decomposed(DEFAULT_MAX_STEPS).unwrap();
        let mut got: Vec<String> = d.terms.iter().map(|t| t.sign_folded().beta.to_string()).collect();
        got.sort();
        let mut want: Vec<String> = known::wetherfield_decomposed()
            .terms
            .iter()
            .map(|t| t.sign_folded().beta.to_string())
            .collect();
        want.sort();
        assert_eq!(got, want);
        let folded: Vec<_> = d.terms.iter().map(|t| t.sign_folded()).collect();
        for t in known::wetherfield_decomposed().terms {
            assert!(folded.contains(&t.sign_folded()), "{t:?}");
        }
    }
}
