use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::companion::two_step_companion;
use super::radical::{leading_integer, scaled_seed};
use crate::error::{Error, Result};
use crate::exact_arith::{BigInt, BigRational, Rounding};

/// Default step limit for [`decompose_arctan`].
pub const DEFAULT_MAX_STEPS: usize = 64;

/// The formula `pi/4 = c arctan(1/A) + sum arctan(1/floor B_m) + arctan(1/B_{M+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainResult {
    pub k: u32,
    pub rounding: Rounding,
    /// `2^(k-1)`.
    pub leading_coefficient: BigInt,
    /// `A_k`.
    pub leading_integer: BigInt,
    /// `floor(B_m)` for `m = 1..=M` (fewer if the chain ended early).
    pub floor_integers: Vec<BigInt>,
    /// `B_{M+1}`; `None` when the leading term alone is already `pi/4`.
    pub terminal: Option<BigRational>,
    pub terminated_exactly: bool,
}

/// The scaled-seed variant:
/// `pi/4 = c (sum arctan(1/floor A_m) + arctan(1/A_{M+1})) + arctan(1/B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltChainResult {
    pub k: u32,
    pub ell: u32,
    pub leading_coefficient: BigInt,
    /// `A_1 = floor(10^ell * quotient) / 10^ell`.
    pub seed: BigRational,
    pub floor_integers: Vec<BigInt>,
    /// `A_{M+1}`.
    pub terminal: BigRational,
    /// The companion `B`, independent of `M`.
    pub companion: BigRational,
    pub terminated_exactly: bool,
}

/// One application of `arctan(1/z) = arctan(1/f) + arctan(1/z')` with
/// `f = floor(z)` and `z' = (1 + f z)/(f - z)`.
///
/// Returns `(f, z')`, or `None` when `z` is already an integer.
pub fn split_step(z: &BigRational) -> Result<Option<(BigInt, BigRational)>> {
    if z.in_unit_interval() {
        return Err(Error::SplittingDomain(z.to_string()));
    }
    if z.is_integer() {
        return Ok(None);
    }
    let (p, q) = (z.numer(), z.denom());
    let (f, r) = p.div_mod_floor(q);
    // z' = -(q + f p) / r with 0 < r < q. Any common factor of the two
    // divides f^2 + 1, which is far smaller than p in long chains.
    let n = -(q + &f * p);
    let f2 = &f * &f + 1u32;
    let h = f2.gcd(&(&r % &f2));
    let g = if h.is_one() { h } else { h.gcd(&(&n % &h)) };
    let next = if g.is_one() {
        BigRational::from_coprime(n, r)
    } else {
        BigRational::from_coprime(n / &g, r / &g)
    };
    Ok(Some((f, next)))
}

fn run_chain(mut b: BigRational, m_max: usize) -> Result<(Vec<BigInt>, BigRational)> {
    let mut floors = Vec::new();
    while floors.len() < m_max {
        match split_step(&b)? {
            None => break,
            Some((f, next)) => {
                floors.push(f);
                b = next;
            }
        }
    }
    Ok((floors, b))
}

fn leading_coefficient(k: u32) -> BigInt {
    BigInt::one() << (k - 1)
}

/// Builds the chain from an explicit leading integer.
pub fn split_chain_from(
    k: u32,
    leading: BigInt,
    m_max: usize,
    rounding: Rounding,
) -> Result<ChainResult> {
    let seed = BigRational::from_integer(leading.clone());
    let base = ChainResult {
        k,
        rounding,
        leading_coefficient: leading_coefficient(k),
        leading_integer: leading,
        floor_integers: Vec::new(),
        terminal: None,
        terminated_exactly: true,
    };
    let b1 = match two_step_companion(&seed, k) {
        Ok(b) => b,
        Err(Error::ExactQuadrant) => return Ok(base),
        Err(e) => return Err(e),
    };
    let (floors, terminal) = run_chain(b1, m_max)?;
    Ok(ChainResult {
        floor_integers: floors,
        terminated_exactly: terminal.is_integer(),
        terminal: Some(terminal),
        ..base
    })
}

/// Splitting chain of length `M` seeded by the floor (or ceiling) `A_k`.
///
/// Stops early when some `B_m` is an integer. If the leading term alone is
/// `pi/4` (`k = 1` with `A_1 = 1`), the chain is empty with no terminal.
pub fn split_chain(k: u32, m: usize, rounding: Rounding) -> Result<ChainResult> {
    let a = leading_integer(k, rounding)?;
    split_chain_from(k, a, m, rounding)
}

/// Every prefix `M = 0..=m_max` of one chain, sharing the work. Ends early
/// at exact termination.
pub fn chain_sequence(k: u32, m_max: usize, rounding: Rounding) -> Result<Vec<ChainResult>> {
    let full = split_chain(k, m_max, rounding)?;
    let Some(last) = full.terminal.clone() else {
        return Ok(vec![full]);
    };
    // Recover the intermediate B_m by replaying from B_1.
    let b1 = two_step_companion(&BigRational::from_integer(full.leading_integer.clone()), k)?;
    let mut out = Vec::with_capacity(full.floor_integers.len() + 1);
    let mut b = b1;
    for m in 0..=full.floor_integers.len() {
        let terminal = if m == full.floor_integers.len() { last.clone() } else { b.clone() };
        out.push(ChainResult {
            floor_integers: full.floor_integers[..m].to_vec(),
            terminated_exactly: terminal.is_integer(),
            terminal: Some(terminal),
            ..full.clone()
        });
        if m < full.floor_integers.len() {
            b = split_step(&b)?.expect("non-integer inside the chain").1;
        }
    }
    Ok(out)
}

/// Floors of the chain from `b`, without reducing intermediate fractions.
///
/// The quotient is carried as an unreduced pair `p/q` with `q > 0`; the
/// floors and the exact-termination test (`q | p`) do not depend on the
/// representation, so no gcd is ever taken.
#[derive(Clone, Debug)]
pub struct FloorIter {
    p: BigInt,
    q: BigInt,
    done: bool,
}

impl FloorIter {
    pub fn new(b: &BigRational) -> Self {
        Self {
            p: b.numer().clone(),
            q: b.denom().clone(),
            done: false,
        }
    }

    /// The current (unreduced) quotient `p/q`.
    pub fn current(&self) -> (&BigInt, &BigInt) {
        (&self.p, &self.q)
    }

    /// `true` once the current quotient is an integer.
    pub fn is_exact(&self) -> bool {
        self.done
    }
}

impl Iterator for FloorIter {
    type Item = Result<BigInt>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let (f, r) = self.p.div_mod_floor(&self.q);
        if r.is_zero() {
            self.done = true;
            return None;
        }
        if f.is_zero() && !self.p.is_negative() {
            self.done = true;
            return Some(Err(Error::SplittingDomain(format!("{}/{}", self.p, self.q))));
        }
        let n = -(&self.q + &f * &self.p);
        self.p = n;
        self.q = r;
        Some(Ok(f))
    }
}

/// Chain from the scaled seed `A_1 = floor(10^ell * quotient) / 10^ell`.
pub fn alt_chain(k: u32, ell: u32, m: usize) -> Result<AltChainResult> {
    let seed = scaled_seed(k, ell)?;
    alt_chain_from(k, ell, seed, m)
}

pub fn alt_chain_from(k: u32, ell: u32, seed: BigRational, m: usize) -> Result<AltChainResult> {
    let companion = two_step_companion(&seed, k)?;
    let (floors, terminal) = run_chain(seed.clone(), m)?;
    Ok(AltChainResult {
        k,
        ell,
        leading_coefficient: leading_coefficient(k),
        seed,
        floor_integers: floors,
        terminated_exactly: terminal.is_integer(),
        terminal,
        companion,
    })
}

/// Expansion of `arctan(1/z)` into `sum arctan(1/n_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Integer reciprocals, including a final integer when the expansion
    /// closed exactly.
    pub integers: Vec<BigInt>,
    /// Non-integer quotient still left when the step limit was reached.
    pub remainder: Option<BigRational>,
    /// Number of splitting steps applied.
    pub steps: usize,
}

impl Decomposition {
    pub fn is_exact(&self) -> bool {
        self.remainder.is_none()
    }
}

/// Applies the splitting identity repeatedly to `arctan(1/z)`.
pub fn decompose_arctan(z: &BigRational, max_steps: usize) -> Result<Decomposition> {
    if z.in_unit_interval() {
        return Err(Error::SplittingDomain(z.to_string()));
    }
    let mut integers = Vec::new();
    let mut z = z.clone();
    let mut steps = 0;
    loop {
        if z.is_integer() {
            integers.push(z.numer().clone());
            return Ok(Decomposition {
                integers,
                remainder: None,
                steps,
            });
        }
        if steps == max_steps {
            return Ok(Decomposition {
                integers,
                remainder: Some(z),
                steps,
            });
        }
        let (f, next) = split_step(&z)?.expect("z is not an integer");
        integers.push(f);
        z = next;
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    fn ints(v: &[&str]) -> Vec<BigInt> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    const K4_LAST: &str =
        "-117573868168175352930277752844194126767991915008537018836932014293678271636885792397";

    #[test]
    fn k4_chain() {
        let c0 = split_chain(4, 0, Rounding::Floor).unwrap();
        assert!(c0.floor_integers.is_empty());
        assert_eq!(c0.terminal, Some(q("-147153121/1758719")));
        assert_eq!(c0.leading_coefficient, 8.into());
        assert!(!c0.terminated_exactly);

        let c2 = split_chain(4, 2, Rounding::Floor).unwrap();
        assert_eq!(c2.floor_integers, ints(&["-84", "-21342"]));
        assert_eq!(c2.terminal, Some(q("-263843055464261/266167")));

        let c5 = split_chain(4, 5, Rounding::Floor).unwrap();
        assert_eq!(
            c5.floor_integers,
            ints(&[
                "-84",
                "-21342",
                "-991268848",
                "-193018008592515208050",
                "-197967899896401851763240424238758988350338"
            ])
        );
        assert_eq!(c5.terminal, Some(q(K4_LAST)));
        assert!(c5.terminated_exactly);
        assert_eq!(split_chain(4, 9, Rounding::Floor).unwrap(), c5);
    }

    #[test]
    fn k6_chain() {
        let c = split_chain(6, 3, Rounding::Floor).unwrap();
        assert_eq!(c.leading_integer, 40.into());
        assert_eq!(c.floor_integers, ints(&["-70", "-6645", "-1365756025"]));
    }

    #[test]
    fn degenerate_seed_gives_empty_chain() {
        let c = split_chain(1, 3, Rounding::Floor).unwrap();
        assert!(c.floor_integers.is_empty());
        assert_eq!(c.terminal, None);
        assert!(c.terminated_exactly);
    }

    #[test]
    fn sequence_matches_individual_chains() {
        let seq = chain_sequence(4, 8, Rounding::Floor).unwrap();
        assert_eq!(seq.len(), 6);
        for (m, c) in seq.iter().enumerate() {
            assert_eq!(c, &split_chain(4, m, Rounding::Floor).unwrap());
        }
    }

    #[test]
    fn floor_iter_matches_chain() {
        let b1 = two_step_companion(&q("40"), 6).unwrap();
        let fast: Vec<BigInt> = FloorIter::new(&b1).take(8).map(|r| r.unwrap()).collect();
        let slow = split_chain(6, 8, Rounding::Floor).unwrap();
        assert_eq!(fast, slow.floor_integers);
        let mut it = FloorIter::new(&q("-147153121/1758719"));
        assert_eq!(it.by_ref().count(), 5);
        assert!(it.is_exact());
        assert_eq!(it.current().0 / it.current().1, K4_LAST.parse::<BigInt>().unwrap());
    }

    #[test]
    fn alt_chain_examples() {
        let a0 = alt_chain(4, 2, 0).unwrap();
        assert_eq!(a0.seed, q("203/20"));
        assert_eq!(a0.companion, q("-4239006656613482881/1033248635280959"));
        assert_eq!(a0.terminal, q("203/20"));

        let a2 = alt_chain(4, 2, 2).unwrap();
        assert_eq!(a2.floor_integers, ints(&["10", "-684"]));
        assert_eq!(a2.terminal, q("-1402203/2"));
        assert!(!a2.terminated_exactly);

        let a3 = alt_chain(4, 2, 3).unwrap();
        assert_eq!(a3.floor_integers, ints(&["10", "-684", "-701102"]));
        assert_eq!(a3.terminal, q("-983087327708"));
        assert!(a3.terminated_exactly);
        assert_eq!(alt_chain(4, 2, 4).unwrap(), a3);

        assert_eq!(alt_chain(1, 0, 0), Err(Error::ExactQuadrant));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_arctan(&q("7"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!((d.integers, d.steps, d.remainder), (ints(&["7"]), 0, None));

        let d = decompose_arctan(&q("5/2"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(d.integers, ints(&["2", "-12"]));
        assert_eq!(d.steps, 1);

        let d = decompose_arctan(&q("2513489/2"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(d.integers, ints(&["1256744", "-3158812219818"]));
        let d = decompose_arctan(&q("18280007883/2"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(d.integers, ints(&["9140003941", "-167079344092131066905"]));

        // A literal floor on the negative quotient goes the other way.
        let d = decompose_arctan(&q("-2513489/2"), DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(d.integers[0], BigInt::from(-1256745));

        let d = decompose_arctan(&q("-147153121/1758719"), 2).unwrap();
        assert_eq!(d.integers, ints(&["-84", "-21342"]));
        assert_eq!(d.remainder, Some(q("-263843055464261/266167")));

        assert!(matches!(
            decompose_arctan(&q("1/2"), 4),
            Err(Error::SplittingDomain(_))
        ));
        assert!(matches!(
            decompose_arctan(&q("0"), 4),
            Err(Error::SplittingDomain(_))
        ));
    }

    #[test]
    fn split_step_normalizes() {
        // Floors in long chains share small factors; every terminal must
        // still be in lowest terms.
        for k in [4u32, 5, 6, 8] {
            let seq = chain_sequence(k, 9, Rounding::Floor).unwrap();
            for c in seq {
                let t = c.terminal.unwrap();
                assert_eq!(
                    BigRational::new(t.numer().clone(), t.denom().clone()).unwrap(),
                    t
                );
            }
        }
    }

    #[test]
    fn growth_ordering() {
        for k in [4u32, 5, 6] {
            let c = split_chain(k, 12, Rounding::Floor).unwrap();
            let f = &c.floor_integers;
            for m in 1..f.len() {
                assert!(f[m].abs() > f[m - 1].abs(), "k={k} m={m}");
                if m >= 2 {
                    let prev2 = &f[m - 1] * &f[m - 1];
                    assert!(f[m].abs() * 10 > prev2, "k={k} m={m}");
                }
            }
        }
    }
}
