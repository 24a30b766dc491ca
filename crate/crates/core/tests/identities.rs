use machin_core::arctan_eval::{arctan_reciprocal_any, evaluate_formula, pi_quarter};
use machin_core::formula_gen::{
    alt_chain, decompose_arctan, split_chain, verify_formula_exact, DEFAULT_MAX_STEPS,
};
use machin_core::pi_engine::{approximate_pi, reference_pi};
use machin_core::{BigInt, BigRational, MachinFormula, Rounding, SeriesKernel};
use proptest::prelude::*;

fn rounding(ceiling: bool) -> Rounding {
    if ceiling {
        Rounding::Ceiling
    } else {
        Rounding::Floor
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn chains_are_identities(k in 2u32..=9, m in 0usize..=5, ceiling: bool) {
        let f = split_chain(k, m, rounding(ceiling)).unwrap().to_formula();
        prop_assert_eq!(verify_formula_exact(&f), Ok(true));
        let v = evaluate_formula(&f, 60, SeriesKernel::IterativeGh).unwrap();
        prop_assert!(v.overlaps(&pi_quarter(60).unwrap()));
    }

    #[test]
    fn alt_chains_are_identities(k in 2u32..=7, ell in 0u32..=4, m in 0usize..=3) {
        let f = alt_chain(k, ell, m).unwrap().to_formula();
        prop_assert_eq!(verify_formula_exact(&f), Ok(true));
    }

    #[test]
    fn decomposition_preserves_angle(p in 2i64..10_000_000, q in 1i64..1000, neg: bool) {
        let p = if neg { -p } else { p };
        let z = BigRational::new(BigInt::from(p), BigInt::from(q)).unwrap();
        prop_assume!(!z.in_unit_interval());
        let d = decompose_arctan(&z, DEFAULT_MAX_STEPS).unwrap();
        let mut pairs: Vec<(String, String)> =
            d.integers.iter().map(|n| ("1".to_string(), n.to_string())).collect();
        if let Some(r) = &d.remainder {
            pairs.push(("1".into(), r.to_string()));
        }
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let f = MachinFormula::parse_pairs(&refs).unwrap();
        let sum = evaluate_formula(&f, 50, SeriesKernel::IterativeGh).unwrap();
        prop_assert!(sum.overlaps(&arctan_reciprocal_any(&z, 50).unwrap()));
    }

    #[test]
    fn correct_digits_never_drop(m in 0usize..=5) {
        let a = approximate_pi(6, m, 20).unwrap();
        let b = approximate_pi(6, m + 1, 20).unwrap();
        prop_assert!(b.correct_digits >= a.correct_digits);
    }
}

#[test]
fn reference_agrees_with_series() {
    let r = reference_pi(301).unwrap();
    let four = BigInt::from(4);
    let pi = pi_quarter(310).unwrap().mul_int(&four);
    assert_eq!(&pi.to_decimal_string(300)[2..], &r.decimals()[..300]);
}

#[test]
fn approximation_digits_match_reference() {
    let a = approximate_pi(6, 6, 300).unwrap();
    let r = reference_pi(a.correct_digits + 1).unwrap();
    let shown = a.digits(a.correct_digits);
    assert_eq!(&shown[2..], &r.decimals()[..a.correct_digits as usize]);
}
