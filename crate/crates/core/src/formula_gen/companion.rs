use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{
    strip_common_twos, BigInt, BigRational, GaussianInt, GaussianRational,
};

/// One point `(sigma_n, tau_n)` of the squaring iteration on the unit circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationState {
    pub sigma: BigRational,
    pub tau: BigRational,
    pub step: u32,
}

fn check_args(beta1: &BigRational, k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if beta1.is_zero() {
        return Err(Error::InvalidArgument("beta1 must be non-zero".into()));
    }
    Ok(())
}

/// The states `n = 1..=k` of
/// `sigma_n = sigma_{n-1}^2 - tau_{n-1}^2`, `tau_n = 2 sigma_{n-1} tau_{n-1}`,
/// starting from `sigma_1 = (b^2 - 1)/(b^2 + 1)`, `tau_1 = 2b/(b^2 + 1)`.
///
/// Kept as a literal rational iteration; useful for inspection and as a
/// cross-check of [`two_step_companion`], which takes a shortcut.
pub fn two_step_iteration(beta1: &BigRational, k: u32) -> Result<Vec<IterationState>> {
    check_args(beta1, k)?;
    let one = BigRational::one();
    let b2 = beta1 * beta1;
    let d = &b2 + &one;
    let mut sigma = &(&b2 - &one) / &d;
    let mut tau = &(beta1 + beta1) / &d;
    let mut out = vec![IterationState {
        sigma: sigma.clone(),
        tau: tau.clone(),
        step: 1,
    }];
    for step in 2..=k {
        let s = &(&sigma * &sigma) - &(&tau * &tau);
        let t = &(&sigma * &tau) * &BigRational::from_integer(2);
        sigma = s;
        tau = t;
        out.push(IterationState {
            sigma: sigma.clone(),
            tau: tau.clone(),
            step,
        });
    }
    Ok(out)
}

/// `z^(2^(k-1))` for `z = p + iq`, as `(s, t)` scaled by an arbitrary power
/// of two (which cancels in every ratio taken from it).
fn gaussian_power(beta1: &BigRational, k: u32) -> (BigInt, BigInt) {
    let mut s = beta1.numer().clone();
    let mut t = beta1.denom().clone();
    for _ in 1..k {
        let s2 = &s * &s - &t * &t;
        t = (&s * &t) << 1;
        s = s2;
        // gcd(p, q) = 1 means s and t can only share powers of two.
        strip_common_twos(&mut [&mut s, &mut t]);
    }
    (s, t)
}

/// `beta_2 = sigma_k / (1 - tau_k)`, the companion constant with
/// `pi/4 = 2^(k-1) arctan(1/beta_1) + arctan(1/beta_2)`.
///
/// With `sigma_k + i tau_k = ((b + i)/|b + i|)^(2^k)` and
/// `1 - 2 sigma tau = (sigma - tau)^2`, the ratio collapses to
/// `(s + t)/(s - t)` where `s + it = (p + iq)^(2^(k-1))`. That form needs
/// no gcd: the only common factors are powers of two.
pub fn two_step_companion(beta1: &BigRational, k: u32) -> Result<BigRational> {
    check_args(beta1, k)?;
    let (s, t) = gaussian_power(beta1, k);
    let mut num = &s + &t;
    let mut den = &s - &t;
    if den.is_zero() {
        return Err(Error::ExactQuadrant);
    }
    strip_common_twos(&mut [&mut num, &mut den]);
    Ok(BigRational::from_coprime(num, den))
}

/// The same constant from the closed form
/// `beta_2 = 2 / (((b + i)/(b - i))^(2^(k-1)) - i) - i`, in exact Gaussian
/// rationals. Only practical for small `k`.
pub fn companion_closed_form(beta1: &BigRational, k: u32) -> Result<BigRational> {
    check_args(beta1, k)?;
    if k > 24 {
        return Err(Error::InvalidArgument(format!(
            "closed form needs 2^{} powers; use two_step_companion",
            k - 1
        )));
    }
    let b = GaussianRational::from_parts(beta1, &BigRational::zero());
    let i = GaussianRational::from_int(GaussianInt::i());
    let ratio = b.add(&i).div(&b.sub(&i))?;
    let w = ratio.pow(1u64 << (k - 1));
    let two = GaussianRational::from_int(GaussianInt::new(2, 0));
    let denom = w.sub(&i);
    if denom.is_zero() {
        return Err(Error::ExactQuadrant);
    }
    let beta2 = two.div(&denom)?.sub(&i);
    if !beta2.im().is_zero() {
        return Err(Error::InvalidArgument("closed form left an imaginary part".into()));
    }
    Ok(beta2.re())
}

/// Number of decimal digits `beta_2` will have, roughly, for a seed `beta_1`:
/// `2^(k-2) * log10(p^2 + q^2)`.
pub fn predicted_companion_digits(beta1: &BigRational, k: u32) -> f64 {
    let p = beta1.numer().abs();
    let mag = crate::exact_arith::decimal_digits(&(&p * &p + beta1.denom() * beta1.denom()));
    mag as f64 * 2f64.powi(k as i32 - 2)
}
