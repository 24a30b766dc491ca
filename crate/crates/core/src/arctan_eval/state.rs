use crate::error::{Error, Result};
use crate::exact_arith::BigRational;

/// Exact coefficients `(g_n, h_n)` of the iterated series
/// `arctan x = 2 sum g_n / ((2n - 1)(g_n^2 + h_n^2))`.
///
/// Numerators grow by a constant factor per step, so this is for checking
/// and small examples; [`super::arctan_reciprocal`] uses a fixed-point form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesState {
    pub x: BigRational,
    pub g: BigRational,
    pub h: BigRational,
    pub n: u32,
}

impl SeriesState {
    /// `g_1 = 2/x`, `h_1 = 1`.
    pub fn new(x: BigRational) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let g = &BigRational::from_integer(2) / &x;
        Ok(Self {
            x,
            g,
            h: BigRational::one(),
            n: 1,
        })
    }

    /// `g_n = g(1 - 4/x^2) + 4h/x`, `h_n = h(1 - 4/x^2) - 4g/x`.
    pub fn advance(&mut self) {
        let four = BigRational::from_integer(4);
        let four_over_x = &four / &self.x;
        let m = &BigRational::one() - &(&four_over_x / &self.x);
        let g = &(&self.g * &m) + &(&self.h * &four_over_x);
        let h = &(&self.h * &m) - &(&self.g * &four_over_x);
        self.g = g;
        self.h = h;
        self.n += 1;
    }

    /// The current summand `2 g_n / ((2n - 1)(g_n^2 + h_n^2))`.
    pub fn term(&self) -> BigRational {
        let norm = &(&self.g * &self.g) + &(&self.h * &self.h);
        let den = &norm * &BigRational::from_integer(2 * self.n as i64 - 1);
        &(&self.g * &BigRational::from_integer(2)) / &den
    }

    /// Exact partial sum of the first `terms` summands for `arctan x`.
    pub fn partial_sum(x: &BigRational, terms: u32) -> Result<BigRational> {
        let mut st = Self::new(x.clone())?;
        let mut sum = BigRational::zero();
        for i in 0..terms {
            if i > 0 {
                st.advance();
            }
            sum = &sum + &st.term();
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arctan_eval::{arctan_reciprocal, SeriesKernel};
    use crate::exact_arith::{GaussianRational, RealBall};

    fn q(s: &str) -> BigRational {
        s.parse().unwrap()
    }

    #[test]
    fn recurrence_is_a_complex_square() {
        // g_n + i h_n = (g_{n-1} + i h_{n-1}) (1 - 2i/x)^2, checked exactly.
        for x in ["1/3", "1/10", "2/7", "1"] {
            let x = q(x);
            let step = GaussianRational::from_parts(&BigRational::one(), &(&BigRational::from_integer(-2) / &x))
                .pow(2);
            let mut st = SeriesState::new(x.clone()).unwrap();
            for _ in 2..=50 {
                let w = GaussianRational::from_parts(&st.g, &st.h);
                st.advance();
                let next = w.mul(&step);
                assert_eq!(next.re(), st.g);
                assert_eq!(next.im(), st.h);
            }
            assert_eq!(st.n, 50);
        }
    }

    #[test]
    fn first_state() {
        let st = SeriesState::new(q("1/5")).unwrap();
        assert_eq!(st.g, q("10"));
        assert_eq!(st.h, q("1"));
        assert_eq!(st.term(), q("20/101"));
        assert!(SeriesState::new(q("0")).is_err());
    }

    #[test]
    fn partial_sums_approach_kernel() {
        let x = q("1/10");
        let s = SeriesState::partial_sum(&x, 12).unwrap();
        let ball = arctan_reciprocal(&q("10"), 40, SeriesKernel::IterativeGh).unwrap();
        let gap = ball.sub(&RealBall::from_rational(&s, ball.scale()));
        assert!(gap.radius_at_most_pow10(-30));
        assert!(gap.to_f64().abs() < 1e-25);
    }
}
