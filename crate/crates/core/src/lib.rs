//! Machin-like formulas for pi built by iterated integer-reciprocal
//! splitting, with certified arbitrary-precision evaluation.

pub mod arctan_eval;
pub mod error;
pub mod exact_arith;
pub mod formula_gen;
pub mod pi_engine;

pub use arctan_eval::{SeriesKernel, SeriesReport};
pub use error::{Error, Result};
pub use exact_arith::{BigInt, BigRational, GaussianInt, GaussianRational, RealBall, Rounding};
pub use formula_gen::{AltChainResult, ArctanTerm, ChainResult, MachinFormula};
pub use pi_engine::{PiApproximation, ReferencePi};
