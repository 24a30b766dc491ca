//! Generation of Machin-like formulas: nested-radical seeds, the companion
//! constant, splitting chains, and the measures used to compare formulas.

mod chain;
mod companion;
mod formula;
mod lehmer;
mod radical;
mod verify;

pub use chain::{
    alt_chain, alt_chain_from, chain_sequence, decompose_arctan, split_chain, split_chain_from,
    split_step, AltChainResult, ChainResult, Decomposition, FloorIter, DEFAULT_MAX_STEPS,
};
pub use companion::{
    companion_closed_form, predicted_companion_digits, two_step_companion, two_step_iteration,
    IterationState,
};
pub use formula::{decompose_term, known, ArctanTerm, MachinFormula};
pub use lehmer::{lehmer_measure, ln10_ball, ln_ball, log10_ball, LEHMER_PRECISION};
pub use radical::{leading_integer, nested_radical_quotient, radical_floor, scaled_seed};
pub use verify::{verify_formula_exact, verify_report, Verification};
