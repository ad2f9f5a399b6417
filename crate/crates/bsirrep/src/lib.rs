//! Finite-dimensional irreducible representations of the Baumslag-Solitar
//! groups BS(p, q) = < a, b | a b^p a^-1 = b^q > with gcd(p, q) = 1.
//!
//! The crate classifies the irreducibles of a given dimension, constructs
//! the representing matrix pairs in exact cyclotomic arithmetic, and
//! cross-checks both against brute-force oracles that share no code with
//! the classification criterion.
//!
//! Layer map, bottom up:
//!
//! * [`numtheory`] — modular arithmetic, factorization with explicit
//!   budgets, multiplicative orders.
//! * [`cyclotomic`] — the exact scalar type [`CycNum`], an element of a
//!   cyclotomic field Q(zeta_L) in the power basis.
//! * [`exactlinalg`] — dense matrices and row-reduction over those scalars.
//! * [`repcore`] — representation specs, the canonical matrix pair, and the
//!   defining-relation verifiers.
//! * [`classify`] — the existence/irreducibility criterion, class counting,
//!   and Schur-style equivalence via explicit intertwiners.
//! * [`oracle`] — independent checks: group-word evaluation, a Burnside
//!   spanning test, invariant-subspace witnesses, and sweep harnesses.
//! * [`cli`] — serialization formats and parsing for the `bsirrep` binary.

pub mod classify;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod exactlinalg;
pub mod numtheory;
pub mod oracle;
pub mod repcore;

pub use crate::classify::{
    are_equivalent, classify_dimension, count_irreducibles, intertwiner, ClassificationReport,
};
pub use crate::cyclotomic::{zeta, CycNum, Rational};
pub use crate::error::{Error, Result};
pub use crate::exactlinalg::{CycMatrix, CycVector};
pub use crate::repcore::{build_matrices, BSParams, MatrixPair, RepSpec};
