//! Exact-arithmetic toolkit for Sturmian words.
//!
//! A Sturmian word is an aperiodic infinite binary word of minimal factor
//! complexity C(n) = n + 1. Its language is determined by an irrational
//! slope, handled here through its continued-fraction expansion. The crate
//! generates *certified* prefixes (long enough that their factor content
//! up to a stated depth provably equals that of the infinite word) and
//! computes, entirely in exact arithmetic:
//!
//! - convergents and slope normalization ([`confrac`]),
//! - characteristic words, interval-exchange codings, and substitution
//!   fixed points used as control words ([`wordgen`]),
//! - factor languages, complexity, special factors, Rauzy graphs
//!   ([`language`]),
//! - return words, the recurrence function R(n) by independent routes,
//!   and derivated words ([`returns`]),
//! - factor indices (maximal fractional powers) and their closed-form
//!   bounds ([`powers`]),
//! - the Sturmian morphism monoid and the construction of maximal-index
//!   factors ([`morphisms`]).

pub mod automaton;
pub mod confrac;
pub mod error;
pub mod language;
pub mod morphisms;
pub mod powers;
pub mod returns;
pub mod word;
pub mod wordgen;

#[cfg(test)]
pub(crate) mod oracles;

pub use confrac::{CFExpansion, Convergents, ExactRational};
pub use error::{Error, Result};
pub use word::{FiniteWord, Letter};
pub use wordgen::LanguageView;
