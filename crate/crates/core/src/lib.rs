//! Finite and rational trees over signatures, presented set functors and
//! guarded recursive equations.
//!
//! A functor is given by a signature plus a normalizer on one-layer terms
//! ([`presentation`]). Finite trees modulo the induced congruence form the
//! initial algebra and free algebras; rational trees modulo its levelwise
//! closure are the rational part of the terminal coalgebra and of the free
//! completely iterative algebras. [`solver`] solves guarded systems exactly
//! and by the chain of approximate solutions, whose join is the exact one.

pub mod chains;
pub mod dot;
pub mod error;
pub mod gen;
pub mod order;
pub mod par;
pub mod presentation;
pub mod signature;
pub mod solver;
pub mod suites;
pub mod syntax;
pub mod trees;

pub use error::{Error, Result};
pub use presentation::{builtin, parse_builtin, CanonicalTree, Presentation, Verdict};
pub use signature::{FlatTerm, Head, Signature};
pub use trees::{
    cut, join_chain, leq_cut, ChainSpec, CutPoint, FiniteTree, JoinConfig, RationalTree, State, TreeValue,
};
