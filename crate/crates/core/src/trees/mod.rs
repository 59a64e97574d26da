//! Finite and rational Σ-trees, cutting, the order by cutting and joins of
//! cutting chains.
//!
//! Depth convention: the root has depth 0 and height counts edges. Cutting at
//! `n` keeps every node of depth below `n` and replaces every node at depth
//! `n` (inner node or leaf) by the cut point.

mod finite;
mod join;
pub(crate) mod levels;
mod rational;

use std::collections::HashMap;

pub use finite::FiniteTree;
pub(crate) use join::periodic_closure;
pub use join::{join_chain, ChainSpec, JoinConfig};
pub use rational::{RationalTree, State};

use crate::error::{Error, Result};
use crate::signature::{Head, Signature};

/// The leaf written into the frontier of a cutting: a nullary operation or a
/// variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutPoint(Head);

impl CutPoint {
    pub fn new(sig: &Signature, head: Head) -> Result<Self> {
        if let Head::Op(name) = &head {
            if sig.arity(name) != Some(0) {
                return Err(Error::BadCutPoint(name.to_string()));
            }
        }
        Ok(CutPoint(head))
    }

    pub fn var(name: &str) -> Self {
        CutPoint(Head::var(name))
    }

    /// A nullary operation, unchecked.
    pub fn nullary(name: &str) -> Self {
        CutPoint(Head::op(name))
    }

    pub fn head(&self) -> &Head {
        &self.0
    }

    pub fn leaf(&self) -> FiniteTree {
        FiniteTree::leaf(self.0.clone())
    }
}

/// A tree that is either given inductively or as a state system.
#[derive(Clone, Debug)]
pub enum TreeValue {
    Finite(FiniteTree),
    Rational(RationalTree),
}

impl TreeValue {
    pub fn is_finite(&self) -> bool {
        match self {
            TreeValue::Finite(_) => true,
            TreeValue::Rational(r) => r.is_finite(),
        }
    }

    /// The inductive form, when the tree is finite.
    pub fn as_finite(&self) -> Option<FiniteTree> {
        match self {
            TreeValue::Finite(t) => Some(t.clone()),
            TreeValue::Rational(r) => r.to_finite().ok(),
        }
    }

    pub fn to_rational(&self) -> RationalTree {
        match self {
            TreeValue::Finite(t) => RationalTree::from_finite(t),
            TreeValue::Rational(r) => r.clone(),
        }
    }

    pub fn height(&self) -> Option<usize> {
        self.as_finite().map(|t| t.height())
    }

    pub fn cut(&self, n: usize, p: &CutPoint) -> FiniteTree {
        cut(self, n, p)
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        match self {
            TreeValue::Finite(t) => t.validate(sig),
            TreeValue::Rational(r) => r.validate(sig),
        }
    }
}

impl From<FiniteTree> for TreeValue {
    fn from(t: FiniteTree) -> Self {
        TreeValue::Finite(t)
    }
}

impl From<RationalTree> for TreeValue {
    fn from(r: RationalTree) -> Self {
        TreeValue::Rational(r)
    }
}

/// Syntactic tree equality (bisimilarity for state systems).
impl PartialEq for TreeValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TreeValue::Finite(a), TreeValue::Finite(b)) => a == b,
            _ => self.to_rational().bisimilar(&other.to_rational()),
        }
    }
}

impl Eq for TreeValue {}

/// Cutting of a finite tree at depth `n`.
pub fn cut_finite(t: &FiniteTree, n: usize, p: &CutPoint) -> FiniteTree {
    fn go(t: &FiniteTree, n: usize, p: &CutPoint, memo: &mut HashMap<(FiniteTree, usize), FiniteTree>) -> FiniteTree {
        if n == 0 {
            return p.leaf();
        }
        if t.height() < n {
            return t.clone();
        }
        if let Some(r) = memo.get(&(t.clone(), n)) {
            return r.clone();
        }
        let kids = t.children().iter().map(|c| go(c, n - 1, p, memo)).collect();
        let r = FiniteTree::node(t.head().clone(), kids);
        memo.insert((t.clone(), n), r.clone());
        r
    }
    go(t, n, p, &mut HashMap::new())
}

/// Cutting at depth `n`: a finite tree of height at most `n`.
pub fn cut(t: &TreeValue, n: usize, p: &CutPoint) -> FiniteTree {
    match t {
        TreeValue::Finite(f) => cut_finite(f, n, p),
        TreeValue::Rational(r) => r.cut(n, p),
    }
}

/// The order by cutting: `s <= s2` iff they are equal or `s` is a cutting of `s2`.
pub fn leq_cut(s: &TreeValue, s2: &TreeValue, p: &CutPoint) -> bool {
    if s == s2 {
        return true;
    }
    let Some(small) = s.as_finite() else {
        return false;
    };
    // A proper cutting at n has height n, so n = height(s) is the only
    // candidate; n = height + 1 is included for the fully observed case.
    (0..=small.height() + 1).any(|n| cut(s2, n, p) == small)
}
