//! Rational trees as pointed finite state systems.

use std::collections::{HashMap, VecDeque};

use super::levels::{self, stable_partition, Levels, Normalize, Partition};
use super::{CutPoint, FiniteTree};
use crate::error::{Error, Result};
use crate::signature::{Head, Signature};

/// One state: its node label and successor states in argument order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    pub head: Head,
    pub succ: Vec<usize>,
}

impl State {
    pub fn new(head: Head, succ: Vec<usize>) -> Self {
        State { head, succ }
    }

    pub fn leaf(head: Head) -> Self {
        State { head, succ: Vec::new() }
    }
}

/// A possibly infinite tree with finitely many distinct subtrees.
///
/// States are numbered in breadth-first order from the root (which is state
/// 0) and every state is reachable. Equality is bisimilarity: two systems are
/// equal iff they unfold to the same tree.
#[derive(Clone, Debug)]
pub struct RationalTree {
    states: Vec<State>,
    root: usize,
}

impl RationalTree {
    /// Builds a system, dropping unreachable states and renumbering.
    pub fn new(states: Vec<State>, root: usize) -> Result<Self> {
        if root >= states.len() {
            return Err(Error::Precondition(format!("root {root} out of range")));
        }
        for (i, s) in states.iter().enumerate() {
            if s.head.is_var() && !s.succ.is_empty() {
                return Err(Error::ArityMismatch {
                    op: s.head.name().to_string(),
                    expected: 0,
                    found: s.succ.len(),
                });
            }
            if let Some(&bad) = s.succ.iter().find(|&&j| j >= states.len()) {
                return Err(Error::Precondition(format!("state {i} points to missing state {bad}")));
            }
        }
        Ok(Self::collect(&states, root))
    }

    /// Reachable part of `states` from `root`, numbered breadth-first.
    fn collect(states: &[State], root: usize) -> Self {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![root];
        index.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(s) = queue.pop_front() {
            for &j in &states[s].succ {
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(j) {
                    slot.insert(order.len());
                    order.push(j);
                    queue.push_back(j);
                }
            }
        }
        let states = order
            .iter()
            .map(|&s| State {
                head: states[s].head.clone(),
                succ: states[s].succ.iter().map(|j| index[j]).collect(),
            })
            .collect();
        RationalTree { states, root: 0 }
    }

    pub fn leaf(head: Head) -> Self {
        RationalTree {
            states: vec![State::leaf(head)],
            root: 0,
        }
    }

    /// The same tree, one state per distinct subtree.
    pub fn from_finite(t: &FiniteTree) -> Self {
        let subs = t.subtrees();
        let index: HashMap<&FiniteTree, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let states: Vec<State> = subs
            .iter()
            .map(|s| State {
                head: s.head().clone(),
                succ: s.children().iter().map(|c| index[c]).collect(),
            })
            .collect();
        Self::collect(&states, subs.len() - 1)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &State {
        &self.states[i]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn root_head(&self) -> &Head {
        &self.states[self.root].head
    }

    /// The same system pointed at another state.
    pub fn rerooted(&self, state: usize) -> Self {
        Self::collect(&self.states, state)
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for s in &self.states {
            sig.validate_head(&s.head, s.succ.len())?;
        }
        Ok(())
    }

    /// States lying on a cycle or leading into one; exactly the states whose
    /// unfolding is infinite.
    pub fn infinite_states(&self) -> Vec<bool> {
        // A state is finite iff all its successors are; iterate to fixpoint.
        let mut finite = vec![false; self.states.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (i, s) in self.states.iter().enumerate() {
                if !finite[i] && s.succ.iter().all(|&j| finite[j]) {
                    finite[i] = true;
                    changed = true;
                }
            }
        }
        finite.into_iter().map(|f| !f).collect()
    }

    /// True iff no cycle is reachable from the root.
    pub fn is_finite(&self) -> bool {
        !self.infinite_states()[self.root]
    }

    /// Height of the presented tree, `None` when infinite.
    pub fn height(&self) -> Option<usize> {
        self.to_finite().ok().map(|t| t.height())
    }

    pub fn to_finite(&self) -> Result<FiniteTree> {
        if !self.is_finite() {
            return Err(Error::InfiniteTree);
        }
        fn go(sys: &RationalTree, s: usize, memo: &mut HashMap<usize, FiniteTree>) -> FiniteTree {
            if let Some(t) = memo.get(&s) {
                return t.clone();
            }
            let st = &sys.states[s];
            let kids = st.succ.iter().map(|&j| go(sys, j, memo)).collect();
            let t = FiniteTree::node(st.head.clone(), kids);
            memo.insert(s, t.clone());
            t
        }
        Ok(go(self, self.root, &mut HashMap::new()))
    }

    /// The cutting at depth `n` with frontier `p`.
    pub fn cut(&self, n: usize, p: &CutPoint) -> FiniteTree {
        self.cut_with(n, p.leaf(), &levels::identity)
            .expect("identity normalization cannot fail")
    }

    pub(crate) fn cut_with(&self, n: usize, bottom: FiniteTree, norm: Normalize<'_>) -> Result<FiniteTree> {
        let mut lv = Levels::new(&self.states, bottom, norm);
        lv.advance_to(n)?;
        Ok(lv.trees()[self.root].clone())
    }

    /// Disjoint union of two systems; the second system's states are shifted
    /// by the returned offset.
    pub fn union(&self, other: &RationalTree) -> (Vec<State>, usize) {
        let offset = self.states.len();
        let mut states = self.states.clone();
        states.extend(other.states.iter().map(|s| State {
            head: s.head.clone(),
            succ: s.succ.iter().map(|j| j + offset).collect(),
        }));
        (states, offset)
    }

    /// Same unfolding, decided by partition refinement on the disjoint union.
    pub fn bisimilar(&self, other: &RationalTree) -> bool {
        let (states, offset) = self.union(other);
        let (part, _) = stable_partition(&states, levels::neutral_bottom(), &levels::identity)
            .expect("identity normalization cannot fail");
        part.block_of[self.root] == part.block_of[other.root + offset]
    }

    /// The minimal system presenting the same tree.
    pub fn minimized(&self) -> Self {
        let (part, _) = stable_partition(&self.states, levels::neutral_bottom(), &levels::identity)
            .expect("identity normalization cannot fail");
        Self::quotient(&self.states, &part, self.root, |s| s.clone())
    }

    /// Collapses each block to one state, relabelled by `label` applied to a
    /// representative whose successors are already block ids.
    pub(crate) fn quotient(
        states: &[State],
        part: &Partition,
        root: usize,
        mut label: impl FnMut(&State) -> State,
    ) -> Self {
        let blocks: Vec<State> = part
            .representatives()
            .into_iter()
            .map(|s| {
                let st = &states[s];
                label(&State {
                    head: st.head.clone(),
                    succ: st.succ.iter().map(|&j| part.block_of[j]).collect(),
                })
            })
            .collect();
        Self::collect(&blocks, part.block_of[root])
    }
}

impl PartialEq for RationalTree {
    fn eq(&self, other: &Self) -> bool {
        self.bisimilar(other)
    }
}

impl Eq for RationalTree {}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_a() -> RationalTree {
        RationalTree::new(vec![State::new(Head::op("a"), vec![0])], 0).unwrap()
    }

    #[test]
    fn acyclic_unfolds() {
        let x = RationalTree::leaf(Head::var("x"));
        assert_eq!(x.to_finite().unwrap(), FiniteTree::var("x"));
        let r = RationalTree::new(
            vec![
                State::new(Head::op("a"), vec![1]),
                State::new(Head::op("b"), vec![2]),
                State::leaf(Head::var("x")),
            ],
            0,
        )
        .unwrap();
        assert_eq!(r.to_finite().unwrap().to_string(), "a(b(x))");
        assert_eq!(loop_a().to_finite().unwrap_err(), Error::InfiniteTree);
    }

    #[test]
    fn unreachable_states_are_dropped() {
        let r = RationalTree::new(
            vec![State::leaf(Head::var("junk")), State::new(Head::op("a"), vec![1])],
            1,
        )
        .unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.root(), 0);
    }

    #[test]
    fn bisimilarity_ignores_unrolling() {
        let two = RationalTree::new(
            vec![State::new(Head::op("a"), vec![1]), State::new(Head::op("a"), vec![0])],
            0,
        )
        .unwrap();
        assert_eq!(two, loop_a());
        assert_eq!(two.minimized().len(), 1);
        let ab = RationalTree::new(
            vec![State::new(Head::op("a"), vec![1]), State::new(Head::op("b"), vec![0])],
            0,
        )
        .unwrap();
        assert_ne!(ab, loop_a());
        assert_ne!(ab, ab.rerooted(1));
    }

    #[test]
    fn cut_of_loop_unfolds() {
        let p = CutPoint::var("p");
        assert_eq!(loop_a().cut(3, &p).to_string(), "a(a(a(p)))");
        assert_eq!(loop_a().cut(0, &p).to_string(), "p");
    }

    #[test]
    fn from_finite_shares_subtrees() {
        let x = FiniteTree::var("x");
        let t = FiniteTree::op("f", vec![x.clone(), x.clone()]);
        let r = RationalTree::from_finite(&t);
        assert_eq!(r.len(), 2);
        assert_eq!(r.to_finite().unwrap(), t);
    }

    #[test]
    fn var_states_cannot_have_successors() {
        let err = RationalTree::new(vec![State::new(Head::var("x"), vec![0])], 0).unwrap_err();
        assert_eq!(err.name(), "ArityMismatch");
    }
}
