//! Level-by-level cuttings of every state of a state system.
//!
//! Level `k` holds, for each state, the (normalized) cutting at depth `k` of
//! the tree that state presents. Level `k + 1` is one normalized functor
//! layer over level `k`, so computing `n` levels costs `n` passes over the
//! transition table. Grouping states by their level-`k` tree is exactly
//! Moore-style partition refinement: the partition only gets finer, and once
//! two consecutive levels induce the same number of blocks it is stable.

use std::collections::HashMap;

use super::{FiniteTree, State};
use crate::error::Result;
use crate::signature::FlatTerm;

pub(crate) type Normalize<'a> = &'a (dyn Fn(FlatTerm<FiniteTree>) -> Result<FlatTerm<FiniteTree>> + Sync);

pub(crate) fn identity(t: FlatTerm<FiniteTree>) -> Result<FlatTerm<FiniteTree>> {
    Ok(t)
}

pub(crate) struct Levels<'a> {
    states: &'a [State],
    norm: Normalize<'a>,
    current: Vec<FiniteTree>,
    depth: usize,
}

impl<'a> Levels<'a> {
    pub(crate) fn new(states: &'a [State], bottom: FiniteTree, norm: Normalize<'a>) -> Self {
        Levels {
            states,
            norm,
            current: vec![bottom; states.len()],
            depth: 0,
        }
    }

    pub(crate) fn step(&mut self) -> Result<()> {
        let next = self
            .states
            .iter()
            .map(|s| {
                if s.head.is_var() {
                    return Ok(FiniteTree::leaf(s.head.clone()));
                }
                let flat = FlatTerm::new(
                    s.head.clone(),
                    s.succ.iter().map(|&j| self.current[j].clone()).collect(),
                );
                let flat = (self.norm)(flat)?;
                Ok(FiniteTree::node(flat.head, flat.args))
            })
            .collect::<Result<Vec<_>>>()?;
        self.current = next;
        self.depth += 1;
        Ok(())
    }

    pub(crate) fn advance_to(&mut self, depth: usize) -> Result<()> {
        while self.depth < depth {
            self.step()?;
        }
        Ok(())
    }

    pub(crate) fn trees(&self) -> &[FiniteTree] {
        &self.current
    }
}

/// A partition of states into blocks numbered by first occurrence.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub block_of: Vec<usize>,
    pub count: usize,
}

impl Partition {
    fn of(trees: &[FiniteTree]) -> Partition {
        let mut ids: HashMap<&FiniteTree, usize> = HashMap::new();
        let block_of = trees
            .iter()
            .map(|t| {
                let next = ids.len();
                *ids.entry(t).or_insert(next)
            })
            .collect();
        Partition {
            block_of,
            count: ids.len(),
        }
    }

    /// One representative state per block, in block order.
    pub(crate) fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.count];
        for (s, &b) in self.block_of.iter().enumerate() {
            if reps[b] == usize::MAX {
                reps[b] = s;
            }
        }
        reps
    }
}

/// Refines until stable. Returns the partition and the levels positioned at
/// the first depth where it stopped changing.
pub(crate) fn stable_partition<'a>(
    states: &'a [State],
    bottom: FiniteTree,
    norm: Normalize<'a>,
) -> Result<(Partition, Levels<'a>)> {
    let mut levels = Levels::new(states, bottom, norm);
    let mut prev = usize::from(!states.is_empty());
    loop {
        levels.step()?;
        let part = Partition::of(levels.trees());
        if part.count == prev {
            return Ok((part, levels));
        }
        prev = part.count;
    }
}

/// A leaf label no parser can produce; used where the choice of the bottom
/// element must not leak into results.
pub(crate) fn neutral_bottom() -> FiniteTree {
    FiniteTree::var("?")
}
