//! Joins of increasing chains of cuttings.
//!
//! A finite chain is read as the first few observations of an infinite one.
//! Its top element is folded into a state system: every observed position
//! is sent to the shallowest earlier position whose subtree, cut to the depth
//! still observable at the later position, looks the same. The result always
//! reproduces every supplied element; it is the true limit whenever the
//! chain was generated by a rational tree whose minimal system has `m`
//! states and the chain reaches depth `2m - 1`.

use std::collections::{HashMap, VecDeque};

use super::{cut_finite, leq_cut, CutPoint, FiniteTree, RationalTree, State};
use crate::error::{Error, Result};

/// How the chain is given.
#[derive(Clone, Copy, Debug)]
pub enum ChainSpec<'a> {
    /// `t0 <= t1 <= ... <= tk`, finite trees.
    Explicit(&'a [FiniteTree]),
    /// The cuttings of `tree`, checked at depths `0..=levels`.
    Generator { tree: &'a RationalTree, levels: usize },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct JoinConfig {
    /// Largest accepted state count. Defaults to the number of distinct
    /// subtrees of the top element.
    pub period_bound: Option<usize>,
}

pub fn join_chain(chain: ChainSpec<'_>, p: &CutPoint, cfg: &JoinConfig) -> Result<RationalTree> {
    match chain {
        ChainSpec::Generator { tree, levels } => {
            for n in 0..levels {
                let (lo, hi) = (tree.cut(n, p), tree.cut(n + 1, p));
                if !leq_cut(&lo.into(), &hi.into(), p) {
                    return Err(Error::NotAChain(n));
                }
            }
            Ok(tree.clone())
        }
        ChainSpec::Explicit(items) => {
            let Some(top) = items.last() else {
                return Err(Error::Precondition("empty chain".into()));
            };
            for (i, w) in items.windows(2).enumerate() {
                if !leq_cut(&w[0].clone().into(), &w[1].clone().into(), p) {
                    return Err(Error::NotAChain(i));
                }
            }
            if items.len() == 1 || items[items.len() - 2] == *top {
                return Ok(RationalTree::from_finite(top));
            }
            let bound = cfg.period_bound.unwrap_or_else(|| top.dag_size());
            let sys = periodic_closure(top, p, &|t| Ok(t.clone()))?.minimized();
            if sys.len() > bound {
                return Err(Error::NotRational {
                    bound,
                    needed: sys.len(),
                });
            }
            Ok(sys)
        }
    }
}

/// Folds `top` into a state system whose cutting at the observed depth is
/// `canon`-equivalent to `top`. `canon` must map `top`'s subtrees to
/// themselves and commute with cutting up to equivalence.
pub(crate) fn periodic_closure(
    top: &FiniteTree,
    p: &CutPoint,
    canon: &dyn Fn(&FiniteTree) -> Result<FiniteTree>,
) -> Result<RationalTree> {
    let bottom = p.leaf();
    let mut observed = top.height();
    if top.nodes_at_depth(observed).iter().any(|t| *t != bottom) {
        // Nothing was cut away: the top is its own limit.
        observed += 1;
    }
    if observed == 0 {
        return Ok(RationalTree::from_finite(top));
    }

    let mut reps: Vec<(FiniteTree, usize)> = vec![(top.clone(), 0)];
    let mut states = vec![State::new(top.head().clone(), vec![usize::MAX; top.children().len()])];
    let mut queue: VecDeque<(FiniteTree, usize, usize, usize)> = top
        .children()
        .iter()
        .enumerate()
        .map(|(slot, c)| (c.clone(), 1, 0, slot))
        .collect();
    let mut targets: HashMap<(FiniteTree, usize), usize> = HashMap::new();
    let mut cuts: HashMap<(usize, usize), FiniteTree> = HashMap::new();

    while let Some((sub, depth, parent, slot)) = queue.pop_front() {
        let target = match targets.get(&(sub.clone(), depth)) {
            Some(&t) => t,
            None => {
                let seen = canon(&sub)?;
                let remaining = observed - depth;
                let mut found = None;
                for (i, (w, dw)) in reps.iter().enumerate() {
                    if *dw > depth {
                        break;
                    }
                    let view = match cuts.get(&(i, remaining)) {
                        Some(v) => v.clone(),
                        None => {
                            let v = canon(&cut_finite(w, remaining, p))?;
                            cuts.insert((i, remaining), v.clone());
                            v
                        }
                    };
                    if view == seen {
                        found = Some(i);
                        break;
                    }
                }
                let t = found.unwrap_or_else(|| {
                    let i = reps.len();
                    reps.push((sub.clone(), depth));
                    states.push(State::new(sub.head().clone(), vec![usize::MAX; sub.children().len()]));
                    for (k, c) in sub.children().iter().enumerate() {
                        queue.push_back((c.clone(), depth + 1, i, k));
                    }
                    i
                });
                targets.insert((sub, depth), t);
                t
            }
        };
        states[parent].succ[slot] = target;
    }
    RationalTree::new(states, 0)
}
