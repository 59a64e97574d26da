//! Hash-consed finite Σ-trees.
//!
//! Every structurally distinct tree is allocated exactly once in a global
//! table, so equality and hashing are by node identity and shared subtrees
//! cost nothing. Cuttings of deep rational trees are exponentially large as
//! plain trees but stay linear as DAGs here.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, LazyLock};

use dashmap::DashMap;

use crate::error::Result;
use crate::signature::{Head, Signature};

struct Node {
    id: u64,
    head: Head,
    children: Box<[FiniteTree]>,
    height: usize,
}

/// A finite tree over a signature plus variables.
#[derive(Clone)]
pub struct FiniteTree(Arc<Node>);

type Key = (Head, Box<[u64]>);

// Readers only contend on a shard lock; insertion is serialized per shard.
static TABLE: LazyLock<DashMap<Key, FiniteTree>> = LazyLock::new(DashMap::new);
static NEXT_ID: AtomicU64 = AtomicU64::new(0);

impl FiniteTree {
    /// Interns `head(children...)`. Arity is not checked here; see
    /// [`FiniteTree::validate`].
    pub fn node(head: Head, children: Vec<FiniteTree>) -> FiniteTree {
        let key: Key = (head.clone(), children.iter().map(|c| c.0.id).collect());
        TABLE
            .entry(key)
            .or_insert_with(|| {
                let height = children.iter().map(|c| c.height() + 1).max().unwrap_or(0);
                FiniteTree(Arc::new(Node {
                    id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
                    head,
                    children: children.into_boxed_slice(),
                    height,
                }))
            })
            .clone()
    }

    pub fn leaf(head: Head) -> FiniteTree {
        FiniteTree::node(head, Vec::new())
    }

    pub fn var(name: &str) -> FiniteTree {
        FiniteTree::leaf(Head::var(name))
    }

    pub fn op(name: &str, children: Vec<FiniteTree>) -> FiniteTree {
        FiniteTree::node(Head::op(name), children)
    }

    pub fn head(&self) -> &Head {
        &self.0.head
    }

    pub fn children(&self) -> &[FiniteTree] {
        &self.0.children
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.0.height
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    pub(crate) fn id(&self) -> u64 {
        self.0.id
    }

    /// Distinct subtrees, each listed once, children before parents.
    pub fn subtrees(&self) -> Vec<FiniteTree> {
        fn go(t: &FiniteTree, seen: &mut HashMap<u64, ()>, out: &mut Vec<FiniteTree>) {
            if seen.insert(t.id(), ()).is_some() {
                return;
            }
            for c in t.children() {
                go(c, seen, out);
            }
            out.push(t.clone());
        }
        let mut out = Vec::new();
        go(self, &mut HashMap::new(), &mut out);
        out
    }

    /// Number of distinct subtrees (the size of the shared DAG).
    pub fn dag_size(&self) -> usize {
        self.subtrees().len()
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for t in self.subtrees() {
            sig.validate_head(t.head(), t.children().len())?;
        }
        Ok(())
    }

    /// Applies `f` bottom-up, once per distinct subtree.
    pub fn fold<T: Clone>(&self, f: &mut impl FnMut(&FiniteTree, &[T]) -> Result<T>) -> Result<T> {
        fn go<T: Clone>(
            t: &FiniteTree,
            memo: &mut HashMap<u64, T>,
            f: &mut impl FnMut(&FiniteTree, &[T]) -> Result<T>,
        ) -> Result<T> {
            if let Some(v) = memo.get(&t.id()) {
                return Ok(v.clone());
            }
            let kids = t
                .children()
                .iter()
                .map(|c| go(c, memo, f))
                .collect::<Result<Vec<_>>>()?;
            let v = f(t, &kids)?;
            memo.insert(t.id(), v.clone());
            Ok(v)
        }
        go(self, &mut HashMap::new(), f)
    }

    /// Replaces every leaf satisfying `pred` by `with`.
    pub fn replace_leaves(&self, pred: impl Fn(&Head) -> bool, with: &FiniteTree) -> FiniteTree {
        self.fold(&mut |t, kids: &[FiniteTree]| {
            Ok(if t.is_leaf() && pred(t.head()) {
                with.clone()
            } else if t.is_leaf() {
                t.clone()
            } else {
                FiniteTree::node(t.head().clone(), kids.to_vec())
            })
        })
        .expect("infallible")
    }

    /// Distinct subtrees rooted at exactly `depth`.
    pub fn nodes_at_depth(&self, depth: usize) -> Vec<FiniteTree> {
        let mut layer = vec![self.clone()];
        for _ in 0..depth {
            let mut next: Vec<FiniteTree> = layer.iter().flat_map(|t| t.children().iter().cloned()).collect();
            next.sort_by_key(|t| t.id());
            next.dedup();
            layer = next;
        }
        layer
    }
}

impl PartialEq for FiniteTree {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FiniteTree {}

impl Hash for FiniteTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Structural order: height, then head, then children lexicographically.
/// Independent of allocation order, so sorting by it is reproducible.
impl Ord for FiniteTree {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.id == other.0.id {
            return Ordering::Equal;
        }
        self.height()
            .cmp(&other.height())
            .then_with(|| self.head().cmp(other.head()))
            .then_with(|| self.children().len().cmp(&other.children().len()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for FiniteTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Plain prefix syntax, `a(b(x), c)`.
impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.head().name())?;
        if let Some((first, rest)) = self.children().split_first() {
            write!(f, "({first}")?;
            for c in rest {
                write!(f, ", {c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_structural() {
        let a = FiniteTree::op("a", vec![FiniteTree::op("b", vec![FiniteTree::var("x")])]);
        let b = FiniteTree::op("a", vec![FiniteTree::op("b", vec![FiniteTree::var("x")])]);
        assert_eq!(a, b);
        assert_eq!(a.id(), b.id());
        assert_ne!(a, FiniteTree::op("a", vec![FiniteTree::var("x")]));
        assert_ne!(FiniteTree::var("x"), FiniteTree::op("x", vec![]));
    }

    #[test]
    fn height_counts_edges() {
        let x = FiniteTree::var("x");
        assert_eq!(x.height(), 0);
        let t = FiniteTree::op("f", vec![x.clone(), FiniteTree::op("g", vec![x.clone()])]);
        assert_eq!(t.height(), 2);
        assert_eq!(t.to_string(), "f(x, g(x))");
        assert_eq!(t.dag_size(), 3);
    }

    #[test]
    fn structural_order_is_height_first() {
        let x = FiniteTree::var("x");
        let p = FiniteTree::op("p", vec![]);
        let ax = FiniteTree::op("a", vec![x.clone()]);
        assert!(x < p);
        assert!(p < ax);
        let mut v = vec![ax.clone(), p.clone(), x.clone()];
        v.sort();
        assert_eq!(v, vec![x, p, ax]);
    }
}
