//! Seeded random trees, systems and equation systems for property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::presentation::Presentation;
use crate::signature::{FlatTerm, Head};
use crate::solver::{CoalgebraSystem, RecEquationSystem, Rhs};
use crate::trees::{FiniteTree, RationalTree, State};

/// The generator for case `case` of a run seeded with `seed`. Cases are
/// independent, so they can be generated in any order.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

/// Shape limits for generated values.
#[derive(Clone, Debug)]
pub struct Shape {
    pub max_arity: usize,
    /// Variables that may appear as leaves.
    pub leaves: Vec<String>,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_arity: 3,
            leaves: vec!["y".into()],
        }
    }
}

/// Operations usable under `shape`, including schematic ones up to the
/// arity bound (and the capacity, for bounded sets).
pub fn operations(pres: &Presentation, shape: &Shape) -> Vec<(Head, usize)> {
    let sig = pres.signature();
    let mut ops: Vec<(Head, usize)> = sig.explicit_ops().map(|(n, a)| (Head::op(n), a)).collect();
    let max = match pres.set_cap() {
        Some(Some(cap)) => shape.max_arity.min(cap),
        _ => shape.max_arity,
    };
    for a in 0..=max {
        if let Some(name) = sig.schematic_op(a) {
            ops.push((Head::op(&name), a));
        }
    }
    ops
}

fn leaves(pres: &Presentation, shape: &Shape) -> Vec<Head> {
    let mut out: Vec<Head> = operations(pres, shape)
        .into_iter()
        .filter(|(_, a)| *a == 0)
        .map(|(h, _)| h)
        .collect();
    out.extend(shape.leaves.iter().map(|v| Head::var(v)));
    out
}

/// A random finite tree of height at most `height`.
pub fn random_tree(rng: &mut impl Rng, pres: &Presentation, shape: &Shape, height: usize) -> FiniteTree {
    let inner: Vec<(Head, usize)> = operations(pres, shape).into_iter().filter(|(_, a)| *a > 0).collect();
    let leaves = leaves(pres, shape);
    fn go(rng: &mut impl Rng, inner: &[(Head, usize)], leaves: &[Head], height: usize) -> FiniteTree {
        if height == 0 || inner.is_empty() || (!leaves.is_empty() && rng.gen_bool(0.25)) {
            let head = leaves.choose(rng).cloned().unwrap_or_else(|| Head::var("y"));
            return FiniteTree::leaf(head);
        }
        let (head, arity) = inner.choose(rng).cloned().expect("nonempty");
        let kids = (0..arity).map(|_| go(rng, inner, leaves, height - 1)).collect();
        FiniteTree::node(head, kids)
    }
    go(rng, &inner, &leaves, height)
}

/// A random reachable state system with between one and `max_states` states.
pub fn random_system(rng: &mut impl Rng, pres: &Presentation, shape: &Shape, max_states: usize) -> RationalTree {
    let n = rng.gen_range(1..=max_states.max(1));
    let states = random_states(rng, pres, shape, n, 0.15);
    RationalTree::new(states, 0).expect("generated states are well formed")
}

fn random_states(rng: &mut impl Rng, pres: &Presentation, shape: &Shape, n: usize, leaf_bias: f64) -> Vec<State> {
    let ops = operations(pres, shape);
    let inner: Vec<&(Head, usize)> = ops.iter().filter(|(_, a)| *a > 0).collect();
    let leaves = leaves(pres, shape);
    (0..n)
        .map(|_| {
            if inner.is_empty() || (!leaves.is_empty() && rng.gen_bool(leaf_bias)) {
                State::leaf(leaves.choose(rng).cloned().unwrap_or_else(|| Head::var("y")))
            } else {
                let (head, arity) = (*inner.choose(rng).expect("nonempty")).clone();
                State::new(head, (0..arity).map(|_| rng.gen_range(0..n)).collect())
            }
        })
        .collect()
}

/// A guarded system whose variables plus parameter states number at most
/// `budget`. Parameters are random systems over the shape's leaf variables.
pub fn random_equations(
    rng: &mut impl Rng,
    pres: &Presentation,
    shape: &Shape,
    budget: usize,
) -> Result<RecEquationSystem> {
    let budget = budget.max(1);
    let nvars = rng.gen_range(1..=budget);
    let mut spare = budget - nvars;
    let ops = operations(pres, shape);
    let mut eqs = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let name = format!("x{i}");
        let use_param = rng.gen_bool(0.2) || ops.is_empty();
        let rhs = if use_param {
            let size = rng.gen_range(0..=spare);
            spare -= size;
            let param = if size == 0 {
                FiniteTree::leaf(
                    leaves(pres, shape)
                        .choose(rng)
                        .cloned()
                        .unwrap_or_else(|| Head::var("y")),
                )
                .into()
            } else {
                random_system(rng, pres, shape, size).into()
            };
            Rhs::Param(param)
        } else {
            let (head, arity) = ops.choose(rng).cloned().expect("nonempty");
            Rhs::Flat(FlatTerm::new(
                head,
                (0..arity).map(|_| rng.gen_range(0..nvars)).collect(),
            ))
        };
        eqs.push((name, rhs));
    }
    RecEquationSystem::new(pres, eqs)
}

/// A random coalgebra with every state an operation layer.
pub fn random_coalgebra(rng: &mut impl Rng, pres: &Presentation, shape: &Shape, max_states: usize) -> CoalgebraSystem {
    let n = rng.gen_range(1..=max_states.max(1));
    let ops = operations(pres, shape);
    let states = (0..n)
        .map(|i| {
            let (head, arity) = ops.choose(rng).cloned().expect("presentation has operations");
            (
                format!("q{i}"),
                FlatTerm::new(head, (0..arity).map(|_| rng.gen_range(0..n)).collect()),
            )
        })
        .collect();
    CoalgebraSystem {
        pres: pres.clone(),
        states,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin;

    #[test]
    fn generation_is_reproducible() {
        let pf = builtin("pf", &[]).unwrap();
        let shape = Shape::default();
        let a = random_tree(&mut case_rng(7, 3), &pf, &shape, 4);
        let b = random_tree(&mut case_rng(7, 3), &pf, &shape, 4);
        assert_eq!(a, b);
        assert!(a.height() <= 4);
        assert!(a.validate(pf.signature()).is_ok());
    }

    #[test]
    fn capacities_are_respected() {
        let pk = builtin("pk", &["2"]).unwrap();
        let shape = Shape {
            max_arity: 4,
            leaves: vec![],
        };
        assert!(operations(&pk, &shape).iter().all(|(_, a)| *a <= 2));
        for case in 0..50 {
            let r = random_system(&mut case_rng(1, case), &pk, &shape, 5);
            assert!(pk.normal_system(&r).is_ok());
        }
    }

    #[test]
    fn equation_budget() {
        let pres = builtin("product", &["a", "b"]).unwrap();
        for case in 0..50 {
            let e = random_equations(&mut case_rng(2, case), &pres, &Shape::default(), 4).unwrap();
            let sol = crate::solver::solve(&e).unwrap();
            assert!(sol.values.iter().all(|v| v.to_rational().len() <= 4));
        }
    }
}
