//! Named property suites over the built-in presentations.
//!
//! Every case draws from its own generator stream, so a run is determined by
//! its seed and case count regardless of execution mode.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::chains::{enumerate_initial_stage_with, enumerate_terminal_stage_with, StageConfig};
use crate::error::{Error, Result};
use crate::gen::{case_rng, random_coalgebra, random_equations, random_system, random_tree, Shape};
use crate::order::{least_element, leq_quotient, OrderedElement};
use crate::par::{self, Execution};
use crate::presentation::{builtin, parse_builtin, Presentation};
use crate::solver::{approx_homomorphism, solve, verify_approx_chain, verify_solution, SolutionKind, SolutionMap};
use crate::trees::{cut, cut_finite, CutPoint, FiniteTree, TreeValue};

pub const SUITES: [&str; 7] = [
    "approx-chain",
    "cut-quotient",
    "order-axioms",
    "am23",
    "stages",
    "uniqueness",
    "minimization",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            cases: 100,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub suite: String,
    pub pres: String,
    pub check: String,
    pub passed: usize,
    pub total: usize,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub rows: Vec<Row>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(Row::ok)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |get: fn(&Row) -> &str, title: &str| {
            self.rows
                .iter()
                .map(|r| get(r).len())
                .max()
                .unwrap_or(0)
                .max(title.len())
        };
        let (ws, wp, wc) = (
            w(|r| &r.suite, "suite"),
            w(|r| &r.pres, "presentation"),
            w(|r| &r.check, "check"),
        );
        writeln!(
            f,
            "{:ws$}  {:wp$}  {:wc$}  {:>11}  result",
            "suite", "presentation", "check", "passed"
        )?;
        for r in &self.rows {
            let count = format!("{}/{}", r.passed, r.total);
            let mark = if r.ok() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "{:ws$}  {:wp$}  {:wc$}  {count:>11}  {mark}",
                r.suite, r.pres, r.check
            )?;
        }
        Ok(())
    }
}

/// The built-in presentations with the cut point each suite uses.
pub fn builtin_presentations() -> Vec<(Presentation, CutPoint)> {
    [
        ("id", CutPoint::var("p")),
        ("product(a,b)", CutPoint::var("x")),
        ("list", CutPoint::nullary("tup0")),
        ("pf", CutPoint::nullary("set0")),
        ("pk(2)", CutPoint::nullary("set0")),
        ("automata(2)", CutPoint::var("p")),
        ("am23", CutPoint::var("p")),
    ]
    .into_iter()
    .map(|(spec, p)| (parse_builtin(spec).expect("built-in"), p))
    .collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let rows = match name {
        "approx-chain" => approx_chain_suite(cfg),
        "cut-quotient" => cut_quotient_suite(cfg),
        "order-axioms" => order_suite(cfg),
        "am23" => am23_suite(cfg),
        "stages" => stages_suite(cfg),
        "uniqueness" => uniqueness_suite(cfg),
        "minimization" => minimization_suite(cfg),
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite `{other}` (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        rows: rows
            .into_iter()
            .map(|(pres, check, passed, total)| Row {
                suite: name.to_string(),
                pres,
                check: check.to_string(),
                passed,
                total,
            })
            .collect(),
    })
}

type RawRow = (String, &'static str, usize, usize);

/// Runs `case` for every index and tallies each named check. Errors count
/// as failures of every check of that case.
fn tally<const N: usize>(
    cfg: &SuiteConfig,
    salt: u64,
    pres: &str,
    checks: [&'static str; N],
    case: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Result<[bool; N]> + Sync + Send,
) -> Vec<RawRow> {
    let results = par::map_range(cfg.exec, cfg.cases, |i| {
        let mut rng = case_rng(cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15), i as u64);
        case(&mut rng).unwrap_or([false; N])
    });
    checks
        .iter()
        .enumerate()
        .map(|(k, c)| {
            (
                pres.to_string(),
                *c,
                results.iter().filter(|r| r[k]).count(),
                results.len(),
            )
        })
        .collect()
}

fn approx_chain_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let shape = Shape::default();
    let mut rows = Vec::new();
    for (salt, (pres, p)) in builtin_presentations().into_iter().enumerate() {
        rows.extend(tally(
            cfg,
            salt as u64,
            pres.name(),
            ["chain", "cut-law", "join", "hom"],
            |rng| {
                let e = random_equations(rng, &pres, &shape, 4)?;
                let report = verify_approx_chain(&e, 8, &p)?;
                let c = random_coalgebra(rng, &pres, &shape, 4);
                let n = rng.gen_range(0..=8);
                let h = approx_homomorphism(&c, n, &p)?;
                let exact = solve(&c.as_equations()?)?;
                let mut hom = true;
                for (x, v) in h.values.iter().enumerate() {
                    let expected = pres.normal_form(&cut(&exact.values[x], n, &p))?;
                    hom &= v.as_finite() == Some(expected);
                }
                Ok([report.chain, report.cut_law, report.join, hom])
            },
        ));
    }
    rows
}

fn cut_quotient_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let shape = Shape::default();
    let mut rows = Vec::new();
    for (salt, (pres, p)) in builtin_presentations().into_iter().enumerate() {
        rows.extend(tally(cfg, 100 + salt as u64, pres.name(), ["commutes"], |rng| {
            let r = random_system(rng, &pres, &shape, 5);
            let n = rng.gen_range(0..8);
            let nf = pres.normal_system(&r)?;
            let lhs = pres.normal_form(&r.cut(n, &p))?;
            let rhs = pres.normal_form(&nf.cut(n, &p))?;
            Ok([lhs == rhs])
        }));
    }
    rows
}

fn order_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let shape = Shape::default();
    let mut rows = Vec::new();
    for (salt, (pres, p)) in builtin_presentations().into_iter().enumerate() {
        let checks = [
            "reflexive",
            "antisymmetric",
            "transitive",
            "least",
            "infinite-maximal",
            "monotone",
        ];
        rows.extend(tally(cfg, 200 + salt as u64, pres.name(), checks, |rng| {
            let el = |t: FiniteTree| OrderedElement::new(&pres, t, &p);
            let base = random_tree(rng, &pres, &shape, 4);
            let (i, j) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let a = el(base.clone())?;
            let b = el(cut_finite(&base, i, &p))?;
            let c = el(cut_finite(&base, j, &p))?;
            let d = el(random_tree(rng, &pres, &shape, 3))?;
            let reflexive = leq_quotient(&a, &a)?;
            let mut antisymmetric = true;
            let mut transitive = true;
            let all = [&a, &b, &c, &d];
            for x in all {
                for y in all {
                    let (xy, yx) = (leq_quotient(x, y)?, leq_quotient(y, x)?);
                    if xy && yx && x.tree() != y.tree() {
                        antisymmetric = false;
                    }
                    for z in all {
                        if xy && leq_quotient(y, z)? && !leq_quotient(x, z)? {
                            transitive = false;
                        }
                    }
                }
            }
            let bot = least_element(&pres, &p)?;
            let least = all.iter().all(|x| leq_quotient(&bot, x).unwrap_or(false));
            let r1 = OrderedElement::new(&pres, random_system(rng, &pres, &shape, 4), &p)?;
            let r2 = OrderedElement::new(&pres, random_system(rng, &pres, &shape, 4), &p)?;
            let infinite_maximal = [(&r1, &r2), (&r2, &r1), (&r1, &a)]
                .iter()
                .all(|(x, y)| x.is_finite() || !leq_quotient(x, y).unwrap_or(true) || x.tree() == y.tree());
            let raw: TreeValue = random_system(rng, &pres, &shape, 4).into();
            let n = rng.gen_range(0..6);
            let monotone = crate::order::quotient_is_monotone_on(&pres, &cut(&raw, n, &p).into(), &raw, &p)?;
            Ok([reflexive, antisymmetric, transitive, least, infinite_maximal, monotone])
        }));
    }
    rows
}

fn am23_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let pres = builtin("am23", &[]).expect("built-in");
    let shape = Shape {
        max_arity: 2,
        leaves: vec!["x".into(), "y".into()],
    };
    tally(cfg, 300, pres.name(), ["merged", "separated"], |rng| {
        let left = random_tree(rng, &pres, &shape, 3);
        let right = loop {
            let t = random_tree(rng, &pres, &shape, 3);
            if pres.normal_form(&t)? != pres.normal_form(&left)? {
                break t;
            }
        };
        let i = rng.gen_range(1..=3);
        let j = (i % 3) + 1;
        let node =
            |k: usize, a: &FiniteTree, b: &FiniteTree| FiniteTree::op(&format!("s{k}"), vec![a.clone(), b.clone()]);
        // The same subtree written twice, once normalized: `~`-equal children.
        let twin = pres.normal_form(&left)?;
        let merged = pres
            .equiv_finite(&node(i, &left, &twin), &node(j, &twin, &left))?
            .holds();
        let separated = !pres
            .equiv_finite(&node(i, &left, &right), &node(j, &left, &right))?
            .holds();
        Ok([merged, separated])
    })
}

fn stages_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let stage_cfg = StageConfig {
        exec: cfg.exec,
        ..StageConfig::default()
    };
    let mut rows = Vec::new();
    for (pres, p) in builtin_presentations() {
        if pres.is_list() {
            continue;
        }
        let mut check = |name: &'static str, f: &dyn Fn() -> Result<bool>| {
            rows.push((pres.name().to_string(), name, usize::from(f().unwrap_or(false)), 1));
        };
        check("projection", &|| {
            let stages = (0..=3)
                .map(|n| enumerate_terminal_stage_with(&pres, n, &p, &stage_cfg))
                .collect::<Result<Vec<_>>>()?;
            for n in 0..stages.len() {
                for m in 0..=n {
                    let projected = stages[n]
                        .elements
                        .iter()
                        .map(|t| pres.normal_form(&cut_finite(t, m, &p)))
                        .collect::<Result<BTreeSet<_>>>()?;
                    if projected != stages[m].elements.iter().cloned().collect() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        });
        check("inclusion", &|| {
            let mut prev = BTreeSet::new();
            for n in 0..=3 {
                let s: BTreeSet<FiniteTree> = enumerate_initial_stage_with(&pres, n, &stage_cfg)?
                    .elements
                    .into_iter()
                    .collect();
                if !prev.is_subset(&s) {
                    return Ok(false);
                }
                prev = s;
            }
            Ok(true)
        });
    }
    let pf = builtin("pf", &[]).expect("built-in");
    let p = CutPoint::nullary("set0");
    let initial: Vec<usize> = (1..=5)
        .map(|n| enumerate_initial_stage_with(&pf, n, &stage_cfg).map_or(0, |s| s.len()))
        .collect();
    rows.push((
        "pf".into(),
        "initial-sizes",
        usize::from(initial == [1, 2, 4, 16, 65536]),
        1,
    ));
    let terminal: Vec<usize> = (0..=3)
        .map(|n| enumerate_terminal_stage_with(&pf, n, &p, &stage_cfg).map_or(0, |s| s.len()))
        .collect();
    rows.push(("pf".into(), "terminal-sizes", usize::from(terminal == [1, 2, 4, 16]), 1));
    rows
}

fn uniqueness_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let shape = Shape::default();
    let mut rows = Vec::new();
    for (salt, (pres, _)) in builtin_presentations().into_iter().enumerate() {
        rows.extend(tally(
            cfg,
            400 + salt as u64,
            pres.name(),
            ["verified", "unique"],
            |rng| {
                let e = random_equations(rng, &pres, &shape, 5)?;
                let sol = solve(&e)?;
                // A second solution read off the raw state graph, unnormalized.
                let graph = e.state_graph();
                let raw = SolutionMap {
                    vars: e.vars().to_vec(),
                    values: (0..e.len())
                        .map(|i| crate::trees::RationalTree::new(graph.clone(), i).map(TreeValue::from))
                        .collect::<Result<Vec<_>>>()?,
                    kind: SolutionKind::Exact,
                };
                let verified = verify_solution(&e, &sol, 10)? && verify_solution(&e, &raw, 10)?;
                let mut unique = true;
                for (a, b) in sol.values.iter().zip(&raw.values) {
                    unique &= pres.equiv_star(a, b, Some(10))?.holds();
                }
                Ok([verified, unique])
            },
        ));
    }
    rows
}

fn minimization_suite(cfg: &SuiteConfig) -> Vec<RawRow> {
    let shape = Shape {
        max_arity: 4,
        leaves: vec![],
    };
    let mut rows = Vec::new();
    for (salt, (pres, p)) in builtin_presentations().into_iter().enumerate() {
        let checks = ["idempotent", "section", "bounded-agrees"];
        rows.extend(tally(cfg, 500 + salt as u64, pres.name(), checks, |rng| {
            let r = random_system(rng, &pres, &shape, 6);
            let r2 = random_system(rng, &pres, &shape, 6);
            let nf = pres.normal_system(&r)?;
            let again = pres.normal_system(&nf)?;
            let idempotent = again.len() == nf.len() && again.states() == nf.states();
            let section = pres.normal_system(&again)?.states() == nf.states();
            let exact = pres.equiv_star(&r.clone().into(), &r2.clone().into(), None)?.holds();
            let mut bounded = true;
            for n in 0..=10 {
                bounded &= pres.normal_form(&r.cut(n, &p))? == pres.normal_form(&r2.cut(n, &p))?;
            }
            Ok([idempotent, section, exact == bounded])
        }));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        for name in SUITES {
            let cfg = SuiteConfig {
                cases: 6,
                seed: 11,
                exec: Execution::Parallel,
            };
            let a = run_suite(name, &cfg).unwrap();
            assert!(a.passed(), "{name}\n{a}");
            let b = run_suite(
                name,
                &SuiteConfig {
                    exec: Execution::Sequential,
                    ..cfg
                },
            )
            .unwrap();
            assert_eq!(a, b);
        }
        assert!(run_suite("nope", &SuiteConfig::default()).is_err());
    }
}
