//! Guarded recursive equation systems: exact rational solutions, the chain
//! of approximate solutions in the free algebra and its verification.

use std::fmt;

use crate::error::{Error, Result};
use crate::order::{join_quotient, leq_quotient, OrderedElement};
use crate::presentation::Presentation;
use crate::signature::FlatTerm;
use crate::trees::{cut, CutPoint, FiniteTree, RationalTree, State, TreeValue};

/// Right-hand side of one equation.
#[derive(Clone, Debug)]
pub enum Rhs {
    /// One operation applied to recursion variables (by index).
    Flat(FlatTerm<usize>),
    /// A parameter: a rational tree over parameter variables.
    Param(TreeValue),
}

#[derive(Clone, Debug)]
pub struct RecEquationSystem {
    pres: Presentation,
    vars: Vec<String>,
    rhs: Vec<Rhs>,
    /// Auxiliary variables introduced by flattening; hidden from output.
    aux: Vec<bool>,
}

impl RecEquationSystem {
    pub fn new(pres: &Presentation, equations: Vec<(String, Rhs)>) -> Result<Self> {
        let aux = vec![false; equations.len()];
        Self::with_aux(pres, equations, aux)
    }

    pub(crate) fn with_aux(pres: &Presentation, equations: Vec<(String, Rhs)>, aux: Vec<bool>) -> Result<Self> {
        let n = equations.len();
        let mut vars = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (name, r) in equations {
            if vars.contains(&name) {
                return Err(Error::Precondition(format!("variable `{name}` defined twice")));
            }
            match &r {
                Rhs::Flat(f) => {
                    if f.head.is_var() {
                        return Err(Error::Unguarded(name));
                    }
                    pres.signature().validate_head(&f.head, f.args.len())?;
                    if let Some(&bad) = f.args.iter().find(|&&j| j >= n) {
                        return Err(Error::Precondition(format!(
                            "`{name}` refers to missing variable {bad}"
                        )));
                    }
                }
                Rhs::Param(t) => t.validate(pres.signature())?,
            }
            vars.push(name);
            rhs.push(r);
        }
        Ok(RecEquationSystem {
            pres: pres.clone(),
            vars,
            rhs,
            aux,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rhs(&self) -> &[Rhs] {
        &self.rhs
    }

    pub fn is_aux(&self, i: usize) -> bool {
        self.aux[i]
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The whole system as one state graph: state `i` is variable `i`;
    /// parameter trees are spliced in after the variables.
    pub fn state_graph(&self) -> Vec<State> {
        let n = self.vars.len();
        let mut states: Vec<State> = Vec::with_capacity(n);
        let mut extra: Vec<State> = Vec::new();
        for r in &self.rhs {
            match r {
                Rhs::Flat(f) => states.push(State::new(f.head.clone(), f.args.clone())),
                Rhs::Param(t) => {
                    let sys = t.to_rational();
                    let offset = n + extra.len();
                    let shift = |s: &State| State::new(s.head.clone(), s.succ.iter().map(|j| j + offset).collect());
                    states.push(shift(sys.state(sys.root())));
                    extra.extend(sys.states().iter().map(shift));
                }
            }
        }
        states.extend(extra);
        states
    }
}

/// A coalgebra `X -> FX` given by one flat layer per state.
#[derive(Clone, Debug)]
pub struct CoalgebraSystem {
    pub pres: Presentation,
    pub states: Vec<(String, FlatTerm<usize>)>,
}

impl CoalgebraSystem {
    /// The same data read as a parameter-free equation system.
    pub fn as_equations(&self) -> Result<RecEquationSystem> {
        RecEquationSystem::new(
            &self.pres,
            self.states
                .iter()
                .map(|(n, f)| (n.clone(), Rhs::Flat(f.clone())))
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Exact,
    Approximate(usize),
}

#[derive(Clone, Debug)]
pub struct SolutionMap {
    pub vars: Vec<String>,
    pub values: Vec<TreeValue>,
    pub kind: SolutionKind,
}

impl SolutionMap {
    pub fn get(&self, name: &str) -> Option<&TreeValue> {
        self.vars.iter().position(|v| v == name).map(|i| &self.values[i])
    }
}

/// The unique solution, one canonical system per variable. Presentations
/// without exact normal forms get minimized but unnormalized systems.
pub fn solve(e: &RecEquationSystem) -> Result<SolutionMap> {
    let graph = e.state_graph();
    let whole = |i: usize| RationalTree::new(graph.clone(), i);
    let values = (0..e.len())
        .map(|i| {
            let r = whole(i)?;
            let r = if e.pres.hereditary_exact() {
                e.pres.normal_system(&r)?
            } else {
                r.minimized()
            };
            Ok(match r.to_finite() {
                Ok(t) => TreeValue::Finite(t),
                Err(_) => TreeValue::Rational(r),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionMap {
        vars: e.vars.clone(),
        values,
        kind: SolutionKind::Exact,
    })
}

/// The approximants `e†_0, ..., e†_k`, all variables at each level.
///
/// A parameter `t` contributes its cutting at `n` to `e†_n`, so every
/// approximant is the cutting of the exact solution at the same depth.
pub fn approx_chain(e: &RecEquationSystem, k: usize, p: &CutPoint) -> Result<Vec<Vec<FiniteTree>>> {
    let bottom = e.pres.normal_form(&p.leaf())?;
    let mut levels = vec![vec![bottom; e.len()]];
    for n in 0..k {
        let prev = &levels[n];
        let next = e
            .rhs
            .iter()
            .map(|r| match r {
                Rhs::Flat(f) => e
                    .pres
                    .layer(f.head.clone(), f.args.iter().map(|&j| prev[j].clone()).collect()),
                Rhs::Param(t) => e.pres.normal_form_unchecked(&cut(t, n + 1, p)),
            })
            .collect::<Result<Vec<_>>>()?;
        levels.push(next);
    }
    Ok(levels)
}

pub fn approx_solution(e: &RecEquationSystem, k: usize, p: &CutPoint) -> Result<SolutionMap> {
    let mut chain = approx_chain(e, k, p)?;
    let last = chain.pop().expect("chain has k + 1 levels");
    Ok(SolutionMap {
        vars: e.vars.clone(),
        values: last.into_iter().map(TreeValue::Finite).collect(),
        kind: SolutionKind::Approximate(k),
    })
}

/// `h_n` for a coalgebra: the approximants of the parameter-free system.
pub fn approx_homomorphism(c: &CoalgebraSystem, n: usize, p: &CutPoint) -> Result<SolutionMap> {
    approx_solution(&c.as_equations()?, n, p)
}

/// Checks the solution square at every variable: substituting the solution
/// one layer into the right-hand side gives back the solution, up to `~*`.
pub fn verify_solution(e: &RecEquationSystem, sol: &SolutionMap, depth: usize) -> Result<bool> {
    if sol.kind != SolutionKind::Exact {
        return Err(Error::Precondition("verify_solution needs an exact solution".into()));
    }
    if sol.values.len() != e.len() {
        return Ok(false);
    }
    for (i, r) in e.rhs.iter().enumerate() {
        let expected: TreeValue = match r {
            Rhs::Param(t) => t.clone(),
            Rhs::Flat(f) => {
                let mut states = vec![State::new(f.head.clone(), Vec::new())];
                for &j in &f.args {
                    let sys = sol.values[j].to_rational();
                    let offset = states.len();
                    states[0].succ.push(offset + sys.root());
                    states.extend(
                        sys.states()
                            .iter()
                            .map(|s| State::new(s.head.clone(), s.succ.iter().map(|k| k + offset).collect())),
                    );
                }
                RationalTree::new(states, 0)?.into()
            }
        };
        if !e.pres.equiv_star(&expected, &sol.values[i], Some(depth))?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of [`verify_approx_chain`], one flag per check plus the first
/// failures found.
#[derive(Clone, Debug, Default)]
pub struct ApproxReport {
    pub chain: bool,
    pub cut_law: bool,
    pub join: bool,
    pub failures: Vec<String>,
}

impl ApproxReport {
    pub fn passed(&self) -> bool {
        self.chain && self.cut_law && self.join
    }
}

impl fmt::Display for ApproxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(f, "chain    {}", mark(self.chain))?;
        writeln!(f, "cut-law  {}", mark(self.cut_law))?;
        writeln!(f, "join     {}", mark(self.join))?;
        for msg in &self.failures {
            writeln!(f, "  {msg}")?;
        }
        Ok(())
    }
}

/// Checks, for every variable and every `n < N`: the approximants increase,
/// each is the cutting of the exact solution, and the join of
/// `e†_0, ..., e†_N` normalizes to the exact solution.
pub fn verify_approx_chain(e: &RecEquationSystem, big_n: usize, p: &CutPoint) -> Result<ApproxReport> {
    let sol = solve(e)?;
    let chain = approx_chain(e, big_n, p)?;
    let mut report = ApproxReport {
        chain: true,
        cut_law: true,
        join: true,
        failures: Vec::new(),
    };
    let el = |t: &FiniteTree| OrderedElement::new(&e.pres, t.clone(), p);
    for (x, name) in e.vars.iter().enumerate() {
        for n in 0..=big_n {
            if n < big_n && !leq_quotient(&el(&chain[n][x])?, &el(&chain[n + 1][x])?)? {
                report.chain = false;
                report
                    .failures
                    .push(format!("{name}: approximant {n} is not below {}", n + 1));
            }
            let expected = e.pres.normal_form_unchecked(&cut(&sol.values[x], n, p))?;
            if !e.pres.equiv_finite(&chain[n][x], &expected)?.holds() {
                report.cut_law = false;
                report
                    .failures
                    .push(format!("{name}: approximant {n} differs from the cutting"));
            }
        }
        let column: Vec<FiniteTree> = chain.iter().map(|level| level[x].clone()).collect();
        let joined = match join_quotient(&e.pres, &column, p) {
            Ok(j) => e.pres.equiv_star(&j.into(), &sol.values[x], Some(2 * big_n))?.holds(),
            Err(err) => {
                report.failures.push(format!("{name}: join failed: {err}"));
                false
            }
        };
        if !joined {
            report.join = false;
            report.failures.push(format!("{name}: join differs from the solution"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin;
    use crate::signature::Head;

    fn words() -> RecEquationSystem {
        let pres = builtin("product", &["a", "b"]).unwrap();
        RecEquationSystem::new(
            &pres,
            vec![
                ("x".into(), Rhs::Flat(FlatTerm::new(Head::op("a"), vec![1]))),
                ("y".into(), Rhs::Flat(FlatTerm::new(Head::op("b"), vec![0]))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn alternating_word() {
        let e = words();
        let sol = solve(&e).unwrap();
        let p = CutPoint::var("p");
        let x = sol.get("x").unwrap();
        assert!(!x.is_finite());
        assert_eq!(cut(x, 4, &p).to_string(), "a(b(a(b(p))))");
        let printed: Vec<String> = (0..4)
            .map(|k| {
                approx_solution(&e, k, &p)
                    .unwrap()
                    .get("x")
                    .unwrap()
                    .as_finite()
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(printed, ["p", "a(p)", "a(b(p))", "a(b(a(p)))"]);
        assert!(verify_solution(&e, &sol, 6).unwrap());
        let report = verify_approx_chain(&e, 8, &p).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn broken_solutions_fail_verification() {
        let e = words();
        let mut sol = solve(&e).unwrap();
        sol.values[0] = FiniteTree::var("p").into();
        assert!(!verify_solution(&e, &sol, 3).unwrap());
        let empty = RecEquationSystem::new(&builtin("id", &[]).unwrap(), vec![]).unwrap();
        assert!(verify_solution(&empty, &solve(&empty).unwrap(), 3).unwrap());
    }

    #[test]
    fn set_system() {
        // x = {x, y}, y = {}
        let pf = builtin("pf", &[]).unwrap();
        let e = RecEquationSystem::new(
            &pf,
            vec![
                ("x".into(), Rhs::Flat(FlatTerm::new(Head::op("set2"), vec![0, 1]))),
                ("y".into(), Rhs::Flat(FlatTerm::new(Head::op("set0"), vec![]))),
            ],
        )
        .unwrap();
        let sol = solve(&e).unwrap();
        assert_eq!(
            sol.get("y").unwrap().as_finite().unwrap(),
            FiniteTree::op("set0", vec![])
        );
        let p = CutPoint::nullary("set0");
        assert!(verify_approx_chain(&e, 6, &p).unwrap().passed());
    }

    #[test]
    fn constants_solve_to_themselves() {
        let pres = builtin("product", &["a", "b"]).unwrap();
        let t = FiniteTree::op("a", vec![FiniteTree::op("b", vec![FiniteTree::var("z")])]);
        let e = RecEquationSystem::new(&pres, vec![("x".into(), Rhs::Param(t.clone().into()))]).unwrap();
        assert_eq!(solve(&e).unwrap().get("x").unwrap().as_finite().unwrap(), t);
        let p = CutPoint::var("p");
        assert_eq!(
            approx_solution(&e, 4, &p)
                .unwrap()
                .get("x")
                .unwrap()
                .as_finite()
                .unwrap(),
            t
        );
        assert!(verify_approx_chain(&e, 3, &p).unwrap().passed());
    }

    #[test]
    fn homomorphism_approximants() {
        let p = CutPoint::var("p");
        let c = CoalgebraSystem {
            pres: builtin("product", &["a"]).unwrap(),
            states: vec![("x".into(), FlatTerm::new(Head::op("a"), vec![0]))],
        };
        let h = approx_homomorphism(&c, 3, &p).unwrap();
        assert_eq!(h.get("x").unwrap().as_finite().unwrap().to_string(), "a(a(a(p)))");
        assert_eq!(
            approx_homomorphism(&c, 0, &p)
                .unwrap()
                .get("x")
                .unwrap()
                .as_finite()
                .unwrap(),
            p.leaf()
        );
        let c = CoalgebraSystem {
            pres: builtin("pf", &[]).unwrap(),
            states: vec![("x".into(), FlatTerm::new(Head::op("set2"), vec![0, 0]))],
        };
        let h = approx_homomorphism(&c, 2, &p).unwrap();
        assert_eq!(h.get("x").unwrap().as_finite().unwrap().to_string(), "set1(set1(p))");
    }

    #[test]
    fn bare_variables_are_unguarded() {
        let pres = builtin("id", &[]).unwrap();
        let err = RecEquationSystem::new(
            &pres,
            vec![("x".into(), Rhs::Flat(FlatTerm::new(Head::var("y"), vec![])))],
        )
        .unwrap_err();
        assert_eq!(err.name(), "Unguarded");
    }
}
