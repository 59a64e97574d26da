//! Presentations of set functors by a signature plus a flat-term normalizer.
//!
//! The normalizer picks one representative per class of flat terms merged by
//! the presentation. Applied bottom-up it decides the congruence `~` on finite
//! trees; applied inside partition refinement it decides `~*` on rational
//! trees and produces canonical minimal systems.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signature::{is_identifier, parse_signature, strip_comment, FlatTerm, Head, Signature};
use crate::trees::levels::{self, stable_partition, Levels};
use crate::trees::{cut, CutPoint, FiniteTree, RationalTree, State, TreeValue};

/// Outcome of an equivalence query. `Bounded` answers come from a search
/// that stopped at a configured limit; only `Bounded(true)` from a
/// successful search is certain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact(bool),
    Bounded(bool),
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Exact(true) | Verdict::Bounded(true))
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Verdict::Exact(_))
    }
}

/// A flat equation `f(x, y) = g(y, x)` between one-layer terms over variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatEquation {
    pub lhs: FlatTerm<String>,
    pub rhs: FlatTerm<String>,
}

#[derive(Clone, Debug)]
enum Kind {
    Identity,
    List,
    Sets { cap: Option<usize> },
    Am23,
    Equations(Arc<Vec<FlatEquation>>),
}

#[derive(Clone, Debug)]
pub struct Presentation {
    name: Arc<str>,
    sig: Signature,
    kind: Kind,
    search_cap: usize,
}

const DEFAULT_SEARCH_CAP: usize = 10_000;

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 7] = ["id", "product", "list", "pf", "pk", "automata", "am23"];

/// A built-in presentation by name and parameters.
pub fn builtin(name: &str, params: &[&str]) -> Result<Presentation> {
    let bad = |message: &str| Error::BadParams {
        name: name.to_string(),
        message: message.to_string(),
    };
    let no_params = || {
        if params.is_empty() {
            Ok(())
        } else {
            Err(bad("takes no parameters"))
        }
    };
    let (display, sig, kind) = match name {
        "id" => {
            no_params()?;
            ("id".to_string(), Signature::from_ops([("s", 1)])?, Kind::Identity)
        }
        "product" => {
            if params.is_empty() {
                return Err(bad("needs at least one label"));
            }
            let mut sig = Signature::default();
            for a in params {
                sig.add_op(a, 1).map_err(|e| match e {
                    Error::DuplicateOp(op) => bad(&format!("label `{op}` given twice")),
                    _ => bad(&format!("`{a}` is not an identifier")),
                })?;
            }
            (format!("product({})", params.join(",")), sig, Kind::Identity)
        }
        "list" => {
            no_params()?;
            ("list".to_string(), Signature::schematic("tup", None), Kind::List)
        }
        "pf" => {
            no_params()?;
            (
                "pf".to_string(),
                Signature::schematic("set", None),
                Kind::Sets { cap: None },
            )
        }
        "pk" => {
            let [k] = params else {
                return Err(bad("expects one bound k"));
            };
            let k: usize = k.parse().map_err(|_| bad(&format!("`{k}` is not a number")))?;
            if k == 0 {
                return Err(bad("k must be at least 1"));
            }
            (
                format!("pk({k})"),
                Signature::schematic("set", None),
                Kind::Sets { cap: Some(k) },
            )
        }
        "automata" => {
            let n = match params {
                [] => return Err(bad("expects an input alphabet or its size")),
                [n] if n.parse::<usize>().is_ok() => n.parse().unwrap(),
                names => {
                    let unique: HashSet<&&str> = names.iter().collect();
                    if unique.len() != names.len() || !names.iter().all(|n| is_identifier(n)) {
                        return Err(bad("input letters must be distinct identifiers"));
                    }
                    names.len()
                }
            };
            let display = format!("automata({})", params.join(","));
            (display, Signature::from_ops([("a", n), ("b", n)])?, Kind::Identity)
        }
        "am23" => {
            no_params()?;
            let sig = Signature::from_ops([("s1", 2), ("s2", 2), ("s3", 2)])?;
            ("am23".to_string(), sig, Kind::Am23)
        }
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(Presentation {
        name: Arc::from(display),
        sig,
        kind,
        search_cap: DEFAULT_SEARCH_CAP,
    })
}

/// Parses `name` or `name(p1, p2, ...)` and builds the built-in.
pub fn parse_builtin(spec: &str) -> Result<Presentation> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once('(') {
        None => (spec, Vec::new()),
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::syntax(1, format!("missing `)` in `{spec}`")))?;
            let params: Vec<&str> = inner.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
            (name.trim(), params)
        }
    };
    builtin(name, &params)
}

/// A user presentation: signature lines plus `eqn LHS = RHS` lines whose
/// sides are flat terms over variables. Without equations the result is the
/// free (exact) presentation of the signature.
pub fn parse_presentation(name: &str, text: &str) -> Result<Presentation> {
    let mut sig_text = String::new();
    let mut raw_eqns = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        match line.strip_prefix("eqn ") {
            Some(rest) => {
                raw_eqns.push((idx + 1, rest.to_string()));
                sig_text.push('\n');
            }
            None => {
                sig_text.push_str(raw);
                sig_text.push('\n');
            }
        }
    }
    let sig = parse_signature(&sig_text)?;
    let mut eqns = Vec::new();
    for (line, body) in raw_eqns {
        let (l, r) = body
            .split_once('=')
            .ok_or_else(|| Error::syntax(line, "equation needs `=`"))?;
        let lhs = parse_flat(&sig, l, line)?;
        let rhs = parse_flat(&sig, r, line)?;
        eqns.push(FlatEquation { lhs, rhs });
    }
    let kind = if eqns.is_empty() {
        Kind::Identity
    } else {
        Kind::Equations(Arc::new(eqns))
    };
    Ok(Presentation {
        name: Arc::from(name),
        sig,
        kind,
        search_cap: DEFAULT_SEARCH_CAP,
    })
}

fn parse_flat(sig: &Signature, text: &str, line: usize) -> Result<FlatTerm<String>> {
    let text = text.trim();
    let (head, args) = match text.split_once('(') {
        None => (text, Vec::new()),
        Some((head, rest)) => {
            let inner = rest
                .trim_end()
                .strip_suffix(')')
                .ok_or_else(|| Error::syntax(line, format!("missing `)` in `{text}`")))?;
            let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
            (head.trim(), args)
        }
    };
    if !is_identifier(head) {
        return Err(Error::syntax(line, format!("bad operation `{head}`")));
    }
    for a in &args {
        if !is_identifier(a) || sig.contains(a) {
            return Err(Error::syntax(line, format!("`{a}` must be a variable")));
        }
    }
    let flat = FlatTerm::new(Head::op(head), args);
    sig.validate_head(&flat.head, flat.args.len())?;
    Ok(flat)
}

/// A tree in normal form for a named presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalTree {
    pres: Arc<str>,
    value: TreeValue,
}

impl CanonicalTree {
    pub fn presentation(&self) -> &str {
        &self.pres
    }

    pub fn value(&self) -> &TreeValue {
        &self.value
    }

    pub fn into_value(self) -> TreeValue {
        self.value
    }

    pub fn as_finite(&self) -> Option<FiniteTree> {
        self.value.as_finite()
    }

    pub fn to_rational(&self) -> RationalTree {
        self.value.to_rational()
    }
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Whether normal forms decide `~` (and, through refinement, `~*`).
    pub fn hereditary_exact(&self) -> bool {
        !matches!(self.kind, Kind::Equations(_))
    }

    /// Whether normalization keeps the height of every tree.
    pub fn height_preserving(&self) -> bool {
        !matches!(self.kind, Kind::Equations(_))
    }

    pub fn has_enumerator(&self) -> bool {
        !matches!(self.kind, Kind::Equations(_))
    }

    /// Whether `{...}` is the surface syntax for the schematic operations.
    pub fn uses_set_syntax(&self) -> bool {
        matches!(self.kind, Kind::Sets { .. })
    }

    pub(crate) fn set_cap(&self) -> Option<Option<usize>> {
        match self.kind {
            Kind::Sets { cap } => Some(cap),
            _ => None,
        }
    }

    pub(crate) fn is_list(&self) -> bool {
        matches!(self.kind, Kind::List)
    }

    pub fn equations(&self) -> &[FlatEquation] {
        match &self.kind {
            Kind::Equations(e) => e,
            _ => &[],
        }
    }

    /// Limit on the number of trees visited by bounded rewriting search.
    pub fn with_search_cap(mut self, cap: usize) -> Self {
        self.search_cap = cap;
        self
    }

    /// Canonical representative of a flat term. Argument keys must be
    /// canonical already; sorting uses their order.
    pub fn normalize<K: Ord + Clone>(&self, mut t: FlatTerm<K>) -> Result<FlatTerm<K>> {
        let Head::Op(op) = &t.head else {
            return Ok(t);
        };
        match &self.kind {
            Kind::Sets { cap } => {
                t.args.sort();
                t.args.dedup();
                if let Some(cap) = *cap {
                    if t.args.len() > cap {
                        return Err(Error::CapacityExceeded {
                            cap,
                            found: t.args.len(),
                        });
                    }
                }
                let head = self
                    .sig
                    .schematic_op(t.args.len())
                    .ok_or_else(|| Error::UnknownOp(op.to_string()))?;
                Ok(FlatTerm::new(Head::op(&head), t.args))
            }
            Kind::Am23 => {
                if (&**op == "s2" || &**op == "s3") && t.args.len() == 2 && t.args[0] == t.args[1] {
                    t.head = Head::op("s1");
                }
                Ok(t)
            }
            Kind::Identity | Kind::List | Kind::Equations(_) => Ok(t),
        }
    }

    fn normalize_tree_layer(&self, t: FlatTerm<FiniteTree>) -> Result<FlatTerm<FiniteTree>> {
        self.normalize(t)
    }

    /// The `~`-normal form of a finite tree, as a plain tree.
    pub fn normal_form(&self, t: &FiniteTree) -> Result<FiniteTree> {
        t.validate(&self.sig)?;
        self.normal_form_unchecked(t)
    }

    pub(crate) fn normal_form_unchecked(&self, t: &FiniteTree) -> Result<FiniteTree> {
        if matches!(self.kind, Kind::Identity | Kind::List | Kind::Equations(_)) {
            return Ok(t.clone());
        }
        t.fold(&mut |node, kids: &[FiniteTree]| {
            if node.is_leaf() && node.head().is_var() {
                return Ok(node.clone());
            }
            let flat = self.normalize(FlatTerm::new(node.head().clone(), kids.to_vec()))?;
            Ok(FiniteTree::node(flat.head, flat.args))
        })
    }

    /// One normalized layer over canonical children.
    pub(crate) fn layer(&self, head: Head, kids: Vec<FiniteTree>) -> Result<FiniteTree> {
        let flat = self.normalize(FlatTerm::new(head, kids))?;
        Ok(FiniteTree::node(flat.head, flat.args))
    }

    pub fn nf_tree(&self, t: &FiniteTree) -> Result<CanonicalTree> {
        Ok(self.tag(self.normal_form(t)?.into()))
    }

    fn tag(&self, value: TreeValue) -> CanonicalTree {
        CanonicalTree {
            pres: self.name.clone(),
            value,
        }
    }

    /// The canonical minimal system presenting the `~*`-class of `r`.
    ///
    /// Blocks of the stable partition are ordered by the structural order of
    /// their cuttings at depth equal to the number of blocks, which already
    /// separates them and depends only on the class; the resulting system is
    /// therefore the same for every input presenting the same class.
    pub fn normal_system(&self, r: &RationalTree) -> Result<RationalTree> {
        if !self.hereditary_exact() {
            return Err(Error::NotExact(self.name.to_string()));
        }
        r.validate(&self.sig)?;
        let norm = |t| self.normalize_tree_layer(t);
        let (part, _) = stable_partition(r.states(), levels::neutral_bottom(), &norm)?;
        let mut lv = Levels::new(r.states(), levels::neutral_bottom(), &norm);
        lv.advance_to(part.count)?;
        let reps = part.representatives();
        let mut order: Vec<usize> = (0..part.count).collect();
        order.sort_by(|&a, &b| lv.trees()[reps[a]].cmp(&lv.trees()[reps[b]]));
        let mut rank = vec![0; part.count];
        for (i, &b) in order.iter().enumerate() {
            rank[b] = i;
        }
        let states = order
            .iter()
            .map(|&b| {
                let st = r.state(reps[b]);
                let flat = FlatTerm::new(
                    st.head.clone(),
                    st.succ.iter().map(|&j| rank[part.block_of[j]]).collect(),
                );
                let flat = self.normalize(flat)?;
                Ok(State::new(flat.head, flat.args))
            })
            .collect::<Result<Vec<_>>>()?;
        RationalTree::new(states, rank[part.block_of[r.root()]])
    }

    pub fn nf_rational(&self, r: &RationalTree) -> Result<CanonicalTree> {
        Ok(self.tag(self.normal_system(r)?.into()))
    }

    /// Canonical form of any tree value. Finite values stay finite. Under
    /// presentations without exact normal forms, rational values are only
    /// minimized.
    pub fn canonical(&self, v: &TreeValue) -> Result<CanonicalTree> {
        if let Some(t) = v.as_finite() {
            return self.nf_tree(&t);
        }
        let r = v.to_rational();
        if self.hereditary_exact() {
            self.nf_rational(&r)
        } else {
            r.validate(&self.sig)?;
            Ok(self.tag(r.minimized().into()))
        }
    }

    /// Decides `s ~ s2`. Presentations given by equations answer by bounded
    /// rewriting search in both directions of every equation.
    pub fn equiv_finite(&self, s: &FiniteTree, s2: &FiniteTree) -> Result<Verdict> {
        match &self.kind {
            Kind::Equations(eqns) => {
                s.validate(&self.sig)?;
                s2.validate(&self.sig)?;
                Ok(self.search(eqns, s, s2))
            }
            _ => Ok(Verdict::Exact(self.normal_form(s)? == self.normal_form(s2)?)),
        }
    }

    fn search(&self, eqns: &[FlatEquation], s: &FiniteTree, target: &FiniteTree) -> Verdict {
        if s == target {
            return Verdict::Exact(true);
        }
        let mut seen: HashSet<FiniteTree> = HashSet::from([s.clone()]);
        let mut queue = VecDeque::from([s.clone()]);
        while let Some(t) = queue.pop_front() {
            for next in rewrites(eqns, &t) {
                if next == *target {
                    return Verdict::Exact(true);
                }
                if seen.len() >= self.search_cap {
                    return Verdict::Bounded(false);
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        Verdict::Exact(false)
    }

    /// Decides `r ~* r2`. Exact presentations compare canonical systems;
    /// the others compare cuttings up to `depth`.
    pub fn equiv_star(&self, r: &TreeValue, r2: &TreeValue, depth: Option<usize>) -> Result<Verdict> {
        if self.hereditary_exact() {
            let a = self.normal_system(&r.to_rational())?;
            let b = self.normal_system(&r2.to_rational())?;
            return Ok(Verdict::Exact(a.bisimilar(&b)));
        }
        let depth = depth.ok_or_else(|| Error::DepthRequired(self.name.to_string()))?;
        let bottom = CutPoint::var(levels::neutral_bottom().head().name());
        let mut all_exact = true;
        for n in 0..=depth {
            let v = self.equiv_finite(&cut(r, n, &bottom), &cut(r2, n, &bottom))?;
            if !v.holds() {
                return Ok(if v.is_exact() {
                    Verdict::Exact(false)
                } else {
                    Verdict::Bounded(false)
                });
            }
            all_exact &= v.is_exact();
        }
        // Agreement up to a finite depth never settles an infinite comparison
        // unless both sides are finite and were fully observed.
        let settled = all_exact && r.height().is_some_and(|h| h < depth) && r2.height().is_some_and(|h| h < depth);
        Ok(if settled {
            Verdict::Exact(true)
        } else {
            Verdict::Bounded(true)
        })
    }
}

/// All trees one equation step away from `t`, using equations both ways.
fn rewrites(eqns: &[FlatEquation], t: &FiniteTree) -> Vec<FiniteTree> {
    let mut out = Vec::new();
    for e in eqns {
        for (from, to) in [(&e.lhs, &e.rhs), (&e.rhs, &e.lhs)] {
            if let Some(r) = rewrite_root(from, to, t) {
                if r != *t {
                    out.push(r);
                }
            }
        }
    }
    for (i, c) in t.children().iter().enumerate() {
        for c2 in rewrites(eqns, c) {
            let mut kids = t.children().to_vec();
            kids[i] = c2;
            out.push(FiniteTree::node(t.head().clone(), kids));
        }
    }
    out
}

fn rewrite_root(from: &FlatTerm<String>, to: &FlatTerm<String>, t: &FiniteTree) -> Option<FiniteTree> {
    if from.head != *t.head() || from.args.len() != t.children().len() {
        return None;
    }
    let mut binding: Vec<(&str, &FiniteTree)> = Vec::new();
    for (v, c) in from.args.iter().zip(t.children()) {
        match binding.iter().find(|(n, _)| *n == v.as_str()) {
            Some((_, bound)) if *bound != c => return None,
            Some(_) => {}
            None => binding.push((v, c)),
        }
    }
    let kids = to
        .args
        .iter()
        .map(|v| {
            binding
                .iter()
                .find(|(n, _)| *n == v.as_str())
                .map(|(_, c)| (*c).clone())
        })
        .collect::<Option<Vec<_>>>()?;
    Some(FiniteTree::node(to.head.clone(), kids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(kids: Vec<FiniteTree>) -> FiniteTree {
        FiniteTree::op(&format!("set{}", kids.len()), kids)
    }

    fn empty() -> FiniteTree {
        set(vec![])
    }

    #[test]
    fn pf_merges_duplicates() {
        let pf = builtin("pf", &[]).unwrap();
        let t = set(vec![empty(), empty()]);
        assert_eq!(pf.normal_form(&t).unwrap(), set(vec![empty()]));
        let flat = FlatTerm::new(Head::op("set3"), vec![2, 1, 2]);
        assert_eq!(pf.normalize(flat).unwrap(), FlatTerm::new(Head::op("set2"), vec![1, 2]));
        assert!(pf.equiv_finite(&t, &set(vec![empty()])).unwrap().holds());
        let x = FiniteTree::var("x");
        assert_eq!(pf.normal_form(&x).unwrap(), x);
    }

    #[test]
    fn pk_rejects_too_many_children() {
        let pk = builtin("pk", &["2"]).unwrap();
        let flat = FlatTerm::new(Head::op("set3"), vec![1, 2, 3]);
        assert_eq!(pk.normalize(flat).unwrap_err().name(), "CapacityExceeded");
        assert!(pk.normalize(FlatTerm::new(Head::op("set3"), vec![1, 2, 1])).is_ok());
        assert_eq!(builtin("pk", &["0"]).unwrap_err().name(), "BadParams");
        assert_eq!(builtin("pk", &[]).unwrap_err().name(), "BadParams");
    }

    #[test]
    fn am23_identifies_equal_children() {
        let am = builtin("am23", &[]).unwrap();
        let flat = FlatTerm::new(Head::op("s3"), vec![1, 1]);
        assert_eq!(am.normalize(flat).unwrap().head, Head::op("s1"));
        let flat = FlatTerm::new(Head::op("s3"), vec![1, 2]);
        assert_eq!(am.normalize(flat).unwrap().head, Head::op("s3"));
        let x = FiniteTree::var("x");
        let y = FiniteTree::var("y");
        let t = FiniteTree::op("s2", vec![x.clone(), x.clone()]);
        assert_eq!(
            am.normal_form(&t).unwrap(),
            FiniteTree::op("s1", vec![x.clone(), x.clone()])
        );
        let a = FiniteTree::op("s2", vec![x.clone(), y.clone()]);
        let b = FiniteTree::op("s3", vec![x, y]);
        assert_eq!(am.equiv_finite(&a, &b).unwrap(), Verdict::Exact(false));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(parse_builtin("product(a, b)").unwrap().name(), "product(a,b)");
        assert_eq!(parse_builtin("automata(2)").unwrap().signature().arity("a"), Some(2));
        assert_eq!(
            parse_builtin("automata(i,j,k)").unwrap().signature().arity("b"),
            Some(3)
        );
        assert_eq!(parse_builtin("nope").unwrap_err().name(), "UnknownBuiltin");
        assert_eq!(parse_builtin("product(a,a)").unwrap_err().name(), "BadParams");
        assert_eq!(parse_builtin("pf(1)").unwrap_err().name(), "BadParams");
    }

    #[test]
    fn pf_loop_collapses_to_one_state() {
        let pf = builtin("pf", &[]).unwrap();
        let r = RationalTree::new(
            vec![
                State::new(Head::op("set2"), vec![0, 1]),
                State::new(Head::op("set2"), vec![0, 1]),
            ],
            0,
        )
        .unwrap();
        let nf = pf.normal_system(&r).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.state(0), &State::new(Head::op("set1"), vec![0]));
        let one = RationalTree::new(vec![State::new(Head::op("set1"), vec![0])], 0).unwrap();
        let two = RationalTree::new(vec![State::new(Head::op("set2"), vec![0, 0])], 0).unwrap();
        assert_eq!(
            pf.equiv_star(&one.into(), &two.into(), None).unwrap(),
            Verdict::Exact(true)
        );
    }

    #[test]
    fn acyclic_systems_agree_with_finite_normal_forms() {
        let pf = builtin("pf", &[]).unwrap();
        let t = set(vec![set(vec![empty(), empty()]), set(vec![empty()]), empty()]);
        let nf = pf.normal_system(&RationalTree::from_finite(&t)).unwrap();
        assert_eq!(nf.to_finite().unwrap(), pf.normal_form(&t).unwrap());
    }

    #[test]
    fn equation_presentations_search() {
        let pres = parse_presentation("comm", "op f 2\nop c 0\nop d 0\neqn f(x, y) = f(y, x)\n").unwrap();
        assert!(!pres.hereditary_exact());
        let c = FiniteTree::op("c", vec![]);
        let d = FiniteTree::op("d", vec![]);
        let a = FiniteTree::op("f", vec![c.clone(), FiniteTree::op("f", vec![c.clone(), d.clone()])]);
        let b = FiniteTree::op("f", vec![FiniteTree::op("f", vec![d.clone(), c.clone()]), c.clone()]);
        assert_eq!(pres.equiv_finite(&a, &b).unwrap(), Verdict::Exact(true));
        let e = FiniteTree::op("f", vec![c.clone(), c.clone()]);
        assert_eq!(pres.equiv_finite(&a, &e).unwrap(), Verdict::Exact(false));
        let loop_f: TreeValue = RationalTree::new(vec![State::new(Head::op("f"), vec![0, 0])], 0)
            .unwrap()
            .into();
        assert_eq!(
            pres.equiv_star(&loop_f, &loop_f, None).unwrap_err().name(),
            "DepthRequired"
        );
        assert_eq!(
            pres.normal_system(&loop_f.to_rational()).unwrap_err().name(),
            "NotExact"
        );
        assert_eq!(
            pres.equiv_star(&loop_f, &loop_f, Some(3)).unwrap(),
            Verdict::Bounded(true)
        );
    }

    #[test]
    fn presentation_file_errors() {
        assert_eq!(
            parse_presentation("x", "op f 2\neqn f(x) = f(x, x)")
                .unwrap_err()
                .name(),
            "ArityMismatch"
        );
        assert_eq!(
            parse_presentation("x", "op f 2\neqn g(x, y) = f(x, y)")
                .unwrap_err()
                .name(),
            "UnknownOp"
        );
        assert_eq!(
            parse_presentation("x", "op f 1\neqn f(x)").unwrap_err().name(),
            "SyntaxError"
        );
        assert!(parse_presentation("x", "op f 1\n").unwrap().hereditary_exact());
    }

    fn pf_tree() -> impl Strategy<Value = FiniteTree> {
        let leaf = prop_oneof![Just(empty()), Just(FiniteTree::var("x"))];
        leaf.prop_recursive(4, 30, 3, |inner| proptest::collection::vec(inner, 0..4).prop_map(set))
    }

    proptest! {
        #[test]
        fn nf_is_idempotent_and_a_homomorphism(kids in proptest::collection::vec(pf_tree(), 0..4)) {
            let pf = builtin("pf", &[]).unwrap();
            let t = set(kids.clone());
            let nf = pf.normal_form(&t).unwrap();
            prop_assert_eq!(pf.normal_form(&nf).unwrap(), nf.clone());
            let inner: Vec<FiniteTree> = kids.iter().map(|k| pf.normal_form(k).unwrap()).collect();
            prop_assert_eq!(pf.normal_form(&set(inner)).unwrap(), nf.clone());
            prop_assert_eq!(nf.height(), t.height());
        }

        #[test]
        fn normalizer_keeps_keys_and_is_idempotent(keys in proptest::collection::vec(0u8..5, 0..6), op in 0usize..3) {
            for pres in [builtin("pf", &[]).unwrap(), builtin("am23", &[]).unwrap()] {
                let flat = if pres.uses_set_syntax() {
                    FlatTerm::new(Head::op(&format!("set{}", keys.len())), keys.clone())
                } else {
                    let k = [keys.first().copied().unwrap_or(0), keys.last().copied().unwrap_or(0)];
                    FlatTerm::new(Head::op(&format!("s{}", op + 1)), k.to_vec())
                };
                let once = pres.normalize(flat.clone()).unwrap();
                prop_assert_eq!(pres.normalize(once.clone()).unwrap(), once.clone());
                prop_assert!(once.args.iter().all(|a| flat.args.contains(a)));
            }
        }

        #[test]
        fn kernel_matches_set_equality(a in proptest::collection::vec(0u8..4, 0..5), b in proptest::collection::vec(0u8..4, 0..5)) {
            // Two flat terms are merged exactly when they denote the same set.
            let pf = builtin("pf", &[]).unwrap();
            let fa = pf.normalize(FlatTerm::new(Head::op(&format!("set{}", a.len())), a.clone())).unwrap();
            let fb = pf.normalize(FlatTerm::new(Head::op(&format!("set{}", b.len())), b.clone())).unwrap();
            let sa: std::collections::BTreeSet<u8> = a.into_iter().collect();
            let sb: std::collections::BTreeSet<u8> = b.into_iter().collect();
            prop_assert_eq!(fa == fb, sa == sb);
        }
    }
}
