//! Text formats for trees and equation systems.
//!
//! Terms are written in prefix syntax, `a(b(x), c)`. A bare identifier is a
//! nullary operation when the signature has one of that name and a variable
//! otherwise. Under set presentations `{t1, ..., tn}` stands for
//! `setn(t1, ..., tn)`.
//!
//! Rational trees use `rec s. body`, where `s` may occur in `body`, or a
//! block of named states whose first state is the root:
//!
//! ```text
//! rec s0. a(s1); s1 = b(s0)
//! s0 = a(s1); s1 = b(s0)
//! ```

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::signature::{is_identifier, strip_comment, FlatTerm, Head, Signature};
use crate::solver::{RecEquationSystem, Rhs, SolutionMap};
use crate::trees::{FiniteTree, RationalTree, State, TreeValue};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Equals,
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let single = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ';' => Some(Tok::Semi),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = single {
            out.push(t);
            chars.next();
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Ident(text[i..end].to_string()));
        } else {
            return Err(Error::syntax(line, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A named or anonymous state definition in a `rec` block.
type Def = (Option<String>, Ast);

#[derive(Clone, Debug)]
enum Ast {
    App { name: String, args: Vec<Ast>, parens: bool },
    Set(Vec<Ast>),
    Rec(String, Box<Ast>),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn new(text: &str, line: usize) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text, line)?,
            pos: 0,
            line,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, msg)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.toks.get(self.pos) {
            Some(Tok::Ident(s)) if is_identifier(s) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn term(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(Tok::LBrace) => {
                self.pos += 1;
                let args = self.list(Tok::RBrace, "`}`")?;
                Ok(Ast::Set(args))
            }
            Some(Tok::Ident(s)) if s == "rec" => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect(Tok::Dot, "`.` after the recursion variable")?;
                Ok(Ast::Rec(name, Box::new(self.term()?)))
            }
            _ => {
                let name = self.ident()?;
                if self.peek() == Some(&Tok::Open) {
                    self.pos += 1;
                    let args = self.list(Tok::Close, "`)`")?;
                    Ok(Ast::App {
                        name,
                        args,
                        parens: true,
                    })
                } else {
                    Ok(Ast::App {
                        name,
                        args: Vec::new(),
                        parens: false,
                    })
                }
            }
        }
    }

    fn list(&mut self, close: Tok, what: &str) -> Result<Vec<Ast>> {
        let mut args = Vec::new();
        if self.peek() == Some(&close) {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(t) if *t == close => {
                    self.pos += 1;
                    return Ok(args);
                }
                _ => return Err(self.err(format!("expected `,` or {what}"))),
            }
        }
    }

    /// `term (; name = term)*` or `name = term (; name = term)*`.
    fn rational(&mut self) -> Result<(Vec<Def>, bool)> {
        let block = matches!(self.toks.get(self.pos + 1), Some(Tok::Equals));
        let mut defs = Vec::new();
        if block {
            let name = self.ident()?;
            self.expect(Tok::Equals, "`=`")?;
            defs.push((Some(name), self.term()?));
        } else {
            defs.push((None, self.term()?));
        }
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            if self.at_end() {
                break;
            }
            let name = self.ident()?;
            self.expect(Tok::Equals, "`=`")?;
            defs.push((Some(name), self.term()?));
        }
        if !self.at_end() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok((defs, block))
    }
}

/// Converts syntax into a state graph. `None` marks a state whose label is
/// not known yet (a recursion variable still being defined).
struct Builder<'a> {
    sig: &'a Signature,
    line: usize,
    states: Vec<Option<State>>,
    env: Vec<(String, usize)>,
}

impl Builder<'_> {
    fn alloc(&mut self, s: Option<State>) -> usize {
        self.states.push(s);
        self.states.len() - 1
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.env.iter().rev().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    fn node(&mut self, ast: &Ast) -> Result<usize> {
        match ast {
            Ast::App { name, args, parens } => {
                if !parens {
                    if let Some(s) = self.lookup(name) {
                        return Ok(s);
                    }
                }
                let head = leaf_or_op(self.sig, name, *parens, args.len())?;
                let succ = args.iter().map(|a| self.node(a)).collect::<Result<Vec<_>>>()?;
                Ok(self.alloc(Some(State::new(head, succ))))
            }
            Ast::Set(args) => {
                let head = Head::op(&set_op(self.sig, args.len(), self.line)?);
                let succ = args.iter().map(|a| self.node(a)).collect::<Result<Vec<_>>>()?;
                Ok(self.alloc(Some(State::new(head, succ))))
            }
            Ast::Rec(name, body) => {
                let s = self.alloc(None);
                self.env.push((name.clone(), s));
                let b = self.node(body)?;
                self.env.pop();
                let label = self.states[b].clone().ok_or_else(|| Error::Unguarded(name.clone()))?;
                self.states[s] = Some(label);
                Ok(s)
            }
        }
    }

    /// Named definitions. Definitions that are bare references to other
    /// names are resolved after the guarded ones.
    fn block(&mut self, defs: &[(String, Ast)]) -> Result<usize> {
        let ids: Vec<usize> = defs.iter().map(|_| self.alloc(None)).collect();
        let mut seen = HashSet::new();
        for ((name, _), &id) in defs.iter().zip(&ids) {
            if !seen.insert(name.as_str()) {
                return Err(Error::syntax(self.line, format!("state `{name}` defined twice")));
            }
            self.env.push((name.clone(), id));
        }
        let mut pending: Vec<(usize, usize, &str)> = Vec::new();
        for ((name, body), &id) in defs.iter().zip(&ids) {
            let b = self.node(body)?;
            match &self.states[b] {
                Some(label) if b != id => self.states[id] = Some(label.clone()),
                _ => pending.push((id, b, name)),
            }
        }
        while !pending.is_empty() {
            let before = pending.len();
            pending.retain(|&(id, b, _)| match self.states[b].clone() {
                Some(label) => {
                    self.states[id] = Some(label);
                    false
                }
                None => true,
            });
            if pending.len() == before {
                return Err(Error::Unguarded(pending[0].2.to_string()));
            }
        }
        Ok(ids[0])
    }

    fn finish(self, root: usize) -> Result<TreeValue> {
        let states = self
            .states
            .into_iter()
            .map(|s| s.expect("all states are defined"))
            .collect();
        let r = RationalTree::new(states, root)?;
        Ok(match r.to_finite() {
            Ok(t) => TreeValue::Finite(t),
            Err(_) => TreeValue::Rational(r),
        })
    }
}

fn leaf_or_op(sig: &Signature, name: &str, parens: bool, nargs: usize) -> Result<Head> {
    match sig.arity(name) {
        Some(_) => {
            let head = Head::op(name);
            sig.validate_head(&head, nargs)?;
            Ok(head)
        }
        None if parens => Err(Error::UnknownOp(name.to_string())),
        None => Ok(Head::var(name)),
    }
}

fn set_op(sig: &Signature, n: usize, line: usize) -> Result<String> {
    match sig.schema() {
        Some(s) if s.prefix == "set" => sig
            .schematic_op(n)
            .ok_or_else(|| Error::syntax(line, format!("no set operation of arity {n}"))),
        _ => Err(Error::syntax(line, "`{...}` needs a set presentation")),
    }
}

fn tree_at_line(sig: &Signature, text: &str, line: usize) -> Result<TreeValue> {
    let mut p = Parser::new(text, line)?;
    let (defs, block) = p.rational()?;
    let mut b = Builder {
        sig,
        line,
        states: Vec::new(),
        env: Vec::new(),
    };
    let root = if block || defs.len() > 1 {
        let mut named: Vec<(String, Ast)> = Vec::new();
        for (i, (name, ast)) in defs.into_iter().enumerate() {
            match (name, ast) {
                (Some(n), ast) => named.push((n, ast)),
                // `rec s0. body; s1 = ...`: the leading rec names the root.
                (None, Ast::Rec(n, body)) if i == 0 => named.push((n, *body)),
                (None, _) => return Err(Error::syntax(line, "expected `rec name.` before named states")),
            }
        }
        b.block(&named)?
    } else {
        let (_, ast) = defs.into_iter().next().expect("at least one definition");
        b.node(&ast)?
    };
    b.finish(root)
}

/// Parses a finite or rational tree.
pub fn parse_tree(sig: &Signature, text: &str) -> Result<TreeValue> {
    tree_at_line(sig, text, 1)
}

/// Parses a finite tree; cyclic input is rejected.
pub fn parse_term(sig: &Signature, text: &str) -> Result<FiniteTree> {
    match parse_tree(sig, text)? {
        TreeValue::Finite(t) => Ok(t),
        TreeValue::Rational(r) => r.to_finite(),
    }
}

fn set_arity(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("set")?;
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    digits.parse().ok()
}

/// Prefix syntax; with `sets`, `setn(...)` is printed as `{...}`.
pub fn print_finite(t: &FiniteTree, sets: bool) -> String {
    let mut out = String::new();
    write_finite(t, sets, &mut out);
    out
}

fn write_finite(t: &FiniteTree, sets: bool, out: &mut String) {
    write_node(t.head(), t.children(), sets, out, |c, out| write_finite(c, sets, out));
}

fn write_node<C>(head: &Head, kids: &[C], sets: bool, out: &mut String, mut child: impl FnMut(&C, &mut String)) {
    let braces = sets && !head.is_var() && set_arity(head.name()) == Some(kids.len());
    if braces {
        out.push('{');
    } else {
        out.push_str(head.name());
        if kids.is_empty() {
            return;
        }
        out.push('(');
    }
    for (i, c) in kids.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        child(c, out);
    }
    out.push(if braces { '}' } else { ')' });
}

/// Prints a tree value; infinite trees name their cyclic states in
/// breadth-first order and inline the finite parts.
pub fn print_tree(v: &TreeValue, sets: bool) -> String {
    match v.as_finite() {
        Some(t) => print_finite(&t, sets),
        None => print_rational(&v.to_rational(), sets),
    }
}

fn print_rational(r: &RationalTree, sets: bool) -> String {
    let infinite = r.infinite_states();
    let heads: HashSet<&str> = r.states().iter().map(|s| s.head.name()).collect();
    let prefix = ["s", "q", "st", "state"]
        .into_iter()
        .find(|p| {
            !heads.iter().any(|h| {
                h.strip_prefix(p)
                    .is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
            })
        })
        .unwrap_or("state_");
    // Breadth-first numbering of the infinite states from the root.
    let mut names: HashMap<usize, String> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([r.root()]);
    let mut seen = HashSet::from([r.root()]);
    while let Some(s) = queue.pop_front() {
        if infinite[s] {
            names.insert(s, format!("{prefix}{}", order.len()));
            order.push(s);
        }
        for &j in &r.state(s).succ {
            if seen.insert(j) {
                queue.push_back(j);
            }
        }
    }
    let finite_tree = |s: usize| r.rerooted(s).to_finite().expect("finite state");
    let body = |s: usize| {
        let st = r.state(s);
        let mut out = String::new();
        write_node(&st.head, &st.succ, sets, &mut out, |&j, out| match names.get(&j) {
            Some(n) => out.push_str(n),
            None => write_finite(&finite_tree(j), sets, out),
        });
        out
    };
    let mut out = format!("rec {}. {}", names[&order[0]], body(order[0]));
    for &s in &order[1..] {
        out.push_str(&format!("; {} = {}", names[&s], body(s)));
    }
    out
}

/// `x = tree` per visible variable.
pub fn print_solution(sol: &SolutionMap, e: &RecEquationSystem, sets: bool) -> String {
    let mut out = String::new();
    for (i, name) in sol.vars.iter().enumerate() {
        if !e.is_aux(i) {
            out.push_str(&format!("{name} = {}\n", print_tree(&sol.values[i], sets)));
        }
    }
    out
}

/// One equation per line (`eq` prefix optional); a right-hand side
/// starting with `param`, or containing `rec` or named states, is a
/// parameter tree.
pub fn parse_equations(pres: &Presentation, text: &str) -> Result<RecEquationSystem> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if !line.is_empty() {
            items.push((idx + 1, line.to_string()));
        }
    }
    equations_from_items(pres, items)
}

/// The inline form: items separated by `;` or newlines. Named states of a
/// parameter continue that parameter while their name occurs in it.
pub fn parse_inline_equations(pres: &Presentation, text: &str) -> Result<RecEquationSystem> {
    let mut items: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        for seg in strip_comment(raw).split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let continues = items.last().is_some_and(|(_, prev): &(usize, String)| {
                let rhs = prev.split_once('=').map_or("", |(_, r)| r);
                is_param_text(rhs)
                    && seg.split_once('=').is_some_and(|(lhs, _)| {
                        let lhs = lhs.trim();
                        tokenize(rhs, 0).is_ok_and(|toks| toks.contains(&Tok::Ident(lhs.to_string())))
                    })
            });
            if continues {
                let last = items.last_mut().expect("checked above");
                last.1.push_str("; ");
                last.1.push_str(seg);
            } else {
                items.push((idx + 1, seg.to_string()));
            }
        }
    }
    equations_from_items(pres, items)
}

fn is_param_text(rhs: &str) -> bool {
    let rhs = rhs.trim();
    rhs.starts_with("param ")
        || tokenize(rhs, 0).is_ok_and(|t| t.contains(&Tok::Ident("rec".into())) || t.contains(&Tok::Equals))
}

struct Flattener<'a> {
    sig: &'a Signature,
    vars: HashMap<String, usize>,
    eqs: Vec<(String, Option<Rhs>)>,
    aux: Vec<bool>,
    line: usize,
}

impl Flattener<'_> {
    /// The variable standing for a subterm, adding an auxiliary one unless
    /// the subterm is a recursion variable.
    fn var_for(&mut self, ast: &Ast) -> Result<usize> {
        if let Ast::App {
            name, parens: false, ..
        } = ast
        {
            if let Some(&i) = self.vars.get(name) {
                return Ok(i);
            }
        }
        let i = self.eqs.len();
        let name = format!("_{i}");
        self.eqs.push((name.clone(), None));
        self.aux.push(true);
        let rhs = self.rhs(&name, ast)?;
        self.eqs[i].1 = Some(rhs);
        Ok(i)
    }

    fn rhs(&mut self, owner: &str, ast: &Ast) -> Result<Rhs> {
        match ast {
            Ast::App { name, args, parens } => {
                if !parens && self.vars.contains_key(name) {
                    return Err(Error::Unguarded(owner.to_string()));
                }
                let head = leaf_or_op(self.sig, name, *parens, args.len())?;
                if head.is_var() {
                    return Ok(Rhs::Param(FiniteTree::leaf(head).into()));
                }
                let args = args.iter().map(|a| self.var_for(a)).collect::<Result<Vec<_>>>()?;
                Ok(Rhs::Flat(FlatTerm::new(head, args)))
            }
            Ast::Set(args) => {
                let head = Head::op(&set_op(self.sig, args.len(), self.line)?);
                let args = args.iter().map(|a| self.var_for(a)).collect::<Result<Vec<_>>>()?;
                Ok(Rhs::Flat(FlatTerm::new(head, args)))
            }
            Ast::Rec(..) => Err(Error::syntax(self.line, "recursive terms must be parameters")),
        }
    }
}

fn equations_from_items(pres: &Presentation, items: Vec<(usize, String)>) -> Result<RecEquationSystem> {
    let sig = pres.signature();
    let mut parsed = Vec::new();
    let mut fl = Flattener {
        sig,
        vars: HashMap::new(),
        eqs: Vec::new(),
        aux: Vec::new(),
        line: 0,
    };
    for (line, item) in items {
        let item = item.strip_prefix("eq ").unwrap_or(&item).trim().to_string();
        let (lhs, rhs) = item
            .split_once('=')
            .ok_or_else(|| Error::syntax(line, "expected `name = term`"))?;
        let lhs = lhs.trim();
        if !is_identifier(lhs) || lhs == "rec" || lhs == "param" {
            return Err(Error::syntax(line, format!("bad variable `{lhs}`")));
        }
        if sig.contains(lhs) {
            return Err(Error::syntax(line, format!("`{lhs}` is an operation")));
        }
        if fl.vars.insert(lhs.to_string(), fl.eqs.len()).is_some() {
            return Err(Error::syntax(line, format!("`{lhs}` defined twice")));
        }
        fl.eqs.push((lhs.to_string(), None));
        fl.aux.push(false);
        parsed.push((line, lhs.to_string(), rhs.trim().to_string()));
    }
    for (line, lhs, rhs) in parsed {
        fl.line = line;
        let i = fl.vars[&lhs];
        let r = if is_param_text(&rhs) {
            let body = rhs.strip_prefix("param ").unwrap_or(&rhs);
            let t = tree_at_line(sig, body, line)?;
            let r = t.to_rational();
            if let Some(s) = r
                .states()
                .iter()
                .find(|s| s.head.is_var() && fl.vars.contains_key(s.head.name()))
            {
                return Err(Error::syntax(
                    line,
                    format!("parameter of `{lhs}` mentions recursion variable `{}`", s.head.name()),
                ));
            }
            Rhs::Param(t)
        } else {
            let mut p = Parser::new(&rhs, line)?;
            let ast = p.term()?;
            if !p.at_end() {
                return Err(Error::syntax(line, "unexpected trailing input"));
            }
            fl.rhs(&lhs, &ast)?
        };
        fl.eqs[i].1 = Some(r);
    }
    let eqs = fl
        .eqs
        .into_iter()
        .map(|(n, r)| (n, r.expect("every variable gets a right-hand side")))
        .collect();
    RecEquationSystem::with_aux(pres, eqs, fl.aux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin;
    use crate::solver::solve;
    use crate::trees::CutPoint;

    fn sig(pres: &str) -> Signature {
        crate::presentation::parse_builtin(pres).unwrap().signature().clone()
    }

    #[test]
    fn terms_and_variables() {
        let s = Signature::from_ops([("a", 1), ("b", 1), ("c", 0)]).unwrap();
        let t = parse_term(&s, "a(b(x))").unwrap();
        assert_eq!(t.to_string(), "a(b(x))");
        assert!(parse_term(&s, "c").unwrap().head() == &Head::op("c"));
        assert!(parse_term(&s, "x").unwrap().head().is_var());
        assert_eq!(parse_term(&s, "d(x)").unwrap_err().name(), "UnknownOp");
        assert_eq!(parse_term(&s, "a(x, x)").unwrap_err().name(), "ArityMismatch");
        assert_eq!(parse_term(&s, "a").unwrap_err().name(), "ArityMismatch");
        assert_eq!(parse_term(&s, "a(x").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse_term(&s, "rec s. a(s)").unwrap_err().name(), "InfiniteTree");
    }

    #[test]
    fn set_sugar() {
        let s = sig("pf");
        let t = parse_term(&s, "{{{}}, {}}").unwrap();
        assert_eq!(t.to_string(), "set2(set1(set0), set0)");
        assert_eq!(print_finite(&t, true), "{{{}}, {}}");
        assert_eq!(parse_term(&sig("id"), "{}").unwrap_err().name(), "SyntaxError");
    }

    #[test]
    fn rational_forms_agree() {
        let s = sig("product(a,b)");
        let a = parse_tree(&s, "rec s0. a(s1); s1 = b(s0)").unwrap();
        let b = parse_tree(&s, "s0 = a(s1); s1 = b(s0)").unwrap();
        let c = parse_tree(&s, "rec s. a(b(s))").unwrap();
        let d = parse_tree(&s, "rec s. a(rec t. b(s))").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, d);
        assert_eq!(print_tree(&a, false), "rec s0. a(s1); s1 = b(s0)");
        let e = parse_tree(&s, "s0 = s1; s1 = a(s0)").unwrap();
        assert_eq!(e, parse_tree(&s, "rec s. a(s)").unwrap());
        assert_eq!(parse_tree(&s, "rec s. s").unwrap_err().name(), "Unguarded");
        assert_eq!(parse_tree(&s, "s0 = s1; s1 = s0").unwrap_err().name(), "Unguarded");
    }

    #[test]
    fn printing_inlines_finite_parts() {
        let s = sig("pf");
        let t = parse_tree(&s, "rec s. {s, {}}").unwrap();
        assert_eq!(print_tree(&t, true), "rec s0. {s0, {}}");
        assert_eq!(parse_tree(&s, &print_tree(&t, true)).unwrap(), t);
    }

    #[test]
    fn equations_flatten() {
        let pres = builtin("product", &["a", "b"]).unwrap();
        let e = parse_inline_equations(&pres, "x=a(b(x));y=a(z)").unwrap();
        assert_eq!(e.vars().iter().filter(|v| !v.starts_with('_')).count(), 2);
        let sol = solve(&e).unwrap();
        let p = CutPoint::var("p");
        assert_eq!(sol.get("x").unwrap().cut(4, &p).to_string(), "a(b(a(b(p))))");
        assert_eq!(sol.get("y").unwrap().as_finite().unwrap().to_string(), "a(z)");
        assert_eq!(
            parse_inline_equations(&pres, "x = y; y = a(x)").unwrap_err().name(),
            "Unguarded"
        );
        assert_eq!(
            parse_inline_equations(&pres, "x = a(x); x = b(x)").unwrap_err().name(),
            "SyntaxError"
        );
        assert_eq!(
            parse_inline_equations(&pres, "a = a(x)").unwrap_err().name(),
            "SyntaxError"
        );
    }

    #[test]
    fn parameters() {
        let pres = builtin("product", &["a", "b"]).unwrap();
        let e = parse_equations(&pres, "eq x = a(y)\neq y = param rec s. b(s)\n").unwrap();
        let sol = solve(&e).unwrap();
        let p = CutPoint::var("p");
        assert_eq!(sol.get("x").unwrap().cut(3, &p).to_string(), "a(b(b(p)))");
        let e = parse_inline_equations(&pres, "x = a(y); y = param rec s0. a(s1); s1 = b(s0)").unwrap();
        assert_eq!(e.len(), 2);
        let e = parse_inline_equations(&pres, "x = z").unwrap();
        assert!(matches!(e.rhs()[0], Rhs::Param(_)));
    }

    #[test]
    fn solutions_round_trip() {
        let pres = builtin("pf", &[]).unwrap();
        let e = parse_inline_equations(&pres, "x = {x, y}; y = {}").unwrap();
        let sol = solve(&e).unwrap();
        let text = print_solution(&sol, &e, true);
        assert_eq!(text, "x = rec s0. {{}, s0}\ny = {}\n");
        let again = solve(&parse_equations(&pres, &text).unwrap()).unwrap();
        for v in ["x", "y"] {
            assert_eq!(again.get(v).unwrap(), sol.get(v).unwrap());
        }
    }
}
