//! Ranked alphabets, node heads and one-layer terms.
//!
//! Variables live in their own namespace: a [`Head::Var`] never names an
//! operation, so a signature extended by variables is simply the signature
//! plus extra leaves.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The label of a tree node: an operation symbol or a variable.
///
/// Ordering puts variables before operations, then compares names; this is
/// the order used for canonical argument sorting.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Var(Arc<str>),
    Op(Arc<str>),
}

impl Head {
    pub fn op(name: &str) -> Self {
        Head::Op(Arc::from(name))
    }

    pub fn var(name: &str) -> Self {
        Head::Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        match self {
            Head::Var(n) | Head::Op(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Head::Var(_))
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One functor layer `head(k1, ..., kn)` over argument keys of type `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatTerm<K> {
    pub head: Head,
    pub args: Vec<K>,
}

impl<K> FlatTerm<K> {
    pub fn new(head: Head, args: Vec<K>) -> Self {
        FlatTerm { head, args }
    }

    pub fn map<L>(self, f: impl FnMut(K) -> L) -> FlatTerm<L> {
        FlatTerm {
            head: self.head,
            args: self.args.into_iter().map(f).collect(),
        }
    }
}

/// Generates one operation per arity, named `prefix` followed by the arity
/// in decimal (`tup0`, `tup1`, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AritySchema {
    pub prefix: String,
    pub max_arity: Option<usize>,
}

impl AritySchema {
    pub fn op_name(&self, arity: usize) -> String {
        format!("{}{}", self.prefix, arity)
    }

    fn arity_of(&self, name: &str) -> Option<usize> {
        let digits = name.strip_prefix(self.prefix.as_str())?;
        if digits.is_empty()
            || !digits.bytes().all(|b| b.is_ascii_digit())
            || (digits.len() > 1 && digits.starts_with('0'))
        {
            return None;
        }
        let n: usize = digits.parse().ok()?;
        match self.max_arity {
            Some(max) if n > max => None,
            _ => Some(n),
        }
    }
}

/// A finitary signature, possibly with a schematic family of operations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    ops: BTreeMap<String, usize>,
    schema: Option<AritySchema>,
}

impl Signature {
    /// Builds a signature from explicit `(name, arity)` pairs.
    pub fn from_ops<'a>(ops: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        let mut sig = Signature::default();
        for (name, arity) in ops {
            sig.add_op(name, arity)?;
        }
        Ok(sig)
    }

    /// A purely schematic signature: one operation per arity.
    pub fn schematic(prefix: &str, max_arity: Option<usize>) -> Self {
        Signature {
            ops: BTreeMap::new(),
            schema: Some(AritySchema {
                prefix: prefix.to_string(),
                max_arity,
            }),
        }
    }

    pub fn add_op(&mut self, name: &str, arity: usize) -> Result<()> {
        if !is_identifier(name) {
            return Err(Error::syntax(0, format!("`{name}` is not an identifier")));
        }
        if self.arity(name).is_some() {
            return Err(Error::DuplicateOp(name.to_string()));
        }
        self.ops.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn set_schema(&mut self, schema: AritySchema) -> Result<()> {
        if let Some(clash) = self.ops.keys().find(|n| schema.arity_of(n).is_some()) {
            return Err(Error::DuplicateOp(clash.clone()));
        }
        self.schema = Some(schema);
        Ok(())
    }

    pub fn schema(&self) -> Option<&AritySchema> {
        self.schema.as_ref()
    }

    /// Arity of `name`, or `None` when it is not an operation of this signature.
    pub fn arity(&self, name: &str) -> Option<usize> {
        self.ops
            .get(name)
            .copied()
            .or_else(|| self.schema.as_ref().and_then(|s| s.arity_of(name)))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    /// Explicitly declared operations, sorted by name.
    pub fn explicit_ops(&self) -> impl Iterator<Item = (&str, usize)> {
        self.ops.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// The nullary operations (Σ₀), including the schematic one if any.
    pub fn nullaries(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .ops
            .iter()
            .filter(|(_, a)| **a == 0)
            .map(|(n, _)| n.clone())
            .collect();
        if let Some(s) = &self.schema {
            out.push(s.op_name(0));
        }
        out
    }

    /// The name of the operation of the given arity, for schematic signatures.
    pub fn schematic_op(&self, arity: usize) -> Option<String> {
        let s = self.schema.as_ref()?;
        match s.max_arity {
            Some(max) if arity > max => None,
            _ => Some(s.op_name(arity)),
        }
    }

    pub fn validate_head(&self, head: &Head, nargs: usize) -> Result<()> {
        let expected = match head {
            Head::Var(_) => 0,
            Head::Op(name) => self.arity(name).ok_or_else(|| Error::UnknownOp(name.to_string()))?,
        };
        if expected != nargs {
            return Err(Error::ArityMismatch {
                op: head.name().to_string(),
                expected,
                found: nargs,
            });
        }
        Ok(())
    }
}

/// Checks that a flat term is an element of H_Σ over its keys.
pub fn validate_flat<K>(sig: &Signature, t: &FlatTerm<K>) -> Result<()> {
    sig.validate_head(&t.head, t.args.len())
}

/// Parses the line-oriented signature format:
///
/// ```text
/// # comment
/// op a 1
/// op p 0
/// schema tup          # one op per arity: tup0, tup1, ...
/// schema set max 3    # bounded schematic family
/// ```
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut sig = Signature::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["op", name, arity] => {
                let arity: usize = arity
                    .parse()
                    .map_err(|_| Error::syntax(line_no, format!("bad arity `{arity}`")))?;
                sig.add_op(name, arity).map_err(|e| at_line(e, line_no))?;
            }
            ["schema", prefix] => sig
                .set_schema(AritySchema {
                    prefix: prefix.to_string(),
                    max_arity: None,
                })
                .map_err(|e| at_line(e, line_no))?,
            ["schema", prefix, "max", max] => {
                let max: usize = max
                    .parse()
                    .map_err(|_| Error::syntax(line_no, format!("bad bound `{max}`")))?;
                sig.set_schema(AritySchema {
                    prefix: prefix.to_string(),
                    max_arity: Some(max),
                })
                .map_err(|e| at_line(e, line_no))?
            }
            _ => return Err(Error::syntax(line_no, format!("unrecognized line `{line}`"))),
        }
    }
    Ok(sig)
}

fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::SyntaxError { message, .. } => Error::SyntaxError { line, message },
        other => other,
    }
}

pub(crate) fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, arity) in &self.ops {
            writeln!(f, "op {name} {arity}")?;
        }
        if let Some(s) = &self.schema {
            match s.max_arity {
                Some(max) => writeln!(f, "schema {} max {}", s.prefix, max)?,
                None => writeln!(f, "schema {}", s.prefix)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn flat_terms_checked_against_arity() {
        let sig = parse_signature("op a 1\nop b 1").unwrap();
        assert!(validate_flat(&sig, &FlatTerm::new(Head::op("a"), vec![1])).is_ok());
        let err = validate_flat(&sig, &FlatTerm::new(Head::op("a"), vec![1, 2])).unwrap_err();
        assert_eq!(err.name(), "ArityMismatch");
        let err = validate_flat(&sig, &FlatTerm::new(Head::op("c"), Vec::<u32>::new())).unwrap_err();
        assert_eq!(err.name(), "UnknownOp");
        assert!(validate_flat(&sig, &FlatTerm::new(Head::var("x"), Vec::<u32>::new())).is_ok());
        assert!(validate_flat(&sig, &FlatTerm::new(Head::var("x"), vec![1])).is_err());
    }

    #[test]
    fn schema_generates_tuple_ops() {
        let sig = Signature::schematic("tup", None);
        assert!(validate_flat(&sig, &FlatTerm::new(Head::op("tup3"), vec![1, 2, 3])).is_ok());
        assert_eq!(sig.arity("tup0"), Some(0));
        assert_eq!(sig.arity("tup03"), None);
        assert_eq!(sig.arity("tup"), None);
        assert_eq!(sig.nullaries(), vec!["tup0".to_string()]);
        let bounded = Signature::schematic("set", Some(2));
        assert_eq!(bounded.arity("set3"), None);
        assert_eq!(bounded.schematic_op(3), None);
    }

    #[test]
    fn parses_declared_ops() {
        let sig = parse_signature("op a 1\nop b 1").unwrap();
        assert_eq!(sig.explicit_ops().collect::<Vec<_>>(), vec![("a", 1), ("b", 1)]);
        let sig = parse_signature("op p 0").unwrap();
        assert_eq!(sig.nullaries(), vec!["p".to_string()]);
    }

    #[test]
    fn rejects_duplicates_and_junk() {
        assert_eq!(parse_signature("op a 1\nop a 2").unwrap_err().name(), "DuplicateOp");
        assert_eq!(
            parse_signature("schema tup\nop tup2 2").unwrap_err().name(),
            "DuplicateOp"
        );
        assert_eq!(parse_signature("op a x").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse_signature("fn a 1").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse_signature("op 1a 1").unwrap_err().name(), "SyntaxError");
    }

    proptest! {
        #[test]
        fn parse_inverts_display(
            ops in proptest::collection::btree_map("[a-z][a-z0-9]{0,4}", 0usize..5, 0..6),
            schema in proptest::option::of(("[A-Z][a-z]{0,3}", proptest::option::of(0usize..4))),
        ) {
            let mut sig = Signature::default();
            for (n, a) in &ops {
                sig.add_op(n, *a).unwrap();
            }
            if let Some((prefix, max_arity)) = schema {
                sig.set_schema(AritySchema { prefix, max_arity }).unwrap();
            }
            let printed = sig.to_string();
            prop_assert_eq!(parse_signature(&printed).unwrap(), sig);
        }
    }
}
