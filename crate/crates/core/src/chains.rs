//! Finite stages of the initial and terminal chains of a presented functor.
//!
//! Stage `n + 1` is the set of canonical flat terms whose arguments range
//! over stage `n`. The initial chain starts from the empty set, the terminal
//! chain from the single cut point.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::presentation::Presentation;
use crate::signature::{FlatTerm, Head};
use crate::trees::{CutPoint, FiniteTree};

pub const DEFAULT_STAGE_CAP: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageKind {
    Initial,
    Terminal,
}

#[derive(Clone, Debug)]
pub struct StageSet {
    pub n: usize,
    pub kind: StageKind,
    /// Canonical trees in structural order.
    pub elements: Vec<FiniteTree>,
    pub pres: String,
    pub p: Option<CutPoint>,
}

impl StageSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StageConfig {
    pub cap: usize,
    pub exec: Execution,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig {
            cap: DEFAULT_STAGE_CAP,
            exec: Execution::default(),
        }
    }
}

pub fn enumerate_initial_stage(pres: &Presentation, n: usize) -> Result<StageSet> {
    enumerate_initial_stage_with(pres, n, &StageConfig::default())
}

pub fn enumerate_initial_stage_with(pres: &Presentation, n: usize, cfg: &StageConfig) -> Result<StageSet> {
    let mut stage = Vec::new();
    for _ in 0..n {
        stage = next_stage(pres, &stage, cfg)?;
    }
    Ok(StageSet {
        n,
        kind: StageKind::Initial,
        elements: stage,
        pres: pres.name().to_string(),
        p: None,
    })
}

pub fn enumerate_terminal_stage(pres: &Presentation, n: usize, p: &CutPoint) -> Result<StageSet> {
    enumerate_terminal_stage_with(pres, n, p, &StageConfig::default())
}

pub fn enumerate_terminal_stage_with(
    pres: &Presentation,
    n: usize,
    p: &CutPoint,
    cfg: &StageConfig,
) -> Result<StageSet> {
    let mut stage = vec![pres.normal_form(&p.leaf())?];
    for _ in 0..n {
        stage = next_stage(pres, &stage, cfg)?;
    }
    Ok(StageSet {
        n,
        kind: StageKind::Terminal,
        elements: stage,
        pres: pres.name().to_string(),
        p: Some(p.clone()),
    })
}

/// Canonical flat terms over `keys`, as trees. The size is computed first so
/// that oversized stages fail without being built.
pub fn next_stage(pres: &Presentation, keys: &[FiniteTree], cfg: &StageConfig) -> Result<Vec<FiniteTree>> {
    if !pres.has_enumerator() {
        return Err(Error::NoEnumerator(pres.name().to_string()));
    }
    let k = keys.len();
    let too_big = || Error::CapExceeded { cap: cfg.cap };
    let mut out: BTreeSet<FiniteTree> = BTreeSet::new();
    if let Some(cap) = pres.set_cap() {
        let max = cap.unwrap_or(k).min(k);
        let mut count = 0usize;
        for i in 0..=max {
            count = count
                .checked_add(binomial(k, i).ok_or_else(too_big)?)
                .ok_or_else(too_big)?;
        }
        if count > cfg.cap {
            return Err(too_big());
        }
        // Keys are sorted, so each ascending index set is already in
        // canonical argument order.
        let sets = subsets(k, max);
        let trees = par::map(cfg.exec, &sets, |idx| {
            let kids: Vec<FiniteTree> = idx.iter().map(|&i| keys[i].clone()).collect();
            pres.layer(Head::op(&format!("set{}", kids.len())), kids)
        });
        for t in trees {
            out.insert(t?);
        }
        return Ok(out.into_iter().collect());
    }
    if pres.is_list() {
        if k > 0 {
            return Err(too_big());
        }
        out.insert(FiniteTree::op("tup0", vec![]));
        return Ok(out.into_iter().collect());
    }
    let ops: Vec<(String, usize)> = pres
        .signature()
        .explicit_ops()
        .map(|(n, a)| (n.to_string(), a))
        .collect();
    let mut count = 0usize;
    for (_, a) in &ops {
        let c = u32::try_from(*a)
            .ok()
            .and_then(|a| k.checked_pow(a))
            .ok_or_else(too_big)?;
        count = count.checked_add(c).ok_or_else(too_big)?;
    }
    if count > cfg.cap {
        return Err(too_big());
    }
    for (name, arity) in &ops {
        let total = k.pow(*arity as u32);
        let indices: Vec<usize> = (0..total).collect();
        let trees = par::map(cfg.exec, &indices, |&idx| {
            let mut rest = idx;
            let kids: Vec<FiniteTree> = (0..*arity)
                .map(|_| {
                    let c = keys[rest % k].clone();
                    rest /= k.max(1);
                    c
                })
                .collect();
            let flat = pres.normalize(FlatTerm::new(Head::op(name), kids))?;
            Ok(FiniteTree::node(flat.head, flat.args))
        });
        for t in trees {
            out.insert(t?);
        }
    }
    Ok(out.into_iter().collect())
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    usize::try_from(acc).ok()
}

/// Index sets of size at most `max` drawn from `0..k`, each ascending.
fn subsets(k: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |&l: &usize| l + 1);
            for i in from..k {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
