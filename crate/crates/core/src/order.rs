//! The order by cutting on congruence classes.
//!
//! `[s] <= [s2]` iff `s ~ cut(s2, n)` for some `n`, or the classes coincide.

use crate::error::{Error, Result};
use crate::presentation::{CanonicalTree, Presentation};
use crate::trees::{cut, leq_cut, periodic_closure, CutPoint, FiniteTree, RationalTree, TreeValue};

/// A canonical value together with the presentation and cut point that
/// determine its order.
#[derive(Clone, Debug)]
pub struct OrderedElement {
    pub value: CanonicalTree,
    pub pres: Presentation,
    pub p: CutPoint,
}

impl OrderedElement {
    /// Normalizes `value` under `pres`.
    pub fn new(pres: &Presentation, value: impl Into<TreeValue>, p: &CutPoint) -> Result<Self> {
        Ok(OrderedElement {
            value: pres.canonical(&value.into())?,
            pres: pres.clone(),
            p: p.clone(),
        })
    }

    pub fn tree(&self) -> &TreeValue {
        self.value.value()
    }

    pub fn is_finite(&self) -> bool {
        self.tree().is_finite()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OrderConfig {
    /// Largest `n` tried for presentations that may change heights.
    pub depth_bound: usize,
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig { depth_bound: 16 }
    }
}

pub fn leq_quotient(a: &OrderedElement, b: &OrderedElement) -> Result<bool> {
    leq_quotient_with(a, b, &OrderConfig::default())
}

pub fn leq_quotient_with(a: &OrderedElement, b: &OrderedElement, cfg: &OrderConfig) -> Result<bool> {
    if a.pres.name() != b.pres.name() {
        return Err(Error::MixedPresentations(
            a.pres.name().to_string(),
            b.pres.name().to_string(),
        ));
    }
    if a.p != b.p {
        return Err(Error::Precondition(format!(
            "cut points differ: `{}` vs `{}`",
            a.p.head(),
            b.p.head()
        )));
    }
    let pres = &a.pres;
    if a.tree() == b.tree() {
        return Ok(true);
    }
    let Some(small) = a.tree().as_finite() else {
        return Ok(false);
    };
    if pres.height_preserving() {
        // A normalized cutting at n has height min(n, height), so only
        // n <= height(a) can match.
        for n in 0..=small.height() {
            if pres.normal_form_unchecked(&cut(b.tree(), n, &a.p))? == small {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let mut settled = true;
    let top = b.tree().height().map_or(cfg.depth_bound, |h| h.min(cfg.depth_bound));
    for n in 0..=top {
        let v = pres.equiv_finite(&small, &cut(b.tree(), n, &a.p))?;
        if v.holds() {
            return Ok(true);
        }
        settled &= v.is_exact();
    }
    if settled && b.tree().height().is_some_and(|h| h <= cfg.depth_bound) {
        Ok(false)
    } else {
        Err(Error::Undecided(cfg.depth_bound))
    }
}

/// The class of the cut point, below every other class.
pub fn least_element(pres: &Presentation, p: &CutPoint) -> Result<OrderedElement> {
    OrderedElement::new(pres, p.leaf(), p)
}

/// The join of an increasing chain of finite canonical trees, as a canonical
/// system. Chains that stop growing join to their last element.
pub fn join_quotient(pres: &Presentation, chain: &[FiniteTree], p: &CutPoint) -> Result<RationalTree> {
    let Some(top) = chain.last() else {
        return Err(Error::Precondition("empty chain".into()));
    };
    let elems = chain
        .iter()
        .map(|t| OrderedElement::new(pres, t.clone(), p))
        .collect::<Result<Vec<_>>>()?;
    for (i, w) in elems.windows(2).enumerate() {
        if !leq_quotient(&w[0], &w[1])? {
            return Err(Error::NotAChain(i));
        }
    }
    let top = pres.normal_form(top)?;
    let stable = chain.len() == 1 || elems[elems.len() - 2].tree() == elems[elems.len() - 1].tree();
    let closure = if stable {
        RationalTree::from_finite(&top)
    } else {
        periodic_closure(&top, p, &|t| pres.normal_form_unchecked(t))?
    };
    if pres.hereditary_exact() {
        pres.normal_system(&closure)
    } else {
        Ok(closure.minimized())
    }
}

/// Evaluates the compactness implication for one finite element: if `a` is
/// below the join of `chain`, it is already below some chain element.
pub fn compactness_check(a: &OrderedElement, chain: &[OrderedElement]) -> Result<bool> {
    if !a.is_finite() {
        return Err(Error::Precondition(
            "compactness is only claimed for finite elements".into(),
        ));
    }
    let mut trees = Vec::with_capacity(chain.len());
    for c in chain {
        match c.tree().as_finite() {
            Some(t) => trees.push(t),
            None => return Err(Error::Precondition("chain elements must be finite".into())),
        }
    }
    let join = join_quotient(&a.pres, &trees, &a.p)?;
    let j = OrderedElement::new(&a.pres, join, &a.p)?;
    if !leq_quotient(a, &j)? {
        return Ok(true);
    }
    for c in chain {
        if leq_quotient(a, c)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Monotonicity of the quotient map on one pair: `s <= s2` by cutting
/// implies `[s] <= [s2]`.
pub fn quotient_is_monotone_on(pres: &Presentation, s: &TreeValue, s2: &TreeValue, p: &CutPoint) -> Result<bool> {
    if !leq_cut(s, s2, p) {
        return Ok(true);
    }
    leq_quotient(
        &OrderedElement::new(pres, s.clone(), p)?,
        &OrderedElement::new(pres, s2.clone(), p)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::builtin;
    use crate::signature::Head;
    use crate::trees::State;

    fn s(t: FiniteTree) -> FiniteTree {
        FiniteTree::op("s", vec![t])
    }

    #[test]
    fn naturals_with_a_point() {
        let id = builtin("id", &[]).unwrap();
        let p = CutPoint::var("p");
        let lo = OrderedElement::new(&id, s(p.leaf()), &p).unwrap();
        let hi = OrderedElement::new(&id, s(s(FiniteTree::var("y"))), &p).unwrap();
        assert!(leq_quotient(&lo, &hi).unwrap());
        assert!(!leq_quotient(&hi, &lo).unwrap());
        assert!(leq_quotient(&hi, &hi).unwrap());
    }

    #[test]
    fn words_need_prefixes() {
        let pres = builtin("product", &["a", "b"]).unwrap();
        let x = CutPoint::var("x");
        let w = |letters: &str, end: &str| {
            letters
                .chars()
                .rev()
                .fold(FiniteTree::var(end), |t, c| FiniteTree::op(&c.to_string(), vec![t]))
        };
        let el = |t| OrderedElement::new(&pres, t, &x).unwrap();
        assert!(!leq_quotient(&el(w("ab", "x")), &el(w("ba", "y"))).unwrap());
        assert!(leq_quotient(&el(w("ab", "x")), &el(w("abb", "y"))).unwrap());
        assert!(!leq_quotient(&el(w("ab", "y")), &el(w("abb", "y"))).unwrap());
    }

    #[test]
    fn least_elements() {
        let pf = builtin("pf", &[]).unwrap();
        let p = CutPoint::nullary("set0");
        let bot = least_element(&pf, &p).unwrap();
        assert_eq!(bot.tree().as_finite().unwrap(), FiniteTree::op("set0", vec![]));
        let loop1 = RationalTree::new(vec![State::new(Head::op("set1"), vec![0])], 0).unwrap();
        assert!(leq_quotient(&bot, &OrderedElement::new(&pf, loop1, &p).unwrap()).unwrap());
        let prod = builtin("product", &["a"]).unwrap();
        let x = CutPoint::var("x");
        assert_eq!(
            least_element(&prod, &x).unwrap().tree().as_finite().unwrap(),
            FiniteTree::var("x")
        );
    }

    #[test]
    fn mixed_presentations_are_rejected() {
        let p = CutPoint::var("p");
        let a = OrderedElement::new(&builtin("id", &[]).unwrap(), p.leaf(), &p).unwrap();
        let b = OrderedElement::new(&builtin("pf", &[]).unwrap(), p.leaf(), &p).unwrap();
        assert_eq!(leq_quotient(&a, &b).unwrap_err().name(), "MixedPresentations");
    }

    #[test]
    fn compactness_on_cuttings() {
        let pf = builtin("pf", &[]).unwrap();
        let p = CutPoint::nullary("set0");
        let j = RationalTree::new(
            vec![
                State::new(Head::op("set2"), vec![1, 2]),
                State::new(Head::op("set1"), vec![0]),
                State::leaf(Head::op("set0")),
            ],
            0,
        )
        .unwrap();
        let jv: TreeValue = j.clone().into();
        let chain: Vec<OrderedElement> = (0..8)
            .step_by(2)
            .map(|n| OrderedElement::new(&pf, cut(&jv, n, &p), &p).unwrap())
            .collect();
        for n in 0..6 {
            let a = OrderedElement::new(&pf, cut(&jv, n, &p), &p).unwrap();
            assert!(compactness_check(&a, &chain).unwrap());
        }
        let inf = OrderedElement::new(&pf, j, &p).unwrap();
        assert_eq!(compactness_check(&inf, &chain).unwrap_err().name(), "Precondition");
    }

    #[test]
    fn quotient_join_recovers_a_set_loop() {
        let pf = builtin("pf", &[]).unwrap();
        let p = CutPoint::nullary("set0");
        // x = {x, {}}
        let sol = RationalTree::new(
            vec![State::new(Head::op("set2"), vec![0, 1]), State::leaf(Head::op("set0"))],
            0,
        )
        .unwrap();
        let sv: TreeValue = sol.clone().into();
        let chain: Vec<FiniteTree> = (0..=6).map(|n| pf.normal_form(&cut(&sv, n, &p)).unwrap()).collect();
        let j = join_quotient(&pf, &chain, &p).unwrap();
        assert!(j.bisimilar(&pf.normal_system(&sol).unwrap()));
    }
}
