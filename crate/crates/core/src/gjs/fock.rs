//! Truncated Fock space with creation and annihilation by one-top-string boxes.

use super::{contract_contents, BoxShape, Convention, GJSElement};
use crate::error::{Error, Result};
use crate::tl::{Accumulator, TLElement};
use std::collections::BTreeMap;
use std::fmt;

/// Vector with components of top degree `0..=cutoff`. `truncated` records
/// that some creation produced a component above the cutoff, which was dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockVector {
    cutoff: usize,
    terms: BTreeMap<BoxShape, TLElement>,
    truncated: bool,
}

fn one_string(x: &GJSElement) -> Result<()> {
    if let Some(s) = x.terms().keys().find(|s| s.n != 1) {
        return Err(Error::Shape(format!("creation and annihilation need one top string, got shape {s}")));
    }
    Ok(())
}

fn finish(accs: BTreeMap<BoxShape, Accumulator>) -> BTreeMap<BoxShape, TLElement> {
    let mut terms = BTreeMap::new();
    for (shape, acc) in accs {
        let m = acc.finish();
        if !m.is_empty() {
            terms.insert(shape, TLElement::from_map(0, shape.points(), m));
        }
    }
    terms
}

impl FockVector {
    pub fn zero(cutoff: usize) -> Self {
        FockVector { cutoff, terms: BTreeMap::new(), truncated: false }
    }

    /// The vacuum `1_0`, the empty box.
    pub fn vacuum(cutoff: usize) -> Self {
        FockVector::from_element(cutoff, &GJSElement::unit(Convention::Filtered, 0)).expect("vacuum")
    }

    pub fn from_element(cutoff: usize, x: &GJSElement) -> Result<Self> {
        if let Some(s) = x.terms().keys().find(|s| s.n > cutoff) {
            return Err(Error::Shape(format!("shape {s} is above the cutoff {cutoff}")));
        }
        Ok(FockVector { cutoff, terms: x.terms().clone(), truncated: false })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn terms(&self) -> &BTreeMap<BoxShape, TLElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degree-`n` part as a filtered element.
    pub fn component(&self, n: usize) -> GJSElement {
        let mut out = GJSElement::zero(Convention::Filtered);
        for (s, x) in self.terms.iter().filter(|(s, _)| s.n == n) {
            out = out.add(&GJSElement::from_box(Convention::Filtered, *s, x.clone()).expect("shape")).expect("same convention");
        }
        out
    }

    pub fn add(&self, o: &FockVector) -> Result<FockVector> {
        let a = GJSElement::from_terms_unchecked(Convention::Filtered, self.terms.clone());
        let b = GJSElement::from_terms_unchecked(Convention::Filtered, o.terms.clone());
        Ok(FockVector {
            cutoff: self.cutoff.max(o.cutoff),
            terms: a.add(&b)?.terms().clone(),
            truncated: self.truncated || o.truncated,
        })
    }

    /// `L_+(x) v`: concatenate `x` on the left.
    pub fn create(x: &GJSElement, v: &FockVector) -> Result<FockVector> {
        one_string(x)?;
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        let mut truncated = v.truncated;
        for (sx, cx) in x.terms() {
            for (sv, cv) in &v.terms {
                if sx.r != sv.l {
                    continue;
                }
                if sv.n + 1 > v.cutoff {
                    truncated = true;
                    continue;
                }
                let shape = BoxShape { l: sx.l, n: sv.n + 1, r: sv.r };
                contract_contents(cx, cv, sx.r, accs.entry(shape).or_default());
            }
        }
        Ok(FockVector { cutoff: v.cutoff, terms: finish(accs), truncated })
    }

    /// `L_-(x) v`: the top string of `x` caps the leftmost top string of `v`.
    pub fn annihilate(x: &GJSElement, v: &FockVector) -> Result<FockVector> {
        one_string(x)?;
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (sx, cx) in x.terms() {
            for (sv, cv) in &v.terms {
                if sx.r != sv.l || sv.n == 0 {
                    continue;
                }
                let shape = BoxShape { l: sx.l, n: sv.n - 1, r: sv.r };
                contract_contents(cx, cv, sx.r + 1, accs.entry(shape).or_default());
            }
        }
        Ok(FockVector { cutoff: v.cutoff, terms: finish(accs), truncated: v.truncated })
    }

    /// B-valued inner product, linear in both slots (all scalars are real).
    pub fn inner(v: &FockVector, w: &FockVector) -> GJSElement {
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (sx, x) in &v.terms {
            for (sy, y) in &w.terms {
                if sx.n != sy.n || sx.l != sy.l {
                    continue;
                }
                inner_box(*sx, x, *sy, y, &mut accs);
            }
        }
        GJSElement::from_terms_unchecked(Convention::Filtered, finish(accs))
    }
}

/// `<x|y>_B` for single boxes of shapes `(l,n,r)` and `(l,n,r')`.
pub fn inner_product_b(sx: BoxShape, x: &TLElement, sy: BoxShape, y: &TLElement) -> GJSElement {
    let mut accs = BTreeMap::new();
    if sx.n == sy.n && sx.l == sy.l {
        inner_box(sx, x, sy, y, &mut accs);
    }
    GJSElement::from_terms_unchecked(Convention::Filtered, finish(accs))
}

fn inner_box(sx: BoxShape, x: &TLElement, sy: BoxShape, y: &TLElement, accs: &mut BTreeMap<BoxShape, Accumulator>) {
    let star = GJSElement::from_terms_unchecked(Convention::Filtered, BTreeMap::from([(sx, x.clone())])).adjoint();
    let xs = &star.terms()[&BoxShape { l: sx.r, n: sx.n, r: sx.l }];
    let shape = BoxShape { l: sx.r, n: 0, r: sy.r };
    contract_contents(xs, y, sx.l + sx.n, accs.entry(shape).or_default());
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = GJSElement::from_terms_unchecked(Convention::Filtered, self.terms.clone());
        write!(f, "{x}")?;
        if self.truncated {
            f.write_str(" [truncated]")?;
        }
        Ok(())
    }
}

