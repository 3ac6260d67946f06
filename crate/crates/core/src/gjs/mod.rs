//! Graded and filtered algebras built from shaped TL boxes.
//!
//! A box of shape `(l, n, r)` is a TL element with no bottom points and
//! `l + n + r` top points. Those points are read along one line: left
//! strings bottom to top, then top strings left to right, then right strings
//! top to bottom. Every gluing below is "join position `a` with position `b`"
//! on concatenated lines.

mod fock;
mod quasi;

pub use fock::{inner_product_b, FockVector};
pub use quasi::{quasi_basis, QuasiBasis};

use crate::diagram::{self, TLDiagram};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tl::{Accumulator, TLElement};
use std::collections::{BTreeMap, HashMap};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoxShape {
    pub l: usize,
    pub n: usize,
    pub r: usize,
}

impl BoxShape {
    pub fn new(l: usize, n: usize, r: usize) -> Result<Self> {
        if (l + n + r) % 2 == 1 {
            return Err(Error::Shape(format!("shape ({l},{n},{r}) has an odd number of strings")));
        }
        Ok(BoxShape { l, n, r })
    }

    pub fn points(&self) -> usize {
        self.l + self.n + self.r
    }
}

impl fmt::Display for BoxShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.l, self.n, self.r)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    Graded,
    Filtered,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GJSElement {
    convention: Convention,
    terms: BTreeMap<BoxShape, TLElement>,
}

/// Points of several boxes on one line, plus the arcs that join them.
struct Board {
    partner: Vec<u16>,
    caps: Vec<Option<u16>>,
}

impl Board {
    fn new() -> Self {
        Board { partner: Vec::new(), caps: Vec::new() }
    }

    fn place(&mut self, line: &[u16]) -> usize {
        let off = self.partner.len();
        self.partner.extend(line.iter().map(|&p| p + off as u16));
        self.caps.extend(std::iter::repeat_n(None, line.len()));
        off
    }

    fn join(&mut self, a: usize, b: usize) {
        self.caps[a] = Some(b as u16);
        self.caps[b] = Some(a as u16);
    }

    /// Free points keep their order on the board.
    fn close(self) -> (Vec<u16>, usize) {
        diagram::glue(&self.partner, &self.caps)
    }

    /// Free points are renumbered by their position in `order`.
    fn close_in(self, order: &[usize]) -> (Vec<u16>, usize) {
        let free: Vec<usize> = (0..self.caps.len()).filter(|&p| self.caps[p].is_none()).collect();
        let (m, loops) = diagram::glue(&self.partner, &self.caps);
        let mut pos = vec![usize::MAX; self.caps.len()];
        for (k, &p) in order.iter().enumerate() {
            pos[p] = k;
        }
        let mut out = vec![0u16; m.len()];
        for (i, &j) in m.iter().enumerate() {
            out[pos[free[i]]] = pos[free[j as usize]] as u16;
        }
        (out, loops)
    }
}

/// Concatenate two lines and join `x[len_x - 1 - a]` with `y[a]` for `a < c`.
pub(crate) fn contract_lines(x: &[u16], y: &[u16], c: usize) -> (Vec<u16>, usize) {
    let mut b = Board::new();
    b.place(x);
    let oy = b.place(y);
    for a in 0..c {
        b.join(x.len() - 1 - a, oy + a);
    }
    b.close()
}

/// Pairwise contraction of two boxes' contents, bilinearly.
pub(crate) fn contract_contents(x: &TLElement, y: &TLElement, c: usize, acc: &mut Accumulator) {
    let ylines: Vec<(Vec<u16>, &Scalar)> = y.iter().map(|(d, s)| (d.top_line(), s)).collect();
    for (dx, cx) in x.iter() {
        let lx = dx.top_line();
        for (ly, cy) in &ylines {
            let (m, loops) = contract_lines(&lx, ly, c);
            acc.add_product(TLDiagram::from_top_line(&m), cx, cy, loops);
        }
    }
}

impl GJSElement {
    pub fn zero(convention: Convention) -> Self {
        GJSElement { convention, terms: BTreeMap::new() }
    }

    /// A single box; `content` must have no bottom points and `l+n+r` top points.
    pub fn from_box(convention: Convention, shape: BoxShape, content: TLElement) -> Result<Self> {
        if content.bottom_count() != 0 || content.top_count() != shape.points() {
            return Err(Error::Shape(format!(
                "content {}→{} does not fill shape {shape}",
                content.bottom_count(),
                content.top_count()
            )));
        }
        let mut x = GJSElement::zero(convention);
        if !content.is_zero() {
            x.terms.insert(shape, content);
        }
        Ok(x)
    }

    pub fn from_diagram(convention: Convention, shape: BoxShape, d: TLDiagram) -> Result<Self> {
        GJSElement::from_box(convention, shape, TLElement::from_diagram(d))
    }

    /// `1_k`: `k` strings running from the left side to the right side.
    pub fn unit(convention: Convention, k: usize) -> Self {
        let line: Vec<u16> = (0..2 * k).map(|i| (2 * k - 1 - i) as u16).collect();
        let shape = BoxShape { l: k, n: 0, r: k };
        GJSElement::from_diagram(convention, shape, TLDiagram::from_top_line(&line)).expect("unit shape")
    }

    /// The cup as a `(0,2,0)` box.
    pub fn cup(convention: Convention) -> Self {
        GJSElement::from_diagram(convention, BoxShape { l: 0, n: 2, r: 0 }, TLDiagram::cup()).expect("cup shape")
    }

    pub(crate) fn from_terms_unchecked(convention: Convention, terms: BTreeMap<BoxShape, TLElement>) -> Self {
        GJSElement { convention, terms }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn terms(&self) -> &BTreeMap<BoxShape, TLElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_convention(&self, o: &GJSElement) -> Result<()> {
        if self.convention != o.convention {
            return Err(Error::Convention("graded and filtered elements only meet through phi".into()));
        }
        Ok(())
    }

    fn expect(&self, c: Convention) -> Result<()> {
        if self.convention != c {
            return Err(Error::Convention(format!("operation needs a {c:?} element")));
        }
        Ok(())
    }

    fn from_accumulators(convention: Convention, accs: BTreeMap<BoxShape, Accumulator>) -> Self {
        let mut terms = BTreeMap::new();
        for (shape, acc) in accs {
            let m = acc.finish();
            if !m.is_empty() {
                terms.insert(shape, TLElement::from_map(0, shape.points(), m));
            }
        }
        GJSElement { convention, terms }
    }

    pub fn add(&self, o: &GJSElement) -> Result<GJSElement> {
        self.same_convention(o)?;
        let mut out = self.clone();
        for (shape, x) in &o.terms {
            let sum = match out.terms.get(shape) {
                Some(y) => y.add(x)?,
                None => x.clone(),
            };
            if sum.is_zero() {
                out.terms.remove(shape);
            } else {
                out.terms.insert(*shape, sum);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &GJSElement) -> Result<GJSElement> {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> GJSElement {
        if c.is_zero() {
            return GJSElement::zero(self.convention);
        }
        GJSElement {
            convention: self.convention,
            terms: self.terms.iter().map(|(s, x)| (*s, x.scale(c))).collect(),
        }
    }

    /// Mirror left and right: `(l,n,r) -> (r,n,l)`.
    pub fn adjoint(&self) -> GJSElement {
        let mut terms = BTreeMap::new();
        for (s, x) in &self.terms {
            let shape = BoxShape { l: s.r, n: s.n, r: s.l };
            let mut acc = Accumulator::new();
            for (d, c) in x.iter() {
                let line = d.top_line();
                let n = line.len();
                let rev: Vec<u16> = (0..n).map(|p| (n - 1 - line[n - 1 - p] as usize) as u16).collect();
                acc.add(TLDiagram::from_top_line(&rev), c, 0);
            }
            terms.insert(shape, TLElement::from_map(0, shape.points(), acc.finish()));
        }
        GJSElement { convention: self.convention, terms }
    }

    /// Graded product on the semifinite algebra: right strings of `self`
    /// meet left strings of `o`; top strings are concatenated.
    pub fn wedge(&self, o: &GJSElement) -> Result<GJSElement> {
        self.expect(Convention::Graded)?;
        o.expect(Convention::Graded)?;
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (sx, x) in &self.terms {
            for (sy, y) in &o.terms {
                if sx.r != sy.l {
                    continue;
                }
                let shape = BoxShape { l: sx.l, n: sx.n + sy.n, r: sy.r };
                contract_contents(x, y, sx.r, accs.entry(shape).or_default());
            }
        }
        Ok(GJSElement::from_accumulators(Convention::Graded, accs))
    }

    fn check_level(&self, k: usize) -> Result<()> {
        for s in self.terms.keys() {
            if s.l != k || s.r != k {
                return Err(Error::Shape(format!("shape {s} is not in Gr_{k}")));
            }
        }
        Ok(())
    }

    /// `∧_k`; both factors must live in `Gr_k`.
    pub fn graded_mul(&self, o: &GJSElement, k: usize) -> Result<GJSElement> {
        self.check_level(k)?;
        o.check_level(k)?;
        self.wedge(o)
    }

    /// Semifinite trace: close the side strings around and sum over all TL
    /// cappings of the top strings.
    pub fn tau_infty(&self) -> Result<Scalar> {
        self.expect(Convention::Graded)?;
        let mut acc = Accumulator::new();
        let mut cappings: HashMap<usize, Vec<Vec<u16>>> = HashMap::new();
        for (s, x) in &self.terms {
            if s.l != s.r || s.n % 2 == 1 {
                continue;
            }
            let caps_for = cappings.entry(s.n).or_insert_with(|| diagram::noncrossing_matchings(s.n));
            let big_n = s.points();
            for (d, c) in x.iter() {
                let line = d.top_line();
                for t in caps_for.iter() {
                    let mut b = Board::new();
                    b.place(&line);
                    for i in 0..s.l {
                        b.join(i, big_n - 1 - i);
                    }
                    for (i, &j) in t.iter().enumerate() {
                        if (j as usize) > i {
                            b.join(s.l + i, s.l + j as usize);
                        }
                    }
                    let (_, loops) = b.close();
                    acc.add(TLDiagram::empty(), c, loops);
                }
            }
        }
        Ok(acc.finish().remove(&TLDiagram::empty()).unwrap_or_else(Scalar::zero))
    }

    /// Normalized trace on `Gr_k`: `d^{-k} tau_infty`.
    pub fn voiculescu_trace(&self, k: usize) -> Result<Scalar> {
        self.check_level(k)?;
        Ok(self.tau_infty()? * Scalar::delta_pow(-(k as i64)))
    }

    /// Filtered product: sum over `j` of capping `j` adjacent top strings.
    pub fn filtered_mul(&self, o: &GJSElement) -> Result<GJSElement> {
        self.expect(Convention::Filtered)?;
        o.expect(Convention::Filtered)?;
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (sx, x) in &self.terms {
            for (sy, y) in &o.terms {
                if sx.r != sy.l {
                    continue;
                }
                for j in 0..=sx.n.min(sy.n) {
                    let shape = BoxShape { l: sx.l, n: sx.n + sy.n - 2 * j, r: sy.r };
                    contract_contents(x, y, sx.r + j, accs.entry(shape).or_default());
                }
            }
        }
        Ok(GJSElement::from_accumulators(Convention::Filtered, accs))
    }

    /// Filtered trace: only `(l,0,l)` boxes contribute, closed around.
    pub fn filtered_trace(&self) -> Result<Scalar> {
        self.expect(Convention::Filtered)?;
        let mut acc = Accumulator::new();
        for (s, x) in &self.terms {
            if s.n != 0 || s.l != s.r {
                continue;
            }
            for (d, c) in x.iter() {
                let mut b = Board::new();
                b.place(&d.top_line());
                for i in 0..s.l {
                    b.join(i, 2 * s.l - 1 - i);
                }
                acc.add(TLDiagram::empty(), c, b.close().1);
            }
        }
        Ok(acc.finish().remove(&TLDiagram::empty()).unwrap_or_else(Scalar::zero))
    }

    /// Graded to filtered: stack every Epi diagram on the top strings.
    pub fn phi(&self) -> Result<GJSElement> {
        self.expect(Convention::Graded)?;
        let mut epis: HashMap<usize, Vec<TLDiagram>> = HashMap::new();
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (s, x) in &self.terms {
            let es = epis.entry(s.n).or_insert_with(|| diagram::enumerate_epi(s.n));
            for (d, c) in x.iter() {
                let line = d.top_line();
                for t in es.iter() {
                    let tt = t.top_count();
                    let mut b = Board::new();
                    b.place(&line);
                    let ot = b.place(t.partner());
                    for i in 0..s.n {
                        b.join(s.l + i, ot + i);
                    }
                    let mut order: Vec<usize> = (0..s.l).collect();
                    order.extend((0..tt).map(|j| ot + s.n + tt - 1 - j));
                    order.extend(s.l + s.n..s.points());
                    let (m, loops) = b.close_in(&order);
                    let shape = BoxShape { l: s.l, n: tt, r: s.r };
                    accs.entry(shape).or_default().add(TLDiagram::from_top_line(&m), c, loops);
                }
            }
        }
        Ok(GJSElement::from_accumulators(Convention::Filtered, accs))
    }

    /// Inverse of [`GJSElement::phi`], using that `phi` is the identity plus
    /// terms with strictly fewer top strings.
    pub fn phi_inverse(&self) -> Result<GJSElement> {
        self.expect(Convention::Filtered)?;
        let mut rest = self.clone();
        let mut out = GJSElement::zero(Convention::Graded);
        while let Some(top_n) = rest.terms.keys().map(|s| s.n).max() {
            let lead = GJSElement {
                convention: Convention::Graded,
                terms: rest.terms.iter().filter(|(s, _)| s.n == top_n).map(|(s, x)| (*s, x.clone())).collect(),
            };
            rest = rest.sub(&lead.phi()?)?;
            out = out.add(&lead)?;
        }
        Ok(out)
    }

    /// Add one string below: `(k,n,k) -> (k+1,n,k+1)`.
    pub fn include(&self) -> Result<GJSElement> {
        self.expect(Convention::Graded)?;
        let mut terms = BTreeMap::new();
        for (s, x) in &self.terms {
            if s.l != s.r {
                return Err(Error::Shape(format!("shape {s} is not in any Gr_k")));
            }
            let shape = BoxShape { l: s.l + 1, n: s.n, r: s.r + 1 };
            let big = shape.points();
            let mut acc = Accumulator::new();
            for (d, c) in x.iter() {
                let line = d.top_line();
                let mut m = vec![0u16; big];
                m[0] = (big - 1) as u16;
                m[big - 1] = 0;
                for (p, &q) in line.iter().enumerate() {
                    m[p + 1] = q + 1;
                }
                acc.add(TLDiagram::from_top_line(&m), c, 0);
            }
            terms.insert(shape, TLElement::from_map(0, big, acc.finish()));
        }
        Ok(GJSElement { convention: Convention::Graded, terms })
    }

    /// `Gr_{k+1} -> Gr_k`: `d^{-1}` times the closure of the lowest side pair.
    pub fn cond_expectation(&self) -> Result<GJSElement> {
        self.expect(Convention::Graded)?;
        let inv = Scalar::delta_pow(-1);
        let mut accs: BTreeMap<BoxShape, Accumulator> = BTreeMap::new();
        for (s, x) in &self.terms {
            if s.l != s.r || s.l == 0 {
                return Err(Error::Shape(format!("shape {s} is not in Gr_(k+1)")));
            }
            let shape = BoxShape { l: s.l - 1, n: s.n, r: s.r - 1 };
            let acc = accs.entry(shape).or_default();
            for (d, c) in x.iter() {
                let mut b = Board::new();
                b.place(&d.top_line());
                b.join(0, s.points() - 1);
                let (m, loops) = b.close();
                acc.add_product(TLDiagram::from_top_line(&m), c, &inv, loops);
            }
        }
        Ok(GJSElement::from_accumulators(Convention::Graded, accs))
    }

    /// `1_k x 1_k`: keep the boxes with `l = r = k`.
    pub fn compress(&self, k: usize) -> Result<GJSElement> {
        self.expect(Convention::Filtered)?;
        Ok(GJSElement {
            convention: self.convention,
            terms: self.terms.iter().filter(|(s, _)| s.l == k && s.r == k).map(|(s, x)| (*s, x.clone())).collect(),
        })
    }
}

/// Jones projection `e_k` in `Gr_{k+1}`: the two lowest strings on each side
/// are capped, the other `k-1` run across, scaled by `d^{-1}`.
pub fn jones_projection(k: usize) -> Result<GJSElement> {
    if k == 0 {
        return Err(Error::Shape("Jones projections start at k = 1".into()));
    }
    let big = 2 * k + 2;
    let mut m = vec![0u16; big];
    let mut pair = |a: usize, b: usize| {
        m[a] = b as u16;
        m[b] = a as u16;
    };
    pair(0, 1);
    pair(2 * k, 2 * k + 1);
    for i in 2..=k {
        pair(i, 2 * k + 1 - i);
    }
    let shape = BoxShape { l: k + 1, n: 0, r: k + 1 };
    let content = TLElement::from_term(TLDiagram::from_top_line(&m), Scalar::delta_pow(-1));
    GJSElement::from_box(Convention::Graded, shape, content)
}

/// Pull-down identity `x e_k = d^2 E(x e_k) e_k` for `x` in `Gr_{k+1}`.
pub fn check_pulldown(x: &GJSElement, k: usize) -> Result<bool> {
    x.check_level(k + 1)?;
    let e = jones_projection(k)?;
    let xe = x.wedge(&e)?;
    let rhs = xe.cond_expectation()?.include()?.wedge(&e)?.scale(&Scalar::delta_pow(2));
    Ok(xe == rhs)
}

/// Every basis box `(shape, diagram)` with `l + n + r <= max_points`.
pub fn basis_boxes(max_points: usize) -> Vec<(BoxShape, TLDiagram)> {
    let mut out = Vec::new();
    for total in (0..=max_points).step_by(2) {
        let ds = diagram::enumerate(0, total);
        for l in 0..=total {
            for n in 0..=total - l {
                let shape = BoxShape { l, n, r: total - l - n };
                out.extend(ds.iter().map(|d| (shape, d.clone())));
            }
        }
    }
    out
}

/// Basis boxes of `Gr_k` with at most `max_top` top strings.
pub fn level_boxes(k: usize, max_top: usize) -> Vec<(BoxShape, TLDiagram)> {
    let mut out = Vec::new();
    for n in (0..=max_top).filter(|n| n % 2 == 0) {
        let shape = BoxShape { l: k, n, r: k };
        out.extend(diagram::enumerate(0, shape.points()).into_iter().map(|d| (shape, d)));
    }
    out
}

impl fmt::Display for GJSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, x)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "shape({},{},{}){{ {x} }}", s.l, s.n, s.r)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
