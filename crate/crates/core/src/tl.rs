//! Linear combinations of TL diagrams, Jones-Wenzl projections, Markov trace.

use crate::diagram::{self, TLDiagram};
use crate::error::{Error, Result};
use crate::scalar::{quantum_integer, DeltaSpec, Poly, Scalar};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Collects `coefficient * d^loops * diagram` contributions.
///
/// Products are kept as unreduced fractions bucketed by denominator so a
/// large sum costs one gcd per distinct denominator instead of one per term.
#[derive(Default)]
pub(crate) struct Accumulator {
    map: HashMap<TLDiagram, HashMap<Poly, Poly>>,
}

fn shift(p: &Poly, k: usize) -> Poly {
    if k == 0 || p.is_zero() {
        return p.clone();
    }
    let mut c = vec![BigRational::zero(); k];
    c.extend(p.coeffs().iter().cloned());
    Poly::from_coeffs(c)
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator::default()
    }

    pub fn add(&mut self, d: TLDiagram, c: &Scalar, loops: usize) {
        let num = shift(c.numer(), loops);
        self.push(d, num, c.denom().clone());
    }

    pub fn add_product(&mut self, d: TLDiagram, a: &Scalar, b: &Scalar, loops: usize) {
        let num = shift(&a.numer().mul(b.numer()), loops);
        let den = if a.denom().is_one() {
            b.denom().clone()
        } else if b.denom().is_one() {
            a.denom().clone()
        } else {
            a.denom().mul(b.denom())
        };
        self.push(d, num, den);
    }

    fn push(&mut self, d: TLDiagram, num: Poly, den: Poly) {
        let slot = self.map.entry(d).or_default().entry(den).or_insert_with(Poly::zero);
        *slot = slot.add(&num);
    }

    pub fn finish(self) -> BTreeMap<TLDiagram, Scalar> {
        let mut out = BTreeMap::new();
        for (d, parts) in self.map {
            let mut parts: Vec<(Poly, Poly)> = parts.into_iter().collect();
            // deterministic summation order
            parts.sort_by_key(|(den, _)| den.to_string());
            let mut s = Scalar::zero();
            for (den, num) in parts {
                if !num.is_zero() {
                    s += Scalar::new(num, den).expect("nonzero denominator");
                }
            }
            if !s.is_zero() {
                out.insert(d, s);
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TLElement {
    bottom: usize,
    top: usize,
    terms: BTreeMap<TLDiagram, Scalar>,
}

impl TLElement {
    pub fn zero(bottom: usize, top: usize) -> Self {
        TLElement { bottom, top, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: TLDiagram) -> Self {
        TLElement::from_term(d, Scalar::one())
    }

    pub fn from_term(d: TLDiagram, c: Scalar) -> Self {
        let mut x = TLElement::zero(d.bottom_count(), d.top_count());
        if !c.is_zero() {
            x.terms.insert(d, c);
        }
        x
    }

    pub fn from_terms(bottom: usize, top: usize, terms: impl IntoIterator<Item = (TLDiagram, Scalar)>) -> Result<Self> {
        let mut x = TLElement::zero(bottom, top);
        for (d, c) in terms {
            x.add_term(d, &c)?;
        }
        Ok(x)
    }

    pub(crate) fn from_map(bottom: usize, top: usize, terms: BTreeMap<TLDiagram, Scalar>) -> Self {
        TLElement { bottom, top, terms }
    }

    pub fn identity(n: usize) -> Self {
        TLElement::from_diagram(TLDiagram::identity(n))
    }

    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Ok(TLElement::from_diagram(TLDiagram::generator(n, i)?))
    }

    pub fn bottom_count(&self) -> usize {
        self.bottom
    }

    pub fn top_count(&self) -> usize {
        self.top
    }

    pub fn terms(&self) -> &BTreeMap<TLDiagram, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TLDiagram, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &TLDiagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, d: TLDiagram, c: &Scalar) -> Result<()> {
        if d.bottom_count() != self.bottom || d.top_count() != self.top {
            return Err(Error::Shape(format!(
                "diagram {d} does not fit an element with shape {},{}",
                self.bottom, self.top
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let sum = self.coefficient(&d) + c;
        if sum.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, sum);
        }
        Ok(())
    }

    fn check_same_shape(&self, o: &TLElement) -> Result<()> {
        if (self.bottom, self.top) != (o.bottom, o.top) {
            return Err(Error::Shape(format!(
                "cannot add elements of shape {},{} and {},{}",
                self.bottom, self.top, o.bottom, o.top
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &TLElement) -> Result<TLElement> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for (d, c) in &o.terms {
            out.add_term(d.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &TLElement) -> Result<TLElement> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TLElement {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> TLElement {
        if c.is_zero() {
            return TLElement::zero(self.bottom, self.top);
        }
        TLElement {
            bottom: self.bottom,
            top: self.top,
            terms: self.terms.iter().map(|(d, a)| (d.clone(), a * c)).collect(),
        }
    }

    /// `self` below, `upper` on top; each closed loop contributes `d`.
    pub fn compose(&self, upper: &TLElement) -> Result<TLElement> {
        if self.top != upper.bottom {
            return Err(Error::Shape(format!(
                "cannot stack an element with {} bottom points on one with {} top points",
                upper.bottom, self.top
            )));
        }
        let mut acc = Accumulator::new();
        for (dx, cx) in &self.terms {
            for (dy, cy) in &upper.terms {
                let (d, loops) = dx.compose(dy)?;
                acc.add_product(d, cx, cy, loops);
            }
        }
        Ok(TLElement::from_map(self.bottom, upper.top, acc.finish()))
    }

    /// Algebra product in `TL_n`: `x.mul(y)` draws `x` below `y`.
    pub fn mul(&self, y: &TLElement) -> Result<TLElement> {
        self.compose(y)
    }

    /// Horizontal placement, `self` on the left.
    pub fn tensor(&self, o: &TLElement) -> TLElement {
        let mut acc = Accumulator::new();
        for (dx, cx) in &self.terms {
            for (dy, cy) in &o.terms {
                acc.add_product(dx.juxtapose(dy), cx, cy, 0);
            }
        }
        TLElement::from_map(self.bottom + o.bottom, self.top + o.top, acc.finish())
    }

    /// Vertical reflection; coefficients are real so no conjugation is needed.
    pub fn adjoint(&self) -> TLElement {
        TLElement {
            bottom: self.top,
            top: self.bottom,
            terms: self.terms.iter().map(|(d, c)| (d.adjoint(), c.clone())).collect(),
        }
    }

    fn square(&self) -> Result<usize> {
        if self.bottom != self.top {
            return Err(Error::Shape(format!("element {}→{} is not square", self.bottom, self.top)));
        }
        Ok(self.bottom)
    }

    /// Right closure: `Tr`, optionally divided by `d^n`.
    pub fn markov_trace(&self, normalized: bool) -> Result<Scalar> {
        let n = self.square()?;
        let mut acc = Accumulator::new();
        for (d, c) in &self.terms {
            acc.add(TLDiagram::empty(), c, closure_loops(d, n));
        }
        let tr = acc.finish().remove(&TLDiagram::empty()).unwrap_or_else(Scalar::zero);
        Ok(if normalized { tr * Scalar::delta_pow(-(n as i64)) } else { tr })
    }

    /// `d^{-1}` times the closure of the rightmost strand.
    pub fn cond_expectation(&self) -> Result<TLElement> {
        let n = self.square()?;
        if n == 0 {
            return Err(Error::Shape("conditional expectation needs at least one strand".into()));
        }
        let inv = Scalar::delta_pow(-1);
        let mut acc = Accumulator::new();
        for (d, c) in &self.terms {
            let (dd, loops) = close_rightmost(d);
            acc.add_product(dd, c, &inv, loops);
        }
        Ok(TLElement::from_map(n - 1, n - 1, acc.finish()))
    }

    /// Exact test against zero after specializing `d`.
    pub fn vanishes_at(&self, spec: &DeltaSpec, tol: f64) -> Result<bool> {
        for c in self.terms.values() {
            if !c.vanishes_at(spec, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parse the printed form. `shape` is required to read a bare `0`.
    pub fn parse(s: &str, shape: Option<(usize, usize)>) -> Result<TLElement> {
        let parts = split_terms(s)?;
        let mut out: Option<TLElement> = shape.map(|(b, t)| TLElement::zero(b, t));
        for (start, part) in parts {
            let trimmed = part.trim();
            let lead = part.len() - part.trim_start().len();
            let col = start + lead;
            if trimmed == "0" {
                continue;
            }
            let (coef, diag_text, diag_col) = match last_top_level(trimmed, " * ") {
                Some(k) => {
                    let c: Scalar = trimmed[..k].parse().map_err(|e: Error| e.at_line(1, col))?;
                    (c, &trimmed[k + 3..], col + k + 3)
                }
                None => (Scalar::one(), trimmed, col),
            };
            let d: TLDiagram = diag_text.parse().map_err(|e: Error| e.at_line(1, diag_col))?;
            let x = out.get_or_insert_with(|| TLElement::zero(d.bottom_count(), d.top_count()));
            x.add_term(d, &coef).map_err(|e| Error::parse(1, diag_col + 1, e.to_string()))?;
        }
        out.ok_or_else(|| Error::parse(1, 1, "cannot infer the shape of 0"))
    }
}

fn split_terms(s: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::parse(1, i + 1, "unbalanced bracket"));
                }
            }
            b' ' if depth == 0 && s[i..].starts_with(" + ") => {
                out.push((start, &s[start..i]));
                start = i + 3;
                i += 3;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::parse(1, s.len() + 1, "unbalanced bracket"));
    }
    out.push((start, &s[start..]));
    if out.iter().any(|(_, p)| p.trim().is_empty()) {
        let (at, _) = out.iter().find(|(_, p)| p.trim().is_empty()).unwrap();
        return Err(Error::parse(1, at + 1, "empty term"));
    }
    Ok(out)
}

fn last_top_level(s: &str, pat: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if depth == 0 && s[i..].starts_with(pat) => found = Some(i),
            _ => {}
        }
    }
    found
}

/// Loops made by joining top point `j` to bottom point `j` for all `j`.
pub(crate) fn closure_loops(d: &TLDiagram, n: usize) -> usize {
    let mut caps = vec![None; 2 * n];
    for j in 0..n {
        let t = d.top_point(j);
        caps[j] = Some(t as u16);
        caps[t] = Some(j as u16);
    }
    diagram::glue(d.partner(), &caps).1
}

fn close_rightmost(d: &TLDiagram) -> (TLDiagram, usize) {
    let n = d.bottom_count();
    let (b, t) = (n - 1, d.top_point(n - 1));
    let mut caps = vec![None; 2 * n];
    caps[b] = Some(t as u16);
    caps[t] = Some(b as u16);
    let (m, loops) = diagram::glue(d.partner(), &caps);
    (TLDiagram::from_partner_unchecked(n - 1, n - 1, m), loops)
}

/// Jones-Wenzl projection `f_n` at generic `d`, by the Wenzl recursion.
pub fn jones_wenzl(n: usize) -> TLElement {
    let mut f = TLElement::identity(n.min(1));
    if n <= 1 {
        return if n == 0 { TLElement::identity(0) } else { f };
    }
    for k in 1..n {
        // f_{k+1} = f_k⊗1 - ([k]/[k+1]) (f_k⊗1) e_k (f_k⊗1)
        let fk = f.tensor(&TLElement::identity(1));
        let e = TLElement::generator(k + 1, k).expect("valid generator");
        let middle = fk.mul(&e).and_then(|x| x.mul(&fk)).expect("square shapes");
        let ratio = &quantum_integer(k) / &quantum_integer(k + 1);
        f = fk.sub(&middle.scale(&ratio)).expect("same shape");
    }
    f
}

/// `f_n` for use at `spec`; rejects `d` where some `[k]`, `k <= n`, vanishes.
pub fn jones_wenzl_at(n: usize, spec: &DeltaSpec) -> Result<TLElement> {
    if let DeltaSpec::RootOfUnity(_) | DeltaSpec::Numeric(_) = spec {
        for k in 2..=n {
            if quantum_integer(k).vanishes_at(spec, 1e-12)? {
                return Err(Error::SpecializationPole(format!("[{k}] vanishes at delta = {spec}")));
            }
        }
    }
    Ok(jones_wenzl(n))
}

impl fmt::Display for TLElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_polynomial() && c.numer().term_count() > 1 {
                write!(f, "({c}) * {d}")?;
            } else {
                write!(f, "{c} * {d}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d() -> Scalar {
        Scalar::delta()
    }

    #[test]
    fn e_squared_is_delta_e() {
        let e = TLElement::generator(2, 1).unwrap();
        assert_eq!(e.mul(&e).unwrap(), e.scale(&d()));
    }

    #[test]
    fn temperley_lieb_relation() {
        let e1 = TLElement::generator(3, 1).unwrap();
        let e2 = TLElement::generator(3, 2).unwrap();
        assert_eq!(e1.mul(&e2).unwrap().mul(&e1).unwrap(), e1);
        assert_eq!(e2.mul(&e1).unwrap().mul(&e2).unwrap(), e2);
        let id = TLElement::identity(3);
        assert_eq!(id.mul(&e1).unwrap(), e1);
    }

    #[test]
    fn small_jones_wenzl() {
        assert_eq!(jones_wenzl(1), TLElement::identity(1));
        let e = TLElement::generator(2, 1).unwrap();
        let expect = TLElement::identity(2).sub(&e.scale(&Scalar::delta_pow(-1))).unwrap();
        assert_eq!(jones_wenzl(2), expect);
        assert_eq!(jones_wenzl(2).markov_trace(false).unwrap(), "d^2 - 1".parse().unwrap());
    }

    #[test]
    fn jones_wenzl_small_suite() {
        for n in 0..=4 {
            let f = jones_wenzl(n);
            assert_eq!(f.mul(&f).unwrap(), f, "idempotent n={n}");
            assert_eq!(f.adjoint(), f, "self-adjoint n={n}");
            for i in 1..n {
                let e = TLElement::generator(n, i).unwrap();
                assert!(e.mul(&f).unwrap().is_zero(), "e_{i} f_{n}");
                assert!(f.mul(&e).unwrap().is_zero(), "f_{n} e_{i}");
            }
            assert_eq!(f.markov_trace(false).unwrap(), quantum_integer(n + 1));
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(TLElement::identity(3).markov_trace(false).unwrap(), d().pow(3));
        assert_eq!(TLElement::identity(3).markov_trace(true).unwrap(), Scalar::one());
        assert_eq!(TLElement::generator(2, 1).unwrap().markov_trace(false).unwrap(), d());
        assert!(TLElement::from_diagram(TLDiagram::cup()).markov_trace(false).is_err());
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(TLElement::identity(3).cond_expectation().unwrap(), TLElement::identity(2));
        let e = TLElement::generator(2, 1).unwrap();
        assert_eq!(e.cond_expectation().unwrap(), TLElement::identity(1).scale(&Scalar::delta_pow(-1)));
        assert!(TLElement::identity(0).cond_expectation().is_err());
    }

    #[test]
    fn jones_wenzl_pole_at_root_of_unity() {
        // [3] = d^2 - 1 vanishes at 2cos(pi/3) = 1
        assert!(matches!(jones_wenzl_at(3, &DeltaSpec::RootOfUnity(3)), Err(Error::SpecializationPole(_))));
        assert!(jones_wenzl_at(3, &DeltaSpec::RootOfUnity(5)).is_ok());
    }

    #[test]
    fn print_parse_round_trip() {
        for n in 0..=4 {
            let f = jones_wenzl(n);
            let s = f.to_string();
            assert_eq!(TLElement::parse(&s, None).unwrap(), f, "{s}");
        }
        let x = TLElement::parse("(d^2 - 1) * 2,2:[(1,4),(2,3)] + -1 * 2,2:[(1,2),(3,4)]", None).unwrap();
        assert_eq!(x.to_string(), "-1 * 2,2:[(1,2),(3,4)] + (d^2 - 1) * 2,2:[(1,4),(2,3)]");
        assert_eq!(TLElement::parse("0", Some((1, 1))).unwrap(), TLElement::zero(1, 1));
        assert!(matches!(TLElement::parse("2 * 2,2:[(1,3),(2,4)]", None), Err(Error::Parse { column: 5, .. })));
    }

    #[test]
    fn gram_matrix_positive_at_two() {
        use nalgebra::DMatrix;
        for n in 1..=4 {
            let ds = diagram::enumerate_pairings(2 * n);
            let k = ds.len();
            let spec = DeltaSpec::Numeric(2.0);
            let mut g = DMatrix::<f64>::zeros(k, k);
            for (i, a) in ds.iter().enumerate() {
                for (j, b) in ds.iter().enumerate() {
                    // <a, b> = Tr(a† b) for boxes 2n -> 0
                    let x = TLElement::from_diagram(b.clone());
                    let y = TLElement::from_diagram(a.adjoint());
                    let v = y.compose(&x).unwrap().markov_trace(false).unwrap();
                    g[(i, j)] = v.evaluate(&spec).unwrap();
                }
            }
            let eig = g.symmetric_eigenvalues();
            assert!(eig.iter().all(|&l| l > -1e-9), "n={n}: {eig}");
        }
    }

    fn random_element(n: usize, picks: Vec<(usize, i64, u8)>) -> TLElement {
        let ds = diagram::enumerate(n, n);
        let mut x = TLElement::zero(n, n);
        for (i, a, p) in picks {
            let c = Scalar::from_int(a) * Scalar::delta().pow(p as u32 % 3);
            x.add_term(ds[i % ds.len()].clone(), &c).unwrap();
        }
        x
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn trace_is_tracial(
            n in 3usize..=4,
            a in proptest::collection::vec((0usize..100, -3i64..=3, 0u8..3), 1..4),
            b in proptest::collection::vec((0usize..100, -3i64..=3, 0u8..3), 1..4),
        ) {
            let x = random_element(n, a);
            let y = random_element(n, b);
            let xy = x.mul(&y).unwrap().markov_trace(false).unwrap();
            let yx = y.mul(&x).unwrap().markov_trace(false).unwrap();
            prop_assert_eq!(xy, yx);
        }

        #[test]
        fn expectation_preserves_trace(a in proptest::collection::vec((0usize..100, -3i64..=3, 0u8..3), 1..5)) {
            let x = random_element(3, a);
            let lhs = x.cond_expectation().unwrap().markov_trace(false).unwrap();
            let rhs = x.markov_trace(false).unwrap() * Scalar::delta_pow(-1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn composition_is_associative(i in 0usize..14, j in 0usize..14, k in 0usize..14) {
            let ds = diagram::enumerate(4, 4);
            let (a, b, c) = (&ds[i], &ds[j], &ds[k]);
            let (ab, l1) = a.compose(b).unwrap();
            let (ab_c, l2) = ab.compose(c).unwrap();
            let (bc, l3) = b.compose(c).unwrap();
            let (a_bc, l4) = a.compose(&bc).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(l1 + l2, l3 + l4);
        }

        #[test]
        fn adjoint_reverses_composition(i in 0usize..5, j in 0usize..5) {
            let ds = diagram::enumerate(3, 3);
            let (a, b) = (&ds[i], &ds[j]);
            let (ab, l) = a.compose(b).unwrap();
            let (ba, l2) = b.adjoint().compose(&a.adjoint()).unwrap();
            prop_assert_eq!(ab.adjoint(), ba);
            prop_assert_eq!(l, l2);
            prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        }
    }
}
