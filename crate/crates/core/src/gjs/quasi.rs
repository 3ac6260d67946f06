//! Quasi-bases for the inclusion `TL_{2n-2} ⊂ TL_{2n}` (two strings added on
//! the right) with expectation `E = d^{-2}` times the closure of those strings.
//!
//! The pairs are `u_q = D_q` (all diagrams) and `v_q = C^{-1} D^q`, where
//! `D^q` is the dual basis for the normalized trace and `C = Σ a^p a_p` is the
//! Casimir element of the smaller algebra. Then `x = Σ u_q E(v_q x)`.

use crate::diagram::{self, TLDiagram};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::tl::TLElement;

#[derive(Clone, Debug)]
pub struct QuasiBasis {
    pub n: usize,
    pub pairs: Vec<(TLElement, TLElement)>,
    /// Watatani index `Σ u_q v_q`.
    pub index: TLElement,
}

fn basis(m: usize) -> Vec<TLElement> {
    diagram::enumerate(m, m).into_iter().map(TLElement::from_diagram).collect()
}

fn combine(coeffs: &[Scalar], basis: &[TLElement], m: usize) -> Result<TLElement> {
    let mut out = TLElement::zero(m, m);
    for (c, b) in coeffs.iter().zip(basis) {
        if !c.is_zero() {
            out = out.add(&b.scale(c))?;
        }
    }
    Ok(out)
}

/// Dual basis under the normalized trace: `tr(dual_q basis_r) = [q = r]`.
fn dual_basis(basis: &[TLElement], m: usize) -> Result<Vec<TLElement>> {
    let gram: linalg::Matrix = basis
        .iter()
        .map(|a| basis.iter().map(|b| a.mul(b).and_then(|p| p.markov_trace(true))).collect())
        .collect::<Result<_>>()?;
    let inv = linalg::inverse(&gram)?;
    inv.iter().map(|row| combine(row, basis, m)).collect()
}

/// Embed `TL_{2n-2}` into `TL_{2n}`.
pub fn embed(a: &TLElement) -> TLElement {
    a.tensor(&TLElement::identity(2))
}

/// `E: TL_{2n} -> TL_{2n-2}`.
pub fn expectation(x: &TLElement) -> Result<TLElement> {
    x.cond_expectation()?.cond_expectation()
}

fn inverse_in(c: &TLElement, basis: &[TLElement], m: usize) -> Result<TLElement> {
    let ds: Vec<TLDiagram> = diagram::enumerate(m, m);
    let cols: Vec<TLElement> = basis.iter().map(|b| c.mul(b)).collect::<Result<_>>()?;
    let mat: linalg::Matrix = ds.iter().map(|d| cols.iter().map(|col| col.coefficient(d)).collect()).collect();
    let id = TLElement::identity(m);
    let rhs: linalg::Matrix = ds.iter().map(|d| vec![id.coefficient(d)]).collect();
    let sol = linalg::solve(&mat, &rhs)?;
    let coeffs: Vec<Scalar> = sol.into_iter().map(|r| r[0].clone()).collect();
    combine(&coeffs, basis, m)
}

/// Build the quasi-basis at generic `d`.
pub fn quasi_basis(n: usize) -> Result<QuasiBasis> {
    if n == 0 {
        return Err(Error::Shape("quasi-basis needs n >= 1".into()));
    }
    let (big, small) = (2 * n, 2 * n - 2);
    let b = basis(big);
    let b_dual = dual_basis(&b, big)?;
    let a = basis(small);
    let a_dual = dual_basis(&a, small)?;
    let mut casimir = TLElement::zero(small, small);
    for (ap, a_up) in a.iter().zip(&a_dual) {
        casimir = casimir.add(&a_up.mul(ap)?)?;
    }
    let c_inv = embed(&inverse_in(&casimir, &a, small)?);
    let mut pairs = Vec::with_capacity(b.len());
    let mut index = TLElement::zero(big, big);
    for (u, d_up) in b.iter().zip(&b_dual) {
        let v = c_inv.mul(d_up)?;
        index = index.add(&u.mul(&v)?)?;
        pairs.push((u.clone(), v));
    }
    Ok(QuasiBasis { n, pairs, index })
}

impl QuasiBasis {
    /// `Σ u_q E(v_q x)`.
    pub fn reconstruct(&self, x: &TLElement) -> Result<TLElement> {
        let m = 2 * self.n;
        let mut out = TLElement::zero(m, m);
        for (u, v) in &self.pairs {
            let e = expectation(&v.mul(x)?)?;
            if !e.is_zero() {
                out = out.add(&u.mul(&embed(&e))?)?;
            }
        }
        Ok(out)
    }

    /// Diagrams of `TL_{2n}` on which reconstruction fails.
    pub fn reconstruction_failures(&self) -> Result<Vec<TLDiagram>> {
        let mut bad = Vec::new();
        for d in diagram::enumerate(2 * self.n, 2 * self.n) {
            let x = TLElement::from_diagram(d.clone());
            if self.reconstruct(&x)? != x {
                bad.push(d);
            }
        }
        Ok(bad)
    }

    /// Is the index the scalar `d^2`?
    pub fn index_is_delta_squared(&self) -> bool {
        self.index == TLElement::identity(2 * self.n).scale(&Scalar::delta_pow(2))
    }
}
