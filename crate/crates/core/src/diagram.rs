//! Temperley-Lieb diagrams as planar perfect matchings.
//!
//! Boundary points are numbered counterclockwise: the bottom edge left to
//! right (`0..bottom`), then the top edge right to left. With this numbering
//! planarity is exactly "non-crossing on a circle".

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TLDiagram {
    bottom: u16,
    top: u16,
    partner: Vec<u16>,
}

/// True when the involution `partner` has no crossing arcs on the circle.
pub fn is_noncrossing(partner: &[u16]) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    for (i, &p) in partner.iter().enumerate() {
        let p = p as usize;
        if p > i {
            stack.push(i);
        } else if stack.pop() != Some(p) {
            return false;
        }
    }
    stack.is_empty()
}

/// All non-crossing perfect matchings of `n` points, lexicographic in the
/// partner array (equivalently, by leftmost arc).
pub fn noncrossing_matchings(n: usize) -> Vec<Vec<u16>> {
    if n % 2 == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fill(&mut cur, 0, n, &mut |m| out.push(m.to_vec()));
    out
}

fn fill(cur: &mut Vec<u16>, lo: usize, hi: usize, emit: &mut dyn FnMut(&[u16])) {
    if lo == hi {
        emit(cur);
        return;
    }
    for j in (lo + 1..hi).step_by(2) {
        cur[lo] = j as u16;
        cur[j] = lo as u16;
        fill(cur, lo + 1, j, &mut |m: &[u16]| {
            let mut inner = m.to_vec();
            fill(&mut inner, j + 1, hi, emit);
        });
    }
}

/// Join a perfect matching with extra arcs (`caps[p] = Some(q)`).
///
/// Returns the matching induced on the uncapped points, renumbered in their
/// original order, and the number of closed loops.
pub fn glue(partner: &[u16], caps: &[Option<u16>]) -> (Vec<u16>, usize) {
    let n = partner.len();
    debug_assert_eq!(caps.len(), n);
    let mut index = vec![u16::MAX; n];
    let mut free = 0u16;
    for p in 0..n {
        if caps[p].is_none() {
            index[p] = free;
            free += 1;
        }
    }
    let mut out = vec![0u16; free as usize];
    let mut seen = vec![false; n];
    for p in 0..n {
        if caps[p].is_some() || seen[p] {
            continue;
        }
        seen[p] = true;
        let mut q = partner[p] as usize;
        while let Some(c) = caps[q] {
            seen[q] = true;
            seen[c as usize] = true;
            q = partner[c as usize] as usize;
        }
        seen[q] = true;
        out[index[p] as usize] = index[q];
        out[index[q] as usize] = index[p];
    }
    let mut loops = 0;
    for p in 0..n {
        if seen[p] {
            continue;
        }
        loops += 1;
        let mut q = p;
        loop {
            seen[q] = true;
            let c = caps[q].expect("loop walk") as usize;
            seen[c] = true;
            q = partner[c] as usize;
            if q == p {
                break;
            }
        }
    }
    (out, loops)
}

impl TLDiagram {
    pub fn from_partner(bottom: usize, top: usize, partner: Vec<u16>) -> Result<Self> {
        let n = bottom + top;
        if partner.len() != n {
            return Err(Error::Shape(format!("matching has {} points, expected {}", partner.len(), n)));
        }
        for (i, &p) in partner.iter().enumerate() {
            if p as usize >= n || p as usize == i || partner[p as usize] as usize != i {
                return Err(Error::Shape(format!("point {} is not matched exactly once", i + 1)));
            }
        }
        if !is_noncrossing(&partner) {
            return Err(Error::Shape("arcs cross".into()));
        }
        Ok(TLDiagram { bottom: bottom as u16, top: top as u16, partner })
    }

    pub(crate) fn from_partner_unchecked(bottom: usize, top: usize, partner: Vec<u16>) -> Self {
        debug_assert!(is_noncrossing(&partner));
        TLDiagram { bottom: bottom as u16, top: top as u16, partner }
    }

    /// Build from 0-based arcs in the counterclockwise numbering.
    pub fn new(bottom: usize, top: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let n = bottom + top;
        let mut partner = vec![u16::MAX; n];
        for &(i, j) in arcs {
            if i >= n || j >= n || i == j {
                return Err(Error::Shape(format!("arc ({}, {}) out of range", i + 1, j + 1)));
            }
            if partner[i] != u16::MAX || partner[j] != u16::MAX {
                return Err(Error::Shape(format!("point used twice in arc ({}, {})", i + 1, j + 1)));
            }
            partner[i] = j as u16;
            partner[j] = i as u16;
        }
        if let Some(i) = partner.iter().position(|&p| p == u16::MAX) {
            return Err(Error::Shape(format!("point {} is unmatched", i + 1)));
        }
        TLDiagram::from_partner(bottom, top, partner)
    }

    pub fn empty() -> Self {
        TLDiagram { bottom: 0, top: 0, partner: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|i| (2 * n - 1 - i) as u16).collect();
        TLDiagram::from_partner_unchecked(n, n, partner)
    }

    /// The cup `0 -> 2`.
    pub fn cup() -> Self {
        TLDiagram::from_partner_unchecked(0, 2, vec![1, 0])
    }

    /// The cap `2 -> 0`.
    pub fn cap() -> Self {
        TLDiagram::from_partner_unchecked(2, 0, vec![1, 0])
    }

    /// Generator `e_i` on `n` strands (`1 <= i < n`): strands `i`, `i+1` capped below and cupped above.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::Shape(format!("generator e_{i} needs 1 <= i < {n}")));
        }
        let mut arcs = Vec::new();
        for s in 0..n {
            if s + 1 == i || s == i {
                continue;
            }
            arcs.push((s, 2 * n - 1 - s));
        }
        arcs.push((i - 1, i));
        arcs.push((2 * n - i - 1, 2 * n - i));
        TLDiagram::new(n, n, &arcs)
    }

    pub fn bottom_count(&self) -> usize {
        self.bottom as usize
    }

    pub fn top_count(&self) -> usize {
        self.top as usize
    }

    pub fn points(&self) -> usize {
        self.partner.len()
    }

    pub fn partner(&self) -> &[u16] {
        &self.partner
    }

    /// Global index of the `j`-th top point counted left to right.
    pub fn top_point(&self, j: usize) -> usize {
        self.bottom as usize + self.top as usize - 1 - j
    }

    /// Sorted arcs `(i, j)` with `i < j`, 0-based.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(i, &p)| (p as usize) > *i)
            .map(|(i, &p)| (i, p as usize))
            .collect()
    }

    /// Number of strands joining bottom to top.
    pub fn through_strands(&self) -> usize {
        (0..self.bottom as usize).filter(|&i| self.partner[i] >= self.bottom).count()
    }

    /// True when no arc joins two top points.
    pub fn is_epi(&self) -> bool {
        (self.bottom as usize..self.points()).all(|i| (self.partner[i] as usize) < self.bottom as usize)
    }

    /// For a diagram with no bottom points, the partner array over the top
    /// points read left to right.
    pub fn top_line(&self) -> Vec<u16> {
        debug_assert_eq!(self.bottom, 0);
        let n = self.partner.len();
        (0..n).map(|p| (n - 1 - self.partner[n - 1 - p] as usize) as u16).collect()
    }

    /// Inverse of [`TLDiagram::top_line`].
    pub fn from_top_line(line: &[u16]) -> Self {
        let n = line.len();
        let partner = (0..n).map(|g| (n - 1 - line[n - 1 - g] as usize) as u16).collect();
        TLDiagram::from_partner_unchecked(0, n, partner)
    }

    /// Stack `upper` on top of `self`; returns the result and the closed loops removed.
    pub fn compose(&self, upper: &TLDiagram) -> Result<(TLDiagram, usize)> {
        if self.top != upper.bottom {
            return Err(Error::Shape(format!(
                "cannot stack a diagram with {} bottom points on one with {} top points",
                upper.bottom, self.top
            )));
        }
        let (b, t, u) = (self.bottom as usize, self.top as usize, upper.top as usize);
        let off = b + t;
        let mut partner: Vec<u16> = self.partner.clone();
        partner.extend(upper.partner.iter().map(|&p| p + off as u16));
        let mut caps = vec![None; off + t + u];
        for j in 0..t {
            let lo = self.top_point(j);
            let up = off + j;
            caps[lo] = Some(up as u16);
            caps[up] = Some(lo as u16);
        }
        let (m, loops) = glue(&partner, &caps);
        Ok((TLDiagram::from_partner_unchecked(b, u, m), loops))
    }

    /// Place `other` to the right of `self`.
    pub fn juxtapose(&self, other: &TLDiagram) -> TLDiagram {
        let (ba, ta) = (self.bottom as usize, self.top as usize);
        let (bb, tb) = (other.bottom as usize, other.top as usize);
        let map_a = |g: usize| if g < ba { g } else { ba + bb + tb + (g - ba) };
        let map_b = |g: usize| if g < bb { ba + g } else { ba + bb + (g - bb) };
        let n = ba + ta + bb + tb;
        let mut partner = vec![0u16; n];
        for (g, &p) in self.partner.iter().enumerate() {
            partner[map_a(g)] = map_a(p as usize) as u16;
        }
        for (g, &p) in other.partner.iter().enumerate() {
            partner[map_b(g)] = map_b(p as usize) as u16;
        }
        TLDiagram::from_partner_unchecked(ba + bb, ta + tb, partner)
    }

    /// Vertical reflection.
    pub fn adjoint(&self) -> TLDiagram {
        let (b, t) = (self.bottom as usize, self.top as usize);
        // old bottom i -> new top i; old top j -> new bottom j
        let map = |g: usize| if g < b { t + (b - 1 - g) } else { b + t - 1 - g };
        let mut partner = vec![0u16; b + t];
        for (g, &p) in self.partner.iter().enumerate() {
            partner[map(g)] = map(p as usize) as u16;
        }
        TLDiagram::from_partner_unchecked(t, b, partner)
    }
}

/// All diagrams with `n` bottom points and no top points. Odd `n` gives none.
pub fn enumerate_pairings(n: usize) -> Vec<TLDiagram> {
    enumerate(n, 0)
}

/// All diagrams `bottom -> top` in lexicographic order.
pub fn enumerate(bottom: usize, top: usize) -> Vec<TLDiagram> {
    noncrossing_matchings(bottom + top)
        .into_iter()
        .map(|m| TLDiagram::from_partner_unchecked(bottom, top, m))
        .collect()
}

/// Diagrams with `b` bottom points and no top-to-top arc, grouped by top
/// count from `b` down to `b mod 2`, lexicographic inside each group.
pub fn enumerate_epi(b: usize) -> Vec<TLDiagram> {
    let mut out = Vec::new();
    let mut t = b as isize;
    while t >= 0 {
        out.extend(enumerate(b, t as usize).into_iter().filter(TLDiagram::is_epi));
        t -= 2;
    }
    out
}

impl fmt::Display for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:[", self.bottom, self.top)?;
        for (k, (i, j)) in self.arcs().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{})", i + 1, j + 1)?;
        }
        f.write_str("]")
    }
}

impl std::str::FromStr for TLDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| Error::parse(1, pos + 1, msg);
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let number = |pos: &mut usize| -> Result<usize> {
            skip(pos);
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return Err(err(start, "expected a number"));
            }
            s[start..*pos].parse().map_err(|_| err(start, "number too large"))
        };
        let expect = |pos: &mut usize, c: u8| -> Result<()> {
            skip(pos);
            if bytes.get(*pos) == Some(&c) {
                *pos += 1;
                Ok(())
            } else {
                Err(err(*pos, &format!("expected '{}'", c as char)))
            }
        };
        let b = number(&mut pos)?;
        expect(&mut pos, b',')?;
        let t = number(&mut pos)?;
        expect(&mut pos, b':')?;
        expect(&mut pos, b'[')?;
        let mut arcs = Vec::new();
        skip(&mut pos);
        if bytes.get(pos) != Some(&b']') {
            loop {
                let at = pos;
                expect(&mut pos, b'(')?;
                let i = number(&mut pos)?;
                expect(&mut pos, b',')?;
                let j = number(&mut pos)?;
                expect(&mut pos, b')')?;
                if i == 0 || j == 0 {
                    return Err(err(at, "point indices are 1-based"));
                }
                arcs.push((i - 1, j - 1));
                skip(&mut pos);
                if bytes.get(pos) == Some(&b',') {
                    pos += 1;
                    continue;
                }
                break;
            }
        }
        expect(&mut pos, b']')?;
        skip(&mut pos);
        if pos != bytes.len() {
            return Err(err(pos, "trailing input"));
        }
        TLDiagram::new(b, t, &arcs).map_err(|e| match e {
            Error::Shape(m) => Error::parse(1, 1, m),
            other => other,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: brute-force all perfect matchings, keep the planar ones.
    fn brute_count(n: usize) -> usize {
        fn rec(p: &mut Vec<Option<usize>>, count: &mut usize) {
            let Some(i) = p.iter().position(|x| x.is_none()) else {
                let m: Vec<u16> = p.iter().map(|x| x.unwrap() as u16).collect();
                if is_noncrossing(&m) {
                    *count += 1;
                }
                return;
            };
            for j in i + 1..p.len() {
                if p[j].is_none() {
                    p[i] = Some(j);
                    p[j] = Some(i);
                    rec(p, count);
                    p[i] = None;
                    p[j] = None;
                }
            }
        }
        let mut c = 0;
        rec(&mut vec![None; n], &mut c);
        c
    }

    #[test]
    fn pairing_counts_match_brute_force() {
        for n in [0, 2, 4, 6, 8] {
            assert_eq!(enumerate_pairings(n).len(), brute_count(n), "n={n}");
        }
        assert_eq!(enumerate_pairings(2).len(), 1);
        assert_eq!(enumerate_pairings(4).len(), 2);
        assert_eq!(enumerate_pairings(6).len(), 5);
        assert!(enumerate_pairings(5).is_empty());
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let all = enumerate(3, 3);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
    }

    #[test]
    fn compose_examples() {
        let (d, loops) = TLDiagram::cup().compose(&TLDiagram::cap()).unwrap();
        assert_eq!((d, loops), (TLDiagram::empty(), 1));
        let id2 = TLDiagram::identity(2);
        assert_eq!(id2.compose(&id2).unwrap(), (id2.clone(), 0));
        let e = TLDiagram::generator(2, 1).unwrap();
        assert_eq!(e.compose(&e).unwrap(), (e.clone(), 1));
        assert!(TLDiagram::cup().compose(&TLDiagram::identity(3)).is_err());
    }

    #[test]
    fn juxtapose_examples() {
        let two_cups = TLDiagram::cup().juxtapose(&TLDiagram::cup());
        assert_eq!((two_cups.bottom_count(), two_cups.top_count()), (0, 4));
        assert_eq!(two_cups.top_line(), vec![1, 0, 3, 2]);
        let d = TLDiagram::identity(3);
        assert_eq!(TLDiagram::empty().juxtapose(&d), d);
        let x = TLDiagram::identity(1).juxtapose(&TLDiagram::cap());
        assert_eq!((x.bottom_count(), x.top_count()), (3, 1));
        assert_eq!(x.arcs(), vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(TLDiagram::cup().adjoint(), TLDiagram::cap());
        assert_eq!(TLDiagram::identity(3).adjoint(), TLDiagram::identity(3));
        let nested = TLDiagram::new(0, 4, &[(0, 3), (1, 2)]).unwrap();
        let nested_cap = TLDiagram::new(4, 0, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(nested.adjoint(), nested_cap);
    }

    #[test]
    fn epi_counts() {
        assert_eq!(enumerate_epi(0), vec![TLDiagram::empty()]);
        let e2 = enumerate_epi(2);
        assert_eq!(e2, vec![TLDiagram::identity(2), TLDiagram::cap()]);
        let e4 = enumerate_epi(4);
        let by_t = |t| e4.iter().filter(|d| d.top_count() == t).count();
        assert_eq!((e4.len(), by_t(4), by_t(2), by_t(0)), (6, 1, 3, 2));
    }

    #[test]
    fn text_round_trip() {
        for d in enumerate(2, 4) {
            let s = d.to_string();
            assert_eq!(s.parse::<TLDiagram>().unwrap(), d);
        }
        assert_eq!(TLDiagram::identity(2).to_string(), "2,2:[(1,4),(2,3)]");
        assert!(matches!("2,2:[(1,3),(2,4)]".parse::<TLDiagram>(), Err(Error::Parse { .. })));
        assert!(matches!("2,2:[(1,4),(2 3)]".parse::<TLDiagram>(), Err(Error::Parse { column: 15, .. })));
    }

    #[test]
    fn top_line_round_trip() {
        for d in enumerate(0, 6) {
            assert_eq!(TLDiagram::from_top_line(&d.top_line()), d);
        }
    }
}
