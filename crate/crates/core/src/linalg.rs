//! Exact Gauss-Jordan elimination over scalars.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

fn weight(s: &Scalar) -> usize {
    s.numer().degree().unwrap_or(0) + s.denom().degree().unwrap_or(0)
}

/// Solve `a X = b` for a square `a`; `b` may have several columns.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::Shape("solve needs a square system".into()));
    }
    let w = b.first().map_or(0, |r| r.len());
    let mut m: Matrix = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    for col in 0..n {
        // simplest nonzero pivot keeps intermediate fractions small
        let pivot = (col..n)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| weight(&m[r][col]))
            .ok_or_else(|| Error::Domain("singular matrix".into()))?;
        m.swap(col, pivot);
        let inv = m[col][col].recip()?;
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..n + w {
                if m[col][c].is_zero() {
                    continue;
                }
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let id: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    solve(a, &id)
}
