//! Dense univariate polynomials over Q, coefficients stored lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(a: BigRational) -> Self {
        Poly::from_coeffs(vec![a])
    }

    pub fn from_int(a: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(a)))
    }

    /// The monomial `a * d^k`.
    pub fn monomial(a: BigRational, k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = a;
        Poly::from_coeffs(c)
    }

    pub fn x() -> Self {
        Poly::monomial(BigRational::one(), 1)
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_int_coeffs(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&a| BigRational::from_integer(BigInt::from(a))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn constant_term(&self) -> BigRational {
        self.c.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, a: &BigRational) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|x| x * a).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.lead().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &lead_inv;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.c.iter().rev() {
            acc = acc * x + a.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    /// Write with variable `var`, highest degree first, e.g. `2*d^2 - 1/2*d + 3`.
    pub fn fmt_with(&self, var: &str, f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for k in (0..self.c.len()).rev() {
            let a = &self.c[k];
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag_s = mag.to_string();
            match k {
                0 => f.write_str(&mag_s)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag_s)?;
                    }
                    f.write_str(var)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of terms with nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.c.iter().filter(|a| !a.is_zero()).count()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.fmt_with("d", &mut s)?;
        f.write_str(&s)
    }
}

/// Chebyshev-type recursion `V_0 = 2, V_1 = w, V_{j+1} = w V_j - V_{j-1}`,
/// so that `z^j + z^{-j} = V_j(z + 1/z)`.
fn v_polys(n: usize) -> Vec<Poly> {
    let mut v = vec![Poly::from_int(2), Poly::x()];
    while v.len() <= n {
        let k = v.len();
        let next = Poly::x().mul(&v[k - 1]).sub(&v[k - 2]);
        v.push(next);
    }
    v
}

fn cyclotomic(n: usize) -> Poly {
    // z^n - 1 divided by every cyclotomic factor of a proper divisor.
    let mut p = Poly::monomial(BigRational::one(), n).sub(&Poly::one());
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_rem(&cyclotomic(d)).0;
        }
    }
    p
}

/// Minimal polynomial over Q of `2cos(pi/m)`, for `m >= 2`.
///
/// `2cos(pi/m) = z + 1/z` with `z` a primitive `2m`-th root of unity, so the
/// palindromic cyclotomic polynomial is rewritten in `w = z + 1/z`.
pub fn min_poly_two_cos(m: usize) -> Poly {
    assert!(m >= 2);
    let phi = cyclotomic(2 * m);
    let deg = phi.degree().unwrap();
    let h = deg / 2;
    let v = v_polys(h);
    let mut out = Poly::constant(phi.coeffs()[h].clone());
    for j in 1..=h {
        out = out.add(&v[j].scale(&phi.coeffs()[h + j]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_round_trip() {
        let a = Poly::from_int_coeffs(&[-1, 0, 1]);
        let b = Poly::from_int_coeffs(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_int_coeffs(&[-1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = Poly::from_int_coeffs(&[-2, 0, 2]);
        let b = Poly::from_int_coeffs(&[3, 3]);
        assert_eq!(a.gcd(&b), Poly::from_int_coeffs(&[1, 1]));
    }

    #[test]
    fn min_polys_of_small_cosines() {
        // 2cos(pi/3) = 1, 2cos(pi/4) = sqrt2, 2cos(pi/5) = golden ratio, 2cos(pi/6) = sqrt3
        assert_eq!(min_poly_two_cos(3), Poly::from_int_coeffs(&[-1, 1]));
        assert_eq!(min_poly_two_cos(4), Poly::from_int_coeffs(&[-2, 0, 1]));
        assert_eq!(min_poly_two_cos(5), Poly::from_int_coeffs(&[-1, -1, 1]));
        assert_eq!(min_poly_two_cos(6), Poly::from_int_coeffs(&[-3, 0, 1]));
        for m in 3..20 {
            let x = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!(min_poly_two_cos(m).eval_f64(x).abs() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn printing() {
        let p = Poly::from_coeffs(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer((-1).into()),
            BigRational::from_integer(2.into()),
        ]);
        assert_eq!(p.to_string(), "2*d^2 - d + 1/2");
        assert_eq!(Poly::from_int_coeffs(&[0, -3]).to_string(), "-3*d");
    }
}
