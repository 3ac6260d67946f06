//! Exact coefficients: rational functions in the loop value `d` over Q.

mod delta;
mod parse;
pub mod poly;

pub use delta::DeltaSpec;
pub use poly::Poly;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A reduced fraction `num / den` with monic `den`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(a: i64) -> Self {
        Scalar::from_poly(Poly::from_int(a))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Scalar::from_poly(Poly::constant(a))
    }

    pub fn from_bigint(a: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(a))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    /// The loop value `d`.
    pub fn delta() -> Self {
        Scalar::from_poly(Poly::x())
    }

    /// `d^k` for any integer `k`.
    pub fn delta_pow(k: i64) -> Self {
        let m = Poly::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Scalar::from_poly(m)
        } else {
            Scalar { num: Poly::one(), den: m }
        }
    }

    /// Build `num / den`, reducing to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lc = den.lead();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.recip();
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value when the scalar does not depend on `d`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.constant_term() / self.den.constant_term())
        } else {
            None
        }
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &o.recip_unchecked())
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Scalar {
        Scalar::reduce(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: u32) -> Scalar {
        Scalar { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Floating evaluation at a specialized `d`.
    pub fn evaluate(&self, spec: &DeltaSpec) -> Result<f64> {
        let x = spec
            .value()
            .ok_or_else(|| Error::InvalidDelta("cannot evaluate at generic delta".into()))?;
        if self.poly_vanishes(&self.den, spec, x) {
            return Err(Error::SpecializationPole(format!("denominator {} vanishes at delta = {}", self.den, spec)));
        }
        Ok(self.num.eval_f64(x) / self.den.eval_f64(x))
    }

    /// True when the scalar is zero at `spec` (exactly for generic and root-of-unity modes).
    pub fn vanishes_at(&self, spec: &DeltaSpec, tol: f64) -> Result<bool> {
        match spec {
            DeltaSpec::Generic => Ok(self.is_zero()),
            DeltaSpec::RootOfUnity(m) => {
                if self.is_zero() {
                    return Ok(true);
                }
                self.evaluate(spec)?;
                let mp = poly::min_poly_two_cos(*m as usize);
                Ok(self.num.div_rem(&mp).1.is_zero())
            }
            DeltaSpec::Numeric(_) => Ok(self.evaluate(spec)?.abs() <= tol),
        }
    }

    fn poly_vanishes(&self, p: &Poly, spec: &DeltaSpec, x: f64) -> bool {
        match spec {
            DeltaSpec::RootOfUnity(m) => p.div_rem(&poly::min_poly_two_cos(*m as usize)).1.is_zero(),
            _ => {
                let scale: f64 = p.coeffs().iter().map(|a| num_traits::ToPrimitive::to_f64(a).unwrap_or(0.0).abs()).sum::<f64>()
                    * x.abs().max(1.0).powi(p.degree().unwrap_or(0) as i32);
                p.eval_f64(x).abs() <= 1e-12 * scale.max(1.0)
            }
        }
    }

    /// Remainder of the numerator modulo `m`, keeping the denominator.
    /// Used to compare scalars in the quotient ring where `m` vanishes.
    pub fn reduce_mod(&self, m: &Poly) -> Scalar {
        Scalar::reduce(self.num.div_rem(m).1, self.den.clone())
    }

    /// Substitute a rational value for `d`.
    pub fn eval_rational(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return Err(Error::SpecializationPole(format!("denominator {} vanishes at delta = {}", self.den, x)));
        }
        Ok(self.num.eval_rational(x) / d)
    }

    /// True when the canonical text has more than one token (needs parentheses as a factor).
    pub fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.term_count() > 1
    }
}

/// Quantum integer `[n]`: `[0] = 0`, `[1] = 1`, `[n+1] = d[n] - [n-1]`.
pub fn quantum_integer(n: usize) -> Scalar {
    Scalar::from_poly(quantum_integer_poly(n))
}

pub fn quantum_integer_poly(n: usize) -> Poly {
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = Poly::x().mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_scalar(s)
    }
}

impl From<i64> for Scalar {
    fn from(a: i64) -> Self {
        Scalar::from_int(a)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar::from_poly(self.num.add(&o.num));
            }
            return Scalar::reduce(self.num.add(&o.num), self.den.clone());
        }
        Scalar::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        Scalar::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("scalar division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = &*self + &o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(&Scalar::delta() * &Scalar::delta(), s("d^2"));
        let q = Scalar::new(Poly::from_int_coeffs(&[-1, 0, 1]), Poly::from_int_coeffs(&[1, 1])).unwrap();
        assert_eq!(q, s("d - 1"));
        assert!(q.is_polynomial());
        let inv = Scalar::one().checked_div(&Scalar::delta()).unwrap();
        assert_eq!(inv.denom(), &Poly::x());
        assert_eq!(inv.to_string(), "(1)/(d)");
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(quantum_integer(0), Scalar::zero());
        assert_eq!(quantum_integer(2), s("d"));
        assert_eq!(quantum_integer(3), s("d^2 - 1"));
        assert_eq!(quantum_integer(4), s("d^3 - 2*d"));
    }

    #[test]
    fn evaluation() {
        let sqrt2 = DeltaSpec::numeric(2f64.sqrt()).unwrap();
        assert!((quantum_integer(3).evaluate(&sqrt2).unwrap() - 1.0).abs() < 1e-12);
        let golden = DeltaSpec::root_of_unity(5).unwrap();
        assert!((Scalar::delta().evaluate(&golden).unwrap() - 1.618034).abs() < 1e-6);
        let two = DeltaSpec::numeric(2.0).unwrap();
        assert_eq!(quantum_integer(2).recip().unwrap().evaluate(&two).unwrap(), 0.5);
    }

    #[test]
    fn pole_at_root_of_unity() {
        let r4 = DeltaSpec::root_of_unity(4).unwrap();
        let bad = quantum_integer(4).recip().unwrap();
        assert!(matches!(bad.evaluate(&r4), Err(Error::SpecializationPole(_))));
        assert!(quantum_integer(4).vanishes_at(&r4, 1e-9).unwrap());
        assert!(!quantum_integer(3).vanishes_at(&r4, 1e-9).unwrap());
    }

    #[test]
    fn canonical_printing_round_trips() {
        let x = s("(2*d^2 - 1)/(d)");
        assert_eq!(x.to_string(), "(2*d^2 - 1)/(d)");
        assert_eq!(s("2/(2*d)").to_string(), "(1)/(d)");
        assert_eq!(s("-1/2*d + 3").to_string(), "-1/2*d + 3");
        for t in ["0", "1", "-d^3 + 2*d", "(d^2 + 1)/(d^2 - 2)", "(-1)/(d)"] {
            assert_eq!(s(t).to_string(), t);
        }
    }
}
