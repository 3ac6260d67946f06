//! Free Poisson moments and their diagrammatic counterpart.

use crate::error::{Error, Result};
use crate::gjs::{Convention, GJSElement};
use crate::graphk::{fmt_weight_value, Weight};
use crate::scalar::{DeltaSpec, Scalar};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `C_n = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n, n) / (n + 1)
}

/// `N(n, k) = binom(n, k) binom(n, k - 1) / n` for `1 <= k <= n`; `N(0, 0) = 1`.
pub fn narayana(n: u64, k: u64) -> Result<BigInt> {
    if n == 0 && k == 0 {
        return Ok(BigInt::one());
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("narayana({n}, {k}) needs 1 <= k <= n")));
    }
    Ok(binomial(n, k) * binomial(n, k - 1) / n)
}

/// Free Poisson law with rate `rate` and jump size `jump`.
#[derive(Clone, Debug, PartialEq)]
pub struct MPLaw {
    pub rate: Weight,
    pub jump: Weight,
}

impl MPLaw {
    pub fn new(rate: Weight, jump: Weight) -> Result<Self> {
        if let Weight::Numeric(x) = rate {
            if x < 0.0 {
                return Err(Error::Domain(format!("rate must be nonnegative, got {x}")));
            }
        }
        Ok(MPLaw { rate, jump })
    }

    /// Rate `d`, jump 1: the law of the cup.
    pub fn cup_law() -> Self {
        MPLaw { rate: Weight::Exact(Scalar::delta()), jump: Weight::Exact(Scalar::one()) }
    }
}

/// `m_n = sum_k N(n,k) rate^k jump^n`.
pub fn mp_moments(law: &MPLaw, n: u64, spec: &DeltaSpec) -> Result<Weight> {
    if n == 0 {
        return Err(Error::Domain("moments start at n = 1".into()));
    }
    match (&law.rate, &law.jump) {
        (Weight::Exact(r), Weight::Exact(a)) => {
            let mut m = Scalar::zero();
            for k in 1..=n {
                m += Scalar::from_bigint(narayana(n, k)?) * r.pow(k as u32);
            }
            Ok(Weight::Exact(m * a.pow(n as u32)))
        }
        _ => {
            let (r, a) = (law.rate.value(spec)?, law.jump.value(spec)?);
            let mut m = 0.0;
            for k in 1..=n {
                m += narayana(n, k)?.to_f64().unwrap_or(f64::INFINITY) * r.powi(k as i32);
            }
            Ok(Weight::Numeric(m * a.powi(n as i32)))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpSupport {
    pub atom: f64,
    pub support_min: f64,
    pub support_max: f64,
    /// No atom and support bounded away from 0.
    pub invertible: bool,
}

/// Atom `max(1 - rate, 0)` at 0 and support `jump (1 ± sqrt(rate))^2`.
pub fn mp_support(law: &MPLaw, spec: &DeltaSpec, tol: f64) -> Result<MpSupport> {
    let r = law.rate.value(spec)?;
    let a = law.jump.value(spec)?;
    let atom = (1.0 - r).max(0.0);
    let support_min = a * (1.0 - r.sqrt()).powi(2);
    let support_max = a * (1.0 + r.sqrt()).powi(2);
    let invertible = r > 1.0 + tol && support_min > tol;
    Ok(MpSupport { atom, support_min, support_max, invertible })
}

/// `tau_0` of the `n`-fold graded power of the cup.
pub fn cup_moments(n: usize) -> Result<Scalar> {
    if n == 0 {
        return Err(Error::Domain("moments start at n = 1".into()));
    }
    let cup = GJSElement::cup(Convention::Graded);
    let mut x = cup.clone();
    for _ in 1..n {
        x = x.graded_mul(&cup, 0)?;
    }
    x.voiculescu_trace(0)
}

/// Qualitative law of an edge element from its endpoint weights.
/// `beta == None` means a loop at `alpha`.
pub fn edge_law_report(alpha: &Weight, beta: Option<&Weight>, spec: &DeltaSpec, tol: f64) -> Result<Vec<String>> {
    let a = alpha.value(spec)?;
    let Some(beta) = beta else {
        return Ok(vec!["loop: free Poisson, no atoms, support contains 0".into()]);
    };
    let b = beta.value(spec)?;
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Domain("weights must be positive".into()));
    }
    if (a - b).abs() <= tol * a.max(b).max(1.0) {
        return Ok(vec!["equal weights: both corners free Poisson, no atoms, support contains 0".into()]);
    }
    let (big, small, big_w, small_w) = if a > b { ("alpha", "beta", alpha, beta) } else { ("beta", "alpha", beta, alpha) };
    let atom = match (big_w, small_w) {
        (Weight::Exact(x), Weight::Exact(y)) => Weight::Exact(x - y),
        _ => Weight::Numeric((a - b).abs()),
    };
    Ok(vec![
        format!("{small} corner: free Poisson supported away from 0"),
        format!("{big} corner: free Poisson with an atom at 0 of size {} = {}", atom, fmt_weight_value(&atom, spec)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_pairings;
    use proptest::prelude::*;

    fn d() -> Scalar {
        Scalar::delta()
    }

    #[test]
    fn catalan_and_narayana() {
        assert_eq!(catalan(0), BigInt::one());
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(BigInt::from(enumerate_pairings(6).len()), catalan(3));
        assert_eq!(narayana(3, 2).unwrap(), BigInt::from(3));
        assert!(narayana(3, 4).is_err() && narayana(3, 0).is_err());
        for n in 1..=12 {
            let s: BigInt = (1..=n).map(|k| narayana(n, k).unwrap()).sum();
            assert_eq!(s, catalan(n));
        }
    }

    #[test]
    fn moments() {
        let std = MPLaw::new(Weight::Exact(Scalar::one()), Weight::Exact(Scalar::one())).unwrap();
        for n in 1..=6 {
            assert_eq!(mp_moments(&std, n, &DeltaSpec::Generic).unwrap(), Weight::Exact(Scalar::from_bigint(catalan(n))));
        }
        let cup = MPLaw::cup_law();
        assert_eq!(mp_moments(&cup, 1, &DeltaSpec::Generic).unwrap(), Weight::Exact(d()));
        assert_eq!(mp_moments(&cup, 2, &DeltaSpec::Generic).unwrap(), Weight::Exact(d() + d().pow(2)));
        let num = MPLaw::new(Weight::Numeric(2.0), Weight::Numeric(1.0)).unwrap();
        assert_eq!(mp_moments(&num, 2, &DeltaSpec::Generic).unwrap(), Weight::Numeric(6.0));
    }

    #[test]
    fn supports() {
        let s = mp_support(&MPLaw::cup_law(), &DeltaSpec::RootOfUnity(4), 1e-9).unwrap();
        assert!(s.invertible && s.atom == 0.0);
        assert!((s.support_min - (1.0 - 2f64.sqrt().sqrt()).powi(2)).abs() < 1e-12);
        let one = MPLaw::new(Weight::Numeric(1.0), Weight::Numeric(1.0)).unwrap();
        let s = mp_support(&one, &DeltaSpec::Generic, 1e-9).unwrap();
        assert!(!s.invertible && s.atom == 0.0 && s.support_min == 0.0);
        let half = MPLaw::new(Weight::Numeric(0.5), Weight::Numeric(1.0)).unwrap();
        let s = mp_support(&half, &DeltaSpec::Generic, 1e-9).unwrap();
        assert!(!s.invertible && s.atom == 0.5);
        assert!(MPLaw::new(Weight::Numeric(-1.0), Weight::Numeric(1.0)).is_err());
    }

    /// Direct count: loops formed by n fixed cups against every capping.
    fn cup_oracle(n: usize) -> Scalar {
        let mut total = Scalar::zero();
        for caps in crate::diagram::noncrossing_matchings(2 * n) {
            let mut seen = vec![false; 2 * n];
            let mut loops = 0;
            for s in 0..2 * n {
                if seen[s] {
                    continue;
                }
                loops += 1;
                let mut p = s;
                loop {
                    seen[p] = true;
                    let q = p ^ 1;
                    seen[q] = true;
                    p = caps[q] as usize;
                    if p == s {
                        break;
                    }
                }
            }
            total += Scalar::delta_pow(loops);
        }
        total
    }

    #[test]
    fn cup_moment_examples() {
        assert_eq!(cup_moments(1).unwrap(), d());
        assert_eq!(cup_moments(2).unwrap(), d().pow(2) + d());
        assert_eq!(cup_moments(3).unwrap(), d().pow(3) + Scalar::from_int(3) * d().pow(2) + d());
        for n in 1..=5 {
            assert_eq!(cup_moments(n).unwrap(), cup_oracle(n));
        }
    }

    #[test]
    fn cup_matches_free_poisson() {
        for n in 1..=6 {
            let Weight::Exact(m) = mp_moments(&MPLaw::cup_law(), n as u64, &DeltaSpec::Generic).unwrap() else { panic!() };
            assert_eq!(cup_moments(n).unwrap(), m, "n={n}");
        }
    }

    #[test]
    fn edge_laws() {
        let g = DeltaSpec::RootOfUnity(4);
        let one = Weight::Exact(Scalar::one());
        let r = edge_law_report(&one, None, &g, 1e-9).unwrap();
        assert!(r[0].contains("no atoms") && r[0].contains("contains 0"));
        let r = edge_law_report(&Weight::Exact(d()), Some(&one), &g, 1e-9).unwrap();
        assert!(r[0].starts_with("beta corner") && r[0].contains("away from 0"));
        assert!(r[1].contains("d - 1 = 0.414213562"));
        let r = edge_law_report(&one, Some(&one), &g, 1e-9).unwrap();
        assert!(r[0].contains("equal weights"));
    }

    proptest! {
        #[test]
        fn invertibility_tracks_delta(x in 0.05f64..4.0) {
            let law = MPLaw::new(Weight::Numeric(x), Weight::Numeric(1.0)).unwrap();
            let s = mp_support(&law, &DeltaSpec::Generic, 1e-9).unwrap();
            prop_assert_eq!(s.invertible, x > 1.0 + 1e-9);
            prop_assert!(s.atom >= 0.0 && s.atom <= 1.0 && s.support_min <= s.support_max);
        }
    }
}
