use crate::error::{Error, Result};
use std::fmt;

/// How `d` is specialized when a number is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaSpec {
    Generic,
    /// A real value strictly above 1.
    Numeric(f64),
    /// `d = 2cos(pi/m)`, `m >= 3`.
    RootOfUnity(u32),
}

impl DeltaSpec {
    pub fn numeric(x: f64) -> Result<Self> {
        if !(x.is_finite() && x > 1.0) {
            return Err(Error::InvalidDelta(format!("numeric delta must exceed 1, got {x}")));
        }
        Ok(DeltaSpec::Numeric(x))
    }

    pub fn root_of_unity(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidDelta(format!("cos:M needs M >= 3, got {m}")));
        }
        Ok(DeltaSpec::RootOfUnity(m))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            DeltaSpec::Generic => None,
            DeltaSpec::Numeric(x) => Some(*x),
            DeltaSpec::RootOfUnity(m) => Some(2.0 * (std::f64::consts::PI / *m as f64).cos()),
        }
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, DeltaSpec::Generic)
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSpec::Generic => f.write_str("generic"),
            DeltaSpec::Numeric(x) => write!(f, "{x}"),
            DeltaSpec::RootOfUnity(m) => write!(f, "cos:{m}"),
        }
    }
}

impl std::str::FromStr for DeltaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "generic" {
            return Ok(DeltaSpec::Generic);
        }
        if let Some(m) = t.strip_prefix("cos:") {
            let m: u32 = m
                .parse()
                .map_err(|_| Error::parse(1, 5, format!("expected an integer after cos:, got '{m}'")))?;
            return DeltaSpec::root_of_unity(m);
        }
        let x: f64 = t
            .parse()
            .map_err(|_| Error::parse(1, 1, format!("expected generic, cos:M or a number, got '{t}'")))?;
        DeltaSpec::numeric(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes() {
        assert_eq!("generic".parse::<DeltaSpec>().unwrap(), DeltaSpec::Generic);
        assert_eq!("cos:5".parse::<DeltaSpec>().unwrap(), DeltaSpec::RootOfUnity(5));
        assert_eq!("2".parse::<DeltaSpec>().unwrap(), DeltaSpec::Numeric(2.0));
        assert!("1".parse::<DeltaSpec>().is_err());
        assert!("cos:2".parse::<DeltaSpec>().is_err());
        assert!(matches!("cos:x".parse::<DeltaSpec>(), Err(Error::Parse { .. })));
    }
}
