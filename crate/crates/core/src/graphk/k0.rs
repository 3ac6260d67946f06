use super::{fmt_f64, name_map, Weight, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::{DeltaSpec, Scalar};

/// An element of `K0(A_0)`, one integer per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K0Class {
    coeffs: Vec<i64>,
}

impl K0Class {
    pub fn zero(n: usize) -> Self {
        K0Class { coeffs: vec![0; n] }
    }

    pub fn basis(n: usize, v: usize) -> Self {
        let mut c = K0Class::zero(n);
        c.coeffs[v] = 1;
        c
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        K0Class { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_mul(k).ok_or_else(|| Error::Domain("K0 coefficient overflow".into())))
            .collect::<Result<_>>()?;
        Ok(K0Class { coeffs })
    }

    /// Parse `jw1 - jw0`, `2*v2`, `[a] + 3[b]` against the vertex names of `g`.
    pub fn parse(text: &str, g: &WeightedGraph) -> Result<K0Class> {
        let names = name_map(g);
        let mut out = K0Class::zero(g.len());
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && chars[*i].1.is_whitespace() {
                *i += 1;
            }
        };
        let col = |i: usize| chars.get(i).map_or(text.len(), |c| c.0) + 1;
        let mut first = true;
        skip_ws(&mut i);
        if i == chars.len() {
            return Err(Error::parse(1, 1, "empty class"));
        }
        if text.trim() == "0" {
            return Ok(out);
        }
        while i < chars.len() {
            let mut sign = 1i64;
            if i < chars.len() && (chars[i].1 == '+' || chars[i].1 == '-') {
                if chars[i].1 == '-' {
                    sign = -1;
                }
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(Error::parse(1, col(i), "expected '+' or '-'"));
            }
            first = false;
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let mut coef = 1i64;
            if i > start {
                let digits: String = chars[start..i].iter().map(|c| c.1).collect();
                coef = digits.parse().map_err(|_| Error::parse(1, col(start), "coefficient too large"))?;
                skip_ws(&mut i);
                if i < chars.len() && chars[i].1 == '*' {
                    i += 1;
                    skip_ws(&mut i);
                }
            }
            let bracket = i < chars.len() && chars[i].1 == '[';
            if bracket {
                i += 1;
            }
            let name_start = i;
            while i < chars.len() && !chars[i].1.is_whitespace() && !matches!(chars[i].1, '+' | '-' | ']' | '[' | '*') {
                i += 1;
            }
            if i == name_start {
                return Err(Error::parse(1, col(i), "expected a vertex name"));
            }
            let name: String = chars[name_start..i].iter().map(|c| c.1).collect();
            let v = *names
                .get(name.as_str())
                .ok_or_else(|| Error::parse(1, col(name_start), format!("unknown vertex '{name}'")))?;
            if bracket {
                if i < chars.len() && chars[i].1 == ']' {
                    i += 1;
                } else {
                    return Err(Error::parse(1, col(i), "expected ']'"));
                }
            }
            out.coeffs[v] += sign * coef;
            skip_ws(&mut i);
        }
        Ok(out)
    }

    pub fn display(&self, g: &WeightedGraph) -> String {
        let mut s = String::new();
        for (v, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = g.name(v);
            let mag = c.unsigned_abs();
            let term = if mag == 1 { format!("[{name}]") } else { format!("{mag}[{name}]") };
            if s.is_empty() {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            s.push_str(&term);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Class of `1_k`: coefficient of `[p_alpha]` is the number of length-`k`
/// walks from the star to `alpha`. The flag is set when a truncated chain
/// boundary may have cut walks off.
pub fn identity_class(g: &WeightedGraph, k: usize) -> Result<(K0Class, bool)> {
    let adj = g.adjacency();
    let n = g.len();
    let mut v = K0Class::basis(n, g.star()).coeffs;
    for _ in 0..k {
        let mut next = vec![0i64; n];
        for a in 0..n {
            for b in 0..n {
                if adj[a][b] != 0 && v[b] != 0 {
                    let t = adj[a][b].checked_mul(v[b]).ok_or_else(|| Error::Domain("walk count overflow".into()))?;
                    next[a] = next[a].checked_add(t).ok_or_else(|| Error::Domain("walk count overflow".into()))?;
                }
            }
        }
        v = next;
    }
    let provisional = g.truncated_at().is_some_and(|c| k >= c);
    Ok((K0Class { coeffs: v }, provisional))
}

/// `sum_alpha x_alpha mu(alpha)`; exact when every weight is.
pub fn class_trace(x: &K0Class, weights: &[Weight], spec: &DeltaSpec) -> Result<Weight> {
    if x.coeffs.len() != weights.len() {
        return Err(Error::Graph("class and weights have different sizes".into()));
    }
    if weights.iter().all(|w| matches!(w, Weight::Exact(_))) {
        let mut t = Scalar::zero();
        for (c, w) in x.coeffs.iter().zip(weights) {
            if let (Weight::Exact(s), true) = (w, *c != 0) {
                t += Scalar::from_int(*c) * s;
            }
        }
        return Ok(Weight::Exact(t).reduced(spec));
    }
    let mut t = 0.0;
    for (c, w) in x.coeffs.iter().zip(weights) {
        if *c != 0 {
            t += *c as f64 * w.value(spec)?;
        }
    }
    Ok(Weight::Numeric(t))
}

/// Sign of a weight at `spec`: exact zero test for symbolic values.
pub(crate) fn sign(w: &Weight, spec: &DeltaSpec, tol: f64) -> Result<i8> {
    let zero = match w {
        Weight::Exact(s) => s.vanishes_at(spec, tol)?,
        Weight::Numeric(x) => x.abs() <= tol,
    };
    if zero {
        return Ok(0);
    }
    Ok(if w.value(spec)? > 0.0 { 1 } else { -1 })
}

pub(crate) fn minus(a: &Weight, b: &Weight, spec: &DeltaSpec) -> Result<Weight> {
    match (a, b) {
        (Weight::Exact(x), Weight::Exact(y)) => Ok(Weight::Exact(x - y).reduced(spec)),
        _ => Ok(Weight::Numeric(a.value(spec)? - b.value(spec)?)),
    }
}

#[derive(Clone, Debug)]
pub struct ScaleVerdict {
    pub trace: Weight,
    pub trace_value: f64,
    pub positive: bool,
    pub in_scale: bool,
}

/// Positive cone `{tr > 0} ∪ {0}` and scale `{tr ∈ (0,1)} ∪ {0, [p_star]}`.
pub fn cone_scale_verdict(g: &WeightedGraph, weights: &[Weight], spec: &DeltaSpec, x: &K0Class, tol: f64) -> Result<ScaleVerdict> {
    let trace = class_trace(x, weights, spec)?;
    let s = sign(&trace, spec, tol)?;
    let unit = *x == K0Class::basis(g.len(), g.star());
    let below_one = sign(&minus(&trace, &Weight::Exact(Scalar::one()), spec)?, spec, tol)? < 0;
    let positive = x.is_zero() || s > 0;
    let in_scale = x.is_zero() || unit || (s > 0 && below_one);
    let trace_value = if s == 0 { 0.0 } else { trace.value(spec)? };
    Ok(ScaleVerdict { trace_value, trace, positive, in_scale })
}

/// Comparison of two projection classes by trace (Theorem compareproj).
pub fn compare_note(g: &WeightedGraph, weights: &[Weight], spec: &DeltaSpec, x: &K0Class, y: &K0Class, tol: f64) -> Result<String> {
    let tx = class_trace(x, weights, spec)?;
    let ty = class_trace(y, weights, spec)?;
    let (nx, ny) = (x.display(g), y.display(g));
    if sign(&tx, spec, tol)? <= 0 || sign(&ty, spec, tol)? <= 0 {
        return Ok("comparison needs two classes of positive trace".into());
    }
    Ok(match sign(&minus(&tx, &ty, spec)?, spec, tol)? {
        1 => format!("tr({nx}) > tr({ny}): {ny} is equivalent to a subprojection of {nx} (Theorem compareproj)"),
        -1 => format!("tr({ny}) > tr({nx}): {nx} is equivalent to a subprojection of {ny} (Theorem compareproj)"),
        _ if x == y => "equal classes".into(),
        _ => format!("tr({nx}) = tr({ny}) but the classes differ"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectionless {
    pub projectionless: bool,
    pub dense_scale: bool,
    /// Vertices whose weight is not a natural number.
    pub non_integer: Vec<usize>,
}

/// Projectionless exactly when every weight is a natural number;
/// otherwise projection traces are dense in `[0, 1]`.
pub fn projectionless_verdict(weights: &[Weight], spec: &DeltaSpec, tol: f64) -> Result<Projectionless> {
    let mut non_integer = Vec::new();
    for (v, w) in weights.iter().enumerate() {
        let x = w.value(spec)?;
        let n = x.round();
        let integral = n >= 1.0
            && match w {
                Weight::Exact(s) => (s - Scalar::from_int(n as i64)).vanishes_at(spec, tol)?,
                Weight::Numeric(_) => (x - n).abs() <= tol,
            };
        if !integral {
            non_integer.push(v);
        }
    }
    let projectionless = non_integer.is_empty();
    Ok(Projectionless { projectionless, dense_scale: !projectionless, non_integer })
}

/// `Some(n)` when `d^2 = n` (exactly at `cos:M`, within `tol` numerically).
pub fn delta_squared_integer(spec: &DeltaSpec, tol: f64) -> Result<Option<i64>> {
    let v = match spec.value() {
        Some(x) => x * x,
        None => return Ok(None),
    };
    let n = v.round();
    let hit = match spec {
        DeltaSpec::RootOfUnity(_) => (Scalar::delta().pow(2) - Scalar::from_int(n as i64)).vanishes_at(spec, tol)?,
        _ => (v - n).abs() <= tol,
    };
    Ok(hit.then_some(n as i64))
}

/// `N(d^2)`: the least natural number strictly above `d^2`.
pub fn pp_bound(spec: &DeltaSpec, tol: f64) -> Result<u64> {
    let x = spec
        .value()
        .ok_or_else(|| Error::InvalidDelta("N(delta^2) needs a specialized delta".into()))?;
    let dsq = delta_squared_integer(spec, tol)?;
    if x <= 1.0 || dsq.is_some_and(|n| n <= 1) {
        return Err(Error::InvalidDelta(format!("delta must exceed 1, got {}", fmt_f64(x))));
    }
    Ok(match dsq {
        Some(n) => n as u64 + 1,
        None => (x * x).floor() as u64 + 1,
    })
}

#[derive(Clone, Debug)]
pub struct Obstruction {
    pub depth: usize,
    pub delta_squared: Option<i64>,
    pub class_two: Option<K0Class>,
    pub obstructed: bool,
    pub lines: Vec<String>,
}

/// Compare `[1_2]` with `d^2 [1_0]` (Example GroupAction, Theorem PPSize).
pub fn crossed_product_obstruction(g: &WeightedGraph, spec: &DeltaSpec, tol: f64) -> Result<Obstruction> {
    let depth = g.depth();
    let dsq = delta_squared_integer(spec, tol)?;
    let mut lines = vec![format!("depth = {depth}")];
    if depth < 2 {
        lines.push("depth < 2: no depth-2 obstruction".into());
        return Ok(Obstruction { depth, delta_squared: dsq, class_two: None, obstructed: false, lines });
    }
    let (c2, _) = identity_class(g, 2)?;
    lines.push(format!("[1_2] = {}", c2.display(g)));
    let Some(n) = dsq else {
        lines.push("delta^2 is not an integer: the group-subfactor reading does not apply".into());
        if spec.value().is_some() {
            lines.push(format!("minimal Pimsner-Popa basis size N(delta^2) = {} (Theorem PPSize)", pp_bound(spec, tol)?));
        }
        return Ok(Obstruction { depth, delta_squared: None, class_two: Some(c2), obstructed: false, lines });
    };
    let target = K0Class::basis(g.len(), g.star()).scale(n)?;
    let obstructed = c2 != target;
    if obstructed {
        lines.push(format!("[1_2] != {} = delta^2 [1_0]", target.display(g)));
        lines.push(format!("no Pimsner-Popa basis of size delta^2 = {n} for A_1 over A_0 (Theorem PPSize)"));
        lines.push(format!("A_1 is not A_0 crossed by a group of order {n} (Example GroupAction)"));
    } else {
        lines.push("[1_2] = delta^2 [1_0]: no obstruction".into());
    }
    Ok(Obstruction { depth, delta_squared: Some(n), class_two: Some(c2), obstructed, lines })
}
