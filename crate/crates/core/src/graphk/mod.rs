//! Pointed weighted graphs: principal-graph data and the analyses run on it.

mod fp;
mod k0;
mod report;

pub use fp::{fp_solve, fp_verify, resolve_weights, FpCheck, FpSolution};
pub use k0::{
    class_trace, compare_note, cone_scale_verdict, crossed_product_obstruction, delta_squared_integer, identity_class,
    pp_bound, projectionless_verdict, K0Class, Obstruction, Projectionless, ScaleVerdict,
};
pub use report::{block_descriptors, simplicity_report, BlockDescriptor, BlockKind, SimplicityReport};

use crate::error::{Error, Result};
use crate::scalar::poly::min_poly_two_cos;
use crate::scalar::{quantum_integer, DeltaSpec, Scalar};
use std::collections::{HashMap, VecDeque};
use std::fmt;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Vertex weight, exact when it can be written in `d`.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(Scalar),
    Numeric(f64),
}

impl Weight {
    pub fn value(&self, spec: &DeltaSpec) -> Result<f64> {
        match self {
            Weight::Exact(s) => match s.as_rational() {
                Some(q) => Ok(num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN)),
                None => s.evaluate(spec),
            },
            Weight::Numeric(x) => Ok(*x),
        }
    }

    /// Canonical form at `spec`: exact values at `cos:M` are reduced modulo
    /// the minimal polynomial of `2cos(pi/M)`.
    pub fn reduced(self, spec: &DeltaSpec) -> Weight {
        match (self, spec) {
            (Weight::Exact(s), DeltaSpec::RootOfUnity(m)) => Weight::Exact(s.reduce_mod(&min_poly_two_cos(*m as usize))),
            (w, _) => w,
        }
    }

    pub fn parse(s: &str) -> Result<Weight> {
        match s.parse::<Scalar>() {
            Ok(v) => Ok(Weight::Exact(v)),
            Err(e) => s.trim().parse::<f64>().map(Weight::Numeric).map_err(|_| e),
        }
    }
}

pub(crate) fn fmt_f64(x: f64) -> String {
    if x == x.round() && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let s = format!("{x:.9}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Decimal value of a weight at `spec`.
pub fn fmt_weight_value(w: &Weight, spec: &DeltaSpec) -> Result<String> {
    Ok(fmt_f64(w.value(spec)?))
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(s) => write!(f, "{s}"),
            Weight::Numeric(x) => f.write_str(&fmt_f64(*x)),
        }
    }
}

/// An undirected edge with multiplicity; `a <= b`, `a == b` is a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub mult: u32,
}

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    names: Vec<String>,
    weights: Vec<Option<Weight>>,
    edges: Vec<Edge>,
    star: Option<usize>,
    delta: DeltaSpec,
    truncated_at: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectedEdge {
    pub source: usize,
    pub target: usize,
    /// Index of the undirected edge copy it comes from.
    pub origin: usize,
}

#[derive(Clone, Debug)]
pub struct DirectedGraph {
    pub edges: Vec<DirectedEdge>,
    pub op: Vec<usize>,
}

impl WeightedGraph {
    pub fn new(delta: DeltaSpec) -> Self {
        WeightedGraph { names: Vec::new(), weights: Vec::new(), edges: Vec::new(), star: None, delta, truncated_at: None }
    }

    pub fn add_vertex(&mut self, name: &str, weight: Option<Weight>) -> Result<usize> {
        if self.index_of(name).is_some() {
            return Err(Error::Graph(format!("vertex {name} declared twice")));
        }
        self.names.push(name.to_string());
        self.weights.push(weight);
        Ok(self.names.len() - 1)
    }

    pub fn add_edge(&mut self, a: &str, b: &str, mult: u32) -> Result<()> {
        let ia = self.index_of(a).ok_or_else(|| Error::Graph(format!("unknown vertex {a}")))?;
        let ib = self.index_of(b).ok_or_else(|| Error::Graph(format!("unknown vertex {b}")))?;
        if mult == 0 {
            return Ok(());
        }
        let (a, b) = (ia.min(ib), ia.max(ib));
        match self.edges.iter_mut().find(|e| e.a == a && e.b == b) {
            Some(e) => e.mult += mult,
            None => self.edges.push(Edge { a, b, mult }),
        }
        Ok(())
    }

    pub fn set_star(&mut self, name: &str) -> Result<()> {
        self.star = Some(self.index_of(name).ok_or_else(|| Error::Graph(format!("unknown vertex {name}")))?);
        Ok(())
    }

    pub fn set_delta(&mut self, delta: DeltaSpec) {
        self.delta = delta;
    }

    pub fn set_weights(&mut self, weights: Vec<Weight>) {
        self.weights = weights.into_iter().map(Some).collect();
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn star(&self) -> usize {
        self.star.expect("validated graph has a star")
    }

    pub fn delta(&self) -> DeltaSpec {
        self.delta
    }

    /// For a truncated infinite chain: index of the last kept vertex.
    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    /// All weights, when every vertex has one.
    pub fn weights(&self) -> Option<Vec<Weight>> {
        self.weights.iter().cloned().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let star = self.star.ok_or_else(|| Error::Graph("no star vertex declared".into()))?;
        if self.depths().iter().any(Option::is_none) {
            return Err(Error::Graph("graph is not connected".into()));
        }
        if let Some(w) = &self.weights[star] {
            let one = match w {
                Weight::Exact(s) => s.is_one(),
                Weight::Numeric(x) => (x - 1.0).abs() <= DEFAULT_TOLERANCE,
            };
            if !one {
                return Err(Error::Graph(format!("weight of the star must be 1, got {w}")));
            }
        }
        Ok(())
    }

    /// Symmetric adjacency matrix; a loop adds its multiplicity on the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.len();
        let mut a = vec![vec![0i64; n]; n];
        for e in &self.edges {
            if e.a == e.b {
                a[e.a][e.a] += e.mult as i64;
            } else {
                a[e.a][e.b] += e.mult as i64;
                a[e.b][e.a] += e.mult as i64;
            }
        }
        a
    }

    /// BFS distance from the star; `None` for unreachable vertices.
    pub fn depths(&self) -> Vec<Option<usize>> {
        let n = self.len();
        let mut dist = vec![None; n];
        let Some(s) = self.star else { return dist };
        let adj = self.adjacency();
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if adj[v][w] > 0 && dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn depth(&self) -> usize {
        self.depths().into_iter().flatten().max().unwrap_or(0)
    }

    /// True when the vertices split in two classes with every edge between them.
    pub fn is_bipartite(&self) -> bool {
        let d = self.depths();
        self.edges.iter().all(|e| match (d[e.a], d[e.b]) {
            (Some(x), Some(y)) => (x + y) % 2 == 1,
            _ => false,
        })
    }

    pub fn build_directed(&self) -> DirectedGraph {
        let mut edges = Vec::new();
        let mut op = Vec::new();
        let mut origin = 0;
        for e in &self.edges {
            for _ in 0..e.mult {
                if e.a == e.b {
                    op.push(edges.len());
                    edges.push(DirectedEdge { source: e.a, target: e.a, origin });
                } else {
                    let i = edges.len();
                    edges.push(DirectedEdge { source: e.a, target: e.b, origin });
                    edges.push(DirectedEdge { source: e.b, target: e.a, origin });
                    op.push(i + 1);
                    op.push(i);
                }
                origin += 1;
            }
        }
        DirectedGraph { edges, op }
    }

    /// Read the line-oriented graph format.
    pub fn parse(text: &str) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(DeltaSpec::Generic);
        let mut edges: Vec<(usize, usize, String, usize, String, u32)> = Vec::new();
        let mut star_decl: Option<(String, usize, usize)> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(content);
            let Some(&(c0, head)) = tokens.first() else { continue };
            let arg = |k: usize, what: &str| -> Result<(usize, &str)> {
                tokens.get(k).copied().ok_or_else(|| Error::parse(line_no, content.trim_end().len() + 1, format!("expected {what}")))
            };
            let extra = |k: usize| -> Result<()> {
                match tokens.get(k) {
                    Some(&(c, t)) => Err(Error::parse(line_no, c, format!("unexpected '{t}'"))),
                    None => Ok(()),
                }
            };
            match head {
                "star" => {
                    let (cn, name) = arg(1, "a vertex name")?;
                    extra(2)?;
                    if star_decl.is_some() {
                        return Err(Error::parse(line_no, c0, "star declared twice"));
                    }
                    star_decl = Some((name.to_string(), line_no, cn));
                }
                "vertex" => {
                    let (cn, name) = arg(1, "a vertex name")?;
                    let weight = match tokens.get(2) {
                        Some(&(cw, _)) => {
                            let wtext = content[cw - 1..].trim_end();
                            Some(Weight::parse(wtext).map_err(|e| e.at_line(line_no, cw - 1))?)
                        }
                        None => None,
                    };
                    if g.index_of(name).is_some() {
                        return Err(Error::parse(line_no, cn, format!("vertex {name} declared twice")));
                    }
                    g.names.push(name.to_string());
                    g.weights.push(weight);
                }
                "edge" => {
                    let (ca, a) = arg(1, "two vertex names")?;
                    let (cb, b) = arg(2, "two vertex names")?;
                    let mult = match tokens.get(3) {
                        Some(&(cm, m)) => m
                            .parse::<u32>()
                            .map_err(|_| Error::parse(line_no, cm, format!("multiplicity must be a positive integer, got '{m}'")))?,
                        None => 1,
                    };
                    extra(4)?;
                    edges.push((line_no, ca, a.to_string(), cb, b.to_string(), mult));
                }
                "delta" => {
                    let (cd, d) = arg(1, "generic, cos:M or a number")?;
                    extra(2)?;
                    g.delta = d.parse::<DeltaSpec>().map_err(|e| match e {
                        Error::Parse { msg, .. } => Error::parse(line_no, cd, msg),
                        other => Error::parse(line_no, cd, other.to_string()),
                    })?;
                }
                other => return Err(Error::parse(line_no, c0, format!("unknown directive '{other}'"))),
            }
        }
        for (line_no, ca, a, cb, b, mult) in edges {
            if g.index_of(&a).is_none() {
                return Err(Error::parse(line_no, ca, format!("unknown vertex '{a}'")));
            }
            if g.index_of(&b).is_none() {
                return Err(Error::parse(line_no, cb, format!("unknown vertex '{b}'")));
            }
            g.add_edge(&a, &b, mult)?;
        }
        match star_decl {
            Some((name, line_no, col)) => {
                g.set_star(&name).map_err(|_| Error::parse(line_no, col, format!("unknown vertex '{name}'")))?;
            }
            None => return Err(Error::parse(text.lines().count().max(1), 1, "missing 'star' line")),
        }
        g.validate()?;
        Ok(g)
    }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokenize(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st + 1, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st + 1, &s[st..]));
    }
    out
}

/// The chain `A_n` with the star at one end and vertices `jw0 .. jw{n-1}`.
pub fn chain(n: usize, delta: DeltaSpec) -> WeightedGraph {
    let mut g = WeightedGraph::new(delta);
    for k in 0..n {
        g.add_vertex(&format!("jw{k}"), None).expect("fresh name");
        if k > 0 {
            g.add_edge(&format!("jw{}", k - 1), &format!("jw{k}"), 1).expect("known vertices");
        }
    }
    g.set_star("jw0").expect("jw0 exists");
    g
}

/// Principal graph of TL at `delta`: `A_{m-1}` at `2cos(pi/m)`, otherwise
/// `A_∞` cut after vertex `jw{cutoff}`. Weights are quantum integers.
/// Numbers within `tol` of some `2cos(pi/m)` or of 2 snap to it.
pub fn tl_principal_graph(delta: DeltaSpec, cutoff: usize, tol: f64) -> Result<WeightedGraph> {
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be at least 1".into()));
    }
    let spec = match delta {
        DeltaSpec::Numeric(x) if x < 2.0 - tol => {
            let mut m = 3u32;
            loop {
                let v = 2.0 * (std::f64::consts::PI / m as f64).cos();
                if (v - x).abs() <= tol {
                    break DeltaSpec::RootOfUnity(m);
                }
                if v > x + tol || m > 1_000_000 {
                    return Err(Error::NotTlModulus(format!("{x} is not 2cos(pi/m) and lies below 2")));
                }
                m += 1;
            }
        }
        DeltaSpec::Numeric(x) if (x - 2.0).abs() <= tol => DeltaSpec::Numeric(2.0),
        other => other,
    };
    let (n, truncated) = match spec {
        DeltaSpec::RootOfUnity(m) => (m as usize - 1, None),
        _ => (cutoff + 1, Some(cutoff)),
    };
    let mut g = chain(n, spec);
    g.set_weights((1..=n).map(|k| Weight::Exact(quantum_integer(k)).reduced(&spec)).collect());
    g.truncated_at = truncated;
    Ok(g)
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "delta {}", self.delta)?;
        if let Some(s) = self.star {
            writeln!(f, "star {}", self.names[s])?;
        }
        for (n, w) in self.names.iter().zip(&self.weights) {
            match w {
                Some(w) => writeln!(f, "vertex {n} {w}")?,
                None => writeln!(f, "vertex {n}")?,
            }
        }
        for e in &self.edges {
            if e.mult == 1 {
                writeln!(f, "edge {} {}", self.names[e.a], self.names[e.b])?;
            } else {
                writeln!(f, "edge {} {} {}", self.names[e.a], self.names[e.b], e.mult)?;
            }
        }
        Ok(())
    }
}

/// Vertex lookup used by class parsing.
pub(crate) fn name_map(g: &WeightedGraph) -> HashMap<&str, usize> {
    g.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
}
