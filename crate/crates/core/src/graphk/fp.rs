use super::{fmt_f64, Weight, WeightedGraph};
use crate::error::{Error, Result};
use crate::scalar::{quantum_integer, DeltaSpec, Scalar};
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Clone, Debug)]
pub struct FpSolution {
    pub weights: Vec<Weight>,
    pub delta: DeltaSpec,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct FpCheck {
    pub ok: bool,
    pub exact: bool,
    /// Vertices where the eigenvector equation fails, with the residual.
    pub failures: Vec<(String, String)>,
    pub max_residual: f64,
}

/// Vertex order along a path starting at the star, when the graph is one.
fn chain_order(g: &WeightedGraph) -> Option<Vec<usize>> {
    let n = g.len();
    if g.edges().iter().any(|e| e.a == e.b || e.mult != 1) || g.edges().len() + 1 != n {
        return None;
    }
    let adj = g.adjacency();
    let deg = |v: usize| adj[v].iter().sum::<i64>();
    if (0..n).any(|v| deg(v) > 2) || (n > 1 && deg(g.star()) != 1) {
        return None;
    }
    let mut order = vec![g.star()];
    while order.len() < n {
        let last = *order.last().unwrap();
        let prev = order.len().checked_sub(2).map(|i| order[i]);
        let next = (0..n).find(|&w| adj[last][w] > 0 && Some(w) != prev)?;
        order.push(next);
    }
    Some(order)
}

fn quantum_weights(g: &WeightedGraph, order: &[usize]) -> Vec<Weight> {
    let mut w = vec![Weight::Numeric(0.0); g.len()];
    for (k, &v) in order.iter().enumerate() {
        w[v] = Weight::Exact(quantum_integer(k + 1));
    }
    w
}

/// Frobenius-Perron data normalized to weight 1 at the star.
///
/// A chain pointed at an end gets exact quantum-integer weights at
/// `d = 2cos(pi/(n+1))`; a truncated infinite chain keeps its own `d`.
/// Anything else goes through a numeric symmetric eigensolve.
pub fn fp_solve(g: &WeightedGraph) -> Result<FpSolution> {
    g.validate()?;
    if g.truncated_at().is_some() {
        let order = chain_order(g).ok_or_else(|| Error::Graph("truncated graph is not a chain".into()))?;
        return Ok(FpSolution { weights: quantum_weights(g, &order), delta: g.delta(), exact: true });
    }
    if g.len() >= 2 {
        if let Some(order) = chain_order(g) {
            let spec = DeltaSpec::RootOfUnity(g.len() as u32 + 1);
            let weights = quantum_weights(g, &order).into_iter().map(|w| w.reduced(&spec)).collect();
            return Ok(FpSolution { weights, delta: spec, exact: true });
        }
    }
    let n = g.len();
    let adj = g.adjacency();
    let a = DMatrix::from_fn(n, n, |i, j| adj[i][j] as f64);
    let eig = SymmetricEigen::new(a);
    let (top, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty graph");
    let mut v: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    if v[g.star()] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    if v.iter().any(|&x| x <= 1e-12) {
        return Err(Error::Graph("Perron vector has a non-positive component".into()));
    }
    if lambda <= 1.0 + 1e-12 {
        return Err(Error::Graph(format!("Perron eigenvalue {} is not above 1", fmt_f64(lambda))));
    }
    let s = v[g.star()];
    Ok(FpSolution {
        weights: v.iter().map(|x| Weight::Numeric(x / s)).collect(),
        delta: DeltaSpec::Numeric(lambda),
        exact: false,
    })
}

/// Check `sum_beta m(alpha, beta) mu(beta) = d mu(alpha)` at every vertex.
///
/// Exact when all weights are exact and `delta` is generic or `cos:M`.
/// The last vertex of a truncated chain is skipped.
pub fn fp_verify(g: &WeightedGraph, weights: &[Weight], delta: &DeltaSpec, tol: f64) -> Result<FpCheck> {
    if weights.len() != g.len() {
        return Err(Error::Graph(format!("{} weights for {} vertices", weights.len(), g.len())));
    }
    let adj = g.adjacency();
    let skip = g.truncated_at();
    let exact_mode = !matches!(delta, DeltaSpec::Numeric(_)) && weights.iter().all(|w| matches!(w, Weight::Exact(_)));
    let mut failures = Vec::new();
    let mut max_residual = 0.0f64;
    if exact_mode {
        let mu: Vec<&Scalar> = weights
            .iter()
            .map(|w| match w {
                Weight::Exact(s) => s,
                Weight::Numeric(_) => unreachable!(),
            })
            .collect();
        for alpha in 0..g.len() {
            if Some(alpha) == skip {
                continue;
            }
            let mut res = -(Scalar::delta() * mu[alpha]);
            for beta in 0..g.len() {
                if adj[alpha][beta] != 0 {
                    res += Scalar::from_int(adj[alpha][beta]) * mu[beta];
                }
            }
            if !res.vanishes_at(delta, tol)? {
                if let Ok(x) = res.evaluate(delta) {
                    max_residual = max_residual.max(x.abs());
                }
                failures.push((g.name(alpha).to_string(), res.to_string()));
            }
        }
        return Ok(FpCheck { ok: failures.is_empty(), exact: true, failures, max_residual });
    }
    let d = delta
        .value()
        .ok_or_else(|| Error::InvalidDelta("numeric weights need a specialized delta".into()))?;
    let mu = weights.iter().map(|w| w.value(delta)).collect::<Result<Vec<f64>>>()?;
    for alpha in 0..g.len() {
        if Some(alpha) == skip {
            continue;
        }
        let lhs: f64 = (0..g.len()).map(|beta| adj[alpha][beta] as f64 * mu[beta]).sum();
        let rhs = d * mu[alpha];
        let res = lhs - rhs;
        max_residual = max_residual.max(res.abs());
        if res.abs() > tol * rhs.abs().max(1.0) {
            failures.push((g.name(alpha).to_string(), format!("{res:e}")));
        }
    }
    Ok(FpCheck { ok: failures.is_empty(), exact: false, failures, max_residual })
}

/// Declared weights when the file gives all of them, otherwise `fp_solve`.
pub fn resolve_weights(g: &WeightedGraph) -> Result<FpSolution> {
    match g.weights() {
        Some(weights) => {
            let exact = weights.iter().all(|w| matches!(w, Weight::Exact(_)));
            Ok(FpSolution { weights, delta: g.delta(), exact })
        }
        None => fp_solve(g),
    }
}
