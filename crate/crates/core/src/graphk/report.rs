use super::k0::{minus, sign};
use super::{Weight, WeightedGraph};
use crate::error::Result;
use crate::scalar::{DeltaSpec, Scalar};
use std::collections::VecDeque;
use std::fmt;

#[derive(Clone, Debug)]
pub struct SimplicityReport {
    /// Which of the cases (1), (2), (3) hold.
    pub cases: Vec<u8>,
    pub lines: Vec<String>,
}

impl SimplicityReport {
    pub fn verdict(&self) -> bool {
        !self.cases.is_empty()
    }
}

fn reachable_without(g: &WeightedGraph, from: usize, to: usize, banned: (usize, usize)) -> bool {
    let adj = g.adjacency();
    let n = g.len();
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            let mut m = adj[v][w];
            if (v, w) == banned || (w, v) == banned {
                m -= 1;
            }
            if m > 0 && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen[to]
}

/// Number of pieces the graph splits into at the star, each with an edge.
fn pieces_at_star(g: &WeightedGraph) -> usize {
    let s = g.star();
    let adj = g.adjacency();
    let n = g.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in (0..n).filter(|&v| v != s) {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in (0..n).filter(|&w| w != s) {
                if adj[v][w] > 0 && comp[w] == usize::MAX {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        count += 1;
    }
    count + adj[s][s] as usize
}

/// Which simplicity/unique-trace hypotheses the pointed graph satisfies.
pub fn simplicity_report(g: &WeightedGraph) -> SimplicityReport {
    let s = g.star();
    let adj = g.adjacency();
    let depths = g.depths();
    let mut cases = Vec::new();
    let mut lines = Vec::new();

    let pieces = pieces_at_star(g);
    if pieces >= 2 {
        cases.push(1);
        lines.push(format!("case (1): the star splits the graph into {pieces} parts with edges"));
    }
    let depth_one: Vec<usize> = (0..g.len()).filter(|&v| depths[v] == Some(1)).collect();
    if depth_one.len() == 1 && adj[s][depth_one[0]] == 1 && adj[s][s] == 0 {
        cases.push(2);
        lines.push(format!("case (2): one vertex at depth 1 ({}) joined to the star by one edge", g.name(depth_one[0])));
    }
    let cycle = g
        .edges()
        .iter()
        .filter(|e| e.a != e.b && (e.a == s || e.b == s))
        .find(|e| e.mult >= 2 || reachable_without(g, e.a, e.b, (e.a, e.b)));
    if let Some(e) = cycle {
        let alpha = if e.a == s { e.b } else { e.a };
        cases.push(3);
        lines.push(format!("case (3): Assumption Cycle holds via the edge star-{}", g.name(alpha)));
    }

    if cases.is_empty() {
        lines.push("no theorem applies: outside the trichotomy, no verdict".into());
    } else {
        let theorem = if cases.contains(&1) || cases.contains(&2) { "Theorem SimpleTrace1" } else { "Theorem SimpleTrace2" };
        lines.push(format!("verdict: A_0 simple with unique tracial state ({theorem})"));
        lines.push("K0+ = {x : tr(x) > 0} U {0}".into());
        lines.push("scale = {x : 0 < tr(x) < 1} U {0, [1_0]} (Corollary scale)".into());
    }
    lines.push(format!("K0(A_0) = Z^{}, K1(A_0) = 0 (Fact KTheory)", g.len()));
    if g.is_bipartite() {
        lines.push(
            "bipartite: in the shaded reading A_{k,+} ~ A_{k+1,-} (Remark after Corollary allME); verdicts above use the unshaded reading"
                .into(),
        );
    }
    SimplicityReport { cases, lines }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Loop,
    UnequalWeights,
    EqualWeights,
}

/// Building block attached to one edge copy.
#[derive(Clone, Debug)]
pub struct BlockDescriptor {
    /// Endpoints; for unequal weights the heavier vertex comes first.
    pub ends: (usize, usize),
    pub kind: BlockKind,
    /// Trace mass of the continuous part.
    pub mass: Weight,
    /// Mass of the extra one-dimensional corner at the heavier vertex.
    pub point_mass: Option<Weight>,
}

impl BlockDescriptor {
    pub fn describe(&self, g: &WeightedGraph) -> String {
        let (a, b) = (g.name(self.ends.0), g.name(self.ends.1));
        match self.kind {
            BlockKind::Loop => format!("loop at {a}: C[0,1], mass {}", self.mass),
            BlockKind::UnequalWeights => format!(
                "edge {a}-{b}: unequal weights, M2(C[0,1]) mass {} + C at {a} mass {}",
                self.mass,
                self.point_mass.as_ref().expect("unequal block has a point mass")
            ),
            BlockKind::EqualWeights => format!("edge {a}-{b}: equal weights, M2(C[0,1]) with f(0) diagonal, mass {}", self.mass),
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::Loop => "loop",
            BlockKind::UnequalWeights => "unequal-weights",
            BlockKind::EqualWeights => "equal-weights",
        })
    }
}

fn twice(w: &Weight) -> Weight {
    match w {
        Weight::Exact(s) => Weight::Exact(Scalar::from_int(2) * s),
        Weight::Numeric(x) => Weight::Numeric(2.0 * x),
    }
}

/// One descriptor per edge copy, classified by comparing endpoint weights.
pub fn block_descriptors(g: &WeightedGraph, weights: &[Weight], spec: &DeltaSpec, tol: f64) -> Result<Vec<BlockDescriptor>> {
    let mut out = Vec::new();
    for e in g.edges() {
        let desc = if e.a == e.b {
            BlockDescriptor { ends: (e.a, e.a), kind: BlockKind::Loop, mass: weights[e.a].clone(), point_mass: None }
        } else {
            let diff = minus(&weights[e.a], &weights[e.b], spec)?;
            match sign(&diff, spec, tol)? {
                0 => BlockDescriptor { ends: (e.a, e.b), kind: BlockKind::EqualWeights, mass: twice(&weights[e.a]), point_mass: None },
                sg => {
                    let (big, small) = if sg > 0 { (e.a, e.b) } else { (e.b, e.a) };
                    BlockDescriptor {
                        ends: (big, small),
                        kind: BlockKind::UnequalWeights,
                        mass: twice(&weights[small]),
                        point_mass: Some(minus(&weights[big], &weights[small], spec)?),
                    }
                }
            }
        };
        for _ in 0..e.mult {
            out.push(desc.clone());
        }
    }
    Ok(out)
}
