//! Command-line front end. [`run`] returns the exit code and the report so
//! tests can compare output without spawning a process.

use crate::diagram::enumerate_pairings;
use crate::error::{Error, Result};
use crate::freeprob::{catalan, cup_moments, mp_moments, mp_support, MPLaw};
use crate::gjs::{basis_boxes, check_pulldown, level_boxes, quasi_basis, Convention, GJSElement};
use crate::graphk::{
    block_descriptors, compare_note, cone_scale_verdict, crossed_product_obstruction, fmt_weight_value, fp_verify, identity_class,
    pp_bound, projectionless_verdict, resolve_weights, simplicity_report, tl_principal_graph, K0Class, Weight, WeightedGraph,
    DEFAULT_TOLERANCE,
};
use crate::scalar::DeltaSpec;
use crate::tl::{jones_wenzl_at, TLElement};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment override for the numeric tolerance.
pub const TOLERANCE_ENV: &str = "TLGJS_TOLERANCE";

#[derive(Parser, Debug)]
#[command(name = "tlgjs", version, about = "Exact Temperley-Lieb, GJS and principal-graph computations")]
struct Cli {
    /// Numeric tolerance for floating comparisons
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Temperley-Lieb diagrams and elements
    Tl {
        #[command(subcommand)]
        cmd: TlCmd,
    },
    /// Graded and filtered GJS algebras
    Gjs {
        #[command(subcommand)]
        cmd: GjsCmd,
    },
    /// Free Poisson moments
    Moments {
        #[command(subcommand)]
        cmd: MomentsCmd,
    },
    /// Principal-graph analyses
    Graph(GraphArgs),
}

#[derive(Subcommand, Debug)]
enum TlCmd {
    /// Number of TL diagrams on N boundary points
    Dim { n: usize },
    /// Jones-Wenzl projection f_N
    Jw {
        n: usize,
        #[arg(long, default_value = "generic")]
        delta: String,
    },
    /// Markov trace of a TL element in printed form
    Trace {
        expr: String,
        #[arg(long)]
        normalized: bool,
    },
}

#[derive(Subcommand, Debug)]
enum GjsCmd {
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Quasi-basis for TL_{2n-2} inside TL_{2n}
    QuasiBasis {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    /// Phi is multiplicative and trace preserving on basis boxes
    Phi {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
    },
    /// Pull-down identity on Gr_{k+1} boxes with at most 2 top strings
    Pulldown {
        #[arg(long)]
        k: usize,
    },
    /// tau_infty(x y) = tau_infty(y x) on basis boxes
    Tracial {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum MomentsCmd {
    /// tau_0 of powers of the cup against the free Poisson law of rate d
    Cup {
        #[arg(long)]
        n: usize,
        /// Also report the support at this delta
        #[arg(long)]
        delta: Option<String>,
    },
    /// Free Poisson moments m_1..m_n
    Mp {
        #[arg(long)]
        rate: String,
        #[arg(long, default_value = "1")]
        jump: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "generic")]
        delta: String,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[command(subcommand)]
    verb: GraphVerb,
    /// Graph file
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// TL principal graph at this delta (cos:M or a number)
    #[arg(long, global = true)]
    tl: Option<String>,
    /// Last kept vertex of a truncated infinite chain
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: usize,
}

#[derive(Subcommand, Debug)]
enum GraphVerb {
    /// Frobenius-Perron weights and verification
    Fp,
    /// Class of 1_k in K0(A_0)
    K0 {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Simplicity and projection verdicts
    Report,
    /// N(delta^2)
    PpBound,
    /// Depth-2 K-theoretic obstruction
    Obstruction,
    /// Building blocks per edge
    Blocks,
    /// Positive cone and scale membership of a class
    Scale {
        class: String,
        #[arg(long)]
        compare: Option<String>,
    },
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(format!("error: {e}"))
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Run with `args[0]` as the program name.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let tol = match tolerance(cli.tolerance) {
        Ok(t) => t,
        Err(msg) => return (EXIT_INPUT, msg),
    };
    let out = match cli.cmd {
        Cmd::Tl { cmd } => tl(cmd),
        Cmd::Gjs { cmd } => gjs(cmd),
        Cmd::Moments { cmd } => moments(cmd, tol),
        Cmd::Graph(args) => graph(args, tol),
    };
    match out {
        Ok(s) => (EXIT_OK, s),
        Err(Failure::Check(s)) => (EXIT_CHECK_FAILED, s),
        Err(Failure::Input(s)) => (EXIT_INPUT, ensure_newline(s)),
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn tolerance(flag: Option<f64>) -> std::result::Result<f64, String> {
    let t = match flag {
        Some(t) => t,
        None => match std::env::var(TOLERANCE_ENV) {
            Ok(v) => v.parse().map_err(|_| format!("error: {TOLERANCE_ENV} is not a number: '{v}'\n"))?,
            Err(_) => DEFAULT_TOLERANCE,
        },
    };
    if !(t.is_finite() && t > 0.0) {
        return Err(format!("error: tolerance must be positive, got {t}\n"));
    }
    Ok(t)
}

fn delta_arg(s: &str) -> Result<DeltaSpec> {
    s.parse()
}

fn tl(cmd: TlCmd) -> Outcome {
    let mut out = String::new();
    match cmd {
        TlCmd::Dim { n } => {
            if n % 2 == 1 {
                writeln!(out, "0 (odd number of points)").unwrap();
                return Ok(out);
            }
            let c = catalan(n as u64 / 2);
            if n <= 16 && c != enumerate_pairings(n).len().into() {
                return Err(Failure::Check(format!("FAIL: enumeration disagrees with catalan({})\n", n / 2)));
            }
            writeln!(out, "catalan({}) = {c}", n / 2).unwrap();
        }
        TlCmd::Jw { n, delta } => {
            let spec = delta_arg(&delta)?;
            let f = jones_wenzl_at(n, &spec)?;
            writeln!(out, "f_{n} = {f}").unwrap();
        }
        TlCmd::Trace { expr, normalized } => {
            let x = TLElement::parse(&expr, None)?;
            let t = x.markov_trace(normalized)?;
            writeln!(out, "{} = {t}", if normalized { "tr" } else { "Tr" }).unwrap();
        }
    }
    Ok(out)
}

fn graded(s: crate::gjs::BoxShape, d: crate::diagram::TLDiagram) -> GJSElement {
    GJSElement::from_diagram(Convention::Graded, s, d).expect("basis box")
}

fn report_check(out: &mut String, what: &str, total: usize, bad: Vec<String>) -> Outcome {
    if bad.is_empty() {
        writeln!(out, "OK: 100% {what} exact").unwrap();
        return Ok(std::mem::take(out));
    }
    writeln!(out, "FAIL: {}/{} {what} exact", total - bad.len(), total).unwrap();
    writeln!(out, "counterexample: {}", bad[0]).unwrap();
    Err(Failure::Check(std::mem::take(out)))
}

fn gjs(cmd: GjsCmd) -> Outcome {
    let mut out = String::new();
    match cmd {
        GjsCmd::Check { what: CheckCmd::Phi { max_points } } => {
            let boxes = basis_boxes(max_points);
            let mut bad = Vec::new();
            let mut total = 0;
            for (sa, da) in &boxes {
                let x = graded(*sa, da.clone());
                let px = x.phi()?;
                if x.tau_infty()? != px.filtered_trace()? {
                    bad.push(format!("trace of x = {x}"));
                }
                for (sb, db) in &boxes {
                    if sa.points() + sb.points() > max_points {
                        continue;
                    }
                    total += 1;
                    let y = graded(*sb, db.clone());
                    if x.wedge(&y)?.phi()? != px.filtered_mul(&y.phi()?)? {
                        bad.push(format!("x = {x}, y = {y}"));
                    }
                }
            }
            report_check(&mut out, "pairs", total, bad)
        }
        GjsCmd::Check { what: CheckCmd::Pulldown { k } } => {
            if k == 0 {
                return Err(Error::Shape("pull-down needs k >= 1".into()).into());
            }
            let boxes = level_boxes(k + 1, 2);
            let mut bad = Vec::new();
            for (s, d) in &boxes {
                let x = graded(*s, d.clone());
                if !check_pulldown(&x, k)? {
                    bad.push(format!("x = {x}"));
                }
            }
            report_check(&mut out, "elements", boxes.len(), bad)
        }
        GjsCmd::Check { what: CheckCmd::Tracial { max_points } } => {
            let boxes = basis_boxes(max_points);
            let mut bad = Vec::new();
            let mut total = 0;
            for (sa, da) in &boxes {
                for (sb, db) in &boxes {
                    if sa.points() + sb.points() > max_points || sa.r != sb.l || sb.r != sa.l {
                        continue;
                    }
                    total += 1;
                    let (x, y) = (graded(*sa, da.clone()), graded(*sb, db.clone()));
                    if x.wedge(&y)?.tau_infty()? != y.wedge(&x)?.tau_infty()? {
                        bad.push(format!("x = {x}, y = {y}"));
                    }
                }
            }
            report_check(&mut out, "pairs", total, bad)
        }
        GjsCmd::QuasiBasis { n } => {
            let q = quasi_basis(n)?;
            writeln!(out, "inclusion: TL_{} in TL_{}", 2 * n - 2, 2 * n).unwrap();
            writeln!(out, "pairs = {}", q.pairs.len()).unwrap();
            let bad = q.reconstruction_failures()?;
            writeln!(out, "index = {}", q.index).unwrap();
            writeln!(out, "index = d^2 * 1: {}", if q.index_is_delta_squared() { "yes" } else { "no" }).unwrap();
            if bad.is_empty() {
                writeln!(out, "OK: reconstruction exact on all {} diagrams", q.pairs.len()).unwrap();
                Ok(out)
            } else {
                writeln!(out, "FAIL: reconstruction fails on {} diagrams", bad.len()).unwrap();
                writeln!(out, "counterexample: {}", bad[0]).unwrap();
                Err(Failure::Check(out))
            }
        }
    }
}

fn weight_arg(s: &str) -> Result<Weight> {
    Weight::parse(s)
}

fn moments(cmd: MomentsCmd, tol: f64) -> Outcome {
    let mut out = String::new();
    match cmd {
        MomentsCmd::Cup { n, delta } => {
            let law = MPLaw::cup_law();
            let mut bad = Vec::new();
            for k in 1..=n {
                let m = cup_moments(k)?;
                writeln!(out, "m_{k} = {m}").unwrap();
                if mp_moments(&law, k as u64, &DeltaSpec::Generic)? != Weight::Exact(m.clone()) {
                    bad.push(k);
                }
            }
            if let Some(d) = delta {
                let spec = delta_arg(&d)?;
                support_line(&mut out, &law, &spec, tol)?;
            }
            if bad.is_empty() {
                writeln!(out, "OK: free Poisson with rate d and jump 1").unwrap();
                Ok(out)
            } else {
                writeln!(out, "FAIL: moment {} differs from the free Poisson moment", bad[0]).unwrap();
                Err(Failure::Check(out))
            }
        }
        MomentsCmd::Mp { rate, jump, n, delta } => {
            let spec = delta_arg(&delta)?;
            let law = MPLaw::new(weight_arg(&rate)?, weight_arg(&jump)?)?;
            for k in 1..=n {
                writeln!(out, "m_{k} = {}", mp_moments(&law, k, &spec)?).unwrap();
            }
            if law.rate.value(&spec).is_ok() && law.jump.value(&spec).is_ok() {
                support_line(&mut out, &law, &spec, tol)?;
            }
            Ok(out)
        }
    }
}

fn support_line(out: &mut String, law: &MPLaw, spec: &DeltaSpec, tol: f64) -> Result<()> {
    let s = mp_support(law, spec, tol)?;
    writeln!(
        out,
        "support = [{}, {}], atom at 0 = {}, invertible: {}",
        fmt_f(s.support_min),
        fmt_f(s.support_max),
        fmt_f(s.atom),
        yes_no(s.invertible)
    )
    .unwrap();
    Ok(())
}

fn fmt_f(x: f64) -> String {
    fmt_weight_value(&Weight::Numeric(x), &DeltaSpec::Generic).expect("numeric value")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn load_graph(args: &GraphArgs, tol: f64) -> std::result::Result<WeightedGraph, Failure> {
    match (&args.graph, &args.tl) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("error: cannot read {}: {e}", path.display())))?;
            WeightedGraph::parse(&text).map_err(|e| Failure::Input(format!("error: {}: {e}", path.display())))
        }
        (None, Some(d)) => Ok(tl_principal_graph(delta_arg(d)?, args.cutoff, tol)?),
        _ => Err(Failure::Input("error: give exactly one of --graph FILE or --tl DELTA".into())),
    }
}

fn value_text(w: &Weight, spec: &DeltaSpec) -> String {
    match w {
        Weight::Numeric(_) => w.to_string(),
        Weight::Exact(s) if s.as_rational().is_some() => w.to_string(),
        Weight::Exact(_) => match fmt_weight_value(w, spec) {
            Ok(v) => format!("{w} = {v}"),
            Err(_) => w.to_string(),
        },
    }
}

fn graph(args: GraphArgs, tol: f64) -> Outcome {
    let g = load_graph(&args, tol)?;
    let mut out = String::new();
    if let GraphVerb::PpBound = args.verb {
        let spec = resolve_weights(&g)?.delta;
        writeln!(out, "N(delta^2) = {}", pp_bound(&spec, tol)?).unwrap();
        return Ok(out);
    }
    let sol = resolve_weights(&g)?;
    let (w, spec) = (&sol.weights, &sol.delta);
    match args.verb {
        GraphVerb::PpBound => unreachable!(),
        GraphVerb::Fp => {
            match (spec, spec.value()) {
                (DeltaSpec::RootOfUnity(_), Some(v)) => writeln!(out, "delta = {spec} = {}", fmt_f(v)).unwrap(),
                _ => writeln!(out, "delta = {spec}").unwrap(),
            }
            for (v, x) in w.iter().enumerate() {
                writeln!(out, "mu({}) = {}", g.name(v), value_text(x, spec)).unwrap();
            }
            if let Some(c) = g.truncated_at() {
                writeln!(out, "truncated after {}: its equation is not checked", g.name(c)).unwrap();
            }
            let check = fp_verify(&g, w, spec, tol)?;
            if check.ok {
                let how = if check.exact { "exact".to_string() } else { format!("tolerance {tol:e}") };
                writeln!(out, "OK: Frobenius-Perron condition holds ({how})").unwrap();
            } else {
                writeln!(out, "FAIL: Frobenius-Perron condition fails at {} vertices", check.failures.len()).unwrap();
                let (name, res) = &check.failures[0];
                writeln!(out, "counterexample: vertex {name}, residual {res}").unwrap();
                return Err(Failure::Check(out));
            }
        }
        GraphVerb::K0 { k } => {
            let (c, provisional) = identity_class(&g, k)?;
            writeln!(out, "[1_{k}] = {}", c.display(&g)).unwrap();
            writeln!(out, "tr = {}", value_text(&crate::graphk::class_trace(&c, w, spec)?, spec)).unwrap();
            if provisional {
                writeln!(out, "provisional: walks reach the truncation boundary").unwrap();
            }
        }
        GraphVerb::Report => {
            writeln!(out, "vertices = {}, depth = {}", g.len(), g.depth()).unwrap();
            for line in simplicity_report(&g).lines {
                writeln!(out, "{line}").unwrap();
            }
            if spec.value().is_some() {
                let p = projectionless_verdict(w, spec, tol)?;
                if p.projectionless {
                    writeln!(out, "projectionless: yes, all weights are natural numbers").unwrap();
                } else {
                    let names: Vec<&str> = p.non_integer.iter().map(|&v| g.name(v)).collect();
                    writeln!(out, "projectionless: no, projection traces are dense in [0,1] (non-integer weight at {})", names.join(", "))
                        .unwrap();
                }
            }
        }
        GraphVerb::Obstruction => {
            for line in crossed_product_obstruction(&g, spec, tol)?.lines {
                writeln!(out, "{line}").unwrap();
            }
        }
        GraphVerb::Blocks => {
            for b in block_descriptors(&g, w, spec, tol)? {
                writeln!(out, "{}", b.describe(&g)).unwrap();
            }
        }
        GraphVerb::Scale { ref class, ref compare } => {
            let x = K0Class::parse(class, &g)?;
            let v = cone_scale_verdict(&g, w, spec, &x, tol)?;
            writeln!(out, "class = {}", x.display(&g)).unwrap();
            writeln!(out, "tr = {}", value_text(&v.trace, spec)).unwrap();
            writeln!(out, "positive: {}", yes_no(v.positive)).unwrap();
            writeln!(out, "in scale: {}", yes_no(v.in_scale)).unwrap();
            if let Some(other) = compare {
                let y = K0Class::parse(other, &g)?;
                writeln!(out, "{}", compare_note(&g, w, spec, &x, &y, tol)?).unwrap();
            }
        }
    }
    Ok(out)
}

