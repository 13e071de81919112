//! The `updag` command line.
//!
//! Exit codes: `0` for a positive answer or success, `1` for a negative
//! answer, `2` for unusable input. Data goes to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::PlaneEmbedding;
use crate::feasibility::{analyze_with_edge, test_upward_any, Analysis, FeasibleSet, WitnessRecord};
use crate::graph::{parse_dag, write_dag, Dag, EdgeId, VertexId};
use crate::oracle::{brute_feasible_set, brute_test_upward, budget_from_env};
use crate::outerplanar::FaceId;
use crate::partition::solve_partition;
use crate::reduction::{build_gadget, extract_partition, GadgetDag, PartitionInstance, Sidecar};
use crate::upward::{AngleLabel, AngleLabeling};

#[derive(Parser, Debug)]
#[command(name = "updag", version, about = "Upward planarity of outerplanar DAGs and the Partition gadget")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile a Partition instance into a gadget DAG and its sidecar.
    Reduce {
        partition: PathBuf,
        /// Where to write the `updag 1` file.
        #[arg(short, long)]
        out: PathBuf,
        /// Sidecar path; defaults to the output path with a `.json` extension.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Test a DAG for an upward embedding.
    Test {
        dag: PathBuf,
        #[command(flatten)]
        edge: EdgeChoice,
        #[arg(long)]
        json: bool,
        /// Write the witness embedding here on a positive answer.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Read a split off an upward embedding of a gadget.
    Extract {
        sidecar: PathBuf,
        embedding: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Solve a Partition instance directly.
    SolvePartition {
        partition: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force answer for small DAGs.
    Oracle {
        dag: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Option<Vec<VertexId>>,
        /// Step budget; overrides `UPDAG_BUDGET`.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Emit Graphviz DOT, with faces and angle labels when an embedding is given.
    Render {
        dag: PathBuf,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Time reduction and testing on seeded random instances.
    Bench {
        /// Comma-separated values of `n`.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Largest `n` that is also tested; larger sizes only time the reduction.
        #[arg(long, default_value_t = 100_000)]
        test_limit: u64,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
pub struct EdgeChoice {
    /// Prescribed outer edge, by its endpoints.
    #[arg(long, num_args = 2, value_names = ["U", "V"])]
    pub edge: Option<Vec<VertexId>>,
    /// Try every outer edge (the default).
    #[arg(long)]
    pub any_edge: bool,
}

/// Failures reported with exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(positive) => i32::from(!positive),
        Err(e) => {
            let _ = writeln!(err, "error: {:#}", e.0);
            2
        }
    }
}

trait Input<T> {
    fn input(self) -> Result<T, InputError>;
}

impl<T, E: Into<anyhow::Error>> Input<T> for std::result::Result<T, E> {
    fn input(self) -> Result<T, InputError> {
        self.map_err(|e| InputError(e.into()))
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).input()
}

fn read_dag(path: &Path) -> Result<Dag, InputError> {
    parse_dag(read(path)?.as_bytes()).with_context(|| format!("parsing {}", path.display())).input()
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), InputError> {
    out.write_all(text.as_bytes()).context("writing output").input()
}

fn edge_between(d: &Dag, uv: &[VertexId]) -> Result<EdgeId, InputError> {
    let (u, v) = (uv[0], uv[1]);
    if u >= d.vertex_count() || v >= d.vertex_count() {
        return Err(InputError(anyhow!("edge ({u}, {v}) uses a vertex outside the graph")));
    }
    d.find_edge(u, v).ok_or_else(|| InputError(anyhow!("no edge joins {u} and {v}")))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool, InputError> {
    match cmd {
        Command::Reduce { partition, out: path, sidecar } => {
            let inst = PartitionInstance::parse(&read(&partition)?).input()?;
            let g = build_gadget(&inst);
            let mut text = Vec::new();
            write_dag(&g.dag, &mut text).input()?;
            fs::write(&path, text).with_context(|| format!("writing {}", path.display())).input()?;
            let side = sidecar.unwrap_or_else(|| path.with_extension("json"));
            let json = serde_json::to_string_pretty(&g.sidecar()).input()?;
            fs::write(&side, json + "\n").with_context(|| format!("writing {}", side.display())).input()?;
            write_out(
                out,
                &format!(
                    "gadget: {} vertices, {} edges, prescribed edge ({}, {})\n",
                    g.dag.vertex_count(),
                    g.dag.edge_count(),
                    g.dag.edge(g.prescribed_edge).tail,
                    g.dag.edge(g.prescribed_edge).head
                ),
            )?;
            Ok(true)
        }
        Command::Test { dag, edge, json, witness } => {
            let d = read_dag(&dag)?;
            let a = match edge.edge {
                Some(uv) => analyze_with_edge(&d, edge_between(&d, &uv)?).input()?,
                None => test_upward_any(&d).input()?,
            };
            if let (Some(path), Some((_, rec))) = (&witness, &a.witness) {
                let text = serde_json::to_string(rec).input()?;
                fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display())).input()?;
            }
            let report = TestReport::new(&d, &a);
            if json {
                write_out(out, &(serde_json::to_string(&report).input()? + "\n"))?;
            } else {
                let e = d.edge(a.edge);
                let verdict = if a.is_upward() { "upward planar" } else { "not upward planar" };
                let mut s = format!("{verdict} with edge ({}, {}) on the outer face\n", e.tail, e.head);
                if let Some(set) = a.root_set() {
                    let _ = writeln!(s, "feasible pairs: {}", serde_json::to_string(&set.mask()).input()?);
                }
                write_out(out, &s)?;
            }
            Ok(a.is_upward())
        }
        Command::Extract { sidecar, embedding, json } => {
            let side: Sidecar = serde_json::from_str(&read(&sidecar)?).context("parsing sidecar").input()?;
            let inst = PartitionInstance::new(side.values.clone()).input()?;
            let g = build_gadget(&inst);
            let g = GadgetDag::from_sidecar(g.dag, &side).input()?;
            let file = EmbeddingFile::parse(&read(&embedding)?).input()?;
            let emb = PlaneEmbedding::from_rotation(&g.dag, file.rotation, file.outer_face)
                .context("embedding does not fit the gadget")
                .input()?;
            let x = extract_partition(&g, &emb, &file.labels).input()?;
            if json {
                write_out(out, &(serde_json::to_string(&x).input()? + "\n"))?;
            } else {
                write_out(out, &format!("side1 {:?} sum {}\nside2 {:?} sum {}\n", x.side1, x.sum1, x.side2, x.sum2))?;
            }
            Ok(true)
        }
        Command::SolvePartition { partition, json } => {
            let inst = PartitionInstance::parse(&read(&partition)?).input()?;
            let r = solve_partition(inst.values());
            let report = PartitionReport {
                answer: r.is_some(),
                side1: r.as_ref().map(|p| p.0.clone()),
                side2: r.as_ref().map(|p| p.1.clone()),
            };
            if json {
                write_out(out, &(serde_json::to_string(&report).input()? + "\n"))?;
            } else {
                match &r {
                    Some((a, b)) => {
                        let vals = |ix: &[usize]| ix.iter().map(|&i| inst.values()[i]).collect::<Vec<_>>();
                        write_out(out, &format!("yes\nside1 {:?}\nside2 {:?}\n", vals(a), vals(b)))?
                    }
                    None => write_out(out, "no\n")?,
                }
            }
            Ok(report.answer)
        }
        Command::Oracle { dag, edge, budget, json } => {
            let d = read_dag(&dag)?;
            let budget = budget.unwrap_or_else(budget_from_env);
            match edge {
                Some(uv) => {
                    let e = edge_between(&d, &uv)?;
                    let set = brute_feasible_set(&d, e, budget).input()?;
                    let report = OracleReport {
                        answer: !set.is_empty(),
                        edge: Some(set.endpoints),
                        pairs: Some(set.pairs.iter().map(|&(a, b)| [a, b]).collect()),
                    };
                    if json {
                        write_out(out, &(serde_json::to_string(&report).input()? + "\n"))?;
                    } else {
                        write_out(out, &format!("feasible pairs: {}\n", serde_json::to_string(&report.pairs).input()?))?;
                    }
                    Ok(report.answer)
                }
                None => {
                    let answer = brute_test_upward(&d, budget).input()?;
                    let report = OracleReport { answer, edge: None, pairs: None };
                    if json {
                        write_out(out, &(serde_json::to_string(&report).input()? + "\n"))?;
                    } else {
                        write_out(out, if answer { "upward planar\n" } else { "not upward planar\n" })?;
                    }
                    Ok(answer)
                }
            }
        }
        Command::Render { dag, embedding, out: path } => {
            let d = read_dag(&dag)?;
            let emb = match embedding {
                Some(p) => {
                    let f = EmbeddingFile::parse(&read(&p)?).input()?;
                    let e = PlaneEmbedding::from_rotation(&d, f.rotation, f.outer_face)
                        .context("embedding does not fit the graph")
                        .input()?;
                    Some((e, f.labels))
                }
                None => None,
            };
            let text = render_dot(&d, emb.as_ref().map(|(e, l)| (e, l)));
            match path {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())).input()?,
                None => write_out(out, &text)?,
            }
            Ok(true)
        }
        Command::Bench { sizes, seed, test_limit } => {
            if sizes.contains(&0) {
                return Err(InputError(anyhow!("sizes must be positive")));
            }
            let mut s = String::from("n,k,reduce_ns,test_ns,answer\n");
            for &n in &sizes {
                let row = bench_one(n, seed, n <= test_limit);
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    row.n,
                    row.k,
                    row.reduce_ns,
                    row.test_ns.map_or(String::new(), |t| t.to_string()),
                    row.answer.map_or(String::new(), |a| a.to_string())
                );
            }
            write_out(out, &s)?;
            Ok(true)
        }
    }
}

/// The embedding part of a witness file, or of a full `test --json` report.
#[derive(Debug, Deserialize)]
struct EmbeddingFile {
    rotation: Vec<Vec<EdgeId>>,
    outer_face: FaceId,
    labels: AngleLabeling,
}

impl EmbeddingFile {
    fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).context("parsing embedding JSON")?;
        let v = match v.get("witness") {
            Some(w) if w.is_null() => bail!("the report has no witness"),
            Some(w) => w.clone(),
            None => v,
        };
        serde_json::from_value(v).context("embedding JSON needs rotation, outer_face and labels")
    }
}

#[derive(Serialize)]
struct SetReport {
    face: FaceId,
    endpoints: (VertexId, VertexId),
    pairs: crate::feasibility::PairMask,
}

impl SetReport {
    fn new(face: FaceId, s: &FeasibleSet) -> Self {
        SetReport { face, endpoints: s.endpoints, pairs: s.mask() }
    }
}

#[derive(Serialize)]
struct TestReport<'a> {
    answer: bool,
    edge: (VertexId, VertexId),
    feasible_sets: Vec<SetReport>,
    witness: Option<&'a WitnessRecord>,
}

impl<'a> TestReport<'a> {
    fn new(d: &Dag, a: &'a Analysis) -> Self {
        let e = d.edge(a.edge);
        TestReport {
            answer: a.is_upward(),
            edge: (e.tail, e.head),
            feasible_sets: a
                .feasible_sets
                .iter()
                .enumerate()
                .filter_map(|(s, f)| f.as_ref().map(|f| SetReport::new(s as FaceId, f)))
                .collect(),
            witness: a.witness.as_ref().map(|w| &w.1),
        }
    }
}

#[derive(Serialize)]
struct PartitionReport {
    answer: bool,
    side1: Option<Vec<usize>>,
    side2: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct OracleReport {
    answer: bool,
    edge: Option<(VertexId, VertexId)>,
    pairs: Option<Vec<[AngleLabel; 2]>>,
}

/// Graphviz text for `d`; with an embedding, every face becomes a cluster
/// holding one point joined to its vertices by edges carrying the labels.
pub fn render_dot(d: &Dag, emb: Option<(&PlaneEmbedding, &AngleLabeling)>) -> String {
    let mut s = String::from("digraph updag {\n  node [shape=circle];\n");
    for v in 0..d.vertex_count() {
        let _ = writeln!(s, "  {v};");
    }
    for e in d.edges() {
        let _ = writeln!(s, "  {} -> {};", e.tail, e.head);
    }
    if let Some((emb, lab)) = emb {
        for (f, verts) in emb.faces().iter().enumerate() {
            let name = if f as FaceId == emb.outer_face() { "outer face".to_string() } else { format!("face {f}") };
            let _ = writeln!(s, "  subgraph cluster_f{f} {{\n    label=\"{name}\";\n    f{f} [shape=point];\n  }}");
            for &v in verts {
                let l = lab.get(v, f as FaceId).map_or("?".to_string(), |l| format!("{:+}", l.value()));
                let _ = writeln!(s, "  f{f} -> {v} [dir=none, style=dashed, label=\"{l}\"];");
            }
        }
    }
    s.push_str("}\n");
    s
}

/// One CSV row of `bench`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub n: u64,
    pub k: usize,
    pub reduce_ns: u128,
    pub test_ns: Option<u128>,
    pub answer: Option<bool>,
}

/// A random instance with `k = min(n, 16)` positive values summing to `n`.
pub fn bench_instance(n: u64, seed: u64) -> PartitionInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.rotate_left(17));
    let k = n.min(16);
    let mut cuts: Vec<u64> = Vec::with_capacity(k as usize + 1);
    cuts.push(0);
    let mut pool: Vec<u64> = Vec::new();
    while pool.len() < (k - 1) as usize {
        let c = rng.gen_range(1..n);
        if !pool.contains(&c) {
            pool.push(c);
        }
    }
    pool.sort_unstable();
    cuts.extend(pool);
    cuts.push(n);
    let values = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    PartitionInstance::new(values).expect("cuts are distinct")
}

pub fn bench_one(n: u64, seed: u64, test: bool) -> BenchRow {
    let inst = bench_instance(n, seed);
    // best of three, so one-off allocation and page-fault costs do not
    // dominate the smaller sizes
    let mut reduce_ns = u128::MAX;
    let mut g = None;
    for _ in 0..3 {
        drop(g.take());
        let t = Instant::now();
        g = Some(build_gadget(&inst));
        reduce_ns = reduce_ns.min(t.elapsed().as_nanos());
    }
    let g = g.expect("built");
    let (test_ns, answer) = if test {
        let t = Instant::now();
        let a = analyze_with_edge(&g.dag, g.prescribed_edge).expect("gadgets are valid");
        (Some(t.elapsed().as_nanos()), Some(a.is_upward()))
    } else {
        (None, None)
    };
    BenchRow { n, k: inst.values().len(), reduce_ns, test_ns, answer }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("updag").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bench_instances_sum() {
        for n in [1, 2, 5, 100, 12345] {
            let i = bench_instance(n, 3);
            assert_eq!(i.sum(), n);
            assert_eq!(i, bench_instance(n, 3));
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["bench", "--sizes", "0"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["test", "/nonexistent/file"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn triangle_dot() {
        let d = parse_dag("updag 1\nvertices 3\nedge 0 1\nedge 0 2\nedge 1 2\n".as_bytes()).unwrap();
        let s = render_dot(&d, None);
        assert_eq!(s.matches("->").count(), 3);
        assert!(s.starts_with("digraph"));
    }
}
