//! Command-line driver for the spgraph engine.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad input data, 3 runtime
//! failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Parser;
use spgraph::algorithms::{self, AlgorithmError, CfConfig, PageRankConfig};
use spgraph::io::{self, GraphIoError, PreprocessMode, RmatParams};
use spgraph::{EdgeTriple, Engine, EngineConfig, Graph, VertexId};

pub mod args;
pub mod output;

use args::{Algorithm, Cleanup, Cli, Command, CommonArgs, Generate, InFormat, OutFormat, Sweep};
use output::{write_report, write_results, RunReport, VertexValues};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Input(e) | Failure::Runtime(e) => write!(f, "{e:#}"),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn from_io(e: GraphIoError) -> Failure {
    match e {
        GraphIoError::InvalidParams(m) => Failure::Usage(m),
        other => input(other),
    }
}

fn from_algorithm(e: AlgorithmError) -> Failure {
    match e {
        AlgorithmError::Engine(_) => runtime(e),
        AlgorithmError::Config(m) => Failure::Usage(m),
        other => input(other),
    }
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code. Diagnostics go to stderr as one line.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            eprintln!("{}", one_line(&e.to_string()));
            return 1;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

/// Drops clap's usage footer and joins the rest onto one line.
fn one_line(message: &str) -> String {
    let head = message.split("\n\nUsage:").next().unwrap_or(message);
    head.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn execute(command: Command) -> Outcome<()> {
    match command {
        Command::Generate(Generate::Rmat(a)) => {
            let p = RmatParams {
                scale: a.scale,
                edge_factor: a.edgefactor,
                a: a.a,
                b: a.b,
                c: a.c,
                seed: a.seed,
            };
            let edges = io::rmat_generate(&p).map_err(from_io)?;
            save(&a.out, a.format, &edges, p.num_vertices(), false)
        }
        Command::Generate(Generate::Bipartite(a)) => {
            let edges = io::bipartite_generate(a.users, a.items, a.ratings, a.seed).map_err(from_io)?;
            save(&a.out, a.format, &edges, a.users + a.items, true)
        }
        Command::Convert(a) => {
            let (edges, n) = load(&a.input, a.in_format, a.weighted)?;
            let mode = match a.preprocess {
                Cleanup::None => PreprocessMode::None,
                Cleanup::Symmetrize => PreprocessMode::Symmetrize,
                Cleanup::Dagify => PreprocessMode::Dagify,
            };
            let edges = io::preprocess(edges, mode).map_err(from_io)?;
            save(&a.out, a.out_format, &edges, n, a.weighted)
        }
        Command::Run(r) => {
            let common = r.algorithm.common();
            let [threads] = common.threads[..] else {
                return Err(Failure::Usage(
                    "run takes a single --threads value; use scale-sweep for a list".into(),
                ));
            };
            let report = run_once(&r.algorithm, threads as usize, &common.out, common.report.as_deref())?;
            println!(
                "{}: {} iterations, {:.6} s, checksum {:016x}",
                report.algorithm,
                report.iterations.len(),
                report.total_seconds,
                report.checksum
            );
            Ok(())
        }
        Command::ScaleSweep(Sweep::Run(r)) => {
            let common = r.algorithm.common();
            for &t in &common.threads {
                let out = suffixed(&common.out, t);
                let rep = common.report.as_ref().map(|p| suffixed(p, t));
                let report = run_once(&r.algorithm, t as usize, &out, rep.as_deref())?;
                println!(
                    "threads={t} partitions={} total_seconds={} checksum={:016x}",
                    report.partitions, report.total_seconds, report.checksum
                );
            }
            Ok(())
        }
    }
}

fn suffixed(path: &Path, threads: u32) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(format!(".t{threads}"));
    PathBuf::from(s)
}

fn load(path: &Path, format: InFormat, weighted: bool) -> Outcome<(Vec<EdgeTriple<f64>>, usize)> {
    let loaded = match format {
        InFormat::Edgelist => io::load_edge_list(path, weighted),
        InFormat::Mtx => io::load_matrix_market(path),
        InFormat::Bin => io::read_binary(path),
    };
    loaded.map_err(from_io)
}

fn save(path: &Path, format: OutFormat, edges: &[EdgeTriple<f64>], n: usize, weighted: bool) -> Outcome<()> {
    let res = match format {
        OutFormat::Edgelist => io::write_edge_list(path, edges, weighted),
        OutFormat::Bin => io::write_binary(path, edges, n),
    };
    res.map_err(runtime)
}

fn source_vertex(source: u64, n: usize) -> Outcome<VertexId> {
    if source as usize > n {
        return Err(input(anyhow!("--source {source} is outside the graph's {n} vertices")));
    }
    Ok(VertexId::new(source as usize - 1))
}

/// Loads, cleans, and partitions the graph, runs the algorithm on a
/// `threads`-wide engine, and writes the results and optional report.
pub fn run_once(alg: &Algorithm, threads: usize, out: &Path, report_path: Option<&Path>) -> Outcome<RunReport> {
    let common: &CommonArgs = alg.common();
    let load_start = Instant::now();
    let (edges, mut n) = load(&common.graph, common.format, common.weighted)?;
    let mode = match alg {
        Algorithm::Bfs(_) => PreprocessMode::Symmetrize,
        Algorithm::Tc(_) => PreprocessMode::Dagify,
        Algorithm::Cf(a) => {
            let users = a
                .users
                .unwrap_or_else(|| edges.iter().map(|e| e.src.index() + 1).max().unwrap_or(0));
            PreprocessMode::BipartiteCheck { num_users: users }
        }
        Algorithm::Pagerank(_) | Algorithm::Sssp(_) => PreprocessMode::None,
    };
    let edges = io::preprocess(edges, mode).map_err(from_io)?;
    if let PreprocessMode::BipartiteCheck { num_users } = mode {
        n = n.max(num_users);
    }
    let load_seconds = load_start.elapsed().as_secs_f64();

    let ppt = common.partitions_per_thread as usize;
    let mut cfg = EngineConfig::with_threads(threads).partitions_per_thread(ppt);
    if let Some(m) = common.max_iters {
        cfg = cfg.max_iterations(m);
    }
    let partitions = cfg.total_partitions();
    let engine = Engine::new(cfg).map_err(|e| Failure::Usage(e.to_string()))?;

    let build_start = Instant::now();
    let graph = Graph::build(&edges, n, partitions).map_err(input)?;
    drop(edges);
    let build_seconds = build_start.elapsed().as_secs_f64();

    let mut extra = vec![
        ("vertices".to_string(), n.to_string()),
        ("edges".to_string(), graph.num_edges().to_string()),
        ("load_seconds".to_string(), load_seconds.to_string()),
        ("build_seconds".to_string(), build_seconds.to_string()),
    ];
    let start = Instant::now();
    let (values, stats) = match alg {
        Algorithm::Pagerank(a) => {
            let mut pr = PageRankConfig {
                r: a.damping,
                ..PageRankConfig::default()
            };
            if let Some(m) = common.max_iters {
                pr.max_iterations = m;
            }
            let run = algorithms::pagerank(&engine, &graph, &pr).map_err(from_algorithm)?;
            (VertexValues::Reals(run.result), run.stats)
        }
        Algorithm::Bfs(a) => {
            let root = source_vertex(a.source, n)?;
            let run = algorithms::bfs(&engine, &graph, root).map_err(from_algorithm)?;
            (VertexValues::Reals(run.result), run.stats)
        }
        Algorithm::Sssp(a) => {
            let root = source_vertex(a.source, n)?;
            let run = algorithms::sssp(&engine, &graph, root).map_err(from_algorithm)?;
            (VertexValues::Reals(run.result), run.stats)
        }
        Algorithm::Tc(_) => {
            let run = algorithms::triangle_count(&engine, &graph).map_err(from_algorithm)?;
            extra.push(("triangles".to_string(), run.result.total.to_string()));
            (VertexValues::Counts(run.result.per_vertex), run.stats)
        }
        Algorithm::Cf(a) => {
            let PreprocessMode::BipartiteCheck { num_users } = mode else {
                unreachable!("cf always checks bipartiteness")
            };
            let mut cf = CfConfig {
                k: a.k,
                gamma: a.gamma,
                lambda: a.lambda,
                seed: a.seed,
                ..CfConfig::default()
            };
            if let Some(m) = common.max_iters {
                cf.iterations = m;
            }
            let run = algorithms::collaborative_filtering_gd(&engine, &graph, num_users, &cf)
                .map_err(from_algorithm)?;
            let model = run.result;
            extra.push(("users".to_string(), num_users.to_string()));
            let trace: Vec<String> = model.objective.iter().map(|x| x.to_string()).collect();
            extra.push(("objective".to_string(), trace.join(",")));
            let mut vectors = model.users;
            vectors.extend(model.items);
            (VertexValues::Vectors(vectors), run.stats)
        }
    };
    let total_seconds = start.elapsed().as_secs_f64();

    let checksum = write_results(&values, out).map_err(runtime)?;
    let report = RunReport {
        algorithm: alg.name().to_string(),
        graph: common.graph.display().to_string(),
        threads,
        partitions,
        iterations: stats,
        total_seconds,
        checksum,
        extra,
    };
    if let Some(p) = report_path {
        write_report(&report, p)
            .context("writing report")
            .map_err(runtime)?;
    }
    Ok(report)
}
