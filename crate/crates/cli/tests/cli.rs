use std::path::Path;
use std::process::{Command, Output};

use spgraph::oracle::pagerank_power_oracle;
use spgraph::EdgeTriple;
use spgraph_cli::output::{parse_report, render_results, VertexValues};

fn spgraph(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spgraph"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn report_value(path: &Path, key: &str) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    parse_report(&text)
        .into_iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v)
        .unwrap_or_else(|| panic!("{key} missing from report"))
}

#[test]
fn sssp_chain_results() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("chain.el"), "1 2 2\n2 3 3\n").unwrap();
    let out = spgraph(
        &[
            "run", "sssp", "--graph", "chain.el", "--format", "edgelist", "--weighted", "--source", "1",
            "--threads", "1", "--out", "r.tsv", "--report", "r.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("r.tsv")).unwrap();
    assert_eq!(text.lines().collect::<Vec<_>>(), ["1\t0", "2\t2", "3\t5"]);
    let report = dir.path().join("r.txt");
    assert_eq!(report_value(&report, "algorithm"), "sssp");
    assert_eq!(report_value(&report, "iterations"), "3");
    let total: f64 = report_value(&report, "total_seconds").parse().unwrap();
    let spmv: f64 = report_value(&report, "spmv_seconds")
        .split(',')
        .map(|s| s.parse::<f64>().unwrap())
        .sum();
    assert!(total >= spmv);
}

#[test]
fn bfs_requires_source() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.el"), "1 2\n").unwrap();
    let out = spgraph(&["run", "bfs", "--graph", "g.el", "--out", "r.tsv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--source"));
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("neg.el"), "1 2 -1\n").unwrap();
    std::fs::write(dir.path().join("bad.el"), "1 x\n").unwrap();
    let code = |args: &[&str]| spgraph(args, dir.path()).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["run", "bfs", "--nonsense"]), Some(1));
    assert_eq!(code(&["run", "bfs", "--graph", "missing.el", "--source", "1", "--out", "r"]), Some(2));
    assert_eq!(code(&["run", "bfs", "--graph", "bad.el", "--source", "1", "--out", "r"]), Some(2));
    assert_eq!(
        code(&["run", "sssp", "--graph", "neg.el", "--weighted", "--source", "1", "--out", "r"]),
        Some(2)
    );
    assert_eq!(code(&["run", "sssp", "--graph", "neg.el", "--weighted", "--source", "5", "--out", "r"]), Some(2));
    assert_eq!(code(&["run", "tc", "--graph", "bad.el", "--threads", "1,2", "--out", "r"]), Some(1));
    assert_eq!(code(&["run", "bfs", "--graph", "neg.el", "--weighted", "--source", "1", "--out", "/nonexistent/r"]), Some(3));
}

#[test]
fn generate_then_convert_file_size() {
    let dir = tempfile::tempdir().unwrap();
    let gen = spgraph(&["generate", "rmat", "--scale", "10", "--edgefactor", "16", "--seed", "4", "--out", "g.el"], dir.path());
    assert!(gen.status.success());
    let text = std::fs::read_to_string(dir.path().join("g.el")).unwrap();
    assert_eq!(text.lines().count(), 16 * 1024);
    let mut pairs: Vec<(u64, u64)> = text
        .lines()
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<u64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .filter(|(s, d)| s != d)
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let conv = spgraph(
        &["convert", "--in", "g.el", "--in-format", "edgelist", "--out", "g.bin", "--out-format", "bin"],
        dir.path(),
    );
    assert!(conv.status.success());
    let size = std::fs::metadata(dir.path().join("g.bin")).unwrap().len();
    assert_eq!(size, 20 + 24 * pairs.len() as u64);
}

#[test]
fn zero_iterations_report_na() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.el"), "1 2\n2 3\n").unwrap();
    let out = spgraph(
        &["run", "pagerank", "--graph", "g.el", "--max-iters", "0", "--out", "r.tsv", "--report", "r.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let report = dir.path().join("r.txt");
    assert_eq!(report_value(&report, "iterations"), "0");
    assert_eq!(report_value(&report, "mean_iteration_seconds"), "na");
    let text = std::fs::read_to_string(dir.path().join("r.tsv")).unwrap();
    assert_eq!(text, "1\t1\n2\t1\n3\t1\n");
}

#[test]
fn pagerank_matches_oracle_dump() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.el"), "1 2\n1 3\n2 3\n3 1\n").unwrap();
    let out = spgraph(
        &["run", "pagerank", "--graph", "g.el", "--max-iters", "7", "--damping", "0.15", "--out", "r.tsv"],
        dir.path(),
    );
    assert!(out.status.success());
    let edges = [(0, 1), (0, 2), (1, 2), (2, 0)].map(|(s, d)| EdgeTriple::new(s, d, 1.0));
    let want = render_results(&VertexValues::Reals(pagerank_power_oracle(3, &edges, 0.15, 7)));
    assert_eq!(std::fs::read(dir.path().join("r.tsv")).unwrap(), want);
}

#[test]
fn sweep_reports_share_a_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let gen = spgraph(&["generate", "rmat", "--scale", "9", "--seed", "2", "--out", "g.el"], dir.path());
    assert!(gen.status.success());
    for alg in ["pagerank", "bfs", "sssp", "tc"] {
        let mut args = vec!["scale-sweep", "run", alg, "--graph", "g.el", "--threads", "1,2,4", "--max-iters", "10"];
        if matches!(alg, "bfs" | "sssp") {
            args.extend(["--source", "1"]);
        }
        args.extend(["--out", "r.tsv", "--report", "r.txt"]);
        let out = spgraph(&args, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let sums: Vec<String> = [1, 2, 4]
            .iter()
            .map(|t| report_value(&dir.path().join(format!("r.txt.t{t}")), "checksum"))
            .collect();
        assert!(sums.iter().all(|s| s == &sums[0]), "{alg}: {sums:?}");
        assert_eq!(report_value(&dir.path().join("r.txt.t4"), "partitions"), "32");
    }
}

#[test]
fn cf_on_generated_ratings() {
    let dir = tempfile::tempdir().unwrap();
    let gen = spgraph(
        &["generate", "bipartite", "--users", "40", "--items", "15", "--ratings", "200", "--seed", "1", "--out", "r.el"],
        dir.path(),
    );
    assert!(gen.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.el")).unwrap();
    assert_eq!(text.lines().count(), 200);
    let out = spgraph(
        &[
            "run", "cf", "--graph", "r.el", "--weighted", "--users", "40", "--k", "3", "--gamma", "0.001",
            "--max-iters", "4", "--out", "cf.tsv", "--report", "cf.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<String> = std::fs::read_to_string(dir.path().join("cf.tsv"))
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 55);
    assert_eq!(lines[0].split('\t').nth(1).unwrap().split(',').count(), 3);
    let trace: Vec<f64> = report_value(&dir.path().join("cf.txt"), "objective")
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(trace.len(), 5);
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn tc_reports_total() {
    let dir = tempfile::tempdir().unwrap();
    // K4 with both directions present.
    std::fs::write(dir.path().join("k4.el"), "1 2\n2 1\n1 3\n1 4\n2 3\n2 4\n3 4\n4 3\n").unwrap();
    let out = spgraph(&["run", "tc", "--graph", "k4.el", "--out", "t.tsv", "--report", "t.txt"], dir.path());
    assert!(out.status.success());
    assert_eq!(report_value(&dir.path().join("t.txt"), "triangles"), "4");
}
