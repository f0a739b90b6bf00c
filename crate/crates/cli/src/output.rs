//! Results and report files.

use std::fmt::Write as _;
use std::hash::Hasher;
use std::path::Path;

use anyhow::{Context, Result};
use fnv::FnvHasher;
use spgraph::IterationStats;

/// One value per vertex, in vertex order.
#[derive(Clone, Debug, PartialEq)]
pub enum VertexValues {
    Reals(Vec<f64>),
    Counts(Vec<u64>),
    Vectors(Vec<Vec<f64>>),
}

/// `id<TAB>value` lines with 1-based ids. Reals use the shortest text that
/// parses back to the same bits; infinity is `inf`. Vectors are comma
/// separated.
pub fn render_results(values: &VertexValues) -> Vec<u8> {
    let mut s = String::new();
    match values {
        VertexValues::Reals(v) => {
            for (i, x) in v.iter().enumerate() {
                let _ = writeln!(s, "{}\t{}", i + 1, x);
            }
        }
        VertexValues::Counts(v) => {
            for (i, x) in v.iter().enumerate() {
                let _ = writeln!(s, "{}\t{}", i + 1, x);
            }
        }
        VertexValues::Vectors(v) => {
            for (i, p) in v.iter().enumerate() {
                let _ = write!(s, "{}\t", i + 1);
                for (j, x) in p.iter().enumerate() {
                    if j > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{x}");
                }
                s.push('\n');
            }
        }
    }
    s.into_bytes()
}

/// 64-bit FNV-1a.
pub fn checksum(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// Writes the results file and returns the checksum of its bytes.
pub fn write_results(values: &VertexValues, path: &Path) -> Result<u64> {
    let bytes = render_results(values);
    std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(checksum(&bytes))
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub algorithm: String,
    pub graph: String,
    pub threads: usize,
    pub partitions: usize,
    pub iterations: Vec<IterationStats>,
    /// Algorithm wall time only; loading and matrix construction are
    /// reported separately.
    pub total_seconds: f64,
    pub checksum: u64,
    pub extra: Vec<(String, String)>,
}

impl RunReport {
    pub fn mean_iteration_seconds(&self) -> Option<f64> {
        if self.iterations.is_empty() {
            None
        } else {
            let sum: f64 = self.iterations.iter().map(|s| s.total_seconds).sum();
            Some(sum / self.iterations.len() as f64)
        }
    }

    pub fn render(&self) -> String {
        let list = |f: fn(&IterationStats) -> String| {
            self.iterations.iter().map(f).collect::<Vec<_>>().join(",")
        };
        let mut s = String::new();
        let _ = writeln!(s, "algorithm={}", self.algorithm);
        let _ = writeln!(s, "graph={}", self.graph);
        let _ = writeln!(s, "threads={}", self.threads);
        let _ = writeln!(s, "partitions={}", self.partitions);
        let _ = writeln!(s, "iterations={}", self.iterations.len());
        let _ = writeln!(s, "iteration_seconds={}", list(|i| i.total_seconds.to_string()));
        let _ = writeln!(s, "spmv_seconds={}", list(|i| i.spmv_seconds.to_string()));
        let _ = writeln!(s, "active_vertices={}", list(|i| i.active_before.to_string()));
        let _ = writeln!(s, "updated_vertices={}", list(|i| i.vertices_updated.to_string()));
        let _ = writeln!(s, "total_seconds={}", self.total_seconds);
        match self.mean_iteration_seconds() {
            Some(m) => {
                let _ = writeln!(s, "mean_iteration_seconds={m}");
            }
            None => s.push_str("mean_iteration_seconds=na\n"),
        }
        let _ = writeln!(s, "checksum={:016x}", self.checksum);
        for (k, v) in &self.extra {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.render()).with_context(|| format!("writing {}", path.display()))
}

/// Reads `key=value` lines back into pairs.
pub fn parse_report(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
