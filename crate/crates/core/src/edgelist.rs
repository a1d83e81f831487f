//! Edge-list text format.
//!
//! ```text
//! n 5
//! 1 2
//! 2 5
//! ```
//!
//! A header line `n <count>` followed by one whitespace-separated 1-based
//! pair per line. Pairs are symmetrized on load; repeated pairs are
//! harmless; self-loops and out-of-range labels are rejected. Blank lines
//! and lines starting with `#` are ignored.
//!
//! Snapshot files hold a sequence of blocks, each an edge list preceded by
//! a `t <time>` line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = significant_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n <count>` header"))?;
    let n = parse_header(line_no, header, "n")?;
    let mut g = Graph::empty(n);
    for (line_no, line) in lines {
        add_edge_line(&mut g, line_no, line)?;
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

/// Writes `(time, graph)` snapshots as `t`-headed edge-list blocks.
pub fn write_snapshots<'a>(snapshots: impl IntoIterator<Item = (f64, &'a Graph)>) -> String {
    let mut out = String::new();
    for (t, g) in snapshots {
        let _ = writeln!(out, "t {t}");
        out.push_str(&write_edge_list(g));
    }
    out
}

pub fn parse_snapshots(text: &str) -> Result<Vec<(f64, Graph)>> {
    let mut out: Vec<(f64, Graph)> = Vec::new();
    let mut lines = significant_lines(text).peekable();
    while let Some((line_no, line)) = lines.next() {
        let t = parse_time_header(line_no, line)?;
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(line_no + 1, "missing `n <count>` header"))?;
        let n = parse_header(hl, header, "n")?;
        let mut g = Graph::empty(n);
        while let Some(&(l, body)) = lines.peek() {
            if body.starts_with('t') {
                break;
            }
            add_edge_line(&mut g, l, body)?;
            lines.next();
        }
        out.push((t, g));
    }
    Ok(out)
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line_no: usize, line: &str, key: &str) -> Result<usize> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => {
            let n: usize = v
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex count `{v}`")))?;
            if n == 0 {
                return Err(Error::parse(line_no, "vertex count must be positive"));
            }
            Ok(n)
        }
        _ => Err(Error::parse(line_no, format!("expected `{key} <count>`, got `{line}`"))),
    }
}

fn parse_time_header(line_no: usize, line: &str) -> Result<f64> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("t"), Some(v), None) => v
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t >= 0.0)
            .ok_or_else(|| Error::parse(line_no, format!("bad time `{v}`"))),
        _ => Err(Error::parse(line_no, format!("expected `t <time>`, got `{line}`"))),
    }
}

fn add_edge_line(g: &mut Graph, line_no: usize, line: &str) -> Result<()> {
    let mut parts = line.split_whitespace();
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::parse(line_no, format!("expected `i j`, got `{line}`")));
    };
    let label = |s: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad vertex label `{s}`")))?;
        if v == 0 || v > g.order() {
            return Err(Error::parse(
                line_no,
                format!("vertex {v} out of range 1..={}", g.order()),
            ));
        }
        Ok(v - 1)
    };
    let (i, j) = (label(a)?, label(b)?);
    if i == j {
        return Err(Error::parse(line_no, format!("self-loop at vertex {}", i + 1)));
    }
    g.set_edge(i, j, true);
    Ok(())
}
