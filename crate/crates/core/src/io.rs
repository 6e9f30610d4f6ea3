//! Plain-text graph and coloring files.
//!
//! Graph: a header line `n m`, then `m` lines `i j w` with 0-based endpoints
//! and a decimal weight. Blank lines are ignored. Parallel edges are merged by
//! summing weights.
//!
//! Coloring: one color digit (`0`, `1` or `2`) per line, one line per vertex.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, GraphBuilder, WeightedGraph};
use crate::scalar::Weight;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from {tok:?}")))
}

pub fn parse_graph<W: Weight>(text: &str) -> Result<WeightedGraph<W>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut it = header.split_whitespace();
    let n: usize = field(it.next(), hl, "vertex count")?;
    let m: usize = field(it.next(), hl, "edge count")?;
    if it.next().is_some() {
        return Err(parse_err(hl, "trailing tokens in header"));
    }

    let mut b = GraphBuilder::new(n);
    let mut read = 0;
    for (ln, l) in lines {
        if read == m {
            return Err(parse_err(ln, format!("more than {m} edge lines")));
        }
        let mut it = l.split_whitespace();
        let i: usize = field(it.next(), ln, "endpoint")?;
        let j: usize = field(it.next(), ln, "endpoint")?;
        let w: W = field(it.next(), ln, "weight")?;
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if i >= n || j >= n {
            return Err(parse_err(ln, format!("endpoint out of range for n = {n}")));
        }
        if w < W::zero() || !w.is_finite() {
            return Err(parse_err(ln, format!("invalid weight {w}")));
        }
        b.add_edge(i, j, w).map_err(|e| parse_err(ln, e.to_string()))?;
        read += 1;
    }
    if read != m {
        return Err(parse_err(
            text.lines().count(),
            format!("expected {m} edge lines, found {read}"),
        ));
    }
    Ok(b.build())
}

pub fn format_graph<W: Weight>(g: &WeightedGraph<W>) -> String {
    let mut s = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(s, "{} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.u, e.v, e.weight);
    }
    s
}

pub fn read_graph<W: Weight>(path: impl AsRef<Path>) -> Result<WeightedGraph<W>> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn write_graph<W: Weight>(g: &WeightedGraph<W>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g))?;
    Ok(())
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let mut colors = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let c: Color = match l {
            "0" => 0,
            "1" => 1,
            "2" => 2,
            _ => return Err(parse_err(i + 1, format!("invalid color {l:?}"))),
        };
        colors.push(c);
    }
    Coloring::new(colors)
}

pub fn format_coloring(c: &Coloring) -> String {
    let mut s = String::with_capacity(2 * c.len());
    for &x in c.as_slice() {
        s.push((b'0' + x) as char);
        s.push('\n');
    }
    s
}

pub fn read_coloring(path: impl AsRef<Path>) -> Result<Coloring> {
    parse_coloring(&fs::read_to_string(path)?)
}

pub fn write_coloring(c: &Coloring, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_coloring(c))?;
    Ok(())
}
