//! Boolean linear model in CPLEX LP text format.
//!
//! Variables: `x_i_k` (vertex `i` has color `k`) and `y_i_j_k` (both ends of
//! edge `(i, j)` have color `k`), colors numbered 0..3. Constraints:
//! `assign_i` (one color per vertex), `link_i_j_k` (`y >= x_i + x_j - 1`) and
//! `fix_i` for frozen vertices.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::FixedColors;
use crate::error::Result;
use crate::graph::{WeightedGraph, NUM_COLORS};
use crate::scalar::Weight;

pub fn format_blp<W: Weight>(g: &WeightedGraph<W>, fixed: &FixedColors) -> Result<String> {
    fixed.check_for(g)?;
    let mut s = String::new();
    let _ = writeln!(s, "\\ weighted 3-coloring: n = {}, m = {}", g.n(), g.m());
    s.push_str("Minimize\n obj:");
    if g.m() == 0 {
        if g.n() > 0 {
            s.push_str(" 0 x_0_0");
        }
        s.push('\n');
    } else {
        let mut first = true;
        for e in g.edges() {
            for k in 0..NUM_COLORS {
                let sign = if first { "" } else { "+ " };
                let _ = write!(s, "\n   {sign}{} y_{}_{}_{k}", e.weight, e.u, e.v);
                first = false;
            }
        }
        s.push('\n');
    }

    s.push_str("Subject To\n");
    for i in 0..g.n() {
        let _ = writeln!(s, " assign_{i}: x_{i}_0 + x_{i}_1 + x_{i}_2 = 1");
    }
    for e in g.edges() {
        let (i, j) = (e.u, e.v);
        for k in 0..NUM_COLORS {
            let _ = writeln!(s, " link_{i}_{j}_{k}: y_{i}_{j}_{k} - x_{i}_{k} - x_{j}_{k} >= -1");
        }
    }
    for (i, k) in fixed.iter() {
        let _ = writeln!(s, " fix_{i}: x_{i}_{k} = 1");
    }

    s.push_str("Binary\n");
    for i in 0..g.n() {
        for k in 0..NUM_COLORS {
            let _ = writeln!(s, " x_{i}_{k}");
        }
    }
    for e in g.edges() {
        for k in 0..NUM_COLORS {
            let _ = writeln!(s, " y_{}_{}_{k}", e.u, e.v);
        }
    }
    s.push_str("End\n");
    Ok(s)
}

pub fn export_blp<W: Weight>(
    g: &WeightedGraph<W>,
    fixed: &FixedColors,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, format_blp(g, fixed)?)?;
    Ok(())
}

/// Counts recovered from an LP file written by [`format_blp`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LpSummary {
    pub x_vars: usize,
    pub y_vars: usize,
    pub objective_terms: usize,
    pub assignment: usize,
    pub linking: usize,
    pub fixed: usize,
    pub binaries: usize,
}

#[derive(PartialEq)]
enum Section {
    None,
    Objective,
    Constraints,
    Binary,
    Done,
}

/// Reads back the structure of an LP file produced by [`format_blp`].
pub fn parse_lp_summary(text: &str) -> LpSummary {
    let mut out = LpSummary::default();
    let mut vars: BTreeSet<String> = BTreeSet::new();
    let mut section = Section::None;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line.to_ascii_lowercase().as_str() {
            "minimize" => {
                section = Section::Objective;
                continue;
            }
            "subject to" => {
                section = Section::Constraints;
                continue;
            }
            "binary" | "binaries" => {
                section = Section::Binary;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }
        let body = match line.split_once(':') {
            Some((name, rest)) => {
                if section == Section::Constraints {
                    if name.starts_with("assign_") {
                        out.assignment += 1;
                    } else if name.starts_with("link_") {
                        out.linking += 1;
                    } else if name.starts_with("fix_") {
                        out.fixed += 1;
                    }
                }
                rest
            }
            None => line,
        };
        for tok in body.split_whitespace() {
            if tok.starts_with("x_") || tok.starts_with("y_") {
                vars.insert(tok.to_string());
                match section {
                    Section::Objective if tok.starts_with("y_") => out.objective_terms += 1,
                    Section::Binary => out.binaries += 1,
                    _ => {}
                }
            }
        }
    }
    out.x_vars = vars.iter().filter(|v| v.starts_with("x_")).count();
    out.y_vars = vars.iter().filter(|v| v.starts_with("y_")).count();
    out
}
