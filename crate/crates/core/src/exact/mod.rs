//! Exact solvers for small instances and BLP model export.
//!
//! [`brute_force`] enumerates every completion and serves as the reference;
//! [`branch_and_bound`] is the workhorse used by lower bounds and by IPI.
//! Both honor [`FixedColors`], which freeze the color of selected vertices.

mod bnb;
mod brute;
mod lp;

use std::collections::BTreeMap;

pub use bnb::{branch_and_bound, branch_and_bound_with, partial_bound, BnbBudget, BnbOptions};
pub use brute::{brute_force, BRUTE_FORCE_MAX_FREE};
pub use lp::{export_blp, format_blp, parse_lp_summary, LpSummary};

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, WeightedGraph, NUM_COLORS};
use crate::scalar::Weight;

/// Vertices whose colors are frozen during a solve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedColors {
    map: BTreeMap<usize, Color>,
}

impl FixedColors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: usize, c: Color) -> Result<()> {
        if c as usize >= NUM_COLORS {
            return Err(Error::InvalidInput(format!("fixed color {c} out of range")));
        }
        self.map.insert(v, c);
        Ok(())
    }

    #[inline]
    pub fn get(&self, v: usize) -> Option<Color> {
        self.map.get(&v).copied()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.map.iter().map(|(&v, &c)| (v, c))
    }

    pub fn check_for<W: Weight>(&self, g: &WeightedGraph<W>) -> Result<()> {
        match self.map.keys().next_back() {
            Some(&v) if v >= g.n() => Err(Error::InvalidInput(format!(
                "fixed vertex {v} out of range for n = {}",
                g.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Vertices not fixed, ascending.
    pub fn free_vertices(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|v| !self.map.contains_key(v)).collect()
    }

    /// Whether `c` agrees with every frozen color.
    pub fn is_consistent(&self, c: &Coloring) -> bool {
        self.iter().all(|(v, k)| v < c.len() && c.get(v) == k)
    }

    /// Parses `vertex color` pairs, one per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        for (i, l) in text.lines().enumerate() {
            let l = l.trim();
            if l.is_empty() {
                continue;
            }
            let mut it = l.split_whitespace();
            let parse = |t: Option<&str>| -> Result<usize> {
                t.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("expected `vertex color`, got {l:?}"),
                })
            };
            let v = parse(it.next())?;
            let c = parse(it.next())?;
            if c >= NUM_COLORS || it.next().is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected `vertex color`, got {l:?}"),
                });
            }
            out.insert(v, c as Color)?;
        }
        Ok(out)
    }
}

impl FromIterator<(usize, Color)> for FixedColors {
    fn from_iter<T: IntoIterator<Item = (usize, Color)>>(iter: T) -> Self {
        let mut out = Self::new();
        for (v, c) in iter {
            out.insert(v, c).expect("color in range");
        }
        out
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<W> {
    pub coloring: Coloring,
    /// Objective of `coloring`.
    pub value: W,
    /// Set when `value` is known to be optimal.
    pub proven_optimal: bool,
    /// Search nodes (exact solvers) or iterations (heuristics).
    pub nodes_explored: u64,
}
