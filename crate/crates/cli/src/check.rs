//! Validation of a coloring file against a graph file.

use std::path::Path;

use tricolor::{Coloring, Graph, NUM_COLORS};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub n: usize,
    pub objective: f64,
    pub class_sizes: [usize; NUM_COLORS],
    /// Edges whose endpoints share a color.
    pub conflicting_edges: usize,
}

impl CheckReport {
    pub fn of(g: &Graph, c: &Coloring) -> Result<Self> {
        if c.len() != g.n() {
            return Err(HarnessError::InvalidColoring(format!(
                "{} colors for {} vertices",
                c.len(),
                g.n()
            )));
        }
        let mut class_sizes = [0; NUM_COLORS];
        for &x in c.as_slice() {
            class_sizes[x as usize] += 1;
        }
        let conflicting_edges = g.edges().iter().filter(|e| c.get(e.u) == c.get(e.v)).count();
        Ok(Self {
            n: g.n(),
            objective: tricolor::objective::objective(g, c)?,
            class_sizes,
            conflicting_edges,
        })
    }
}

/// Reads both files and reports on the coloring. Unreadable files, bad
/// colors and a length mismatch are errors.
pub fn check(graph_path: &Path, coloring_path: &Path) -> Result<CheckReport> {
    let g: Graph = tricolor::io::read_graph(graph_path).map_err(|source| HarnessError::File {
        path: graph_path.to_path_buf(),
        source,
    })?;
    let c = tricolor::io::read_coloring(coloring_path).map_err(|e| match e {
        tricolor::Error::Io(_) => HarnessError::File {
            path: coloring_path.to_path_buf(),
            source: e,
        },
        other => HarnessError::InvalidColoring(other.to_string()),
    })?;
    CheckReport::of(&g, &c)
}
