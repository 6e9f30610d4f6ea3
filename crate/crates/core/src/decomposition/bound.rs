use rayon::prelude::*;

use super::partition::ClusterPartition;
use crate::error::{Error, Result};
use crate::exact::{branch_and_bound, BnbBudget, FixedColors};
use crate::graph::{induced_subgraph, WeightedGraph};
use crate::scalar::Weight;

/// How clusters are solved in [`lower_bound`].
#[derive(Debug, Clone, Copy)]
pub struct BoundConfig {
    /// Largest cluster accepted.
    pub max_vertices: usize,
    /// Per-cluster branch-and-bound budget.
    pub budget: BnbBudget,
    pub parallel: bool,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            max_vertices: 60,
            budget: BnbBudget::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterBound<W> {
    pub size: usize,
    pub edges: usize,
    /// Optimal value of the cluster, or the best value found if unproven.
    pub value: W,
    pub proven: bool,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound<W> {
    /// Sum of the proven cluster optima. Unproven clusters add nothing.
    pub value: W,
    pub clusters: Vec<ClusterBound<W>>,
}

impl<W: Weight> LowerBound<W> {
    pub fn all_proven(&self) -> bool {
        self.clusters.iter().all(|c| c.proven)
    }
}

/// Sum over clusters of the optimal objective of the induced subgraph.
/// Edges between clusters are ignored, so the result never exceeds the
/// optimum of `g`.
pub fn lower_bound<W: Weight>(
    g: &WeightedGraph<W>,
    p: &ClusterPartition,
    cfg: &BoundConfig,
) -> Result<LowerBound<W>> {
    if let Some(c) = p.clusters().iter().find(|c| c.len() > cfg.max_vertices) {
        return Err(Error::Budget(format!(
            "cluster of {} vertices exceeds the exact-solver limit {}",
            c.len(),
            cfg.max_vertices
        )));
    }
    let solve = |c: &Vec<usize>| -> Result<ClusterBound<W>> {
        let (sub, _) = induced_subgraph(g, c)?;
        let r = branch_and_bound(&sub, &FixedColors::new(), cfg.budget)?;
        Ok(ClusterBound {
            size: c.len(),
            edges: sub.m(),
            value: r.value,
            proven: r.proven_optimal,
            nodes: r.nodes_explored,
        })
    };
    let clusters: Vec<ClusterBound<W>> = if cfg.parallel {
        p.clusters().par_iter().map(solve).collect::<Result<_>>()?
    } else {
        p.clusters().iter().map(solve).collect::<Result<_>>()?
    };
    let value = clusters
        .iter()
        .filter(|c| c.proven)
        .fold(W::zero(), |s, c| s + c.value);
    Ok(LowerBound { value, clusters })
}
