use super::partition::ClusterPartition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Weight;

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

/// Greedy agglomeration along heavy edges: edges are taken in descending
/// weight (ties by edge index) and merge their endpoint clusters whenever
/// the union stays within `q` vertices.
pub fn heavy_edge_clusters<W: Weight>(g: &WeightedGraph<W>, q: usize) -> Result<ClusterPartition> {
    if q == 0 {
        return Err(Error::InvalidParameter("cluster cap must be positive".into()));
    }
    let n = g.n();
    let mut order: Vec<usize> = (0..g.m()).collect();
    let edges = g.edges();
    order.sort_by(|&a, &b| {
        edges[b]
            .weight
            .partial_cmp(&edges[a].weight)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut dsu = Dsu::new(n);
    for i in order {
        let (a, b) = (dsu.find(edges[i].u), dsu.find(edges[i].v));
        if a != b && dsu.size[a] + dsu.size[b] <= q {
            let (big, small) = if dsu.size[a] >= dsu.size[b] { (a, b) } else { (b, a) };
            dsu.parent[small] = big;
            dsu.size[big] += dsu.size[small];
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let r = dsu.find(v);
        if slot[r] == usize::MAX {
            slot[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot[r]].push(v);
    }
    ClusterPartition::new(clusters, q, n)
}
