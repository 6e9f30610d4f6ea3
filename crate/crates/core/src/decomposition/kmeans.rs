//! Size-capped k-means over the rows of a spectral embedding.

use rand::Rng as _;

use super::eigen::DenseMatrix;
use super::partition::ClusterPartition;
use super::spectral::{spectral_embedding_with, EigenSettings};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{derive_seed, rng_from, tag};
use crate::scalar::Weight;

fn dist2<W: Weight>(a: &[W], b: &[W]) -> W {
    a.iter().zip(b).fold(W::zero(), |s, (&x, &y)| s + (x - y) * (x - y))
}

fn nearest<W: Weight>(p: &[W], centers: &[Vec<W>]) -> usize {
    let mut best = 0;
    let mut bd = W::infinity();
    for (j, c) in centers.iter().enumerate() {
        let d = dist2(p, c);
        if d < bd {
            bd = d;
            best = j;
        }
    }
    best
}

/// Cluster the rows of `t` into at most `k` groups of at most `q` vertices.
///
/// Centers start uniform on `[0,1]^dim`. Each iteration assigns every row to
/// its nearest center (ties to the lowest index), refills empty clusters
/// with the row farthest from its own center, then walks the clusters in
/// index order and, while one is over the cap, moves its vertex with the
/// least weight inside the cluster to the under-full cluster holding most of
/// that vertex's weight. Centers are recomputed from the repaired clusters.
/// Stops when an iteration leaves the labels unchanged or after `max_iter`
/// iterations. Empty clusters are dropped from the result.
pub fn balanced_kmeans<W: Weight>(
    g: &WeightedGraph<W>,
    t: &DenseMatrix<W>,
    k: usize,
    q: usize,
    max_iter: usize,
    seed: u64,
) -> Result<ClusterPartition> {
    let n = g.n();
    if t.rows() != n {
        return Err(Error::InvalidInput(format!("embedding has {} rows, graph has {n} vertices", t.rows())));
    }
    if k == 0 || q == 0 {
        return Err(Error::InvalidParameter("k and q must be positive".into()));
    }
    if k.saturating_mul(q) < n {
        return Err(Error::InfeasibleCap { n, k, cap: q });
    }
    let dim = t.cols();
    let mut rng = rng_from(seed);
    let mut centers: Vec<Vec<W>> = (0..k)
        .map(|_| (0..dim).map(|_| W::lit(rng.gen::<f64>())).collect())
        .collect();

    let mut labels = vec![usize::MAX; n];
    let mut sizes = vec![0usize; k];
    for _ in 0..max_iter.max(1) {
        let mut next: Vec<usize> = (0..n).map(|v| nearest(t.row(v), &centers)).collect();
        sizes.iter_mut().for_each(|s| *s = 0);
        for &l in &next {
            sizes[l] += 1;
        }

        for j in 0..k {
            if sizes[j] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&v| sizes[next[v]] > 1)
                .map(|v| (v, dist2(t.row(v), &centers[next[v]])))
                .fold(None, |acc: Option<(usize, W)>, (v, d)| match acc {
                    Some((_, bd)) if bd >= d => acc,
                    _ => Some((v, d)),
                });
            if let Some((v, _)) = far {
                sizes[next[v]] -= 1;
                next[v] = j;
                sizes[j] = 1;
                centers[j] = t.row(v).to_vec();
            }
        }

        evict(g, &mut next, &mut sizes, q);

        let mut sums = vec![vec![W::zero(); dim]; k];
        for v in 0..n {
            for (s, &x) in sums[next[v]].iter_mut().zip(t.row(v)) {
                *s = *s + x;
            }
        }
        for j in 0..k {
            if sizes[j] > 0 {
                let inv = W::one() / W::lit(sizes[j] as f64);
                centers[j] = sums[j].iter().map(|&s| s * inv).collect();
            }
        }

        let done = next == labels;
        labels = next;
        if done {
            break;
        }
    }

    let mut clusters = vec![Vec::new(); k];
    for v in 0..n {
        clusters[labels[v]].push(v);
    }
    clusters.retain(|c| !c.is_empty());
    ClusterPartition::new(clusters, q, n)
}

fn evict<W: Weight>(g: &WeightedGraph<W>, labels: &mut [usize], sizes: &mut [usize], q: usize) {
    let k = sizes.len();
    let mut to_cluster = vec![W::zero(); k];
    for j in 0..k {
        if sizes[j] <= q {
            continue;
        }
        // weight of each member towards its own cluster, kept current as members leave
        let mut members: Vec<usize> = (0..labels.len()).filter(|&v| labels[v] == j).collect();
        let mut inner: Vec<W> = members
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .iter()
                    .filter(|&&(u, _)| labels[u] == j)
                    .fold(W::zero(), |s, &(_, w)| s + w)
            })
            .collect();
        while sizes[j] > q {
            let mut pick = 0;
            for i in 1..members.len() {
                if inner[i] < inner[pick] {
                    pick = i;
                }
            }
            let v = members.remove(pick);
            inner.remove(pick);

            to_cluster.iter_mut().for_each(|x| *x = W::zero());
            for &(u, w) in g.neighbors(v) {
                to_cluster[labels[u]] = to_cluster[labels[u]] + w;
            }
            let mut target = usize::MAX;
            for l in 0..k {
                if l != j && sizes[l] < q && (target == usize::MAX || to_cluster[l] > to_cluster[target]) {
                    target = l;
                }
            }
            labels[v] = target;
            sizes[j] -= 1;
            sizes[target] += 1;
            for &(u, w) in g.neighbors(v) {
                if labels[u] == j {
                    if let Ok(i) = members.binary_search(&u) {
                        inner[i] = inner[i] - w;
                    }
                }
            }
        }
    }
}

/// Spectral clustering with `k = ceil(n / q)` clusters capped at `q`.
pub fn spectral_clusters<W: Weight>(
    g: &WeightedGraph<W>,
    q: usize,
    max_iter: usize,
    seed: u64,
) -> Result<ClusterPartition> {
    spectral_clusters_with(g, q, max_iter, seed, &EigenSettings::default())
}

pub fn spectral_clusters_with<W: Weight>(
    g: &WeightedGraph<W>,
    q: usize,
    max_iter: usize,
    seed: u64,
    eig: &EigenSettings,
) -> Result<ClusterPartition> {
    if q == 0 {
        return Err(Error::InvalidParameter("cluster cap must be positive".into()));
    }
    let n = g.n();
    if n == 0 {
        return ClusterPartition::new(Vec::new(), q, 0);
    }
    let k = n.div_ceil(q);
    let settings = EigenSettings {
        seed: derive_seed(seed, tag::CLUSTER),
        ..*eig
    };
    let emb = spectral_embedding_with(g, k, &settings)?;
    balanced_kmeans(g, &emb.t, k, q, max_iter, seed)
}
