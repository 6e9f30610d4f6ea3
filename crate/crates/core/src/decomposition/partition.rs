use crate::error::{Error, Result};

/// Disjoint vertex clusters covering `0..n`, each of size at most `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    clusters: Vec<Vec<usize>>,
    cap: usize,
}

impl ClusterPartition {
    /// Checks cover, disjointness, the size cap and non-emptiness. Each
    /// cluster is sorted; clusters are ordered by their smallest vertex.
    pub fn new(mut clusters: Vec<Vec<usize>>, cap: usize, n: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidParameter("cluster cap must be positive".into()));
        }
        let mut seen = vec![false; n];
        for c in &mut clusters {
            if c.is_empty() {
                return Err(Error::InvalidInput("empty cluster".into()));
            }
            if c.len() > cap {
                return Err(Error::InvalidInput(format!("cluster of size {} exceeds cap {cap}", c.len())));
            }
            c.sort_unstable();
            for &v in c.iter() {
                if v >= n {
                    return Err(Error::InvalidInput(format!("vertex {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidInput(format!("vertex {v} in two clusters")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("vertex {v} not covered")));
        }
        clusters.sort_unstable_by_key(|c| c[0]);
        Ok(Self { clusters, cap })
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.clusters.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Cluster index of every vertex.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.clusters.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                out[v] = i;
            }
        }
        out
    }

    pub fn into_clusters(self) -> Vec<Vec<usize>> {
        self.clusters
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let p = ClusterPartition::new(vec![vec![3, 1], vec![0, 2]], 2, 4).unwrap();
        assert_eq!(p.clusters(), &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p.labels(), vec![0, 1, 0, 1]);
        assert!(ClusterPartition::new(vec![vec![0, 1, 2]], 2, 3).is_err());
        assert!(ClusterPartition::new(vec![vec![0], vec![0, 1]], 2, 2).is_err());
        assert!(ClusterPartition::new(vec![vec![0]], 2, 2).is_err());
        assert!(ClusterPartition::new(vec![vec![0, 1], vec![]], 2, 2).is_err());
        assert!(ClusterPartition::new(vec![], 1, 0).unwrap().is_empty());
    }
}
