//! Normalized Laplacian and the row-normalized spectral embedding.

use super::eigen::{lanczos_smallest, symmetric_eigen, DenseMatrix, LanczosConfig};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Weight;

/// `I - D^{-1/2} A D^{-1/2}` as a dense matrix. Vertices of zero weighted
/// degree get an all-zero row and column (diagonal 0 instead of 1).
pub fn normalized_laplacian<W: Weight>(g: &WeightedGraph<W>) -> DenseMatrix<W> {
    let n = g.n();
    let inv = inv_sqrt_degrees(g);
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        if inv[i] > W::zero() {
            l[(i, i)] = W::one();
        }
    }
    for e in g.edges() {
        let x = -e.weight * inv[e.u] * inv[e.v];
        l[(e.u, e.v)] = x;
        l[(e.v, e.u)] = x;
    }
    l
}

fn inv_sqrt_degrees<W: Weight>(g: &WeightedGraph<W>) -> Vec<W> {
    (0..g.n())
        .map(|v| {
            let d = g.weighted_degree(v);
            if d > W::zero() {
                W::one() / d.sqrt()
            } else {
                W::zero()
            }
        })
        .collect()
}

/// `y = L_sym x` without forming the matrix.
pub fn laplacian_apply<W: Weight>(g: &WeightedGraph<W>, inv_sqrt_deg: &[W], x: &[W], y: &mut [W]) {
    for v in 0..g.n() {
        if inv_sqrt_deg[v] == W::zero() {
            y[v] = W::zero();
            continue;
        }
        let mut acc = W::zero();
        for &(u, w) in g.neighbors(v) {
            acc = acc + w * inv_sqrt_deg[u] * x[u];
        }
        y[v] = x[v] - inv_sqrt_deg[v] * acc;
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenSettings {
    /// Residual bound `||L u - lambda u||` every returned pair must meet.
    pub tol: f64,
    /// Largest number of non-isolated vertices handled by the dense solver.
    pub dense_limit: usize,
    /// Lanczos step budget, as a multiple of the problem size.
    pub step_factor: usize,
    pub seed: u64,
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            dense_limit: 2000,
            step_factor: 10,
            seed: 0,
        }
    }
}

/// Rows of `t` are the embedded vertices.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding<W> {
    /// `n x k`, unit-norm rows; zero rows for isolated vertices.
    pub t: DenseMatrix<W>,
    /// The `k` smallest eigenvalues of `L_sym`, ascending.
    pub eigenvalues: Vec<W>,
    /// `||L u - lambda u||` for each returned pair.
    pub residuals: Vec<W>,
    /// The eigenvectors before row normalization (`n x k`).
    pub u: DenseMatrix<W>,
}

pub fn spectral_embedding<W: Weight>(g: &WeightedGraph<W>, k: usize, tol: f64) -> Result<SpectralEmbedding<W>> {
    spectral_embedding_with(
        g,
        k,
        &EigenSettings {
            tol,
            ..EigenSettings::default()
        },
    )
}

/// Eigenvectors of the `k` smallest eigenvalues of `L_sym`, rows normalized.
///
/// The eigenproblem is solved on the non-isolated vertices only; isolated
/// vertices get zero rows. When `k` exceeds the number of non-isolated
/// vertices the surplus columns are zero with eigenvalue 0. Each column's
/// sign is fixed so that its entries sum to a nonnegative value.
pub fn spectral_embedding_with<W: Weight>(
    g: &WeightedGraph<W>,
    k: usize,
    cfg: &EigenSettings,
) -> Result<SpectralEmbedding<W>> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let inv = inv_sqrt_degrees(g);
    let active: Vec<usize> = (0..n).filter(|&v| inv[v] > W::zero()).collect();
    let na = active.len();
    let kk = k.min(na);

    let mut u = DenseMatrix::zeros(n, k);
    let mut eigenvalues = vec![W::zero(); k];

    if kk > 0 {
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in active.iter().enumerate() {
            pos[v] = i;
        }
        let (vals, vecs) = if na <= cfg.dense_limit {
            let mut l = DenseMatrix::zeros(na, na);
            for i in 0..na {
                l[(i, i)] = W::one();
            }
            for e in g.edges() {
                if pos[e.u] != usize::MAX && pos[e.v] != usize::MAX {
                    let x = -e.weight * inv[e.u] * inv[e.v];
                    l[(pos[e.u], pos[e.v])] = x;
                    l[(pos[e.v], pos[e.u])] = x;
                }
            }
            symmetric_eigen(&l)?
        } else {
            let mut xf = vec![W::zero(); n];
            let mut yf = vec![W::zero(); n];
            let lcfg = LanczosConfig {
                tol: cfg.tol * 0.1,
                max_steps: cfg.step_factor.saturating_mul(na),
                seed: cfg.seed,
            };
            lanczos_smallest(
                na,
                kk,
                |x: &[W], y: &mut [W]| {
                    for (i, &v) in active.iter().enumerate() {
                        xf[v] = x[i];
                    }
                    laplacian_apply(g, &inv, &xf, &mut yf);
                    for (i, &v) in active.iter().enumerate() {
                        y[i] = yf[v];
                    }
                },
                &lcfg,
            )?
        };
        for j in 0..kk {
            eigenvalues[j] = vals[j];
            let mut sum = W::zero();
            let mut big = (W::zero(), W::zero());
            for i in 0..na {
                let x = vecs[(i, j)];
                sum = sum + x;
                if x.abs() > big.0 {
                    big = (x.abs(), x);
                }
            }
            let tiny = W::lit(1e-10) * W::lit(na as f64).sqrt();
            let flip = if sum.abs() > tiny { sum < W::zero() } else { big.1 < W::zero() };
            for (i, &v) in active.iter().enumerate() {
                let x = vecs[(i, j)];
                u[(v, j)] = if flip { -x } else { x };
            }
        }
    }

    let mut residuals = Vec::with_capacity(k);
    let mut y = vec![W::zero(); n];
    let mut worst = W::zero();
    for j in 0..k {
        let col = u.column(j);
        laplacian_apply(g, &inv, &col, &mut y);
        let r = y
            .iter()
            .zip(&col)
            .fold(W::zero(), |s, (&ly, &x)| {
                let d = ly - eigenvalues[j] * x;
                s + d * d
            })
            .sqrt();
        worst = worst.max(r);
        residuals.push(r);
    }
    if worst > W::lit(cfg.tol) {
        return Err(Error::NoConvergence {
            residual: worst.to_f64_lossy(),
            tol: cfg.tol,
        });
    }

    let mut t = u.clone();
    for i in 0..n {
        let row = t.row_mut(i);
        let norm = row.iter().fold(W::zero(), |s, &x| s + x * x).sqrt();
        if norm > W::zero() {
            row.iter_mut().for_each(|x| *x = *x / norm);
        }
    }
    Ok(SpectralEmbedding {
        t,
        eigenvalues,
        residuals,
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph<f64> {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    fn two_triangles() -> WeightedGraph<f64> {
        WeightedGraph::from_edges(
            6,
            [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 2.0), (4, 5, 1.0), (3, 5, 3.0)],
        )
        .unwrap()
    }

    #[test]
    fn laplacian_entries() {
        let g: WeightedGraph<f64> = WeightedGraph::from_edges(2, [(0, 1, 7.5)]).unwrap();
        let l = normalized_laplacian(&g);
        assert!((l[(0, 1)] + 1.0).abs() < 1e-15);
        assert_eq!(l[(0, 0)], 1.0);

        let l = normalized_laplacian(&WeightedGraph::<f64>::empty(3));
        assert_eq!(l, DenseMatrix::zeros(3, 3));

        let l = normalized_laplacian(&triangle());
        assert!(l.is_symmetric(0.0));
        assert!((l[(0, 1)] + 0.5).abs() < 1e-15);
        let (vals, _) = symmetric_eigen(&l).unwrap();
        for (v, w) in vals.iter().zip([0.0, 1.5, 1.5]) {
            assert!((v - w).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_matches_dense() {
        let g = two_triangles();
        let l = normalized_laplacian(&g);
        let x: Vec<f64> = (0..6).map(|i| i as f64 - 2.5).collect();
        let inv = inv_sqrt_degrees(&g);
        let mut y = vec![0.0; 6];
        laplacian_apply(&g, &inv, &x, &mut y);
        for (a, b) in y.iter().zip(l.mul_vec(&x)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn k1_connected_embedding_is_all_ones() {
        let g: WeightedGraph<f64> = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 5.0), (2, 3, 0.5), (0, 3, 2.0)]).unwrap();
        let emb = spectral_embedding(&g, 1, 1e-8).unwrap();
        assert!(emb.eigenvalues[0].abs() < 1e-12);
        for i in 0..4 {
            assert!((emb.t[(i, 0)] - 1.0).abs() < 1e-12);
        }
        // unnormalized eigenvector proportional to sqrt(degree)
        let ratio = emb.u[(0, 0)] / g.weighted_degree(0).sqrt();
        for i in 1..4 {
            assert!((emb.u[(i, 0)] / g.weighted_degree(i).sqrt() - ratio).abs() < 1e-10);
        }
    }

    #[test]
    fn components_give_constant_rows() {
        let emb = spectral_embedding(&two_triangles(), 2, 1e-8).unwrap();
        assert!(emb.eigenvalues.iter().all(|v| v.abs() < 1e-10));
        for (a, b) in [(0, 1), (0, 2), (3, 4), (3, 5)] {
            for j in 0..2 {
                assert!((emb.t[(a, j)] - emb.t[(b, j)]).abs() < 1e-8);
            }
        }
        let dot: f64 = (0..2).map(|j| emb.t[(0, j)] * emb.t[(3, j)]).sum();
        assert!(dot.abs() < 1e-8);
    }

    #[test]
    fn isolated_vertices_get_zero_rows() {
        let g = WeightedGraph::from_edges(5, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let emb = spectral_embedding(&g, 2, 1e-8).unwrap();
        for v in [3, 4] {
            assert!(emb.t.row(v).iter().all(|&x| x == 0.0));
        }
        for v in 0..3 {
            let nrm: f64 = emb.t.row(v).iter().map(|x| x * x).sum();
            assert!((nrm - 1.0).abs() < 1e-9);
        }
        let emb = spectral_embedding(&WeightedGraph::<f64>::empty(3), 2, 1e-8).unwrap();
        assert_eq!(emb.eigenvalues, vec![0.0, 0.0]);
    }

    #[test]
    fn iterative_path_agrees_with_dense() {
        let g: WeightedGraph<f64> =
            crate::instances::gen_random(&crate::instances::GenSpec::random(80, 300, 2)).unwrap();
        let dense = spectral_embedding(&g, 4, 1e-8).unwrap();
        let cfg = EigenSettings {
            dense_limit: 10,
            ..EigenSettings::default()
        };
        let lan = spectral_embedding_with(&g, 4, &cfg).unwrap();
        for j in 0..4 {
            assert!((dense.eigenvalues[j] - lan.eigenvalues[j]).abs() < 1e-8);
            assert!(lan.residuals[j] <= 1e-8);
        }
    }

    #[test]
    fn rejects_bad_k() {
        assert!(spectral_embedding(&triangle(), 0, 1e-8).is_err());
        assert!(spectral_embedding(&triangle(), 4, 1e-8).is_err());
    }
}
