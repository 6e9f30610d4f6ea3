//! Symmetric eigensolvers.
//!
//! Dense path: Householder reduction to tridiagonal form followed by the
//! implicit QL iteration (the EISPACK `tred2`/`tql2` pair). Iterative path:
//! Lanczos with full reorthogonalization and explicit locking of converged
//! Ritz pairs, for operators too large to store densely.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::rng_from;
use crate::scalar::Weight;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<W> {
    rows: usize,
    cols: usize,
    data: Vec<W>,
}

impl<W: Weight> DenseMatrix<W> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![W::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = W::one();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[W] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [W] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<W> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_symmetric(&self, tol: W) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    pub fn mul_vec(&self, x: &[W]) -> Vec<W> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(W::zero(), |a, (&m, &v)| a + m * v))
            .collect()
    }
}

impl<W> std::ops::Index<(usize, usize)> for DenseMatrix<W> {
    type Output = W;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &W {
        &self.data[i * self.cols + j]
    }
}

impl<W> std::ops::IndexMut<(usize, usize)> for DenseMatrix<W> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut W {
        &mut self.data[i * self.cols + j]
    }
}

/// Full eigendecomposition of a symmetric matrix. Eigenvalues ascending;
/// column `j` of the returned matrix is the eigenvector of eigenvalue `j`.
pub fn symmetric_eigen<W: Weight>(a: &DenseMatrix<W>) -> Result<(Vec<W>, DenseMatrix<W>)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::InvalidInput("eigendecomposition needs a square matrix".into()));
    }
    let mut v = a.clone();
    let mut d = vec![W::zero(); n];
    let mut e = vec![W::zero(); n];
    tred2(&mut v, &mut d, &mut e);
    tql2(&mut v, &mut d, &mut e)?;
    Ok((d, v))
}

/// Householder tridiagonalization. On exit `v` holds the accumulated
/// orthogonal transform, `d` the diagonal and `e[1..]` the subdiagonal.
fn tred2<W: Weight>(v: &mut DenseMatrix<W>, d: &mut [W], e: &mut [W]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    let zero = W::zero();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for k in 0..i {
            scale = scale + d[k].abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
                v[(j, i)] = zero;
            }
        } else {
            for k in 0..i {
                d[k] = d[k] / scale;
                h = h + d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = zero;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g = g + v[(k, j)] * d[k];
                    e[k] = e[k] + v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] = v[(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = zero;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = W::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g = g + v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] = v[(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = zero;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = zero;
    }
    v[(n - 1, n - 1)] = W::one();
    e[0] = zero;
}

/// Implicit QL on a symmetric tridiagonal matrix, accumulating into `v`.
/// Sorts eigenpairs ascending.
fn tql2<W: Weight>(v: &mut DenseMatrix<W>, d: &mut [W], e: &mut [W]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let zero = W::zero();
    let two = W::lit(2.0);
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = W::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 * n.max(1) {
                    return Err(Error::NoConvergence {
                        residual: e[l].abs().to_f64_lossy(),
                        tol: (eps * tst1).to_f64_lossy(),
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(W::one());
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in l + 2..n {
                    d[i] = d[i] - h;
                }
                f = f + h;

                p = d[m];
                let mut c = W::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = zero;
    }

    // selection sort keeps the columns of v aligned
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for j in i + 1..n {
            if d[j] < p {
                k = j;
                p = d[j];
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for j in 0..n {
                let t = v[(j, i)];
                v[(j, i)] = v[(j, k)];
                v[(j, k)] = t;
            }
        }
    }
    Ok(())
}

/// Eigenpairs of a symmetric tridiagonal matrix given by its diagonal and
/// subdiagonal (`sub.len() == diag.len() - 1`).
pub fn tridiagonal_eigen<W: Weight>(diag: &[W], sub: &[W]) -> Result<(Vec<W>, DenseMatrix<W>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![W::zero(); n];
    // tql2 expects the subdiagonal in e[1..n]
    for i in 1..n {
        e[i] = sub[i - 1];
    }
    let mut v = DenseMatrix::identity(n);
    tql2(&mut v, &mut d, &mut e)?;
    Ok((d, v))
}

/// Settings for [`lanczos_smallest`].
#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub tol: f64,
    /// Total Lanczos steps allowed, over all restarts.
    pub max_steps: usize,
    pub seed: u64,
}

fn dot<W: Weight>(a: &[W], b: &[W]) -> W {
    a.iter().zip(b).fold(W::zero(), |s, (&x, &y)| s + x * y)
}

fn orthogonalize<W: Weight>(w: &mut [W], basis: &[Vec<W>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let c = dot(w, q);
            for (x, &y) in w.iter_mut().zip(q) {
                *x = *x - c * y;
            }
        }
    }
}

/// The `k` smallest eigenpairs of the symmetric operator `apply` of size `n`.
///
/// Each round runs Lanczos from a random start orthogonal to the locked
/// vectors, grows the Krylov space until the smallest Ritz pair meets the
/// residual tolerance, then locks every leading Ritz pair that has
/// converged. Rounds continue until one finds nothing below the current
/// `k`-th smallest locked value, which catches repeated eigenvalues.
/// Returns eigenvalues ascending and eigenvectors as columns of an `n x k`
/// matrix.
pub fn lanczos_smallest<W, F>(
    n: usize,
    k: usize,
    mut apply: F,
    cfg: &LanczosConfig,
) -> Result<(Vec<W>, DenseMatrix<W>)>
where
    W: Weight,
    F: FnMut(&[W], &mut [W]),
{
    if k > n {
        return Err(Error::InvalidParameter(format!("{k} eigenpairs requested of a size-{n} operator")));
    }
    if k == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(n, 0)));
    }
    let tol = W::lit(cfg.tol);
    let mut rng = rng_from(cfg.seed);
    let mut locked_vals: Vec<W> = Vec::new();
    let mut locked: Vec<Vec<W>> = Vec::new();
    let mut steps = 0usize;
    let mut worst = f64::INFINITY;

    let kth_smallest = |vals: &[W]| {
        let mut v = vals.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v[k - 1]
    };

    // Once k pairs are locked, extra rounds look for eigenvalues a previous
    // round could not see (repeated eigenvalues) and stop when none remain.
    while locked.len() < n {
        let verifying = locked.len() >= k;
        let threshold = if verifying { kth_smallest(&locked_vals) } else { W::infinity() };
        let want = if verifying { k } else { k - locked.len() };
        let remaining_dim = n - locked.len();

        let mut q: Vec<W> = (0..n).map(|_| W::lit(rng.gen::<f64>() - 0.5)).collect();
        orthogonalize(&mut q, &locked);
        let nrm = dot(&q, &q).sqrt();
        if nrm == W::zero() {
            break;
        }
        q.iter_mut().for_each(|x| *x = *x / nrm);

        let mut basis: Vec<Vec<W>> = vec![q];
        let mut alpha: Vec<W> = Vec::new();
        let mut beta: Vec<W> = Vec::new();
        let mut w = vec![W::zero(); n];
        let mut newly: Vec<(W, Vec<W>)> = Vec::new();
        let check_every = 10;

        loop {
            if steps >= cfg.max_steps {
                return Err(Error::NoConvergence {
                    residual: worst,
                    tol: cfg.tol,
                });
            }
            steps += 1;
            let j = basis.len() - 1;
            apply(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // basis first: a final pass against the basis would reintroduce
            // locked components, and those grow geometrically
            orthogonalize(&mut w, &basis);
            orthogonalize(&mut w, &locked);
            let b = dot(&w, &w).sqrt();
            let m = basis.len();
            let exhausted = b <= W::lit(1e-12) || m >= remaining_dim;

            if exhausted || m % check_every == 0 {
                let (theta, s) = tridiagonal_eigen(&alpha, &beta)?;
                // residual of Ritz pair i is |b * s[m-1, i]|
                let res = |i: usize| if exhausted { W::zero() } else { (b * s[(m - 1, i)]).abs() };
                worst = res(0).to_f64_lossy();
                if res(0) <= tol {
                    for i in 0..m.min(want) {
                        if res(i) > tol || theta[i] >= threshold - tol {
                            break;
                        }
                        let mut y = vec![W::zero(); n];
                        for (r, qr) in basis.iter().enumerate() {
                            let c = s[(r, i)];
                            for (yy, &qq) in y.iter_mut().zip(qr) {
                                *yy = *yy + c * qq;
                            }
                        }
                        let ny = dot(&y, &y).sqrt();
                        y.iter_mut().for_each(|x| *x = *x / ny);
                        newly.push((theta[i], y));
                    }
                    break;
                }
                if exhausted {
                    break;
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|&x| x / b).collect());
        }
        if newly.is_empty() {
            if verifying {
                break;
            }
            return Err(Error::NoConvergence {
                residual: worst,
                tol: cfg.tol,
            });
        }
        for (val, vec) in newly {
            locked_vals.push(val);
            locked.push(vec);
        }
    }

    let mut idx: Vec<usize> = (0..locked.len()).collect();
    idx.sort_by(|&a, &b| locked_vals[a].partial_cmp(&locked_vals[b]).unwrap_or(std::cmp::Ordering::Equal));
    idx.truncate(k);
    let mut vecs = DenseMatrix::zeros(n, idx.len());
    let vals = idx.iter().map(|&i| locked_vals[i]).collect();
    for (col, &i) in idx.iter().enumerate() {
        for r in 0..n {
            vecs[(r, col)] = locked[i][r];
        }
    }
    Ok((vals, vecs))
}
