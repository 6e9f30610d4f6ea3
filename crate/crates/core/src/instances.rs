//! Seeded instance generators.
//!
//! Both generators draw from [`crate::rng::Rng`] seeded with
//! `derive_seed(spec.seed, tag::GENERATOR)`, so output depends only on the
//! [`GenSpec`].
//!
//! * Random family: `m` distinct vertex pairs are drawn uniformly without
//!   replacement (rejection sampling of pair indices, or of the complement
//!   when `m` exceeds half of all pairs), sorted by pair index, then each edge
//!   gets an independent weight uniform on `[0, weight_max)`.
//! * Unit disk family: `n` points uniform on the unit square, an edge for
//!   every pair at Euclidean distance `<= r`, weighted by that distance.

use std::collections::HashSet;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, WeightedGraph};
use crate::rng::{substream, tag};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Random { m: usize, weight_max: f64 },
    Udg { r: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GenSpec {
    /// Random family with weights on `[0, 100)`.
    pub fn random(n: usize, m: usize, seed: u64) -> Self {
        Self {
            family: Family::Random {
                m,
                weight_max: 100.0,
            },
            n,
            seed,
        }
    }

    pub fn udg(n: usize, r: f64, seed: u64) -> Self {
        Self {
            family: Family::Udg { r },
            n,
            seed,
        }
    }

    /// A short file-name friendly label.
    pub fn label(&self) -> String {
        match self.family {
            Family::Random { m, .. } => format!("random_n{}_m{}_s{}", self.n, m, self.seed),
            Family::Udg { r } => format!("udg_n{}_r{}_s{}", self.n, r, self.seed),
        }
    }
}

#[inline]
fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Maps ascending pair indices (row-major over `i < j`) to vertex pairs.
fn pairs_from_sorted_indices(n: usize, idx: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(idx.len());
    let (mut i, mut row_start) = (0usize, 0usize);
    for &k in idx {
        while k >= row_start + (n - 1 - i) {
            row_start += n - 1 - i;
            i += 1;
        }
        out.push((i, i + 1 + (k - row_start)));
    }
    out
}

pub fn gen_random<W: Weight>(spec: &GenSpec) -> Result<WeightedGraph<W>> {
    let Family::Random { m, weight_max } = spec.family else {
        return Err(Error::InvalidParameter("gen_random needs the random family".into()));
    };
    let n = spec.n;
    let total = pair_count(n);
    if m > total {
        return Err(Error::InvalidInput(format!(
            "{m} edges requested but only {total} vertex pairs exist"
        )));
    }
    if !(weight_max.is_finite() && weight_max >= 0.0) {
        return Err(Error::InvalidParameter(format!("weight_max = {weight_max}")));
    }
    let mut rng = substream(spec.seed, tag::GENERATOR);

    let complement = m > total / 2;
    let draws = if complement { total - m } else { m };
    let mut chosen = HashSet::with_capacity(draws);
    while chosen.len() < draws {
        chosen.insert(rng.gen_range(0..total));
    }
    let mut idx: Vec<usize> = if complement {
        (0..total).filter(|k| !chosen.contains(k)).collect()
    } else {
        chosen.into_iter().collect()
    };
    idx.sort_unstable();

    let mut b = GraphBuilder::new(n);
    for (i, j) in pairs_from_sorted_indices(n, &idx) {
        let w = rng.gen::<f64>() * weight_max;
        b.add_edge(i, j, W::lit(w))?;
    }
    Ok(b.build())
}

/// Unit disk graph on random points; also returns the points.
pub fn gen_udg<W: Weight>(spec: &GenSpec) -> Result<(WeightedGraph<W>, Vec<(f64, f64)>)> {
    let Family::Udg { r } = spec.family else {
        return Err(Error::InvalidParameter("gen_udg needs the udg family".into()));
    };
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius {r}")));
    }
    let mut rng = substream(spec.seed, tag::GENERATOR);
    let pts: Vec<(f64, f64)> = (0..spec.n).map(|_| (rng.gen(), rng.gen())).collect();
    let mut b = GraphBuilder::new(spec.n);
    for i in 0..spec.n {
        for j in i + 1..spec.n {
            let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
            if d <= r {
                b.add_edge(i, j, W::lit(d))?;
            }
        }
    }
    Ok((b.build(), pts))
}

/// Dispatches on the family.
pub fn generate<W: Weight>(spec: &GenSpec) -> Result<WeightedGraph<W>> {
    match spec.family {
        Family::Random { .. } => gen_random(spec),
        Family::Udg { .. } => gen_udg(spec).map(|(g, _)| g),
    }
}
