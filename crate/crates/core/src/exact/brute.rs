use super::{FixedColors, SolveResult};
use crate::error::{Error, Result};
use crate::graph::{Coloring, WeightedGraph};
use crate::objective::{objective_unchecked, ColoringState};
use crate::scalar::Weight;

/// Largest number of free vertices [`brute_force`] accepts (3^12 = 531441).
pub const BRUTE_FORCE_MAX_FREE: usize = 12;

/// Enumerates all colorings of the free vertices in lexicographic order of the
/// full color sequence and returns the first minimizer.
pub fn brute_force<W: Weight>(g: &WeightedGraph<W>, fixed: &FixedColors) -> Result<SolveResult<W>> {
    fixed.check_for(g)?;
    let free = fixed.free_vertices(g.n());
    if free.len() > BRUTE_FORCE_MAX_FREE {
        return Err(Error::Budget(format!(
            "{} free vertices, brute force handles at most {BRUTE_FORCE_MAX_FREE}",
            free.len()
        )));
    }
    let mut start = Coloring::uniform(g.n(), 0);
    for (v, c) in fixed.iter() {
        start.set(v, c);
    }
    let mut state = ColoringState::new(g, start)?;
    let slack = W::move_eps() * (W::one() + g.total_weight());

    let mut best = state.coloring().clone();
    let mut best_val = objective_unchecked(g, best.as_slice());
    let mut nodes = 1u64;

    // odometer: the last free vertex turns fastest, so visits are in
    // lexicographic order of the color sequence
    loop {
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return Ok(SolveResult {
                    coloring: best,
                    value: best_val,
                    proven_optimal: true,
                    nodes_explored: nodes,
                });
            }
            pos -= 1;
            let v = free[pos];
            let c = state.color(v);
            if c < 2 {
                state.apply(v, c + 1);
                break;
            }
            state.apply(v, 0);
        }
        nodes += 1;
        if state.objective() <= best_val + slack {
            let exact = objective_unchecked(g, state.coloring().as_slice());
            if exact < best_val {
                best_val = exact;
                best = state.coloring().clone();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> WeightedGraph<f64> {
        WeightedGraph::from_edges(
            4,
            [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn small_cases() {
        let tri = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let r = brute_force(&tri, &FixedColors::new()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.proven_optimal);
        // lexicographically first proper coloring
        assert_eq!(r.coloring.as_slice(), &[0, 1, 2]);

        let r = brute_force(&k4(), &FixedColors::new()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.nodes_explored, 81);
        assert_eq!(r.coloring.as_slice(), &[0, 0, 1, 2]);

        let edge = WeightedGraph::from_edges(2, [(0, 1, 7.0)]).unwrap();
        let fixed: FixedColors = [(0, 0), (1, 0)].into_iter().collect();
        let r = brute_force(&edge, &fixed).unwrap();
        assert_eq!(r.value, 7.0);
        assert_eq!(r.nodes_explored, 1);
    }

    #[test]
    fn fixed_vertex_in_k4() {
        let fixed: FixedColors = [(2, 1)].into_iter().collect();
        let r = brute_force(&k4(), &fixed).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.coloring.get(2), 1);
        assert_eq!(r.nodes_explored, 27);
    }

    #[test]
    fn refuses_large_instances() {
        let g = WeightedGraph::<f64>::empty(13);
        assert!(matches!(brute_force(&g, &FixedColors::new()), Err(Error::Budget(_))));
        let fixed: FixedColors = [(0, 1)].into_iter().collect();
        assert!(brute_force(&g, &fixed).is_ok());
    }
}
