//! Exact spread via exhaustive search over integer Lipschitz functions, plus
//! the diameter upper bound and the complete-graph closed form.

use super::{variance_numerator, Ratio, SpreadError, VertexFunction};
use crate::graph::Graph;

/// What a [`SpreadResult`] value means relative to the true spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct SpreadStats {
    /// Search-tree nodes explored (exact solver).
    pub nodes: u64,
    /// Local-search restarts performed.
    pub restarts: u32,
    /// Local-search improving moves applied.
    pub moves: u64,
}

/// A spread value with its provenance. For `Exact` and `LowerBound` the
/// witness is a Lipschitz function whose variance equals `value`.
#[derive(Debug, Clone)]
pub struct SpreadResult {
    pub kind: SpreadKind,
    pub value: Ratio,
    pub witness: Option<VertexFunction>,
    pub method: &'static str,
    pub stats: SpreadStats,
}

impl SpreadResult {
    pub fn value_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// Default vertex-count cap for the exact solver.
pub const EXACT_SPREAD_DEFAULT_CAP: usize = 20;

/// Computes the exact spread of a connected graph by exhausting integer
/// Lipschitz functions. Vertices are assigned in BFS order from vertex 0 with
/// the root pinned to 0 (spread is shift-invariant); each later vertex ranges
/// over the intersection of [f(u)-1, f(u)+1] over its already-assigned
/// neighbors, which is an interval of at most 3 integers. No variance-based
/// pruning: the tree is explored exhaustively.
pub fn exact_spread(g: &Graph, cap: Option<usize>) -> Result<SpreadResult, SpreadError> {
    let n = g.vertex_count();
    let cap = cap.unwrap_or(EXACT_SPREAD_DEFAULT_CAP);
    if n > cap {
        return Err(SpreadError::SizeGuard { n, cap });
    }
    if n == 0 || !g.is_connected() {
        return Err(SpreadError::DisconnectedGraph);
    }

    // BFS order guarantees every non-root vertex has an assigned neighbor
    // when reached, keeping candidate sets finite.
    let dist = g.bfs_distances(0).expect("vertex 0 exists");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (dist[v], v));

    let mut values = vec![0i64; n];
    let mut assigned = vec![false; n];
    let mut best_numer = i128::MIN;
    let mut best_values = vec![0i64; n];
    let mut nodes: u64 = 0;

    fn descend(
        g: &Graph,
        order: &[usize],
        depth: usize,
        values: &mut [i64],
        assigned: &mut [bool],
        best_numer: &mut i128,
        best_values: &mut Vec<i64>,
        nodes: &mut u64,
    ) {
        *nodes += 1;
        if depth == order.len() {
            let numer = variance_numerator(values).expect("small graphs cannot overflow");
            if numer > *best_numer {
                *best_numer = numer;
                best_values.copy_from_slice(values);
            }
            return;
        }
        let v = order[depth];
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for &w in g.neighbors(v) {
            if assigned[w] {
                lo = lo.max(values[w] - 1);
                hi = hi.min(values[w] + 1);
            }
        }
        debug_assert!(
            depth == 0 || lo > i64::MIN,
            "BFS order gives an assigned neighbor"
        );
        if depth == 0 {
            lo = 0;
            hi = 0;
        }
        let mut c = lo;
        while c <= hi {
            values[v] = c;
            assigned[v] = true;
            descend(
                g,
                order,
                depth + 1,
                values,
                assigned,
                best_numer,
                best_values,
                nodes,
            );
            assigned[v] = false;
            c += 1;
        }
    }

    descend(
        g,
        &order,
        0,
        &mut values,
        &mut assigned,
        &mut best_numer,
        &mut best_values,
        &mut nodes,
    );

    let witness = VertexFunction::new(best_values);
    debug_assert_eq!(super::is_lipschitz(g, &witness).unwrap(), None);
    Ok(SpreadResult {
        kind: SpreadKind::Exact,
        value: Ratio::new(best_numer, (n as i128) * (n as i128)),
        witness: Some(witness),
        method: "branch_and_bound",
        stats: SpreadStats {
            nodes,
            ..Default::default()
        },
    })
}

/// The diameter bound: spread <= diam(G)^2 / 4.
pub fn upper_bound_diameter(g: &Graph) -> Result<SpreadResult, SpreadError> {
    let diam = g.diameter().map_err(|_| SpreadError::DisconnectedGraph)? as i128;
    Ok(SpreadResult {
        kind: SpreadKind::UpperBound,
        value: Ratio::new(diam * diam, 4),
        witness: None,
        method: "diameter_bound",
        stats: SpreadStats::default(),
    })
}

/// Spread of the complete graph K_n: 1/4 for even n, 1/4 - 1/(4n^2) for odd.
pub fn complete_graph_spread(n: usize) -> Result<Ratio, SpreadError> {
    if n < 2 {
        return Err(SpreadError::PreconditionViolated(format!(
            "K_{n} needs n >= 2"
        )));
    }
    let n = n as i128;
    if n % 2 == 0 {
        Ok(Ratio::new(1, 4))
    } else {
        Ok(Ratio::new(1, 4) - Ratio::new(1, 4 * n * n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::{is_lipschitz, variance};

    #[test]
    fn exact_small_graphs() {
        assert_eq!(
            exact_spread(&Graph::complete(2), None).unwrap().value,
            Ratio::new(1, 4)
        );
        assert_eq!(
            exact_spread(&Graph::complete(3), None).unwrap().value,
            Ratio::new(2, 9)
        );
        assert_eq!(
            exact_spread(&Graph::path(3), None).unwrap().value,
            Ratio::new(2, 3)
        );
        assert_eq!(
            exact_spread(&Graph::cycle(4), None).unwrap().value,
            Ratio::new(1, 2)
        );
    }

    #[test]
    fn exact_matches_complete_closed_form() {
        for n in 2..=9 {
            let got = exact_spread(&Graph::complete(n), None).unwrap().value;
            assert_eq!(got, complete_graph_spread(n).unwrap(), "K_{n}");
        }
        assert_eq!(complete_graph_spread(7).unwrap(), Ratio::new(48, 196));
        assert!(complete_graph_spread(1).is_err());
    }

    #[test]
    fn exact_witness_attains_value() {
        for g in [Graph::cycle(6), Graph::path(5), Graph::complete(5)] {
            let res = exact_spread(&g, None).unwrap();
            let w = res.witness.as_ref().unwrap();
            assert_eq!(is_lipschitz(&g, w).unwrap(), None);
            assert_eq!(variance(&g, w).unwrap(), res.value);
        }
    }

    #[test]
    fn exact_guards() {
        let big = Graph::path(25);
        assert!(matches!(
            exact_spread(&big, None),
            Err(SpreadError::SizeGuard { .. })
        ));
        let medium = Graph::path(12);
        assert!(matches!(
            exact_spread(&medium, Some(10)),
            Err(SpreadError::SizeGuard { .. })
        ));
        // Overriding the cap runs the solver; the path optimum is the
        // identity function with variance (n^2 - 1)/12.
        let forced = exact_spread(&medium, Some(12)).unwrap();
        assert_eq!(forced.value, Ratio::new(143, 12));
        let disc = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(
            exact_spread(&disc, None).unwrap_err(),
            SpreadError::DisconnectedGraph
        );
    }

    #[test]
    fn diameter_bound_examples() {
        assert_eq!(
            upper_bound_diameter(&Graph::complete(7)).unwrap().value,
            Ratio::new(1, 4)
        );
        assert_eq!(
            upper_bound_diameter(&Graph::path(3)).unwrap().value,
            Ratio::from_integer(1)
        );
        assert_eq!(
            upper_bound_diameter(&Graph::cycle(6)).unwrap().value,
            Ratio::new(9, 4)
        );
    }

    #[test]
    fn exact_never_exceeds_diameter_bound() {
        for g in [Graph::cycle(7), Graph::path(6), Graph::complete(4)] {
            let s = exact_spread(&g, None).unwrap().value;
            let ub = upper_bound_diameter(&g).unwrap().value;
            assert!(s <= ub);
        }
    }
}
