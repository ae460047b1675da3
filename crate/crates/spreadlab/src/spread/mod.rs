//! The optimization core: Lipschitz vertex functions, exact variance
//! arithmetic, the exact spread solver, local-search lower bounds, the two
//! explicit constructions (three-level and kernel-path), and tail / level-set
//! verifiers.
//!
//! Throughout, a function f on the vertices of G is Lipschitz when
//! |f(v) - f(w)| <= 1 across every edge, and the spread of a connected G is
//! the maximum of Var(f(X)), X a uniform random vertex, over Lipschitz f.
//! An optimal f can always be taken integer-valued, so the solvers and
//! constructions all work with integer functions; exact variances are
//! rationals with denominator n^2.

mod construct;
mod exact;
mod local;
mod tails;

pub use construct::{
    attachment_map, b_sets, kernel_path_function, three_level_function, BSets, KernelPathFunction,
    ThreeLevel,
};
pub use exact::{
    complete_graph_spread, exact_spread, upper_bound_diameter, SpreadKind, SpreadResult,
    SpreadStats, EXACT_SPREAD_DEFAULT_CAP,
};
pub use local::{local_search_spread, local_search_spread_seeded};
pub use tails::{
    beta_level_bounds_violation, fit_line, fit_log_counts, spread_upper_from_levels,
    spread_upper_from_tails, tail_profile, verify_levelset_decay, LevelSetReport, LinearFit,
    TailProfile,
};

use thiserror::Error;

use crate::graph::{Graph, INFINITY};

/// Exact rational value; spread values carry denominator n^2.
pub type Ratio = num_rational::Ratio<i128>;

/// Formats a rational as `num/den` (JSON-friendly).
pub fn ratio_string(r: Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Error, PartialEq)]
pub enum SpreadError {
    #[error("function has {got} values but the graph has {want} vertices")]
    SizeMismatch { got: usize, want: usize },
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("n = {n} exceeds the exact-solver cap {cap}; raise the cap to force")]
    SizeGuard { n: usize, cap: usize },
    #[error("intermediate value overflows 128-bit arithmetic")]
    IntegerOverflow,
    #[error("function is not Lipschitz (edge {0:?} violates)")]
    NotLipschitz((usize, usize)),
    #[error("eps too large: the pattern height r = {r} is below 3")]
    EpsTooLarge { r: i64 },
    #[error("delta must lie in (0, 1/10)")]
    DeltaOutOfRange,
    #[error("2-core is empty")]
    EmptyCore,
    #[error("r = {0} is not divisible by 3")]
    RNotDivisibleBy3(i64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("construction infeasible: {0}")]
    ConstructionInfeasible(String),
}

/// Integer-valued function on the vertices of a graph. Optimal spread
/// witnesses can always be taken integer-valued, so this is the working
/// representation everywhere; real-valued analysis goes through
/// [`variance_real`] / [`is_lipschitz_real`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    values: Vec<i64>,
}

impl VertexFunction {
    pub fn new(values: Vec<i64>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, value: i64) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    /// BFS distance from `source` as a vertex function; unreachable vertices
    /// are rejected (distance functions are only used on connected graphs).
    pub fn from_distances(g: &Graph, source: usize) -> Result<Self, SpreadError> {
        let dist = g
            .bfs_distances(source)
            .map_err(|_| SpreadError::SizeMismatch {
                got: source,
                want: g.vertex_count(),
            })?;
        if dist.iter().any(|&d| d == INFINITY) {
            return Err(SpreadError::DisconnectedGraph);
        }
        Ok(Self {
            values: dist.into_iter().map(|d| d as i64).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, v: usize) -> i64 {
        self.values[v]
    }

    /// The same function shifted by a constant.
    pub fn shifted(&self, c: i64) -> Self {
        Self {
            values: self.values.iter().map(|&x| x + c).collect(),
        }
    }

    /// Lower median: the smallest value m with |{f <= m}| >= n/2.
    pub fn median(&self) -> i64 {
        assert!(!self.values.is_empty(), "median of an empty function");
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        sorted[(sorted.len() - 1) / 2]
    }
}

fn check_binding(g: &Graph, f: &VertexFunction) -> Result<(), SpreadError> {
    if f.len() != g.vertex_count() {
        return Err(SpreadError::SizeMismatch {
            got: f.len(),
            want: g.vertex_count(),
        });
    }
    Ok(())
}

/// Checks the Lipschitz condition; returns the first violating edge if any.
pub fn is_lipschitz(g: &Graph, f: &VertexFunction) -> Result<Option<(usize, usize)>, SpreadError> {
    check_binding(g, f)?;
    for &(u, v) in g.edges() {
        if (f.value(u) - f.value(v)).abs() > 1 {
            return Ok(Some((u, v)));
        }
    }
    Ok(None)
}

/// Lipschitz check for real-valued data.
pub fn is_lipschitz_real(g: &Graph, values: &[f64]) -> Result<Option<(usize, usize)>, SpreadError> {
    if values.len() != g.vertex_count() {
        return Err(SpreadError::SizeMismatch {
            got: values.len(),
            want: g.vertex_count(),
        });
    }
    for &(u, v) in g.edges() {
        if (values[u] - values[v]).abs() > 1.0 {
            return Ok(Some((u, v)));
        }
    }
    Ok(None)
}

/// Exact variance of f at a uniform random vertex:
/// (n * sum f^2 - (sum f)^2) / n^2, computed in 128-bit integers. Safe for
/// n <= 10^7 with |f| <= 10^4.
pub fn variance(g: &Graph, f: &VertexFunction) -> Result<Ratio, SpreadError> {
    check_binding(g, f)?;
    variance_of_values(f.values())
}

/// Exact variance of raw integer values (no graph binding check).
pub fn variance_of_values(values: &[i64]) -> Result<Ratio, SpreadError> {
    let n = values.len() as i128;
    if n == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let numer = variance_numerator(values)?;
    Ok(Ratio::new(numer, n * n))
}

/// n * sum f^2 - (sum f)^2: the variance numerator over denominator n^2.
pub(crate) fn variance_numerator(values: &[i64]) -> Result<i128, SpreadError> {
    let n = values.len() as i128;
    let mut sum: i128 = 0;
    let mut sum_sq: i128 = 0;
    for &x in values {
        let x = x as i128;
        sum += x;
        sum_sq = sum_sq
            .checked_add(x.checked_mul(x).ok_or(SpreadError::IntegerOverflow)?)
            .ok_or(SpreadError::IntegerOverflow)?;
    }
    let a = n.checked_mul(sum_sq).ok_or(SpreadError::IntegerOverflow)?;
    let b = sum.checked_mul(sum).ok_or(SpreadError::IntegerOverflow)?;
    a.checked_sub(b).ok_or(SpreadError::IntegerOverflow)
}

/// Variance of real-valued data at a uniform random vertex.
pub fn variance_real(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lipschitz_examples() {
        let g = Graph::cycle(5);
        let f = VertexFunction::from_distances(&g, 0).unwrap();
        assert_eq!(is_lipschitz(&g, &f).unwrap(), None);

        let k2 = Graph::complete(2);
        let bad = VertexFunction::new(vec![0, 2]);
        assert_eq!(is_lipschitz(&k2, &bad).unwrap(), Some((0, 1)));

        let flat = VertexFunction::constant(2, 7);
        assert_eq!(is_lipschitz(&k2, &flat).unwrap(), None);

        let wrong = VertexFunction::new(vec![0]);
        assert!(matches!(
            is_lipschitz(&k2, &wrong),
            Err(SpreadError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn distance_functions_are_lipschitz() {
        for g in [Graph::cycle(7), Graph::path(6), Graph::complete(5)] {
            for u in 0..g.vertex_count() {
                let f = VertexFunction::from_distances(&g, u).unwrap();
                assert_eq!(is_lipschitz(&g, &f).unwrap(), None);
            }
        }
    }

    #[test]
    fn variance_examples() {
        let k2 = Graph::complete(2);
        let f = VertexFunction::new(vec![0, 1]);
        assert_eq!(variance(&k2, &f).unwrap(), Ratio::new(1, 4));

        let p3 = Graph::path(3);
        let f = VertexFunction::new(vec![0, 1, 2]);
        assert_eq!(variance(&p3, &f).unwrap(), Ratio::new(2, 3));

        let flat = VertexFunction::constant(3, 5);
        assert_eq!(variance(&p3, &flat).unwrap(), Ratio::from_integer(0));
    }

    #[test]
    fn variance_matches_pairwise_identity() {
        // Var(f) = (1 / 2n^2) * sum_{x,y} (f(x) - f(y))^2.
        let values = [3i64, -1, 4, 1, 5, -9, 2, 6];
        let n = values.len() as i128;
        let mut pairwise: i128 = 0;
        for &x in &values {
            for &y in &values {
                pairwise += ((x - y) as i128).pow(2);
            }
        }
        let expect = Ratio::new(pairwise, 2 * n * n);
        assert_eq!(variance_of_values(&values).unwrap(), expect);
    }

    #[test]
    fn variance_shift_invariant() {
        let f = VertexFunction::new(vec![2, 4, 4, 7]);
        let g = Graph::complete(4);
        assert_eq!(
            variance(&g, &f).unwrap(),
            variance(&g, &f.shifted(100)).unwrap()
        );
    }

    #[test]
    fn variance_wide_values_do_not_overflow() {
        let values = vec![10_000i64; 1_000_000];
        assert_eq!(variance_of_values(&values).unwrap(), Ratio::from_integer(0));
        let mut values = vec![10_000i64; 500_000];
        values.extend(vec![-10_000i64; 500_000]);
        assert_eq!(
            variance_of_values(&values).unwrap(),
            Ratio::from_integer(100_000_000)
        );
    }

    #[test]
    fn median_examples() {
        assert_eq!(VertexFunction::new(vec![0, 0, 1]).median(), 0);
        assert_eq!(VertexFunction::new(vec![0, 1]).median(), 0);
        assert_eq!(VertexFunction::new(vec![4, 2, 3, 1]).median(), 2);
        assert_eq!(VertexFunction::new(vec![5]).median(), 5);
    }

    #[test]
    fn real_mode_helpers() {
        let k2 = Graph::complete(2);
        assert_eq!(is_lipschitz_real(&k2, &[0.0, 0.75]).unwrap(), None);
        assert_eq!(is_lipschitz_real(&k2, &[0.0, 1.5]).unwrap(), Some((0, 1)));
        let v = variance_real(&[0.0, 1.0]);
        assert!((v - 0.25).abs() < 1e-12);
    }
}
