//! Steepest-ascent local search for spread lower bounds. Restarts from
//! distance functions of random sources (optionally perturbed, optionally
//! augmented with caller-supplied seed functions) and climbs with strictly
//! improving single-vertex +-1 moves that preserve the Lipschitz property.

use super::{
    variance_numerator, Ratio, SpreadError, SpreadKind, SpreadResult, SpreadStats, VertexFunction,
};
use crate::gen::SplitMix64;
use crate::graph::Graph;

/// Hard cap on improving moves per restart.
const MOVE_CAP: u64 = 1_000_000;

/// Lower-bounds the spread of a connected graph. `restarts` counts the
/// random-seed climbs; the witness of the best climb is returned. Always
/// satisfies `result <= exact_spread(g)` and the witness is Lipschitz.
pub fn local_search_spread(
    g: &Graph,
    restarts: u32,
    seed: u64,
) -> Result<SpreadResult, SpreadError> {
    local_search_spread_seeded(g, restarts, seed, &[])
}

/// Like [`local_search_spread`] but also climbs from each function in
/// `extra_seeds` (e.g. a constructed witness), guaranteeing the result is at
/// least the variance of every supplied seed.
pub fn local_search_spread_seeded(
    g: &Graph,
    restarts: u32,
    seed: u64,
    extra_seeds: &[VertexFunction],
) -> Result<SpreadResult, SpreadError> {
    let n = g.vertex_count();
    if n == 0 || !g.is_connected() {
        return Err(SpreadError::DisconnectedGraph);
    }
    for f in extra_seeds {
        if f.len() != n {
            return Err(SpreadError::SizeMismatch {
                got: f.len(),
                want: n,
            });
        }
        if let Some(e) = super::is_lipschitz(g, f)? {
            return Err(SpreadError::NotLipschitz(e));
        }
    }

    let mut rng = SplitMix64::new(seed);
    let mut best_numer = i128::MIN;
    let mut best_values: Vec<i64> = vec![0; n];
    let mut total_moves: u64 = 0;
    let mut climbs: u32 = 0;

    let mut consider = |values: Vec<i64>, g: &Graph, total_moves: &mut u64| {
        let mut state = ClimbState::new(g, values);
        *total_moves += state.ascend();
        if state.numer > best_numer {
            best_numer = state.numer;
            best_values = state.values;
        }
    };

    for f in extra_seeds {
        consider(f.values().to_vec(), g, &mut total_moves);
        climbs += 1;
    }
    for restart in 0..restarts {
        let source = rng.next_below(n as u64) as usize;
        let f = VertexFunction::from_distances(g, source)?;
        let mut values = f.values().to_vec();
        // After the first climb, shake the seed with random feasible moves
        // so restarts explore different basins.
        if restart > 0 {
            perturb(g, &mut values, &mut rng, n / 4 + 8);
        }
        consider(values, g, &mut total_moves);
        climbs += 1;
    }

    let witness = VertexFunction::new(best_values);
    debug_assert_eq!(super::is_lipschitz(g, &witness).unwrap(), None);
    Ok(SpreadResult {
        kind: SpreadKind::LowerBound,
        value: Ratio::new(best_numer, (n as i128) * (n as i128)),
        witness: Some(witness),
        method: "local_search",
        stats: SpreadStats {
            restarts: climbs,
            moves: total_moves,
            ..Default::default()
        },
    })
}

/// Random feasible +-1 moves, not required to improve.
fn perturb(g: &Graph, values: &mut [i64], rng: &mut SplitMix64, attempts: usize) {
    let n = values.len();
    for _ in 0..attempts {
        let v = rng.next_below(n as u64) as usize;
        let step = if rng.next_u64() & 1 == 0 { 1 } else { -1 };
        let target = values[v] + step;
        if g.neighbors(v)
            .iter()
            .all(|&w| (values[w] - target).abs() <= 1)
        {
            values[v] = target;
        }
    }
}

/// One climb. Raising f(v) is feasible iff no neighbor sits below f(v), and
/// among feasible raises the gain is maximal at maximal f(v) (symmetrically
/// for lowering), so the steepest move always sits at an extreme of f. Two
/// heaps keyed by value track the candidates; entries go stale when their
/// vertex or a neighbor moves and are refreshed by re-pushing, so one move
/// costs O(deg^2 + deg log n) instead of a full vertex scan.
struct ClimbState<'g> {
    g: &'g Graph,
    values: Vec<i64>,
    min_nbr: Vec<i64>,
    max_nbr: Vec<i64>,
    sum: i128,
    numer: i128,
    /// Raise candidates: pop order is value descending, then vertex id.
    up: std::collections::BinaryHeap<(i64, std::cmp::Reverse<usize>)>,
    /// Lower candidates: pop order is value ascending, then vertex id.
    down: std::collections::BinaryHeap<std::cmp::Reverse<(i64, usize)>>,
}

impl<'g> ClimbState<'g> {
    fn new(g: &'g Graph, values: Vec<i64>) -> Self {
        let n = g.vertex_count();
        let mut min_nbr = vec![i64::MAX; n];
        let mut max_nbr = vec![i64::MIN; n];
        for v in 0..n {
            for &w in g.neighbors(v) {
                min_nbr[v] = min_nbr[v].min(values[w]);
                max_nbr[v] = max_nbr[v].max(values[w]);
            }
        }
        let sum: i128 = values.iter().map(|&x| x as i128).sum();
        let numer = variance_numerator(&values).expect("climb values stay small");
        let up = (0..n).map(|v| (values[v], std::cmp::Reverse(v))).collect();
        let down = (0..n).map(|v| std::cmp::Reverse((values[v], v))).collect();
        Self {
            g,
            values,
            min_nbr,
            max_nbr,
            sum,
            numer,
            up,
            down,
        }
    }

    /// Gain in the variance numerator from moving vertex v by step s:
    /// n(2 s f(v) + 1) - (2 s S + 1) where S is the current value sum.
    fn gain(&self, value: i64, step: i64) -> i128 {
        let n = self.values.len() as i128;
        let s = step as i128;
        n * (2 * s * value as i128 + 1) - (2 * s * self.sum + 1)
    }

    /// Best feasible raise candidate: maximal value, then smallest id.
    /// Stale entries (value changed since push) and currently infeasible
    /// ones are dropped; any event that could make them relevant again
    /// re-pushes the vertex.
    fn pop_up(&mut self) -> Option<usize> {
        while let Some(&(value, std::cmp::Reverse(v))) = self.up.peek() {
            self.up.pop();
            if self.values[v] != value {
                continue; // stale
            }
            if self.min_nbr[v] >= value {
                return Some(v);
            }
        }
        None
    }

    /// Best feasible lower candidate: minimal value, then smallest id.
    fn pop_down(&mut self) -> Option<usize> {
        while let Some(&std::cmp::Reverse((value, v))) = self.down.peek() {
            self.down.pop();
            if self.values[v] != value {
                continue;
            }
            if self.max_nbr[v] <= value {
                return Some(v);
            }
        }
        None
    }

    /// Drops accumulated stale entries by rebuilding both heaps.
    fn rebuild_heaps(&mut self) {
        let n = self.values.len();
        self.up = (0..n)
            .map(|v| (self.values[v], std::cmp::Reverse(v)))
            .collect();
        self.down = (0..n)
            .map(|v| std::cmp::Reverse((self.values[v], v)))
            .collect();
    }

    /// Steepest ascent until no strictly improving feasible move remains.
    fn ascend(&mut self) -> u64 {
        let mut moves = 0u64;
        let rebuild_at = 8 * self.values.len() + 64;
        while moves < MOVE_CAP {
            if self.up.len() > rebuild_at || self.down.len() > rebuild_at {
                self.rebuild_heaps();
            }
            let best_up = self.pop_up();
            let best_down = self.pop_down();
            let up_gain = best_up.map(|v| self.gain(self.values[v], 1));
            let down_gain = best_down.map(|v| self.gain(self.values[v], -1));
            let (v, step, gain) = match (up_gain, down_gain) {
                (Some(ug), Some(dg)) if ug >= dg => (best_up.unwrap(), 1, ug),
                (Some(ug), None) => (best_up.unwrap(), 1, ug),
                (_, Some(dg)) => (best_down.unwrap(), -1, dg),
                (None, None) => break,
            };
            // Re-queue the popped candidates: the loser stays a candidate,
            // and the winner's entry is refreshed by apply() anyway.
            if let Some(u) = best_up {
                self.up.push((self.values[u], std::cmp::Reverse(u)));
            }
            if let Some(w) = best_down {
                self.down.push(std::cmp::Reverse((self.values[w], w)));
            }
            if gain <= 0 {
                break;
            }
            self.apply(v, step);
            self.numer += gain;
            moves += 1;
        }
        debug_assert_eq!(self.numer, variance_numerator(&self.values).unwrap());
        moves
    }

    fn apply(&mut self, v: usize, step: i64) {
        self.values[v] += step;
        self.sum += step as i128;
        self.up.push((self.values[v], std::cmp::Reverse(v)));
        self.down.push(std::cmp::Reverse((self.values[v], v)));
        for &w in self.g.neighbors(v) {
            // The neighbor's feasibility may have flipped either way.
            self.up.push((self.values[w], std::cmp::Reverse(w)));
            self.down.push(std::cmp::Reverse((self.values[w], w)));
            // Recompute w's neighbor extremes from scratch.
            let mut lo = i64::MAX;
            let mut hi = i64::MIN;
            for &x in self.g.neighbors(w) {
                lo = lo.min(self.values[x]);
                hi = hi.max(self.values[x]);
            }
            self.min_nbr[w] = lo;
            self.max_nbr[w] = hi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::{exact_spread, is_lipschitz, variance};

    #[test]
    fn path_five_reaches_two() {
        let g = Graph::path(5);
        let res = local_search_spread(&g, 4, 11).unwrap();
        assert_eq!(res.value, Ratio::from_integer(2));
    }

    #[test]
    fn complete_six_reaches_quarter() {
        let g = Graph::complete(6);
        let res = local_search_spread(&g, 4, 3).unwrap();
        assert_eq!(res.value, Ratio::new(1, 4));
    }

    #[test]
    fn never_exceeds_exact_and_usually_matches() {
        use crate::gen::{derive_trial_seed, gen_gnp};
        let mut matches = 0;
        let mut total = 0;
        let mut t = 0u64;
        while total < 100 {
            t += 1;
            let n = 5 + (t % 8) as usize; // 5..=12
            let g = gen_gnp(n, 0.45, derive_trial_seed(700, t)).unwrap();
            if !g.is_connected() {
                continue;
            }
            total += 1;
            let exact = exact_spread(&g, None).unwrap().value;
            let local = local_search_spread(&g, 20, derive_trial_seed(701, t)).unwrap();
            assert!(
                local.value <= exact,
                "local {} > exact {} on trial {t}",
                local.value,
                exact
            );
            if local.value == exact {
                matches += 1;
            }
        }
        assert!(
            matches >= 90,
            "local search matched exact on only {matches}/100 small graphs"
        );
    }

    #[test]
    fn witness_is_lipschitz_and_attains_value() {
        let g = Graph::cycle(9);
        let res = local_search_spread(&g, 6, 5).unwrap();
        let w = res.witness.as_ref().unwrap();
        assert_eq!(is_lipschitz(&g, w).unwrap(), None);
        assert_eq!(variance(&g, w).unwrap(), res.value);
    }

    #[test]
    fn seeded_run_dominates_seed_variance() {
        let g = Graph::cycle(12);
        let seed_fn = VertexFunction::from_distances(&g, 0).unwrap();
        let seed_var = variance(&g, &seed_fn).unwrap();
        let res = local_search_spread_seeded(&g, 0, 1, &[seed_fn]).unwrap();
        assert!(res.value >= seed_var);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            local_search_spread(&g, 2, 0).unwrap_err(),
            SpreadError::DisconnectedGraph
        );
    }

    /// Reference steepest ascent that rescans every vertex per move, with
    /// the same tie-breaking as the heap implementation.
    fn scan_ascend(g: &Graph, mut values: Vec<i64>) -> Vec<i64> {
        let n = g.vertex_count();
        loop {
            let mut best_up: Option<usize> = None;
            let mut best_down: Option<usize> = None;
            for v in 0..n {
                let up_ok = g.neighbors(v).iter().all(|&w| values[w] >= values[v]);
                let down_ok = g.neighbors(v).iter().all(|&w| values[w] <= values[v]);
                if up_ok && best_up.is_none_or(|b| values[v] > values[b]) {
                    best_up = Some(v);
                }
                if down_ok && best_down.is_none_or(|b| values[v] < values[b]) {
                    best_down = Some(v);
                }
            }
            let sum: i128 = values.iter().map(|&x| x as i128).sum();
            let nn = n as i128;
            let gain = |v: usize, s: i128| nn * (2 * s * values[v] as i128 + 1) - (2 * s * sum + 1);
            let up = best_up.map(|v| (gain(v, 1), v));
            let down = best_down.map(|v| (gain(v, -1), v));
            let (v, step, g_val) = match (up, down) {
                (Some((ug, uv)), Some((dg, _))) if ug >= dg => (uv, 1, ug),
                (Some((ug, uv)), None) => (uv, 1, ug),
                (_, Some((dg, dv))) => (dv, -1, dg),
                (None, None) => break,
            };
            if g_val <= 0 {
                break;
            }
            values[v] += step;
        }
        values
    }

    #[test]
    fn heap_ascent_matches_scan_reference() {
        use crate::gen::{derive_trial_seed, gen_gnp};
        let mut compared = 0;
        for t in 0..40u64 {
            let n = 6 + (t % 20) as usize;
            let g = gen_gnp(n, 0.35, derive_trial_seed(4242, t)).unwrap();
            if !g.is_connected() {
                continue;
            }
            let seed_fn = VertexFunction::from_distances(&g, (t as usize) % n).unwrap();
            let mut state = ClimbState::new(&g, seed_fn.values().to_vec());
            state.ascend();
            let reference = scan_ascend(&g, seed_fn.values().to_vec());
            assert_eq!(state.values, reference, "trial {t}");
            compared += 1;
        }
        assert!(compared >= 25);
    }
}
