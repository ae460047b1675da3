//! Reduced-scale end-to-end checks mirroring the full acceptance suite, for
//! the `selfcheck` CLI command. Exact criteria run at full strictness on
//! smaller samples; the large Monte Carlo criteria run as smoke tests with
//! loosened sample counts (the full-scale versions live in the acceptance
//! test suite).

use crate::decompose::{excess, Decomposition};
use crate::expansion::{
    alpha_expander_check, beta_eta_check, cheeger_exact, cheeger_spectral_lower, CheckMode,
};
use crate::gen::{derive_trial_seed, gen_gnp, gen_regular, RegularMode};
use crate::graph::Graph;
use crate::spread::{
    complete_graph_spread, exact_spread, is_lipschitz, local_search_spread, three_level_function,
    upper_bound_diameter, Ratio,
};

/// Exhaustive reference spread: enumerates every integer Lipschitz function
/// with f(0) = 0 and all values in [-diam, diam], assigning vertices in
/// natural id order and checking edges directly; variances go through the
/// pairwise-difference identity. Fully independent of the BFS-ordered
/// interval solver and moment formula it cross-checks.
pub fn brute_force_spread(g: &Graph) -> Ratio {
    let n = g.vertex_count();
    assert!(n >= 1 && g.is_connected(), "oracle needs a connected graph");
    let diam = g.diameter().expect("connected") as i64;
    let mut values = vec![0i64; n];
    let mut best = i128::MIN;

    // Var(f) = sum over unordered pairs of (f(x) - f(y))^2, divided by n^2.
    fn pair_sum(values: &[i64]) -> i128 {
        let mut acc: i128 = 0;
        for (i, &x) in values.iter().enumerate() {
            for &y in &values[..i] {
                let d = (x - y) as i128;
                acc += d * d;
            }
        }
        acc
    }

    fn assign(g: &Graph, v: usize, diam: i64, values: &mut [i64], best: &mut i128) {
        if v == values.len() {
            *best = (*best).max(pair_sum(values));
            return;
        }
        let (lo, hi) = if v == 0 { (0, 0) } else { (-diam, diam) };
        'candidate: for c in lo..=hi {
            for &w in g.neighbors(v) {
                if w < v && (values[w] - c).abs() > 1 {
                    continue 'candidate;
                }
            }
            values[v] = c;
            assign(g, v + 1, diam, values, best);
        }
    }

    assign(g, 0, diam, &mut values, &mut best);
    Ratio::new(best, (n as i128) * (n as i128))
}

/// A connected G(n, p) sample, resampling with derived seeds until connected.
pub fn random_connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    for attempt in 0..10_000u64 {
        let g = gen_gnp(n, p, derive_trial_seed(seed, attempt)).expect("valid p");
        if g.is_connected() {
            return g;
        }
    }
    panic!("no connected G({n}, {p}) sample in 10000 attempts");
}

/// Uniform random labeled tree on n vertices (Pruefer decode).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    if n <= 1 {
        return Graph::new(n, []).unwrap();
    }
    if n == 2 {
        return Graph::new(2, [(0, 1)]).unwrap();
    }
    let mut rng = crate::gen::SplitMix64::new(seed);
    let code: Vec<usize> = (0..n - 2)
        .map(|_| rng.next_below(n as u64) as usize)
        .collect();
    let mut degree = vec![1usize; n];
    for &x in &code {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &code {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    Graph::new(n, edges).expect("Pruefer decode yields a tree")
}

/// A connected graph with average degree at most d: a random tree plus a
/// random number of extra edges within the degree budget 2|E| <= d n.
pub fn random_sparse_connected(n: usize, d: usize, seed: u64) -> Graph {
    assert!(d >= 2 && n >= 2);
    let tree = random_tree(n, seed);
    let budget = (d * n / 2).saturating_sub(n - 1);
    let mut rng = crate::gen::SplitMix64::new(derive_trial_seed(seed, 1));
    let extra = if budget == 0 {
        0
    } else {
        rng.next_below(budget as u64 + 1) as usize
    };
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    let mut have: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut added = 0;
    for _ in 0..extra * 20 + 20 {
        if added == extra {
            break;
        }
        let u = rng.next_below(n as u64) as usize;
        let v = rng.next_below(n as u64) as usize;
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if have.insert(key) {
            edges.push(key);
            added += 1;
        }
    }
    Graph::new(n, edges).expect("simple by construction")
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfCheckItem {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfCheckReport {
    pub items: Vec<SelfCheckItem>,
    pub all_pass: bool,
}

impl SelfCheckReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            out.push_str(&format!(
                "{} {} - {}\n",
                if item.pass { "PASS" } else { "FAIL" },
                item.name,
                item.detail
            ));
        }
        out.push_str(if self.all_pass {
            "selfcheck: all checks passed\n"
        } else {
            "selfcheck: FAILURES present\n"
        });
        out
    }
}

/// Runs all reduced checks. Pass/fail per item; never panics on check
/// failures.
pub fn selfcheck() -> SelfCheckReport {
    let items = vec![
        check_complete_exactness(),
        check_oracle_equivalence(),
        check_monotonicity_and_diameter(),
        check_three_level(),
        check_epsilon_construction(),
        check_regular_boundedness(),
        check_highdeg_trend(),
        check_expansion_suite(),
        check_level_tails(),
        check_decomposition_exactness(),
    ];
    let all_pass = items.iter().all(|i| i.pass);
    SelfCheckReport { items, all_pass }
}

fn check_complete_exactness() -> SelfCheckItem {
    for n in 2..=7 {
        let got = match exact_spread(&Graph::complete(n), None) {
            Ok(r) => r.value,
            Err(e) => {
                return SelfCheckItem {
                    name: "complete_exactness",
                    pass: false,
                    detail: e.to_string(),
                }
            }
        };
        if got != complete_graph_spread(n).unwrap() {
            return SelfCheckItem {
                name: "complete_exactness",
                pass: false,
                detail: format!("K_{n}: got {got}"),
            };
        }
    }
    SelfCheckItem {
        name: "complete_exactness",
        pass: true,
        detail: "K_2..K_7 exact".into(),
    }
}

fn check_oracle_equivalence() -> SelfCheckItem {
    let mut checked = 0;
    for t in 0..30u64 {
        let n = 4 + (t % 4) as usize;
        let g = random_connected_gnp(n, 0.5, derive_trial_seed(101, t));
        let solver = exact_spread(&g, None).unwrap().value;
        let oracle = brute_force_spread(&g);
        if solver != oracle {
            return SelfCheckItem {
                name: "oracle_equivalence",
                pass: false,
                detail: format!("n = {n}, trial {t}: solver {solver} vs oracle {oracle}"),
            };
        }
        checked += 1;
    }
    SelfCheckItem {
        name: "oracle_equivalence",
        pass: true,
        detail: format!("{checked} graphs agree"),
    }
}

fn check_monotonicity_and_diameter() -> SelfCheckItem {
    let mut checked = 0;
    for t in 0..30u64 {
        let n = 5 + (t % 4) as usize;
        let g = random_connected_gnp(n, 0.45, derive_trial_seed(202, t));
        let base = exact_spread(&g, None).unwrap().value;
        let ub = upper_bound_diameter(&g).unwrap().value;
        if base > ub {
            return SelfCheckItem {
                name: "monotonicity_diameter",
                pass: false,
                detail: format!("trial {t}: spread {base} above diameter bound {ub}"),
            };
        }
        if let Some(extended) = add_random_non_edge(&g, derive_trial_seed(203, t)) {
            let bigger = exact_spread(&extended, None).unwrap().value;
            if bigger > base {
                return SelfCheckItem {
                    name: "monotonicity_diameter",
                    pass: false,
                    detail: format!("trial {t}: adding an edge raised spread {base} -> {bigger}"),
                };
            }
        }
        checked += 1;
    }
    SelfCheckItem {
        name: "monotonicity_diameter",
        pass: true,
        detail: format!("{checked} graphs checked"),
    }
}

/// The input graph plus one uniformly chosen absent edge; `None` if complete.
pub fn add_random_non_edge(g: &Graph, seed: u64) -> Option<Graph> {
    let n = g.vertex_count();
    let mut non_edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                non_edges.push((u, v));
            }
        }
    }
    if non_edges.is_empty() {
        return None;
    }
    let mut rng = crate::gen::SplitMix64::new(seed);
    let pick = non_edges[rng.next_below(non_edges.len() as u64) as usize];
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    edges.push(pick);
    Some(Graph::new(n, edges).expect("adding a non-edge keeps the graph simple"))
}

fn check_three_level() -> SelfCheckItem {
    let mut built = 0;
    let mut infeasible = 0;
    for d in [2usize, 3] {
        for t in 0..10u64 {
            let n = 3 * d + 4 + (t % 5) as usize * 3;
            let g = random_sparse_connected(n, d, derive_trial_seed(300 + d as u64, t));
            match three_level_function(&g, d) {
                Ok(res) => {
                    built += 1;
                    if is_lipschitz(&g, &res.function).unwrap().is_some() {
                        return SelfCheckItem {
                            name: "three_level",
                            pass: false,
                            detail: "non-Lipschitz output".into(),
                        };
                    }
                    if res.variance < res.bound {
                        return SelfCheckItem {
                            name: "three_level",
                            pass: false,
                            detail: format!("variance {} below bound {}", res.variance, res.bound),
                        };
                    }
                }
                Err(crate::spread::SpreadError::ConstructionInfeasible(_)) => infeasible += 1,
                Err(e) => {
                    return SelfCheckItem {
                        name: "three_level",
                        pass: false,
                        detail: e.to_string(),
                    }
                }
            }
        }
    }
    SelfCheckItem {
        name: "three_level",
        pass: built > 0,
        detail: format!("{built} constructions verified, {infeasible} infeasible"),
    }
}

fn check_epsilon_construction() -> SelfCheckItem {
    // Smallest round scale where eps = n^{-1/4} leaves a pattern height
    // r >= 3 at delta = 0.05.
    let n = 40_000usize;
    let eps = (n as f64).powf(-0.25);
    let mut ok = 0;
    let mut stars = 0;
    for t in 0..3u64 {
        let g = gen_gnp(n, (1.0 + eps) / n as f64, derive_trial_seed(41, t)).unwrap();
        let dec = Decomposition::analyze(&g);
        let kp = match crate::spread::kernel_path_function(&dec, eps, 0.05) {
            Ok(kp) => kp,
            Err(e) => {
                return SelfCheckItem {
                    name: "epsilon_construction",
                    pass: false,
                    detail: e.to_string(),
                }
            }
        };
        if is_lipschitz(&dec.h, &kp.function).unwrap().is_some() {
            return SelfCheckItem {
                name: "epsilon_construction",
                pass: false,
                detail: "non-Lipschitz kernel-path".into(),
            };
        }
        let bs = crate::spread::b_sets(&dec, &kp.function, kp.r, eps).unwrap();
        if bs.star_all() {
            stars += 1;
        }
        ok += 1;
    }
    SelfCheckItem {
        name: "epsilon_construction",
        pass: ok == 3,
        detail: format!("{ok}/3 constructions Lipschitz, {stars}/3 pass occupancy"),
    }
}

fn check_regular_boundedness() -> SelfCheckItem {
    let median_at = |n: usize, seed: u64| -> Option<f64> {
        let mut vals = Vec::new();
        for t in 0..5u64 {
            let s = gen_regular(n, 3, derive_trial_seed(seed, t), RegularMode::Reject).ok()?;
            let dec = Decomposition::analyze(&s.graph);
            let ls = local_search_spread(&dec.h, 4, derive_trial_seed(seed + 1, t)).ok()?;
            vals.push(ls.value_f64());
        }
        super::median_f64(&vals)
    };
    match (median_at(100, 500), median_at(1000, 600)) {
        (Some(small), Some(big)) => SelfCheckItem {
            name: "regular_boundedness",
            pass: big <= 2.0 * small,
            detail: format!("median at n=100: {small:.3}, at n=1000: {big:.3}"),
        },
        _ => SelfCheckItem {
            name: "regular_boundedness",
            pass: false,
            detail: "trial failed".into(),
        },
    }
}

fn check_highdeg_trend() -> SelfCheckItem {
    let n = 500usize;
    let mut medians = Vec::new();
    for (i, &d) in [4usize, 12, 24].iter().enumerate() {
        let mode = if d <= 8 {
            RegularMode::Reject
        } else {
            RegularMode::Erase
        };
        let mut vals = Vec::new();
        for t in 0..5u64 {
            let s = match gen_regular(n, d, derive_trial_seed(700 + i as u64, t), mode) {
                Ok(s) => s,
                Err(e) => {
                    return SelfCheckItem {
                        name: "highdeg_trend",
                        pass: false,
                        detail: e.to_string(),
                    }
                }
            };
            let dec = Decomposition::analyze(&s.graph);
            let mut seeds = Vec::new();
            if let Ok(tl) = three_level_function(&dec.h, d) {
                seeds.push(tl.function);
            }
            match crate::spread::local_search_spread_seeded(
                &dec.h,
                3,
                derive_trial_seed(800, t),
                &seeds,
            ) {
                Ok(ls) => vals.push(ls.value_f64()),
                Err(e) => {
                    return SelfCheckItem {
                        name: "highdeg_trend",
                        pass: false,
                        detail: e.to_string(),
                    }
                }
            }
        }
        medians.push(super::median_f64(&vals).unwrap());
    }
    // Loose smoke thresholds; the strict version runs in the acceptance suite.
    let pass = medians[2] <= medians[0] && medians[2] <= 0.5;
    SelfCheckItem {
        name: "highdeg_trend",
        pass,
        detail: format!("medians at d = 4, 12, 24: {medians:?}"),
    }
}

fn check_expansion_suite() -> SelfCheckItem {
    if cheeger_exact(&Graph::complete(4), None).unwrap().0 != Ratio::new(2, 3)
        || cheeger_exact(&Graph::cycle(4), None).unwrap().0 != Ratio::new(1, 2)
        || cheeger_exact(&Graph::cycle(6), None).unwrap().0 != Ratio::new(1, 3)
    {
        return SelfCheckItem {
            name: "expansion_suite",
            pass: false,
            detail: "cheeger closed forms".into(),
        };
    }
    for t in 0..10u64 {
        let n = 10 + 2 * (t as usize % 4);
        let s = gen_regular(n, 3, derive_trial_seed(900, t), RegularMode::Reject).unwrap();
        if !s.graph.is_connected() {
            continue;
        }
        let (phi, _) = cheeger_exact(&s.graph, None).unwrap();
        let alpha = *phi.numer() as f64 / *phi.denom() as f64;
        let cert = alpha_expander_check(&s.graph, alpha, CheckMode::Exact).unwrap();
        if !cert.verified {
            return SelfCheckItem {
                name: "expansion_suite",
                pass: false,
                detail: format!("regular graph with Phi = {phi} failed its alpha certificate"),
            };
        }
        let lower = cheeger_spectral_lower(&s.graph, 1e-6).unwrap();
        if lower > alpha + 1e-6 {
            return SelfCheckItem {
                name: "expansion_suite",
                pass: false,
                detail: format!("spectral bound {lower} above exact {alpha}"),
            };
        }
    }
    SelfCheckItem {
        name: "expansion_suite",
        pass: true,
        detail: "cheeger values and certificates agree".into(),
    }
}

fn check_level_tails() -> SelfCheckItem {
    // 15-regular graphs on 30 vertices with verified (3, 1/3)-expansion:
    // every local-search witness obeys the geometric level bounds.
    let (beta, eta, n) = (3.0f64, 1.0 / 3.0, 30usize);
    let mut verified = 0;
    for t in 0..5u64 {
        let s = gen_regular(n, 15, derive_trial_seed(1000, t), RegularMode::Erase).unwrap();
        if !s.graph.is_connected() {
            continue;
        }
        let cert = beta_eta_check(&s.graph, beta, eta, CheckMode::Exact);
        if !cert.verified {
            continue;
        }
        let ls = local_search_spread(&s.graph, 3, derive_trial_seed(1001, t)).unwrap();
        let w = ls.witness.unwrap();
        if let Some(detail) = crate::spread::beta_level_bounds_violation(&w, beta) {
            return SelfCheckItem {
                name: "level_tails",
                pass: false,
                detail,
            };
        }
        verified += 1;
    }
    SelfCheckItem {
        name: "level_tails",
        pass: verified > 0,
        detail: format!("{verified} expander witnesses within geometric bounds"),
    }
}

fn check_decomposition_exactness() -> SelfCheckItem {
    let mut checked = 0;
    for t in 0..30u64 {
        let g = gen_gnp(800, 1.8 / 800.0, derive_trial_seed(1100, t)).unwrap();
        let dec = Decomposition::analyze(&g);
        if dec.core.is_empty() {
            continue;
        }
        let (core_graph, _) = dec.h.induced_subgraph(&dec.core);
        let kappa_core = excess(&core_graph).unwrap();
        let kappa_kernel = dec.kernel_excess().unwrap();
        let lengths = dec.kernel.as_ref().unwrap().total_length();
        if kappa_core != dec.excess
            || kappa_kernel != dec.excess
            || lengths != dec.core_edge_count()
        {
            return SelfCheckItem {
                name: "decomposition_exactness",
                pass: false,
                detail: format!(
                    "trial {t}: kappa H/C/K = {}/{kappa_core}/{kappa_kernel}, lengths {lengths} vs {}",
                    dec.excess,
                    dec.core_edge_count()
                ),
            };
        }
        checked += 1;
    }
    SelfCheckItem {
        name: "decomposition_exactness",
        pass: checked >= 15,
        detail: format!("{checked} supercritical samples exact"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_closed_forms() {
        assert_eq!(brute_force_spread(&Graph::complete(4)), Ratio::new(1, 4));
        assert_eq!(brute_force_spread(&Graph::complete(5)), Ratio::new(24, 100));
        assert_eq!(brute_force_spread(&Graph::path(3)), Ratio::new(2, 3));
        assert_eq!(brute_force_spread(&Graph::cycle(4)), Ratio::new(1, 2));
    }

    #[test]
    fn non_edge_addition() {
        let g = Graph::path(4);
        let bigger = add_random_non_edge(&g, 7).unwrap();
        assert_eq!(bigger.edge_count(), 4);
        assert!(add_random_non_edge(&Graph::complete(4), 7).is_none());
    }
}
