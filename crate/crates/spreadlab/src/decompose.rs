//! Structural decomposition of the giant component: 2-core, kernel with edge
//! lengths, pendant trees with attachments, rooted forest, excess, degree
//! classes, and the interval predicate comparing observed sizes with their
//! asymptotic centers 2*eps*n, 2*eps^2*n, (4/3)*eps^3*n and (2/3)*eps^3*n.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, LengthedEdge, LengthedMultiGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("2-core is empty")]
    EmptyCore,
    #[error("delta must lie in (0, 1/10)")]
    DeltaOutOfRange,
}

/// Vertex set of the largest component; ties broken by smallest contained id.
pub fn giant_component(g: &Graph) -> Vec<usize> {
    g.connected_components()
        .into_iter()
        .next()
        .unwrap_or_default()
}

/// Iteratively deletes vertices of degree <= 1 until minimum degree >= 2.
/// Returns the sorted surviving set, empty when `h` is a tree.
pub fn two_core(h: &Graph) -> Vec<usize> {
    let n = h.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &w in h.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] <= 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

/// Contracts the core to its kernel: vertices of core-degree >= 3 stay, each
/// maximal degree-2 chain becomes one multigraph edge carrying its path and
/// length. A core component that is a bare cycle becomes a loop of length
/// equal to the cycle size, anchored at its minimum-id vertex.
///
/// The returned multigraph lives in the ambient id space of `h`; only core
/// vertices appear as endpoints.
pub fn kernel(h: &Graph, core: &[usize]) -> Result<LengthedMultiGraph, DecomposeError> {
    if core.is_empty() {
        return Err(DecomposeError::EmptyCore);
    }
    let n = h.vertex_count();
    let mut in_core = vec![false; n];
    for &v in core {
        in_core[v] = true;
    }
    // Degree within the core.
    let core_deg = |v: usize| h.neighbors(v).iter().filter(|&&w| in_core[w]).count();
    let mut is_branch = vec![false; n];
    for &v in core {
        debug_assert!(core_deg(v) >= 2, "core must have min degree 2");
        is_branch[v] = core_deg(v) >= 3;
    }

    // Walk from `from` across the core edge (from, to) through degree-2
    // vertices until hitting a branch vertex (or `stop` for bare cycles).
    let walk =
        |from: usize, to: usize, stop_at: Option<usize>, used: &mut UsedEdges| -> Vec<usize> {
            let mut path = vec![from, to];
            used.mark(from, to);
            let (mut prev, mut cur) = (from, to);
            loop {
                if is_branch[cur] || Some(cur) == stop_at {
                    break;
                }
                let next = h
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&w| in_core[w] && w != prev)
                    .expect("degree-2 core vertex has a second core neighbor");
                used.mark(cur, next);
                path.push(next);
                prev = cur;
                cur = next;
            }
            path
        };

    let mut used = UsedEdges::new(h);
    let mut edges: Vec<LengthedEdge> = Vec::new();
    for &v in core {
        if !is_branch[v] {
            continue;
        }
        for &w in h.neighbors(v) {
            if in_core[w] && !used.is_marked(v, w) {
                let path = walk(v, w, None, &mut used);
                let end = *path.last().unwrap();
                edges.push(LengthedEdge {
                    u: v,
                    v: end,
                    length: path.len() - 1,
                    path,
                });
            }
        }
    }
    // Remaining unvisited core vertices lie on bare cycles: anchor a loop at
    // each cycle's min-id vertex.
    let mut seen: Vec<bool> = (0..n).map(|v| !in_core[v]).collect();
    for e in &edges {
        for &v in &e.path {
            seen[v] = true;
        }
    }
    for &v in core {
        if seen[v] {
            continue;
        }
        // `core` is sorted ascending, so the first unseen vertex of the
        // cycle is its minimum id.
        let first = h
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| in_core[w])
            .expect("cycle vertex has core neighbors");
        let path = walk(v, first, Some(v), &mut used);
        debug_assert_eq!(*path.last().unwrap(), v);
        for &x in &path {
            seen[x] = true;
        }
        edges.push(LengthedEdge {
            u: v,
            v,
            length: path.len() - 1,
            path,
        });
    }
    Ok(LengthedMultiGraph::new(n, edges))
}

/// Tracks which undirected core edges a kernel walk has consumed.
struct UsedEdges {
    marks: std::collections::HashSet<(usize, usize)>,
}

impl UsedEdges {
    fn new(h: &Graph) -> Self {
        Self {
            marks: std::collections::HashSet::with_capacity(h.edge_count()),
        }
    }
    fn mark(&mut self, u: usize, v: usize) {
        self.marks.insert((u.min(v), u.max(v)));
    }
    fn is_marked(&self, u: usize, v: usize) -> bool {
        self.marks.contains(&(u.min(v), u.max(v)))
    }
}

/// A pendant tree: a component of H minus its core, hooked to the core by
/// exactly one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PendantTree {
    /// Sorted tree vertices (excluding the core).
    pub vertices: Vec<usize>,
    /// The core vertex the tree attaches to.
    pub attachment: usize,
    /// The unique edge (tree vertex, core vertex) joining tree and core.
    pub attachment_edge: (usize, usize),
}

/// Components of `h` minus the core, each with its unique core attachment,
/// sorted by size descending then smallest vertex id.
pub fn pendant_trees(h: &Graph, core: &[usize]) -> Result<Vec<PendantTree>, DecomposeError> {
    if core.is_empty() {
        return Err(DecomposeError::EmptyCore);
    }
    let n = h.vertex_count();
    let mut in_core = vec![false; n];
    for &v in core {
        in_core[v] = true;
    }
    let mut visited = vec![false; n];
    let mut trees = Vec::new();
    for start in 0..n {
        if in_core[start] || visited[start] {
            continue;
        }
        let mut members = vec![start];
        let mut attach: Option<(usize, usize)> = None;
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in h.neighbors(u) {
                if in_core[w] {
                    debug_assert!(
                        attach.is_none() || attach == Some((u, w)),
                        "pendant tree must attach by exactly one edge"
                    );
                    attach = Some((u, w));
                } else if !visited[w] {
                    visited[w] = true;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        let (tree_v, core_v) = attach.expect("component of connected H \\ core touches the core");
        trees.push(PendantTree {
            vertices: members,
            attachment: core_v,
            attachment_edge: (tree_v, core_v),
        });
    }
    trees.sort_by(|a, b| {
        b.vertices
            .len()
            .cmp(&a.vertices.len())
            .then(a.vertices[0].cmp(&b.vertices[0]))
    });
    Ok(trees)
}

/// For each core vertex v, the tree containing v once all core edges are
/// deleted: v itself plus every pendant tree attached at v. Returned sorted
/// by core vertex id.
pub fn rooted_pendant_forest(
    h: &Graph,
    core: &[usize],
) -> Result<Vec<(usize, Vec<usize>)>, DecomposeError> {
    let trees = pendant_trees(h, core)?;
    let mut forest: Vec<(usize, Vec<usize>)> = core.iter().map(|&v| (v, vec![v])).collect();
    forest.sort_by_key(|&(v, _)| v);
    for t in trees {
        let slot = forest
            .binary_search_by_key(&t.attachment, |&(r, _)| r)
            .expect("attachment is a core vertex");
        forest[slot].1.extend_from_slice(&t.vertices);
    }
    for (_, members) in &mut forest {
        members.sort_unstable();
    }
    Ok(forest)
}

/// Excess |E| - |V| of a connected graph.
pub fn excess(g: &Graph) -> Result<i64, DecomposeError> {
    if !g.is_connected() || g.vertex_count() == 0 {
        return Err(DecomposeError::DisconnectedGraph);
    }
    Ok(g.edge_count() as i64 - g.vertex_count() as i64)
}

/// Histogram of vertex degrees: entry i counts the vertices of degree i.
pub fn degree_class_sizes(g: &Graph) -> Vec<usize> {
    let max_deg = (0..g.vertex_count())
        .map(|v| g.degree(v))
        .max()
        .unwrap_or(0);
    let mut hist = vec![0usize; max_deg + 1];
    for v in 0..g.vertex_count() {
        hist[g.degree(v)] += 1;
    }
    hist
}

/// Full decomposition of the largest component of a graph. Vertex ids in
/// `core`, `kernel` and the trees are local to `h` (the giant component
/// relabeled 0..|H|-1); `giant_map` sends them back to the source graph.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Vertex count of the source graph.
    pub source_n: usize,
    /// Edge count of the source graph.
    pub source_m: usize,
    /// The giant component as a standalone graph (local ids).
    pub h: Graph,
    /// Local id -> source id.
    pub giant_map: Vec<usize>,
    /// Sorted core vertices (local ids); empty when H is a tree.
    pub core: Vec<usize>,
    /// Kernel multigraph in the ambient space of `h`; `None` iff the core is
    /// empty.
    pub kernel: Option<LengthedMultiGraph>,
    /// Endpoints of kernel edges: degree->=3 core vertices plus bare-cycle
    /// anchors.
    pub kernel_vertices: Vec<usize>,
    pub pendant_trees: Vec<PendantTree>,
    /// Core vertex -> vertices of its tree after deleting core edges.
    pub rooted_forest: Vec<(usize, Vec<usize>)>,
    /// Excess |E(H)| - |V(H)|.
    pub excess: i64,
    /// Degree histogram of the source graph.
    pub degree_class_sizes: Vec<usize>,
}

impl Decomposition {
    pub fn analyze(g: &Graph) -> Self {
        let giant = giant_component(g);
        let (h, giant_map) = g.induced_subgraph(&giant);
        let core = two_core(&h);
        let (kernel_mg, kernel_vertices, pendants, forest) = if core.is_empty() {
            (None, Vec::new(), Vec::new(), Vec::new())
        } else {
            let k = kernel(&h, &core).expect("nonempty core");
            let kv = k.active_vertices();
            let pt = pendant_trees(&h, &core).expect("nonempty core");
            let rf = rooted_pendant_forest(&h, &core).expect("nonempty core");
            (Some(k), kv, pt, rf)
        };
        let excess = h.edge_count() as i64 - h.vertex_count() as i64;
        Decomposition {
            source_n: g.vertex_count(),
            source_m: g.edge_count(),
            giant_map,
            core,
            kernel: kernel_mg,
            kernel_vertices,
            pendant_trees: pendants,
            rooted_forest: forest,
            excess,
            degree_class_sizes: degree_class_sizes(g),
            h,
        }
    }

    pub fn giant_size(&self) -> usize {
        self.h.vertex_count()
    }

    pub fn core_size(&self) -> usize {
        self.core.len()
    }

    pub fn kernel_size(&self) -> usize {
        self.kernel_vertices.len()
    }

    /// Edge count of the core subgraph (equals the kernel's total length).
    pub fn core_edge_count(&self) -> usize {
        let mut in_core = vec![false; self.h.vertex_count()];
        for &v in &self.core {
            in_core[v] = true;
        }
        self.h
            .edges()
            .iter()
            .filter(|&&(u, v)| in_core[u] && in_core[v])
            .count()
    }

    /// Excess of the kernel, counting multi-edges: |E(K)| - |V(K)|.
    pub fn kernel_excess(&self) -> Option<i64> {
        self.kernel
            .as_ref()
            .map(|k| k.edge_count() as i64 - self.kernel_vertices.len() as i64)
    }

    pub fn max_pendant_tree_size(&self) -> usize {
        self.pendant_trees.first().map_or(0, |t| t.vertices.len())
    }
}

/// One interval check of the `behaves` predicate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IntervalCheck {
    pub observed: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

fn interval_check(observed: f64, center_coeff: f64, delta: f64, scale: f64) -> IntervalCheck {
    let lo = (center_coeff - delta) * scale;
    let hi = (center_coeff + delta) * scale;
    IntervalCheck {
        observed,
        lo,
        hi,
        pass: lo <= observed && observed <= hi,
    }
}

/// Outcome of the four `behaves` interval checks.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BehaviorReport {
    pub delta: f64,
    pub eps: f64,
    pub giant: IntervalCheck,
    pub core: IntervalCheck,
    pub kernel: IntervalCheck,
    pub excess: IntervalCheck,
    pub behaves: bool,
}

/// Checks |V(H)| against (2 +- delta) eps n, |V(C)| against (2 +- delta)
/// eps^2 n, |V(K)| against (4/3 +- delta) eps^3 n and the excess against
/// (2/3 +- delta) eps^3 n. `n` and `eps` are model parameters of the source
/// graph, not inferred.
pub fn behaves(
    dec: &Decomposition,
    n: usize,
    eps: f64,
    delta: f64,
) -> Result<BehaviorReport, DecomposeError> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(DecomposeError::DeltaOutOfRange);
    }
    let nf = n as f64;
    let giant = interval_check(dec.giant_size() as f64, 2.0, delta, eps * nf);
    let core = interval_check(dec.core_size() as f64, 2.0, delta, eps * eps * nf);
    let kernel = interval_check(dec.kernel_size() as f64, 4.0 / 3.0, delta, eps.powi(3) * nf);
    let excess = interval_check(dec.excess as f64, 2.0 / 3.0, delta, eps.powi(3) * nf);
    let behaves = giant.pass && core.pass && kernel.pass && excess.pass;
    Ok(BehaviorReport {
        delta,
        eps,
        giant,
        core,
        kernel,
        excess,
        behaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two hubs joined by three internally disjoint paths of lengths 2, 3, 4.
    /// 8 vertices, 9 edges. Hubs are 0 and 1.
    fn theta_graph() -> Graph {
        Graph::new(
            8,
            [
                (0, 2),
                (2, 1), // length 2
                (0, 3),
                (3, 4),
                (4, 1), // length 3
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 1), // length 4
            ],
        )
        .unwrap()
    }

    #[test]
    fn giant_picks_largest_then_min_id() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(giant_component(&g), vec![0, 1, 2]);
        let k2 = Graph::complete(2);
        assert_eq!(giant_component(&k2), vec![0, 1]);
    }

    #[test]
    fn two_core_of_tree_is_empty() {
        let star = Graph::new(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert!(two_core(&star).is_empty());
    }

    #[test]
    fn two_core_cycle_with_pendant() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|v| (v, (v + 1) % 5)).collect();
        edges.push((0, 5));
        let g = Graph::new(6, edges).unwrap();
        assert_eq!(two_core(&g), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn two_core_theta_is_everything() {
        let g = theta_graph();
        assert_eq!(two_core(&g), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn two_core_min_degree_and_maximality() {
        let g = theta_graph();
        let core = two_core(&g);
        let (sub, _) = g.induced_subgraph(&core);
        for v in 0..sub.vertex_count() {
            assert!(sub.degree(v) >= 2);
        }
    }

    #[test]
    fn kernel_of_theta() {
        let g = theta_graph();
        let core = two_core(&g);
        let k = kernel(&g, &core).unwrap();
        assert_eq!(k.active_vertices(), vec![0, 1]);
        assert_eq!(k.edge_count(), 3);
        let mut lengths: Vec<usize> = k.edges().iter().map(|e| e.length).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, vec![2, 3, 4]);
        assert_eq!(k.total_length(), 9);
    }

    #[test]
    fn kernel_of_bare_cycle_is_a_loop() {
        let g = Graph::cycle(8);
        let core = two_core(&g);
        let k = kernel(&g, &core).unwrap();
        assert_eq!(k.edge_count(), 1);
        let e = &k.edges()[0];
        assert_eq!((e.u, e.v, e.length), (0, 0, 8));
        assert_eq!(k.active_vertices(), vec![0]);
    }

    #[test]
    fn kernel_empty_core_errors() {
        let g = Graph::path(4);
        assert_eq!(kernel(&g, &[]).unwrap_err(), DecomposeError::EmptyCore);
    }

    #[test]
    fn kernel_paths_reconstruct_core_edges() {
        let g = theta_graph();
        let core = two_core(&g);
        let k = kernel(&g, &core).unwrap();
        let mut rebuilt: Vec<(usize, usize)> = Vec::new();
        for e in k.edges() {
            for w in e.path.windows(2) {
                rebuilt.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        rebuilt.sort_unstable();
        let mut core_edges: Vec<(usize, usize)> = g.edges().to_vec();
        core_edges.sort_unstable();
        assert_eq!(rebuilt, core_edges);
    }

    #[test]
    fn pendant_trees_examples() {
        // C_5 with one pendant vertex at 0.
        let mut edges: Vec<(usize, usize)> = (0..5).map(|v| (v, (v + 1) % 5)).collect();
        edges.push((0, 5));
        let g = Graph::new(6, edges).unwrap();
        let core = two_core(&g);
        let trees = pendant_trees(&g, &core).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].vertices, vec![5]);
        assert_eq!(trees[0].attachment, 0);

        // C_5 plus a path of 3 hanging off vertex 2.
        let mut edges: Vec<(usize, usize)> = (0..5).map(|v| (v, (v + 1) % 5)).collect();
        edges.extend([(2, 5), (5, 6), (6, 7)]);
        let g = Graph::new(8, edges).unwrap();
        let trees = pendant_trees(&g, &two_core(&g)).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].vertices, vec![5, 6, 7]);
        assert_eq!(trees[0].attachment, 2);

        // A star has no core.
        let star = Graph::new(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        assert_eq!(
            pendant_trees(&star, &two_core(&star)).unwrap_err(),
            DecomposeError::EmptyCore
        );
    }

    #[test]
    fn rooted_forest_partitions_h() {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|v| (v, (v + 1) % 5)).collect();
        edges.push((3, 5));
        let g = Graph::new(6, edges).unwrap();
        let core = two_core(&g);
        let forest = rooted_pendant_forest(&g, &core).unwrap();
        let t3 = forest.iter().find(|&&(v, _)| v == 3).unwrap();
        assert_eq!(t3.1, vec![3, 5]);
        let total: usize = forest.iter().map(|(_, t)| t.len()).sum();
        assert_eq!(total, 6);
        let max_star: usize = forest.iter().map(|(_, t)| t.len()).max().unwrap();
        let trees = pendant_trees(&g, &core).unwrap();
        let max_pendant = trees.iter().map(|t| t.vertices.len()).max().unwrap();
        assert!(max_star >= max_pendant);
    }

    #[test]
    fn excess_examples() {
        assert_eq!(excess(&Graph::path(5)).unwrap(), -1);
        assert_eq!(excess(&Graph::cycle(6)).unwrap(), 0);
        assert_eq!(excess(&theta_graph()).unwrap(), 1);
        assert!(excess(&Graph::new(2, []).unwrap()).is_err());
    }

    #[test]
    fn degree_classes() {
        let hist = degree_class_sizes(&Graph::complete(4));
        assert_eq!(hist, vec![0, 0, 0, 4]);
        let hist = degree_class_sizes(&Graph::new(3, []).unwrap());
        assert_eq!(hist, vec![3]);
    }

    #[test]
    fn excess_agrees_across_h_core_kernel() {
        let g = theta_graph();
        let dec = Decomposition::analyze(&g);
        assert_eq!(dec.excess, 1);
        let (core_graph, _) = dec.h.induced_subgraph(&dec.core);
        assert_eq!(excess(&core_graph).unwrap(), 1);
        assert_eq!(dec.kernel_excess(), Some(1));
        assert_eq!(
            dec.kernel.as_ref().unwrap().total_length(),
            dec.core_edge_count()
        );
    }

    #[test]
    fn decomposition_of_tree_has_no_core() {
        let g = Graph::path(7);
        let dec = Decomposition::analyze(&g);
        assert!(dec.core.is_empty());
        assert!(dec.kernel.is_none());
        assert_eq!(dec.excess, -1);
        assert_eq!(dec.max_pendant_tree_size(), 0);
    }

    #[test]
    fn behaves_at_centers_and_off_center() {
        let n = 1_000_000usize;
        let eps = 0.05;
        // Synthetic decomposition hitting the asymptotic centers exactly.
        let dec = synthetic_dec(
            n,
            2.0 * eps * n as f64,
            2.0 * eps * eps * n as f64,
            (4.0 / 3.0) * eps.powi(3) * n as f64,
            (2.0 / 3.0) * eps.powi(3) * n as f64,
        );
        let rep = behaves(&dec, n, eps, 0.05).unwrap();
        assert!(rep.behaves, "{rep:?}");

        let dec = synthetic_dec(
            n,
            3.0 * eps * n as f64,
            2.0 * eps * eps * n as f64,
            (4.0 / 3.0) * eps.powi(3) * n as f64,
            (2.0 / 3.0) * eps.powi(3) * n as f64,
        );
        let rep = behaves(&dec, n, eps, 0.05).unwrap();
        assert!(!rep.giant.pass);
        assert!(!rep.behaves);

        assert_eq!(
            behaves(&dec, n, eps, 0.2).unwrap_err(),
            DecomposeError::DeltaOutOfRange
        );
    }

    /// Builds a Decomposition whose size accessors report the given values.
    /// Only the fields consulted by `behaves` are meaningful.
    fn synthetic_dec(n: usize, giant: f64, core: f64, kernel: f64, excess: f64) -> Decomposition {
        let giant = giant.round() as usize;
        let core_n = core.round() as usize;
        let kernel_n = kernel.round() as usize;
        Decomposition {
            source_n: n,
            source_m: 0,
            h: Graph::new(giant, []).unwrap(),
            giant_map: (0..giant).collect(),
            core: (0..core_n).collect(),
            kernel: None,
            kernel_vertices: (0..kernel_n).collect(),
            pendant_trees: Vec::new(),
            rooted_forest: Vec::new(),
            excess: excess.round() as i64,
            degree_class_sizes: Vec::new(),
        }
    }

    #[test]
    fn kappa_invariant_on_random_supercritical_samples() {
        use crate::gen::{derive_trial_seed, gen_gnp};
        let mut checked = 0;
        for t in 0..30u64 {
            let g = gen_gnp(600, 2.0 / 600.0, derive_trial_seed(2024, t)).unwrap();
            let dec = Decomposition::analyze(&g);
            if dec.core.is_empty() {
                continue;
            }
            checked += 1;
            let (core_graph, _) = dec.h.induced_subgraph(&dec.core);
            assert_eq!(excess(&core_graph).unwrap(), dec.excess);
            assert_eq!(dec.kernel_excess().unwrap(), dec.excess);
            assert_eq!(
                dec.kernel.as_ref().unwrap().total_length(),
                dec.core_edge_count()
            );
            // Pendant trees and core partition V(H).
            let pendant_total: usize = dec.pendant_trees.iter().map(|t| t.vertices.len()).sum();
            assert_eq!(pendant_total + dec.core.len(), dec.h.vertex_count());
        }
        assert!(checked >= 20, "only {checked} samples had a core");
    }
}
