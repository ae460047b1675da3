//! Immutable simple undirected graphs and the elementary algorithms the rest
//! of the crate builds on: BFS, components, diameter, edge boundaries and
//! induced subgraphs. Also hosts the lengthed multigraph used by kernel
//! contraction, where parallel edges and loops carry path lengths.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Sentinel distance for unreachable vertices. Distinct from any valid
/// distance (a path has at most n-1 < usize::MAX edges).
pub const INFINITY: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Immutable simple undirected graph: dense 0-indexed vertices, edge list
/// plus per-vertex sorted adjacency. No loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, normalizing each pair to (min, max)
    /// and sorting adjacency. Rejects loops, duplicates and out-of-range
    /// endpoints.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        debug_assert_eq!(norm.len() * 2, adj.iter().map(Vec::len).sum::<usize>());
        Ok(Self {
            n,
            edges: norm,
            adj,
        })
    }

    /// Complete graph on n vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Path on n vertices: 0 - 1 - ... - (n-1).
    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    /// Cycle on n >= 3 vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized (u < v) pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbors of v.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// BFS distances from `source`; unreachable vertices get [`INFINITY`].
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<usize>, GraphError> {
        if source >= self.n {
            return Err(GraphError::VertexOutOfRange(source, self.n));
        }
        let mut dist = vec![INFINITY; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == INFINITY {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Connected components as sorted vertex sets, ordered by size descending
    /// then smallest contained vertex id.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        // Size descending, ties by smallest contained id. Members are sorted,
        // so members[0] is the minimum.
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_distances(0)
            .expect("vertex 0 exists")
            .iter()
            .all(|&d| d != INFINITY)
    }

    /// Exact diameter via all-source BFS. Errors on disconnected input.
    pub fn diameter(&self) -> Result<usize, GraphError> {
        if self.n == 0 {
            return Err(GraphError::DisconnectedGraph);
        }
        let mut best = 0;
        for s in 0..self.n {
            let dist = self.bfs_distances(s)?;
            for &d in &dist {
                if d == INFINITY {
                    return Err(GraphError::DisconnectedGraph);
                }
                best = best.max(d);
            }
        }
        Ok(best)
    }

    /// Lower bound on the diameter from a double BFS sweep: the eccentricity
    /// of a farthest vertex from `start`.
    pub fn diameter_lower_bound(&self, start: usize) -> Result<usize, GraphError> {
        let first = self.bfs_distances(start)?;
        let mut far = start;
        for (v, &d) in first.iter().enumerate() {
            if d == INFINITY {
                return Err(GraphError::DisconnectedGraph);
            }
            if d > first[far] {
                far = v;
            }
        }
        let second = self.bfs_distances(far)?;
        Ok(second.iter().copied().max().unwrap_or(0))
    }

    /// Number of edges with exactly one endpoint in `s`.
    pub fn edge_boundary(&self, s: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in s {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(u, v)| inside[u] != inside[v])
            .count()
    }

    /// Induced subgraph on `s`. Vertices are relabeled 0..|s|-1 in increasing
    /// original order; the returned map sends new ids back to original ids.
    pub fn induced_subgraph(&self, s: &[usize]) -> (Graph, Vec<usize>) {
        let mut map: Vec<usize> = s.to_vec();
        map.sort_unstable();
        map.dedup();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        let g = Graph::new(map.len(), edges).expect("induced subgraph of a simple graph is simple");
        (g, map)
    }

    /// Serializes as `n m` followed by one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the `n m` / `u v` edge-list format, rejecting loops and
    /// duplicate edges.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse = |tok: Option<&str>, line: usize| -> Result<usize, GraphError> {
            tok.ok_or(GraphError::Parse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line,
                msg: format!("bad integer: {e}"),
            })
        };
        let n = parse(it.next(), 1)?;
        let m = parse(it.next(), 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let u = parse(it.next(), idx + 1)?;
            let v = parse(it.next(), idx + 1)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!("header promises {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges)
    }
}

/// One multigraph edge: endpoints, path length and the path of original core
/// vertices it contracts. `path[0] == u`, `path.last() == v`, and
/// `length == path.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthedEdge {
    pub u: usize,
    pub v: usize,
    pub length: usize,
    pub path: Vec<usize>,
}

/// Multigraph over an ambient vertex-id space [0, n): loops and parallel
/// edges are permitted and every edge carries the core path it replaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthedMultiGraph {
    n: usize,
    edges: Vec<LengthedEdge>,
}

impl LengthedMultiGraph {
    pub fn new(n: usize, edges: Vec<LengthedEdge>) -> Self {
        for e in &edges {
            assert!(e.u < n && e.v < n, "endpoint out of range");
            assert!(e.length >= 1, "edge length must be at least 1");
            assert_eq!(e.path.len(), e.length + 1, "path length mismatch");
            assert_eq!(e.path[0], e.u, "path must start at u");
            assert_eq!(*e.path.last().unwrap(), e.v, "path must end at v");
        }
        Self { n, edges }
    }

    pub fn ambient_vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[LengthedEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Distinct vertices that appear as edge endpoints, sorted.
    pub fn active_vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Total path length, i.e. the number of core edges represented.
    pub fn total_length(&self) -> usize {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Serializes as `n m` followed by one `u v length` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.length);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            Graph::new(3, [(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::new(3, [(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert_eq!(
            Graph::new(2, [(0, 5)]).unwrap_err(),
            GraphError::VertexOutOfRange(5, 2)
        );
    }

    #[test]
    fn components_edgeless() {
        let g = Graph::new(3, []).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn components_path_plus_isolated() {
        let g = Graph::new(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.connected_components(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn components_two_triangles_ordered_by_min_id() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let comps = g.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![0, 1, 2]);
        assert_eq!(comps[1], vec![3, 4, 5]);
    }

    #[test]
    fn bfs_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(k2.bfs_distances(0).unwrap(), vec![0, 1]);

        let p3 = Graph::path(3);
        assert_eq!(p3.bfs_distances(0).unwrap(), vec![0, 1, 2]);

        let disc = Graph::new(2, []).unwrap();
        assert_eq!(disc.bfs_distances(0).unwrap(), vec![0, INFINITY]);
        assert_eq!(
            disc.bfs_distances(7).unwrap_err(),
            GraphError::VertexOutOfRange(7, 2)
        );
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(Graph::complete(4).diameter().unwrap(), 1);
        assert_eq!(Graph::path(5).diameter().unwrap(), 4);
        assert_eq!(Graph::cycle(6).diameter().unwrap(), 3);
        assert_eq!(
            Graph::new(2, []).unwrap().diameter().unwrap_err(),
            GraphError::DisconnectedGraph
        );
    }

    #[test]
    fn diameter_equals_max_bfs_distance() {
        for g in [Graph::cycle(7), Graph::path(6), Graph::complete(5)] {
            let max_bfs = (0..g.vertex_count())
                .map(|s| g.bfs_distances(s).unwrap().into_iter().max().unwrap())
                .max()
                .unwrap();
            assert_eq!(g.diameter().unwrap(), max_bfs);
        }
    }

    #[test]
    fn boundary_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.edge_boundary(&[0]), 3);
        let c4 = Graph::cycle(4);
        assert_eq!(c4.edge_boundary(&[0, 2]), 4);
        assert_eq!(c4.edge_boundary(&[0, 1, 2, 3]), 0);
    }

    #[test]
    fn induced_examples() {
        let k3 = Graph::complete(3);
        let (g, map) = k3.induced_subgraph(&[0, 1]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(map, vec![0, 1]);

        let c4 = Graph::cycle(4);
        let (g, map) = c4.induced_subgraph(&[1, 2, 3]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.diameter().unwrap(), 2);
        assert_eq!(map, vec![1, 2, 3]);

        let (g, map) = c4.induced_subgraph(&[]);
        assert_eq!(g.vertex_count(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::new(5, [(0, 3), (1, 2), (2, 0)]).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("5 3\n"));
        let back = Graph::from_edge_list(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_rejects_duplicates_and_loops() {
        assert!(Graph::from_edge_list("2 2\n0 1\n1 0\n").is_err());
        assert!(Graph::from_edge_list("2 1\n1 1\n").is_err());
        assert!(Graph::from_edge_list("2 2\n0 1\n").is_err());
    }

    #[test]
    fn double_sweep_is_a_lower_bound() {
        for g in [Graph::cycle(9), Graph::path(8), Graph::complete(6)] {
            let lb = g.diameter_lower_bound(0).unwrap();
            assert!(lb <= g.diameter().unwrap());
        }
        // On trees the double sweep is exact.
        let star = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(star.diameter_lower_bound(0).unwrap(), 2);
    }

    #[test]
    fn lengthed_multigraph_accepts_loops_and_parallels() {
        let edges = vec![
            LengthedEdge {
                u: 0,
                v: 1,
                length: 2,
                path: vec![0, 5, 1],
            },
            LengthedEdge {
                u: 0,
                v: 1,
                length: 1,
                path: vec![0, 1],
            },
            LengthedEdge {
                u: 0,
                v: 0,
                length: 3,
                path: vec![0, 6, 7, 0],
            },
        ];
        let k = LengthedMultiGraph::new(8, edges);
        assert_eq!(k.edge_count(), 3);
        assert_eq!(k.total_length(), 6);
        assert_eq!(k.active_vertices(), vec![0, 1]);
        assert!(k.to_edge_list().contains("0 0 3"));
    }
}
