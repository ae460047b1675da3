//! The two explicit Lipschitz constructions: the three-level function for
//! low-average-degree graphs and the kernel-path function for barely
//! supercritical giants, plus the B-set accounting used to lower-bound the
//! variance of the latter.

use super::{is_lipschitz, variance, Ratio, SpreadError, VertexFunction};
use crate::decompose::Decomposition;
use crate::graph::Graph;

/// Result of the three-level construction: f = 0 on B, 1 on A, 2 on T where
/// T holds the t = floor(n / 2d) least-degree vertices, A covers N(T) \ T
/// padded to floor(n/2) vertices, and B is the rest.
#[derive(Debug, Clone)]
pub struct ThreeLevel {
    pub function: VertexFunction,
    /// Guaranteed lower bound 1/4 + (1/d - 2/n)(1 - 1/d).
    pub bound: Ratio,
    /// Achieved variance (always >= bound).
    pub variance: Ratio,
    pub t: usize,
}

/// Builds the three-level function on a connected graph with average degree
/// at most `d` and n >= 3d vertices. Errors if N(T) \ T cannot fit inside a
/// half of the vertex set (the construction is then infeasible as defined).
pub fn three_level_function(g: &Graph, d: usize) -> Result<ThreeLevel, SpreadError> {
    let n = g.vertex_count();
    if d < 2 {
        return Err(SpreadError::PreconditionViolated(format!(
            "d = {d} must be at least 2"
        )));
    }
    if !g.is_connected() || n == 0 {
        return Err(SpreadError::DisconnectedGraph);
    }
    if 2 * g.edge_count() > d * n {
        return Err(SpreadError::PreconditionViolated(format!(
            "average degree {} exceeds d = {d}",
            2.0 * g.edge_count() as f64 / n as f64
        )));
    }
    if n < 3 * d {
        return Err(SpreadError::PreconditionViolated(format!(
            "n = {n} below 3d = {}",
            3 * d
        )));
    }

    let t = n / (2 * d);
    // t least-degree vertices, ties by id.
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (g.degree(v), v));
    let top: Vec<usize> = by_degree[..t].to_vec();
    let mut in_top = vec![false; n];
    for &v in &top {
        in_top[v] = true;
    }
    // U = N(T); the construction needs U \ T to fit in floor(n/2) slots.
    let mut in_u_minus_t = vec![false; n];
    let mut u_minus_t = 0usize;
    for &v in &top {
        for &w in g.neighbors(v) {
            if !in_top[w] && !in_u_minus_t[w] {
                in_u_minus_t[w] = true;
                u_minus_t += 1;
            }
        }
    }
    let a_size = n / 2;
    if u_minus_t > a_size {
        return Err(SpreadError::ConstructionInfeasible(format!(
            "|N(T) \\ T| = {u_minus_t} exceeds floor(n/2) = {a_size}"
        )));
    }

    let mut values = vec![0i64; n];
    for &v in &top {
        values[v] = 2;
    }
    let mut assigned_a = 0usize;
    for v in 0..n {
        if in_u_minus_t[v] {
            values[v] = 1;
            assigned_a += 1;
        }
    }
    // Pad A with the smallest-id vertices outside T and U.
    for v in 0..n {
        if assigned_a == a_size {
            break;
        }
        if !in_top[v] && !in_u_minus_t[v] {
            values[v] = 1;
            assigned_a += 1;
        }
    }
    debug_assert_eq!(assigned_a, a_size);

    let function = VertexFunction::new(values);
    if let Some(e) = is_lipschitz(g, &function)? {
        unreachable!("three-level function violates Lipschitz on edge {e:?}");
    }
    let variance = variance(g, &function)?;
    let (ni, di) = (n as i128, d as i128);
    // (1/d - 2/n)(1 - 1/d) = (n - 2d)(d - 1) / (d^2 n).
    let bound = Ratio::new(1, 4) + Ratio::new((ni - 2 * di) * (di - 1), di * di * ni);
    debug_assert!(variance >= bound, "variance {variance} below bound {bound}");
    Ok(ThreeLevel {
        function,
        bound,
        variance,
        t,
    })
}

/// Nearest core vertex a(v) for every vertex of `h`, by multi-source BFS
/// from the core. Inside a pendant tree the nearest core vertex is the
/// tree's unique attachment, so no tie-breaking arises.
pub fn attachment_map(h: &Graph, core: &[usize]) -> Result<Vec<usize>, SpreadError> {
    if core.is_empty() {
        return Err(SpreadError::EmptyCore);
    }
    let n = h.vertex_count();
    let mut attach = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for &v in core {
        attach[v] = v;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for &w in h.neighbors(u) {
            if attach[w] == usize::MAX {
                attach[w] = attach[u];
                queue.push_back(w);
            }
        }
    }
    debug_assert!(
        attach.iter().all(|&a| a != usize::MAX),
        "H must be connected to its core"
    );
    Ok(attach)
}

/// The kernel-path construction.
#[derive(Debug, Clone)]
pub struct KernelPathFunction {
    /// Function on the vertices of `dec.h` (giant-local ids).
    pub function: VertexFunction,
    /// Pattern height: the largest multiple of 3 with 2r <= (1-d)/(2e(1+d)).
    pub r: i64,
    /// Edges with length at most this are short and carry no pattern.
    pub short_threshold: usize,
    pub long_edge_count: usize,
}

/// Builds the kernel-path function: kernel edges of length above
/// floor((1-delta)/(2 eps (1+delta))) are long; inside each long edge's path
/// a centered sub-path of size divisible by 2r carries the repeating ridge
/// 1, 2, ..., r-1, r, r, r-1, ..., 1; everything else on the core is 0, and
/// pendant vertices copy the value at their point of attachment.
pub fn kernel_path_function(
    dec: &Decomposition,
    eps: f64,
    delta: f64,
) -> Result<KernelPathFunction, SpreadError> {
    if !(delta > 0.0 && delta < 0.1) {
        return Err(SpreadError::DeltaOutOfRange);
    }
    let kernel = dec.kernel.as_ref().ok_or(SpreadError::EmptyCore)?;
    let cut = (1.0 - delta) / (2.0 * eps * (1.0 + delta));
    let short_threshold = cut.floor() as usize;
    let r = 3 * (cut / 6.0).floor() as i64;
    if r < 3 {
        return Err(SpreadError::EpsTooLarge { r });
    }

    let n = dec.h.vertex_count();
    let mut values = vec![0i64; n];
    let period = (2 * r) as usize;
    let mut long_edge_count = 0usize;
    for e in kernel.edges() {
        if e.length <= short_threshold {
            continue;
        }
        long_edge_count += 1;
        let internal = &e.path[1..e.path.len() - 1];
        let span = period * (internal.len() / period);
        if span == 0 {
            continue; // length > threshold guarantees span >= 2r, but stay safe
        }
        // Centered placement; an odd slack leaves the extra slot on the
        // high-index side.
        let start = (internal.len() - span) / 2;
        for (offset, &v) in internal[start..start + span].iter().enumerate() {
            let pos = (offset % period) as i64 + 1; // 1..=2r
            values[v] = pos.min(2 * r + 1 - pos);
        }
    }

    let attach = attachment_map(&dec.h, &dec.core)?;
    for v in 0..n {
        values[v] = values[attach[v]];
    }

    let function = VertexFunction::new(values);
    if let Some(e) = is_lipschitz(&dec.h, &function)? {
        unreachable!("kernel-path function violates Lipschitz on edge {e:?}");
    }
    let max = function.values().iter().copied().max().unwrap_or(0);
    debug_assert!(if long_edge_count > 0 {
        max == r || max == 0
    } else {
        max == 0
    });
    Ok(KernelPathFunction {
        function,
        r,
        short_threshold,
        long_edge_count,
    })
}

/// The B-set partition of the core by function value, together with the
/// inflated B_i^+ sets on all of H and the per-class occupancy checks
/// |B_i^+| >= eps * n / 44.
#[derive(Debug, Clone)]
pub struct BSets {
    /// Core vertices with f = 0.
    pub b0: Vec<usize>,
    /// Core vertices with (i-1)/3 * r < f <= i/3 * r for i = 1, 2, 3.
    pub b: [Vec<usize>; 3],
    /// |B_i^+| = |{v in H : a(v) in B_i}| for i = 1, 2, 3.
    pub b_plus_sizes: [usize; 3],
    /// Whether |B_i^+| >= eps * n / 44 for i = 1, 2, 3.
    pub star: [bool; 3],
}

impl BSets {
    pub fn star_all(&self) -> bool {
        self.star.iter().all(|&s| s)
    }
}

/// Partitions the core by value of `f` into B_0..B_3, inflates along points
/// of attachment to B_i^+ on H, and evaluates the occupancy checks against
/// eps * n / 44 with n the source-graph vertex count.
pub fn b_sets(
    dec: &Decomposition,
    f: &VertexFunction,
    r: i64,
    eps: f64,
) -> Result<BSets, SpreadError> {
    if r % 3 != 0 {
        return Err(SpreadError::RNotDivisibleBy3(r));
    }
    if dec.core.is_empty() {
        return Err(SpreadError::EmptyCore);
    }
    if f.len() != dec.h.vertex_count() {
        return Err(SpreadError::SizeMismatch {
            got: f.len(),
            want: dec.h.vertex_count(),
        });
    }
    let third = r / 3;
    let class_of = |value: i64| -> usize {
        if value <= 0 {
            0
        } else if value <= third {
            1
        } else if value <= 2 * third {
            2
        } else {
            3
        }
    };
    let mut b0 = Vec::new();
    let mut b: [Vec<usize>; 3] = Default::default();
    let mut class = vec![0usize; dec.h.vertex_count()];
    let mut in_core = vec![false; dec.h.vertex_count()];
    for &v in &dec.core {
        in_core[v] = true;
        let c = class_of(f.value(v));
        class[v] = c;
        match c {
            0 => b0.push(v),
            i => b[i - 1].push(v),
        }
    }
    let attach = attachment_map(&dec.h, &dec.core)?;
    let mut b_plus_sizes = [0usize; 3];
    for v in 0..dec.h.vertex_count() {
        let c = class[attach[v]];
        if c >= 1 {
            b_plus_sizes[c - 1] += 1;
        }
    }
    let threshold = eps * dec.source_n as f64 / 44.0;
    let star = [
        b_plus_sizes[0] as f64 >= threshold,
        b_plus_sizes[1] as f64 >= threshold,
        b_plus_sizes[2] as f64 >= threshold,
    ];
    Ok(BSets {
        b0,
        b,
        b_plus_sizes,
        star,
    })
}
