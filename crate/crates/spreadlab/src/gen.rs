//! Seeded random graph generation: G(n,p) via geometric skip-sampling and
//! uniform d-regular graphs via the configuration model.
//!
//! All sampling runs on [`SplitMix64`], a 64-bit generator whose state
//! transition is pinned here so that streams reproduce bit-for-bit across
//! ports: `state += 0x9E3779B97F4A7C15`, then the output is the finalizer
//! `mix64` applied to the new state. Uniform integers below a bound use
//! rejection on the top range to avoid modulo bias; uniform doubles take the
//! top 53 bits.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(String),
    #[error("d * n must be even for a d-regular graph (d = {d}, n = {n})")]
    ParityViolation { d: usize, n: usize },
    #[error("degree {d} must be positive and below n = {n}")]
    InvalidDegree { d: usize, n: usize },
    #[error("no simple pairing found in {0} attempts; consider erase mode")]
    RejectionCapExceeded(u32),
}

/// SplitMix64 finalizer: an avalanche bijection on u64.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derives an independent per-trial seed from a master seed. Bijective in
/// `trial` for fixed `master`, so distinct trials never collide.
pub fn derive_trial_seed(master: u64, trial: u64) -> u64 {
    mix64(
        master
            ^ trial
                .wrapping_mul(0x9E3779B97F4A7C15)
                .wrapping_add(0x6A09E667F3BCC909),
    )
}

/// The pinned generator. Do not swap the constants: recorded sweeps and the
/// test suite depend on the exact stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        mix64(self.state)
    }

    /// Uniform in [0, bound) without modulo bias. `bound` must be positive.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let zone = u64::MAX - u64::MAX.wrapping_rem(bound);
        loop {
            let x = self.next_u64();
            if x < zone || zone == 0 {
                return x % bound;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Samples G(n, p): every unordered pair is an edge independently with
/// probability p. Runs in expected O(n + p n^2) time by jumping between
/// successive edges with geometric skips over the linearized pair space.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidProbability(format!("{p}")));
    }
    let total = n as u128 * (n as u128 - u128::from(n > 0)) / 2;
    if p == 0.0 || total == 0 {
        return Ok(Graph::new(n, []).expect("edgeless graph is simple"));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = SplitMix64::new(seed);
    let log1p = (1.0 - p).ln();
    let mut edges = Vec::with_capacity((p * total as f64 * 1.1) as usize + 16);
    // pos walks the pair indices 0..total; the gap between accepted indices
    // is geometric with success probability p.
    let mut pos: u128 = 0;
    let mut first = true;
    loop {
        let u01 = rng.next_f64();
        // floor(log(1-U)/log(1-p)) failures before the next success.
        let skip = ((1.0 - u01).ln() / log1p).floor();
        let skip = if skip.is_finite() && skip >= 0.0 {
            skip as u128
        } else {
            0
        };
        pos = if first { skip } else { pos + 1 + skip };
        first = false;
        if pos >= total {
            break;
        }
        edges.push(pair_from_index(n, pos));
    }
    Ok(Graph::new(n, edges).expect("skip sampling emits distinct pairs"))
}

/// Inverts the row-major enumeration (0,1),(0,2),...,(0,n-1),(1,2),... of
/// unordered pairs: returns the k-th pair.
fn pair_from_index(n: usize, k: u128) -> (usize, usize) {
    // base(u) = number of pairs whose smaller endpoint is < u.
    let base = |u: u128| u * (2 * n as u128 - u - 1) / 2;
    // Float estimate, then exact integer fix-up (monotone in u).
    let nf = n as f64;
    let kf = k as f64;
    let mut u = (nf - 0.5 - ((nf - 0.5) * (nf - 0.5) - 2.0 * kf).max(0.0).sqrt())
        .floor()
        .max(0.0) as u128;
    while u + 1 < n as u128 && base(u + 1) <= k {
        u += 1;
    }
    while u > 0 && base(u) > k {
        u -= 1;
    }
    let v = u + 1 + (k - base(u));
    (u as usize, v as usize)
}

/// How a non-simple configuration-model pairing is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularMode {
    /// Resample whole pairings until one is simple (uniform over simple
    /// d-regular graphs); errors after the attempt cap.
    Reject,
    /// Delete loops and collapse parallel edges; the result may fail to be
    /// exactly regular and is flagged as such.
    Erase,
}

/// Outcome of [`gen_regular`].
#[derive(Debug, Clone)]
pub struct RegularSample {
    pub graph: Graph,
    /// False only in erase mode when loops or multi-edges were removed.
    pub exactly_regular: bool,
    /// Pairings drawn (1 unless reject mode resampled).
    pub attempts: u32,
}

const REJECT_CAP: u32 = 1000;

/// Samples a d-regular graph on n vertices with the configuration model:
/// d stubs per vertex, a uniform perfect matching on stubs. A loop consumes
/// two stubs of its vertex.
pub fn gen_regular(
    n: usize,
    d: usize,
    seed: u64,
    mode: RegularMode,
) -> Result<RegularSample, GenError> {
    if d == 0 || d >= n {
        return Err(GenError::InvalidDegree { d, n });
    }
    if (d * n) % 2 != 0 {
        return Err(GenError::ParityViolation { d, n });
    }
    let mut rng = SplitMix64::new(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut attempts = 0;
    loop {
        attempts += 1;
        rng.shuffle(&mut stubs);
        let pairing: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let mut seen = std::collections::HashSet::with_capacity(pairing.len() * 2);
        let simple = pairing
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))));
        match mode {
            RegularMode::Reject => {
                if simple {
                    let graph = Graph::new(n, pairing).expect("verified simple");
                    return Ok(RegularSample {
                        graph,
                        exactly_regular: true,
                        attempts,
                    });
                }
                if attempts >= REJECT_CAP {
                    return Err(GenError::RejectionCapExceeded(REJECT_CAP));
                }
            }
            RegularMode::Erase => {
                let mut dedup = std::collections::HashSet::new();
                let edges: Vec<(usize, usize)> = pairing
                    .into_iter()
                    .filter(|&(u, v)| u != v && dedup.insert((u.min(v), u.max(v))))
                    .collect();
                let erased = edges.len() != n * d / 2;
                let graph = Graph::new(n, edges).expect("erased pairing is simple");
                return Ok(RegularSample {
                    graph,
                    exactly_regular: !erased,
                    attempts,
                });
            }
        }
    }
}

/// Which random model to sample, with its parameters.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum GenSpec {
    Gnp {
        n: usize,
        p: f64,
    },
    Regular {
        n: usize,
        d: usize,
        mode: RegularMode,
    },
}

impl GenSpec {
    /// Convenience constructor for G(n, c/n).
    pub fn gnp_mean_degree(n: usize, c: f64) -> Self {
        GenSpec::Gnp { n, p: c / n as f64 }
    }

    pub fn sample(&self, seed: u64) -> Result<Graph, GenError> {
        match *self {
            GenSpec::Gnp { n, p } => gen_gnp(n, p, seed),
            GenSpec::Regular { n, d, mode } => Ok(gen_regular(n, d, seed, mode)?.graph),
        }
    }
}
