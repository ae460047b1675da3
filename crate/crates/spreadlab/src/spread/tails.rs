//! Tail profiles of vertex functions around their median, least-squares decay
//! rates, the level-set decay check implied by vertex expansion, and the
//! level-occupancy upper bound on spread.

use std::collections::BTreeMap;

use super::{is_lipschitz, SpreadError, VertexFunction};
use crate::graph::Graph;

/// Least-squares line with its coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of y on x. Returns `None` for fewer than 3 points.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LinearFit> {
    if points.len() < 3 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(LinearFit {
        slope,
        intercept,
        r2,
    })
}

/// Fits ln(count) against x (geometric decay) and against sqrt(x) (stretched
/// exponential) over the given (x, count) points. Counts of zero are skipped.
pub fn fit_log_counts(points: &[(usize, usize)]) -> (Option<LinearFit>, Option<LinearFit>) {
    let xs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, c)| c > 0)
        .map(|&(x, c)| (x as f64, (c as f64).ln()))
        .collect();
    let exp_fit = fit_line(&xs);
    let sq: Vec<(f64, f64)> = xs.iter().map(|&(x, y)| (x.sqrt(), y)).collect();
    let sqrt_fit = fit_line(&sq);
    (exp_fit, sqrt_fit)
}

/// Tail counts of |f - m| around the lower median m, with fitted decay rates
/// over the reliable range (counts of at least 10).
#[derive(Debug, Clone)]
pub struct TailProfile {
    pub median: i64,
    /// counts[x] = |{v : |f(v) - m| >= x}|; counts[0] = n, non-increasing.
    pub counts: Vec<usize>,
    /// Median-shifted value -> number of vertices at that value.
    pub level_counts: BTreeMap<i64, usize>,
    /// The x values entering the fits: counts[x] >= 10.
    pub fit_range: Vec<usize>,
    pub exp_fit: Option<LinearFit>,
    pub sqrt_fit: Option<LinearFit>,
}

impl TailProfile {
    pub fn fitted_exp_rate(&self) -> Option<f64> {
        self.exp_fit.map(|f| f.slope)
    }

    pub fn fitted_sqrt_rate(&self) -> Option<f64> {
        self.sqrt_fit.map(|f| f.slope)
    }
}

/// Builds the tail profile of f around its lower median.
pub fn tail_profile(g: &Graph, f: &VertexFunction) -> Result<TailProfile, SpreadError> {
    if f.len() != g.vertex_count() {
        return Err(SpreadError::SizeMismatch {
            got: f.len(),
            want: g.vertex_count(),
        });
    }
    assert!(!f.is_empty(), "tail profile of an empty function");
    let median = f.median();
    let mut level_counts: BTreeMap<i64, usize> = BTreeMap::new();
    let mut max_dev = 0usize;
    for &x in f.values() {
        let shifted = x - median;
        *level_counts.entry(shifted).or_insert(0) += 1;
        max_dev = max_dev.max(shifted.unsigned_abs() as usize);
    }
    let mut counts = vec![0usize; max_dev + 1];
    for (&value, &c) in &level_counts {
        let dev = value.unsigned_abs() as usize;
        for slot in counts.iter_mut().take(dev + 1) {
            *slot += c;
        }
    }
    debug_assert_eq!(counts[0], f.len());
    debug_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
    let fit_points: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c >= 10)
        .map(|(x, &c)| (x, c))
        .collect();
    let fit_range: Vec<usize> = fit_points.iter().map(|&(x, _)| x).collect();
    let (exp_fit, sqrt_fit) = fit_log_counts(&fit_points);
    Ok(TailProfile {
        median,
        counts,
        level_counts,
        fit_range,
        exp_fit,
        sqrt_fit,
    })
}

/// Outcome of the geometric level-set decay check.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LevelSetReport {
    pub alpha: f64,
    pub passed: bool,
    /// First violation: (side is +1 or -1, level k, |E_k|, |E_{k+1}|).
    pub violation: Option<(i8, i64, usize, usize)>,
}

/// Checks that super-median level sets shrink geometrically: with E_k the
/// set {v : f(v) >= k} after shifting the median to 0, requires
/// |E_{k+1}| <= (1 - alpha) |E_k| for every integer k >= 1 with E_k nonempty
/// and |E_k| <= n/2, on both signs of f. A verified alpha-expander makes
/// every Lipschitz function pass.
pub fn verify_levelset_decay(
    g: &Graph,
    f: &VertexFunction,
    alpha: f64,
) -> Result<LevelSetReport, SpreadError> {
    if let Some(e) = is_lipschitz(g, f)? {
        return Err(SpreadError::NotLipschitz(e));
    }
    assert!(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    let median = f.median();
    let n = f.len();
    let check_side = |sign: i64| -> Option<(i8, i64, usize, usize)> {
        let dev = |v: usize| sign * (f.value(v) - median);
        let max = (0..n).map(&dev).max().unwrap_or(0);
        let mut size_at = vec![0usize; (max.max(0) as usize) + 2];
        for v in 0..n {
            let d = dev(v);
            if d >= 1 {
                size_at[d as usize] += 1;
            }
        }
        // Suffix sums: |E_k| for k >= 1.
        for k in (1..size_at.len().saturating_sub(1)).rev() {
            size_at[k] += size_at[k + 1];
        }
        for k in 1..size_at.len() - 1 {
            let ek = size_at[k];
            let ek1 = size_at[k + 1];
            if ek == 0 || 2 * ek > n {
                continue;
            }
            if ek1 as f64 > (1.0 - alpha) * ek as f64 {
                return Some((sign as i8, k as i64, ek, ek1));
            }
        }
        None
    };
    let violation = check_side(1).or_else(|| check_side(-1));
    Ok(LevelSetReport {
        alpha,
        passed: violation.is_none(),
        violation,
    })
}

/// Checks the geometric level bounds that (beta, 1/beta)-expansion forces on
/// integer functions: after shifting the median to 0 and orienting so that
/// |{f >= 1}| >= |{f <= -1}|, requires |{f >= i}| <= beta^{-(i-1)} n / 2 and
/// |{f <= -i}| <= 2 beta^{-i} n for every i >= 1. Returns a description of
/// the first violation, or `None` when all levels comply.
pub fn beta_level_bounds_violation(f: &VertexFunction, beta: f64) -> Option<String> {
    let n = f.len();
    let median = f.median();
    let deviations: Vec<i64> = f.values().iter().map(|&x| x - median).collect();
    let count_ge = |k: i64, sign: i64| deviations.iter().filter(|&&d| sign * d >= k).count();
    // Orient the positive side toward the larger super-level set.
    let sign = if count_ge(1, 1) >= count_ge(1, -1) {
        1
    } else {
        -1
    };
    let max_dev = deviations
        .iter()
        .map(|&d| (sign * d).max(-(sign * d)))
        .max()
        .unwrap_or(0);
    for i in 1..=max_dev.max(1) {
        let upper = count_ge(i, sign);
        let upper_bound = beta.powi(-(i as i32 - 1)) * n as f64 / 2.0;
        if upper as f64 > upper_bound + 1e-9 {
            return Some(format!("|V_>={i}| = {upper} exceeds {upper_bound:.4}"));
        }
        let lower = count_ge(i, -sign);
        let lower_bound = 2.0 * beta.powi(-(i as i32)) * n as f64;
        if lower as f64 > lower_bound + 1e-9 {
            return Some(format!("|V_<=-{i}| = {lower} exceeds {lower_bound:.4}"));
        }
    }
    None
}

/// Level-occupancy upper bound: 1/4 + sum over shifted values i other than 0
/// and 1 of (count_i / n)(i - 1/2)^2.
pub fn spread_upper_from_levels(levels: &BTreeMap<i64, usize>, n: usize) -> f64 {
    let nf = n as f64;
    0.25 + levels
        .iter()
        .filter(|&(&i, _)| i != 0 && i != 1)
        .map(|(&i, &c)| (c as f64 / nf) * (i as f64 - 0.5) * (i as f64 - 0.5))
        .sum::<f64>()
}

/// [`spread_upper_from_levels`] applied to a tail profile's median-shifted
/// level counts.
pub fn spread_upper_from_tails(tail: &TailProfile) -> f64 {
    spread_upper_from_levels(&tail.level_counts, tail.counts[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spread::Ratio;

    #[test]
    fn tail_counts_examples() {
        let g = Graph::path(4);
        let f = VertexFunction::new(vec![0, 0, 1, 2]);
        let t = tail_profile(&g, &f).unwrap();
        assert_eq!(t.median, 0);
        assert_eq!(t.counts, vec![4, 2, 1]);

        let flat = VertexFunction::constant(4, 3);
        let t = tail_profile(&g, &flat).unwrap();
        assert_eq!(t.counts, vec![4]);
    }

    #[test]
    fn fit_recovers_geometric_rate() {
        // counts(x) = n * 2^{-x} with n = 2^20.
        let points: Vec<(usize, usize)> = (0..=16).map(|x| (x, 1usize << (20 - x))).collect();
        let (exp_fit, _) = fit_log_counts(&points);
        let rate = exp_fit.unwrap();
        assert!((rate.slope + std::f64::consts::LN_2).abs() < 1e-6);
        assert!(rate.r2 > 1.0 - 1e-9);
    }

    #[test]
    fn fit_recovers_sqrt_rate() {
        // counts(x) = n * 2^{-sqrt(x)}.
        let n = 1 << 20;
        let points: Vec<(usize, usize)> = (0..=30)
            .map(|x| {
                (
                    x,
                    ((n as f64) * 2f64.powf(-(x as f64).sqrt())).round() as usize,
                )
            })
            .collect();
        let (_, sqrt_fit) = fit_log_counts(&points);
        let rate = sqrt_fit.unwrap();
        assert!(
            (rate.slope + std::f64::consts::LN_2).abs() < 2e-3,
            "slope {}",
            rate.slope
        );
        assert!(rate.r2 > 0.999);
    }

    #[test]
    fn fit_needs_three_points() {
        let (e, s) = fit_log_counts(&[(0, 100), (1, 50)]);
        assert!(e.is_none() && s.is_none());
    }

    #[test]
    fn levelset_decay_constant_passes() {
        let g = Graph::path(6);
        let f = VertexFunction::constant(6, 2);
        let rep = verify_levelset_decay(&g, &f, 0.3).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn levelset_decay_fails_on_path_identity() {
        let g = Graph::path(20);
        let f = VertexFunction::new((0..20).collect());
        let rep = verify_levelset_decay(&g, &f, 0.3).unwrap();
        assert!(!rep.passed, "paths are not expanders");
        assert!(rep.violation.is_some());
    }

    #[test]
    fn levelset_decay_rejects_non_lipschitz() {
        let g = Graph::complete(2);
        let f = VertexFunction::new(vec![0, 5]);
        assert!(matches!(
            verify_levelset_decay(&g, &f, 0.5),
            Err(SpreadError::NotLipschitz(_))
        ));
    }

    #[test]
    fn spread_upper_examples() {
        // f in {0, 1}: bound is exactly 1/4.
        let mut levels = BTreeMap::new();
        levels.insert(0i64, 3usize);
        levels.insert(1, 3);
        assert!((spread_upper_from_levels(&levels, 6) - 0.25).abs() < 1e-12);

        // Median-shifted f = (-1, 0, 0, 1): only i = -1 contributes (1/4)(9/4).
        let mut levels = BTreeMap::new();
        levels.insert(-1i64, 1usize);
        levels.insert(0, 2);
        levels.insert(1, 1);
        assert!((spread_upper_from_levels(&levels, 4) - 0.8125).abs() < 1e-12);

        // f = (-1, 0, 0, 2): both -1 and 2 contribute (1/4)(9/4) each.
        let mut levels = BTreeMap::new();
        levels.insert(-1i64, 1usize);
        levels.insert(0, 2);
        levels.insert(2, 1);
        assert!((spread_upper_from_levels(&levels, 4) - 1.375).abs() < 1e-12);
    }

    #[test]
    fn spread_upper_dominates_variance_of_binary_witness() {
        // For the K_6 optimum (three 0s, three 1s) the bound is tight at 1/4.
        let g = Graph::complete(6);
        let f = VertexFunction::new(vec![0, 0, 0, 1, 1, 1]);
        let t = tail_profile(&g, &f).unwrap();
        let bound = spread_upper_from_tails(&t);
        assert!((bound - 0.25).abs() < 1e-12);
        let var = crate::spread::variance(&g, &f).unwrap();
        assert_eq!(var, Ratio::new(1, 4));
    }
}
