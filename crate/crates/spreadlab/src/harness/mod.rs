//! Reproducible experiment sweeps: presets over graph families, per-trial
//! records with structural and spread statistics, deterministic CSV/JSON
//! output, and a reduced-scale selfcheck.
//!
//! Determinism contract: a sweep is a pure function of its spec (which
//! includes the master seed). Records are ordered by (cell, trial) and the
//! CSV re-renders byte-identically on re-runs; wall-clock timings are kept
//! out of the CSV for that reason and live only in the in-memory records.

mod selfcheck;

pub use selfcheck::{
    add_random_non_edge, brute_force_spread, random_connected_gnp, random_sparse_connected,
    random_tree, selfcheck, SelfCheckItem, SelfCheckReport,
};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::Decomposition;
use crate::gen::{derive_trial_seed, gen_gnp, gen_regular, GenSpec, RegularMode};
use crate::graph::Graph;
use crate::spread::{
    self, b_sets, exact_spread, kernel_path_function, local_search_spread_seeded, tail_profile,
    three_level_function, variance, TailProfile, VertexFunction,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Exact spread of complete graphs (closed-form target).
    Complete,
    /// Random d-regular graphs at fixed d across sizes.
    Regular,
    /// G(n, c/n) at fixed mean degree c across sizes.
    Gnp,
    /// Barely supercritical G(n, (1 + eps)/n) with eps = n^{-a}.
    Epsilon,
    /// Random regular graphs across degrees at fixed n.
    Highdeg,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Complete => "complete",
            Preset::Regular => "regular",
            Preset::Gnp => "gnp",
            Preset::Epsilon => "epsilon",
            Preset::Highdeg => "highdeg",
        }
    }
}

fn default_delta() -> f64 {
    0.05
}
fn default_restarts() -> u32 {
    5
}
fn default_d() -> usize {
    3
}
fn default_d_values() -> Vec<usize> {
    vec![3, 10, 20, 50]
}
fn default_c() -> f64 {
    2.0
}
fn default_eps_exponent() -> f64 {
    0.25
}

/// Everything a sweep depends on. Two equal specs produce byte-identical
/// CSV output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub preset: Preset,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    /// Tolerance for the behaves predicate (epsilon preset).
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Local-search restarts; 0 skips local search entirely.
    #[serde(default = "default_restarts")]
    pub restarts: u32,
    /// Degree for the regular preset.
    #[serde(default = "default_d")]
    pub d: usize,
    /// Degrees for the highdeg preset (cells).
    #[serde(default = "default_d_values")]
    pub d_values: Vec<usize>,
    /// Mean degree for the gnp preset.
    #[serde(default = "default_c")]
    pub c: f64,
    /// Exponent a in eps = n^{-a} for the epsilon preset.
    #[serde(default = "default_eps_exponent")]
    pub eps_exponent: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_values.is_empty() {
            return Err(HarnessError::InvalidSpec("n_values is empty".into()));
        }
        if self.trials == 0 && self.preset != Preset::Complete {
            return Err(HarnessError::InvalidSpec("trials must be positive".into()));
        }
        if self.preset == Preset::Highdeg && self.d_values.is_empty() {
            return Err(HarnessError::InvalidSpec("highdeg needs d_values".into()));
        }
        if !(self.delta > 0.0 && self.delta < 0.1) {
            return Err(HarnessError::InvalidSpec(
                "delta must lie in (0, 1/10)".into(),
            ));
        }
        Ok(())
    }

    /// Cells of this sweep: (n, optional degree) pairs.
    fn cells(&self) -> Vec<CellParams> {
        match self.preset {
            Preset::Highdeg => {
                let n = self.n_values[0];
                self.d_values
                    .iter()
                    .map(|&d| CellParams {
                        n,
                        d: Some(d),
                        c: None,
                        eps: None,
                    })
                    .collect()
            }
            Preset::Regular => self
                .n_values
                .iter()
                .map(|&n| CellParams {
                    n,
                    d: Some(self.d),
                    c: None,
                    eps: None,
                })
                .collect(),
            Preset::Gnp => self
                .n_values
                .iter()
                .map(|&n| CellParams {
                    n,
                    d: None,
                    c: Some(self.c),
                    eps: None,
                })
                .collect(),
            Preset::Epsilon => self
                .n_values
                .iter()
                .map(|&n| {
                    let eps = (n as f64).powf(-self.eps_exponent);
                    CellParams {
                        n,
                        d: None,
                        c: Some(1.0 + eps),
                        eps: Some(eps),
                    }
                })
                .collect(),
            Preset::Complete => self
                .n_values
                .iter()
                .map(|&n| CellParams {
                    n,
                    d: None,
                    c: None,
                    eps: None,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct CellParams {
    n: usize,
    d: Option<usize>,
    c: Option<f64>,
    eps: Option<f64>,
}

/// One trial's results. Optional fields stay empty when the preset does not
/// compute them or the trial errored; errors never abort a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub preset: Preset,
    pub cell: usize,
    pub trial: usize,
    pub n: usize,
    pub d: Option<usize>,
    pub c: Option<f64>,
    pub eps: Option<f64>,
    pub seed: u64,
    pub error: Option<String>,
    pub giant: Option<usize>,
    pub core: Option<usize>,
    pub kernel_vertices: Option<usize>,
    pub kernel_edges: Option<usize>,
    pub excess: Option<i64>,
    pub behaves: Option<bool>,
    pub max_pendant: Option<usize>,
    pub diameter: Option<usize>,
    /// False when `diameter` is only a double-BFS lower bound.
    pub diameter_exact: Option<bool>,
    /// Kernel-path pattern height.
    pub r: Option<i64>,
    pub var_constructed: Option<f64>,
    pub star: Option<[bool; 3]>,
    pub var_local: Option<f64>,
    /// Exact spread as a rational (complete preset).
    pub exact_num: Option<i128>,
    pub exact_den: Option<i128>,
    pub exp_rate: Option<f64>,
    pub exp_r2: Option<f64>,
    pub sqrt_rate: Option<f64>,
    pub sqrt_r2: Option<f64>,
    /// Erase-mode regular generation dropped loops or parallels.
    pub erased: Option<bool>,
    /// Wall-clock milliseconds; excluded from the CSV.
    #[serde(skip)]
    pub runtime_ms: u128,
    /// Witness tail profile, kept in memory for rate aggregation.
    #[serde(skip)]
    pub tail: Option<TailProfile>,
}

impl TrialRecord {
    fn blank(preset: Preset, cell: usize, trial: usize, p: CellParams, seed: u64) -> Self {
        TrialRecord {
            preset,
            cell,
            trial,
            n: p.n,
            d: p.d,
            c: p.c,
            eps: p.eps,
            seed,
            error: None,
            giant: None,
            core: None,
            kernel_vertices: None,
            kernel_edges: None,
            excess: None,
            behaves: None,
            max_pendant: None,
            diameter: None,
            diameter_exact: None,
            r: None,
            var_constructed: None,
            star: None,
            var_local: None,
            exact_num: None,
            exact_den: None,
            exp_rate: None,
            exp_r2: None,
            sqrt_rate: None,
            sqrt_r2: None,
            erased: None,
            runtime_ms: 0,
            tail: None,
        }
    }
}

/// Sweep output: ordered records plus rendered artifacts.
#[derive(Debug)]
pub struct SweepOutput {
    pub records: Vec<TrialRecord>,
    pub csv: String,
    pub summary: serde_json::Value,
}

/// Runs every (cell, trial) of the spec. Per-trial failures are recorded in
/// the row's `error` column; the sweep always completes.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutput, HarnessError> {
    spec.validate()?;
    let cells = spec.cells();
    let mut records = Vec::new();
    for (cell_idx, &cell) in cells.iter().enumerate() {
        let cell_seed = derive_trial_seed(spec.master_seed, cell_idx as u64);
        let trials = if spec.preset == Preset::Complete {
            1
        } else {
            spec.trials
        };
        for trial in 0..trials {
            let seed = derive_trial_seed(cell_seed, trial as u64);
            let start = std::time::Instant::now();
            let mut rec = TrialRecord::blank(spec.preset, cell_idx, trial, cell, seed);
            if let Err(msg) = run_trial(spec, cell, seed, &mut rec) {
                rec.error = Some(msg);
            }
            rec.runtime_ms = start.elapsed().as_millis();
            records.push(rec);
        }
    }
    let csv = render_csv(&records);
    let summary = summarize(spec, &records);
    Ok(SweepOutput {
        records,
        csv,
        summary,
    })
}

fn run_trial(
    spec: &SweepSpec,
    cell: CellParams,
    seed: u64,
    rec: &mut TrialRecord,
) -> Result<(), String> {
    match spec.preset {
        Preset::Complete => {
            let g = Graph::complete(cell.n);
            let res = exact_spread(&g, Some(cell.n.max(spread::EXACT_SPREAD_DEFAULT_CAP)))
                .map_err(|e| e.to_string())?;
            rec.exact_num = Some(*res.value.numer());
            rec.exact_den = Some(*res.value.denom());
            rec.diameter = Some(if cell.n > 1 { 1 } else { 0 });
            rec.diameter_exact = Some(true);
            Ok(())
        }
        Preset::Regular | Preset::Highdeg => {
            let d = cell.d.expect("regular cells carry d");
            let mode = if d <= 8 {
                RegularMode::Reject
            } else {
                RegularMode::Erase
            };
            let sample = gen_regular(cell.n, d, seed, mode).map_err(|e| e.to_string())?;
            rec.erased = Some(!sample.exactly_regular);
            let dec = Decomposition::analyze(&sample.graph);
            measure_structure(rec, &dec);
            measure_spread(spec, rec, &dec, Some(d), seed)
        }
        Preset::Gnp => {
            let c = cell.c.expect("gnp cells carry c");
            let g = GenSpec::gnp_mean_degree(cell.n, c)
                .sample(seed)
                .map_err(|e| e.to_string())?;
            let dec = Decomposition::analyze(&g);
            measure_structure(rec, &dec);
            measure_spread(spec, rec, &dec, None, seed)
        }
        Preset::Epsilon => {
            let eps = cell.eps.expect("epsilon cells carry eps");
            let p = (1.0 + eps) / cell.n as f64;
            let g = gen_gnp(cell.n, p, seed).map_err(|e| e.to_string())?;
            let dec = Decomposition::analyze(&g);
            measure_structure(rec, &dec);
            let report = crate::decompose::behaves(&dec, cell.n, eps, spec.delta)
                .map_err(|e| e.to_string())?;
            rec.behaves = Some(report.behaves);
            let mut seeds: Vec<VertexFunction> = Vec::new();
            match kernel_path_function(&dec, eps, spec.delta) {
                Ok(kp) => {
                    rec.r = Some(kp.r);
                    let var = variance(&dec.h, &kp.function).map_err(|e| e.to_string())?;
                    rec.var_constructed = Some(ratio_f64(var));
                    let bs = b_sets(&dec, &kp.function, kp.r, eps).map_err(|e| e.to_string())?;
                    rec.star = Some(bs.star);
                    seeds.push(kp.function);
                }
                Err(e) => {
                    // Structure-only trial; record why the construction
                    // was unavailable but keep the row.
                    rec.error = Some(format!("kernel_path: {e}"));
                }
            }
            if spec.restarts > 0 {
                let ls = local_search_spread_seeded(
                    &dec.h,
                    spec.restarts,
                    derive_trial_seed(seed, 1),
                    &seeds,
                )
                .map_err(|e| e.to_string())?;
                rec.var_local = Some(ls.value_f64());
                record_tails(rec, &dec.h, ls.witness.as_ref());
            }
            Ok(())
        }
    }
}

fn measure_structure(rec: &mut TrialRecord, dec: &Decomposition) {
    rec.giant = Some(dec.giant_size());
    rec.core = Some(dec.core_size());
    rec.kernel_vertices = Some(dec.kernel_size());
    rec.kernel_edges = dec.kernel.as_ref().map(|k| k.edge_count());
    rec.excess = Some(dec.excess);
    rec.max_pendant = Some(dec.max_pendant_tree_size());
    // Exact diameter is quadratic; above 1000 vertices fall back to the
    // double-sweep lower bound and flag it.
    let h = &dec.h;
    if h.vertex_count() == 0 {
        return;
    }
    if h.vertex_count() <= 1000 {
        rec.diameter = h.diameter().ok();
        rec.diameter_exact = Some(true);
    } else {
        rec.diameter = h.diameter_lower_bound(0).ok();
        rec.diameter_exact = Some(false);
    }
}

/// Local search on the giant component, seeded with the three-level
/// construction when its preconditions hold.
fn measure_spread(
    spec: &SweepSpec,
    rec: &mut TrialRecord,
    dec: &Decomposition,
    d: Option<usize>,
    seed: u64,
) -> Result<(), String> {
    if spec.restarts == 0 {
        return Ok(());
    }
    let h = &dec.h;
    let mut seeds = Vec::new();
    if let Some(d) = d {
        if let Ok(tl) = three_level_function(h, d) {
            rec.var_constructed = Some(ratio_f64(tl.variance));
            seeds.push(tl.function);
        }
    }
    let ls = local_search_spread_seeded(h, spec.restarts, derive_trial_seed(seed, 1), &seeds)
        .map_err(|e| e.to_string())?;
    rec.var_local = Some(ls.value_f64());
    record_tails(rec, h, ls.witness.as_ref());
    Ok(())
}

fn record_tails(rec: &mut TrialRecord, h: &Graph, witness: Option<&VertexFunction>) {
    if let Some(w) = witness {
        if let Ok(t) = tail_profile(h, w) {
            rec.exp_rate = t.exp_fit.map(|f| f.slope);
            rec.exp_r2 = t.exp_fit.map(|f| f.r2);
            rec.sqrt_rate = t.sqrt_fit.map(|f| f.slope);
            rec.sqrt_r2 = t.sqrt_fit.map(|f| f.r2);
            rec.tail = Some(t);
        }
    }
}

fn ratio_f64(r: spread::Ratio) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Fixed CSV column order; version bumps on any schema change.
const CSV_COLUMNS: &[&str] = &[
    "preset",
    "cell",
    "trial",
    "n",
    "d",
    "c",
    "eps",
    "seed",
    "error",
    "giant",
    "core",
    "kernel_vertices",
    "kernel_edges",
    "excess",
    "behaves",
    "max_pendant",
    "diameter",
    "diameter_exact",
    "r",
    "var_constructed",
    "star1",
    "star2",
    "star3",
    "var_local",
    "exact_num",
    "exact_den",
    "exp_rate",
    "exp_r2",
    "sqrt_rate",
    "sqrt_r2",
    "erased",
];

/// Renders records as versioned CSV. Optional fields render as empty cells;
/// the error column is quoted.
pub fn render_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("# spreadlab-csv v1\n");
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
        v.as_ref().map(|x| x.to_string()).unwrap_or_default()
    }
    for r in records {
        let star = |i: usize| r.star.map(|s| s[i].to_string()).unwrap_or_default();
        let fields: Vec<String> = vec![
            r.preset.as_str().to_string(),
            r.cell.to_string(),
            r.trial.to_string(),
            r.n.to_string(),
            opt(&r.d),
            opt(&r.c),
            opt(&r.eps),
            r.seed.to_string(),
            r.error
                .as_ref()
                .map(|e| format!("\"{}\"", e.replace('"', "'")))
                .unwrap_or_default(),
            opt(&r.giant),
            opt(&r.core),
            opt(&r.kernel_vertices),
            opt(&r.kernel_edges),
            opt(&r.excess),
            opt(&r.behaves),
            opt(&r.max_pendant),
            opt(&r.diameter),
            opt(&r.diameter_exact),
            opt(&r.r),
            opt(&r.var_constructed),
            star(0),
            star(1),
            star(2),
            opt(&r.var_local),
            opt(&r.exact_num),
            opt(&r.exact_den),
            opt(&r.exp_rate),
            opt(&r.exp_r2),
            opt(&r.sqrt_rate),
            opt(&r.sqrt_r2),
            opt(&r.erased),
        ];
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}

/// Lower median; `None` when the slice is empty.
pub fn median_f64(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    Some(v[(v.len() - 1) / 2])
}

/// Per-cell aggregate of the tail-rate fits of witness profiles.
#[derive(Debug, Clone, Serialize)]
pub struct CellTailRates {
    pub cell: usize,
    pub trials_with_fits: usize,
    pub exp_rate_median: Option<f64>,
    pub sqrt_rate_median: Option<f64>,
    pub exp_r2_median: Option<f64>,
    pub sqrt_r2_median: Option<f64>,
    /// Fraction of fitted trials with negative exponential rate and
    /// R^2 >= 0.8.
    pub frac_exp_decay_good: Option<f64>,
}

/// Aggregates per-trial tail fits into per-cell medians. Trials without a
/// fit (range below 3 points) are counted out, not failed.
pub fn fit_tail_rates(records: &[TrialRecord]) -> Vec<CellTailRates> {
    let max_cell = records.iter().map(|r| r.cell).max().map_or(0, |c| c + 1);
    (0..max_cell)
        .map(|cell| {
            let fitted: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.cell == cell && r.exp_rate.is_some())
                .collect();
            let collectf = |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Vec<f64> {
                fitted.iter().filter_map(|r| f(r)).collect()
            };
            let exp_rates = collectf(&|r| r.exp_rate);
            let sqrt_rates = collectf(&|r| r.sqrt_rate);
            let exp_r2s = collectf(&|r| r.exp_r2);
            let sqrt_r2s = collectf(&|r| r.sqrt_r2);
            let good = fitted
                .iter()
                .filter(|r| {
                    r.exp_rate.is_some_and(|s| s < 0.0) && r.exp_r2.is_some_and(|q| q >= 0.8)
                })
                .count();
            CellTailRates {
                cell,
                trials_with_fits: fitted.len(),
                exp_rate_median: median_f64(&exp_rates),
                sqrt_rate_median: median_f64(&sqrt_rates),
                exp_r2_median: median_f64(&exp_r2s),
                sqrt_r2_median: median_f64(&sqrt_r2s),
                frac_exp_decay_good: if fitted.is_empty() {
                    None
                } else {
                    Some(good as f64 / fitted.len() as f64)
                },
            }
        })
        .collect()
}

fn summarize(spec: &SweepSpec, records: &[TrialRecord]) -> serde_json::Value {
    let cells = spec.cells();
    let tail_rates = fit_tail_rates(records);
    let per_cell: Vec<serde_json::Value> = cells
        .iter()
        .enumerate()
        .map(|(ci, cell)| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.cell == ci).collect();
            let ok = rows.iter().filter(|r| r.error.is_none()).count();
            let grab = |f: &dyn Fn(&TrialRecord) -> Option<f64>| -> Vec<f64> {
                rows.iter().filter_map(|r| f(r)).collect()
            };
            let var_local = grab(&|r| r.var_local);
            let var_constructed = grab(&|r| r.var_constructed);
            let scaled: Vec<f64> = cell
                .eps
                .map(|e| var_constructed.iter().map(|v| v * e * e).collect())
                .unwrap_or_default();
            let behaving = rows.iter().filter(|r| r.behaves == Some(true)).count();
            let star_all = rows.iter().filter(|r| r.star.is_some_and(|s| s.iter().all(|&b| b))).count();
            let star_known = rows.iter().filter(|r| r.star.is_some()).count();
            serde_json::json!({
                "cell": ci,
                "n": cell.n,
                "d": cell.d,
                "c": cell.c,
                "eps": cell.eps,
                "trials": rows.len(),
                "ok": ok,
                "median_var_local": median_f64(&var_local),
                "median_var_constructed": median_f64(&var_constructed),
                "median_var_constructed_eps2": median_f64(&scaled),
                "behaves_fraction": if rows.is_empty() { None } else { Some(behaving as f64 / rows.len() as f64) },
                "star_fraction": if star_known == 0 { None } else { Some(star_all as f64 / star_known as f64) },
                "tail_rates": tail_rates.get(ci),
                "median_runtime_ms": median_f64(&rows.iter().map(|r| r.runtime_ms as f64).collect::<Vec<_>>()),
            })
        })
        .collect();
    serde_json::json!({
        "preset": spec.preset.as_str(),
        "spec": spec,
        "cells": per_cell,
    })
}
