//! spreadlab CLI: generate graphs, decompose giants, compute and estimate
//! spread, build the explicit constructions, certify expansion, run sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spreadlab::decompose::{behaves, Decomposition};
use spreadlab::expansion::{
    alpha_expander_check, beta_eta_check, candidate_decorated_f, cheeger_exact,
    cheeger_spectral_lower, verify_decorated_expander, CheckMode,
};
use spreadlab::gen::{gen_gnp, gen_regular, RegularMode};
use spreadlab::graph::Graph;
use spreadlab::harness::{run_sweep, selfcheck, Preset, SweepSpec};
use spreadlab::spread::{
    b_sets, exact_spread, kernel_path_function, local_search_spread, ratio_string,
    three_level_function, upper_bound_diameter, variance, SpreadResult,
};

#[derive(Parser)]
#[command(name = "spreadlab", version, about = "Graph spread laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Gen(GenArgs),
    /// Decompose the giant component: core, kernel, pendant trees, excess.
    Decompose(DecomposeArgs),
    /// Exact spread by exhaustive search (small graphs).
    SpreadExact(SpreadExactArgs),
    /// Local-search lower bound on the spread.
    SpreadEstimate(SpreadEstimateArgs),
    /// Build an explicit Lipschitz function (kernel-path or three-level).
    ConstructF(ConstructArgs),
    /// Verify an expansion certificate.
    Certify(CertifyArgs),
    /// Run a preset experiment sweep, writing records.csv and summary.json.
    Sweep(SweepArgs),
    /// Run the reduced acceptance checks; nonzero exit on failure.
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Regular,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Reject,
    Erase,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: usize,
    /// Edge probability (gnp).
    #[arg(long)]
    p: Option<f64>,
    /// Mean degree, i.e. p = c/n (gnp).
    #[arg(long)]
    c: Option<f64>,
    /// Degree (regular).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pairing repair mode for the regular model; default reject for d <= 8,
    /// erase above.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Supercriticality parameter for the behaves checks.
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Emit machine-readable JSON instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpreadExactArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// Vertex-count guard override.
    #[arg(long)]
    cap: Option<usize>,
    /// Also write the witness, one value per line.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Args)]
struct SpreadEstimateArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long, default_value_t = 20)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructMode {
    Kernel,
    Threelevel,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    mode: ConstructMode,
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Average-degree parameter (three-level mode).
    #[arg(long)]
    d: Option<usize>,
    /// Output: one integer per line in input vertex order.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKindArg {
    Cheeger,
    Alpha,
    Betaeta,
    Decorated,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertModeArg {
    Exact,
    Random,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long, value_enum)]
    kind: CertKindArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Vertex set of F for the decorated check (one id per line); defaults
    /// to the 2-core of the giant component.
    #[arg(long = "F", alias = "f", value_name = "FILE")]
    f: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    mode: CertModeArg,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Full sweep spec as JSON; other flags are ignored when given.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Comma-separated n values.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    restarts: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Complete,
    Regular,
    Gnp,
    Epsilon,
    Highdeg,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Preset {
        match p {
            PresetArg::Complete => Preset::Complete,
            PresetArg::Regular => Preset::Regular,
            PresetArg::Gnp => Preset::Gnp,
            PresetArg::Epsilon => Preset::Epsilon,
            PresetArg::Highdeg => Preset::Highdeg,
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(a) => cmd_gen(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::SpreadExact(a) => cmd_spread_exact(a),
        Command::SpreadEstimate(a) => cmd_spread_estimate(a),
        Command::ConstructF(a) => cmd_construct(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Selfcheck => cmd_selfcheck(),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_values(path: &Path, values: &[i64]) -> Result<()> {
    let body: String = values.iter().map(|v| format!("{v}\n")).collect();
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn spread_result_json(res: &SpreadResult, witness_path: Option<&Path>) -> serde_json::Value {
    serde_json::json!({
        "kind": res.kind,
        "value": ratio_string(res.value),
        "value_f64": res.value_f64(),
        "method": res.method,
        "stats": res.stats,
        "witness_path": witness_path.map(|p| p.display().to_string()),
    })
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let graph = match a.model {
        Model::Gnp => {
            let p = match (a.p, a.c) {
                (Some(p), None) => p,
                (None, Some(c)) => c / a.n as f64,
                _ => bail!("gnp needs exactly one of --p or --c"),
            };
            gen_gnp(a.n, p, a.seed)?
        }
        Model::Regular => {
            let d = a.d.context("regular model needs --d")?;
            let mode = match a.mode {
                Some(Mode::Reject) => RegularMode::Reject,
                Some(Mode::Erase) => RegularMode::Erase,
                None if d <= 8 => RegularMode::Reject,
                None => RegularMode::Erase,
            };
            let sample = gen_regular(a.n, d, a.seed, mode)?;
            if !sample.exactly_regular {
                eprintln!(
                    "note: erase mode removed loops/parallels; graph is not exactly {d}-regular"
                );
            }
            sample.graph
        }
    };
    fs::write(&a.out, graph.to_edge_list())
        .with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "wrote {} ({} vertices, {} edges)",
        a.out.display(),
        graph.vertex_count(),
        graph.edge_count()
    );
    Ok(())
}

fn cmd_decompose(a: DecomposeArgs) -> Result<()> {
    let g = read_graph(&a.r#in)?;
    let dec = Decomposition::analyze(&g);
    let report = behaves(&dec, g.vertex_count(), a.eps, a.delta)?;
    let mut length_histogram = std::collections::BTreeMap::new();
    if let Some(k) = &dec.kernel {
        for e in k.edges() {
            *length_histogram.entry(e.length).or_insert(0usize) += 1;
        }
    }
    let value = serde_json::json!({
        "n": dec.source_n,
        "m": dec.source_m,
        "giant": dec.giant_size(),
        "core": dec.core_size(),
        "kernel_vertices": dec.kernel_size(),
        "kernel_edges": dec.kernel.as_ref().map(|k| k.edge_count()),
        "excess": dec.excess,
        "max_pendant_tree": dec.max_pendant_tree_size(),
        "kernel_length_histogram": length_histogram,
        "behaves": report,
    });
    if a.json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!(
            "giant {} | core {} | kernel {}v/{}e | excess {} | max pendant {} | behaves {}",
            dec.giant_size(),
            dec.core_size(),
            dec.kernel_size(),
            dec.kernel.as_ref().map_or(0, |k| k.edge_count()),
            dec.excess,
            dec.max_pendant_tree_size(),
            report.behaves
        );
    }
    Ok(())
}

fn cmd_spread_exact(a: SpreadExactArgs) -> Result<()> {
    let g = read_graph(&a.r#in)?;
    let res = exact_spread(&g, a.cap)?;
    if let Some(path) = &a.witness_out {
        write_values(
            path,
            res.witness
                .as_ref()
                .expect("exact result has witness")
                .values(),
        )?;
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&spread_result_json(&res, a.witness_out.as_deref()))?
    );
    Ok(())
}

fn cmd_spread_estimate(a: SpreadEstimateArgs) -> Result<()> {
    let g = read_graph(&a.r#in)?;
    let res = local_search_spread(&g, a.restarts, a.seed)?;
    let ub = upper_bound_diameter(&g)?;
    if let Some(path) = &a.witness_out {
        write_values(
            path,
            res.witness
                .as_ref()
                .expect("local search has witness")
                .values(),
        )?;
    }
    let mut value = spread_result_json(&res, a.witness_out.as_deref());
    value["diameter_upper_bound"] = serde_json::json!(ratio_string(ub.value));
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn cmd_construct(a: ConstructArgs) -> Result<()> {
    let g = read_graph(&a.r#in)?;
    match a.mode {
        ConstructMode::Kernel => {
            let eps = a.eps.context("kernel mode needs --eps")?;
            let dec = Decomposition::analyze(&g);
            let kp = kernel_path_function(&dec, eps, a.delta)?;
            let var = variance(&dec.h, &kp.function)?;
            let bs = b_sets(&dec, &kp.function, kp.r, eps)?;
            // Values in input order: giant vertices carry f, others 0.
            let mut values = vec![0i64; g.vertex_count()];
            for (local, &orig) in dec.giant_map.iter().enumerate() {
                values[orig] = kp.function.value(local);
            }
            write_values(&a.out, &values)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "mode": "kernel",
                    "r": kp.r,
                    "short_threshold": kp.short_threshold,
                    "long_edges": kp.long_edge_count,
                    "variance_on_giant": ratio_string(var),
                    "b_plus_sizes": bs.b_plus_sizes,
                    "star": bs.star,
                    "out": a.out.display().to_string(),
                }))?
            );
        }
        ConstructMode::Threelevel => {
            let d = a.d.context("threelevel mode needs --d")?;
            let tl = three_level_function(&g, d)?;
            write_values(&a.out, tl.function.values())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "mode": "threelevel",
                    "bound": ratio_string(tl.bound),
                    "variance": ratio_string(tl.variance),
                    "t": tl.t,
                    "out": a.out.display().to_string(),
                }))?
            );
        }
    }
    Ok(())
}

fn cmd_certify(a: CertifyArgs) -> Result<()> {
    let g = read_graph(&a.r#in)?;
    let mode = match a.mode {
        CertModeArg::Exact => CheckMode::Exact,
        CertModeArg::Random => CheckMode::Randomized {
            samples: a.samples,
            seed: a.seed,
        },
    };
    let value = match a.kind {
        CertKindArg::Cheeger => {
            if g.vertex_count() <= spreadlab::expansion::EXACT_ENUM_CAP {
                let (phi, set) = cheeger_exact(&g, None)?;
                serde_json::json!({
                    "kind": "cheeger",
                    "method": "exact_enumeration",
                    "phi": ratio_string(phi),
                    "phi_f64": *phi.numer() as f64 / *phi.denom() as f64,
                    "minimizing_set": set,
                })
            } else {
                let bound = cheeger_spectral_lower(&g, 1e-6)?;
                serde_json::json!({
                    "kind": "cheeger",
                    "method": "spectral_bound",
                    "phi_lower_bound": bound,
                })
            }
        }
        CertKindArg::Alpha => {
            let alpha = a.alpha.context("--alpha required")?;
            serde_json::to_value(alpha_expander_check(&g, alpha, mode)?)?
        }
        CertKindArg::Betaeta => {
            let beta = a.beta.context("--beta required")?;
            let eta = a.eta.context("--eta required")?;
            serde_json::to_value(beta_eta_check(&g, beta, eta, mode))?
        }
        CertKindArg::Decorated => {
            let alpha = a.alpha.context("--alpha required")?;
            let f_set = match &a.f {
                Some(path) => fs::read_to_string(path)?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| l.trim().parse::<usize>().context("bad vertex id"))
                    .collect::<Result<Vec<_>>>()?,
                None => {
                    let dec = Decomposition::analyze(&g);
                    // Map core ids (giant-local) back to input ids.
                    candidate_decorated_f(&dec)?
                        .into_iter()
                        .map(|v| dec.giant_map[v])
                        .collect()
                }
            };
            serde_json::to_value(verify_decorated_expander(&g, &f_set, alpha, None)?)?
        }
    };
    if a.json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{value}");
    }
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let spec: SweepSpec = match &a.spec {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)
            .with_context(|| format!("parsing {}", path.display()))?,
        None => {
            let preset = a.preset.context("need --spec or --preset")?;
            SweepSpec {
                preset: preset.into(),
                n_values: if a.n.is_empty() {
                    vec![100]
                } else {
                    a.n.clone()
                },
                trials: a.trials,
                master_seed: a.seed,
                delta: 0.05,
                restarts: a.restarts,
                d: 3,
                d_values: vec![3, 10, 20, 50],
                c: 2.0,
                eps_exponent: 0.25,
            }
        }
    };
    let out = run_sweep(&spec)?;
    fs::create_dir_all(&a.out)?;
    let csv_path = a.out.join("records.csv");
    let summary_path = a.out.join("summary.json");
    fs::write(&csv_path, &out.csv)?;
    fs::write(&summary_path, serde_json::to_string_pretty(&out.summary)?)?;
    let failures = out.records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "wrote {} and {} ({} records, {} with errors)",
        csv_path.display(),
        summary_path.display(),
        out.records.len(),
        failures
    );
    Ok(())
}

fn cmd_selfcheck() -> Result<()> {
    let report = selfcheck();
    print!("{}", report.render());
    if !report.all_pass {
        std::process::exit(1);
    }
    Ok(())
}
