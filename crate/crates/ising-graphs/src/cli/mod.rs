//! Config-driven batch front end.
//!
//! `ising-graphs <graph|kappa|c2|sweep|betac> --config FILE
//! [--seed N] [--jobs N] [--out DIR]`
//!
//! Every run writes, into the output directory: the resolved config
//! snapshot (`config.resolved.json`), the command's CSV/JSON artifacts,
//! and a `manifest.json` listing each artifact with its SHA-256. Re-running
//! with the same resolved config and seed reproduces every artifact
//! byte-for-byte, at any `--jobs` setting — all parallelism is over
//! independent keyed tasks merged in key order.
//!
//! Exit codes: 0 success; 2 configuration or I/O error; 3 saturation or
//! enumeration-cap error; 4 statistical advisory (outputs and manifest are
//! still written — e.g. a supermultiplicativity violation was detected, or
//! a Binder sweep found no crossing).

pub mod config;
pub mod emit;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::ExactError;
use crate::graphs::{Graph, GraphError};
use crate::mc::{
    estimate_magnetization_field, estimate_magnetization_plus, wolff_binder, BinderEstimate,
    EstimateWithCI, McError,
};
use crate::model::{CouplingTable, ModelError};
use crate::paperchecks::{
    binder_crossing, binder_grid, check_supermultiplicative, construct_kn,
    crossings_from_curves, fekete_limit, growth_bound_check, kappa, PaperError, EXACT_INEQ_TOL,
};

use config::{
    BoundarySpec, EngineSpec, ExperimentConfig, Overrides, SweepObservable,
};
use emit::{csv, fmt_f64, json_pretty, sha256_hex, svg_polyline, OutputWriter, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration, bad flags, or I/O failure. Exit code 2.
    #[error("{0}")]
    Config(String),
    /// A requested region touches the generation boundary, a sphere is
    /// empty, or a volume exceeds the enumeration cap. Exit code 3.
    #[error("{0}")]
    Saturation(String),
    /// A statistical check failed or found nothing; outputs were written.
    /// Exit code 4.
    #[error("{0}")]
    Advisory(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Saturation(_) => 3,
            CliError::Advisory(_) => 4,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Saturated { .. } | GraphError::RadiusCap { .. } => {
                CliError::Saturation(e.to_string())
            }
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::CapExceeded { .. } => CliError::Saturation(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<PaperError> for CliError {
    fn from(e: PaperError) -> Self {
        match e {
            PaperError::Graph(g) => g.into(),
            PaperError::Exact(x) => x.into(),
            PaperError::Model(m) => m.into(),
            PaperError::Mc(m) => m.into(),
            PaperError::EmptySphere { .. } => CliError::Saturation(e.to_string()),
            PaperError::NoCrossing(_) | PaperError::MonotonicityViolated { .. } => {
                CliError::Advisory(e.to_string())
            }
            PaperError::InvalidParam(_) => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ising-graphs",
    version,
    about = "Ising-model diagnostics on finite balls of transitive graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the configured graph; emit it with growth and Cheeger reports.
    Graph(RunArgs),
    /// Minimal two-point series κ(n) per β, with Fekete roots, the
    /// supermultiplicativity check, and the growth-bound table.
    Kappa(RunArgs),
    /// K_n witness construction and C2(K_n) table per β.
    C2(RunArgs),
    /// Monte Carlo observables over sizes × β grid, merged deterministically.
    Sweep(RunArgs),
    /// Binder-cumulant crossing estimate of β_c across sizes.
    Betac(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON experiment config (strict schema; unknown keys rejected).
    #[arg(long)]
    pub config: PathBuf,
    /// Master seed; overrides the config's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; overrides the config's `jobs`.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory; overrides `out` in the config and
    /// $ISING_GRAPHS_OUT.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command hands back: the task keys it consumed (for the
/// manifest) and an optional advisory that becomes exit code 4 after all
/// artifacts are persisted.
struct CommandOutcome {
    tasks: Vec<String>,
    advisory: Option<String>,
}

/// Runs one CLI invocation end to end and returns the manifest.
pub fn run(cli: Cli) -> Result<RunManifest, CliError> {
    let (name, args): (&str, &RunArgs) = match &cli.command {
        Command::Graph(a) => ("graph", a),
        Command::Kappa(a) => ("kappa", a),
        Command::C2(a) => ("c2", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Betac(a) => ("betac", a),
    };
    let overrides = Overrides {
        seed: args.seed,
        jobs: args.jobs,
        out: args.out.clone(),
    };
    let config = ExperimentConfig::load(&args.config)?.resolve(&overrides);
    let jobs = config.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?;

    let mut writer = OutputWriter::new(&config.out_dir())?;
    let resolved = config.emit();
    let config_sha256 = sha256_hex(resolved.as_bytes());
    writer.write("config.resolved.json", &resolved)?;

    let started = Instant::now();
    let outcome = pool.install(|| match &cli.command {
        Command::Graph(_) => cmd_graph(&config, &mut writer),
        Command::Kappa(_) => cmd_kappa(&config, &mut writer),
        Command::C2(_) => cmd_c2(&config, &mut writer),
        Command::Sweep(_) => cmd_sweep(&config, &mut writer),
        Command::Betac(_) => cmd_betac(&config, &mut writer),
    })?;
    let timing_ms = started.elapsed().as_millis() as u64;

    let manifest = writer.finish(
        name,
        config_sha256,
        config.seed,
        jobs,
        outcome.tasks,
        timing_ms,
    )?;
    match outcome.advisory {
        None => Ok(manifest),
        Some(msg) => Err(CliError::Advisory(msg)),
    }
}

/// Largest n whose ball around `x` misses the generation boundary; on
/// boundary-free families (torus) this is the largest distance from `x`.
fn largest_clean_radius(g: &Graph, x: u32) -> u32 {
    let dist = g.distances_from(x);
    let mut max_dist = 0u32;
    let mut min_flagged: Option<u32> = None;
    for v in 0..g.vertex_count() {
        max_dist = max_dist.max(dist[v]);
        if g.is_generation_boundary(v as u32) {
            min_flagged = Some(min_flagged.map_or(dist[v], |m| m.min(dist[v])));
        }
    }
    match min_flagged {
        Some(d) => d.saturating_sub(1),
        None => max_dist,
    }
}

fn cmd_graph(config: &ExperimentConfig, writer: &mut OutputWriter) -> Result<CommandOutcome, CliError> {
    let g = config.family.build()?;
    writer.write("graph.txt", &g.to_text())?;

    let origin = g.origin();
    let clean = largest_clean_radius(&g, origin);
    let growth_rows = if clean >= 1 {
        g.growth_rate_estimate(origin, clean)?.rows
    } else {
        Vec::new()
    };
    let growth_csv: Vec<Vec<String>> = growth_rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.ball_size.to_string(),
                fmt_f64(r.root),
                fmt_f64(r.running_min),
            ]
        })
        .collect();
    writer.write(
        "growth.csv",
        &csv(&["n", "ball_size", "root", "running_min"], &growth_csv),
    )?;

    let cheeger = g.cheeger_estimate(&g.default_cheeger_candidates())?;
    let cheeger_csv: Vec<Vec<String>> = cheeger
        .rows
        .iter()
        .map(|r| {
            vec![
                r.set_size.to_string(),
                r.boundary_size.to_string(),
                fmt_f64(r.ratio),
            ]
        })
        .collect();
    writer.write(
        "cheeger.csv",
        &csv(&["set_size", "boundary_size", "ratio"], &cheeger_csv),
    )?;

    let summary = serde_json::json!({
        "graph": g.id_string(),
        "family": g.family(),
        "params": g.params(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "origin": origin,
        "radius": g.radius(),
        "growth": growth_rows,
        "cheeger": cheeger,
    });
    writer.write("graph.json", &json_pretty(&summary))?;
    Ok(CommandOutcome {
        tasks: vec![format!("graph|{}", g.id_string())],
        advisory: None,
    })
}

fn provenance_cell(p: crate::mc::Method) -> String {
    p.as_str().to_string()
}

fn cmd_kappa(config: &ExperimentConfig, writer: &mut OutputWriter) -> Result<CommandOutcome, CliError> {
    let section = ExperimentConfig::require_section(&config.kappa, "kappa")?;
    config.require_nonempty_grid()?;
    let g = config.family.build()?;
    let table = CouplingTable::build(&g, &config.couplings.to_couplings())?;
    let origin = section.origin.unwrap_or_else(|| g.origin());
    let engine = config.engine.to_engine(config.seed);

    struct PerBeta {
        series: crate::paperchecks::KappaSeries,
        fekete: Option<crate::paperchecks::FeketeReport>,
        violations: Vec<crate::paperchecks::SupermultViolation>,
        growth: Vec<crate::paperchecks::GrowthBoundRow>,
    }
    let per_beta: Vec<PerBeta> = config
        .beta_grid
        .par_iter()
        .map(|&beta| -> Result<PerBeta, CliError> {
            let series = kappa(&g, &table, beta, origin, section.n_max, engine)?;
            let fekete = if section.n_max >= 3 {
                Some(fekete_limit(&series)?)
            } else {
                None
            };
            let violations = check_supermultiplicative(&series, EXACT_INEQ_TOL);
            let growth = growth_bound_check(&g, &table, beta, origin, section.n_max, engine)?;
            Ok(PerBeta {
                series,
                fekete,
                violations,
                growth,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut tasks = Vec::new();
    let mut growth_rows: Vec<Vec<String>> = Vec::new();
    let mut svg_series = Vec::new();
    let mut reports = Vec::new();
    let mut violation_total = 0usize;
    for (bi, pb) in per_beta.iter().enumerate() {
        let beta = config.beta_grid[bi];
        if let EngineSpec::Mc { .. } = config.engine {
            tasks.push(format!("fk|kappa|{}|beta={beta:.17e}", g.id_string()));
            tasks.push(format!("fk|growth|{}|beta={beta:.17e}", g.id_string()));
        } else {
            tasks.push(format!("exact|kappa|{}|beta={beta:.17e}", g.id_string()));
        }
        let rows: Vec<Vec<String>> = pb
            .series
            .values
            .iter()
            .map(|v| {
                vec![
                    v.n.to_string(),
                    fmt_f64(v.value),
                    fmt_f64(v.lo),
                    fmt_f64(v.hi),
                    v.argmin.to_string(),
                    provenance_cell(v.provenance),
                ]
            })
            .collect();
        writer.write(
            &format!("kappa_b{bi:02}.csv"),
            &csv(&["n", "value", "lo", "hi", "argmin_vertex", "provenance"], &rows),
        )?;
        for r in &pb.growth {
            growth_rows.push(vec![
                fmt_f64(beta),
                r.n.to_string(),
                r.ball_size.to_string(),
                fmt_f64(r.kappa),
                fmt_f64(r.kappa_times_ball),
                fmt_f64(r.partial_susceptibility),
                fmt_f64(r.susceptibility_lo),
                fmt_f64(r.susceptibility_hi),
            ]);
        }
        if let Some(f) = &pb.fekete {
            svg_series.push((
                format!("beta={beta}"),
                f.roots.iter().map(|&(n, r)| (n as f64, r)).collect(),
            ));
        }
        violation_total += pb.violations.len();
        reports.push(serde_json::json!({
            "beta": beta,
            "series": pb.series,
            "fekete": pb.fekete,
            "supermultiplicativity_violations": pb.violations,
            "growth_bound": pb.growth,
        }));
    }
    writer.write(
        "growth_bound.csv",
        &csv(
            &[
                "beta",
                "n",
                "ball_size",
                "kappa",
                "kappa_times_ball",
                "susceptibility",
                "susceptibility_lo",
                "susceptibility_hi",
            ],
            &growth_rows,
        ),
    )?;
    let report = serde_json::json!({
        "graph": g.id_string(),
        "origin": origin,
        "seed": config.seed,
        "engine": engine.method().as_str(),
        "per_beta": reports,
    });
    writer.write("kappa.json", &json_pretty(&report))?;
    if section.svg {
        writer.write(
            "kappa_roots.svg",
            &svg_polyline("kappa(n)^(1/n)", "n", "root", &svg_series),
        )?;
    }
    let advisory = (violation_total > 0).then(|| {
        format!("{violation_total} supermultiplicativity violation(s) recorded in kappa.json")
    });
    Ok(CommandOutcome { tasks, advisory })
}

fn cmd_c2(config: &ExperimentConfig, writer: &mut OutputWriter) -> Result<CommandOutcome, CliError> {
    let section = ExperimentConfig::require_section(&config.c2, "c2")?;
    config.require_nonempty_grid()?;
    let g = config.family.build()?;
    let table = CouplingTable::build(&g, &config.couplings.to_couplings())?;
    let x1 = section.x1.unwrap_or_else(|| g.origin());
    let engine = config.engine.to_engine(config.seed);

    let reports: Vec<crate::paperchecks::C2Report> = config
        .beta_grid
        .par_iter()
        .map(|&beta| Ok(construct_kn(&g, &table, beta, x1, section.k, section.n, engine)?))
        .collect::<Result<_, CliError>>()?;

    let mut tasks = Vec::new();
    for (bi, report) in reports.iter().enumerate() {
        let beta = config.beta_grid[bi];
        if let EngineSpec::Mc { .. } = config.engine {
            tasks.push(format!("fk|kn-select|{}|beta={beta:.17e}", g.id_string()));
            tasks.push(format!("fk|kn-estimate|{}|beta={beta:.17e}", g.id_string()));
        } else {
            tasks.push(format!("exact|c2|{}|beta={beta:.17e}", g.id_string()));
        }
        let rows: Vec<Vec<String>> = report
            .entries
            .iter()
            .map(|e| {
                vec![
                    e.n.to_string(),
                    fmt_f64(e.c2.value),
                    fmt_f64(e.c2.lo),
                    fmt_f64(e.c2.hi),
                    report.witnesses[(e.n - 1) as usize].to_string(),
                    provenance_cell(e.c2.provenance),
                ]
            })
            .collect();
        writer.write(
            &format!("c2_b{bi:02}.csv"),
            &csv(&["n", "value", "lo", "hi", "argmin_vertex", "provenance"], &rows),
        )?;
    }
    let report = serde_json::json!({
        "graph": g.id_string(),
        "x1": x1,
        "k": section.k,
        "n": section.n,
        "seed": config.seed,
        "engine": engine.method().as_str(),
        "per_beta": reports,
    });
    writer.write("c2.json", &json_pretty(&report))?;
    Ok(CommandOutcome {
        tasks,
        advisory: None,
    })
}

fn cmd_sweep(config: &ExperimentConfig, writer: &mut OutputWriter) -> Result<CommandOutcome, CliError> {
    let section = ExperimentConfig::require_section(&config.sweep, "sweep")?;
    config.require_nonempty_grid()?;
    if section.sizes.is_empty() {
        return Err(CliError::Config("sweep.sizes must not be empty".into()));
    }
    let sweeps = config.engine.mc_sweeps().ok_or_else(|| {
        CliError::Config("the sweep command needs the mc engine".into())
    })?;

    enum Cell {
        Binder(BinderEstimate),
        Mag { vertex: u32, estimate: EstimateWithCI },
    }
    let mut keys = Vec::new();
    for (si, &size) in section.sizes.iter().enumerate() {
        for (bi, &beta) in config.beta_grid.iter().enumerate() {
            keys.push((si, bi, size, beta));
        }
    }
    let cells: Vec<(String, Cell)> = keys
        .par_iter()
        .map(|&(_, _, size, beta)| -> Result<(String, Cell), CliError> {
            let g = config.family.kind().build(size)?;
            let table = CouplingTable::build(&g, &config.couplings.to_couplings())?;
            match section.observable {
                SweepObservable::Binder => {
                    if config.h != 0.0 || config.boundary != BoundarySpec::Free {
                        return Err(CliError::Config(
                            "binder sweeps need h = 0 and free boundary".into(),
                        ));
                    }
                    let key = format!("binder|{}|beta={beta:.17e}", g.id_string());
                    let est = wolff_binder(&g, &table, beta, sweeps, config.seed)?;
                    Ok((key, Cell::Binder(est)))
                }
                SweepObservable::Magnetization => {
                    let x = g.origin();
                    match config.boundary {
                        BoundarySpec::Plus => {
                            let key = format!(
                                "plusmag|{}|beta={beta:.17e}|x={x}",
                                g.id_string()
                            );
                            let est =
                                estimate_magnetization_plus(&g, &table, beta, x, sweeps, config.seed)?;
                            Ok((key, Cell::Mag { vertex: x, estimate: est }))
                        }
                        BoundarySpec::Free => {
                            let h = config.h;
                            let key = format!(
                                "fieldmag|{}|beta={beta:.17e}|h={h:.17e}|x={x}",
                                g.id_string()
                            );
                            let est = estimate_magnetization_field(
                                &g, &table, beta, h, x, sweeps, config.seed,
                            )?;
                            Ok((key, Cell::Mag { vertex: x, estimate: est }))
                        }
                    }
                }
            }
        })
        .collect::<Result<_, _>>()?;

    let mut tasks = Vec::new();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut records = Vec::new();
    let header: Vec<&str> = match section.observable {
        SweepObservable::Binder => vec![
            "size", "beta", "binder", "std_error", "m2", "m4", "n_samples", "seed", "method",
        ],
        SweepObservable::Magnetization => vec![
            "size", "beta", "vertex", "mean", "std_error", "tau", "n_samples", "seed", "method",
        ],
    };
    for (&(_, _, size, beta), (key, cell)) in keys.iter().zip(&cells) {
        tasks.push(key.clone());
        match cell {
            Cell::Binder(est) => {
                rows.push(vec![
                    size.to_string(),
                    fmt_f64(beta),
                    fmt_f64(est.binder),
                    fmt_f64(est.std_error),
                    fmt_f64(est.m2),
                    fmt_f64(est.m4),
                    est.n_samples.to_string(),
                    config.seed.to_string(),
                    "wolff".to_string(),
                ]);
                records.push(serde_json::json!({
                    "graph": config.family.kind().name(),
                    "size": size,
                    "beta": beta,
                    "observable": "binder",
                    "binder": est.binder,
                    "std_error": est.std_error,
                    "m2": est.m2,
                    "m4": est.m4,
                    "n_samples": est.n_samples,
                    "seed": config.seed,
                    "method": "wolff",
                }));
            }
            Cell::Mag { vertex, estimate } => {
                rows.push(vec![
                    size.to_string(),
                    fmt_f64(beta),
                    vertex.to_string(),
                    fmt_f64(estimate.mean),
                    fmt_f64(estimate.std_error),
                    fmt_f64(estimate.autocorrelation_time),
                    estimate.n_samples.to_string(),
                    config.seed.to_string(),
                    estimate.method.as_str().to_string(),
                ]);
                records.push(serde_json::json!({
                    "graph": config.family.kind().name(),
                    "size": size,
                    "beta": beta,
                    "vertex": vertex,
                    "mean": estimate.mean,
                    "std_error": estimate.std_error,
                    "tau": estimate.autocorrelation_time,
                    "n_samples": estimate.n_samples,
                    "seed": config.seed,
                    "method": estimate.method.as_str(),
                }));
            }
        }
    }
    writer.write("sweep.csv", &csv(&header, &rows))?;
    writer.write("sweep.json", &json_pretty(&serde_json::json!({ "records": records })))?;

    // Adjacent-size Binder crossings, when the sweep can support them.
    if section.observable == SweepObservable::Binder && section.sizes.len() >= 2 {
        let mut curves: Vec<Vec<BinderEstimate>> =
            vec![Vec::with_capacity(config.beta_grid.len()); section.sizes.len()];
        for (&(si, _, _, _), (_, cell)) in keys.iter().zip(&cells) {
            if let Cell::Binder(est) = cell {
                curves[si].push(*est);
            }
        }
        let crossings: Vec<serde_json::Value> = (0..section.sizes.len() - 1)
            .map(|si| {
                let at = binder_crossing(&config.beta_grid, &curves[si], &curves[si + 1])
                    .map(|(b, _)| b);
                serde_json::json!({
                    "sizes": [section.sizes[si], section.sizes[si + 1]],
                    "beta": at,
                })
            })
            .collect();
        let found: Vec<f64> = crossings
            .iter()
            .filter_map(|c| c["beta"].as_f64())
            .collect();
        let estimate = (!found.is_empty())
            .then(|| found.iter().sum::<f64>() / found.len() as f64);
        writer.write(
            "sweep_crossings.json",
            &json_pretty(&serde_json::json!({
                "crossings": crossings,
                "estimate": estimate,
            })),
        )?;
    }
    Ok(CommandOutcome {
        tasks,
        advisory: None,
    })
}

fn cmd_betac(config: &ExperimentConfig, writer: &mut OutputWriter) -> Result<CommandOutcome, CliError> {
    let section = ExperimentConfig::require_section(&config.betac, "betac")?;
    config.require_nonempty_grid()?;
    let sweeps = config.engine.mc_sweeps().ok_or_else(|| {
        CliError::Config("the betac command needs the mc engine".into())
    })?;
    let j = config.couplings.nearest_neighbor_j().ok_or_else(|| {
        CliError::Config("betac needs nearest_neighbor couplings".into())
    })?;
    if section.sizes.len() < 3 {
        return Err(CliError::Config("betac needs at least 3 sizes".into()));
    }
    if config.beta_grid.len() < 5 {
        return Err(CliError::Config("betac needs at least 5 beta grid points".into()));
    }
    let family = config.family.kind();

    // The curves are computed first and persisted unconditionally, so a
    // grid that misses the crossing is still inspectable from the CSV.
    let curves = binder_grid(
        &family,
        j,
        &section.sizes,
        &config.beta_grid,
        sweeps,
        config.seed,
    )?;

    let mut tasks = Vec::new();
    for &size in &section.sizes {
        let g = family.build(size)?;
        for &beta in &config.beta_grid {
            tasks.push(format!("binder|{}|beta={beta:.17e}", g.id_string()));
        }
    }

    let rows: Vec<Vec<String>> = curves
        .iter()
        .flat_map(|(size, curve)| {
            curve.iter().map(move |est| {
                vec![
                    size.to_string(),
                    fmt_f64(est.beta),
                    fmt_f64(est.binder),
                    fmt_f64(est.std_error),
                    fmt_f64(est.m2),
                    fmt_f64(est.m4),
                    est.n_samples.to_string(),
                ]
            })
        })
        .collect();
    writer.write(
        "betac_curves.csv",
        &csv(
            &["size", "beta", "binder", "std_error", "m2", "m4", "n_samples"],
            &rows,
        ),
    )?;

    let tree_oracle = match family {
        crate::graphs::Family::Tree { degree } => {
            Some(crate::paperchecks::tree_beta_c_oracle(degree, j)?)
        }
        _ => None,
    };
    match crossings_from_curves(&config.beta_grid, &curves) {
        Ok((crossings, estimate, uncertainty)) => {
            writer.write(
                "betac.json",
                &json_pretty(&serde_json::json!({
                    "graph_family": family.name(),
                    "j": j,
                    "seed": config.seed,
                    "estimate": estimate,
                    "uncertainty": uncertainty,
                    "crossings": crossings,
                    "tree_oracle": tree_oracle,
                    "curves": curves,
                })),
            )?;
            Ok(CommandOutcome {
                tasks,
                advisory: None,
            })
        }
        Err(PaperError::NoCrossing(msg)) => Ok(CommandOutcome {
            tasks,
            advisory: Some(format!("no Binder crossing: {msg}")),
        }),
        Err(other) => Err(other.into()),
    }
}
