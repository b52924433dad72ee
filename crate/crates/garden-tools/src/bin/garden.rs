//! Command-line front end for the companion-planting optimization toolkit.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use garden_core::instance::generate_instance;
use garden_core::qubo::{build_qubo, decode, evaluate, QuboModel};
use garden_core::solver::{solve_exhaustive, solve_tabu, SolverParams};
use garden_core::topology::{find_embedding, validate_embedding};

use garden_tools::bench::{
    compare_solvers, default_rcs_grid, log_spaced_sweeps, run_rcs_scan, run_sweep_scan,
    ScanConfig, SolverKind,
};
use garden_tools::formats::{
    compare_to_csv, load_catalog, parse_mode, parse_topology, scan_to_csv, CompanionsFile,
    EmbeddingFile, InstanceFile, QuboFile, SamplesFile, ScanPoint,
};
use garden_tools::manifest::Manifest;
use garden_tools::plot::scan_svg;
use garden_tools::timer::BudgetTimer;

/// Exhaustive search stays feasible up to this many binary variables.
const EXHAUSTIVE_CAP: usize = 25;

#[derive(Parser)]
#[command(
    name = "garden",
    version,
    about = "Generate, compile, solve, and benchmark companion-planting optimization problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Output file path. Defaults to a standard name inside
    /// GARDEN_OUT_DIR (or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArg {
    fn resolve(&self, default_name: &str) -> PathBuf {
        match &self.out {
            Some(path) => path.clone(),
            None => {
                let dir = std::env::var_os("GARDEN_OUT_DIR")
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."));
                dir.join(default_name)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random planting instance on a two-row garden.
    Generate {
        /// Number of pots (even, at least 2).
        #[arg(long)]
        n: usize,
        /// Species sampling mode: without_replacement or with_replacement.
        #[arg(long, default_value = "without_replacement")]
        mode: String,
        /// Companion matrix JSON; defaults to the bundled catalog.
        #[arg(long)]
        companions: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compile an instance into its integer quadratic model.
    Compile {
        /// Instance JSON produced by `generate`.
        #[arg(long)]
        instance: PathBuf,
        /// Companion matrix JSON; defaults to the bundled catalog.
        #[arg(long)]
        companions: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Solve a compiled model with a classical solver.
    Solve {
        /// Model JSON produced by `compile`.
        #[arg(long)]
        qubo: PathBuf,
        /// exhaustive, sa, tabu, or partitioned.
        #[arg(long, default_value = "sa")]
        solver: String,
        #[arg(long, default_value_t = 100)]
        reads: usize,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        time_budget: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Find a minor embedding of a compiled model into a hardware graph.
    Embed {
        /// Model JSON produced by `compile`.
        #[arg(long)]
        qubo: PathBuf,
        /// chimera or pegasus.
        #[arg(long, default_value = "chimera")]
        topology: String,
        /// Hardware graph size parameter.
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Independent embedding attempts.
        #[arg(long, default_value_t = 10)]
        tries: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cross-check artifacts: instance vs model, embedding vs model,
    /// samples vs model, and the best sample against the instance rules.
    Validate {
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        qubo: Option<PathBuf>,
        #[arg(long)]
        embedding: Option<PathBuf>,
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Companion matrix JSON; defaults to the bundled catalog.
        #[arg(long)]
        companions: Option<PathBuf>,
    },
    /// Scan success rate against relative chain strength on embedded
    /// hardware (0.05 to 2.00 in steps of 0.05).
    ScanRcs {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        companions: Option<PathBuf>,
        #[arg(long, default_value = "chimera")]
        topology: String,
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        reads: usize,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        time_budget: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scan success rate against annealing sweep count (20 log-spaced
    /// points between 1 and 2000).
    ScanSweeps {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        companions: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        reads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        time_budget: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run several solvers over several compiled models and tabulate
    /// energies, runtimes, and successes.
    Compare {
        /// Model JSON files produced by `compile` (repeatable).
        #[arg(long = "qubo", required = true)]
        qubos: Vec<PathBuf>,
        /// Comma-separated solver list.
        #[arg(long, default_value = "sa,tabu,partitioned")]
        solvers: String,
        #[arg(long, default_value_t = 100)]
        reads: usize,
        #[arg(long, default_value_t = 1000)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Wall-clock budget in seconds for each (model, solver) cell.
        #[arg(long)]
        time_budget: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn finish(seed: u64, started: Instant, outputs: &[PathBuf]) -> Result<()> {
    let names: Vec<String> = outputs.iter().map(|p| p.display().to_string()).collect();
    let manifest =
        Manifest::new(command_line(), seed, started.elapsed().as_secs_f64(), names.clone());
    manifest.save_for(&outputs[0])?;
    for name in &names {
        println!("wrote {name}");
    }
    Ok(())
}

/// Best known energy: exact below the exhaustive cap, tabu search above.
fn reference_optimum(model: &QuboModel, seed: u64) -> Result<i64> {
    let set = if model.num_vars() <= EXHAUSTIVE_CAP {
        solve_exhaustive(model)
    } else {
        let params = SolverParams { seed, ..Default::default() };
        solve_tabu(model, &params, &BudgetTimer::new(None))
    };
    let set = set.map_err(|e| anyhow!("reference solve: {e}"))?;
    set.best().map(|r| r.energy).ok_or_else(|| anyhow!("reference solve returned no samples"))
}

fn load_instance_model(
    instance: &Path,
    companions: Option<&Path>,
) -> Result<(garden_core::ProblemInstance, QuboModel)> {
    let catalog = load_catalog(companions)?;
    let inst = InstanceFile::load(instance)?
        .to_instance(&catalog)
        .with_context(|| format!("loading {}", instance.display()))?;
    let model = build_qubo(&inst);
    Ok((inst, model))
}

fn write_scan_outputs(
    points: &[ScanPoint],
    x_label: &str,
    csv_path: &Path,
    seed: u64,
    started: Instant,
) -> Result<()> {
    std::fs::write(csv_path, scan_to_csv(points))
        .with_context(|| format!("writing {}", csv_path.display()))?;
    let svg_path = csv_path.with_extension("svg");
    std::fs::write(&svg_path, scan_svg(points, x_label))
        .with_context(|| format!("writing {}", svg_path.display()))?;
    finish(seed, started, &[csv_path.to_path_buf(), svg_path])
}

fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    match cli.command {
        Command::Generate { n, mode, companions, seed, out } => {
            let catalog = load_catalog(companions.as_deref())?;
            let mode = parse_mode(&mode)?;
            let inst = generate_instance(n, &catalog, mode, seed)
                .map_err(|e| anyhow!("generating instance: {e}"))?;
            let companions_ref = companions
                .as_ref()
                .map_or_else(|| "builtin:default".to_string(), |p| p.display().to_string());
            let path = out.resolve("instance.json");
            InstanceFile::from_instance(&inst, catalog.num_species(), &companions_ref)
                .save(&path)?;
            finish(seed, started, &[path])
        }
        Command::Compile { instance, companions, out } => {
            let (inst, model) = load_instance_model(&instance, companions.as_deref())?;
            let path = out.resolve("qubo.json");
            QuboFile::from_model(&model).save(&path)?;
            println!(
                "{} pots x {} species -> {} variables, {} terms",
                inst.num_pots(),
                inst.num_species(),
                model.num_vars(),
                model.num_terms()
            );
            finish(inst.seed, started, &[path])
        }
        Command::Solve { qubo, solver, reads, sweeps, seed, time_budget, out } => {
            let model = QuboFile::load(&qubo)?.to_model()?;
            let kind = SolverKind::parse(&solver)?;
            if kind == SolverKind::Exhaustive && model.num_vars() > EXHAUSTIVE_CAP {
                bail!(
                    "exhaustive search is capped at {EXHAUSTIVE_CAP} variables, model has {}",
                    model.num_vars()
                );
            }
            let params =
                SolverParams { num_reads: reads, sweeps, seed, time_budget, ..Default::default() };
            let set = kind.run(&model, &params, &BudgetTimer::new(time_budget))?;
            let json_path = out.resolve("samples.json");
            let file = SamplesFile::from_sample_set(&set);
            file.save(&json_path)?;
            let csv_path = json_path.with_extension("csv");
            std::fs::write(&csv_path, file.to_csv())
                .with_context(|| format!("writing {}", csv_path.display()))?;
            if let Some(best) = set.best() {
                println!("best energy {} over {} reads", best.energy, set.total_occurrences());
            }
            finish(seed, started, &[json_path, csv_path])
        }
        Command::Embed { qubo, topology, m, seed, tries, out } => {
            let model = QuboFile::load(&qubo)?.to_model()?;
            let kind = parse_topology(&topology)?;
            let hw = garden_core::HardwareGraph::build(kind, m, &[], &[])
                .map_err(|e| anyhow!("building hardware graph: {e}"))?;
            let edges = model.logical_edges();
            let emb = find_embedding(&edges, &hw, seed, tries)
                .map_err(|e| anyhow!("embedding: {e}"))?
                .ok_or_else(|| {
                    anyhow!("no embedding found in {tries} tries on {topology}({m})")
                })?;
            let path = out.resolve("embedding.json");
            EmbeddingFile::from_embedding(&emb, kind, m).save(&path)?;
            println!(
                "{} chains, longest {}",
                emb.num_chains(),
                emb.max_chain_length()
            );
            finish(seed, started, &[path])
        }
        Command::Validate { instance, qubo, embedding, samples, companions } => {
            validate_artifacts(
                instance.as_deref(),
                qubo.as_deref(),
                embedding.as_deref(),
                samples.as_deref(),
                companions.as_deref(),
            )
        }
        Command::ScanRcs {
            instance,
            companions,
            topology,
            m,
            reads,
            sweeps,
            seed,
            workers,
            time_budget,
            out,
        } => {
            let (_, model) = load_instance_model(&instance, companions.as_deref())?;
            let kind = parse_topology(&topology)?;
            let hw = garden_core::HardwareGraph::build(kind, m, &[], &[])
                .map_err(|e| anyhow!("building hardware graph: {e}"))?;
            let emb = find_embedding(&model.logical_edges(), &hw, seed, 10)
                .map_err(|e| anyhow!("embedding: {e}"))?
                .ok_or_else(|| anyhow!("no embedding found on {topology}({m})"))?;
            let optimum = reference_optimum(&model, seed)?;
            let cfg = ScanConfig { reads, sweeps, seed, workers, time_budget };
            let points = run_rcs_scan(&model, &emb, &hw, &default_rcs_grid(), optimum, &cfg)?;
            let csv_path = out.resolve("scan.csv");
            write_scan_outputs(&points, "relative chain strength", &csv_path, seed, started)
        }
        Command::ScanSweeps { instance, companions, reads, seed, workers, time_budget, out } => {
            let (_, model) = load_instance_model(&instance, companions.as_deref())?;
            let optimum = reference_optimum(&model, seed)?;
            let grid = log_spaced_sweeps(20, 1, 2000);
            let cfg = ScanConfig { reads, sweeps: 0, seed, workers, time_budget };
            let points = run_sweep_scan(&model, &grid, optimum, &cfg)?;
            let csv_path = out.resolve("scan.csv");
            write_scan_outputs(&points, "sweeps", &csv_path, seed, started)
        }
        Command::Compare { qubos, solvers, reads, sweeps, seed, workers, time_budget, out } => {
            let solvers: Vec<SolverKind> = solvers
                .split(',')
                .map(|s| SolverKind::parse(s.trim()))
                .collect::<Result<_>>()?;
            if solvers.is_empty() {
                bail!("no solvers given");
            }
            let mut instances = Vec::with_capacity(qubos.len());
            for path in &qubos {
                let model = QuboFile::load(path)?.to_model()?;
                if solvers.contains(&SolverKind::Exhaustive)
                    && model.num_vars() > EXHAUSTIVE_CAP
                {
                    bail!(
                        "exhaustive search is capped at {EXHAUSTIVE_CAP} variables, {} has {}",
                        path.display(),
                        model.num_vars()
                    );
                }
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                instances.push((name, model));
            }
            let params =
                SolverParams { num_reads: reads, sweeps, seed, ..Default::default() };
            let rows = compare_solvers(&instances, &solvers, &params, time_budget, workers)?;
            let path = out.resolve("compare.csv");
            std::fs::write(&path, compare_to_csv(&rows))
                .with_context(|| format!("writing {}", path.display()))?;
            finish(seed, started, &[path])
        }
    }
}

/// Cross-check whichever artifacts were provided; any inconsistency is a
/// runtime failure (exit 1).
fn validate_artifacts(
    instance: Option<&Path>,
    qubo: Option<&Path>,
    embedding: Option<&Path>,
    samples: Option<&Path>,
    companions: Option<&Path>,
) -> Result<()> {
    if instance.is_none() && qubo.is_none() && embedding.is_none() && samples.is_none() {
        bail!("nothing to validate: pass --instance, --qubo, --embedding, and/or --samples");
    }

    let inst = match instance {
        Some(path) => {
            let catalog = load_catalog(companions)?;
            let inst = InstanceFile::load(path)?
                .to_instance(&catalog)
                .with_context(|| format!("validating {}", path.display()))?;
            println!(
                "instance ok: {} pots, {} species, seed {}",
                inst.num_pots(),
                inst.num_species(),
                inst.seed
            );
            Some(inst)
        }
        None => None,
    };

    let model = match qubo {
        Some(path) => {
            let model = QuboFile::load(path)?
                .to_model()
                .with_context(|| format!("validating {}", path.display()))?;
            println!("model ok: {} variables, {} terms", model.num_vars(), model.num_terms());
            Some(model)
        }
        None => None,
    };

    if let (Some(inst), Some(model)) = (&inst, &model) {
        if inst.num_vars() != model.num_vars() {
            bail!(
                "instance needs {} variables but model has {}",
                inst.num_vars(),
                model.num_vars()
            );
        }
        // the file format does not carry the species stride, so compare
        // the mathematical content only
        let rebuilt = build_qubo(inst);
        let same = rebuilt.offset() == model.offset()
            && rebuilt.terms().eq(model.terms());
        if !same {
            bail!("model does not match the one compiled from the instance");
        }
        println!("model matches the instance");
    }

    if let Some(path) = embedding {
        let file = EmbeddingFile::load(path)?;
        let emb = file.to_embedding()?;
        let hw = file.hw.to_graph()?;
        match &model {
            Some(model) => {
                validate_embedding(&emb, &model.logical_edges(), &hw)
                    .map_err(|e| anyhow!("invalid embedding: {e}"))?;
                println!(
                    "embedding ok: {} chains on {}({}), longest {}",
                    emb.num_chains(),
                    file.hw.kind,
                    file.hw.m,
                    emb.max_chain_length()
                );
            }
            None => bail!("--embedding needs --qubo to validate against"),
        }
    }

    if let Some(path) = samples {
        let set = SamplesFile::load(path)?.to_sample_set()?;
        let model = model
            .as_ref()
            .ok_or_else(|| anyhow!("--samples needs --qubo to validate against"))?;
        for record in &set.samples {
            let energy = model
                .energy(&record.assignment)
                .map_err(|e| anyhow!("sample does not fit the model: {e}"))?;
            if energy != record.energy {
                bail!("sample claims energy {} but the model gives {energy}", record.energy);
            }
        }
        println!("samples ok: {} records with consistent energies", set.samples.len());

        if let Some(inst) = &inst {
            let best = set.best().ok_or_else(|| anyhow!("sample file is empty"))?;
            let report = evaluate(inst, &best.assignment)
                .map_err(|e| anyhow!("evaluating best sample: {e}"))?;
            if report.success {
                let t = inst.num_species();
                let placement = decode(&best.assignment, t)
                    .map_err(|e| anyhow!("decoding best sample: {e}"))?;
                let occupied = placement.iter().filter(|p| !p.is_empty()).count();
                println!(
                    "best sample is a valid planting: energy {}, adjacency cost {}, {} pots planted",
                    report.energy, report.cost, occupied
                );
            } else {
                bail!(
                    "best sample violates constraints: {} pot, {} count, {} size violations",
                    report.pot_violations.len(),
                    report.count_violations.len(),
                    report.size_violations.len()
                );
            }
        }
    }

    // keep the catalog loader honest even when only --companions is given
    if instance.is_none() {
        if let Some(path) = companions {
            let catalog = CompanionsFile::load(path)?.to_catalog()?;
            println!("companions ok: {} species", catalog.num_species());
        }
    }

    println!("validation passed");
    Ok(())
}
