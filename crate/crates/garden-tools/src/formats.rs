//! On-disk JSON and CSV formats.
//!
//! All data files are deterministic for identical inputs: maps are sorted,
//! floats round-trip through serde_json, and nothing time-dependent is
//! written here (wall-clock data lives in the run manifest).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use garden_core::instance::{CompanionsMatrix, GardenGraph, ProblemInstance, SamplingMode};
use garden_core::qubo::QuboModel;
use garden_core::solver::{SampleRecord, SampleSet, SolverParams};
use garden_core::topology::{Embedding, HardwareGraph, TopologyKind};
use garden_core::Assignment;

/// The species catalog bundled with the binary.
pub const DEFAULT_COMPANIONS_JSON: &str = include_str!("../data/companions_default.json");

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Species catalog: names, size flags (0 large, 1 small), relation matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanionsFile {
    pub species: Vec<String>,
    pub sizes: Vec<u8>,
    pub matrix: Vec<Vec<i8>>,
}

impl CompanionsFile {
    pub fn from_catalog(catalog: &CompanionsMatrix) -> Self {
        Self {
            species: catalog.species_names().to_vec(),
            sizes: catalog.sizes().to_vec(),
            matrix: catalog.values().to_vec(),
        }
    }

    pub fn to_catalog(&self) -> Result<CompanionsMatrix> {
        CompanionsMatrix::new(self.species.clone(), self.sizes.clone(), self.matrix.clone())
            .map_err(|e| anyhow::anyhow!("invalid companions matrix: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

/// Load a catalog from a path, or the bundled default when `None`.
pub fn load_catalog(path: Option<&Path>) -> Result<CompanionsMatrix> {
    let file: CompanionsFile = match path {
        Some(p) => CompanionsFile::load(p)?,
        None => serde_json::from_str(DEFAULT_COMPANIONS_JSON)
            .context("parsing bundled companions catalog")?,
    };
    file.to_catalog()
}

/// Problem instance. `counts` lives in full-catalog index space so the
/// file round-trips against the referenced companions file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub seed: u64,
    pub mode: String,
    pub counts: Vec<u64>,
    pub edges: Vec<(usize, usize)>,
    pub lambdas: (i64, i64, i64),
    pub companions_ref: String,
}

impl InstanceFile {
    pub fn from_instance(
        inst: &ProblemInstance,
        catalog_len: usize,
        companions_ref: &str,
    ) -> Self {
        let mut counts = vec![0u64; catalog_len];
        for (j, &c) in inst.counts.iter().enumerate() {
            counts[inst.catalog_indices[j]] = c;
        }
        Self {
            n: inst.garden.num_pots(),
            seed: inst.seed,
            mode: mode_name(inst.mode).to_string(),
            counts,
            edges: inst.garden.edges().to_vec(),
            lambdas: inst.lambdas,
            companions_ref: companions_ref.to_string(),
        }
    }

    /// Rebuild the instance against the full catalog it references.
    pub fn to_instance(&self, catalog: &CompanionsMatrix) -> Result<ProblemInstance> {
        if self.counts.len() != catalog.num_species() {
            bail!(
                "counts length {} does not match catalog of {} species",
                self.counts.len(),
                catalog.num_species()
            );
        }
        let mode = parse_mode(&self.mode)?;
        let catalog_indices: Vec<usize> = match mode {
            SamplingMode::WithoutReplacement => {
                (0..self.counts.len()).filter(|&j| self.counts[j] > 0).collect()
            }
            SamplingMode::WithReplacement => (0..self.counts.len()).collect(),
        };
        let counts: Vec<u64> = catalog_indices.iter().map(|&j| self.counts[j]).collect();
        let companions = catalog.restrict(&catalog_indices);
        let garden = GardenGraph::from_edges(self.n, self.edges.clone())
            .map_err(|e| anyhow::anyhow!("invalid garden graph: {e}"))?;
        let inst = ProblemInstance {
            garden,
            companions,
            catalog_indices,
            counts,
            lambdas: self.lambdas,
            seed: self.seed,
            mode,
        };
        inst.validate().map_err(|e| anyhow::anyhow!("invalid instance: {e}"))?;
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

pub fn mode_name(mode: SamplingMode) -> &'static str {
    match mode {
        SamplingMode::WithoutReplacement => "without_replacement",
        SamplingMode::WithReplacement => "with_replacement",
    }
}

pub fn parse_mode(name: &str) -> Result<SamplingMode> {
    match name {
        "without_replacement" => Ok(SamplingMode::WithoutReplacement),
        "with_replacement" => Ok(SamplingMode::WithReplacement),
        other => bail!("unknown sampling mode {other:?}"),
    }
}

/// Compiled model: strictly upper-triangular integer terms, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuboFile {
    pub num_vars: usize,
    pub offset: i64,
    pub terms: Vec<(u32, u32, i64)>,
}

impl QuboFile {
    pub fn from_model(model: &QuboModel) -> Self {
        Self {
            num_vars: model.num_vars(),
            offset: model.offset(),
            terms: model.terms().map(|((a, b), c)| (a, b, c)).collect(),
        }
    }

    pub fn to_model(&self) -> Result<QuboModel> {
        for &(a, b, c) in &self.terms {
            if a > b {
                bail!("term ({a}, {b}) is below the diagonal");
            }
            if b as usize >= self.num_vars {
                bail!("term ({a}, {b}) is out of range for {} variables", self.num_vars);
            }
            if c == 0 {
                bail!("term ({a}, {b}) has a zero coefficient");
            }
        }
        Ok(QuboModel::from_terms(
            self.num_vars,
            0,
            self.terms.iter().map(|&(a, b, c)| ((a, b), c)),
            self.offset,
        ))
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDto {
    pub num_reads: usize,
    pub sweeps: usize,
    pub beta_range: Option<(f64, f64)>,
    pub tenure: usize,
    pub restarts: usize,
    pub subproblem_size: usize,
    pub seed: u64,
}

impl ParamsDto {
    pub fn from_params(p: &SolverParams) -> Self {
        Self {
            num_reads: p.num_reads,
            sweeps: p.sweeps,
            beta_range: p.beta_range,
            tenure: p.tenure,
            restarts: p.restarts,
            subproblem_size: p.subproblem_size,
            seed: p.seed,
        }
    }

    pub fn to_params(&self, time_budget: Option<f64>) -> SolverParams {
        SolverParams {
            num_reads: self.num_reads,
            sweeps: self.sweeps,
            beta_range: self.beta_range,
            tenure: self.tenure,
            restarts: self.restarts,
            subproblem_size: self.subproblem_size,
            time_budget,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDto {
    pub bits: Vec<u8>,
    pub energy: i64,
    pub occurrences: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain_break_fraction: Option<f64>,
}

/// Sample batch. Wall-clock time is deliberately absent; it goes to the
/// manifest so equal-seed runs stay byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplesFile {
    pub solver: String,
    pub seed: u64,
    pub params: ParamsDto,
    pub samples: Vec<SampleDto>,
}

impl SamplesFile {
    pub fn from_sample_set(set: &SampleSet) -> Self {
        Self {
            solver: set.solver_name.clone(),
            seed: set.seed,
            params: ParamsDto::from_params(&set.params),
            samples: set
                .samples
                .iter()
                .map(|r| SampleDto {
                    bits: r.assignment.bits().to_vec(),
                    energy: r.energy,
                    occurrences: r.occurrences,
                    chain_break_fraction: r.chain_break_fraction,
                })
                .collect(),
        }
    }

    pub fn to_sample_set(&self) -> Result<SampleSet> {
        let mut samples = Vec::with_capacity(self.samples.len());
        for dto in &self.samples {
            let assignment = Assignment::new(dto.bits.clone())
                .map_err(|e| anyhow::anyhow!("invalid sample bits: {e}"))?;
            samples.push(SampleRecord {
                assignment,
                energy: dto.energy,
                occurrences: dto.occurrences,
                chain_break_fraction: dto.chain_break_fraction,
            });
        }
        Ok(SampleSet {
            solver_name: self.solver.clone(),
            samples,
            wall_time: 0.0,
            seed: self.seed,
            params: self.params.to_params(None),
        })
    }

    /// `energy,occurrences` rows, ascending by energy.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("energy,occurrences\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{}", s.energy, s.occurrences);
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwRef {
    pub kind: String,
    pub m: usize,
}

impl HwRef {
    pub fn to_graph(&self) -> Result<HardwareGraph> {
        let kind = parse_topology(&self.kind)?;
        HardwareGraph::build(kind, self.m, &[], &[])
            .map_err(|e| anyhow::anyhow!("invalid hardware graph: {e}"))
    }
}

pub fn parse_topology(name: &str) -> Result<TopologyKind> {
    match name {
        "chimera" => Ok(TopologyKind::Chimera),
        "pegasus" => Ok(TopologyKind::Pegasus),
        other => bail!("unknown topology {other:?}"),
    }
}

/// Minor embedding: logical variable -> hardware chain, plus the hardware
/// graph it targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub chains: BTreeMap<String, Vec<u32>>,
    pub hw: HwRef,
}

impl EmbeddingFile {
    pub fn from_embedding(emb: &Embedding, kind: TopologyKind, m: usize) -> Self {
        let chains = emb
            .chains()
            .iter()
            .map(|(&var, chain)| (var.to_string(), chain.iter().copied().collect()))
            .collect();
        Self { chains, hw: HwRef { kind: kind.to_string(), m } }
    }

    pub fn to_embedding(&self) -> Result<Embedding> {
        let mut chains = BTreeMap::new();
        for (key, nodes) in &self.chains {
            let var: u32 = key.parse().with_context(|| format!("chain key {key:?}"))?;
            if chains.insert(var, nodes.iter().copied().collect()).is_some() {
                bail!("duplicate chain for variable {var}");
            }
        }
        Ok(Embedding::from_chains(chains))
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

/// One point of a parameter scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    /// Scanned quantity (relative chain strength, sweep count, ...).
    pub axis: f64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Number of reads behind the rate.
    pub n: u64,
    pub best_energy: i64,
    pub seconds: f64,
}

/// `axis,rate,ci_low,ci_high,n,best_energy,seconds` rows.
pub fn scan_to_csv(points: &[ScanPoint]) -> String {
    let mut out = String::from("axis,rate,ci_low,ci_high,n,best_energy,seconds\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.axis, p.rate, p.ci_low, p.ci_high, p.n, p.best_energy, p.seconds
        );
    }
    out
}

/// One comparison row: a solver's best result on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub instance: String,
    pub vars: usize,
    pub solver: String,
    pub energy: i64,
    pub seconds: f64,
    /// Whether the solver matched the best energy any solver found.
    pub success: bool,
}

/// `instance,vars,solver,energy,seconds,success` rows.
pub fn compare_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("instance,vars,solver,energy,seconds,success\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.instance, r.vars, r.solver, r.energy, r.seconds, r.success
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use garden_core::instance::generate_instance;
    use garden_core::qubo::build_qubo;
    use garden_core::solver::{solve_sa, NoStop};
    use garden_core::topology::find_embedding;

    #[test]
    fn bundled_catalog_matches_builtin_example() {
        let bundled = load_catalog(None).unwrap();
        assert_eq!(bundled, CompanionsMatrix::example());
    }

    #[test]
    fn bundled_catalog_file_is_canonical() {
        // the data file must be exactly what the serializer would emit
        let file = CompanionsFile::from_catalog(&CompanionsMatrix::example());
        let mut text = serde_json::to_string_pretty(&file).unwrap();
        text.push('\n');
        assert_eq!(DEFAULT_COMPANIONS_JSON, text);
    }

    #[test]
    fn instance_round_trips_without_replacement() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(6, &catalog, SamplingMode::WithoutReplacement, 5).unwrap();
        let file = InstanceFile::from_instance(&inst, catalog.num_species(), "default");
        let back = file.to_instance(&catalog).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn instance_round_trips_with_replacement() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(8, &catalog, SamplingMode::WithReplacement, 11).unwrap();
        let file = InstanceFile::from_instance(&inst, catalog.num_species(), "default");
        let back = file.to_instance(&catalog).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn qubo_round_trips() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 3).unwrap();
        let model = build_qubo(&inst);
        let file = QuboFile::from_model(&model);
        let back = file.to_model().unwrap();
        assert_eq!(model.num_vars(), back.num_vars());
        assert_eq!(model.offset(), back.offset());
        assert_eq!(
            model.terms().collect::<Vec<_>>(),
            back.terms().collect::<Vec<_>>()
        );
        // terms are sorted upper-triangular
        for w in file.terms.windows(2) {
            assert!((w[0].0, w[0].1) < (w[1].0, w[1].1));
        }
    }

    #[test]
    fn qubo_rejects_malformed_terms() {
        let bad = QuboFile { num_vars: 3, offset: 0, terms: vec![(2, 1, 5)] };
        assert!(bad.to_model().is_err());
        let bad = QuboFile { num_vars: 3, offset: 0, terms: vec![(1, 3, 5)] };
        assert!(bad.to_model().is_err());
    }

    #[test]
    fn samples_round_trip_and_csv() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 9).unwrap();
        let model = build_qubo(&inst);
        let params = SolverParams { num_reads: 20, sweeps: 50, ..Default::default() };
        let set = solve_sa(&model, &params, &NoStop).unwrap();
        let file = SamplesFile::from_sample_set(&set);
        let back = file.to_sample_set().unwrap();
        assert_eq!(set.samples, back.samples);

        let csv = file.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("energy,occurrences"));
        assert_eq!(lines.count(), file.samples.len());
    }

    #[test]
    fn embedding_round_trips() {
        let hw = HardwareGraph::chimera(2).unwrap();
        let logical = [(0u32, 1u32), (1, 2), (0, 2)];
        let emb = find_embedding(&logical, &hw, 1, 20).unwrap().unwrap();
        let file = EmbeddingFile::from_embedding(&emb, TopologyKind::Chimera, 2);
        let back = file.to_embedding().unwrap();
        assert_eq!(emb, back);
        assert_eq!(file.hw.to_graph().unwrap().num_nodes(), hw.num_nodes());
    }

    #[test]
    fn csv_headers() {
        assert!(scan_to_csv(&[]).starts_with("axis,rate,ci_low,ci_high,n,best_energy,seconds\n"));
        assert!(compare_to_csv(&[]).starts_with("instance,vars,solver,energy,seconds,success\n"));
    }

    #[test]
    fn serialization_is_deterministic() {
        let catalog = CompanionsMatrix::example();
        let inst = generate_instance(4, &catalog, SamplingMode::WithoutReplacement, 2).unwrap();
        let file = InstanceFile::from_instance(&inst, catalog.num_species(), "default");
        let a = serde_json::to_string_pretty(&file).unwrap();
        let b = serde_json::to_string_pretty(&file).unwrap();
        assert_eq!(a, b);
    }
}
