//! Suite runner: a corpus of programs crossed with a list of generator
//! descriptors, producing per-pair fooling reports plus aggregate tables.
//!
//! Determinism contract: given the same spec and master seed, re-runs
//! produce byte-identical CSV and JSON. Per-entry seeds come from a
//! counter-mode splitmix64 over the master seed and are recorded in every
//! row. Corpus-side resolution failures and honest-mode infeasibility are
//! soft errors (recorded, run continues, exit stays clean); generator-side
//! failures are hard errors and make the run exit nonzero.

use crate::families::{self, Rng64};
use generators::{
    read_once_poly_prg, GenError, Generator, HashTreeGenerator, LocallyMonotonePrg,
    ShortXorGenerator, SmallBiasGenerator, UniformGenerator, Width3Prg,
};
use oracle::{fooling_error, sampled_fooling, MAX_SWEEP_BITS};
use restrictions::{ParamConfig, RestrictError};
use robp_core::{from_text, Dyadic, Robp};
use serde::{Deserialize, Serialize};
use smallbias::SmallBiasSampler;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

pub const CSV_SCHEMA: &str = "v1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    #[serde(default)]
    pub master_seed: u64,
    /// "desk" (default) or "honest".
    #[serde(default = "default_mode")]
    pub mode: String,
    /// Exhaustive sweeps refuse seeds beyond this; larger spaces are sampled.
    #[serde(default = "default_seed_cap")]
    pub seed_cap: u64,
    /// Draws used when a seed space is over the cap.
    #[serde(default = "default_trials")]
    pub sample_trials: u64,
    #[serde(default)]
    pub corpus: Vec<CorpusEntry>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
}

fn default_mode() -> String {
    "desk".into()
}

fn default_seed_cap() -> u64 {
    MAX_SWEEP_BITS
}

fn default_trials() -> u64 {
    4096
}

/// One corpus row: either a built-in family (with its input count) or a
/// program file in the canonical text format.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub family: Option<String>,
    pub n: Option<usize>,
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: String,
    pub eps: Option<f64>,
    /// Field power for small-bias seeds.
    pub k: Option<u32>,
    /// Hash-tree chunk width.
    pub chunk: Option<u32>,
    /// Short-xor block width and length exponent.
    pub w: Option<u32>,
    pub b: Option<u32>,
}

impl GeneratorSpec {
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if let Some(e) = self.eps {
            parts.push(format!("eps={e}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(c) = self.chunk {
            parts.push(format!("chunk={c}"));
        }
        if let Some(w) = self.w {
            parts.push(format!("w={w}"));
        }
        if let Some(b) = self.b {
            parts.push(format!("b={b}"));
        }
        if parts.is_empty() {
            self.kind.clone()
        } else {
            format!("{}({})", self.kind, parts.join(","))
        }
    }
}

#[derive(Debug)]
pub enum SuiteError {
    Io { path: PathBuf, err: std::io::Error },
    Spec(String),
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::Io { path, err } => write!(f, "{}: {err}", path.display()),
            SuiteError::Spec(msg) => write!(f, "bad suite spec: {msg}"),
        }
    }
}

impl std::error::Error for SuiteError {}

pub fn load_spec(path: &Path) -> Result<SuiteSpec, SuiteError> {
    let text = fs::read_to_string(path).map_err(|err| SuiteError::Io {
        path: path.into(),
        err,
    })?;
    toml::from_str(&text).map_err(|e| SuiteError::Spec(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RowStatus {
    Ok,
    /// Unresolvable corpus entry or infeasible honest-mode config.
    SoftError,
    /// Broken generator descriptor or an oracle invariant failure.
    HardError,
}

impl RowStatus {
    fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::SoftError => "soft-error",
            RowStatus::HardError => "hard-error",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RowRecord {
    pub schema: String,
    pub program: String,
    pub n: usize,
    pub generator: String,
    pub mode: String,
    /// "exact", "sampled", or "none" when the pair never ran.
    pub method: String,
    pub entry_seed: u64,
    pub seed_bits: u64,
    /// Exact dyadic strings ("num/2^exp"); empty when unavailable.
    pub uniform: String,
    pub pseudo: String,
    /// Fooling error as a decimal; exact runs also fill `error_exact`.
    pub error: String,
    pub error_exact: String,
    pub status: String,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateRecord {
    pub schema: String,
    pub generator: String,
    pub mode: String,
    pub rows: usize,
    pub max_error: String,
    pub mean_error: String,
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub rows: Vec<RowRecord>,
    pub aggregates: Vec<AggregateRecord>,
    pub hard_failure: bool,
}

/// Counter-mode splitmix64: entry `index` gets the `index + 1`-th output
/// of the stream seeded at `master`, without materializing the stream.
pub fn split_seed(master: u64, index: u64) -> u64 {
    Rng64(master.wrapping_add(index.wrapping_mul(0x9e3779b97f4a7c15))).next()
}

pub fn dyadic_str(d: &Dyadic) -> String {
    format!("{}/2^{}", d.numerator(), d.exponent())
}

pub enum BuildFailure {
    Soft(String),
    Hard(String),
}

fn classify_gen_error(e: GenError) -> BuildFailure {
    match e {
        GenError::Infeasible { .. } => BuildFailure::Soft(e.to_string()),
        GenError::Restrict(RestrictError::ConfigInfeasible { .. }) => {
            BuildFailure::Soft(e.to_string())
        }
        other => BuildFailure::Hard(other.to_string()),
    }
}

/// Instantiate a generator descriptor at ambient arity `n`. Unknown kinds
/// and structurally bad parameters are hard failures; configs that are
/// merely too big for the committed budget are soft.
pub fn build_generator(
    spec: &GeneratorSpec,
    n: usize,
    cfg: &ParamConfig,
) -> Result<Box<dyn Generator>, BuildFailure> {
    let eps = spec.eps.unwrap_or(0.25);
    let built: Result<Box<dyn Generator>, GenError> = match spec.kind.as_str() {
        "uniform" => Ok(Box::new(UniformGenerator::new(n))),
        "small-bias" => Ok(Box::new(SmallBiasGenerator::new(
            SmallBiasSampler::powering(n, spec.k.unwrap_or(2)),
        ))),
        "hash-tree" => HashTreeGenerator::new(n, spec.chunk.unwrap_or(cfg.hash_chunk))
            .map(|g| Box::new(g) as Box<dyn Generator>),
        "short-xor" => {
            let b = spec
                .b
                .unwrap_or_else(|| (n.max(2) as f64 / eps).log2().ceil().max(1.0) as u32);
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            ShortXorGenerator::new(mask, n, spec.w.unwrap_or(3), b, eps, cfg)
                .map(|g| Box::new(g) as Box<dyn Generator>)
        }
        "read-once-poly-prg" => {
            read_once_poly_prg(n, eps, cfg).map(|g| Box::new(g) as Box<dyn Generator>)
        }
        "width3-prg" => Width3Prg::new(n, eps, cfg).map(|g| Box::new(g) as Box<dyn Generator>),
        "locally-monotone-prg" => {
            LocallyMonotonePrg::new(n, eps, cfg).map(|g| Box::new(g) as Box<dyn Generator>)
        }
        other => {
            return Err(BuildFailure::Hard(format!(
                "unknown generator kind {other:?}"
            )))
        }
    };
    built.map_err(classify_gen_error)
}

fn resolve_corpus(
    spec: &SuiteSpec,
    base_dir: &Path,
) -> Vec<(String, usize, Result<Robp, String>)> {
    spec.corpus
        .iter()
        .enumerate()
        .map(|(ci, entry)| {
            let seed = split_seed(spec.master_seed, ci as u64);
            match (&entry.family, &entry.file) {
                (Some(name), None) => {
                    let n = entry.n.unwrap_or(0);
                    let label = format!("{name}[n={n}]");
                    match families::build(name, n, seed) {
                        Ok(p) => (label, n, Ok(p)),
                        Err(e) => (label, n, Err(e.to_string())),
                    }
                }
                (None, Some(path)) => {
                    let full = if path.is_absolute() {
                        path.clone()
                    } else {
                        base_dir.join(path)
                    };
                    let label = path.display().to_string();
                    match fs::read_to_string(&full) {
                        Ok(text) => match from_text(&text) {
                            Ok(p) => {
                                let n = p.ambient_n();
                                (label, n, Ok(p))
                            }
                            Err(e) => (label, 0, Err(e.to_string())),
                        },
                        Err(e) => (label, 0, Err(format!("{}: {e}", full.display()))),
                    }
                }
                _ => (
                    format!("corpus[{ci}]"),
                    0,
                    Err("entry needs exactly one of family or file".into()),
                ),
            }
        })
        .collect()
}

/// Run the full grid. Rows appear in corpus-major order; the row index
/// seeds are offset past the corpus indices so no two draws collide.
pub fn run_suite(spec: &SuiteSpec, base_dir: &Path) -> Result<SuiteOutcome, SuiteError> {
    if spec.mode != "desk" && spec.mode != "honest" {
        return Err(SuiteError::Spec(format!(
            "mode must be desk or honest, got {:?}",
            spec.mode
        )));
    }
    let cfg = if spec.mode == "honest" {
        ParamConfig::honest()
    } else {
        ParamConfig::desk()
    };
    let corpus = resolve_corpus(spec, base_dir);
    let mut rows = Vec::new();
    let mut hard_failure = false;
    let seed_base = corpus.len() as u64;
    for (ci, (plabel, n, program)) in corpus.iter().enumerate() {
        for (gi, gspec) in spec.generators.iter().enumerate() {
            let row_index = seed_base + (ci * spec.generators.len() + gi) as u64;
            let entry_seed = split_seed(spec.master_seed, row_index);
            let mut row = RowRecord {
                schema: CSV_SCHEMA.into(),
                program: plabel.clone(),
                n: *n,
                generator: gspec.label(),
                mode: spec.mode.clone(),
                method: "none".into(),
                entry_seed,
                seed_bits: 0,
                uniform: String::new(),
                pseudo: String::new(),
                error: String::new(),
                error_exact: String::new(),
                status: RowStatus::Ok.as_str().into(),
                note: String::new(),
            };
            let program = match program {
                Ok(p) => p,
                Err(msg) => {
                    row.status = RowStatus::SoftError.as_str().into();
                    row.note = msg.clone();
                    rows.push(row);
                    continue;
                }
            };
            let gen = match build_generator(gspec, program.ambient_n(), &cfg) {
                Ok(g) => g,
                Err(BuildFailure::Soft(msg)) => {
                    row.status = RowStatus::SoftError.as_str().into();
                    row.note = msg;
                    rows.push(row);
                    continue;
                }
                Err(BuildFailure::Hard(msg)) => {
                    row.status = RowStatus::HardError.as_str().into();
                    row.note = msg;
                    hard_failure = true;
                    rows.push(row);
                    continue;
                }
            };
            row.seed_bits = gen.seed_bits();
            let cap = spec.seed_cap.min(MAX_SWEEP_BITS);
            if gen.seed_bits() <= cap {
                match fooling_error(program, gen.as_ref()) {
                    Ok(rep) => {
                        row.method = "exact".into();
                        row.uniform = dyadic_str(&rep.uniform);
                        row.pseudo = dyadic_str(&rep.pseudo);
                        row.error = format!("{}", rep.error_f64());
                        row.error_exact = dyadic_str(&rep.error);
                    }
                    Err(e) => {
                        row.status = RowStatus::HardError.as_str().into();
                        row.note = e.to_string();
                        hard_failure = true;
                    }
                }
            } else {
                match sampled_fooling(program, gen.as_ref(), spec.sample_trials, entry_seed) {
                    Ok(rep) => {
                        row.method = "sampled".into();
                        row.uniform = dyadic_str(&rep.uniform);
                        row.pseudo = format!("{}", rep.estimate);
                        row.error = format!("{}", rep.error_estimate);
                    }
                    Err(e) => {
                        row.status = RowStatus::HardError.as_str().into();
                        row.note = e.to_string();
                        hard_failure = true;
                    }
                }
            }
            rows.push(row);
        }
    }
    let aggregates = aggregate(&rows, &spec.mode);
    Ok(SuiteOutcome {
        rows,
        aggregates,
        hard_failure,
    })
}

fn aggregate(rows: &[RowRecord], mode: &str) -> Vec<AggregateRecord> {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.generator.as_str()) {
            labels.push(&r.generator);
        }
    }
    labels
        .iter()
        .map(|label| {
            let errs: Vec<f64> = rows
                .iter()
                .filter(|r| r.generator == *label && r.status == "ok" && !r.error.is_empty())
                .map(|r| r.error.parse::<f64>().unwrap())
                .collect();
            let (max, mean) = if errs.is_empty() {
                (String::new(), String::new())
            } else {
                let max = errs.iter().cloned().fold(f64::MIN, f64::max);
                let mean = errs.iter().sum::<f64>() / errs.len() as f64;
                (format!("{max}"), format!("{mean}"))
            };
            AggregateRecord {
                schema: CSV_SCHEMA.into(),
                generator: label.to_string(),
                mode: mode.into(),
                rows: errs.len(),
                max_error: max,
                mean_error: mean,
            }
        })
        .collect()
}

pub fn rows_csv(rows: &[RowRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

pub fn aggregates_csv(rows: &[AggregateRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

/// Write results.csv, aggregates.csv and reports.json under `out_dir`.
pub fn write_reports(outcome: &SuiteOutcome, out_dir: &Path) -> Result<(), SuiteError> {
    let io_err = |path: &Path, err| SuiteError::Io {
        path: path.into(),
        err,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let results = out_dir.join("results.csv");
    fs::write(&results, rows_csv(&outcome.rows)).map_err(|e| io_err(&results, e))?;
    let aggregates = out_dir.join("aggregates.csv");
    fs::write(&aggregates, aggregates_csv(&outcome.aggregates))
        .map_err(|e| io_err(&aggregates, e))?;
    let reports = out_dir.join("reports.json");
    let json = serde_json::json!({
        "schema": CSV_SCHEMA,
        "rows": outcome.rows,
        "aggregates": outcome.aggregates,
    });
    let mut text = serde_json::to_string_pretty(&json).expect("json");
    text.push('\n');
    fs::write(&reports, text).map_err(|e| io_err(&reports, e))?;
    Ok(())
}
