use clap::{Args, Parser, Subcommand, ValueEnum};
use cli::describe::{describe_desk, describe_honest, honest_sweep};
use cli::families;
use cli::listing::{from_listing, to_listing};
use cli::suite::{
    build_generator, dyadic_str, load_spec, run_suite, write_reports, BuildFailure, GeneratorSpec,
};
use fourier::{coeffs_csv, TruthTable};
use oracle::{expectation_drift, fooling_error, sampled_fooling};
use restrictions::{ParamConfig, TwoStepRestriction, XorShortRestriction};
use robp_core::{from_text, to_text, Robp};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "prglab",
    version,
    about = "Exact desk-scale experiments with pseudorandom generators for read-once branching programs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Desk,
    Honest,
}

#[derive(Clone, Copy, ValueEnum)]
enum DescribeMode {
    Desk,
    Honest,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Canonical,
    Listing,
}

/// Program source shared by fool/restrict/fourier: a canonical-format file
/// or a built-in family instance.
#[derive(Args)]
struct ProgramArgs {
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    /// Input count for family programs.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the randomized families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ProgramArgs {
    fn load(&self) -> Result<Robp, String> {
        match (&self.file, &self.family) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                from_text(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
            (None, Some(name)) => {
                let n = self.n.ok_or("family programs need --n")?;
                families::build(name, n, self.seed).map_err(|e| e.to_string())
            }
            _ => Err("pass exactly one of --file or --family".into()),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a corpus x generators suite from a TOML spec
    Suite {
        #[arg(long)]
        spec: PathBuf,
        /// Where results.csv, aggregates.csv and reports.json land
        #[arg(long, default_value = "suite-out")]
        out_dir: PathBuf,
        /// Override the spec's master seed
        #[arg(long)]
        master_seed: Option<u64>,
        /// Override the spec's mode
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Override the spec's exhaustive-sweep cap (bits)
        #[arg(long)]
        seed_cap: Option<u64>,
    },
    /// Fooling report for one (program, generator) pair
    Fool {
        #[command(flatten)]
        prog: ProgramArgs,
        /// Generator kind (uniform, small-bias, hash-tree, short-xor,
        /// read-once-poly-prg, width3-prg, locally-monotone-prg)
        #[arg(long)]
        generator: String,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        w: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        chunk: Option<u32>,
        /// Exhaustive sweeps refuse larger seed spaces; those are sampled
        #[arg(long, default_value_t = 24)]
        seed_cap: u64,
        #[arg(long, default_value_t = 4096)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        sample_seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive-seed acceptance drift of a restriction family
    Restrict {
        #[command(flatten)]
        prog: ProgramArgs,
        /// xor-short | two-step | sparse-alive
        #[arg(long)]
        maker: String,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Block length exponent for xor-short (default: log2(n/eps))
        #[arg(long)]
        b: Option<u32>,
        /// Block width for xor-short
        #[arg(long, default_value_t = 3)]
        w: u32,
        /// Alive exponent for sparse-alive
        #[arg(long, default_value_t = 3)]
        a: u32,
    },
    /// Walsh coefficients of a program as CSV (mask,numerator,exponent)
    Fourier {
        #[command(flatten)]
        prog: ProgramArgs,
        /// Keep only the largest-magnitude coefficients
        #[arg(long)]
        top: Option<usize>,
    },
    /// Seed-length table for a generator descriptor (no emission)
    Describe {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        w: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        chunk: Option<u32>,
        #[arg(long, value_enum, default_value_t = DescribeMode::Both)]
        mode: DescribeMode,
        /// Honest totals for n = 2^lo ..= 2^hi, written as lo:hi
        #[arg(long)]
        sweep_log2: Option<String>,
    },
    /// Convert between canonical text and the human-readable listing
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted
        #[arg(long)]
        output: Option<PathBuf>,
        /// Target format; defaults to the opposite of the input
        #[arg(long, value_enum)]
        to: Option<FormatArg>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Suite {
            spec,
            out_dir,
            master_seed,
            mode,
            seed_cap,
        } => {
            let mut s = load_spec(&spec).map_err(|e| e.to_string())?;
            if let Some(seed) = master_seed {
                s.master_seed = seed;
            }
            if let Some(mode) = mode {
                s.mode = match mode {
                    ModeArg::Desk => "desk".into(),
                    ModeArg::Honest => "honest".into(),
                };
            }
            if let Some(cap) = seed_cap {
                s.seed_cap = cap;
            }
            let base = spec.parent().unwrap_or_else(|| std::path::Path::new("."));
            let outcome = run_suite(&s, base).map_err(|e| e.to_string())?;
            write_reports(&outcome, &out_dir).map_err(|e| e.to_string())?;
            println!(
                "{} rows -> {} ({} hard failures)",
                outcome.rows.len(),
                out_dir.display(),
                outcome
                    .rows
                    .iter()
                    .filter(|r| r.status == "hard-error")
                    .count()
            );
            for a in &outcome.aggregates {
                println!(
                    "  {}: {} rows, max {} mean {}",
                    a.generator,
                    a.rows,
                    if a.max_error.is_empty() { "-" } else { &a.max_error },
                    if a.mean_error.is_empty() { "-" } else { &a.mean_error },
                );
            }
            Ok(if outcome.hard_failure {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Fool {
            prog,
            generator,
            eps,
            b,
            w,
            k,
            chunk,
            seed_cap,
            trials,
            sample_seed,
            json,
        } => {
            let p = prog.load()?;
            let spec = GeneratorSpec {
                kind: generator,
                eps: Some(eps),
                k,
                chunk,
                w,
                b,
            };
            let gen = build_generator(&spec, p.ambient_n(), &ParamConfig::desk())
                .map_err(|e| match e {
                    BuildFailure::Soft(m) | BuildFailure::Hard(m) => m,
                })?;
            if gen.seed_bits() <= seed_cap {
                let rep = fooling_error(&p, gen.as_ref()).map_err(|e| e.to_string())?;
                if json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "method": "exact",
                            "n": rep.n,
                            "seed_bits": rep.seed_bits,
                            "uniform": dyadic_str(&rep.uniform),
                            "pseudo": dyadic_str(&rep.pseudo),
                            "error": dyadic_str(&rep.error),
                            "error_f64": rep.error_f64(),
                        })
                    );
                } else {
                    println!(
                        "exact over 2^{} seeds: uniform {} pseudo {} error {} ({})",
                        rep.seed_bits,
                        dyadic_str(&rep.uniform),
                        dyadic_str(&rep.pseudo),
                        dyadic_str(&rep.error),
                        rep.error_f64()
                    );
                }
            } else {
                let rep = sampled_fooling(&p, gen.as_ref(), trials, sample_seed)
                    .map_err(|e| e.to_string())?;
                if json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "method": "sampled",
                            "samples": rep.samples,
                            "uniform": dyadic_str(&rep.uniform),
                            "estimate": rep.estimate,
                            "error_estimate": rep.error_estimate,
                            "ci99": rep.ci99,
                        })
                    );
                } else {
                    println!(
                        "sampled over {} draws: uniform {} estimate {} error {} (ci99 {})",
                        rep.samples,
                        dyadic_str(&rep.uniform),
                        rep.estimate,
                        rep.error_estimate,
                        rep.ci99
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Restrict {
            prog,
            maker,
            eps,
            b,
            w,
            a,
        } => {
            let p = prog.load()?;
            let n = p.ambient_n();
            let cfg = ParamConfig::desk();
            let (bits, drift) = match maker.as_str() {
                "xor-short" => {
                    let b = b.unwrap_or_else(|| {
                        (n.max(2) as f64 / eps).log2().ceil().max(1.0) as u32
                    });
                    let m = XorShortRestriction::new(n, w, b, eps, &cfg)
                        .map_err(|e| e.to_string())?;
                    let bits = m.seed_bits();
                    let d = expectation_drift(&p, bits, |s| m.build(s))
                        .map_err(|e| e.to_string())?;
                    (bits, d)
                }
                "two-step" => {
                    let m = TwoStepRestriction::new(n, eps, &cfg).map_err(|e| e.to_string())?;
                    let bits = m.seed_bits();
                    let d = expectation_drift(&p, bits, |s| m.build(s))
                        .map_err(|e| e.to_string())?;
                    (bits, d)
                }
                "sparse-alive" => {
                    let m = generators::SparseAliveRestriction::new(n, a, &cfg)
                        .map_err(|e| e.to_string())?;
                    let bits = m.seed_bits();
                    let d = expectation_drift(&p, bits, |s| m.build(s))
                        .map_err(|e| e.to_string())?;
                    (bits, d)
                }
                other => return Err(format!("unknown maker {other:?}")),
            };
            println!(
                "drift {} ({}) over 2^{bits} seeds",
                dyadic_str(&drift),
                drift.to_f64()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fourier { prog, top } => {
            let p = prog.load()?;
            if p.ambient_n() > 20 {
                return Err(format!(
                    "fourier table needs n <= 20, program has {}",
                    p.ambient_n()
                ));
            }
            let ft = TruthTable::from_robp(&p).map_err(|e| e.to_string())?.transform();
            match top {
                None => print!("{}", coeffs_csv(&ft)),
                Some(k) => {
                    let mut rows: Vec<(usize, robp_core::Dyadic)> = ft
                        .coeffs()
                        .iter()
                        .cloned()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    rows.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
                    println!("mask,numerator,exponent");
                    for (s, c) in rows.into_iter().take(k) {
                        println!("{s},{},{}", c.numerator(), c.exponent());
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Describe {
            kind,
            n,
            eps,
            b,
            w,
            k,
            chunk,
            mode,
            sweep_log2,
        } => {
            let spec = GeneratorSpec {
                kind,
                eps: Some(eps),
                k,
                chunk,
                w,
                b,
            };
            if matches!(mode, DescribeMode::Desk | DescribeMode::Both) {
                print!("{}", describe_desk(&spec, n)?);
            }
            if matches!(mode, DescribeMode::Honest | DescribeMode::Both) {
                let (_, text) = describe_honest(&spec, n)?;
                print!("{text}");
            }
            if let Some(range) = sweep_log2 {
                let (lo, hi) = range
                    .split_once(':')
                    .ok_or("sweep range must look like 8:20")?;
                let lo: u32 = lo.parse().map_err(|_| "bad sweep lower bound")?;
                let hi: u32 = hi.parse().map_err(|_| "bad sweep upper bound")?;
                if lo > hi || hi > 32 {
                    return Err("sweep range must satisfy lo <= hi <= 32".into());
                }
                let ns: Vec<usize> = (lo..=hi).map(|e| 1usize << e).collect();
                println!("honest totals by n:");
                for (n, total) in honest_sweep(&spec, &ns)? {
                    println!("  n {n}: {total:.2} bits");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Convert { input, output, to } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| format!("{}: {e}", input.display()))?;
            let looks_listing = text.trim_start().starts_with("robp listing");
            let target = to.unwrap_or(if looks_listing {
                FormatArg::Canonical
            } else {
                FormatArg::Listing
            });
            let program = if looks_listing {
                from_listing(&text).map_err(|e| e.to_string())?
            } else {
                from_text(&text).map_err(|e| e.to_string())?
            };
            let rendered = match target {
                FormatArg::Canonical => to_text(&program),
                FormatArg::Listing => to_listing(&program),
            };
            match output {
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
