//! Argument parsing and subcommand dispatch for `gf2add`.

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gf2_additive::refine::LoopMode;
use gf2_additive::{walsh_transform, DenseSet, KParam};

use crate::analyze::analyze;
use crate::format::{parse_rational, read_set, TheoremReport};
use crate::generate::{Family, GeneratorSpec};
use crate::recheck::recheck;
use crate::run::{
    arity, generated_inputs, run_on_sets, run_trials, Theorem, TrialRecord, TrialSpec,
};
use crate::verify::{self, SuiteReport};

#[derive(Parser, Debug)]
#[command(
    name = "gf2add",
    version,
    about = "Certified subspace extraction for sets in F_2^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Size, doubling, energy and spectrum sizes of one set.
    Analyze(AnalyzeArgs),
    /// Two-set extraction from small doubling.
    Freiman(FreimanArgs),
    /// Four-set extraction from large energy.
    Bsg(BsgArgs),
    /// Run an oracle or property suite.
    Verify(VerifyArgs),
    /// Re-validate reports (JSON or JSON-lines) from their own data.
    Recheck(RecheckArgs),
    /// Batch of seeded pipeline runs, one JSON line per trial.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long, default_value_t = 8)]
    pub dim: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rank: Option<u32>,
    #[arg(long)]
    pub cosets: Option<u64>,
    #[arg(long)]
    pub noise: Option<u64>,
    #[arg(long)]
    pub count: Option<u32>,
    #[arg(long)]
    pub density: Option<f64>,
}

impl GenArgs {
    fn spec(&self) -> Option<GeneratorSpec> {
        self.family.map(|family| GeneratorSpec {
            family,
            dim: self.dim,
            seed: self.seed,
            rank: self.rank,
            cosets: self.cosets,
            noise: self.noise,
            count: self.count,
            density: self.density,
        })
    }
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Set literal file `{"dim": n, "elements": [...]}`.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenArgs,
    /// `csv` dumps the Walsh table instead of the summary.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FreimanArgs {
    /// Set literal files: two, or one with `--single`.
    #[arg(long = "input", conflicts_with = "family")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub gen: GenArgs,
    /// One-set form.
    #[arg(long)]
    pub single: bool,
    /// Keep the flatness scale at the initial K.
    #[arg(long)]
    pub fixed_k: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BsgArgs {
    /// Set literal files: four, or one with `--single`.
    #[arg(long = "input", conflicts_with = "family")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub gen: GenArgs,
    /// Energy parameter as "p/q"; defaults to ceil(1000/ω)/1000.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub single: bool,
    #[arg(long)]
    pub fixed_k: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    Fourier,
    Energy,
    Analytic,
    Flatness,
    Extraction,
    Pipelines,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Number of random trials (suite-specific unit).
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RecheckArgs {
    pub path: PathBuf,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    #[arg(long, value_enum, required = true)]
    pub family: Vec<Family>,
    #[arg(long, default_value_t = 8)]
    pub dim: u32,
    /// First seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long)]
    pub k: Option<String>,
    /// Skip energy trials whose K exceeds this "p/q".
    #[arg(long)]
    pub max_k: Option<String>,
    #[arg(long)]
    pub fixed_k: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn writer(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json<T: serde::Serialize>(value: &T, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Single-line JSON, so reports concatenate into JSON-lines files.
fn emit_line<T: serde::Serialize>(value: &T, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn mode(fixed_k: bool) -> LoopMode {
    if fixed_k {
        LoopMode::FixedK
    } else {
        LoopMode::Adaptive
    }
}

fn load_inputs(
    theorem: Theorem,
    paths: &[PathBuf],
    gen: &GenArgs,
) -> anyhow::Result<(Vec<DenseSet>, Option<serde_json::Value>)> {
    if let Some(spec) = gen.spec() {
        return Ok((
            generated_inputs(theorem, &spec)?,
            Some(serde_json::to_value(&spec)?),
        ));
    }
    let want = arity(theorem);
    anyhow::ensure!(
        paths.len() == want,
        "{theorem:?} needs {want} --input files or a --family"
    );
    Ok((
        paths
            .iter()
            .map(|p| read_set(p))
            .collect::<anyhow::Result<_>>()?,
        None,
    ))
}

fn parse_k(text: &Option<String>) -> anyhow::Result<Option<KParam>> {
    text.as_deref()
        .map(|s| Ok(KParam::from_rational(parse_rational(s)?)?))
        .transpose()
}

fn verify_suite(args: &VerifyArgs) -> anyhow::Result<SuiteReport> {
    let seed = args.seed;
    Ok(match args.suite {
        Suite::Fourier => verify::fourier_suite(&verify::FourierParams {
            random_per_dim: args.budget.unwrap_or(1000),
            dims: vec![8, 10, 12],
            seed,
        }),
        Suite::Energy => {
            let n = args.budget.unwrap_or(1000);
            verify::energy_suite(&verify::EnergyParams {
                quadruples: n,
                quadruple_max_dim: 8,
                max_size: 64,
                pairs: n,
                pair_max_dim: 10,
                seed,
            })
        }
        Suite::Analytic => verify::analytic_suite(&verify::AnalyticParams {
            random_points: args.budget.unwrap_or(10_000),
            seed,
        }),
        Suite::Flatness => verify::flatness_suite(&verify::FlatnessParams {
            trials: args.budget.unwrap_or(1000),
            max_dim: 8,
            seed,
        }),
        Suite::Extraction => {
            let mut r = verify::extraction_suite(&verify::ExtractionParams {
                instances: args.budget.unwrap_or(200),
                max_dim: 12,
                seed,
            });
            r.merge_from(verify::step_suite(&verify::StepParams {
                instances: args.budget.unwrap_or(200),
                max_dim: 10,
                seed,
            }));
            r
        }
        Suite::Pipelines => {
            let mut total = SuiteReport::named("pipelines");
            for theorem in [Theorem::Freiman, Theorem::Bsg] {
                let (r, _) = verify::pipeline_suite(&verify::PipelineParams {
                    theorem,
                    families: Family::ALL.to_vec(),
                    dims: vec![8],
                    seeds: args.budget.unwrap_or(5),
                    fixed_k: false,
                    max_k: (theorem == Theorem::Bsg).then(|| "4".to_string()),
                    seed,
                });
                total.merge_from(r);
            }
            total
        }
    })
}

/// Runs the command; returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Analyze(args) => {
            let a = match (&args.input, args.gen.spec()) {
                (Some(p), _) => read_set(p)?,
                (None, Some(spec)) => crate::generate::generate(&spec)?,
                (None, None) => anyhow::bail!("analyze needs --input or --family"),
            };
            match args.format {
                Format::Json => emit_json(&analyze(&a)?, &args.out)?,
                Format::Csv => {
                    crate::format::write_walsh_csv(&walsh_transform(&a), writer(&args.out)?)?
                }
            }
            Ok(0)
        }
        Command::Freiman(args) => {
            let theorem = if args.single {
                Theorem::SingleFreiman
            } else {
                Theorem::Freiman
            };
            let (sets, generator) = load_inputs(theorem, &args.inputs, &args.gen)?;
            let report = run_on_sets(theorem, &sets, None, mode(args.fixed_k), generator)?;
            emit_line(&report, &args.out)?;
            Ok(if report.certificate { 0 } else { 1 })
        }
        Command::Bsg(args) => {
            let theorem = if args.single {
                Theorem::SingleBsg
            } else {
                Theorem::Bsg
            };
            let (sets, generator) = load_inputs(theorem, &args.inputs, &args.gen)?;
            let k = parse_k(&args.k)?;
            let report = run_on_sets(theorem, &sets, k.as_ref(), mode(args.fixed_k), generator)?;
            emit_line(&report, &args.out)?;
            Ok(if report.certificate { 0 } else { 1 })
        }
        Command::Verify(args) => {
            let report = verify_suite(&args)?;
            emit_json(&report, &args.out)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Recheck(args) => {
            let outcome = recheck_file(&args.path)?;
            emit_json(&outcome, &None)?;
            Ok(if outcome.failed == 0 { 0 } else { 1 })
        }
        Command::Sweep(args) => {
            let specs: Vec<TrialSpec> = args
                .family
                .iter()
                .flat_map(|&family| (0..args.trials).map(move |i| (family, i)))
                .map(|(family, i)| TrialSpec {
                    theorem: args.theorem,
                    generator: GeneratorSpec::new(family, args.dim, args.seed.wrapping_add(i)),
                    fixed_k: args.fixed_k,
                    k: args.k.clone(),
                    max_k: args.max_k.clone(),
                })
                .collect();
            let records = run_trials(&specs);
            let mut w = writer(&args.out)?;
            match args.format {
                Format::Json => {
                    for rec in &records {
                        serde_json::to_writer(&mut w, rec)?;
                        writeln!(w)?;
                    }
                }
                Format::Csv => write_sweep_csv(&specs, &records, &mut w)?,
            }
            w.flush()?;
            Ok(
                if records
                    .iter()
                    .any(|r| matches!(r, TrialRecord::Failed { .. }))
                {
                    1
                } else {
                    0
                },
            )
        }
    }
}

fn write_sweep_csv(
    specs: &[TrialSpec],
    records: &[TrialRecord],
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trial",
        "status",
        "family",
        "dim",
        "seed",
        "K",
        "H_size",
        "iterations",
        "certificate",
        "min_size_ratio",
    ])?;
    for (spec, rec) in specs.iter().zip(records) {
        let g = &spec.generator;
        let common = |trial: u64, status: &str| {
            vec![
                trial.to_string(),
                status.to_string(),
                g.family.name().to_string(),
                g.dim.to_string(),
                g.seed.to_string(),
            ]
        };
        let row = match rec {
            TrialRecord::Ok { trial, report } => {
                let mut row = common(*trial, "ok");
                let min_ratio = report
                    .size_ratios
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                row.extend([
                    report.k.approx.to_string(),
                    report.h_size.to_string(),
                    report.trace.iterations.to_string(),
                    report.certificate.to_string(),
                    min_ratio.to_string(),
                ]);
                row
            }
            TrialRecord::Skipped { trial, k, .. } => {
                let mut row = common(*trial, "skipped");
                row.extend([
                    k.approx.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                row
            }
            TrialRecord::Failed { trial, .. } => {
                let mut row = common(*trial, "failed");
                row.extend([
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                row
            }
        };
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, serde::Serialize)]
pub struct RecheckSummary {
    pub reports: u64,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<serde_json::Value>,
}

/// Accepts one pretty-printed report, or JSON-lines of reports or sweep records.
pub fn recheck_file(path: &std::path::Path) -> anyhow::Result<RecheckSummary> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut reports: Vec<(String, TheoremReport)> = Vec::new();
    if let Ok(single) = serde_json::from_str::<TheoremReport>(&text) {
        reports.push(("report".to_string(), single));
    } else {
        for (line_no, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let label = format!("line {}", line_no + 1);
            if let Ok(rec) = serde_json::from_str::<TrialRecord>(line) {
                if let TrialRecord::Ok { report, .. } = rec {
                    reports.push((label, *report));
                }
                continue;
            }
            let report: TheoremReport =
                serde_json::from_str(line).with_context(|| format!("parsing {label}"))?;
            reports.push((label, report));
        }
    }
    let mut summary = RecheckSummary {
        reports: reports.len() as u64,
        passed: 0,
        failed: 0,
        failures: Vec::new(),
    };
    for (label, report) in &reports {
        let outcome = recheck(report);
        if outcome.ok() {
            summary.passed += 1;
        } else {
            summary.failed += 1;
            summary
                .failures
                .push(serde_json::json!({ "where": label, "failures": outcome.failures }));
        }
    }
    Ok(summary)
}
