//! Acceptance gate: runs the nine criteria at full size and prints one
//! PASS/FAIL line each. Exits non-zero if any criterion fails.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use gf2_additive_cli::generate::Family;
use gf2_additive_cli::run::{Theorem, TrialRecord};
use gf2_additive_cli::verify::{self, SuiteReport};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_suite(r: &SuiteReport) -> Outcome {
    let mut detail = format!("{} checks, {} failures", r.checks, r.failure_count);
    if let Some(first) = r.failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Outcome {
        passed: r.passed() && r.checks > 0,
        detail,
    }
}

fn criterion(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let passed = out.passed && in_time;
    let limit_text = limit
        .map(|l| format!(" (limit {}s)", l.as_secs()))
        .unwrap_or_default();
    println!(
        "[{}] criterion {id}: {name} | {} | {:.1}s{limit_text}",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
    );
    std::io::stdout().flush().ok();
    passed
}

fn pipeline_params(theorem: Theorem, max_k: Option<&str>) -> verify::PipelineParams {
    verify::PipelineParams {
        theorem,
        families: Family::ALL.to_vec(),
        dims: vec![8, 10, 12],
        seeds: 50,
        fixed_k: false,
        max_k: max_k.map(str::to_string),
        seed: SEED,
    }
}

fn summarize(r: &SuiteReport, records: &[TrialRecord]) -> Outcome {
    let ok = records
        .iter()
        .filter(|r| matches!(r, TrialRecord::Ok { .. }))
        .count();
    let skipped = records
        .iter()
        .filter(|r| matches!(r, TrialRecord::Skipped { .. }))
        .count();
    let steps: u64 = records
        .iter()
        .filter_map(|r| r.report())
        .map(|r| r.trace.iterations)
        .sum();
    let base = from_suite(r);
    Outcome {
        passed: base.passed && ok > 0,
        detail: format!(
            "{ok} certified, {skipped} skipped (K > 4), {steps} refinement steps; {}",
            base.detail
        ),
    }
}

fn jsonl(records: &[TrialRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
        .collect()
}

fn main() {
    let mut all = true;

    all &= criterion(
        1,
        "fast = naive WHT and Plancherel on F2^4 and 10^4 sets per n in {8,10,12}",
        Some(Duration::from_secs(60)),
        || {
            from_suite(&verify::fourier_suite(&verify::FourierParams {
                random_per_dim: 10_000,
                dims: vec![8, 10, 12],
                seed: SEED,
            }))
        },
    );

    all &= criterion(
        2,
        "Fourier quadruple count = brute force on 10^3 quadruples (n <= 8, |A_i| <= 64)",
        Some(Duration::from_secs(120)),
        || {
            from_suite(&verify::energy_suite(&verify::EnergyParams {
                quadruples: 1000,
                quadruple_max_dim: 8,
                max_size: 64,
                pairs: 0,
                pair_max_dim: 10,
                seed: SEED,
            }))
        },
    );

    all &= criterion(
        3,
        "Cauchy-Schwarz energy bound and size-ratio bound on 10^3 pairs (n <= 10)",
        None,
        || {
            from_suite(&verify::energy_suite(&verify::EnergyParams {
                quadruples: 0,
                quadruple_max_dim: 8,
                max_size: 64,
                pairs: 1000,
                pair_max_dim: 10,
                seed: SEED,
            }))
        },
    );

    all &= criterion(
        4,
        "F and G dichotomies: grids + 10^4 random points, G <= 1 + 1e-12",
        Some(Duration::from_secs(60)),
        || {
            from_suite(&verify::analytic_suite(&verify::AnalyticParams {
                random_points: 10_000,
                seed: SEED,
            }))
        },
    );

    all &= criterion(
        5,
        "flat extraction certificates on 200 flat quadruples (n <= 12)",
        Some(Duration::from_secs(120)),
        || {
            from_suite(&verify::extraction_suite(&verify::ExtractionParams {
                instances: 200,
                max_dim: 12,
                seed: SEED,
            }))
        },
    );

    all &= criterion(
        6,
        "step contracts on 200 non-flat instances each (doubling and energy)",
        None,
        || {
            from_suite(&verify::step_suite(&verify::StepParams {
                instances: 200,
                max_dim: 10,
                seed: SEED,
            }))
        },
    );

    let mut first_run: Vec<TrialRecord> = Vec::new();
    all &= criterion(
        7,
        "two-set pipeline: 6 families x n in {8,10,12} x 50 seeds, budget and certificate",
        Some(Duration::from_secs(300)),
        || {
            let (r, records) = verify::pipeline_suite(&pipeline_params(Theorem::Freiman, None));
            let out = summarize(&r, &records);
            first_run = records;
            out
        },
    );

    all &= criterion(
        8,
        "four-set pipeline: same protocol where omega >= 1/4, budget and certificate",
        Some(Duration::from_secs(600)),
        || {
            let (r, records) = verify::pipeline_suite(&pipeline_params(Theorem::Bsg, Some("4")));
            summarize(&r, &records)
        },
    );

    all &= criterion(
        9,
        "repeat of criterion 7 is byte-identical; recheck validates every report from JSON",
        None,
        || {
            let (_, again) = verify::pipeline_suite(&pipeline_params(Theorem::Freiman, None));
            let (a, b) = (jsonl(&first_run), jsonl(&again));
            let identical = !a.is_empty() && a == b;
            let dir = tempfile::tempdir().expect("temp dir");
            let path = dir.path().join("criterion7.jsonl");
            std::fs::write(&path, &a).expect("write reports");
            let summary = gf2_additive_cli::cli::recheck_file(&path).expect("recheck parses");
            let bin = Command::new(env!("CARGO_BIN_EXE_gf2add"))
                .arg("recheck")
                .arg(&path)
                .output()
                .expect("run gf2add");
            let passed = identical
                && summary.failed == 0
                && summary.reports == first_run.len() as u64
                && bin.status.success();
            Outcome {
                passed,
                detail: format!(
                    "identical={identical}, {} bytes, rechecked {}/{} (cli exit {:?})",
                    a.len(),
                    summary.passed,
                    summary.reports,
                    bin.status.code()
                ),
            }
        },
    );

    println!("acceptance: {}", if all { "ALL PASS" } else { "FAILURES" });
    if !all {
        std::process::exit(1);
    }
}
