//! Pipeline drivers over generated or supplied sets, and batch trials.

use gf2_additive::refine::{
    bsg_pipeline, freiman_pipeline, single_set_bsg, single_set_freiman, LoopMode,
};
use gf2_additive::stats::energy;
use gf2_additive::{DenseSet, GF2Vector, KParam};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{parse_rational, KJson, TheoremReport};
use crate::generate::{generate, partner_seed, GeneratorSpec};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Theorem {
    /// Two sets with small doubling.
    Freiman,
    /// Four sets with large energy.
    Bsg,
    /// One set with small doubling.
    SingleFreiman,
    /// One set with many additive quadruples.
    SingleBsg,
}

/// `K` for an energy run: the rational ceiling of `1/ω` at denominator 1000.
pub fn default_energy_k(sets: [&DenseSet; 4]) -> anyhow::Result<KParam> {
    let inverse = energy(sets)?
        .inverse()
        .ok_or_else(|| anyhow::anyhow!("quadruple has no additive quadruples"))?;
    Ok(inverse.rational_ceiling(1000)?)
}

/// `(A, A+s, A+u, A+s+u)` for seeded `s, u`; the translates sum to zero, so
/// `ω` equals `ω(A, A, A, A)`.
pub fn translated_quadruple(a: &DenseSet, seed: u64) -> [DenseSet; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(partner_seed(seed));
    let n = a.dim();
    let s = rng.random_range(0..1u32 << n);
    let u = rng.random_range(0..1u32 << n);
    let shift = |t: u32| {
        a.translate(GF2Vector::new(n, t).expect("in range"))
            .expect("same dimension")
    };
    [a.clone(), shift(s), shift(u), shift(s ^ u)]
}

/// Runs a pipeline on explicit sets; `sets` holds 2, 4, or 1 sets by theorem.
pub fn run_on_sets(
    theorem: Theorem,
    sets: &[DenseSet],
    k: Option<&KParam>,
    mode: LoopMode,
    generator: Option<serde_json::Value>,
) -> anyhow::Result<TheoremReport> {
    let refs: Vec<&DenseSet> = sets.iter().collect();
    let result = match (theorem, sets) {
        (Theorem::Freiman, [a, b]) => freiman_pipeline(a, b, mode)?,
        (Theorem::SingleFreiman, [a]) => single_set_freiman(a, mode)?,
        (Theorem::Bsg, [a, b, c, d]) => {
            let quad = [a, b, c, d];
            let k = match k {
                Some(k) => k.clone(),
                None => default_energy_k(quad)?,
            };
            bsg_pipeline(quad, &k, mode)?
        }
        (Theorem::SingleBsg, [a]) => {
            let k = match k {
                Some(k) => k.clone(),
                None => default_energy_k([a, a, a, a])?,
            };
            single_set_bsg(a, &k, mode)?
        }
        (t, s) => anyhow::bail!("{t:?} takes {} input sets, got {}", arity(t), s.len()),
    };
    Ok(TheoremReport::new(&result, &refs, generator))
}

pub fn arity(theorem: Theorem) -> usize {
    match theorem {
        Theorem::Freiman => 2,
        Theorem::Bsg => 4,
        Theorem::SingleFreiman | Theorem::SingleBsg => 1,
    }
}

/// Inputs for a generated run: `A` from the spec, then `(A, A+s)` or
/// `(A, A+s, A+u, A+s+u)` with the shifts of [`translated_quadruple`].
pub fn generated_inputs(theorem: Theorem, spec: &GeneratorSpec) -> anyhow::Result<Vec<DenseSet>> {
    let a = generate(spec)?;
    Ok(match theorem {
        Theorem::Freiman => {
            let b = translated_quadruple(&a, spec.seed)[1].clone();
            vec![a, b]
        }
        Theorem::Bsg => translated_quadruple(&a, spec.seed).to_vec(),
        Theorem::SingleFreiman | Theorem::SingleBsg => vec![a],
    })
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TrialSpec {
    pub theorem: Theorem,
    pub generator: GeneratorSpec,
    pub fixed_k: bool,
    /// Explicit `K` for energy runs, as `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    /// Energy runs whose `K` would exceed this are skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_k: Option<String>,
}

/// One JSON-lines record of a batch run.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrialRecord {
    Ok {
        trial: u64,
        report: Box<TheoremReport>,
    },
    Skipped {
        trial: u64,
        reason: String,
        #[serde(rename = "K")]
        k: KJson,
    },
    Failed {
        trial: u64,
        error: String,
    },
}

impl TrialRecord {
    pub fn report(&self) -> Option<&TheoremReport> {
        match self {
            TrialRecord::Ok { report, .. } => Some(report),
            _ => None,
        }
    }
}

fn mode_of(fixed_k: bool) -> LoopMode {
    if fixed_k {
        LoopMode::FixedK
    } else {
        LoopMode::Adaptive
    }
}

pub fn run_trial(index: u64, spec: &TrialSpec) -> TrialRecord {
    let attempt = || -> anyhow::Result<TrialRecord> {
        let sets = generated_inputs(spec.theorem, &spec.generator)?;
        let explicit = match spec.k.as_deref() {
            Some(text) => Some(KParam::from_rational(parse_rational(text)?)?),
            None => None,
        };
        let k = match (spec.theorem, explicit) {
            (Theorem::Bsg, None) => {
                Some(default_energy_k([&sets[0], &sets[1], &sets[2], &sets[3]])?)
            }
            (Theorem::SingleBsg, None) => {
                Some(default_energy_k([&sets[0], &sets[0], &sets[0], &sets[0]])?)
            }
            (_, k) => k,
        };
        if let (Some(k), Some(max)) = (&k, &spec.max_k) {
            if k > &KParam::from_rational(parse_rational(max)?)? {
                let reason = format!("K exceeds {max}");
                return Ok(TrialRecord::Skipped {
                    trial: index,
                    reason,
                    k: KJson::from_k(k),
                });
            }
        }
        let generator = serde_json::to_value(spec)?;
        let report = run_on_sets(
            spec.theorem,
            &sets,
            k.as_ref(),
            mode_of(spec.fixed_k),
            Some(generator),
        )?;
        Ok(TrialRecord::Ok {
            trial: index,
            report: Box::new(report),
        })
    };
    attempt().unwrap_or_else(|e| TrialRecord::Failed {
        trial: index,
        error: format!("{e:#}"),
    })
}

/// Runs trials concurrently; records come back in trial order.
pub fn run_trials(specs: &[TrialSpec]) -> Vec<TrialRecord> {
    specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_trial(i as u64, s))
        .collect()
}
