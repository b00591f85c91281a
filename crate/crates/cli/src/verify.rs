//! Oracle and property suites, runnable from the CLI and the acceptance
//! tests. Each suite counts its checks and collects failures; nothing panics.

use gf2_additive::analytic::{g_fn, near_maxima_g_dichotomy, near_minima_f_dichotomy, Branch};
use gf2_additive::flatness::{common_high_spectrum, flatness_invariance_check};
use gf2_additive::fourier::naive_walsh;
use gf2_additive::refine::{
    additive_decrement_holds, additive_increment_holds, doubling_decrement_step,
    energy_increment_step,
};
use gf2_additive::stats::{brute_energy, cauchy_schwarz_bound, doubling, energy};
use gf2_additive::subspace::is_closed_under_addition;
use gf2_additive::{
    coherent_flatness, extract_flat, walsh_transform, DenseSet, GF2Vector, KParam,
    SpectrumThreshold,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{generate, partner_seed, random_subspace, Family, GeneratorSpec};
use crate::recheck::recheck;
use crate::run::{run_trials, Theorem, TrialRecord, TrialSpec};

/// Failures beyond this many are counted but not listed.
const MAX_LISTED: usize = 50;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn named(suite: &str) -> Self {
        Self::new(suite)
    }

    fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            checks: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(msg());
            }
        }
    }

    pub fn merge_from(&mut self, other: SuiteReport) {
        self.merge(other);
    }

    fn merge(&mut self, other: SuiteReport) {
        self.checks += other.checks;
        self.failure_count += other.failure_count;
        let room = MAX_LISTED.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

fn merged(name: &str, parts: impl IntoIterator<Item = SuiteReport>) -> SuiteReport {
    let mut r = SuiteReport::new(name);
    for p in parts {
        r.merge(p);
    }
    r
}

/// Independent stream for item `i` of a suite.
fn item_rng(seed: u64, tag: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(tag);
    rng
}

pub fn random_set(rng: &mut ChaCha8Rng, dim: u32, density: f64) -> DenseSet {
    let set = DenseSet::from_elements(dim, (0..1u32 << dim).filter(|_| rng.random_bool(density)))
        .expect("in range");
    if set.is_empty() {
        DenseSet::from_elements(dim, [rng.random_range(0..1u32 << dim)]).expect("in range")
    } else {
        set
    }
}

/// Up to `max_size` distinct uniform elements, at least one.
pub fn random_sized_set(rng: &mut ChaCha8Rng, dim: u32, max_size: u64) -> DenseSet {
    let size = rng.random_range(1..=max_size.min(1 << dim));
    let mut all: Vec<u32> = (0..1u32 << dim).collect();
    let (chosen, _) = all.partial_shuffle(rng, size as usize);
    DenseSet::from_elements(dim, chosen.iter().copied()).expect("in range")
}

/// A set from a random family with random shape parameters.
pub fn random_family_set(rng: &mut ChaCha8Rng, dim: u32) -> DenseSet {
    let family = Family::ALL[rng.random_range(0..Family::ALL.len())];
    let mut spec = GeneratorSpec::new(family, dim, rng.random());
    spec.rank = Some(rng.random_range(0..dim));
    spec.cosets = Some(rng.random_range(1..=2u64.pow(dim - spec.rank.unwrap()).min(4)));
    spec.noise = Some(rng.random_range(0..=((1u64 << dim) - (1u64 << spec.rank.unwrap())).min(6)));
    spec.count = Some(rng.random_range(1..=dim));
    spec.density = Some(rng.random_range(0.02..0.9));
    generate(&spec).expect("parameters drawn within range")
}

pub struct FourierParams {
    pub random_per_dim: u64,
    pub dims: Vec<u32>,
    pub seed: u64,
}

/// Fast against naive transform and Plancherel: every subset of `F₂⁴`, then
/// random sets.
pub fn fourier_suite(p: &FourierParams) -> SuiteReport {
    let mut r = SuiteReport::new("fourier");
    let exhaustive: Vec<SuiteReport> = (0u32..1 << 16)
        .into_par_iter()
        .chunks(4096)
        .map(|masks| {
            let mut part = SuiteReport::new("fourier");
            for mask in masks {
                let a = DenseSet::from_elements(4, (0..16).filter(|i| mask >> i & 1 == 1))
                    .expect("in range");
                fourier_checks(&mut part, &a, || format!("F2^4 subset {mask:#06x}"));
            }
            part
        })
        .collect();
    r.merge(merged("fourier", exhaustive));
    for &n in &p.dims {
        let parts: Vec<SuiteReport> = (0..p.random_per_dim)
            .into_par_iter()
            .map(|i| {
                let mut rng = item_rng(p.seed, u64::from(n), i);
                let density = rng.random_range(0.01..0.99);
                let a = random_set(&mut rng, n, density);
                let mut part = SuiteReport::new("fourier");
                fourier_checks(&mut part, &a, || format!("n={n} random set #{i}"));
                part
            })
            .collect();
        r.merge(merged("fourier", parts));
    }
    r
}

fn fourier_checks(r: &mut SuiteReport, a: &DenseSet, what: impl Fn() -> String) {
    let fast = walsh_transform(a);
    match naive_walsh(a) {
        Ok(naive) => r.check(fast.values() == naive.values(), || {
            format!("{}: fast and naive transforms differ", what())
        }),
        Err(e) => r.check(false, || format!("{}: {e}", what())),
    }
    let sum: i128 = fast
        .values()
        .iter()
        .map(|&w| i128::from(w) * i128::from(w))
        .sum();
    r.check(
        sum == (1i128 << a.dim()) * i128::from(a.len() as i64),
        || format!("{}: Plancherel fails", what()),
    );
}

pub struct EnergyParams {
    pub quadruples: u64,
    pub quadruple_max_dim: u32,
    pub max_size: u64,
    pub pairs: u64,
    pub pair_max_dim: u32,
    pub seed: u64,
}

/// Fourier count against brute force; Cauchy–Schwarz and distance bounds on pairs.
pub fn energy_suite(p: &EnergyParams) -> SuiteReport {
    let quads: Vec<SuiteReport> = (0..p.quadruples)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(p.seed, 1, i);
            let n = rng.random_range(2..=p.quadruple_max_dim);
            let sets: [DenseSet; 4] =
                core::array::from_fn(|_| random_sized_set(&mut rng, n, p.max_size));
            let refs = [&sets[0], &sets[1], &sets[2], &sets[3]];
            let mut part = SuiteReport::new("energy");
            match (energy(refs), brute_energy(refs)) {
                (Ok(e), Ok(b)) => {
                    part.check(e.quadruple_count == b, || {
                        format!("quadruple #{i}: Fourier {} vs brute {b}", e.quadruple_count)
                    });
                    let cap = (0..4)
                        .map(|j| {
                            (0..4)
                                .filter(|&k| k != j)
                                .map(|k| u128::from(sets[k].len()))
                                .product::<u128>()
                        })
                        .min()
                        .unwrap_or(0);
                    part.check(e.quadruple_count <= cap, || {
                        format!("quadruple #{i}: ω > 1")
                    });
                }
                (e, b) => part.check(false, || format!("quadruple #{i}: {e:?} / {b:?}")),
            }
            part
        })
        .collect();
    let pairs: Vec<SuiteReport> = (0..p.pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(p.seed, 2, i);
            let n = rng.random_range(3..=p.pair_max_dim);
            let a = random_family_set(&mut rng, n);
            let b = random_family_set(&mut rng, n);
            let mut part = SuiteReport::new("energy");
            match (cauchy_schwarz_bound(&a, &b), doubling(&a, &b)) {
                (Ok(cs), Ok(d)) => {
                    part.check(cs.holds, || format!("pair #{i}: ω(A,B,A,B) < 1/Dbl(A,B)"));
                    part.check(d.distance_bounds_hold(), || {
                        format!("pair #{i}: size ratio exceeds Dbl²")
                    });
                    part.check(d.sumset_size >= a.len().max(b.len()), || {
                        format!("pair #{i}: |A+B| < max(|A|, |B|)")
                    });
                }
                (cs, d) => part.check(false, || format!("pair #{i}: {cs:?} / {d:?}")),
            }
            part
        })
        .collect();
    merged("energy", quads.into_iter().chain(pairs))
}

pub struct AnalyticParams {
    pub random_points: u64,
    pub seed: u64,
}

/// Draws from `[0,1]`, weighted toward `1/2` and the endpoints.
fn fraction(rng: &mut ChaCha8Rng) -> f64 {
    match rng.random_range(0..4) {
        0 => rng.random_range(0.0..=1.0),
        1 => rng.random_range(0.0..0.03),
        2 => rng.random_range(0.97..=1.0),
        _ => rng.random_range(0.44..0.56),
    }
}

fn branch_ok(b: &Result<Branch, gf2_additive::Error>) -> bool {
    matches!(
        b,
        Ok(Branch::NearHalf | Branch::NearEndpoints | Branch::HypothesisFails { .. })
    )
}

/// Grid and random searches for counterexamples to both dichotomies, and `G ≤ 1`.
pub fn analytic_suite(p: &AnalyticParams) -> SuiteReport {
    let mut r = SuiteReport::new("analytic");
    let g_bound = |r: &mut SuiteReport, a: [f64; 4]| {
        let g = g_fn(a);
        r.check(matches!(g, Ok(v) if v <= 1.0 + 1e-12), || {
            format!("G{a:?} = {g:?} exceeds 1")
        });
    };
    let fine: Vec<f64> = (0..=20).map(|i| f64::from(i) / 20.0).collect();
    for &a in &fine {
        for &b in &fine {
            for &c in &fine {
                for &d in &fine {
                    g_bound(&mut r, [a, b, c, d]);
                }
            }
        }
    }
    for eps in [1e-4, 1e-3, 1e-2] {
        for i in 0..=200 {
            for j in 0..=200 {
                let (a, b) = (f64::from(i) / 200.0, f64::from(j) / 200.0);
                let branch = near_minima_f_dichotomy(a, b, eps);
                r.check(branch_ok(&branch), || {
                    format!("F dichotomy at α={a}, β={b}, ε={eps}: {branch:?}")
                });
            }
        }
    }
    let coarse: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
    for eps in [1e-4, 1e-3] {
        for &a in &coarse {
            for &b in &coarse {
                for &c in &coarse {
                    for &d in &coarse {
                        let branch = near_maxima_g_dichotomy([a, b, c, d], eps);
                        r.check(branch_ok(&branch), || {
                            format!("G dichotomy at {:?}, ε={eps}: {branch:?}", [a, b, c, d])
                        });
                    }
                }
            }
        }
    }
    let mut rng = item_rng(p.seed, 3, 0);
    for _ in 0..p.random_points {
        let (a, b) = (fraction(&mut rng), fraction(&mut rng));
        let eps = [1e-4, 1e-3, 1e-2][rng.random_range(0..3)];
        let branch = near_minima_f_dichotomy(a, b, eps);
        r.check(branch_ok(&branch), || {
            format!("F dichotomy at α={a}, β={b}, ε={eps}: {branch:?}")
        });
        let alpha: [f64; 4] = core::array::from_fn(|_| fraction(&mut rng));
        g_bound(&mut r, alpha);
        let eps = [1e-4, 1e-3][rng.random_range(0..2)];
        let branch = near_maxima_g_dichotomy(alpha, eps);
        r.check(branch_ok(&branch), || {
            format!("G dichotomy at {alpha:?}, ε={eps}: {branch:?}")
        });
    }
    r
}

pub struct FlatnessParams {
    pub trials: u64,
    pub max_dim: u32,
    pub seed: u64,
}

/// Translation invariance, monotonicity in `δ`, and witness validity.
pub fn flatness_suite(p: &FlatnessParams) -> SuiteReport {
    let parts: Vec<SuiteReport> = (0..p.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(p.seed, 4, i);
            let n = rng.random_range(3..=p.max_dim);
            let sets: [DenseSet; 4] = core::array::from_fn(|_| random_family_set(&mut rng, n));
            let refs = [&sets[0], &sets[1], &sets[2], &sets[3]];
            let translates: [GF2Vector; 4] = core::array::from_fn(|_| {
                GF2Vector::new(n, rng.random_range(0..1u32 << n)).expect("in range")
            });
            let lo = rng.random_range(1..89u64);
            let hi = rng.random_range(lo..90u64);
            let small = SpectrumThreshold::from_ratio(lo, 100).expect("valid");
            let large = SpectrumThreshold::from_ratio(hi, 100).expect("valid");
            let mut part = SuiteReport::new("flatness");
            let inv = flatness_invariance_check(refs, translates, &small);
            part.check(matches!(inv, Ok(true)), || {
                format!("trial #{i}: verdict changes under translation")
            });
            match (
                coherent_flatness(refs, &small),
                coherent_flatness(refs, &large),
            ) {
                (Ok(s), Ok(l)) => {
                    part.check(!s.is_flat || l.is_flat, || {
                        format!("trial #{i}: flat at δ={lo}/100 but not at {hi}/100")
                    });
                    if let Some(w) = &s.witness {
                        let genuine = !w.xi.is_zero()
                            && w.in_nine_tenths.contains(&false)
                            && w.in_delta.contains(&true);
                        part.check(genuine, || {
                            format!("trial #{i}: witness {} does not violate flatness", w.xi)
                        });
                    }
                }
                (s, l) => part.check(false, || format!("trial #{i}: {s:?} / {l:?}")),
            }
            part
        })
        .collect();
    merged("flatness", parts)
}

pub struct ExtractionParams {
    pub instances: u64,
    pub max_dim: u32,
    pub seed: u64,
}

/// Instance kinds: one subspace four times; four cosets with shifts summing
/// to zero; the same cosets thinned by up to 5% and re-verified flat.
pub fn extraction_suite(p: &ExtractionParams) -> SuiteReport {
    let parts: Vec<SuiteReport> = (0..p.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(p.seed, 5, i);
            let mut part = SuiteReport::new("extraction");
            let n = rng.random_range(4..=p.max_dim);
            let r = rng.random_range(2..n);
            let h0 = random_subspace(&mut rng, n, r);
            let elems = h0.elements();
            let coset = |shift: u32, keep: &dyn Fn(u32) -> bool| {
                DenseSet::from_elements(n, elems.iter().map(|&e| e ^ shift).filter(|&x| keep(x)))
                    .expect("in range")
            };
            let kind = i % 3;
            let shifts: [u32; 4] = if kind == 0 {
                [0; 4]
            } else {
                let s: [u32; 3] = core::array::from_fn(|_| rng.random_range(0..1u32 << n));
                [s[0], s[1], s[2], s[0] ^ s[1] ^ s[2]]
            };
            let (sets, k): ([DenseSet; 4], KParam) = if kind < 2 {
                (
                    shifts.map(|s| coset(s, &|_| true)),
                    KParam::from_ratio(1, 1).expect("valid"),
                )
            } else {
                let budget = (elems.len() / 20) as u64;
                let sets = shifts.map(|s| {
                    let drop: Vec<u32> = (0..rng.random_range(0..=budget))
                        .map(|_| elems[rng.random_range(0..elems.len())] ^ s)
                        .collect();
                    coset(s, &|x| !drop.contains(&x))
                });
                (sets, KParam::from_ratio(2, 1).expect("valid"))
            };
            let refs = [&sets[0], &sets[1], &sets[2], &sets[3]];
            let flat = coherent_flatness(refs, &k.flatness_threshold());
            part.check(matches!(&flat, Ok(f) if f.is_flat), || {
                format!("instance #{i}: sampled quadruple is not flat")
            });
            let tables = refs.map(walsh_transform);
            let lambda = common_high_spectrum([&tables[0], &tables[1], &tables[2], &tables[3]]);
            part.check(
                matches!(is_closed_under_addition(&lambda), Ok(true)),
                || format!("instance #{i}: Λ not closed"),
            );
            match extract_flat(refs, &k) {
                Ok(cert) => {
                    part.check(cert.checks.hlower, || {
                        format!("instance #{i}: hlower fails")
                    });
                    part.check(cert.checks.alower, || {
                        format!("instance #{i}: alower fails")
                    });
                    part.check(cert.checks.lambda_bound, || {
                        format!("instance #{i}: |Λ| bound fails")
                    });
                    part.check(
                        cert.h.cardinality() * cert.lambda.cardinality() == 1 << n,
                        || format!("instance #{i}: |H||Λ| ≠ 2ⁿ"),
                    );
                    if kind < 2 {
                        part.check(cert.h == h0, || {
                            format!("instance #{i}: H differs from the generating subspace")
                        });
                        part.check(cert.intersections == [h0.cardinality(); 4], || {
                            format!("instance #{i}: partial cosets")
                        });
                    }
                }
                Err(e) => part.check(false, || format!("instance #{i}: extraction failed: {e}")),
            }
            part
        })
        .collect();
    merged("extraction", parts)
}

pub struct StepParams {
    pub instances: u64,
    pub max_dim: u32,
    pub seed: u64,
}

/// Sets likely to be far from flat.
fn rough_set(rng: &mut ChaCha8Rng, n: u32) -> DenseSet {
    let mut spec = GeneratorSpec::new(Family::SubspacePlusNoise, n, rng.random());
    match rng.random_range(0..4) {
        0 => {
            spec.rank = Some(rng.random_range(1..=n / 2));
            spec.noise = Some(rng.random_range(1..=8));
        }
        1 => {
            spec.family = Family::IndependentVectors;
            spec.count = Some(rng.random_range(2..=n));
        }
        2 => {
            spec.family = Family::Random;
            spec.density = Some(rng.random_range(0.02..0.3));
        }
        _ => {
            spec.family = Family::CosetUnion;
            spec.rank = Some(rng.random_range(1..n - 1));
            spec.cosets = Some(rng.random_range(3..=4));
        }
    }
    generate(&spec).expect("parameters drawn within range")
}

/// Step contracts on non-flat instances: `Dbl′ ≤ K − √K/100` with
/// `K = Dbl`, and `ω′ ≥ 1/(K − 10⁻⁴)` with `K = 1/ω`.
pub fn step_suite(p: &StepParams) -> SuiteReport {
    let doubling_parts: Vec<SuiteReport> = (0..p.instances)
        .into_par_iter()
        .map(|i| {
            let mut part = SuiteReport::new("steps");
            for attempt in 0..1000u64 {
                let mut rng = item_rng(p.seed, 6, i * 1000 + attempt);
                let n = rng.random_range(4..=p.max_dim);
                let a = rough_set(&mut rng, n);
                let b = if rng.random_bool(0.5) {
                    a.clone()
                } else {
                    rough_set(&mut rng, n)
                };
                let Ok(before) = doubling(&a, &b) else {
                    continue;
                };
                let k = before.as_k();
                let Ok(report) = coherent_flatness([&a, &b, &a, &b], &k.flatness_threshold())
                else {
                    continue;
                };
                let Some(w) = report.witness else { continue };
                match doubling_decrement_step(&a, &b, w.xi) {
                    Ok((a2, b2, rec)) => {
                        part.check(
                            a2.is_subset_of(&a)
                                && b2.is_subset_of(&b)
                                && !a2.is_empty()
                                && !b2.is_empty(),
                            || format!("doubling instance #{i}: slices are not non-empty subsets"),
                        );
                        part.check(additive_decrement_holds(&rec.after, &k), || {
                            format!("doubling instance #{i}: Dbl′ > K − √K/100")
                        });
                        let kf = k.to_f64();
                        part.check(rec.after.to_f64() <= kf - kf.sqrt() / 100.0 + 1e-9, || {
                            format!("doubling instance #{i}: float cross-check fails")
                        });
                    }
                    Err(e) => part.check(false, || {
                        format!("doubling instance #{i}: step failed: {e}")
                    }),
                }
                return part;
            }
            part.check(false, || {
                format!("doubling instance #{i}: no non-flat sample found")
            });
            part
        })
        .collect();
    let energy_parts: Vec<SuiteReport> = (0..p.instances)
        .into_par_iter()
        .map(|i| {
            let mut part = SuiteReport::new("steps");
            for attempt in 0..1000u64 {
                let mut rng = item_rng(p.seed, 7, i * 1000 + attempt);
                let n = rng.random_range(4..=p.max_dim);
                let a = rough_set(&mut rng, n);
                let sets = if rng.random_bool(0.5) {
                    crate::run::translated_quadruple(&a, partner_seed(rng.random()))
                } else {
                    let b = rough_set(&mut rng, n);
                    [a.clone(), b.clone(), a, b]
                };
                let refs = [&sets[0], &sets[1], &sets[2], &sets[3]];
                let Ok(before) = energy(refs) else { continue };
                let Some(k) = before.inverse() else { continue };
                let Ok(report) = coherent_flatness(refs, &k.flatness_threshold()) else {
                    continue;
                };
                let Some(w) = report.witness else { continue };
                match energy_increment_step(refs, w.xi, &k) {
                    Ok((next, rec)) => {
                        let nested =
                            (0..4).all(|j| !next[j].is_empty() && next[j].is_subset_of(refs[j]));
                        part.check(nested, || {
                            format!("energy instance #{i}: slices are not non-empty subsets")
                        });
                        part.check(additive_increment_holds(&rec.after, &k), || {
                            format!("energy instance #{i}: ω′ < 1/(K − 10⁻⁴)")
                        });
                        part.check(
                            rec.after.omega() >= 1.0 / (k.to_f64() - 1e-4) - 1e-12,
                            || format!("energy instance #{i}: float cross-check fails"),
                        );
                    }
                    Err(e) => {
                        part.check(false, || format!("energy instance #{i}: step failed: {e}"))
                    }
                }
                return part;
            }
            part.check(false, || {
                format!("energy instance #{i}: no non-flat sample found")
            });
            part
        })
        .collect();
    merged("steps", doubling_parts.into_iter().chain(energy_parts))
}

pub struct PipelineParams {
    pub theorem: Theorem,
    pub families: Vec<Family>,
    pub dims: Vec<u32>,
    pub seeds: u64,
    pub fixed_k: bool,
    pub max_k: Option<String>,
    pub seed: u64,
}

pub fn pipeline_trials(p: &PipelineParams) -> Vec<TrialSpec> {
    let mut specs = Vec::new();
    for &family in &p.families {
        for &dim in &p.dims {
            for s in 0..p.seeds {
                specs.push(TrialSpec {
                    theorem: p.theorem,
                    generator: GeneratorSpec::new(family, dim, p.seed.wrapping_add(s)),
                    fixed_k: p.fixed_k,
                    k: None,
                    max_k: p.max_k.clone(),
                });
            }
        }
    }
    specs
}

/// End-to-end runs with every emitted report rechecked.
pub fn pipeline_suite(p: &PipelineParams) -> (SuiteReport, Vec<TrialRecord>) {
    let records = run_trials(&pipeline_trials(p));
    let mut r = SuiteReport::new("pipelines");
    for rec in &records {
        match rec {
            TrialRecord::Ok { trial, report } => {
                r.check(report.certificate, || {
                    format!("trial {trial}: certificate fails")
                });
                let outcome = recheck(report);
                r.check(outcome.ok(), || {
                    format!("trial {trial}: recheck: {}", outcome.failures.join("; "))
                });
            }
            TrialRecord::Skipped { .. } => {}
            TrialRecord::Failed { trial, error } => {
                r.check(false, || format!("trial {trial}: {error}"))
            }
        }
    }
    (r, records)
}
