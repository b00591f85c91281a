//! Re-validation of a serialized report from its own data.
//!
//! Nothing computed during the original run is trusted: sets, `H`, `K`, and
//! translates are parsed back and every inequality is re-evaluated.

use gf2_additive::extraction::{evaluate_checks, intersection_size};
use gf2_additive::flatness::common_high_spectrum;
use gf2_additive::refine::{
    additive_decrement_holds, additive_increment_holds, doubling_budget, energy_budget,
    multiplicative_decrement_holds, multiplicative_increment_holds, pair_certificate_holds,
    quadruple_certificate_holds, single_certificate_holds, LoopMode,
};
use gf2_additive::stats::{doubling, energy_from_tables, DoublingValue, EnergyValue};
use gf2_additive::{coherent_flatness, walsh_transform, DenseSet, GF2Vector, KParam, Subspace};
use serde::Serialize;

use crate::format::{ModeName, StepJson, TheoremName, TheoremReport, TRACE_VERSION};

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct RecheckOutcome {
    pub failures: Vec<String>,
}

impl RecheckOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.failures.push(what.into());
        }
    }
}

fn vector(dim: u32, bits: u32) -> anyhow::Result<GF2Vector> {
    Ok(GF2Vector::new(dim, bits)?)
}

pub fn recheck(report: &TheoremReport) -> RecheckOutcome {
    let mut out = RecheckOutcome::default();
    if let Err(e) = recheck_into(report, &mut out) {
        out.failures.push(format!("malformed report: {e:#}"));
    }
    out
}

fn recheck_into(r: &TheoremReport, out: &mut RecheckOutcome) -> anyhow::Result<()> {
    out.expect(
        r.trace_version == TRACE_VERSION,
        "unsupported trace_version",
    );
    let inputs: Vec<DenseSet> = r
        .inputs
        .iter()
        .map(|l| l.to_set())
        .collect::<anyhow::Result<_>>()?;
    let finals: Vec<DenseSet> = r
        .final_sets
        .iter()
        .map(|l| l.to_set())
        .collect::<anyhow::Result<_>>()?;
    let arity = match r.theorem {
        TheoremName::Freiman => 2,
        TheoremName::Bsg => 4,
        TheoremName::SingleFreiman | TheoremName::SingleBsg => 1,
    };
    anyhow::ensure!(inputs.len() == arity, "expected {arity} inputs");
    let dim = inputs[0].dim();
    let h = Subspace::from_canonical_basis(dim, &r.h_basis)?;
    out.expect(h.cardinality() == r.h_size, "H_size disagrees with H_basis");
    let k = r.k.to_k()?;
    let mode = match r.mode {
        ModeName::Adaptive => LoopMode::Adaptive,
        ModeName::FixedK => LoopMode::FixedK,
    };

    // Quadruple seen by the refinement loop, and the sets it started from.
    let (originals, quad): ([&DenseSet; 4], [&DenseSet; 4]) =
        match (r.theorem, inputs.as_slice(), finals.as_slice()) {
            (TheoremName::Freiman, [a, b], [fa, fb]) => ([a, b, a, b], [fa, fb, fa, fb]),
            (TheoremName::SingleFreiman, [a], [fa, fb]) => ([a, a, a, a], [fa, fb, fa, fb]),
            (TheoremName::Bsg, [a, b, c, d], [fa, fb, fc, fd]) => ([a, b, c, d], [fa, fb, fc, fd]),
            (TheoremName::SingleBsg, [a], [fa, fb, fc, fd]) => ([a, a, a, a], [fa, fb, fc, fd]),
            _ => anyhow::bail!("final_sets has the wrong length"),
        };
    for (fin, orig) in quad.iter().zip(originals) {
        out.expect(
            !fin.is_empty() && fin.is_subset_of(orig),
            "final set is not a non-empty subset of its input",
        );
    }

    // Parameter of the claim.
    match r.theorem {
        TheoremName::Freiman | TheoremName::SingleFreiman => {
            let k0 = doubling(originals[0], originals[1])?.as_k();
            out.expect(k0 == k, "K differs from Dbl of the inputs");
        }
        TheoremName::Bsg | TheoremName::SingleBsg => {
            let t = originals.map(walsh_transform);
            let e = energy_from_tables([&t[0], &t[1], &t[2], &t[3]])?;
            out.expect(e.ge_inverse(&k), "inputs have ω < 1/K");
        }
    }

    // Main certificate against the original sets.
    anyhow::ensure!(
        r.translates.len() == r.intersections.len(),
        "translates and intersections differ in length"
    );
    let targets: Vec<&DenseSet> = match r.theorem {
        TheoremName::Freiman => vec![originals[0], originals[1]],
        TheoremName::Bsg => originals.to_vec(),
        TheoremName::SingleFreiman | TheoremName::SingleBsg => vec![originals[0]],
    };
    anyhow::ensure!(
        targets.len() == r.translates.len(),
        "wrong number of translates"
    );
    let mut inter = Vec::with_capacity(targets.len());
    for (set, &x) in targets.iter().zip(&r.translates) {
        inter.push(intersection_size(set, &h, vector(dim, x)?)?);
    }
    out.expect(inter == r.intersections, "recorded intersections are wrong");
    let certificate = match r.theorem {
        TheoremName::Freiman => pair_certificate_holds(inter[0], inter[1], h.cardinality(), &k),
        TheoremName::Bsg => quadruple_certificate_holds(
            &[inter[0], inter[1], inter[2], inter[3]],
            h.cardinality(),
            &k,
        ),
        TheoremName::SingleFreiman | TheoremName::SingleBsg => {
            single_certificate_holds(inter[0], h.cardinality(), &k)
        }
    };
    out.expect(certificate, "theorem certificate fails");
    out.expect(
        certificate == r.certificate,
        "recorded certificate verdict is wrong",
    );

    // Extraction on the refined quadruple.
    let ext = &r.extraction;
    let k_ext = ext.k.to_k()?;
    out.expect(k_ext <= k, "extraction K exceeds the theorem K");
    out.expect(
        ext.h_basis == r.h_basis,
        "extraction H differs from the reported H",
    );
    anyhow::ensure!(
        ext.translates.len() == 4,
        "extraction needs four translates"
    );
    let ext_translates = [
        vector(dim, ext.translates[0])?,
        vector(dim, ext.translates[1])?,
        vector(dim, ext.translates[2])?,
        vector(dim, ext.translates[3])?,
    ];
    let (checks, ext_inter) = evaluate_checks(quad, &h, &ext_translates, &k_ext)?;
    out.expect(
        ext_inter.to_vec() == ext.intersections,
        "extraction intersections are wrong",
    );
    out.expect(checks.hlower && ext.checks.hlower, "hlower fails");
    out.expect(checks.alower && ext.checks.alower, "alower fails");
    out.expect(
        checks.lambda_bound && ext.checks.lambda_bound,
        "lambda bound fails",
    );
    let t = quad.map(walsh_transform);
    let tables = [&t[0], &t[1], &t[2], &t[3]];
    out.expect(
        energy_from_tables(tables)?.ge_inverse(&k_ext),
        "refined quadruple has ω < 1/K",
    );
    let flat = coherent_flatness(quad, &k_ext.flatness_threshold())?;
    out.expect(flat.is_flat, "refined quadruple is not coherently flat");
    let lambda: Vec<u32> = common_high_spectrum(tables)
        .iter()
        .map(|v| v.bits())
        .collect();
    out.expect(
        lambda == h.orthogonal_complement().elements(),
        "H is not the annihilator of the common high spectrum",
    );

    recheck_trace(r, quad, &k, mode, out)?;
    Ok(())
}

fn recheck_trace(
    r: &TheoremReport,
    quad: [&DenseSet; 4],
    k: &KParam,
    mode: LoopMode,
    out: &mut RecheckOutcome,
) -> anyhow::Result<()> {
    let trace = &r.trace;
    out.expect(
        trace.iterations == trace.steps.len() as u64,
        "iteration count disagrees with steps",
    );
    out.expect(trace.terminal_flat, "trace did not end flat");
    let budget = match r.theorem {
        TheoremName::Freiman | TheoremName::SingleFreiman => doubling_budget(k, mode),
        TheoremName::Bsg | TheoremName::SingleBsg => energy_budget(k, mode),
    };
    out.expect(trace.iterations <= budget, "iteration budget exceeded");
    let final_sizes = quad.map(DenseSet::len);
    let mut prev: Option<Vec<u64>> = None;
    for (i, step) in trace.steps.iter().enumerate() {
        let (before, after) = match step {
            StepJson::Doubling {
                sizes_before,
                sizes_after,
                sumset_before,
                sumset_after,
                ..
            } => {
                let b = DoublingValue {
                    sumset_size: *sumset_before,
                    size_a: sizes_before[0],
                    size_b: sizes_before[1],
                };
                let a = DoublingValue {
                    sumset_size: *sumset_after,
                    size_a: sizes_after[0],
                    size_b: sizes_after[1],
                };
                let ok = match mode {
                    LoopMode::Adaptive => additive_decrement_holds(&a, &b.as_k()),
                    LoopMode::FixedK => multiplicative_decrement_holds(&b, &a, k),
                };
                out.expect(ok, format!("step {i}: doubling contract fails"));
                (sizes_before.to_vec(), sizes_after.to_vec())
            }
            StepJson::Energy {
                sizes_before,
                sizes_after,
                count_before,
                count_after,
                ..
            } => {
                let b = EnergyValue {
                    quadruple_count: *count_before,
                    sizes: *sizes_before,
                };
                let a = EnergyValue {
                    quadruple_count: *count_after,
                    sizes: *sizes_after,
                };
                let ok = match (mode, b.inverse()) {
                    (LoopMode::Adaptive, Some(k_t)) => {
                        additive_increment_holds(&a, &k_t.min(k.clone()))
                    }
                    (LoopMode::FixedK, Some(_)) => multiplicative_increment_holds(&b, &a, k),
                    (_, None) => false,
                };
                out.expect(ok, format!("step {i}: energy contract fails"));
                (sizes_before.to_vec(), sizes_after.to_vec())
            }
        };
        if let Some(p) = &prev {
            out.expect(
                p == &before,
                format!("step {i}: sizes do not continue the previous step"),
            );
        }
        prev = Some(after);
    }
    if let Some(last) = prev {
        let expected: Vec<u64> = final_sizes[..last.len()].to_vec();
        out.expect(last == expected, "last step does not end at the final sets");
    }
    Ok(())
}
