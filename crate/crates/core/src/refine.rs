//! Refinement engines and the end-to-end extraction drivers.
//!
//! Both engines share one loop: test the current quadruple for coherent
//! `1/√(2K)`-flatness; if flat, extract; otherwise take the smallest
//! violating frequency `ξ`, split every set along `ξ·x = j`, and keep the
//! best admissible slice tuple.
//!
//! * Doubling engine (two sets, quadruple `(A, B, A, B)`): keeps the slice
//!   pair of least `Dbl`. In adaptive mode `K_t = Dbl(A_t, B_t)` and each
//!   step must satisfy `Dbl(A′, B′) ≤ K_t − √K_t / 100`.
//! * Energy engine (four sets): keeps the even-parity slice tuple of largest
//!   `ω`. In adaptive mode `K_t = 1/ω_t` and each step must satisfy
//!   `ω′ ≥ 1 / (K_t − 10⁻⁴)`.
//!
//! Exact ties in the measure go to the tuple with the larger size product,
//! then to the first in enumeration order.
//!
//! In [`LoopMode::FixedK`] the flatness scale stays at the initial `K` and
//! the per-step contract is the multiplicative one that scale supports:
//! `Dbl′ ≤ Dbl / (1 + 1/(100√K))`, resp. `ω′ ≥ ω / (1 − 1/(1000K))`.

use core::cmp::Ordering;

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, rat, shifted_fourth_power, sign_at, upow, KParam};
use crate::extraction::{alower_holds, extract_flat, intersection_size, ExtractionCertificate};
use crate::flatness::coherent_flatness_tables;
use crate::fourier::{walsh_at, walsh_transform, SpectrumThreshold};
use crate::set::DenseSet;
use crate::stats::{
    cauchy_schwarz_from, doubling, energy, energy_from_tables, DoublingValue, EnergyValue,
};
use crate::subspace::Subspace;
use crate::vector::GF2Vector;

/// How the refinement loop chooses its parameter.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum LoopMode {
    /// Re-derive `K_t` from the current sets at every step.
    #[default]
    Adaptive,
    /// Keep the initial `K` for the flatness scale throughout.
    FixedK,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoublingStepRecord {
    pub witness: GF2Vector,
    /// Slice labels `(i, j)` of the kept pair `(A_i, B_j)`.
    pub choice: [u8; 2],
    pub before: DoublingValue,
    pub after: DoublingValue,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EnergyStepRecord {
    pub witness: GF2Vector,
    /// Slice labels `j₁..j₄`, of even parity.
    pub choice: [u8; 4],
    pub before: EnergyValue,
    pub after: EnergyValue,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceStep {
    Doubling(DoublingStepRecord),
    Energy(EnergyStepRecord),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RefinementTrace {
    pub steps: Vec<TraceStep>,
    pub terminal_flat: bool,
}

impl RefinementTrace {
    pub fn iterations(&self) -> u64 {
        self.steps.len() as u64
    }
}

/// Which statement a [`TheoremResult`] certifies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TheoremKind {
    /// `|A∩(x+H)| · |B∩(y+H)| · (2K)² ≥ |H|²`.
    Freiman,
    /// `∏|Aᵢ∩(xᵢ+H)| · (2K)⁴ ≥ |H|⁴`.
    Bsg,
    /// `|A∩(x+H)| · 2K ≥ |H|`, from the doubling engine.
    SingleFreiman,
    /// `|A∩(x+H)| · 2K ≥ |H|`, from the energy engine.
    SingleBsg,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremResult {
    pub kind: TheoremKind,
    pub mode: LoopMode,
    pub h: Subspace,
    /// `(x, y)`, `x₁..x₄`, or a single `x`, depending on `kind`.
    pub translates: Vec<GF2Vector>,
    /// Intersections of the original sets with the chosen cosets.
    pub intersections: Vec<u64>,
    /// Parameter of the final certificate (`Dbl(A,B)` or the user's `K`).
    pub k: KParam,
    /// Refined sets handed to the extraction.
    pub final_sets: Vec<DenseSet>,
    pub extraction: ExtractionCertificate,
    pub trace: RefinementTrace,
    pub certificate: bool,
}

/// `(2K)² · I_A · I_B ≥ |H|²`, compared via fourth powers.
pub fn pair_certificate_holds(ia: u64, ib: u64, h_size: u64, k: &KParam) -> bool {
    let p = BigInt::from(ia) * BigInt::from(ib);
    BigRational::from_integer(&p * &p * 16) * k.fourth() >= int(BigInt::from(upow(h_size, 4)))
}

/// `2K · I ≥ |H|`.
pub fn single_certificate_holds(i: u64, h_size: u64, k: &KParam) -> bool {
    alower_holds(h_size, &[i; 4], k)
}

/// `(2K)⁴ · ∏ Iᵢ ≥ |H|⁴`.
pub fn quadruple_certificate_holds(intersections: &[u64; 4], h_size: u64, k: &KParam) -> bool {
    alower_holds(h_size, intersections, k)
}

/// `ceil(200 √K) + 1`.
pub fn doubling_budget(k: &KParam, mode: LoopMode) -> u64 {
    match mode {
        LoopMode::Adaptive => k.surd().sqrt().ceil_scaled(200) + 1,
        LoopMode::FixedK => {
            let kf = k.to_f64();
            let rate = libm::log1p(1.0 / (100.0 * libm::sqrt(kf)));
            libm::ceil(libm::log(kf) / rate) as u64 + 1
        }
    }
}

/// `ceil(10⁴ (K − 1)) + 1`.
pub fn energy_budget(k: &KParam, mode: LoopMode) -> u64 {
    match mode {
        LoopMode::Adaptive => k.surd().ceil_scaled(10_000) - 10_000 + 1,
        LoopMode::FixedK => {
            let kf = k.to_f64();
            let rate = -libm::log1p(-1.0 / (1000.0 * kf));
            libm::ceil(libm::log(kf) / rate) as u64 + 1
        }
    }
}

/// Does `ξ` violate coherent `δ`-flatness for these sets?
fn violates(sets: &[&DenseSet], xi: u32, delta: &SpectrumThreshold) -> bool {
    let nine = SpectrumThreshold::nine_tenths();
    let mut all_high = true;
    let mut any_delta = false;
    for s in sets {
        let w = walsh_at(s, xi).unsigned_abs();
        all_high &= w >= nine.cutoff(s.len());
        any_delta |= w >= delta.cutoff(s.len());
    }
    !all_high && any_delta
}

fn check_frequency(dim: u32, xi: GF2Vector) -> Result<()> {
    if xi.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: xi.dim(),
        });
    }
    if xi.is_zero() {
        return Err(Error::ZeroFrequency);
    }
    Ok(())
}

/// Target a doubling step must meet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecrementRule {
    /// `K_t = Dbl(A, B)`; require `Dbl(A′,B′) ≤ K_t − √K_t/100`.
    Additive,
    /// Flatness scale from the fixed `K`; require `Dbl′ ≤ Dbl/(1 + 1/(100√K))`.
    Multiplicative(KParam),
}

/// `Dbl′ ≤ K − √K/100` with `Dbl′² = s` and `u = √K`:
/// `u⁴ − u³/50 + u²/10⁴ − s ≥ 0`.
pub fn additive_decrement_holds(after: &DoublingValue, k: &KParam) -> bool {
    let u = k.surd().sqrt();
    let s = after.squared();
    let coeffs = [
        -s,
        BigRational::zero(),
        rat(1, 10_000),
        rat(-1, 50),
        BigRational::one(),
    ];
    sign_at(&coeffs, &u) != Ordering::Less
}

/// `Dbl′ (1 + 1/(100√K)) ≤ Dbl`, squared with `u = √K`:
/// `10⁴ s u² − s′ (10⁴ u² + 200 u + 1) ≥ 0`.
pub fn multiplicative_decrement_holds(
    before: &DoublingValue,
    after: &DoublingValue,
    k: &KParam,
) -> bool {
    let u = k.surd().sqrt();
    let (s, s2) = (before.squared(), after.squared());
    let c2 = (&s - &s2) * int(10_000);
    let c1 = -(&s2 * int(200));
    let c0 = -s2;
    sign_at(&[c0, c1, c2], &u) != Ordering::Less
}

/// One doubling decrement with the adaptive target.
pub fn doubling_decrement_step(
    a: &DenseSet,
    b: &DenseSet,
    xi: GF2Vector,
) -> Result<(DenseSet, DenseSet, DoublingStepRecord)> {
    doubling_decrement_step_with(a, b, xi, &DecrementRule::Additive)
}

pub fn doubling_decrement_step_with(
    a: &DenseSet,
    b: &DenseSet,
    xi: GF2Vector,
    rule: &DecrementRule,
) -> Result<(DenseSet, DenseSet, DoublingStepRecord)> {
    let before = doubling(a, b)?;
    check_frequency(a.dim(), xi)?;
    let k = match rule {
        DecrementRule::Additive => before.as_k(),
        DecrementRule::Multiplicative(k) => {
            if !before.le_k(k) {
                return Err(Error::InvalidParameter("Dbl(A, B) exceeds K"));
            }
            k.clone()
        }
    };
    if !violates(&[a, b], xi.bits(), &k.flatness_threshold()) {
        return Err(Error::DecrementUnavailable);
    }
    let a_slices = [a.slice(xi, 0)?, a.slice(xi, 1)?];
    let b_slices = [b.slice(xi, 0)?, b.slice(xi, 1)?];
    let mut best: Option<([u8; 2], DoublingValue)> = None;
    for i in 0..2u8 {
        for j in 0..2u8 {
            let (ai, bj) = (&a_slices[i as usize], &b_slices[j as usize]);
            if ai.is_empty() || bj.is_empty() {
                continue;
            }
            let d = doubling(ai, bj)?;
            let better =
                best.as_ref()
                    .is_none_or(|(_, cur)| match d.squared().cmp(&cur.squared()) {
                        Ordering::Less => true,
                        Ordering::Equal => d.size_a * d.size_b > cur.size_a * cur.size_b,
                        Ordering::Greater => false,
                    });
            if better {
                best = Some(([i, j], d));
            }
        }
    }
    let (choice, after) = best.ok_or(Error::EmptySlices)?;
    let ok = match rule {
        DecrementRule::Additive => additive_decrement_holds(&after, &k),
        DecrementRule::Multiplicative(k) => multiplicative_decrement_holds(&before, &after, k),
    };
    if !ok {
        return Err(Error::DecrementUnavailable);
    }
    let [a_slice0, a_slice1] = a_slices;
    let [b_slice0, b_slice1] = b_slices;
    let new_a = if choice[0] == 0 { a_slice0 } else { a_slice1 };
    let new_b = if choice[1] == 0 { b_slice0 } else { b_slice1 };
    Ok((
        new_a,
        new_b,
        DoublingStepRecord {
            witness: xi,
            choice,
            before,
            after,
        },
    ))
}

/// Target an energy step must meet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IncrementRule {
    /// `ω ≥ 1/K_t` on input; require `ω′ ≥ 1/(K_t − 10⁻⁴)`.
    Additive(KParam),
    /// Flatness scale from the fixed `K`; require `ω′ ≥ ω/(1 − 1/(1000K))`.
    Multiplicative(KParam),
}

/// `ω′ ≥ 1/(K − 10⁻⁴)`, i.e. `count′⁴ (u − 10⁻⁴)⁴ − P′³ ≥ 0` with `u = K`.
pub fn additive_increment_holds(after: &EnergyValue, k: &KParam) -> bool {
    let c4 = BigRational::from_integer(num_traits::pow(BigInt::from(after.quadruple_count), 4));
    let p3 = BigRational::from_integer(num_traits::pow(after.size_product(), 3));
    let mut coeffs: Vec<BigRational> = shifted_fourth_power(&rat(1, 10_000))
        .into_iter()
        .map(|c| c * &c4)
        .collect();
    coeffs[0] -= p3;
    sign_at(&coeffs, k.surd()) != Ordering::Less
}

/// `ω′ (1 − 1/(1000K)) ≥ ω`, i.e. `ω′⁴ (u − 10⁻³)⁴ − ω⁴ u⁴ ≥ 0` with `u = K`.
pub fn multiplicative_increment_holds(
    before: &EnergyValue,
    after: &EnergyValue,
    k: &KParam,
) -> bool {
    let w_after = after.omega_fourth();
    let w_before = before.omega_fourth();
    let mut coeffs: Vec<BigRational> = shifted_fourth_power(&rat(1, 1000))
        .into_iter()
        .map(|c| c * &w_after)
        .collect();
    coeffs[4] -= w_before;
    sign_at(&coeffs, k.surd()) != Ordering::Less
}

/// One energy increment with the additive target at `K_t`.
pub fn energy_increment_step(
    sets: [&DenseSet; 4],
    xi: GF2Vector,
    k_t: &KParam,
) -> Result<([DenseSet; 4], EnergyStepRecord)> {
    energy_increment_step_with(sets, xi, &IncrementRule::Additive(k_t.clone()))
}

pub fn energy_increment_step_with(
    sets: [&DenseSet; 4],
    xi: GF2Vector,
    rule: &IncrementRule,
) -> Result<([DenseSet; 4], EnergyStepRecord)> {
    let before = energy(sets)?;
    check_frequency(sets[0].dim(), xi)?;
    let k = match rule {
        IncrementRule::Additive(k) | IncrementRule::Multiplicative(k) => k,
    };
    if !before.ge_inverse(k) {
        return Err(Error::PreconditionLowEnergy);
    }
    if !violates(&sets, xi.bits(), &k.flatness_threshold()) {
        return Err(Error::IncrementUnavailable);
    }
    let slices: Vec<[DenseSet; 2]> = sets
        .iter()
        .map(|s| Ok([s.slice(xi, 0)?, s.slice(xi, 1)?]))
        .collect::<Result<_>>()?;
    let mut best: Option<([u8; 4], EnergyValue)> = None;
    for mask in 0u8..16 {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let choice = [mask & 1, mask >> 1 & 1, mask >> 2 & 1, mask >> 3 & 1];
        let tuple: [&DenseSet; 4] = core::array::from_fn(|i| &slices[i][choice[i] as usize]);
        if tuple.iter().any(|s| s.is_empty()) {
            continue;
        }
        let e = energy(tuple)?;
        let better = best.as_ref().is_none_or(|(_, cur)| match e.cmp_omega(cur) {
            Ordering::Greater => true,
            Ordering::Equal => e.size_product() > cur.size_product(),
            Ordering::Less => false,
        });
        if better {
            best = Some((choice, e));
        }
    }
    let (choice, after) = best.ok_or(Error::EmptySlices)?;
    let ok = match rule {
        IncrementRule::Additive(k) => additive_increment_holds(&after, k),
        IncrementRule::Multiplicative(k) => multiplicative_increment_holds(&before, &after, k),
    };
    if !ok {
        return Err(Error::IncrementUnavailable);
    }
    let mut slices = slices.into_iter();
    let out: [DenseSet; 4] = core::array::from_fn(|i| {
        let [s0, s1] = slices.next().expect("four slice pairs");
        if choice[i] == 0 {
            s0
        } else {
            s1
        }
    });
    Ok((
        out,
        EnergyStepRecord {
            witness: xi,
            choice,
            before,
            after,
        },
    ))
}

fn better_translate(
    set: &DenseSet,
    h: &Subspace,
    candidates: [GF2Vector; 2],
) -> Result<(GF2Vector, u64)> {
    let c0 = intersection_size(set, h, candidates[0])?;
    let c1 = intersection_size(set, h, candidates[1])?;
    Ok(if c1 > c0 {
        (candidates[1], c1)
    } else {
        (candidates[0], c0)
    })
}

/// Two-set extraction driven by the doubling engine.
///
/// Returns `H` and `x, y` with `|A∩(x+H)| · |B∩(y+H)| · (2K₀)² ≥ |H|²`
/// where `K₀ = Dbl(A, B)`.
pub fn freiman_pipeline(a: &DenseSet, b: &DenseSet, mode: LoopMode) -> Result<TheoremResult> {
    let k0 = doubling(a, b)?.as_k();
    let budget = doubling_budget(&k0, mode);
    let mut trace = RefinementTrace::default();
    let (mut at, mut bt) = (a.clone(), b.clone());
    loop {
        let ta = walsh_transform(&at);
        let tb = walsh_transform(&bt);
        let dbl = doubling(&at, &bt)?;
        let k_t = match mode {
            LoopMode::Adaptive => dbl.as_k(),
            LoopMode::FixedK => k0.clone(),
        };
        let report = coherent_flatness_tables([&ta, &tb, &ta, &tb], &k_t.flatness_threshold())?;
        match report.witness {
            None => {
                trace.terminal_flat = true;
                let cs = cauchy_schwarz_from(energy_from_tables([&ta, &tb, &ta, &tb])?, dbl);
                if !cs.holds {
                    return Err(Error::CertificateViolation("omegab"));
                }
                let cert = extract_flat([&at, &bt, &at, &bt], &k_t)?;
                let t = cert.translates;
                let (x, ia) = better_translate(a, &cert.h, [t[0], t[2]])?;
                let (y, ib) = better_translate(b, &cert.h, [t[1], t[3]])?;
                let certificate = pair_certificate_holds(ia, ib, cert.h.cardinality(), &k0);
                if !certificate {
                    return Err(Error::CertificateViolation("theorem"));
                }
                return Ok(TheoremResult {
                    kind: TheoremKind::Freiman,
                    mode,
                    h: cert.h.clone(),
                    translates: vec![x, y],
                    intersections: vec![ia, ib],
                    k: k0,
                    final_sets: vec![at, bt],
                    extraction: cert,
                    trace,
                    certificate,
                });
            }
            Some(w) => {
                if trace.iterations() >= budget {
                    return Err(Error::IterationBudgetExceeded { budget });
                }
                let rule = match mode {
                    LoopMode::Adaptive => DecrementRule::Additive,
                    LoopMode::FixedK => DecrementRule::Multiplicative(k0.clone()),
                };
                let (na, nb, record) = doubling_decrement_step_with(&at, &bt, w.xi, &rule)?;
                trace.steps.push(TraceStep::Doubling(record));
                at = na;
                bt = nb;
            }
        }
    }
}

/// Four-set extraction driven by the energy engine.
///
/// Requires `ω(A₁..A₄) ≥ 1/K`; returns `H` and `x₁..x₄` with
/// `∏|Aᵢ∩(xᵢ+H)| · (2K)⁴ ≥ |H|⁴`.
pub fn bsg_pipeline(sets: [&DenseSet; 4], k: &KParam, mode: LoopMode) -> Result<TheoremResult> {
    let e0 = energy(sets)?;
    if !e0.ge_inverse(k) {
        return Err(Error::PreconditionLowEnergy);
    }
    let budget = energy_budget(k, mode);
    let mut trace = RefinementTrace::default();
    let mut cur: [DenseSet; 4] = sets.map(DenseSet::clone);
    loop {
        let t = cur.each_ref().map(walsh_transform);
        let tables = [&t[0], &t[1], &t[2], &t[3]];
        let e = energy_from_tables(tables)?;
        let k_t = match mode {
            LoopMode::Adaptive => k
                .clone()
                .min(e.inverse().ok_or(Error::PreconditionLowEnergy)?),
            LoopMode::FixedK => k.clone(),
        };
        let report = coherent_flatness_tables(tables, &k_t.flatness_threshold())?;
        match report.witness {
            None => {
                trace.terminal_flat = true;
                let cert = extract_flat(cur.each_ref(), &k_t)?;
                let mut intersections = [0u64; 4];
                for i in 0..4 {
                    intersections[i] = intersection_size(sets[i], &cert.h, cert.translates[i])?;
                }
                let certificate =
                    quadruple_certificate_holds(&intersections, cert.h.cardinality(), k);
                if !certificate {
                    return Err(Error::CertificateViolation("theorem"));
                }
                return Ok(TheoremResult {
                    kind: TheoremKind::Bsg,
                    mode,
                    h: cert.h.clone(),
                    translates: cert.translates.to_vec(),
                    intersections: intersections.to_vec(),
                    k: k.clone(),
                    final_sets: cur.to_vec(),
                    extraction: cert,
                    trace,
                    certificate,
                });
            }
            Some(w) => {
                if trace.iterations() >= budget {
                    return Err(Error::IterationBudgetExceeded { budget });
                }
                let rule = match mode {
                    LoopMode::Adaptive => IncrementRule::Additive(k_t),
                    LoopMode::FixedK => IncrementRule::Multiplicative(k.clone()),
                };
                let (next, record) = energy_increment_step_with(cur.each_ref(), w.xi, &rule)?;
                trace.steps.push(TraceStep::Energy(record));
                cur = next;
            }
        }
    }
}

/// One set with small doubling: `|A∩(x+H)| · 2K₀ ≥ |H|`, `K₀ = Dbl(A, A)`.
pub fn single_set_freiman(a: &DenseSet, mode: LoopMode) -> Result<TheoremResult> {
    let mut r = freiman_pipeline(a, a, mode)?;
    let (x, i) = if r.intersections[1] > r.intersections[0] {
        (r.translates[1], r.intersections[1])
    } else {
        (r.translates[0], r.intersections[0])
    };
    r.kind = TheoremKind::SingleFreiman;
    r.translates = vec![x];
    r.intersections = vec![i];
    r.certificate = single_certificate_holds(i, r.h.cardinality(), &r.k);
    if !r.certificate {
        return Err(Error::CertificateViolation("theorem"));
    }
    Ok(r)
}

/// One set with at least `|A|³/K` additive quadruples:
/// `|A∩(x+H)| · 2K ≥ |H|`.
pub fn single_set_bsg(a: &DenseSet, k: &KParam, mode: LoopMode) -> Result<TheoremResult> {
    let mut r = bsg_pipeline([a, a, a, a], k, mode)?;
    let mut best = 0;
    for i in 1..4 {
        if r.intersections[i] > r.intersections[best] {
            best = i;
        }
    }
    r.kind = TheoremKind::SingleBsg;
    r.translates = vec![r.translates[best]];
    r.intersections = vec![r.intersections[best]];
    r.certificate = single_certificate_holds(r.intersections[0], r.h.cardinality(), k);
    if !r.certificate {
        return Err(Error::CertificateViolation("theorem"));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_with_zero(dim: u32, m: u32) -> DenseSet {
        DenseSet::from_elements(dim, core::iter::once(0).chain((0..m).map(|i| 1 << i))).unwrap()
    }

    #[test]
    fn budgets() {
        let one = KParam::from_ratio(1, 1).unwrap();
        assert_eq!(doubling_budget(&one, LoopMode::Adaptive), 201);
        assert_eq!(energy_budget(&one, LoopMode::Adaptive), 1);
        let four = KParam::from_ratio(4, 1).unwrap();
        assert_eq!(doubling_budget(&four, LoopMode::Adaptive), 401);
        assert_eq!(energy_budget(&four, LoopMode::Adaptive), 30_001);
        // √2 · 200 = 282.84...
        let two = KParam::from_ratio(2, 1).unwrap();
        assert_eq!(doubling_budget(&two, LoopMode::Adaptive), 284);
    }

    #[test]
    fn additive_decrement_boundary() {
        // K = 4: K − √K/100 = 3.98, so Dbl′² = 3.98² = 15.8404 is exactly on the boundary.
        let k = KParam::from_ratio(4, 1).unwrap();
        let on = DoublingValue {
            sumset_size: 398,
            size_a: 100,
            size_b: 100,
        };
        assert!(additive_decrement_holds(&on, &k));
        let above = DoublingValue {
            sumset_size: 3981,
            size_a: 1000,
            size_b: 1000,
        };
        assert!(!additive_decrement_holds(&above, &k));
    }

    #[test]
    fn additive_increment_boundary() {
        // K = 2, so the target is ω ≥ 1/1.9999. Sizes 1 each: ω = count.
        let k = KParam::from_ratio(2, 1).unwrap();
        let e = |c| EnergyValue {
            quadruple_count: c,
            sizes: [16, 16, 16, 16],
        };
        // ω = count / 16³ = count / 4096 ≥ 1/1.9999 ⇔ count ≥ 2048.1024...
        assert!(additive_increment_holds(&e(2049), &k));
        assert!(!additive_increment_holds(&e(2048), &k));
    }

    #[test]
    fn doubling_step_on_basis_vectors() {
        let a = basis_with_zero(8, 8);
        let k = doubling(&a, &a).unwrap().as_k();
        let t = walsh_transform(&a);
        let report = coherent_flatness_tables([&t, &t, &t, &t], &k.flatness_threshold()).unwrap();
        let xi = report.witness.expect("not flat").xi;
        let (na, nb, rec) = doubling_decrement_step(&a, &a, xi).unwrap();
        assert!(na.is_subset_of(&a) && nb.is_subset_of(&a));
        assert!(!na.is_empty() && !nb.is_empty());
        assert!(rec.after.squared() < rec.before.squared());
        assert!(additive_decrement_holds(&rec.after, &rec.before.as_k()));
    }

    #[test]
    fn step_on_flat_input_is_unavailable() {
        let full = DenseSet::full(4).unwrap();
        let xi = GF2Vector::new(4, 3).unwrap();
        assert!(matches!(
            doubling_decrement_step(&full, &full, xi),
            Err(Error::DecrementUnavailable)
        ));
        let k = KParam::from_ratio(1, 1).unwrap();
        assert!(matches!(
            energy_increment_step([&full, &full, &full, &full], xi, &k),
            Err(Error::IncrementUnavailable)
        ));
        assert!(matches!(
            doubling_decrement_step(&full, &full, GF2Vector::zero(4).unwrap()),
            Err(Error::ZeroFrequency)
        ));
    }

    #[test]
    fn freiman_on_affine_subspace_is_immediate() {
        let a = DenseSet::from_elements(5, [0b10001, 0b10011, 0b10101, 0b10111]).unwrap();
        let r = single_set_freiman(&a, LoopMode::Adaptive).unwrap();
        assert_eq!(r.trace.iterations(), 0);
        assert_eq!(r.intersections, [4]);
        assert_eq!(r.h.cardinality(), 4);
        assert!(r.certificate);
    }

    #[test]
    fn freiman_on_basis_vectors() {
        for mode in [LoopMode::Adaptive, LoopMode::FixedK] {
            let a = basis_with_zero(8, 8);
            let r = freiman_pipeline(&a, &a, mode).unwrap();
            assert!(r.certificate);
            assert!(r.trace.terminal_flat);
            assert!(r.trace.iterations() <= doubling_budget(&r.k, mode));
            assert!(r
                .final_sets
                .iter()
                .all(|s| s.is_subset_of(&a) && !s.is_empty()));
        }
    }

    #[test]
    fn bsg_on_noisy_subspace() {
        let h0: Vec<u32> = (0..32u32).collect();
        let noise = [
            0b1_0000_0000u32,
            0b10_1010_0000,
            0b11_0000_0001,
            0b01_1100_0110,
        ];
        let a = DenseSet::from_elements(10, h0.into_iter().chain(noise)).unwrap();
        let e = energy([&a, &a, &a, &a]).unwrap();
        let k = e.inverse().unwrap().rational_ceiling(1000).unwrap();
        for mode in [LoopMode::Adaptive, LoopMode::FixedK] {
            let r = single_set_bsg(&a, &k, mode).unwrap();
            assert!(r.certificate);
            assert!(single_certificate_holds(
                r.intersections[0],
                r.h.cardinality(),
                &k
            ));
        }
    }

    #[test]
    fn bsg_rejects_low_energy() {
        let a = basis_with_zero(8, 8);
        let k = KParam::from_ratio(1, 1).unwrap();
        assert_eq!(
            bsg_pipeline([&a, &a, &a, &a], &k, LoopMode::Adaptive).unwrap_err(),
            Error::PreconditionLowEnergy
        );
    }
}
