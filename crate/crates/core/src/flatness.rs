//! Coherent flatness of a quadruple of sets.
//!
//! `(A₁, A₂, A₃, A₄)` is coherently `δ`-flat when at every frequency `ξ`
//! either `ξ ∈ Spec_{9/10}(Aᵢ)` for all `i`, or `ξ ∉ Spec_δ(Aᵢ)` for all `i`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fourier::{walsh_transform, FourierTable, SpectrumThreshold};
use crate::set::DenseSet;
use crate::vector::GF2Vector;

/// Per-set data at a violating frequency.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Witness {
    pub xi: GF2Vector,
    pub walsh: [i64; 4],
    pub in_nine_tenths: [bool; 4],
    pub in_delta: [bool; 4],
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FlatnessReport {
    pub is_flat: bool,
    /// Smallest violating frequency; present iff `!is_flat`.
    pub witness: Option<Witness>,
}

/// `Spec_{9/10}` and `Spec_δ` cutoffs for one table.
fn cutoffs(t: &FourierTable, delta: &SpectrumThreshold) -> (u64, u64) {
    (t.cutoff(&SpectrumThreshold::nine_tenths()), t.cutoff(delta))
}

fn check_delta(delta: &SpectrumThreshold) -> Result<()> {
    if *delta >= SpectrumThreshold::nine_tenths() {
        return Err(Error::InvalidParameter(
            "flatness scale δ must be below 9/10",
        ));
    }
    Ok(())
}

/// Flatness test on precomputed tables; full scan over all `2ⁿ` frequencies.
pub fn coherent_flatness_tables(
    tables: [&FourierTable; 4],
    delta: &SpectrumThreshold,
) -> Result<FlatnessReport> {
    check_delta(delta)?;
    let dim = tables[0].dim();
    for t in &tables {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: t.dim(),
            });
        }
        if t.cardinality() == 0 {
            return Err(Error::EmptySet);
        }
    }
    let cuts = tables.map(|t| cutoffs(t, delta));
    for xi in 0..1u32 << dim {
        let mut all_high = true;
        let mut any_delta = false;
        for (t, &(high, low)) in tables.iter().zip(&cuts) {
            let w = t.get(xi).unsigned_abs();
            all_high &= w >= high;
            any_delta |= w >= low;
        }
        if !all_high && any_delta {
            let walsh = tables.map(|t| t.get(xi));
            let mut in_nine_tenths = [false; 4];
            let mut in_delta = [false; 4];
            for i in 0..4 {
                in_nine_tenths[i] = walsh[i].unsigned_abs() >= cuts[i].0;
                in_delta[i] = walsh[i].unsigned_abs() >= cuts[i].1;
            }
            let witness = Witness {
                xi: GF2Vector::from_raw(dim, xi),
                walsh,
                in_nine_tenths,
                in_delta,
            };
            return Ok(FlatnessReport {
                is_flat: false,
                witness: Some(witness),
            });
        }
    }
    Ok(FlatnessReport {
        is_flat: true,
        witness: None,
    })
}

/// Coherent `δ`-flatness of four sets.
///
/// Requires `0 < δ < 9/10`; the extraction pipelines use `δ = 1/√(2K)` with
/// `K ≥ 1`, which is at most `1/√2`.
pub fn coherent_flatness(
    sets: [&DenseSet; 4],
    delta: &SpectrumThreshold,
) -> Result<FlatnessReport> {
    let t = sets.map(walsh_transform);
    coherent_flatness_tables([&t[0], &t[1], &t[2], &t[3]], delta)
}

/// `Λ = ⋂ᵢ Spec_{9/10}(Aᵢ)`, in increasing order.
pub fn common_high_spectrum(tables: [&FourierTable; 4]) -> Vec<GF2Vector> {
    let nine = SpectrumThreshold::nine_tenths();
    let cuts = tables.map(|t| t.cutoff(&nine));
    let dim = tables[0].dim();
    (0..1u32 << dim)
        .filter(|&xi| {
            tables
                .iter()
                .zip(&cuts)
                .all(|(t, &c)| t.get(xi).unsigned_abs() >= c)
        })
        .map(|xi| GF2Vector::from_raw(dim, xi))
        .collect()
}

/// Whether translating each `Aᵢ` by `xᵢ` leaves the flatness verdict unchanged.
pub fn flatness_invariance_check(
    sets: [&DenseSet; 4],
    translates: [GF2Vector; 4],
    delta: &SpectrumThreshold,
) -> Result<bool> {
    let before = coherent_flatness(sets, delta)?;
    let moved = [
        sets[0].translate(translates[0])?,
        sets[1].translate(translates[1])?,
        sets[2].translate(translates[2])?,
        sets[3].translate(translates[3])?,
    ];
    let after = coherent_flatness([&moved[0], &moved[1], &moved[2], &moved[3]], delta)?;
    Ok(before.is_flat == after.is_flat)
}
