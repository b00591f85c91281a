//! Summary statistics of a single set.

use std::collections::BTreeMap;

use gf2_additive::stats::{brute_energy, energy_from_tables, sumset, BRUTE_ENERGY_LIMIT};
use gf2_additive::{walsh_transform, DenseSet, SpectrumThreshold};
use serde::Serialize;

use crate::format::format_rational;

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct AnalyzeReport {
    pub dim: u32,
    pub size: u64,
    pub sumset_size: u64,
    pub dbl_squared: String,
    pub dbl: f64,
    pub quadruple_count: u128,
    /// Direct triple-loop count, when within the brute-force guard.
    pub brute_count: Option<u128>,
    pub omega: f64,
    /// `|Spec_α(A)|` keyed by `α`.
    pub spectrum_sizes: BTreeMap<String, u64>,
}

pub fn analyze(a: &DenseSet) -> anyhow::Result<AnalyzeReport> {
    let t = walsh_transform(a);
    let e = energy_from_tables([&t, &t, &t, &t])?;
    let s = sumset(a, a)?;
    let d = gf2_additive::DoublingValue {
        sumset_size: s.len(),
        size_a: a.len(),
        size_b: a.len(),
    };
    let brute_count = if (a.len() as u128).pow(3) <= BRUTE_ENERGY_LIMIT {
        Some(brute_energy([a, a, a, a])?)
    } else {
        None
    };
    let mut spectrum_sizes = BTreeMap::new();
    for (label, num, den) in [("9/10", 9, 10), ("1/2", 1, 2), ("1/4", 1, 4)] {
        let alpha = SpectrumThreshold::from_ratio(num, den)?;
        spectrum_sizes.insert(label.to_string(), t.spectrum(&alpha)?.len() as u64);
    }
    Ok(AnalyzeReport {
        dim: a.dim(),
        size: a.len(),
        sumset_size: s.len(),
        dbl_squared: format_rational(&d.squared()),
        dbl: d.to_f64(),
        quadruple_count: e.quadruple_count,
        brute_count,
        omega: e.omega(),
        spectrum_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_vectors() {
        let a = DenseSet::from_elements(4, [1, 2, 4, 8]).unwrap();
        let r = analyze(&a).unwrap();
        assert_eq!(
            (r.sumset_size, r.quadruple_count, r.brute_count),
            (7, 40, Some(40))
        );
        assert_eq!(r.dbl_squared, "49/16");
        assert_eq!(r.omega, 0.625);
    }

    #[test]
    fn subspace() {
        let a = DenseSet::from_elements(5, [0, 3, 8, 11]).unwrap();
        let r = analyze(&a).unwrap();
        assert_eq!((r.dbl, r.omega), (1.0, 1.0));
        assert_eq!(r.spectrum_sizes["9/10"], 8);
    }
}
