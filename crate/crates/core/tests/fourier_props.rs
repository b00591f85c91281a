mod common;

use common::*;
use gf2_additive::fourier::{bias_check, naive_walsh, representation_counts, spectrum};
use gf2_additive::{walsh_transform, DenseSet, GF2Vector, SpectrumThreshold};
use proptest::prelude::*;

#[test]
fn fast_matches_naive_on_every_subset_of_f2_4() {
    for mask in 0u32..1 << 16 {
        let a = DenseSet::from_elements(4, (0..16).filter(|i| mask >> i & 1 == 1)).unwrap();
        let fast = walsh_transform(&a);
        assert_eq!(
            fast.values(),
            naive_walsh(&a).unwrap().values(),
            "mask {mask:#x}"
        );
        let plancherel: i64 = fast.values().iter().map(|w| w * w).sum();
        assert_eq!(plancherel, 16 * a.len() as i64);
    }
}

#[test]
fn bias_check_agrees_with_spectrum_exhaustively() {
    let thresholds = [(1, 4), (1, 3), (1, 2), (3, 4), (9, 10), (1, 1)];
    for n in 1..=3u32 {
        for mask in 1u32..1 << (1 << n) {
            let a = DenseSet::from_elements(n, (0..1 << n).filter(|i| mask >> i & 1 == 1)).unwrap();
            for &(p, q) in &thresholds {
                let alpha = SpectrumThreshold::from_ratio(p, q).unwrap();
                let spec = spectrum(&a, &alpha).unwrap();
                for xi in 1..1u32 << n {
                    let v = GF2Vector::new(n, xi).unwrap();
                    assert_eq!(bias_check(&a, v, &alpha).unwrap(), spec.contains(&v));
                }
            }
        }
    }
}

#[test]
fn bias_check_agrees_on_f2_4_boundaries() {
    // α values that land exactly on integer cutoffs for small sets.
    let thresholds = [(1, 2), (1, 3), (1, 5), (2, 3), (3, 5)];
    for mask in 1u32..1 << 16 {
        if mask % 7 != 0 {
            continue;
        }
        let a = DenseSet::from_elements(4, (0..16).filter(|i| mask >> i & 1 == 1)).unwrap();
        for &(p, q) in &thresholds {
            let alpha = SpectrumThreshold::from_ratio(p, q).unwrap();
            let spec = spectrum(&a, &alpha).unwrap();
            for xi in 1..16u32 {
                let v = GF2Vector::new(4, xi).unwrap();
                assert_eq!(bias_check(&a, v, &alpha).unwrap(), spec.contains(&v));
            }
        }
    }
}

proptest! {
    #[test]
    fn plancherel_and_naive_agreement(a in dim_and_set(1..=12, 400)) {
        let t = walsh_transform(&a);
        prop_assert_eq!(t.energy_sum(), (1u128 << a.dim()) * a.len() as u128);
        prop_assert_eq!(t.get(0), a.len() as i64);
        if a.dim() <= 10 {
            let naive = naive_walsh(&a).unwrap();
            prop_assert_eq!(t.values(), naive.values());
        }
    }

    #[test]
    fn translation_preserves_magnitudes(a in dim_and_set(1..=10, 200), t in any::<u32>()) {
        let shift = GF2Vector::new(a.dim(), t & ((1 << a.dim()) - 1)).unwrap();
        let ta = walsh_transform(&a);
        let tb = walsh_transform(&a.translate(shift).unwrap());
        for xi in 0..1u32 << a.dim() {
            let sign = if gf2_additive::vector::dot_bits(xi, shift.bits()) == 0 { 1 } else { -1 };
            prop_assert_eq!(tb.get(xi), sign * ta.get(xi));
        }
    }

    #[test]
    fn spectrum_is_monotone(a in dim_and_set(1..=9, 200), p in 1u64..=20, q in 1u64..=20) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let small = SpectrumThreshold::from_ratio(lo, 20).unwrap();
        let large = SpectrumThreshold::from_ratio(hi, 20).unwrap();
        let s_small = spectrum(&a, &small).unwrap();
        let s_large = spectrum(&a, &large).unwrap();
        prop_assert!(s_large.iter().all(|x| s_small.contains(x)));
        prop_assert!(s_small.contains(&GF2Vector::zero(a.dim()).unwrap()));
    }

    #[test]
    fn high_spectrum_triangle(a in dim_and_set(2..=10, 300)) {
        let t = walsh_transform(&a);
        let high = t.spectrum(&SpectrumThreshold::nine_tenths()).unwrap();
        let cut = t.cutoff(&SpectrumThreshold::eight_tenths());
        for x in &high {
            for y in &high {
                prop_assert!(t.get(x.bits() ^ y.bits()).unsigned_abs() >= cut);
            }
        }
    }

    #[test]
    fn representation_counts_sum_to_product(a in set_in(7, 60), b in set_in(7, 60)) {
        let r = representation_counts(&a, &b).unwrap();
        prop_assert_eq!(r.iter().sum::<i64>(), (a.len() * b.len()) as i64);
        for (x, &c) in r.iter().enumerate() {
            let direct = a.iter().filter(|&s| b.contains_raw(s ^ x as u32)).count() as i64;
            prop_assert_eq!(c, direct);
        }
    }
}

#[test]
fn affine_subspace_spectrum_is_annihilator() {
    use gf2_additive::Subspace;
    let gens: Vec<GF2Vector> = [0b100101u32, 0b011001, 0b000110]
        .iter()
        .map(|&b| GF2Vector::new(6, b).unwrap())
        .collect();
    let h = Subspace::span_closure(6, &gens).unwrap();
    let a = coset_set(&h, 0b101010);
    let perp = h.orthogonal_complement().elements();
    for (p, q) in [(1, 100), (1, 2), (1, 1)] {
        let spec: Vec<u32> = spectrum(&a, &SpectrumThreshold::from_ratio(p, q).unwrap())
            .unwrap()
            .iter()
            .map(|v| v.bits())
            .collect();
        assert_eq!(spec, perp);
    }
}
