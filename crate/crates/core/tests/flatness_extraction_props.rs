mod common;

use common::*;
use gf2_additive::flatness::flatness_invariance_check;
use gf2_additive::stats::{brute_energy, energy};
use gf2_additive::{
    coherent_flatness, extract_flat, DenseSet, Error, GF2Vector, KParam, SpectrumThreshold,
    Subspace,
};
use proptest::prelude::*;

fn refs(q: &[DenseSet; 4]) -> [&DenseSet; 4] {
    [&q[0], &q[1], &q[2], &q[3]]
}

fn quadruple(dim: u32, max_len: usize) -> impl Strategy<Value = [DenseSet; 4]> {
    (
        set_in(dim, max_len),
        set_in(dim, max_len),
        set_in(dim, max_len),
        set_in(dim, max_len),
    )
        .prop_map(|(a, b, c, d)| [a, b, c, d])
}

/// Four cosets of `h` whose shifts sum to zero.
fn balanced_cosets(h: &Subspace, shifts: [u32; 3]) -> [DenseSet; 4] {
    let last = shifts[0] ^ shifts[1] ^ shifts[2];
    [
        coset_set(h, shifts[0]),
        coset_set(h, shifts[1]),
        coset_set(h, shifts[2]),
        coset_set(h, last),
    ]
}

proptest! {
    #[test]
    fn verdict_is_translation_invariant(q in quadruple(6, 24), ts in prop::array::uniform4(0u32..64), d in 1u64..9) {
        let translates = ts.map(|t| GF2Vector::new(6, t).unwrap());
        let delta = SpectrumThreshold::from_ratio(d, 10).unwrap();
        prop_assert!(flatness_invariance_check(refs(&q), translates, &delta).unwrap());
    }

    #[test]
    fn flatness_is_monotone_in_delta(q in quadruple(5, 20), lo in 1u64..89, step in 0u64..20) {
        let hi = (lo + step).min(89);
        let small = SpectrumThreshold::from_ratio(lo, 100).unwrap();
        let large = SpectrumThreshold::from_ratio(hi, 100).unwrap();
        if coherent_flatness(refs(&q), &small).unwrap().is_flat {
            prop_assert!(coherent_flatness(refs(&q), &large).unwrap().is_flat);
        }
    }

    #[test]
    fn witness_is_genuine(q in quadruple(5, 20), d in 1u64..9) {
        let delta = SpectrumThreshold::from_ratio(d, 10).unwrap();
        let report = coherent_flatness(refs(&q), &delta).unwrap();
        prop_assert_eq!(report.is_flat, report.witness.is_none());
        if let Some(w) = report.witness {
            prop_assert!(!w.xi.is_zero());
            prop_assert!(w.in_nine_tenths.iter().any(|&b| !b));
            prop_assert!(w.in_delta.iter().any(|&b| b));
        }
    }

    #[test]
    fn coset_quadruples_extract_their_subspace(h in subspace_in(7), shifts in prop::array::uniform3(0u32..128)) {
        let q = balanced_cosets(&h, shifts);
        prop_assert_eq!(brute_energy(refs(&q)).unwrap(), (h.cardinality() as u128).pow(3));
        let one = KParam::from_ratio(1, 1).unwrap();
        let cert = extract_flat(refs(&q), &one).unwrap();
        prop_assert_eq!(&cert.h, &h);
        prop_assert!(cert.checks.all());
        for (set, (&t, &size)) in q.iter().zip(cert.translates.iter().zip(&cert.intersections)) {
            prop_assert_eq!(size, h.cardinality());
            let rep = h.coset_rep(GF2Vector::new(7, set.min_element().unwrap()).unwrap()).unwrap();
            prop_assert_eq!(t, rep);
        }
    }

    #[test]
    fn unbalanced_cosets_lose_energy(h in subspace_in(6), shifts in prop::array::uniform4(0u32..64)) {
        let q = shifts.map(|s| coset_set(&h, s));
        let sum = GF2Vector::new(6, shifts.iter().fold(0, |acc, s| acc ^ s)).unwrap();
        let e = energy(refs(&q)).unwrap();
        let full = (h.cardinality() as u128).pow(3);
        prop_assert_eq!(e.quadruple_count == full, h.contains(sum));
        if !h.contains(sum) {
            prop_assert_eq!(e.quadruple_count, 0);
        }
    }

    #[test]
    fn extraction_commutes_with_translation(h in subspace_in(6), deleted in 0u32..64, t3 in prop::array::uniform3(0u32..64)) {
        prop_assume!(h.rank() >= 2);
        let ts = [t3[0], t3[1], t3[2], t3[0] ^ t3[1] ^ t3[2]];
        let base: Vec<u32> = h.elements().into_iter().filter(|&e| e != deleted || e == 0).collect();
        let a = DenseSet::from_elements(6, base).unwrap();
        let q = [a.clone(), a.clone(), a.clone(), a];
        let two = KParam::from_ratio(2, 1).unwrap();
        let Ok(cert) = extract_flat(refs(&q), &two) else { return Ok(()) };
        let moved: [DenseSet; 4] = core::array::from_fn(|i| q[i].translate(GF2Vector::new(6, ts[i]).unwrap()).unwrap());
        prop_assert_eq!(energy(refs(&moved)).unwrap(), energy(refs(&q)).unwrap());
        let moved_cert = extract_flat(refs(&moved), &two).unwrap();
        prop_assert_eq!(&moved_cert.h, &cert.h);
        prop_assert_eq!(moved_cert.intersections, cert.intersections);
        for ((t, &s), &moved) in cert.translates.iter().zip(&ts).zip(&moved_cert.translates) {
            let shifted = GF2Vector::new(6, t.bits() ^ s).unwrap();
            prop_assert_eq!(moved, cert.h.coset_rep(shifted).unwrap());
        }
    }
}

#[test]
fn thinned_subspaces_certify_at_k_two() {
    let gens: Vec<GF2Vector> = [1u32, 2, 4, 8, 16]
        .iter()
        .map(|&b| GF2Vector::new(8, b << 1 | 1).unwrap())
        .collect();
    let h0 = Subspace::span_closure(8, &gens).unwrap();
    let elems = h0.elements();
    let two = KParam::from_ratio(2, 1).unwrap();
    let mut certified = 0;
    for drop in 1..elems.len() {
        let a = DenseSet::from_elements(8, elems.iter().copied().filter(|&e| e != elems[drop]))
            .unwrap();
        let q = [&a, &a, &a, &a];
        match extract_flat(q, &two) {
            Ok(cert) => {
                assert!(cert.checks.all());
                assert_eq!(cert.h, h0);
                certified += 1;
            }
            Err(Error::PreconditionNotFlat { .. }) => {}
            Err(e) => panic!("unexpected {e:?}"),
        }
    }
    assert!(certified > 0);
}
