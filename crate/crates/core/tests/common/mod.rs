#![allow(dead_code)]

use gf2_additive::{DenseSet, GF2Vector, Subspace};
use proptest::prelude::*;

pub fn set_in(dim: u32, max_len: usize) -> impl Strategy<Value = DenseSet> {
    prop::collection::vec(0u32..1 << dim, 1..=max_len)
        .prop_map(move |xs| DenseSet::from_elements(dim, xs).unwrap())
}

pub fn dim_and_set(
    dims: core::ops::RangeInclusive<u32>,
    max_len: usize,
) -> impl Strategy<Value = DenseSet> {
    dims.prop_flat_map(move |n| set_in(n, max_len))
}

pub fn vector_in(dim: u32) -> impl Strategy<Value = GF2Vector> {
    (0u32..1 << dim).prop_map(move |b| GF2Vector::new(dim, b).unwrap())
}

pub fn subspace_in(dim: u32) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(0u32..1 << dim, 0..=dim as usize).prop_map(move |gens| {
        let gens: Vec<GF2Vector> = gens
            .into_iter()
            .map(|b| GF2Vector::new(dim, b).unwrap())
            .collect();
        Subspace::span_closure(dim, &gens).unwrap()
    })
}

/// Union of the given cosets of `h`.
pub fn coset_set(h: &Subspace, shift: u32) -> DenseSet {
    DenseSet::from_elements(h.dim(), h.elements().into_iter().map(|e| e ^ shift)).unwrap()
}
