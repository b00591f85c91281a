//! Seeded set generators.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)`, so a spec
//! maps to exactly one set on every platform.

use gf2_additive::{DenseSet, GF2Vector, Subspace, MAX_DIM};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifier of the PRNG recorded in every report header.
pub const PRNG_ID: &str = "rand_chacha::ChaCha8Rng::seed_from_u64";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BadSpec {
    #[error("dimension {0} outside 1..={MAX_DIM}")]
    Dimension(u32),
    #[error("rank {rank} exceeds dimension {dim}")]
    Rank { rank: u32, dim: u32 },
    #[error("{requested} cosets requested but only {available} exist")]
    Cosets { requested: u64, available: u64 },
    #[error("{requested} noise points requested but only {available} lie outside the subspace")]
    Noise { requested: u64, available: u64 },
    #[error("count {count} exceeds dimension {dim}")]
    Count { count: u32, dim: u32 },
    #[error("density {0} outside (0, 1]")]
    Density(f64),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Family {
    Subspace,
    Affine,
    CosetUnion,
    SubspacePlusNoise,
    IndependentVectors,
    Random,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Subspace,
        Family::Affine,
        Family::CosetUnion,
        Family::SubspacePlusNoise,
        Family::IndependentVectors,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Subspace => "subspace",
            Family::Affine => "affine",
            Family::CosetUnion => "coset_union",
            Family::SubspacePlusNoise => "subspace_plus_noise",
            Family::IndependentVectors => "independent_vectors",
            Family::Random => "random",
        }
    }
}

/// Family, dimension, seed, and the family's shape parameters.
///
/// `None` parameters take their defaults: rank `n/2`, 2 cosets, 4 noise
/// points, `m = n` vectors, density 1/2.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub dim: u32,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosets: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

impl GeneratorSpec {
    pub fn new(family: Family, dim: u32, seed: u64) -> Self {
        Self {
            family,
            dim,
            seed,
            rank: None,
            cosets: None,
            noise: None,
            count: None,
            density: None,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn rank(&self) -> Result<u32, BadSpec> {
        let r = self.rank.unwrap_or(self.dim / 2);
        if r > self.dim {
            return Err(BadSpec::Rank {
                rank: r,
                dim: self.dim,
            });
        }
        Ok(r)
    }
}

/// Seed of the second set in a two-set run derived from `seed`.
pub fn partner_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Seeds of the four sets in a four-set run derived from `seed`.
pub fn quadruple_seeds(seed: u64) -> [u64; 4] {
    [
        seed,
        partner_seed(seed),
        seed.rotate_left(17) ^ 0x5851_f42d,
        seed.rotate_left(31) ^ 0x1405_7b7e,
    ]
}

fn random_vector(rng: &mut ChaCha8Rng, dim: u32) -> u32 {
    rng.random_range(0..1u32 << dim)
}

/// Uniform subspace of exact rank `r`, by rejection on dependent draws.
pub fn random_subspace(rng: &mut ChaCha8Rng, dim: u32, r: u32) -> Subspace {
    let mut gens: Vec<GF2Vector> = Vec::with_capacity(r as usize);
    let mut h = Subspace::zero(dim).expect("validated dimension");
    while h.rank() < r {
        let v = GF2Vector::new(dim, random_vector(rng, dim)).expect("in range");
        if !h.contains(v) {
            gens.push(v);
            h = Subspace::span_closure(dim, &gens).expect("same dimension");
        }
    }
    h
}

fn distinct_coset_reps(rng: &mut ChaCha8Rng, h: &Subspace, t: u64) -> Vec<u32> {
    let mut reps: Vec<u32> = Vec::with_capacity(t as usize);
    while (reps.len() as u64) < t {
        let r = h.reduce_raw(random_vector(rng, h.dim()));
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    reps
}

fn coset_union(h: &Subspace, reps: &[u32]) -> DenseSet {
    let elems = h.elements();
    DenseSet::from_elements(
        h.dim(),
        reps.iter().flat_map(|&r| elems.iter().map(move |&e| e ^ r)),
    )
    .expect("elements in range")
}

/// Builds the set a spec describes.
pub fn generate(spec: &GeneratorSpec) -> Result<DenseSet, BadSpec> {
    let n = spec.dim;
    if n == 0 || n > MAX_DIM {
        return Err(BadSpec::Dimension(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let set = match spec.family {
        Family::Subspace => {
            let h = random_subspace(&mut rng, n, spec.rank()?);
            coset_union(&h, &[0])
        }
        Family::Affine => {
            let h = random_subspace(&mut rng, n, spec.rank()?);
            let shift = random_vector(&mut rng, n);
            coset_union(&h, &[shift])
        }
        Family::CosetUnion => {
            let h = random_subspace(&mut rng, n, spec.rank()?);
            let t = spec.cosets.unwrap_or(2);
            let available = 1u64 << (n - h.rank());
            if t == 0 || t > available {
                return Err(BadSpec::Cosets {
                    requested: t,
                    available,
                });
            }
            let reps = distinct_coset_reps(&mut rng, &h, t);
            coset_union(&h, &reps)
        }
        Family::SubspacePlusNoise => {
            let h = random_subspace(&mut rng, n, spec.rank()?);
            let noise = spec.noise.unwrap_or(4);
            let available = (1u64 << n) - h.cardinality();
            if noise > available {
                return Err(BadSpec::Noise {
                    requested: noise,
                    available,
                });
            }
            let mut set = coset_union(&h, &[0]);
            let mut added = 0;
            while added < noise {
                let x = random_vector(&mut rng, n);
                if !set.contains_raw(x) {
                    set = set
                        .union(&DenseSet::from_elements(n, [x]).expect("in range"))
                        .expect("same dimension");
                    added += 1;
                }
            }
            set
        }
        Family::IndependentVectors => {
            let m = spec.count.unwrap_or(n);
            if m == 0 || m > n {
                return Err(BadSpec::Count { count: m, dim: n });
            }
            DenseSet::from_elements(n, (0..m).map(|i| 1u32 << i)).expect("in range")
        }
        Family::Random => {
            let p = spec.density.unwrap_or(0.5);
            if !(p > 0.0 && p <= 1.0) {
                return Err(BadSpec::Density(p));
            }
            let mut set = DenseSet::from_elements(n, (0..1u32 << n).filter(|_| rng.random_bool(p)))
                .expect("in range");
            if set.is_empty() {
                set = DenseSet::from_elements(n, [random_vector(&mut rng, n)]).expect("in range");
            }
            set
        }
    };
    Ok(set)
}
