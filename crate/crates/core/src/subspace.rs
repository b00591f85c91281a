//! Linear subspaces of F₂ⁿ in reduced row echelon form.
//!
//! The pivot of a basis vector is its most significant set bit. Rows are
//! kept sorted by decreasing pivot and every pivot column is cleared in all
//! other rows, so two subspaces are equal iff their bases are equal.
//!
//! With that convention, reducing `x` against the basis yields the
//! numerically smallest element of the coset `x + S`, which is what
//! [`Subspace::coset_rep`] returns.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vector::{check_dim, dot_bits, GF2Vector};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    dim: u32,
    basis: Vec<u32>,
}

#[inline]
fn pivot(v: u32) -> u32 {
    31 - v.leading_zeros()
}

impl Subspace {
    /// The zero subspace `{0}`.
    pub fn zero(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            basis: Vec::new(),
        })
    }

    pub fn full(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            basis: (0..dim).rev().map(|i| 1u32 << i).collect(),
        })
    }

    /// Smallest subspace containing every input vector.
    pub fn span_closure(dim: u32, vectors: &[GF2Vector]) -> Result<Self> {
        check_dim(dim)?;
        for v in vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: v.dim(),
                });
            }
        }
        Ok(Self::span_raw(dim, vectors.iter().map(|v| v.bits())))
    }

    pub(crate) fn span_raw<I: IntoIterator<Item = u32>>(dim: u32, vectors: I) -> Self {
        // rows[p] holds the row whose pivot is p, already reduced at higher pivots.
        let mut rows = [0u32; 32];
        for mut v in vectors {
            while v != 0 {
                let p = pivot(v);
                if rows[p as usize] == 0 {
                    rows[p as usize] = v;
                    break;
                }
                v ^= rows[p as usize];
            }
        }
        // Back-substitute so every pivot column is zero outside its own row.
        for p in 0..32usize {
            if rows[p] == 0 {
                continue;
            }
            for q in (p + 1)..32usize {
                if rows[q] >> p & 1 == 1 {
                    rows[q] ^= rows[p];
                }
            }
        }
        let basis = rows.iter().rev().copied().filter(|&r| r != 0).collect();
        Self { dim, basis }
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Dimension of the subspace itself (its rank).
    #[inline]
    pub fn rank(&self) -> u32 {
        self.basis.len() as u32
    }

    #[inline]
    pub fn codim(&self) -> u32 {
        self.dim - self.rank()
    }

    /// `|S| = 2^rank`.
    #[inline]
    pub fn cardinality(&self) -> u64 {
        1u64 << self.rank()
    }

    pub fn basis(&self) -> impl Iterator<Item = GF2Vector> + '_ {
        self.basis
            .iter()
            .map(move |&b| GF2Vector::from_raw(self.dim, b))
    }

    pub fn basis_bits(&self) -> &[u32] {
        &self.basis
    }

    /// Rebuilds a subspace from serialized basis vectors and confirms they were
    /// already in canonical form.
    pub fn from_canonical_basis(dim: u32, basis: &[u32]) -> Result<Self> {
        check_dim(dim)?;
        for &b in basis {
            if u64::from(b) >= 1u64 << dim {
                return Err(Error::ElementOutOfRange {
                    value: b.into(),
                    dim,
                });
            }
        }
        let s = Self::span_raw(dim, basis.iter().copied());
        if s.basis != basis {
            return Err(Error::InvalidParameter(
                "basis is not in reduced row echelon form",
            ));
        }
        Ok(s)
    }

    /// Bitmask of pivot positions.
    pub fn pivot_mask(&self) -> u32 {
        self.basis.iter().fold(0, |m, &b| m | 1 << pivot(b))
    }

    /// Smallest element of the coset `x + S`.
    #[inline]
    pub fn reduce_raw(&self, mut x: u32) -> u32 {
        for &b in &self.basis {
            if x >> pivot(b) & 1 == 1 {
                x ^= b;
            }
        }
        x
    }

    pub fn coset_rep(&self, x: GF2Vector) -> Result<GF2Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.dim(),
            });
        }
        Ok(GF2Vector::from_raw(self.dim, self.reduce_raw(x.bits())))
    }

    pub fn contains(&self, x: GF2Vector) -> bool {
        x.dim() == self.dim && self.reduce_raw(x.bits()) == 0
    }

    /// Representative (smallest element) of the coset with the given index.
    pub(crate) fn coset_rep_from_index(&self, mut idx: usize) -> u32 {
        let pivots = self.pivot_mask();
        let mut rep = 0u32;
        for i in 0..self.dim {
            if pivots >> i & 1 == 0 {
                rep |= ((idx & 1) as u32) << i;
                idx >>= 1;
            }
        }
        rep
    }

    /// One representative per coset, each the smallest element of its coset,
    /// in increasing order. The first is always `0`.
    pub fn coset_representatives(&self) -> Vec<GF2Vector> {
        (0..1usize << self.codim())
            .map(|i| GF2Vector::from_raw(self.dim, self.coset_rep_from_index(i)))
            .collect()
    }

    /// All `2^rank` elements, in increasing order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(1 << self.rank());
        out.push(0);
        for &b in &self.basis {
            let n = out.len();
            for i in 0..n {
                out.push(out[i] ^ b);
            }
        }
        out.sort_unstable();
        out
    }

    /// `S^⊥ = {x : x · ξ = 0 for every ξ ∈ S}`.
    pub fn orthogonal_complement(&self) -> Self {
        let pivots = self.pivot_mask();
        let gens = (0..self.dim).filter(|f| pivots >> f & 1 == 0).map(|f| {
            // Free column f: set bit f, and for each row with pivot p copy its bit f into p.
            let mut v = 1u32 << f;
            for &b in &self.basis {
                if b >> f & 1 == 1 {
                    v |= 1 << pivot(b);
                }
            }
            v
        });
        Self::span_raw(self.dim, gens)
    }

    pub fn is_orthogonal_to(&self, xi: GF2Vector) -> bool {
        self.basis.iter().all(|&b| dot_bits(b, xi.bits()) == 0)
    }
}

/// True iff `ξ + ξ′ ∈ S` for every `ξ, ξ′ ∈ S`.
///
/// A non-empty set closed under addition contains `0` and is therefore a
/// subspace, so it suffices to compare `|S|` with the size of its span.
pub fn is_closed_under_addition(vectors: &[GF2Vector]) -> Result<bool> {
    let first = vectors.first().ok_or(Error::EmptySet)?;
    let dim = first.dim();
    let span = Subspace::span_closure(dim, vectors)?;
    let mut distinct: Vec<u32> = vectors.iter().map(|v| v.bits()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(distinct.len() as u64 == span.cardinality())
}
