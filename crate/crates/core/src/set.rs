//! Dense subsets of F₂ⁿ as `2ⁿ`-bit occupancy vectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vector::{check_dim, dot_bits, GF2Vector};

/// A subset of F₂ⁿ. Bit `x` of the occupancy vector is set iff `x ∈ A`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseSet {
    dim: u32,
    words: Vec<u64>,
    len: u64,
}

fn word_count(dim: u32) -> usize {
    (1usize << dim).div_ceil(64)
}

/// Mask of the valid bits in the single word used when `dim < 6`.
fn small_mask(dim: u32) -> u64 {
    if dim >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << dim)) - 1
    }
}

/// `M` with bit `i` set iff `ξ · i = 1`, for `i < 64`.
fn parity_mask(xi_low: u32) -> u64 {
    let mut m = 0u64;
    for i in 0..64u32 {
        if dot_bits(xi_low, i) == 1 {
            m |= 1 << i;
        }
    }
    m
}

impl DenseSet {
    pub fn empty(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            words: vec![0; word_count(dim)],
            len: 0,
        })
    }

    /// All of F₂ⁿ.
    pub fn full(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        let mut words = vec![u64::MAX; word_count(dim)];
        words[0] &= small_mask(dim);
        Ok(Self {
            dim,
            words,
            len: 1u64 << dim,
        })
    }

    /// Builds a set from raw elements; duplicates are ignored.
    pub fn from_elements<I: IntoIterator<Item = u32>>(dim: u32, elements: I) -> Result<Self> {
        let mut set = Self::empty(dim)?;
        for x in elements {
            if u64::from(x) >= 1u64 << dim {
                return Err(Error::ElementOutOfRange {
                    value: x.into(),
                    dim,
                });
            }
            set.insert_raw(x);
        }
        Ok(set)
    }

    pub fn from_vectors<I: IntoIterator<Item = GF2Vector>>(dim: u32, elements: I) -> Result<Self> {
        let mut set = Self::empty(dim)?;
        for x in elements {
            if x.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: x.dim(),
                });
            }
            set.insert_raw(x.bits());
        }
        Ok(set)
    }

    #[inline]
    pub(crate) fn insert_raw(&mut self, x: u32) {
        let (w, b) = ((x >> 6) as usize, x & 63);
        let bit = 1u64 << b;
        if self.words[w] & bit == 0 {
            self.words[w] |= bit;
            self.len += 1;
        }
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Cardinality `|A|`.
    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains_raw(&self, x: u32) -> bool {
        u64::from(x) < 1u64 << self.dim && self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    pub fn contains(&self, x: GF2Vector) -> bool {
        x.dim() == self.dim && self.contains_raw(x.bits())
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(((w as u32) << 6) | b)
            })
        })
    }

    pub fn vectors(&self) -> impl Iterator<Item = GF2Vector> + '_ {
        let dim = self.dim;
        self.iter().map(move |x| GF2Vector::from_raw(dim, x))
    }

    pub fn min_element(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Indicator function as a dense `0/1` table of length `2ⁿ`.
    pub fn indicator(&self) -> Vec<i64> {
        let mut out = vec![0i64; 1usize << self.dim];
        for x in self.iter() {
            out[x as usize] = 1;
        }
        out
    }

    pub(crate) fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// The translate `t + A`.
    pub fn translate(&self, t: GF2Vector) -> Result<Self> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: t.dim(),
            });
        }
        let mut out = Self {
            dim: self.dim,
            words: vec![0; self.words.len()],
            len: 0,
        };
        for x in self.iter() {
            out.insert_raw(x ^ t.bits());
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let len = words.iter().map(|w| u64::from(w.count_ones())).sum();
        Ok(Self {
            dim: self.dim,
            words,
            len,
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        let len = words.iter().map(|w| u64::from(w.count_ones())).sum();
        Ok(Self {
            dim: self.dim,
            words,
            len,
        })
    }

    /// Number of elements `x ∈ A` with `ξ · x = 0`.
    pub(crate) fn count_orthogonal(&self, xi: u32) -> u64 {
        let m = parity_mask(xi & 63);
        let mut zeros = 0u64;
        for (w, &word) in self.words.iter().enumerate() {
            let high = dot_bits(xi, (w as u32) << 6);
            let odd = if high == 0 { m } else { !m };
            zeros += u64::from((word & !odd).count_ones());
        }
        zeros
    }

    /// The slice `{x ∈ A : ξ · x = j}`.
    ///
    /// Slices for `j = 0` and `j = 1` partition `A`.
    pub fn slice(&self, xi: GF2Vector, j: u8) -> Result<Self> {
        if xi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: xi.dim(),
            });
        }
        if xi.is_zero() {
            return Err(Error::ZeroFrequency);
        }
        if j > 1 {
            return Err(Error::InvalidParameter("slice label must be 0 or 1"));
        }
        let m = parity_mask(xi.bits() & 63);
        let mut len = 0u64;
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(w, &word)| {
                let high = dot_bits(xi.bits(), (w as u32) << 6);
                let want_odd = (high ^ j) == 1;
                let kept = if want_odd { word & m } else { word & !m };
                len += u64::from(kept.count_ones());
                kept
            })
            .collect();
        Ok(Self {
            dim: self.dim,
            words,
            len,
        })
    }
}

impl core::fmt::Debug for DenseSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("DenseSet")
            .field("dim", &self.dim)
            .field("len", &self.len)
            .field("elements", &self.to_vec())
            .finish()
    }
}
