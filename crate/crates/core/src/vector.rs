//! Vectors of F₂ⁿ stored as bit patterns.

use core::fmt;
use core::ops::Add;

use crate::error::{Error, Result};
use crate::MAX_DIM;

/// Parity of the population count, i.e. the F₂ dot product of two bit patterns.
#[inline]
pub fn dot_bits(u: u32, v: u32) -> u8 {
    ((u & v).count_ones() & 1) as u8
}

/// An element of F₂ⁿ: a point `x` or a frequency `ξ`.
///
/// Bit `i` of `bits` is coordinate `i`. Displayed most significant
/// coordinate first, so `GF2Vector::new(4, 0b1011)` prints as `1011`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    bits: u32,
    dim: u8,
}

pub(crate) fn check_dim(dim: u32) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
    }
    Ok(())
}

impl GF2Vector {
    pub fn new(dim: u32, bits: u32) -> Result<Self> {
        check_dim(dim)?;
        if u64::from(bits) >= 1u64 << dim {
            return Err(Error::ElementOutOfRange {
                value: bits.into(),
                dim,
            });
        }
        Ok(Self {
            bits,
            dim: dim as u8,
        })
    }

    /// Caller guarantees `dim` is valid and `bits < 2^dim`.
    #[inline]
    pub(crate) fn from_raw(dim: u32, bits: u32) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&dim) && u64::from(bits) < 1u64 << dim);
        Self {
            bits,
            dim: dim as u8,
        }
    }

    pub fn zero(dim: u32) -> Result<Self> {
        Self::new(dim, 0)
    }

    /// The standard basis vector with coordinate `i` set (`e_{i+1}` in 1-based notation).
    pub fn basis(dim: u32, i: u32) -> Result<Self> {
        if i >= dim {
            return Err(Error::ElementOutOfRange {
                value: 1u64 << i.min(63),
                dim,
            });
        }
        Self::new(dim, 1 << i)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn dim(self) -> u32 {
        u32::from(self.dim)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    /// `Σ uᵢ vᵢ` over F₂.
    pub fn dot(self, other: Self) -> Result<u8> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(dot_bits(self.bits, other.bits))
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        })
    }
}

/// Vector addition (XOR).
///
/// # Panics
///
/// Panics on mismatched dimensions; use [`GF2Vector::checked_add`] when the
/// dimensions are not already known to agree.
impl Add for GF2Vector {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        assert_eq!(
            self.dim, other.dim,
            "adding vectors of different dimensions"
        );
        Self {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        }
    }
}

/// Dot product of two vectors of the same dimension.
pub fn dot(u: GF2Vector, v: GF2Vector) -> Result<u8> {
    u.dot(v)
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.dim()).rev() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}
