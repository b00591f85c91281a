//! Walsh–Hadamard analysis of indicator functions in integer arithmetic.
//!
//! The table stores `W_A(ξ) = Σ_{x∈A} (−1)^{ξ·x}`, i.e. `2ⁿ · \hat{1}_A(ξ)`.

use core::cmp::Ordering;

use alloc::vec;
use alloc::vec::Vec;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{rat, Surd};
use crate::set::DenseSet;
use crate::vector::GF2Vector;

/// Largest dimension accepted by [`naive_walsh`].
pub const NAIVE_MAX_DIM: u32 = 14;

/// In-place unnormalized Walsh–Hadamard butterfly.
///
/// Uses wrapping arithmetic: every output is congruent to the true value
/// modulo 2⁶⁴, so results that fit in `i64` are exact even if intermediate
/// sums overflow.
pub fn wht_in_place(data: &mut [i64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x.wrapping_add(y);
                *b = x.wrapping_sub(y);
            }
        }
        h *= 2;
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourierTable {
    dim: u32,
    cardinality: u64,
    walsh: Vec<i64>,
}

impl FourierTable {
    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `|A|`, which equals `walsh[0]`.
    #[inline]
    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    #[inline]
    pub fn get(&self, xi: u32) -> i64 {
        self.walsh[xi as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.walsh
    }

    /// Integer cutoff `c` such that `ξ ∈ Spec_α(A)` iff `|W(ξ)| ≥ c`.
    pub fn cutoff(&self, alpha: &SpectrumThreshold) -> u64 {
        alpha.cutoff(self.cardinality)
    }

    /// `Spec_α(A) = {ξ : |W(ξ)| ≥ α|A|}` in increasing order.
    pub fn spectrum(&self, alpha: &SpectrumThreshold) -> Result<Vec<GF2Vector>> {
        if self.cardinality == 0 {
            return Err(Error::EmptySet);
        }
        let c = self.cutoff(alpha);
        Ok(self
            .walsh
            .iter()
            .enumerate()
            .filter(|(_, w)| w.unsigned_abs() >= c)
            .map(|(xi, _)| GF2Vector::from_raw(self.dim, xi as u32))
            .collect())
    }

    /// `Σ_ξ W(ξ)²`, which Plancherel fixes at `2ⁿ |A|`.
    pub fn energy_sum(&self) -> u128 {
        self.walsh
            .iter()
            .map(|&w| (w as i128 * w as i128) as u128)
            .sum()
    }
}

/// Fast transform, `n · 2ⁿ` additions.
pub fn walsh_transform(a: &DenseSet) -> FourierTable {
    let mut walsh = a.indicator();
    wht_in_place(&mut walsh);
    FourierTable {
        dim: a.dim(),
        cardinality: a.len(),
        walsh,
    }
}

/// Direct evaluation of `Σ_{x∈A} (−1)^{ξ·x}` for every `ξ`, 64 points per
/// word; `O(4ⁿ/64)`. Correctness oracle for [`walsh_transform`].
pub fn naive_walsh(a: &DenseSet) -> Result<FourierTable> {
    if a.dim() > NAIVE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: a.dim(),
            max: NAIVE_MAX_DIM,
        });
    }
    let walsh = (0..1u32 << a.dim()).map(|xi| walsh_at(a, xi)).collect();
    Ok(FourierTable {
        dim: a.dim(),
        cardinality: a.len(),
        walsh,
    })
}

/// A spectral level `0 < α ≤ 1`, stored exactly as a radical.
///
/// Irrational levels such as `δ = 1/√(2K)` are common, so membership is
/// decided through the integer cutoff `⌈α|A|⌉` computed from `α^k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SpectrumThreshold(Surd);

impl SpectrumThreshold {
    pub fn from_surd(alpha: Surd) -> Result<Self> {
        if alpha.cmp_scaled(1, 1) == Ordering::Greater {
            return Err(Error::InvalidParameter("spectral level must be at most 1"));
        }
        Ok(Self(alpha))
    }

    /// `α = num / den`.
    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter("spectral level must be positive"));
        }
        Self::from_surd(Surd::rational(rat(num, den))?)
    }

    /// `α` given by `α² = num / den`.
    pub fn from_squared(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameter("spectral level must be positive"));
        }
        Self::from_surd(Surd::new(rat(num, den), 2)?)
    }

    pub fn from_rational(alpha: BigRational) -> Result<Self> {
        Self::from_surd(Surd::rational(alpha)?)
    }

    /// The `9/10` level of the flatness definition.
    pub fn nine_tenths() -> Self {
        Self::from_ratio(9, 10).expect("valid")
    }

    pub fn eight_tenths() -> Self {
        Self::from_ratio(8, 10).expect("valid")
    }

    pub fn surd(&self) -> &Surd {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// `⌈α · size⌉`.
    pub fn cutoff(&self, size: u64) -> u64 {
        self.0.ceil_scaled(size)
    }
}

/// `Spec_α(A)`.
pub fn spectrum(a: &DenseSet, alpha: &SpectrumThreshold) -> Result<Vec<GF2Vector>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    walsh_transform(a).spectrum(alpha)
}

/// Whether the proportion of `A` in `{x : ξ·x = 0}` lies outside the open
/// interval `((1−α)/2, (1+α)/2)`.
///
/// Counts the hyperplane directly rather than going through the transform;
/// it agrees with `ξ ∈ Spec_α(A)` for every input.
pub fn bias_check(a: &DenseSet, xi: GF2Vector, alpha: &SpectrumThreshold) -> Result<bool> {
    if xi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: xi.dim(),
        });
    }
    if xi.is_zero() {
        return Err(Error::ZeroFrequency);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let inside = a.count_orthogonal(xi.bits());
    let size = a.len();
    // p ≥ (1+α)/2  ⇔  2·inside − |A| ≥ α|A|;  p ≤ (1−α)/2  ⇔  |A| − 2·inside ≥ α|A|.
    let excess = (2 * inside).abs_diff(size);
    Ok(alpha.surd().cmp_scaled(size, excess) != Ordering::Greater)
}

/// Walsh coefficient at a single frequency, by counting.
pub(crate) fn walsh_at(a: &DenseSet, xi: u32) -> i64 {
    let inside = a.count_orthogonal(xi) as i64;
    2 * inside - a.len() as i64
}

/// `2ⁿ`-periodic XOR convolution `r(x) = |{(a, b) ∈ A × B : a + b = x}|`.
pub fn representation_counts(a: &DenseSet, b: &DenseSet) -> Result<Vec<i64>> {
    a.same_dim(b)?;
    let mut fa = a.indicator();
    let mut fb = b.indicator();
    wht_in_place(&mut fa);
    wht_in_place(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = x.wrapping_mul(*y);
    }
    wht_in_place(&mut fa);
    // Each entry is now 2ⁿ·r(x) ≤ 2^{2n} < 2⁶³, hence exact despite wrapping.
    let shift = a.dim();
    Ok(fa.into_iter().map(|v| v >> shift).collect())
}

/// All-zero helper used by tests of the empty set.
#[doc(hidden)]
pub fn zero_table(dim: u32) -> FourierTable {
    FourierTable {
        dim,
        cardinality: 0,
        walsh: vec![0; 1 << dim],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::dot_bits;

    #[test]
    fn full_space_transform() {
        for dim in 1..=8 {
            let t = walsh_transform(&DenseSet::full(dim).unwrap());
            assert_eq!(t.get(0), 1 << dim);
            assert!(t.values()[1..].iter().all(|&w| w == 0));
        }
    }

    #[test]
    fn small_example_table() {
        let a = DenseSet::from_elements(2, [0b00, 0b01, 0b10]).unwrap();
        assert_eq!(walsh_transform(&a).values(), [3, 1, 1, -1]);
        assert_eq!(naive_walsh(&a).unwrap().values(), [3, 1, 1, -1]);
    }

    #[test]
    fn empty_and_singleton() {
        let e = DenseSet::empty(4).unwrap();
        assert_eq!(naive_walsh(&e).unwrap(), zero_table(4));
        let x0 = 0b1011;
        let s = DenseSet::from_elements(4, [x0]).unwrap();
        let t = naive_walsh(&s).unwrap();
        for xi in 0..16u32 {
            let sign = if dot_bits(xi, x0) == 0 { 1 } else { -1 };
            assert_eq!(t.get(xi), sign);
        }
    }

    #[test]
    fn naive_matches_elementwise_sum() {
        let a =
            DenseSet::from_elements(7, (0..128u32).filter(|x| x.wrapping_mul(37) % 5 < 2)).unwrap();
        let t = naive_walsh(&a).unwrap();
        for xi in 0..128u32 {
            let direct: i64 = a
                .iter()
                .map(|x| if dot_bits(xi, x) == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(t.get(xi), direct);
        }
    }

    #[test]
    fn naive_rejects_large_dim() {
        let a = DenseSet::empty(15).unwrap();
        assert!(matches!(
            naive_walsh(&a),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn spectrum_example() {
        let a = DenseSet::from_elements(2, [0b00, 0b01, 0b10]).unwrap();
        let s = spectrum(&a, &SpectrumThreshold::from_ratio(1, 3).unwrap()).unwrap();
        let bits: Vec<u32> = s.iter().map(|v| v.bits()).collect();
        // |walsh| = 1 = α|A| at 01, 10 and 11; the closed boundary keeps all three.
        assert_eq!(bits, [0b00, 0b01, 0b10, 0b11]);
        let strict = spectrum(&a, &SpectrumThreshold::from_ratio(34, 100).unwrap()).unwrap();
        assert_eq!(strict, [GF2Vector::zero(2).unwrap()]);
        assert_eq!(
            spectrum(
                &DenseSet::empty(2).unwrap(),
                &SpectrumThreshold::nine_tenths()
            ),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn bias_examples() {
        let xi = GF2Vector::new(3, 0b100).unwrap();
        let hyperplane = DenseSet::from_elements(3, [0, 1, 2, 3]).unwrap();
        assert!(bias_check(
            &hyperplane,
            xi,
            &SpectrumThreshold::from_ratio(99, 100).unwrap()
        )
        .unwrap());
        let full = DenseSet::full(3).unwrap();
        assert!(!bias_check(&full, xi, &SpectrumThreshold::from_ratio(1, 1000).unwrap()).unwrap());
        // Proportion exactly 3/4 = (1+α)/2 at α = 1/2: closed boundary, biased.
        let a = DenseSet::from_elements(3, [0b000, 0b001, 0b010, 0b111]).unwrap();
        let half = SpectrumThreshold::from_ratio(1, 2).unwrap();
        assert!(bias_check(&a, xi, &half).unwrap());
        assert!(spectrum(&a, &half).unwrap().contains(&xi));
        assert_eq!(
            bias_check(&a, GF2Vector::new(3, 0).unwrap(), &half),
            Err(Error::ZeroFrequency)
        );
    }

    #[test]
    fn representation_counts_match_double_loop() {
        let a = DenseSet::from_elements(5, [1, 4, 9, 17, 30]).unwrap();
        let b = DenseSet::from_elements(5, [0, 3, 4, 31]).unwrap();
        let r = representation_counts(&a, &b).unwrap();
        let mut expect = vec![0i64; 32];
        for x in a.iter() {
            for y in b.iter() {
                expect[(x ^ y) as usize] += 1;
            }
        }
        assert_eq!(r, expect);
    }
}
