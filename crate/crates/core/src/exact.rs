//! Exact arithmetic on positive real radicals `ρ^{1/k}`.
//!
//! Doubling constants, spectral thresholds and energy parameters are in
//! general irrational, but every one of them has a rational power:
//! `Dbl² = |A+B|²/(|A||B|)`, `(1/ω)⁴ = (∏|Aᵢ|)³/count⁴`,
//! `(1/√(2K))^{2k} = 1/(2^k K^k)`. A [`Surd`] stores that rational power and
//! the root index, and all comparisons are carried out on integers.
//!
//! [`sign_at`] decides the sign of a rational polynomial evaluated at a
//! surd exactly: it reduces the polynomial modulo the (irreducible) minimal
//! polynomial `x^k − ρ` to detect zero, and otherwise isolates the sign by
//! bisection on rational brackets.

use core::cmp::Ordering;

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `Some(√q)` if `q` is the square of a rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let n = exact_sqrt_int(q.numer())?;
    let d = exact_sqrt_int(q.denom())?;
    Some(BigRational::new(n, d))
}

/// A positive real number `radicand^{1/index}` with `index` a power of two.
///
/// Kept normalized: the index is halved while the radicand is a perfect
/// rational square, so `x^index − radicand` is the minimal polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Surd {
    radicand: BigRational,
    index: u32,
}

impl Surd {
    pub fn new(radicand: BigRational, index: u32) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::InvalidParameter("radicand must be positive"));
        }
        if index == 0 || !index.is_power_of_two() {
            return Err(Error::InvalidParameter("root index must be a power of two"));
        }
        let mut s = Self { radicand, index };
        while s.index > 1 {
            match rational_sqrt(&s.radicand) {
                Some(r) => {
                    s.radicand = r;
                    s.index /= 2;
                }
                None => break,
            }
        }
        Ok(s)
    }

    pub fn rational(q: BigRational) -> Result<Self> {
        Self::new(q, 1)
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// The value itself when it is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.index == 1).then_some(&self.radicand)
    }

    /// `self^k`, which is rational whenever `index` divides `k`.
    pub fn pow_rational(&self, k: u32) -> Option<BigRational> {
        k.is_multiple_of(self.index)
            .then(|| num_traits::pow(self.radicand.clone(), (k / self.index) as usize))
    }

    /// `self^{1/2}`.
    pub fn sqrt(&self) -> Self {
        Self::new(self.radicand.clone(), self.index * 2).expect("positive radicand")
    }

    /// `self^{-1}`.
    pub fn recip(&self) -> Self {
        Self {
            radicand: self.radicand.recip(),
            index: self.index,
        }
    }

    /// `q · self` for a positive rational `q`.
    pub fn scale(&self, q: &BigRational) -> Result<Self> {
        let qk = num_traits::pow(q.clone(), self.index as usize);
        Self::new(qk * &self.radicand, self.index)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        libm::pow(r, 1.0 / f64::from(self.index))
    }

    /// Compare `self · a` with the integer `m` (`a, m ≥ 0`).
    pub fn cmp_scaled(&self, a: u64, m: u64) -> Ordering {
        // (self·a)^k = ρ a^k  vs  m^k.
        let k = self.index as usize;
        let lhs = self.radicand.numer() * num_traits::pow(BigInt::from(a), k);
        let rhs = self.radicand.denom() * num_traits::pow(BigInt::from(m), k);
        lhs.cmp(&rhs)
    }

    /// Smallest integer `m ≥ 0` with `m ≥ self · a`.
    pub fn ceil_scaled(&self, a: u64) -> u64 {
        let mut hi = 1u64;
        while self.cmp_scaled(a, hi) == Ordering::Greater {
            hi = hi.checked_mul(2).expect("scaled surd overflows u64");
        }
        let mut lo = 0u64;
        // Invariant: self·a > lo - 1 is unknown, self·a ≤ hi.
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cmp_scaled(a, mid) == Ordering::Greater {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Rational bracket `lo ≤ self < hi` with `hi − lo = 2^{-bits}`.
    fn bracket(&self, bits: u32) -> (BigRational, BigRational) {
        let k = self.index;
        let scale = BigInt::one() << (bits as usize * k as usize);
        let x = (self.radicand.numer() * scale) / self.radicand.denom();
        let root = x.nth_root(k);
        let den = BigInt::one() << bits as usize;
        (
            BigRational::new(root.clone(), den.clone()),
            BigRational::new(root + 1, den),
        )
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.index.max(other.index);
        let a = self.pow_rational(l).expect("index divides lcm");
        let b = other.pow_rational(l).expect("index divides lcm");
        a.cmp(&b)
    }
}

/// Exact sign of `Σ coeffs[i] · uⁱ`.
pub fn sign_at(coeffs: &[BigRational], u: &Surd) -> Ordering {
    let k = u.index as usize;
    // Reduce modulo x^k − ρ.
    let mut reduced = vec![BigRational::zero(); k];
    let mut rho_pow = BigRational::one();
    for (chunk_idx, chunk) in coeffs.chunks(k).enumerate() {
        if chunk_idx > 0 {
            rho_pow *= &u.radicand;
        }
        for (i, c) in chunk.iter().enumerate() {
            reduced[i] += c * &rho_pow;
        }
    }
    if k == 1 {
        return reduced[0].cmp(&BigRational::zero());
    }
    // x^k − ρ is irreducible for normalized ρ, so a nonzero remainder of
    // degree < k cannot vanish at u.
    if reduced.iter().all(Zero::is_zero) {
        return Ordering::Equal;
    }
    let mut bits = 64u32;
    loop {
        let (lo, hi) = u.bracket(bits);
        let (min, max) = interval_eval(&reduced, &lo, &hi);
        if min.is_positive() {
            return Ordering::Greater;
        }
        if max.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Range of a polynomial over `[lo, hi]` with `lo ≥ 0`, bounding each
/// monomial independently.
fn interval_eval(
    coeffs: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut min = BigRational::zero();
    let mut max = BigRational::zero();
    let mut lo_pow = BigRational::one();
    let mut hi_pow = BigRational::one();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            lo_pow *= lo;
            hi_pow *= hi;
        }
        let a = c * &lo_pow;
        let b = c * &hi_pow;
        if a <= b {
            min += a;
            max += b;
        } else {
            min += b;
            max += a;
        }
    }
    (min, max)
}

/// Coefficients of `(x − c)^4`.
pub(crate) fn shifted_fourth_power(c: &BigRational) -> Vec<BigRational> {
    let c2 = c * c;
    let c3 = &c2 * c;
    let c4 = &c3 * c;
    vec![
        c4,
        -(c3 * int(4)),
        c2 * int(6),
        -(c * int(4)),
        BigRational::one(),
    ]
}

/// The parameter `K ≥ 1` of the extraction theorems.
///
/// Users supply rational `K`; the doubling pipeline derives `K = Dbl(A,B)`
/// (rational square) and the energy pipeline `K = 1/ω` (rational fourth
/// power). `K⁴` is therefore always rational.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KParam(Surd);

impl KParam {
    fn checked(s: Surd) -> Result<Self> {
        if s.index > 4 {
            return Err(Error::InvalidParameter(
                "K must have a rational fourth power",
            ));
        }
        if s.radicand < BigRational::one() {
            return Err(Error::InvalidParameter("K must be at least 1"));
        }
        Ok(Self(s))
    }

    pub fn from_rational(k: BigRational) -> Result<Self> {
        Self::checked(Surd::new(k, 1)?)
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator"));
        }
        Self::from_rational(rat(num, den))
    }

    /// `K` given by its square `K²`.
    pub fn from_squared(k2: BigRational) -> Result<Self> {
        Self::checked(Surd::new(k2, 2)?)
    }

    /// `K` given by its fourth power `K⁴`.
    pub fn from_fourth(k4: BigRational) -> Result<Self> {
        Self::checked(Surd::new(k4, 4)?)
    }

    pub fn surd(&self) -> &Surd {
        &self.0
    }

    pub fn squared(&self) -> Option<BigRational> {
        self.0.pow_rational(2)
    }

    pub fn fourth(&self) -> BigRational {
        self.0.pow_rational(4).expect("K has index at most 4")
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// `δ = 1/√(2K)`, the flatness scale paired with `K`.
    pub fn flatness_threshold(&self) -> crate::fourier::SpectrumThreshold {
        let k = self.0.index;
        let two_k = num_traits::pow(int(2), k as usize) * &self.0.radicand;
        let delta = Surd::new(two_k.recip(), 2 * k).expect("positive");
        crate::fourier::SpectrumThreshold::from_surd(delta).expect("δ ≤ 1/√2 < 1")
    }

    pub fn min(self, other: Self) -> Self {
        core::cmp::min(self, other)
    }

    /// Smallest `p / den` with `p / den ≥ self`.
    pub fn rational_ceiling(&self, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator"));
        }
        let p = self.0.ceil_scaled(den);
        Self::from_ratio(p, den)
    }
}

impl core::fmt::Display for Surd {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.index == 1 {
            write!(f, "{}", self.radicand)
        } else {
            write!(f, "({})^(1/{})", self.radicand, self.index)
        }
    }
}

impl core::fmt::Display for KParam {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        self.0.fmt(f)
    }
}

/// `BigUint` power helper.
pub(crate) fn upow(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_halves_index_on_squares() {
        let s = Surd::new(rat(81, 16), 4).unwrap();
        assert_eq!(s.index(), 1);
        assert_eq!(s.radicand(), &rat(3, 2));
        let t = Surd::new(rat(9, 1), 4).unwrap();
        assert_eq!(t.index(), 2);
        assert_eq!(t.radicand(), &rat(3, 1));
    }

    #[test]
    fn ceil_scaled_matches_float() {
        let s = Surd::new(rat(1, 2), 2).unwrap(); // 1/√2
        for a in 0..200u64 {
            let expect = libm::ceil(a as f64 / libm::sqrt(2.0)) as u64;
            assert_eq!(s.ceil_scaled(a), expect, "a = {a}");
        }
        let nine_tenths = Surd::rational(rat(9, 10)).unwrap();
        assert_eq!(nine_tenths.ceil_scaled(10), 9);
        assert_eq!(nine_tenths.ceil_scaled(11), 10);
    }

    #[test]
    fn surd_ordering() {
        let a = Surd::new(rat(2, 1), 2).unwrap();
        let b = Surd::new(rat(3, 1), 4).unwrap();
        // √2 ≈ 1.414 > 3^{1/4} ≈ 1.316
        assert!(a > b);
        assert_eq!(Surd::new(rat(4, 1), 4).unwrap(), a);
    }

    #[test]
    fn sign_at_rational_and_irrational() {
        // x − 3/2 at x = 3/2.
        let u = Surd::rational(rat(3, 2)).unwrap();
        assert_eq!(sign_at(&[rat(-3, 2), int(1)], &u), Ordering::Equal);
        // x² − 2 at √2 is zero, detected algebraically.
        let r2 = Surd::new(int(2), 2).unwrap();
        assert_eq!(sign_at(&[int(-2), int(0), int(1)], &r2), Ordering::Equal);
        // x − 1.41421356 at √2 is positive, x − 1.41421357 negative.
        assert_eq!(
            sign_at(&[rat(-141421356, 100000000), int(1)], &r2),
            Ordering::Greater
        );
        assert_eq!(
            sign_at(&[rat(-141421357, 100000000), int(1)], &r2),
            Ordering::Less
        );
        // 2^{1/4}: x³ − 2^{3/4} sign near boundary.
        let q = Surd::new(int(2), 4).unwrap();
        assert_eq!(
            sign_at(
                &[
                    int(0),
                    int(0),
                    int(0),
                    int(0),
                    int(1),
                    int(0),
                    int(0),
                    int(0),
                    int(-2)
                ],
                &q
            ),
            Ordering::Less
        );
        assert_eq!(
            sign_at(&[int(-2), int(0), int(0), int(0), int(1)], &q),
            Ordering::Equal
        );
    }

    #[test]
    fn flatness_threshold_of_rational_k() {
        // K = 2: δ = 1/2.
        let k = KParam::from_ratio(2, 1).unwrap();
        let d = k.flatness_threshold();
        assert_eq!(d.surd().as_rational(), Some(&rat(1, 2)));
        // K = 1: δ = 1/√2.
        let d1 = KParam::from_ratio(1, 1).unwrap().flatness_threshold();
        assert_eq!(d1.surd(), &Surd::new(rat(1, 2), 2).unwrap());
    }

    #[test]
    fn k_must_be_at_least_one() {
        assert!(KParam::from_ratio(1, 2).is_err());
        assert!(KParam::from_squared(rat(1, 1)).is_ok());
    }

    #[test]
    fn rational_ceiling_is_tight() {
        let k = KParam::from_squared(rat(49, 16)).unwrap(); // 7/4
        assert_eq!(
            k.rational_ceiling(1000).unwrap(),
            KParam::from_ratio(1750, 1000).unwrap()
        );
        let k = KParam::from_squared(int(2)).unwrap();
        assert_eq!(
            k.rational_ceiling(1000).unwrap(),
            KParam::from_ratio(1415, 1000).unwrap()
        );
    }
}
