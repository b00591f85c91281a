//! Sumsets, doubling constants and additive energy.

use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{rat, KParam};
use crate::fourier::{representation_counts, walsh_transform, FourierTable};
use crate::set::DenseSet;

/// Work limit for [`brute_energy`], counted as `|A₁||A₂||A₃|`.
pub const BRUTE_ENERGY_LIMIT: u128 = 100_000_000;

fn non_empty(sets: &[&DenseSet]) -> Result<()> {
    let first = sets[0];
    for s in sets {
        first.same_dim(s)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    Ok(())
}

/// `A + B = {a + b : a ∈ A, b ∈ B}`.
pub fn sumset(a: &DenseSet, b: &DenseSet) -> Result<DenseSet> {
    non_empty(&[a, b])?;
    let r = representation_counts(a, b)?;
    DenseSet::from_elements(
        a.dim(),
        r.iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(x, _)| x as u32),
    )
}

/// `Dbl(A, B) = |A+B| / √(|A||B|)`, carried as the exact triple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DoublingValue {
    pub sumset_size: u64,
    pub size_a: u64,
    pub size_b: u64,
}

impl DoublingValue {
    /// `Dbl² = |A+B|² / (|A||B|)`.
    pub fn squared(&self) -> BigRational {
        let s = BigInt::from(self.sumset_size);
        rat(
            &s * &s,
            BigInt::from(self.size_a) * BigInt::from(self.size_b),
        )
    }

    pub fn to_f64(&self) -> f64 {
        self.sumset_size as f64 / libm::sqrt(self.size_a as f64 * self.size_b as f64)
    }

    pub fn as_k(&self) -> KParam {
        KParam::from_squared(self.squared()).expect("Dbl ≥ 1")
    }

    /// `Dbl(A,B) ≤ K`, compared through fourth powers.
    pub fn le_k(&self, k: &KParam) -> bool {
        let d2 = self.squared();
        &d2 * &d2 <= k.fourth()
    }

    /// `Dbl⁻²|A| ≤ |B| ≤ Dbl²|A|`, cross-multiplied.
    pub fn distance_bounds_hold(&self) -> bool {
        let (s, a, b) = (
            BigInt::from(self.sumset_size),
            BigInt::from(self.size_a),
            BigInt::from(self.size_b),
        );
        let s2 = &s * &s;
        // Dbl⁻²|A| ≤ |B| ⇔ |A|²|B| ≤ |A+B|²|B|;  |B| ≤ Dbl²|A| ⇔ |A||B|² ≤ |A+B|²|A|.
        &a * &a * &b <= &s2 * &b && &a * &b * &b <= &s2 * &a
    }
}

pub fn doubling(a: &DenseSet, b: &DenseSet) -> Result<DoublingValue> {
    let s = sumset(a, b)?;
    Ok(DoublingValue {
        sumset_size: s.len(),
        size_a: a.len(),
        size_b: b.len(),
    })
}

/// Quadruple count and set sizes; `ω = count / (∏|Aᵢ|)^{3/4}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EnergyValue {
    pub quadruple_count: u128,
    pub sizes: [u64; 4],
}

impl EnergyValue {
    pub fn size_product(&self) -> BigInt {
        self.sizes.iter().map(|&s| BigInt::from(s)).product()
    }

    /// `ω⁴ = count⁴ / (∏|Aᵢ|)³`.
    pub fn omega_fourth(&self) -> BigRational {
        let c = BigInt::from(self.quadruple_count);
        let p = self.size_product();
        rat(num_traits::pow(c, 4), num_traits::pow(p, 3))
    }

    pub fn omega(&self) -> f64 {
        let p: f64 = self.sizes.iter().map(|&s| s as f64).product();
        self.quadruple_count as f64 / libm::pow(p, 0.75)
    }

    /// `ω ≥ 1/K` ⇔ `count⁴ K⁴ ≥ (∏|Aᵢ|)³`.
    pub fn ge_inverse(&self, k: &KParam) -> bool {
        let c4 = num_traits::pow(BigInt::from(self.quadruple_count), 4);
        let p3 = num_traits::pow(self.size_product(), 3);
        BigRational::from_integer(c4) * k.fourth() >= BigRational::from_integer(p3)
    }

    /// `1/ω` as an exact parameter; `None` when the count is zero.
    pub fn inverse(&self) -> Option<KParam> {
        if self.quadruple_count == 0 {
            return None;
        }
        KParam::from_fourth(self.omega_fourth().recip()).ok()
    }

    /// Compare normalised energies exactly.
    pub fn cmp_omega(&self, other: &Self) -> Ordering {
        self.omega_fourth().cmp(&other.omega_fourth())
    }
}

fn product_sum(tables: [&FourierTable; 4]) -> i128 {
    let len = tables[0].values().len();
    (0..len)
        .map(|xi| {
            tables
                .iter()
                .map(|t| t.values()[xi] as i128)
                .product::<i128>()
        })
        .sum()
}

/// Quadruple count from four Walsh tables, via `Σ_ξ ∏ Wᵢ(ξ) = 2ⁿ · count`.
pub fn energy_from_tables(tables: [&FourierTable; 4]) -> Result<EnergyValue> {
    let dim = tables[0].dim();
    for t in &tables {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: t.dim(),
            });
        }
        if t.cardinality() == 0 {
            return Err(Error::EmptySet);
        }
    }
    let total = product_sum(tables);
    debug_assert!(total >= 0 && total % (1i128 << dim) == 0);
    Ok(EnergyValue {
        quadruple_count: (total >> dim) as u128,
        sizes: tables.map(FourierTable::cardinality),
    })
}

/// Normalised energy of four sets.
pub fn energy(sets: [&DenseSet; 4]) -> Result<EnergyValue> {
    non_empty(&sets)?;
    let t = sets.map(walsh_transform);
    energy_from_tables([&t[0], &t[1], &t[2], &t[3]])
}

/// Triple loop over `A₁ × A₂ × A₃` testing `a₁ + a₂ + a₃ ∈ A₄`.
pub fn brute_energy(sets: [&DenseSet; 4]) -> Result<u128> {
    let first = sets[0];
    for s in &sets {
        first.same_dim(s)?;
    }
    let work = u128::from(sets[0].len()) * u128::from(sets[1].len()) * u128::from(sets[2].len());
    if work > BRUTE_ENERGY_LIMIT {
        return Err(Error::TooLarge {
            work,
            limit: BRUTE_ENERGY_LIMIT,
        });
    }
    let a2 = sets[1].to_vec();
    let a3 = sets[2].to_vec();
    let mut count = 0u128;
    for x in sets[0].iter() {
        for &y in &a2 {
            let xy = x ^ y;
            for &z in &a3 {
                if sets[3].contains_raw(xy ^ z) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Both sides of `ω(A,B,A,B) ≥ √(|A||B|) / |A+B|`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CauchySchwarzReport {
    pub energy: EnergyValue,
    pub doubling: DoublingValue,
    pub holds: bool,
}

impl CauchySchwarzReport {
    pub fn lhs(&self) -> f64 {
        self.energy.omega()
    }

    pub fn rhs(&self) -> f64 {
        1.0 / self.doubling.to_f64()
    }
}

/// Checks the Cauchy–Schwarz lower bound on `ω(A,B,A,B)`.
///
/// With `P = (|A||B|)²` the inequality is `count / (|A||B|)^{3/2} ≥
/// (|A||B|)^{1/2} / |A+B|`, i.e. the integer statement
/// `count · |A+B| ≥ (|A||B|)²`.
pub fn cauchy_schwarz_bound(a: &DenseSet, b: &DenseSet) -> Result<CauchySchwarzReport> {
    let doubling = doubling(a, b)?;
    let energy = energy([a, b, a, b])?;
    Ok(cauchy_schwarz_from(energy, doubling))
}

pub(crate) fn cauchy_schwarz_from(
    energy: EnergyValue,
    doubling: DoublingValue,
) -> CauchySchwarzReport {
    let ab = BigInt::from(doubling.size_a) * BigInt::from(doubling.size_b);
    let holds =
        BigInt::from(energy.quadruple_count) * BigInt::from(doubling.sumset_size) >= &ab * &ab;
    CauchySchwarzReport {
        energy,
        doubling,
        holds,
    }
}
