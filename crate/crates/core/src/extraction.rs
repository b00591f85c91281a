//! Subspace extraction from a coherently flat, high-energy quadruple.
//!
//! With `Λ = ⋂ Spec_{9/10}(Aᵢ)` (a subspace, by flatness) and `H = Λ^⊥`,
//! the output satisfies, exactly:
//!
//! * `|H| ≥ (4/5) ∏|Aᵢ|^{1/4}`, checked as `625|H|⁴ ≥ 256 ∏|Aᵢ|`;
//! * `∏|Aᵢ ∩ (xᵢ + H)|^{1/4} ≥ |H| / 2K`, checked as
//!   `16 K⁴ ∏|Aᵢ ∩ (xᵢ + H)| ≥ |H|⁴`.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{int, upow, KParam};
use crate::flatness::{coherent_flatness_tables, common_high_spectrum};
use crate::fourier::walsh_transform;
use crate::set::DenseSet;
use crate::stats::{energy_from_tables, EnergyValue};
use crate::subspace::Subspace;
use crate::vector::GF2Vector;

/// Verdicts of the exact inequalities attached to an extraction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExtractionChecks {
    /// `|H| ≥ (4/5) ∏|Aᵢ|^{1/4}`.
    pub hlower: bool,
    /// `∏|Aᵢ ∩ (xᵢ+H)|^{1/4} ≥ |H|/2K`.
    pub alower: bool,
    /// `|Λ| ≤ (5/4) 2ⁿ / ∏|Aᵢ|^{1/4}`.
    pub lambda_bound: bool,
    /// `Λ` is closed under addition.
    pub lambda_closed: bool,
}

impl ExtractionChecks {
    pub fn all(&self) -> bool {
        self.hlower && self.alower && self.lambda_bound && self.lambda_closed
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtractionCertificate {
    pub h: Subspace,
    /// `Λ = H^⊥`.
    pub lambda: Subspace,
    pub translates: [GF2Vector; 4],
    pub intersections: [u64; 4],
    pub sizes: [u64; 4],
    pub energy: EnergyValue,
    pub k: KParam,
    pub checks: ExtractionChecks,
}

fn size_product(sizes: &[u64; 4]) -> BigInt {
    sizes.iter().map(|&s| BigInt::from(s)).product()
}

/// `625 |H|⁴ ≥ 256 ∏|Aᵢ|`.
pub fn hlower_holds(h_size: u64, sizes: &[u64; 4]) -> bool {
    BigInt::from(upow(h_size, 4)) * 625 >= size_product(sizes) * 256
}

/// `16 K⁴ ∏ Iᵢ ≥ |H|⁴`.
pub fn alower_holds(h_size: u64, intersections: &[u64; 4], k: &KParam) -> bool {
    let lhs = BigRational::from_integer(size_product(intersections) * 16) * k.fourth();
    lhs >= int(BigInt::from(upow(h_size, 4)))
}

/// `256 |Λ|⁴ ∏|Aᵢ| ≤ 625 · 2^{4n}`.
pub fn lambda_bound_holds(lambda_size: u64, dim: u32, sizes: &[u64; 4]) -> bool {
    let lhs = BigInt::from(upow(lambda_size, 4)) * size_product(sizes) * 256;
    let rhs = BigInt::from(upow(2, 4 * dim as usize)) * 625;
    lhs <= rhs
}

/// Number of elements of `A` in each occupied coset of `H`, as
/// `(representative, count)` pairs in increasing representative order.
pub fn coset_counts(a: &DenseSet, h: &Subspace) -> Result<Vec<(u32, u64)>> {
    if a.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: h.dim(),
        });
    }
    let mut reps: Vec<u32> = a.iter().map(|x| h.reduce_raw(x)).collect();
    reps.sort_unstable();
    let mut out: Vec<(u32, u64)> = Vec::new();
    for r in reps {
        match out.last_mut() {
            Some((last, c)) if *last == r => *c += 1,
            _ => out.push((r, 1)),
        }
    }
    Ok(out)
}

/// `|A ∩ (x + H)|`.
pub fn intersection_size(a: &DenseSet, h: &Subspace, x: GF2Vector) -> Result<u64> {
    let target = h.coset_rep(x)?.bits();
    if a.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: h.dim(),
        });
    }
    Ok(a.iter().filter(|&e| h.reduce_raw(e) == target).count() as u64)
}

/// Coset representative maximizing `|A ∩ (x + H)|`, ties to the smallest
/// representative.
pub fn translate_argmax(a: &DenseSet, h: &Subspace) -> Result<(GF2Vector, u64)> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let counts = coset_counts(a, h)?;
    let mut best = counts[0];
    for &(rep, c) in &counts[1..] {
        if c > best.1 {
            best = (rep, c);
        }
    }
    Ok((GF2Vector::from_raw(a.dim(), best.0), best.1))
}

/// Evaluates every extraction inequality for a given `H` and translates.
pub fn evaluate_checks(
    sets: [&DenseSet; 4],
    h: &Subspace,
    translates: &[GF2Vector; 4],
    k: &KParam,
) -> Result<(ExtractionChecks, [u64; 4])> {
    let mut intersections = [0u64; 4];
    for i in 0..4 {
        intersections[i] = intersection_size(sets[i], h, translates[i])?;
    }
    let sizes = sets.map(DenseSet::len);
    let lambda = h.orthogonal_complement();
    let checks = ExtractionChecks {
        hlower: hlower_holds(h.cardinality(), &sizes),
        alower: alower_holds(h.cardinality(), &intersections, k),
        lambda_bound: lambda_bound_holds(lambda.cardinality(), h.dim(), &sizes),
        lambda_closed: true,
    };
    Ok((checks, intersections))
}

/// Extracts `H` and translates from a coherently `1/√(2K)`-flat quadruple with
/// `ω ≥ 1/K`. Both preconditions are re-verified exactly.
pub fn extract_flat(sets: [&DenseSet; 4], k: &KParam) -> Result<ExtractionCertificate> {
    let first = sets[0];
    for s in &sets {
        first.same_dim(s)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    let t = sets.map(walsh_transform);
    let tables = [&t[0], &t[1], &t[2], &t[3]];
    let energy = energy_from_tables(tables)?;
    if !energy.ge_inverse(k) {
        return Err(Error::PreconditionLowEnergy);
    }
    let report = coherent_flatness_tables(tables, &k.flatness_threshold())?;
    if let Some(w) = report.witness {
        return Err(Error::PreconditionNotFlat { witness: w.xi });
    }

    let lambda_set = common_high_spectrum(tables);
    let lambda = Subspace::span_closure(first.dim(), &lambda_set)?;
    if lambda.cardinality() != lambda_set.len() as u64 {
        return Err(Error::SubspaceClosureViolation);
    }
    let h = lambda.orthogonal_complement();

    let mut translates = [GF2Vector::from_raw(first.dim(), 0); 4];
    let mut intersections = [0u64; 4];
    for i in 0..4 {
        let (x, c) = translate_argmax(sets[i], &h)?;
        translates[i] = x;
        intersections[i] = c;
    }
    let sizes = sets.map(DenseSet::len);
    let checks = ExtractionChecks {
        hlower: hlower_holds(h.cardinality(), &sizes),
        alower: alower_holds(h.cardinality(), &intersections, k),
        lambda_bound: lambda_bound_holds(lambda.cardinality(), first.dim(), &sizes),
        lambda_closed: true,
    };
    if !checks.hlower {
        return Err(Error::CertificateViolation("hlower"));
    }
    if !checks.alower {
        return Err(Error::CertificateViolation("alower"));
    }
    if !checks.lambda_bound {
        return Err(Error::CertificateViolation("lambda_bound"));
    }
    Ok(ExtractionCertificate {
        h,
        lambda,
        translates,
        intersections,
        sizes,
        energy,
        k: k.clone(),
        checks,
    })
}
