//! The real functions `F` and `G` and the two dichotomies they satisfy near
//! their extreme values.
//!
//! These are evaluated in binary64. They only choose which combinatorial
//! branch to expect; nothing here feeds an exact certificate.

use crate::error::{Error, Result};

/// Slack applied to every radius comparison in the dichotomy predicates.
pub const RADIUS_TOLERANCE: f64 = 1e-9;

fn unit(x: f64, what: &'static str) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::DomainError(what))
    }
}

/// `F(x, y) = √x (√y + √(1−y))` on `[0,1]²`.
pub fn f_fn(x: f64, y: f64) -> Result<f64> {
    let x = unit(x, "F expects x in [0, 1]")?;
    let y = unit(y, "F expects y in [0, 1]")?;
    Ok(libm::sqrt(x) * (libm::sqrt(y) + libm::sqrt(1.0 - y)))
}

/// `G(α) = Σ_{j₁+j₂+j₃+j₄=0} ∏ α_{i,jᵢ}^{3/4}` with `α_{i,0} = αᵢ`,
/// `α_{i,1} = 1 − αᵢ`; eight terms.
pub fn g_fn(alpha: [f64; 4]) -> Result<f64> {
    for a in alpha {
        unit(a, "G expects every argument in [0, 1]")?;
    }
    let part = |i: usize, j: u32| {
        let a = if j == 0 { alpha[i] } else { 1.0 - alpha[i] };
        libm::pow(a, 0.75)
    };
    let mut total = 0.0;
    for mask in 0u32..16 {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        total += (0..4).map(|i| part(i, mask >> i & 1)).product::<f64>();
    }
    Ok(total)
}

/// Outcome of a dichotomy predicate.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Branch {
    /// Hypothesis holds and every fraction is close to `1/2`.
    NearHalf,
    /// Hypothesis holds and every fraction is close to `0` or `1`.
    NearEndpoints,
    /// Hypothesis fails; carries the value that violates it
    /// (the largest `F` value, or `G` itself).
    HypothesisFails { value: f64 },
    /// Hypothesis holds but neither branch does. The lemmas say this never
    /// happens; the variant exists so searches can report it.
    Counterexample,
}

fn near(x: f64, target: f64, radius: f64) -> bool {
    (x - target).abs() <= radius + RADIUS_TOLERANCE
}

fn near_end(x: f64, radius: f64) -> bool {
    x.min(1.0 - x) <= radius + RADIUS_TOLERANCE
}

/// The `F` values constrained by the near-minimum dichotomy: `F(α′, β′)` and
/// `F(β′, α′)` for `α′ ∈ {α, 1−α}`, `β′ ∈ {β, 1−β}`.
pub fn f_hypothesis_values(alpha: f64, beta: f64) -> Result<[f64; 8]> {
    let mut out = [0.0; 8];
    let mut k = 0;
    for a in [alpha, 1.0 - alpha] {
        for b in [beta, 1.0 - beta] {
            out[k] = f_fn(a, b)?;
            out[k + 1] = f_fn(b, a)?;
            k += 2;
        }
    }
    Ok(out)
}

/// If all the `F` values are at most `1 + ε`, then either both fractions are
/// within `4ε` of `1/2` or both are within `2ε` of `{0, 1}`.
pub fn near_minima_f_dichotomy(alpha: f64, beta: f64, eps: f64) -> Result<Branch> {
    if !(eps > 0.0 && eps <= 0.01) {
        return Err(Error::DomainError("ε must lie in (0, 1/100]"));
    }
    let values = f_hypothesis_values(alpha, beta)?;
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    if max > 1.0 + eps {
        return Ok(Branch::HypothesisFails { value: max });
    }
    Ok(
        if near(alpha, 0.5, 4.0 * eps) && near(beta, 0.5, 4.0 * eps) {
            Branch::NearHalf
        } else if near_end(alpha, 2.0 * eps) && near_end(beta, 2.0 * eps) {
            Branch::NearEndpoints
        } else {
            Branch::Counterexample
        },
    )
}

/// If `G(α) ≥ 1 − ε`, then either every `αᵢ` is within `3√ε` of `1/2` or
/// every `min(αᵢ, 1−αᵢ)` is at most `10ε`.
pub fn near_maxima_g_dichotomy(alpha: [f64; 4], eps: f64) -> Result<Branch> {
    if !(eps > 0.0 && eps <= 0.001) {
        return Err(Error::DomainError("ε must lie in (0, 1/1000]"));
    }
    let g = g_fn(alpha)?;
    if g < 1.0 - eps {
        return Ok(Branch::HypothesisFails { value: g });
    }
    let r = 3.0 * libm::sqrt(eps);
    Ok(if alpha.iter().all(|&a| near(a, 0.5, r)) {
        Branch::NearHalf
    } else if alpha.iter().all(|&a| near_end(a, 10.0 * eps)) {
        Branch::NearEndpoints
    } else {
        Branch::Counterexample
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn f_values() {
        assert!(close(f_fn(0.5, 0.5).unwrap(), 1.0));
        assert!(close(f_fn(1.0, 1.0).unwrap(), 1.0));
        assert!(close(f_fn(1.0, 0.0).unwrap(), 1.0));
        for y in [0.0, 0.3, 1.0] {
            assert_eq!(f_fn(0.0, y).unwrap(), 0.0);
        }
        assert!(close(f_fn(1.0, 0.5).unwrap(), libm::sqrt(2.0)));
        assert!(f_fn(1.1, 0.5).is_err());
        assert!(f_fn(0.5, -0.1).is_err());
    }

    #[test]
    fn g_values() {
        assert!(close(g_fn([0.5; 4]).unwrap(), 1.0));
        assert!(close(g_fn([1.0; 4]).unwrap(), 1.0));
        assert_eq!(g_fn([1.0, 1.0, 1.0, 0.0]).unwrap(), 0.0);
        assert!(g_fn([0.5, 0.5, 2.0, 0.5]).is_err());
    }

    #[test]
    fn f_dichotomy_examples() {
        assert_eq!(
            near_minima_f_dichotomy(0.5, 0.5, 0.01).unwrap(),
            Branch::NearHalf
        );
        assert_eq!(
            near_minima_f_dichotomy(1.0, 1.0, 0.01).unwrap(),
            Branch::NearEndpoints
        );
        // The largest of the eight values is F(3/4, 1/2) = √(3/4)·√2.
        let expect = libm::sqrt(0.75) * 2.0 * libm::sqrt(0.5);
        match near_minima_f_dichotomy(0.75, 0.5, 0.001).unwrap() {
            Branch::HypothesisFails { value } => assert!(close(value, expect)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(near_minima_f_dichotomy(0.5, 0.5, 0.02).is_err());
    }

    #[test]
    fn f_dichotomy_needs_the_one_minus_beta_value() {
        // With α = 1/2 and β ≈ 0 the three values F(α,β), F(1−α,β), F(β,α) are ≤ 1,
        // but F(1−β, α) ≈ √2 rejects the hypothesis.
        let (a, b) = (0.5, 0.001);
        assert!(f_fn(a, b).unwrap() <= 1.0);
        assert!(f_fn(1.0 - a, b).unwrap() <= 1.0);
        assert!(f_fn(b, a).unwrap() <= 1.0);
        assert!(matches!(
            near_minima_f_dichotomy(a, b, 0.01).unwrap(),
            Branch::HypothesisFails { .. }
        ));
    }

    #[test]
    fn g_dichotomy_examples() {
        assert_eq!(
            near_maxima_g_dichotomy([0.5; 4], 0.0005).unwrap(),
            Branch::NearHalf
        );
        assert_eq!(
            near_maxima_g_dichotomy([1.0; 4], 0.0005).unwrap(),
            Branch::NearEndpoints
        );
        // Only j = (0,0,0,0) survives: any even-parity j with a 1 in positions 2..4
        // picks up a zero factor, and j = (1,0,0,0) is odd. So G(1/2,1,1,1) = (1/2)^{3/4}.
        let g = g_fn([0.5, 1.0, 1.0, 1.0]).unwrap();
        assert!(close(g, libm::pow(0.5, 0.75)));
        for eps in [1e-6, 1e-4, 1e-3] {
            assert!(matches!(
                near_maxima_g_dichotomy([0.5, 1.0, 1.0, 1.0], eps).unwrap(),
                Branch::HypothesisFails { .. }
            ));
        }
    }
}
