//! JSON and CSV encodings: set literals, parameters, certificates, and the
//! versioned theorem report.

use std::io::Write;

use anyhow::{bail, Context};
use gf2_additive::extraction::ExtractionCertificate;
use gf2_additive::refine::{LoopMode, TheoremKind, TheoremResult, TraceStep};
use gf2_additive::{DenseSet, FourierTable, KParam, Surd};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const TRACE_VERSION: u32 = 1;

/// `{"dim": n, "elements": [...]}` with elements in `[0, 2ⁿ)`, ascending.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SetLiteral {
    pub dim: u32,
    pub elements: Vec<u32>,
}

impl SetLiteral {
    pub fn from_set(a: &DenseSet) -> Self {
        Self {
            dim: a.dim(),
            elements: a.to_vec(),
        }
    }

    pub fn to_set(&self) -> anyhow::Result<DenseSet> {
        Ok(DenseSet::from_elements(
            self.dim,
            self.elements.iter().copied(),
        )?)
    }
}

pub fn read_set(path: &std::path::Path) -> anyhow::Result<DenseSet> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let lit: SetLiteral =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    lit.to_set()
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p/q"` or `"p"` into a positive rational.
pub fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p
        .parse()
        .with_context(|| format!("bad numerator in {s:?}"))?;
    let q: BigInt = q
        .parse()
        .with_context(|| format!("bad denominator in {s:?}"))?;
    if q == BigInt::from(0) {
        bail!("zero denominator in {s:?}");
    }
    Ok(BigRational::new(p, q))
}

/// `K = radicand^(1/root)`; `K_squared` is present iff it is rational.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct KJson {
    pub radicand: String,
    pub root: u32,
    #[serde(rename = "K_squared")]
    pub k_squared: Option<String>,
    pub approx: f64,
}

impl KJson {
    pub fn from_k(k: &KParam) -> Self {
        Self {
            radicand: format_rational(k.surd().radicand()),
            root: k.surd().index(),
            k_squared: k.squared().as_ref().map(format_rational),
            approx: k.to_f64(),
        }
    }

    pub fn to_k(&self) -> anyhow::Result<KParam> {
        let surd = Surd::new(parse_rational(&self.radicand)?, self.root)?;
        let k = KParam::from_fourth(
            surd.pow_rational(4)
                .context("K must have root index at most 4")?,
        )?;
        if k.surd() != &surd {
            bail!("K is not in normal form");
        }
        Ok(k)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChecksJson {
    pub hlower: bool,
    pub alower: bool,
    pub lambda_bound: bool,
    pub lambda_closed: bool,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(rename = "H_basis")]
    pub h_basis: Vec<u32>,
    pub translates: Vec<u32>,
    pub intersections: Vec<u64>,
    pub checks: ChecksJson,
    #[serde(rename = "K_squared")]
    pub k_squared: Option<String>,
    #[serde(rename = "K")]
    pub k: KJson,
}

impl CertificateJson {
    pub fn from_certificate(c: &ExtractionCertificate) -> Self {
        let k = KJson::from_k(&c.k);
        Self {
            h_basis: c.h.basis_bits().to_vec(),
            translates: c.translates.iter().map(|t| t.bits()).collect(),
            intersections: c.intersections.to_vec(),
            checks: ChecksJson {
                hlower: c.checks.hlower,
                alower: c.checks.alower,
                lambda_bound: c.checks.lambda_bound,
                lambda_closed: c.checks.lambda_closed,
            },
            k_squared: k.k_squared.clone(),
            k,
        }
    }
}

/// `u128` as a decimal string; tagged enums cannot carry 128-bit integers.
mod decimal {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepJson {
    Doubling {
        witness: u32,
        choice: [u8; 2],
        sizes_before: [u64; 2],
        sizes_after: [u64; 2],
        sumset_before: u64,
        sumset_after: u64,
        dbl_squared_before: String,
        dbl_squared_after: String,
    },
    Energy {
        witness: u32,
        choice: [u8; 4],
        sizes_before: [u64; 4],
        sizes_after: [u64; 4],
        #[serde(with = "decimal")]
        count_before: u128,
        #[serde(with = "decimal")]
        count_after: u128,
        omega_before: f64,
        omega_after: f64,
    },
}

impl StepJson {
    pub fn from_step(step: &TraceStep) -> Self {
        match step {
            TraceStep::Doubling(s) => StepJson::Doubling {
                witness: s.witness.bits(),
                choice: s.choice,
                sizes_before: [s.before.size_a, s.before.size_b],
                sizes_after: [s.after.size_a, s.after.size_b],
                sumset_before: s.before.sumset_size,
                sumset_after: s.after.sumset_size,
                dbl_squared_before: format_rational(&s.before.squared()),
                dbl_squared_after: format_rational(&s.after.squared()),
            },
            TraceStep::Energy(s) => StepJson::Energy {
                witness: s.witness.bits(),
                choice: s.choice,
                sizes_before: s.before.sizes,
                sizes_after: s.after.sizes,
                count_before: s.before.quadruple_count,
                count_after: s.after.quadruple_count,
                omega_before: s.before.omega(),
                omega_after: s.after.omega(),
            },
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TraceJson {
    pub iterations: u64,
    pub terminal_flat: bool,
    pub steps: Vec<StepJson>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremName {
    Freiman,
    Bsg,
    SingleFreiman,
    SingleBsg,
}

impl From<TheoremKind> for TheoremName {
    fn from(k: TheoremKind) -> Self {
        match k {
            TheoremKind::Freiman => TheoremName::Freiman,
            TheoremKind::Bsg => TheoremName::Bsg,
            TheoremKind::SingleFreiman => TheoremName::SingleFreiman,
            TheoremKind::SingleBsg => TheoremName::SingleBsg,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Adaptive,
    FixedK,
}

impl From<LoopMode> for ModeName {
    fn from(m: LoopMode) -> Self {
        match m {
            LoopMode::Adaptive => ModeName::Adaptive,
            LoopMode::FixedK => ModeName::FixedK,
        }
    }
}

/// Self-contained record of one pipeline run; `recheck` needs nothing else.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub trace_version: u32,
    pub prng: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<serde_json::Value>,
    pub theorem: TheoremName,
    pub mode: ModeName,
    pub inputs: Vec<SetLiteral>,
    #[serde(rename = "K")]
    pub k: KJson,
    #[serde(rename = "H_basis")]
    pub h_basis: Vec<u32>,
    #[serde(rename = "H_size")]
    pub h_size: u64,
    pub translates: Vec<u32>,
    pub intersections: Vec<u64>,
    pub certificate: bool,
    /// `|H| / |Aᵢ|` per input.
    pub size_ratios: Vec<f64>,
    pub final_sets: Vec<SetLiteral>,
    pub extraction: CertificateJson,
    pub trace: TraceJson,
}

impl TheoremReport {
    pub fn new(
        result: &TheoremResult,
        inputs: &[&DenseSet],
        generator: Option<serde_json::Value>,
    ) -> Self {
        let h_size = result.h.cardinality();
        Self {
            trace_version: TRACE_VERSION,
            prng: crate::generate::PRNG_ID.to_string(),
            generator,
            theorem: result.kind.into(),
            mode: result.mode.into(),
            inputs: inputs.iter().map(|a| SetLiteral::from_set(a)).collect(),
            k: KJson::from_k(&result.k),
            h_basis: result.h.basis_bits().to_vec(),
            h_size,
            translates: result.translates.iter().map(|t| t.bits()).collect(),
            intersections: result.intersections.clone(),
            certificate: result.certificate,
            size_ratios: inputs
                .iter()
                .map(|a| h_size as f64 / a.len() as f64)
                .collect(),
            final_sets: result.final_sets.iter().map(SetLiteral::from_set).collect(),
            extraction: CertificateJson::from_certificate(&result.extraction),
            trace: TraceJson {
                iterations: result.trace.iterations(),
                terminal_flat: result.trace.terminal_flat,
                steps: result.trace.steps.iter().map(StepJson::from_step).collect(),
            },
        }
    }
}

/// `xi,walsh` rows for every frequency.
pub fn write_walsh_csv<W: Write>(table: &FourierTable, out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["xi", "walsh"])?;
    for (xi, v) in table.values().iter().enumerate() {
        w.serialize((xi, v))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use gf2_additive::walsh_transform;

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("7/4").unwrap(),
            BigRational::new(7.into(), 4.into())
        );
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(
            format_rational(&BigRational::new(6.into(), 4.into())),
            "3/2"
        );
        assert_eq!(format_rational(&BigRational::from_integer(2.into())), "2/1");
    }

    #[test]
    fn k_encoding() {
        let k = KParam::from_squared(BigRational::new(49.into(), 16.into())).unwrap();
        let j = KJson::from_k(&k);
        assert_eq!(
            (j.radicand.as_str(), j.root, j.k_squared.as_deref()),
            ("7/4", 1, Some("49/16"))
        );
        assert_eq!(j.to_k().unwrap(), k);
        let irrational = KParam::from_squared(BigRational::from_integer(2.into())).unwrap();
        let j = KJson::from_k(&irrational);
        assert_eq!(
            (j.radicand.as_str(), j.root, j.k_squared.as_deref()),
            ("2/1", 2, Some("2/1"))
        );
        let quartic = KParam::from_fourth(BigRational::from_integer(3.into())).unwrap();
        assert_eq!(KJson::from_k(&quartic).k_squared, None);
        assert_eq!(KJson::from_k(&quartic).to_k().unwrap(), quartic);
    }

    #[test]
    fn set_literal_shape() {
        let a = DenseSet::from_elements(2, [2, 0, 1]).unwrap();
        let text = serde_json::to_string(&SetLiteral::from_set(&a)).unwrap();
        assert_eq!(text, r#"{"dim":2,"elements":[0,1,2]}"#);
        let back: SetLiteral = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_set().unwrap(), a);
        let bad = SetLiteral {
            dim: 2,
            elements: vec![4],
        };
        assert!(bad.to_set().is_err());
    }

    #[test]
    fn walsh_csv() {
        let a = DenseSet::from_elements(2, [0, 1, 2]).unwrap();
        let mut buf = Vec::new();
        write_walsh_csv(&walsh_transform(&a), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "xi,walsh\n0,3\n1,1\n2,1\n3,-1\n"
        );
    }
}
