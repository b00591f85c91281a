//! Exact additive-structure extraction over F₂ⁿ.
//!
//! Given sets with small sumset doubling or large additive energy, the
//! pipelines in [`refine`] slice them along biased hyperplanes until the
//! quadruple is coherently flat, then [`extraction`] reads off a subspace
//! `H` and translates `x_i` together with an exact integer certificate that
//! the intersection bound `|A ∩ (x + H)| ≥ |H| / 2K` holds.
//!
//! Everything that decides a combinatorial branch is computed in exact
//! integer or rational arithmetic. Floating point only appears in the
//! [`analytic`] module, whose functions describe but never gate a
//! certificate.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod exact;
pub mod extraction;
pub mod flatness;
pub mod fourier;
pub mod refine;
pub mod set;
pub mod stats;
pub mod subspace;
pub mod vector;

pub use error::{Error, Result};
pub use exact::{KParam, Surd};
pub use extraction::{extract_flat, translate_argmax, ExtractionCertificate};
pub use flatness::{coherent_flatness, FlatnessReport};
pub use fourier::{walsh_transform, FourierTable, SpectrumThreshold};
pub use refine::{
    bsg_pipeline, freiman_pipeline, single_set_bsg, single_set_freiman, LoopMode, RefinementTrace,
    TheoremResult,
};
pub use set::DenseSet;
pub use stats::{DoublingValue, EnergyValue};
pub use subspace::Subspace;
pub use vector::GF2Vector;

/// Largest supported ambient dimension.
pub const MAX_DIM: u32 = 24;
