//! Explicit bases for higher-order modular forms.
//!
//! The crate has two layers. The formal layer ([`words`], [`tensor`],
//! [`formal`], [`construct`]) builds every basis element of
//! `M_k^t / M_k^{t-1}` as an expression tree and checks its functional
//! equation exactly, over the rationals. The numeric layer ([`numeric`])
//! evaluates honest period integrals on a concrete congruence group and checks
//! the identities those integrals are supposed to satisfy.

pub mod construct;
pub mod error;
pub mod formal;
pub mod numeric;
pub mod profile;
pub mod tensor;
pub mod words;

pub use construct::{
    check_parabolic_lemma, dimension_zm, verify_level, ConstructionRecord, Constructor, Kind,
    LevelReport, ParabolicReport, ResidualClass,
};
pub use error::{Error, Result};
pub use formal::{ExceptionalReading, Exactness, FormalForm, Node};
pub use profile::{BaseForm, GroupProfile};
pub use tensor::{Scalar, SlotMonomial, SymbolTensor, TermKey};
pub use words::{
    enumerate_i, enumerate_j, enumerate_shuffles, exclusion_reason, ExclusionReason, IndexEntry,
    Shuffle, SignedLetter, Word,
};
