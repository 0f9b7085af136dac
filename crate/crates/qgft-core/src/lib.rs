//! Numerical Fourier analysis on compact quantum groups at desk scale.
//!
//! The crate realizes, in finite truncation, the interpolation-parametrized
//! non-commutative Lᵖ machinery on a compact quantum group together with the
//! Fourier transforms F₁ (functionals to the dual algebra), F₂ (GNS-level
//! Plancherel unitary) and Fₚ (1 ≤ p ≤ 2), the convolution product
//! ω₁ ∗ ω₂ = (ω₁ ⊗ ω₂)∘Δ, and the z-sweep experiment showing that
//! Re z = −1/2 is the unique interpolation parameter with a bounded
//! L²-Fourier transform.
//!
//! Backends:
//! * [`suq2::Suq2Backend`] — truncated SU_q(2): generators on ℓ²(ℕ) ⊗ L²(𝕋),
//!   the corepresentation tower t⁽ˡ⁾ built recursively, Haar state and
//!   Schur orthogonality matrices Q⁽ˡ⁾.
//! * [`finite_group::GroupBackend`] — C(G) for G ∈ {ℤ/N, S₃}, where every
//!   construct is brute-forceable; serves as an exact oracle and as the
//!   tracial negative control for the z-dependence.
//!
//! Both satisfy the [`backend::QgBackend`] contract consumed by
//! [`fourier::FourierContext`].

pub mod backend;
pub mod finite_group;
pub mod fourier;
pub mod halfint;
pub mod linalg;
pub mod params;
pub mod sampling;
pub mod suq2;

pub use backend::{BackendId, CoeffIndex, Element, Functional, GnsVector, LevelInfo, QgBackend};
pub use fourier::{DualElement, DualWeight, FourierContext};
pub use halfint::HalfInt;
pub use linalg::{BlockDiagonal, PositiveDiagonal};
pub use params::InterpolationParams;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Schatten exponent p = {0}; need p >= 1 or p = inf")]
    InvalidExponent(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("density is not a state: trace = {0}")]
    NotAState(f64),
    #[error("matrix entries must be finite")]
    NonFiniteEntries,
    #[error("diagonal weights must be strictly positive")]
    NonPositiveWeight,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {0} exceeds the truncation of backend {1}")]
    TruncationOverflow(String, String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("backend mismatch: expected {expected}, got {got}")]
    BackendMismatch { expected: String, got: String },
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
