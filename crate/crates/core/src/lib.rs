//! Transition amplitudes for identical, non-interacting particles.
//!
//! The crate provides the amplitude calculus (product, sum and reciprocity
//! rules), the N-particle amplitude functions for bosons (permanent) and
//! fermions (determinant), measurement sequences with coarse-graining over
//! unobserved intermediate outcomes, a checker that re-derives the
//! boson/fermion dichotomy step by step, and a JSON-driven experiment runner.

pub mod amplitude;
pub mod bench;
pub mod determinant;
pub mod error;
pub mod exchange;
pub mod experiment;
pub mod matrix;
pub mod permanent;
pub mod permutation;
pub mod random;
pub mod sampling;
pub mod sequence;
pub mod verify;

pub use amplitude::{amp_conjugate, amp_product, amp_sum, probability, Amplitude, Probability};
pub use determinant::determinant;
pub use error::{Error, Result};
pub use exchange::{distinguishable_probability, distinguishable_weight, h2, h_n, ExchangeClass};
pub use matrix::TransitionMatrix;
pub use permanent::{permanent_naive, permanent_ryser};

/// Version string recorded in result metadata.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
