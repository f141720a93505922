//! Construction and spectral analysis of Markovian (Lindbladian)
//! superoperators, dissipation-projected second-order effective generators,
//! and compilation of arbitrary target Lindbladians into system-plus-
//! damped-ancilla simulation protocols, with a quantitative verification
//! harness for the adiabatic error scaling.
//!
//! Conventions used throughout:
//! - vectorization is column-stacking, so vec(A X B) = (Bᵀ ⊗ A) vec(X);
//! - the norm on operators and superoperators is the maximum singular value;
//! - the damped steady state of a single qubit is |0⟩, with σ⁻ = |0⟩⟨1|.

pub mod effective;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod numerics;
pub mod protocol;
pub mod spectral;
pub mod superop;

pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector, Tolerances};
