//! Weight enumerators for amplitude-damping codes and the linear program
//! that rules out approximate amplitude-damping codes.
//!
//! The pipeline is:
//!
//! 1. [`codes`] ingests an explicit `((n, M))` code.
//! 2. [`enumerator`] computes the A/B enumerators for the amplitude-damping
//!    channel at a damping parameter γ, the Shor–Laflamme enumerators and the
//!    auxiliary vector `φ_σ = tr(σP)`.
//! 3. [`connection`] assembles the code-independent matrices `M_A`, `M_B`
//!    that map `φ ⊗ φ` to `(tr P)²·A` and `tr P·B`.
//! 4. [`lp`] concatenates those relations over several γ values into a
//!    feasibility LP, solves it, and searches for the largest excluded `c`.

pub mod codes;
pub mod connection;
pub mod enumerator;
pub mod error;
pub mod kraus;
pub mod lp;
pub mod pauli;

pub use codes::{CodeSpec, ValidatedCode};
pub use connection::{ConnectionMatrix, LemmaReport, MatrixKind};
pub use enumerator::{AuxVector, EnumeratorKind, EnumeratorVector};
pub use error::{Error, Result};
pub use kraus::{GammaValue, KrausLabel};
pub use lp::{ConstraintSet, FeasibilityQuery, LpProblem, LpVerdict, SolverOptions, VerdictStatus};
pub use pauli::{Pauli, PauliString};

/// Binomial coefficient as `f64`; exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64).round()
}
