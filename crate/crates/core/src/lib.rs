//! Numerical and exact toolkit for the 2-particle hyperbolic Ruijsenaars and
//! q-difference open Toda systems.
//!
//! The crate has three layers:
//!
//! - **Special functions** — [`qdilog`] evaluates the non-compact quantum
//!   dilogarithm φ_b, the Barnes double sine, and the compact dilogarithm
//!   Ψ_q; [`qseries`] holds exact q-Pochhammer / q-binomial / polynomial
//!   machinery over ℤ\[q^{±1}\].
//! - **Contour quadrature and wavefunctions** — [`contour`] builds pole-aware
//!   integration paths for dilogarithm-ratio integrands, integrates them
//!   adaptively, sums residues in closed form, and verifies the classical
//!   integral identities; [`wavefun`] evaluates Whittaker and
//!   Hallnäs–Ruijsenaars wavefunctions and runs their eigen-equation,
//!   symmetry, and polynomial-specialization checks.
//! - **Exact operator algebra** — [`opalg`] is the Weyl/Heisenberg
//!   exponential algebra with the polarization map and difference-operator
//!   identities; [`qcluster`] is the quantum cluster machinery for the
//!   punctured-torus quiver with its SL(2,ℤ) action.
//!
//! [`suites`] packages the invariant suites behind one entry point used by
//! both the CLI and the acceptance tests. Start with the `examples/`
//! directory for runnable tours of each capability.

pub mod contour;
pub mod extprec;
pub mod opalg;
pub mod qcluster;
pub mod qdilog;
pub mod qseries;
pub mod quad;
pub mod report;
pub mod suites;
pub mod wavefun;

pub use qdilog::{phib, log_phib, double_sine, psi_q_compact, Precision, QdContext};
