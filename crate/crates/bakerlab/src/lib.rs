//! Exact engine for the quantum baker's map on the θ-torus at h = 1/N.
//!
//! The crate has two independent constructions of the baker propagator and a
//! harness that plays them against each other:
//!
//! - [`comb`]: a calculus of quasi-periodic Dirac-comb states, closed under
//!   every factor of `F = S(L + e^{−ix̂/ħ}R)(E_p + e^{−ip̂/2ħ}O_p)`, with all
//!   lattice geometry in exact rational arithmetic.
//! - [`kernel`]: the sinc–Gaussian fiber inner product evaluated in closed
//!   form on comb pairs.
//! - [`theta`]: the N-dimensional fibers `H(θ)`, their δ-comb bases, Gram
//!   matrices and eigen-residual diagnostics.
//! - [`propagator`]: the comb-level `F` and its N×N matrix form on the
//!   periodic fiber (N even), cross-validated entry by entry.
//! - [`scan`]: the sweep over (N, θ) that reproduces the invariance verdict:
//!   only θ = (0,0) with N even survives.
//! - [`classical`]: the covering dynamics on ℝ², its torus reduction, and
//!   the momentum-center escape check.
//! - [`acceptance`]: the runnable criteria suite behind `bakerlab verify`.

pub mod acceptance;
pub mod amplitude;
pub mod classical;
pub mod comb;
pub mod eigen;
pub mod error;
pub mod kernel;
pub mod params;
pub mod propagator;
pub mod rational;
pub mod scan;
pub mod serialize;
pub mod theta;

pub use amplitude::Amplitude;
pub use comb::{Comb, CombState, Rep};
pub use error::{BakerError, Result};
pub use kernel::{eval_kernel, kernel_form, kernel_form_periodized};
pub use params::ModelParams;
pub use propagator::{apply_f, dft, matrix_f, matrix_vs_comb_check, odd_residual_state, z_phase, UnitaryMatrix};
pub use scan::{scan_theta, theorem_verdict, theta_grid, ScanRecord};
pub use theta::{momentum_basis, position_basis, FiberBasis, Theta};
