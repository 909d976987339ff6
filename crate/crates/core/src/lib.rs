//! Numerical laboratory for scattering resonances of one-dimensional
//! Schrödinger operators `−d²/dx² + V` with compactly supported potentials.
//!
//! Resonances are computed two independent ways and cross-checked:
//!
//! 1. **Directly**, as poles of the meromorphically continued resolvent.
//!    For piecewise-constant `V` the continued Green's function has a pole
//!    at `z = k²` exactly where an entire matching function `f(k)` vanishes;
//!    [`resonance`] finds those zeros in the complex `k`-plane and certifies
//!    their multiplicities with argument-principle winding numbers.
//!
//! 2. **As viscosity limits**: eigenvalues of the regularized non-Hermitian
//!    operator `P_ε = −d²/dx² + V − iεe^{−iα}x²` converge to the resonances
//!    as `ε → 0+` inside the sector `−π/4 < arg z < 7π/4`. [`basis`]
//!    assembles the Galerkin matrix of a rescaled form of `P_ε` in a
//!    harmonic-oscillator basis and [`eigensolver`] computes its spectrum
//!    with residual certificates and a basis-stability filter.
//!
//! [`oracles`] supplies closed-form spectra (the rotated harmonic
//! oscillator, quadratic potentials) used as ground truth, and [`harness`]
//! orchestrates ε-sweeps, matching, symmetry and pseudospectrum
//! experiments, with artifacts written by [`export`].

pub mod basis;
pub mod eigensolver;
pub mod export;
pub mod harness;
pub mod linalg;
pub mod oracles;
pub mod potentials;
pub mod quadrature;
pub mod resonance;

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

pub use basis::{assemble_cap_matrix, CapConfig, GalerkinMatrix};
pub use eigensolver::{solve_spectrum, stability_filter, SectorWindow, Spectrum};
pub use harness::{
    conjugation_check, sinc_sweep, match_spectra, pseudospectrum_scan, run_sweep,
    ConjugationReport, ConvergenceReport, MatchOutcome, PseudospectrumTable, SweepConfig,
};
pub use potentials::{AnalyticPotential, Piece, PiecewiseConstantPotential, Potential};
pub use resonance::{
    find_resonances, matching_function, winding_number, KRectangle, Resonance, ResonanceKind,
    ResonanceSet,
};
