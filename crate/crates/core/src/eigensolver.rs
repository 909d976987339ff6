//! Dense nonsymmetric eigensolves, residuals, and stability filtering.
//!
//! The assembled Galerkin matrices are complex symmetric but far from
//! normal, so individual eigenvalues of a truncation can be spurious:
//! accurate in the backward-error sense yet unrelated to the underlying
//! operator. The standard defense, applied here, is to re-solve at a
//! larger basis and keep only eigenvalues that persist ([`stability_filter`]).
//! Residuals `‖Av − λv‖₂/‖A‖_F` are recorded for every eigenpair; they are
//! invariant under the physical rescaling `P_ε = η^{1/2}·A`, so they are
//! computed once on the assembled matrix.
//!
//! Spectra are reported in physical units (eigenvalues of `P_ε`) and
//! sorted by descending imaginary part, ties broken by ascending real
//! part — the resonance-hunting order: the eigenvalues that converge to
//! resonances sit closest to the real axis.

use crate::basis::{assemble_cap_matrix, BasisError, CapConfig, GalerkinMatrix};
use crate::linalg::{self, CMatrix, LinalgError};
use crate::potentials::Potential;
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Eigenpairs with relative residual above this are never marked stable.
/// Dense backward-stable solves land near 1e−15; 1e−8 leaves room for
/// ill-conditioned eigenvectors while rejecting outright breakdowns.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Eigensolver failures.
#[derive(Debug, Error)]
pub enum EigenError {
    /// Assembly of one of the matrices failed.
    #[error(transparent)]
    Basis(#[from] BasisError),
    /// LAPACK failure.
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Parameter violated an invariant (growth ≤ 1, bad window, ...).
    #[error("invalid eigensolver parameter: {0}")]
    Invalid(String),
}

/// Eigenvalues of `P_ε` with per-pair diagnostics, sorted by descending
/// imaginary part (ties: ascending real part).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    /// Physical eigenvalues (already multiplied by the scale factor).
    pub eigenvalues: Vec<C64>,
    /// Relative residuals `‖Av − λv‖₂/‖A‖_F` of the assembled-matrix pairs.
    pub residuals: Vec<f64>,
    /// Stability verdicts; all `false` until [`stability_filter`] runs.
    pub stable: Vec<bool>,
    /// Digest of the configuration that produced this spectrum.
    pub config_digest: String,
}

impl Spectrum {
    /// Number of eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    /// True when no eigenvalues are present.
    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues that passed the stability filter.
    pub fn stable_eigenvalues(&self) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .zip(&self.stable)
            .filter(|(_, &s)| s)
            .map(|(&z, _)| z)
            .collect()
    }

    /// Restriction of the spectrum to a sector window, preserving order
    /// and per-pair diagnostics.
    pub fn windowed(&self, window: &SectorWindow) -> Spectrum {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&j| window.contains(self.eigenvalues[j]))
            .collect();
        Spectrum {
            eigenvalues: keep.iter().map(|&j| self.eigenvalues[j]).collect(),
            residuals: keep.iter().map(|&j| self.residuals[j]).collect(),
            stable: keep.iter().map(|&j| self.stable[j]).collect(),
            config_digest: self.config_digest.clone(),
        }
    }
}

/// Sector of the complex plane in which eigenvalue limits are meaningful;
/// arguments are measured continuously in `[−π/4, 7π/4)` so the sector can
/// straddle the negative imaginary axis without a branch seam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorWindow {
    /// Lower bound on the continuous argument, ≥ −π/4.
    pub arg_min: f64,
    /// Upper bound on the continuous argument, ≤ 7π/4.
    pub arg_max: f64,
    /// Lower bound on |z| (excludes the threshold z = 0).
    pub abs_min: f64,
    /// Upper bound on |z|.
    pub abs_max: f64,
}

impl Default for SectorWindow {
    /// Slightly inside the admissible sector, away from threshold and from
    /// the sector's lower edge where convergence degenerates.
    fn default() -> Self {
        SectorWindow {
            arg_min: -std::f64::consts::FRAC_PI_4 + 0.05,
            arg_max: std::f64::consts::PI,
            abs_min: 0.05,
            abs_max: 30.0,
        }
    }
}

impl SectorWindow {
    /// Argument of `z` on the branch `[−π/4, 7π/4)`: the principal argument,
    /// shifted up by 2π when it falls below −π/4.
    pub fn continuous_arg(z: C64) -> f64 {
        let theta = z.arg();
        if theta < -std::f64::consts::FRAC_PI_4 {
            theta + 2.0 * std::f64::consts::PI
        } else {
            theta
        }
    }

    /// Check the window's own invariants.
    pub fn validate(&self) -> Result<(), EigenError> {
        let lo = -std::f64::consts::FRAC_PI_4 - 1e-12;
        let hi = 7.0 * std::f64::consts::FRAC_PI_4 + 1e-12;
        if !(self.arg_min >= lo && self.arg_max <= hi && self.arg_min < self.arg_max) {
            return Err(EigenError::Invalid(format!(
                "window arguments [{}, {}] must be increasing within [−π/4, 7π/4]",
                self.arg_min, self.arg_max
            )));
        }
        if !(self.abs_min >= 0.0 && self.abs_min < self.abs_max && self.abs_max.is_finite()) {
            return Err(EigenError::Invalid(format!(
                "window moduli [{}, {}] must be increasing and finite",
                self.abs_min, self.abs_max
            )));
        }
        Ok(())
    }

    /// Inclusive membership test.
    pub fn contains(&self, z: C64) -> bool {
        let r = z.norm();
        if !(self.abs_min..=self.abs_max).contains(&r) {
            return false;
        }
        let theta = Self::continuous_arg(z);
        (self.arg_min..=self.arg_max).contains(&theta)
    }
}

/// Eigenvalues, residuals, and (unset) stability flags of one assembled
/// matrix, in physical units and resonance order.
pub fn solve_spectrum(matrix: &GalerkinMatrix) -> Result<Spectrum, EigenError> {
    let n = matrix.entries.n();
    let decomposition = linalg::eig(&matrix.entries)?;
    let av = matrix.entries.matmul(&decomposition.vectors);
    let fro = matrix.entries.frobenius_norm();

    let mut rows: Vec<(C64, f64)> = (0..n)
        .map(|j| {
            let lambda = decomposition.values[j];
            let mut defect_sq = 0.0;
            for i in 0..n {
                let d = av.get(i, j) - lambda * decomposition.vectors.get(i, j);
                defect_sq += d.norm_sqr();
            }
            (matrix.to_physical(lambda), defect_sq.sqrt() / fro)
        })
        .collect();
    sort_resonance_order(&mut rows);

    Ok(Spectrum {
        eigenvalues: rows.iter().map(|r| r.0).collect(),
        residuals: rows.iter().map(|r| r.1).collect(),
        stable: vec![false; n],
        config_digest: matrix.config.digest(),
    })
}

fn sort_resonance_order(rows: &mut [(C64, f64)]) {
    rows.sort_by(|a, b| {
        b.0.im
            .total_cmp(&a.0.im)
            .then_with(|| a.0.re.total_cmp(&b.0.re))
    });
}

/// Solve at `cfg` and at a basis enlarged by `growth`, and mark an
/// eigenvalue stable when it has a partner in the enlarged solve within
/// `match_tol` and its residual is below [`RESIDUAL_TOL`].
///
/// This is the defense against truncation phantoms: spurious eigenvalues
/// of non-normal truncations wander under refinement, converged ones stay.
pub fn stability_filter(
    potential: &Potential,
    cfg: &CapConfig,
    growth: f64,
    match_tol: f64,
) -> Result<Spectrum, EigenError> {
    if !(growth > 1.0) || !growth.is_finite() {
        return Err(EigenError::Invalid(format!(
            "stability growth factor {growth} must exceed 1"
        )));
    }
    if !(match_tol > 0.0) {
        return Err(EigenError::Invalid(format!(
            "stability match tolerance {match_tol} must be positive"
        )));
    }
    let base_matrix = assemble_cap_matrix(potential, cfg)?;
    let mut base = solve_spectrum(&base_matrix)?;

    let refined_size = ((cfg.basis_size as f64) * growth).ceil() as usize;
    let refined_cfg = CapConfig {
        basis_size: refined_size.max(cfg.basis_size + 2),
        quadrature_order: None,
        ..cfg.clone()
    };
    let refined = solve_spectrum(&assemble_cap_matrix(potential, &refined_cfg)?)?;

    for j in 0..base.len() {
        let lambda = base.eigenvalues[j];
        let dist = refined
            .eigenvalues
            .iter()
            .map(|mu| (mu - lambda).norm())
            .fold(f64::INFINITY, f64::min);
        base.stable[j] = dist <= match_tol && base.residuals[j] <= RESIDUAL_TOL;
    }
    Ok(base)
}

/// `‖(M − z)^{−1}‖₂ = 1/σ_min(M − z)` for a dense matrix in the same units
/// as `z`; returns `f64::INFINITY` when `z` is an exact eigenvalue.
pub fn resolvent_norm(matrix: &CMatrix, z: C64) -> Result<f64, LinalgError> {
    let n = matrix.n();
    let mut shifted = matrix.clone();
    for i in 0..n {
        let d = shifted.get(i, i) - z;
        shifted.set(i, i, d);
    }
    let sigma = linalg::singular_values(&shifted)?;
    let smallest = *sigma.last().expect("nonempty singular spectrum");
    Ok(if smallest <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / smallest
    })
}
