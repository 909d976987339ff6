//! Sweep orchestration: the ε → 0⁺ laboratory.
//!
//! As ε → 0⁺, eigenvalues of the regularized operator `P_ε` converge to
//! the resonances, uniformly on compact subsets of the sector
//! `−π/4 < arg z < 7π/4`. This module turns that statement into an
//! experiment: compute the resonances once (directly, or from an
//! exact oracle), then walk a descending ladder of ε values, solve and
//! stability-filter each CAP spectrum, restrict to a sector window, match
//! eigenvalues to resonances by globally optimal assignment, and record
//! per-resonance error sequences and disk counts.
//!
//! Matching uses optimal assignment with a hard radius rather than greedy
//! nearest-neighbor: greedy mis-pairs whenever two resonances are closer
//! to each other than to their eigenvalues. A resonance of multiplicity m
//! owns m assignment slots, mirroring the m eigenvalues that converge
//! into a small disk around it.
//!
//! The per-ε pipeline stages are independent and run concurrently; the
//! report aggregates them in the configured (descending |ε|) order, so
//! identical configurations produce identical artifacts.

use crate::basis::{assemble_cap_matrix, BasisError, CapConfig};
use crate::eigensolver::{
    resolvent_norm, stability_filter, EigenError, SectorWindow, Spectrum,
};
use crate::oracles::{quadratic_resonances, MultiIndexBox, OracleError};
use crate::potentials::Potential;
use crate::resonance::{find_resonances, KRectangle, ResonanceError, DEFAULT_NEWTON_TOL};
use crate::C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use thiserror::Error;

/// Harness-level failures.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// A configuration field violated an invariant.
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Where the resonance targets of a sweep come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ResonanceSource {
    /// Run the direct transfer-matrix solver (piecewise potentials only).
    Direct,
    /// Exact quadratic-potential lattice.
    Oracle {
        lambdas: Vec<f64>,
        mus: Vec<f64>,
        max_level: usize,
    },
    /// Caller-supplied targets.
    Explicit { poles: Vec<ExplicitPole> },
}

impl Default for ResonanceSource {
    fn default() -> Self {
        ResonanceSource::Direct
    }
}

/// One externally supplied resonance target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitPole {
    pub z: C64,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

fn one() -> usize {
    1
}

/// Per-ε overrides for sweeps whose small-ε legs need larger bases.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EpsilonOverride {
    #[serde(default)]
    pub basis_size: Option<usize>,
    #[serde(default)]
    pub basis_scale: Option<f64>,
    #[serde(default)]
    pub stability_match_tol: Option<f64>,
}

/// Full description of one convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub potential: Potential,
    /// Regularization ladder, sorted descending in |ε|, all nonzero.
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub alpha: f64,
    pub basis_size: usize,
    #[serde(default)]
    pub window: SectorWindow,
    #[serde(default = "default_match_radius")]
    pub match_radius: f64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Where resonance targets come from (default: direct solver).
    #[serde(default)]
    pub resonance_source: ResonanceSource,
    /// k-plane search rectangle for the direct solver; derived from the
    /// window when absent.
    #[serde(default)]
    pub k_rect: Option<KRectangle>,
    /// Basis growth factor used by the stability filter.
    #[serde(default = "default_growth")]
    pub stability_growth: f64,
    /// Stability partner tolerance (overridable per ε).
    #[serde(default = "default_stability_match_tol")]
    pub stability_match_tol: f64,
    /// Per-ε overrides, aligned with `epsilons`.
    #[serde(default)]
    pub per_epsilon: Option<Vec<EpsilonOverride>>,
    /// Calibrated final-error bound for the smallest ε, recorded with the
    /// experiment (a repository calibration artifact, not a cited number).
    #[serde(default)]
    pub final_tolerance: Option<f64>,
}

fn default_match_radius() -> f64 {
    0.1
}

fn default_growth() -> f64 {
    1.5
}

fn default_stability_match_tol() -> f64 {
    1e-6
}

impl SweepConfig {
    /// Minimal experiment with library defaults everywhere.
    pub fn new(potential: Potential, epsilons: Vec<f64>, basis_size: usize) -> Self {
        SweepConfig {
            potential,
            epsilons,
            alpha: 0.0,
            basis_size,
            window: SectorWindow::default(),
            match_radius: default_match_radius(),
            output_dir: None,
            resonance_source: ResonanceSource::Direct,
            k_rect: None,
            stability_growth: default_growth(),
            stability_match_tol: default_stability_match_tol(),
            per_epsilon: None,
            final_tolerance: None,
        }
    }

    /// Check every config invariant.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.epsilons.is_empty() {
            return Err(HarnessError::Config("epsilon ladder is empty".into()));
        }
        if self.epsilons.iter().any(|&e| e == 0.0 || !e.is_finite()) {
            return Err(HarnessError::Config(
                "epsilon ladder entries must be nonzero and finite".into(),
            ));
        }
        if self
            .epsilons
            .windows(2)
            .any(|w| w[0].abs() <= w[1].abs())
        {
            return Err(HarnessError::Config(
                "epsilon ladder must be strictly descending in |ε|".into(),
            ));
        }
        self.window.validate()?;
        if !(self.match_radius > 0.0) {
            return Err(HarnessError::Config(format!(
                "match_radius = {} must be positive",
                self.match_radius
            )));
        }
        if let Some(overrides) = &self.per_epsilon {
            if overrides.len() != self.epsilons.len() {
                return Err(HarnessError::Config(format!(
                    "per_epsilon has {} entries for {} epsilons",
                    overrides.len(),
                    self.epsilons.len()
                )));
            }
        }
        if matches!(self.resonance_source, ResonanceSource::Direct)
            && !matches!(self.potential, Potential::Piecewise(_))
        {
            return Err(HarnessError::Config(
                "direct resonance source requires a piecewise-constant potential".into(),
            ));
        }
        Ok(())
    }

    fn cap_config(&self, index: usize) -> CapConfig {
        let ov = self
            .per_epsilon
            .as_ref()
            .map(|v| v[index])
            .unwrap_or_default();
        CapConfig {
            epsilon: self.epsilons[index],
            alpha: self.alpha,
            basis_size: ov.basis_size.unwrap_or(self.basis_size),
            quadrature_order: None,
            basis_scale: ov.basis_scale.unwrap_or(1.0),
        }
    }

    fn match_tol(&self, index: usize) -> f64 {
        self.per_epsilon
            .as_ref()
            .and_then(|v| v[index].stability_match_tol)
            .unwrap_or(self.stability_match_tol)
    }
}

/// One matched (eigenvalue, resonance) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub eigenvalue: C64,
    pub resonance: C64,
    /// |eigenvalue − resonance|, exactly as matched.
    pub abs_error: f64,
}

/// Outcome of matching one spectrum against the targets.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_eigenvalues: Vec<C64>,
    pub unmatched_resonances: Vec<C64>,
}

/// Globally optimal assignment of eigenvalues to resonance slots:
/// minimizes total distance over maximum-cardinality matchings, with
/// pair distances capped at `radius`. A resonance of multiplicity m may
/// receive up to m eigenvalues; matching is injective per slot.
pub fn match_spectra(
    eigenvalues: &[C64],
    resonances: &[(C64, usize)],
    radius: f64,
) -> MatchOutcome {
    assert!(radius > 0.0, "match radius must be positive");
    // Expand multiplicity-m resonances into m identical slots.
    let mut slot_owner = Vec::new();
    for (idx, &(_, mult)) in resonances.iter().enumerate() {
        for _ in 0..mult.max(1) {
            slot_owner.push(idx);
        }
    }
    let n_eig = eigenvalues.len();
    let n_slot = slot_owner.len();
    if n_eig == 0 || n_slot == 0 {
        return MatchOutcome {
            pairs: Vec::new(),
            unmatched_eigenvalues: eigenvalues.to_vec(),
            unmatched_resonances: resonances.iter().map(|&(z, _)| z).collect(),
        };
    }

    // Cost matrix: rows = eigenvalues, columns = slots then one dummy
    // column per eigenvalue. Forbidden pairs cost far more than leaving
    // an eigenvalue on its dummy, so cardinality is maximized first and
    // total distance minimized second.
    const DUMMY: f64 = 1e6;
    const FORBIDDEN: f64 = 1e12;
    let n_col = n_slot + n_eig;
    let cost = |i: usize, j: usize| -> f64 {
        if j < n_slot {
            let d = (eigenvalues[i] - resonances[slot_owner[j]].0).norm();
            if d <= radius {
                d
            } else {
                FORBIDDEN
            }
        } else {
            DUMMY
        }
    };
    let assignment = assignment_min_cost(n_eig, n_col, &cost);

    let mut pairs = Vec::new();
    let mut unmatched_eigenvalues = Vec::new();
    let mut matched_per_resonance = vec![0usize; resonances.len()];
    for (i, &j) in assignment.iter().enumerate() {
        if j < n_slot {
            let d = (eigenvalues[i] - resonances[slot_owner[j]].0).norm();
            if d <= radius {
                pairs.push(MatchedPair {
                    eigenvalue: eigenvalues[i],
                    resonance: resonances[slot_owner[j]].0,
                    abs_error: d,
                });
                matched_per_resonance[slot_owner[j]] += 1;
                continue;
            }
        }
        unmatched_eigenvalues.push(eigenvalues[i]);
    }
    let unmatched_resonances = resonances
        .iter()
        .enumerate()
        .filter(|&(idx, _)| matched_per_resonance[idx] == 0)
        .map(|(_, &(z, _))| z)
        .collect();
    MatchOutcome {
        pairs,
        unmatched_eigenvalues,
        unmatched_resonances,
    }
}

/// Shortest-augmenting-path assignment (Jonker–Volgenant style) for a
/// dense rectangular cost matrix with rows ≤ columns; returns the column
/// assigned to each row. O(rows²·cols), plenty for spectra of a few
/// hundred values.
fn assignment_min_cost(rows: usize, cols: usize, cost: &dyn Fn(usize, usize) -> f64) -> Vec<usize> {
    assert!(rows <= cols);
    // 1-indexed potentials/matching in the classic formulation.
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut matched_row = vec![0usize; cols + 1]; // column -> row
    for i in 1..=rows {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; cols + 1];
        let mut parent = vec![0usize; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if reduced < min_slack[j] {
                    min_slack[j] = reduced;
                    parent[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        // Augment along the alternating path.
        while j0 != 0 {
            let j1 = parent[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        }
    }
    let mut row_to_col = vec![usize::MAX; rows];
    for j in 1..=cols {
        if matched_row[j] != 0 {
            row_to_col[matched_row[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Matching results and spectrum for one rung of the ε ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub epsilon: f64,
    /// Sector-filtered spectrum (stable and unstable, flags recorded).
    pub spectrum: Spectrum,
    pub matched: Vec<MatchedPair>,
    pub unmatched_eigenvalues: Vec<C64>,
    pub unmatched_resonances: Vec<C64>,
    /// Present when this rung failed; other fields are then empty.
    pub failure: Option<String>,
}

/// Error history of one resonance across the ladder; `None` marks rungs
/// where the resonance went unmatched or the solve failed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorSequence {
    pub resonance: C64,
    pub multiplicity: usize,
    pub errors: Vec<Option<f64>>,
}

/// Eigenvalue count in the disk D(resonance, δ) at the smallest ε.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DiskCount {
    pub resonance: C64,
    pub delta: f64,
    pub count: usize,
    pub expected: usize,
}

/// Complete record of one convergence experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub alpha: f64,
    pub potential_digest: String,
    /// Resonance targets inside the window, with multiplicities.
    pub targets: Vec<ExplicitPole>,
    pub per_epsilon: Vec<EpsilonReport>,
    pub error_sequences: Vec<ErrorSequence>,
    pub disk_counts: Vec<DiskCount>,
}

/// Derive a k-plane search rectangle from an energy window: z = k² maps
/// the window's sector into `arg k ∈ [arg_min/2, arg_max/2]`,
/// `|k| ∈ [√abs_min, √abs_max]`; the bounding box of that annular sector
/// (clipped away from the threshold disk) is returned.
pub fn k_rectangle_for_window(window: &SectorWindow) -> KRectangle {
    let r_max = window.abs_max.sqrt();
    let th_lo = window.arg_min / 2.0;
    let th_hi = (window.arg_max / 2.0).min(std::f64::consts::FRAC_PI_2);
    let im_min = (r_max * th_lo.sin()).min(-1e-3);
    let im_max = if th_hi > 0.0 {
        r_max * th_hi.sin()
    } else {
        -1e-3
    };
    KRectangle::new(2e-3, r_max, im_min, im_max.max(im_min + 1e-3))
}

/// Resolve the sweep's resonance targets and clip them to the window.
fn resolve_targets(cfg: &SweepConfig) -> Result<Vec<ExplicitPole>, HarnessError> {
    let raw: Vec<ExplicitPole> = match &cfg.resonance_source {
        ResonanceSource::Direct => {
            let pw = match &cfg.potential {
                Potential::Piecewise(pw) => pw,
                _ => {
                    return Err(HarnessError::Config(
                        "direct resonance source requires a piecewise-constant potential".into(),
                    ))
                }
            };
            let rect = cfg
                .k_rect
                .unwrap_or_else(|| k_rectangle_for_window(&cfg.window));
            find_resonances(pw, &rect, DEFAULT_NEWTON_TOL)?
                .poles
                .iter()
                .map(|p| ExplicitPole {
                    z: p.z,
                    multiplicity: p.multiplicity,
                })
                .collect()
        }
        ResonanceSource::Oracle {
            lambdas,
            mus,
            max_level,
        } => {
            let indices = MultiIndexBox::new(lambdas.len() + mus.len(), *max_level)?;
            let values = quadratic_resonances(lambdas, mus, &indices)?;
            // Collapse the lattice's exact repeats into multiplicities.
            let mut collapsed: Vec<ExplicitPole> = Vec::new();
            for z in values {
                match collapsed.iter_mut().find(|p| (p.z - z).norm() < 1e-12) {
                    Some(p) => p.multiplicity += 1,
                    None => collapsed.push(ExplicitPole { z, multiplicity: 1 }),
                }
            }
            collapsed
        }
        ResonanceSource::Explicit { poles } => poles.clone(),
    };
    Ok(raw
        .into_iter()
        .filter(|p| cfg.window.contains(p.z))
        .collect())
}

/// Run the ε ladder: resonances once, then per ε assemble → solve →
/// stability-filter → window → match. Per-ε numerical failures do not
/// abort the sweep; they are recorded as failure markers on that rung.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport, HarnessError> {
    cfg.validate()?;
    let targets = resolve_targets(cfg)?;
    let target_pairs: Vec<(C64, usize)> =
        targets.iter().map(|p| (p.z, p.multiplicity)).collect();

    let per_epsilon: Vec<EpsilonReport> = cfg
        .epsilons
        .par_iter()
        .enumerate()
        .map(|(index, &epsilon)| {
            let cap = cfg.cap_config(index);
            match stability_filter(
                &cfg.potential,
                &cap,
                cfg.stability_growth,
                cfg.match_tol(index),
            ) {
                Ok(spectrum) => {
                    let windowed = spectrum.windowed(&cfg.window);
                    let outcome =
                        match_spectra(&windowed.stable_eigenvalues(), &target_pairs, cfg.match_radius);
                    EpsilonReport {
                        epsilon,
                        spectrum: windowed,
                        matched: outcome.pairs,
                        unmatched_eigenvalues: outcome.unmatched_eigenvalues,
                        unmatched_resonances: outcome.unmatched_resonances,
                        failure: None,
                    }
                }
                Err(err) => EpsilonReport {
                    epsilon,
                    spectrum: Spectrum {
                        eigenvalues: Vec::new(),
                        residuals: Vec::new(),
                        stable: Vec::new(),
                        config_digest: cap.digest(),
                    },
                    matched: Vec::new(),
                    unmatched_eigenvalues: Vec::new(),
                    unmatched_resonances: target_pairs.iter().map(|&(z, _)| z).collect(),
                    failure: Some(err.to_string()),
                },
            }
        })
        .collect();

    // Per-resonance error history across the ladder: the worst matched
    // error per rung (identical to the single pair for simple resonances).
    let error_sequences = targets
        .iter()
        .map(|target| ErrorSequence {
            resonance: target.z,
            multiplicity: target.multiplicity,
            errors: per_epsilon
                .iter()
                .map(|rung| {
                    rung.matched
                        .iter()
                        .filter(|pair| (pair.resonance - target.z).norm() < 1e-12)
                        .map(|pair| pair.abs_error)
                        .fold(None, |acc: Option<f64>, e| {
                            Some(acc.map_or(e, |a| a.max(e)))
                        })
                })
                .collect(),
        })
        .collect();

    // Disk counts at the smallest ε: stable windowed eigenvalues within
    // D(z_j, match_radius) against the expected multiplicity.
    let last = per_epsilon.last().expect("nonempty ladder");
    let disk_counts = targets
        .iter()
        .map(|target| DiskCount {
            resonance: target.z,
            delta: cfg.match_radius,
            count: last
                .spectrum
                .stable_eigenvalues()
                .iter()
                .filter(|&&z| (z - target.z).norm() <= cfg.match_radius)
                .count(),
            expected: target.multiplicity,
        })
        .collect();

    Ok(ConvergenceReport {
        alpha: cfg.alpha,
        potential_digest: cfg.potential.digest(),
        targets,
        per_epsilon,
        error_sequences,
        disk_counts,
    })
}

/// Result of the spectral-conjugation experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugationReport {
    /// Hausdorff distance between σ(P_{−ε}) and conj(σ(P_ε)) over the
    /// stable windowed eigenvalues. 0 when both sets are empty.
    pub hausdorff: f64,
    /// conj(σ(P_{+ε})) ∩ window, stable only.
    pub conjugated_plus: Vec<C64>,
    /// σ(P_{−ε}) ∩ window, stable only.
    pub minus: Vec<C64>,
}

/// Directed-plus-reversed Hausdorff distance; empty/empty is 0 and
/// empty/nonempty is ∞.
fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let directed = |from: &[C64], to: &[C64]| {
        from.iter()
            .map(|x| {
                to.iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Verify the spectral conjugation symmetry σ(P_{−ε}) = conj(σ(P_ε)) at
/// α = 0: solve both signs, conjugate the +ε spectrum, window both sets,
/// and measure their Hausdorff distance. The assembled matrices are exact
/// entrywise conjugates, so the distance is eigensolver noise.
pub fn conjugation_check(
    potential: &Potential,
    epsilon: f64,
    basis_size: usize,
    window: &SectorWindow,
    growth: f64,
    match_tol: f64,
) -> Result<ConjugationReport, HarnessError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(HarnessError::Config(format!(
            "conjugation check needs ε > 0, got {epsilon}"
        )));
    }
    window.validate()?;
    let plus = stability_filter(
        potential,
        &CapConfig::new(epsilon, 0.0, basis_size),
        growth,
        match_tol,
    )?;
    let minus = stability_filter(
        potential,
        &CapConfig::new(-epsilon, 0.0, basis_size),
        growth,
        match_tol,
    )?;
    // Conjugate first, then apply the same window to both sets; windowing
    // before conjugation would compare different sectors.
    let conjugated_plus: Vec<C64> = plus
        .stable_eigenvalues()
        .iter()
        .map(|z| z.conj())
        .filter(|&z| window.contains(z))
        .collect();
    let minus_windowed: Vec<C64> = minus
        .stable_eigenvalues()
        .into_iter()
        .filter(|&z| window.contains(z))
        .collect();
    Ok(ConjugationReport {
        hausdorff: hausdorff(&conjugated_plus, &minus_windowed),
        conjugated_plus,
        minus: minus_windowed,
    })
}

/// Resolvent norms of the V ≡ 0 CAP operator on a grid of sector points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudospectrumTable {
    pub gamma: f64,
    pub basis_size: usize,
    /// Ladder, descending.
    pub epsilons: Vec<f64>,
    pub points: Vec<PseudospectrumPoint>,
}

/// One grid point's norms across the ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudospectrumPoint {
    pub z: C64,
    /// ‖(P_ε − z)^{−1}‖ per ε, aligned with `epsilons`.
    pub norms: Vec<f64>,
    /// Consecutive growth ratios norms[i+1]/norms[i] (ε decreasing).
    pub ratios: Vec<f64>,
}

/// Half-angular margin kept around the ray e^{−iγ/2}ℝ₊, where the
/// resolvent genuinely diverges and a norm sample means nothing.
pub const PSEUDOSPECTRUM_RAY_MARGIN: f64 = 0.05;

/// Scan ‖(P_ε − z)^{−1}‖ for the zero-potential operator
/// `−d²/dx² + εe^{−iγ}x²` over sector points and a descending ε ladder.
///
/// Admissible points satisfy `−γ < arg z ≤ 0` (the closed real-axis edge
/// is allowed: the uniform-boundedness bound is stated there) and keep an
/// angular margin from the spectral ray `arg z = −γ/2`. The rotation is
/// realized through the CAP phase, `γ = α + π/2`, so `γ ∈ [π/2, 3π/2)`.
pub fn pseudospectrum_scan(
    epsilons: &[f64],
    gamma: f64,
    points: &[C64],
    basis_size: usize,
) -> Result<PseudospectrumTable, HarnessError> {
    if epsilons.is_empty() || epsilons.iter().any(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(HarnessError::Config(
            "pseudospectrum ladder must be nonempty and positive".into(),
        ));
    }
    if epsilons.windows(2).any(|w| w[0] <= w[1]) {
        return Err(HarnessError::Config(
            "pseudospectrum ladder must be strictly descending".into(),
        ));
    }
    let alpha = gamma - std::f64::consts::FRAC_PI_2;
    if !(0.0..std::f64::consts::PI).contains(&alpha) {
        return Err(HarnessError::Config(format!(
            "gamma = {gamma} outside [π/2, 3π/2); the rotation is realized via the CAP phase"
        )));
    }
    for &z in points {
        let theta = z.arg();
        if !(theta > -gamma && theta <= 0.0) {
            return Err(HarnessError::Config(format!(
                "grid point {z} outside the sector −γ < arg z ≤ 0"
            )));
        }
        if (theta + 0.5 * gamma).abs() < PSEUDOSPECTRUM_RAY_MARGIN {
            return Err(HarnessError::Config(format!(
                "grid point {z} within the margin around the spectral ray arg z = −γ/2"
            )));
        }
    }

    let matrices: Result<Vec<_>, HarnessError> = epsilons
        .iter()
        .map(|&eps| {
            let cfg = CapConfig::new(eps, alpha, basis_size);
            let assembled = assemble_cap_matrix(&Potential::zero(), &cfg)?;
            // Resolvent norms live in physical units: scale the matrix.
            let n = assembled.entries.n();
            let scale = assembled.scale_factor;
            Ok(crate::linalg::CMatrix::from_fn(n, |r, c| {
                scale * assembled.entries.get(r, c)
            }))
        })
        .collect();
    let matrices = matrices?;

    let points: Result<Vec<PseudospectrumPoint>, HarnessError> = points
        .par_iter()
        .map(|&z| {
            let norms: Result<Vec<f64>, HarnessError> = matrices
                .iter()
                .map(|m| resolvent_norm(m, z).map_err(HarnessError::from))
                .collect();
            let norms = norms?;
            let ratios = norms.windows(2).map(|w| w[1] / w[0]).collect();
            Ok(PseudospectrumPoint { z, norms, ratios })
        })
        .collect();

    Ok(PseudospectrumTable {
        gamma,
        basis_size,
        epsilons: epsilons.to_vec(),
        points: points?,
    })
}

/// One exploratory spectrum per ε for the non-dilation-analytic sinc-like
/// potential: stability-filtered, sector-windowed, no convergence claim
/// and no matching (no direct solver exists for this potential).
pub fn sinc_sweep(
    epsilons: &[f64],
    basis_size: usize,
    window: &SectorWindow,
    growth: f64,
    match_tol: f64,
) -> Result<Vec<(f64, Spectrum)>, HarnessError> {
    if epsilons.is_empty() || epsilons.iter().any(|&e| e == 0.0 || !e.is_finite()) {
        return Err(HarnessError::Config(
            "epsilon list must be nonempty and nonzero".into(),
        ));
    }
    window.validate()?;
    let potential = Potential::sinc_like();
    epsilons
        .par_iter()
        .map(|&eps| {
            let cfg = CapConfig::new(eps, 0.0, basis_size);
            let spectrum = stability_filter(&potential, &cfg, growth, match_tol)?;
            Ok((eps, spectrum.windowed(window)))
        })
        .collect()
}
