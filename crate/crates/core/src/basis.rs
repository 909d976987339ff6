//! Hermite spectral-Galerkin assembly of the regularized operator.
//!
//! The target operator is `P_ε = −d²/dx² + V − iεe^{−iα}x²`. Conjugating
//! with the dilation `x ↦ η^{−1/4}x` (η = |ε|) and dividing by `η^{1/2}`
//! produces the rescaled form
//!
//! ```text
//! A = D² − i·sign(ε)·e^{−iα}·x² + η^{−1/2}·V(η^{−1/4}·x),
//! ```
//!
//! whose CAP term has unit size independent of ε — the numerically sane
//! normal form. Eigenvalues of `P_ε` are `η^{1/2}·eig(A)`. The matrix of
//! `A` is assembled in the orthonormal harmonic-oscillator basis `h_k`
//! (eigenfunctions of `D² + x²`), where `D²` and `x²` are pentadiagonal
//! with closed-form entries and the potential block is filled by Gauss
//! quadrature. An optional extra basis dilation `s` ([`CapConfig::basis_scale`])
//! improves conditioning at very small ε, where the oscillator ground
//! length of the rescaled operator drifts away from the basis's.
//!
//! All blocks are real-symmetric patterns with complex coefficients, so the
//! assembled matrix is complex symmetric (`M = Mᵀ`) exactly; the mirror
//! fill below guarantees this bitwise. For real `V`, flipping `ε → −ε`
//! conjugates every entry (at α = 0), realizing the spectrum-conjugation
//! symmetry at the matrix level.

use crate::linalg::{CMatrix, LinalgError};
use crate::potentials::{AnalyticPotential, Potential, PotentialError};
use crate::quadrature::{gauss_hermite, gauss_legendre, rescale_to_interval};
use crate::C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Assembly failures.
#[derive(Debug, Error)]
pub enum BasisError {
    /// Piecewise potential matrices need `quadrature_order ≥ 2·basis_size`
    /// to integrate products of basis functions accurately.
    #[error("quadrature order {order} too low: need at least {minimum}")]
    QuadratureOrderTooLow { order: usize, minimum: usize },
    /// Configuration violated an invariant (ε = 0, N < 2, α out of range, ...).
    #[error("invalid CAP configuration: {0}")]
    InvalidConfig(String),
    /// Propagated potential defect.
    #[error(transparent)]
    Potential(#[from] PotentialError),
    /// Propagated linear-algebra failure (quadrature node solve).
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Discretization and regularization parameters for one CAP solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapConfig {
    /// Regularization strength; nonzero, either sign. Negative ε runs the
    /// conjugate problem (spectra conjugate for real V).
    pub epsilon: f64,
    /// CAP phase α ∈ [0, π) in `−iεe^{−iα}x²`; α = 0 is the plain `−iεx²`.
    #[serde(default)]
    pub alpha: f64,
    /// Number of basis functions N.
    pub basis_size: usize,
    /// Quadrature order for potential matrix elements; at least 2N.
    #[serde(default)]
    pub quadrature_order: Option<usize>,
    /// Extra basis dilation s > 0 (basis functions `√s·h_k(sx)`); 1 keeps
    /// the natural rescaled basis.
    #[serde(default = "default_basis_scale")]
    pub basis_scale: f64,
}

fn default_basis_scale() -> f64 {
    1.0
}

impl CapConfig {
    /// Config with default quadrature order (2N) and basis scale 1.
    pub fn new(epsilon: f64, alpha: f64, basis_size: usize) -> Self {
        Self {
            epsilon,
            alpha,
            basis_size,
            quadrature_order: None,
            basis_scale: 1.0,
        }
    }

    /// Replace the basis scale.
    pub fn with_basis_scale(mut self, s: f64) -> Self {
        self.basis_scale = s;
        self
    }

    /// Replace the quadrature order.
    pub fn with_quadrature_order(mut self, q: usize) -> Self {
        self.quadrature_order = Some(q);
        self
    }

    /// Effective quadrature order: the configured one, or 2N.
    pub fn effective_quadrature_order(&self) -> usize {
        self.quadrature_order.unwrap_or(2 * self.basis_size)
    }

    /// Check all invariants.
    pub fn validate(&self) -> Result<(), BasisError> {
        if self.epsilon == 0.0 || !self.epsilon.is_finite() {
            return Err(BasisError::InvalidConfig(
                "epsilon must be nonzero and finite".into(),
            ));
        }
        if !(0.0..std::f64::consts::PI).contains(&self.alpha) {
            return Err(BasisError::InvalidConfig(format!(
                "alpha = {} outside [0, π)",
                self.alpha
            )));
        }
        if self.basis_size < 2 {
            return Err(BasisError::InvalidConfig(format!(
                "basis_size = {} too small (need ≥ 2)",
                self.basis_size
            )));
        }
        if !(self.basis_scale > 0.0) || !self.basis_scale.is_finite() {
            return Err(BasisError::InvalidConfig(format!(
                "basis_scale = {} must be positive",
                self.basis_scale
            )));
        }
        if self.effective_quadrature_order() < 2 * self.basis_size {
            return Err(BasisError::QuadratureOrderTooLow {
                order: self.effective_quadrature_order(),
                minimum: 2 * self.basis_size,
            });
        }
        Ok(())
    }

    /// Content hash of the configuration (hex SHA-256 of canonical JSON).
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        crate::potentials::hex_string(&hasher.finalize())
    }
}

/// Assembled Galerkin matrix of the rescaled operator `A`, together with
/// the factor mapping its eigenvalues back to eigenvalues of `P_ε`.
#[derive(Debug, Clone)]
pub struct GalerkinMatrix {
    /// N×N complex-symmetric matrix of `A` (row- and column-major layouts
    /// coincide because `M = Mᵀ`).
    pub entries: CMatrix,
    /// Multiplier carrying `eig(entries)` to eigenvalues of `P_ε`; equals
    /// `η^{1/2}` here, kept complex for forward compatibility.
    pub scale_factor: C64,
    /// The configuration the matrix was assembled under.
    pub config: CapConfig,
    /// Content hash of the assembled potential.
    pub potential_digest: String,
}

impl GalerkinMatrix {
    /// Map one eigenvalue of the rescaled matrix to an eigenvalue of `P_ε`.
    pub fn to_physical(&self, rescaled_eigenvalue: C64) -> C64 {
        self.scale_factor * rescaled_eigenvalue
    }
}

/// Orthonormal Hermite functions `h_0..h_{N−1}` evaluated at `points`.
///
/// Returns a row-major `N × points.len()` matrix: entry `k·m + i` is
/// `h_k(points[i])`. Uses the stable normalized recurrence
/// `h_0 = π^{−1/4}e^{−x²/2}`, `h_1 = √2·x·h_0`,
/// `h_{k+1} = √(2/(k+1))·x·h_k − √(k/(k+1))·h_{k−1}`.
pub fn hermite_functions(points: &[f64], n: usize) -> Vec<f64> {
    assert!(n >= 1, "need at least one basis function");
    let m = points.len();
    let mut h = vec![0.0f64; n * m];
    let norm0 = std::f64::consts::PI.powf(-0.25);
    for (i, &x) in points.iter().enumerate() {
        h[i] = norm0 * (-0.5 * x * x).exp();
    }
    if n >= 2 {
        for (i, &x) in points.iter().enumerate() {
            h[m + i] = std::f64::consts::SQRT_2 * x * h[i];
        }
    }
    for k in 1..n.saturating_sub(1) {
        let a = (2.0 / (k as f64 + 1.0)).sqrt();
        let b = (k as f64 / (k as f64 + 1.0)).sqrt();
        for (i, &x) in points.iter().enumerate() {
            h[(k + 1) * m + i] = a * x * h[k * m + i] - b * h[(k - 1) * m + i];
        }
    }
    h
}

/// Matrix of `x²` in the Hermite-function basis (row-major N×N):
/// diagonal `k + 1/2`, entries `(k, k+2)` and `(k+2, k)` equal
/// `√((k+1)(k+2))/2`.
pub fn matrix_x2(n: usize) -> Vec<f64> {
    assert!(n >= 2, "matrix_x2 needs N ≥ 2");
    let mut m = vec![0.0f64; n * n];
    for k in 0..n {
        m[k * n + k] = k as f64 + 0.5;
    }
    for k in 0..n.saturating_sub(2) {
        let off = (((k + 1) * (k + 2)) as f64).sqrt() / 2.0;
        m[k * n + (k + 2)] = off;
        m[(k + 2) * n + k] = off;
    }
    m
}

/// Matrix of `D² = −d²/dx²` in the Hermite-function basis (row-major N×N):
/// diagonal `k + 1/2`, entries `(k, k+2)` and `(k+2, k)` equal
/// `−√((k+1)(k+2))/2`. Satisfies `matrix_d2 + matrix_x2 = diag(2k+1)`.
pub fn matrix_d2(n: usize) -> Vec<f64> {
    assert!(n >= 2, "matrix_d2 needs N ≥ 2");
    let mut m = vec![0.0f64; n * n];
    for k in 0..n {
        m[k * n + k] = k as f64 + 0.5;
    }
    for k in 0..n.saturating_sub(2) {
        let off = -((((k + 1) * (k + 2)) as f64).sqrt()) / 2.0;
        m[k * n + (k + 2)] = off;
        m[(k + 2) * n + k] = off;
    }
    m
}

/// Matrix `⟨h_j, V(dilation·x)·h_k⟩` (row-major N×N, exactly symmetric).
///
/// Piecewise-constant potentials use Gauss–Legendre on each rescaled piece
/// (the integrand is smooth there); the quadratic form is assembled exactly
/// as `coeff·dilation²·matrix_x2`; the sinc form uses the modified
/// Gauss–Hermite rule over the whole line.
pub fn potential_matrix(
    p: &Potential,
    n: usize,
    quadrature_order: usize,
    dilation: f64,
) -> Result<Vec<f64>, BasisError> {
    assert!(dilation > 0.0, "dilation must be positive");
    match p {
        Potential::Analytic(AnalyticPotential::Zero) => Ok(vec![0.0; n * n]),
        Potential::Analytic(AnalyticPotential::Quadratic { coeff }) => {
            let mut m = matrix_x2(n);
            let c = coeff * dilation * dilation;
            for entry in &mut m {
                *entry *= c;
            }
            Ok(m)
        }
        Potential::Analytic(AnalyticPotential::SincLike) => {
            let (nodes, weights) = gauss_hermite(quadrature_order)?;
            let values: Vec<f64> = nodes
                .iter()
                .map(|&x| AnalyticPotential::SincLike.evaluate(dilation * x))
                .collect();
            Ok(weighted_gram(n, &nodes, &weights, &values))
        }
        Potential::Piecewise(pw) => {
            if quadrature_order < 2 * n {
                return Err(BasisError::QuadratureOrderTooLow {
                    order: quadrature_order,
                    minimum: 2 * n,
                });
            }
            let mut total = vec![0.0f64; n * n];
            let (base_nodes, base_weights) = gauss_legendre(quadrature_order)?;
            for piece in pw.pieces() {
                // V(dilation·y) equals piece.v for y in [a/dilation, b/dilation).
                let mut nodes = base_nodes.clone();
                let mut weights = base_weights.clone();
                rescale_to_interval(
                    &mut nodes,
                    &mut weights,
                    piece.a / dilation,
                    piece.b / dilation,
                );
                let values = vec![piece.v; nodes.len()];
                let block = weighted_gram(n, &nodes, &weights, &values);
                for (acc, inc) in total.iter_mut().zip(block) {
                    *acc += inc;
                }
            }
            Ok(total)
        }
    }
}

/// `M[j,k] = Σ_i weights[i]·values[i]·h_j(x_i)·h_k(x_i)`, mirrored so the
/// result is bitwise symmetric.
fn weighted_gram(n: usize, nodes: &[f64], weights: &[f64], values: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    let h = hermite_functions(nodes, n);
    let mut hw = h.clone();
    for k in 0..n {
        for i in 0..m {
            hw[k * m + i] *= weights[i] * values[i];
        }
    }
    let mut out = vec![0.0f64; n * n];
    // out = HW · Hᵀ with row-major operands.
    unsafe {
        matrixmultiply::dgemm(
            n,
            m,
            n,
            1.0,
            hw.as_ptr(),
            m as isize,
            1,
            h.as_ptr(),
            1,
            m as isize,
            0.0,
            out.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    // The two gemm paths to (j,k) and (k,j) round differently; mirror the
    // upper triangle so symmetry holds exactly, as downstream invariants
    // assume.
    for j in 0..n {
        for k in (j + 1)..n {
            out[k * n + j] = out[j * n + k];
        }
    }
    out
}

/// Assemble the Galerkin matrix of the rescaled operator `A` for potential
/// `p` under `cfg` (see module docs for the formula).
pub fn assemble_cap_matrix(p: &Potential, cfg: &CapConfig) -> Result<GalerkinMatrix, BasisError> {
    cfg.validate()?;
    let n = cfg.basis_size;
    let eta = cfg.epsilon.abs();
    let sign = cfg.epsilon.signum();
    let s = cfg.basis_scale;
    let q = cfg.effective_quadrature_order();

    let d2 = matrix_d2(n);
    let x2 = matrix_x2(n);
    let pm = potential_matrix(p, n, q, eta.powf(-0.25) / s)?;

    // A = s²·D² − i·sign(ε)·e^{−iα}·s^{−2}·x² + η^{−1/2}·V-block.
    let cap_coefficient = C64::new(0.0, -sign) * C64::from_polar(1.0, -cfg.alpha);
    let d2_coefficient = s * s;
    let x2_coefficient = 1.0 / (s * s);
    let v_coefficient = 1.0 / eta.sqrt();

    let entries = CMatrix::from_fn(n, |row, col| {
        let idx = row * n + col; // row-major blocks; symmetric anyway
        C64::new(d2_coefficient * d2[idx] + v_coefficient * pm[idx], 0.0)
            + cap_coefficient * (x2_coefficient * x2[idx])
    });

    Ok(GalerkinMatrix {
        entries,
        scale_factor: C64::new(eta.sqrt(), 0.0),
        config: cfg.clone(),
        potential_digest: p.digest(),
    })
}
