//! Closed-form spectra used as ground truth.
//!
//! Two families admit exact answers and anchor every numerical claim in
//! this crate:
//!
//! * the rotated (Davies) harmonic oscillator `−Δ + εe^{−iγ}x²` on ℝⁿ,
//!   with spectrum `e^{−iγ/2}√ε·(n + 2|k|)` over multi-indices `k ∈ ℕ₀ⁿ`;
//! * quadratic potentials `Σλ_j²x_j² − iΣμ_j²x_{j+r}²`, whose resonances
//!   form the lattice `Σλ_j(2k_j+1) − iΣμ_j(2k_{j+r}+1)` and whose
//!   regularized eigenvalues are
//!   `Σ(λ_j²−iε)^{1/2}(2k_j+1) − iΣ(μ_j²−iε)^{1/2}(2k_{j+r}+1)`
//!   with the principal square root (the branch positive on ℝ₊; the
//!   arguments have negative imaginary part, so the cut is never
//!   approached).
//!
//! Oracles return one entry per enumerated multi-index — multiplicities
//! appear as repeated values — so set-matching against computed spectra
//! needs no special casing.

use crate::C64;
use thiserror::Error;

/// Oracle parameter failures.
#[derive(Debug, Error)]
pub enum OracleError {
    /// The multi-index dimension must equal the number of quadratic
    /// frequencies supplied.
    #[error("multi-index dimension {box_dim} != lambdas ({lambdas}) + mus ({mus})")]
    DimensionMismatch {
        box_dim: usize,
        lambdas: usize,
        mus: usize,
    },
    /// A scalar parameter left its admissible range.
    #[error("invalid oracle parameter: {0}")]
    InvalidParameter(String),
}

/// Exhaustive enumeration of multi-indices `k ∈ ℕ₀ⁿ` with `|k| ≤ max_level`,
/// level by level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiIndexBox {
    n: usize,
    max_level: usize,
}

impl MultiIndexBox {
    /// Dimension `n ≥ 1`, levels `|k| = 0..=max_level`.
    pub fn new(n: usize, max_level: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::InvalidParameter(
                "multi-index dimension must be positive".into(),
            ));
        }
        Ok(MultiIndexBox { n, max_level })
    }

    /// Dimension of the indices.
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Largest enumerated weight.
    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// All multi-indices with `|k| ≤ max_level`, weight-0 first, each level
    /// in lexicographic order; exhaustive and duplicate-free.
    pub fn enumerate(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.count());
        let mut scratch = vec![0usize; self.n];
        for level in 0..=self.max_level {
            fill_level(&mut out, &mut scratch, 0, level);
        }
        out
    }

    /// Number of enumerated indices: `C(max_level + n, n)`.
    pub fn count(&self) -> usize {
        binomial((self.max_level + self.n) as u64, self.n as u64) as usize
    }
}

/// Append all indices of exact remaining weight `budget` over positions
/// `pos..`, keeping lexicographic order within the level.
fn fill_level(out: &mut Vec<Vec<usize>>, scratch: &mut Vec<usize>, pos: usize, budget: usize) {
    if pos + 1 == scratch.len() {
        scratch[pos] = budget;
        out.push(scratch.clone());
        return;
    }
    for value in 0..=budget {
        scratch[pos] = value;
        fill_level(out, scratch, pos + 1, budget - value);
    }
}

/// Binomial coefficient by the multiplicative formula; exact for the small
/// arguments used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// Number of multi-indices of weight `m` in dimension `n`:
/// `C(m + n − 1, n − 1)` (stars and bars).
pub fn level_multiplicity(n: usize, m: usize) -> u64 {
    binomial((m + n - 1) as u64, (n - 1) as u64)
}

/// Spectrum of the Davies oscillator `−Δ + εe^{−iγ}x²` on ℝⁿ:
/// `e^{−iγ/2}·√ε·(n + 2|k|)` per enumerated multi-index.
pub fn davies_spectrum(
    epsilon: f64,
    gamma: f64,
    indices: &MultiIndexBox,
) -> Result<Vec<C64>, OracleError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(OracleError::InvalidParameter(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    if !(0.0..std::f64::consts::PI).contains(&gamma) {
        return Err(OracleError::InvalidParameter(format!(
            "gamma = {gamma} outside [0, π)"
        )));
    }
    let prefactor = C64::from_polar(epsilon.sqrt(), -0.5 * gamma);
    let n = indices.dimension() as f64;
    Ok(indices
        .enumerate()
        .iter()
        .map(|k| {
            let weight: usize = k.iter().sum();
            prefactor * (n + 2.0 * weight as f64)
        })
        .collect())
}

fn check_dimensions(
    lambdas: &[f64],
    mus: &[f64],
    indices: &MultiIndexBox,
) -> Result<(), OracleError> {
    if indices.dimension() != lambdas.len() + mus.len() {
        return Err(OracleError::DimensionMismatch {
            box_dim: indices.dimension(),
            lambdas: lambdas.len(),
            mus: mus.len(),
        });
    }
    for &f in lambdas.iter().chain(mus) {
        if !(f > 0.0) || !f.is_finite() {
            return Err(OracleError::InvalidParameter(format!(
                "quadratic frequency {f} must be positive"
            )));
        }
    }
    Ok(())
}

/// Resonance lattice of the quadratic potential
/// `Σλ_j²x_j² − iΣμ_j²x_{j+r}²`: values `Σλ_j(2k_j+1) − iΣμ_j(2k_{j+r}+1)`
/// per enumerated multi-index.
pub fn quadratic_resonances(
    lambdas: &[f64],
    mus: &[f64],
    indices: &MultiIndexBox,
) -> Result<Vec<C64>, OracleError> {
    check_dimensions(lambdas, mus, indices)?;
    let r = lambdas.len();
    Ok(indices
        .enumerate()
        .iter()
        .map(|k| {
            let re: f64 = lambdas
                .iter()
                .enumerate()
                .map(|(j, &l)| l * (2.0 * k[j] as f64 + 1.0))
                .sum();
            let im: f64 = mus
                .iter()
                .enumerate()
                .map(|(j, &m)| m * (2.0 * k[r + j] as f64 + 1.0))
                .sum();
            C64::new(re, -im)
        })
        .collect())
}

/// Eigenvalues of the regularized quadratic operator:
/// `Σ(λ_j²−iε)^{1/2}(2k_j+1) − iΣ(μ_j²−iε)^{1/2}(2k_{j+r}+1)` with the
/// principal square root, per enumerated multi-index.
pub fn quadratic_cap_eigenvalues(
    lambdas: &[f64],
    mus: &[f64],
    epsilon: f64,
    indices: &MultiIndexBox,
) -> Result<Vec<C64>, OracleError> {
    check_dimensions(lambdas, mus, indices)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(OracleError::InvalidParameter(format!(
            "epsilon = {epsilon} must be positive"
        )));
    }
    let r = lambdas.len();
    // Principal branch via exp(½·Log); the shifted frequencies have
    // arguments in (−π/2, 0), far from the cut.
    let shifted_root = |f: f64| (C64::new(f * f, -epsilon)).sqrt();
    let lam_roots: Vec<C64> = lambdas.iter().map(|&l| shifted_root(l)).collect();
    let mu_roots: Vec<C64> = mus.iter().map(|&m| shifted_root(m)).collect();
    Ok(indices
        .enumerate()
        .iter()
        .map(|k| {
            let mut z = C64::new(0.0, 0.0);
            for (j, &root) in lam_roots.iter().enumerate() {
                z += root * (2.0 * k[j] as f64 + 1.0);
            }
            for (j, &root) in mu_roots.iter().enumerate() {
                z += C64::new(0.0, -1.0) * root * (2.0 * k[r + j] as f64 + 1.0);
            }
            z
        })
        .collect())
}
