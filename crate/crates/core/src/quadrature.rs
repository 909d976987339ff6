//! Gauss quadrature rules used by the Galerkin assembler.
//!
//! Nodes come from the Golub–Welsch eigenvalue problem: the nodes of an
//! n-point rule are the eigenvalues of the symmetric tridiagonal Jacobi
//! matrix of the weight's orthonormal polynomials. Only eigenvalues are
//! needed; weights follow from stable recurrences instead of eigenvectors.
//!
//! For the Hermite weight the classical weights `w_i ∝ e^{−x_i²}` underflow
//! long before the rules of interest (order ≳ 370), so [`gauss_hermite`]
//! returns *modified* weights `ŵ_i = w_i·e^{x_i²}` suitable for integrands
//! that already carry their own Gaussian decay — exactly the products
//! `h_j(x)h_k(x)V(x)` of Hermite functions this crate integrates. The
//! modified weights have the closed form `ŵ_i = 1/Σ_{k<n} h_k(x_i)²` in
//! terms of the (bounded, stably evaluable) Hermite functions, which avoids
//! the overflow entirely.

use crate::basis::hermite_functions;
use crate::linalg::{sym_tridiag_eigenvalues, LinalgError};

/// n-point Gauss–Legendre rule on `[−1, 1]`: `(nodes, weights)` with nodes
/// ascending. Integrates polynomials of degree `≤ 2n−1` exactly.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
    assert!(n >= 1, "quadrature order must be positive");
    let diag = vec![0.0f64; n];
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let nodes = sym_tridiag_eigenvalues(&diag, &off)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            // w_i = 2 / ((1 − x²)·P_n'(x)²) with P_n' from the standard
            // recurrence; stable since Legendre nodes stay inside (−1, 1).
            let dp = legendre_derivative(n, x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok((nodes, weights))
}

/// Derivative `P_n'(x)` via the three-term recurrence for `P_k` and the
/// identity `(1−x²)P_n'(x) = n(P_{n−1}(x) − x·P_n(x))`.
fn legendre_derivative(n: usize, x: f64) -> f64 {
    let mut p_prev = 1.0f64; // P_0
    let mut p = x; // P_1
    if n == 1 {
        return 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    (n as f64) * (p_prev - x * p) / (1.0 - x * x)
}

/// n-point Gauss–Hermite rule with modified weights: returns
/// `(nodes, ŵ)` such that `∫ g(x) dx ≈ Σ_i ŵ_i·g(x_i)` for integrands `g`
/// carrying Gaussian decay (e.g. products of Hermite functions against a
/// bounded function). Exact when `g(x) = e^{−x²}·(polynomial of degree ≤ 2n−1)`.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>), LinalgError> {
    assert!(n >= 1, "quadrature order must be positive");
    let diag = vec![0.0f64; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let nodes = sym_tridiag_eigenvalues(&diag, &off)?;
    // ŵ_i = 1 / Σ_{k<n} h_k(x_i)². The sum never underflows: the largest
    // node of the n-point rule lies inside the classical region of h_{n−1}.
    let h = hermite_functions(&nodes, n);
    let m = nodes.len();
    let weights = (0..m)
        .map(|i| {
            let sum: f64 = (0..n).map(|k| h[k * m + i] * h[k * m + i]).sum();
            1.0 / sum
        })
        .collect();
    Ok((nodes, weights))
}

/// Map Gauss–Legendre nodes/weights from `[−1, 1]` to `[a, b]` in place.
pub fn rescale_to_interval(nodes: &mut [f64], weights: &mut [f64], a: f64, b: f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    for x in nodes.iter_mut() {
        *x = mid + half * *x;
    }
    for w in weights.iter_mut() {
        *w *= half;
    }
}
