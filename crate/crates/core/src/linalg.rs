//! Dense complex linear algebra on top of the system LAPACK.
//!
//! The only kernels this crate needs are the dense non-symmetric
//! eigensolver (`zgeev`), singular values (`zgesvd`), and symmetric
//! tridiagonal eigenvalues (`dstev`, for Gauss quadrature nodes). They are
//! bound directly with a minimal `extern "C"` surface and linked against
//! OpenBLAS, which bundles LAPACK with an optimized BLAS.
//!
//! All matrices here are square and stored column-major as LAPACK expects.
//! Every assembled operator in this crate is complex *symmetric* (`M = Mᵀ`),
//! for which row-major and column-major layouts coincide, so no transposes
//! are needed at the boundary.
//!
//! LAPACK entry is serialized behind a process-wide lock: the system BLAS
//! may keep internal thread state, and the callers' outer parallelism (one
//! task per ε) gains nothing from concurrent factorizations anyway. BLAS
//! threading is pinned to a single thread on first use for the same reason.

use crate::C64;
use std::sync::Mutex;
use thiserror::Error;

/// Failures surfaced by LAPACK routines.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    /// The iterative part of a routine failed to converge; `info` is the
    /// raw LAPACK info code. Results must not be used.
    #[error("{routine} failed to converge (info = {info})")]
    NoConvergence { routine: &'static str, info: i32 },
    /// A routine rejected one of its arguments; indicates a programming
    /// error in the wrapper, not bad data.
    #[error("{routine} rejected argument {arg} (info = {info})")]
    BadArgument {
        routine: &'static str,
        arg: i32,
        info: i32,
    },
    /// Input contained NaN or infinity.
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

extern "C" {
    fn zgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const i32,
        a: *mut C64,
        lda: *const i32,
        w: *mut C64,
        vl: *mut C64,
        ldvl: *const i32,
        vr: *mut C64,
        ldvr: *const i32,
        work: *mut C64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn zgesvd_(
        jobu: *const u8,
        jobvt: *const u8,
        m: *const i32,
        n: *const i32,
        a: *mut C64,
        lda: *const i32,
        s: *mut f64,
        u: *mut C64,
        ldu: *const i32,
        vt: *mut C64,
        ldvt: *const i32,
        work: *mut C64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dstev_(
        jobz: *const u8,
        n: *const i32,
        d: *mut f64,
        e: *mut f64,
        z: *mut f64,
        ldz: *const i32,
        work: *mut f64,
        info: *mut i32,
    );

    fn openblas_set_num_threads(n: i32);
}

/// Process-wide LAPACK gate; also pins BLAS threading on first lock.
fn lapack_gate() -> std::sync::MutexGuard<'static, ()> {
    static GATE: Mutex<()> = Mutex::new(());
    static PIN: std::sync::Once = std::sync::Once::new();
    PIN.call_once(|| unsafe { openblas_set_num_threads(1) });
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

/// Dense square complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Zero matrix of dimension `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// Build from an entry function `(row, col) -> value`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for col in 0..n {
            for row in 0..n {
                m.data[col * n + row] = f(row, col);
            }
        }
        m
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[col * self.n + row]
    }

    /// Set entry `(row, col)`.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[col * self.n + row] = value;
    }

    /// Add to entry `(row, col)`.
    #[inline]
    pub fn add_assign(&mut self, row: usize, col: usize, value: C64) {
        self.data[col * self.n + row] += value;
    }

    /// Raw column-major storage.
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Mutable raw column-major storage.
    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    /// Frobenius norm `(Σ|a_ij|²)^{1/2}`.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from symmetry `max |M − Mᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for col in 0..self.n {
            for row in 0..col {
                worst = worst.max((self.get(row, col) - self.get(col, row)).norm());
            }
        }
        worst
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(C64::conj).collect(),
        }
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `self · other` via BLAS-grade multiply.
    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        // num_complex::Complex64 is repr(C) { re: f64, im: f64 }, layout
        // compatible with the [f64; 2] that matrixmultiply works on.
        unsafe {
            matrixmultiply::zgemm(
                matrixmultiply::CGemmOption::Standard,
                matrixmultiply::CGemmOption::Standard,
                n,
                n,
                n,
                [1.0, 0.0],
                self.data.as_ptr() as *const [f64; 2],
                1,
                n as isize,
                other.data.as_ptr() as *const [f64; 2],
                1,
                n as isize,
                [0.0, 0.0],
                out.data.as_mut_ptr() as *mut [f64; 2],
                1,
                n as isize,
            );
        }
        out
    }
}

/// Right-eigenpair decomposition of a general complex matrix.
#[derive(Debug)]
pub struct EigenDecomposition {
    /// Eigenvalues in LAPACK's return order.
    pub values: Vec<C64>,
    /// Right eigenvectors, column `j` belonging to `values[j]`, unit 2-norm.
    pub vectors: CMatrix,
}

/// All eigenvalues and right eigenvectors of a dense complex matrix.
pub fn eig(matrix: &CMatrix) -> Result<EigenDecomposition, LinalgError> {
    if !matrix.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = matrix.n;
    let nn = n as i32;
    let mut a = matrix.data.clone();
    let mut values = vec![C64::new(0.0, 0.0); n];
    let mut vectors = CMatrix::zeros(n);
    let mut rwork = vec![0.0f64; (2 * n).max(1)];
    let mut info = 0i32;

    let _gate = lapack_gate();
    // Workspace query, then the real call.
    let mut wkopt = C64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"V".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            values.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vectors.data.as_mut_ptr(),
            &nn,
            &mut wkopt,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgeev", info)?;
    let lwork = wkopt.re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"V".as_ptr(),
            &nn,
            a.as_mut_ptr(),
            &nn,
            values.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vectors.data.as_mut_ptr(),
            &nn,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgeev", info)?;
    Ok(EigenDecomposition { values, vectors })
}

/// Singular values of a dense complex matrix, descending.
pub fn singular_values(matrix: &CMatrix) -> Result<Vec<f64>, LinalgError> {
    if !matrix.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = matrix.n;
    let nn = n as i32;
    let mut a = matrix.data.clone();
    let mut s = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; (5 * n).max(1)];
    let mut info = 0i32;

    let _gate = lapack_gate();
    let mut wkopt = C64::new(0.0, 0.0);
    let query = -1i32;
    unsafe {
        zgesvd_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            &nn,
            a.as_mut_ptr(),
            &nn,
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            &mut wkopt,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgesvd", info)?;
    let lwork = wkopt.re as i32;
    let mut work = vec![C64::new(0.0, 0.0); lwork.max(1) as usize];
    unsafe {
        zgesvd_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &nn,
            &nn,
            a.as_mut_ptr(),
            &nn,
            s.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &1,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check("zgesvd", info)?;
    Ok(s)
}

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the
/// given diagonal and off-diagonal; used for Golub–Welsch quadrature nodes.
pub fn sym_tridiag_eigenvalues(
    diagonal: &[f64],
    off_diagonal: &[f64],
) -> Result<Vec<f64>, LinalgError> {
    let n = diagonal.len();
    assert_eq!(off_diagonal.len() + 1, n, "off-diagonal length must be n-1");
    let nn = n as i32;
    let mut d = diagonal.to_vec();
    let mut e = off_diagonal.to_vec();
    e.push(0.0); // LAPACK allows length n-1; keep a slot for safety
    let mut info = 0i32;

    let _gate = lapack_gate();
    unsafe {
        dstev_(
            b"N".as_ptr(),
            &nn,
            d.as_mut_ptr(),
            e.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            std::ptr::null_mut(),
            &mut info,
        );
    }
    check("dstev", info)?;
    Ok(d)
}

fn check(routine: &'static str, info: i32) -> Result<(), LinalgError> {
    if info == 0 {
        Ok(())
    } else if info < 0 {
        Err(LinalgError::BadArgument {
            routine,
            arg: -info,
            info,
        })
    } else {
        Err(LinalgError::NoConvergence { routine, info })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eig_of_diagonal() {
        let mut m = CMatrix::zeros(3);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 1, c(0.0, 2.0));
        m.set(2, 2, c(-3.0, 0.0));
        let dec = eig(&m).unwrap();
        let mut got = dec.values.clone();
        got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((got[0] - c(-3.0, 0.0)).norm() < 1e-14);
        assert!((got[1] - c(0.0, 2.0)).norm() < 1e-14);
        assert!((got[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_finite() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, c(f64::NAN, 0.0));
        assert_eq!(eig(&m).unwrap_err(), LinalgError::NonFinite);
    }

    #[test]
    fn eigenvectors_satisfy_definition() {
        let m = CMatrix::from_fn(4, |r, k| c((r * 7 % 5) as f64 - 1.0, (k * 3 % 4) as f64 * 0.5));
        let dec = eig(&m).unwrap();
        let av = m.matmul(&dec.vectors);
        for j in 0..4 {
            let mut resid = 0.0f64;
            for i in 0..4 {
                resid += (av.get(i, j) - dec.values[j] * dec.vectors.get(i, j)).norm_sqr();
            }
            assert!(resid.sqrt() < 1e-12, "residual {resid} for pair {j}");
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 1, c(2.0, 0.0));
        let s = singular_values(&m).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!((s[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_eigenvalues_match_gauss_hermite_nodes() {
        // Jacobi matrix of the Hermite weight: diag 0, off-diag sqrt(k/2).
        let n = 8;
        let diag = vec![0.0; n];
        let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let nodes = sym_tridiag_eigenvalues(&diag, &off).unwrap();
        // Reference positive nodes of 8-point Gauss–Hermite quadrature.
        let expected = [0.3811869902073222, 1.157193712446781, 1.9816567566958436, 2.930637420257243];
        for (a, b) in nodes[4..].iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn matmul_against_hand_product() {
        let a = CMatrix::from_fn(2, |r, k| c((r + 1) as f64, k as f64));
        let b = CMatrix::from_fn(2, |r, k| c((k + 1) as f64, -(r as f64)));
        let ab = a.matmul(&b);
        for row in 0..2 {
            for col in 0..2 {
                let mut want = c(0.0, 0.0);
                for t in 0..2 {
                    want += a.get(row, t) * b.get(t, col);
                }
                assert!((ab.get(row, col) - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn asymmetry_detects_transpose_defect() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        assert!((m.asymmetry() - 1.0).abs() < 1e-15);
    }
}
