fn main() {
    // Eigenvalue, SVD, and tridiagonal kernels come from the system LAPACK;
    // OpenBLAS bundles them together with an optimized BLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
    println!("cargo:rerun-if-changed=build.rs");
}
