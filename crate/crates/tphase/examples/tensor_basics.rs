//! Tour of the tensor type: T-product, unfolding, transpose, inverse,
//! eigenvalues, and the sectoriality margin.
//!
//! Run with `cargo run --example tensor_basics`.

use num_complex::Complex64;
use tphase::{conj_transpose, sectoriality_margin, t_eigenvalues, t_inverse, tprod, Tensor3};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    // A 2x2x3 tensor entered slice by slice; entries[k][i][j] fills frontal
    // slice k.
    let entries = [
        [[c(2.0, 0.0), c(0.3, 0.1)], [c(0.1, -0.1), c(1.5, 0.0)]],
        [[c(0.4, 0.0), c(0.0, 0.2)], [c(0.1, 0.0), c(0.3, 0.0)]],
        [[c(0.2, 0.1), c(0.0, 0.0)], [c(0.0, -0.1), c(0.1, 0.0)]],
    ];
    let a = Tensor3::from_fn(2, 2, 3, |i, j, k| entries[k][i][j]);
    let (m, n, p) = a.shape();
    println!("A is {m}x{n}x{p}, ||A||_F = {:.6}", a.frobenius_norm());

    // The T-product A*A runs through the FFT; the block-circulant unfolding
    // gives the same answer densely.
    let sq = tprod(&a, &a).unwrap();
    let dense = a.bcirc() * a.bcirc();
    let err = (sq.bcirc() - &dense).norm();
    println!("||bcirc(A*A) - bcirc(A)^2|| = {err:.3e}");

    // The conjugate transpose matches the adjoint of the unfolding.
    let at = conj_transpose(&a);
    println!(
        "||bcirc(A^H) - bcirc(A)^H|| = {:.3e}",
        (at.bcirc() - a.bcirc().adjoint()).norm()
    );

    // T-inverse: A * A^{-1} is the identity tensor.
    let inv = t_inverse(&a).unwrap();
    let id = Tensor3::identity(2, 3);
    let resid = tprod(&a, &inv).unwrap().sub(&id).unwrap().frobenius_norm();
    println!("||A * A^-1 - I||_F = {resid:.3e}");

    // T-eigenvalues pool the eigenvalues of the Fourier slices.
    let eigs = t_eigenvalues(&a).unwrap();
    println!("t-eigenvalues:");
    for z in &eigs {
        println!("  {:+.6} {:+.6}i", z.re, z.im);
    }

    // Sectoriality: how far the numerical range of every Fourier slice stays
    // from the origin after the best common rotation.
    let margin = sectoriality_margin(&a).unwrap();
    println!(
        "sectorial: {} (gamma = {:.6}, margin = {:.3e}, scale = {:.3})",
        margin.is_sectorial(),
        margin.gamma,
        margin.margin,
        margin.scale
    );
}
