//! T-geometric mean of two accretive tensors.
//!
//! The mean A # B is the unique accretive solution of the Riccati equation
//! X * A^{-1} * X = B, computed slice-wise through principal square roots.
//! It is symmetric, congruence-invariant, and commutes with the
//! block-circulant unfolding.
//!
//! Run with `cargo run --example geometric_mean`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tphase::kernels::matrix_geomean;
use tphase::sampling::{accretive_pair, random_tensor};
use tphase::{conj_transpose, riccati_residual, t_geomean, t_inverse, t_power, tprod, Tensor3};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (a, b) = accretive_pair(3, 2, &mut rng);

    let x = t_geomean(&a, &b).unwrap();
    println!("Riccati residual ||X*A^-1*X - B||_F / ||B||_F = {:.3e}", {
        riccati_residual(&x, &a, &b).unwrap()
    });

    // Symmetry: A # B = B # A.
    let yx = t_geomean(&b, &a).unwrap();
    println!(
        "symmetry ||A#B - B#A||_F = {:.3e}",
        x.sub(&yx).unwrap().frobenius_norm()
    );

    // Congruence invariance: (C^H*A*C) # (C^H*B*C) = C^H * (A#B) * C for any
    // invertible C.
    let c = {
        let mut t = random_tensor(3, 3, 2, &mut rng);
        for i in 0..3 {
            let v = t.get(i, i, 0);
            t.set(i, i, 0, v + num_complex::Complex64::new(3.0, 0.0));
        }
        t
    };
    let ch = conj_transpose(&c);
    let cong = |m: &Tensor3| tprod(&ch, &tprod(m, &c).unwrap()).unwrap();
    let lhs = t_geomean(&cong(&a), &cong(&b)).unwrap();
    let rhs = cong(&x);
    println!(
        "congruence ||(C^H A C)#(C^H B C) - C^H (A#B) C||_F = {:.3e}",
        lhs.sub(&rhs).unwrap().frobenius_norm()
    );

    // The mean commutes with the unfolding: bcirc(A # B) is the matrix
    // geometric mean of the unfoldings.
    let dense = matrix_geomean(&a.bcirc(), &b.bcirc()).unwrap();
    println!(
        "unfolding commutation ||bcirc(A#B) - bcirc(A)#bcirc(B)|| = {:.3e}",
        (x.bcirc() - dense).norm()
    );

    // Two identities: A # I = A^{1/2} and A # A^{-1} = I.
    let id = Tensor3::identity(3, 2);
    let sqrt_a = t_power(&a, 0.5).unwrap();
    println!(
        "A # I vs A^(1/2): {:.3e}",
        t_geomean(&a, &id)
            .unwrap()
            .sub(&sqrt_a)
            .unwrap()
            .frobenius_norm()
    );
    let inv_a = t_inverse(&a).unwrap();
    println!(
        "A # A^-1 vs I:    {:.3e}",
        t_geomean(&a, &inv_a)
            .unwrap()
            .sub(&id)
            .unwrap()
            .frobenius_norm()
    );
}
