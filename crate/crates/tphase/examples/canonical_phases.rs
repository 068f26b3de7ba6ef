//! Canonical T-phases of a sectorial tensor.
//!
//! Builds a tensor with known phases planted in its Fourier slices, recovers
//! them, and reports the sector classification, T-phase rank, and a few
//! gauge values of the phase vector.
//!
//! Run with `cargo run --example canonical_phases`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tphase::phase::{classify_phases, gauge_eval, GaugeSpec};
use tphase::sampling::random_unitary;
use tphase::tensor::FourierSlices;
use tphase::{canonical_phase_factorization, canonical_phases, tprank};

fn main() {
    // Plant phases slice by slice: Fourier slice k becomes
    // T_k^H diag(exp(i phi)) T_k for a well-conditioned T_k, so the canonical
    // phases of the tensor are exactly the planted angles.
    let planted = [vec![0.9, 0.3], vec![0.55, -0.2], vec![0.1, 0.02]];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let blocks: Vec<DMatrix<Complex64>> = planted
        .iter()
        .map(|phis| {
            let n = phis.len();
            let q = random_unitary(n, &mut rng);
            let d = DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::from_polar(1.0, phis[i])
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            // Congruence by 2*I keeps the phases and scales the tensor.
            q.adjoint() * d * q * Complex64::new(2.0, 0.0)
        })
        .collect();
    let a = FourierSlices::from_blocks(blocks).unwrap().to_tensor();

    let phases = canonical_phases(&a).unwrap();
    println!("canonical phases (sorted, radians):");
    for v in &phases.values {
        println!("  {v:+.12}");
    }

    let class = classify_phases(&phases);
    println!(
        "sector: [{:.4}, {:.4}], quasi-sectorial: {}, accretive: {}",
        class.alpha, class.beta, class.quasi_sectorial, class.accretive
    );
    println!("t-phase rank: {}", tprank(&a).unwrap());

    // Gauges measure the size of the phase vector.
    for spec in ["kyfan:2", "lp:1", "lp:2", "linf"] {
        let psi = GaugeSpec::parse(spec).unwrap();
        println!("  {spec:<8} -> {:.9}", gauge_eval(&psi, &phases.values));
    }

    // The slice-wise factorizations T^H diag(exp(i phi)) T rebuild the
    // Fourier blocks, hence the tensor.
    let f = canonical_phase_factorization(&a).unwrap();
    let rebuilt = FourierSlices::from_blocks(f.factors.iter().map(|s| s.reconstruct()).collect())
        .unwrap()
        .to_tensor();
    let resid = rebuilt.sub(&a).unwrap().frobenius_norm();
    println!("factorization residual ||rebuilt - A||_F = {resid:.3e}");
}
