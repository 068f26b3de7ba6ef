//! Optimal low T-phase-rank approximation by half-phase truncation.
//!
//! For a tensor whose canonical phases lie in [0, pi), the best T-phase-rank-r
//! approximation in any phase gauge keeps the r largest phases and is realized
//! by a congruence factor E carrying half of each kept phase.  The optimal
//! value is the gauge applied to the residual phases — no search needed.
//!
//! Run with `cargo run --example half_phase_truncation`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tphase::phase::{gauge_eval, GaugeSpec};
use tphase::sampling::sectorial_with_phases;
use tphase::{canonical_phases, half_phase_truncate, optimal_tprank_value, tprank, tprod};

fn main() {
    // Plant a known nonnegative phase profile (2 x 2 x 3 tensor, six phases).
    let planted = vec![vec![1.35, 0.6], vec![0.9, 0.15], vec![0.45, 0.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = sectorial_with_phases(2, &planted, &mut rng);

    let phases = canonical_phases(&a).unwrap();
    println!("phases of A: {:?}", phases.values);
    println!("tprank(A) = {}", tprank(&a).unwrap());

    let r = 3;
    let t = half_phase_truncate(&a, r).unwrap();
    println!("\nkeep r = {r}:");
    println!("  kept phases     {:?}", t.kept_phases);
    println!("  residual phases {:?}", t.residual_phases);

    // E has T-phase rank r, and its nonzero phases are half the kept ones.
    println!("  tprank(E) = {}", tprank(&t.e).unwrap());
    let pe = canonical_phases(&t.e).unwrap();
    println!("  phases of E     {:?}", &pe.values[..r]);

    // W = E^{-1} * A * E^{-1} carries exactly the residual phases, so the
    // optimal value for any gauge is just the gauge of the residual list.
    let pw = canonical_phases(&t.w).unwrap();
    println!("  phases of W     {:?}", pw.values);

    for spec in ["kyfan:1", "kyfan:3", "lp:1", "lp:2", "linf"] {
        let psi = GaugeSpec::parse(spec).unwrap();
        let optimal = optimal_tprank_value(&a, r, &psi).unwrap();
        let direct = gauge_eval(&psi, &pw.values);
        println!(
            "  gauge {spec:<8} optimal value {optimal:.9} (phases of W give {direct:.9})"
        );
    }

    // Sanity: E * W * E reproduces A.
    let back = tprod(&t.e, &tprod(&t.w, &t.e).unwrap()).unwrap();
    println!(
        "\nreconstruction ||E*W*E - A||_F = {:.3e}",
        back.sub(&a).unwrap().frobenius_norm()
    );
}
