//! The phase-majorization theorem for T-geometric means.
//!
//! For accretive tensors A and B the phases of A # B are majorized by the
//! arithmetic mean of the phases of A and B.  This implies, for every
//! symmetric gauge, that the mean's phase vector is no larger than the
//! averaged one, and the bound is tight: a maximal pair attains it exactly.
//!
//! Run with `cargo run --example phase_majorization`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tphase::sampling::{accretive_pair, aligned_accretive_pair};
use tphase::{check_phase_majorization, maximal_element_witness, probe_phase_lidskii};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (a, b) = accretive_pair(3, 2, &mut rng);

    let report = check_phase_majorization(&a, &b).unwrap();
    println!("phi(A):       {:?}", report.phases_a.values);
    println!("phi(B):       {:?}", report.phases_b.values);
    println!("phi(A#B):     {:?}", report.phases_mean.values);
    println!(
        "majorized by the average: {} (max prefix violation {:.3e}, sum gap {:.3e})",
        report.theorem.holds, report.theorem.max_violation, report.theorem.sum_gap
    );
    println!("\ngauge corollaries psi(phi(A#B)) <= psi((phi(A)+phi(B))/2):");
    for g in &report.gauge_corollary {
        println!(
            "  {:<8} {:.9} <= {:.9}  {}",
            g.psi.to_string(),
            g.lhs,
            g.rhs,
            if g.holds { "ok" } else { "VIOLATED" }
        );
    }
    println!(
        "square-root corollary 2*phi(A^(1/2)) -< phi(A): {}",
        report.sqrt_corollary.holds
    );

    // Tightness: when A and B share an aligning congruence the mean's phases
    // equal the averaged phases entrywise.
    let (a2, b2) = aligned_accretive_pair(3, 2, &mut rng);
    let w = maximal_element_witness(&a2, &b2).unwrap();
    println!(
        "\naligned pair attains the bound: {} (max |phi(X) - avg| = {:.3e})",
        w.attained, w.max_abs_err
    );

    // The sharper Lidskii-type inequality 2 phi(A#B) - phi(A) -< phi(B) is
    // open; the probe samples random pairs and records the worst violation.
    let probe = probe_phase_lidskii(500, 12, 3, 3);
    println!(
        "\nLidskii-type probe: {} trials, max violation {:.3e}, sum gap {:.3e}",
        probe.trials, probe.max_violation, probe.max_sum_gap
    );
    if probe.max_violation > probe.tol {
        println!("  (prefix violations exist, so the naive refinement fails)");
    }
}
