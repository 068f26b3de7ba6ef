//! Frequency-domain stability certificates for tensor feedback loops.
//!
//! Sweeps a 2x2x2 rational plant over a log-spaced grid, prints its gain and
//! phase envelopes, and certifies the feedback interconnection with a small
//! static controller twice: by the small-gain theorem (norms multiply below
//! one) and by the small-phase theorem (phase envelopes sum inside the open
//! interval (-pi, pi)).
//!
//! Run with `cargo run --example lti_certificates`.

use tphase::lti::{
    feedback_stable, hinf_norm, phase_envelope, small_gain_certificate, small_phase_certificate,
    RatFn, RationalSliceTf, TransferTensor, Verdict,
};

/// Symmetric 2x2x2 plant; every entry is biproper over s^2 + 2s + 2, so the
/// system stays sectorial out to omega = infinity.
fn plant() -> TransferTensor {
    let den = [1.0, 2.0, 2.0];
    let e = |num: [f64; 3]| RatFn::new(&num, &den).unwrap();
    RationalSliceTf::new(vec![
        vec![
            vec![e([2.0, 3.0, 4.0]), e([0.5, 1.0, 1.0])],
            vec![e([0.5, 1.0, 1.0]), e([1.5, 2.0, 3.0])],
        ],
        vec![
            vec![e([0.8, 1.0, 1.0]), e([0.2, 0.5, 0.2])],
            vec![e([0.2, 0.5, 0.2]), e([0.9, 1.2, 1.0])],
        ],
    ])
    .unwrap()
    .into()
}

/// Static positive controller k * I (identity only in the first slice).
fn controller(k: f64) -> TransferTensor {
    let entry = |i: usize, j: usize, slice: usize| {
        if i == j && slice == 0 {
            RatFn::constant(k)
        } else {
            RatFn::zero()
        }
    };
    RationalSliceTf::new(
        (0..2)
            .map(|s| {
                (0..2)
                    .map(|i| (0..2).map(|j| entry(i, j, s)).collect())
                    .collect()
            })
            .collect(),
    )
    .unwrap()
    .into()
}

fn verdict(v: &Verdict) -> &'static str {
    match v {
        Verdict::Certified => "certified",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn main() {
    let g = plant();
    let h = controller(0.12);
    let grid: Vec<f64> = tphase::lti::FrequencyGrid::new(1e-2, 1e2, 60)
        .unwrap()
        .points();

    // Gain and phase envelopes of the plant.
    let env = phase_envelope(&g, &grid).unwrap();
    println!("plant sweep ({} rows, all sectorial: {}):", env.len(), env.all_sectorial());
    println!("  peak gain (refined): {:.6}", hinf_norm(&g, &grid).unwrap());
    println!(
        "  phase envelope: [{:.4}, {:.4}] rad, spread {:.4} rad",
        env.phi_inf().unwrap(),
        env.phi_sup().unwrap(),
        env.spread().unwrap()
    );

    // Closed-loop check by direct pole placement of the Gang of Four.
    let fb = feedback_stable(&g, &h).unwrap();
    println!(
        "\nfeedback loop: stable = {} (spectral abscissa {:.4})",
        fb.stable, fb.spectral_abscissa
    );

    // Small gain: ||G|| * ||H|| < 1 on every sampled frequency.
    let sg = small_gain_certificate(&g, &h, &grid).unwrap();
    println!(
        "small-gain:  {} (margin {:.4} at omega = {:.4})",
        verdict(&sg.verdict),
        sg.margin,
        sg.worst_omega
    );

    // Small phase: the summed envelopes stay inside (-pi, pi).
    let sp = small_phase_certificate(&g, &h, &grid).unwrap();
    println!(
        "small-phase: {} (margin {:.4} rad at omega = {:.4})",
        verdict(&sp.verdict),
        sp.margin,
        sp.worst_omega
    );

    // A controller with too much gain defeats the small-gain test while the
    // loop itself is still stable: the certificate is sufficient, not
    // necessary.
    let strong = controller(1.4);
    let sg2 = small_gain_certificate(&g, &strong, &grid).unwrap();
    let fb2 = feedback_stable(&g, &strong).unwrap();
    println!(
        "\nwith k = 1.4: small-gain {} yet loop stable = {}",
        verdict(&sg2.verdict),
        fb2.stable
    );
}
