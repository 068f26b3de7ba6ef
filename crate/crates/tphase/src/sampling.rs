//! Seeded random generators for tensors and systems.
//!
//! Used by the test suites, the randomized verification subcommands, and the
//! conjecture probe.  Everything is driven by a caller-supplied RNG so runs
//! are bit-reproducible for a fixed seed.

use num_complex::Complex64;
use rand::Rng;

use crate::kernels::CMat;
use crate::lti::StateSpaceTensor;
use crate::tensor::{FourierSlices, Tensor3};

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Dense complex matrix with entries uniform on the unit square.
pub fn random_cmat<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Random unitary matrix (Q factor of a random complex matrix, with the
/// phases of the R diagonal absorbed so the distribution is not skewed).
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let m = random_cmat(n, n, rng);
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random invertible "frame" with singular values in `[0.6, 1.8]`, so
/// congruences built from it stay well conditioned.
pub fn random_frame<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::new(rng.gen_range(0.6..1.8), 0.0);
    }
    u * d * v.adjoint()
}

/// Dense complex tensor with entries uniform on the unit square.
pub fn random_tensor<R: Rng>(m: usize, n: usize, p: usize, rng: &mut R) -> Tensor3 {
    Tensor3::from_fn(m, n, p, |_, _, _| random_complex(rng))
}

/// Real tensor with entries uniform in `[-1, 1]`.
pub fn random_real_tensor<R: Rng>(m: usize, n: usize, p: usize, rng: &mut R) -> Tensor3 {
    Tensor3::from_fn(m, n, p, |_, _, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
    })
}

/// Sectorial tensor with the given canonical phases per Fourier slice,
/// realized through independent random congruence frames.
pub fn sectorial_with_phases<R: Rng>(
    n: usize,
    phase_sets: &[Vec<f64>],
    rng: &mut R,
) -> Tensor3 {
    let mut blocks = Vec::with_capacity(phase_sets.len());
    for phis in phase_sets {
        assert_eq!(phis.len(), n, "need one phase per slot");
        let t = random_frame(n, rng);
        let mut d = CMat::zeros(n, n);
        for (k, &ph) in phis.iter().enumerate() {
            d[(k, k)] = Complex64::from_polar(1.0, ph);
        }
        blocks.push(t.adjoint() * d * &t);
    }
    FourierSlices::from_blocks(blocks).unwrap().to_tensor()
}

/// Random sectorial tensor with canonical phases drawn uniformly from
/// `[lo, hi]` (requires `hi - lo < pi`).  Returns the tensor and the exact
/// phases that were planted, grouped by Fourier slice.
pub fn random_sectorial<R: Rng>(
    n: usize,
    p: usize,
    lo: f64,
    hi: f64,
    rng: &mut R,
) -> (Tensor3, Vec<Vec<f64>>) {
    assert!(hi - lo < std::f64::consts::PI, "phase window must stay below a half turn");
    let mut phase_sets = Vec::with_capacity(p);
    for _ in 0..p {
        let mut phis: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
        phis.sort_by(|a, b| b.partial_cmp(a).unwrap());
        phase_sets.push(phis);
    }
    let t = sectorial_with_phases(n, &phase_sets, rng);
    (t, phase_sets)
}

/// Pair of independent accretive tensors (phases well inside a quarter
/// turn), suitable for geometric means.
pub fn accretive_pair<R: Rng>(n: usize, p: usize, rng: &mut R) -> (Tensor3, Tensor3) {
    let (a, _) = random_sectorial(n, p, -1.3, 1.3, rng);
    let (b, _) = random_sectorial(n, p, -1.3, 1.3, rng);
    (a, b)
}

/// Accretive pair whose phase slots are rank-aligned: the position holding
/// the `g`-th largest phase of `A` also holds the `g`-th largest phase of
/// `B`.  The frames remain independent.
pub fn aligned_accretive_pair<R: Rng>(n: usize, p: usize, rng: &mut R) -> (Tensor3, Tensor3) {
    let count = n * p;
    let draw = |rng: &mut R| -> Vec<Vec<f64>> {
        let mut vals: Vec<f64> = (0..count).map(|_| rng.gen_range(-1.3..1.3)).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // Assign in slice-major order so both tensors rank their slots
        // identically.
        (0..p).map(|k| vals[k * n..(k + 1) * n].to_vec()).collect()
    };
    let pa = draw(rng);
    let pb = draw(rng);
    let a = sectorial_with_phases(n, &pa, rng);
    let b = sectorial_with_phases(n, &pb, rng);
    (a, b)
}

/// Random T-Hermitian tensor (independent Hermitian Fourier blocks).
pub fn random_t_hermitian<R: Rng>(n: usize, p: usize, rng: &mut R) -> Tensor3 {
    let mut blocks = Vec::with_capacity(p);
    for _ in 0..p {
        let m = random_cmat(n, n, rng);
        blocks.push((&m + m.adjoint()).scale(0.5));
    }
    FourierSlices::from_blocks(blocks).unwrap().to_tensor()
}

/// Random T-Hermitian positive-definite tensor.
pub fn random_t_hpd<R: Rng>(n: usize, p: usize, rng: &mut R) -> Tensor3 {
    let mut blocks = Vec::with_capacity(p);
    for _ in 0..p {
        let t = random_frame(n, rng);
        blocks.push(t.adjoint() * &t);
    }
    FourierSlices::from_blocks(blocks).unwrap().to_tensor()
}

/// Random Hurwitz-stable real state-space tensor with `m` inputs/outputs,
/// `m` states and `p` frontal slices.  The state tensor is shifted by a
/// multiple of the identity so every Fourier slice is comfortably stable.
pub fn random_stable_ss<R: Rng>(m: usize, p: usize, rng: &mut R) -> StateSpaceTensor {
    let a_raw = random_real_tensor(m, m, p, rng);
    let b = random_real_tensor(m, m, p, rng);
    let c = random_real_tensor(m, m, p, rng);
    let d = random_real_tensor(m, m, p, rng);
    // Worst spectral abscissa over Fourier slices.
    let mut abscissa = f64::NEG_INFINITY;
    for s in &a_raw.fourier_slices().slices {
        for ev in crate::kernels::complex_eigenvalues(s).expect("Schur on random slice") {
            abscissa = abscissa.max(ev.re);
        }
    }
    let shift = abscissa + rng.gen_range(0.4..1.2);
    let a = a_raw
        .sub(&Tensor3::identity(m, p).scale(Complex64::new(shift, 0.0)))
        .unwrap();
    StateSpaceTensor::new(a, b, c, d).expect("construction from real tensors")
}

/// Strictly proper stable system (`D = 0`).
pub fn random_strictly_proper_ss<R: Rng>(m: usize, p: usize, rng: &mut R) -> StateSpaceTensor {
    let sys = random_stable_ss(m, p, rng);
    StateSpaceTensor::new(
        sys.a.clone(),
        sys.b.clone(),
        sys.c.clone(),
        Tensor3::zeros(m, m, p),
    )
    .expect("zeroing the feedthrough keeps the system valid")
}

fn rescale_output(sys: &StateSpaceTensor, factor: f64) -> StateSpaceTensor {
    let s = Complex64::new(factor, 0.0);
    StateSpaceTensor::new(
        sys.a.clone(),
        sys.b.clone(),
        sys.c.scale(s),
        sys.d.scale(s),
    )
    .expect("scaling the output map keeps the system valid")
}

/// Stable pair whose peak-gain product is a random value in `[0.2, 0.85]`,
/// so the loop satisfies the gain-product condition by construction.
pub fn small_gain_pair<R: Rng>(
    m: usize,
    p: usize,
    grid: &[f64],
    rng: &mut R,
) -> (StateSpaceTensor, StateSpaceTensor) {
    let g_raw = random_stable_ss(m, p, rng);
    let h_raw = random_stable_ss(m, p, rng);
    let ng = crate::lti::hinf_norm(&g_raw.clone().into(), grid)
        .expect("stable by construction");
    let nh = crate::lti::hinf_norm(&h_raw.clone().into(), grid)
        .expect("stable by construction");
    let product = rng.gen_range(0.2..0.85);
    let share = (product / (ng * nh)).sqrt();
    (
        rescale_output(&g_raw, share),
        rescale_output(&h_raw, share),
    )
}

/// Stable pair whose phase envelopes stay well inside `(-pi/2, pi/2)`: each
/// system is a strictly proper stable core plus a dominant direct feedthrough
/// `d I`, which keeps the Hermitian part of every response positive definite
/// and bounds the phases by `arcsin(peak gain / d)`.
pub fn small_phase_pair<R: Rng>(
    m: usize,
    p: usize,
    grid: &[f64],
    rng: &mut R,
) -> (StateSpaceTensor, StateSpaceTensor) {
    let make = |rng: &mut R| {
        let core = random_strictly_proper_ss(m, p, rng);
        let peak = crate::lti::hinf_norm(&core.clone().into(), grid)
            .expect("stable by construction");
        // Phases bounded by arcsin(0.55) ~ 33 degrees per system.
        let d_gain = peak / 0.55 * rng.gen_range(1.0..1.6);
        let d = Tensor3::identity(m, p).scale(Complex64::new(d_gain, 0.0));
        StateSpaceTensor::new(core.a.clone(), core.b.clone(), core.c.clone(), d)
            .expect("adding a real feedthrough keeps the system valid")
    };
    (make(rng), make(rng))
}
