//! T-SVD, rank truncation, and low T-phase-rank approximation.
//!
//! Two truncation notions live here.  `truncate_rank` keeps the globally
//! largest T-singular values (the Schmidt--Mirsky optimal rank truncation),
//! while `half_phase_truncate` factors a sectorial tensor as `A = E * W * E`
//! where `E` carries half of the `r` largest canonical phases and `W` keeps
//! the residual phases -- the low T-phase-rank approximation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{self, CMat};
use crate::phase::{
    GaugeSpec, MajorizationMode, MajorizationReport, canonical_phase_factorization,
    canonical_phases, gauge_eval, majorizes,
};
use crate::tensor::{FourierSlices, Tensor3, t_eigenvalues, tprod};
use crate::tol;

// ---------------------------------------------------------------------------
// T-SVD
// ---------------------------------------------------------------------------

/// Full T-SVD `A = U * S * V^H` with unitary `U`, `V` and an f-diagonal `S`.
#[derive(Debug, Clone)]
pub struct TsvdFactors {
    pub u: Tensor3,
    pub v: Tensor3,
    /// Per-Fourier-slice singular values, each list sorted nonincreasing.
    pub sigma_slices: Vec<Vec<f64>>,
    /// All singular values sorted nonincreasing; ties broken by slice index,
    /// then in-slice position.
    pub sigma: Vec<f64>,
    /// `provenance[g] = (slice, slot)` locating `sigma[g]`.
    pub provenance: Vec<(usize, usize)>,
}

impl TsvdFactors {
    /// The f-diagonal factor as a tensor (Fourier slices are the
    /// rectangular diagonal matrices of singular values).
    pub fn s_tensor(&self) -> Tensor3 {
        let (m, _, _) = self.u.shape();
        let (n, _, p) = self.v.shape();
        let blocks: Vec<CMat> = (0..p)
            .map(|k| {
                CMat::from_fn(m, n, |i, j| {
                    if i == j && i < self.sigma_slices[k].len() {
                        Complex64::new(self.sigma_slices[k][i], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        FourierSlices::from_blocks(blocks).unwrap().to_tensor()
    }

    /// `U * S * V^H`.
    pub fn reconstruct(&self) -> Tensor3 {
        let s = self.s_tensor();
        tprod(&tprod(&self.u, &s).unwrap(), &crate::tensor::conj_transpose(&self.v)).unwrap()
    }
}

/// T-SVD via per-slice singular value decompositions in the Fourier domain.
pub fn t_svd(a: &Tensor3) -> TsvdFactors {
    let (m, n, p) = a.shape();
    let k = m.min(n);
    let fa = a.fourier_slices();
    let mut u_blocks = Vec::with_capacity(p);
    let mut v_blocks = Vec::with_capacity(p);
    let mut sigma_slices = Vec::with_capacity(p);
    for s in &fa.slices {
        let svd = nalgebra::linalg::SVD::new(s.clone(), true, true);
        let mut sv: Vec<(f64, usize)> =
            svd.singular_values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        // Defensive: order the thin factors by nonincreasing singular value
        // regardless of backend conventions.
        sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let u_thin = svd.u.expect("requested U");
        let vt_thin = svd.v_t.expect("requested V^T");
        let mut u_sorted = CMat::zeros(m, k);
        let mut v_sorted = CMat::zeros(n, k);
        let mut sig = Vec::with_capacity(k);
        for (slot, (val, old)) in sv.iter().enumerate() {
            sig.push(*val);
            for r in 0..m {
                u_sorted[(r, slot)] = u_thin[(r, *old)];
            }
            for r in 0..n {
                v_sorted[(r, slot)] = vt_thin[(*old, r)].conj();
            }
        }
        u_blocks.push(kernels::unitary_completion(&u_sorted));
        v_blocks.push(kernels::unitary_completion(&v_sorted));
        sigma_slices.push(sig);
    }
    let mut tagged: Vec<(f64, usize, usize)> = Vec::with_capacity(k * p);
    for (slice, sig) in sigma_slices.iter().enumerate() {
        for (slot, &v) in sig.iter().enumerate() {
            tagged.push((v, slice, slot));
        }
    }
    tagged.sort_by(|a, b| {
        b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    });
    TsvdFactors {
        u: FourierSlices::from_blocks(u_blocks).unwrap().to_tensor(),
        v: FourierSlices::from_blocks(v_blocks).unwrap().to_tensor(),
        sigma_slices,
        sigma: tagged.iter().map(|t| t.0).collect(),
        provenance: tagged.iter().map(|t| (t.1, t.2)).collect(),
    }
}

/// Rank truncation of the T-SVD.
#[derive(Debug, Clone)]
pub struct RankTruncation {
    /// Best approximation keeping the `r` globally largest singular values.
    pub approx: Tensor3,
    pub r: usize,
    /// Gauge of the residual singular values.  For the `lp:2` gauge this is
    /// reported as the entrywise Frobenius error of the tensor (the
    /// quantity the truncation minimizes), i.e. the residual l2 norm divided
    /// by `sqrt(p)`; all other gauges report the plain gauge of the residual
    /// spectrum, which coincides with the same gauge of the dense
    /// block-circulant residual.
    pub value: f64,
    pub psi: GaugeSpec,
    /// Residual singular values (the ones zeroed out), sorted nonincreasing.
    pub residual_sigma: Vec<f64>,
}

/// Keep the `r` globally largest T-singular values and zero the rest
/// (Schmidt--Mirsky optimal for the Frobenius and Ky Fan gauges).
pub fn truncate_rank(a: &Tensor3, r: usize, psi: &GaugeSpec) -> Result<RankTruncation> {
    let (m, n, p) = a.shape();
    let cap = p * m.min(n);
    if r > cap {
        return Err(Error::RankOutOfRange(format!(
            "rank {r} exceeds p * min(m, n) = {cap}"
        )));
    }
    let fac = t_svd(a);
    let mut keep = vec![vec![false; m.min(n)]; p];
    for g in 0..r {
        let (slice, slot) = fac.provenance[g];
        keep[slice][slot] = true;
    }
    let fu = fac.u.fourier_slices();
    let fv = fac.v.fourier_slices();
    let mut blocks = Vec::with_capacity(p);
    for (k, keep_k) in keep.iter().enumerate() {
        let mut s = CMat::zeros(m, n);
        for slot in 0..m.min(n) {
            if keep_k[slot] {
                s[(slot, slot)] = Complex64::new(fac.sigma_slices[k][slot], 0.0);
            }
        }
        blocks.push(&fu.slices[k] * s * fv.slices[k].adjoint());
    }
    let approx = FourierSlices::from_blocks(blocks)?.to_tensor();
    let residual_sigma: Vec<f64> = fac.sigma[r..].to_vec();
    let value = match psi {
        GaugeSpec::Lp(q) if *q == 2.0 => {
            gauge_eval(psi, &residual_sigma) / (p as f64).sqrt()
        }
        _ => gauge_eval(psi, &residual_sigma),
    };
    Ok(RankTruncation { approx, r, value, psi: psi.clone(), residual_sigma })
}

// ---------------------------------------------------------------------------
// Half-phase truncation
// ---------------------------------------------------------------------------

/// Result of the half-phase factorization `A = E * W * E`.
#[derive(Debug, Clone)]
pub struct HalfPhaseTruncation {
    /// Sectorial factor carrying half of each kept phase twice; its T-phase
    /// rank is the number of kept nonzero phases.
    pub e: Tensor3,
    /// Residual factor `E^{-1} * A * E^{-1}`, whose canonical phases are the
    /// phases of `A` beyond the first `r` (padded with zeros).
    pub w: Tensor3,
    pub r: usize,
    /// The `r` largest canonical phases of `A` (the ones moved into `E`).
    pub kept_phases: Vec<f64>,
    /// `provenance` entries of the kept phases.
    pub kept_provenance: Vec<(usize, usize)>,
    /// Remaining canonical phases of `A` (the expected phases of `W`).
    pub residual_phases: Vec<f64>,
}

/// Low T-phase-rank approximation by half-phase splitting.
///
/// Requires the canonical phases of `A` to lie in `[0, pi)`.  Per Fourier
/// slice, the factor `E` is `T_k^H L_k T_k` where `L_k` places
/// `e^{i phi_g / 2}` on the slots holding the `r` globally largest phases
/// and `1` elsewhere; then `W = E^{-1} * A * E^{-1}` carries exactly the
/// residual phases.
pub fn half_phase_truncate(a: &Tensor3, r: usize) -> Result<HalfPhaseTruncation> {
    if !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "half-phase truncation needs square frontal slices, got {:?}",
            a.shape()
        )));
    }
    let (n, _, p) = a.shape();
    let cap = n * p;
    if r > cap {
        return Err(Error::RankOutOfRange(format!(
            "rank {r} exceeds n * p = {cap}"
        )));
    }
    let fac = canonical_phase_factorization(a)?;
    let pv = &fac.phases;
    if pv.min() < -tol::BRANCH_GUARD || pv.max() >= std::f64::consts::PI - tol::BRANCH_GUARD {
        return Err(Error::NotInSector(format!(
            "canonical phases [{:.6}, {:.6}] leave [0, pi)",
            pv.min(),
            pv.max()
        )));
    }

    // Half-phase multiplier per slice slot for the kept phases.
    let mut half = vec![vec![Complex64::new(1.0, 0.0); n]; p];
    for g in 0..r {
        let (slice, slot) = pv.provenance[g];
        half[slice][slot] = Complex64::from_polar(1.0, 0.5 * pv.values[g]);
    }
    let mut e_blocks = Vec::with_capacity(p);
    let mut w_blocks = Vec::with_capacity(p);
    for (k, half_k) in half.iter().enumerate() {
        let t = &fac.factors[k].t;
        let mut lam = CMat::zeros(n, n);
        for slot in 0..n {
            lam[(slot, slot)] = half_k[slot];
        }
        let e_k = t.adjoint() * lam * t;
        let e_inv = e_k.clone().try_inverse().ok_or_else(|| {
            Error::SingularTensor("half-phase factor is numerically singular".into())
        })?;
        w_blocks.push(&e_inv * &fac.blocks[k] * &e_inv);
        e_blocks.push(e_k);
    }
    Ok(HalfPhaseTruncation {
        e: FourierSlices::from_blocks(e_blocks)?.to_tensor(),
        w: FourierSlices::from_blocks(w_blocks)?.to_tensor(),
        r,
        kept_phases: pv.values[..r].to_vec(),
        kept_provenance: pv.provenance[..r].to_vec(),
        residual_phases: pv.values[r..].to_vec(),
    })
}

/// Optimal value of the low T-phase-rank problem: the smallest
/// `Psi(phi(W))` over factorizations `A = E * W * E` with `tprank(E) <= r`
/// equals the gauge of the residual phase vector
/// `(phi_{r+1}, ..., phi_{np}, 0, ..., 0)`.
pub fn optimal_tprank_value(a: &Tensor3, r: usize, psi: &GaugeSpec) -> Result<f64> {
    let (n, _, p) = a.shape();
    let cap = n * p;
    if r > cap {
        return Err(Error::RankOutOfRange(format!(
            "rank {r} exceeds n * p = {cap}"
        )));
    }
    let pv = canonical_phases(a)?;
    if pv.min() < -tol::BRANCH_GUARD || pv.max() >= std::f64::consts::PI - tol::BRANCH_GUARD {
        return Err(Error::NotInSector(format!(
            "canonical phases [{:.6}, {:.6}] leave [0, pi)",
            pv.min(),
            pv.max()
        )));
    }
    let mut residual = pv.values[r..].to_vec();
    residual.resize(pv.len(), 0.0);
    Ok(gauge_eval(psi, &residual))
}

// ---------------------------------------------------------------------------
// Rank bridges and sector arithmetic
// ---------------------------------------------------------------------------

/// Decomposition `A = R + M` with `M` T-Hermitian positive definite and the
/// matrix rank of `bcirc(R)` equal to the T-phase rank of `A`.
#[derive(Debug, Clone)]
pub struct PhaseRankBridge {
    /// `A - M`; its block-circulant matrix rank equals the T-phase rank.
    pub r: Tensor3,
    /// The T-Hermitian positive-definite part `T^H * T` per slice.
    pub m: Tensor3,
    /// Numerical rank of `bcirc(R)` at the [`tol::RANK_SV_REL`] threshold.
    pub bcirc_rank: usize,
    pub tprank: usize,
    /// Smallest eigenvalue of the Hermitian part of `bcirc(M)` (equal to the
    /// smallest eigenvalue over Fourier slices).
    pub hermitian_part_min_eig: f64,
}

/// Split a sectorial tensor into a T-Hermitian positive-definite part plus a
/// perturbation whose block-circulant rank is the T-phase rank.
pub fn phase_rank_bridge(a: &Tensor3) -> Result<PhaseRankBridge> {
    let fac = canonical_phase_factorization(a)?;
    let p = a.depth();
    let mut m_blocks = Vec::with_capacity(p);
    for k in 0..p {
        let t = &fac.factors[k].t;
        m_blocks.push(t.adjoint() * t);
    }
    let m = FourierSlices::from_blocks(m_blocks)?.to_tensor();
    let r = a.sub(&m)?;
    let sv = r.bcirc().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let bcirc_rank = if smax == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > tol::RANK_SV_REL * smax).count()
    };
    let mut min_eig = f64::INFINITY;
    for s in &m.fourier_slices().slices {
        min_eig = min_eig.min(kernels::lambda_min_hermitian(s));
    }
    Ok(PhaseRankBridge {
        r,
        m,
        bcirc_rank,
        tprank: fac.phases.rank(),
        hermitian_part_min_eig: min_eig,
    })
}

/// Report of the closure checks for sector arithmetic on a pair of
/// sectorial tensors sharing the sector `[alpha, beta]`.
#[derive(Debug, Clone)]
pub struct SectorChecksReport {
    /// Common sector bounds of the input pair.
    pub alpha: f64,
    pub beta: f64,
    /// Phases of `A + B` stay inside `[alpha, beta]`.
    pub sum_in_sector: bool,
    pub sum_alpha: f64,
    pub sum_beta: f64,
    /// True when the product eigenvalue window test applied (the combined
    /// rotation window stays clear of the half-turn wrap).
    pub product_window_ok: bool,
    /// Weak majorization of the T-eigenvalue arguments of `A * B` by
    /// `phi(A) + phi(B)`; `None` when the window test did not apply.
    pub product_check: Option<MajorizationReport>,
}

/// Closure of sectorial classes under addition, and the eigenvalue-argument
/// bound for t-products.
pub fn sector_arithmetic_checks(a: &Tensor3, b: &Tensor3) -> Result<SectorChecksReport> {
    if a.shape() != b.shape() || !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "sector checks need square tensors of one shape, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let pa = canonical_phases(a)?;
    let pb = canonical_phases(b)?;
    let alpha = pa.min().min(pb.min());
    let beta = pa.max().max(pb.max());
    if beta - alpha >= std::f64::consts::PI - tol::BRANCH_GUARD {
        return Err(Error::NotSectorial(format!(
            "combined sector [{alpha:.6}, {beta:.6}] reaches a half turn"
        )));
    }
    let psum = canonical_phases(&a.add(b)?)?;
    let slack = tol::MAJORIZATION_TOL;
    let sum_in_sector = psum.min() >= alpha - slack && psum.max() <= beta + slack;

    // Product bound: arguments of the T-eigenvalues of A * B, measured
    // relative to the combined rotation gamma(A) + gamma(B), are weakly
    // majorized by phi(A) + phi(B).  Only meaningful when every eigenvalue
    // argument stays clear of the wrap point of the relative branch.
    let gamma = 0.5 * (pa.max() + pa.min()) + 0.5 * (pb.max() + pb.min());
    let prod = tprod(a, b)?;
    let eigs = t_eigenvalues(&prod)?;
    let mut rel_args = Vec::with_capacity(eigs.len());
    let mut window_ok = true;
    for ev in &eigs {
        if ev.norm() == 0.0 {
            window_ok = false;
            break;
        }
        let mut rel = ev.arg() - gamma;
        while rel > std::f64::consts::PI {
            rel -= 2.0 * std::f64::consts::PI;
        }
        while rel <= -std::f64::consts::PI {
            rel += 2.0 * std::f64::consts::PI;
        }
        if rel.abs() >= std::f64::consts::PI - 1e-9 {
            window_ok = false;
            break;
        }
        rel_args.push(rel + gamma);
    }
    let product_check = if window_ok {
        let summed: Vec<f64> =
            pa.values.iter().zip(pb.values.iter()).map(|(x, y)| x + y).collect();
        Some(majorizes(&summed, &rel_args, MajorizationMode::Weak, tol::MAJORIZATION_TOL))
    } else {
        None
    };
    Ok(SectorChecksReport {
        alpha,
        beta,
        sum_in_sector,
        sum_alpha: psum.min(),
        sum_beta: psum.max(),
        product_window_ok: window_ok,
        product_check,
    })
}

/// Convenience: canonical phases of `W` from a half-phase truncation match
/// the residual phases as multisets; exposed for reporting.
pub fn phase_multiset_distance(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let n = a.len().max(b.len());
    a.resize(n, 0.0);
    b.resize(n, 0.0);
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::tprank;
    use crate::sampling;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tsvd_reconstructs_and_matches_dense_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = sampling::random_tensor(3, 2, 3, &mut rng);
        let fac = t_svd(&a);
        let recon = fac.reconstruct();
        let err = recon.sub(&a).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(err < 1e-11, "reconstruction residual {err:.3e}");

        // U and V are T-unitary.
        let utu = tprod(&crate::tensor::conj_transpose(&fac.u), &fac.u).unwrap();
        let id = Tensor3::identity(3, 3);
        assert!(utu.sub(&id).unwrap().frobenius_norm() < 1e-11);

        // Dense oracle: singular values of bcirc(A) equal the pooled slice
        // singular values.
        let mut dense: Vec<f64> = a.bcirc().singular_values().iter().cloned().collect();
        dense.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert_eq!(dense.len(), fac.sigma.len());
        for (u, v) in fac.sigma.iter().zip(dense.iter()) {
            assert_abs_diff_eq!(u, v, epsilon = 1e-10);
        }

        // Frobenius bookkeeping: ||A||_F^2 = (1/p) sum sigma^2.
        let sum_sq: f64 = fac.sigma.iter().map(|s| s * s).sum();
        assert_abs_diff_eq!(
            a.frobenius_norm().powi(2),
            sum_sq / 3.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn rank_truncation_is_schmidt_mirsky_optimal_in_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let a = sampling::random_tensor(2, 3, 2, &mut rng);
        let fro = GaugeSpec::Lp(2.0);
        let full = 2 * 2;
        for r in 0..=full {
            let tr = truncate_rank(&a, r, &fro).unwrap();
            let err = a.sub(&tr.approx).unwrap().frobenius_norm();
            assert_abs_diff_eq!(err, tr.value, epsilon = 1e-10);
            // Dense oracle: optimal rank-r Frobenius error of the
            // block-circulant is the l2 tail of its singular values; our
            // tensor error is that value divided by sqrt(p).
            let mut dense: Vec<f64> = a.bcirc().singular_values().iter().cloned().collect();
            dense.sort_by(|x, y| y.partial_cmp(x).unwrap());
            let tail: f64 = dense[r..].iter().map(|s| s * s).sum::<f64>().sqrt();
            assert_abs_diff_eq!(err, tail / (2f64).sqrt(), epsilon = 1e-10);
        }
        // r = 0 reproduces the full norm; full rank reproduces the tensor.
        let t0 = truncate_rank(&a, 0, &fro).unwrap();
        assert_abs_diff_eq!(t0.value, a.frobenius_norm(), epsilon = 1e-12);
        let tf = truncate_rank(&a, full, &fro).unwrap();
        assert!(a.sub(&tf.approx).unwrap().frobenius_norm() < 1e-11);
        assert!(truncate_rank(&a, full + 1, &fro).is_err());
    }

    #[test]
    fn rank_truncation_kyfan_value_matches_dense_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let a = sampling::random_tensor(2, 2, 3, &mut rng);
        let tr = truncate_rank(&a, 2, &GaugeSpec::KyFan(3)).unwrap();
        let resid = a.sub(&tr.approx).unwrap();
        let mut dense: Vec<f64> = resid.bcirc().singular_values().iter().cloned().collect();
        dense.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let want: f64 = dense.iter().take(3).sum();
        assert_abs_diff_eq!(tr.value, want, epsilon = 1e-9);
    }

    #[test]
    fn half_phase_truncation_splits_phases_as_promised() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let planted = [
            vec![1.35, 0.45],
            vec![0.9, 0.2],
            vec![0.6, 0.05],
        ];
        let a = sampling::sectorial_with_phases(2, &planted, &mut rng);
        let r = 3;
        let hp = half_phase_truncate(&a, r).unwrap();

        // A = E * W * E.
        let rebuilt = tprod(&tprod(&hp.e, &hp.w).unwrap(), &hp.e).unwrap();
        let err = rebuilt.sub(&a).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(err < 1e-10, "factorization residual {err:.3e}");

        // Kept phases are the three largest planted values.
        let want_kept = [1.35, 0.9, 0.6];
        for (got, want) in hp.kept_phases.iter().zip(want_kept.iter()) {
            assert_abs_diff_eq!(got, want, epsilon = 1e-8);
        }

        // E has T-phase rank r and phases phi_g / 2.
        assert_eq!(tprank(&hp.e).unwrap(), r);
        let pe = canonical_phases(&hp.e).unwrap();
        for (got, want) in pe.values.iter().take(r).zip(want_kept.iter()) {
            assert_abs_diff_eq!(*got, 0.5 * want, epsilon = 1e-8);
        }

        // W carries exactly the residual phases.
        let pw = canonical_phases(&hp.w).unwrap();
        let mut expect = hp.residual_phases.clone();
        expect.resize(pw.len(), 0.0);
        assert!(
            phase_multiset_distance(&pw.values, &expect) < 1e-8,
            "residual phases {:?} vs {:?}",
            pw.values,
            expect
        );
        let cls = crate::phase::classify_phases(&pw);
        assert!(cls.alpha > -1e-9 && cls.beta < std::f64::consts::PI);
    }

    #[test]
    fn half_phase_truncation_edge_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let (a, _) = sampling::random_sectorial(2, 2, 0.1, 1.2, &mut rng);
        // r = 0: E is the identity-like THPD factor with zero phases.
        let hp = half_phase_truncate(&a, 0).unwrap();
        assert_eq!(tprank(&hp.e).unwrap(), 0);
        let pw = canonical_phases(&hp.w).unwrap();
        let pa = canonical_phases(&a).unwrap();
        assert!(phase_multiset_distance(&pw.values, &pa.values) < 1e-8);
        // r = np: W becomes T-Hermitian positive definite (zero phases).
        let hp = half_phase_truncate(&a, 4).unwrap();
        let pw = canonical_phases(&hp.w).unwrap();
        assert!(pw.values.iter().all(|v| v.abs() < 1e-8));
        assert!(half_phase_truncate(&a, 5).is_err());
    }

    #[test]
    fn half_phase_truncation_rejects_out_of_sector_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let (a, _) = sampling::random_sectorial(2, 2, -0.8, 0.6, &mut rng);
        assert!(matches!(
            half_phase_truncate(&a, 1),
            Err(Error::NotInSector(_))
        ));
    }

    #[test]
    fn optimal_value_matches_the_achieved_gauge_of_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let (a, _) = sampling::random_sectorial(2, 3, 0.05, 1.4, &mut rng);
        for r in 0..=6 {
            let hp = half_phase_truncate(&a, r).unwrap();
            for psi in [
                GaugeSpec::KyFan(1),
                GaugeSpec::KyFan(3),
                GaugeSpec::Lp(1.0),
                GaugeSpec::LInf,
            ] {
                let opt = optimal_tprank_value(&a, r, &psi).unwrap();
                let achieved =
                    gauge_eval(&psi, &canonical_phases(&hp.w).unwrap().values);
                assert!(
                    (opt - achieved).abs() < 1e-8,
                    "r={r} psi={psi}: optimal {opt} vs achieved {achieved}"
                );
            }
        }
    }

    #[test]
    fn phase_rank_bridge_counts_nonzero_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        let planted = [vec![0.7, 0.0], vec![0.0, 0.0], vec![0.4, 0.0]];
        let a = sampling::sectorial_with_phases(2, &planted, &mut rng);
        let bridge = phase_rank_bridge(&a).unwrap();
        assert_eq!(bridge.tprank, 2);
        assert_eq!(bridge.bcirc_rank, 2);
        assert!(bridge.hermitian_part_min_eig > 0.0);
        // A = R + M exactly.
        let rebuilt = bridge.r.add(&bridge.m).unwrap();
        assert!(rebuilt.sub(&a).unwrap().frobenius_norm() < 1e-10 * a.frobenius_norm());
        // M is T-Hermitian.
        let dev = bridge
            .m
            .sub(&crate::tensor::conj_transpose(&bridge.m))
            .unwrap()
            .frobenius_norm();
        assert!(dev < 1e-10 * bridge.m.frobenius_norm());
    }

    #[test]
    fn sector_arithmetic_checks_pass_on_shared_sector_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        for _ in 0..5 {
            let (a, _) = sampling::random_sectorial(2, 2, 0.2, 1.1, &mut rng);
            let (b, _) = sampling::random_sectorial(2, 2, 0.2, 1.1, &mut rng);
            let rep = sector_arithmetic_checks(&a, &b).unwrap();
            assert!(rep.sum_in_sector, "sum left the sector: {rep:?}");
            if rep.product_window_ok {
                let chk = rep.product_check.unwrap();
                assert!(chk.holds, "product argument bound violated: {chk:?}");
            }
        }
    }
}
