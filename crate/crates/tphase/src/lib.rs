//! Phase analysis of third-order tensors under the T-product.
//!
//! A third-order tensor acts on matrices the way a matrix acts on vectors
//! once it is unfolded into a block-circulant matrix; the discrete Fourier
//! transform block-diagonalizes that unfolding into `p` independent complex
//! matrices ("Fourier slices").  This crate builds on that correspondence:
//!
//! - [`tensor`]: the dense tensor type, T-product, conjugate transpose,
//!   inverse, eigenvalues, and the sectoriality (rotation) margin.
//! - [`kernels`]: dense matrix kernels — sectorial factorization of a single
//!   matrix, principal fractional powers, geometric means, and the slow
//!   contour/quadrature oracles used to cross-check them.
//! - [`phase`]: canonical T-phases, the T-phase rank, symmetric gauge
//!   functions, majorization checks, and sector classification.
//! - [`geomean`]: T-geometric means of accretive tensors, phase-majorization
//!   reports, eigenvalue interlacing checks, and a randomized probe for the
//!   open phase-sum inequality.
//! - [`approx`]: T-SVD truncation and optimal low-phase-rank approximation by
//!   half-phase truncation, with the achievable-value formula per gauge.
//! - [`lti`]: tensor MIMO LTI systems — frequency responses, the H-infinity
//!   norm, phase envelopes, the Gang of Four, and small-gain / small-phase
//!   feedback certificates.
//! - [`io`]: `.ttj` / `.tlj` JSON formats and CSV export.
//! - [`sampling`]: seeded random generators for tensors and systems.
//!
//! The `examples/` directory is the front door: one runnable example per
//! capability (`tensor_basics`, `canonical_phases`, `half_phase_truncation`,
//! `tsvd_truncation`, `geometric_mean`, `phase_majorization`,
//! `lti_certificates`).  A thin `tphase` binary exposes the same analyses
//! over `.ttj`/`.tlj` files for scripting.
//!
//! ```
//! use tphase::{canonical_phases, tprod, Tensor3};
//! use num_complex::Complex64;
//!
//! // A 2x2x2 identity tensor is sectorial with all phases zero.
//! let id = Tensor3::identity(2, 2);
//! let phases = canonical_phases(&id).unwrap();
//! assert!(phases.values.iter().all(|v| v.abs() < 1e-12));
//! let sq = tprod(&id, &id).unwrap();
//! assert_eq!(sq.shape(), (2, 2, 2));
//! # let _ = Complex64::new(0.0, 0.0);
//! ```

pub mod approx;
pub mod error;
pub mod geomean;
pub mod io;
pub mod kernels;
pub mod lti;
pub mod phase;
pub mod sampling;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};
pub use tensor::{
    conj_transpose, is_sectorial, sectoriality_margin, t_eigenvalues, t_inverse, tprod,
    FourierSlices, SectorialityMargin, Tensor3,
};
pub use phase::{
    canonical_phase_factorization, canonical_phases, classify_sector, gauge_eval, majorizes,
    phase_gauge, tprank, GaugeSpec, MajorizationMode, MajorizationReport, PhaseFactorization,
    PhaseVector, SectorClass,
};
pub use geomean::{
    arithmetic_mean, check_phase_majorization, maximal_element_witness, probe_phase_lidskii,
    riccati_residual, t_geomean, t_power, LidskiiProbeReport, MaximalElementWitness,
    PhaseMajorizationReport,
};
pub use approx::{
    half_phase_truncate, optimal_tprank_value, phase_rank_bridge, t_svd, truncate_rank,
    HalfPhaseTruncation, PhaseRankBridge, RankTruncation, TsvdFactors,
};
pub use lti::{
    bode_export, feedback_stable, freq_response, gang_of_four, hinf_norm, phase_envelope,
    small_gain_certificate, small_phase_certificate, Certificate, FeedbackReport, FrequencyGrid,
    GangOfFour, PhaseEnvelope, RatFn, RationalSliceTf, StateSpaceTensor, TransferTensor, Verdict,
};
