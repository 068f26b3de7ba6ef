//! Central numerical tolerances.
//!
//! Every comparison threshold used by the library lives here so that the
//! trade-offs are documented in one place.  Relative tolerances are scaled by
//! a norm of the operand at the call site; absolute tolerances apply to
//! quantities that are already dimensionless (angles, normalized residuals).

/// A tensor counts as sectorial when its rotation margin exceeds this factor
/// times the spectral norm of its block-circulant unfolding.  Chosen an order
/// of magnitude above accumulated eigensolver error for well-scaled inputs.
pub const SECTORIAL_MARGIN_REL: f64 = 1e-10;

/// Positive-definiteness threshold: smallest eigenvalue of a Hermitian part
/// must exceed this factor times the spectral norm of the operand.
pub const PD_MIN_EIG_REL: f64 = 1e-10;

/// Canonical phases with magnitude at or below this count as zero when
/// computing the T-phase rank.
pub const PHASE_ZERO_ABS: f64 = 1e-10;

/// Guard band for phase-spread checks against the half-turn limit: a spread
/// of `pi - BRANCH_GUARD` or more is rejected as branch-ambiguous.
pub const BRANCH_GUARD: f64 = 1e-12;

/// Absolute distance from the ray (-inf, 0] below which an eigenvalue is
/// treated as sitting on the principal-branch cut.
pub const BRANCH_CUT_ABS: f64 = 1e-12;

/// Singular values at or below this factor times the largest singular value
/// count as zero for rank decisions.
pub const RANK_SV_REL: f64 = 1e-9;

/// A tensor counts as T-Hermitian when the Frobenius norm of `A - A^H` is at
/// most this factor times the Frobenius norm of `A`.
pub const HERMITIAN_REL: f64 = 1e-10;

/// Default tolerance for T-inverses: a Fourier slice with 2-norm condition
/// number above `1/INVERSE_COND_TOL` makes the tensor count as singular.
pub const INVERSE_COND_TOL: f64 = 1e-12;

/// Majorization comparisons (partial-sum dominance and total-sum equality).
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// Quadrature self-check: doubling the node count must change the result by
/// less than this relative amount.
pub const QUADRATURE_DOUBLING_REL: f64 = 1e-6;

/// Quadrature truncation: the integrand tail outside the truncated interval
/// must be bounded below this value.
pub const QUADRATURE_TAIL_ABS: f64 = 1e-12;

/// Hurwitz stability margin: the spectral abscissa must stay below
/// `-STABILITY_ABSCISSA_REL * (1 + spectral radius)`.
pub const STABILITY_ABSCISSA_REL: f64 = 1e-9;

/// Well-posedness of a feedback loop: smallest singular value of
/// `I + H(inf) G(inf)` must exceed this.
pub const WELL_POSED_MIN_SV: f64 = 1e-9;

/// A pole counts as sitting on the evaluation frequency when
/// `|jw - l| < POLE_PROXIMITY_REL * (1 + |l|)`.
pub const POLE_PROXIMITY_REL: f64 = 1e-9;

/// Eigenvector-basis condition number above which matrix power functions fall
/// back from diagonalization to the Schur--Parlett style triangular path.
pub const EIGVEC_COND_MAX: f64 = 1e6;

/// Number of grid points for the exhaustive rotation search over (-pi, pi].
pub const THETA_GRID_POINTS: usize = 720;

/// Trapezoid nodes for the contour-integral power oracle.
pub const CONTOUR_NODES: usize = 512;

/// Gauss--Legendre nodes for the integral-representation geometric-mean
/// oracle (the convergence check reruns with twice as many).
pub const GEOMEAN_QUAD_NODES: usize = 160;

/// Default logarithmic frequency grid.
pub const DEFAULT_GRID_POINTS: usize = 400;
pub const DEFAULT_GRID_WMIN: f64 = 1e-3;
pub const DEFAULT_GRID_WMAX: f64 = 1e3;

/// Relative tolerance when checking that a dense matrix carries exact
/// block-circulant structure.
pub const BCIRC_STRUCTURE_REL: f64 = 1e-10;
