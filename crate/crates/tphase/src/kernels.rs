//! Dense complex matrix kernels.
//!
//! Everything the tensor layer needs per Fourier slice lives here: Schur-based
//! eigensolves, sectorial factorization of a single matrix, principal matrix
//! powers, and the two-matrix geometric mean.  Each nontrivial kernel has an
//! independent reference path (contour integration for powers, a convergent
//! quadrature for the geometric mean) that the tests cross-check against.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMat = DMatrix<Complex64>;

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

/// Hermitian part `(M + M^H) / 2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian "imaginary part" `(M - M^H) / (2i)`, so that
/// `M = H + i K` with both `H` and `K` Hermitian.
pub fn i_skew_part(m: &CMat) -> CMat {
    (m - m.adjoint()).scale(0.5) * Complex64::new(0.0, -1.0)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    m.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Smallest singular value.
pub fn sigma_min(m: &CMat) -> f64 {
    m.clone().singular_values().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// 2-norm condition number (infinite when singular).
pub fn cond2(m: &CMat) -> f64 {
    let sv = m.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    }
}

/// Smallest eigenvalue of a (numerically) Hermitian matrix.
pub fn lambda_min_hermitian(h: &CMat) -> f64 {
    let sym = (h + h.adjoint()).scale(0.5);
    sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Complex Schur decomposition `M = Q T Q^H` with `T` upper triangular.
pub fn schur_qt(m: &CMat) -> Result<(CMat, CMat)> {
    let sch = nalgebra::linalg::Schur::try_new(m.clone(), 1e-14, 200_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (q, t) = sch.unpack();
    Ok((q, t))
}

/// All eigenvalues of a general complex matrix (diagonal of the Schur form).
pub fn complex_eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let (_, t) = schur_qt(m)?;
    Ok(t.diagonal().iter().cloned().collect())
}

/// Eigenvector basis from a Schur decomposition by back-substitution on the
/// triangular factor (each column solves `(T - t_kk I) y = 0` with `y_k = 1`,
/// clamping near-zero pivots the way dense LAPACK solvers do).  Returns the
/// basis `V = Q Y` and its 2-norm condition number; a large condition number
/// signals a defective or nearly defective matrix.
pub fn eigenvectors_from_schur(q: &CMat, t: &CMat) -> (CMat, f64) {
    let n = t.nrows();
    let scale = t.norm().max(1e-300);
    let clamp = 1e-15 * scale;
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < clamp {
                d = if d.norm() == 0.0 {
                    Complex64::new(clamp, 0.0)
                } else {
                    d * Complex64::new(clamp / d.norm(), 0.0)
                };
            }
            y[(i, k)] = -s / d;
        }
        let col_norm = y.column(k).norm();
        for i in 0..=k {
            y[(i, k)] /= Complex64::new(col_norm, 0.0);
        }
    }
    let v = q * &y;
    let cond = cond2(&v);
    (v, cond)
}

// ---------------------------------------------------------------------------
// Sectorial factorization of a single matrix
// ---------------------------------------------------------------------------

/// Factorization `M = T^H diag(e^{i phi}) T` of a sectorial matrix, with
/// `phi` sorted nonincreasing and total spread strictly below a half turn.
///
/// The phases are contiguous around the rotation angle `gamma` (each lies in
/// `(gamma - pi/2, gamma + pi/2)`), so individual values may leave
/// `(-pi, pi]` when `gamma` is near the half-turn point; branch selection
/// across many matrices is the tensor layer's job.
#[derive(Debug, Clone)]
pub struct SectorialFactorization {
    /// Invertible congruence factor; rows are ordered consistently with
    /// `phases`.
    pub t: CMat,
    /// Nonincreasing phases.
    pub phases: Vec<f64>,
    /// Rotation angle in (-pi, pi] making `Re(e^{-i gamma} M)` positive
    /// definite (centered in the recovered phase interval).
    pub gamma: f64,
}

impl SectorialFactorization {
    /// `T^H diag(e^{i phi}) T`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.t.ncols();
        let mut d = CMat::zeros(n, n);
        for (k, &ph) in self.phases.iter().enumerate() {
            d[(k, k)] = Complex64::from_polar(1.0, ph);
        }
        self.t.adjoint() * d * &self.t
    }
}

/// Single-matrix rotation search: maximizes
/// `lambda_min(cos(theta) H + sin(theta) K)` over the uniform
/// [`tol::THETA_GRID_POINTS`]-point grid on (-pi, pi] with golden-section
/// refinement.  Returns `(gamma, margin)`.
pub fn rotation_search_matrix(m: &CMat) -> (f64, f64) {
    let h = hermitian_part(m);
    let k = i_skew_part(m);
    let f = |theta: f64| -> f64 {
        let combo = h.scale(theta.cos()) + k.scale(theta.sin());
        combo.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let npts = tol::THETA_GRID_POINTS;
    let step = 2.0 * std::f64::consts::PI / npts as f64;
    let mut best_theta = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..npts {
        let theta = -std::f64::consts::PI + step * (j + 1) as f64;
        let v = f(theta);
        if v > best_val {
            best_val = v;
            best_theta = theta;
        }
    }
    let (mut lo, mut hi) = (best_theta - step, best_theta + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut gamma = 0.5 * (lo + hi);
    while gamma <= -std::f64::consts::PI {
        gamma += 2.0 * std::f64::consts::PI;
    }
    while gamma > std::f64::consts::PI {
        gamma -= 2.0 * std::f64::consts::PI;
    }
    (gamma, f(gamma).max(best_val))
}

/// One congruence build at a fixed rotation angle.  Returns `None` when
/// `Re(e^{-i gamma} M)` is not positive definite at the given floor.
fn factor_at(m: &CMat, gamma: f64, pd_floor: f64) -> Option<(CMat, Vec<f64>)> {
    let x = m.scale(1.0) * Complex64::from_polar(1.0, -gamma);
    let h = hermitian_part(&x);
    let lmin = h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
    // NaN eigenvalues must land on the rejection branch.
    if lmin.partial_cmp(&pd_floor) != Some(std::cmp::Ordering::Greater) {
        return None;
    }
    let chol = nalgebra::linalg::Cholesky::new(h)?;
    let l = chol.l();
    let k = i_skew_part(&x);
    // S = L^{-1} K L^{-H}, Hermitian since K is.
    let z = l.solve_lower_triangular(&k)?;
    let s = l.solve_lower_triangular(&z.adjoint())?.adjoint();
    let s = (&s + s.adjoint()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(s);
    let n = m.nrows();
    // T = diag((1 + theta^2)^{1/4}) Q^H L^H, giving
    // M = e^{i gamma} L Q diag(1 + i theta) Q^H L^H = T^H diag(e^{i phi}) T
    // with phi = gamma + atan(theta).
    let qh_lh = eig.eigenvectors.adjoint() * l.adjoint();
    let mut t = qh_lh;
    let mut phases = Vec::with_capacity(n);
    for r in 0..n {
        let theta = eig.eigenvalues[r];
        let d = (1.0 + theta * theta).powf(0.25);
        for cidx in 0..n {
            t[(r, cidx)] *= Complex64::new(d, 0.0);
        }
        phases.push(gamma + theta.atan());
    }
    Some((t, phases))
}

/// Sectorial factorization `M = T^H diag(e^{i phi}) T`.
///
/// The rotation angle is seeded from the eigenvalue arguments (the midpoint
/// of the shortest arc containing the spectrum) and validated by a Cholesky
/// factorization; if that cheap seed fails, the exhaustive rotation search is
/// used.  After a first build the angle is re-centered at the midpoint of the
/// recovered phase interval and the factorization is rebuilt once, which
/// maximizes the definiteness margin of the final congruence.
pub fn sectorial_decompose_matrix(m: &CMat) -> Result<SectorialFactorization> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "sectorial factorization needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let sigma = spectral_norm(m);
    if sigma == 0.0 {
        return Err(Error::NotSectorial("zero matrix".into()));
    }
    let pd_floor = tol::PD_MIN_EIG_REL * sigma;

    // Seed the rotation from the spectrum: eigenvalue arguments lie in the
    // numerical-range sector, so the midpoint of their shortest covering arc
    // is a strong candidate angle.
    let eigs = complex_eigenvalues(m)?;
    for ev in &eigs {
        if ev.norm() <= 1e-14 * sigma {
            return Err(Error::NotSectorial(
                "matrix has a (near-)zero eigenvalue".into(),
            ));
        }
    }
    let mut args: Vec<f64> = eigs.iter().map(|z| z.arg()).collect();
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut gap_start = 0;
    let mut gap_len = args[0] + two_pi - args[args.len() - 1];
    for i in 0..args.len() - 1 {
        let g = args[i + 1] - args[i];
        if g > gap_len {
            gap_len = g;
            gap_start = i + 1;
        }
    }
    let arc_len = two_pi - gap_len;
    let mut gamma0 = args[gap_start % args.len()] + 0.5 * arc_len;
    while gamma0 > std::f64::consts::PI {
        gamma0 -= two_pi;
    }
    while gamma0 <= -std::f64::consts::PI {
        gamma0 += two_pi;
    }

    let mut built = factor_at(m, gamma0, pd_floor);
    if built.is_none() {
        let (gamma_grid, margin) = rotation_search_matrix(m);
        if margin <= pd_floor {
            return Err(Error::NotSectorial(format!(
                "rotation margin {:.3e} below threshold {:.3e}",
                margin, pd_floor
            )));
        }
        gamma0 = gamma_grid;
        built = factor_at(m, gamma0, pd_floor);
    }
    let (mut t, mut phases) =
        built.ok_or_else(|| Error::NotSectorial("no positive-definite rotation found".into()))?;

    // Re-center the rotation in the recovered phase interval and rebuild once.
    let pmin = phases.iter().cloned().fold(f64::INFINITY, f64::min);
    let pmax = phases.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let gamma1 = 0.5 * (pmin + pmax);
    let mut gamma = gamma0;
    if (gamma1 - gamma0).abs() > 1e-2 {
        if let Some((t2, ph2)) = factor_at(m, gamma1, pd_floor) {
            t = t2;
            phases = ph2;
            gamma = gamma1;
        }
    }

    let pmin = phases.iter().cloned().fold(f64::INFINITY, f64::min);
    let pmax = phases.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if pmax - pmin >= std::f64::consts::PI - tol::BRANCH_GUARD {
        return Err(Error::BranchSpread(format!(
            "phase spread {:.6} reaches a half turn",
            pmax - pmin
        )));
    }

    // Sort phases nonincreasing and permute the rows of T to match.
    let mut order: Vec<usize> = (0..phases.len()).collect();
    order.sort_by(|&a, &b| phases[b].partial_cmp(&phases[a]).unwrap().then(a.cmp(&b)));
    let sorted_phases: Vec<f64> = order.iter().map(|&i| phases[i]).collect();
    let mut tp = CMat::zeros(t.nrows(), t.ncols());
    for (new_r, &old_r) in order.iter().enumerate() {
        for c in 0..t.ncols() {
            tp[(new_r, c)] = t[(old_r, c)];
        }
    }
    while gamma > std::f64::consts::PI {
        gamma -= two_pi;
    }
    while gamma <= -std::f64::consts::PI {
        gamma += two_pi;
    }
    Ok(SectorialFactorization { t: tp, phases: sorted_phases, gamma })
}

// ---------------------------------------------------------------------------
// Principal matrix powers
// ---------------------------------------------------------------------------

fn check_branch_cut(eigs: &[Complex64]) -> Result<()> {
    for ev in eigs {
        let on_ray = (ev.re <= 0.0 && ev.im.abs() <= tol::BRANCH_CUT_ABS)
            || ev.norm() <= tol::BRANCH_CUT_ABS;
        if on_ray {
            return Err(Error::BranchCut(format!(
                "eigenvalue {:.6e}{:+.6e}i lies on (-inf, 0]",
                ev.re, ev.im
            )));
        }
    }
    Ok(())
}

/// Principal square root of an upper-triangular matrix by the standard
/// column-wise recurrence.
fn tri_sqrt(t: &CMat) -> CMat {
    let n = t.nrows();
    let mut r = CMat::zeros(n, n);
    for j in 0..n {
        r[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut s = t[(i, j)];
            for k in (i + 1)..j {
                s -= r[(i, k)] * r[(k, j)];
            }
            r[(i, j)] = s / (r[(i, i)] + r[(j, j)]);
        }
    }
    r
}

fn mat_identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

fn tri_int_pow(t: &CMat, mut e: u64) -> CMat {
    let n = t.nrows();
    let mut acc = mat_identity(n);
    let mut base = t.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// `T^f` for upper-triangular `T` and `f` in `[0, 1)`, via the binary
/// expansion of `f` and iterated principal square roots.  The expansion of a
/// double in this range is finite, so the loop terminates exactly; the cap
/// only guards denormal tails whose contribution is far below roundoff.
fn tri_frac_pow(t: &CMat, f: f64) -> CMat {
    let n = t.nrows();
    debug_assert!((0.0..1.0).contains(&f));
    let mut acc = mat_identity(n);
    if f == 0.0 {
        return acc;
    }
    let mut cur = t.clone();
    let mut rem = f;
    for _ in 0..80 {
        if rem == 0.0 {
            break;
        }
        cur = tri_sqrt(&cur);
        rem *= 2.0;
        if rem >= 1.0 {
            acc = &acc * &cur;
            rem -= 1.0;
        }
    }
    acc
}

/// Principal power `M^alpha` for a matrix with no eigenvalue on `(-inf, 0]`.
///
/// After a Schur reduction, the power is computed by diagonalization whenever
/// an eigenvector basis with condition number below
/// [`tol::EIGVEC_COND_MAX`] exists; otherwise the triangular factor is raised
/// to the power directly (integer part by binary powering, fractional part by
/// iterated square roots), which stays accurate for defective matrices.
pub fn principal_power_matrix(m: &CMat, alpha: f64) -> Result<CMat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "matrix power needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !alpha.is_finite() {
        return Err(Error::Numerical("power exponent must be finite".into()));
    }
    if alpha == 0.0 {
        return Ok(mat_identity(n));
    }
    if alpha == 1.0 {
        return Ok(m.clone());
    }
    let (q, t) = schur_qt(m)?;
    let eigs: Vec<Complex64> = t.diagonal().iter().cloned().collect();
    check_branch_cut(&eigs)?;

    if alpha == -1.0 {
        return m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularTensor("matrix is numerically singular".into()));
    }
    if alpha.abs() > 1e6 {
        return Err(Error::Numerical(format!("power exponent {alpha} is too large")));
    }

    let (v, cond) = eigenvectors_from_schur(&q, &t);
    if cond < tol::EIGVEC_COND_MAX {
        let vinv = v.clone().try_inverse().ok_or_else(|| {
            Error::Numerical("eigenvector basis inversion failed".into())
        })?;
        let mut d = CMat::zeros(n, n);
        for (k, ev) in eigs.iter().enumerate() {
            d[(k, k)] = ev.powf(alpha);
        }
        return Ok(&v * d * vinv);
    }

    // Defective fall-back on the triangular factor.
    let a = alpha.abs();
    let ai = a.floor();
    let tf = {
        let ti = tri_int_pow(&t, ai as u64);
        let tfrac = tri_frac_pow(&t, a - ai);
        &ti * &tfrac
    };
    let tf = if alpha < 0.0 {
        tf.solve_upper_triangular(&mat_identity(n)).ok_or_else(|| {
            Error::SingularTensor("triangular power is numerically singular".into())
        })?
    } else {
        tf
    };
    Ok(&q * tf * q.adjoint())
}

/// Reference path for matrix powers: the Cauchy-integral definition
/// `M^alpha = (1/2 pi i) \oint z^alpha (zI - M)^{-1} dz` evaluated by the
/// trapezoid rule on a circle that encloses the spectrum while staying inside
/// the open right half-plane (so the principal branch of `z^alpha` is
/// analytic on the disk).  Only applicable when the spectrum allows such a
/// circle; intended for cross-checking, not production use.
pub fn power_contour_oracle(m: &CMat, alpha: f64, nodes: usize) -> Result<CMat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::ShapeMismatch("contour power needs a square matrix".into()));
    }
    let eigs = complex_eigenvalues(m)?;
    check_branch_cut(&eigs)?;
    let re_min = eigs.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let re_max = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let c = 0.5 * (re_min + re_max);
    if c <= 0.0 {
        return Err(Error::Numerical(
            "contour oracle needs a spectrum centered in the right half-plane".into(),
        ));
    }
    let r0 = eigs
        .iter()
        .map(|z| (z - Complex64::new(c, 0.0)).norm())
        .fold(0.0, f64::max);
    if r0 >= 0.98 * c {
        return Err(Error::Numerical(
            "spectrum too wide for a right-half-plane contour".into(),
        ));
    }
    let r = 0.5 * (r0 + c);
    let mut acc = CMat::zeros(n, n);
    let id = mat_identity(n);
    for j in 0..nodes {
        let tau = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
        let z = Complex64::new(c, 0.0) + Complex64::from_polar(r, tau);
        let resolvent = (id.scale(1.0) * z - m)
            .try_inverse()
            .ok_or_else(|| Error::Numerical("resolvent inversion failed on contour".into()))?;
        acc += resolvent * (z.powf(alpha) * (z - Complex64::new(c, 0.0)));
    }
    Ok(acc.scale(1.0 / nodes as f64))
}

// ---------------------------------------------------------------------------
// Two-matrix geometric mean
// ---------------------------------------------------------------------------

fn check_accretive(m: &CMat, who: &str) -> Result<()> {
    let lmin = lambda_min_hermitian(&hermitian_part(m));
    let floor = tol::PD_MIN_EIG_REL * spectral_norm(m).max(1e-300);
    if lmin <= floor {
        return Err(Error::NotAccretive(format!(
            "{who}: smallest eigenvalue of the Hermitian part is {:.3e}",
            lmin
        )));
    }
    Ok(())
}

/// Geometric mean `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}` of
/// two accretive matrices.  Congruence keeps the inner matrix inside the
/// sector of `B`, so every principal power stays off the branch cut.
pub fn matrix_geomean(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "geometric mean needs square matrices of one size, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    check_accretive(a, "left operand")?;
    check_accretive(b, "right operand")?;
    let asq = principal_power_matrix(a, 0.5)?;
    let ainvsq = principal_power_matrix(a, -0.5)?;
    let mid = &ainvsq * b * &ainvsq;
    let midsq = principal_power_matrix(&mid, 0.5)?;
    Ok(&asq * midsq * &asq)
}

/// Gauss--Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 1..=n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p2) / j as f64;
            }
            dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Reference path for the geometric mean via the integral representation
/// `(A # B)^{-1} = (2/pi) \int_{-inf}^{inf} (e^u A + e^{-u} B)^{-1} du`.
///
/// The integration interval is truncated where the integrand tail (bounded by
/// `e^{-U} max(||A^{-1}||, ||B^{-1}||)`) drops below
/// [`tol::QUADRATURE_TAIL_ABS`], and the Gauss--Legendre node count is
/// doubled until two successive rules agree within
/// [`tol::QUADRATURE_DOUBLING_REL`]; failing to converge within a few
/// doublings raises [`Error::QuadratureNotConverged`].
pub fn matrix_geomean_integral_oracle(a: &CMat, b: &CMat, base_nodes: usize) -> Result<CMat> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::ShapeMismatch("geometric mean needs square matrices".into()));
    }
    check_accretive(a, "left operand")?;
    check_accretive(b, "right operand")?;
    let inv_scale = (1.0 / sigma_min(a)).max(1.0 / sigma_min(b)).max(1.0);
    let u_max = inv_scale.ln() - tol::QUADRATURE_TAIL_ABS.ln() + 1.0;

    let quad = |nodes: usize| -> Result<CMat> {
        let (xs, ws) = gauss_legendre(nodes);
        let n = a.nrows();
        let mut acc = CMat::zeros(n, n);
        for (x, w) in xs.iter().zip(ws.iter()) {
            let u = x * u_max;
            let term = (a.scale(u.exp()) + b.scale((-u).exp()))
                .try_inverse()
                .ok_or_else(|| {
                    Error::Numerical("integrand inversion failed in quadrature".into())
                })?;
            acc += term.scale(w * u_max);
        }
        Ok(acc.scale(2.0 / std::f64::consts::PI))
    };

    let mut nodes = base_nodes.max(8);
    let mut coarse = quad(nodes)?;
    let mut rel = f64::INFINITY;
    for _ in 0..5 {
        let fine = quad(nodes * 2)?;
        rel = (&fine - &coarse).norm() / fine.norm().max(1e-300);
        if rel <= tol::QUADRATURE_DOUBLING_REL {
            return fine
                .try_inverse()
                .ok_or_else(|| Error::Numerical("integral representation is singular".into()));
        }
        coarse = fine;
        nodes *= 2;
    }
    Err(Error::QuadratureNotConverged(format!(
        "integral still moving by {:.3e} at {} nodes",
        rel, nodes
    )))
}

/// Extend a thin matrix with orthonormal columns to a full unitary by
/// appending an orthonormal basis of the orthogonal complement (eigenvectors
/// of the complementary projector).
pub fn unitary_completion(thin: &CMat) -> CMat {
    let (dim, k) = thin.shape();
    if k == dim {
        return thin.clone();
    }
    let proj = mat_identity(dim) - thin * thin.adjoint();
    let eig = nalgebra::linalg::SymmetricEigen::new((&proj + proj.adjoint()).scale(0.5));
    let mut cols: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    // The projector has eigenvalues ~1 on the complement and ~0 on the range.
    cols.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut full = CMat::zeros(dim, dim);
    for c in 0..k {
        for r in 0..dim {
            full[(r, c)] = thin[(r, c)];
        }
    }
    for (slot, (_, idx)) in cols.iter().take(dim - k).enumerate() {
        let col = eig.eigenvectors.column(*idx);
        for r in 0..dim {
            full[(r, k + slot)] = col[r];
        }
    }
    full
}
