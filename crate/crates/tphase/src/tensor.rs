//! Third-order complex tensors and the t-product algebra.
//!
//! A tensor of shape `m x n x p` is stored as `p` frontal slices of an
//! `m x n` complex matrix.  The t-product `A * B` is the matrix product of
//! the block-circulant unfolding of `A` with the block-column unfolding of
//! `B`; equivalently, the discrete Fourier transform along the third axis
//! turns the t-product into `p` independent matrix products, which is how
//! every operation here is actually computed.  The dense block-circulant
//! forms are kept around as reference paths for testing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tol;

pub type CMat = DMatrix<Complex64>;

/// Dense complex third-order tensor with frontal-slice storage.
///
/// Entry `(i, j, k)` is row `i`, column `j` of frontal slice `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    p: usize,
    data: Vec<Complex64>,
}

impl Tensor3 {
    /// Zero tensor of shape `m x n x p`.
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        assert!(m > 0 && n > 0 && p > 0, "tensor dimensions must be positive");
        Tensor3 { m, n, p, data: vec![Complex64::new(0.0, 0.0); m * n * p] }
    }

    /// Identity tensor of shape `n x n x p`: first frontal slice is the
    /// identity matrix, all others are zero.  Neutral element of the
    /// t-product.
    pub fn identity(n: usize, p: usize) -> Self {
        let mut t = Self::zeros(n, n, p);
        for i in 0..n {
            t.set(i, i, 0, Complex64::new(1.0, 0.0));
        }
        t
    }

    /// Build from a closure over `(row, col, slice)`.
    pub fn from_fn<F: FnMut(usize, usize, usize) -> Complex64>(
        m: usize,
        n: usize,
        p: usize,
        mut f: F,
    ) -> Self {
        let mut t = Self::zeros(m, n, p);
        for k in 0..p {
            for i in 0..m {
                for j in 0..n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    /// Build from frontal slices (all must share one shape).
    pub fn from_slices(slices: &[CMat]) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::ShapeMismatch("need at least one frontal slice".into()));
        }
        let (m, n) = slices[0].shape();
        if m == 0 || n == 0 {
            return Err(Error::ShapeMismatch("frontal slices must be nonempty".into()));
        }
        let p = slices.len();
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (m, n) {
                return Err(Error::ShapeMismatch(format!(
                    "slice {} has shape {}x{}, expected {}x{}",
                    k,
                    s.nrows(),
                    s.ncols(),
                    m,
                    n
                )));
            }
        }
        let mut t = Self::zeros(m, n, p);
        for (k, s) in slices.iter().enumerate() {
            for i in 0..m {
                for j in 0..n {
                    t.set(i, j, k, s[(i, j)]);
                }
            }
        }
        Ok(t)
    }

    pub fn nrows(&self) -> usize {
        self.m
    }

    pub fn ncols(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.p
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn is_frontal_square(&self) -> bool {
        self.m == self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.m && j < self.n && k < self.p);
        (k * self.m + i) * self.n + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        let ix = self.idx(i, j, k);
        self.data[ix] = v;
    }

    /// Frontal slice `k` as a dense matrix.
    pub fn slice(&self, k: usize) -> CMat {
        CMat::from_fn(self.m, self.n, |i, j| self.get(i, j, k))
    }

    pub fn slices(&self) -> Vec<CMat> {
        (0..self.p).map(|k| self.slice(k)).collect()
    }

    pub fn set_slice(&mut self, k: usize, s: &CMat) {
        assert_eq!(s.shape(), (self.m, self.n), "slice shape mismatch");
        for i in 0..self.m {
            for j in 0..self.n {
                self.set(i, j, k, s[(i, j)]);
            }
        }
    }

    /// Entrywise Frobenius norm over all slices.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute imaginary part; zero for real tensors.
    pub fn max_imag_abs(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut t = self.clone();
        for z in &mut t.data {
            *z *= a;
        }
        t
    }

    pub fn add(&self, other: &Tensor3) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut t = self.clone();
        for (z, w) in t.data.iter_mut().zip(other.data.iter()) {
            *z += w;
        }
        Ok(t)
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Block-column unfolding: frontal slices stacked vertically
    /// (an `mp x n` matrix with slice `k` in block row `k`).
    pub fn unfold(&self) -> CMat {
        CMat::from_fn(self.m * self.p, self.n, |r, c| {
            let k = r / self.m;
            self.get(r % self.m, c, k)
        })
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(mat: &CMat, m: usize, n: usize, p: usize) -> Result<Self> {
        if mat.shape() != (m * p, n) {
            return Err(Error::ShapeMismatch(format!(
                "cannot fold {}x{} into {}x{}x{}",
                mat.nrows(),
                mat.ncols(),
                m,
                n,
                p
            )));
        }
        Ok(Self::from_fn(m, n, p, |i, j, k| mat[(k * m + i, j)]))
    }

    /// Block-circulant unfolding: an `mp x np` matrix whose block at block
    /// row `r`, block column `c` is frontal slice `(r - c) mod p`.
    pub fn bcirc(&self) -> CMat {
        let (m, n, p) = self.shape();
        CMat::from_fn(m * p, n * p, |row, col| {
            let (br, i) = (row / m, row % m);
            let (bc, j) = (col / n, col % n);
            let k = (br + p - bc) % p;
            self.get(i, j, k)
        })
    }

    /// Recover a tensor from a block-circulant matrix, verifying the
    /// structure to relative tolerance.
    pub fn from_bcirc(mat: &CMat, m: usize, n: usize, p: usize) -> Result<Self> {
        if mat.shape() != (m * p, n * p) {
            return Err(Error::ShapeMismatch(format!(
                "block-circulant of an {}x{}x{} tensor must be {}x{}",
                m,
                n,
                p,
                m * p,
                n * p
            )));
        }
        let t = Self::from_fn(m, n, p, |i, j, k| mat[(k * m + i, j)]);
        let tol = tol::BCIRC_STRUCTURE_REL * mat.norm().max(1e-300);
        let rebuilt = t.bcirc();
        let err = (mat - &rebuilt).norm();
        if err > tol * (p as f64) {
            return Err(Error::ShapeMismatch(format!(
                "matrix is not block-circulant (structure residual {:.3e})",
                err
            )));
        }
        Ok(t)
    }

    /// Discrete Fourier transform along the third axis: slice `k` of the
    /// result is `sum_t w^{kt} A^{(t)}` with `w = exp(-2 pi i / p)`.
    ///
    /// These are exactly the diagonal blocks obtained by conjugating the
    /// block-circulant unfolding with the unitary DFT; the t-product becomes
    /// a slicewise matrix product in this domain.
    pub fn fourier_slices(&self) -> FourierSlices {
        let (m, n, p) = self.shape();
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(p);
        let mut slices = vec![CMat::zeros(m, n); p];
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        for i in 0..m {
            for j in 0..n {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = self.get(i, j, k);
                }
                fft.process(&mut buf);
                for k in 0..p {
                    slices[k][(i, j)] = buf[k];
                }
            }
        }
        FourierSlices { m, n, p, slices }
    }
}

/// The Fourier-domain form of a tensor: `p` independent `m x n` blocks.
#[derive(Debug, Clone)]
pub struct FourierSlices {
    m: usize,
    n: usize,
    p: usize,
    pub slices: Vec<CMat>,
}

impl FourierSlices {
    /// Wrap externally computed Fourier blocks (all must share one shape).
    pub fn from_blocks(slices: Vec<CMat>) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::ShapeMismatch("need at least one Fourier block".into()));
        }
        let (m, n) = slices[0].shape();
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (m, n) {
                return Err(Error::ShapeMismatch(format!(
                    "Fourier block {} has shape {}x{}, expected {}x{}",
                    k,
                    s.nrows(),
                    s.ncols(),
                    m,
                    n
                )));
            }
        }
        let p = slices.len();
        Ok(FourierSlices { m, n, p, slices })
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    /// Inverse DFT along the third axis, returning the frontal-slice tensor.
    pub fn to_tensor(&self) -> Tensor3 {
        let (m, n, p) = (self.m, self.n, self.p);
        let mut planner = FftPlanner::<f64>::new();
        let ifft = planner.plan_fft_inverse(p);
        let mut t = Tensor3::zeros(m, n, p);
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        let inv_p = 1.0 / p as f64;
        for i in 0..m {
            for j in 0..n {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = self.slices[k][(i, j)];
                }
                ifft.process(&mut buf);
                for (k, b) in buf.iter().enumerate() {
                    t.set(i, j, k, b * inv_p);
                }
            }
        }
        t
    }
}

/// t-product `A * B` via the Fourier domain.
pub fn tprod(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    if a.ncols() != b.nrows() || a.depth() != b.depth() {
        return Err(Error::ShapeMismatch(format!(
            "cannot t-multiply {:?} by {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let fa = a.fourier_slices();
    let fb = b.fourier_slices();
    let slices: Vec<CMat> =
        fa.slices.iter().zip(fb.slices.iter()).map(|(x, y)| x * y).collect();
    Ok(FourierSlices::from_blocks(slices)?.to_tensor())
}

/// Conjugate transpose under the t-product: transposes every frontal slice
/// and reverses the order of slices 2..p.  Satisfies
/// `bcirc(A^H) = bcirc(A)^H` and `(A * B)^H = B^H * A^H`.
pub fn conj_transpose(a: &Tensor3) -> Tensor3 {
    let (m, n, p) = a.shape();
    Tensor3::from_fn(n, m, p, |i, j, k| {
        let src = if k == 0 { 0 } else { p - k };
        a.get(j, i, src).conj()
    })
}

/// t-product inverse with the default conditioning tolerance.
pub fn t_inverse(a: &Tensor3) -> Result<Tensor3> {
    t_inverse_with_tol(a, tol::INVERSE_COND_TOL)
}

/// t-product inverse.  Fails with [`Error::SingularTensor`] when the
/// block-circulant unfolding has a 2-norm condition number above `1 / tol`.
pub fn t_inverse_with_tol(a: &Tensor3, tol: f64) -> Result<Tensor3> {
    if !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "t-inverse requires square frontal slices, got {:?}",
            a.shape()
        )));
    }
    let fa = a.fourier_slices();
    let spectra: Vec<Vec<f64>> = fa
        .slices
        .iter()
        .map(|s| s.clone().singular_values().iter().cloned().collect())
        .collect();
    // The unfolding's singular values are the pooled slice singular values,
    // so conditioning must be judged against the global largest one: a slice
    // that is tiny relative to the tensor is singular even when it is well
    // conditioned relative to itself.
    let smax = spectra
        .iter()
        .flatten()
        .cloned()
        .fold(0.0f64, f64::max);
    let mut inv_slices = Vec::with_capacity(fa.slices.len());
    for (k, s) in fa.slices.iter().enumerate() {
        let smin = spectra[k].iter().cloned().fold(f64::INFINITY, f64::min);
        if smin <= smax * tol || smin == 0.0 {
            return Err(Error::SingularTensor(format!(
                "Fourier slice {} has condition number {:.3e}",
                k,
                if smin > 0.0 { smax / smin } else { f64::INFINITY }
            )));
        }
        let inv = s.clone().try_inverse().ok_or_else(|| {
            Error::SingularTensor(format!("Fourier slice {} is numerically singular", k))
        })?;
        inv_slices.push(inv);
    }
    Ok(FourierSlices::from_blocks(inv_slices)?.to_tensor())
}

/// T-eigenvalues: eigenvalues of every Fourier slice, ordered by slice index,
/// then by nonincreasing modulus, then by nondecreasing argument.
pub fn t_eigenvalues(a: &Tensor3) -> Result<Vec<Complex64>> {
    if !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "T-eigenvalues require square frontal slices, got {:?}",
            a.shape()
        )));
    }
    let fa = a.fourier_slices();
    let mut out = Vec::with_capacity(a.nrows() * a.depth());
    for s in &fa.slices {
        let mut ev = crate::kernels::complex_eigenvalues(s)?;
        ev.sort_by(|x, y| {
            y.norm()
                .partial_cmp(&x.norm())
                .unwrap()
                .then(x.arg().partial_cmp(&y.arg()).unwrap())
        });
        out.extend(ev);
    }
    Ok(out)
}

/// Result of the rotation search underlying sectoriality tests.
#[derive(Debug, Clone, Copy)]
pub struct SectorialityMargin {
    /// Maximizing rotation angle in (-pi, pi].
    pub gamma: f64,
    /// `min_k lambda_min(Re(e^{-i gamma} Ahat_k))` at the maximizer; positive
    /// exactly when some rotation makes every Fourier slice accretive.
    pub margin: f64,
    /// Spectral norm of the block-circulant unfolding, for relative tests.
    pub scale: f64,
}

impl SectorialityMargin {
    /// Margin test at the library-wide relative threshold.
    pub fn is_sectorial(&self) -> bool {
        self.margin > tol::SECTORIAL_MARGIN_REL * self.scale.max(1e-300)
    }
}

/// Exhaustive rotation search: maximizes
/// `f(theta) = min_k lambda_min(cos(theta) H_k + sin(theta) K_k)` over a
/// uniform grid of [`tol::THETA_GRID_POINTS`] angles in (-pi, pi] followed by
/// golden-section refinement, where `H_k` and `K_k` are the Hermitian and
/// skew parts of the Fourier slices.  `f(gamma) = lambda_min(Re(e^{-i gamma}
/// Ahat_k))` minimized over slices, so a positive maximum certifies a
/// rotation making the whole tensor accretive.
pub fn sectoriality_margin(a: &Tensor3) -> Result<SectorialityMargin> {
    if !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "sectoriality requires square frontal slices, got {:?}",
            a.shape()
        )));
    }
    let fa = a.fourier_slices();
    let mut herms = Vec::with_capacity(fa.slices.len());
    let mut skews = Vec::with_capacity(fa.slices.len());
    let mut scale: f64 = 0.0;
    for s in &fa.slices {
        let h = (s + s.adjoint()).scale(0.5);
        // K = (A - A^H) / (2i), the Hermitian "imaginary part".
        let k = (s - s.adjoint()).scale(0.5) * Complex64::new(0.0, -1.0);
        let smax = s.clone().singular_values().iter().cloned().fold(0.0, f64::max);
        scale = scale.max(smax);
        herms.push(h);
        skews.push(k);
    }
    let f = |theta: f64| -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let mut worst = f64::INFINITY;
        for (h, k) in herms.iter().zip(skews.iter()) {
            let combo = h.scale(c) + k.scale(s);
            let lmin = combo
                .symmetric_eigenvalues()
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            worst = worst.min(lmin);
        }
        worst
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
    // Golden-section refinement inside the bracketing grid cell.
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
    let margin = f(gamma).max(best_val);
    // Report the angle on the canonical interval.
    while gamma <= -std::f64::consts::PI {
        gamma += 2.0 * std::f64::consts::PI;
    }
    while gamma > std::f64::consts::PI {
        gamma -= 2.0 * std::f64::consts::PI;
    }
    Ok(SectorialityMargin { gamma, margin, scale })
}

/// Convenience wrapper for the margin test.
pub fn is_sectorial(a: &Tensor3) -> Result<bool> {
    Ok(sectoriality_margin(a)?.is_sectorial())
}
