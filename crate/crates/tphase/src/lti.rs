//! Frequency-domain analysis of tensor MIMO LTI systems.
//!
//! A system is described either by a real state-space tensor quadruple
//! (`x' = A*x + B*u`, `y = C*x + D*u`, all products T-products) or by frontal
//! slices of real-rational proper transfer functions.  Both induce the same
//! object of study: the transfer tensor `G(s) = C*(sI - A)^{-1}*B + D`, whose
//! block-circulant unfolding is an ordinary MIMO transfer matrix.  Everything
//! here works through that correspondence: gains are pooled singular values of
//! the Fourier slices, phases come from [`crate::phase`] applied per frequency,
//! and feedback stability is decided on a real state-space realization of the
//! unfolded loop.
//!
//! The small-gain and small-phase certificates check their respective
//! inequalities on a sampled frequency grid (plus `0` and the high-frequency
//! limit) with local golden-section refinement around the worst point.  The
//! underlying theorems quantify over *all* frequencies, so a grid pass is a
//! strong but not airtight argument; every [`Certificate`] carries that caveat
//! in its `notes`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{self, CMat};
use crate::phase;
use crate::tensor::{FourierSlices, Tensor3};
use crate::tol;

/// Dense real matrix used for flattened (block-circulant level) realizations.
pub type RMat = DMatrix<f64>;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// State-space tensors
// ---------------------------------------------------------------------------

/// Real state-space tensor quadruple with square `m x m x p` coefficients.
///
/// The state, input and output spaces all have tensor width `m`; the dynamics
/// are `x'(t) = A*x(t) + B*u(t)`, `y(t) = C*x(t) + D*u(t)` with `*` the
/// T-product, so the block-circulant unfoldings form an ordinary `mp`-state
/// LTI system with `mp` inputs and outputs.
#[derive(Debug, Clone)]
pub struct StateSpaceTensor {
    pub a: Tensor3,
    pub b: Tensor3,
    pub c: Tensor3,
    pub d: Tensor3,
}

impl StateSpaceTensor {
    /// Validates shapes (four equal `m x m x p` tensors) and realness, then
    /// stores the coefficients with imaginary parts dropped.
    pub fn new(a: Tensor3, b: Tensor3, c: Tensor3, d: Tensor3) -> Result<Self> {
        let shape = a.shape();
        let (m, n, _) = shape;
        if m != n {
            return Err(Error::ShapeMismatch(format!(
                "state tensor must have square frontal slices, got {shape:?}"
            )));
        }
        for (name, t) in [("B", &b), ("C", &c), ("D", &d)] {
            if t.shape() != shape {
                return Err(Error::ShapeMismatch(format!(
                    "{name} has shape {:?}, expected {shape:?}",
                    t.shape()
                )));
            }
        }
        let mut parts = [a, b, c, d];
        for t in &mut parts {
            let scale = 1.0 + t.max_abs();
            if t.max_imag_abs() > 1e-12 * scale {
                return Err(Error::Format(
                    "state-space coefficients must be real".into(),
                ));
            }
            *t = Tensor3::from_fn(t.nrows(), t.ncols(), t.depth(), |i, j, k| {
                cx(t.get(i, j, k).re, 0.0)
            });
        }
        let [a, b, c, d] = parts;
        Ok(StateSpaceTensor { a, b, c, d })
    }

    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    pub fn depth(&self) -> usize {
        self.a.depth()
    }

    /// Poles of the realization: eigenvalues of the state tensor pooled over
    /// Fourier slices (equivalently, of its block-circulant unfolding).
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(self.size() * self.depth());
        for s in &self.a.fourier_slices().slices {
            out.extend(kernels::complex_eigenvalues(s)?);
        }
        Ok(out)
    }

    /// Largest real part over the poles.
    pub fn spectral_abscissa(&self) -> Result<f64> {
        Ok(self
            .poles()?
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Hurwitz stability with a relative margin: the spectral abscissa must
    /// stay below `-tol * (1 + spectral radius)`.
    pub fn is_stable(&self) -> Result<bool> {
        let poles = self.poles()?;
        if poles.is_empty() {
            return Ok(true);
        }
        let abscissa = poles.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        let radius = poles.iter().map(|l| l.norm()).fold(0.0, f64::max);
        Ok(abscissa < -tol::STABILITY_ABSCISSA_REL * (1.0 + radius))
    }
}

// ---------------------------------------------------------------------------
// Rational transfer tensors
// ---------------------------------------------------------------------------

/// Real-rational function given by descending-power coefficient lists,
/// `num[0] s^dn + ... + num[dn]` over `den[0] s^dd + ... + den[dd]`.
///
/// An empty (or all-zero) numerator denotes the zero function.  Exact zero
/// leading coefficients are trimmed on construction.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RatFn {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

fn trim_leading_zeros(v: &[f64]) -> Vec<f64> {
    let start = v.iter().position(|x| *x != 0.0).unwrap_or(v.len());
    v[start..].to_vec()
}

impl RatFn {
    /// Builds a proper rational function; rejects zero denominators and
    /// numerators of higher degree than the denominator.
    pub fn new(num: &[f64], den: &[f64]) -> Result<Self> {
        if num.iter().chain(den).any(|x| !x.is_finite()) {
            return Err(Error::Format("rational coefficients must be finite".into()));
        }
        let num = trim_leading_zeros(num);
        let den = trim_leading_zeros(den);
        if den.is_empty() {
            return Err(Error::Format("zero denominator polynomial".into()));
        }
        if !num.is_empty() && num.len() > den.len() {
            return Err(Error::Format(format!(
                "improper entry: numerator degree {} exceeds denominator degree {}",
                num.len() - 1,
                den.len() - 1
            )));
        }
        Ok(RatFn { num, den })
    }

    /// The zero function.
    pub fn zero() -> Self {
        RatFn {
            num: Vec::new(),
            den: vec![1.0],
        }
    }

    /// Constant function.
    pub fn constant(c: f64) -> Self {
        RatFn {
            num: if c == 0.0 { Vec::new() } else { vec![c] },
            den: vec![1.0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn horner(coeffs: &[f64], s: Complex64) -> Complex64 {
        coeffs
            .iter()
            .fold(cx(0.0, 0.0), |acc, c| acc * s + cx(*c, 0.0))
    }

    /// Evaluates the function at `s`; the caller is responsible for staying
    /// away from denominator roots (see [`RationalSliceTf::response_tensor`]).
    pub fn eval(&self, s: Complex64) -> Complex64 {
        if self.num.is_empty() {
            return cx(0.0, 0.0);
        }
        Self::horner(&self.num, s) / Self::horner(&self.den, s)
    }

    /// Scale-aware magnitude floor of the denominator at `s`: the sum of
    /// `|den_i| |s|^(deg-i)`, against which `|den(s)|` is compared when
    /// deciding whether `s` is effectively a pole.
    fn den_magnitude_scale(&self, s: Complex64) -> f64 {
        let r = s.norm();
        self.den.iter().fold(0.0, |acc, c| acc * r + c.abs()).max(1.0)
    }

    /// High-frequency limit: zero for strictly proper entries, otherwise the
    /// leading-coefficient ratio.
    pub fn limit_at_infinity(&self) -> f64 {
        if self.num.len() == self.den.len() {
            self.num[0] / self.den[0]
        } else {
            0.0
        }
    }

    /// Roots of the denominator via the companion matrix.
    pub fn den_roots(&self) -> Result<Vec<Complex64>> {
        poly_roots(&self.den)
    }
}

/// Roots of a real polynomial in descending coefficient order.
fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c = trim_leading_zeros(coeffs);
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let n = c.len() - 1;
    let lead = c[0];
    let mut comp = CMat::zeros(n, n);
    for i in 0..n - 1 {
        comp[(i + 1, i)] = cx(1.0, 0.0);
    }
    for i in 0..n {
        // Last column carries -c_{n-i}/c_0 so the characteristic polynomial
        // reproduces the monic form of `coeffs`.
        comp[(i, n - 1)] = cx(-c[n - i] / lead, 0.0);
    }
    kernels::complex_eigenvalues(&comp)
}

/// Transfer tensor given as `p` frontal slices of `m x m` real-rational
/// proper functions.
#[derive(Debug, Clone)]
pub struct RationalSliceTf {
    m: usize,
    p: usize,
    entries: Vec<RatFn>,
}

impl RationalSliceTf {
    /// Builds from `slices[k][i][j]`; every row must have length `m` and
    /// every slice `m` rows.
    pub fn new(slices: Vec<Vec<Vec<RatFn>>>) -> Result<Self> {
        let p = slices.len();
        if p == 0 {
            return Err(Error::ShapeMismatch("no frontal slices".into()));
        }
        let m = slices[0].len();
        if m == 0 {
            return Err(Error::ShapeMismatch("empty frontal slice".into()));
        }
        let mut entries = Vec::with_capacity(m * m * p);
        for (k, slice) in slices.into_iter().enumerate() {
            if slice.len() != m {
                return Err(Error::ShapeMismatch(format!(
                    "slice {k} has {} rows, expected {m}",
                    slice.len()
                )));
            }
            for row in slice {
                if row.len() != m {
                    return Err(Error::ShapeMismatch(format!(
                        "slice {k} has a row of length {}, expected {m}",
                        row.len()
                    )));
                }
                entries.extend(row);
            }
        }
        Ok(RationalSliceTf { m, p, entries })
    }

    /// A scalar (`1 x 1 x 1`) system.
    pub fn scalar(r: RatFn) -> Self {
        RationalSliceTf {
            m: 1,
            p: 1,
            entries: vec![r],
        }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &RatFn {
        &self.entries[(k * self.m + i) * self.m + j]
    }

    /// All denominator roots, with multiplicity, pooled over the entries.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let mut out = Vec::new();
        for e in &self.entries {
            if !e.is_zero() {
                out.extend(e.den_roots()?);
            }
        }
        Ok(out)
    }

    /// Membership in the stable proper class: every denominator root sits
    /// strictly in the open left half plane (margin `1e-9` on the real part).
    pub fn is_stable(&self) -> Result<bool> {
        Ok(self
            .poles()?
            .iter()
            .all(|r| r.re < -tol::STABILITY_ABSCISSA_REL))
    }

    /// Frontal-slice evaluation at `s = j omega`.
    pub fn response_tensor(&self, omega: f64) -> Result<Tensor3> {
        let s = cx(0.0, omega);
        for e in &self.entries {
            if !e.is_zero() {
                let mag = RatFn::horner(&e.den, s).norm();
                if mag <= tol::POLE_PROXIMITY_REL * e.den_magnitude_scale(s) {
                    return Err(Error::PoleAtFrequency(format!(
                        "denominator vanishes at omega = {omega}"
                    )));
                }
            }
        }
        Ok(Tensor3::from_fn(self.m, self.m, self.p, |i, j, k| {
            self.entry(i, j, k).eval(s)
        }))
    }

    /// High-frequency limit tensor (leading-coefficient ratios).
    pub fn at_infinity(&self) -> Tensor3 {
        Tensor3::from_fn(self.m, self.m, self.p, |i, j, k| {
            cx(self.entry(i, j, k).limit_at_infinity(), 0.0)
        })
    }
}

// ---------------------------------------------------------------------------
// Unified transfer-tensor handle
// ---------------------------------------------------------------------------

/// A transfer tensor in either representation.
#[derive(Debug, Clone)]
pub enum TransferTensor {
    StateSpace(StateSpaceTensor),
    Rational(RationalSliceTf),
}

impl From<StateSpaceTensor> for TransferTensor {
    fn from(s: StateSpaceTensor) -> Self {
        TransferTensor::StateSpace(s)
    }
}

impl From<RationalSliceTf> for TransferTensor {
    fn from(r: RationalSliceTf) -> Self {
        TransferTensor::Rational(r)
    }
}

impl TransferTensor {
    pub fn size(&self) -> usize {
        match self {
            TransferTensor::StateSpace(s) => s.size(),
            TransferTensor::Rational(r) => r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TransferTensor::StateSpace(s) => s.depth(),
            TransferTensor::Rational(r) => r.depth(),
        }
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        match self {
            TransferTensor::StateSpace(s) => s.poles(),
            TransferTensor::Rational(r) => r.poles(),
        }
    }

    pub fn is_stable(&self) -> Result<bool> {
        match self {
            TransferTensor::StateSpace(s) => s.is_stable(),
            TransferTensor::Rational(r) => r.is_stable(),
        }
    }

    /// High-frequency limit: `D` for a state-space system, leading-coefficient
    /// ratios for a rational one.
    pub fn at_infinity(&self) -> Tensor3 {
        match self {
            TransferTensor::StateSpace(s) => s.d.clone(),
            TransferTensor::Rational(r) => r.at_infinity(),
        }
    }

    fn sampler(&self) -> Result<ResponseSampler<'_>> {
        ResponseSampler::new(self)
    }
}

/// Per-system evaluation cache: for state-space systems the Fourier slices of
/// the coefficients and the per-slice pole lists are computed once and reused
/// across a frequency sweep.
enum ResponseSampler<'a> {
    Ss {
        a_hat: Vec<CMat>,
        b_hat: Vec<CMat>,
        c_hat: Vec<CMat>,
        d_hat: Vec<CMat>,
        slice_poles: Vec<Vec<Complex64>>,
    },
    Rational(&'a RationalSliceTf),
    /// High-frequency limit blocks, shared by both representations.
    Limit(Vec<CMat>),
}

impl<'a> ResponseSampler<'a> {
    fn new(sys: &'a TransferTensor) -> Result<Self> {
        match sys {
            TransferTensor::StateSpace(s) => {
                let a_hat = s.a.fourier_slices().slices;
                let mut slice_poles = Vec::with_capacity(a_hat.len());
                for blk in &a_hat {
                    slice_poles.push(kernels::complex_eigenvalues(blk)?);
                }
                Ok(ResponseSampler::Ss {
                    a_hat,
                    b_hat: s.b.fourier_slices().slices,
                    c_hat: s.c.fourier_slices().slices,
                    d_hat: s.d.fourier_slices().slices,
                    slice_poles,
                })
            }
            TransferTensor::Rational(r) => Ok(ResponseSampler::Rational(r)),
        }
    }

    fn limit(sys: &TransferTensor) -> ResponseSampler<'static> {
        ResponseSampler::Limit(sys.at_infinity().fourier_slices().slices)
    }

    /// Fourier blocks of the response at `j omega` (`omega` may be signed;
    /// `inf` is not handled here — see [`freq_response`]).
    fn fourier_blocks(&self, omega: f64) -> Result<Vec<CMat>> {
        match self {
            ResponseSampler::Ss {
                a_hat,
                b_hat,
                c_hat,
                d_hat,
                slice_poles,
            } => {
                let jw = cx(0.0, omega);
                let mut blocks = Vec::with_capacity(a_hat.len());
                for (k, a) in a_hat.iter().enumerate() {
                    for l in &slice_poles[k] {
                        if (jw - l).norm() <= tol::POLE_PROXIMITY_REL * (1.0 + l.norm()) {
                            return Err(Error::PoleAtFrequency(format!(
                                "omega = {omega} meets a pole of Fourier slice {k} at {l}"
                            )));
                        }
                    }
                    let n = a.nrows();
                    let mut resolvent_arg = -a.clone();
                    for i in 0..n {
                        resolvent_arg[(i, i)] += jw;
                    }
                    let x = resolvent_arg.lu().solve(&b_hat[k]).ok_or_else(|| {
                        Error::PoleAtFrequency(format!(
                            "resolvent solve failed at omega = {omega}, slice {k}"
                        ))
                    })?;
                    blocks.push(&c_hat[k] * x + &d_hat[k]);
                }
                Ok(blocks)
            }
            ResponseSampler::Rational(r) => {
                Ok(r.response_tensor(omega)?.fourier_slices().slices)
            }
            ResponseSampler::Limit(blocks) => Ok(blocks.clone()),
        }
    }
}

/// Evaluates `G(j omega)` as a frontal-slice tensor.  `omega` may be any real
/// number (conjugate symmetry holds for the real data handled here), or
/// `f64::INFINITY` for the high-frequency limit.
pub fn freq_response(sys: &TransferTensor, omega: f64) -> Result<Tensor3> {
    if omega.is_infinite() {
        return Ok(sys.at_infinity());
    }
    if omega.is_nan() {
        return Err(Error::Format("frequency must not be NaN".into()));
    }
    let blocks = sys.sampler()?.fourier_blocks(omega)?;
    Ok(FourierSlices::from_blocks(blocks)?.to_tensor())
}

// ---------------------------------------------------------------------------
// Frequency grids
// ---------------------------------------------------------------------------

/// Logarithmically spaced frequency grid.  Analyses add `omega = 0` and the
/// high-frequency limit on top of these interior points.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        FrequencyGrid {
            lo: tol::DEFAULT_GRID_WMIN,
            hi: tol::DEFAULT_GRID_WMAX,
            n: tol::DEFAULT_GRID_POINTS,
        }
    }
}

impl FrequencyGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::Format(format!(
                "grid bounds must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n < 2 {
            return Err(Error::Format("grid needs at least two points".into()));
        }
        Ok(FrequencyGrid { lo, hi, n })
    }

    /// The interior grid points, ascending, endpoints included.
    pub fn points(&self) -> Vec<f64> {
        let (la, lb) = (self.lo.ln(), self.hi.ln());
        (0..self.n)
            .map(|i| (la + (lb - la) * i as f64 / (self.n - 1) as f64).exp())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Gains and the H-infinity norm
// ---------------------------------------------------------------------------

/// `(largest, smallest)` singular value pooled over Fourier blocks — the
/// extreme singular values of the block-circulant unfolding.
fn sigma_extremes(blocks: &[CMat]) -> (f64, f64) {
    let mut hi = 0.0f64;
    let mut lo = f64::INFINITY;
    for b in blocks {
        let sv = b.clone().svd(false, false).singular_values;
        for s in sv.iter() {
            hi = hi.max(*s);
            lo = lo.min(*s);
        }
    }
    (hi, lo)
}

/// Golden-section maximization of `f` on `[lo, hi]`.  Returns `(argmax, max)`
/// over the probed points; deterministic for deterministic `f`.
fn golden_max<F: FnMut(f64) -> Result<f64>>(
    lo: f64,
    hi: f64,
    iters: usize,
    mut f: F,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        let (x, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Row layout shared by the sweep-based analyses: `0`, the interior grid,
/// then the high-frequency limit (represented as `f64::INFINITY`).
fn sweep_rows(grid: &[f64]) -> Vec<f64> {
    let mut rows = Vec::with_capacity(grid.len() + 2);
    rows.push(0.0);
    rows.extend_from_slice(grid);
    rows.push(f64::INFINITY);
    rows
}

/// Bracket around index `i` in the finite prefix of `rows` for local
/// refinement; `None` when the worst point is the high-frequency limit.
fn refine_bracket(rows: &[f64], i: usize) -> Option<(f64, f64)> {
    if rows[i].is_infinite() {
        return None;
    }
    let last_finite = rows.len() - 2;
    let lo = if i == 0 { rows[0] } else { rows[i - 1] };
    let hi = if i >= last_finite { rows[last_finite] } else { rows[i + 1] };
    if hi > lo {
        Some((lo, hi))
    } else {
        None
    }
}

/// Supremum of the largest pooled singular value of `G(j omega)` over
/// `{0} ∪ grid ∪ {inf}`, with golden-section refinement around the grid
/// argmax.  Requires a stable system.
pub fn hinf_norm(sys: &TransferTensor, grid: &[f64]) -> Result<f64> {
    if !sys.is_stable()? {
        return Err(Error::Unstable(
            "the H-infinity norm is defined for stable systems only".into(),
        ));
    }
    let sampler = sys.sampler()?;
    let limit = ResponseSampler::limit(sys);
    let rows = sweep_rows(grid);
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, w) in rows.iter().enumerate() {
        let blocks = if w.is_infinite() {
            limit.fourier_blocks(0.0)?
        } else {
            sampler.fourier_blocks(*w)?
        };
        let (hi, _) = sigma_extremes(&blocks);
        if hi > best.1 {
            best = (i, hi);
        }
    }
    let mut value = best.1;
    if let Some((lo, hi)) = refine_bracket(&rows, best.0) {
        let (_, refined) = golden_max(lo, hi, 70, |w| {
            Ok(sigma_extremes(&sampler.fourier_blocks(w)?).0)
        })?;
        value = value.max(refined);
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Phase envelope
// ---------------------------------------------------------------------------

/// Frequency-wise gain and phase extremes of a stable transfer tensor.
///
/// Rows are ordered `omega = 0`, the interior grid ascending, then the
/// high-frequency limit (stored as `f64::INFINITY`).  Phases are canonical
/// tensor phases in radians; rows where the response is not sectorial carry
/// `NaN` phases and a `false` flag, which is a recorded fact rather than an
/// error.  `hinf` accumulates the largest pooled singular value seen.
#[derive(Debug, Clone)]
pub struct PhaseEnvelope {
    pub omegas: Vec<f64>,
    pub sigma_max: Vec<f64>,
    pub sigma_min: Vec<f64>,
    pub phi_max: Vec<f64>,
    pub phi_min: Vec<f64>,
    pub sectorial: Vec<bool>,
    pub hinf: f64,
}

impl PhaseEnvelope {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn all_sectorial(&self) -> bool {
        self.sectorial.iter().all(|s| *s)
    }

    /// Largest phase over the sectorial rows.
    pub fn phi_sup(&self) -> Option<f64> {
        self.sectorial
            .iter()
            .zip(&self.phi_max)
            .filter(|(s, _)| **s)
            .map(|(_, v)| *v)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
    }

    /// Smallest phase over the sectorial rows.
    pub fn phi_inf(&self) -> Option<f64> {
        self.sectorial
            .iter()
            .zip(&self.phi_min)
            .filter(|(s, _)| **s)
            .map(|(_, v)| *v)
            .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.min(v))))
    }

    /// Width of the phase envelope, when defined anywhere.
    pub fn spread(&self) -> Option<f64> {
        Some(self.phi_sup()? - self.phi_inf()?)
    }
}

/// Phase extremes of a block list; `Ok(None)` when the tensor at this
/// frequency is not sectorial.
fn phase_bounds_of_blocks(blocks: Vec<CMat>) -> Result<Option<(f64, f64)>> {
    match phase::canonical_phases_of_blocks(blocks) {
        Ok(f) => Ok(Some((f.phases.max(), f.phases.min()))),
        Err(Error::NotSectorial(_)) | Err(Error::BranchSpread(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Sweeps the response over `{0} ∪ grid ∪ {inf}` and records gain and phase
/// extremes per frequency.  Requires a stable system; non-sectorial
/// frequencies are flagged, not fatal.
pub fn phase_envelope(sys: &TransferTensor, grid: &[f64]) -> Result<PhaseEnvelope> {
    if !sys.is_stable()? {
        return Err(Error::Unstable(
            "the phase envelope is defined for stable systems only".into(),
        ));
    }
    let sampler = sys.sampler()?;
    let limit = ResponseSampler::limit(sys);
    let rows = sweep_rows(grid);
    let n = rows.len();
    let mut env = PhaseEnvelope {
        omegas: rows.clone(),
        sigma_max: Vec::with_capacity(n),
        sigma_min: Vec::with_capacity(n),
        phi_max: Vec::with_capacity(n),
        phi_min: Vec::with_capacity(n),
        sectorial: Vec::with_capacity(n),
        hinf: 0.0,
    };
    for w in &rows {
        let blocks = if w.is_infinite() {
            limit.fourier_blocks(0.0)?
        } else {
            sampler.fourier_blocks(*w)?
        };
        let (hi, lo) = sigma_extremes(&blocks);
        env.sigma_max.push(hi);
        env.sigma_min.push(lo);
        env.hinf = env.hinf.max(hi);
        match phase_bounds_of_blocks(blocks)? {
            Some((pmax, pmin)) => {
                env.phi_max.push(pmax);
                env.phi_min.push(pmin);
                env.sectorial.push(true);
            }
            None => {
                env.phi_max.push(f64::NAN);
                env.phi_min.push(f64::NAN);
                env.sectorial.push(false);
            }
        }
    }
    Ok(env)
}

// ---------------------------------------------------------------------------
// Flattened realizations and feedback
// ---------------------------------------------------------------------------

/// Real state-space data for the block-circulant unfolding of a transfer
/// tensor: `n` states, `mp` inputs and `mp` outputs.
#[derive(Debug, Clone)]
struct FlatRealization {
    a: RMat,
    b: RMat,
    c: RMat,
    d: RMat,
}

fn real_part(m: &CMat) -> RMat {
    RMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

/// Controllable-canonical realization of one proper rational entry.
/// Returns `(a, b, c, d)` with `a` of size `deg x deg`.
fn siso_realization(r: &RatFn) -> (RMat, RMat, RMat, f64) {
    if r.is_zero() || r.den.len() == 1 {
        let d = if r.is_zero() {
            0.0
        } else {
            r.num[0] / r.den[0]
        };
        return (RMat::zeros(0, 0), RMat::zeros(0, 1), RMat::zeros(1, 0), d);
    }
    let n = r.den.len() - 1;
    let lead = r.den[0];
    // den coefficient of s^t, monic scale.
    let den_c = |t: usize| r.den[n - t] / lead;
    let num_c = |t: usize| {
        let l = r.num.len();
        if t < l {
            r.num[l - 1 - t] / lead
        } else {
            0.0
        }
    };
    let d = if r.num.len() == n + 1 { num_c(n) } else { 0.0 };
    let mut a = RMat::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for t in 0..n {
        a[(n - 1, t)] = -den_c(t);
    }
    let mut b = RMat::zeros(n, 1);
    b[(n - 1, 0)] = 1.0;
    let mut c = RMat::zeros(1, n);
    for t in 0..n {
        c[(0, t)] = num_c(t) - d * den_c(t);
    }
    (a, b, c, d)
}

impl FlatRealization {
    fn of(sys: &TransferTensor) -> Self {
        match sys {
            TransferTensor::StateSpace(s) => FlatRealization {
                a: real_part(&s.a.bcirc()),
                b: real_part(&s.b.bcirc()),
                c: real_part(&s.c.bcirc()),
                d: real_part(&s.d.bcirc()),
            },
            TransferTensor::Rational(r) => {
                let (m, p) = (r.size(), r.depth());
                let mp = m * p;
                // One SISO block per entry of the block-circulant unfolding;
                // unfolding block (br, bc) carries frontal slice (br - bc mod p).
                let mut parts = Vec::new();
                let mut n_total = 0;
                for br in 0..p {
                    for bc in 0..p {
                        let k = (br + p - bc) % p;
                        for i in 0..m {
                            for j in 0..m {
                                let (ae, be, ce, de) = siso_realization(r.entry(i, j, k));
                                let row = br * m + i;
                                let col = bc * m + j;
                                n_total += ae.nrows();
                                parts.push((row, col, ae, be, ce, de));
                            }
                        }
                    }
                }
                let mut a = RMat::zeros(n_total, n_total);
                let mut b = RMat::zeros(n_total, mp);
                let mut c = RMat::zeros(mp, n_total);
                let mut d = RMat::zeros(mp, mp);
                let mut at = 0;
                for (row, col, ae, be, ce, de) in parts {
                    let ne = ae.nrows();
                    a.view_mut((at, at), (ne, ne)).copy_from(&ae);
                    b.view_mut((at, col), (ne, 1)).copy_from(&be);
                    c.view_mut((row, at), (1, ne)).copy_from(&ce);
                    d[(row, col)] += de;
                    at += ne;
                }
                FlatRealization { a, b, c, d }
            }
        }
    }
}

/// Feedback analysis outcome: the closed-loop state matrix of the unfolded
/// loop, its poles, and the well-posedness margin.
#[derive(Debug, Clone)]
pub struct FeedbackReport {
    pub stable: bool,
    pub spectral_abscissa: f64,
    pub poles: Vec<Complex64>,
    pub well_posed_sv: f64,
}

/// The four closed-loop responses of a negative-feedback interconnection,
/// realized on the block-circulant unfolding.
///
/// For plant `G` and controller `H` the blocks are
/// `[[S, S*H], [G*S, G*S*H]]` with `S = (I + H*G)^{-1}`, assembled as a
/// `2m x 2m x p` tensor per frequency by [`GangOfFour::eval`].
#[derive(Debug)]
pub struct GangOfFour {
    pub m: usize,
    pub p: usize,
    /// Smallest singular value of `I + H(inf) G(inf)`.
    pub well_posed_sv: f64,
    g: TransferTensor,
    h: TransferTensor,
    closed_loop_a: RMat,
}

/// Forms the closed-loop interconnection.  Fails with `IllPosed` when the
/// algebraic loop `I + H(inf) G(inf)` is (numerically) singular.
pub fn gang_of_four(g: &TransferTensor, h: &TransferTensor) -> Result<GangOfFour> {
    let (m, p) = (g.size(), g.depth());
    if h.size() != m || h.depth() != p {
        return Err(Error::ShapeMismatch(format!(
            "incompatible loop shapes {}x{}x{} and {}x{}x{}",
            m,
            m,
            p,
            h.size(),
            h.size(),
            h.depth()
        )));
    }
    let gf = FlatRealization::of(g);
    let hf = FlatRealization::of(h);
    let mp = m * p;
    let s0_arg = RMat::identity(mp, mp) + &hf.d * &gf.d;
    let sv = s0_arg
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, s| acc.min(*s));
    if sv <= tol::WELL_POSED_MIN_SV {
        return Err(Error::IllPosed(format!(
            "smallest singular value of I + H(inf) G(inf) is {sv:.3e}"
        )));
    }
    let s0 = s0_arg.lu().try_inverse().ok_or_else(|| {
        Error::IllPosed("I + H(inf) G(inf) is numerically singular".into())
    })?;
    let (ng, nh) = (gf.a.nrows(), hf.a.nrows());
    let mut acl = RMat::zeros(ng + nh, ng + nh);
    let a11 = &gf.a - &gf.b * &s0 * &hf.d * &gf.c;
    let a12 = &gf.b * &s0 * &hf.c;
    let a21 = &hf.b * &gf.d * &s0 * &hf.d * &gf.c - &hf.b * &gf.c;
    let a22 = &hf.a - &hf.b * &gf.d * &s0 * &hf.c;
    acl.view_mut((0, 0), (ng, ng)).copy_from(&a11);
    acl.view_mut((0, ng), (ng, nh)).copy_from(&a12);
    acl.view_mut((ng, 0), (nh, ng)).copy_from(&a21);
    acl.view_mut((ng, ng), (nh, nh)).copy_from(&a22);
    Ok(GangOfFour {
        m,
        p,
        well_posed_sv: sv,
        g: g.clone(),
        h: h.clone(),
        closed_loop_a: acl,
    })
}

impl GangOfFour {
    /// Closed-loop poles: eigenvalues of the unfolded closed-loop state
    /// matrix.  Non-minimal modes of the entry-wise realization stay at their
    /// open-loop locations, which is the conservative (internal) notion.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let n = self.closed_loop_a.nrows();
        if n == 0 {
            return Ok(Vec::new());
        }
        let complex = CMat::from_fn(n, n, |i, j| cx(self.closed_loop_a[(i, j)], 0.0));
        kernels::complex_eigenvalues(&complex)
    }

    /// Stability of the closed loop with the relative abscissa margin.
    pub fn feedback_report(&self) -> Result<FeedbackReport> {
        let poles = self.poles()?;
        if poles.is_empty() {
            return Ok(FeedbackReport {
                stable: true,
                spectral_abscissa: f64::NEG_INFINITY,
                poles,
                well_posed_sv: self.well_posed_sv,
            });
        }
        let abscissa = poles.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        let radius = poles.iter().map(|l| l.norm()).fold(0.0, f64::max);
        Ok(FeedbackReport {
            stable: abscissa < -tol::STABILITY_ABSCISSA_REL * (1.0 + radius),
            spectral_abscissa: abscissa,
            poles,
            well_posed_sv: self.well_posed_sv,
        })
    }

    /// The four blocks at one frequency, computed per Fourier slice of the
    /// two responses: `(S, S*H, G*S, G*S*H)`.
    pub fn eval_blocks(
        &self,
        omega: f64,
    ) -> Result<(Tensor3, Tensor3, Tensor3, Tensor3)> {
        let g_blocks = if omega.is_infinite() {
            ResponseSampler::limit(&self.g).fourier_blocks(0.0)?
        } else {
            self.g.sampler()?.fourier_blocks(omega)?
        };
        let h_blocks = if omega.is_infinite() {
            ResponseSampler::limit(&self.h).fourier_blocks(0.0)?
        } else {
            self.h.sampler()?.fourier_blocks(omega)?
        };
        let mut s = Vec::with_capacity(self.p);
        let mut sh = Vec::with_capacity(self.p);
        let mut gs = Vec::with_capacity(self.p);
        let mut gsh = Vec::with_capacity(self.p);
        for k in 0..self.p {
            let loop_gain = CMat::identity(self.m, self.m) + &h_blocks[k] * &g_blocks[k];
            let sk = loop_gain.lu().try_inverse().ok_or_else(|| {
                Error::IllPosed(format!(
                    "I + H G singular at omega = {omega}, Fourier slice {k}"
                ))
            })?;
            sh.push(&sk * &h_blocks[k]);
            gs.push(&g_blocks[k] * &sk);
            gsh.push(&g_blocks[k] * &sk * &h_blocks[k]);
            s.push(sk);
        }
        let to_tensor =
            |v: Vec<CMat>| -> Result<Tensor3> { Ok(FourierSlices::from_blocks(v)?.to_tensor()) };
        Ok((to_tensor(s)?, to_tensor(sh)?, to_tensor(gs)?, to_tensor(gsh)?))
    }

    /// The blocks assembled into one `2m x 2m x p` tensor,
    /// `[[S, S*H], [G*S, G*S*H]]` slice by slice.
    pub fn eval(&self, omega: f64) -> Result<Tensor3> {
        let (s, sh, gs, gsh) = self.eval_blocks(omega)?;
        let m = self.m;
        Ok(Tensor3::from_fn(2 * m, 2 * m, self.p, |i, j, k| {
            match (i < m, j < m) {
                (true, true) => s.get(i, j, k),
                (true, false) => sh.get(i, j - m, k),
                (false, true) => gs.get(i - m, j, k),
                (false, false) => gsh.get(i - m, j - m, k),
            }
        }))
    }
}

/// Closed-loop stability of the negative-feedback interconnection of `g`
/// and `h`, decided on the unfolded realization.
pub fn feedback_stable(g: &TransferTensor, h: &TransferTensor) -> Result<FeedbackReport> {
    gang_of_four(g, h)?.feedback_report()
}

// ---------------------------------------------------------------------------
// Stability certificates
// ---------------------------------------------------------------------------

/// Outcome of a sufficient stability test.  `Inconclusive` means the tested
/// inequality failed somewhere; it never claims instability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Inconclusive,
}

/// Result of a small-gain or small-phase test.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Positive slack of the binding inequality (negative when violated).
    pub margin: f64,
    /// Frequency at which the inequality is tightest (`inf` for the limit).
    pub worst_omega: f64,
    /// Frequencies at which the inequality fails (empty when certified).
    pub offending: Vec<f64>,
    /// Closed-loop check run after a successful certificate.
    pub feedback: Option<FeedbackReport>,
    /// Always states the grid-based nature of the check.
    pub notes: String,
}

fn grid_caveat(test: &str, rows: usize) -> String {
    format!(
        "{test} verified on {rows} sampled frequencies (0, a log grid and the \
         high-frequency limit) with golden-section refinement around the worst \
         point; the underlying result quantifies over all frequencies, so the \
         certificate is as strong as the sampling."
    )
}

/// Small-gain test: certifies closed-loop stability when the product of the
/// largest pooled singular values stays below one over the sweep.
pub fn small_gain_certificate(
    g: &TransferTensor,
    h: &TransferTensor,
    grid: &[f64],
) -> Result<Certificate> {
    for (name, sys) in [("first", g), ("second", h)] {
        if !sys.is_stable()? {
            return Err(Error::Unstable(format!(
                "small-gain test requires stable systems; the {name} operand is not"
            )));
        }
    }
    let gs = g.sampler()?;
    let hs = h.sampler()?;
    let g_limit = ResponseSampler::limit(g);
    let h_limit = ResponseSampler::limit(h);
    let rows = sweep_rows(grid);
    let product_at = |w: f64| -> Result<f64> {
        let (gb, hb) = if w.is_infinite() {
            (g_limit.fourier_blocks(0.0)?, h_limit.fourier_blocks(0.0)?)
        } else {
            (gs.fourier_blocks(w)?, hs.fourier_blocks(w)?)
        };
        Ok(sigma_extremes(&gb).0 * sigma_extremes(&hb).0)
    };
    let mut offending = Vec::new();
    let mut worst = (0usize, f64::NEG_INFINITY);
    for (i, w) in rows.iter().enumerate() {
        let prod = product_at(*w)?;
        if prod >= 1.0 {
            offending.push(*w);
        }
        if prod > worst.1 {
            worst = (i, prod);
        }
    }
    let mut worst_omega = rows[worst.0];
    let mut worst_value = worst.1;
    if let Some((lo, hi)) = refine_bracket(&rows, worst.0) {
        let (at, refined) = golden_max(lo, hi, 70, product_at)?;
        if refined > worst_value {
            worst_value = refined;
            worst_omega = at;
            if refined >= 1.0 && !offending.contains(&at) {
                offending.push(at);
            }
        }
    }
    let margin = 1.0 - worst_value;
    let certified = margin > 0.0;
    let feedback = if certified {
        Some(feedback_stable(g, h)?)
    } else {
        None
    };
    Ok(Certificate {
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        },
        margin,
        worst_omega,
        offending,
        feedback,
        notes: grid_caveat("small-gain inequality", rows.len()),
    })
}

/// Small-phase test: certifies closed-loop stability when the canonical
/// phase extremes satisfy `phi_max(G) + phi_max(H) < pi` and
/// `phi_min(G) + phi_min(H) > -pi` over the sweep.
///
/// Sectoriality of both responses is a precondition of the theorem;
/// frequencies where either response fails it (in the strict sense checked
/// by the phase module) abort the test with `SectorAssumptionViolated`.
pub fn small_phase_certificate(
    g: &TransferTensor,
    h: &TransferTensor,
    grid: &[f64],
) -> Result<Certificate> {
    let env_g = phase_envelope(g, grid)?;
    let env_h = phase_envelope(h, grid)?;
    let rows = &env_g.omegas;
    let bad: Vec<f64> = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| !env_g.sectorial[*i] || !env_h.sectorial[*i])
        .map(|(_, w)| *w)
        .collect();
    if !bad.is_empty() {
        return Err(Error::SectorAssumptionViolated(format!(
            "response not sectorial at omega in {bad:?}"
        )));
    }
    let gs = g.sampler()?;
    let hs = h.sampler()?;
    let bounds_at = |w: f64| -> Result<(f64, f64)> {
        let sum = |gb: Vec<CMat>, hb: Vec<CMat>, w: f64| -> Result<(f64, f64)> {
            let gp = phase_bounds_of_blocks(gb)?;
            let hp = phase_bounds_of_blocks(hb)?;
            match (gp, hp) {
                (Some((gmax, gmin)), Some((hmax, hmin))) => {
                    Ok((gmax + hmax, gmin + hmin))
                }
                _ => Err(Error::SectorAssumptionViolated(format!(
                    "response not sectorial at omega = {w}"
                ))),
            }
        };
        sum(gs.fourier_blocks(w)?, hs.fourier_blocks(w)?, w)
    };
    let mut up_worst = (0usize, f64::NEG_INFINITY);
    let mut lo_worst = (0usize, f64::INFINITY);
    let mut offending = Vec::new();
    for (i, &w) in rows.iter().enumerate() {
        let up = env_g.phi_max[i] + env_h.phi_max[i];
        let lo = env_g.phi_min[i] + env_h.phi_min[i];
        if up >= std::f64::consts::PI || lo <= -std::f64::consts::PI {
            offending.push(w);
        }
        if up > up_worst.1 {
            up_worst = (i, up);
        }
        if lo < lo_worst.1 {
            lo_worst = (i, lo);
        }
    }
    let mut up_at = rows[up_worst.0];
    let mut up_val = up_worst.1;
    if let Some((lo, hi)) = refine_bracket(rows, up_worst.0) {
        let (at, v) = golden_max(lo, hi, 70, |w| Ok(bounds_at(w)?.0))?;
        if v > up_val {
            up_val = v;
            up_at = at;
        }
    }
    let mut lo_at = rows[lo_worst.0];
    let mut lo_val = lo_worst.1;
    if let Some((a, b)) = refine_bracket(rows, lo_worst.0) {
        let (at, v) = golden_max(a, b, 70, |w| Ok(-bounds_at(w)?.1))?;
        if -v < lo_val {
            lo_val = -v;
            lo_at = at;
        }
    }
    let up_margin = std::f64::consts::PI - up_val;
    let lo_margin = lo_val + std::f64::consts::PI;
    let (margin, worst_omega) = if up_margin <= lo_margin {
        (up_margin, up_at)
    } else {
        (lo_margin, lo_at)
    };
    if margin <= 0.0 {
        for w in [up_at, lo_at] {
            if !offending.contains(&w)
                && (up_val >= std::f64::consts::PI || lo_val <= -std::f64::consts::PI)
            {
                offending.push(w);
            }
        }
    }
    let certified = margin > 0.0;
    let feedback = if certified {
        Some(feedback_stable(g, h)?)
    } else {
        None
    };
    Ok(Certificate {
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::Inconclusive
        },
        margin,
        worst_omega,
        offending,
        feedback,
        notes: grid_caveat("small-phase inequalities", rows.len()),
    })
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

fn csv_cell(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Renders a phase envelope as CSV with degrees for the phase columns.
/// Column layout: `omega_rad_s, sigma_max, sigma_min, phi_max_deg,
/// phi_min_deg, sectorial`; one row per sweep point, `omega = 0` first and
/// the `inf` sentinel last.
pub fn bode_csv(env: &PhaseEnvelope) -> String {
    let mut out =
        String::from("omega_rad_s,sigma_max,sigma_min,phi_max_deg,phi_min_deg,sectorial\n");
    for i in 0..env.len() {
        let deg = 180.0 / std::f64::consts::PI;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_cell(env.omegas[i]),
            csv_cell(env.sigma_max[i]),
            csv_cell(env.sigma_min[i]),
            csv_cell(env.phi_max[i] * deg),
            csv_cell(env.phi_min[i] * deg),
            u8::from(env.sectorial[i]),
        ));
    }
    out
}

/// Sweeps the system and writes the Bode data as CSV; returns the envelope.
pub fn bode_export(
    sys: &TransferTensor,
    grid: &[f64],
    path: &std::path::Path,
) -> Result<PhaseEnvelope> {
    let env = phase_envelope(sys, grid)?;
    std::fs::write(path, bode_csv(&env))?;
    Ok(env)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn scalar_rational(num: &[f64], den: &[f64]) -> TransferTensor {
        RationalSliceTf::scalar(RatFn::new(num, den).unwrap()).into()
    }

    /// 2x2x2 rational test system with symmetric slices over `s^2 + 2s + 2`.
    fn coupled_lag_pair() -> RationalSliceTf {
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
    }

    fn zero_rational(m: usize, p: usize) -> RationalSliceTf {
        RationalSliceTf::new(vec![vec![vec![RatFn::zero(); m]; m]; p]).unwrap()
    }

    fn static_gain(mat: &[Vec<f64>], p: usize) -> RationalSliceTf {
        let m = mat.len();
        RationalSliceTf::new(
            (0..p)
                .map(|k| {
                    (0..m)
                        .map(|i| {
                            (0..m)
                                .map(|j| {
                                    if k == 0 {
                                        RatFn::constant(mat[i][j])
                                    } else {
                                        RatFn::zero()
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn dense_response(sys: &TransferTensor, omega: f64) -> CMat {
        freq_response(sys, omega).unwrap().bcirc()
    }

    // -- responses ---------------------------------------------------------

    #[test]
    fn static_system_response_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = sampling::random_real_tensor(2, 2, 3, &mut rng);
        // A static gain still needs a (stable, decoupled) state block.
        let a = Tensor3::identity(2, 3).scale(cx(-1.0, 0.0));
        let z = Tensor3::zeros(2, 2, 3);
        let sys: TransferTensor = StateSpaceTensor::new(a, z.clone(), z, d.clone())
            .unwrap()
            .into();
        for w in [0.0, 0.3, 17.0, f64::INFINITY] {
            let r = freq_response(&sys, w).unwrap();
            assert!(r.sub(&d).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn coupled_lag_pair_dc_values() {
        let sys: TransferTensor = coupled_lag_pair().into();
        let r = freq_response(&sys, 0.0).unwrap();
        let expect0 = [[2.0, 0.5], [0.5, 1.5]];
        let expect1 = [[0.5, 0.1], [0.1, 0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(r.get(i, j, 0).re, expect0[i][j], epsilon = 1e-12);
                assert_abs_diff_eq!(r.get(i, j, 1).re, expect1[i][j], epsilon = 1e-12);
                assert!(r.get(i, j, 0).im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn state_space_response_matches_dense_unfolding() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sys = sampling::random_stable_ss(2, 3, &mut rng);
        let ab = real_part(&sys.a.bcirc());
        let bb = real_part(&sys.b.bcirc());
        let cb = real_part(&sys.c.bcirc());
        let db = real_part(&sys.d.bcirc());
        let tt: TransferTensor = sys.into();
        for w in [0.0, 0.4, 2.9, -1.7] {
            let n = ab.nrows();
            let mut arg = CMat::from_fn(n, n, |i, j| cx(-ab[(i, j)], 0.0));
            for i in 0..n {
                arg[(i, i)] += cx(0.0, w);
            }
            let bbc = CMat::from_fn(n, n, |i, j| cx(bb[(i, j)], 0.0));
            let x = arg.lu().solve(&bbc).unwrap();
            let cbc = CMat::from_fn(n, n, |i, j| cx(cb[(i, j)], 0.0));
            let dbc = CMat::from_fn(n, n, |i, j| cx(db[(i, j)], 0.0));
            let oracle = &cbc * x + dbc;
            let got = dense_response(&tt, w);
            assert!((got - oracle).norm() < 1e-9);
        }
    }

    #[test]
    fn response_is_conjugate_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let sys: TransferTensor = sampling::random_stable_ss(2, 2, &mut rng).into();
        for w in [0.2, 1.0, 6.5] {
            let plus = freq_response(&sys, w).unwrap();
            let minus = freq_response(&sys, -w).unwrap();
            let (m, n, p) = plus.shape();
            for k in 0..p {
                for i in 0..m {
                    for j in 0..n {
                        let d = (minus.get(i, j, k) - plus.get(i, j, k).conj()).norm();
                        assert!(d < 1e-10, "conjugate symmetry failed: {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn pole_at_frequency_is_reported() {
        // Rational: 1/(s^2+1) has poles at +-j.
        let sys = scalar_rational(&[1.0], &[1.0, 0.0, 1.0]);
        assert!(matches!(
            freq_response(&sys, 1.0),
            Err(Error::PoleAtFrequency(_))
        ));
        assert!(freq_response(&sys, 0.5).is_ok());
        // State-space: harmonic oscillator, eigenvalues +-j.
        let a = Tensor3::from_fn(2, 2, 1, |i, j, _| {
            cx([[0.0, 1.0], [-1.0, 0.0]][i][j], 0.0)
        });
        let id = Tensor3::identity(2, 1);
        let ss: TransferTensor =
            StateSpaceTensor::new(a, id.clone(), id.clone(), Tensor3::zeros(2, 2, 1))
                .unwrap()
                .into();
        assert!(matches!(
            freq_response(&ss, 1.0),
            Err(Error::PoleAtFrequency(_))
        ));
        assert!(freq_response(&ss, 2.0).is_ok());
    }

    // -- representation cross-checks ----------------------------------------

    /// Exact rational form of a state-space system: common denominator from
    /// the characteristic polynomial of the unfolded state matrix, entry
    /// numerators by polynomial interpolation on real sample points.
    fn ss_to_rational(sys: &StateSpaceTensor) -> RationalSliceTf {
        let (m, p) = (sys.size(), sys.depth());
        let ab = real_part(&sys.a.bcirc());
        let n = ab.nrows();
        // Characteristic polynomial, descending, via the trace recursion.
        let mut den = vec![1.0];
        let mut basis = RMat::identity(n, n);
        for k in 1..=n {
            let prod = &ab * &basis;
            let ck = -prod.trace() / k as f64;
            den.push(ck);
            basis = prod + RMat::identity(n, n) * ck;
        }
        let samples: Vec<f64> = (0..=n).map(|l| 0.5 + 1.5 * l as f64).collect();
        let tt: TransferTensor = sys.clone().into();
        // Response at real s > 0 (stable system: no poles there).  Reuse the
        // frequency-response solve with s = jw replaced by a real shift.
        let eval_at = |s: f64| -> RMat {
            let bb = real_part(&sys.b.bcirc());
            let cb = real_part(&sys.c.bcirc());
            let db = real_part(&sys.d.bcirc());
            let arg = RMat::identity(n, n) * s - &ab;
            let x = arg.lu().solve(&bb).unwrap();
            &cb * x + db
        };
        let responses: Vec<RMat> = samples.iter().map(|s| eval_at(*s)).collect();
        let den_at = |s: f64| -> f64 { den.iter().fold(0.0, |acc, c| acc * s + c) };
        // Vandermonde fit for each tensor entry (i, j, k); unfolding block
        // (k, 0) carries frontal slice k.
        let order = n + 1;
        let vander = RMat::from_fn(order, order, |r, c| {
            samples[r].powi((order - 1 - c) as i32)
        });
        let lu = vander.lu();
        let mut slices = Vec::with_capacity(p);
        for k in 0..p {
            let mut rows = Vec::with_capacity(m);
            for i in 0..m {
                let mut row = Vec::with_capacity(m);
                for j in 0..m {
                    let rhs = nalgebra::DVector::from_fn(order, |r, _| {
                        responses[r][(k * m + i, j)] * den_at(samples[r])
                    });
                    let coeffs = lu.solve(&rhs).unwrap();
                    let num: Vec<f64> = coeffs.iter().copied().collect();
                    // Suppress interpolation noise so properness holds exactly.
                    let scale = num.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1.0);
                    let num: Vec<f64> = num
                        .into_iter()
                        .map(|c| if c.abs() < 1e-9 * scale { 0.0 } else { c })
                        .collect();
                    row.push(RatFn::new(&num, &den).unwrap());
                }
                rows.push(row);
            }
            slices.push(rows);
        }
        drop(tt);
        RationalSliceTf::new(slices).unwrap()
    }

    #[test]
    fn rational_form_of_state_space_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let ss = sampling::random_stable_ss(2, 2, &mut rng);
        let rat = ss_to_rational(&ss);
        let ss_t: TransferTensor = ss.into();
        let rat_t: TransferTensor = rat.into();
        for w in [0.0, 0.1, 0.9, 4.2, 55.0, f64::INFINITY] {
            let a = freq_response(&ss_t, w).unwrap();
            let b = freq_response(&rat_t, w).unwrap();
            assert!(
                a.sub(&b).unwrap().frobenius_norm() < 1e-9,
                "response mismatch at omega = {w}"
            );
        }
        let grid = FrequencyGrid::new(1e-2, 1e2, 60).unwrap().points();
        let h_ss = hinf_norm(&ss_t, &grid).unwrap();
        let h_rat = hinf_norm(&rat_t, &grid).unwrap();
        assert_abs_diff_eq!(h_ss, h_rat, epsilon = 1e-8);
        let env_ss = phase_envelope(&ss_t, &grid).unwrap();
        let env_rat = phase_envelope(&rat_t, &grid).unwrap();
        for i in 0..env_ss.len() {
            assert_eq!(env_ss.sectorial[i], env_rat.sectorial[i]);
            if env_ss.sectorial[i] {
                assert_abs_diff_eq!(env_ss.phi_max[i], env_rat.phi_max[i], epsilon = 1e-8);
                assert_abs_diff_eq!(env_ss.phi_min[i], env_rat.phi_min[i], epsilon = 1e-8);
            }
            assert_abs_diff_eq!(env_ss.sigma_max[i], env_rat.sigma_max[i], epsilon = 1e-8);
        }
    }

    // -- gains ---------------------------------------------------------------

    #[test]
    fn scalar_lag_has_unit_peak_gain() {
        let grid = FrequencyGrid::default().points();
        let rat = scalar_rational(&[1.0], &[1.0, 1.0]);
        assert_abs_diff_eq!(hinf_norm(&rat, &grid).unwrap(), 1.0, epsilon = 1e-6);
        let one = Tensor3::identity(1, 1);
        let ss: TransferTensor = StateSpaceTensor::new(
            one.scale(cx(-1.0, 0.0)),
            one.clone(),
            one.clone(),
            Tensor3::zeros(1, 1, 1),
        )
        .unwrap()
        .into();
        assert_abs_diff_eq!(hinf_norm(&ss, &grid).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn hinf_matches_dense_unfolding_sweep() {
        let sys: TransferTensor = coupled_lag_pair().into();
        let grid = FrequencyGrid::new(1e-2, 1e2, 120).unwrap().points();
        let value = hinf_norm(&sys, &grid).unwrap();
        // Independent evaluation: densely unfold the response and take the
        // spectral norm, over the same sweep with the same refinement rule.
        let dense_gain = |w: f64| -> Result<f64> {
            Ok(kernels::spectral_norm(&freq_response(&sys, w)?.bcirc()))
        };
        let rows = sweep_rows(&grid);
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, w) in rows.iter().enumerate() {
            let gain = if w.is_infinite() {
                kernels::spectral_norm(&sys.at_infinity().bcirc())
            } else {
                dense_gain(*w).unwrap()
            };
            if gain > best.1 {
                best = (i, gain);
            }
        }
        let mut oracle = best.1;
        if let Some((lo, hi)) = refine_bracket(&rows, best.0) {
            let (_, refined) = golden_max(lo, hi, 70, dense_gain).unwrap();
            oracle = oracle.max(refined);
        }
        assert_abs_diff_eq!(value, oracle, epsilon = 1e-8);
    }

    #[test]
    fn hinf_requires_stability() {
        let grid = FrequencyGrid::default().points();
        let unstable = scalar_rational(&[2.0], &[1.0, -1.0]);
        assert!(matches!(
            hinf_norm(&unstable, &grid),
            Err(Error::Unstable(_))
        ));
    }

    // -- envelope -------------------------------------------------------------

    #[test]
    fn static_positive_definite_envelope_is_flat_zero() {
        let sys: TransferTensor = static_gain(&[vec![2.0, 0.3], vec![0.3, 1.0]], 1).into();
        let grid = FrequencyGrid::new(1e-1, 1e1, 16).unwrap().points();
        let env = phase_envelope(&sys, &grid).unwrap();
        assert_eq!(env.len(), grid.len() + 2);
        assert!(env.all_sectorial());
        for i in 0..env.len() {
            assert!(env.phi_max[i].abs() < 1e-10);
            assert!(env.phi_min[i].abs() < 1e-10);
            assert!(env.phi_max[i] >= env.phi_min[i] - 1e-15);
        }
        assert!(env.spread().unwrap() < 1e-9);
    }

    #[test]
    fn envelope_rows_and_accumulator() {
        let sys: TransferTensor = coupled_lag_pair().into();
        let grid = FrequencyGrid::new(1e-2, 1e2, 40).unwrap().points();
        let env = phase_envelope(&sys, &grid).unwrap();
        assert_eq!(env.omegas[0], 0.0);
        assert!(env.omegas.last().unwrap().is_infinite());
        assert_eq!(env.len(), grid.len() + 2);
        for i in 0..env.len() {
            assert!(env.sigma_max[i] >= env.sigma_min[i]);
            assert!(env.hinf >= env.sigma_max[i] - 1e-15);
            if env.sectorial[i] {
                assert!(env.phi_max[i] >= env.phi_min[i] - 1e-15);
            }
        }
    }

    #[test]
    fn envelope_phase_conjugate_symmetry() {
        let sys: TransferTensor = coupled_lag_pair().into();
        for w in [0.3, 1.1, 8.0] {
            let plus = phase_bounds_of_blocks(
                freq_response(&sys, w).unwrap().fourier_slices().slices,
            )
            .unwrap()
            .unwrap();
            let minus = phase_bounds_of_blocks(
                freq_response(&sys, -w).unwrap().fourier_slices().slices,
            )
            .unwrap()
            .unwrap();
            assert_abs_diff_eq!(minus.0, -plus.1, epsilon = 1e-9);
            assert_abs_diff_eq!(minus.1, -plus.0, epsilon = 1e-9);
        }
    }

    // -- gang of four and feedback -------------------------------------------

    #[test]
    fn zero_controller_gives_trivial_blocks() {
        let g: TransferTensor = coupled_lag_pair().into();
        let h: TransferTensor = zero_rational(2, 2).into();
        let gang = gang_of_four(&g, &h).unwrap();
        for w in [0.0, 0.7, 3.0, f64::INFINITY] {
            let (s, sh, gs, gsh) = gang.eval_blocks(w).unwrap();
            let id = Tensor3::identity(2, 2);
            assert!(s.sub(&id).unwrap().frobenius_norm() < 1e-10);
            assert!(sh.frobenius_norm() < 1e-10);
            assert!(gsh.frobenius_norm() < 1e-10);
            let gw = freq_response(&g, w).unwrap();
            assert!(gs.sub(&gw).unwrap().frobenius_norm() < 1e-10);
        }
        let report = gang.feedback_report().unwrap();
        assert!(report.stable);
        // All poles of the open loop sit at the roots of s^2 + 2s + 2.
        for pole in &report.poles {
            assert_abs_diff_eq!(pole.re, -1.0, epsilon = 1e-6);
            assert_abs_diff_eq!(pole.im.abs(), 1.0, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(report.spectral_abscissa, -1.0, epsilon = 1e-6);
    }

    #[test]
    fn scalar_loop_matches_textbook_sensitivity() {
        let g = scalar_rational(&[1.0], &[1.0, 1.0]);
        let h = scalar_rational(&[1.0], &[1.0]);
        let gang = gang_of_four(&g, &h).unwrap();
        for w in [0.0, 0.7, 3.0] {
            let s = gang.eval_blocks(w).unwrap().0;
            let want = (cx(0.0, w) + cx(1.0, 0.0)) / (cx(0.0, w) + cx(2.0, 0.0));
            assert!((s.get(0, 0, 0) - want).norm() < 1e-10);
        }
        let report = gang.feedback_report().unwrap();
        assert!(report.stable);
        assert_eq!(report.poles.len(), 1);
        assert!((report.poles[0] - cx(-2.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn unity_feedback_moves_scalar_poles() {
        // Unstable plant stabilized by the loop: pole moves from +1 to -1.
        let g = scalar_rational(&[2.0], &[1.0, -1.0]);
        let h = scalar_rational(&[1.0], &[1.0]);
        let report = feedback_stable(&g, &h).unwrap();
        assert!(report.stable);
        assert_eq!(report.poles.len(), 1);
        assert!((report.poles[0] - cx(-1.0, 0.0)).norm() < 1e-9);
        // Sign flip destabilizes: pole moves to +3.
        let g2 = scalar_rational(&[-2.0], &[1.0, -1.0]);
        let report2 = feedback_stable(&g2, &h).unwrap();
        assert!(!report2.stable);
        assert!((report2.poles[0] - cx(3.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn gang_unfolding_matches_matrix_loop_under_shuffle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g_ss = sampling::random_stable_ss(2, 2, &mut rng);
        let mut h_ss = sampling::random_stable_ss(2, 2, &mut rng);
        // Tame the controller so the loop is well posed with margin.
        h_ss.c = h_ss.c.scale(cx(0.2, 0.0));
        h_ss.d = h_ss.d.scale(cx(0.2, 0.0));
        let g: TransferTensor = g_ss.into();
        let h: TransferTensor = StateSpaceTensor::new(h_ss.a, h_ss.b, h_ss.c, h_ss.d)
            .unwrap()
            .into();
        let (m, p) = (2usize, 2usize);
        let gang = gang_of_four(&g, &h).unwrap();
        for w in [0.0, 0.9, 4.0] {
            let tensor_side = gang.eval(w).unwrap().bcirc();
            let gb = dense_response(&g, w);
            let hb = dense_response(&h, w);
            let mp = m * p;
            let s = (CMat::identity(mp, mp) + &hb * &gb).lu().try_inverse().unwrap();
            let blocks = [
                [s.clone(), &s * &hb],
                [&gb * &s, &gb * &s * &hb],
            ];
            // Row (r, half, i) of the tensor unfolding corresponds to row
            // (half, r, i) of the 2x2 block matrix of unfoldings.
            for r in 0..p {
                for hrow in 0..2 {
                    for i in 0..m {
                        for c in 0..p {
                            for hcol in 0..2 {
                                for j in 0..m {
                                    let lhs = tensor_side
                                        [(r * 2 * m + hrow * m + i, c * 2 * m + hcol * m + j)];
                                    let rhs =
                                        blocks[hrow][hcol][(r * m + i, c * m + j)];
                                    assert!(
                                        (lhs - rhs).norm() < 1e-9,
                                        "mismatch at omega = {w}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ill_posed_loop_is_rejected() {
        // g = h = static -1 makes I + HG singular at infinity.
        let g: TransferTensor = static_gain(&[vec![-1.0]], 1).into();
        let h: TransferTensor = static_gain(&[vec![1.0]], 1).into();
        assert!(matches!(gang_of_four(&g, &h), Err(Error::IllPosed(_))));
    }

    // -- certificates ----------------------------------------------------------

    #[test]
    fn small_gain_certifies_scaled_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let grid = FrequencyGrid::new(1e-2, 1e2, 60).unwrap().points();
        let base = sampling::random_stable_ss(2, 2, &mut rng);
        let norm = hinf_norm(&base.clone().into(), &grid).unwrap();
        let scale = cx(0.5 / norm, 0.0);
        let g: TransferTensor = StateSpaceTensor::new(
            base.a.clone(),
            base.b.clone(),
            base.c.scale(scale),
            base.d.scale(scale),
        )
        .unwrap()
        .into();
        let cert = small_gain_certificate(&g, &g, &grid).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.margin > 0.5 && cert.margin <= 1.0);
        assert!(cert.offending.is_empty());
        assert!(cert.feedback.as_ref().unwrap().stable);
        assert!(cert.notes.contains("sampled frequencies"));
    }

    #[test]
    fn small_gain_zero_controller_trivially_certified() {
        let g: TransferTensor = coupled_lag_pair().into();
        let h: TransferTensor = zero_rational(2, 2).into();
        let grid = FrequencyGrid::new(1e-2, 1e2, 40).unwrap().points();
        let cert = small_gain_certificate(&g, &h, &grid).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_abs_diff_eq!(cert.margin, 1.0, epsilon = 1e-12);
        assert!(cert.feedback.unwrap().stable);
    }

    #[test]
    fn small_gain_inconclusive_on_still_stable_loop() {
        // Loop gain 1.2 at DC fails the test, yet the loop is stable
        // (closed-loop pole at -2.2).
        let g = scalar_rational(&[4.0], &[1.0, 1.0]);
        let h = scalar_rational(&[0.3], &[1.0]);
        let grid = FrequencyGrid::new(1e-2, 1e2, 40).unwrap().points();
        let cert = small_gain_certificate(&g, &h, &grid).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(cert.margin < 0.0);
        assert!(!cert.offending.is_empty());
        assert!(cert.feedback.is_none());
        let report = feedback_stable(&g, &h).unwrap();
        assert!(report.stable);
        assert!((report.poles[0] - cx(-2.2, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn small_gain_requires_open_loop_stability() {
        let g = scalar_rational(&[2.0], &[1.0, -1.0]);
        let h = scalar_rational(&[1.0], &[1.0]);
        let grid = FrequencyGrid::new(1e-1, 1e1, 8).unwrap().points();
        assert!(matches!(
            small_gain_certificate(&g, &h, &grid),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn small_phase_certifies_static_positive_controller() {
        let g: TransferTensor = coupled_lag_pair().into();
        let h: TransferTensor = static_gain(&[vec![0.1, 0.0], vec![0.0, 0.1]], 2).into();
        let grid = FrequencyGrid::new(1e-2, 1e2, 80).unwrap().points();
        let cert = small_phase_certificate(&g, &h, &grid).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert!(cert.margin > 0.0);
        assert!(cert.feedback.as_ref().unwrap().stable);
        assert!(cert.notes.contains("sampled frequencies"));
    }

    #[test]
    fn small_phase_rejects_non_sectorial_response() {
        // Static indefinite gain: phases {0, pi} span a half turn everywhere.
        let g: TransferTensor = static_gain(&[vec![1.0, 0.0], vec![0.0, -1.0]], 1).into();
        let h: TransferTensor = static_gain(&[vec![0.1, 0.0], vec![0.0, 0.1]], 1).into();
        let grid = FrequencyGrid::new(1e-1, 1e1, 8).unwrap().points();
        assert!(matches!(
            small_phase_certificate(&g, &h, &grid),
            Err(Error::SectorAssumptionViolated(_))
        ));
    }

    #[test]
    fn small_phase_inconclusive_when_phases_sum_past_half_turn() {
        // Double lead compensator peaking near 95 degrees; two in a loop push
        // the phase sum past 180 degrees even though the loop is stable.
        let lead = scalar_rational(&[1.0, 2.0, 1.0], &[1.0, 13.22, 43.6921]);
        let grid = FrequencyGrid::new(1e-2, 1e2, 80).unwrap().points();
        let env = phase_envelope(&lead, &grid).unwrap();
        assert!(env.phi_sup().unwrap() > 0.5 * PI);
        let cert = small_phase_certificate(&lead, &lead, &grid).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(cert.margin < 0.0);
        assert!(cert.feedback.is_none());
        assert!(feedback_stable(&lead, &lead).unwrap().stable);
    }

    // -- grids and export --------------------------------------------------------

    #[test]
    fn default_grid_shape() {
        let grid = FrequencyGrid::default().points();
        assert_eq!(grid.len(), tol::DEFAULT_GRID_POINTS);
        assert_abs_diff_eq!(grid[0], 1e-3, epsilon = 1e-15);
        assert_abs_diff_eq!(*grid.last().unwrap(), 1e3, epsilon = 1e-9);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        assert!(FrequencyGrid::new(0.0, 1.0, 4).is_err());
        assert!(FrequencyGrid::new(1.0, 0.5, 4).is_err());
    }

    #[test]
    fn bode_csv_layout() {
        let sys: TransferTensor = static_gain(&[vec![2.0]], 1).into();
        let grid = FrequencyGrid::new(1e-1, 1e1, 5).unwrap().points();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        let env = bode_export(&sys, &grid, &path).unwrap();
        assert_eq!(env.len(), grid.len() + 2);
        let body = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = body.trim_end().lines().collect();
        assert_eq!(lines.len(), grid.len() + 3); // header + rows
        assert_eq!(
            lines[0],
            "omega_rad_s,sigma_max,sigma_min,phi_max_deg,phi_min_deg,sectorial"
        );
        assert!(lines[1].starts_with("0.0000000000000000e0,"));
        assert!(lines.last().unwrap().starts_with("inf,"));
        for row in &lines[1..] {
            let cells: Vec<&str> = row.split(',').collect();
            assert_eq!(cells.len(), 6);
            assert_eq!(cells[5], "1");
            assert!(cells[1].starts_with("2.0000000000000000e0"));
            assert_eq!(cells[3], "0.0000000000000000e0");
        }
    }

    #[test]
    fn unfolded_poles_match_slice_poles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sys = sampling::random_stable_ss(2, 3, &mut rng);
        let mut tensor_poles = sys.poles().unwrap();
        let flat = real_part(&sys.a.bcirc());
        let n = flat.nrows();
        let complex = CMat::from_fn(n, n, |i, j| cx(flat[(i, j)], 0.0));
        let mut dense_poles = kernels::complex_eigenvalues(&complex).unwrap();
        let key = |z: &Complex64| (z.re, z.im);
        tensor_poles.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        dense_poles.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        assert_eq!(tensor_poles.len(), dense_poles.len());
        for (a, b) in tensor_poles.iter().zip(&dense_poles) {
            assert!((a - b).norm() < 1e-8);
        }
    }
}
