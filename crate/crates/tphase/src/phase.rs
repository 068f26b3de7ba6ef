//! Canonical T-phases, phase gauges, and majorization.
//!
//! A frontal-square tensor is sectorial when some rotation of the complex
//! plane makes every Fourier slice accretive; equivalently, each slice admits
//! a congruence `Ahat_k = T_k^H diag(e^{i phi}) T_k` and the phases of all
//! slices fit inside one open half-turn.  The canonical T-phase vector
//! gathers all `n p` slice phases on a common branch and sorts them
//! nonincreasing, remembering which slice and slot each value came from.

use crate::error::{Error, Result};
use crate::kernels::{self, SectorialFactorization};
use crate::tensor::Tensor3;
use crate::tol;

/// Canonical phases of a sectorial tensor, sorted nonincreasing.
///
/// `provenance[g] = (slice, slot)` records which Fourier slice produced
/// `values[g]` and the position of that phase in the slice's own
/// nonincreasing order.  Ties in value are broken by slice index, then slot.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    pub values: Vec<f64>,
    pub provenance: Vec<(usize, usize)>,
}

impl PhaseVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest phase.
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Smallest phase.
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn spread(&self) -> f64 {
        self.max() - self.min()
    }

    /// Number of phases with magnitude above [`tol::PHASE_ZERO_ABS`]; this is
    /// the T-phase rank.
    pub fn rank(&self) -> usize {
        self.values.iter().filter(|v| v.abs() > tol::PHASE_ZERO_ABS).count()
    }
}

/// Canonical phases together with the per-slice congruence factors and the
/// Fourier blocks they factor, for algorithms that need to act on the
/// factorization itself.
pub struct PhaseFactorization {
    pub phases: PhaseVector,
    /// One factorization per Fourier slice; `factors[k].phases` is the
    /// slice's own nonincreasing, branch-adjusted phase list.
    pub factors: Vec<SectorialFactorization>,
    /// The Fourier blocks that were factored.
    pub blocks: Vec<kernels::CMat>,
}

/// Canonical phases of a sectorial tensor.
pub fn canonical_phases(a: &Tensor3) -> Result<PhaseVector> {
    Ok(canonical_phase_factorization(a)?.phases)
}

/// T-phase rank: the number of nonzero canonical phases.
pub fn tprank(a: &Tensor3) -> Result<usize> {
    Ok(canonical_phases(a)?.rank())
}

/// Full canonical factorization (phases plus congruence factors per slice).
pub fn canonical_phase_factorization(a: &Tensor3) -> Result<PhaseFactorization> {
    if !a.is_frontal_square() {
        return Err(Error::ShapeMismatch(format!(
            "canonical phases require square frontal slices, got {:?}",
            a.shape()
        )));
    }
    let blocks = a.fourier_slices().slices;
    canonical_phases_of_blocks(blocks)
}

/// Canonical phases of explicit Fourier blocks.  Used both by
/// [`canonical_phase_factorization`] and by frequency-response code that
/// already works per Fourier slice.
pub fn canonical_phases_of_blocks(blocks: Vec<kernels::CMat>) -> Result<PhaseFactorization> {
    let mut factors = Vec::with_capacity(blocks.len());
    for (k, s) in blocks.iter().enumerate() {
        let f = kernels::sectorial_decompose_matrix(s).map_err(|e| match e {
            Error::NotSectorial(msg) => {
                Error::NotSectorial(format!("Fourier slice {k}: {msg}"))
            }
            Error::BranchSpread(msg) => {
                Error::BranchSpread(format!("Fourier slice {k}: {msg}"))
            }
            other => other,
        })?;
        factors.push(f);
    }

    // Collect (value, slice, slot) triples.  Slice-level phases are
    // contiguous around each slice's own rotation angle but different slices
    // may sit on different 2 pi branches; relocate everything around the
    // circular mean direction, which is independent of the incoming branch.
    let mut entries: Vec<(f64, usize, usize)> = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        for (slot, &v) in f.phases.iter().enumerate() {
            entries.push((v, k, slot));
        }
    }
    let count = entries.len();
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(v, _, _) in &entries {
        sx += v.cos();
        sy += v.sin();
    }
    let resultant = (sx * sx + sy * sy).sqrt();
    if resultant < 1e-9 * count as f64 {
        return Err(Error::NotSectorial(
            "slice phases have no dominant direction".into(),
        ));
    }
    let mu = sy.atan2(sx);
    let two_pi = 2.0 * std::f64::consts::PI;
    for e in &mut entries {
        let mut v = e.0;
        while v > mu + std::f64::consts::PI {
            v -= two_pi;
        }
        while v <= mu - std::f64::consts::PI {
            v += two_pi;
        }
        e.0 = v;
    }

    let vmax = entries.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    let vmin = entries.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
    if vmax - vmin >= std::f64::consts::PI - tol::BRANCH_GUARD {
        return Err(Error::NotSectorial(format!(
            "phase spread {:.6} across slices reaches a half turn",
            vmax - vmin
        )));
    }

    // Fix the global branch: the whole vector must fit in (-pi, pi] after a
    // common 2 pi shift.
    let mut shift = 0.0;
    if vmax > std::f64::consts::PI {
        shift = -two_pi;
    } else if vmin <= -std::f64::consts::PI {
        shift = two_pi;
    }
    if shift != 0.0 {
        let (nmax, nmin) = (vmax + shift, vmin + shift);
        if nmax > std::f64::consts::PI || nmin <= -std::f64::consts::PI {
            return Err(Error::BranchSpread(format!(
                "phases [{:.6}, {:.6}] admit no common branch in (-pi, pi]",
                vmin, vmax
            )));
        }
        for e in &mut entries {
            e.0 += shift;
        }
    }

    entries.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let values = entries.iter().map(|e| e.0).collect();
    let provenance = entries.iter().map(|e| (e.1, e.2)).collect();
    Ok(PhaseFactorization { phases: PhaseVector { values, provenance }, factors, blocks })
}

// ---------------------------------------------------------------------------
// Gauges
// ---------------------------------------------------------------------------

/// Symmetric gauge functions used to measure phase vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeSpec {
    /// Sum of the `k` largest magnitudes (`k >= 1`).
    KyFan(usize),
    /// The l^q norm for finite `q >= 1`.
    Lp(f64),
    /// The supremum norm.
    LInf,
}

impl GaugeSpec {
    /// Parse the textual form used on the command line: `kyfan:K`, `lp:Q`
    /// (with `lp:inf` as an alias for `linf`), or `linf`.
    pub fn parse(s: &str) -> Result<GaugeSpec> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("linf") {
            return Ok(GaugeSpec::LInf);
        }
        if let Some(rest) = s.strip_prefix("kyfan:") {
            let k: usize = rest
                .parse()
                .map_err(|_| Error::Format(format!("invalid Ky Fan order {rest:?}")))?;
            if k == 0 {
                return Err(Error::Format("Ky Fan order must be at least 1".into()));
            }
            return Ok(GaugeSpec::KyFan(k));
        }
        if let Some(rest) = s.strip_prefix("lp:") {
            if rest.eq_ignore_ascii_case("inf") {
                return Ok(GaugeSpec::LInf);
            }
            let q: f64 = rest
                .parse()
                .map_err(|_| Error::Format(format!("invalid lp exponent {rest:?}")))?;
            if q < 1.0 || !q.is_finite() {
                return Err(Error::Format(format!(
                    "lp exponent must be a finite number >= 1, got {q}"
                )));
            }
            return Ok(GaugeSpec::Lp(q));
        }
        Err(Error::Format(format!(
            "unknown gauge {s:?} (expected kyfan:K, lp:Q, or linf)"
        )))
    }
}

impl std::fmt::Display for GaugeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GaugeSpec::KyFan(k) => write!(f, "kyfan:{k}"),
            GaugeSpec::Lp(q) => write!(f, "lp:{q}"),
            GaugeSpec::LInf => write!(f, "linf"),
        }
    }
}

/// Evaluate a gauge on a raw vector (order-insensitive, sign-insensitive).
pub fn gauge_eval(psi: &GaugeSpec, x: &[f64]) -> f64 {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    match psi {
        GaugeSpec::KyFan(k) => mags.iter().take(*k).sum(),
        GaugeSpec::Lp(q) => {
            if *q == 1.0 {
                mags.iter().sum()
            } else if *q == 2.0 {
                mags.iter().map(|v| v * v).sum::<f64>().sqrt()
            } else {
                mags.iter().map(|v| v.powf(*q)).sum::<f64>().powf(1.0 / *q)
            }
        }
        GaugeSpec::LInf => mags.first().copied().unwrap_or(0.0),
    }
}

/// Gauge of the canonical phase vector of a sectorial tensor.
pub fn phase_gauge(a: &Tensor3, psi: &GaugeSpec) -> Result<f64> {
    Ok(gauge_eval(psi, &canonical_phases(a)?.values))
}

// ---------------------------------------------------------------------------
// Majorization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajorizationMode {
    /// Partial-sum dominance only.
    Weak,
    /// Partial-sum dominance plus total-sum equality.
    Strong,
}

/// Outcome of a majorization comparison `x >- y` (after sorting both vectors
/// nonincreasing and zero-padding to a common length).
#[derive(Debug, Clone)]
pub struct MajorizationReport {
    pub holds: bool,
    pub mode: MajorizationMode,
    /// Largest amount by which a prefix sum of `y` exceeded the matching
    /// prefix sum of `x` (0 when dominance holds everywhere).
    pub max_violation: f64,
    /// Prefix length (1-based) of the first dominance violation, if any.
    pub first_violation: Option<usize>,
    /// `|sum(x) - sum(y)|`; only constrains the strong mode.
    pub sum_gap: f64,
}

/// Does `x` majorize `y`?  Vectors are sorted nonincreasing and zero-padded
/// to a common length; dominance of every prefix sum is required within
/// `tol`, and [`MajorizationMode::Strong`] additionally requires the total
/// sums to agree within `tol`.
pub fn majorizes(x: &[f64], y: &[f64], mode: MajorizationMode, tol: f64) -> MajorizationReport {
    let n = x.len().max(y.len());
    let mut xs: Vec<f64> = x.to_vec();
    let mut ys: Vec<f64> = y.to_vec();
    xs.resize(n, 0.0);
    ys.resize(n, 0.0);
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ys.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut px = 0.0;
    let mut py = 0.0;
    let mut max_violation: f64 = 0.0;
    let mut first_violation = None;
    for k in 0..n {
        px += xs[k];
        py += ys[k];
        let gap = py - px;
        if gap > tol && first_violation.is_none() {
            first_violation = Some(k + 1);
        }
        max_violation = max_violation.max(gap);
    }
    let sum_gap = (px - py).abs();
    let dominance_ok = first_violation.is_none();
    let holds = match mode {
        MajorizationMode::Weak => dominance_ok,
        MajorizationMode::Strong => dominance_ok && sum_gap <= tol,
    };
    MajorizationReport {
        holds,
        mode,
        max_violation: max_violation.max(0.0),
        first_violation,
        sum_gap,
    }
}

// ---------------------------------------------------------------------------
// Sector classification
// ---------------------------------------------------------------------------

/// Sector data derived from the canonical phases.
#[derive(Debug, Clone, Copy)]
pub struct SectorClass {
    /// Smallest canonical phase.
    pub alpha: f64,
    /// Largest canonical phase.
    pub beta: f64,
    /// Spread strictly below a half turn (always true when the phases
    /// exist).
    pub quasi_sectorial: bool,
    /// Spread at most a half turn.
    pub semi_sectorial: bool,
    /// All phases strictly inside (-pi/2, pi/2): the tensor is accretive.
    pub accretive: bool,
    /// All phases in (-pi, 0]: negative-imaginary tensor.
    pub negative_imaginary: bool,
}

/// Classify the sector of a sectorial tensor from its canonical phases.
pub fn classify_sector(a: &Tensor3) -> Result<SectorClass> {
    let pv = canonical_phases(a)?;
    Ok(classify_phases(&pv))
}

pub fn classify_phases(pv: &PhaseVector) -> SectorClass {
    let alpha = pv.min();
    let beta = pv.max();
    let spread = beta - alpha;
    SectorClass {
        alpha,
        beta,
        quasi_sectorial: spread < std::f64::consts::PI,
        semi_sectorial: spread <= std::f64::consts::PI,
        accretive: alpha > -std::f64::consts::FRAC_PI_2 && beta < std::f64::consts::FRAC_PI_2,
        negative_imaginary: beta <= 0.0,
    }
}
