//! Command-line front end over `.ttj` tensors and `.tlj` systems.
//!
//! Subcommands: `info`, `truncate`, `tsvd`, `geomean`, `lti`, `verify`.
//! Structured output is JSON on stdout (angles in radians); sweep data is
//! CSV (angles in degrees).  Exit codes: 0 success, 1 analysis-level failure
//! (non-sectorial input, instability, ...), 2 usage or format errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tphase::error::{Error, Result};
use tphase::io;
use tphase::lti::{self, FrequencyGrid};
use tphase::phase::GaugeSpec;
use tphase::sampling;
use tphase::tensor::Tensor3;

#[derive(Parser)]
#[command(
    name = "tphase",
    version,
    about = "Canonical T-phase analysis of third-order tensors and tensor LTI systems"
)]
struct Cli {
    /// Seed for randomized commands; runs are bit-reproducible given it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CertifyKind {
    Gain,
    Phase,
    Both,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Bcirc,
    Majorization,
    Oracles,
    Conjecture,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a tensor: dimensions, sectoriality, phases, ranks, singular values.
    Info {
        /// Tensor file (.ttj).
        tensor: PathBuf,
    },
    /// Low T-phase-rank approximation by half-phase truncation.
    Truncate {
        /// Tensor file (.ttj); canonical phases must lie in [0, pi).
        tensor: PathBuf,
        /// Number of phases to keep.
        #[arg(long)]
        r: usize,
        /// Gauge for the reported optimal value: kyfan:K, lp:Q or linf.
        #[arg(long, default_value = "lp:2")]
        gauge: String,
        /// Output path for the congruence factor (default: <input>.E.ttj).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional output path for the residual factor W.
        #[arg(long)]
        residual_out: Option<PathBuf>,
        /// Sidecar path (default: <input>.truncation.json).
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Keep the r largest T-singular values (Schmidt-Mirsky truncation).
    Tsvd {
        /// Tensor file (.ttj).
        tensor: PathBuf,
        /// Number of singular values to keep.
        #[arg(long)]
        r: usize,
        /// Gauge for the reported residual value.
        #[arg(long, default_value = "lp:2")]
        gauge: String,
        /// Output path (default: <input>.r<r>.ttj).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric mean of two accretive tensors, with checks.
    Geomean {
        /// First tensor (.ttj).
        a: PathBuf,
        /// Second tensor (.ttj).
        b: PathBuf,
        /// Output path for the mean (default: <a>.geomean.ttj).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequency-domain analysis: envelope CSV, peak gain, certificates.
    Lti {
        /// System file (.tlj).
        system: PathBuf,
        /// Second system for feedback analysis and certification.
        #[arg(long, value_name = "H.tlj")]
        with: Option<PathBuf>,
        /// Log grid as lo:hi:n (default 1e-3:1e3:400).
        #[arg(long)]
        grid: Option<String>,
        /// CSV output path (default: <system>.bode.csv).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Stability certificate(s) to attempt; requires --with.
        #[arg(long, value_enum)]
        certify: Option<CertifyKind>,
    },
    /// Run randomized invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Trials per check (suite-specific defaults when omitted).
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Info { tensor } => cmd_info(&tensor),
        Command::Truncate {
            tensor,
            r,
            gauge,
            out,
            residual_out,
            sidecar,
        } => cmd_truncate(&tensor, r, &gauge, out, residual_out, sidecar),
        Command::Tsvd {
            tensor,
            r,
            gauge,
            out,
        } => cmd_tsvd(&tensor, r, &gauge, out),
        Command::Geomean { a, b, out } => cmd_geomean(&a, &b, out),
        Command::Lti {
            system,
            with,
            grid,
            csv,
            certify,
        } => cmd_lti(&system, with, grid, csv, certify),
        Command::Verify { suite, trials } => cmd_verify(suite, cli.seed, trials),
    }
}

/// Sibling path `<stem>.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

/// JSON for a possibly non-finite float (JSON numbers must be finite).
fn jf(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

// ---------------------------------------------------------------------------
// info
// ---------------------------------------------------------------------------

fn cmd_info(path: &Path) -> Result<u8> {
    let t = io::read_tensor(path)?;
    let (m, n, p) = t.shape();
    let svd = tphase::approx::t_svd(&t);
    let mut report = json!({
        "m": m,
        "n": n,
        "p": p,
        "frobenius_norm": t.frobenius_norm(),
        "t_singular_values": svd.sigma,
        "sectoriality": Value::Null,
        "sector": Value::Null,
        "canonical_phases_rad": Value::Null,
        "tprank": Value::Null,
    });
    if t.is_frontal_square() {
        let margin = tphase::sectoriality_margin(&t)?;
        report["sectoriality"] = json!({
            "gamma": margin.gamma,
            "margin": margin.margin,
            "scale": margin.scale,
            "sectorial": margin.is_sectorial(),
        });
        // A tensor that fails sectoriality still gets the dimensional report;
        // the phase fields stay null and the flags above say why.
        match tphase::canonical_phases(&t) {
            Ok(phases) => {
                let class = tphase::phase::classify_phases(&phases);
                report["sector"] = json!({
                    "alpha": class.alpha,
                    "beta": class.beta,
                    "quasi_sectorial": class.quasi_sectorial,
                    "semi_sectorial": class.semi_sectorial,
                    "accretive": class.accretive,
                    "negative_imaginary": class.negative_imaginary,
                });
                report["tprank"] = json!(phases.rank());
                report["canonical_phases_rad"] = json!(phases.values);
            }
            Err(Error::NotSectorial(_)) | Err(Error::BranchSpread(_)) => {}
            Err(e) => return Err(e),
        }
    }
    emit(&report);
    Ok(0)
}

// ---------------------------------------------------------------------------
// truncate / tsvd
// ---------------------------------------------------------------------------

fn cmd_truncate(
    path: &Path,
    r: usize,
    gauge: &str,
    out: Option<PathBuf>,
    residual_out: Option<PathBuf>,
    sidecar: Option<PathBuf>,
) -> Result<u8> {
    let psi = GaugeSpec::parse(gauge)?;
    let a = io::read_tensor(path)?;
    let trunc = tphase::half_phase_truncate(&a, r)?;
    let optimal = tphase::optimal_tprank_value(&a, r, &psi)?;
    let out = out.unwrap_or_else(|| sibling(path, "E.ttj"));
    io::write_tensor(&out, &trunc.e)?;
    if let Some(wpath) = &residual_out {
        io::write_tensor(wpath, &trunc.w)?;
    }
    let side = io::TruncationSidecar {
        r: trunc.r,
        kept_phases: trunc.kept_phases.clone(),
        residual_phases: trunc.residual_phases.clone(),
        optimal_value: optimal,
        gauge: psi.to_string(),
    };
    let side_json = serde_json::to_value(&side).expect("serializable");
    let side_path = sidecar.unwrap_or_else(|| sibling(path, "truncation.json"));
    std::fs::write(
        &side_path,
        serde_json::to_string_pretty(&side_json).expect("serializable") + "\n",
    )?;
    let mut report = side_json;
    report["factor_out"] = json!(out.display().to_string());
    report["sidecar"] = json!(side_path.display().to_string());
    if let Some(wpath) = residual_out {
        report["residual_out"] = json!(wpath.display().to_string());
    }
    emit(&report);
    Ok(0)
}

fn cmd_tsvd(path: &Path, r: usize, gauge: &str, out: Option<PathBuf>) -> Result<u8> {
    let psi = GaugeSpec::parse(gauge)?;
    let a = io::read_tensor(path)?;
    let trunc = tphase::truncate_rank(&a, r, &psi)?;
    let out = out.unwrap_or_else(|| sibling(path, &format!("r{r}.ttj")));
    io::write_tensor(&out, &trunc.approx)?;
    emit(&json!({
        "r": trunc.r,
        "gauge": trunc.psi.to_string(),
        "value": trunc.value,
        "residual_singular_values": trunc.residual_sigma,
        "out": out.display().to_string(),
    }));
    Ok(0)
}

// ---------------------------------------------------------------------------
// geomean
// ---------------------------------------------------------------------------

fn majorization_json(r: &tphase::MajorizationReport) -> Value {
    json!({
        "holds": r.holds,
        "max_violation": r.max_violation,
        "first_violation": r.first_violation,
        "sum_gap": r.sum_gap,
    })
}

fn cmd_geomean(a_path: &Path, b_path: &Path, out: Option<PathBuf>) -> Result<u8> {
    let a = io::read_tensor(a_path)?;
    let b = io::read_tensor(b_path)?;
    let x = tphase::t_geomean(&a, &b)?;
    let residual = tphase::riccati_residual(&x, &a, &b)?;
    let maj = tphase::check_phase_majorization(&a, &b)?;
    let out = out.unwrap_or_else(|| sibling(a_path, "geomean.ttj"));
    io::write_tensor(&out, &x)?;
    emit(&json!({
        "shape": x.shape(),
        "riccati_residual": residual,
        "majorization": majorization_json(&maj.theorem),
        "sqrt_corollary": majorization_json(&maj.sqrt_corollary),
        "gauge_corollary": maj
            .gauge_corollary
            .iter()
            .map(|g| {
                json!({
                    "gauge": g.psi.to_string(),
                    "lhs": g.lhs,
                    "rhs": g.rhs,
                    "holds": g.holds,
                })
            })
            .collect::<Vec<_>>(),
        "phases_a_rad": maj.phases_a.values,
        "phases_b_rad": maj.phases_b.values,
        "phases_mean_rad": maj.phases_mean.values,
        "out": out.display().to_string(),
    }));
    Ok(0)
}

// ---------------------------------------------------------------------------
// lti
// ---------------------------------------------------------------------------

fn parse_grid(spec: Option<&str>) -> Result<FrequencyGrid> {
    match spec {
        None => Ok(FrequencyGrid::default()),
        Some(s) => {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Format(format!(
                    "grid must be lo:hi:n, got '{s}'"
                )));
            }
            let lo: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Format(format!("bad grid bound '{}'", parts[0])))?;
            let hi: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Format(format!("bad grid bound '{}'", parts[1])))?;
            let n: usize = parts[2]
                .parse()
                .map_err(|_| Error::Format(format!("bad grid size '{}'", parts[2])))?;
            FrequencyGrid::new(lo, hi, n)
        }
    }
}

fn feedback_json(r: &lti::FeedbackReport) -> Value {
    json!({
        "stable": r.stable,
        "spectral_abscissa": jf(r.spectral_abscissa),
        "well_posed_sv": r.well_posed_sv,
        "poles": r.poles.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
    })
}

/// Runs one certificate and folds precondition failures into the three-valued
/// verdict: certified / inconclusive / assumption-violated.
fn certificate_json(
    kind: &str,
    result: Result<lti::Certificate>,
) -> Result<Value> {
    match result {
        Ok(c) => Ok(json!({
            "test": kind,
            "verdict": match c.verdict {
                lti::Verdict::Certified => "certified",
                lti::Verdict::Inconclusive => "inconclusive",
            },
            "margin": jf(c.margin),
            "worst_omega": jf(c.worst_omega),
            "offending_omegas": c.offending.iter().map(|w| jf(*w)).collect::<Vec<_>>(),
            "feedback": c.feedback.as_ref().map(feedback_json),
            "notes": c.notes,
        })),
        Err(Error::Unstable(msg)) | Err(Error::SectorAssumptionViolated(msg)) => Ok(json!({
            "test": kind,
            "verdict": "assumption-violated",
            "reason": msg,
        })),
        Err(e) => Err(e),
    }
}

fn cmd_lti(
    system: &Path,
    with: Option<PathBuf>,
    grid: Option<String>,
    csv: Option<PathBuf>,
    certify: Option<CertifyKind>,
) -> Result<u8> {
    if certify.is_some() && with.is_none() {
        return Err(Error::Format("--certify requires --with".into()));
    }
    let g = io::read_system(system)?;
    let grid = parse_grid(grid.as_deref())?.points();
    let csv_path = csv.unwrap_or_else(|| sibling(system, "bode.csv"));
    let env = lti::bode_export(&g, &grid, &csv_path)?;
    let hinf = lti::hinf_norm(&g, &grid)?;
    let mut report = json!({
        "m": g.size(),
        "p": g.depth(),
        "stable": true,
        "hinf": hinf,
        "phi_sup_rad": env.phi_sup().map_or(Value::Null, jf),
        "phi_inf_rad": env.phi_inf().map_or(Value::Null, jf),
        "spread_rad": env.spread().map_or(Value::Null, jf),
        "rows": env.len(),
        "sectorial_rows": env.sectorial.iter().filter(|s| **s).count(),
        "csv": csv_path.display().to_string(),
    });
    if let Some(h_path) = with {
        let h = io::read_system(&h_path)?;
        report["feedback"] = feedback_json(&lti::feedback_stable(&g, &h)?);
        let mut certs = Vec::new();
        if matches!(certify, Some(CertifyKind::Gain) | Some(CertifyKind::Both)) {
            certs.push(certificate_json(
                "small-gain",
                lti::small_gain_certificate(&g, &h, &grid),
            )?);
        }
        if matches!(certify, Some(CertifyKind::Phase) | Some(CertifyKind::Both)) {
            certs.push(certificate_json(
                "small-phase",
                lti::small_phase_certificate(&g, &h, &grid),
            )?);
        }
        if !certs.is_empty() {
            report["certificates"] = json!(certs);
        }
    }
    emit(&report);
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct SuiteRun {
    passed: usize,
    failed: usize,
}

impl SuiteRun {
    fn new() -> Self {
        SuiteRun {
            passed: 0,
            failed: 0,
        }
    }

    fn record(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.passed += 1;
            println!("PASS {name} ({detail})");
        } else {
            self.failed += 1;
            println!("FAIL {name} ({detail})");
        }
    }
}

fn cmd_verify(suite: Suite, seed: u64, trials: Option<usize>) -> Result<u8> {
    let mut run = SuiteRun::new();
    if matches!(suite, Suite::Bcirc | Suite::All) {
        verify_bcirc(&mut run, seed, trials.unwrap_or(20));
    }
    if matches!(suite, Suite::Majorization | Suite::All) {
        verify_majorization(&mut run, seed, trials.unwrap_or(20));
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        verify_oracles(&mut run, seed, trials.unwrap_or(6));
    }
    if matches!(suite, Suite::Conjecture | Suite::All) {
        verify_conjecture(&mut run, seed, trials.unwrap_or(10_000));
    }
    println!(
        "verify: {} passed, {} failed",
        run.passed, run.failed
    );
    Ok(if run.failed > 0 { 1 } else { 0 })
}

fn verify_bcirc(run: &mut SuiteRun, seed: u64, trials: usize) {
    use rand::{Rng, SeedableRng};
    use tphase::kernels;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst_hom = 0.0f64;
    let mut worst_fold = 0.0f64;
    let mut worst_adj = 0.0f64;
    let mut worst_eig = 0.0f64;
    for _ in 0..trials {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let q = rng.gen_range(1..=3);
        let p = rng.gen_range(1..=4);
        let a = sampling::random_tensor(m, n, p, &mut rng);
        let b = sampling::random_tensor(n, q, p, &mut rng);
        let ab = tphase::tprod(&a, &b).expect("shapes agree");
        let dense = a.bcirc() * b.bcirc();
        let scale = 1.0 + dense.norm();
        worst_hom = worst_hom.max((ab.bcirc() - dense).norm() / scale);
        let folded = Tensor3::fold(&a.unfold(), m, n, p).expect("shape round trip");
        worst_fold = worst_fold.max(folded.sub(&a).expect("same shape").frobenius_norm());
        let adj = tphase::conj_transpose(&a);
        worst_adj = worst_adj.max((adj.bcirc() - a.bcirc().adjoint()).norm() / scale);
        // Square case: tensor eigenvalues match the unfolding's spectrum.
        let sq = sampling::random_tensor(n, n, p, &mut rng);
        let mut te = tphase::t_eigenvalues(&sq).expect("Schur");
        let mut de = kernels::complex_eigenvalues(&sq.bcirc()).expect("Schur");
        let key = |z: &num_complex::Complex64| (z.re, z.im);
        te.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        de.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        let eig_err = te
            .iter()
            .zip(&de)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        worst_eig = worst_eig.max(eig_err);
    }
    run.record(
        "bcirc-homomorphism",
        worst_hom < 1e-10,
        format!("{trials} trials, max rel err {worst_hom:.2e}"),
    );
    run.record(
        "fold-unfold-roundtrip",
        worst_fold == 0.0,
        format!("{trials} trials, max err {worst_fold:.2e}"),
    );
    run.record(
        "adjoint-unfolding",
        worst_adj < 1e-12,
        format!("{trials} trials, max rel err {worst_adj:.2e}"),
    );
    run.record(
        "eigenvalues-vs-unfolding",
        worst_eig < 1e-7,
        format!("{trials} trials, max err {worst_eig:.2e}"),
    );
}

fn verify_majorization(run: &mut SuiteRun, seed: u64, trials: usize) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut theorem_ok = true;
    let mut corollaries_ok = true;
    let mut hermitian_ok = true;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(1..=3);
        let (a, b) = sampling::accretive_pair(n, p, &mut rng);
        match tphase::check_phase_majorization(&a, &b) {
            Ok(rep) => {
                theorem_ok &= rep.theorem.holds;
                corollaries_ok &=
                    rep.sqrt_corollary.holds && rep.gauge_corollary.iter().all(|g| g.holds);
                worst = worst.max(rep.theorem.max_violation);
            }
            Err(_) => theorem_ok = false,
        }
        let x = sampling::random_t_hermitian(n, p, &mut rng);
        let y = sampling::random_t_hermitian(n, p, &mut rng);
        hermitian_ok &= tphase::geomean::check_kyfan_eig(&x, &y)
            .map(|r| r.holds)
            .unwrap_or(false);
        hermitian_ok &= tphase::geomean::check_lidskii_eig(&x, &y)
            .map(|r| r.holds)
            .unwrap_or(false);
    }
    run.record(
        "phase-majorization-theorem",
        theorem_ok,
        format!("{trials} pairs, max violation {worst:.2e}"),
    );
    run.record(
        "gauge-and-sqrt-corollaries",
        corollaries_ok,
        format!("{trials} pairs"),
    );
    run.record(
        "hermitian-eigenvalue-majorizations",
        hermitian_ok,
        format!("{trials} pairs"),
    );
}

fn verify_oracles(run: &mut SuiteRun, seed: u64, trials: usize) {
    use rand::{Rng, SeedableRng};
    use tphase::kernels;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let mut worst_pow = 0.0f64;
    let mut worst_mean = 0.0f64;
    let mut worst_fact = 0.0f64;
    let mut worst_comm = 0.0f64;
    let mut ran = 0usize;
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(1..=3);
        let (a, b) = sampling::accretive_pair(n, p, &mut rng);
        // Power oracle on an accretive Fourier slice.
        let slice = a.fourier_slices().slices[0].clone();
        if let (Ok(direct), Ok(contour)) = (
            kernels::principal_power_matrix(&slice, 0.5),
            kernels::power_contour_oracle(&slice, 0.5, 512),
        ) {
            worst_pow = worst_pow.max((direct - contour).norm() / (1.0 + slice.norm()));
        }
        // Geometric mean closed form vs quadrature, matrix level.
        let (sa, sb) = (
            a.fourier_slices().slices[0].clone(),
            b.fourier_slices().slices[0].clone(),
        );
        if let (Ok(closed), Ok(quad)) = (
            kernels::matrix_geomean(&sa, &sb),
            kernels::matrix_geomean_integral_oracle(&sa, &sb, 160),
        ) {
            worst_mean = worst_mean.max((closed - quad).norm() / (1.0 + sa.norm()));
        }
        // Sectorial factorization reconstructs its input.
        let f = kernels::sectorial_decompose_matrix(&sa).expect("accretive slice");
        worst_fact = worst_fact.max((f.reconstruct() - &sa).norm() / (1.0 + sa.norm()));
        // Tensor mean commutes with the unfolding.
        if let Ok(x) = tphase::t_geomean(&a, &b) {
            if let Ok(dense) = kernels::matrix_geomean(&a.bcirc(), &b.bcirc()) {
                let scale = 1.0 + dense.norm();
                worst_comm = worst_comm.max((x.bcirc() - dense).norm() / scale);
            }
        }
        ran += 1;
    }
    run.record(
        "principal-power-contour-oracle",
        worst_pow < 1e-8,
        format!("{ran} trials, max rel err {worst_pow:.2e}"),
    );
    run.record(
        "geomean-quadrature-oracle",
        worst_mean < 1e-6,
        format!("{ran} trials, max rel err {worst_mean:.2e}"),
    );
    run.record(
        "sectorial-factorization-reconstruction",
        worst_fact < 1e-10,
        format!("{ran} trials, max rel err {worst_fact:.2e}"),
    );
    run.record(
        "geomean-unfolding-commutation",
        worst_comm < 1e-9,
        format!("{ran} trials, max rel err {worst_comm:.2e}"),
    );
}

fn verify_conjecture(run: &mut SuiteRun, seed: u64, trials: usize) {
    let report = tphase::probe_phase_lidskii(trials, seed, 3, 4);
    emit(&json!({
        "probe": "two-sided phase interlacing",
        "trials": report.trials,
        "seed": report.seed,
        "max_violation": report.max_violation,
        "max_sum_gap": report.max_sum_gap,
        "worst_trial": report.worst_trial,
        "skipped": report.skipped,
        "tol": report.tol,
    }));
    // The probe is an artifact, not a gate: it passes by completing.
    run.record(
        "conjecture-probe",
        true,
        format!(
            "{} trials, max violation {:.2e}, {} skipped",
            report.trials, report.max_violation, report.skipped
        ),
    );
}
