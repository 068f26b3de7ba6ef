//! File formats: `.ttj` tensors, `.tlj` systems, and report helpers.
//!
//! `.ttj` is JSON: `{"m": int, "n": int, "p": int, "data": d}` with
//! `d[slice][row][col] = [re, im]`.  `.tlj` is JSON with a `kind` tag:
//! `{"kind": "ss", "A": ttj, "B": ttj, "C": ttj, "D": ttj}` for state-space
//! systems (real entries) or `{"kind": "rational", "slices": s}` with
//! `s[slice][row][col] = {"num": [...], "den": [...]}` (descending powers)
//! for rational ones.
//!
//! Readers reject ragged arrays, unknown keys, dimension mismatches and
//! non-finite numbers; writers emit 17 significant digits so a write/read
//! trip is bit-exact.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{RatFn, RationalSliceTf, StateSpaceTensor, TransferTensor};
use crate::tensor::Tensor3;

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------------------
// Tensors (.ttj)
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TtjFile {
    m: usize,
    n: usize,
    p: usize,
    data: Vec<Vec<Vec<[f64; 2]>>>,
}

fn tensor_from_ttj(f: &TtjFile) -> Result<Tensor3> {
    if f.m == 0 || f.n == 0 || f.p == 0 {
        return Err(Error::Format(format!(
            "tensor dimensions must be positive, got {}x{}x{}",
            f.m, f.n, f.p
        )));
    }
    if f.data.len() != f.p {
        return Err(Error::Format(format!(
            "expected {} frontal slices, found {}",
            f.p,
            f.data.len()
        )));
    }
    let mut t = Tensor3::zeros(f.m, f.n, f.p);
    for (k, slice) in f.data.iter().enumerate() {
        if slice.len() != f.m {
            return Err(Error::Format(format!(
                "slice {k} has {} rows, expected {}",
                slice.len(),
                f.m
            )));
        }
        for (i, row) in slice.iter().enumerate() {
            if row.len() != f.n {
                return Err(Error::Format(format!(
                    "slice {k} row {i} has {} entries, expected {}",
                    row.len(),
                    f.n
                )));
            }
            for (j, cell) in row.iter().enumerate() {
                if !cell[0].is_finite() || !cell[1].is_finite() {
                    return Err(Error::Format(format!(
                        "non-finite entry at ({i}, {j}, {k})"
                    )));
                }
                t.set(i, j, k, Complex64::new(cell[0], cell[1]));
            }
        }
    }
    Ok(t)
}

/// Parses a tensor from `.ttj` JSON text.
pub fn tensor_from_json_str(text: &str) -> Result<Tensor3> {
    let file: TtjFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    tensor_from_ttj(&file)
}

/// Serializes a tensor as `.ttj` JSON with 17-significant-digit numbers.
pub fn tensor_to_json_string(t: &Tensor3) -> String {
    let (m, n, p) = t.shape();
    let mut out = String::new();
    out.push_str(&format!("{{\"m\":{m},\"n\":{n},\"p\":{p},\"data\":[\n"));
    for k in 0..p {
        out.push('[');
        for i in 0..m {
            out.push('[');
            for j in 0..n {
                let v = t.get(i, j, k);
                out.push_str(&format!("[{},{}]", fmt17(v.re), fmt17(v.im)));
                if j + 1 < n {
                    out.push(',');
                }
            }
            out.push(']');
            if i + 1 < m {
                out.push(',');
            }
        }
        out.push(']');
        if k + 1 < p {
            out.push_str(",\n");
        }
    }
    out.push_str("]}\n");
    out
}

/// Reads a `.ttj` tensor file.
pub fn read_tensor(path: &Path) -> Result<Tensor3> {
    tensor_from_json_str(&std::fs::read_to_string(path)?)
}

/// Writes a `.ttj` tensor file.
pub fn write_tensor(path: &Path, t: &Tensor3) -> Result<()> {
    std::fs::write(path, tensor_to_json_string(t))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Systems (.tlj)
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RatFnJson {
    num: Vec<f64>,
    den: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum TljFile {
    #[serde(rename = "ss")]
    Ss {
        #[serde(rename = "A")]
        a: TtjFile,
        #[serde(rename = "B")]
        b: TtjFile,
        #[serde(rename = "C")]
        c: TtjFile,
        #[serde(rename = "D")]
        d: TtjFile,
    },
    #[serde(rename = "rational")]
    Rational {
        slices: Vec<Vec<Vec<RatFnJson>>>,
    },
}

/// Parses a system from `.tlj` JSON text.
pub fn system_from_json_str(text: &str) -> Result<TransferTensor> {
    let file: TljFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    match file {
        TljFile::Ss { a, b, c, d } => {
            let sys = StateSpaceTensor::new(
                tensor_from_ttj(&a)?,
                tensor_from_ttj(&b)?,
                tensor_from_ttj(&c)?,
                tensor_from_ttj(&d)?,
            )?;
            Ok(sys.into())
        }
        TljFile::Rational { slices } => {
            let mut built = Vec::with_capacity(slices.len());
            for slice in slices {
                let mut rows = Vec::with_capacity(slice.len());
                for row in slice {
                    let mut cells = Vec::with_capacity(row.len());
                    for cell in row {
                        cells.push(RatFn::new(&cell.num, &cell.den)?);
                    }
                    rows.push(cells);
                }
                built.push(rows);
            }
            Ok(RationalSliceTf::new(built)?.into())
        }
    }
}

/// Reads a `.tlj` system file.
pub fn read_system(path: &Path) -> Result<TransferTensor> {
    system_from_json_str(&std::fs::read_to_string(path)?)
}

/// Serializes a system as `.tlj` JSON (17 significant digits).
pub fn system_to_json_string(sys: &TransferTensor) -> String {
    match sys {
        TransferTensor::StateSpace(s) => {
            let part = |t: &Tensor3| {
                let body = tensor_to_json_string(t);
                body.trim_end().to_string()
            };
            format!(
                "{{\"kind\":\"ss\",\"A\":{},\"B\":{},\"C\":{},\"D\":{}}}\n",
                part(&s.a),
                part(&s.b),
                part(&s.c),
                part(&s.d)
            )
        }
        TransferTensor::Rational(r) => {
            let (m, p) = (r.size(), r.depth());
            let coeffs = |v: &[f64]| -> String {
                let cells: Vec<String> = v.iter().map(|x| fmt17(*x)).collect();
                format!("[{}]", cells.join(","))
            };
            let mut out = String::from("{\"kind\":\"rational\",\"slices\":[\n");
            for k in 0..p {
                out.push('[');
                for i in 0..m {
                    out.push('[');
                    for j in 0..m {
                        let e = r.entry(i, j, k);
                        // A zero entry keeps an explicit zero numerator.
                        let num: &[f64] = if e.num.is_empty() { &[0.0] } else { &e.num };
                        out.push_str(&format!(
                            "{{\"num\":{},\"den\":{}}}",
                            coeffs(num),
                            coeffs(&e.den)
                        ));
                        if j + 1 < m {
                            out.push(',');
                        }
                    }
                    out.push(']');
                    if i + 1 < m {
                        out.push(',');
                    }
                }
                out.push(']');
                if k + 1 < p {
                    out.push_str(",\n");
                }
            }
            out.push_str("]}\n");
            out
        }
    }
}

/// Writes a `.tlj` system file.
pub fn write_system(path: &Path, sys: &TransferTensor) -> Result<()> {
    std::fs::write(path, system_to_json_string(sys))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Report payloads
// ---------------------------------------------------------------------------

/// Sidecar written next to a truncated tensor.
#[derive(Debug, Serialize)]
pub struct TruncationSidecar {
    pub r: usize,
    /// Phases retained by the truncation, radians, nonincreasing.
    pub kept_phases: Vec<f64>,
    /// Phases zeroed out by the truncation, radians, nonincreasing.
    pub residual_phases: Vec<f64>,
    /// Gauge value of the best achievable residual at this rank.
    pub optimal_value: f64,
    /// Gauge in its string form, e.g. `kyfan:3`, `lp:2`, `linf`.
    pub gauge: String,
}

// ---------------------------------------------------------------------------
