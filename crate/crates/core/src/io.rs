//! JSON file formats.
//!
//! Matrix: `{"dim": d, "re": [[..]; d], "im": [[..]; d]}`, row-major.
//! Families and certificates embed matrices in that form. Readers reject
//! non-square or mismatched shapes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brep::{BFamily, BrepError, PeriodicFamily};
use crate::certify::Certificate;
use crate::matcore::{ComplexMatrix, MatError, Tolerances, UnitaryMatrix, C64};

pub const FORMAT_VERSION: &str = concat!("softtorus ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed matrix: {0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Brep(#[from] BrepError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = m.to_rows();
        Self {
            dim: m.dim(),
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
        }
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, IoError> {
        let d = self.dim;
        if d == 0 {
            return Err(IoError::Shape("dim must be positive".into()));
        }
        let check = |name: &str, rows: &[Vec<f64>]| {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                Err(IoError::Shape(format!("{name} is not {d}x{d}")))
            } else {
                Ok(())
            }
        };
        check("re", &self.re)?;
        check("im", &self.im)?;
        let entries: Vec<C64> = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&r, &i)| C64::new(r, i))
            .collect();
        Ok(ComplexMatrix::from_rows(d, &entries)?)
    }

    pub fn to_unitary(&self) -> Result<UnitaryMatrix, IoError> {
        Ok(UnitaryMatrix::new(self.to_matrix()?)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexedMatrix {
    pub index: i64,
    pub matrix: MatrixFile,
}

/// Window family, also used for spectral paths (window `[0, M]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub eps: f64,
    pub dim: usize,
    pub window: [i64; 2],
    pub units: Vec<IndexedMatrix>,
}

impl FamilyFile {
    pub fn from_units(eps: f64, lo: i64, units: &[UnitaryMatrix]) -> Self {
        Self {
            eps,
            dim: units.first().map_or(0, |u| u.dim()),
            window: [lo, lo + units.len() as i64 - 1],
            units: units
                .iter()
                .enumerate()
                .map(|(k, u)| IndexedMatrix {
                    index: lo + k as i64,
                    matrix: u.matrix().into(),
                })
                .collect(),
        }
    }

    fn ordered_units(&self, first: i64, count: usize) -> Result<Vec<UnitaryMatrix>, IoError> {
        if self.units.len() != count {
            return Err(IoError::Shape(format!(
                "expected {count} matrices, found {}",
                self.units.len()
            )));
        }
        let mut sorted: Vec<&IndexedMatrix> = self.units.iter().collect();
        sorted.sort_by_key(|u| u.index);
        sorted
            .iter()
            .enumerate()
            .map(|(k, u)| {
                if u.index != first + k as i64 {
                    return Err(IoError::Shape(format!("missing index {}", first + k as i64)));
                }
                if u.matrix.dim != self.dim {
                    return Err(IoError::Shape(format!("matrix {} has wrong dim", u.index)));
                }
                u.matrix.to_unitary()
            })
            .collect()
    }

    pub fn to_family(&self) -> Result<BFamily, IoError> {
        let [lo, hi] = self.window;
        if hi < lo {
            return Err(IoError::Shape("empty window".into()));
        }
        let units = self.ordered_units(lo, (hi - lo + 1) as usize)?;
        Ok(BFamily::new(self.eps, lo, units)?)
    }
}

impl From<&BFamily> for FamilyFile {
    fn from(f: &BFamily) -> Self {
        Self::from_units(f.eps(), f.lo(), f.units())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicFile {
    pub eps: f64,
    pub dim: usize,
    pub period: usize,
    pub core: i64,
    pub units: Vec<IndexedMatrix>,
}

impl From<&PeriodicFamily> for PeriodicFile {
    fn from(f: &PeriodicFamily) -> Self {
        let inner = FamilyFile::from_units(f.eps(), 0, f.units());
        Self {
            eps: f.eps(),
            dim: f.dim(),
            period: f.period(),
            core: f.core(),
            units: inner.units,
        }
    }
}

impl PeriodicFile {
    pub fn to_family(&self) -> Result<PeriodicFamily, IoError> {
        let helper = FamilyFile {
            eps: self.eps,
            dim: self.dim,
            window: [0, self.period as i64 - 1],
            units: self.units.clone(),
        };
        let units = helper.ordered_units(0, self.period)?;
        Ok(PeriodicFamily::new(self.eps, self.core, units)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceBlock {
    pub hermitian: f64,
    pub unitary: f64,
    pub branch_margin: f64,
    pub psd_clip: f64,
    pub step_slack: f64,
}

impl Default for ToleranceBlock {
    fn default() -> Self {
        let t = Tolerances::default();
        Self {
            hermitian: t.hermitian,
            unitary: t.unitary,
            branch_margin: t.branch_margin,
            psd_clip: t.psd_clip,
            step_slack: crate::brep::STEP_SLACK,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub version: String,
    pub eps: f64,
    pub poly: String,
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub lambda: ComplexValue,
    pub u: MatrixFile,
    pub v: MatrixFile,
    pub achieved_norm: f64,
    pub commutator_norm: f64,
    pub lower_bound: f64,
    pub seed: u64,
    pub q: u32,
    pub tolerances: ToleranceBlock,
}

impl From<&Certificate> for CertificateFile {
    fn from(c: &Certificate) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            eps: c.eps,
            poly: c.poly.clone(),
            n: c.n,
            p: c.p,
            m: c.m,
            lambda: ComplexValue {
                re: c.lambda.re,
                im: c.lambda.im,
            },
            u: (&c.u).into(),
            v: (&c.v).into(),
            achieved_norm: c.achieved_norm,
            commutator_norm: c.commutator_norm,
            lower_bound: c.lower_bound,
            seed: c.seed,
            q: c.q,
            tolerances: ToleranceBlock::default(),
        }
    }
}

impl CertificateFile {
    /// Matrices are read without unitarity checks; that is the verifier's job.
    pub fn to_certificate(&self) -> Result<Certificate, IoError> {
        Ok(Certificate {
            eps: self.eps,
            poly: self.poly.clone(),
            n: self.n,
            p: self.p,
            m: self.m,
            lambda: C64::new(self.lambda.re, self.lambda.im),
            u: self.u.to_matrix()?,
            v: self.v.to_matrix()?,
            achieved_norm: self.achieved_norm,
            commutator_norm: self.commutator_norm,
            lower_bound: self.lower_bound,
            seed: self.seed,
            q: self.q,
        })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    from_json(&fs::read_to_string(path)?)
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| IoError::Shape(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(
        ".{}.tmp{}",
        file_name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_atomic(path, &to_json(value)?)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, IoError> {
    read_json::<MatrixFile>(path)?.to_matrix()
}

pub fn read_certificate(path: &Path) -> Result<Certificate, IoError> {
    read_json::<CertificateFile>(path)?.to_certificate()
}
