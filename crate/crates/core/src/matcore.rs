//! Dense complex linear algebra and spectral calculus.
//!
//! [`ComplexMatrix`] is the substrate every representation is built from.
//! [`HermitianMatrix`] and [`UnitaryMatrix`] are validated newtypes: they can
//! only be constructed through checks against [`Tolerances`], so downstream
//! code can rely on the property without re-checking it.
//!
//! Storage and the raw factorizations (Hermitian eigensolver, complex Schur,
//! SVD) are delegated to `nalgebra`; the functional calculus on top of them
//! (principal logarithm, fractional powers, square roots) lives here.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatError {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (‖A − A*‖ = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not unitary (‖U*U − I‖ = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },
    #[error("eigenphase {phase} lies within the branch margin of −π")]
    BranchCut { phase: f64 },
    #[error("eigen decomposition did not converge")]
    NoConvergence,
    #[error("fractional power exponent {0} outside [0, 1]")]
    ExponentOutOfRange(f64),
}

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound on `‖A − A*‖ / max(1, ‖A‖)`.
    pub hermitian: f64,
    /// Bound on `‖U*U − I‖`.
    pub unitary: f64,
    /// Minimum angular distance of an eigenvalue from the logarithm's branch cut.
    pub branch_margin: f64,
    /// Negative eigenvalues above `−psd_clip` are clamped to zero.
    pub psd_clip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            unitary: 1e-10,
            branch_margin: 1e-8,
            psd_clip: 1e-10,
        }
    }
}

/// Square dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self, MatError> {
        if inner.nrows() != inner.ncols() {
            return Err(MatError::NotSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatError::NonFinite);
        }
        Ok(Self(inner))
    }

    /// Builds from row-major entries.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self, MatError> {
        if entries.len() != dim * dim {
            return Err(MatError::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MatError::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_rows(dim, &entries)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn diag(entries: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            entries,
        )))
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let e: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&e)
    }

    pub fn scalar(z: C64) -> Self {
        Self::diag(&[z])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> Self {
        Self(&self.0 * z)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Leading `m × m` block, i.e. `P A P` for the projection onto the first
    /// `m` coordinates, viewed on the range of `P`.
    pub fn leading_block(&self, m: usize) -> Self {
        Self(self.0.view((0, 0), (m, m)).into_owned())
    }

    /// Assembles a `2d × 2d` matrix from four `d × d` blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.dim();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&a.0);
        out.view_mut((0, n), (n, n)).copy_from(&b.0);
        out.view_mut((n, 0), (n, n)).copy_from(&c.0);
        out.view_mut((n, n), (n, n)).copy_from(&d.0);
        Self(out)
    }

    /// Block diagonal matrix with the given blocks, all of one size.
    pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        let blocks: Vec<&ComplexMatrix> = blocks.into_iter().collect();
        let d = blocks.first().map_or(0, |b| b.dim());
        let n = d * blocks.len();
        let mut out = DMatrix::zeros(n, n);
        for (k, b) in blocks.iter().enumerate() {
            out.view_mut((k * d, k * d), (d, d)).copy_from(&b.0);
        }
        Self(out)
    }

    fn check_same_dim(&self, other: &Self) -> Result<(), MatError> {
        if self.dim() != other.dim() {
            return Err(MatError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 - &other.0))
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_dim(other)?;
        Ok(Self(&self.0 * &other.0 - &other.0 * &self.0))
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..k {
            acc = Self(&acc.0 * &self.0);
        }
        acc
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("dimension mismatch in matrix sum")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("dimension mismatch in matrix difference")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("dimension mismatch in matrix product")
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Hermitian matrix, `‖A − A*‖ ≤ hermitian · max(1, ‖A‖)`.
///
/// The stored entries are exactly Hermitian: construction replaces `A` by
/// `(A + A*)/2` once the check passes.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, MatError> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self, MatError> {
        if !m.is_finite() {
            return Err(MatError::NonFinite);
        }
        let defect = raw_norm(&(&m.0 - m.0.adjoint()));
        let scale = raw_norm(&m.0).max(1.0);
        if defect > tol.hermitian * scale {
            return Err(MatError::NotHermitian { defect });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Builds a Hermitian matrix from any square matrix by taking its Hermitian part.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn from_real_diag(entries: &[f64]) -> Self {
        Self(ComplexMatrix::real_diag(entries))
    }

    pub fn scale(&self, t: f64) -> Self {
        Self(self.0.scale(C64::new(t, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `f(A)` by spectral calculus.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let (vals, basis) = herm_eig_raw(&self.0);
        let mapped: Vec<C64> = vals.iter().map(|&l| C64::new(f(l), 0.0)).collect();
        Self::symmetrize(&spectral_recompose(&basis, &mapped))
    }

    /// `exp(i·t·A)`, unitary.
    pub fn exp_i(&self, t: f64) -> UnitaryMatrix {
        let (vals, basis) = herm_eig_raw(&self.0);
        let phases: Vec<C64> = vals.iter().map(|&l| C64::from_polar(1.0, t * l)).collect();
        UnitaryMatrix(spectral_recompose(&basis, &phases))
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Unitary matrix, `‖U*U − I‖ ≤ unitary`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, MatError> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: ComplexMatrix, tol: &Tolerances) -> Result<Self, MatError> {
        if !m.is_finite() {
            return Err(MatError::NonFinite);
        }
        let defect = unitarity_defect(&m);
        if defect > tol.unitary {
            return Err(MatError::NotUnitary { defect });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix known to be unitary by construction (permutations,
    /// products of unitaries). Only checked in debug builds.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert!(unitarity_defect(&m) < 1e-8, "from_trusted on non-unitary");
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    /// `diag(e^{iθ_1}, …)`.
    pub fn from_phases(phases: &[f64]) -> Self {
        let d: Vec<C64> = phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
        Self(ComplexMatrix::diag(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        Ok(Self(self.0.try_mul(&other.0)?))
    }

    /// Multiplication by a unimodular scalar.
    pub fn rotate(&self, z: C64) -> Self {
        Self(self.0.scale(z / z.norm()))
    }
}

impl AsRef<ComplexMatrix> for UnitaryMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

fn raw_norm(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// `‖U*U − I‖`.
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    raw_norm(&(m.0.adjoint() * &m.0 - DMatrix::<C64>::identity(n, n)))
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> Result<f64, MatError> {
    if !a.is_finite() {
        return Err(MatError::NonFinite);
    }
    Ok(raw_norm(&a.0))
}

/// `‖A − B‖`.
pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, MatError> {
    op_norm(&a.try_sub(b)?)
}

fn herm_eig_raw(h: &ComplexMatrix) -> (Vec<f64>, DMatrix<C64>) {
    let n = h.dim();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(h.0.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut basis = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        let norm = col.norm();
        if norm > 0.0 {
            col /= C64::new(norm, 0.0);
        }
        // phase-normalize: first component of non-negligible size real positive
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8).copied() {
            col *= lead.conj() / lead.norm();
        }
        basis.set_column(dst, &col);
    }
    (vals, basis)
}

fn spectral_recompose(basis: &DMatrix<C64>, values: &[C64]) -> ComplexMatrix {
    let mut scaled = basis.clone();
    for (k, &v) in values.iter().enumerate() {
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= v);
    }
    ComplexMatrix(scaled * basis.adjoint())
}

/// Hermitian eigendecomposition `H = B·diag(λ)·B*`.
///
/// Eigenvalues ascend; each column of `B` has its first non-negligible
/// component real and positive.
pub fn herm_eig(h: &HermitianMatrix) -> (Vec<f64>, UnitaryMatrix) {
    let (vals, basis) = herm_eig_raw(&h.0);
    (vals, UnitaryMatrix(ComplexMatrix(basis)))
}

/// Eigenphases of a unitary with a unitary eigenbasis.
///
/// Phases lie in `(−π, π]`, except that eigenvalues sitting within
/// `branch_margin` below the cut (phase just above `−π`) are continued past
/// `π`, so that `−1` and its numerical neighbours all land near `+π`.
fn unitary_eig(u: &UnitaryMatrix, tol: &Tolerances) -> Result<(Vec<f64>, DMatrix<C64>), MatError> {
    let n = u.dim();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let schur = Schur::try_new(u.0 .0.clone(), f64::EPSILON, 10_000).ok_or(MatError::NoConvergence)?;
    let (q, t) = schur.unpack();
    let phases = (0..n)
        .map(|k| {
            let theta = t[(k, k)].arg();
            if theta < -PI + tol.branch_margin {
                theta + 2.0 * PI
            } else {
                theta
            }
        })
        .collect();
    Ok((phases, q))
}

/// Principal logarithm: Hermitian `Θ` with `U = exp(iΘ)` and spectrum in `(−π, π)`.
///
/// Fails with [`MatError::BranchCut`] when an eigenvalue lies within the
/// branch margin of `−1`, where the principal branch is discontinuous.
pub fn unitary_log(u: &UnitaryMatrix) -> Result<HermitianMatrix, MatError> {
    unitary_log_with(u, &Tolerances::default())
}

pub fn unitary_log_with(u: &UnitaryMatrix, tol: &Tolerances) -> Result<HermitianMatrix, MatError> {
    let (phases, q) = unitary_eig(u, tol)?;
    if let Some(&bad) = phases.iter().find(|t| t.abs() > PI - tol.branch_margin) {
        return Err(MatError::BranchCut { phase: bad });
    }
    let vals: Vec<C64> = phases.iter().map(|&t| C64::new(t, 0.0)).collect();
    Ok(HermitianMatrix::symmetrize(&spectral_recompose(&q, &vals)))
}

/// Fractional power `U^t = Σ e^{i t θ_j} P_j` on principal eigenphases.
///
/// `t = 1` returns `U` itself and `t = 0` the identity. The eigenvalue `−1`
/// takes phase `+π`, so `(−1)^{1/2} = i`.
pub fn unitary_power(u: &UnitaryMatrix, t: f64) -> Result<UnitaryMatrix, MatError> {
    unitary_power_with(u, t, &Tolerances::default())
}

pub fn unitary_power_with(
    u: &UnitaryMatrix,
    t: f64,
    tol: &Tolerances,
) -> Result<UnitaryMatrix, MatError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(MatError::ExponentOutOfRange(t));
    }
    if t == 1.0 {
        return Ok(u.clone());
    }
    if t == 0.0 {
        return Ok(UnitaryMatrix::identity(u.dim()));
    }
    let (phases, q) = unitary_eig(u, tol)?;
    Ok(SpectralPath { phases, basis: q }.at(t))
}

/// Eigen data of a unitary, reused when sampling many powers `U^t`.
#[derive(Debug, Clone)]
pub struct SpectralPath {
    phases: Vec<f64>,
    basis: DMatrix<C64>,
}

impl SpectralPath {
    pub fn new(u: &UnitaryMatrix, tol: &Tolerances) -> Result<Self, MatError> {
        let (phases, basis) = unitary_eig(u, tol)?;
        Ok(Self { phases, basis })
    }

    /// Largest eigenphase modulus.
    pub fn max_phase(&self) -> f64 {
        self.phases.iter().map(|t| t.abs()).fold(0.0, f64::max)
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn at(&self, t: f64) -> UnitaryMatrix {
        let vals: Vec<C64> = self
            .phases
            .iter()
            .map(|&th| C64::from_polar(1.0, t * th))
            .collect();
        UnitaryMatrix(spectral_recompose(&self.basis, &vals))
    }
}

/// Positive square root of a positive semidefinite matrix.
pub fn psd_sqrt(p: &HermitianMatrix) -> Result<HermitianMatrix, MatError> {
    psd_sqrt_with(p, &Tolerances::default())
}

pub fn psd_sqrt_with(p: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix, MatError> {
    let (vals, basis) = herm_eig_raw(&p.0);
    if let Some(&min_eig) = vals.first() {
        if min_eig < -tol.psd_clip {
            return Err(MatError::NotPsd { min_eig });
        }
    }
    let roots: Vec<C64> = vals.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)).collect();
    Ok(HermitianMatrix::symmetrize(&spectral_recompose(&basis, &roots)))
}

/// `X*X − XX*` as a Hermitian matrix.
pub fn self_commutator(x: &ComplexMatrix) -> HermitianMatrix {
    let xs = x.adjoint();
    HermitianMatrix::symmetrize(&(&(&xs * x) - &(x * &xs)))
}

/// Smallest eigenvalue of `X*X − XX*`; `X` is δ-hyponormal iff this is `≥ −δ`.
pub fn hyponormal_defect(x: &ComplexMatrix) -> Result<f64, MatError> {
    if !x.is_finite() {
        return Err(MatError::NonFinite);
    }
    let (vals, _) = herm_eig_raw(&self_commutator(x).0);
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// `tr(X) / dim`.
pub fn normalized_trace(x: &ComplexMatrix) -> Result<C64, MatError> {
    if !x.is_finite() {
        return Err(MatError::NonFinite);
    }
    if x.dim() == 0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(x.trace() / x.dim() as f64)
}
