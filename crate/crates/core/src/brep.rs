//! Finite dimensional representations of the unitary chain algebra.
//!
//! A [`BFamily`] is a window of unitaries `U_lo, …, U_hi` whose consecutive
//! steps satisfy `‖U_{j+1} − U_j‖ ≤ ε`. The same data can be presented as a
//! base unitary plus Hermitian increments ([`HFamily`]) via
//! `U_{j+1} = exp(iπ·H_j)·U_j`; [`hs_from_us`] and [`us_from_hs`] are mutually
//! inverse. Compression to a coordinate subspace followed by unitary dilation
//! ([`compress_and_dilate`]) produces new families of doubled size, and
//! [`periodize`] closes a window into a cycle by walking both endpoints to
//! the identity, which makes the block cyclic shift in [`CovariantRep`]
//! implement the index shift `u_n ↦ u_{n+1}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::matcore::{
    distance, op_norm, unitary_log, ComplexMatrix, HermitianMatrix, MatError, SpectralPath,
    Tolerances, UnitaryMatrix, C64,
};
use crate::ncpoly::{Assignment, NCPoly, PolyError, Symbol};

/// Slack allowed on the step bound of stored families.
pub const STEP_SLACK: f64 = 1e-9;
/// Slack allowed on the step bound of a single spectral path.
pub const PATH_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrepError {
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("eps = {0} outside the admissible range")]
    EpsOutOfRange(f64),
    #[error("family is empty")]
    Empty,
    #[error("step {index}: ‖U_(j+1) − U_j‖ = {step} exceeds eps = {eps}")]
    StepBound { index: i64, step: f64, eps: f64 },
    #[error("increment {index}: ‖H‖ = {norm} exceeds the bound {bound}")]
    IncrementBound { index: i64, norm: f64, bound: f64 },
    #[error("matrices of differing dimensions in one family")]
    MixedDimensions,
    #[error("window [{lo}, {hi}] is not symmetric about 0")]
    NonSymmetricWindow { lo: i64, hi: i64 },
    #[error("anchor {anchor} outside window [{lo}, {hi}]")]
    AnchorOutsideWindow { anchor: i64, lo: i64, hi: i64 },
    #[error("period must be positive and even, got {0}")]
    BadPeriod(usize),
    #[error("operator norm {0} exceeds 1: not a contraction")]
    NotContraction(f64),
    #[error("compression rank {m} exceeds dimension {dim}")]
    RankTooLarge { m: usize, dim: usize },
    #[error("polynomial uses v; only chain letters u_n may be represented here")]
    NotInChainAlgebra,
}

/// Largest eigenphase an increment `exp(iΘ)` may have for a step of size ε.
pub fn max_phase_step(eps: f64) -> f64 {
    2.0 * (eps.min(2.0) / 2.0).asin()
}

/// Bound on `‖H_j‖` in the Hermitian presentation: `(2/π)·arcsin(ε/2)`.
pub fn increment_bound(eps: f64) -> f64 {
    max_phase_step(eps) / PI
}

fn check_eps_open(eps: f64) -> Result<(), BrepError> {
    if eps > 0.0 && eps < 2.0 {
        Ok(())
    } else {
        Err(BrepError::EpsOutOfRange(eps))
    }
}

// Families themselves admit ε = 2; the Hermitian presentation needs ε < 2.
fn check_eps_closed(eps: f64) -> Result<(), BrepError> {
    if eps > 0.0 && eps <= 2.0 {
        Ok(())
    } else {
        Err(BrepError::EpsOutOfRange(eps))
    }
}

/// Unitaries `U_lo, …, U_hi` with step bound ε.
#[derive(Debug, Clone, PartialEq)]
pub struct BFamily {
    eps: f64,
    lo: i64,
    units: Vec<UnitaryMatrix>,
}

impl BFamily {
    pub fn new(eps: f64, lo: i64, units: Vec<UnitaryMatrix>) -> Result<Self, BrepError> {
        check_eps_closed(eps)?;
        let dim = units.first().ok_or(BrepError::Empty)?.dim();
        if units.iter().any(|u| u.dim() != dim) {
            return Err(BrepError::MixedDimensions);
        }
        for (k, pair) in units.windows(2).enumerate() {
            let step = distance(pair[1].matrix(), pair[0].matrix())?;
            if step > eps + STEP_SLACK {
                return Err(BrepError::StepBound {
                    index: lo + k as i64,
                    step,
                    eps,
                });
            }
        }
        Ok(Self { eps, lo, units })
    }

    /// One unitary repeated over a window.
    pub fn constant(eps: f64, lo: i64, hi: i64, u: UnitaryMatrix) -> Result<Self, BrepError> {
        let len = (hi - lo + 1).max(1) as usize;
        Self::new(eps, lo, vec![u; len])
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.units[0].dim()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.units.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi())
    }

    pub fn contains(&self, j: i64) -> bool {
        j >= self.lo && j <= self.hi()
    }

    pub fn get(&self, j: i64) -> Option<&UnitaryMatrix> {
        if self.contains(j) {
            Some(&self.units[(j - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn units(&self) -> &[UnitaryMatrix] {
        &self.units
    }

    /// Step norms `‖U_{j+1} − U_j‖` in window order.
    pub fn steps(&self) -> Vec<f64> {
        self.units
            .windows(2)
            .map(|w| distance(w[1].matrix(), w[0].matrix()).unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Assignment `u_n ↦ U_n` over the window.
    pub fn assignment(&self) -> Result<Assignment, BrepError> {
        let mut a = Assignment::new(self.dim());
        for (k, u) in self.units.iter().enumerate() {
            a.insert(Symbol::U(self.lo + k as i64), u)?;
        }
        Ok(a)
    }

    /// Evaluates a chain polynomial at this family.
    pub fn eval(&self, b: &NCPoly) -> Result<ComplexMatrix, BrepError> {
        if b.uses_v() {
            return Err(BrepError::NotInChainAlgebra);
        }
        Ok(b.eval(&self.assignment()?)?)
    }
}

/// Base unitary `V_0` at index `anchor` plus Hermitian increments
/// `H_lo, …, H_{hi−1}` with `U_{j+1} = exp(iπ·H_j)·U_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HFamily {
    eps: f64,
    anchor: i64,
    v0: UnitaryMatrix,
    lo: i64,
    hs: Vec<HermitianMatrix>,
}

impl HFamily {
    /// `lo` is the first index of the unitary window; increments cover
    /// `[lo, lo + hs.len() − 1]`.
    pub fn new(
        eps: f64,
        anchor: i64,
        v0: UnitaryMatrix,
        lo: i64,
        hs: Vec<HermitianMatrix>,
    ) -> Result<Self, BrepError> {
        check_eps_open(eps)?;
        let hi = lo + hs.len() as i64;
        if anchor < lo || anchor > hi {
            return Err(BrepError::AnchorOutsideWindow { anchor, lo, hi });
        }
        if hs.iter().any(|h| h.dim() != v0.dim()) {
            return Err(BrepError::MixedDimensions);
        }
        let bound = increment_bound(eps);
        for (k, h) in hs.iter().enumerate() {
            let norm = op_norm(h.matrix())?;
            if norm > bound + STEP_SLACK {
                return Err(BrepError::IncrementBound {
                    index: lo + k as i64,
                    norm,
                    bound,
                });
            }
        }
        Ok(Self {
            eps,
            anchor,
            v0,
            lo,
            hs,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.v0.dim()
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    pub fn v0(&self) -> &UnitaryMatrix {
        &self.v0
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Window of the unitaries this presents.
    pub fn unit_window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.hs.len() as i64)
    }

    pub fn increments(&self) -> &[HermitianMatrix] {
        &self.hs
    }

    pub fn increment(&self, j: i64) -> Option<&HermitianMatrix> {
        usize::try_from(j - self.lo).ok().and_then(|k| self.hs.get(k))
    }
}

/// `H_j = (1/π)·Log(U_{j+1}·U_j*)`, anchored at `U_0` (or `U_lo` if 0 is
/// outside the window).
pub fn hs_from_us(f: &BFamily) -> Result<HFamily, BrepError> {
    check_eps_open(f.eps)?;
    let anchor = if f.contains(0) { 0 } else { f.lo };
    let mut hs = Vec::with_capacity(f.units.len().saturating_sub(1));
    for w in f.units.windows(2) {
        let ratio = w[1].mul(&w[0].adjoint())?;
        hs.push(unitary_log(&ratio)?.scale(1.0 / PI));
    }
    HFamily::new(
        f.eps,
        anchor,
        f.get(anchor).expect("anchor in window").clone(),
        f.lo,
        hs,
    )
}

/// Inverse of [`hs_from_us`]: `U_{n+1} = e^{iπH_n}·U_n` above the anchor and
/// `U_n = e^{−iπH_n}·U_{n+1}` below it.
pub fn us_from_hs(h: &HFamily) -> Result<BFamily, BrepError> {
    let (lo, hi) = h.unit_window();
    let len = (hi - lo + 1) as usize;
    let mut units: Vec<Option<UnitaryMatrix>> = vec![None; len];
    let at = |j: i64| (j - lo) as usize;
    units[at(h.anchor)] = Some(h.v0.clone());
    for j in h.anchor..hi {
        let step = h.hs[at(j)].exp_i(PI);
        let next = step.mul(units[at(j)].as_ref().expect("filled"))?;
        units[at(j + 1)] = Some(next);
    }
    for j in (lo..h.anchor).rev() {
        let step = h.hs[at(j)].exp_i(-PI);
        let prev = step.mul(units[at(j + 1)].as_ref().expect("filled"))?;
        units[at(j)] = Some(prev);
    }
    BFamily::new(h.eps, lo, units.into_iter().map(|u| u.expect("filled")).collect())
}

/// `χ_t`: keeps `V_0`, scales every increment by `t ∈ [0, 1]`.
pub fn scale_homotopy(h: &HFamily, t: f64) -> Result<HFamily, BrepError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(MatError::ExponentOutOfRange(t).into());
    }
    HFamily::new(
        h.eps,
        h.anchor,
        h.v0.clone(),
        h.lo,
        h.hs.iter().map(|x| x.scale(t)).collect(),
    )
}

/// Unitary dilation `[[T, √(I−TT*)], [√(I−T*T), −T*]]` of a contraction.
///
/// Both defect operators are taken from one SVD `T = W·Σ·X*`, so the
/// intertwining `T*·√(I−TT*) = √(I−T*T)·T*` holds to rounding even when
/// singular values sit at 1.
pub fn halmos_dilate(t: &ComplexMatrix) -> Result<UnitaryMatrix, BrepError> {
    let norm = op_norm(t)?;
    if norm > 1.0 + 1e-10 {
        return Err(BrepError::NotContraction(norm));
    }
    let n = t.dim();
    let svd = t.as_inner().clone().svd(true, true);
    let w = svd.u.expect("requested");
    let xt = svd.v_t.expect("requested");
    let defects: Vec<C64> = svd
        .singular_values
        .iter()
        .map(|&s| C64::new((1.0 - s.min(1.0).powi(2)).sqrt(), 0.0))
        .collect();
    let sandwich = |left: &DMatrix<C64>| {
        let mut scaled = left.clone();
        for (k, &d) in defects.iter().enumerate() {
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= d);
        }
        ComplexMatrix::new(&scaled * left.adjoint()).expect("finite")
    };
    let defect_left = sandwich(&w);
    let defect_right = sandwich(&xt.adjoint());
    let top_left = if norm > 1.0 {
        t.scale(C64::new(1.0 / norm, 0.0))
    } else {
        t.clone()
    };
    debug_assert_eq!(defect_left.dim(), n);
    let v = ComplexMatrix::from_blocks(&top_left, &defect_left, &defect_right, &-&top_left.adjoint());
    Ok(UnitaryMatrix::new(v)?)
}

/// Compresses a family to the first `m` coordinates and dilates back to a
/// family of size `2m`: `V_{0,m}` dilates `P·V_0·P` and each increment
/// becomes `diag(P·H_j·P, P·H_j·P)`.
pub fn compress_and_dilate(reference: &BFamily, m: usize) -> Result<BFamily, BrepError> {
    let dim = reference.dim();
    if m == 0 || m > dim {
        return Err(BrepError::RankTooLarge { m, dim });
    }
    let h = hs_from_us(reference)?;
    let v0m = halmos_dilate(&h.v0.matrix().leading_block(m))?;
    let hs = h
        .hs
        .iter()
        .map(|x| {
            let k = x.matrix().leading_block(m);
            HermitianMatrix::symmetrize(&ComplexMatrix::block_diag([&k, &k]))
        })
        .collect();
    us_from_hs(&HFamily::new(h.eps, h.anchor, v0m, h.lo, hs)?)
}

/// `W^{1 − k/steps}` for `k = 0, …, steps`: starts at `W`, ends at `I`.
pub fn spectral_path(w: &UnitaryMatrix, steps: usize) -> Result<Vec<UnitaryMatrix>, BrepError> {
    if steps == 0 {
        return Ok(vec![w.clone()]);
    }
    let sp = SpectralPath::new(w, &Tolerances::default())?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(w.clone());
    for k in 1..steps {
        out.push(sp.at(1.0 - k as f64 / steps as f64));
    }
    out.push(UnitaryMatrix::identity(w.dim()));
    Ok(out)
}

/// Fewest equal spectral steps of size ≤ ε from `W` to `I`:
/// `ceil(θ_max / (2·arcsin(ε/2)))`, zero when `W = I`.
pub fn steps_to_identity(w: &UnitaryMatrix, eps: f64) -> Result<usize, BrepError> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(BrepError::EpsOutOfRange(eps));
    }
    let theta = SpectralPath::new(w, &Tolerances::default())?.max_phase();
    if theta <= f64::EPSILON {
        return Ok(0);
    }
    // relative slack absorbs rounding in exact ratios such as π / (π/3)
    let ratio = theta / max_phase_step(eps);
    Ok((ratio * (1.0 - 1e-13)).ceil().max(1.0) as usize)
}

/// Path `w_0 = W, …, w_M = I` with steps ≤ ε along the spectral geodesic.
pub fn path_to_identity(w: &UnitaryMatrix, eps: f64) -> Result<Vec<UnitaryMatrix>, BrepError> {
    let m = steps_to_identity(w, eps)?;
    spectral_path(w, m)
}

/// Unitaries indexed by `ℤ/p`, with step bound ε around the whole cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFamily {
    eps: f64,
    core: i64,
    units: Vec<UnitaryMatrix>,
}

impl PeriodicFamily {
    /// `core` is the radius `N` of the window `[−N, N]` the family was
    /// built from; it bounds which chain indices the family was optimized on.
    pub fn new(eps: f64, core: i64, units: Vec<UnitaryMatrix>) -> Result<Self, BrepError> {
        check_eps_closed(eps)?;
        let p = units.len();
        if p == 0 || p % 2 == 1 {
            return Err(BrepError::BadPeriod(p));
        }
        let dim = units[0].dim();
        if units.iter().any(|u| u.dim() != dim) {
            return Err(BrepError::MixedDimensions);
        }
        for j in 0..p {
            let step = distance(units[(j + 1) % p].matrix(), units[j].matrix())?;
            if step > eps + STEP_SLACK {
                return Err(BrepError::StepBound {
                    index: j as i64,
                    step,
                    eps,
                });
            }
        }
        Ok(Self { eps, core, units })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.units[0].dim()
    }

    pub fn period(&self) -> usize {
        self.units.len()
    }

    pub fn core(&self) -> i64 {
        self.core
    }

    pub fn units(&self) -> &[UnitaryMatrix] {
        &self.units
    }

    /// `π′(u_n)`, read cyclically.
    pub fn get(&self, n: i64) -> &UnitaryMatrix {
        &self.units[n.rem_euclid(self.period() as i64) as usize]
    }

    /// All `p` cyclic step norms, the last one being the wraparound.
    pub fn cyclic_steps(&self) -> Vec<f64> {
        (0..self.period() as i64)
            .map(|j| distance(self.get(j + 1).matrix(), self.get(j).matrix()).unwrap_or(f64::INFINITY))
            .collect()
    }
}

/// Closes `U_{−N}, …, U_N` into a cycle of period `2(N+M)`: above `N` the
/// spectral path from `U_N` down to `I`, below `−N` the path from `U_{−N}`.
/// Both paths share one length `M ≥ 1`; the shorter one is padded with `I`.
pub fn periodize(f: &BFamily) -> Result<PeriodicFamily, BrepError> {
    let (lo, hi) = f.window();
    if lo != -hi {
        return Err(BrepError::NonSymmetricWindow { lo, hi });
    }
    let n = hi;
    let eps = f.eps;
    let upper = path_to_identity(f.get(n).expect("in window"), eps)?;
    let lower = path_to_identity(f.get(-n).expect("in window"), eps)?;
    let m = (upper.len() - 1).max(lower.len() - 1).max(1);
    let identity = UnitaryMatrix::identity(f.dim());
    let along = |path: &[UnitaryMatrix], k: usize| path.get(k).unwrap_or(&identity).clone();

    let p = 2 * (n as usize + m);
    let mut units = vec![identity.clone(); p];
    for idx in (-n - m as i64 + 1)..=(n + m as i64) {
        let value = if idx > n {
            along(&upper, (idx - n) as usize)
        } else if idx < -n {
            along(&lower, (-n - idx) as usize)
        } else {
            f.get(idx).expect("in window").clone()
        };
        units[idx.rem_euclid(p as i64) as usize] = value;
    }
    PeriodicFamily::new(eps, n, units)
}

/// Block-diagonal representation `ρ(u_i) = diag(π′(u_i), …, π′(u_{i+p−1}))`
/// with the forward block cyclic shift `S`, so that `S·ρ(u_i)·S* = ρ(u_{i+1})`
/// and `S^p = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantRep {
    base: PeriodicFamily,
    rho_u0: UnitaryMatrix,
    shift: UnitaryMatrix,
}

impl CovariantRep {
    pub fn base(&self) -> &PeriodicFamily {
        &self.base
    }

    /// Total dimension `p · dim`.
    pub fn n(&self) -> usize {
        self.base.period() * self.base.dim()
    }

    pub fn rho_u0(&self) -> &UnitaryMatrix {
        &self.rho_u0
    }

    pub fn shift(&self) -> &UnitaryMatrix {
        &self.shift
    }

    pub fn rho(&self, i: i64) -> UnitaryMatrix {
        if i == 0 {
            return self.rho_u0.clone();
        }
        let p = self.base.period() as i64;
        let blocks: Vec<&ComplexMatrix> = (0..p).map(|j| self.base.get(i + j).matrix()).collect();
        UnitaryMatrix::from_trusted(ComplexMatrix::block_diag(blocks))
    }

    /// `ρ(b)` for a chain polynomial `b`.
    pub fn rho_of(&self, b: &NCPoly) -> Result<ComplexMatrix, BrepError> {
        if b.uses_v() {
            return Err(BrepError::NotInChainAlgebra);
        }
        let mut a = Assignment::new(self.n());
        if let Some((lo, hi)) = b.u_window() {
            for i in lo..=hi {
                a.insert(Symbol::U(i), &self.rho(i))?;
            }
        }
        Ok(b.eval(&a)?)
    }
}

pub fn covariant_rep(pf: &PeriodicFamily) -> CovariantRep {
    let p = pf.period();
    let d = pf.dim();
    let n = p * d;
    let mut shift = DMatrix::zeros(n, n);
    for j in 0..p {
        let k = (j + 1) % p;
        for r in 0..d {
            shift[(j * d + r, k * d + r)] = C64::new(1.0, 0.0);
        }
    }
    let blocks: Vec<&ComplexMatrix> = (0..p as i64).map(|j| pf.get(j).matrix()).collect();
    CovariantRep {
        base: pf.clone(),
        rho_u0: UnitaryMatrix::from_trusted(ComplexMatrix::block_diag(blocks)),
        shift: UnitaryMatrix::from_trusted(ComplexMatrix::new(shift).expect("finite")),
    }
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> UnitaryMatrix {
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    UnitaryMatrix::from_trusted(ComplexMatrix::new(q).expect("finite"))
}

/// Random Hermitian matrix with operator norm exactly `norm` (GUE direction).
pub fn random_hermitian(dim: usize, norm: f64, rng: &mut impl Rng) -> HermitianMatrix {
    let h = HermitianMatrix::symmetrize(&ComplexMatrix::new(ginibre(dim, rng)).expect("finite"));
    let current = op_norm(h.matrix()).unwrap_or(0.0);
    if current == 0.0 {
        return HermitianMatrix::zeros(dim);
    }
    h.scale(norm / current)
}

/// Generating data of a family: a base unitary at `lo` and the logarithms
/// `Θ_j` of the steps, `U_{j+1} = exp(iΘ_j)·U_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepChain {
    pub eps: f64,
    pub lo: i64,
    pub base: UnitaryMatrix,
    pub thetas: Vec<HermitianMatrix>,
}

impl StepChain {
    pub fn random(eps: f64, dim: usize, window: (i64, i64), rng: &mut impl Rng) -> Self {
        let (lo, hi) = window;
        let bound = max_phase_step(eps);
        let base = random_unitary(dim, rng);
        let thetas = (lo..hi)
            .map(|_| {
                let scale: f64 = rng.random_range(0.0..=1.0);
                random_hermitian(dim, scale * bound, rng)
            })
            .collect();
        Self {
            eps,
            lo,
            base,
            thetas,
        }
    }

    pub fn to_family(&self) -> Result<BFamily, BrepError> {
        let mut units = Vec::with_capacity(self.thetas.len() + 1);
        units.push(self.base.clone());
        for theta in &self.thetas {
            let next = theta.exp_i(1.0).mul(units.last().expect("nonempty"))?;
            units.push(next);
        }
        BFamily::new(self.eps, self.lo, units)
    }
}

/// Seeded random family on `[lo, hi]`: Haar base unitary at `lo`, then
/// increments `exp(iΘ_j)` with `‖Θ_j‖ ≤ 2·arcsin(ε/2)`.
pub fn random_brep(eps: f64, dim: usize, window: (i64, i64), seed: u64) -> Result<BFamily, BrepError> {
    check_eps_open(eps)?;
    if window.1 < window.0 || dim == 0 {
        return Err(BrepError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StepChain::random(eps, dim, window, &mut rng).to_family()
}
