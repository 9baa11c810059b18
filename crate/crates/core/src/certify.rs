//! Witness search and certificates.
//!
//! Given a formally nonzero polynomial `a` and `0 < ε < 2`:
//!
//! 1. `b = E(a*a)`, the `v`-degree zero part of `a*a`, a chain polynomial
//!    supported on some window `[−N, N]`;
//! 2. a seeded search over families `U_{−N}, …, U_N` maximizing `‖b(U)‖`;
//! 3. [`periodize`] and [`covariant_rep`] turn the best family into a block
//!    diagonal `ρ(u_0)` and a block cyclic shift `S`;
//! 4. `U = ρ(u_0)`, `V = λ·S` is an ε-almost-commuting pair, with `λ` the
//!    `q`-th root of unity maximizing `‖a(U, V)‖`.
//!
//! Averaging `a*a` over the `q`-th roots of unity, `q > deg_v(a*a)`, kills
//! every nonzero `v`-degree and leaves exactly `ρ(b)`, so
//! `max_λ ‖a(U, λS)‖² ≥ ‖ρ(b)‖`. The square root of `‖ρ(b)‖` is reported as
//! the certified lower bound.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::brep::{
    covariant_rep, max_phase_step, periodize, random_hermitian, BFamily, BrepError, CovariantRep,
    StepChain,
};
use crate::matcore::{
    hyponormal_defect, normalized_trace, op_norm, self_commutator, unitarity_defect,
    ComplexMatrix, MatError, UnitaryMatrix, C64,
};
use crate::ncpoly::{Assignment, NCPoly, PolyError};

/// Below this, an achieved norm is treated as no witness at all.
pub const WITNESS_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("polynomial is formally zero")]
    ZeroPolynomial,
    #[error("eps = {0} outside (0, 2)")]
    EpsOutOfRange(f64),
    #[error("|lambda| = {0} is not 1")]
    NotUnitModulus(f64),
    #[error("averaging order q = {q} must exceed the v-degree {degree}")]
    QTooSmall { q: u32, degree: u32 },
    #[error("support window [{lo}, {hi}] not covered by the family core [-{core}, {core}]")]
    WindowTooSmall { lo: i64, hi: i64, core: i64 },
    #[error("invalid search parameters: {0}")]
    InvalidParams(&'static str),
    #[error("search found no witness (best norm {best:e})")]
    NoWitnessFound { best: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Brep(#[from] BrepError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    /// Block sizes to try.
    pub dims: Vec<usize>,
    /// Random starts per block size.
    pub restarts: usize,
    pub seed: u64,
    /// Local perturbation steps applied to the best start.
    pub ascent_steps: usize,
    /// Averaging order; `None` means `deg_v(a*a) + 1`.
    pub q: Option<u32>,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            dims: vec![1, 2],
            restarts: 16,
            seed: 7,
            ascent_steps: 400,
            q: None,
        }
    }
}

impl SearchParams {
    fn validate(&self) -> Result<(), CertifyError> {
        if self.dims.is_empty() {
            return Err(CertifyError::InvalidParams("dims must be nonempty"));
        }
        if self.dims.contains(&0) {
            return Err(CertifyError::InvalidParams("block sizes must be positive"));
        }
        if self.restarts == 0 {
            return Err(CertifyError::InvalidParams("restarts must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of [`search_brep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub family: BFamily,
    /// `‖b‖` at `family`.
    pub value: f64,
    /// Best value over the random starts, before ascent.
    pub random_best: f64,
    /// `(block size, restart index)` of the winning start.
    pub winner: (usize, usize),
}

/// SplitMix64 finalizer, used to derive independent stream seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_seed(seed: u64, dim: usize, restart: usize) -> u64 {
    mix(mix(mix(seed) ^ dim as u64) ^ restart as u64)
}

fn chain_value(chain: &StepChain, b: &NCPoly) -> Result<f64, CertifyError> {
    let family = chain.to_family()?;
    Ok(op_norm(&family.eval(b)?)?)
}

fn ascend(
    mut chain: StepChain,
    mut value: f64,
    b: &NCPoly,
    steps: usize,
    rng: &mut impl Rng,
) -> Result<(StepChain, f64), CertifyError> {
    let bound = max_phase_step(chain.eps);
    let dim = chain.base.dim();
    let slots = chain.thetas.len() + 1;
    let mut size = 0.5;
    for step in 0..steps {
        let slot = step % slots;
        let mut trial = chain.clone();
        let direction = random_hermitian(dim, size, rng);
        if slot == chain.thetas.len() {
            trial.base = direction.scale(PI).exp_i(1.0).mul(&chain.base)?;
        } else {
            let moved = crate::matcore::HermitianMatrix::symmetrize(
                &(trial.thetas[slot].matrix() + &direction.scale(bound).into_matrix()),
            );
            trial.thetas[slot] = moved.map_spectrum(|x| x.clamp(-bound, bound));
        }
        let candidate = chain_value(&trial, b)?;
        if candidate > value {
            chain = trial;
            value = candidate;
            size = (size * 1.5).min(1.0);
        } else {
            size = (size * 0.93).max(1e-6);
        }
    }
    Ok((chain, value))
}

/// Seeded search for a family on `[−N, N]` with large `‖b‖`.
///
/// Every `(block size, restart)` pair draws its own stream from the seed, so
/// the outcome does not depend on evaluation order; ties go to the earliest
/// pair. The winner is then refined by local ascent.
pub fn search_brep(b: &NCPoly, eps: f64, params: &SearchParams) -> Result<SearchResult, CertifyError> {
    if b.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    if b.uses_v() {
        return Err(BrepError::NotInChainAlgebra.into());
    }
    if !(eps > 0.0 && eps < 2.0) {
        return Err(CertifyError::EpsOutOfRange(eps));
    }
    params.validate()?;
    let Some((lo, hi)) = b.u_window() else {
        let family = BFamily::constant(eps, 0, 0, UnitaryMatrix::identity(1))?;
        let value = op_norm(&family.eval(b)?)?;
        return Ok(SearchResult {
            family,
            value,
            random_best: value,
            winner: (1, 0),
        });
    };
    let radius = lo.abs().max(hi.abs());
    let window = (-radius, radius);

    let starts: Vec<(usize, usize)> = params
        .dims
        .iter()
        .flat_map(|&d| (0..params.restarts).map(move |r| (d, r)))
        .collect();
    let evaluated: Vec<Result<(StepChain, f64), CertifyError>> = starts
        .par_iter()
        .map(|&(d, r)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(params.seed, d, r));
            let chain = StepChain::random(eps, d, window, &mut rng);
            let value = chain_value(&chain, b)?;
            Ok((chain, value))
        })
        .collect();
    let mut best: Option<(usize, StepChain, f64)> = None;
    for (k, item) in evaluated.into_iter().enumerate() {
        let (chain, value) = item?;
        if best.as_ref().is_none_or(|(_, _, v)| value > *v) {
            best = Some((k, chain, value));
        }
    }
    let (k, chain, random_best) = best.expect("at least one start");
    let winner = starts[k];
    let mut rng = ChaCha8Rng::seed_from_u64(mix(params.seed ^ 0xA5C3_E17D_0000_0001));
    let (chain, value) = ascend(chain, random_best, b, params.ascent_steps, &mut rng)?;
    Ok(SearchResult {
        family: chain.to_family()?,
        value,
        random_best,
        winner,
    })
}

/// `U = ρ(u_0)`, `V = λ·S`.
pub fn rep_of_ae(cr: &CovariantRep, lambda: C64) -> Result<(UnitaryMatrix, UnitaryMatrix), CertifyError> {
    let modulus = lambda.norm();
    if (modulus - 1.0).abs() > 1e-12 {
        return Err(CertifyError::NotUnitModulus(modulus));
    }
    Ok((cr.rho_u0().clone(), cr.shift().rotate(lambda)))
}

/// `e^{2πij/q}`, with `j = 0` exactly 1.
pub fn root_of_unity(j: u32, q: u32) -> C64 {
    if j == 0 {
        C64::new(1.0, 0.0)
    } else {
        C64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64)
    }
}

fn check_q(aa: &NCPoly, q: u32) -> Result<(), CertifyError> {
    let degree = aa.v_degree()?;
    if q <= degree {
        return Err(CertifyError::QTooSmall { q, degree });
    }
    Ok(())
}

/// `(1/q)·Σ_j (a*a)(U, λ_j·S)` by direct matrix evaluation.
pub fn averaged_image(cr: &CovariantRep, a: &NCPoly, q: u32) -> Result<ComplexMatrix, CertifyError> {
    let aa = &a.adjoint() * a;
    check_q(&aa, q)?;
    let mut sum = ComplexMatrix::zeros(cr.n());
    for j in 0..q {
        let (u, v) = rep_of_ae(cr, root_of_unity(j, q))?;
        let value = aa.eval(&Assignment::crossed(&aa, &u, &v)?)?;
        sum = sum.try_add(&value)?;
    }
    Ok(sum.scale(C64::new(1.0 / q as f64, 0.0)))
}

/// `‖ρ(E(a*a))‖`, computed through normal ordering and the block
/// representation. Its square root is a floor for `max_j ‖a(U, λ_j·S)‖`.
pub fn averaging_lower_bound(cr: &CovariantRep, a: &NCPoly, q: u32) -> Result<f64, CertifyError> {
    let aa = &a.adjoint() * a;
    check_q(&aa, q)?;
    let b = aa.cond_exp()?;
    if let Some((lo, hi)) = b.u_window() {
        let core = cr.base().core();
        if lo < -core || hi > core {
            return Err(CertifyError::WindowTooSmall { lo, hi, core });
        }
    }
    Ok(op_norm(&cr.rho_of(&b)?)?)
}

/// A finite dimensional witness that `poly` does not vanish on the soft torus.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub eps: f64,
    pub poly: String,
    /// Total dimension.
    pub n: usize,
    /// Period of the underlying cyclic family.
    pub p: usize,
    /// Block size.
    pub m: usize,
    pub lambda: C64,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub achieved_norm: f64,
    pub commutator_norm: f64,
    pub lower_bound: f64,
    pub seed: u64,
    pub q: u32,
}

/// Runs the full pipeline and returns a certificate for `a`.
pub fn certify(a: &NCPoly, eps: f64, params: &SearchParams) -> Result<Certificate, CertifyError> {
    certify_with_source(a, &a.to_string(), eps, params)
}

/// Parses `text` and certifies it, recording the text verbatim.
pub fn certify_text(text: &str, eps: f64, params: &SearchParams) -> Result<Certificate, CertifyError> {
    let a = NCPoly::parse(text)?;
    certify_with_source(&a, text, eps, params)
}

fn certify_with_source(
    a: &NCPoly,
    source: &str,
    eps: f64,
    params: &SearchParams,
) -> Result<Certificate, CertifyError> {
    if !(eps > 0.0 && eps < 2.0) {
        return Err(CertifyError::EpsOutOfRange(eps));
    }
    params.validate()?;
    if a.normal_order()?.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    let aa = &a.adjoint() * a;
    let degree = aa.v_degree()?;
    let q = params.q.unwrap_or(degree + 1);
    if q <= degree {
        return Err(CertifyError::QTooSmall { q, degree });
    }
    let b = aa.cond_exp()?;
    let family = if b.u_window().is_none() {
        BFamily::constant(eps, 0, 0, UnitaryMatrix::identity(1))?
    } else {
        search_brep(&b, eps, params)?.family
    };
    let pf = periodize(&family)?;
    let cr = covariant_rep(&pf);

    let scan: Vec<Result<f64, CertifyError>> = (0..q)
        .into_par_iter()
        .map(|j| {
            let (u, v) = rep_of_ae(&cr, root_of_unity(j, q))?;
            Ok(op_norm(&a.eval(&Assignment::crossed(a, &u, &v)?)?)?)
        })
        .collect();
    let mut best = (0u32, f64::NEG_INFINITY);
    for (j, value) in scan.into_iter().enumerate() {
        let value = value?;
        if value > best.1 {
            best = (j as u32, value);
        }
    }
    let (best_j, achieved_norm) = best;
    if achieved_norm <= WITNESS_FLOOR {
        return Err(CertifyError::NoWitnessFound { best: achieved_norm });
    }
    let lambda = root_of_unity(best_j, q);
    let (u, v) = rep_of_ae(&cr, lambda)?;
    let commutator_norm = op_norm(&u.matrix().commutator(v.matrix())?)?;
    let lower_bound = averaging_lower_bound(&cr, a, q)?.sqrt();

    Ok(Certificate {
        eps,
        poly: source.to_string(),
        n: cr.n(),
        p: pf.period(),
        m: pf.dim(),
        lambda,
        u: u.into_matrix(),
        v: v.into_matrix(),
        achieved_norm,
        commutator_norm,
        lower_bound,
        seed: params.seed,
        q,
    })
}

/// Result of one verifier check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Label reported when the check fails, e.g. `UnitarityViolation`.
    pub violation: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, violation: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            violation,
            passed,
            detail,
        });
    }
}

/// Re-checks a certificate from its matrices and polynomial text only.
pub fn verify_certificate(c: &Certificate, tol: f64) -> VerifyReport {
    let mut report = VerifyReport::default();
    let a = match NCPoly::parse(&c.poly) {
        Ok(a) => {
            report.push("parse", "ParseError", true, "polynomial parsed".into());
            a
        }
        Err(e) => {
            report.push("parse", "ParseError", false, e.to_string());
            return report;
        }
    };
    let n = c.u.dim();
    let shape_ok = c.v.dim() == n && c.n == n && c.p * c.m == n;
    report.push(
        "shape",
        "ShapeViolation",
        shape_ok,
        format!("dim U = {n}, dim V = {}, n = {}, p·m = {}", c.v.dim(), c.n, c.p * c.m),
    );
    if c.v.dim() != n {
        return report;
    }
    report.push(
        "eps_range",
        "EpsViolation",
        c.eps > 0.0 && c.eps < 2.0,
        format!("eps = {}", c.eps),
    );
    for (name, m) in [("unitarity_u", &c.u), ("unitarity_v", &c.v)] {
        let defect = if m.is_finite() { unitarity_defect(m) } else { f64::INFINITY };
        report.push(
            name,
            "UnitarityViolation",
            defect <= tol,
            format!("‖M*M − I‖ = {defect:e}"),
        );
    }

    let commutator = c
        .u
        .commutator(&c.v)
        .and_then(|x| op_norm(&x))
        .unwrap_or(f64::INFINITY);
    report.push(
        "commutator",
        "CommutatorViolation",
        commutator <= c.eps + tol && (commutator - c.commutator_norm).abs() <= tol,
        format!(
            "‖UV − VU‖ = {commutator}, stored {}, eps = {}",
            c.commutator_norm, c.eps
        ),
    );

    let x = match (|| -> Result<ComplexMatrix, CertifyError> {
        let u = UnitaryMatrix::with_tolerances(c.u.clone(), &loose(tol))?;
        let v = UnitaryMatrix::with_tolerances(c.v.clone(), &loose(tol))?;
        Ok(a.eval(&Assignment::crossed(&a, &u, &v)?)?)
    })() {
        Ok(x) => x,
        Err(e) => {
            report.push("evaluate", "EvaluationError", false, e.to_string());
            return report;
        }
    };
    let achieved = op_norm(&x).unwrap_or(f64::INFINITY);
    report.push(
        "achieved_norm",
        "NormMismatch",
        (achieved - c.achieved_norm).abs() <= tol * c.achieved_norm.max(1.0),
        format!("‖a(U, V)‖ = {achieved}, stored {}", c.achieved_norm),
    );
    report.push(
        "witness",
        "NoWitness",
        achieved > WITNESS_FLOOR,
        format!("‖a(U, V)‖ = {achieved:e}"),
    );

    let floor = recomputed_floor(&a, &c.u, &c.v, c.q);
    let floor_ok = match floor {
        Some(f) => c.lower_bound <= f + tol && achieved >= c.lower_bound - tol,
        None => false,
    };
    report.push(
        "lower_bound",
        "LowerBoundViolation",
        floor_ok,
        format!(
            "stored {}, recomputed average floor {:?}, achieved {achieved}",
            c.lower_bound, floor
        ),
    );

    let scale = achieved.powi(2).max(1.0);
    let defect_matrix = self_commutator(&x);
    let trace = defect_matrix.matrix().trace().norm();
    report.push(
        "trace_commutator",
        "TraceViolation",
        trace <= n as f64 * tol * scale,
        format!("|tr(X*X − XX*)| = {trace:e}"),
    );
    let min_eig = hyponormal_defect(&x).unwrap_or(f64::NEG_INFINITY);
    let delta = (-min_eig).max(0.0);
    let spread = op_norm(defect_matrix.matrix()).unwrap_or(f64::INFINITY);
    let allowed = (n.saturating_sub(1).max(1)) as f64 * delta + tol * scale;
    report.push(
        "hyponormal",
        "HyponormalViolation",
        spread <= allowed,
        format!("‖X*X − XX*‖ = {spread:e}, δ = {delta:e}, allowed {allowed:e}"),
    );
    let xx = &x.adjoint() * &x;
    let tau = normalized_trace(&xx).map(|z| z.re).unwrap_or(f64::NAN);
    let witness_floor = achieved.powi(2) / n as f64;
    report.push(
        "trace_faithful",
        "TraceFaithfulnessViolation",
        tau > 0.0 && tau >= witness_floor * (1.0 - tol),
        format!("τ(X*X) = {tau:e}, ‖X‖²/n = {witness_floor:e}"),
    );
    report
}

fn loose(tol: f64) -> crate::matcore::Tolerances {
    crate::matcore::Tolerances {
        unitary: tol.max(1e-10) * 1e3,
        ..Default::default()
    }
}

/// `sqrt(‖(1/q)·Σ_j (a*a)(U, ω^j·V)‖)` from the raw matrices.
fn recomputed_floor(a: &NCPoly, u: &ComplexMatrix, v: &ComplexMatrix, q: u32) -> Option<f64> {
    if q == 0 {
        return None;
    }
    let aa = &a.adjoint() * a;
    let u = UnitaryMatrix::with_tolerances(u.clone(), &loose(1e-6)).ok()?;
    let v = UnitaryMatrix::with_tolerances(v.clone(), &loose(1e-6)).ok()?;
    let mut sum = ComplexMatrix::zeros(u.dim());
    for j in 0..q {
        let vj = v.rotate(root_of_unity(j, q));
        sum = sum.try_add(&aa.eval(&Assignment::crossed(&aa, &u, &vj).ok()?).ok()?).ok()?;
    }
    op_norm(&sum.scale(C64::new(1.0 / q as f64, 0.0))).ok().map(f64::sqrt)
}
