//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{gaussian, max_entry_diff, random_poly, rng};
use rand::Rng;
use softtorus::brep::{
    compress_and_dilate, covariant_rep, halmos_dilate, hs_from_us, increment_bound, periodize,
    random_brep, random_hermitian, random_unitary, spectral_path, steps_to_identity, us_from_hs,
    HFamily,
};
use softtorus::certify::{averaged_image, certify, verify_certificate, Certificate, SearchParams};
use softtorus::matcore::{
    distance, hyponormal_defect, op_norm, self_commutator, unitarity_defect, ComplexMatrix,
    UnitaryMatrix, C64,
};
use softtorus::ncpoly::NCPoly;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn contraction(dim: usize, r: &mut impl Rng) -> ComplexMatrix {
    let g = gaussian(dim, r);
    let shrink: f64 = r.random_range(1.0..2.0);
    // some draws sit exactly on the unit sphere
    let shrink = if r.random_bool(0.2) { 1.0 } else { shrink };
    g.scale(C64::new(1.0 / (op_norm(&g).unwrap() * shrink), 0.0))
}

fn dilation_unitarity() -> Outcome {
    let mut r = rng(1001);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let dim = r.random_range(1..=16);
        let v = halmos_dilate(&contraction(dim, &mut r)).unwrap();
        worst = worst.max(unitarity_defect(v.matrix()));
    }
    // both corners with a plus sign: [[T, √(1−T²)], [√(1−T²), T]]
    let h: f64 = 0.5;
    let d = (1.0 - h * h).sqrt();
    let all_plus = ComplexMatrix::from_real_rows(&[&[h, d], &[d, h]]).unwrap();
    let plus_defect = unitarity_defect(&all_plus);
    let ok = worst <= 1e-10 && plus_defect > 1e-10;
    outcome(
        ok,
        format!("max ‖V*V − I‖ = {worst:.2e}; all-plus variant at T = 1/2 gives {plus_defect:.3}"),
    )
}

fn round_trips() -> Outcome {
    let mut r = rng(1002);
    let epss = [0.2, 1.0, 1.9];
    let mut worst_u: f64 = 0.0;
    let mut worst_h: f64 = 0.0;
    let mut bound_ok = true;
    for k in 0..100 {
        let eps = epss[k % 3];
        let bound = increment_bound(eps);
        let dim = r.random_range(1..=8);
        let lo = r.random_range(-3..=3);
        let hi = r.random_range(lo..=3);

        let f = random_brep(eps, dim, (lo, hi), r.random()).unwrap();
        let h = hs_from_us(&f).unwrap();
        for x in h.increments() {
            bound_ok &= op_norm(x.matrix()).unwrap() <= bound + 1e-9;
        }
        let back = us_from_hs(&h).unwrap();
        for (x, y) in back.units().iter().zip(f.units()) {
            worst_u = worst_u.max(distance(x.matrix(), y.matrix()).unwrap());
        }

        let hs = (lo..hi)
            .map(|_| {
                let s: f64 = r.random_range(0.0..=1.0);
                random_hermitian(dim, s * bound, &mut r)
            })
            .collect();
        let anchor = if lo <= 0 && 0 <= hi { 0 } else { lo };
        let h = HFamily::new(eps, anchor, random_unitary(dim, &mut r), lo, hs).unwrap();
        let again = hs_from_us(&us_from_hs(&h).unwrap()).unwrap();
        worst_h = worst_h.max(distance(again.v0().matrix(), h.v0().matrix()).unwrap());
        for (x, y) in again.increments().iter().zip(h.increments()) {
            bound_ok &= op_norm(x.matrix()).unwrap() <= bound + 1e-9;
            worst_h = worst_h.max(distance(x.matrix(), y.matrix()).unwrap());
        }
    }
    outcome(
        worst_u <= 1e-8 && worst_h <= 1e-8 && bound_ok,
        format!("units error {worst_u:.2e}, increments error {worst_h:.2e}, increment bound held: {bound_ok}"),
    )
}

fn interpolation() -> Outcome {
    let minus = UnitaryMatrix::from_phases(&[PI]);
    let identity = ComplexMatrix::identity(1);
    let mut ok = true;
    let mut found = Vec::new();
    for (eps, expected) in [(2.0, 1usize), (SQRT_2, 2), (1.0, 3), (0.1, 32)] {
        let m = steps_to_identity(&minus, eps).unwrap();
        found.push(m);
        ok &= m == expected;
        let path = spectral_path(&minus, m).unwrap();
        ok &= path.len() == m + 1 && path[m].matrix() == &identity;
        for w in path.windows(2) {
            ok &= distance(w[1].matrix(), w[0].matrix()).unwrap() <= eps + 1e-12;
        }
        // one step fewer cannot stay within ε
        let short = spectral_path(&minus, m - 1).unwrap();
        let violates = if m == 1 {
            short.last().unwrap().matrix() != &identity
        } else {
            short
                .windows(2)
                .any(|w| distance(w[1].matrix(), w[0].matrix()).unwrap() > eps + 1e-12)
        };
        ok &= violates;
    }
    outcome(ok, format!("M = {found:?} (expected [1, 2, 3, 32])"))
}

fn periodization_covariance() -> Outcome {
    let mut r = rng(1004);
    let epss = [0.3, 1.0, 1.9];
    let mut steps_ok = true;
    let mut power_exact = true;
    let mut worst: f64 = 0.0;
    for k in 0..24 {
        let eps = epss[k % 3];
        let n = r.random_range(0..=3);
        let dim = r.random_range(1..=6);
        let f = random_brep(eps, dim, (-n, n), r.random()).unwrap();
        let pf = periodize(&f).unwrap();
        steps_ok &= pf.cyclic_steps().iter().all(|&s| s <= eps + 1e-9);
        for j in -n..=n {
            steps_ok &= pf.get(j) == f.get(j).unwrap();
        }
        let cr = covariant_rep(&pf);
        let s = cr.shift().matrix();
        let p = pf.period() as i64;
        power_exact &= s.pow(p as u32) == ComplexMatrix::identity(cr.n());
        // ρ(u_i) is p-periodic in i, so one period covers every case
        for i in 0..p {
            let moved = &(s * cr.rho(i).matrix()) * &s.adjoint();
            worst = worst.max(distance(&moved, cr.rho(i + 1).matrix()).unwrap());
        }
    }
    outcome(
        steps_ok && power_exact && worst <= 1e-12,
        format!("cyclic steps bounded: {steps_ok}, S^p = I exactly: {power_exact}, covariance error {worst:.2e}"),
    )
}

fn averaging_identity() -> Outcome {
    let mut r = rng(1005);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    let mut degrees = Vec::new();
    while pairs < 20 {
        let a = random_poly(&mut r, 3, 4, 1, true);
        let aa = &a.adjoint() * &a;
        let degree = aa.v_degree().unwrap();
        if degree > 3 || a.normal_order().unwrap().is_zero() {
            continue;
        }
        let b = aa.cond_exp().unwrap();
        let radius = b.u_window().map_or(0, |(lo, hi)| lo.abs().max(hi.abs()));
        let eps = r.random_range(0.2..1.9);
        let dim = r.random_range(1..=3);
        let f = random_brep(eps, dim, (-radius, radius), r.random()).unwrap();
        let cr = covariant_rep(&periodize(&f).unwrap());
        let avg = averaged_image(&cr, &a, degree + 1).unwrap();
        let image = cr.rho_of(&b).unwrap();
        worst = worst.max(max_entry_diff(&avg, &image));
        degrees.push(degree);
        pairs += 1;
    }
    outcome(
        worst <= 1e-10,
        format!("max entry error {worst:.2e} over 20 pairs, v-degrees {degrees:?}"),
    )
}

fn end_to_end_params() -> SearchParams {
    SearchParams {
        dims: vec![1, 2],
        restarts: 32,
        ..Default::default()
    }
}

fn end_to_end(certs: &mut Vec<Certificate>) -> Outcome {
    let a = NCPoly::parse("u*v - v*u").unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for eps in [0.5, 0.1, 1.0] {
        let floor = 0.9 * eps;
        match certify(&a, eps, &end_to_end_params()) {
            Ok(c) => {
                let report = verify_certificate(&c, 1e-8);
                let this = c.achieved_norm >= floor
                    && c.lower_bound >= floor
                    && c.commutator_norm <= eps + 1e-9
                    && report.all_passed();
                ok &= this;
                lines.push(format!(
                    "ε={eps}: achieved {:.6}, bound {:.6}, comm {:.6}, n={}, verify {}",
                    c.achieved_norm,
                    c.lower_bound,
                    c.commutator_norm,
                    c.n,
                    if report.all_passed() { "ok" } else { "FAILED" }
                ));
                certs.push(c);
            }
            Err(e) => {
                ok = false;
                lines.push(format!("ε={eps}: {e}"));
            }
        }
    }
    outcome(ok, lines.join("; "))
}

fn norm_recovery() -> Outcome {
    let reference = random_brep(1.0, 64, (-1, 1), 1007).unwrap();
    let dilated = compress_and_dilate(&reference, 64).unwrap();
    let mut r = rng(1017);
    let mut worst = f64::INFINITY;
    for _ in 0..10 {
        let b = loop {
            let b = random_poly(&mut r, 4, 4, 1, false);
            if b.u_window().is_some() {
                break b;
            }
        };
        let before = op_norm(&reference.eval(&b).unwrap()).unwrap();
        let after = op_norm(&dilated.eval(&b).unwrap()).unwrap();
        worst = worst.min(after - before);
    }
    let steps_ok = dilated.steps().iter().all(|&s| s <= 1.0 + 1e-9);
    outcome(
        worst >= -1e-10 && steps_ok,
        format!("min (dilated − reference) norm = {worst:.2e}, dilated steps bounded: {steps_ok}"),
    )
}

fn trace_and_hyponormal(certs: &[Certificate]) -> Outcome {
    let mut r = rng(1008);
    let mut trace_ok = true;
    for _ in 0..100 {
        let dim = r.random_range(1..=32);
        let x = gaussian(dim, &mut r);
        let t = self_commutator(&x).matrix().trace().norm();
        trace_ok &= t <= 1e-11 * dim as f64;
    }
    // normal plus a small perturbation: nearly hyponormal
    let mut hypo_ok = true;
    for k in 0..40 {
        let dim = 2 + k % 16;
        let w = random_unitary(dim, &mut r);
        let phases: Vec<C64> = (0..dim)
            .map(|_| C64::from_polar(r.random_range(0.1..2.0), r.random_range(0.0..2.0 * PI)))
            .collect();
        let normal = &(w.matrix() * &ComplexMatrix::diag(&phases)) * &w.matrix().adjoint();
        let size: f64 = 10f64.powf(r.random_range(-6.0..-1.0));
        let x = &normal + &gaussian(dim, &mut r).scale(C64::new(size, 0.0));
        let delta = (-hyponormal_defect(&x).unwrap()).max(0.0);
        let spread = op_norm(self_commutator(&x).matrix()).unwrap();
        hypo_ok &= spread <= (dim - 1) as f64 * delta + 1e-9;
    }
    let faithful_ok = !certs.is_empty()
        && certs.iter().all(|c| {
            verify_certificate(c, 1e-8)
                .checks
                .iter()
                .any(|k| k.name == "trace_faithful" && k.passed)
        });
    outcome(
        trace_ok && hypo_ok && faithful_ok,
        format!(
            "trace bound: {trace_ok}, hyponormal spread bound: {hypo_ok}, trace witness on {} certificates: {faithful_ok}",
            certs.len()
        ),
    )
}

fn determinism(first: &[Certificate]) -> Outcome {
    let a = NCPoly::parse("u*v - v*u").unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = first.len() == 3;
    for (eps, c) in [0.5, 0.1, 1.0].into_iter().zip(first) {
        let again = certify(&a, eps, &end_to_end_params()).unwrap();
        worst = worst
            .max(max_entry_diff(&again.u, &c.u))
            .max(max_entry_diff(&again.v, &c.v))
            .max((again.achieved_norm - c.achieved_norm).abs())
            .max((again.lower_bound - c.lower_bound).abs())
            .max((again.lambda - c.lambda).norm());
        ok &= again.n == c.n;
    }
    outcome(ok && worst <= 1e-15, format!("max difference {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut certs = Vec::new();
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let ok = out.ok && in_time;
        if !ok {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {:.0}s", l.as_secs_f64()));
        println!(
            "[{}] {id}. {name} ({:.2}s{budget}): {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, "dilation unitarity", secs(5), &mut dilation_unitarity);
    report(2, "increment round trips", secs(10), &mut round_trips);
    report(3, "interpolation to the identity", secs(1), &mut interpolation);
    report(4, "periodization and covariance", secs(10), &mut periodization_covariance);
    report(5, "averaging identity", secs(30), &mut averaging_identity);
    report(6, "end-to-end certificate", secs(60), &mut || end_to_end(&mut certs));
    report(7, "norm recovery at full rank", secs(30), &mut norm_recovery);
    report(8, "trace and hyponormality checks", secs(10), &mut || trace_and_hyponormal(&certs));
    report(9, "determinism", None, &mut || determinism(&certs));
    if failed == 0 {
        println!("all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
