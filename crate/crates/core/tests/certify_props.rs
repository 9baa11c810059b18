mod common;

use common::{max_entry_diff, random_poly, rng};
use proptest::prelude::*;
use softtorus::brep::{covariant_rep, max_phase_step, periodize, random_brep};
use softtorus::certify::{
    averaged_image, averaging_lower_bound, certify, rep_of_ae, root_of_unity, search_brep,
    verify_certificate, CertifyError, SearchParams,
};
use softtorus::matcore::{normalized_trace, op_norm, C64};
use softtorus::ncpoly::{Assignment, NCPoly};

fn quick(restarts: usize, seed: u64) -> SearchParams {
    SearchParams {
        dims: vec![1, 2],
        restarts,
        seed,
        ascent_steps: 80,
        q: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutator_ignores_lambda(seed in any::<u64>(), eps in 0.1f64..1.9, t in 0.0f64..6.3) {
        let f = random_brep(eps, 2, (-1, 1), seed).unwrap();
        let cr = covariant_rep(&periodize(&f).unwrap());
        let norm = |z: C64| {
            let (u, v) = rep_of_ae(&cr, z).unwrap();
            op_norm(&u.matrix().commutator(v.matrix()).unwrap()).unwrap()
        };
        let base = norm(C64::new(1.0, 0.0));
        prop_assert!((norm(C64::from_polar(1.0, t)) - base).abs() <= 1e-12);
        prop_assert!(base <= eps + 1e-9);
    }

    #[test]
    fn averaging_matches_chain_part(seed in any::<u64>(), eps in 0.2f64..1.9) {
        let mut r = rng(seed);
        let a = random_poly(&mut r, 3, 3, 1, true);
        let aa = &a.adjoint() * &a;
        let q = aa.v_degree().unwrap() + 1;
        let radius = aa.cond_exp().unwrap().u_window().map_or(0, |(lo, hi)| lo.abs().max(hi.abs()));
        let f = random_brep(eps, 2, (-radius, radius), seed ^ 0x55).unwrap();
        let cr = covariant_rep(&periodize(&f).unwrap());
        let avg = averaged_image(&cr, &a, q).unwrap();
        let direct = cr.rho_of(&aa.cond_exp().unwrap()).unwrap();
        let scale = op_norm(&direct).unwrap().max(1.0);
        prop_assert!(max_entry_diff(&avg, &direct) <= 1e-10 * scale);
        let floor = averaging_lower_bound(&cr, &a, q).unwrap();
        prop_assert!((floor - op_norm(&avg).unwrap()).abs() <= 1e-10 * scale);
        // the largest term of the average dominates it
        let best = (0..q)
            .map(|j| {
                let (u, v) = rep_of_ae(&cr, root_of_unity(j, q)).unwrap();
                op_norm(&a.eval(&Assignment::crossed(&a, &u, &v).unwrap()).unwrap()).unwrap()
            })
            .fold(0.0f64, f64::max);
        prop_assert!(best * best >= floor * (1.0 - 1e-10));
    }

    #[test]
    fn more_restarts_never_hurt(seed in any::<u64>(), r1 in 1usize..6, extra in 0usize..6) {
        let b = NCPoly::parse("2 - u_-1'*u_0 - u_0'*u_-1 + u_1*u_0'").unwrap();
        let p1 = quick(r1, seed);
        let p2 = quick(r1 + extra, seed);
        let a = search_brep(&b, 0.7, &p1).unwrap();
        let c = search_brep(&b, 0.7, &p2).unwrap();
        prop_assert!(c.random_best >= a.random_best);
        prop_assert!(a.value >= a.random_best);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn certificates_verify(seed in any::<u64>(), eps in 0.2f64..1.8) {
        let mut r = rng(seed);
        let a = random_poly(&mut r, 3, 3, 1, true);
        match certify(&a, eps, &quick(4, seed)) {
            Ok(c) => {
                let report = verify_certificate(&c, 1e-8);
                prop_assert!(report.all_passed(), "{:?}", report.failures().collect::<Vec<_>>());
                prop_assert!(c.lower_bound <= c.achieved_norm + 1e-10);
                let x = a.eval(&Assignment::crossed(
                    &a,
                    &softtorus::matcore::UnitaryMatrix::new(c.u.clone()).unwrap(),
                    &softtorus::matcore::UnitaryMatrix::new(c.v.clone()).unwrap(),
                ).unwrap()).unwrap();
                let tau = normalized_trace(&(&x.adjoint() * &x)).unwrap().re;
                prop_assert!(tau >= c.achieved_norm.powi(2) / c.n as f64 * (1.0 - 1e-12));
            }
            Err(CertifyError::ZeroPolynomial) => prop_assert!(a.normal_order().unwrap().is_zero()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn certification_is_deterministic() {
    let a = NCPoly::parse("u*v - v*u + 0.5*u_1").unwrap();
    let params = quick(6, 99);
    let x = certify(&a, 0.6, &params).unwrap();
    let y = certify(&a, 0.6, &params).unwrap();
    assert_eq!(x, y);
}

/// Brute force over a grid of scalar pairs with the step constraint.
fn scalar_grid_max(eps: f64, points: usize) -> f64 {
    let bound = max_phase_step(eps);
    let mut best: f64 = 0.0;
    for k in 0..=points {
        // only the phase difference matters for this polynomial
        let d = -bound + 2.0 * bound * k as f64 / points as f64;
        let u = C64::from_polar(1.0, 0.3);
        let w = C64::from_polar(1.0, 0.3 + d);
        let value = 2.0 - (u.conj() * w).re * 2.0;
        best = best.max(value.abs());
    }
    best
}

#[test]
fn scalar_search_matches_grid() {
    let b = NCPoly::parse("2 - u_-1'*u_0 - u_0'*u_-1").unwrap();
    let params = SearchParams {
        dims: vec![1],
        ..Default::default()
    };
    let r = search_brep(&b, 0.5, &params).unwrap();
    let oracle = scalar_grid_max(0.5, 20_000);
    assert!((oracle - 0.25).abs() < 1e-8);
    assert!(r.value <= 0.25 + 1e-9, "{}", r.value);
    assert!(r.value >= 0.25 - 1e-4, "{}", r.value);
}
