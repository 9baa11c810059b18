mod common;

use common::{gaussian, rng};
use proptest::prelude::*;
use softtorus::brep::{
    compress_and_dilate, covariant_rep, halmos_dilate, hs_from_us, increment_bound, periodize,
    random_brep, random_hermitian, random_unitary, scale_homotopy, steps_to_identity, us_from_hs,
    HFamily,
};
use softtorus::matcore::{distance, op_norm, unitarity_defect, ComplexMatrix, C64};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn units_to_increments_and_back(
        seed in any::<u64>(),
        eps in 0.05f64..1.95,
        dim in 1usize..5,
        lo in -4i64..1,
        len in 0i64..6,
    ) {
        let f = random_brep(eps, dim, (lo, lo + len), seed).unwrap();
        let h = hs_from_us(&f).unwrap();
        let back = us_from_hs(&h).unwrap();
        prop_assert_eq!(back.window(), f.window());
        for (x, y) in back.units().iter().zip(f.units()) {
            prop_assert!(distance(x.matrix(), y.matrix()).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn increments_to_units_and_back(
        seed in any::<u64>(),
        eps in 0.05f64..1.95,
        dim in 1usize..5,
        len in 1usize..6,
    ) {
        let mut r = rng(seed);
        let bound = increment_bound(eps);
        let hs = (0..len)
            .map(|_| {
                let s: f64 = rand::Rng::random_range(&mut r, 0.0..=1.0);
                random_hermitian(dim, s * bound, &mut r)
            })
            .collect::<Vec<_>>();
        let h = HFamily::new(eps, 0, random_unitary(dim, &mut r), -1, hs).unwrap();
        let f = us_from_hs(&h).unwrap();
        prop_assert!(f.steps().iter().all(|&s| s <= eps + 1e-9));
        let back = hs_from_us(&f).unwrap();
        prop_assert!(distance(back.v0().matrix(), h.v0().matrix()).unwrap() <= 1e-8);
        for (x, y) in back.increments().iter().zip(h.increments()) {
            prop_assert!(distance(x.matrix(), y.matrix()).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn homotopy_keeps_step_bound(seed in any::<u64>(), eps in 0.05f64..1.95, t in 0.0f64..=1.0) {
        let f = random_brep(eps, 3, (-2, 2), seed).unwrap();
        let h = hs_from_us(&f).unwrap();
        let g = us_from_hs(&scale_homotopy(&h, t).unwrap()).unwrap();
        prop_assert!(g.steps().iter().all(|&s| s <= eps + 1e-9));
        prop_assert!(distance(g.get(0).unwrap().matrix(), f.get(0).unwrap().matrix()).unwrap() <= 1e-12);
    }

    #[test]
    fn dilation_is_unitary(seed in any::<u64>(), dim in 1usize..7, shrink in 1.0f64..3.0) {
        let mut r = rng(seed);
        let g = gaussian(dim, &mut r);
        let t = g.scale(C64::new(1.0 / (op_norm(&g).unwrap() * shrink), 0.0));
        let v = halmos_dilate(&t).unwrap();
        prop_assert!(unitarity_defect(v.matrix()) <= 1e-12);
        prop_assert!(distance(&v.matrix().leading_block(dim), &t).unwrap() <= 1e-15);
    }

    #[test]
    fn compression_yields_family(seed in any::<u64>(), eps in 0.1f64..1.9, m in 1usize..4) {
        let f = random_brep(eps, 3, (-1, 2), seed).unwrap();
        let g = compress_and_dilate(&f, m).unwrap();
        prop_assert_eq!(g.dim(), 2 * m);
        prop_assert!(g.steps().iter().all(|&s| s <= eps + 1e-9));
    }

    #[test]
    fn periodization_extends_and_closes(
        seed in any::<u64>(),
        eps in 0.2f64..1.95,
        dim in 1usize..4,
        n in 0i64..4,
    ) {
        let f = random_brep(eps, dim, (-n, n), seed).unwrap();
        let pf = periodize(&f).unwrap();
        let m = steps_to_identity(f.get(n).unwrap(), eps)
            .unwrap()
            .max(steps_to_identity(f.get(-n).unwrap(), eps).unwrap())
            .max(1);
        prop_assert_eq!(pf.period(), 2 * (n as usize + m));
        for j in -n..=n {
            prop_assert_eq!(pf.get(j), f.get(j).unwrap());
        }
        prop_assert!(pf.cyclic_steps().iter().all(|&s| s <= eps + 1e-9));
    }

    #[test]
    fn shift_is_covariant(seed in any::<u64>(), eps in 0.5f64..1.95, n in 0i64..3, i in -5i64..5) {
        let f = random_brep(eps, 2, (-n, n), seed).unwrap();
        let cr = covariant_rep(&periodize(&f).unwrap());
        let s = cr.shift().matrix();
        let moved = &(s * cr.rho(i).matrix()) * &s.adjoint();
        prop_assert!(distance(&moved, cr.rho(i + 1).matrix()).unwrap() <= 1e-12);
        let p = cr.base().period() as u32;
        prop_assert!(distance(&s.pow(p), &ComplexMatrix::identity(cr.n())).unwrap() == 0.0);
    }
}
