#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use softtorus::matcore::{ComplexMatrix, C64};
use softtorus::ncpoly::{Letter, NCPoly, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    ComplexMatrix::from_rows(dim, &entries).unwrap()
}

pub fn random_letter(rng: &mut impl Rng, index_range: i64, with_v: bool) -> Letter {
    let l = if with_v && rng.random_bool(0.4) {
        Letter::v()
    } else {
        Letter::u(rng.random_range(-index_range..=index_range))
    };
    if rng.random_bool(0.4) {
        l.star()
    } else {
        l
    }
}

/// Random polynomial with up to `terms` words of length up to `len`.
pub fn random_poly(rng: &mut impl Rng, terms: usize, len: usize, index_range: i64, with_v: bool) -> NCPoly {
    let mut p = NCPoly::zero();
    let count = rng.random_range(1..=terms);
    for _ in 0..count {
        let l = rng.random_range(0..=len);
        let word: Word = (0..l).map(|_| random_letter(rng, index_range, with_v)).collect();
        let c = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        p.add_term(word, c);
    }
    p
}

/// Elementwise maximum modulus of `a − b`.
pub fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.try_sub(b).unwrap().max_abs()
}
