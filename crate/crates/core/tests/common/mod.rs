#![allow(dead_code)]

use dilaflow::scalar::Scalar;
use dilaflow::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(s: &str) -> Q {
    Q::parse_literal(s).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational `p/den` with `p` drawn from `lo..=hi`.
pub fn rq(r: &mut impl rand::Rng, lo: i64, hi: i64, den: i64) -> Q {
    Q::ratio(r.gen_range(lo..=hi), den)
}

/// Plain float evaluation of the unit-interval map, written from the
/// defining formulas and nothing else.
pub fn t_unit(ra: f64, rb: f64, xt: f64, x: f64) -> f64 {
    if x < xt {
        1.0 - ra * (xt - x)
    } else {
        rb * (x - xt)
    }
}
