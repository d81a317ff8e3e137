#![allow(dead_code)]

use matfree::arrangement::{Arrangement, Hyperplane};
use matfree::exactfield::{FieldSpec, Scalar};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub const SEED_ENV: &str = "MATFREE_TEST_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn seed() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed()),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn vars(dim: usize) -> Vec<String> {
    Arrangement::default_vars(dim)
}

pub fn example(field: &FieldSpec) -> Arrangement {
    Arrangement::from_int_rows(
        field,
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]],
    )
    .unwrap()
}

/// Distinct nonzero covectors, first occurrence kept.
pub fn build(field: &FieldSpec, dim: usize, raw: Vec<Vec<u32>>) -> Arrangement {
    let mut hs: Vec<Hyperplane> = Vec::new();
    for v in raw {
        let c: Vec<Scalar> = match field.cardinality() {
            Some(_) => v.into_iter().map(Scalar::Finite).collect(),
            None => v.into_iter().map(|x| field.from_int(x as i64 - 2)).collect(),
        };
        if let Ok(h) = Hyperplane::new(field, c) {
            if !hs.contains(&h) {
                hs.push(h);
            }
        }
    }
    Arrangement::new(field, dim, hs).unwrap()
}

/// `(q, dim, covectors)` with entries in `0..q`.
pub fn finite_arrangement(qs: &'static [u32], max_dim: usize, max_len: usize) -> impl Strategy<Value = Arrangement> {
    (prop::sample::select(qs), 2..=max_dim)
        .prop_flat_map(move |(q, dim)| {
            (
                Just(q),
                Just(dim),
                prop::collection::vec(prop::collection::vec(0..q, dim), 0..=max_len),
            )
        })
        .prop_map(|(q, dim, raw)| build(&FieldSpec::gf(q as u64).unwrap(), dim, raw))
}

/// Rational arrangements with coefficients in `-2..=2`.
pub fn rational_arrangement(max_dim: usize, max_len: usize) -> impl Strategy<Value = Arrangement> {
    (2..=max_dim)
        .prop_flat_map(move |dim| {
            (
                Just(dim),
                prop::collection::vec(prop::collection::vec(0u32..5, dim), 0..=max_len),
            )
        })
        .prop_map(|(dim, raw)| build(&FieldSpec::rational(), dim, raw))
}
