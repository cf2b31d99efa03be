//! Shared fixtures: the field corpus and its independently computed data.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use traceform::cli::parse_records;
use traceform::numberfield::{field_from_record, FieldRecord, NumberFieldData};

pub const CORPUS: &str = include_str!("../data/corpus.jsonl");
const CORPUS_ORACLE: &str = include_str!("../data/corpus_oracle.txt");
const CUBIC_DISCS_2000: &str = include_str!("../data/cubic_discs_2000.txt");

pub fn corpus_records() -> Vec<FieldRecord> {
    parse_records(CORPUS).expect("corpus parses")
}

pub fn corpus() -> Vec<NumberFieldData> {
    corpus_records().iter().map(|r| field_from_record(r).expect("corpus field builds")).collect()
}

/// label -> (field discriminant, number of real roots), from a separate
/// computer algebra run.
pub fn corpus_oracle() -> HashMap<String, (BigInt, usize)> {
    data_lines(CORPUS_ORACLE)
        .map(|l| {
            let v: Vec<&str> = l.split_whitespace().collect();
            (v[0].to_string(), (v[1].parse().unwrap(), v[2].parse().unwrap()))
        })
        .collect()
}

/// Distinct discriminants of cubic fields with `|d| <= 2000`.
pub fn cubic_discs_2000() -> Vec<i64> {
    data_lines(CUBIC_DISCS_2000).map(|l| l.parse().unwrap()).collect()
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Prime factors by trial division, kept apart from the library's factoring.
pub fn primes_of(n: &BigInt) -> Vec<u64> {
    let mut m: u128 = n.magnitude().try_into().expect("small enough");
    let mut out = Vec::new();
    let mut q = 2u128;
    while q * q <= m {
        if m % q == 0 {
            out.push(q as u64);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        out.push(m as u64);
    }
    out
}

pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let mut m = n.clone();
    let mut v = 0;
    let p = BigInt::from(p);
    while &m % &p == BigInt::from(0) {
        m /= &p;
        v += 1;
    }
    v
}

/// `(a / p)` by Euler's criterion.
pub fn euler_legendre(a: i128, p: u64) -> i8 {
    let p128 = p as i128;
    let a = a.rem_euclid(p128) as u128;
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut acc) = (a, (p as u128 - 1) / 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}
