mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use traceform::exec::Exec;
use traceform::numberfield::{field_from_record, trace_gram, FieldRecord};
use traceform::quadform::{genus_equal, reduced_witness_search, transform};
use traceform::search::cubic_search;

#[test]
fn corpus_matches_reference_discriminants_and_signatures() {
    let oracle = corpus_oracle();
    let fields = corpus();
    assert!(fields.len() >= 50);
    for f in &fields {
        let (disc, r) = &oracle[&f.label];
        assert_eq!(&f.disc, disc, "{}", f.label);
        assert_eq!(f.sig.0, *r, "{}", f.label);
        assert_eq!(f.sig.0 + 2 * f.sig.1, f.n);
    }
}

/// Random unimodular matrix as a product of elementary moves.
fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..2 * n {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i == j {
            continue;
        }
        let k = rng.random_range(-2..=2);
        for c in 0..n {
            u[i][c] += k * u[j][c];
        }
    }
    u
}

#[test]
fn trace_gram_is_basis_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for rec in corpus_records().iter().filter(|r| r.poly.len() <= 5) {
        let field = field_from_record(rec).unwrap();
        let g = trace_gram(&field).unwrap();
        let n = field.n;
        let u = unimodular(&mut rng, n);
        // rows of the new basis are integer combinations of the old rows
        let basis: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|c| (0..n).map(|k| BigRational::from_integer(BigInt::from(u[i][k])) * &field.basis[k][c]).sum()).collect())
            .collect();
        let moved = FieldRecord { basis: Some(basis), ..rec.clone() };
        let h = trace_gram(&field_from_record(&moved).unwrap()).unwrap();
        let ut: Vec<Vec<BigInt>> = (0..n).map(|r| (0..n).map(|c| BigInt::from(u[c][r])).collect()).collect();
        assert_eq!(transform(&g, &ut).unwrap(), h, "{}", rec.label);
        assert!(genus_equal(&g, &h).unwrap());
        // the reduction only settles on a common form reliably up to rank 3
        if n <= 3 {
            let w = reduced_witness_search(&g, &h, 2).unwrap();
            assert!(w.is_some_and(|w| transform(&g, &w.full).unwrap() == h), "{}", rec.label);
        }
    }
}

#[test]
fn cubic_search_finds_every_discriminant_to_2000() {
    let s = cubic_search(2000, Exec::default()).unwrap();
    let mut discs: Vec<i64> = s.fields.iter().map(|f| f.field.disc.to_i64().unwrap()).collect();
    discs.dedup();
    assert_eq!(discs, cubic_discs_2000());
}
