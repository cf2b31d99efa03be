//! Exhaustive enumeration of cubic fields of bounded discriminant, with
//! exact removal of isomorphic presentations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::numberfield::{field_from_record, splitting_data, FieldRecord, NumberFieldData};
use crate::poly::{self, factor_squarefree, ZPoly};

/// Largest discriminant bound accepted by the search.
pub const SEARCH_CAP: u64 = 2_000_000;

const FINGERPRINT_PRIMES: usize = 12;

/// Whether `Q[x]/f1` and `Q[x]/f2` are isomorphic, for irreducible monic
/// polynomials of equal degree: `f2` must have a root in `Q[x]/f1`, which
/// happens exactly when the norm `Res_y(f1(y), f2(x - k y))` has an
/// irreducible factor of degree `n` (for a `k` making the norm square-free).
pub fn fields_isomorphic(f1: &[BigInt], f2: &[BigInt]) -> Result<bool> {
    let (Some(n1), Some(n2)) = (poly::degree(f1), poly::degree(f2)) else {
        return Err(Error::ZeroArgument);
    };
    if n1 != n2 {
        return Ok(false);
    }
    if f1 == f2 {
        return Ok(true);
    }
    let points = n1 * n2 + 1;
    let xs: Vec<BigInt> = (0..points as i64).map(BigInt::from).collect();
    for k in 1..=20i64 {
        let kb = BigInt::from(-k);
        let ys: Vec<BigInt> = xs.iter().map(|x| poly::resultant(f1, &poly::compose_linear(f2, x, &kb))).collect();
        let norm = poly::q_to_z(&poly::interpolate(&xs, &ys)).ok_or_else(|| Error::InternalLimit("non-integral norm".into()))?;
        match factor_squarefree(&norm) {
            Ok(fs) => return Ok(fs.iter().any(|g| g.len() == n1 + 1)),
            Err(Error::RepeatedRoot) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InternalLimit("no square-free norm for k <= 20".into()))
}

/// Splitting shapes at the first few primes not dividing the discriminant;
/// equal for isomorphic fields.
fn fingerprint(field: &NumberFieldData) -> Result<Vec<Vec<(u32, u32)>>> {
    let mut out = Vec::with_capacity(FINGERPRINT_PRIMES);
    let mut p = 2u64;
    while out.len() < FINGERPRINT_PRIMES {
        p += 1;
        if !is_prime(p as u128) || (&field.disc % p).is_zero() {
            continue;
        }
        out.push(splitting_data(field, p)?.pairs);
    }
    Ok(out)
}

/// A cubic field found by the search, presented by its reduced polynomial.
#[derive(Debug, Clone)]
pub struct CubicField {
    pub field: NumberFieldData,
    /// Number of enumerated polynomials defining this field.
    pub presentations: usize,
}

#[derive(Debug, Clone)]
pub struct CubicSearch {
    pub bound: u64,
    /// Irreducible polynomials inside the search box that passed the
    /// discriminant prefilter.
    pub candidates: usize,
    /// Distinct fields, ordered by discriminant then polynomial.
    pub fields: Vec<CubicField>,
}

impl CubicSearch {
    /// Index pairs of distinct fields sharing a discriminant.
    pub fn equal_disc_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.fields.len() {
            for j in i + 1..self.fields.len() {
                if self.fields[i].field.disc != self.fields[j].field.disc {
                    break;
                }
                out.push((i, j));
            }
        }
        out
    }
}

/// Squarefree kernel of `|d|`: a lower bound for the field discriminant of
/// any order of discriminant `d`.
fn squarefree_part(d: i128) -> i128 {
    let mut m = d.abs();
    let mut out = 1i128;
    let mut q = 2i128;
    while q * q <= m {
        let mut e = 0;
        while m % q == 0 {
            m /= q;
            e += 1;
        }
        if e % 2 == 1 {
            out *= q;
        }
        q += 1;
    }
    out * m
}

fn has_integer_root(a: i64, b: i64, c: i64) -> bool {
    if c == 0 {
        return true;
    }
    let f = |x: i64| ((x + a) * x + b) * x + c;
    (1..=c.abs()).filter(|d| c % d == 0).any(|d| f(d) == 0 || f(-d) == 0)
}

/// Monic cubics `x^3 + a x^2 + b x + c`, `a` in {0, -1}, inside the box that
/// contains a generator of every cubic field with `|disc| <= bound`.
/// The box comes from Hunter's bound `T2 <= a^2/3 + (2/sqrt 3)(|d|/3)^(1/2)`
/// on a generator of trace 0 or 1, with `|a^2 - 2b| <= T2` and `|c| <= (T2/3)^(3/2)`.
fn candidate_box(bound: u64) -> Vec<[i64; 3]> {
    let t2 = (2 * (bound.sqrt() + 1) + 1).div_ceil(3) as i64 + 1;
    let cmax = ((t2 * t2 * t2) / 27).sqrt() + 1;
    let mut out = Vec::new();
    for a in [0i64, -1] {
        for b in (a * a - t2).div_euclid(2)..=(a * a + t2).div_euclid(2) + 1 {
            let cmin = if a == 0 { 0 } else { -cmax };
            for c in cmin..=cmax {
                let d = (a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c) as i128;
                if d == 0 || squarefree_part(d) > bound as i128 || has_integer_root(a, b, c) {
                    continue;
                }
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// All cubic fields with `0 < |disc| <= bound`, one reduced polynomial each.
pub fn cubic_search(bound: u64, exec: Exec) -> Result<CubicSearch> {
    if bound > SEARCH_CAP {
        return Err(Error::LimitExceeded(format!("cubic search bound {bound} exceeds {SEARCH_CAP}")));
    }
    let cands = candidate_box(bound);
    let built = exec::map(&cands, exec, |&[a, b, c]| -> Result<Option<(NumberFieldData, Vec<Vec<(u32, u32)>>)>> {
        let poly = [c, b, a, 1];
        let rec = FieldRecord::new(&poly::to_string(&poly::zpoly(&poly)), &poly);
        let field = field_from_record(&rec)?;
        if field.disc.abs().to_u64().is_none_or(|d| d > bound) {
            return Ok(None);
        }
        let fp = fingerprint(&field)?;
        Ok(Some((field, fp)))
    });
    let mut groups: BTreeMap<BigInt, Vec<(NumberFieldData, Vec<Vec<(u32, u32)>>)>> = BTreeMap::new();
    for item in built {
        if let Some((field, fp)) = item? {
            groups.entry(field.disc.clone()).or_default().push((field, fp));
        }
    }
    let groups: Vec<Vec<(NumberFieldData, Vec<Vec<(u32, u32)>>)>> = groups
        .into_values()
        .map(|mut g| {
            // reduced presentation first: smallest |poly disc|, then coefficients
            g.sort_by(|x, y| x.0.poly_disc.abs().cmp(&y.0.poly_disc.abs()).then_with(|| rev_key(&x.0.poly).cmp(&rev_key(&y.0.poly))));
            g
        })
        .collect();
    let deduped = exec::map(&groups, exec, |g| dedup_group(g));
    let mut fields = Vec::new();
    for d in deduped {
        let mut d = d?;
        d.sort_by(|x, y| rev_key(&x.field.poly).cmp(&rev_key(&y.field.poly)));
        fields.extend(d);
    }
    Ok(CubicSearch { bound, candidates: cands.len(), fields })
}

fn rev_key(f: &ZPoly) -> Vec<BigInt> {
    f.iter().rev().cloned().collect()
}

fn dedup_group(group: &[(NumberFieldData, Vec<Vec<(u32, u32)>>)]) -> Result<Vec<CubicField>> {
    let mut reps: Vec<(usize, CubicField)> = Vec::new();
    'next: for (i, (field, fp)) in group.iter().enumerate() {
        for (ri, rep) in reps.iter_mut() {
            if &group[*ri].1 == fp && fields_isomorphic(&rep.field.poly, &field.poly)? {
                rep.presentations += 1;
                continue 'next;
            }
        }
        reps.push((i, CubicField { field: field.clone(), presentations: 1 }));
    }
    Ok(reps.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::zpoly;

    #[test]
    fn isomorphism_examples() {
        // x^3 - x - 1 and its translate x^3 - 3x^2 + 2x - 1 (theta + 1)
        let f = zpoly(&[-1, -1, 0, 1]);
        let g = zpoly(&[-1, 2, -3, 1]);
        assert!(fields_isomorphic(&f, &g).unwrap());
        // x^3 - x - 1 versus x^3 + x - 1 (disc -31)
        assert!(!fields_isomorphic(&f, &zpoly(&[-1, 1, 0, 1])).unwrap());
        // the cyclic cubic of conductor 7 in two presentations
        let c7 = zpoly(&[1, -2, -1, 1]);
        let c7b = zpoly(&[-1, -2, 1, 1]);
        assert!(fields_isomorphic(&c7, &c7b).unwrap());
        // x^3 - 2 and x^3 - 4 define the same field (theta^2 / ... )
        assert!(fields_isomorphic(&zpoly(&[-2, 0, 0, 1]), &zpoly(&[-4, 0, 0, 1])).unwrap());
        assert!(!fields_isomorphic(&zpoly(&[-2, 0, 0, 1]), &zpoly(&[-3, 0, 0, 1])).unwrap());
    }

    #[test]
    fn small_search_matches_known_counts() {
        // reference list from an independent Round 2 run over a wider polynomial box
        let s = cubic_search(200, Exec::default()).unwrap();
        let discs: Vec<i64> = s.fields.iter().map(|f| f.field.disc.to_i64().unwrap()).collect();
        assert_eq!(discs, vec![-200, -199, -175, -172, -152, -140, -139, -135, -116, -108, -107, -104, -87, -83, -76, -59, -44, -31, -23, 49, 81, 148, 169]);
    }

    #[test]
    fn sequential_equals_parallel() {
        let a = cubic_search(500, Exec::Sequential).unwrap();
        let b = cubic_search(500, Exec::Parallel).unwrap();
        let key = |s: &CubicSearch| s.fields.iter().map(|f| f.field.poly.clone()).collect::<Vec<_>>();
        assert_eq!(key(&a), key(&b));
    }
}
