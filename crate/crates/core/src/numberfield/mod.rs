//! Number fields from a defining polynomial: maximal order, discriminant,
//! signature, prime splitting and the integral trace form.

pub mod order;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{factorize, is_prime, is_squarefree, valuation};
use crate::error::{Error, Result};
use crate::linalg::{det_rat, mat_mul_rat, to_rat, transpose, RatMatrix};
use crate::poly::{self, fp, ZPoly};
use crate::quadform::GramMatrix;
use order::MultTable;

pub const MAX_DEGREE: usize = 12;

/// A field as presented on input: polynomial plus optional integral basis,
/// splitting data and Galois flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRecord {
    pub label: String,
    /// Coefficients, constant term first.
    pub poly: ZPoly,
    /// Rows are integral basis elements in the power basis.
    pub basis: Option<RatMatrix>,
    pub splitting: BTreeMap<u64, Vec<(u32, u32)>>,
    pub galois: Option<bool>,
}

impl FieldRecord {
    pub fn new(label: &str, poly: &[i64]) -> Self {
        FieldRecord {
            label: label.to_string(),
            poly: poly::zpoly(poly),
            basis: None,
            splitting: BTreeMap::new(),
            galois: None,
        }
    }
}

/// `p O_K = prod P_i^(e_i)` with residue degrees `f_i`, as sorted `(e_i, f_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SplittingData {
    pub p: u64,
    pub pairs: Vec<(u32, u32)>,
}

impl SplittingData {
    pub fn new(p: u64, pairs: Vec<(u32, u32)>) -> Result<Self> {
        if !is_prime(p as u128) {
            return Err(Error::InvalidPrime(p as i128));
        }
        if pairs.is_empty() || pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::OutOfRange(format!("splitting at {p} needs nonempty (e, f) with e, f >= 1")));
        }
        let mut pairs = pairs;
        pairs.sort();
        Ok(SplittingData { p, pairs })
    }

    /// `g_p`, the number of primes above p.
    pub fn g(&self) -> u32 {
        self.pairs.len() as u32
    }

    /// `e_p = sum e_i`.
    pub fn e_sum(&self) -> u32 {
        self.pairs.iter().map(|x| x.0).sum()
    }

    /// `f_p = sum f_i`.
    pub fn f_sum(&self) -> u32 {
        self.pairs.iter().map(|x| x.1).sum()
    }

    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e * f).sum()
    }

    pub fn is_tame(&self) -> bool {
        self.pairs.iter().all(|&(e, _)| e as u64 % self.p != 0)
    }

    pub fn is_ramified(&self) -> bool {
        self.pairs.iter().any(|&(e, _)| e > 1)
    }

    /// Valuation of the discriminant forced by tameness, `n - f_p`.
    pub fn tame_disc_valuation(&self) -> u32 {
        self.degree() - self.f_sum()
    }
}

/// A validated field: degree, polynomial, integral basis, discriminants,
/// signature and the structure constants of the basis.
#[derive(Debug, Clone)]
pub struct NumberFieldData {
    pub label: String,
    pub n: usize,
    pub poly: ZPoly,
    pub basis: RatMatrix,
    pub disc: BigInt,
    pub poly_disc: BigInt,
    /// `[O_K : Z[theta]]`, or the index of the supplied order.
    pub index: BigInt,
    /// `(r, s)`: real embeddings, complex pairs.
    pub sig: (usize, usize),
    pub supplied_splitting: BTreeMap<u64, Vec<(u32, u32)>>,
    pub galois: Option<bool>,
    table: MultTable,
}

pub fn poly_discriminant(f: &[BigInt]) -> Result<BigInt> {
    poly::discriminant(f)
}

fn validate_poly(f: &ZPoly) -> Result<usize> {
    let n = poly::degree(f).ok_or_else(|| Error::OutOfRange("zero polynomial".into()))?;
    if n < 2 {
        return Err(Error::OutOfRange(format!("degree {n} < 2")));
    }
    if n > MAX_DEGREE {
        return Err(Error::LimitExceeded(format!("degree {n} above the cap {MAX_DEGREE}")));
    }
    if !poly::is_monic(f) {
        return Err(Error::OutOfRange("polynomial must be monic".into()));
    }
    if f[0].is_zero() {
        return Err(Error::NotAField("constant term is zero".into()));
    }
    Ok(n)
}

fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn field_from_record(rec: &FieldRecord) -> Result<NumberFieldData> {
    let n = validate_poly(&rec.poly)?;
    let poly_disc = poly_discriminant(&rec.poly)?;
    let factors = poly::factor_squarefree(&rec.poly)?;
    if factors.len() > 1 {
        return Err(Error::NotAField(format!("{} irreducible factors", factors.len())));
    }
    let basis = match &rec.basis {
        Some(b) => {
            if b.len() != n || b.iter().any(|r| r.len() != n) {
                return Err(Error::BadBasis(format!("basis must be {n} x {n}")));
            }
            if det_rat(b).is_zero() {
                return Err(Error::BadBasis("basis matrix is singular".into()));
            }
            order::mult_table(&rec.poly, b)?;
            b.clone()
        }
        None => {
            let mut b = identity(n);
            for (p, e) in factorize(&poly_disc)? {
                if e >= 2 {
                    b = order::p_maximal(&rec.poly, b, p)?;
                }
            }
            b
        }
    };
    let table = order::mult_table(&rec.poly, &basis)?;
    let det = det_rat(&basis);
    let inv_index = det.abs();
    if !inv_index.numer().is_one() {
        return Err(Error::BadBasis("the power basis is not contained in the supplied order".into()));
    }
    let index = inv_index.denom().clone();
    let disc = &poly_disc / (&index * &index);
    let r = poly::count_real_roots(&rec.poly)?;
    let sig = (r, (n - r) / 2);
    let field = NumberFieldData {
        label: rec.label.clone(),
        n,
        poly: rec.poly.clone(),
        basis,
        disc,
        poly_disc,
        index,
        sig,
        supplied_splitting: rec.splitting.clone(),
        galois: rec.galois,
        table,
    };
    if field.disc.is_negative() != (field.sig.1 % 2 == 1) {
        return Err(Error::Consistency("sign of the discriminant disagrees with the signature".into()));
    }
    for (&p, pairs) in &rec.splitting {
        validate_supplied(&field, p, pairs)?;
    }
    Ok(field)
}

fn validate_supplied(field: &NumberFieldData, p: u64, pairs: &[(u32, u32)]) -> Result<SplittingData> {
    let s = SplittingData::new(p, pairs.to_vec())?;
    if s.degree() as usize != field.n {
        return Err(Error::Consistency(format!("supplied splitting at {p} has sum e f = {} != {}", s.degree(), field.n)));
    }
    if s.is_tame() && valuation(&field.disc, p) != s.tame_disc_valuation() {
        return Err(Error::Consistency(format!(
            "supplied tame splitting at {p} predicts v_p(disc) = {}, found {}",
            s.tame_disc_valuation(),
            valuation(&field.disc, p)
        )));
    }
    Ok(s)
}

pub fn signature_of_field(field: &NumberFieldData) -> (usize, usize) {
    field.sig
}

impl NumberFieldData {
    pub fn mult_table(&self) -> &MultTable {
        &self.table
    }

    /// Regular representation of `x` (order coordinates) acting on rows.
    fn mult_matrix(&self, x: &[BigInt]) -> RatMatrix {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let s: BigInt = (0..n).filter(|&j| !x[j].is_zero()).map(|j| &x[j] * &self.table[j][i][k]).sum();
                        BigRational::from_integer(s)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Candidate generators `sum c_i w_i` with small coefficients, in a fixed order.
fn generator_candidates(n: usize) -> impl Iterator<Item = Vec<BigInt>> {
    const COEFFS: [i64; 5] = [0, 1, -1, 2, -2];
    let total = (COEFFS.len() as u64).pow(n.min(6) as u32).min(4000);
    (1..total).map(move |code| {
        let mut v = vec![BigInt::zero(); n];
        let mut c = code;
        for slot in v.iter_mut().skip(1).take(n - 1) {
            *slot = BigInt::from(COEFFS[(c % 5) as usize]);
            c /= 5;
        }
        v
    })
}

fn native_splitting(field: &NumberFieldData, p: u64) -> Option<Vec<(u32, u32)>> {
    if valuation(&field.index, p) == 0 {
        return Some(fp::factor_shape(&fp::from_z(&field.poly, p), p));
    }
    let vd = valuation(&field.disc, p);
    for gamma in generator_candidates(field.n) {
        let cp = poly::charpoly(&field.mult_matrix(&gamma));
        let Some(cp) = poly::q_to_z(&cp) else { continue };
        let Ok(d) = poly::discriminant(&cp) else { continue };
        if valuation(&d, p) == vd {
            return Some(fp::factor_shape(&fp::from_z(&cp, p), p));
        }
    }
    None
}

/// Splitting of `p`: Dedekind-Kummer when `p` does not divide the index of
/// the defining polynomial or of a small alternative generator, otherwise
/// the data supplied in the record.
pub fn splitting_data(field: &NumberFieldData, p: u64) -> Result<SplittingData> {
    if !is_prime(p as u128) {
        return Err(Error::InvalidPrime(p as i128));
    }
    let supplied = field.supplied_splitting.get(&p);
    if let Some(pairs) = native_splitting(field, p) {
        let s = SplittingData::new(p, pairs)?;
        if let Some(given) = supplied {
            let given = validate_supplied(field, p, given)?;
            if given != s {
                return Err(Error::Consistency(format!(
                    "supplied splitting at {p} {:?} disagrees with the computed {:?}",
                    given.pairs, s.pairs
                )));
            }
        }
        return Ok(s);
    }
    match supplied {
        Some(pairs) => validate_supplied(field, p, pairs),
        None => Err(Error::UnsupportedSplitting(p)),
    }
}

/// Splitting data at every ramified prime and the global tame flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub primes: BTreeMap<u64, SplittingData>,
    pub tame: bool,
}

impl RamificationProfile {
    pub fn wild_primes(&self) -> Vec<u64> {
        self.primes.values().filter(|s| !s.is_tame()).map(|s| s.p).collect()
    }
}

pub fn ramified_primes(field: &NumberFieldData) -> Result<Vec<u64>> {
    Ok(factorize(&field.disc)?.into_iter().map(|(p, _)| p).collect())
}

pub fn ramification_profile(field: &NumberFieldData) -> Result<RamificationProfile> {
    let mut primes = BTreeMap::new();
    for p in ramified_primes(field)? {
        let s = splitting_data(field, p)?;
        if !s.is_ramified() {
            return Err(Error::Consistency(format!("{p} divides the discriminant but is unramified")));
        }
        if s.is_tame() && valuation(&field.disc, p) != s.tame_disc_valuation() {
            return Err(Error::Consistency(format!(
                "tame prime {p}: v_p(disc) = {} but n - f_p = {}",
                valuation(&field.disc, p),
                s.tame_disc_valuation()
            )));
        }
        primes.insert(p, s);
    }
    let tame = primes.values().all(|s| s.is_tame());
    Ok(RamificationProfile { primes, tame })
}

/// Gram matrix of `Tr(w_i w_j)` on the integral basis.
pub fn trace_gram(field: &NumberFieldData) -> Result<GramMatrix> {
    let n = field.n;
    let s = poly::power_sums(&field.poly, 2 * n - 1);
    let t: RatMatrix = to_rat(&(0..n).map(|i| (0..n).map(|j| s[i + j].clone()).collect()).collect());
    let g = mat_mul_rat(&mat_mul_rat(&field.basis, &t), &transpose(&field.basis));
    let ints = g
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| c.is_integer().then(|| c.to_integer()))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::BadBasis("trace form is not integral on the basis".into()))?;
    GramMatrix::new(ints)
}

/// Whether the basis spans the full ring of integers (p-maximal at every
/// prime whose square divides the discriminant of the order).
pub fn check_maximal(field: &NumberFieldData) -> Result<()> {
    for (p, e) in factorize(&field.disc)? {
        if e >= 2 && !order::is_p_maximal(&field.poly, &field.basis, p)? {
            return Err(Error::InvariantFailure(format!("basis of {} is not {p}-maximal", field.label)));
        }
    }
    Ok(())
}

/// Discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: &BigInt) -> bool {
    if d.is_one() || d.is_zero() {
        return false;
    }
    let r4 = crate::arith::mod_u64(d, 4);
    let sqf = |x: &BigInt| is_squarefree(x).unwrap_or(false);
    if r4 == 1 {
        return sqf(d);
    }
    if r4 == 0 {
        let m = d / 4;
        let m4 = crate::arith::mod_u64(&m, 4);
        return (m4 == 2 || m4 == 3) && sqf(&m);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(poly: &[i64]) -> NumberFieldData {
        field_from_record(&FieldRecord::new("t", poly)).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn construction_examples() {
        let k = field(&[-1, -1, 0, 1]);
        assert_eq!(k.disc, BigInt::from(-23));
        assert_eq!(k.sig, (1, 1));
        assert_eq!(k.basis, identity(3));
        let k = field(&[-5, 0, 1]);
        assert_eq!(k.disc, BigInt::from(5));
        assert_eq!(k.basis, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]);
        let k = field(&[1, 0, 0, 0, 1]);
        assert_eq!(k.disc, BigInt::from(256));
        assert_eq!(k.sig, (0, 2));
        assert_eq!(field(&[1, -3, 0, 1]).sig, (3, 0));
    }

    #[test]
    fn construction_errors() {
        let r = field_from_record(&FieldRecord::new("t", &[-4, 0, 1]));
        assert!(matches!(r, Err(Error::NotAField(_))));
        let r = field_from_record(&FieldRecord::new("t", &[1, 2, 1]));
        assert_eq!(r.unwrap_err(), Error::RepeatedRoot);
        let mut rec = FieldRecord::new("t", &[1, 0, 1]);
        rec.basis = Some(vec![vec![q(1, 1)]]);
        assert!(matches!(field_from_record(&rec), Err(Error::BadBasis(_))));
        rec.basis = Some(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 2)]]);
        assert!(matches!(field_from_record(&rec), Err(Error::BadBasis(_))));
    }

    #[test]
    fn splitting_examples() {
        let k = field(&[-1, -1, 0, 1]);
        assert_eq!(splitting_data(&k, 23).unwrap().pairs, vec![(1, 1), (2, 1)]);
        assert_eq!(splitting_data(&k, 7).unwrap().pairs, vec![(1, 1), (1, 2)]);
        let k = field(&[-5, 0, 1]);
        let s = splitting_data(&k, 5).unwrap();
        assert_eq!(s.pairs, vec![(2, 1)]);
        assert!(s.is_tame());
    }

    #[test]
    fn profile_examples() {
        let prof = ramification_profile(&field(&[-1, -1, 0, 1])).unwrap();
        assert!(prof.tame);
        assert_eq!(prof.primes[&23].pairs, vec![(1, 1), (2, 1)]);
        let prof = ramification_profile(&field(&[1, -3, 0, 1])).unwrap();
        assert!(!prof.tame);
        assert_eq!(prof.primes[&3].pairs, vec![(3, 1)]);
        let prof = ramification_profile(&field(&[-5, 0, 1])).unwrap();
        assert!(prof.tame);
        assert_eq!(prof.primes.keys().copied().collect::<Vec<_>>(), vec![5]);
    }

    #[test]
    fn index_divisor_uses_alternative_generator() {
        // Q(10^(1/3)): 3 divides [O_K : Z[theta]]
        let k = field(&[-10, 0, 0, 1]);
        assert_eq!(k.index, BigInt::from(3));
        assert_eq!(k.disc, BigInt::from(-300));
        let s = splitting_data(&k, 3).unwrap();
        assert_eq!(s.pairs, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn supplied_splitting_must_agree() {
        let mut rec = FieldRecord::new("t", &[-1, -1, 0, 1]);
        rec.splitting.insert(23, vec![(3, 1)]);
        assert!(matches!(field_from_record(&rec), Err(Error::Consistency(_))));
        rec.splitting.insert(23, vec![(1, 1), (1, 1), (1, 1)]);
        let k = field_from_record(&rec);
        // degree checks pass, but the computed splitting disagrees (and v_23 mismatch)
        assert!(k.is_err());
    }

    #[test]
    fn common_index_divisor_needs_supplied_data() {
        // x^3 - x^2 - 2x - 8: 2 splits completely, so 2 divides every index
        let k = field(&[-8, -2, -1, 1]);
        assert_eq!(k.disc, BigInt::from(-503));
        assert_eq!(splitting_data(&k, 2), Err(Error::UnsupportedSplitting(2)));
        let mut rec = FieldRecord::new("t", &[-8, -2, -1, 1]);
        rec.splitting.insert(2, vec![(1, 1), (1, 1), (1, 1)]);
        let k = field_from_record(&rec).unwrap();
        assert_eq!(splitting_data(&k, 2).unwrap().g(), 3);
        // 2 is unramified so the profile never asks for it
        assert!(ramification_profile(&k).unwrap().tame);
    }

    #[test]
    fn trace_gram_examples() {
        let g = trace_gram(&field(&[-1, -1, 0, 1])).unwrap();
        assert_eq!(g, GramMatrix::from_i64(&[vec![3, 0, 2], vec![0, 2, 3], vec![2, 3, 2]]).unwrap());
        let g = trace_gram(&field(&[-5, 0, 1])).unwrap();
        assert_eq!(g, GramMatrix::from_i64(&[vec![2, 1], vec![1, 3]]).unwrap());
        // x^3 + 3a x + b in the basis {1, theta, theta^2 + 2a}
        for (a, b) in [(-1i64, 1i64), (0, 3), (-1, 19), (1, 5)] {
            let mut rec = FieldRecord::new("t", &[b, 3 * a, 0, 1]);
            rec.basis = Some(vec![
                vec![q(1, 1), q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1), q(0, 1)],
                vec![q(2 * a, 1), q(0, 1), q(1, 1)],
            ]);
            let Ok(k) = field_from_record(&rec) else { continue };
            let g = trace_gram(&k).unwrap();
            let want = GramMatrix::from_i64(&[vec![3, 0, 0], vec![0, -6 * a, -3 * b], vec![0, -3 * b, 6 * a * a]]).unwrap();
            assert_eq!(g, want);
        }
    }

    #[test]
    fn det_and_signature_of_trace_gram() {
        for poly in [&[-1i64, -1, 0, 1][..], &[-5, 0, 1], &[1, 0, 0, 0, 1], &[-10, 0, 0, 1], &[1, -3, 0, 1], &[3, 0, 0, 0, 0, 1]] {
            let k = field(poly);
            let g = trace_gram(&k).unwrap();
            assert_eq!(g.det(), k.disc);
            let (r, s) = k.sig;
            assert_eq!(crate::quadform::signature(&g).unwrap(), (r + s, s));
        }
    }

    #[test]
    fn maximality_check() {
        assert!(check_maximal(&field(&[-5, 0, 1])).is_ok());
        let mut rec = FieldRecord::new("t", &[-5, 0, 1]);
        rec.basis = Some(identity(2));
        let k = field_from_record(&rec).unwrap();
        assert_eq!(k.disc, BigInt::from(20));
        assert!(matches!(check_maximal(&k), Err(Error::InvariantFailure(_))));
    }

    #[test]
    fn fundamental_discriminants() {
        let f = |d: i64| is_fundamental_discriminant(&BigInt::from(d));
        assert!(f(-23));
        assert!(f(12));
        assert!(!f(45));
        assert!(!f(1));
        assert!(f(-4) && f(8) && f(-8) && f(5));
        assert!(!f(-16) && !f(2) && !f(0));
    }
}
