//! Decision procedures for isometry and spinor-genus equality of trace
//! forms. Each op checks its hypotheses and refuses (with an error) outside
//! them; inside them it returns a `Verdict` recording what was used.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, is_squarefree, valuation};
use crate::error::{Error, Result};
use crate::numberfield::{is_fundamental_discriminant, ramified_primes, splitting_data, NumberFieldData, SplittingData};
use crate::padic::{legendre_i64, legendre_symbol, PrimeSpot};
use crate::quadform::DiagonalForm;
use crate::raminv::{alpha_p, h_p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Basis {
    IsometricTrace,
    SameSpinorGenus,
    GenusOnly,
}

/// One row of the per-prime comparison table behind a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `-1` stands for the real place.
    pub p: i64,
    pub quantity: &'static str,
    pub left: i64,
    pub right: i64,
}

impl Witness {
    fn agrees(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: bool,
    pub basis: Basis,
    pub theorem: &'static str,
    pub hypotheses: Vec<String>,
    pub witnesses: Vec<Witness>,
}

/// What the criteria need to know about a field: degree, discriminant,
/// signature and the splitting at each ramified prime (`None` when it could
/// not be determined).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldProfile {
    pub label: String,
    pub n: usize,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub disc: BigInt,
    pub sig: (usize, usize),
    pub ramified: BTreeMap<u64, Option<SplittingData>>,
}

impl FieldProfile {
    pub fn of(field: &NumberFieldData) -> Result<Self> {
        let mut ramified = BTreeMap::new();
        for p in ramified_primes(field)? {
            let s = match splitting_data(field, p) {
                Ok(s) => s,
                Err(Error::UnsupportedSplitting(_)) => {
                    ramified.insert(p, None);
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !s.is_ramified() {
                return Err(Error::Consistency(format!("{p} divides disc({}) but is unramified", field.label)));
            }
            if s.is_tame() && valuation(&field.disc, p) != s.tame_disc_valuation() {
                return Err(Error::Consistency(format!("tame valuation formula fails at {p} for {}", field.label)));
            }
            ramified.insert(p, Some(s));
        }
        Ok(FieldProfile { label: field.label.clone(), n: field.n, disc: field.disc.clone(), sig: field.sig, ramified })
    }

    /// A profile assembled from tame splitting data alone; the discriminant is
    /// `(-1)^s prod p^(n - f_p)`.
    pub fn synthetic(label: &str, n: usize, s: usize, splittings: Vec<SplittingData>) -> Result<Self> {
        if 2 * s > n {
            return Err(Error::OutOfRange(format!("s = {s} exceeds n / 2 for n = {n}")));
        }
        let mut disc = BigInt::from(if s % 2 == 0 { 1 } else { -1 });
        let mut ramified = BTreeMap::new();
        for sp in splittings {
            if sp.degree() as usize != n || !sp.is_ramified() || !sp.is_tame() || !is_prime(sp.p as u128) {
                return Err(Error::OutOfRange(format!("splitting at {} is not a tame ramified degree-{n} splitting", sp.p)));
            }
            disc *= BigInt::from(sp.p).pow(sp.tame_disc_valuation());
            if ramified.insert(sp.p, Some(sp)).is_some() {
                return Err(Error::OutOfRange("repeated prime".into()));
            }
        }
        Ok(FieldProfile { label: label.to_string(), n, disc, sig: (n - 2 * s, s), ramified })
    }

    pub fn s(&self) -> usize {
        self.sig.1
    }

    pub fn splitting(&self, p: u64) -> Result<&SplittingData> {
        match self.ramified.get(&p) {
            Some(Some(s)) => Ok(s),
            Some(None) => Err(Error::UnsupportedSplitting(p)),
            None => Err(Error::OutOfRange(format!("{p} is unramified in {}", self.label))),
        }
    }

    pub fn odd_ramified(&self) -> impl Iterator<Item = u64> + '_ {
        self.ramified.keys().copied().filter(|&p| p != 2)
    }

    fn require_tame(&self) -> Result<()> {
        for (&p, s) in &self.ramified {
            match s {
                None => return Err(Error::UnsupportedSplitting(p)),
                Some(s) if !s.is_tame() => return Err(Error::Wild(p)),
                _ => {}
            }
        }
        Ok(())
    }

    /// Residue degree sum at `p`; `n` when `p` is unramified.
    fn f_at(&self, p: u64) -> Result<u32> {
        if self.ramified.contains_key(&p) {
            Ok(self.splitting(p)?.f_sum())
        } else {
            Ok(self.n as u32)
        }
    }
}

fn both_tame(k: &FieldProfile, l: &FieldProfile, hyps: &mut Vec<String>) -> Result<()> {
    k.require_tame()?;
    l.require_tame()?;
    hyps.push("both fields tamely ramified".into());
    Ok(())
}

fn equal_degree(k: &FieldProfile, l: &FieldProfile, hyps: &mut Vec<String>) -> Result<()> {
    if k.n != l.n {
        return Err(Error::Hypothesis(format!("degrees differ ({} vs {})", k.n, l.n)));
    }
    hyps.push(format!("equal degree {}", k.n));
    Ok(())
}

fn not_totally_real(k: &FieldProfile, l: &FieldProfile, hyps: &mut Vec<String>) -> Result<()> {
    // the criterion is symmetric once one side has a complex place: a totally
    // real partner simply fails the signature condition
    if k.s() == 0 && l.s() == 0 {
        return Err(Error::Hypothesis("both fields are totally real; no isometry criterion applies".into()));
    }
    hyps.push("at least one field is not totally real".into());
    Ok(())
}

fn disc_row(k: &FieldProfile, l: &FieldProfile) -> bool {
    k.disc == l.disc
}

fn sig_row(k: &FieldProfile, l: &FieldProfile) -> Witness {
    Witness { p: -1, quantity: "s", left: k.s() as i64, right: l.s() as i64 }
}

/// Equal discriminants force equal ramified sets under tameness.
fn common_ramified(k: &FieldProfile, l: &FieldProfile) -> Result<Vec<u64>> {
    let a: Vec<u64> = k.ramified.keys().copied().collect();
    let b: Vec<u64> = l.ramified.keys().copied().collect();
    if k.disc == l.disc && a != b {
        return Err(Error::Consistency(format!("equal discriminants but ramified primes {a:?} vs {b:?}")));
    }
    Ok(a.into_iter().filter(|p| b.contains(p)).collect())
}

fn legendre_alpha(k: &FieldProfile, p: u64) -> Result<i64> {
    Ok(legendre_symbol(&alpha_p(k.splitting(p)?)?, p)? as i64)
}

/// Conditions i-iii: discriminant, signature and `(alpha_p / p)` at odd ramified p.
fn tame_conditions(k: &FieldProfile, l: &FieldProfile) -> Result<(bool, Vec<Witness>)> {
    let mut rows = vec![sig_row(k, l)];
    for p in common_ramified(k, l)? {
        if p == 2 {
            continue;
        }
        rows.push(Witness { p: p as i64, quantity: "legendre(alpha_p, p)", left: legendre_alpha(k, p)?, right: legendre_alpha(l, p)? });
    }
    let answer = disc_row(k, l) && rows.iter().all(Witness::agrees);
    Ok((answer, rows))
}

fn is_cubic_pair(k: &FieldProfile, l: &FieldProfile) -> bool {
    k.n == 3 && l.n == 3
}

pub fn same_spinor_genus(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    let mut hyps = Vec::new();
    both_tame(k, l, &mut hyps)?;
    equal_degree(k, l, &mut hyps)?;
    if k.n < 3 {
        return Err(Error::Hypothesis(format!("degree {} < 3", k.n)));
    }
    let (answer, witnesses) = tame_conditions(k, l)?;
    Ok(Verdict { answer, basis: Basis::SameSpinorGenus, theorem: "tame-spinor-genus", hypotheses: hyps, witnesses })
}

pub fn isometric_traces(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    if is_cubic_pair(k, l) && (k.disc.is_negative() || l.disc.is_negative()) {
        // with the roles of K and L swapped if needed, K has negative discriminant
        return Ok(Verdict {
            answer: disc_row(k, l),
            basis: Basis::IsometricTrace,
            theorem: "cubic-negative-discriminant",
            hypotheses: vec!["both cubic, one with negative discriminant".into()],
            witnesses: vec![sig_row(k, l)],
        });
    }
    let mut hyps = Vec::new();
    not_totally_real(k, l, &mut hyps)?;
    both_tame(k, l, &mut hyps)?;
    equal_degree(k, l, &mut hyps)?;
    let (answer, witnesses) = tame_conditions(k, l)?;
    Ok(Verdict { answer, basis: Basis::IsometricTrace, theorem: "tame-isometry", hypotheses: hyps, witnesses })
}

pub fn isometric_via_parity(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    let mut hyps = Vec::new();
    not_totally_real(k, l, &mut hyps)?;
    both_tame(k, l, &mut hyps)?;
    equal_degree(k, l, &mut hyps)?;
    let mut rows = vec![sig_row(k, l)];
    let mut primes: Vec<u64> = k.ramified.keys().chain(l.ramified.keys()).copied().collect();
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        rows.push(Witness { p: p as i64, quantity: "f_p", left: k.f_at(p)? as i64, right: l.f_at(p)? as i64 });
    }
    for &p in &primes {
        if p == 2 || !(k.ramified.contains_key(&p) && l.ramified.contains_key(&p)) {
            continue;
        }
        let parity = |x: &FieldProfile| -> Result<i64> {
            let s = x.splitting(p)?;
            Ok((s.g() as i64 - h_p(s)? as i64).rem_euclid(2))
        };
        rows.push(Witness { p: p as i64, quantity: "g_p - h_p mod 2", left: parity(k)?, right: parity(l)? });
    }
    let answer = rows.iter().all(Witness::agrees);
    Ok(Verdict { answer, basis: Basis::IsometricTrace, theorem: "residue-degree-parity", hypotheses: hyps, witnesses: rows })
}

pub fn isometric_fundamental(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    let mut hyps = Vec::new();
    if k.sig != l.sig {
        return Err(Error::Hypothesis(format!("signatures differ ({:?} vs {:?})", k.sig, l.sig)));
    }
    if k.s() == 0 {
        return Err(Error::Hypothesis("totally real fields".into()));
    }
    hyps.push(format!("equal signature {:?} with a complex place", k.sig));
    if k.disc != l.disc {
        return Err(Error::Hypothesis("discriminants differ".into()));
    }
    if !is_fundamental_discriminant(&k.disc) {
        return Err(Error::Hypothesis(format!("{} is not a fundamental discriminant", k.disc)));
    }
    hyps.push(format!("common fundamental discriminant {}", k.disc));
    if is_squarefree(&k.disc)? {
        // every ramified prime has v_p(disc) = 1 < p, so ramification is tame
        hyps.push("squarefree discriminant, tameness automatic".into());
    } else {
        both_tame(k, l, &mut hyps)?;
    }
    let mut rows = Vec::new();
    for p in common_ramified(k, l)? {
        if p == 2 {
            continue;
        }
        let g = |x: &FieldProfile| -> Result<i64> { Ok(x.splitting(p)?.g() as i64 % 2) };
        rows.push(Witness { p: p as i64, quantity: "g_p mod 2", left: g(k)?, right: g(l)? });
    }
    let answer = rows.iter().all(Witness::agrees);
    Ok(Verdict { answer, basis: Basis::IsometricTrace, theorem: "fundamental-discriminant", hypotheses: hyps, witnesses: rows })
}

fn galois_shape(k: &FieldProfile) -> Result<()> {
    for (&p, s) in &k.ramified {
        let s = s.as_ref().ok_or(Error::UnsupportedSplitting(p))?;
        if s.pairs.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::FlagInconsistency(format!("{} is flagged Galois but splits as {:?} at {p}", k.label, s.pairs)));
        }
    }
    Ok(())
}

pub fn galois_spinor_check(k: &FieldProfile, l: &FieldProfile, galois: (bool, bool)) -> Result<Verdict> {
    let mut hyps = Vec::new();
    if !(galois.0 && galois.1) {
        return Err(Error::Hypothesis("both fields must be flagged Galois".into()));
    }
    galois_shape(k)?;
    galois_shape(l)?;
    hyps.push("both Galois, splitting shapes uniform".into());
    equal_degree(k, l, &mut hyps)?;
    if k.n % 2 == 0 || k.n < 3 {
        return Err(Error::Hypothesis(format!("degree {} is not odd and at least 3", k.n)));
    }
    both_tame(k, l, &mut hyps)?;
    let totally = |x: &FieldProfile| x.ramified.values().flatten().all(|s| s.pairs == [(x.n as u32, 1)]);
    if totally(k) && totally(l) {
        hyps.push("both totally ramified at every ramified prime".into());
        return Ok(Verdict {
            answer: disc_row(k, l),
            basis: Basis::SameSpinorGenus,
            theorem: "galois-totally-ramified",
            hypotheses: hyps,
            witnesses: Vec::new(),
        });
    }
    let mut rows = Vec::new();
    for p in common_ramified(k, l)? {
        if p == 2 {
            continue;
        }
        let e = |x: &FieldProfile| -> Result<i64> { Ok(legendre_i64(x.splitting(p)?.pairs[0].0 as i64, p)? as i64) };
        rows.push(Witness { p: p as i64, quantity: "legendre(e_p, p)", left: e(k)?, right: e(l)? });
    }
    let answer = disc_row(k, l) && rows.iter().all(Witness::agrees);
    Ok(Verdict { answer, basis: Basis::SameSpinorGenus, theorem: "galois-tame", hypotheses: hyps, witnesses: rows })
}

pub fn single_odd_prime_isometric(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    let mut hyps = Vec::new();
    both_tame(k, l, &mut hyps)?;
    if k.s() == 0 || l.s() == 0 {
        return Err(Error::Hypothesis("a field is totally real".into()));
    }
    if k.sig != l.sig || k.disc != l.disc {
        return Err(Error::Hypothesis("signature or discriminant differ".into()));
    }
    hyps.push(format!("equal signature {:?} and discriminant {}", k.sig, k.disc));
    let odd: Vec<u64> = k.odd_ramified().collect();
    if odd.len() > 1 {
        return Err(Error::Hypothesis(format!("{} odd primes ramify ({odd:?})", odd.len())));
    }
    hyps.push("at most one odd ramified prime".into());
    Ok(Verdict { answer: true, basis: Basis::IsometricTrace, theorem: "single-odd-prime", hypotheses: hyps, witnesses: Vec::new() })
}

pub fn cubic_same_spinor_genus(k: &FieldProfile, l: &FieldProfile) -> Result<Verdict> {
    if !is_cubic_pair(k, l) {
        return Err(Error::Hypothesis("both fields must be cubic".into()));
    }
    Ok(Verdict {
        answer: disc_row(k, l),
        basis: Basis::SameSpinorGenus,
        theorem: "cubic-spinor-genus",
        hypotheses: vec!["both cubic".into()],
        witnesses: Vec::new(),
    })
}

/// Trace form over Z_3 of the totally ramified cubic `x^3 + 3a x + b`.
pub fn cubic_local3_class(a: i64, b: i64) -> Result<DiagonalForm> {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let d = -(&b * &b + BigInt::from(4) * &a * &a * &a);
    // disc(x^3 + 3a x + b) = 27 d
    if d.is_zero() || !(0..=2).contains(&valuation(&d, 3)) {
        return Err(Error::Hypothesis("x^3 + 3ax + b is not totally ramified at 3 (v_3(disc) not in {3,4,5})".into()));
    }
    let r = |x: BigInt| BigRational::from_integer(x);
    let three = BigInt::from(3);
    let entries = match valuation(&d, 3) {
        0 => vec![r(three.clone()), r(three.clone()), r(&three * &d)],
        1 => vec![r(three.clone()), r(BigInt::from(6)), BigRational::new(&three * &d, BigInt::from(2))],
        _ => vec![r(three), r(BigInt::from(9)), r(BigInt::from(-9))],
    };
    DiagonalForm::new(Some(PrimeSpot::finite(3)?), entries)
}

/// Every decision op whose hypotheses hold, by name, with the errors of the
/// ones that refused.
pub fn run_all(k: &FieldProfile, l: &FieldProfile, galois: (bool, bool)) -> Vec<(&'static str, Result<Verdict>)> {
    vec![
        ("isometric_traces", isometric_traces(k, l)),
        ("same_spinor_genus", same_spinor_genus(k, l)),
        ("isometric_via_parity", isometric_via_parity(k, l)),
        ("isometric_fundamental", isometric_fundamental(k, l)),
        ("single_odd_prime_isometric", single_odd_prime_isometric(k, l)),
        ("cubic_same_spinor_genus", cubic_same_spinor_genus(k, l)),
        ("galois_spinor_check", galois_spinor_check(k, l, galois)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{field_from_record, FieldRecord};
    use crate::quadform::{local_symbol, GramMatrix};

    fn field(poly: &[i64]) -> FieldProfile {
        FieldProfile::of(&field_from_record(&FieldRecord::new("f", poly)).unwrap()).unwrap()
    }

    fn split(p: u64, pairs: &[(u32, u32)]) -> SplittingData {
        SplittingData::new(p, pairs.to_vec()).unwrap()
    }

    #[test]
    fn cubic_negative_disc_path() {
        let a = field(&[-1, -1, 0, 1]);
        let b = field(&[-1, 1, 0, 1]);
        assert_eq!(a.disc, BigInt::from(-23));
        assert_eq!(b.disc, BigInt::from(-31));
        let v = isometric_traces(&a, &b).unwrap();
        assert!(!v.answer);
        assert_eq!(v.theorem, "cubic-negative-discriminant");
        assert!(isometric_traces(&a, &a).unwrap().answer);
    }

    #[test]
    fn quartic_legendre_mismatch() {
        let k = FieldProfile::synthetic("k", 4, 1, vec![split(5, &[(2, 1), (1, 2)])]).unwrap();
        let l = FieldProfile::synthetic("l", 4, 1, vec![split(5, &[(2, 1), (1, 1), (1, 1)])]).unwrap();
        assert_eq!(k.disc, l.disc);
        let v = same_spinor_genus(&k, &l).unwrap();
        assert!(!v.answer);
        let row = v.witnesses.iter().find(|w| w.p == 5).unwrap();
        assert_eq!((row.left, row.right), (1, -1));
        assert!(same_spinor_genus(&k, &k).unwrap().answer);
    }

    #[test]
    fn hypothesis_gates() {
        let real = FieldProfile::synthetic("r", 4, 0, vec![split(5, &[(2, 1), (1, 2)])]).unwrap();
        assert!(matches!(isometric_traces(&real, &real), Err(Error::Hypothesis(_))));
        let quad = FieldProfile::synthetic("q", 2, 1, vec![split(5, &[(2, 1)])]).unwrap();
        assert!(matches!(same_spinor_genus(&quad, &quad), Err(Error::Hypothesis(_))));
        assert!(isometric_traces(&quad, &quad).unwrap().answer);
        // x^4 - 2 is wild at 2
        let wild = field(&[-2, 0, 0, 0, 1]);
        assert_eq!(isometric_traces(&wild, &wild), Err(Error::Wild(2)));
        assert!(cubic_same_spinor_genus(&wild, &wild).is_err());
    }

    #[test]
    fn parity_differs_at_one_prime() {
        // same f_p and h_p = 0, g_p differs by one
        let k = FieldProfile::synthetic("k", 5, 1, vec![split(7, &[(2, 1), (1, 1), (1, 2)])]).unwrap();
        let l = FieldProfile::synthetic("l", 5, 1, vec![split(7, &[(2, 1), (1, 1), (1, 1), (1, 1)])]).unwrap();
        assert_eq!(k.disc, l.disc);
        assert!(!isometric_via_parity(&k, &l).unwrap().answer);
        assert!(!isometric_traces(&k, &l).unwrap().answer);
        assert!(isometric_via_parity(&k, &k).unwrap().answer);
    }

    #[test]
    fn fundamental_and_single_prime() {
        let k = field(&[-1, -1, 0, 1]);
        let v = isometric_fundamental(&k, &k).unwrap();
        assert!(v.answer);
        assert!(single_odd_prime_isometric(&k, &k).unwrap().answer);
        let sq = field(&[-10, 0, 0, 1]);
        assert!(matches!(isometric_fundamental(&sq, &sq), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn galois_quintics() {
        let k = field(&[-1, 3, 3, -4, -1, 1]);
        let l = field(&[-5, 1, 21, -12, -1, 1]);
        assert_eq!(k.disc, BigInt::from(11).pow(4));
        assert_eq!(l.disc, BigInt::from(31).pow(4));
        let v = galois_spinor_check(&k, &l, (true, true)).unwrap();
        assert!(!v.answer);
        assert_eq!(v.theorem, "galois-totally-ramified");
        assert!(galois_spinor_check(&k, &k, (true, true)).unwrap().answer);
        // a non-Galois cubic flagged Galois: 23 splits as [(1,1),(2,1)]
        let c = field(&[-1, -1, 0, 1]);
        assert!(matches!(galois_spinor_check(&c, &c, (true, true)), Err(Error::FlagInconsistency(_))));
    }

    #[test]
    fn local_cubic_classes() {
        let f = cubic_local3_class(-1, 1).unwrap();
        assert_eq!(f.entries[2], BigRational::new(BigInt::from(9), BigInt::from(2)));
        assert_eq!(cubic_local3_class(0, 3).unwrap().entries, DiagonalForm::from_i64(None, &[3, 9, -9]).unwrap().entries);
        assert_eq!(cubic_local3_class(-1, 3).unwrap().entries, DiagonalForm::from_i64(None, &[3, 3, -15]).unwrap().entries);
        // d = 0
        assert!(cubic_local3_class(-1, 2).is_err());
    }

    #[test]
    fn local_class_matches_local_gram() {
        // the basis {1, t, t^2 + 2a} Gram at 3 against the branch form
        for (a, b) in [(-1i64, 1i64), (0, 3), (-1, 3), (-1, 19), (0, 12)] {
            let g = GramMatrix::from_i64(&[vec![3, 0, 0], vec![0, -6 * a, -3 * b], vec![0, -3 * b, 6 * a * a]]).unwrap();
            let class = cubic_local3_class(a, b).unwrap();
            let den = if valuation(&BigInt::from(b * b + 4 * a * a * a), 3) == 1 { 2 } else { 1 };
            let scaled: Vec<i64> =
                class.entries.iter().map(|c| i64::try_from((c * BigInt::from(den * den)).to_integer()).unwrap()).collect();
            let h = GramMatrix::diagonal(&scaled).unwrap();
            assert_eq!(local_symbol(&g, 3).unwrap(), local_symbol(&h, 3).unwrap(), "a = {a}, b = {b}");
        }
    }
}
