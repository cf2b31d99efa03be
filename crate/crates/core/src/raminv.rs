//! Ramification factors built from the `(e_i, f_i)` data of a prime:
//! `alpha_p`, `beta_p`, `h_p`, the diagonal form `a_p` and the tame local
//! model of the trace form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numberfield::{splitting_data, NumberFieldData, SplittingData};
use crate::padic::{least_nonresidue, legendre_i64, legendre_symbol, val_unit, PrimeSpot};
use crate::quadform::{model_form, DiagonalForm};

fn u_p(p: u64) -> Result<BigInt> {
    Ok(BigInt::from(least_nonresidue(PrimeSpot::finite(p)?)))
}

/// `alpha_p = (prod e_i^f_i) u_p^(f_p - g_p)`.
pub fn alpha_p(split: &SplittingData) -> Result<BigInt> {
    let prod: BigInt = split.pairs.iter().map(|&(e, f)| BigInt::from(e).pow(f)).product();
    Ok(prod * u_p(split.p)?.pow(split.f_sum() - split.g()))
}

/// `alpha` at the real place, `2^s`.
pub fn alpha_infinity(s: u32) -> BigInt {
    BigInt::from(2).pow(s)
}

/// `beta` at the real place, equal to `alpha_infinity`.
pub fn beta_infinity(s: u32) -> BigInt {
    alpha_infinity(s)
}

/// `beta_p = (-1)^(sum floor((e_i - 1)/2) f_i) (prod e_i^(e_i - f_i)) u_p^(n - f_p - e_p + g_p)`,
/// kept as an exact rational since `e_i - f_i` may be negative.
pub fn beta_p(split: &SplittingData, n: u32) -> Result<BigRational> {
    let sign_exp: u32 = split.pairs.iter().map(|&(e, f)| (e - 1) / 2 * f).sum();
    let mut v = BigRational::from_integer(if sign_exp % 2 == 0 { BigInt::one() } else { -BigInt::one() });
    for &(e, f) in &split.pairs {
        let ex = e as i32 - f as i32;
        v *= Pow::pow(BigRational::from_integer(BigInt::from(e)), ex);
    }
    let k = (n + split.g()) as i64 - (split.f_sum() + split.e_sum()) as i64;
    if k < 0 {
        return Err(Error::OutOfRange(format!("exponent n - f_p - e_p + g_p = {k} is negative")));
    }
    Ok(v * BigRational::from_integer(u_p(split.p)?.pow(k as u32)))
}

fn require_tame_odd(split: &SplittingData) -> Result<()> {
    if split.p == 2 {
        return Err(Error::InvalidPrime(2));
    }
    if !split.is_tame() {
        return Err(Error::Wild(split.p));
    }
    Ok(())
}

/// `h_p = #{i : f_i odd and (e_i / p) = -1}` at an odd tame prime.
pub fn h_p(split: &SplittingData) -> Result<u32> {
    require_tame_odd(split)?;
    let mut h = 0;
    for &(e, f) in &split.pairs {
        if f % 2 == 1 && legendre_i64(e as i64, split.p)? == -1 {
            h += 1;
        }
    }
    Ok(h)
}

/// The diagonal form `a_p`: per prime above p, `f_i` entries
/// `<e, ..., e, e (-1)^(f-1), e (-u_p)^(f-1)>`, read as `<e>` when `f_i = 1`.
pub fn a_p_form(split: &SplittingData) -> Result<DiagonalForm> {
    require_tame_odd(split)?;
    let u = least_nonresidue(PrimeSpot::finite(split.p)?);
    let mut entries = Vec::new();
    for &(e, f) in &split.pairs {
        let e = e as i64;
        if f == 1 {
            entries.push(e);
            continue;
        }
        entries.extend(std::iter::repeat_n(e, f as usize - 2));
        let s = if (f - 1) % 2 == 0 { 1 } else { -1 };
        entries.push(e * s);
        entries.push(e * (-u).pow(f - 1));
    }
    DiagonalForm::from_i64(Some(PrimeSpot::finite(split.p)?), &entries)
}

/// Everything the invariant tables report for one prime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamificationFactors {
    pub p: u64,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub alpha: BigInt,
    #[serde(serialize_with = "crate::report::ser_rat")]
    pub beta: BigRational,
    /// `None` at a wild prime or at 2.
    pub h: Option<u32>,
    pub g: u32,
    pub e_sum: u32,
    pub f_sum: u32,
    pub n: u32,
    /// `(alpha_p / p)`, at odd primes.
    pub legendre_alpha: Option<i8>,
}

pub fn ramification_factors(split: &SplittingData, n: u32) -> Result<RamificationFactors> {
    let alpha = alpha_p(split)?;
    let beta = beta_p(split, n)?;
    let odd_tame = split.p != 2 && split.is_tame();
    Ok(RamificationFactors {
        p: split.p,
        h: if odd_tame { Some(h_p(split)?) } else { None },
        legendre_alpha: if odd_tame { Some(legendre_symbol(&alpha, split.p)?) } else { None },
        alpha,
        beta,
        g: split.g(),
        e_sum: split.e_sum(),
        f_sum: split.f_sum(),
        n,
    })
}

/// The model `<1, ..., 1, alpha_p> + p <1, ..., 1, beta_p>` of the trace form at
/// an odd tame prime.
pub fn local_trace_model(field: &NumberFieldData, p: u64) -> Result<DiagonalForm> {
    let split = splitting_data(field, p)?;
    require_tame_odd(&split)?;
    let n = field.n as u32;
    let alpha = BigRational::from_integer(alpha_p(&split)?);
    let beta = beta_p(&split, n)?;
    model_form(split.f_sum() as usize, field.n, &alpha, &beta, p)
}

/// The same model with `beta` read off the discriminant instead:
/// the unit part of `disc / (alpha_p p^(n - f_p))`.
pub fn disc_trace_model(field: &NumberFieldData, p: u64) -> Result<DiagonalForm> {
    let split = splitting_data(field, p)?;
    require_tame_odd(&split)?;
    let f = split.f_sum();
    let alpha = alpha_p(&split)?;
    let scale = &alpha * BigInt::from(p).pow(field.n as u32 - f);
    let (_, beta) = val_unit(&BigRational::new(field.disc.clone(), scale), p)?;
    model_form(f as usize, field.n, &BigRational::from_integer(alpha), &beta, p)
}

/// `(alpha_p / p) (-1)^(f_p) = (-1)^(g_p - h_p)` at an odd tame prime.
pub fn sign_identity_holds(split: &SplittingData) -> Result<bool> {
    let l = legendre_symbol(&alpha_p(split)?, split.p)?;
    let lhs = l as i32 * if split.f_sum() % 2 == 0 { 1 } else { -1 };
    let rhs = if (split.g() + h_p(split)?) % 2 == 0 { 1 } else { -1 };
    Ok(lhs == rhs)
}
