//! Residue symbols, Hilbert symbols, valuations and unit square classes.
//!
//! The real place is written as the "prime" `-1`, so that signature data
//! sits next to the finite local data. Every operation here is exact: rational
//! arguments are first replaced by an integer in the same square class
//! (numerator times denominator).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{is_prime, mod_u64, split_valuation};
use crate::error::{Error, Result};

/// A place of Q: `-1` for the real place, otherwise a rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct PrimeSpot(i64);

impl PrimeSpot {
    pub const INFINITY: PrimeSpot = PrimeSpot(-1);
    pub const TWO: PrimeSpot = PrimeSpot(2);

    pub fn new(value: i64) -> Result<Self> {
        if value == -1 || (value > 0 && is_prime(value as u128)) {
            Ok(PrimeSpot(value))
        } else {
            Err(Error::InvalidPrime(value as i128))
        }
    }

    pub fn finite(p: u64) -> Result<Self> {
        let v = i64::try_from(p).map_err(|_| Error::InvalidPrime(p as i128))?;
        Self::new(v)
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0 == -1
    }

    /// The finite prime, or `None` at the real place.
    pub fn prime(self) -> Option<u64> {
        (self.0 > 0).then_some(self.0 as u64)
    }
}

impl fmt::Display for PrimeSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical representative of a unit square class at a spot.
///
/// At `-1` the representative is the sign; at `2` it is the residue in
/// `{1, 3, 5, 7}`; at odd `p` it is `1` or the least nonresidue `u_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareClass {
    pub spot: PrimeSpot,
    pub rep: i64,
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        self.rep == 1
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p as u128) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p as i128))
    }
}

/// Jacobi symbol (a/n) for odd positive n; n need not be prime.
pub fn jacobi_symbol(a: &BigInt, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::InvalidPrime(n as i128));
    }
    let mut a = mod_u64(a, n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    jacobi_symbol(a, p)
}

pub fn legendre_i64(a: i64, p: u64) -> Result<i8> {
    legendre_symbol(&BigInt::from(a), p)
}

/// `u_p`: -1 at infinity, 5 at 2, the least quadratic nonresidue otherwise.
pub fn least_nonresidue(spot: PrimeSpot) -> i64 {
    match spot.value() {
        -1 => -1,
        2 => 5,
        p => (2..p)
            .find(|&u| legendre_i64(u, p as u64) == Ok(-1))
            .expect("an odd prime has a nonresidue"),
    }
}

/// An integer in the same square class as `a` (numerator times denominator).
pub fn square_class_integer(a: &BigRational) -> BigInt {
    a.numer() * a.denom()
}

/// Writes `a = p^v * u` with `u` a p-adic unit.
pub fn val_unit(a: &BigRational, p: u64) -> Result<(i64, BigRational)> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if p < 2 || !is_prime(p as u128) {
        return Err(Error::InvalidPrime(p as i128));
    }
    let (vn, un) = split_valuation(a.numer(), p);
    let (vd, ud) = split_valuation(a.denom(), p);
    Ok((vn as i64 - vd as i64, BigRational::new(un, ud)))
}

pub fn valuation_rat(a: &BigRational, p: u64) -> i64 {
    let (vn, _) = split_valuation(a.numer(), p);
    let (vd, _) = split_valuation(a.denom(), p);
    vn as i64 - vd as i64
}

/// Hilbert symbol `(a, b)_p` over Q_p, with `p = -1` meaning R.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, spot: PrimeSpot) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let a = square_class_integer(a);
    let b = square_class_integer(b);
    Ok(hilbert_int(&a, &b, spot))
}

pub fn hilbert_i64(a: i64, b: i64, spot: PrimeSpot) -> Result<i8> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(hilbert_int(&BigInt::from(a), &BigInt::from(b), spot))
}

pub(crate) fn hilbert_int(a: &BigInt, b: &BigInt, spot: PrimeSpot) -> i8 {
    match spot.value() {
        -1 => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        2 => {
            let (alpha, u) = split_valuation(a, 2);
            let (beta, v) = split_valuation(b, 2);
            let u8_ = mod_u64(&u, 8);
            let v8 = mod_u64(&v, 8);
            let eps = |x: u64| ((x % 4) == 3) as u32;
            let omega = |x: u64| (x == 3 || x == 5) as u32;
            let e = eps(u8_) * eps(v8) + alpha * omega(v8) + beta * omega(u8_);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        p => {
            let p = p as u64;
            let (alpha, u) = split_valuation(a, p);
            let (beta, v) = split_valuation(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= jacobi_symbol(&u, p).expect("odd p");
            }
            if alpha % 2 == 1 {
                s *= jacobi_symbol(&v, p).expect("odd p");
            }
            s
        }
    }
}

/// Canonical unit square class of `a` at the spot. At a finite prime `a`
/// must be a unit; strip the uniformizer with [`val_unit`] first.
pub fn square_class(a: &BigRational, spot: PrimeSpot) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let n = square_class_integer(a);
    let rep = match spot.prime() {
        None => {
            if n.is_negative() {
                -1
            } else {
                1
            }
        }
        Some(p) => {
            if mod_u64(&n, p) == 0 {
                return Err(Error::NonUnit { value: a.to_string(), p: p as i64 });
            }
            if p == 2 {
                mod_u64(&n, 8) as i64
            } else if jacobi_symbol(&n, p)? == 1 {
                1
            } else {
                least_nonresidue(spot)
            }
        }
    };
    Ok(SquareClass { spot, rep })
}

pub fn square_class_i64(a: i64, spot: PrimeSpot) -> Result<SquareClass> {
    square_class(&BigRational::from_integer(BigInt::from(a)), spot)
}

/// Whether `a` and `b` (nonzero rationals) agree modulo squares of Q_p^*.
pub fn same_square_class(a: &BigRational, b: &BigRational, spot: PrimeSpot) -> Result<bool> {
    match spot.prime() {
        None => Ok(a.is_negative() == b.is_negative()),
        Some(p) => {
            let (va, ua) = val_unit(a, p)?;
            let (vb, ub) = val_unit(b, p)?;
            Ok((va - vb) % 2 == 0 && square_class(&ua, spot)? == square_class(&ub, spot)?)
        }
    }
}

/// Whether the rational is a square unit at an odd prime or at 2.
pub fn is_unit_square(a: &BigRational, p: u64) -> Result<bool> {
    let spot = PrimeSpot::finite(p)?;
    Ok(square_class(a, spot)?.rep == 1)
}

#[cfg(test)]
pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
