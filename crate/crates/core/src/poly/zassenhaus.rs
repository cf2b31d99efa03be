//! Factorization of monic square-free integer polynomials: factor modulo a
//! good prime, Hensel-lift past the coefficient bound, recombine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::fp::{self, FpPoly};
use super::{degree, derivative, div_exact_monic, is_monic, trim, ZPoly};
use crate::arith::is_prime;
use crate::error::{Error, Result};

fn reduce_sym(f: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut v: ZPoly = f
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut v);
    v
}

fn reduce(f: Vec<BigInt>, m: &BigInt) -> ZPoly {
    let mut v: ZPoly = f.into_iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut v);
    v
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    reduce(super::mul(a, b), m)
}

/// Lifts `f = g h mod p` (g, h monic, coprime mod p) to `mod p^k`.
fn hensel_pair(f: &[BigInt], g0: &FpPoly, h0: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = fp::ext_gcd(g0, h0, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let mut g = fp::to_z(g0);
    let mut h = fp::to_z(h0);
    let mut m = pb.clone();
    for _ in 1..k {
        // e = (f - g h) / m, reduced mod p
        let diff = super::sub(f, &super::mul(&g, &h));
        let e: ZPoly = diff.iter().map(|c| c / &m).collect();
        debug_assert!(diff.iter().all(|c| (c % &m).is_zero()));
        let e = fp::from_z(&e, p);
        let (q, dg) = fp::divrem(&fp::mul(&t, &e, p), g0, p);
        let dh = fp::add(&fp::mul(&s, &e, p), &fp::mul(&q, h0, p), p);
        let dh = fp::rem(&dh, h0, p);
        for (i, c) in dg.iter().enumerate() {
            g[i] += &m * c;
        }
        for (i, c) in dh.iter().enumerate() {
            h[i] += &m * c;
        }
        m *= &pb;
    }
    (g, h)
}

fn lift_all(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    let mut target = f.to_vec();
    let mut out = Vec::with_capacity(factors.len());
    for i in 0..factors.len() - 1 {
        let rest = factors[i + 1..].iter().fold(vec![1u64], |acc, g| fp::mul(&acc, g, p));
        let (g, h) = hensel_pair(&target, &factors[i], &rest, p, k);
        out.push(reduce(g, &modulus));
        target = reduce(h, &modulus);
    }
    out.push(target);
    out
}

/// Picks a prime where `f` stays square-free, preferring few factors.
fn choose_prime(f: &[BigInt]) -> (u64, Vec<FpPoly>) {
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 8 {
        p += 1;
        if !is_prime(p as u128) {
            continue;
        }
        let fp_ = fp::from_z(f, p);
        if fp::gcd(&fp_, &fp::derivative(&fp_, p), p).len() != 1 {
            continue;
        }
        tried += 1;
        let fs: Vec<FpPoly> = fp::factor(&fp_, p).into_iter().map(|(g, _)| g).collect();
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            let done = fs.len() <= 1;
            best = Some((p, fs));
            if done {
                break;
            }
        }
    }
    best.expect("some prime keeps a square-free polynomial square-free")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible monic factors of a monic square-free polynomial over Z.
pub fn factor_squarefree(f: &[BigInt]) -> Result<Vec<ZPoly>> {
    let n = degree(f).ok_or(Error::ZeroArgument)?;
    if !is_monic(f) {
        return Err(Error::OutOfRange("factorization needs a monic polynomial".into()));
    }
    if super::resultant(f, &derivative(f)).is_zero() {
        return Err(Error::RepeatedRoot);
    }
    if n <= 1 {
        return Ok(vec![f.to_vec()]);
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return Ok(vec![f.to_vec()]);
    }
    // factor coefficients are bounded by 2^n |f|_2
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32);
    let mut k = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus *= p;
        k += 1;
    }
    let lifted = lift_all(f, &modular, p, k);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut g = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), size) {
            let cand = subset.iter().fold(vec![BigInt::one()], |acc, &i| mul_mod(&acc, &remaining[i], &modulus));
            let cand = reduce_sym(&cand, &modulus);
            if let Some(q) = div_exact_monic(&g, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                g = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, r)| r)
                    .collect();
            }
            None => size += 1,
        }
    }
    found.push(g);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    debug_assert!(found.iter().all(|h| !h.last().unwrap().is_negative()));
    Ok(found)
}

pub fn is_irreducible(f: &[BigInt]) -> Result<bool> {
    Ok(factor_squarefree(f)?.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{mul, zpoly};
    use proptest::prelude::*;

    #[test]
    fn irreducible_examples() {
        assert!(is_irreducible(&zpoly(&[-1, -1, 0, 1])).unwrap());
        assert!(is_irreducible(&zpoly(&[1, 0, 0, 0, 1])).unwrap());
        // x^4 + 1 splits mod every prime but not over Z
        assert!(is_irreducible(&zpoly(&[1, 0, 0, 0, 1])).unwrap());
        assert!(!is_irreducible(&zpoly(&[-4, 0, 1])).unwrap());
        // x^4 - 10x^2 + 1: Swinnerton-Dyer, reducible mod every p
        assert!(is_irreducible(&zpoly(&[1, 0, -10, 0, 1])).unwrap());
    }

    #[test]
    fn recovers_product() {
        let a = zpoly(&[1, 0, -10, 0, 1]);
        let b = zpoly(&[-1, -1, 0, 1]);
        let c = zpoly(&[7, 3, 1]);
        let f = mul(&mul(&a, &b), &c);
        let fs = factor_squarefree(&f).unwrap();
        assert_eq!(fs, vec![c, b, a]);
    }

    #[test]
    fn rejects_repeated_roots() {
        assert_eq!(factor_squarefree(&zpoly(&[1, 2, 1])), Err(Error::RepeatedRoot));
    }

    proptest! {
        #[test]
        fn product_of_random_factors(
            a in proptest::collection::vec(-20i64..20, 1..4),
            b in proptest::collection::vec(-20i64..20, 1..4)
        ) {
            let monic = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).chain([BigInt::one()]).collect::<ZPoly>();
            let (fa, fb) = (monic(&a), monic(&b));
            let f = mul(&fa, &fb);
            prop_assume!(!crate::poly::resultant(&f, &derivative(&f)).is_zero());
            let fs = factor_squarefree(&f).unwrap();
            prop_assert!(fs.len() >= 2);
            let prod = fs.iter().fold(vec![BigInt::one()], |acc, g| mul(&acc, g));
            prop_assert_eq!(prod, f);
            for g in &fs {
                prop_assert!(is_monic(g));
                // monic of degree 2 or 3: irreducible iff no integer root dividing g(0)
                let d = degree(g).unwrap();
                if (2..=3).contains(&d) {
                    let c0 = i64::try_from(&g[0]).unwrap();
                    let has_root = (1..=c0.abs()).any(|r| {
                        c0 % r == 0 && [r, -r].iter().any(|&x| crate::poly::eval(g, &BigInt::from(x)).is_zero())
                    });
                    prop_assert!(!has_root && !g[0].is_zero());
                }
            }
        }
    }
}
