//! Polynomials over F_p with `p < 2^63`, coefficients as reduced `u64`.
//!
//! Factorization is the usual three stages: square-free, distinct-degree,
//! then Cantor-Zassenhaus equal-degree splitting (trace map when p = 2).
//! The splitting draws from a fixed-seed ChaCha stream, so results are
//! reproducible run to run.

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::trim;
use crate::arith::mod_u64;
use crate::linalg::{inv_mod, mulm};

pub type FpPoly = Vec<u64>;

pub fn from_z(f: &[BigInt], p: u64) -> FpPoly {
    let mut v: FpPoly = f.iter().map(|c| mod_u64(c, p)).collect();
    trim(&mut v);
    v
}

pub fn to_z(f: &[u64]) -> Vec<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut r: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut r);
    r
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut r: FpPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut r);
    r
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(&mut r);
    r
}

pub fn scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut r: FpPoly = a.iter().map(|&x| mulm(x, c, p)).collect();
    trim(&mut r);
    r
}

pub fn monic(a: &[u64], p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(a, inv_mod(lead, p), p),
    }
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulm(r[k + db], inv, p);
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulm(c, bj, p)) % p;
        }
        q[k] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().expect("not both zero"), p);
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn derivative(a: &[u64], p: u64) -> FpPoly {
    let mut d: FpPoly = a.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect();
    trim(&mut d);
    d
}

/// `base^exp mod m`.
pub fn powmod(base: &[u64], exp: &BigUint, m: &[u64], p: u64) -> FpPoly {
    let mut result: FpPoly = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..exp.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if exp.bit(i) {
            result = rem(&mul(&result, &b, p), m, p);
        }
    }
    result
}

fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

/// Square-free decomposition of a monic polynomial: `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` square-free, monic and nonconstant.
pub fn squarefree_factorization(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let mut out = Vec::new();
    sff_rec(&monic(f, p), p, 1, &mut out);
    out.sort();
    out
}

fn sff_rec(f: &[u64], p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if f.len() <= 1 {
        return;
    }
    let d = derivative(f, p);
    if d.is_empty() {
        // f = g(x^p)
        let g: FpPoly = f.iter().step_by(p as usize).copied().collect();
        sff_rec(&g, p, mult * p as u32, out);
        return;
    }
    let mut c = gcd(f, &d, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while !is_one(&w) {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if z.len() > 1 {
            out.push((z, i * mult));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if c.len() > 1 {
        // remaining part is a p-th power
        let g: FpPoly = c.iter().step_by(p as usize).copied().collect();
        sff_rec(&g, p, mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a square-free monic polynomial:
/// `(g_d, d)` with `g_d` the product of all irreducible factors of degree `d`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let pe = BigUint::from(p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &f, p);
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
            break;
        }
        h = powmod(&h, &pe, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if !is_one(&g) {
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((g, d));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    loop {
        let a: FpPoly = {
            let mut v: FpPoly = (0..n).map(|_| rng.random_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() <= 1 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = rem(&a, f, p);
            let mut acc = t.clone();
            for _ in 1..d {
                t = rem(&mul(&t, &t, p), f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            sub(&powmod(&a, &e, f, p), &[1], p)
        };
        let g = gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization of a nonzero polynomial into monic irreducibles
/// with multiplicities, sorted.
pub fn factor(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7472_6163_6566_6f72 ^ p);
    let mut out = Vec::new();
    for (g, m) in squarefree_factorization(f, p) {
        for (h, d) in distinct_degree(&g, p) {
            for q in equal_degree(&h, d, p, &mut rng) {
                out.push((q, m));
            }
        }
    }
    out.sort();
    out
}

/// Factor degrees and multiplicities, `(e, f)` pairs as in Dedekind-Kummer.
pub fn factor_shape(f: &[u64], p: u64) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = factor(f, p).into_iter().map(|(g, m)| (m, (g.len() - 1) as u32)).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prod(fs: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut r = vec![1u64];
        for (g, m) in fs {
            for _ in 0..*m {
                r = mul(&r, g, p);
            }
        }
        r
    }

    /// Irreducibility by brute force: no monic factor of degree <= n/2.
    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g = vec![0u64; d + 1];
                let mut c = code;
                for slot in g.iter_mut().take(d) {
                    *slot = c % p;
                    c /= p;
                }
                g[d] = 1;
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn cubic_mod_seven() {
        // x^3 - x - 1 = (x - 5)(x^2 + 5x + 3) mod 7
        let f = from_z(&crate::poly::zpoly(&[-1, -1, 0, 1]), 7);
        let fs = factor(&f, 7);
        assert_eq!(fs, vec![(vec![2, 1], 1), (vec![3, 5, 1], 1)]);
        let f23 = from_z(&crate::poly::zpoly(&[-1, -1, 0, 1]), 23);
        assert_eq!(factor_shape(&f23, 23), vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn inseparable_input() {
        // x^4 + 1 = (x + 1)^4 mod 2, and x^6 = (x^2)^3 style p-th powers mod 3
        assert_eq!(factor(&[1, 0, 0, 0, 1], 2), vec![(vec![1, 1], 4)]);
        let f = mul(&mul(&[1, 0, 0, 1], &[1, 0, 0, 1], 3), &[2, 1], 3);
        assert_eq!(factor(&f, 3), vec![(vec![1, 1], 6), (vec![2, 1], 1)]);
    }

    proptest! {
        #[test]
        fn factorization_is_complete_and_irreducible(
            pi in 0usize..5, coeffs in proptest::collection::vec(0u64..1000, 1..8)
        ) {
            let p = [2u64, 3, 5, 7, 13][pi];
            let mut f: FpPoly = coeffs.iter().map(|c| c % p).collect();
            f.push(1);
            let fs = factor(&f, p);
            prop_assert_eq!(prod(&fs, p), f);
            for (g, _) in &fs {
                prop_assert!(brute_irreducible(g, p));
            }
        }

        #[test]
        fn ext_gcd_identity(
            a in proptest::collection::vec(0u64..11, 1..6), b in proptest::collection::vec(0u64..11, 1..6)
        ) {
            let p = 11;
            let (g, s, t) = ext_gcd(&a, &b, p);
            prop_assume!(!g.is_empty());
            prop_assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), g);
        }
    }
}
