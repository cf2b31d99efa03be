//! Dense univariate polynomials over Z and Q, constant term first.
//!
//! Integer polynomials are `Vec<BigInt>`; the zero polynomial is the empty
//! vector. Arithmetic over F_p lives in [`fp`], factorization over Z in
//! [`zassenhaus`].

pub mod fp;
pub mod zassenhaus;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{det_int, RatMatrix};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub use zassenhaus::{factor_squarefree, is_irreducible};

pub fn zpoly(coeffs: &[i64]) -> ZPoly {
    let mut v: ZPoly = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    trim(&mut v);
    v
}

pub fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Degree, with `None` for the zero polynomial.
pub fn degree<T: Zero>(f: &[T]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn is_monic(f: &[BigInt]) -> bool {
    f.last().is_some_and(|c| c.is_one())
}

pub fn derivative(f: &[BigInt]) -> ZPoly {
    let mut d: ZPoly = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut d);
    d
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut r: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    trim(&mut r);
    r
}

pub fn eval(f: &[BigInt], x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// `x^3 - x - 1` style rendering in the variable `x`.
pub fn to_string(f: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        if !a.is_one() || i == 0 {
            out.push_str(&a.to_string());
        }
        match i {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `f(a + b y)` as a polynomial in `y`.
pub fn compose_linear(f: &[BigInt], a: &BigInt, b: &BigInt) -> ZPoly {
    let lin = vec![a.clone(), b.clone()];
    let mut r: ZPoly = Vec::new();
    for c in f.iter().rev() {
        r = mul(&r, &lin);
        if r.is_empty() {
            r.push(BigInt::zero());
        }
        r[0] += c;
    }
    trim(&mut r);
    r
}

/// Exact division by a monic divisor; `None` when the remainder is nonzero.
pub fn div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    debug_assert!(is_monic(b));
    let db = degree(b)?;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return r.is_empty().then(Vec::new);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    trim(&mut r);
    r.is_empty().then_some(q)
}

/// Resultant via the Sylvester determinant.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (Some(m), Some(n)) = (degree(f), degree(g)) else {
        return BigInt::zero();
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.iter().enumerate().take(m + 1) {
            s[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().enumerate().take(n + 1) {
            s[n + i][i + n - k] = c.clone();
        }
    }
    det_int(&s)
}

/// Discriminant of a monic polynomial, `(-1)^(n(n-1)/2) Res(f, f')`.
pub fn discriminant(f: &[BigInt]) -> Result<BigInt> {
    let n = degree(f).ok_or(Error::ZeroArgument)?;
    if !is_monic(f) {
        return Err(Error::OutOfRange("discriminant needs a monic polynomial".into()));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let r = resultant(f, &derivative(f));
    if r.is_zero() {
        return Err(Error::RepeatedRoot);
    }
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

fn to_q(f: &[BigInt]) -> QPoly {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let db = degree(b).expect("nonzero divisor");
    let lead = b[db].clone();
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            r[dr - db + j] -= &c * bj;
        }
        trim(&mut r);
    }
    r
}

/// Number of distinct real roots, by a Sturm sequence over Q.
pub fn count_real_roots(f: &[BigInt]) -> Result<usize> {
    let n = degree(f).ok_or(Error::ZeroArgument)?;
    if n == 0 {
        return Ok(0);
    }
    let mut seq: Vec<QPoly> = vec![to_q(f), to_q(&derivative(f))];
    loop {
        let k = seq.len();
        let r = rem_q(&seq[k - 2], &seq[k - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count();
    let at_pos: Vec<bool> = seq.iter().map(|p| p.last().unwrap().is_positive()).collect();
    let at_neg: Vec<bool> = seq
        .iter()
        .map(|p| {
            let d = p.len() - 1;
            p[d].is_positive() == (d % 2 == 0)
        })
        .collect();
    Ok(changes(at_neg) - changes(at_pos))
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier.
pub fn charpoly(a: &RatMatrix) -> QPoly {
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = crate::linalg::mat_mul_rat(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = crate::linalg::mat_mul_rat(a, &m);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Integer polynomial from rational coefficients that must be integral.
pub fn q_to_z(f: &[BigRational]) -> Option<ZPoly> {
    f.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

/// Newton power sums `s_0 .. s_{count-1}` of the roots of a monic polynomial.
pub fn power_sums(f: &[BigInt], count: usize) -> Vec<BigInt> {
    let n = f.len() - 1;
    // s_k + a_{n-1} s_{k-1} + ... = 0, with k a_{n-k} in place of s_0 terms
    let mut s = Vec::with_capacity(count);
    for k in 0..count {
        if k == 0 {
            s.push(BigInt::from(n));
            continue;
        }
        let mut v = BigInt::zero();
        for i in 1..=(k - 1).min(n) {
            v -= &f[n - i] * &s[k - i];
        }
        if k <= n {
            v -= &f[n - k] * BigInt::from(k);
        }
        s.push(v);
    }
    s
}

/// Lagrange interpolation through `(x_i, y_i)` with distinct integer nodes.
pub fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> QPoly {
    let n = xs.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let mut basis: QPoly = vec![BigRational::one()];
        let mut denom = BigInt::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            // basis *= (x - x_j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRational::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = BigRational::new(ys[i].clone(), denom);
        for (k, c) in basis.into_iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::to_rat;

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&zpoly(&[-1, -1, 0, 1])).unwrap(), BigInt::from(-23));
        assert_eq!(discriminant(&zpoly(&[1, -3, 0, 1])).unwrap(), BigInt::from(81));
        assert_eq!(discriminant(&zpoly(&[-5, 0, 1])).unwrap(), BigInt::from(20));
        assert_eq!(discriminant(&zpoly(&[1, 0, 0, 0, 1])).unwrap(), BigInt::from(256));
        assert_eq!(discriminant(&zpoly(&[1, 2, 1])), Err(Error::RepeatedRoot));
    }

    #[test]
    fn discriminant_matches_cubic_formula() {
        for a in -6i64..6 {
            for b in -6i64..6 {
                let d = -4 * a * a * a - 27 * b * b;
                let got = discriminant(&zpoly(&[b, a, 0, 1]));
                if d == 0 {
                    assert_eq!(got, Err(Error::RepeatedRoot));
                } else {
                    assert_eq!(got.unwrap(), BigInt::from(d));
                }
            }
        }
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&zpoly(&[-1, -1, 0, 1])).unwrap(), 1);
        assert_eq!(count_real_roots(&zpoly(&[1, -3, 0, 1])).unwrap(), 3);
        assert_eq!(count_real_roots(&zpoly(&[1, 0, 0, 0, 1])).unwrap(), 0);
        // (x-1)(x-2)(x-3)(x^2+1)
        let f = mul(&mul(&zpoly(&[-1, 1]), &zpoly(&[-2, 1])), &mul(&zpoly(&[-3, 1]), &zpoly(&[1, 0, 1])));
        assert_eq!(count_real_roots(&f).unwrap(), 3);
    }

    #[test]
    fn power_sums_cubic() {
        let s = power_sums(&zpoly(&[-1, -1, 0, 1]), 5);
        assert_eq!(s, vec![3, 0, 2, 3, 2].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x^3 - x - 1 (acting on rows)
        let c = to_rat(&vec![
            vec![0.into(), 1.into(), 0.into()],
            vec![0.into(), 0.into(), 1.into()],
            vec![1.into(), 1.into(), 0.into()],
        ]);
        assert_eq!(q_to_z(&charpoly(&c)).unwrap(), zpoly(&[-1, -1, 0, 1]));
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = zpoly(&[3, -1, 0, 2, 5]);
        let xs: Vec<BigInt> = (0..5).map(BigInt::from).collect();
        let ys: Vec<BigInt> = xs.iter().map(|x| eval(&f, x)).collect();
        assert_eq!(q_to_z(&interpolate(&xs, &ys)).unwrap(), f);
    }

    #[test]
    fn exact_division() {
        let g = zpoly(&[1, 1]);
        let h = zpoly(&[-2, 0, 1]);
        let f = mul(&g, &h);
        assert_eq!(div_exact_monic(&f, &h).unwrap(), g);
        assert!(div_exact_monic(&f, &zpoly(&[3, 1])).is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(to_string(&zpoly(&[-1, -1, 0, 1])), "x^3-x-1");
        assert_eq!(to_string(&zpoly(&[19, -3, 0, 1])), "x^3-3x+19");
        assert_eq!(to_string(&zpoly(&[0, 2])), "2x");
        assert_eq!(to_string(&zpoly(&[-1])), "-1");
    }

    #[test]
    fn linear_composition() {
        // (1 - 2y)^2 + 3 = 4y^2 - 4y + 4
        let f = zpoly(&[3, 0, 1]);
        assert_eq!(compose_linear(&f, &BigInt::from(1), &BigInt::from(-2)), zpoly(&[4, -4, 4]));
    }
}
