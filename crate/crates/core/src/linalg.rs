//! Exact linear algebra over Z, Q and F_p for small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

/// Determinant by fraction-free Bareiss elimination.
pub fn det_int(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_rat(m: &RatMatrix) -> BigRational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix, or `None` if singular.
pub fn inverse_rat(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(piv, k);
        let inv = a[k][k].recip();
        for v in a[k].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul_rat(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigRational::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn mat_mul_int(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row vector times matrix.
pub fn vec_mul_rat(v: &[BigRational], m: &RatMatrix) -> Vec<BigRational> {
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(BigRational::zero(), |acc, (x, row)| acc + x * &row[j]))
        .collect()
}

pub fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Hermite normal form of the lattice spanned by the rows (assumed full rank
/// `n`). The result is lower triangular with positive diagonal and entries
/// left of the diagonal reduced into `[0, d_j)`; rows are basis vectors.
pub fn hnf_lower(rows: &IntMatrix, n: usize) -> Option<IntMatrix> {
    let mut work: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    // eliminate columns from the last to the first
    for col in (0..n).rev() {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for r in work.into_iter() {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    // combine p and r so that one has zero in `col`
                    let (g, x, y) = ext_gcd(&p[col], &r[col]);
                    let a = &p[col] / &g;
                    let b = &r[col] / &g;
                    let newp: Vec<BigInt> = p.iter().zip(&r).map(|(u, v)| &x * u + &y * v).collect();
                    let other: Vec<BigInt> = p.iter().zip(&r).map(|(u, v)| &b * u - &a * v).collect();
                    if other.iter().any(|v| !v.is_zero()) {
                        rest.push(other);
                    }
                    pivot = Some(newp);
                }
            }
        }
        let mut p = pivot?;
        if p[col].is_negative() {
            p.iter_mut().for_each(|v| *v = -v.clone());
        }
        basis[col] = p;
        work = rest;
    }
    // reduce entries left of the diagonal
    for i in 0..n {
        for j in (0..i).rev() {
            let d = basis[j][j].clone();
            let q = basis[i][j].div_floor(&d);
            if !q.is_zero() {
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(bj) {
                    *x -= &q * y;
                }
            }
        }
    }
    Some(basis)
}

/// Extended gcd with `g > 0` and `x*a + y*b = g`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Vectors `c` (mod p) with `sum_i c_i * rows[i] = 0`, as a basis of the
/// left kernel.
pub fn left_kernel_mod_p(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let width = rows[0].len();
    // augment with the identity and row-reduce
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<u64> = r.iter().map(|x| x % p).collect();
            v.extend((0..m).map(|j| (i == j) as u64));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m).find(|&i| a[i][col] != 0) else { continue };
        a.swap(piv, rank);
        let inv = inv_mod(a[rank][col], p);
        for v in a[rank].iter_mut() {
            *v = mulm(*v, inv, p);
        }
        for i in 0..m {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..width + m {
                    let t = mulm(f, a[rank][j], p);
                    a[i][j] = (a[i][j] + p - t) % p;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    a[rank..].iter().map(|r| r[width..].to_vec()).collect()
}

pub(crate) fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    debug_assert!(e.gcd.is_one());
    crate::arith::mod_u64(&e.x, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det_int(&im(&[&[3, 0, 2], &[0, 2, 3], &[2, 3, 2]])), BigInt::from(-23));
        assert_eq!(det_int(&im(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_int(&im(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(det_rat(&to_rat(&im(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]))), BigRational::from_integer((-5).into()));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = to_rat(&im(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]));
        let inv = inverse_rat(&m).unwrap();
        let id = mat_mul_rat(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id[i][j], if i == j { BigRational::one() } else { BigRational::zero() });
            }
        }
        assert!(inverse_rat(&to_rat(&im(&[&[1, 2], &[2, 4]]))).is_none());
    }

    #[test]
    fn hnf_of_half_integer_basis() {
        // lattice spanned by (2,0), (1,1), (0,2)
        let h = hnf_lower(&im(&[&[2, 0], &[1, 1], &[0, 2]]), 2).unwrap();
        assert_eq!(h, im(&[&[2, 0], &[1, 1]]));
        let h = hnf_lower(&im(&[&[4, 6], &[2, 3], &[0, 5]]), 2);
        // rank 2: (2,3),(0,5) → det 10
        let h = h.unwrap();
        assert_eq!(&h[0][0] * &h[1][1], BigInt::from(10));
    }

    #[test]
    fn kernel_mod_p() {
        let rows = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let k = left_kernel_mod_p(&rows, 5);
        assert_eq!(k.len(), 1);
        let c = &k[0];
        for col in 0..2 {
            let s: u64 = (0..3).map(|i| c[i] * rows[i][col]).sum();
            assert_eq!(s % 5, 0);
        }
    }
}
