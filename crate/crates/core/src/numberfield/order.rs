//! Orders given by a rational basis in the power basis, and the Round 2
//! enlargement to the maximal order one prime at a time.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::mod_u64;
use crate::error::{Error, Result};
use crate::linalg::{hnf_lower, inverse_rat, left_kernel_mod_p, mulm, vec_mul_rat, IntMatrix, RatMatrix};
use crate::poly::ZPoly;

/// Structure constants: `table[i][j]` holds the coordinates of `w_i w_j`.
pub type MultTable = Vec<Vec<Vec<BigInt>>>;

const ROUND2_CAP: usize = 64;

/// Product of two power-basis vectors modulo the monic `f`.
pub fn mul_mod_poly(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> Vec<BigRational> {
    let n = f.len() - 1;
    let mut r = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    for k in (n..r.len()).rev() {
        let c = std::mem::take(&mut r[k]);
        if c.is_zero() {
            continue;
        }
        // x^k = -sum f_i x^(k-n+i)
        for (i, fi) in f.iter().enumerate().take(n) {
            r[k - n + i] -= &c * BigRational::from_integer(fi.clone());
        }
    }
    r.truncate(n);
    r
}

/// Integral structure constants of the basis, or a bad-basis error when the
/// lattice is not a ring containing 1.
pub fn mult_table(f: &ZPoly, basis: &RatMatrix) -> Result<MultTable> {
    let n = basis.len();
    let inv = inverse_rat(basis).ok_or_else(|| Error::BadBasis("basis matrix is singular".into()))?;
    let integral = |v: Vec<BigRational>| -> Option<Vec<BigInt>> {
        v.into_iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    };
    let mut one = vec![BigRational::zero(); n];
    one[0] = BigRational::one();
    if integral(vec_mul_rat(&one, &inv)).is_none() {
        return Err(Error::BadBasis("1 is not in the span of the basis".into()));
    }
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = mul_mod_poly(&basis[i], &basis[j], f);
            let coords = integral(vec_mul_rat(&prod, &inv))
                .ok_or_else(|| Error::BadBasis(format!("w{i} * w{j} leaves the lattice")))?;
            table[j][i] = coords.clone();
            table[i][j] = coords;
        }
    }
    Ok(table)
}

fn table_mod_p(table: &MultTable, p: u64) -> Vec<Vec<Vec<u64>>> {
    table.iter().map(|r| r.iter().map(|v| v.iter().map(|c| mod_u64(c, p)).collect()).collect()).collect()
}

fn mul_in(x: &[u64], y: &[u64], t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    let n = x.len();
    let mut r = vec![0u64; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let c = mulm(x[i], y[j], p);
            for (k, rk) in r.iter_mut().enumerate() {
                *rk = (*rk + mulm(c, t[i][j][k], p)) % p;
            }
        }
    }
    r
}

fn pow_in(x: &[u64], mut e: u128, t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    // square and multiply, starting from x itself so no unit element is needed
    let mut result = Vec::new();
    let mut base = x.to_vec();
    let mut have = false;
    while e > 0 {
        if e & 1 == 1 {
            result = if have { mul_in(&result, &base, t, p) } else { base.clone() };
            have = true;
        }
        e >>= 1;
        if e > 0 {
            base = mul_in(&base, &base, t, p);
        }
    }
    result
}

/// Lower-triangular HNF of a rational basis, rows as elements.
pub fn normalize_basis(rows: &RatMatrix) -> RatMatrix {
    let n = rows.len();
    let d = rows.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: IntMatrix = rows.iter().map(|r| r.iter().map(|c| (c * BigRational::from_integer(d.clone())).to_integer()).collect()).collect();
    let h = hnf_lower(&ints, n).expect("full rank");
    h.into_iter().map(|r| r.into_iter().map(|c| BigRational::new(c, d.clone())).collect()).collect()
}

/// The p-radical of the order as an integer lattice in order coordinates.
fn radical(table: &MultTable, p: u64) -> IntMatrix {
    let n = table.len();
    let t = table_mod_p(table, p);
    let mut q: u128 = p as u128;
    while q < n as u128 {
        q *= p as u128;
    }
    let frob: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = vec![0u64; n];
            e[i] = 1;
            pow_in(&e, q, &t, p)
        })
        .collect();
    let kernel = left_kernel_mod_p(&frob, p);
    let mut gens: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(if i == j { p } else { 0 })).collect())
        .collect();
    gens.extend(kernel.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()));
    hnf_lower(&gens, n).expect("contains pO")
}

/// One Round 2 step at `p`: the ring of multipliers of the p-radical,
/// in order coordinates, or `None` when the order is already p-maximal.
fn enlarge(table: &MultTable, p: u64) -> Option<RatMatrix> {
    let n = table.len();
    let rad = radical(table, p);
    let rad_rat: RatMatrix = crate::linalg::to_rat(&rad);
    let rad_inv = inverse_rat(&rad_rat).expect("full rank");
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n * n);
            for v in &rad {
                // w_i * v in order coordinates
                let mut w = vec![BigInt::zero(); n];
                for (l, vl) in v.iter().enumerate() {
                    if vl.is_zero() {
                        continue;
                    }
                    for (k, wk) in w.iter_mut().enumerate() {
                        *wk += vl * &table[i][l][k];
                    }
                }
                let wr: Vec<BigRational> = w.into_iter().map(BigRational::from_integer).collect();
                let y = vec_mul_rat(&wr, &rad_inv);
                row.extend(y.iter().map(|c| {
                    debug_assert!(c.is_integer(), "radical is an ideal");
                    mod_u64(&c.to_integer(), p)
                }));
            }
            row
        })
        .collect();
    let kernel = left_kernel_mod_p(&rows, p);
    if kernel.is_empty() {
        return None;
    }
    let mut gens: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(if i == j { p } else { 0 })).collect())
        .collect();
    gens.extend(kernel.into_iter().map(|v| v.into_iter().map(BigInt::from).collect()));
    let u = hnf_lower(&gens, n).expect("contains pO");
    let pr = BigRational::from_integer(BigInt::from(p));
    Some(u.into_iter().map(|r| r.into_iter().map(|c| BigRational::from_integer(c) / &pr).collect()).collect())
}

/// Whether the order spanned by `basis` is p-maximal.
pub fn is_p_maximal(f: &ZPoly, basis: &RatMatrix, p: u64) -> Result<bool> {
    let table = mult_table(f, basis)?;
    Ok(enlarge(&table, p).is_none())
}

/// Enlarges `basis` until it is p-maximal.
pub fn p_maximal(f: &ZPoly, basis: RatMatrix, p: u64) -> Result<RatMatrix> {
    let mut basis = basis;
    for _ in 0..ROUND2_CAP {
        let table = mult_table(f, &basis)?;
        match enlarge(&table, p) {
            None => return Ok(basis),
            Some(coords) => {
                let next = crate::linalg::mat_mul_rat(&coords, &basis);
                basis = normalize_basis(&next);
            }
        }
    }
    Err(Error::InternalLimit(format!("Round 2 at p = {p} did not stabilize")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::zpoly;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn identity(n: usize) -> RatMatrix {
        (0..n).map(|i| (0..n).map(|j| q((i == j) as i64, 1)).collect()).collect()
    }

    #[test]
    fn golden_ratio_order() {
        let f = zpoly(&[-5, 0, 1]);
        let b = p_maximal(&f, identity(2), 2).unwrap();
        assert_eq!(b, vec![vec![q(1, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]);
        assert!(is_p_maximal(&f, &b, 2).unwrap());
        assert!(!is_p_maximal(&f, &identity(2), 2).unwrap());
    }

    #[test]
    fn rejects_non_ring() {
        let f = zpoly(&[-5, 0, 1]);
        let b = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 2)]];
        assert!(matches!(mult_table(&f, &b), Err(Error::BadBasis(_))));
    }

    #[test]
    fn cube_root_of_ten() {
        // Z[10^(1/3)] has index 3 in the maximal order (10 = 1 mod 9)
        let f = zpoly(&[-10, 0, 0, 1]);
        let b = p_maximal(&f, identity(3), 3).unwrap();
        let det = crate::linalg::det_rat(&b);
        assert_eq!(det, q(1, 3));
        assert!(p_maximal(&f, identity(3), 2).unwrap() == identity(3));
    }
}
