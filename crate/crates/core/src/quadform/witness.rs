//! Bounded search for explicit integral isometries.
//!
//! Columns of `U` are chosen one at a time among box vectors whose norm
//! matches the target diagonal entry, pruned by the inner products with the
//! columns already placed. A `None` result proves nothing.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::GramMatrix;
use crate::error::{Error, Result};
use crate::linalg::{det_int, mat_mul_int, transpose, IntMatrix};

/// `U^T G U`.
pub fn transform(g: &GramMatrix, u: &IntMatrix) -> Result<GramMatrix> {
    let ut = transpose(u);
    GramMatrix::new(mat_mul_int(&mat_mul_int(&ut, g.entries()), u))
}

fn bilinear(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for i in 0..x.len() {
        if x[i] == 0 {
            continue;
        }
        let mut row = 0i128;
        for j in 0..y.len() {
            row += g[i][j] as i128 * y[j] as i128;
        }
        s += x[i] as i128 * row;
    }
    s
}

/// Finds unimodular `U` with entries in `[-bound, bound]` and `U^T G1 U = G2`.
pub fn isometry_witness_search(g1: &GramMatrix, g2: &GramMatrix, bound: u32) -> Result<Option<IntMatrix>> {
    let n = g1.dim();
    if g2.dim() != n {
        return Err(Error::DimensionMismatch(format!("{n} vs {}", g2.dim())));
    }
    if g1 == g2 {
        let id = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        return Ok(Some(id));
    }
    if g1.det() != g2.det() {
        return Ok(None);
    }
    let (Some(a), Some(b)) = (g1.to_i64(), g2.to_i64()) else {
        return Err(Error::LimitExceeded("witness search needs entries below 2^63".into()));
    };
    let bound = bound as i64;
    let side = (2 * bound + 1) as u64;
    let total = side.checked_pow(n as u32).filter(|&t| t <= 50_000_000).ok_or_else(|| {
        Error::LimitExceeded(format!("search box ({side})^{n} too large"))
    })?;

    // bucket box vectors by norm, keeping only norms that occur in G2
    let wanted: std::collections::HashSet<i128> = (0..n).map(|i| b[i][i] as i128).collect();
    let mut by_norm: HashMap<i128, Vec<Vec<i64>>> = HashMap::new();
    let mut x = vec![-bound; n];
    for _ in 0..total {
        let q = bilinear(&a, &x, &x);
        if wanted.contains(&q) && x.iter().any(|&v| v != 0) {
            by_norm.entry(q).or_default().push(x.clone());
        }
        for k in 0..n {
            if x[k] < bound {
                x[k] += 1;
                break;
            }
            x[k] = -bound;
        }
    }

    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(n);
    if dfs(&a, &b, &by_norm, &mut cols) {
        let u: IntMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from(cols[j][i])).collect()).collect();
        // re-verify before returning
        if transform(g1, &u)? != *g2 || det_int(&u).abs() != BigInt::from(1) {
            return Err(Error::Consistency("witness failed re-verification".into()));
        }
        return Ok(Some(u));
    }
    Ok(None)
}

fn dfs(a: &[Vec<i64>], b: &[Vec<i64>], by_norm: &HashMap<i128, Vec<Vec<i64>>>, cols: &mut Vec<Vec<i64>>) -> bool {
    let n = a.len();
    let j = cols.len();
    if j == n {
        let m: IntMatrix = cols.iter().map(|c| c.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let d = det_int(&m);
        return !d.is_zero() && d.abs() == BigInt::from(1);
    }
    let Some(cands) = by_norm.get(&(b[j][j] as i128)) else { return false };
    for x in cands {
        if (0..j).all(|i| bilinear(a, &cols[i], x) == b[i][j] as i128) {
            cols.push(x.clone());
            if dfs(a, b, by_norm, cols) {
                return true;
            }
            cols.pop();
        }
    }
    false
}
