//! Reduction of integral Gram matrices towards small entries.
//!
//! A greedy descent reaches a local minimum of the sum of squared entries;
//! in dimension at most 4 the neighbourhood of that minimum is then explored
//! by elementary moves and the smallest form found, normalised under signed
//! permutations, is returned. Isometric forms then frequently reduce to the
//! same matrix. The walk is capped, so in rank 4 isometric forms can still
//! end up at different local minima.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;

use super::GramMatrix;
use crate::error::{Error, Result};
use super::{isometry_witness_search, transform};
use crate::linalg::{inverse_rat, mat_mul_int, to_rat, IntMatrix};

/// Forms visited by the exploration step, at most.
const MAX_STATES: usize = 20_000;

type Mat = Vec<Vec<i128>>;

/// Local search for a Gram matrix with small entries: a basis vector `b_i`
/// is replaced by `b_i + sum c_j b_j` (small `c_j`) whenever that lowers the
/// sum of squared entries, until no such move helps. Returns `(R^T G R, R)`
/// with `R` unimodular. Isometric forms often reach the same local minimum,
/// which keeps witnesses between reduced forms short.
pub fn reduce_form(g: &GramMatrix) -> Result<(GramMatrix, IntMatrix)> {
    let (m, r) = descend(g)?;
    let (m, r) = if g.dim() <= 4 { explore(m, r) } else { (m, r) };
    let big = |v: Mat| -> IntMatrix { v.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect() };
    Ok((GramMatrix::new(big(m))?, big(r)))
}

/// An isometry found between reduced forms, and the same isometry between
/// the original forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWitness {
    pub reduced: IntMatrix,
    pub full: IntMatrix,
}

/// Reduces both forms and runs the bounded witness search between the
/// reduced forms; `full` satisfies `full^T G1 full = G2`.
pub fn reduced_witness_search(g1: &GramMatrix, g2: &GramMatrix, bound: u32) -> Result<Option<ReducedWitness>> {
    let (a, r1) = reduce_form(g1)?;
    let (b, r2) = reduce_form(g2)?;
    let Some(u) = isometry_witness_search(&a, &b, bound)? else { return Ok(None) };
    let inv = inverse_rat(&to_rat(&r2)).ok_or_else(|| Error::Consistency("singular reduction basis".into()))?;
    let inv: IntMatrix = inv
        .into_iter()
        .map(|row| row.into_iter().map(|v| if v.is_integer() { Ok(v.to_integer()) } else { Err(Error::Consistency("reduction basis not unimodular".into())) }).collect())
        .collect::<Result<_>>()?;
    let full = mat_mul_int(&mat_mul_int(&r1, &u), &inv);
    if transform(g1, &full)? != *g2 {
        return Err(Error::Consistency("mapped witness failed re-verification".into()));
    }
    Ok(Some(ReducedWitness { reduced: u, full }))
}

fn descend(g: &GramMatrix) -> Result<(Mat, Mat)> {
    let n = g.dim();
    let Some(m) = g.to_i64() else {
        return Err(Error::LimitExceeded("reduction needs entries below 2^63".into()));
    };
    let mut m: Vec<Vec<i128>> = m.into_iter().map(|row| row.into_iter().map(i128::from).collect()).collect();
    let mut r: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect();
    // neighbourhood radius: keep (2K+1)^(n-1) around a thousand
    let mut radius = 1i128;
    while n > 1 && (2 * radius + 3).pow(n as u32 - 1) <= 1000 {
        radius += 1;
    }
    let limit = 1i128 << 60;
    let mut cur = norm2(&m);
    loop {
        let mut best: Option<(i128, usize, Vec<i128>)> = None;
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let mut c = vec![0i128; n];
            c[i] = 1;
            let mut idx = vec![-radius; others.len()];
            loop {
                for (t, &j) in others.iter().enumerate() {
                    c[j] = idx[t];
                }
                if others.iter().any(|&j| c[j] != 0) {
                    let v = norm2_after(&m, i, &c);
                    if v < cur && best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                        best = Some((v, i, c.clone()));
                    }
                }
                let Some(t) = (0..idx.len()).find(|&t| idx[t] < radius) else { break };
                idx[t] += 1;
                for s in &mut idx[..t] {
                    *s = -radius;
                }
            }
        }
        let Some((v, i, c)) = best else { break };
        replace_column(&mut m, &mut r, i, &c);
        cur = v;
        if m.iter().flatten().any(|x| x.abs() > limit) {
            return Err(Error::LimitExceeded("reduction overflow".into()));
        }
    }
    Ok((m, r))
}

fn norm2(m: &[Vec<i128>]) -> i128 {
    m.iter().flatten().map(|v| v * v).sum()
}

fn column_image(m: &[Vec<i128>], i: usize, c: &[i128]) -> (Vec<i128>, i128) {
    let w: Vec<i128> = (0..m.len()).map(|l| (0..m.len()).map(|j| c[j] * m[j][l]).sum()).collect();
    let d = (0..m.len()).map(|l| c[l] * w[l]).sum();
    let _ = i;
    (w, d)
}

fn norm2_after(m: &[Vec<i128>], i: usize, c: &[i128]) -> i128 {
    let (w, d) = column_image(m, i, c);
    let mut s = norm2(m);
    for l in 0..m.len() {
        if l != i {
            s += 2 * (w[l] * w[l] - m[i][l] * m[i][l]);
        }
    }
    s + d * d - m[i][i] * m[i][i]
}

/// `b_i <- sum c_j b_j` with `c_i = 1`.
fn replace_column(m: &mut [Vec<i128>], r: &mut [Vec<i128>], i: usize, c: &[i128]) {
    let (w, d) = column_image(m, i, c);
    for l in 0..m.len() {
        m[i][l] = w[l];
        m[l][i] = w[l];
    }
    m[i][i] = d;
    for row in r.iter_mut() {
        row[i] = (0..c.len()).map(|j| c[j] * row[j]).sum();
    }
}


fn signed_perms(n: usize) -> Vec<(Vec<usize>, Vec<i128>)> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..n).filter(|i| !p.contains(i)).map(|i| [p.clone(), vec![i]].concat()).collect::<Vec<_>>())
            .collect();
    }
    let mut out = Vec::new();
    for p in perms {
        for mask in 0..1u32 << n {
            out.push((p.clone(), (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()));
        }
    }
    out
}

/// Index of the signed permutation giving the lexicographically least
/// `P^T M P`, together with that matrix (row-major).
fn normalise(m: &[i64], n: usize, group: &[(Vec<usize>, Vec<i64>)]) -> (Vec<i64>, usize) {
    let mut best = vec![0i64; n * n];
    let mut best_idx = 0;
    let mut cand = vec![0i64; n * n];
    for (gi, (p, s)) in group.iter().enumerate() {
        // 0: equal so far, 1: already smaller
        let mut state = if gi == 0 { 1 } else { 0 };
        let mut worse = false;
        for a in 0..n {
            for b in 0..n {
                let v = s[a] * s[b] * m[p[a] * n + p[b]];
                cand[a * n + b] = v;
                if state == 0 {
                    match v.cmp(&best[a * n + b]) {
                        std::cmp::Ordering::Less => state = 1,
                        std::cmp::Ordering::Greater => worse = true,
                        std::cmp::Ordering::Equal => {}
                    }
                }
                if worse {
                    break;
                }
            }
            if worse {
                break;
            }
        }
        if !worse && state == 1 {
            std::mem::swap(&mut best, &mut cand);
            best_idx = gi;
        }
    }
    (best, best_idx)
}

struct Node {
    key: Vec<i64>,
    parent: usize,
    step: (usize, usize, i64),
    perm: usize,
}

fn flat_norm(m: &[i64]) -> i128 {
    m.iter().map(|&v| v as i128 * v as i128).sum()
}

/// Breadth-first walk over forms reachable by `b_i += b_j`, `b_i -= b_j`
/// while the squared-entry sum stays within twice the best seen; returns the
/// least form (by that sum, then lexicographically) and its basis matrix.
fn explore(m: Mat, r: Mat) -> (Mat, Mat) {
    let n = m.len();
    let group: Vec<(Vec<usize>, Vec<i64>)> = signed_perms(n).into_iter().map(|(p, s)| (p, s.into_iter().map(|v| v as i64).collect())).collect();
    let Some(flat): Option<Vec<i64>> = m.iter().flatten().map(|&v| i64::try_from(v).ok().filter(|v| v.abs() < 1 << 28)).collect() else {
        return (m, r);
    };
    let (key, perm) = normalise(&flat, n, &group);
    let mut best = (flat_norm(&key), 0usize);
    let mut nodes = vec![Node { key: key.clone(), parent: usize::MAX, step: (0, 0, 0), perm }];
    let mut seen: std::collections::HashSet<Vec<i64>> = HashSet::from([key]);
    let mut queue = VecDeque::from([0usize]);
    let mut next = vec![0i64; n * n];
    while let Some(idx) = queue.pop_front() {
        if flat_norm(&nodes[idx].key) > 2 * best.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                for k in [1i64, -1] {
                    if i == j || nodes.len() >= MAX_STATES {
                        continue;
                    }
                    let cur = &nodes[idx].key;
                    next.copy_from_slice(cur);
                    for l in 0..n {
                        if l != i {
                            let v = cur[i * n + l] + k * cur[j * n + l];
                            next[i * n + l] = v;
                            next[l * n + i] = v;
                        }
                    }
                    next[i * n + i] = cur[i * n + i] + 2 * k * cur[i * n + j] + cur[j * n + j];
                    let v = flat_norm(&next);
                    if v > 2 * best.0 {
                        continue;
                    }
                    let (key, perm) = normalise(&next, n, &group);
                    if seen.contains(&key) {
                        continue;
                    }
                    seen.insert(key.clone());
                    if (v, &key) < (best.0, &nodes[best.1].key) {
                        best = (v, nodes.len());
                    }
                    nodes.push(Node { key, parent: idx, step: (i, j, k), perm });
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
    }
    // replay the basis changes along the path to the best form
    let mut path = Vec::new();
    let mut at = best.1;
    while at != usize::MAX {
        path.push(at);
        at = nodes[at].parent;
    }
    let mut basis = r;
    for &idx in path.iter().rev() {
        let node = &nodes[idx];
        if node.parent != usize::MAX {
            let (i, j, k) = node.step;
            for row in basis.iter_mut() {
                row[i] += k as i128 * row[j];
            }
        }
        let (p, s) = &group[node.perm];
        basis = basis.iter().map(|row| (0..n).map(|b| s[b] as i128 * row[p[b]]).collect()).collect();
    }
    let key = &nodes[best.1].key;
    ((0..n).map(|a| (0..n).map(|b| key[a * n + b] as i128).collect()).collect(), basis)
}
