use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{add_basis_vector, DiagonalForm, GramMatrix, LocalSymbol};
use crate::arith::{is_prime, mod_u64};
use crate::error::{Error, Result};
use crate::linalg::to_rat;
use crate::padic::{jacobi_symbol, square_class, square_class_integer, valuation_rat, PrimeSpot, SquareClass};

/// One `p^k`-modular constituent of a Jordan decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JordanBlock {
    pub scale: u32,
    pub dim: usize,
    pub det_class: SquareClass,
    /// `(odd, oddity)` at p = 2: type I/II and the trace of the odd part mod 8.
    pub two_adic: Option<(bool, u8)>,
}

/// Constituent of the odd-p genus symbol: `q^(eps * dim)` with `q = p^scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OddConstituent {
    pub scale: u32,
    pub dim: usize,
    pub eps: i8,
}

/// Constituent of the canonical 2-adic symbol. After canonicalization the
/// oddity of a compartment is carried by its first constituent and every
/// other constituent of the compartment has oddity 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoAdicConstituent {
    pub scale: u32,
    pub dim: usize,
    pub sign: i8,
    pub odd: bool,
    pub oddity: u8,
}

/// Orthogonal summand produced by local elimination.
#[derive(Debug, Clone)]
pub(crate) enum Piece {
    /// `p^scale * unit`
    One { scale: u32, unit: BigRational },
    /// `[[a, b], [b, c]]` with `v(b) = scale` and `v(a), v(c) > scale` (p = 2 only)
    Two { scale: u32, a: BigRational, b: BigRational, c: BigRational },
}

/// Splits the form over Z_p into 1x1 (and, at p = 2, 2x2) pieces by
/// congruence transformations whose coefficients are p-adic integers.
pub(crate) fn local_pieces(g: &GramMatrix, p: u64) -> Result<Vec<Piece>> {
    if !is_prime(p as u128) {
        return Err(Error::InvalidPrime(p as i128));
    }
    let mut m = to_rat(g.entries());
    let mut active: Vec<usize> = (0..g.dim()).collect();
    let mut pieces = Vec::new();
    while !active.is_empty() {
        let mut min: Option<i64> = None;
        for &i in &active {
            for &j in &active {
                if !m[i][j].is_zero() {
                    let v = valuation_rat(&m[i][j], p);
                    min = Some(min.map_or(v, |x| x.min(v)));
                }
            }
        }
        let min = min.ok_or(Error::SingularForm)?;
        let diag = active
            .iter()
            .copied()
            .find(|&i| !m[i][i].is_zero() && valuation_rat(&m[i][i], p) == min);
        if let Some(i) = diag {
            let d = m[i][i].clone();
            active.retain(|&k| k != i);
            for &k in &active {
                if m[k][i].is_zero() {
                    continue;
                }
                for &l in &active {
                    let t = &m[k][i] * &m[i][l] / &d;
                    m[k][l] -= t;
                }
            }
            let scale = u32::try_from(min).map_err(|_| Error::Consistency("non-integral form".into()))?;
            let unit = d / BigRational::from_integer(BigInt::from(p).pow(scale));
            pieces.push(Piece::One { scale, unit });
            continue;
        }
        let (i, j) = active
            .iter()
            .flat_map(|&i| active.iter().map(move |&j| (i, j)))
            .find(|&(i, j)| i != j && !m[i][j].is_zero() && valuation_rat(&m[i][j], p) == min)
            .expect("minimum is attained");
        if p != 2 {
            // the new diagonal a_ii + 2 a_ij + a_jj has valuation exactly `min`
            add_basis_vector(&mut m, i, j, &BigRational::one());
            continue;
        }
        let (a, b, c) = (m[i][i].clone(), m[i][j].clone(), m[j][j].clone());
        let det = &a * &c - &b * &b;
        active.retain(|&k| k != i && k != j);
        for &k in &active {
            for &l in &active {
                let t = (&m[k][i] * (&c * &m[i][l] - &b * &m[j][l])
                    + &m[k][j] * (&a * &m[j][l] - &b * &m[i][l]))
                    / &det;
                m[k][l] -= t;
            }
        }
        let scale = u32::try_from(min).map_err(|_| Error::Consistency("non-integral form".into()))?;
        pieces.push(Piece::Two { scale, a, b, c });
    }
    Ok(pieces)
}

/// Diagonal form Z_p-equivalent to `g` at an odd prime; entries are
/// integers `p^k u` with `u` prime to p, in non-decreasing scale order.
pub fn diagonalize_local(g: &GramMatrix, p: u64) -> Result<DiagonalForm> {
    if p == 2 {
        return Err(Error::InvalidPrime(2));
    }
    let spot = PrimeSpot::finite(p)?;
    let entries = local_pieces(g, p)?
        .into_iter()
        .map(|piece| match piece {
            Piece::One { scale, unit } => {
                let u = square_class_integer(&unit);
                BigRational::from_integer(u * BigInt::from(p).pow(scale))
            }
            Piece::Two { .. } => unreachable!("2x2 pieces only occur at p = 2"),
        })
        .collect();
    DiagonalForm::new(Some(spot), entries)
}

/// Jordan constituents grouped by scale, with det classes and (at 2) type
/// and oddity. Not canonical at p = 2; see [`canonical_two_adic`].
pub fn jordan_decomposition(g: &GramMatrix, p: u64) -> Result<Vec<JordanBlock>> {
    let spot = PrimeSpot::finite(p)?;
    #[derive(Default)]
    struct Acc {
        dim: usize,
        det: BigInt,
        odd: bool,
        oddity: u64,
    }
    let mut by_scale: BTreeMap<u32, Acc> = BTreeMap::new();
    for piece in local_pieces(g, p)? {
        match piece {
            Piece::One { scale, unit } => {
                let u = square_class_integer(&unit);
                let e = by_scale.entry(scale).or_insert_with(|| Acc { det: BigInt::one(), ..Default::default() });
                e.dim += 1;
                e.det *= &u;
                e.odd = true;
                if p == 2 {
                    e.oddity += mod_u64(&u, 8);
                }
            }
            Piece::Two { scale, a, b, c } => {
                let d = (&a * &c - &b * &b) / BigRational::from_integer(BigInt::from(4u32).pow(scale));
                let e = by_scale.entry(scale).or_insert_with(|| Acc { det: BigInt::one(), ..Default::default() });
                e.dim += 2;
                e.det *= square_class_integer(&d);
            }
        }
    }
    by_scale
        .into_iter()
        .map(|(scale, acc)| {
            let det_class = square_class(&BigRational::from_integer(acc.det), spot)?;
            Ok(JordanBlock {
                scale,
                dim: acc.dim,
                det_class,
                two_adic: (p == 2).then_some((acc.odd, (acc.oddity % 8) as u8)),
            })
        })
        .collect()
}

/// Canonical 2-adic symbol: oddity fusion over compartments, then sign
/// walking within trains so that only the first sign of a train may be -1.
pub fn canonical_two_adic(blocks: &[JordanBlock]) -> Vec<TwoAdicConstituent> {
    let mut sym: Vec<TwoAdicConstituent> = blocks
        .iter()
        .map(|b| {
            let (odd, oddity) = b.two_adic.expect("2-adic block");
            let sign = if matches!(b.det_class.rep, 1 | 7) { 1 } else { -1 };
            TwoAdicConstituent { scale: b.scale, dim: b.dim, sign, odd, oddity: if odd { oddity } else { 0 } }
        })
        .collect();
    let r = sym.len();

    // compartments: maximal runs of consecutive scales, all of type I
    let mut compartments: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < r {
        if sym[i].odd {
            let mut c = vec![i];
            while i + 1 < r && sym[i + 1].odd && sym[i + 1].scale == sym[i].scale + 1 {
                i += 1;
                c.push(i);
            }
            compartments.push(c);
        }
        i += 1;
    }
    for c in &compartments {
        let total: u32 = c.iter().map(|&k| sym[k].oddity as u32).sum();
        for &k in c {
            sym[k].oddity = 0;
        }
        sym[c[0]].oddity = (total % 8) as u8;
    }

    // trains: broken wherever two adjacent scales (counting empty ones,
    // which are even) are both of type II
    let mut trains: Vec<Vec<usize>> = Vec::new();
    if r > 0 {
        let mut cur = vec![0];
        for k in 1..r {
            let (prev, here) = (&sym[k - 1], &sym[k]);
            let gap = here.scale - prev.scale;
            let breaks = gap > 2 || (gap == 2 && !(prev.odd && here.odd)) || (gap == 1 && !prev.odd && !here.odd);
            if breaks {
                trains.push(std::mem::take(&mut cur));
            }
            cur.push(k);
        }
        trains.push(cur);
    }
    for train in &trains {
        for &t in train.iter().skip(1).rev() {
            if sym[t].sign == -1 {
                sym[t].sign = 1;
                sym[t - 1].sign = -sym[t - 1].sign;
                for c in &compartments {
                    if c.contains(&t) || c.contains(&(t - 1)) {
                        sym[c[0]].oddity = (sym[c[0]].oddity + 4) % 8;
                    }
                }
            }
        }
    }
    sym
}

/// Canonical 2-adic Jordan symbol of the form.
pub fn jordan_two_adic(g: &GramMatrix) -> Result<Vec<TwoAdicConstituent>> {
    Ok(canonical_two_adic(&jordan_decomposition(g, 2)?))
}

/// Complete Z_p-equivalence invariant at a finite prime.
pub fn local_symbol(g: &GramMatrix, p: u64) -> Result<LocalSymbol> {
    if p == 2 {
        return Ok(LocalSymbol::Two(jordan_two_adic(g)?));
    }
    let blocks = jordan_decomposition(g, p)?;
    Ok(LocalSymbol::Odd(
        blocks
            .into_iter()
            .map(|b| OddConstituent {
                scale: b.scale,
                dim: b.dim,
                eps: jacobi_symbol(&BigInt::from(b.det_class.rep), p).expect("odd p"),
            })
            .collect(),
    ))
}
