use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::{local_symbol, signature, GramMatrix, OddConstituent, TwoAdicConstituent};
use crate::arith::factorize;
use crate::error::Result;

/// Local invariant at one finite prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum LocalSymbol {
    Odd(Vec<OddConstituent>),
    Two(Vec<TwoAdicConstituent>),
}

/// Signature plus canonical local symbols at every prime dividing `2 det`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GenusSymbol {
    pub dim: usize,
    #[serde(serialize_with = "crate::report::ser_big")]
    pub det: BigInt,
    pub signature: (usize, usize),
    pub locals: BTreeMap<u64, LocalSymbol>,
}

impl GenusSymbol {
    pub fn local(&self, p: u64) -> Option<&LocalSymbol> {
        self.locals.get(&p)
    }
}

pub fn genus_symbol(g: &GramMatrix) -> Result<GenusSymbol> {
    let det = g.det();
    let signature = signature(g)?;
    debug_assert_eq!(det.is_negative(), signature.1 % 2 == 1);
    let mut primes: Vec<u64> = factorize(&(BigInt::from(2) * &det))?.into_iter().map(|(p, _)| p).collect();
    primes.dedup();
    let locals = primes
        .into_iter()
        .map(|p| Ok((p, local_symbol(g, p)?)))
        .collect::<Result<_>>()?;
    Ok(GenusSymbol { dim: g.dim(), det, signature, locals })
}

/// Whether two forms lie in the same genus (equivalent over R and every Z_p).
pub fn genus_equal(a: &GramMatrix, b: &GramMatrix) -> Result<bool> {
    if a.dim() != b.dim() || a.det() != b.det() {
        return Ok(false);
    }
    Ok(genus_symbol(a)? == genus_symbol(b)?)
}

/// Sum of scale times dimension over the constituents at `p`; equals the
/// valuation of the determinant.
#[cfg(test)]
fn local_det_exponent(sym: &GenusSymbol, p: u64) -> u32 {
    match sym.local(p) {
        Some(LocalSymbol::Odd(c)) => c.iter().map(|x| x.scale * x.dim as u32).sum(),
        Some(LocalSymbol::Two(c)) => c.iter().map(|x| x.scale * x.dim as u32).sum(),
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::valuation;
    use crate::quadform::transform;

    fn d(e: &[i64]) -> GramMatrix {
        GramMatrix::diagonal(e).unwrap()
    }

    #[test]
    fn genus_examples() {
        let g = GramMatrix::from_i64(&[vec![3, 0, 2], vec![0, 2, 3], vec![2, 3, 2]]).unwrap();
        assert!(genus_equal(&g, &g).unwrap());
        assert!(!genus_equal(&d(&[1, 1, 1]), &d(&[1, 1, 2])).unwrap());
        assert!(!genus_equal(&d(&[2, 3]), &d(&[1, 6])).unwrap());
        let u: Vec<Vec<BigInt>> = [[1i64, 2, 0], [0, 1, 0], [1, -1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let g2 = transform(&g, &u).unwrap();
        assert_ne!(g, g2);
        assert!(genus_equal(&g, &g2).unwrap());
    }

    #[test]
    fn symbol_scales_account_for_det() {
        let g = GramMatrix::from_i64(&[vec![6, 3, 0], vec![3, 12, 9], vec![0, 9, 30]]).unwrap();
        let s = genus_symbol(&g).unwrap();
        for (&p, _) in &s.locals {
            assert_eq!(local_det_exponent(&s, p), valuation(&s.det, p));
        }
    }
}
