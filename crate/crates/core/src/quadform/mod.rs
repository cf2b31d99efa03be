//! Integral and local quadratic forms.
//!
//! This module is the independent oracle of the crate: it works only from
//! Gram matrices and never looks at splitting data. Local equivalence is
//! decided with Jordan decompositions (canonical 2-adic symbols at 2) and
//! the global genus is the collection of those plus the real signature.

mod genus;
mod jordan;
mod reduce;
mod witness;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_int, IntMatrix};
use crate::padic::{hilbert_symbol, least_nonresidue, square_class, PrimeSpot};

pub use genus::{genus_equal, genus_symbol, GenusSymbol, LocalSymbol};
pub use jordan::{
    canonical_two_adic, diagonalize_local, jordan_decomposition, jordan_two_adic, local_symbol,
    JordanBlock, OddConstituent, TwoAdicConstituent,
};
pub use reduce::{reduce_form, reduced_witness_search, ReducedWitness};
pub use witness::{isometry_witness_search, transform};

/// Symmetric nonsingular integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    entries: IntMatrix,
}

impl GramMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty Gram matrix".into()));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if det_int(&entries).is_zero() {
            return Err(Error::SingularForm);
        }
        Ok(GramMatrix { entries })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Diagonal Gram matrix `<a_1, ..., a_n>`.
    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        Self::from_i64(
            &(0..n)
                .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect())
                .collect::<Vec<_>>(),
        )
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn det(&self) -> BigInt {
        det_int(&self.entries)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (n, m) = (self.dim(), other.dim());
        let mut e = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                e[i][j] = self.entries[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                e[n + i][n + j] = other.entries[i][j].clone();
            }
        }
        GramMatrix { entries: e }
    }

    pub fn scaled(&self, c: &BigInt) -> Result<GramMatrix> {
        GramMatrix::new(self.entries.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.entries.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }
}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// Diagonal form `<a_1, ..., a_n>` with an optional local context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    pub spot: Option<PrimeSpot>,
    pub entries: Vec<BigRational>,
}

impl DiagonalForm {
    pub fn new(spot: Option<PrimeSpot>, entries: Vec<BigRational>) -> Result<Self> {
        if entries.iter().any(|a| a.is_zero()) {
            return Err(Error::ZeroArgument);
        }
        if let Some(p) = spot.and_then(|s| s.prime()) {
            if entries.iter().any(|a| crate::padic::valuation_rat(a, p) < 0) {
                return Err(Error::OutOfRange(format!("entry is not a {p}-adic integer")));
            }
        }
        Ok(DiagonalForm { spot, entries })
    }

    pub fn from_i64(spot: Option<PrimeSpot>, entries: &[i64]) -> Result<Self> {
        Self::new(spot, entries.iter().map(|&a| BigRational::from_integer(a.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> BigRational {
        self.entries.iter().fold(BigRational::one(), |acc, a| acc * a)
    }

    /// Integer Gram matrix equivalent to this form over Q and over every
    /// Z_p at which the entry denominators are units (each entry is scaled
    /// by the square of its denominator).
    pub fn to_gram(&self) -> Result<GramMatrix> {
        let n = self.dim();
        let mut e = vec![vec![BigInt::zero(); n]; n];
        for (i, a) in self.entries.iter().enumerate() {
            e[i][i] = a.numer() * a.denom();
        }
        GramMatrix::new(e)
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Diagonalization over Q by symmetric elimination (congruence).
pub fn rational_diagonal(g: &GramMatrix) -> Result<Vec<BigRational>> {
    let n = g.dim();
    let mut m: Vec<Vec<BigRational>> = crate::linalg::to_rat(g.entries());
    let mut out = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let piv = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                // all diagonal entries vanish: e_i += e_j gives 2 a_ij on the diagonal
                let (i, j) = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !m[i][j].is_zero())
                    .ok_or(Error::SingularForm)?;
                add_basis_vector(&mut m, i, j, &BigRational::one());
                i
            }
        };
        let d = m[piv][piv].clone();
        active.retain(|&k| k != piv);
        for &k in &active {
            for &l in &active {
                let t = &m[k][piv] * &m[piv][l] / &d;
                m[k][l] -= t;
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// Congruence `e_i <- e_i + c e_j` on a symmetric matrix.
pub(crate) fn add_basis_vector(m: &mut [Vec<BigRational>], i: usize, j: usize, c: &BigRational) {
    let n = m.len();
    for k in 0..n {
        let t = c * &m[j][k];
        m[i][k] += t;
    }
    for k in 0..n {
        let t = c * &m[k][j];
        m[k][i] += t;
    }
}

/// Numbers of positive and negative eigenvalues, computed exactly.
pub fn signature(g: &GramMatrix) -> Result<(usize, usize)> {
    let d = rational_diagonal(g)?;
    let neg = d.iter().filter(|a| a.is_negative()).count();
    Ok((d.len() - neg, neg))
}

/// Hasse-Witt invariant `prod_{i<j} (a_i, a_j)_p`.
pub fn hasse_witt(d: &DiagonalForm, spot: PrimeSpot) -> Result<i8> {
    let mut c = 1i8;
    for i in 0..d.dim() {
        for j in i + 1..d.dim() {
            c *= hilbert_symbol(&d.entries[i], &d.entries[j], spot)?;
        }
    }
    Ok(c)
}

/// Parameters of the model form `<1,..,1,alpha> + p<1,..,1,beta>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    pub f: usize,
    pub n: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub p: u64,
}

fn check_unit(a: &BigRational, p: u64) -> Result<()> {
    if a.is_zero() || crate::padic::valuation_rat(a, p) != 0 {
        return Err(Error::NonUnit { value: a.to_string(), p: p as i64 });
    }
    Ok(())
}

/// `<1,...,1,alpha>` (f entries) followed by `p * <1,...,1,beta>` (n - f
/// entries). When `f = n` the scaled part is empty and `beta` is ignored.
pub fn model_form(
    f: usize,
    n: usize,
    alpha: &BigRational,
    beta: &BigRational,
    p: u64,
) -> Result<DiagonalForm> {
    let spot = PrimeSpot::finite(p)?;
    if p == 2 {
        return Err(Error::InvalidPrime(2));
    }
    if f == 0 || f > n {
        return Err(Error::OutOfRange(format!("need 0 < f <= n, got f = {f}, n = {n}")));
    }
    check_unit(alpha, p)?;
    if f < n {
        check_unit(beta, p)?;
    }
    let one = BigRational::one();
    let pr = BigRational::from_integer(BigInt::from(p));
    let mut e: Vec<BigRational> = vec![one.clone(); f - 1];
    e.push(alpha.clone());
    if f < n {
        e.extend(std::iter::repeat_n(pr.clone(), n - f - 1));
        e.push(&pr * beta);
    }
    DiagonalForm::new(Some(spot), e)
}

impl ModelParams {
    pub fn form(&self) -> Result<DiagonalForm> {
        model_form(self.f, self.n, &self.alpha, &self.beta, self.p)
    }
}

/// Z_p-equivalence of two model forms, decided by comparing `(alpha, p)_p`.
/// Requires `alpha_1 beta_1 = alpha_2 beta_2` modulo unit squares.
pub fn model_equivalent(m1: &ModelParams, m2: &ModelParams) -> Result<bool> {
    if m1.f != m2.f || m1.n != m2.n || m1.p != m2.p {
        return Err(Error::Hypothesis("model forms must share f, n and p".into()));
    }
    let p = m1.p;
    let spot = PrimeSpot::finite(p)?;
    for m in [m1, m2] {
        check_unit(&m.alpha, p)?;
        check_unit(&m.beta, p)?;
    }
    if m1.f < m1.n {
        let c1 = square_class(&(&m1.alpha * &m1.beta), spot)?;
        let c2 = square_class(&(&m2.alpha * &m2.beta), spot)?;
        if c1 != c2 {
            return Err(Error::Hypothesis(format!(
                "alpha*beta classes differ at {p} ({} vs {})",
                c1.rep, c2.rep
            )));
        }
    }
    let pr = BigRational::from_integer(BigInt::from(p));
    Ok(hilbert_symbol(&m1.alpha, &pr, spot)? == hilbert_symbol(&m2.alpha, &pr, spot)?)
}

/// Closed form of the Hasse-Witt invariant of a model form, with `k = n - f`:
/// `(alpha, p)^k (beta, p)^(k-1) (p, p)^(k(k-1)/2)`.
pub fn model_hasse_closed_form(m: &ModelParams) -> Result<i8> {
    let spot = PrimeSpot::finite(m.p)?;
    let pr = BigRational::from_integer(BigInt::from(m.p));
    let k = (m.n - m.f) as u32;
    let sa = hilbert_symbol(&m.alpha, &pr, spot)?.pow(k);
    let sb = if k == 0 { 1 } else { hilbert_symbol(&m.beta, &pr, spot)?.pow(k - 1) };
    let spp = hilbert_symbol(&pr, &pr, spot)?.pow(k * k.saturating_sub(1) / 2);
    Ok(sa * sb * spp)
}

/// `(p, alpha beta)^(k+1) (p, p)^k (alpha, p)` with `k = n - f`. It differs
/// from the true invariant by a factor depending only on `(n, f, p)`, so it
/// is only meaningful when comparing two models with the same shape.
pub fn model_hasse_shape_relative(m: &ModelParams) -> Result<i8> {
    let spot = PrimeSpot::finite(m.p)?;
    let pr = BigRational::from_integer(BigInt::from(m.p));
    let k = (m.n - m.f) as u32;
    let ab = &m.alpha * &m.beta;
    let s1 = hilbert_symbol(&pr, &ab, spot)?.pow(k + 1);
    let s2 = hilbert_symbol(&pr, &pr, spot)?.pow(k);
    let s3 = hilbert_symbol(&m.alpha, &pr, spot)?;
    Ok(s1 * s2 * s3)
}

/// `u_p` as a rational, for building model forms.
pub fn nonresidue_rat(p: u64) -> Result<BigRational> {
    Ok(BigRational::from_integer(least_nonresidue(PrimeSpot::finite(p)?).into()))
}
