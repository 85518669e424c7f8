//! Multigraded Hilbert polynomials in the binomial basis
//! `Π_i C(u_i + ℓ_i, ℓ_i)`, built by inclusion–exclusion over the components
//! `P^{m_1} × ... × P^{m_n}`, `m ∈ M(p)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::degrees::{DegreeVector, MultidegreeSupport};

/// Largest support for which the naive subset sum is run.
pub const NAIVE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("empty support")]
    EmptySupport,
    #[error("total degree {found} differs from the expected {expected}")]
    DegreeMismatch { found: usize, expected: usize },
    #[error("support of size {0} is too large for naive enumeration")]
    TooLarge(usize),
    #[error("vector lengths differ")]
    LengthMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinomialTerm {
    pub coeff: i64,
    pub ell: DegreeVector,
}

/// Canonical form: distinct `ell`, nonzero coefficients, sorted by `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiHilbertPoly {
    n: usize,
    terms: BTreeMap<DegreeVector, i64>,
}

impl MultiHilbertPoly {
    pub fn zero(n: usize) -> Self {
        MultiHilbertPoly { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (DegreeVector, i64)>) -> Result<Self, HilbertError> {
        let mut p = MultiHilbertPoly::zero(n);
        for (ell, c) in terms {
            if ell.len() != n {
                return Err(HilbertError::LengthMismatch);
            }
            p.add(ell, c);
        }
        Ok(p)
    }

    fn add(&mut self, ell: DegreeVector, c: i64) {
        let e = self.terms.entry(ell.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&ell);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> Vec<BinomialTerm> {
        self.terms.iter().map(|(ell, &coeff)| BinomialTerm { coeff, ell: ell.clone() }).collect()
    }

    pub fn coeff(&self, ell: &[usize]) -> i64 {
        self.terms.get(ell).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &MultiHilbertPoly) -> MultiHilbertPoly {
        let mut out = self.clone();
        for (ell, &c) in &other.terms {
            out.add(ell.clone(), -c);
        }
        out
    }

    pub fn plus(&self, other: &MultiHilbertPoly) -> MultiHilbertPoly {
        let mut out = self.clone();
        for (ell, &c) in &other.terms {
            out.add(ell.clone(), c);
        }
        out
    }
}

impl fmt::Display for MultiHilbertPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (ell, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k == 0 { "" } else { "+" };
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if k > 0 {
                f.write_str(" ")?;
            }
            let factors: Vec<String> =
                ell.iter().enumerate().filter(|(_, &l)| l > 0).map(|(i, &l)| format!("binom(u{}+{l},{l})", i + 1)).collect();
            let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            if c.abs() == 1 {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{body}", c.abs())?;
            }
        }
        Ok(())
    }
}

fn componentwise_min(a: &[usize], b: &[usize]) -> DegreeVector {
    a.iter().zip(b).map(|(x, y)| *x.min(y)).collect()
}

/// `Σ_{∅≠S⊆M(p)} (-1)^{|S|-1} Π_i C(u_i + min_S m_i, min_S m_i)`, collapsed by
/// carrying the signed multiset of running minima one component at a time.
pub fn hilbert_polynomial(support: &MultidegreeSupport) -> Result<MultiHilbertPoly, HilbertError> {
    hilbert_polynomial_of(support.support.iter())
}

pub fn hilbert_polynomial_of<'a>(components: impl IntoIterator<Item = &'a DegreeVector>) -> Result<MultiHilbertPoly, HilbertError> {
    let comps: Vec<&DegreeVector> = components.into_iter().collect();
    let Some(first) = comps.first() else { return Err(HilbertError::EmptySupport) };
    let n = first.len();
    let mut acc = MultiHilbertPoly::zero(n);
    for m in comps {
        if m.len() != n {
            return Err(HilbertError::LengthMismatch);
        }
        let mut next = acc.clone();
        next.add(m.clone(), 1);
        for (v, &c) in &acc.terms {
            next.add(componentwise_min(v, m), -c);
        }
        acc = next;
    }
    Ok(acc)
}

/// Direct sum over all nonempty subsets; only for small supports.
pub fn hilbert_polynomial_naive(support: &MultidegreeSupport) -> Result<MultiHilbertPoly, HilbertError> {
    let comps: Vec<&DegreeVector> = support.support.iter().collect();
    let k = comps.len();
    if k == 0 {
        return Err(HilbertError::EmptySupport);
    }
    if k > NAIVE_LIMIT {
        return Err(HilbertError::TooLarge(k));
    }
    let n = comps[0].len();
    let mut out = MultiHilbertPoly::zero(n);
    for s in 1u32..1 << k {
        let mut ell = vec![usize::MAX; n];
        for (_, m) in comps.iter().enumerate().filter(|(j, _)| s >> j & 1 == 1) {
            ell = componentwise_min(&ell, m);
        }
        let sign = if s.count_ones() % 2 == 1 { 1 } else { -1 };
        out.add(ell, sign);
    }
    Ok(out)
}

/// `Σ coeff · Π C(u_i + ℓ_i, ℓ_i)`.
pub fn evaluate(poly: &MultiHilbertPoly, u: &[usize]) -> BigInt {
    assert_eq!(u.len(), poly.n, "evaluation point has the wrong length");
    poly.terms
        .iter()
        .map(|(ell, &c)| {
            let prod: BigInt = ell.iter().zip(u).map(|(&l, &x)| binomial(BigInt::from(x + l), BigInt::from(l))).product();
            prod * c
        })
        .sum()
}

type RatPoly = BTreeMap<DegreeVector, BigRational>;

fn poly_mul(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut out = RatPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: DegreeVector = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `C(u_i + ℓ, ℓ) = Π_{k=1}^{ℓ} (u_i + k) / k` as a polynomial in `u_1..u_n`.
fn binomial_expansion(n: usize, i: usize, ell: usize) -> RatPoly {
    let unit = vec![0; n];
    let mut acc = RatPoly::from([(unit.clone(), BigRational::one())]);
    for k in 1..=ell {
        let kq = BigRational::from_integer(BigInt::from(k));
        let mut lin = unit.clone();
        lin[i] = 1;
        let factor = RatPoly::from([(lin, BigRational::one() / &kq), (unit.clone(), BigRational::one())]);
        acc = poly_mul(&acc, &factor);
    }
    acc
}

/// Every monomial coefficient of the polynomial in the power basis.
pub fn expand(poly: &MultiHilbertPoly) -> BTreeMap<DegreeVector, BigRational> {
    let n = poly.n;
    let mut out = RatPoly::new();
    for (ell, &c) in &poly.terms {
        let mut term = RatPoly::from([(vec![0; n], BigRational::from_integer(BigInt::from(c)))]);
        for (i, &l) in ell.iter().enumerate() {
            term = poly_mul(&term, &binomial_expansion(n, i, l));
        }
        for (e, v) in term {
            *out.entry(e).or_insert_with(BigRational::zero) += v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Top-degree coefficients scaled by `Π m_i!`; nonzero entries only.
pub fn leading_multidegree(poly: &MultiHilbertPoly, p: usize) -> Result<BTreeMap<DegreeVector, BigRational>, HilbertError> {
    let full = expand(poly);
    let top = full.keys().map(|e| e.iter().sum::<usize>()).max().unwrap_or(0);
    if top != p {
        return Err(HilbertError::DegreeMismatch { found: top, expected: p });
    }
    Ok(full
        .into_iter()
        .filter(|(e, _)| e.iter().sum::<usize>() == p)
        .map(|(e, c)| {
            let fact: BigInt = e.iter().map(|&m| (1..=m).map(BigInt::from).product::<BigInt>()).product();
            let scaled = c * BigRational::from_integer(fact);
            (e, scaled)
        })
        .collect())
}

/// Whether `leading_multidegree` is exactly the indicator of `support`.
pub fn is_indicator(lead: &BTreeMap<DegreeVector, BigRational>, support: &MultidegreeSupport) -> bool {
    lead.len() == support.support.len()
        && lead.iter().all(|(e, c)| c.is_one() && support.support.contains(e))
        && !lead.values().any(|c| c.is_negative())
}

/// Every nonzero value of the multidegree equals one.
pub fn is_multiplicity_free(lead: &BTreeMap<DegreeVector, BigRational>) -> bool {
    lead.values().all(|c| c.is_zero() || c.is_one())
}
