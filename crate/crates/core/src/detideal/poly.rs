//! Sparse polynomials over a [`Scalar`] field in the block variables, ordered lexicographically.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldSpec, Scalar};
use crate::monomial::{BlockLayout, BlockVar};

/// Lex order on the block variables.
///
/// Blocks with a larger index are more significant, and inside a block
/// `x_{i,1} ≻ x_{i,2} ≻ ...`. Exponent vectors are stored in significance
/// order, so comparing them as sequences is the term order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexOrder {
    layout: BlockLayout,
    /// `slot[g]` is the significance position of global variable `g` (0 = largest).
    slot: Vec<usize>,
    /// Inverse of `slot`.
    var_at: Vec<usize>,
}

impl LexOrder {
    pub fn new(block_sizes: Vec<usize>) -> Self {
        let layout = BlockLayout::new(block_sizes);
        let mut var_at = Vec::with_capacity(layout.num_vars());
        for block in (0..layout.n()).rev() {
            for index in 1..=layout.size(block) {
                var_at.push(layout.global(BlockVar { block, index }));
            }
        }
        let mut slot = vec![0; var_at.len()];
        for (s, &g) in var_at.iter().enumerate() {
            slot[g] = s;
        }
        LexOrder { layout, slot, var_at }
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn num_vars(&self) -> usize {
        self.var_at.len()
    }

    pub fn slot_of(&self, v: BlockVar) -> usize {
        self.slot[self.layout.global(v)]
    }

    pub fn var_at(&self, slot: usize) -> BlockVar {
        self.layout.var(self.var_at[slot])
    }

    pub fn monomial(&self, vars: &[(BlockVar, u32)]) -> Monomial {
        let mut e = vec![0u32; self.num_vars()];
        for &(v, k) in vars {
            e[self.slot_of(v)] += k;
        }
        Monomial(e)
    }

    pub fn render(&self, m: &Monomial) -> String {
        let mut parts: Vec<(BlockVar, u32)> =
            m.0.iter().enumerate().filter(|(_, &k)| k > 0).map(|(s, &k)| (self.var_at(s), k)).collect();
        parts.sort();
        if parts.is_empty() {
            return "1".into();
        }
        parts
            .into_iter()
            .map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Exponent vector in significance order; `Ord` is the lex term order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; requires `other | self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&k| k <= 1)
    }
}

/// Polynomial with nonzero coefficients; the leading term is the last entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        SparsePoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn term(field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut p = SparsePoly::zero(field, m.0.len());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(field: FieldSpec, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = SparsePoly::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.last_key_value()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.last_key_value().map(|(m, _)| m)
    }

    pub fn scale(&self, c: &Scalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        SparsePoly { field: self.field, nvars: self.nvars, terms }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> SparsePoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// `self - c · m · other`.
    pub fn sub_scaled(&self, c: &Scalar, m: &Monomial, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (om, ov) in &other.terms {
            out.add_term(om.mul(m), -(ov * c));
        }
        out
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field, self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    /// Whether every term has the same degree in each block.
    pub fn is_block_homogeneous(&self, order: &LexOrder) -> bool {
        let degs = |m: &Monomial| -> Vec<u32> {
            let mut d = vec![0; order.layout().n()];
            for (s, &k) in m.0.iter().enumerate() {
                d[order.var_at(s).block] += k;
            }
            d
        };
        let mut it = self.terms.keys().map(degs);
        match it.next() {
            None => true,
            Some(first) => it.all(|d| d == first),
        }
    }

    /// Largest degree in a single block over all terms.
    pub fn max_block_degree(&self, order: &LexOrder) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| {
                let mut d = vec![0; order.layout().n()];
                for (s, &k) in m.0.iter().enumerate() {
                    d[order.var_at(s).block] += k;
                }
                d
            })
            .max()
            .unwrap_or(0)
    }

    /// `coeff*x[i,j]^e*...` terms joined with ` + `, leading term first.
    pub fn render(&self, order: &LexOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono = order.render(m);
                if mono == "1" {
                    c.to_string()
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Display without variable names (`Debug`-like, in significance order).
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().rev().map(|(m, c)| format!("{c}*{:?}", m.0)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One polynomial per line, for external computer-algebra systems.
pub fn dump_ideal(polys: &[SparsePoly], order: &LexOrder) -> String {
    let mut s = String::new();
    for p in polys {
        s.push_str(&p.render(order));
        s.push('\n');
    }
    s
}
