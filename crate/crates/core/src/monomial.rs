//! Squarefree monomial ideals in the block variables `x_{i,j}`, `1 ≤ j ≤ r+1-d_i`.
//!
//! [`BlockMonomialIdeal`] holds ideals whose generators use at most one
//! variable per block, the shape of the initial ideal `I_o` and of its prime
//! components. [`SquarefreeIdeal`] is the general squarefree case, encoded as
//! `u128` bitmasks over the global variable index, and is what intersection and
//! standard-monomial counting work on.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::binomial;
use thiserror::Error;

use crate::arrangement::{members, Mask, RankTable};
use crate::degrees::{dimension_and_support, DegreeVector};
use crate::exec::Exec;

pub const MAX_VARIABLES: usize = 128;
pub const DEFAULT_GENERATOR_BUDGET: usize = 200_000;
pub const DEFAULT_COUNT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("degree vector {m:?} exceeds the block bound at block {block}")]
    InfeasibleVector { m: DegreeVector, block: usize },
    #[error("{what} exceeds the budget of {limit}")]
    BudgetExceeded { what: String, limit: u64 },
    #[error("{0} variables exceed the bitmask width of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("generator {0} uses two variables from one block")]
    ShapeViolation(String),
    #[error("block layout mismatch")]
    LayoutMismatch,
}

/// Variable `x_{block+1, index}`; `block` is 0-based, `index` 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockVar {
    pub block: usize,
    pub index: usize,
}

impl fmt::Display for BlockVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.block + 1, self.index)
    }
}

/// Block sizes and the global variable numbering, blocks ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockLayout {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockLayout {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        BlockLayout { sizes, offsets }
    }

    pub fn of(t: &RankTable) -> Self {
        BlockLayout::new(t.block_sizes())
    }

    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, block: usize) -> usize {
        self.sizes[block]
    }

    pub fn num_vars(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn global(&self, v: BlockVar) -> usize {
        self.offsets[v.block] + v.index - 1
    }

    pub fn var(&self, global: usize) -> BlockVar {
        let block = self.offsets.iter().rposition(|&o| o <= global).expect("index in range");
        BlockVar { block, index: global - self.offsets[block] + 1 }
    }

    /// The variables of `block` as a global bitmask.
    pub fn block_mask(&self, block: usize) -> u128 {
        let s = self.sizes[block];
        let ones = if s == 128 { u128::MAX } else { (1u128 << s) - 1 };
        ones << self.offsets[block]
    }

    fn check_width(&self) -> Result<(), MonomialError> {
        let v = self.num_vars();
        if v > MAX_VARIABLES {
            return Err(MonomialError::TooManyVariables(v));
        }
        Ok(())
    }

    pub fn render_mask(&self, mask: u128) -> String {
        if mask == 0 {
            return "1".into();
        }
        (0..128).filter(|b| mask >> b & 1 == 1).map(|b| self.var(b).to_string()).collect::<Vec<_>>().join("*")
    }
}

/// Squarefree monomial with at most one variable per block: block `i`
/// contributes `x_{i,ell_i}`, or nothing when `ell_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockMonomial {
    pub ell: Vec<usize>,
}

impl BlockMonomial {
    pub fn new(ell: Vec<usize>) -> Self {
        BlockMonomial { ell }
    }

    pub fn one(n: usize) -> Self {
        BlockMonomial { ell: vec![0; n] }
    }

    pub fn support(&self) -> Mask {
        self.ell.iter().enumerate().filter(|(_, &l)| l != 0).fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.ell.iter().filter(|&&l| l != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `self | other`: `other` agrees with `self` on every block `self` uses.
    pub fn divides(&self, other: &BlockMonomial) -> bool {
        self.ell.iter().zip(&other.ell).all(|(&a, &b)| a == 0 || a == b)
    }

    pub fn vars(&self) -> Vec<BlockVar> {
        self.ell.iter().enumerate().filter(|(_, &l)| l != 0).map(|(block, &index)| BlockVar { block, index }).collect()
    }

    pub fn to_mask(&self, layout: &BlockLayout) -> u128 {
        self.vars().into_iter().fold(0, |m, v| m | 1u128 << layout.global(v))
    }

    /// Inverse of [`BlockMonomial::to_mask`]; fails if a block is used twice.
    pub fn from_mask(layout: &BlockLayout, mask: u128) -> Result<Self, MonomialError> {
        let mut ell = vec![0; layout.n()];
        for b in (0..128).filter(|b| mask >> b & 1 == 1) {
            let v = layout.var(b);
            if ell[v.block] != 0 {
                return Err(MonomialError::ShapeViolation(layout.render_mask(mask)));
            }
            ell[v.block] = v.index;
        }
        Ok(BlockMonomial { ell })
    }
}

impl Ord for BlockMonomial {
    /// Degree first, then lexicographic on `ell`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.ell.cmp(&other.ell))
    }
}

impl PartialOrd for BlockMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BlockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if vars.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = vars.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Minimally generated ideal of [`BlockMonomial`]s; no generators means the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockMonomialIdeal {
    layout: BlockLayout,
    gens: BTreeSet<BlockMonomial>,
}

impl BlockMonomialIdeal {
    pub fn zero(layout: BlockLayout) -> Self {
        BlockMonomialIdeal { layout, gens: BTreeSet::new() }
    }

    /// Drops every generator divisible by another one.
    pub fn from_gens(layout: BlockLayout, gens: impl IntoIterator<Item = BlockMonomial>) -> Self {
        let all: BTreeSet<BlockMonomial> = gens.into_iter().collect();
        let gens = all.iter().filter(|g| !all.iter().any(|h| h != *g && h.divides(g))).cloned().collect();
        BlockMonomialIdeal { layout, gens }
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn gens(&self) -> &BTreeSet<BlockMonomial> {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn to_squarefree(&self) -> Result<SquarefreeIdeal, MonomialError> {
        self.layout.check_width()?;
        Ok(SquarefreeIdeal::from_gens(self.layout.clone(), self.gens.iter().map(|g| g.to_mask(&self.layout))))
    }

    pub fn from_squarefree(ideal: &SquarefreeIdeal) -> Result<Self, MonomialError> {
        let gens = ideal.gens.iter().map(|&m| BlockMonomial::from_mask(&ideal.layout, m)).collect::<Result<Vec<_>, _>>()?;
        Ok(BlockMonomialIdeal::from_gens(ideal.layout.clone(), gens))
    }

    /// Generators rendered with [`BlockMonomial`]'s `Display`, by degree then text.
    pub fn rendered(&self) -> Vec<String> {
        let mut v: Vec<(usize, String)> = self.gens.iter().map(|g| (g.len(), g.to_string())).collect();
        v.sort();
        v.into_iter().map(|(_, s)| s).collect()
    }
}

impl fmt::Display for BlockMonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("<0>");
        }
        write!(f, "<{}>", self.rendered().join(", "))
    }
}

pub fn is_member(mono: &BlockMonomial, ideal: &BlockMonomialIdeal) -> bool {
    ideal.gens.iter().any(|g| g.divides(mono))
}

/// Longest generator support; 0 for the zero ideal.
pub fn max_generator_length(ideal: &BlockMonomialIdeal) -> usize {
    ideal.gens.iter().map(BlockMonomial::len).max().unwrap_or(0)
}

/// Squarefree monomial ideal with arbitrary generators, as variable bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquarefreeIdeal {
    layout: BlockLayout,
    gens: BTreeSet<u128>,
}

fn minimalize(gens: impl IntoIterator<Item = u128>) -> BTreeSet<u128> {
    let mut all: Vec<u128> = gens.into_iter().collect();
    all.sort_by_key(|g| (g.count_ones(), *g));
    all.dedup();
    let mut kept: Vec<u128> = Vec::new();
    for g in all {
        if !kept.iter().any(|&h| h & !g == 0) {
            kept.push(g);
        }
    }
    kept.into_iter().collect()
}

impl SquarefreeIdeal {
    pub fn zero(layout: BlockLayout) -> Self {
        SquarefreeIdeal { layout, gens: BTreeSet::new() }
    }

    pub fn from_gens(layout: BlockLayout, gens: impl IntoIterator<Item = u128>) -> Self {
        SquarefreeIdeal { layout, gens: minimalize(gens) }
    }

    /// Ideal generated by variables.
    pub fn from_vars(layout: BlockLayout, vars: &BTreeSet<BlockVar>) -> Self {
        let gens: Vec<u128> = vars.iter().map(|&v| 1u128 << layout.global(v)).collect();
        SquarefreeIdeal::from_gens(layout, gens)
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn gens(&self) -> &BTreeSet<u128> {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_mask(&self, mono: u128) -> bool {
        self.gens.iter().any(|&g| g & mono == g)
    }

    pub fn sum(&self, other: &SquarefreeIdeal) -> SquarefreeIdeal {
        SquarefreeIdeal::from_gens(self.layout.clone(), self.gens.iter().chain(&other.gens).copied())
    }

    /// `S ⋆ M`: pairwise lcms (`ab` when `a ∤ b`, else `b`), then minimalized.
    pub fn intersection(&self, other: &SquarefreeIdeal, budget: usize) -> Result<SquarefreeIdeal, MonomialError> {
        let pairs = self.gens.len().saturating_mul(other.gens.len());
        if pairs > budget {
            return Err(MonomialError::BudgetExceeded { what: format!("{pairs} intersection products"), limit: budget as u64 });
        }
        let lcms = self.gens.iter().flat_map(|&a| other.gens.iter().map(move |&b| a | b));
        Ok(SquarefreeIdeal::from_gens(self.layout.clone(), lcms))
    }

    pub fn rendered(&self) -> Vec<String> {
        let mut v: Vec<(u32, String)> = self.gens.iter().map(|&g| (g.count_ones(), self.layout.render_mask(g))).collect();
        v.sort();
        v.into_iter().map(|(_, s)| s).collect()
    }
}

/// `P_(m) = ⟨x_{i,j} : 1 ≤ j ≤ r - d_i - m_i⟩`.
pub fn prime_component(t: &RankTable, m: &[usize]) -> Result<BTreeSet<BlockVar>, MonomialError> {
    let mut vars = BTreeSet::new();
    for (block, &mi) in m.iter().enumerate() {
        let top = t.proj_dim(block);
        if mi > top {
            return Err(MonomialError::InfeasibleVector { m: m.to_vec(), block: block + 1 });
        }
        vars.extend((1..=top - mi).map(|index| BlockVar { block, index }));
    }
    Ok(vars)
}

/// The inequality `r+1 - Σ_{i∈I}(r+1-d_i-ℓ_i) ≤ d_I` of the generator description.
fn closes(t: &RankTable, ell: &[usize], mask: Mask) -> bool {
    let lost: usize = members(mask).map(|i| t.block_size(i) - ell[i]).sum();
    t.ambient_dim() <= t.d(mask) + lost
}

/// A block monomial lies in `I_o` iff some nonempty subset of its support closes.
pub fn satisfies_generator_condition(t: &RankTable, mono: &BlockMonomial) -> bool {
    let s = mono.support();
    let mut sub = s;
    while sub != 0 {
        if closes(t, &mono.ell, sub) {
            return true;
        }
        sub = (sub - 1) & s;
    }
    false
}

/// Irredundant generators: the support closes, no proper nonempty subset does.
pub fn initial_ideal(t: &RankTable) -> BlockMonomialIdeal {
    initial_ideal_with(t, Exec::default())
}

pub fn initial_ideal_with(t: &RankTable, exec: Exec) -> BlockMonomialIdeal {
    let layout = BlockLayout::of(t);
    let mut supports: Vec<Mask> = (1..=t.full()).collect();
    supports.sort_by_key(|m| (m.count_ones(), *m));
    let found = exec.map(&supports, |&s| generators_on_support(t, s));
    let gens: Vec<BlockMonomial> = found.into_iter().flatten().collect();
    // Already pairwise non-dividing; from_gens only canonicalizes the order.
    BlockMonomialIdeal::from_gens(layout, gens)
}

fn generators_on_support(t: &RankTable, s: Mask) -> Vec<BlockMonomial> {
    let idx: Vec<usize> = members(s).collect();
    // closing S means Σ_S ℓ ≤ budget
    let budget = (t.d(s) + idx.iter().map(|&i| t.block_size(i)).sum::<usize>()).checked_sub(t.ambient_dim());
    let Some(budget) = budget else { return vec![] };
    if budget < idx.len() {
        return vec![];
    }
    let mut out = Vec::new();
    let mut ell = vec![0; t.n()];
    fill(t, s, &idx, 0, budget, &mut ell, &mut out);
    out
}

fn fill(t: &RankTable, s: Mask, idx: &[usize], k: usize, left: usize, ell: &mut Vec<usize>, out: &mut Vec<BlockMonomial>) {
    if k == idx.len() {
        let proper_open = {
            let mut sub = (s - 1) & s;
            let mut ok = true;
            while sub != 0 {
                if closes(t, ell, sub) {
                    ok = false;
                    break;
                }
                sub = (sub - 1) & s;
            }
            ok
        };
        if proper_open {
            out.push(BlockMonomial::new(ell.clone()));
        }
        return;
    }
    let i = idx[k];
    let reserve = idx.len() - k - 1;
    let top = t.block_size(i).min(left - reserve);
    for v in 1..=top {
        ell[i] = v;
        fill(t, s, idx, k + 1, left - v, ell, out);
    }
    ell[i] = 0;
}

/// `∩_{m∈M(p)} P_(m)` by iterated pairwise intersection.
pub fn initial_ideal_via_intersection(t: &RankTable, budget: usize) -> Result<BlockMonomialIdeal, MonomialError> {
    initial_ideal_via_intersection_of(t, &dimension_and_support(t).support, budget)
}

pub fn initial_ideal_via_intersection_of(
    t: &RankTable,
    support: &BTreeSet<DegreeVector>,
    budget: usize,
) -> Result<BlockMonomialIdeal, MonomialError> {
    let layout = BlockLayout::of(t);
    layout.check_width()?;
    if support.len() > budget {
        return Err(MonomialError::BudgetExceeded { what: format!("{} components", support.len()), limit: budget as u64 });
    }
    let mut acc: Option<SquarefreeIdeal> = None;
    for m in support {
        let prime = SquarefreeIdeal::from_vars(layout.clone(), &prime_component(t, m)?);
        acc = Some(match acc {
            None => prime,
            Some(a) => a.intersection(&prime, budget)?,
        });
        if acc.as_ref().is_some_and(SquarefreeIdeal::is_zero) {
            break;
        }
    }
    let acc = acc.unwrap_or_else(|| SquarefreeIdeal::zero(layout.clone()));
    BlockMonomialIdeal::from_squarefree(&acc)
}

/// Monomials of multidegree `u` in the full block polynomial ring outside `ideal`.
pub fn standard_monomial_count(ideal: &BlockMonomialIdeal, t: &RankTable, u: &[usize]) -> Result<u64, MonomialError> {
    if ideal.layout != BlockLayout::of(t) {
        return Err(MonomialError::LayoutMismatch);
    }
    count_standard(&ideal.to_squarefree()?, u, DEFAULT_COUNT_BUDGET)
}

/// Whether a monomial is standard depends only on its support, so each block
/// is summarized by how many degree-`u_i` monomials have each support, and the
/// blocks are combined support by support.
pub fn count_standard(ideal: &SquarefreeIdeal, u: &[usize], budget: u64) -> Result<u64, MonomialError> {
    let layout = &ideal.layout;
    if u.len() != layout.n() {
        return Err(MonomialError::LayoutMismatch);
    }
    let total: u128 = (0..layout.n()).map(|i| binomial((u[i] + layout.size(i)).saturating_sub(1) as u128, u[i] as u128)).product();
    if total > u64::MAX as u128 {
        return Err(MonomialError::BudgetExceeded { what: format!("{total} monomials of degree {u:?}"), limit: u64::MAX });
    }
    let per_block: Vec<Vec<(u128, u64)>> = (0..layout.n())
        .map(|i| {
            let size = layout.size(i);
            let shift = layout.block_mask(i).trailing_zeros();
            (0u64..1 << size)
                .filter_map(|local| {
                    let s = local.count_ones() as usize;
                    let c = if s == 0 {
                        u64::from(u[i] == 0)
                    } else if s <= u[i] {
                        binomial((u[i] - 1) as u64, (s - 1) as u64)
                    } else {
                        0
                    };
                    (c > 0).then(|| ((local as u128) << shift, c))
                })
                .collect()
        })
        .collect();
    // earlier blocks are already clean, so only generators ending in block k can newly divide
    let mut ending: Vec<Vec<u128>> = vec![Vec::new(); layout.n()];
    for &g in &ideal.gens {
        if g != 0 {
            ending[layout.var(127 - g.leading_zeros() as usize).block].push(g);
        }
    }
    if ideal.gens.contains(&0) {
        return Ok(0);
    }
    let mut acc: Vec<(u128, u64)> = vec![(0, 1)];
    for (k, block) in per_block.iter().enumerate() {
        let work = acc.len() as u128 * block.len() as u128;
        if work > budget as u128 {
            return Err(MonomialError::BudgetExceeded { what: format!("{work} support combinations at degree {u:?}"), limit: budget });
        }
        let mut next = Vec::with_capacity(acc.len() * block.len());
        for &(m, c) in &acc {
            for &(bm, bc) in block {
                let mono = m | bm;
                // prune as soon as a generator is already contained
                if !ending[k].iter().any(|&g| g & !mono == 0) {
                    next.push((mono, c * bc));
                }
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(_, c)| c).sum())
}

/// All block monomials (every `ℓ_i ∈ [0, r+1-d_i]`), for exhaustive scans.
pub fn all_block_monomials(layout: &BlockLayout) -> Vec<BlockMonomial> {
    let mut out = vec![BlockMonomial::one(layout.n())];
    for i in 0..layout.n() {
        out = out
            .into_iter()
            .flat_map(|g| {
                (0..=layout.size(i)).map(move |l| {
                    let mut h = g.clone();
                    h.ell[i] = l;
                    h
                })
            })
            .collect();
    }
    out
}

/// Exhaustive comparison of three membership tests on every block monomial:
/// divisibility by a generator of `ideal`, the subset condition, and lying in
/// every `P_(m)` for `m` in `support`. Returns the number scanned or the first
/// monomial on which the answers differ.
pub fn membership_scan(
    t: &RankTable,
    ideal: &BlockMonomialIdeal,
    support: &BTreeSet<DegreeVector>,
) -> Result<usize, BlockMonomial> {
    let all = all_block_monomials(ideal.layout());
    for mono in &all {
        let by_gens = is_member(mono, ideal);
        let by_condition = satisfies_generator_condition(t, mono);
        let by_primes = support.iter().all(|m| mono.ell.iter().enumerate().any(|(i, &l)| l != 0 && l + m[i] <= t.proj_dim(i)));
        if by_gens != by_condition || by_gens != by_primes {
            return Err(mono.clone());
        }
    }
    Ok(all.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{random_rank_table, Arrangement};
    use crate::field::FieldSpec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(ambient: usize, spans: &[&[usize]]) -> RankTable {
        Arrangement::coordinate(FieldSpec::Rational, ambient, spans).rank_table().unwrap()
    }

    fn camera() -> RankTable {
        table(4, &[&[1], &[2]])
    }

    fn golden() -> RankTable {
        table(5, &[&[1, 2], &[1, 3], &[5]])
    }

    fn v(block: usize, index: usize) -> BlockVar {
        BlockVar { block, index }
    }

    /// Standard monomials by listing every exponent vector of degree `u`.
    fn brute_count(ideal: &SquarefreeIdeal, u: &[usize]) -> u64 {
        let layout = ideal.layout();
        let mut supports: Vec<u128> = vec![0];
        for i in 0..layout.n() {
            let size = layout.size(i);
            let mut exps: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..size {
                exps = exps.into_iter().flat_map(|e| (0..=u[i]).map(move |k| [e.clone(), vec![k]].concat())).collect();
            }
            let block: Vec<u128> = exps
                .into_iter()
                .filter(|e| e.iter().sum::<usize>() == u[i])
                .map(|e| {
                    e.iter().enumerate().filter(|(_, &k)| k > 0).fold(0u128, |m, (j, _)| m | 1 << (layout.global(v(i, j + 1))))
                })
                .collect();
            supports = supports.iter().flat_map(|&s| block.iter().map(move |&b| s | b)).collect();
        }
        supports.into_iter().filter(|&s| !ideal.contains_mask(s)).count() as u64
    }

    #[test]
    fn prime_components() {
        let t = camera();
        assert_eq!(prime_component(&t, &[1, 2]).unwrap(), BTreeSet::from([v(0, 1)]));
        assert_eq!(prime_component(&t, &[2, 1]).unwrap(), BTreeSet::from([v(1, 1)]));
        assert!(matches!(prime_component(&t, &[3, 0]), Err(MonomialError::InfeasibleVector { block: 1, .. })));
        let t1 = RankTable::from_values(1, 4, vec![0]).unwrap();
        assert!(prime_component(&t1, &[3]).unwrap().is_empty());
    }

    #[test]
    fn camera_initial_ideal() {
        let t = camera();
        let io = initial_ideal(&t);
        assert_eq!(io.rendered(), vec!["x[1,1]*x[2,1]"]);
        assert_eq!(initial_ideal_via_intersection(&t, DEFAULT_GENERATOR_BUDGET).unwrap(), io);
        assert_eq!(max_generator_length(&io), 2);
        assert!(is_member(&BlockMonomial::new(vec![1, 1]), &io));
        assert!(!is_member(&BlockMonomial::new(vec![2, 1]), &io));
        assert_eq!(io.to_string(), "<x[1,1]*x[2,1]>");
    }

    #[test]
    fn zero_ideals() {
        let t = table(3, &[&[1], &[2]]);
        assert!(initial_ideal(&t).is_zero());
        assert!(initial_ideal_via_intersection(&t, 100).unwrap().is_zero());
        let t1 = RankTable::from_values(1, 5, vec![0]).unwrap();
        let io = initial_ideal(&t1);
        assert!(io.is_zero());
        assert_eq!(max_generator_length(&io), 0);
        assert_eq!(io.to_string(), "<0>");
        for u in 0..5 {
            assert_eq!(standard_monomial_count(&io, &t1, &[u]).unwrap(), binomial(u as u64 + 4, 4));
        }
    }

    #[test]
    fn golden_initial_ideal() {
        let t = golden();
        let io = initial_ideal(&t);
        assert_eq!(initial_ideal_via_intersection(&t, DEFAULT_GENERATOR_BUDGET).unwrap(), io);
        assert!(max_generator_length(&io) <= 3);
        assert_eq!(initial_ideal_with(&t, Exec::Sequential), io);
    }

    #[test]
    fn camera_counts() {
        let t = camera();
        let io = initial_ideal(&t);
        assert_eq!(standard_monomial_count(&io, &t, &[1, 1]).unwrap(), 8);
        assert_eq!(standard_monomial_count(&io, &t, &[2, 1]).unwrap(), 15);
        let sq = io.to_squarefree().unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(count_standard(&sq, &[a, b], u64::MAX).unwrap(), brute_count(&sq, &[a, b]));
            }
        }
        let tiny = count_standard(&sq, &[40, 40], 10);
        assert!(matches!(tiny, Err(MonomialError::BudgetExceeded { .. })));
    }

    #[test]
    fn single_component_verbatim() {
        let t = camera();
        let one = BTreeSet::from([vec![1, 2]]);
        let io = initial_ideal_via_intersection_of(&t, &one, 100).unwrap();
        assert_eq!(io.rendered(), vec!["x[1,1]"]);
    }

    #[test]
    fn membership_scan_small() {
        for t in [camera(), golden()] {
            let s = dimension_and_support(&t);
            let n = membership_scan(&t, &initial_ideal(&t), &s.support).unwrap();
            assert_eq!(n, t.block_sizes().iter().map(|b| b + 1).product::<usize>());
        }
        // dropping a generator breaks the agreement
        let t = golden();
        let full = initial_ideal(&t);
        let fewer = BlockMonomialIdeal::from_gens(full.layout().clone(), full.gens().iter().skip(1).cloned());
        assert!(membership_scan(&t, &fewer, &dimension_and_support(&t).support).is_err());
    }

    #[test]
    fn mask_roundtrip_and_shape() {
        let layout = BlockLayout::new(vec![3, 3]);
        let g = BlockMonomial::new(vec![2, 3]);
        let m = g.to_mask(&layout);
        assert_eq!(BlockMonomial::from_mask(&layout, m).unwrap(), g);
        let bad = 0b11u128;
        assert!(matches!(BlockMonomial::from_mask(&layout, bad), Err(MonomialError::ShapeViolation(_))));
        assert_eq!(layout.render_mask(m), "x[1,2]*x[2,3]");
    }

    fn random_var_ideal(layout: &BlockLayout, rng: &mut ChaCha8Rng) -> SquarefreeIdeal {
        let vars: Vec<u128> = (0..layout.num_vars()).filter(|_| rng.gen_bool(0.3)).map(|b| 1u128 << b).collect();
        SquarefreeIdeal::from_gens(layout.clone(), vars)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn irredundant_equals_intersection(seed in any::<u64>(), n in 1usize..5, ambient in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_rank_table(n, ambient, &mut rng).unwrap();
            let io = initial_ideal(&t);
            prop_assert_eq!(&initial_ideal_via_intersection(&t, DEFAULT_GENERATOR_BUDGET).unwrap(), &io);
            prop_assert!(max_generator_length(&io) <= ambient.min(n));
            let layout = io.layout().clone();
            let monos = all_block_monomials(&layout);
            if monos.len() <= 2000 {
                for g in monos {
                    prop_assert_eq!(is_member(&g, &io), satisfies_generator_condition(&t, &g), "{}", g);
                }
            }
        }

        #[test]
        fn distributive_law(seed in any::<u64>(), k in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = BlockLayout::new(vec![2, 3, 2]);
            let ideals: Vec<SquarefreeIdeal> = (0..k).map(|_| random_var_ideal(&layout, &mut rng)).collect();
            let (last, rest) = ideals.split_last().unwrap();
            let meet = rest[1..].iter().fold(rest[0].clone(), |a, b| a.intersection(b, 1 << 20).unwrap());
            let lhs = meet.sum(last);
            let rhs = rest[1..].iter().fold(rest[0].sum(last), |a, b| a.intersection(&b.sum(last), 1 << 20).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn counts_are_exact_on_unions(seed in any::<u64>(), u in proptest::collection::vec(0usize..4, 3)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layout = BlockLayout::new(vec![2, 3, 2]);
            let i = random_var_ideal(&layout, &mut rng);
            let j = random_var_ideal(&layout, &mut rng);
            let c = |x: &SquarefreeIdeal| count_standard(x, &u, u64::MAX).unwrap();
            let meet = i.intersection(&j, 1 << 20).unwrap();
            prop_assert_eq!(c(&meet) + c(&i.sum(&j)), c(&i) + c(&j));
            prop_assert_eq!(c(&meet), brute_count(&meet, &u));
        }
    }
}
