//! Subspace arrangements `V_1, ..., V_n ⊂ K^{r+1}` and their rank tables
//! `I ↦ d_I = dim ∩_{i∈I} V_i`.
//!
//! Subsets of `[n]` are bitmasks: bit `i` stands for the 1-based index `i + 1`.
//! The empty mask carries the convention `d_∅ = r + 1`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exec::Exec;
use crate::field::FieldSpec;
use crate::linalg::{LinalgError, Subspace};

pub type Mask = u32;

/// Largest `n` for which the `2^n` rank table is materialized.
pub const MAX_SUBSETS_LOG2: usize = 20;
/// Up to this `n`, axioms are checked over all pairs of subsets.
pub const PAIRWISE_AXIOM_LIMIT: usize = 12;

pub fn full_mask(n: usize) -> Mask {
    if n == 32 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// 0-based members of a mask, ascending.
pub fn members(mask: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// `"1,3"`-style key with 1-based indices.
pub fn mask_key(mask: Mask) -> String {
    members(mask).map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_mask_key(key: &str, n: usize) -> Option<Mask> {
    let mut mask = 0;
    for part in key.split(',') {
        let i: usize = part.trim().parse().ok()?;
        if i == 0 || i > n || mask >> (i - 1) & 1 == 1 {
            return None;
        }
        mask |= 1 << (i - 1);
    }
    (mask != 0).then_some(mask)
}

/// Which rank-table axiom failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `d_[n] = 0`.
    FullIntersectionZero,
    /// `0 ≤ d_I ≤ r+1`, and `d_i ≤ r` for singletons (`V_i ≠ V`).
    Bounds,
    /// `I ⊆ J ⇒ d_J ≤ d_I`.
    Monotone,
    /// `d_I + d_J ≤ d_{I∪J} + d_{I∩J}`, i.e. `r+1-d` is submodular.
    Supermodular,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::FullIntersectionZero => "d_[n] = 0",
            Axiom::Bounds => "0 <= d_I <= r+1 and d_i <= r",
            Axiom::Monotone => "I ⊆ J implies d_J <= d_I",
            Axiom::Supermodular => "d_I + d_J <= d_(I∪J) + d_(I∩J)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("an arrangement needs at least one subspace")]
    Empty,
    #[error("subspace {index} lives in K^{found}, expected K^{expected}")]
    AmbientMismatch { index: usize, expected: usize, found: usize },
    #[error("subspace {index} is over {found}, expected {expected}")]
    FieldMismatch { index: usize, expected: FieldSpec, found: FieldSpec },
    #[error("common intersection of all subspaces has dimension {dim}, expected 0")]
    NonTrivialCommonIntersection { dim: usize },
    #[error("subspace {index} is the whole ambient space")]
    WholeSpace { index: usize },
    #[error("{n} subspaces exceed the subset budget of 2^{MAX_SUBSETS_LOG2}")]
    SubsetBudgetExceeded { n: usize },
    #[error("rank table violates {axiom} at I = {{{}}}, J = {{{}}}", mask_key(*i), mask_key(*j))]
    AxiomViolation { axiom: Axiom, i: Mask, j: Mask },
    #[error("malformed rank table: {0}")]
    Malformed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    ambient: usize,
    field: FieldSpec,
    subspaces: Vec<Subspace>,
}

impl Arrangement {
    /// Checks coherence of ambient dimension and field; see [`Arrangement::validate`]
    /// for the intersection hypothesis.
    pub fn new(field: FieldSpec, ambient: usize, subspaces: Vec<Subspace>) -> Result<Self, ArrangementError> {
        if subspaces.is_empty() {
            return Err(ArrangementError::Empty);
        }
        for (k, s) in subspaces.iter().enumerate() {
            if s.ambient_dim() != ambient {
                return Err(ArrangementError::AmbientMismatch { index: k + 1, expected: ambient, found: s.ambient_dim() });
            }
            if s.field() != field {
                return Err(ArrangementError::FieldMismatch { index: k + 1, expected: field, found: s.field() });
            }
        }
        Ok(Arrangement { ambient, field, subspaces })
    }

    /// Arrangement of coordinate subspaces; `spans[k]` lists 1-based basis indices.
    pub fn coordinate(field: FieldSpec, ambient: usize, spans: &[&[usize]]) -> Self {
        let subspaces = spans.iter().map(|s| Subspace::coordinate(field, ambient, s)).collect();
        Arrangement::new(field, ambient, subspaces).expect("coordinate arrangement")
    }

    /// Validated constructor.
    pub fn checked(field: FieldSpec, ambient: usize, subspaces: Vec<Subspace>) -> Result<Self, ArrangementError> {
        let a = Arrangement::new(field, ambient, subspaces)?;
        a.validate()?;
        Ok(a)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.subspaces.len()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    /// `∩_{i∈mask} V_i`, the whole space for the empty mask.
    pub fn intersection(&self, mask: Mask) -> Subspace {
        let mut acc = Subspace::whole(self.field, self.ambient);
        for i in members(mask) {
            acc = acc.intersection(&self.subspaces[i]).expect("coherent arrangement");
        }
        acc
    }

    pub fn validate(&self) -> Result<(), ArrangementError> {
        for (k, s) in self.subspaces.iter().enumerate() {
            if s.dim() == self.ambient {
                return Err(ArrangementError::WholeSpace { index: k + 1 });
            }
        }
        let dim = self.intersection(full_mask(self.n())).dim();
        if dim != 0 {
            return Err(ArrangementError::NonTrivialCommonIntersection { dim });
        }
        Ok(())
    }

    pub fn rank_table(&self) -> Result<RankTable, ArrangementError> {
        self.rank_table_with(Exec::default())
    }

    /// Memoized over subsets: `∩_I = ∩_{I∖{min I}} ∩ V_{min I}`, filled layer by
    /// layer in order of subset size.
    pub fn rank_table_with(&self, exec: Exec) -> Result<RankTable, ArrangementError> {
        self.validate()?;
        let n = self.n();
        if n > MAX_SUBSETS_LOG2 {
            return Err(ArrangementError::SubsetBudgetExceeded { n });
        }
        let size = 1usize << n;
        let mut memo: Vec<Option<Subspace>> = vec![None; size];
        memo[0] = Some(Subspace::whole(self.field, self.ambient));
        for layer in 1..=n {
            let masks: Vec<Mask> = (1..size as Mask).filter(|m| m.count_ones() as usize == layer).collect();
            let computed = exec.map(&masks, |&m| {
                let low = m.trailing_zeros() as usize;
                let rest = memo[(m & (m - 1)) as usize].as_ref().expect("previous layer");
                rest.intersection(&self.subspaces[low]).expect("coherent arrangement")
            });
            for (m, s) in masks.into_iter().zip(computed) {
                memo[m as usize] = Some(s);
            }
        }
        let d = memo.into_iter().map(|s| s.expect("filled").dim()).collect();
        Ok(RankTable { n, ambient: self.ambient, d })
    }

    /// Image of a rational arrangement in `F_q`.
    pub fn reduce_mod(&self, q: u64) -> Result<Arrangement, ArrangementError> {
        let subspaces = self.subspaces.iter().map(|s| s.reduce_mod(q)).collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(FieldSpec::prime(q).map_err(LinalgError::from)?, self.ambient, subspaces)
    }
}

/// `d_I` for every subset, indexed by mask; `d_∅ = r+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankTable {
    n: usize,
    ambient: usize,
    d: Vec<usize>,
}

impl RankTable {
    /// `values[mask - 1]` is `d_mask` for every nonempty mask.
    pub fn from_values(n: usize, ambient: usize, values: Vec<usize>) -> Result<Self, ArrangementError> {
        if n == 0 {
            return Err(ArrangementError::Empty);
        }
        if n > MAX_SUBSETS_LOG2 {
            return Err(ArrangementError::SubsetBudgetExceeded { n });
        }
        if values.len() != (1 << n) - 1 {
            return Err(ArrangementError::Malformed(format!("expected {} entries, got {}", (1 << n) - 1, values.len())));
        }
        let mut d = Vec::with_capacity(1 << n);
        d.push(ambient);
        d.extend(values);
        Ok(RankTable { n, ambient, d })
    }

    /// From `"1,3"`-style keys; every nonempty subset must be present exactly once.
    pub fn from_keyed(n: usize, ambient: usize, entries: &BTreeMap<String, usize>) -> Result<Self, ArrangementError> {
        if n == 0 {
            return Err(ArrangementError::Empty);
        }
        if n > MAX_SUBSETS_LOG2 {
            return Err(ArrangementError::SubsetBudgetExceeded { n });
        }
        let mut vals: Vec<Option<usize>> = vec![None; (1 << n) - 1];
        for (k, &v) in entries {
            let m = parse_mask_key(k, n).ok_or_else(|| ArrangementError::Malformed(format!("bad subset key {k:?}")))?;
            let slot = &mut vals[m as usize - 1];
            if slot.is_some() {
                return Err(ArrangementError::Malformed(format!("duplicate subset {{{}}}", mask_key(m))));
            }
            *slot = Some(v);
        }
        let values = vals
            .into_iter()
            .enumerate()
            .map(|(k, v)| v.ok_or_else(|| ArrangementError::Malformed(format!("missing subset {{{}}}", mask_key(k as Mask + 1)))))
            .collect::<Result<Vec<_>, _>>()?;
        RankTable::from_values(n, ambient, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `r + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn r(&self) -> usize {
        self.ambient - 1
    }

    pub fn d(&self, mask: Mask) -> usize {
        self.d[mask as usize]
    }

    /// `d_{i}` for 0-based `i`.
    pub fn d_single(&self, i: usize) -> usize {
        self.d[1 << i]
    }

    /// `r + 1 - d_i`: the number of variables in block `i` and `dim V/V_i`.
    pub fn block_size(&self, i: usize) -> usize {
        self.ambient - self.d_single(i)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.block_size(i)).collect()
    }

    /// `r - d_i`, the dimension of `P(V/V_i)`; saturates at 0 for malformed tables.
    pub fn proj_dim(&self, i: usize) -> usize {
        self.block_size(i).saturating_sub(1)
    }

    pub fn full(&self) -> Mask {
        full_mask(self.n)
    }

    pub fn keyed(&self) -> BTreeMap<String, usize> {
        (1..=self.full()).map(|m| (mask_key(m), self.d(m))).collect()
    }

    pub fn values(&self) -> &[usize] {
        &self.d[1..]
    }

    pub fn validate(&self) -> Result<(), ArrangementError> {
        let full = self.full();
        let viol = |axiom, i, j| Err(ArrangementError::AxiomViolation { axiom, i, j });
        if self.d(full) != 0 {
            return viol(Axiom::FullIntersectionZero, full, full);
        }
        for m in 1..=full {
            let v = self.d(m);
            if v > self.ambient || (m.count_ones() == 1 && v >= self.ambient) {
                return viol(Axiom::Bounds, m, m);
            }
        }
        // Monotonicity along single-element extensions implies it for all pairs.
        for m in 0..=full {
            for i in 0..self.n {
                let bigger = m | 1 << i;
                if bigger != m && self.d(bigger) > self.d(m) {
                    return viol(Axiom::Monotone, m, bigger);
                }
            }
        }
        if self.n <= PAIRWISE_AXIOM_LIMIT {
            for a in 1..=full {
                for b in a + 1..=full {
                    if self.d(a) + self.d(b) > self.d(a | b) + self.d(a & b) {
                        return viol(Axiom::Supermodular, a, b);
                    }
                }
            }
        } else {
            // Local form: equivalent to the pairwise inequality for set functions.
            for m in 0..=full {
                for i in (0..self.n).filter(|i| m >> i & 1 == 0) {
                    for j in (i + 1..self.n).filter(|j| m >> j & 1 == 0) {
                        let (a, b) = (m | 1 << i, m | 1 << j);
                        if self.d(a) + self.d(b) > self.d(a | b) + self.d(m) {
                            return viol(Axiom::Supermodular, a, b);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Random abstract rank table on `n` elements in `K^ambient`.
///
/// The corank `f = r+1 - d` is drawn as `min(r+1, Σ_k min(c_k, w_k(I)))` with
/// nonnegative modular `w_k`, which is monotone and submodular; draws where
/// some singleton or the full set falls short are rejected.
pub fn random_rank_table<R: rand::Rng + ?Sized>(n: usize, ambient: usize, rng: &mut R) -> Result<RankTable, ArrangementError> {
    if n == 0 || ambient == 0 {
        return Err(ArrangementError::Empty);
    }
    if n > MAX_SUBSETS_LOG2 {
        return Err(ArrangementError::SubsetBudgetExceeded { n });
    }
    loop {
        let groups = rng.gen_range(1..=n.max(2));
        let caps: Vec<usize> = (0..groups).map(|_| rng.gen_range(1..=ambient)).collect();
        let weights: Vec<Vec<usize>> =
            (0..groups).map(|_| (0..n).map(|_| if rng.gen_bool(0.6) { rng.gen_range(0..=ambient) } else { 0 }).collect()).collect();
        let corank = |mask: Mask| -> usize {
            let total: usize = (0..groups).map(|k| caps[k].min(members(mask).map(|i| weights[k][i]).sum())).sum();
            total.min(ambient)
        };
        let values: Vec<usize> = (1..=full_mask(n)).map(|m| ambient - corank(m)).collect();
        let t = RankTable::from_values(n, ambient, values)?;
        if t.validate().is_ok() {
            return Ok(t);
        }
    }
}
