//! Determinantal description of the image closure: projection matrices `A_i`
//! with kernel `V_i`, the block matrices `B_I = [A_I | diag(q_i)]`, their
//! maximal-rank minors generating `I_f`, and a Gröbner check that the lex
//! initial ideal of `I_f` is the monomial ideal `I_o`.

pub mod groebner;
pub mod poly;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::binomial;
use rand::Rng;
use thiserror::Error;

use crate::arrangement::{members, Arrangement, ArrangementError, Mask, RankTable};
use crate::exec::Exec;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{LinalgError, Matrix};
use crate::monomial::{initial_ideal, BlockLayout, BlockMonomial, BlockMonomialIdeal, BlockVar};

pub use groebner::{buchberger, is_groebner_basis_of, normal_form, GroebnerConfig, GroebnerError};
pub use poly::{dump_ideal, LexOrder, Monomial, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetIdealError {
    #[error("genericity condition not reached after {0} re-coordinatizations")]
    GenericityNotAchieved(usize),
    #[error("{count} minors exceed the budget of {limit}")]
    BudgetExceeded { count: u128, limit: u128 },
    #[error("expected {expected} projection matrices, got {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Knobs for the algebraic verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetConfig {
    /// Entries of the random change of coordinates lie in `[-bound, bound]`.
    pub entry_bound: i64,
    pub genericity_retries: usize,
    /// Random row subsets tried when exhaustive genericity checking is too large.
    pub genericity_samples: usize,
    pub max_minors: u128,
    pub groebner: GroebnerConfig,
}

impl Default for DetConfig {
    fn default() -> Self {
        DetConfig { entry_bound: 7, genericity_retries: 20, genericity_samples: 4096, max_minors: 20_000, groebner: GroebnerConfig::default() }
    }
}

/// `A_i` whose rows are a basis of the annihilator of `V_i` (identity when `V_i = 0`).
pub fn natural_projection_matrices(a: &Arrangement) -> Vec<Matrix> {
    a.subspaces().iter().map(|v| v.annihilator()).collect()
}

/// `A_i = G_i · N_i` for random invertible `G_i`; the kernel stays `V_i`.
pub fn projection_matrices<R: Rng + ?Sized>(a: &Arrangement, rng: &mut R, cfg: &DetConfig) -> Result<Vec<Matrix>, DetIdealError> {
    let field = a.field();
    natural_projection_matrices(a)
        .into_iter()
        .map(|n| {
            let k = n.nrows();
            for _ in 0..cfg.genericity_retries.max(1) * 4 {
                let g = Matrix::random(field, k, k, rng, cfg.entry_bound);
                if !g.det().is_zero() {
                    return Ok(g.mul(&n)?);
                }
            }
            Err(LinalgError::RetryBudgetExhausted(cfg.genericity_retries.max(1) * 4).into())
        })
        .collect()
}

/// Rows of the stacked `A_i`, tagged by block.
fn tagged_rows(mats: &[Matrix]) -> Vec<(usize, Vec<Scalar>)> {
    mats.iter().enumerate().flat_map(|(i, m)| (0..m.nrows()).map(move |r| (i, m.row(r).to_vec()))).collect()
}

/// Result of a genericity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genericity {
    pub passed: bool,
    /// All row subsets were examined; otherwise the check was sampled.
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// A dependent row set, as `(block, row)` pairs with 1-based entries.
    pub witness: Option<Vec<(usize, usize)>>,
}

/// Row counts `a_m` per block: every nonempty `I' ⊆ blocks(C)` has `Σ_{I'} a ≤ r+1-d_{I'}`.
fn star_hypothesis(t: &RankTable, counts: &[usize]) -> bool {
    let used: Mask = counts.iter().enumerate().filter(|(_, &c)| c > 0).fold(0, |m, (i, _)| m | 1 << i);
    let mut sub = used;
    while sub != 0 {
        let s: usize = members(sub).map(|i| counts[i]).sum();
        if s + t.d(sub) > t.ambient_dim() {
            return false;
        }
        sub = (sub - 1) & used;
    }
    true
}

/// Genericity check: every row set satisfying the hypothesis is independent.
pub fn genericity_check<R: Rng + ?Sized>(mats: &[Matrix], t: &RankTable, budget: usize, rng: &mut R) -> Genericity {
    genericity_check_with(mats, t, budget, rng, Exec::default())
}

pub fn genericity_check_with<R: Rng + ?Sized>(mats: &[Matrix], t: &RankTable, budget: usize, rng: &mut R, exec: Exec) -> Genericity {
    let rows = tagged_rows(mats);
    let total = rows.len();
    let field = mats.first().map_or(FieldSpec::Rational, Matrix::field);
    let cols = t.ambient_dim();
    let offsets: Vec<usize> = mats.iter().scan(0, |acc, m| {
        let o = *acc;
        *acc += m.nrows();
        Some(o)
    }).collect();

    let candidates: Vec<u64> = if total <= 16 {
        (1u64..1 << total).collect()
    } else {
        let mut set: BTreeSet<u64> = BTreeSet::new();
        for a in 0..total {
            set.insert(1 << a);
            for b in a + 1..total {
                set.insert(1 << a | 1 << b);
                for c in b + 1..total {
                    set.insert(1 << a | 1 << b | 1 << c);
                }
            }
        }
        for _ in 0..budget {
            let size = rng.gen_range(1..=cols.min(total));
            let mut m = 0u64;
            while (m.count_ones() as usize) < size {
                m |= 1 << rng.gen_range(0..total);
            }
            set.insert(m);
        }
        set.into_iter().collect()
    };
    let eligible: Vec<u64> = candidates
        .into_iter()
        .filter(|&c| {
            let mut counts = vec![0; mats.len()];
            for k in (0..total).filter(|k| c >> k & 1 == 1) {
                counts[rows[k].0] += 1;
            }
            star_hypothesis(t, &counts)
        })
        .collect();
    let dependent = exec.map(&eligible, |&c| {
        let picked: Vec<Vec<Scalar>> = (0..total).filter(|k| c >> k & 1 == 1).map(|k| rows[k].1.clone()).collect();
        let m = Matrix::from_rows(field, cols, picked).expect("row width");
        m.rank() < c.count_ones() as usize
    });
    let witness = eligible.iter().zip(&dependent).find(|(_, &d)| d).map(|(&c, _)| {
        (0..total)
            .filter(|k| c >> k & 1 == 1)
            .map(|k| {
                let b = rows[k].0;
                (b + 1, k - offsets[b] + 1)
            })
            .collect()
    });
    Genericity { passed: witness.is_none(), exhaustive: total <= 16, subsets_checked: eligible.len(), witness }
}

/// Entry of a [`SymbolicMatrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Const(Scalar),
    Var(BlockVar),
}

/// `B_I`: stacked `A_i` on the left, one column per block of `I` holding that block's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Numeric columns come first; the last `|I|` columns carry variables.
    pub numeric_cols: usize,
    pub field: FieldSpec,
    entries: Vec<Entry>,
    /// Block of each row.
    pub row_block: Vec<usize>,
}

impl SymbolicMatrix {
    pub fn get(&self, r: usize, c: usize) -> &Entry {
        &self.entries[r * self.cols + c]
    }

    /// Size of the minors generating `I_f` from this matrix.
    pub fn minor_size(t: &RankTable, subset: Mask) -> usize {
        t.ambient_dim() - t.d(subset) + subset.count_ones() as usize
    }

    /// Numeric matrix at a point given by homogeneous coordinates `q_i` per block.
    pub fn evaluate(&self, point: &BTreeMap<BlockVar, Scalar>) -> Matrix {
        let rows = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| match self.get(r, c) {
                        Entry::Const(s) => s.clone(),
                        Entry::Var(v) => point.get(v).cloned().unwrap_or_else(|| self.field.zero()),
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(self.field, self.cols, rows).expect("shape")
    }
}

pub fn build_b(mats: &[Matrix], subset: Mask, t: &RankTable) -> SymbolicMatrix {
    let blocks: Vec<usize> = members(subset).collect();
    let field = mats[0].field();
    let numeric_cols = t.ambient_dim();
    let cols = numeric_cols + blocks.len();
    let mut entries = Vec::new();
    let mut row_block = Vec::new();
    for (k, &b) in blocks.iter().enumerate() {
        let a = &mats[b];
        for r in 0..a.nrows() {
            entries.extend(a.row(r).iter().cloned().map(Entry::Const));
            for kk in 0..blocks.len() {
                entries.push(if kk == k { Entry::Var(BlockVar { block: b, index: r + 1 }) } else { Entry::Const(field.zero()) });
            }
            row_block.push(b);
        }
    }
    SymbolicMatrix { rows: row_block.len(), cols, numeric_cols, field, entries, row_block }
}

/// Number of minors `minor_ideal` would produce.
pub fn minor_count(t: &RankTable) -> u128 {
    (1..=t.full())
        .map(|s| {
            let rows: usize = members(s).map(|i| t.block_size(i)).sum();
            let cols = t.ambient_dim() + s.count_ones() as usize;
            let k = SymbolicMatrix::minor_size(t, s);
            if k > rows || k > cols {
                0
            } else {
                binomial(rows as u128, k as u128) * binomial(cols as u128, k as u128)
            }
        })
        .sum()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of the `rows × cols` submatrix.
///
/// Each variable column has one nonzero per row of its block, so the
/// generalized Laplace expansion along the variable columns picks one row per
/// variable column; the complementary numeric minors are memoized.
fn symbolic_minor(
    b: &SymbolicMatrix,
    rows: &[usize],
    cols: &[usize],
    order: &LexOrder,
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), Scalar>,
) -> SparsePoly {
    let nvars = order.num_vars();
    let mut out = SparsePoly::zero(b.field, nvars);
    let var_pos: Vec<usize> = (0..cols.len()).filter(|&k| cols[k] >= b.numeric_cols).collect();
    let num_cols: Vec<usize> = cols.iter().copied().filter(|&c| c < b.numeric_cols).collect();
    let col_parity: usize = var_pos.iter().sum();
    // Rows eligible for each variable column: those whose entry there is a variable.
    let choices: Vec<Vec<usize>> = var_pos
        .iter()
        .map(|&k| (0..rows.len()).filter(|&ri| matches!(b.get(rows[ri], cols[k]), Entry::Var(_))).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(var_pos.len());
    fn rec(depth: usize, choices: &[Vec<usize>], chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if depth == choices.len() {
            f(chosen);
            return;
        }
        for &ri in &choices[depth] {
            chosen.push(ri);
            rec(depth + 1, choices, chosen, f);
            chosen.pop();
        }
    }
    let mut visit = |sel: &[usize]| {
        let rest: Vec<usize> = (0..rows.len()).filter(|ri| !sel.contains(ri)).collect();
        let rest_rows: Vec<usize> = rest.iter().map(|&ri| rows[ri]).collect();
        let key = (rest_rows.clone(), num_cols.clone());
        let det = memo
            .entry(key)
            .or_insert_with(|| {
                if rest_rows.is_empty() {
                    return b.field.one();
                }
                let m = Matrix::from_rows(
                    b.field,
                    num_cols.len(),
                    rest_rows
                        .iter()
                        .map(|&r| num_cols.iter().map(|&c| match b.get(r, c) {
                            Entry::Const(s) => s.clone(),
                            Entry::Var(_) => unreachable!("numeric column"),
                        }).collect())
                        .collect(),
                )
                .expect("square");
                m.det()
            })
            .clone();
        if det.is_zero() {
            return;
        }
        // Sign of the expansion: row positions of the chosen rows against the
        // variable column positions, times the permutation matching chosen rows
        // (in pick order) to those columns.
        let row_parity: usize = sel.iter().sum();
        let inversions = (0..sel.len()).flat_map(|a| (a + 1..sel.len()).map(move |c| (a, c))).filter(|&(a, c)| sel[a] > sel[c]).count();
        let negative = (row_parity + col_parity + inversions) % 2 == 1;
        let vars: Vec<(BlockVar, u32)> = sel
            .iter()
            .zip(&var_pos)
            .map(|(&ri, &k)| match b.get(rows[ri], cols[k]) {
                Entry::Var(v) => (*v, 1),
                Entry::Const(_) => unreachable!("variable entry"),
            })
            .collect();
        let c = if negative { -det } else { det };
        out.add_term(order.monomial(&vars), c);
    };
    rec(0, &choices, &mut chosen, &mut visit);
    out
}

/// All `(r+1-d_I+|I|)`-minors of every `B_I`, subsets in increasing mask order.
pub fn minor_ideal(mats: &[Matrix], t: &RankTable, order: &LexOrder, cfg: &DetConfig) -> Result<Vec<SparsePoly>, DetIdealError> {
    minor_ideal_with(mats, t, order, cfg, Exec::default())
}

pub fn minor_ideal_with(
    mats: &[Matrix],
    t: &RankTable,
    order: &LexOrder,
    cfg: &DetConfig,
    exec: Exec,
) -> Result<Vec<SparsePoly>, DetIdealError> {
    if mats.len() != t.n() {
        return Err(DetIdealError::MatrixCount { expected: t.n(), found: mats.len() });
    }
    let count = minor_count(t);
    if count > cfg.max_minors {
        return Err(DetIdealError::BudgetExceeded { count, limit: cfg.max_minors });
    }
    let subsets: Vec<Mask> = (1..=t.full()).collect();
    let per_subset = exec.map(&subsets, |&s| {
        let b = build_b(mats, s, t);
        let k = SymbolicMatrix::minor_size(t, s);
        if k > b.rows || k > b.cols {
            return vec![];
        }
        let mut memo = HashMap::new();
        let mut out = Vec::new();
        let col_sets = subsets_of_size(b.cols, k);
        for rows in subsets_of_size(b.rows, k) {
            for cols in &col_sets {
                out.push(symbolic_minor(&b, &rows, cols, order, &mut memo));
            }
        }
        out
    });
    Ok(per_subset.into_iter().flatten().collect())
}

/// Leading monomials of a reduced basis, as block monomials when they have that shape.
pub fn leading_ideal(basis: &[SparsePoly], order: &LexOrder) -> (Vec<String>, Option<BlockMonomialIdeal>) {
    let mut keyed: Vec<(u32, String)> =
        basis.iter().filter_map(|p| p.leading_monomial()).map(|m| (m.0.iter().sum(), order.render(m))).collect();
    keyed.sort();
    let rendered: Vec<String> = keyed.into_iter().map(|(_, s)| s).collect();
    let layout = order.layout().clone();
    let mut gens = Vec::new();
    for p in basis {
        let m = p.leading_monomial().expect("nonzero");
        if !m.is_squarefree() {
            return (rendered, None);
        }
        let mut ell = vec![0; layout.n()];
        for (s, _) in m.0.iter().enumerate().filter(|(_, &k)| k > 0) {
            let v = order.var_at(s);
            if ell[v.block] != 0 {
                return (rendered, None);
            }
            ell[v.block] = v.index;
        }
        gens.push(BlockMonomial::new(ell));
    }
    (rendered, Some(BlockMonomialIdeal::from_gens(layout, gens)))
}

/// Outcome of the initial-ideal verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialCheck {
    pub equal: bool,
    pub attempts: usize,
    pub genericity: Genericity,
    pub minors: usize,
    pub basis_size: usize,
    /// Leading terms of the reduced basis.
    pub computed: Vec<String>,
    pub expected: BlockMonomialIdeal,
    pub matrices: Vec<Matrix>,
    pub basis: Vec<SparsePoly>,
}

/// Re-coordinatizes until the genericity check passes, computes the lex Gröbner basis
/// of the minor ideal and compares its leading terms with `I_o`.
pub fn verify_initial<R: Rng + ?Sized>(a: &Arrangement, rng: &mut R, cfg: &DetConfig) -> Result<InitialCheck, DetIdealError> {
    let t = a.rank_table()?;
    let order = LexOrder::new(t.block_sizes());
    if order.num_vars() > cfg.groebner.max_vars {
        return Err(GroebnerError::VariableBudgetExceeded { vars: order.num_vars(), limit: cfg.groebner.max_vars }.into());
    }
    let count = minor_count(&t);
    if count > cfg.max_minors {
        return Err(DetIdealError::BudgetExceeded { count, limit: cfg.max_minors });
    }
    let expected = initial_ideal(&t);
    let mut attempts = 0;
    let (mats, genericity) = loop {
        attempts += 1;
        if attempts > cfg.genericity_retries {
            return Err(DetIdealError::GenericityNotAchieved(cfg.genericity_retries));
        }
        let mats = projection_matrices(a, rng, cfg)?;
        let g = genericity_check(&mats, &t, cfg.genericity_samples, rng);
        if g.passed {
            break (mats, g);
        }
        log::debug!("re-coordinatization {attempts} failed the genericity check");
    };
    let minors = minor_ideal(&mats, &t, &order, cfg)?;
    let basis = buchberger(&minors, &order, &cfg.groebner)?;
    let (computed, shaped) = leading_ideal(&basis, &order);
    let equal = shaped.as_ref() == Some(&expected);
    Ok(InitialCheck { equal, attempts, genericity, minors: minors.len(), basis_size: basis.len(), computed, expected, matrices: mats, basis })
}

/// Layout helper for callers rendering `I_o` next to a computed ideal.
pub fn layout_of(t: &RankTable) -> BlockLayout {
    BlockLayout::of(t)
}

#[cfg(test)]
mod tests;
