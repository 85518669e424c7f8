//! Geometric oracles: membership of a tuple `(W_1, ..., W_n)` in the image
//! closure, the one-parameter family reaching it, generic linear sections
//! `V^i ⊇ V_i`, and `F_q` point counts of the closure cut by those sections.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{members, Arrangement, ArrangementError, Mask, RankTable};
use crate::degrees::is_feasible;
use crate::exec::Exec;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{LinalgError, Matrix, SampleConfig, Subspace};

pub const DEFAULT_POINT_BUDGET: u64 = 1_000_000;
pub const DEFAULT_SECTION_RETRIES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("tuple entry {index}: {reason}")]
    InvariantViolation { index: usize, reason: String },
    #[error("tuple is not in the closure (fails at I = {{{}}})", crate::arrangement::mask_key(*.0))]
    NotInClosure(Mask),
    #[error("no vector of the intersection basis leaves the subspace intersection at I = {{{}}}", crate::arrangement::mask_key(*.0))]
    DegenerateScan(Mask),
    #[error("membership criteria disagree at I = {{{}}}", crate::arrangement::mask_key(*.0))]
    CriteriaDisagree(Mask),
    #[error("codimension {codim} at block {block} exceeds r - d_i = {max}")]
    InfeasibleCodim { block: usize, codim: usize, max: usize },
    #[error("no section met the predicted dimensions after {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("{count} tuples exceed the enumeration budget of {limit}")]
    BudgetExceeded { count: u128, limit: u64 },
    #[error("point counting needs a prime field, got {0}")]
    NeedsPrimeField(FieldSpec),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `(W_1, ..., W_n)` with `V_i ⊂ W_i` of codimension one, i.e. a point of `Π P(V/V_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleW {
    w: Vec<Subspace>,
}

impl TupleW {
    pub fn new(a: &Arrangement, w: Vec<Subspace>) -> Result<Self, OracleError> {
        if w.len() != a.n() {
            return Err(OracleError::InvariantViolation { index: w.len(), reason: format!("expected {} subspaces", a.n()) });
        }
        for (k, (wi, vi)) in w.iter().zip(a.subspaces()).enumerate() {
            let bad = |reason: &str| OracleError::InvariantViolation { index: k + 1, reason: reason.into() };
            if wi.ambient_dim() != a.ambient_dim() || wi.field() != a.field() {
                return Err(bad("ambient space or field differs"));
            }
            if wi.dim() != vi.dim() + 1 {
                return Err(bad("dimension is not d_i + 1"));
            }
            if !wi.contains_subspace(vi)? {
                return Err(bad("does not contain V_i"));
            }
        }
        Ok(TupleW { w })
    }

    /// `W_i = span(V_i, v_i)`.
    pub fn from_vectors(a: &Arrangement, vs: &[Vec<Scalar>]) -> Result<Self, OracleError> {
        let w = a.subspaces().iter().zip(vs).map(|(v, x)| v.extend(x)).collect::<Result<Vec<_>, _>>()?;
        TupleW::new(a, w)
    }

    /// The image point of `⟨v⟩` for `v ∉ ∪ V_i`.
    pub fn image_of(a: &Arrangement, v: &[Scalar]) -> Result<Self, OracleError> {
        TupleW::from_vectors(a, &vec![v.to_vec(); a.n()])
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.w
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.w[i]
    }

    fn intersection(&self, mask: Mask) -> Subspace {
        let mut acc = Subspace::whole(self.w[0].field(), self.w[0].ambient_dim());
        for i in members(mask) {
            acc = acc.intersection(&self.w[i]).expect("coherent tuple");
        }
        acc
    }
}

/// First basis vector of `w` outside `v`; `w ⊋ v` guarantees one exists.
fn first_outside(w: &Subspace, v: &Subspace) -> Option<Vec<Scalar>> {
    w.basis_vectors().into_iter().find(|x| !v.contains(x).expect("same ambient"))
}

/// Membership in the closure, by both criteria.
///
/// The subspace criterion is `dim ∩_I W_i > d_I` for every nonempty `I`. The
/// matrix criterion evaluates `B_I` at `q_i = A_i w_i` (natural `A_i`, and
/// `W_i = V_i + ⟨w_i⟩`) and asks for rank at most `r - d_I + |I|`; the kernel of
/// that matrix is isomorphic to `∩_I W_i`, so the two must agree.
pub fn in_closure(a: &Arrangement, t: &TupleW) -> Result<bool, OracleError> {
    let table = a.rank_table()?;
    let nat: Vec<Matrix> = a.subspaces().iter().map(Subspace::annihilator).collect();
    let ws: Vec<Vec<Scalar>> = t
        .w
        .iter()
        .zip(a.subspaces())
        .map(|(w, v)| first_outside(w, v).expect("codimension one"))
        .collect();
    let q: Vec<Vec<Scalar>> = nat.iter().zip(&ws).map(|(m, w)| m.apply(w).expect("shape")).collect();
    let mut member = true;
    for mask in 1..=table.full() {
        let by_dim = t.intersection(mask).dim() > table.d(mask);
        let by_rank = evaluated_b_rank(&nat, &q, mask, &table) <= table.r() + mask.count_ones() as usize - table.d(mask);
        if by_dim != by_rank {
            return Err(OracleError::CriteriaDisagree(mask));
        }
        member &= by_dim;
    }
    Ok(member)
}

/// Rank of `[A_I | diag(q_i)]`, whose kernel encodes `∩_I W_i`.
fn evaluated_b_rank(nat: &[Matrix], q: &[Vec<Scalar>], mask: Mask, t: &RankTable) -> usize {
    let blocks: Vec<usize> = members(mask).collect();
    let field = nat[0].field();
    let cols = t.ambient_dim() + blocks.len();
    let mut rows = Vec::new();
    for (k, &b) in blocks.iter().enumerate() {
        for r in 0..nat[b].nrows() {
            let mut row = nat[b].row(r).to_vec();
            for kk in 0..blocks.len() {
                row.push(if kk == k { q[b][r].clone() } else { field.zero() });
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(field, cols, rows).expect("shape").rank()
}

/// Greedy chain `I_0 = [n] ⊋ I_1 ⊋ ... ⊋ I_m ⊋ ∅` with vectors
/// `w_j ∈ ∩_{I_j} W_i ∖ ∩_{I_j} V_i` and `I_{j+1} = {i ∈ I_j : w_j ∈ V_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCurve {
    pub w: Vec<Vec<Scalar>>,
    /// `stage_sets[j] = I_j`.
    pub stage_sets: Vec<Mask>,
    /// Stage of each block: `i ∈ I_j ∖ I_{j+1}`.
    pub assignment: Vec<usize>,
}

impl WitnessCurve {
    /// `Σ_{ℓ ≥ from} t^{ℓ-from} w_ℓ`.
    pub fn tail(&self, from: usize, t: &Scalar) -> Vec<Scalar> {
        let field = t.field();
        let mut acc = vec![field.zero(); self.w[0].len()];
        let mut power = field.one();
        for w in &self.w[from..] {
            for (x, y) in acc.iter_mut().zip(w) {
                *x = &*x + &(&power * y);
            }
            power = &power * t;
        }
        acc
    }

    /// `(W_i)_t = span(V_i, Σ_{ℓ≥j} t^{ℓ-j} w_ℓ)` where `j` is the stage of `i`.
    pub fn member_at(&self, a: &Arrangement, t: &Scalar) -> Result<Vec<Subspace>, OracleError> {
        a.subspaces()
            .iter()
            .zip(&self.assignment)
            .map(|(v, &j)| Ok(v.extend(&self.tail(j, t))?))
            .collect()
    }

    /// At `t = 0` the family is the target tuple; at sampled `t ≠ 0` it is the
    /// image of `v_t = Σ t^ℓ w_ℓ`, which must avoid every `V_i`.
    pub fn check<R: Rng + ?Sized>(&self, a: &Arrangement, target: &TupleW, rng: &mut R, samples: usize) -> Result<bool, OracleError> {
        let field = a.field();
        if self.member_at(a, &field.zero())? != target.w {
            return Ok(false);
        }
        let mut done = 0;
        let mut tries = 0;
        while done < samples {
            tries += 1;
            if tries > 50 * samples.max(1) {
                return Err(OracleError::RetryBudgetExhausted(tries));
            }
            let t = field.sample_nonzero(rng, 1000);
            let v = self.tail(0, &t);
            if a.subspaces().iter().any(|s| s.contains(&v).expect("shape")) {
                continue; // v_t is a base point; resample t
            }
            let image = TupleW::image_of(a, &v)?;
            if self.member_at(a, &t)? != image.w {
                return Ok(false);
            }
            done += 1;
        }
        Ok(true)
    }
}

pub fn witness_curve(a: &Arrangement, t: &TupleW) -> Result<WitnessCurve, OracleError> {
    let table = a.rank_table()?;
    for mask in 1..=table.full() {
        if t.intersection(mask).dim() <= table.d(mask) {
            return Err(OracleError::NotInClosure(mask));
        }
    }
    let mut w = Vec::new();
    let mut stage_sets = Vec::new();
    let mut assignment = vec![0; a.n()];
    let mut current = table.full();
    while current != 0 {
        let wi = t.intersection(current);
        let vi = a.intersection(current);
        let v = first_outside(&wi, &vi).ok_or(OracleError::DegenerateScan(current))?;
        let next = members(current).filter(|&i| a.subspace(i).contains(&v).expect("shape")).fold(0, |m, i| m | 1 << i);
        for i in members(current & !next) {
            assignment[i] = w.len();
        }
        w.push(v);
        stage_sets.push(current);
        current = next;
    }
    Ok(WitnessCurve { w, stage_sets, assignment })
}

/// `max_{J ⊆ I} (d_J - Σ_{i∈I∖J} c_i)`, floored at 0, with `d_∅ = r+1`: the
/// dimension of `∩_{i∈I} V^i` for general superspaces of codimensions `c`.
pub fn predicted_section_dim(t: &RankTable, c: &[usize], mask: Mask) -> usize {
    let mut best: i64 = 0;
    let mut sub = mask;
    loop {
        let dropped: i64 = members(mask & !sub).map(|i| c[i] as i64).sum();
        best = best.max(t.d(sub) as i64 - dropped);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    best as usize
}

/// Sampled sections `V^i ⊇ V_i` together with the checks they passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sections {
    pub c: Vec<usize>,
    pub subspaces: Vec<Subspace>,
    pub attempts: usize,
    /// `c` satisfies every strict inequality of `M(Σc)`.
    pub feasible: bool,
    /// For infeasible `c`: a minimal violating subset and whether
    /// `dim ∩_{I'} V^i = d_{I'}` was achieved.
    pub target: Option<(Mask, bool)>,
    /// Achieved `dim ∩_{i∈I} V^i` per nonempty `I`.
    pub dims: BTreeMap<Mask, usize>,
}

impl Sections {
    pub fn target_met(&self) -> bool {
        self.target.is_none_or(|(_, ok)| ok)
    }
}

fn intersect_all(subs: &[Subspace], mask: Mask) -> Subspace {
    let mut acc = Subspace::whole(subs[0].field(), subs[0].ambient_dim());
    for i in members(mask) {
        acc = acc.intersection(&subs[i]).expect("coherent");
    }
    acc
}

/// Smallest (by size, then mask) subset with `r+1 - Σ_I c_i ≤ d_I`.
pub fn minimal_violation(t: &RankTable, c: &[usize]) -> Option<Mask> {
    let mut masks: Vec<Mask> = (1..=t.full()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.into_iter().find(|&m| members(m).map(|i| c[i]).sum::<usize>() + t.d(m) >= t.ambient_dim())
}

/// Samples `V^i ⊇ V_i` of codimension `c_i` until the predicted dimensions hold.
///
/// For feasible `c`, every `dim ∩_I V^i` must be `r+1 - Σ_I c_i` and every
/// `dim (∩V^i) ∩ V_k` must match its predicted general value. For infeasible
/// `c`, the sample must reach `dim ∩_{I'} V^i = d_{I'}` on a minimal violating
/// `I'`; if no sample does, the last one is returned with the target unmet.
pub fn generic_sections<R: Rng + ?Sized>(
    a: &Arrangement,
    c: &[usize],
    rng: &mut R,
    retries: usize,
) -> Result<Sections, OracleError> {
    let t = a.rank_table()?;
    for (i, &ci) in c.iter().enumerate() {
        if ci > t.proj_dim(i) {
            return Err(OracleError::InfeasibleCodim { block: i + 1, codim: ci, max: t.proj_dim(i) });
        }
    }
    let feasible = is_feasible(&t, c);
    let violation = if feasible { None } else { minimal_violation(&t, c) };
    let cfg = SampleConfig { rational_bound: 1000, max_retries: 64 };
    let mut last = None;
    for attempt in 1..=retries.max(1) {
        let subs = a
            .subspaces()
            .iter()
            .zip(c)
            .map(|(v, &ci)| v.random_superspace(ci, rng, &cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let dims: BTreeMap<Mask, usize> = (1..=t.full()).map(|m| (m, intersect_all(&subs, m).dim())).collect();
        let all = intersect_all(&subs, t.full());
        let ok = if feasible {
            let ambient = t.ambient_dim();
            let range_ok = (1..=t.full()).all(|m| dims[&m] == ambient - members(m).map(|i| c[i]).sum::<usize>());
            range_ok
                && (0..t.n()).all(|k| {
                    let achieved = all.intersection(a.subspace(k)).expect("coherent").dim();
                    achieved == predicted_with_base(&t, a, c, k)
                })
        } else {
            let m = violation.expect("infeasible vector violates some subset");
            dims[&m] == t.d(m)
        };
        let target = violation.map(|m| (m, ok));
        let s = Sections { c: c.to_vec(), subspaces: subs, attempts: attempt, feasible, target, dims };
        if ok {
            return Ok(s);
        }
        last = Some(s);
    }
    match last {
        Some(s) if !feasible => Ok(s),
        _ => Err(OracleError::RetryBudgetExhausted(retries)),
    }
}

/// `max_{I ⊆ [n]} (dim(∩_I V_i ∩ V_k) - Σ_{i∉I} c_i)`, floored at 0.
fn predicted_with_base(t: &RankTable, a: &Arrangement, c: &[usize], k: usize) -> usize {
    let full = t.full();
    let mut best: i64 = 0;
    for sub in 0..=full {
        let base = a.intersection(sub | 1 << k).dim() as i64;
        let dropped: i64 = members(full & !sub).map(|i| c[i] as i64).sum();
        best = best.max(base - dropped);
    }
    best as usize
}

/// Row reduction over `F_q` on `u64` residues; returns the rank.
fn fq_rank(rows: &mut [Vec<u64>], q: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, p);
        let inv = crate::field::pow_mod(rows[rank][col], q - 2, q);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % q;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x = (*x + q - f * y % q) % q;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Normalized representatives of `P^{k-1}(F_q)`: first nonzero coordinate is 1.
fn projective_points(k: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..k {
        let free = k - lead - 1;
        let count = q.pow(free as u32);
        for code in 0..count {
            let mut v = vec![0u64; k];
            v[lead] = 1;
            let mut c = code;
            for x in v.iter_mut().skip(lead + 1) {
                *x = c % q;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

/// Number of tuples `Π P(V^i / V_i)` that would be enumerated.
pub fn enumeration_size(t: &RankTable, c: &[usize], q: u64) -> u128 {
    (0..t.n())
        .map(|i| {
            let k = (t.ambient_dim() - c[i] - t.d_single(i)) as u32;
            ((q as u128).pow(k) - 1) / (q as u128 - 1)
        })
        .product()
}

/// Count of the enumeration together with the sections it used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCount {
    pub count: u64,
    pub enumerated: u128,
    pub sections: Sections,
}

/// Points of the closure inside `Π P(V^i/V_i)` for sampled general sections.
pub fn count_intersection_points<R: Rng + ?Sized>(
    a: &Arrangement,
    c: &[usize],
    rng: &mut R,
    budget: u64,
    exec: Exec,
) -> Result<PointCount, OracleError> {
    let FieldSpec::Prime { q } = a.field() else { return Err(OracleError::NeedsPrimeField(a.field())) };
    let t = a.rank_table()?;
    for (i, &ci) in c.iter().enumerate() {
        if ci > t.proj_dim(i) {
            return Err(OracleError::InfeasibleCodim { block: i + 1, codim: ci, max: t.proj_dim(i) });
        }
    }
    let size = enumeration_size(&t, c, q);
    if size > budget as u128 {
        return Err(OracleError::BudgetExceeded { count: size, limit: budget });
    }
    let sections = generic_sections(a, c, rng, DEFAULT_SECTION_RETRIES)?;
    let count = count_in_sections(a, &t, &sections.subspaces, exec)?;
    Ok(PointCount { count, enumerated: size, sections })
}

/// Annihilator rows of every `W_i = V_i + ⟨u⟩` with `u` a nonzero class of `V^i/V_i`.
fn block_candidates(v: &Subspace, sup: &Subspace, q: u64) -> Result<Vec<Vec<Vec<u64>>>, OracleError> {
    let mut complement: Vec<Vec<Scalar>> = Vec::new();
    let mut span = v.clone();
    for x in sup.basis_vectors() {
        if !span.contains(&x)? {
            span = span.extend(&x)?;
            complement.push(x);
        }
    }
    let field = v.field();
    let ambient = v.ambient_dim();
    projective_points(complement.len(), q)
        .into_iter()
        .map(|coords| {
            let mut u = vec![field.zero(); ambient];
            for (lam, x) in coords.iter().zip(&complement) {
                let l = field.from_i64(*lam as i64);
                for (ui, xi) in u.iter_mut().zip(x) {
                    *ui = &*ui + &(&l * xi);
                }
            }
            let ann = v.extend(&u)?.annihilator();
            Ok((0..ann.nrows()).map(|r| ann.row(r).iter().map(|s| s.residue().expect("prime field")).collect()).collect())
        })
        .collect()
}

fn count_in_sections(a: &Arrangement, t: &RankTable, sections: &[Subspace], exec: Exec) -> Result<u64, OracleError> {
    let FieldSpec::Prime { q } = a.field() else { return Err(OracleError::NeedsPrimeField(a.field())) };
    let blocks: Vec<Vec<Vec<Vec<u64>>>> =
        a.subspaces().iter().zip(sections).map(|(v, s)| block_candidates(v, s, q)).collect::<Result<_, _>>()?;
    let n = a.n();
    let ambient = t.ambient_dim();
    let test = |choice: &[usize]| -> bool {
        (1..=t.full()).all(|mask| {
            let mut rows: Vec<Vec<u64>> = members(mask).flat_map(|i| blocks[i][choice[i]].iter().cloned()).collect();
            ambient - fq_rank(&mut rows, q) > t.d(mask)
        })
    };
    let firsts: Vec<usize> = (0..blocks[0].len()).collect();
    let count = exec.sum(&firsts, |&f| {
        let mut choice = vec![0usize; n];
        choice[0] = f;
        let mut hits = 0u64;
        loop {
            if test(&choice) {
                hits += 1;
            }
            // odometer over blocks 1..n
            let mut k = 1;
            while k < n {
                choice[k] += 1;
                if choice[k] < blocks[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k >= n {
                break;
            }
        }
        hits
    });
    Ok(count)
}

/// Three-valued verification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Abstain,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Abstain => "ABSTAIN",
        })
    }
}

/// Point count at `c` against the multidegree `expected ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountContract {
    pub c: Vec<usize>,
    pub expected: u8,
    pub observed: Option<u64>,
    pub attempts: usize,
    pub verdict: Verdict,
    pub enumerated: u128,
    /// Achieved `dim ∩_{i∈I} V^i`.
    pub section_dims: BTreeMap<Mask, usize>,
    pub target: Option<(Mask, bool)>,
}

/// A count of 0 for infeasible `c` is trusted only when the section met its
/// dimension target; otherwise the result is `Abstain`.
pub fn check_count<R: Rng + ?Sized>(
    a: &Arrangement,
    c: &[usize],
    expected: u8,
    rng: &mut R,
    budget: u64,
    exec: Exec,
) -> Result<CountContract, OracleError> {
    let pc = count_intersection_points(a, c, rng, budget, exec)?;
    let verdict = if !pc.sections.target_met() {
        Verdict::Abstain
    } else if pc.count == u64::from(expected) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CountContract {
        c: c.to_vec(),
        expected,
        observed: Some(pc.count),
        attempts: pc.sections.attempts,
        verdict,
        enumerated: pc.enumerated,
        section_dims: pc.sections.dims,
        target: pc.sections.target,
    })
}

/// Every tuple of `Π P(V/V_i)(F_q)`; for exhaustive scans on tiny instances.
pub fn all_tuples(a: &Arrangement) -> Result<Vec<TupleW>, OracleError> {
    let FieldSpec::Prime { q } = a.field() else { return Err(OracleError::NeedsPrimeField(a.field())) };
    let field = a.field();
    let whole = Subspace::whole(field, a.ambient_dim());
    let per_block: Vec<Vec<Vec<Scalar>>> = a
        .subspaces()
        .iter()
        .map(|v| {
            let mut complement: Vec<Vec<Scalar>> = Vec::new();
            let mut span = v.clone();
            for x in whole.basis_vectors() {
                if !span.contains(&x).expect("shape") {
                    span = span.extend(&x).expect("shape");
                    complement.push(x);
                }
            }
            projective_points(complement.len(), q)
                .into_iter()
                .map(|coords| {
                    let mut u = vec![field.zero(); a.ambient_dim()];
                    for (lam, x) in coords.iter().zip(&complement) {
                        let l = field.from_i64(*lam as i64);
                        for (ui, xi) in u.iter_mut().zip(x) {
                            *ui = &*ui + &(&l * xi);
                        }
                    }
                    u
                })
                .collect()
        })
        .collect();
    let mut combos: Vec<Vec<Vec<Scalar>>> = vec![vec![]];
    for block in &per_block {
        combos = combos.into_iter().flat_map(|c| block.iter().map(move |u| [c.clone(), vec![u.clone()]].concat())).collect();
    }
    combos.into_iter().map(|vs| TupleW::from_vectors(a, &vs)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::{dimension_and_support, enumerate_d};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rational;

    fn e(i: usize, n: usize, f: FieldSpec) -> Vec<Scalar> {
        let mut v = vec![f.zero(); n];
        v[i - 1] = f.one();
        v
    }

    fn golden(f: FieldSpec) -> Arrangement {
        Arrangement::coordinate(f, 5, &[&[1, 2], &[1, 3], &[5]])
    }

    fn camera(f: FieldSpec) -> Arrangement {
        Arrangement::coordinate(f, 4, &[&[1], &[2]])
    }

    fn golden_tuple(a: &Arrangement) -> TupleW {
        let f = a.field();
        TupleW::from_vectors(a, &[e(3, 5, f), e(4, 5, f), e(1, 5, f)]).unwrap()
    }

    #[test]
    fn golden_membership() {
        let a = golden(Q);
        assert!(in_closure(&a, &golden_tuple(&a)).unwrap());
        let off = TupleW::from_vectors(&a, &[e(4, 5, Q), e(5, 5, Q), e(4, 5, Q)]).unwrap();
        assert!(!in_closure(&a, &off).unwrap());
        let v: Vec<Scalar> = [1, 2, 3, 4, 5].iter().map(|&x| Q.from_i64(x)).collect();
        assert!(in_closure(&a, &TupleW::image_of(&a, &v).unwrap()).unwrap());
    }

    #[test]
    fn tuple_invariants() {
        let a = golden(Q);
        let bad = TupleW::new(&a, vec![a.subspace(0).clone(), a.subspace(1).clone(), a.subspace(2).clone()]);
        assert!(matches!(bad, Err(OracleError::InvariantViolation { index: 1, .. })));
        let wrong = TupleW::new(&a, vec![Subspace::coordinate(Q, 5, &[3, 4, 5]); 3]);
        assert!(matches!(wrong, Err(OracleError::InvariantViolation { .. })));
    }

    #[test]
    fn golden_witness_curve() {
        let a = golden(Q);
        let tuple = golden_tuple(&a);
        let curve = witness_curve(&a, &tuple).unwrap();
        assert_eq!(curve.w, vec![e(1, 5, Q), e(3, 5, Q), e(4, 5, Q)]);
        assert_eq!(curve.stage_sets, vec![0b111, 0b011, 0b010]);
        assert_eq!(curve.assignment, vec![1, 2, 0]);
        // (span(V_1, e3 + t e4), W_2, span(V_3, e1 + t e3 + t^2 e4)) at t = 2
        let two = Q.from_i64(2);
        let fam = curve.member_at(&a, &two).unwrap();
        let lin = |cs: &[i64]| -> Vec<Scalar> { cs.iter().map(|&x| Q.from_i64(x)).collect() };
        assert_eq!(fam[0], a.subspace(0).extend(&lin(&[0, 0, 1, 2, 0])).unwrap());
        assert_eq!(fam[1], tuple.get(1).clone());
        assert_eq!(fam[2], a.subspace(2).extend(&lin(&[1, 0, 2, 4, 0])).unwrap());
        assert!(curve.check(&a, &tuple, &mut ChaCha8Rng::seed_from_u64(5), 5).unwrap());
        let off = TupleW::from_vectors(&a, &[e(4, 5, Q), e(5, 5, Q), e(4, 5, Q)]).unwrap();
        assert!(matches!(witness_curve(&a, &off), Err(OracleError::NotInClosure(_))));
    }

    #[test]
    fn image_points_have_one_stage() {
        let a = golden(Q);
        let v: Vec<Scalar> = [1, -1, 2, 7, 3].iter().map(|&x| Q.from_i64(x)).collect();
        let tuple = TupleW::image_of(&a, &v).unwrap();
        let curve = witness_curve(&a, &tuple).unwrap();
        assert_eq!(curve.stage_sets, vec![0b111]);
        assert_eq!(curve.w.len(), 1);
        assert!(curve.check(&a, &tuple, &mut ChaCha8Rng::seed_from_u64(1), 5).unwrap());
    }

    #[test]
    fn exhaustive_closure_scan_small_field() {
        // every F_3-point of the target: criteria agree, closure points admit curves
        let f = FieldSpec::prime(3).unwrap();
        for a in [camera(f), Arrangement::coordinate(f, 3, &[&[1], &[2], &[3]])] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut inside = 0;
            for tuple in all_tuples(&a).unwrap() {
                if in_closure(&a, &tuple).unwrap() {
                    inside += 1;
                    let curve = witness_curve(&a, &tuple).unwrap();
                    assert!(curve.check(&a, &tuple, &mut rng, 3).unwrap());
                }
            }
            assert!(inside > 0);
        }
    }

    #[test]
    fn sections_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = camera(Q);
        let s = generic_sections(&a, &[1, 2], &mut rng, 50).unwrap();
        assert_eq!(s.subspaces[0].dim(), 3);
        assert_eq!(s.subspaces[1].dim(), 2);
        assert_eq!(s.dims[&0b11], 1);
        let common = s.subspaces[0].intersection(&s.subspaces[1]).unwrap();
        let v = &common.basis_vectors()[0];
        assert!(!a.subspace(0).contains(v).unwrap() && !a.subspace(1).contains(v).unwrap());
        let z = generic_sections(&a, &[0, 0], &mut rng, 50).unwrap();
        assert!(z.subspaces.iter().all(|s| s.dim() == 4));
        let g = golden(Q);
        let s = generic_sections(&g, &[2, 1, 1], &mut rng, 50).unwrap();
        assert_eq!(s.dims[&0b111], 1);
        let all = intersect_all(&s.subspaces, 0b111);
        for k in 0..3 {
            assert_eq!(all.intersection(g.subspace(k)).unwrap().dim(), 0);
        }
        assert!(matches!(generic_sections(&a, &[3, 0], &mut rng, 5), Err(OracleError::InfeasibleCodim { block: 1, .. })));
    }

    #[test]
    fn camera_counts() {
        let f = FieldSpec::prime(101).unwrap();
        let a = camera(f);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for c in [[1, 2], [2, 1]] {
            let pc = count_intersection_points(&a, &c, &mut rng, DEFAULT_POINT_BUDGET, Exec::default()).unwrap();
            assert_eq!(pc.count, 1);
            assert_eq!(pc.enumerated, 102);
        }
    }

    #[test]
    fn golden_counts_over_f11() {
        let f = FieldSpec::prime(11).unwrap();
        let a = golden(f);
        let t = a.rank_table().unwrap();
        let s = dimension_and_support(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in enumerate_d(&t, s.p) {
            let want = s.multidegree(&c);
            let r = check_count(&a, &c, want, &mut rng, DEFAULT_POINT_BUDGET, Exec::default()).unwrap();
            assert_ne!(r.verdict, Verdict::Fail, "{c:?}: {r:?}");
            assert!(r.observed.unwrap() <= 1);
        }
        let seq = count_intersection_points(&a, &[2, 1, 1], &mut ChaCha8Rng::seed_from_u64(1), DEFAULT_POINT_BUDGET, Exec::Sequential).unwrap();
        let par = count_intersection_points(&a, &[2, 1, 1], &mut ChaCha8Rng::seed_from_u64(1), DEFAULT_POINT_BUDGET, Exec::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn enumeration_budget() {
        let f = FieldSpec::prime(101).unwrap();
        let a = golden(f);
        let t = a.rank_table().unwrap();
        assert_eq!(enumeration_size(&t, &[2, 1, 1], 101), 1_050_906);
        let r = count_intersection_points(&a, &[2, 1, 1], &mut ChaCha8Rng::seed_from_u64(0), DEFAULT_POINT_BUDGET, Exec::default());
        assert!(matches!(r, Err(OracleError::BudgetExceeded { .. })));
        assert!(matches!(
            count_intersection_points(&golden(Q), &[2, 1, 1], &mut ChaCha8Rng::seed_from_u64(0), 10, Exec::default()),
            Err(OracleError::NeedsPrimeField(_))
        ));
    }

    #[test]
    fn fq_rank_basics() {
        let mut m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(fq_rank(&mut m, 7), 2);
        assert_eq!(projective_points(3, 3).len(), 13);
        assert_eq!(projective_points(1, 101), vec![vec![1]]);
    }
}
