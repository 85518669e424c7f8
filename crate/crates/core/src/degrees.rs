//! Degree vectors: `M(h)`, the dimension `p`, the tight set `M̂` and the box `D(p)`.

use std::collections::BTreeSet;

use crate::arrangement::{full_mask, Mask, RankTable};
use crate::exec::Exec;

pub type DegreeVector = Vec<usize>;

/// `p = dim X` and `M(p)`, where the multidegree equals one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultidegreeSupport {
    pub p: usize,
    pub support: BTreeSet<DegreeVector>,
}

impl MultidegreeSupport {
    pub fn n(&self) -> usize {
        self.support.iter().next().map_or(0, Vec::len)
    }

    /// Multidegree at `u`: 1 on `M(p)`, 0 elsewhere.
    pub fn multidegree(&self, u: &[usize]) -> u8 {
        u8::from(self.support.contains(u))
    }
}

/// `r+1 - Σ_{i∈I} m_i > d_I` for all nonempty `I`.
pub fn is_feasible(t: &RankTable, m: &[usize]) -> bool {
    let ambient = t.ambient_dim();
    (1..=t.full()).all(|mask| subset_sum(m, mask) + t.d(mask) < ambient)
}

fn subset_sum(m: &[usize], mask: Mask) -> usize {
    crate::arrangement::members(mask).map(|i| m[i]).sum()
}

/// `M(h)`.
pub fn enumerate_m(t: &RankTable, h: usize) -> BTreeSet<DegreeVector> {
    enumerate_m_with(t, h, Exec::default())
}

pub fn enumerate_m_with(t: &RankTable, h: usize, exec: Exec) -> BTreeSet<DegreeVector> {
    let n = t.n();
    let caps: Vec<usize> = (0..n).map(|i| t.proj_dim(i)).collect();
    // suffix[k] = most the coordinates k.. can still contribute
    let mut suffix = vec![0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + caps[k];
    }
    if suffix[0] < h {
        return BTreeSet::new();
    }
    let firsts: Vec<usize> = (0..=caps[0].min(h)).collect();
    let branches = exec.map(&firsts, |&m0| {
        let mut out = Vec::new();
        let mut sums = vec![0usize; 1 << n];
        let mut m = vec![0; n];
        if place(t, &caps, &suffix, 0, m0, h, &mut m, &mut sums) {
            descend(t, &caps, &suffix, 1, h - m0, &mut m, &mut sums, &mut out);
        }
        out
    });
    branches.into_iter().flatten().collect()
}

/// Assigns `m[k] = v` and checks every constraint whose subset has maximum `k`.
#[allow(clippy::too_many_arguments)]
fn place(
    t: &RankTable,
    caps: &[usize],
    suffix: &[usize],
    k: usize,
    v: usize,
    left: usize,
    m: &mut [usize],
    sums: &mut [usize],
) -> bool {
    if v > caps[k] || left - v > suffix[k + 1] {
        return false;
    }
    m[k] = v;
    let ambient = t.ambient_dim();
    let bit: usize = 1 << k;
    for lower in 0..bit {
        let mask = lower | bit;
        let s = sums[lower] + v;
        sums[mask] = s;
        if s + t.d(mask as Mask) >= ambient {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn descend(
    t: &RankTable,
    caps: &[usize],
    suffix: &[usize],
    k: usize,
    left: usize,
    m: &mut Vec<usize>,
    sums: &mut Vec<usize>,
    out: &mut Vec<DegreeVector>,
) {
    let n = t.n();
    if k == n {
        if left == 0 {
            out.push(m.clone());
        }
        return;
    }
    for v in 0..=caps[k].min(left) {
        if place(t, caps, suffix, k, v, left, m, sums) {
            descend(t, caps, suffix, k + 1, left - v, m, sums, out);
        }
    }
    m[k] = 0;
}

/// `p` by descending search from `r`, and `M(p)`.
pub fn dimension_and_support(t: &RankTable) -> MultidegreeSupport {
    dimension_and_support_with(t, Exec::default())
}

pub fn dimension_and_support_with(t: &RankTable, exec: Exec) -> MultidegreeSupport {
    for h in (0..=t.r()).rev() {
        let support = enumerate_m_with(t, h, exec);
        if !support.is_empty() {
            return MultidegreeSupport { p: h, support };
        }
    }
    // h = 0 is feasible for every table passing the bounds axiom.
    MultidegreeSupport { p: 0, support: BTreeSet::from([vec![0; t.n()]]) }
}

/// Each coordinate `k` lies in some `I_k` with `r+1 - Σ_{I_k} m = d_{I_k} + 1`.
pub fn is_tight(t: &RankTable, m: &[usize]) -> bool {
    let ambient = t.ambient_dim();
    let mut covered: Mask = 0;
    for mask in 1..=t.full() {
        if subset_sum(m, mask) + t.d(mask) + 1 == ambient {
            covered |= mask;
        }
    }
    covered == full_mask(t.n())
}

/// `M̂`: tight vectors among `M(1) ∪ ... ∪ M(p)`.
pub fn widehat_m(t: &RankTable) -> BTreeSet<DegreeVector> {
    widehat_m_with(t, Exec::default())
}

pub fn widehat_m_with(t: &RankTable, exec: Exec) -> BTreeSet<DegreeVector> {
    let p = dimension_and_support_with(t, exec).p;
    (1..=p).flat_map(|h| enumerate_m_with(t, h, exec)).filter(|m| is_tight(t, m)).collect()
}

/// Whether `M̂ = M(p)`. Vacuously true, with a warning, when `p = 0`.
pub fn check_matroid_identity(t: &RankTable) -> bool {
    let support = dimension_and_support(t);
    if support.p == 0 {
        log::warn!("p = 0: the tight set is empty by definition, identity check skipped");
        return true;
    }
    widehat_m(t) == support.support
}

/// `D(p)`: vectors with `u_i ≤ r - d_i` summing to `p`.
pub fn enumerate_d(t: &RankTable, p: usize) -> BTreeSet<DegreeVector> {
    let caps: Vec<usize> = (0..t.n()).map(|i| t.proj_dim(i)).collect();
    let mut out = BTreeSet::new();
    bounded_compositions(&caps, p, &mut vec![], &mut out);
    out
}

fn bounded_compositions(caps: &[usize], left: usize, prefix: &mut Vec<usize>, out: &mut BTreeSet<DegreeVector>) {
    let k = prefix.len();
    if k == caps.len() {
        if left == 0 {
            out.insert(prefix.clone());
        }
        return;
    }
    let rest: usize = caps[k + 1..].iter().sum();
    for v in left.saturating_sub(rest)..=caps[k].min(left) {
        prefix.push(v);
        bounded_compositions(caps, left - v, prefix, out);
        prefix.pop();
    }
}
