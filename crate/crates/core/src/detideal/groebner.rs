//! Buchberger's algorithm under [`LexOrder`].

use std::collections::BTreeSet;

use thiserror::Error;

use super::poly::{LexOrder, Monomial, SparsePoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerConfig {
    pub max_vars: usize,
    /// Cap on the terms of any intermediate polynomial.
    pub max_terms: usize,
    /// Cap on the basis size before inter-reduction.
    pub max_basis: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_vars: 12, max_terms: 50_000, max_basis: 5_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("{vars} variables exceed the limit of {limit}")]
    VariableBudgetExceeded { vars: usize, limit: usize },
    #[error("{what} exceeded the cap of {limit} ({diagnostic})")]
    ExpansionBudgetExceeded { what: &'static str, limit: usize, diagnostic: String },
}

fn lt(p: &SparsePoly) -> &Monomial {
    p.leading_monomial().expect("nonzero basis element")
}

/// `lcm/lt(f) · f / lc(f) - lcm/lt(g) · g / lc(g)`.
pub fn s_polynomial(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    let (mf, cf) = f.leading().expect("nonzero");
    let (mg, cg) = g.leading().expect("nonzero");
    let l = mf.lcm(mg);
    let zero = SparsePoly::zero(f.field(), f.nvars());
    let a = zero.sub_scaled(&-cf.inv().expect("nonzero"), &l.div(mf), f);
    a.sub_scaled(&cg.inv().expect("nonzero"), &l.div(mg), g)
}

/// Full reduction of `p` modulo `basis`: no term of the result is divisible by a leading term.
pub fn normal_form(p: &SparsePoly, basis: &[SparsePoly], max_terms: usize) -> Result<SparsePoly, GroebnerError> {
    let mut rest = p.clone();
    let mut done = SparsePoly::zero(p.field(), p.nvars());
    while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| lt(g).divides(&m)) {
            Some(g) => {
                let (gm, gc) = g.leading().expect("nonzero");
                let factor = &c / gc;
                rest = rest.sub_scaled(&factor, &m.div(gm), g);
                if rest.len() > max_terms {
                    return Err(GroebnerError::ExpansionBudgetExceeded {
                        what: "intermediate polynomial",
                        limit: max_terms,
                        diagnostic: format!("{} terms while reducing against {} elements", rest.len(), basis.len()),
                    });
                }
            }
            None => {
                rest.add_term(m.clone(), -c.clone());
                done.add_term(m, c);
            }
        }
    }
    Ok(done)
}

/// Pair queue entry; the derived order is the selection order: smallest lcm
/// degree first, then smallest lcm in lex, then indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

/// Reduced Gröbner basis, monic, sorted by leading term ascending.
pub fn buchberger(gens: &[SparsePoly], ord: &LexOrder, cfg: &GroebnerConfig) -> Result<Vec<SparsePoly>, GroebnerError> {
    if ord.num_vars() > cfg.max_vars {
        return Err(GroebnerError::VariableBudgetExceeded { vars: ord.num_vars(), limit: cfg.max_vars });
    }
    let mut basis: Vec<SparsePoly> = Vec::new();
    let mut queue: BTreeSet<Pair> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |basis: &mut Vec<SparsePoly>, queue: &mut BTreeSet<Pair>, pending: &mut BTreeSet<(usize, usize)>, g: SparsePoly| {
        let j = basis.len();
        for (i, b) in basis.iter().enumerate() {
            let lcm = lt(b).lcm(lt(&g));
            queue.insert(Pair { degree: lcm.degree(), lcm, i, j });
            pending.insert((i, j));
        }
        basis.push(g);
    };

    for g in gens.iter().filter(|g| !g.is_zero()) {
        let r = normal_form(g, &basis, cfg.max_terms)?;
        if !r.is_zero() {
            push(&mut basis, &mut queue, &mut pending, r.monic());
        }
    }

    while let Some(pair) = queue.pop_first() {
        pending.remove(&(pair.i, pair.j));
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);
        if lt(fi).coprime(lt(fj)) {
            continue;
        }
        // chain criterion: some g_k divides the lcm and both side pairs are already treated
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && lt(&basis[k]).divides(&pair.lcm)
                && !pending.contains(&key(pair.i, k))
                && !pending.contains(&key(pair.j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(fi, fj);
        let r = normal_form(&s, &basis, cfg.max_terms)?;
        if !r.is_zero() {
            if basis.len() >= cfg.max_basis {
                return Err(GroebnerError::ExpansionBudgetExceeded {
                    what: "basis size",
                    limit: cfg.max_basis,
                    diagnostic: format!("{} pairs still queued", queue.len()),
                });
            }
            push(&mut basis, &mut queue, &mut pending, r.monic());
        }
    }
    reduce_basis(basis, cfg)
}

/// Drops elements whose leading term is divisible by another's, then fully
/// reduces each survivor modulo the others.
fn reduce_basis(basis: Vec<SparsePoly>, cfg: &GroebnerConfig) -> Result<Vec<SparsePoly>, GroebnerError> {
    let mut minimal: Vec<SparsePoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            l != k && lt(h).divides(lt(g)) && (lt(h) != lt(g) || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<SparsePoly> =
            minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, h)| h.clone()).collect();
        let g = &minimal[k];
        let (m, c) = g.leading().expect("nonzero");
        // The leading term survives: no other leading term divides it.
        let tail = {
            let mut t = g.clone();
            t.add_term(m.clone(), -c.clone());
            t
        };
        let mut r = normal_form(&tail, &others, cfg.max_terms)?;
        r.add_term(m.clone(), c.clone());
        out.push(r.monic());
    }
    out.sort_by(|a, b| lt(a).cmp(lt(b)));
    Ok(out)
}

/// Every S-polynomial and every generator reduces to zero.
pub fn is_groebner_basis_of(basis: &[SparsePoly], gens: &[SparsePoly], cfg: &GroebnerConfig) -> Result<bool, GroebnerError> {
    for g in gens {
        if !normal_form(g, basis, cfg.max_terms)?.is_zero() {
            return Ok(false);
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if !normal_form(&s_polynomial(&basis[i], &basis[j]), basis, cfg.max_terms)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::monomial::BlockVar;

    const Q: FieldSpec = FieldSpec::Rational;

    fn xy() -> (LexOrder, BlockVar, BlockVar) {
        // two one-variable blocks: x = x[2,1] ≻ y = x[1,1]
        let ord = LexOrder::new(vec![1, 1]);
        (ord, BlockVar { block: 1, index: 1 }, BlockVar { block: 0, index: 1 })
    }

    #[test]
    fn textbook_pair() {
        let (ord, x, y) = xy();
        let m = |v: &[(BlockVar, u32)]| ord.monomial(v);
        let f = SparsePoly::from_terms(Q, 2, [(m(&[(x, 2)]), Q.one()), (m(&[(y, 1)]), Q.from_i64(-1))]);
        let g = SparsePoly::from_terms(Q, 2, [(m(&[(y, 2)]), Q.one()), (m(&[]), Q.from_i64(-1))]);
        let cfg = GroebnerConfig::default();
        let gb = buchberger(&[f.clone(), g.clone()], &ord, &cfg).unwrap();
        let lts: Vec<String> = gb.iter().map(|p| ord.render(p.leading_monomial().unwrap())).collect();
        assert_eq!(lts, vec!["x[1,1]^2", "x[2,1]^2"]);
        assert!(is_groebner_basis_of(&gb, &[f, g], &cfg).unwrap());
    }

    #[test]
    fn principal_is_monic() {
        let (ord, x, y) = xy();
        let f = SparsePoly::from_terms(Q, 2, [(ord.monomial(&[(x, 1), (y, 1)]), Q.from_i64(3)), (ord.monomial(&[(y, 2)]), Q.from_i64(6))]);
        let gb = buchberger(&[f.clone()], &ord, &GroebnerConfig::default()).unwrap();
        assert_eq!(gb, vec![f.monic()]);
        assert_eq!(gb[0].render(&ord), "1*x[1,1]*x[2,1] + 2*x[1,1]^2");
    }

    #[test]
    fn variable_budget() {
        let ord = LexOrder::new(vec![7, 7]);
        let cfg = GroebnerConfig::default();
        assert!(matches!(buchberger(&[], &ord, &cfg), Err(GroebnerError::VariableBudgetExceeded { vars: 14, limit: 12 })));
    }

    #[test]
    fn lex_significance() {
        let ord = LexOrder::new(vec![2, 2]);
        let v = |block, index| BlockVar { block, index };
        let mono = |b: BlockVar| ord.monomial(&[(b, 1)]);
        // x[2,1] ≻ x[2,2] ≻ x[1,1] ≻ x[1,2]
        assert!(mono(v(1, 1)) > mono(v(1, 2)));
        assert!(mono(v(1, 2)) > mono(v(0, 1)));
        assert!(mono(v(0, 1)) > mono(v(0, 2)));
        assert!(ord.monomial(&[(v(0, 2), 5)]) < mono(v(0, 1)));
    }
}
