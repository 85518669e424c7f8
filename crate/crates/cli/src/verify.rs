use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{bail, Result};
use multiproj::arrangement::{mask_key, random_rank_table, Arrangement, Mask};
use multiproj::degrees::{dimension_and_support, enumerate_d, widehat_m, MultidegreeSupport};
use multiproj::detideal::{genericity_check, natural_projection_matrices, verify_initial, DetConfig, DetIdealError};
use multiproj::field::is_prime;
use multiproj::hilbert::{
    evaluate, hilbert_polynomial, hilbert_polynomial_naive, is_indicator, leading_multidegree, NAIVE_LIMIT,
};
use multiproj::monomial::{
    initial_ideal, initial_ideal_via_intersection, max_generator_length, membership_scan, standard_monomial_count,
    DEFAULT_GENERATOR_BUDGET,
};
use multiproj::oracle::{check_count, OracleError};
use multiproj::{Exec, FieldSpec, Instance, RankTable, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analyze::vector;
use crate::exit::is_budget;
use crate::Which;

const GRID_LIMIT: usize = 100_000;
const SCAN_LIMIT: usize = 50_000;
const STREAM_MATROID: u64 = 1;
const STREAM_GROEBNER: u64 = 3;
const STREAM_POINTCOUNT: u64 = 100;

pub struct Options {
    pub which: Which,
    pub seed: u64,
    pub q: u64,
    pub trials: usize,
    pub point_budget: u64,
    pub max_vars: usize,
}

#[derive(Debug, Serialize)]
pub struct Contract {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
    pub detail: Value,
}

impl Contract {
    fn new(name: impl Into<String>, verdict: Verdict, detail: Value) -> Self {
        Contract { name: name.into(), verdict, budget_exceeded: false, detail }
    }

    fn judged(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Contract::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, detail)
    }

    fn over_budget(name: impl Into<String>, detail: Value) -> Self {
        Contract { name: name.into(), verdict: Verdict::Abstain, budget_exceeded: true, detail }
    }
}

#[derive(Debug, Serialize)]
pub struct Suite {
    pub verdict: Verdict,
    pub contracts: Vec<Contract>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub mode: &'static str,
    pub seed: u64,
    pub q: u64,
    pub trials: usize,
    pub suites: BTreeMap<String, Suite>,
    pub skipped: BTreeMap<String, String>,
    pub verdict: Verdict,
}

fn combine<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Verdict {
    let mut out = Verdict::Pass;
    for v in verdicts {
        match v {
            Verdict::Fail => return Verdict::Fail,
            Verdict::Abstain => out = Verdict::Abstain,
            Verdict::Pass => {}
        }
    }
    out
}

impl VerifyReport {
    fn contracts(&self) -> impl Iterator<Item = &Contract> {
        self.suites.values().flat_map(|s| &s.contracts)
    }

    /// 0 all pass, 1 a failure or an abstention, 3 a budget limit was hit.
    pub fn exit_code(&self) -> u8 {
        if self.contracts().any(|c| c.verdict == Verdict::Fail) {
            1
        } else if self.contracts().any(|c| c.budget_exceeded) {
            3
        } else if self.verdict == Verdict::Pass {
            0
        } else {
            1
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn verify(inst: &Instance, opts: &Options) -> Result<VerifyReport> {
    let wanted: Vec<Which> = match opts.which {
        Which::All => vec![Which::Groebner, Which::Hilbert, Which::Matroid, Which::Pointcount],
        w => vec![w],
    };
    let explicit = opts.which != Which::All;
    let valid = inst.rank_table();
    let mut suites = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    for which in wanted {
        let name = match which {
            Which::Matroid => "matroid",
            Which::Hilbert => "hilbert",
            Which::Groebner => "groebner",
            Which::Pointcount => "pointcount",
            Which::All => unreachable!(),
        };
        if which == Which::Matroid {
            suites.insert(name.to_string(), matroid_suite(inst, opts)?);
            continue;
        }
        let t = match &valid {
            Ok(t) => t,
            Err(e) if explicit => bail!(e.clone()),
            Err(e) => {
                skipped.insert(name.to_string(), format!("rank table is invalid: {e}"));
                continue;
            }
        };
        let arrangement = inst.arrangement();
        let suite = match which {
            Which::Hilbert => hilbert_suite(t)?,
            Which::Groebner | Which::Pointcount => {
                let Some(a) = arrangement else {
                    let reason = "needs a concrete arrangement";
                    if explicit {
                        bail!("{name}: {reason}");
                    }
                    skipped.insert(name.to_string(), reason.to_string());
                    continue;
                };
                if which == Which::Groebner {
                    groebner_suite(a, opts)?
                } else {
                    pointcount_suite(a, t, opts)?
                }
            }
            _ => unreachable!(),
        };
        suites.insert(name.to_string(), suite);
    }
    let verdict = combine(suites.values().map(|s| &s.verdict));
    Ok(VerifyReport {
        mode: if inst.is_abstract() { "matroid" } else { "arrangement" },
        seed: opts.seed,
        q: opts.q,
        trials: opts.trials,
        suites,
        skipped,
        verdict,
    })
}

fn suite(contracts: Vec<Contract>) -> Suite {
    Suite { verdict: combine(contracts.iter().map(|c| &c.verdict)), contracts }
}

fn support_json(s: &MultidegreeSupport) -> Value {
    json!(s.support.iter().cloned().collect::<Vec<_>>())
}

fn matroid_suite(inst: &Instance, opts: &Options) -> Result<Suite> {
    let mut contracts = Vec::new();
    let t = match inst {
        Instance::Concrete(a) => a.rank_table()?,
        Instance::Abstract(t) => t.clone(),
    };
    let axioms = t.validate();
    contracts.push(Contract::judged(
        "rank_table_axioms",
        axioms.is_ok(),
        match &axioms {
            Ok(()) => json!({}),
            Err(e) => json!({ "error": e.to_string() }),
        },
    ));
    if axioms.is_ok() {
        let s = dimension_and_support(&t);
        let hat = widehat_m(&t);
        let name = "tight_set_equals_support";
        if s.p == 0 {
            contracts.push(Contract::new(name, Verdict::Pass, json!({ "p": 0, "note": "vacuous for p = 0" })));
        } else {
            contracts.push(Contract::judged(name, hat == s.support, json!({ "p": s.p, "support": support_json(&s), "tight": hat })));
        }
    }
    let mut rng = stream(opts.seed, STREAM_MATROID);
    let mut failures = Vec::new();
    let mut checked = 0;
    for _ in 0..opts.trials {
        let mut draws = 0;
        let sample = loop {
            draws += 1;
            let r = random_rank_table(t.n(), t.ambient_dim(), &mut rng)?;
            let s = dimension_and_support(&r);
            if s.p >= 1 || draws >= 100 {
                break (r, s);
            }
        };
        let (r, s) = sample;
        if s.p == 0 {
            continue;
        }
        checked += 1;
        if widehat_m(&r) != s.support {
            failures.push(json!(r.keyed()));
        }
    }
    contracts.push(Contract::judged(
        "random_tables",
        failures.is_empty(),
        json!({ "stream": STREAM_MATROID, "checked": checked, "failures": failures }),
    ));
    Ok(suite(contracts))
}

fn grid(n: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|u: Vec<usize>| (0..=top).map(move |x| [u.clone(), vec![x]].concat())).collect();
    }
    out
}

fn hilbert_suite(t: &RankTable) -> Result<Suite> {
    let mut contracts = Vec::new();
    let s = dimension_and_support(t);
    let ideal = initial_ideal(t);
    let hp = hilbert_polynomial(&s)?;

    let name = "hilbert_equals_standard_count";
    let points = 5usize.checked_pow(t.n() as u32).unwrap_or(usize::MAX);
    if points > GRID_LIMIT {
        contracts.push(Contract::over_budget(name, json!({ "points": points, "limit": GRID_LIMIT })));
    } else {
        let mut mismatches = Vec::new();
        let mut budget = false;
        for u in grid(t.n(), 4) {
            match standard_monomial_count(&ideal, t, &u) {
                Ok(count) => {
                    let value = evaluate(&hp, &u);
                    if value != count.into() {
                        mismatches.push(json!({ "u": u, "hilbert": value.to_string(), "count": count }));
                    }
                }
                Err(e) if is_budget(&e) => budget = true,
                Err(e) => return Err(e.into()),
            }
        }
        let detail = json!({ "points": points, "mismatches": mismatches.iter().take(5).collect::<Vec<_>>() });
        contracts.push(if budget && mismatches.is_empty() {
            Contract::over_budget(name, detail)
        } else {
            Contract::judged(name, mismatches.is_empty(), detail)
        });
    }

    let name = "hilbert_equals_naive_expansion";
    if s.support.len() > NAIVE_LIMIT {
        contracts.push(Contract::over_budget(name, json!({ "components": s.support.len(), "limit": NAIVE_LIMIT })));
    } else {
        let naive = hilbert_polynomial_naive(&s)?;
        contracts.push(Contract::judged(name, naive == hp, json!({ "terms": hp.len() })));
    }

    let lead = leading_multidegree(&hp, s.p)?;
    contracts.push(Contract::judged("leading_multidegree_indicator", is_indicator(&lead, &s), json!({ "p": s.p })));

    let via = initial_ideal_via_intersection(t, DEFAULT_GENERATOR_BUDGET)?;
    contracts.push(Contract::judged(
        "initial_ideal_equals_intersection",
        via == ideal,
        json!({ "irredundant": ideal.rendered(), "intersection": via.rendered() }),
    ));
    let longest = max_generator_length(&ideal);
    let bound = t.ambient_dim().min(t.n());
    contracts.push(Contract::judged("generator_length_bound", longest <= bound, json!({ "longest": longest, "bound": bound })));

    let name = "membership_trichotomy";
    let total: usize = t.block_sizes().iter().map(|b| b + 1).product();
    if total > SCAN_LIMIT {
        contracts.push(Contract::over_budget(name, json!({ "monomials": total, "limit": SCAN_LIMIT })));
    } else {
        match membership_scan(t, &ideal, &s.support) {
            Ok(n) => contracts.push(Contract::judged(name, true, json!({ "monomials": n }))),
            Err(m) => contracts.push(Contract::judged(name, false, json!({ "monomials": total, "disagreement": m.ell }))),
        }
    }
    Ok(suite(contracts))
}

fn groebner_suite(a: &Arrangement, opts: &Options) -> Result<Suite> {
    let t = a.rank_table()?;
    let mut cfg = DetConfig::default();
    cfg.groebner.max_vars = opts.max_vars;
    let natural = genericity_check(&natural_projection_matrices(a), &t, cfg.genericity_samples, &mut stream(opts.seed, STREAM_GROEBNER + 1000));
    let natural_json = json!({ "passed": natural.passed, "witness": natural.witness });
    let mut rng = stream(opts.seed, STREAM_GROEBNER);
    let name = "initial_ideal_of_minors";
    let contract = match verify_initial(a, &mut rng, &cfg) {
        Ok(check) => Contract::judged(
            name,
            check.equal,
            json!({
                "stream": STREAM_GROEBNER,
                "attempts": check.attempts,
                "genericity": { "exhaustive": check.genericity.exhaustive, "subsets_checked": check.genericity.subsets_checked },
                "natural_coordinates": natural_json,
                "minors": check.minors,
                "basis_size": check.basis_size,
                "computed": check.computed,
                "expected": check.expected.rendered(),
            }),
        ),
        Err(DetIdealError::GenericityNotAchieved(k)) => Contract::new(
            name,
            Verdict::Abstain,
            json!({ "stream": STREAM_GROEBNER, "error": format!("genericity not reached after {k} re-coordinatizations"), "natural_coordinates": natural_json }),
        ),
        Err(e) if is_budget(&e) => Contract::over_budget(name, json!({ "error": e.to_string() })),
        Err(e) => return Err(e.into()),
    };
    Ok(suite(vec![contract]))
}

fn next_prime(mut q: u64) -> u64 {
    while !is_prime(q) {
        q += 1;
    }
    q
}

/// Reduction of `a` modulo the first prime `≥ q` that preserves the rank table.
fn reduce_preserving(a: &Arrangement, t: &RankTable, q: u64) -> Result<(Arrangement, u64)> {
    let mut q = next_prime(q.max(2));
    for _ in 0..50 {
        if let Ok(b) = a.reduce_mod(q) {
            if b.rank_table().as_ref() == Ok(t) {
                return Ok((b, q));
            }
        }
        q = next_prime(q + 1);
    }
    bail!("no prime near {q} preserves the rank table")
}

fn pointcount_suite(a: &Arrangement, t: &RankTable, opts: &Options) -> Result<Suite> {
    let s = dimension_and_support(t);
    let rational = a.field() == FieldSpec::Rational;
    let (base, base_q) = match a.field() {
        FieldSpec::Prime { q } => (a.clone(), q),
        FieldSpec::Rational => reduce_preserving(a, t, opts.q)?,
    };
    let mut contracts = Vec::new();
    let mut observed_max = 0u64;
    for trial in 0..opts.trials as u64 {
        let id = STREAM_POINTCOUNT + trial;
        let mut rng = stream(opts.seed, id);
        for c in enumerate_d(t, s.p) {
            let expected = s.multidegree(&c);
            let name = format!("c={} trial={trial}", vector(&c));
            let (mut arr, mut q) = (base.clone(), base_q);
            let mut escalations = 0;
            let contract = loop {
                match check_count(&arr, &c, expected, &mut rng, opts.point_budget, Exec::default()) {
                    Ok(r) => {
                        observed_max = observed_max.max(r.observed.unwrap_or(0));
                        let dims: BTreeMap<String, usize> = r.section_dims.iter().map(|(&m, &d)| (mask_key(m), d)).collect();
                        let target = r.target.map(|(m, met): (Mask, bool)| json!({ "subset": mask_key(m), "met": met }));
                        break Contract::new(
                            name,
                            r.verdict,
                            json!({
                                "stream": id,
                                "q": q,
                                "expected": expected,
                                "observed": r.observed,
                                "attempts": r.attempts,
                                "enumerated": r.enumerated.to_string(),
                                "section_dims": dims,
                                "target": target,
                            }),
                        );
                    }
                    Err(OracleError::RetryBudgetExhausted(k)) if rational && escalations < 2 => {
                        log::info!("{name}: no generic section over F_{q} after {k} samples, raising q");
                        escalations += 1;
                        (arr, q) = reduce_preserving(a, t, 2 * q + 1)?;
                    }
                    Err(OracleError::RetryBudgetExhausted(k)) => {
                        break Contract::new(name, Verdict::Abstain, json!({ "stream": id, "q": q, "error": format!("no generic section after {k} samples") }));
                    }
                    Err(e @ OracleError::BudgetExceeded { .. }) => {
                        break Contract::over_budget(name, json!({ "stream": id, "q": q, "error": e.to_string() }));
                    }
                    Err(e) => return Err(e.into()),
                }
            };
            contracts.push(contract);
        }
    }
    contracts.push(Contract::judged("multiplicity_free", observed_max <= 1, json!({ "max_observed": observed_max })));
    Ok(suite(contracts))
}

pub fn summary(r: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verify ({} mode), seed {}, q {}, trials {}", r.mode, r.seed, r.q, r.trials);
    for (name, suite) in &r.suites {
        for c in &suite.contracts {
            let note = match (c.verdict, c.budget_exceeded) {
                (Verdict::Pass, _) => String::new(),
                (_, true) => format!(" (budget) {}", c.detail),
                _ => format!(" {}", c.detail),
            };
            let _ = writeln!(s, "{name:<11} {:<36} {}{note}", c.name, c.verdict);
        }
        let _ = writeln!(s, "{name:<11} {:<36} {}", "[suite]", suite.verdict);
    }
    for (name, why) in &r.skipped {
        let _ = writeln!(s, "{name:<11} skipped: {why}");
    }
    let _ = writeln!(s, "overall {}", r.verdict);
    s
}
