use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use multiproj::degrees::{check_matroid_identity, dimension_and_support, DegreeVector};
use multiproj::hilbert::{hilbert_polynomial, is_indicator, is_multiplicity_free, leading_multidegree};
use multiproj::monomial::{
    initial_ideal, initial_ideal_via_intersection, max_generator_length, prime_component, BlockMonomialIdeal,
    DEFAULT_GENERATOR_BUDGET,
};
use multiproj::{Instance, InstanceFile, RankTable, Verdict};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Component {
    pub m: DegreeVector,
    pub prime: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Term {
    pub coeff: i64,
    pub ell: DegreeVector,
}

#[derive(Debug, Serialize)]
pub struct Hilbert {
    pub text: String,
    pub terms: Vec<Term>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// Everything derived from one instance; fields serialize in declaration order.
#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub instance: InstanceFile,
    /// `arrangement`, or `matroid` for abstract rank tables.
    pub mode: &'static str,
    pub n: usize,
    pub r: usize,
    pub rank_table: BTreeMap<String, usize>,
    pub p: usize,
    pub support: Vec<DegreeVector>,
    pub initial_ideal: Vec<String>,
    pub max_generator_length: usize,
    pub components: Vec<Component>,
    pub hilbert_polynomial: Hilbert,
    pub checks: Vec<Check>,
}

fn check(name: &str, ok: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), verdict: if ok { Verdict::Pass } else { Verdict::Fail }, detail: detail.into() }
}

pub fn render_components(t: &RankTable, support: &[DegreeVector]) -> Result<Vec<Component>> {
    support
        .iter()
        .map(|m| Ok(Component { m: m.clone(), prime: prime_component(t, m)?.into_iter().map(|v| v.to_string()).collect() }))
        .collect()
}

pub fn analyze(inst: &Instance) -> Result<AnalysisReport> {
    let t = inst.rank_table()?;
    let support = dimension_and_support(&t);
    let ideal = initial_ideal(&t);
    let hp = hilbert_polynomial(&support)?;
    let list: Vec<DegreeVector> = support.support.iter().cloned().collect();

    let mut checks = Vec::new();
    let identity = check_matroid_identity(&t);
    checks.push(check("matroid_identity", identity, "tight vectors coincide with M(p)"));
    let via: BlockMonomialIdeal = initial_ideal_via_intersection(&t, DEFAULT_GENERATOR_BUDGET)?;
    checks.push(check("initial_ideal_intersection", via == ideal, "irredundant generators against the intersection of P_(m)"));
    let longest = max_generator_length(&ideal);
    let bound = t.ambient_dim().min(t.n());
    checks.push(check("generator_length_bound", longest <= bound, format!("{longest} <= min(r+1, n) = {bound}")));
    let lead = leading_multidegree(&hp, support.p)?;
    checks.push(check("leading_multidegree", is_indicator(&lead, &support), "top-degree part is the indicator of M(p)"));
    checks.push(check("multiplicity_free", is_multiplicity_free(&lead), "multidegree values lie in {0, 1}"));

    Ok(AnalysisReport {
        instance: inst.to_file(),
        mode: if inst.is_abstract() { "matroid" } else { "arrangement" },
        n: t.n(),
        r: t.r(),
        rank_table: t.keyed(),
        p: support.p,
        components: render_components(&t, &list)?,
        support: list,
        initial_ideal: ideal.rendered(),
        max_generator_length: longest,
        hilbert_polynomial: Hilbert {
            text: hp.to_string(),
            terms: hp.terms().into_iter().map(|b| Term { coeff: b.coeff, ell: b.ell }).collect(),
        },
        checks,
    })
}

pub fn vector(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

pub fn summary(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "instance: K^{} over {}, n = {} ({} mode)", r.r + 1, r.instance.field, r.n, r.mode);
    let table: Vec<String> = r.rank_table.iter().map(|(k, v)| format!("d{{{k}}}={v}")).collect();
    let _ = writeln!(s, "rank table: {}", table.join(" "));
    let _ = writeln!(s, "dimension p = {}", r.p);
    let support: Vec<String> = r.support.iter().map(|m| vector(m)).collect();
    let _ = writeln!(s, "M(p) [{}]: {}", r.support.len(), support.join(" "));
    let gens = if r.initial_ideal.is_empty() { "0".to_string() } else { r.initial_ideal.join(", ") };
    let _ = writeln!(s, "initial ideal [{} generators]: <{gens}>", r.initial_ideal.len());
    let _ = writeln!(s, "Hilbert polynomial: {}", r.hilbert_polynomial.text);
    for c in &r.checks {
        let _ = writeln!(s, "check {:<28} {}", c.name, c.verdict);
    }
    s
}
