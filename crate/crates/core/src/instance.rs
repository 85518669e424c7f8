//! Instance documents: a concrete arrangement or an abstract rank table, as JSON.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, RankTable};
use crate::field::FieldSpec;
use crate::linalg::{Matrix, SampleConfig, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("no valid arrangement after {0} samples")]
    RetryBudgetExhausted(usize),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Field { field: field.into(), message: message.into() }
}

/// Scalar entries may be written as strings (`"-3/2"`) or plain integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Int(i64),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::Text(s) => s.clone(),
            Entry::Int(i) => i.to_string(),
        }
    }
}

/// The on-disk document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub field: FieldSpec,
    pub ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspaces: Option<Vec<Vec<Vec<Entry>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_table: Option<BTreeMap<String, usize>>,
}

/// A parsed instance. Abstract tables are kept unvalidated so that axiom
/// failures can be reported as verdicts rather than load errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Concrete(Arrangement),
    Abstract(RankTable),
}

impl Instance {
    pub fn parse(text: &str) -> Result<Instance, InstanceError> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| InstanceError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
        Instance::from_file(&file)
    }

    pub fn from_file(file: &InstanceFile) -> Result<Instance, InstanceError> {
        let field = file.field.validate().map_err(|e| field_err("field", e.to_string()))?;
        if file.ambient_dim == 0 {
            return Err(field_err("ambient_dim", "must be at least 1"));
        }
        match (&file.subspaces, &file.rank_table) {
            (Some(_), Some(_)) => Err(field_err("subspaces", "give either `subspaces` or `rank_table`, not both")),
            (None, None) => Err(field_err("subspaces", "one of `subspaces` or `rank_table` is required")),
            (Some(subs), None) => {
                if subs.is_empty() {
                    return Err(field_err("subspaces", "at least one subspace is required"));
                }
                if file.n.is_some_and(|n| n != subs.len()) {
                    return Err(field_err("n", format!("says {} but {} subspaces are listed", file.n.unwrap(), subs.len())));
                }
                let mut out = Vec::with_capacity(subs.len());
                for (i, rows) in subs.iter().enumerate() {
                    let mut parsed = Vec::with_capacity(rows.len());
                    for (j, row) in rows.iter().enumerate() {
                        let at = || format!("subspaces[{i}][{j}]");
                        if row.len() != file.ambient_dim {
                            return Err(field_err(at(), format!("has {} entries, expected {}", row.len(), file.ambient_dim)));
                        }
                        let v = row
                            .iter()
                            .map(|e| field.parse(&e.text()))
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| field_err(at(), e.to_string()))?;
                        parsed.push(v);
                    }
                    let m = Matrix::from_rows(field, file.ambient_dim, parsed).map_err(|e| field_err(format!("subspaces[{i}]"), e.to_string()))?;
                    out.push(Subspace::row_span(&m));
                }
                Ok(Instance::Concrete(Arrangement::checked(field, file.ambient_dim, out)?))
            }
            (None, Some(table)) => {
                let n = file.n.ok_or_else(|| field_err("n", "required with `rank_table`"))?;
                if n == 0 {
                    return Err(field_err("n", "must be at least 1"));
                }
                Ok(Instance::Abstract(RankTable::from_keyed(n, file.ambient_dim, table)?))
            }
        }
    }

    /// Rank table, validated for abstract input.
    pub fn rank_table(&self) -> Result<RankTable, ArrangementError> {
        match self {
            Instance::Concrete(a) => a.rank_table(),
            Instance::Abstract(t) => {
                t.validate()?;
                Ok(t.clone())
            }
        }
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self, Instance::Abstract(_))
    }

    pub fn arrangement(&self) -> Option<&Arrangement> {
        match self {
            Instance::Concrete(a) => Some(a),
            Instance::Abstract(_) => None,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Instance::Concrete(a) => a.field(),
            Instance::Abstract(_) => FieldSpec::Rational,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Instance::Concrete(a) => a.ambient_dim(),
            Instance::Abstract(t) => t.ambient_dim(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Concrete(a) => a.n(),
            Instance::Abstract(t) => t.n(),
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        match self {
            Instance::Concrete(a) => InstanceFile {
                field: a.field(),
                ambient_dim: a.ambient_dim(),
                n: None,
                subspaces: Some(
                    a.subspaces()
                        .iter()
                        .map(|s| s.basis_vectors().iter().map(|v| v.iter().map(|x| Entry::Text(x.to_string())).collect()).collect())
                        .collect(),
                ),
                rank_table: None,
            },
            Instance::Abstract(t) => InstanceFile {
                field: FieldSpec::Rational,
                ambient_dim: t.ambient_dim(),
                n: Some(t.n()),
                subspaces: None,
                rank_table: Some(t.keyed()),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes") + "\n"
    }
}

/// Random arrangement with the requested subspace dimensions, resampled until
/// it validates. Rational entries are small integers.
pub fn random_arrangement<R: Rng + ?Sized>(
    field: FieldSpec,
    ambient: usize,
    dims: &[usize],
    rng: &mut R,
    retries: usize,
) -> Result<Arrangement, InstanceError> {
    if dims.is_empty() {
        return Err(field_err("dims", "at least one dimension is required"));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > ambient) {
        return Err(field_err("dims", format!("{d} exceeds the ambient dimension {ambient}")));
    }
    let cfg = SampleConfig { rational_bound: 3, max_retries: 64 };
    for _ in 0..retries {
        let subs = dims.iter().map(|&d| Subspace::random(field, ambient, d, rng, &cfg)).collect::<Result<Vec<_>, _>>();
        let Ok(subs) = subs else { continue };
        if let Ok(a) = Arrangement::checked(field, ambient, subs) {
            return Ok(a);
        }
    }
    Err(InstanceError::RetryBudgetExhausted(retries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const GOLDEN: &str = r#"{
  "field": {"type": "rational"},
  "ambient_dim": 5,
  "subspaces": [
    [["1","0","0","0","0"], ["0","1","0","0","0"]],
    [["1","0","0","0","0"], ["0","0","1","0","0"]],
    [[0,0,0,0,1]]
  ]
}"#;

    #[test]
    fn parses_concrete() {
        let inst = Instance::parse(GOLDEN).unwrap();
        assert!(!inst.is_abstract());
        let t = inst.rank_table().unwrap();
        assert_eq!(t.values(), &[2, 2, 1, 1, 0, 0, 0]);
        let again = Instance::parse(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn parses_abstract_without_validating() {
        let text = r#"{"field":{"type":"rational"},"ambient_dim":3,"n":2,"rank_table":{"1":1,"2":1,"1,2":1}}"#;
        let inst = Instance::parse(text).unwrap();
        assert!(inst.is_abstract());
        assert!(matches!(inst.rank_table(), Err(ArrangementError::AxiomViolation { .. })));
        let again = Instance::parse(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn diagnostics() {
        let e = Instance::parse("{\n \"field\": {\"type\": \"rational\"},\n \"ambient_dim\": 3,\n}").unwrap_err();
        assert!(matches!(e, InstanceError::Parse { line: 4, .. }), "{e}");
        let e = Instance::parse(r#"{"field":{"type":"rational"},"ambient_dim":3}"#).unwrap_err();
        assert!(matches!(e, InstanceError::Field { ref field, .. } if field == "subspaces"));
        let e = Instance::parse(r#"{"field":{"type":"rational"},"ambient_dim":2,"subspaces":[[["1","x"]]]}"#).unwrap_err();
        assert!(matches!(e, InstanceError::Field { ref field, .. } if field == "subspaces[0][0]"), "{e}");
        let e = Instance::parse(r#"{"field":{"type":"prime","q":12},"ambient_dim":2,"subspaces":[[]]}"#).unwrap_err();
        assert!(matches!(e, InstanceError::Field { ref field, .. } if field == "field"));
        let e = Instance::parse(r#"{"field":{"type":"rational"},"ambient_dim":3,"subspaces":[[["1","0","0"]],[["1","0","0"]]]}"#).unwrap_err();
        assert!(matches!(e, InstanceError::Arrangement(ArrangementError::NonTrivialCommonIntersection { dim: 1 })));
        let e = Instance::parse(r#"{"field":{"type":"rational"},"ambient_dim":3,"rank_table":{"1":0}}"#).unwrap_err();
        assert!(matches!(e, InstanceError::Field { ref field, .. } if field == "n"));
    }

    #[test]
    fn generator_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_arrangement(FieldSpec::Rational, 5, &[2, 2, 1], &mut rng, 100).unwrap();
        assert_eq!(a.subspaces().iter().map(Subspace::dim).collect::<Vec<_>>(), vec![2, 2, 1]);
        let inst = Instance::Concrete(a);
        Instance::parse(&inst.to_json()).unwrap().rank_table().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        random_arrangement(FieldSpec::Rational, 3, &[1, 1], &mut rng, 100).unwrap();
        let f = FieldSpec::prime(101).unwrap();
        random_arrangement(f, 4, &[1, 2, 1], &mut rng, 100).unwrap();
        assert!(matches!(
            random_arrangement(FieldSpec::Rational, 2, &[2, 2], &mut rng, 20),
            Err(InstanceError::RetryBudgetExhausted(20))
        ));
    }
}
