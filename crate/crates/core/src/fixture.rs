//! JSON fixtures: a dual graph (full matrix, or tree plus canonical divisor),
//! ideal divisors, and optional expected values for self-tests.
//!
//! Components and edges are 1-based in the file. Rationals are JSON integers
//! or strings `"p/q"` in lowest terms.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{DualGraph, IdealTuple, QDivisor, ZDivisor};
use crate::rational::{fmt_q, parse_q, Q};

const BUILTIN: &[(&str, &str)] = &[
    ("SMOOTH1", include_str!("../fixtures/SMOOTH1.json")),
    ("CHAIN10", include_str!("../fixtures/CHAIN10.json")),
    ("NEST14", include_str!("../fixtures/NEST14.json")),
    ("PROP16", include_str!("../fixtures/PROP16.json")),
    ("RAT6", include_str!("../fixtures/RAT6.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<Fixture> {
    let text = BUILTIN
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Parse(format!("unknown fixture {name}")))?;
    parse_fixture(text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    Matrix(Vec<Vec<i64>>),
    /// 0-based edges and the canonical divisor.
    Tree { edges: Vec<(usize, usize)>, canonical: QDivisor },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub canonical: Option<Vec<Q>>,
    pub fundamental_cycle: Option<Vec<i64>>,
    pub singularity: Option<String>,
    pub lct: Option<Vec<Q>>,
    /// 1-based component numbers.
    pub nest: Option<Vec<usize>>,
    pub lc_facets: Option<usize>,
    pub verdict: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub source: GraphSource,
    pub ideals: Vec<Vec<i64>>,
    pub labels: Option<Vec<String>>,
    pub notes: Option<String>,
    pub expected: Option<Expected>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fundamental_cycle: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    singularity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lct: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nest: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lc_facets: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verdict: Option<String>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFixture {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adjacency: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    canonical: Option<Vec<Value>>,
    ideals: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<RawExpected>,
}

fn rational_value(v: &Value, field: &str, idx: usize) -> Result<Q> {
    let ctx = |s: &str| Error::RationalFormat(format!("{field}[{}]: {s}", idx + 1));
    match v {
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        Value::String(s) => parse_q(s).map_err(|_| ctx(s)),
        other => Err(ctx(&other.to_string())),
    }
}

fn rational_list(vs: &[Value], field: &str) -> Result<Vec<Q>> {
    vs.iter().enumerate().map(|(i, v)| rational_value(v, field, i)).collect()
}

pub fn parse_fixture(text: &str) -> Result<Fixture> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let raw: RawFixture = serde_json::from_value(value).map_err(|e| Error::Schema(e.to_string()))?;
    let source = match (raw.matrix, raw.adjacency, raw.canonical) {
        (Some(m), None, None) => GraphSource::Matrix(m),
        (None, Some(adj), Some(k)) => {
            let canonical = QDivisor(rational_list(&k, "canonical")?);
            let n = canonical.len();
            let mut edges = Vec::with_capacity(adj.len());
            for (i, [a, b]) in adj.into_iter().enumerate() {
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(Error::Schema(format!("adjacency[{}]: vertex out of range 1..={n}", i + 1)));
                }
                edges.push((a - 1, b - 1));
            }
            GraphSource::Tree { edges, canonical }
        }
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            return Err(Error::Schema("give either matrix or adjacency with canonical, not both".into()))
        }
        (None, Some(_), None) => return Err(Error::Schema("adjacency requires canonical".into())),
        (None, None, Some(_)) => return Err(Error::Schema("canonical requires adjacency".into())),
        (None, None, None) => return Err(Error::Schema("missing matrix or adjacency".into())),
    };
    if raw.ideals.is_empty() {
        return Err(Error::Schema("ideals must be nonempty".into()));
    }
    let expected = raw
        .expected
        .map(|e| -> Result<Expected> {
            Ok(Expected {
                canonical: e.canonical.as_deref().map(|v| rational_list(v, "expected.canonical")).transpose()?,
                fundamental_cycle: e.fundamental_cycle,
                singularity: e.singularity,
                lct: e.lct.as_deref().map(|v| rational_list(v, "expected.lct")).transpose()?,
                nest: e.nest,
                lc_facets: e.lc_facets,
                verdict: e.verdict,
            })
        })
        .transpose()?;
    Ok(Fixture {
        name: raw.name,
        source,
        ideals: raw.ideals,
        labels: raw.labels,
        notes: raw.notes,
        expected,
    })
}

/// Reads a built-in fixture by name, or a JSON file by path.
pub fn load(name_or_path: &str) -> Result<Fixture> {
    if builtin_names().iter().any(|n| n.eq_ignore_ascii_case(name_or_path)) {
        return builtin(name_or_path);
    }
    let text = std::fs::read_to_string(name_or_path)
        .map_err(|e| Error::Parse(format!("cannot read {name_or_path}: {e}")))?;
    parse_fixture(&text)
}

fn q_values(v: &[Q]) -> Vec<Value> {
    v.iter()
        .map(|x| match x.to_integer().to_i64() {
            Some(i) if x.is_integer() => Value::from(i),
            _ => Value::from(fmt_q(x)),
        })
        .collect()
}

/// Serializes with normalized rationals; parsing the output reproduces an
/// equal fixture.
pub fn emit_fixture(f: &Fixture) -> String {
    let (matrix, adjacency, canonical) = match &f.source {
        GraphSource::Matrix(m) => (Some(m.clone()), None, None),
        GraphSource::Tree { edges, canonical } => (
            None,
            Some(edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect()),
            Some(q_values(&canonical.0)),
        ),
    };
    let raw = RawFixture {
        name: f.name.clone(),
        matrix,
        adjacency,
        canonical,
        ideals: f.ideals.clone(),
        labels: f.labels.clone(),
        notes: f.notes.clone(),
        expected: f.expected.as_ref().map(|e| RawExpected {
            canonical: e.canonical.as_deref().map(q_values),
            fundamental_cycle: e.fundamental_cycle.clone(),
            singularity: e.singularity.clone(),
            lct: e.lct.as_deref().map(q_values),
            nest: e.nest.clone(),
            lc_facets: e.lc_facets,
            verdict: e.verdict.clone(),
        }),
    };
    serde_json::to_string_pretty(&raw).expect("fixture serializes")
}

impl Fixture {
    pub fn graph(&self) -> Result<DualGraph> {
        let g = match &self.source {
            GraphSource::Matrix(m) => DualGraph::new(m.clone())?,
            GraphSource::Tree { edges, canonical } => DualGraph::from_adjacency(canonical.len(), edges, canonical)?,
        };
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => Ok(g),
        }
    }

    pub fn tuple(&self) -> Result<IdealTuple> {
        let g = Arc::new(self.graph()?);
        IdealTuple::new(g, self.ideals.iter().map(|v| ZDivisor::from_i64(v)).collect())
    }
}
