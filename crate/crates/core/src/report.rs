//! JSON reports written by the command-line front end.
//!
//! Every report is an object `{schema_version, command, result}`. Key order
//! follows struct field order, and maps are sorted, so equal inputs give
//! byte-identical output. The checked-in `schema/report.schema.json`
//! describes the layout.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classify::{
    classify_binary_loose, ternary_census, BinaryLooseVerdict, ClassifyError, ColumnCensus, Falsification,
};
use crate::matroid::{ElementStatus, LinearMatroid, MatroidError, CIRCUIT_LIMIT};
use crate::verify::SuiteOutcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: CommandEcho,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(name: &str, args: &[String], result: T) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: CommandEcho {
                name: name.to_string(),
                args: args.to_vec(),
            },
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// What the classifiers said about one chosen element.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementReport {
    BinaryVerdict(BinaryLooseVerdict),
    TernaryCensus(ColumnCensus),
    Falsification(Falsification),
    NotApplicable { element: String, reason: String },
}

impl ElementReport {
    pub fn is_falsification(&self) -> bool {
        matches!(self, ElementReport::Falsification(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub q: u8,
    pub rows: usize,
    pub rank: usize,
    pub size: usize,
    pub simple: bool,
    pub coloops: Vec<String>,
    /// Smallest circuit size, `None` when every element is a coloop.
    pub girth: Option<usize>,
    pub paving: bool,
    pub sparse_paving: bool,
    pub elements: Vec<ElementStatus>,
    pub designated: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuits: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ElementReport>,
}

/// Structural summary of `m`, with its circuits when `circuits` is set and
/// a classifier run on `element` when one is named.
pub fn analyze(
    m: &LinearMatroid,
    designated: &[(String, String)],
    circuits: bool,
    element: Option<&str>,
) -> Result<AnalyzeReport, MatroidError> {
    if let Some(e) = element {
        m.index_of(e)?;
    }
    let elements: Vec<ElementStatus> = (0..m.len()).map(|j| m.element_status_idx(j)).collect();
    let girth = elements.iter().filter_map(|s| s.girth_through).min();
    let circuits = if circuits {
        if m.len() > CIRCUIT_LIMIT {
            return Err(MatroidError::TooLarge {
                op: "circuit enumeration",
                n: m.len(),
                limit: CIRCUIT_LIMIT,
            });
        }
        Some(m.circuit_labels(None)?)
    } else {
        None
    };
    let paving = m.is_paving();
    Ok(AnalyzeReport {
        q: m.q(),
        rows: m.rep().rows(),
        rank: m.rank(),
        size: m.len(),
        simple: m.is_simple(),
        coloops: m.labels_of(m.coloops()),
        girth,
        paving,
        sparse_paving: paving && m.is_sparse_paving(),
        elements,
        designated: designated.iter().cloned().collect(),
        circuits,
        classification: element.map(|e| classify_element(m, e)),
    })
}

/// The binary classifier for q = 2, the column census for q = 3.
pub fn classify_element(m: &LinearMatroid, e: &str) -> ElementReport {
    let wrap = |err: ClassifyError| match err {
        ClassifyError::Falsification(f) => ElementReport::Falsification(*f),
        other => ElementReport::NotApplicable {
            element: e.to_string(),
            reason: other.to_string(),
        },
    };
    match m.q() {
        2 => classify_binary_loose(m, e).map_or_else(wrap, ElementReport::BinaryVerdict),
        3 => ternary_census(m, e).map_or_else(wrap, ElementReport::TernaryCensus),
        q => ElementReport::NotApplicable {
            element: e.to_string(),
            reason: format!("no element classifier over GF({q})"),
        },
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub isomorphic: bool,
    /// `(a, b)` label pairs of the isomorphism found.
    pub map: Vec<(String, String)>,
}

/// Suite outcome without its wall-clock time.
pub fn verify_result(outcome: &SuiteOutcome) -> serde_json::Value {
    let mut v = serde_json::to_value(outcome).expect("outcomes serialize");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
    }
    v
}
