//! Problem-definition document schema (JSON, UTF-8).
//!
//! One document describes a problem instance end to end: qubit count,
//! objective, feasibility predicate, and optionally a mixer plus the kind
//! of mixer product to use. Bit strings are big-endian (leftmost bit =
//! qubit 1 = most significant).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub n: usize,
    pub objective: ObjectiveDoc,
    pub feasible: FeasibleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixer: Option<MixerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixer_kind: Option<MixerKindDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectiveDoc {
    /// Count of edges with differing endpoint bits.
    Maxcut { edges: Vec<(usize, usize)> },
    /// Hamming weight of the string.
    MisWeight,
    /// Explicit table of 2^n values indexed by basis index.
    Table { values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FeasibleDoc {
    All,
    /// Explicit list of feasible bit strings ("0101", big-endian).
    List { strings: Vec<String> },
    /// Feasible iff no edge has both endpoints set.
    IndependentSet { edges: Vec<(usize, usize)> },
    /// Feasible iff each group has exactly one bit set.
    OneHot { groups: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MixerDoc {
    TransverseField,
    XyOnehot,
    /// Dense full-space member matrices, each a row-major list of
    /// [re, im] pairs of length 4^n.
    Explicit { matrices: Vec<Vec<[f64; 2]>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixerKindDoc {
    Simultaneous,
    Sequential,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }
}
