//! On-disk JSON formats: instance files, coloring files, and replayable
//! transcripts.
//!
//! Wherever a command expects an instance, three shapes are accepted:
//!
//! * a graph instance,
//!   `{"kind":"graph","batches":[{"vertices":["u","v"],"edges":[["u","v"]]}]}`;
//! * an interval instance,
//!   `{"kind":"intervals","batches":[[{"lo":[0,1],"hi":[2,1],"lo_closed":true,"hi_closed":true,"id":"a"}]]}`,
//!   whose edges are implied by interval overlap and never listed; and
//! * a transcript or duel report emitted by an earlier run, replayed as a
//!   fixed instance — this is what makes every emitted report reproducible
//!   from its own output.
//!
//! Colorings are `{"colors":{"vertex-id":1}}`. Rational numbers are always
//! `[numerator, denominator]` integer pairs; no report field is a float.
//! Each file holds exactly one UTF-8 JSON document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{DuelReport, Instance, Objective, RevealedBatch, Transcript};
use crate::interval::{overlap_edges, Interval};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(
        "unrecognized input shape: expected an instance ({{\"kind\": ...}}), \
         a transcript ({{\"rounds\": ...}}), or a duel report ({{\"transcript\": ...}})"
    )]
    UnknownShape,
    #[error("unknown instance kind {0:?}: expected \"graph\" or \"intervals\"")]
    UnknownKind(String),
}

/// An instance file: a graph given batch by batch with explicit edges, or
/// interval batches whose edges are implied by overlap.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceFile {
    Graph { batches: Vec<GraphBatch> },
    Intervals { batches: Vec<Vec<Interval>> },
}

/// One batch of a graph instance. Edges may touch vertices of any earlier
/// batch; each must touch at least one vertex of this batch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphBatch {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

/// A coloring file: `{"colors": {"vertex-id": color}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringFile {
    pub colors: BTreeMap<String, u64>,
}

/// A parsed input, plus the objective the file itself declared, if any.
#[derive(Debug)]
pub struct LoadedInput {
    pub instance: Instance,
    /// Present when the file was a transcript or a duel report; those carry
    /// the objective they were scored under.
    pub embedded_objective: Option<Objective>,
}

impl InstanceFile {
    /// Parse from JSON text. Dispatches on the `"kind"` field by hand: the
    /// interval form holds 128-bit rational components, which serde's tagged
    /// enum machinery cannot buffer.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("kind").and_then(|k| k.as_str()) {
            Some("graph") => {
                #[derive(Deserialize)]
                struct Wire {
                    batches: Vec<GraphBatch>,
                }
                let w: Wire = serde_json::from_str(text)?;
                Ok(InstanceFile::Graph { batches: w.batches })
            }
            Some("intervals") => {
                #[derive(Deserialize)]
                struct Wire {
                    batches: Vec<Vec<Interval>>,
                }
                let w: Wire = serde_json::from_str(text)?;
                Ok(InstanceFile::Intervals { batches: w.batches })
            }
            Some(other) => Err(FormatError::UnknownKind(other.to_string())),
            None => Err(FormatError::UnknownShape),
        }
    }

    /// Playable instance under the given objective. Interval batches get
    /// their edges computed from overlaps, inside the batch and against all
    /// earlier batches.
    pub fn into_instance(self, objective: Objective) -> Instance {
        match self {
            InstanceFile::Graph { batches } => Instance {
                objective,
                batches: batches
                    .into_iter()
                    .map(|b| RevealedBatch::graph_batch(b.vertices, b.edges))
                    .collect(),
            },
            InstanceFile::Intervals { batches } => {
                let mut prior: Vec<Interval> = Vec::new();
                let mut out = Vec::new();
                for batch in batches {
                    let edges = overlap_edges(&batch, &prior);
                    prior.extend(batch.iter().cloned());
                    out.push(RevealedBatch::interval_batch(batch, edges));
                }
                Instance { objective, batches: out }
            }
        }
    }

    /// File mirroring an engine instance: interval form when every batch
    /// carries intervals, graph form otherwise.
    pub fn from_instance(instance: &Instance) -> Self {
        let all_intervals =
            !instance.batches.is_empty() && instance.batches.iter().all(|b| b.intervals.is_some());
        if all_intervals {
            InstanceFile::Intervals {
                batches: instance.batches.iter().map(|b| b.intervals.clone().unwrap()).collect(),
            }
        } else {
            InstanceFile::Graph {
                batches: instance
                    .batches
                    .iter()
                    .map(|b| GraphBatch { vertices: b.vertices.clone(), edges: b.edges.clone() })
                    .collect(),
            }
        }
    }
}

/// Parse any accepted input shape into a playable instance. `objective`
/// applies to instance files, which do not carry one; transcripts and duel
/// reports keep their own, surfaced in `embedded_objective`.
pub fn parse_input(text: &str, objective: Objective) -> Result<LoadedInput, FormatError> {
    // Shape detection goes through `Value`; the typed parse re-reads the text
    // because 128-bit rational components don't survive a `Value` round trip.
    let value: serde_json::Value = serde_json::from_str(text)?;
    let keys = value.as_object().ok_or(FormatError::UnknownShape)?;
    if keys.contains_key("kind") {
        let file = InstanceFile::parse(text)?;
        Ok(LoadedInput { instance: file.into_instance(objective), embedded_objective: None })
    } else if keys.contains_key("transcript") {
        let report: DuelReport = serde_json::from_str(text)?;
        let instance = report.transcript.to_instance();
        Ok(LoadedInput { embedded_objective: Some(instance.objective), instance })
    } else if keys.contains_key("rounds") {
        let transcript: Transcript = serde_json::from_str(text)?;
        let instance = transcript.to_instance();
        Ok(LoadedInput { embedded_objective: Some(instance.objective), instance })
    } else {
        Err(FormatError::UnknownShape)
    }
}

pub fn parse_coloring(text: &str) -> Result<ColoringFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}
