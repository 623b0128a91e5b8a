//! Matchup traces as JSON Lines.
//!
//! Line 1 is the metadata object, then one record per vertex in arrival
//! order, then an optional deferred color map, then the summary. Every line
//! carries a `"type"` tag. Vertex ids are 1-based on disk.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::adversary::{AdversaryColor, StrategySpec};
use crate::algorithms::{AlgorithmSpec, Bin};
use crate::graph::{GraphError, OnlineGraph, PresentationStep, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceMeta {
    pub strategy: StrategySpec,
    pub algorithm: AlgorithmSpec,
    pub kappa: usize,
    pub chi: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub vertex: VertexId,
    pub pre: Vec<VertexId>,
    pub bin: Bin,
    /// `None` while the adversary's color is deferred.
    pub color: Option<AdversaryColor>,
    /// Components after this vertex arrived.
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSummary {
    pub bins_used: usize,
    pub vertices: usize,
    pub max_components: usize,
    /// SHA-256 over the canonical meta, record and color lines.
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchupTrace {
    pub meta: TraceMeta,
    pub records: Vec<TraceRecord>,
    pub final_colors: Option<Vec<AdversaryColor>>,
    pub summary: TraceSummary,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line {
    Meta(TraceMeta),
    Record(TraceRecord),
    Colors(ColorLine),
    Summary(TraceSummary),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColorLine {
    colors: Vec<AdversaryColor>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("line {line}: {message}")]
    Structure { line: usize, message: String },
    #[error("line {line}: {source}")]
    Step { line: usize, source: GraphError },
}

impl MatchupTrace {
    /// Assembles a trace and fills in its summary.
    pub fn new(
        meta: TraceMeta,
        records: Vec<TraceRecord>,
        final_colors: Option<Vec<AdversaryColor>>,
    ) -> Self {
        let mut trace = Self {
            meta,
            records,
            final_colors,
            summary: TraceSummary {
                bins_used: 0,
                vertices: 0,
                max_components: 0,
                digest: String::new(),
            },
        };
        trace.summary = trace.recompute_summary();
        trace
    }

    pub fn steps(&self) -> Vec<PresentationStep> {
        self.records
            .iter()
            .map(|r| PresentationStep::new(r.vertex, r.pre.clone()))
            .collect()
    }

    pub fn bins(&self) -> Vec<Bin> {
        self.records.iter().map(|r| r.bin).collect()
    }

    pub fn graph(&self) -> Result<OnlineGraph, GraphError> {
        OnlineGraph::from_steps(self.steps())
    }

    /// The adversary's coloring: the deferred map if present, otherwise the
    /// per-record colors. `None` if some vertex has no color.
    pub fn colors(&self) -> Option<Vec<AdversaryColor>> {
        match &self.final_colors {
            Some(colors) => Some(colors.clone()),
            None => self.records.iter().map(|r| r.color).collect(),
        }
    }

    pub fn recompute_summary(&self) -> TraceSummary {
        TraceSummary {
            bins_used: self
                .records
                .iter()
                .map(|r| r.bin)
                .collect::<BTreeSet<_>>()
                .len(),
            vertices: self.records.len(),
            max_components: self.records.iter().map(|r| r.components).max().unwrap_or(0),
            digest: self.digest(),
        }
    }

    fn body_lines(&self) -> Vec<String> {
        let mut lines = Vec::with_capacity(self.records.len() + 2);
        lines.push(encode(&Line::Meta(self.meta.clone())));
        lines.extend(
            self.records
                .iter()
                .map(|r| encode(&Line::Record(r.clone()))),
        );
        if let Some(colors) = &self.final_colors {
            lines.push(encode(&Line::Colors(ColorLine {
                colors: colors.clone(),
            })));
        }
        lines
    }

    fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for line in self.body_lines() {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for line in self.body_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&encode(&Line::Summary(self.summary.clone())));
        out.push('\n');
        out
    }

    /// Parses and structurally validates a trace. Semantic checks (replay,
    /// summary, digest) are left to the verifier.
    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut meta = None;
        let mut records: Vec<TraceRecord> = Vec::new();
        let mut final_colors = None;
        let mut summary = None;
        for (i, raw) in body.split('\n').enumerate() {
            let line = i + 1;
            let structure = |message: &str| TraceError::Structure {
                line,
                message: message.into(),
            };
            if summary.is_some() {
                return Err(structure("content after the summary line"));
            }
            let parsed: Line =
                serde_json::from_str(raw).map_err(|source| TraceError::Json { line, source })?;
            match parsed {
                Line::Meta(m) if line == 1 => meta = Some(m),
                Line::Meta(_) => return Err(structure("metadata must be the first line")),
                _ if meta.is_none() => return Err(structure("first line must be metadata")),
                Line::Record(_) if final_colors.is_some() => {
                    return Err(structure("record after the color map"))
                }
                Line::Record(r) => {
                    PresentationStep::new(r.vertex, r.pre.clone())
                        .validate(records.len())
                        .map_err(|source| TraceError::Step { line, source })?;
                    records.push(r);
                }
                Line::Colors(_) if final_colors.is_some() => {
                    return Err(structure("duplicate color map"))
                }
                Line::Colors(c) => {
                    if c.colors.len() != records.len() {
                        return Err(structure("color map length differs from vertex count"));
                    }
                    final_colors = Some(c.colors);
                }
                Line::Summary(s) => summary = Some(s),
            }
        }
        let (Some(meta), Some(summary)) = (meta, summary) else {
            return Err(TraceError::Structure {
                line: body.split('\n').count(),
                message: "missing metadata or summary".into(),
            });
        };
        Ok(Self {
            meta,
            records,
            final_colors,
            summary,
        })
    }
}

fn encode(line: &Line) -> String {
    serde_json::to_string(line).expect("trace lines always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MatchupTrace {
        let meta = TraceMeta {
            strategy: StrategySpec::Forest { kappa: 1 },
            algorithm: AlgorithmSpec::FirstFit,
            kappa: 1,
            chi: 2,
        };
        let records = vec![
            TraceRecord {
                vertex: VertexId(0),
                pre: vec![],
                bin: Bin(1),
                color: Some(AdversaryColor::GREEN),
                components: 1,
            },
            TraceRecord {
                vertex: VertexId(1),
                pre: vec![VertexId(0)],
                bin: Bin(2),
                color: Some(AdversaryColor::RED),
                components: 1,
            },
        ];
        MatchupTrace::new(meta, records, None)
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = sample().to_jsonl();
        let parsed = MatchupTrace::parse(&text).unwrap();
        assert_eq!(parsed, sample());
        assert_eq!(parsed.to_jsonl(), text);
    }

    #[test]
    fn record_line_shape() {
        let text = sample().to_jsonl();
        let second = text.lines().nth(2).unwrap();
        assert_eq!(
            second,
            r#"{"type":"record","vertex":2,"pre":[1],"bin":2,"color":1,"components":1}"#
        );
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with(r#"{"type":"meta","strategy":{"name":"forest","kappa":1}"#));
    }

    #[test]
    fn summary_is_recomputed() {
        let t = sample();
        assert_eq!(t.summary.bins_used, 2);
        assert_eq!(t.summary.vertices, 2);
        assert_eq!(t.summary.max_components, 1);
        assert_eq!(t.summary.digest.len(), 64);
    }

    #[test]
    fn rejects_structural_damage() {
        let text = sample().to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        let join = |ls: &[&str]| ls.join("\n") + "\n";
        // records out of order
        assert!(MatchupTrace::parse(&join(&[lines[0], lines[2], lines[1], lines[3]])).is_err());
        // summary missing
        assert!(MatchupTrace::parse(&join(&lines[..3])).is_err());
        // trailing content
        assert!(
            MatchupTrace::parse(&join(&[lines[0], lines[1], lines[2], lines[3], lines[1]]))
                .is_err()
        );
        // unknown field
        let extra = lines[1].replace(r#""components":1"#, r#""components":1,"x":0"#);
        assert!(MatchupTrace::parse(&join(&[lines[0], &extra, lines[2], lines[3]])).is_err());
        // zero vertex id
        let zero = lines[1].replace(r#""vertex":1"#, r#""vertex":0"#);
        assert!(MatchupTrace::parse(&join(&[lines[0], &zero, lines[2], lines[3]])).is_err());
        assert!(MatchupTrace::parse("").is_err());
    }
}
