//! Line-oriented JSON documents for covering prefixes (`.cov`) and ordered
//! Bratteli prefixes (`.bd`).
//!
//! Line 1 is a header carrying `format_version` and `kind`; each further line
//! describes one level, starting at level 0. Keys are written sorted, vertex
//! and edge lists of coverings are sorted, and Bratteli edges are sorted by
//! range, order index and source. Bratteli vertex lists keep their order,
//! since it numbers the circuits.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use gcover::bratteli::{BratteliEdge, BratteliPrefix, OrderedBratteliPrefix};
use gcover::covering::CoveringPrefix;
use gcover::graph::{DirectedGraph, GraphHom};
use gcover::structured::{Mode, StructuredCovering};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column} (byte {offset}): {message}")]
    Parse { line: usize, column: usize, offset: usize, message: String },
    #[error("unsupported format_version {found}; this build reads version {FORMAT_VERSION}")]
    UnsupportedVersion { found: u64 },
}

/// Document contents that parse but do not describe a structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ModelError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DocMode {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "KR")]
    Kr,
    #[serde(rename = "GM")]
    Gm,
}

impl fmt::Display for DocMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocMode::Plain => "plain",
            DocMode::Kr => "KR",
            DocMode::Gm => "GM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Covering,
    Bratteli,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    depth: usize,
    format_version: u64,
    kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    mode: Option<DocMode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringLevel {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub circuits: Option<Vec<Vec<String>>>,
    pub edges: Vec<(String, String)>,
    pub level: usize,
    /// Image of every vertex under the cover to the level below.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex_map: Option<BTreeMap<String, String>>,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringDocument {
    pub mode: DocMode,
    pub levels: Vec<CoveringLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocEdge {
    pub order_index: usize,
    pub range: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BratteliLevel {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub edges: Option<Vec<DocEdge>>,
    pub level: usize,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDocument {
    pub levels: Vec<BratteliLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Covering(CoveringDocument),
    Bratteli(BratteliDocument),
}

struct Lines<'a> {
    text: &'a str,
    lines: Vec<(usize, &'a str)>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut start = 0;
        for piece in text.split_inclusive('\n') {
            let body = piece.trim_end_matches(['\n', '\r']);
            if !body.trim().is_empty() {
                lines.push((start, body));
            }
            start += piece.len();
        }
        Lines { text, lines, next: 0 }
    }

    fn line_number(&self, offset: usize) -> usize {
        self.text[..offset].matches('\n').count() + 1
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> DocumentError {
        let line_start = self.text[..offset].rfind('\n').map_or(0, |p| p + 1);
        DocumentError::Parse {
            line: self.line_number(offset),
            column: offset - line_start + 1,
            offset,
            message: message.into(),
        }
    }

    fn parse<T: DeserializeOwned>(&mut self, what: &str) -> Result<(usize, T), DocumentError> {
        let Some(&(start, body)) = self.lines.get(self.next) else {
            return Err(self.error_at(self.text.len(), format!("unexpected end of file, expected {what}")));
        };
        self.next += 1;
        serde_json::from_str(body).map(|v| (start, v)).map_err(|e| {
            // serde_json columns are 1-based; a truncated line ends at its last byte.
            let offset = if e.is_eof() { start + body.len() } else { start + e.column().saturating_sub(1).min(body.len()) };
            self.error_at(offset, format!("{what}: {e}"))
        })
    }

    fn finish(&self) -> Result<(), DocumentError> {
        match self.lines.get(self.next) {
            Some(&(start, _)) => Err(self.error_at(start, "unexpected line after the last level")),
            None => Ok(()),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let mut lines = Lines::new(text);
    let (_, raw): (_, serde_json::Value) = lines.parse("header")?;
    if let Some(found) = raw.get("format_version").and_then(serde_json::Value::as_u64) {
        if found != FORMAT_VERSION {
            return Err(DocumentError::UnsupportedVersion { found });
        }
    }
    let header: Header = serde_json::from_value(raw).map_err(|e| lines.error_at(0, format!("header: {e}")))?;
    let doc = match header.kind {
        Kind::Covering => {
            let mut levels = Vec::with_capacity(header.depth + 1);
            for n in 0..=header.depth {
                let (start, level): (_, CoveringLevel) = lines.parse(&format!("level {n}"))?;
                if level.level != n {
                    return Err(lines.error_at(start, format!("expected level {n}, found {}", level.level)));
                }
                levels.push(level);
            }
            let mode = header.mode.unwrap_or(DocMode::Plain);
            Document::Covering(CoveringDocument { mode, levels })
        }
        Kind::Bratteli => {
            let mut levels = Vec::with_capacity(header.depth + 1);
            for n in 0..=header.depth {
                let (start, level): (_, BratteliLevel) = lines.parse(&format!("level {n}"))?;
                if level.level != n {
                    return Err(lines.error_at(start, format!("expected level {n}, found {}", level.level)));
                }
                levels.push(level);
            }
            Document::Bratteli(BratteliDocument { levels })
        }
    };
    lines.finish()?;
    Ok(doc)
}

fn push_line<T: Serialize>(out: &mut String, value: &T) {
    // Going through `Value` sorts every object's keys.
    let v = serde_json::to_value(value).expect("documents serialize");
    out.push_str(&serde_json::to_string(&v).expect("values serialize"));
    out.push('\n');
}

impl Document {
    /// Canonical text: sorted keys and collections, one level per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Document::Covering(d) => {
                let header = Header {
                    depth: d.levels.len().saturating_sub(1),
                    format_version: FORMAT_VERSION,
                    kind: Kind::Covering,
                    mode: Some(d.mode),
                };
                push_line(&mut out, &header);
                for level in &d.levels {
                    let mut level = level.clone();
                    level.vertices.sort();
                    level.edges.sort();
                    push_line(&mut out, &level);
                }
            }
            Document::Bratteli(d) => {
                let header = Header {
                    depth: d.levels.len().saturating_sub(1),
                    format_version: FORMAT_VERSION,
                    kind: Kind::Bratteli,
                    mode: None,
                };
                push_line(&mut out, &header);
                for level in &d.levels {
                    let mut level = level.clone();
                    if let Some(edges) = &mut level.edges {
                        edges.sort_by(|a, b| (&a.range, a.order_index, &a.source).cmp(&(&b.range, b.order_index, &b.source)));
                    }
                    push_line(&mut out, &level);
                }
            }
        }
        out
    }
}

fn graph_of(level: &CoveringLevel) -> Arc<DirectedGraph> {
    Arc::new(DirectedGraph::new(level.vertices.iter().cloned(), level.edges.iter().cloned()))
}

impl CoveringDocument {
    pub fn to_prefix(&self) -> Result<CoveringPrefix, ModelError> {
        let graphs: Vec<_> = self.levels.iter().map(graph_of).collect();
        let mut covers = Vec::new();
        for n in 1..self.levels.len() {
            let map = self.levels[n]
                .vertex_map
                .as_ref()
                .ok_or_else(|| ModelError(format!("level {n} has no vertex_map")))?;
            let h = GraphHom::from_labels(graphs[n].clone(), graphs[n - 1].clone(), map.iter())
                .map_err(|e| ModelError(format!("vertex_map of level {n}: {e}")))?;
            covers.push(h);
        }
        CoveringPrefix::new(graphs, covers).map_err(|e| ModelError(e.to_string()))
    }

    /// The figure-8 structure; `None` for plain documents.
    pub fn to_structured(&self) -> Result<Option<StructuredCovering>, ModelError> {
        let mode = match self.mode {
            DocMode::Plain => return Ok(None),
            DocMode::Kr => Mode::Kr,
            DocMode::Gm => Mode::Gm,
        };
        let base = self.to_prefix()?;
        let mut centers = Vec::new();
        let mut circuits = Vec::new();
        for level in &self.levels[1..] {
            let n = level.level;
            centers.push(level.center.clone().ok_or_else(|| ModelError(format!("level {n} has no center")))?);
            circuits.push(level.circuits.clone().ok_or_else(|| ModelError(format!("level {n} has no circuits")))?);
        }
        StructuredCovering::new(base, &centers, &circuits, mode).map(Some).map_err(|e| ModelError(e.to_string()))
    }

    /// A structured document, or an error naming why the document has none.
    pub fn require_structured(&self) -> Result<StructuredCovering, ModelError> {
        self.to_structured()?
            .ok_or_else(|| ModelError("this command needs a KR or GM document; the file is plain".into()))
    }

    pub fn from_prefix(c: &CoveringPrefix) -> Self {
        let levels = (0..=c.depth())
            .map(|n| {
                let g = c.level(n);
                let vertex_map = (n > 0).then(|| {
                    c.cover(n - 1).label_pairs().map(|(a, b)| (a.to_string(), b.to_string())).collect()
                });
                CoveringLevel {
                    center: None,
                    circuits: None,
                    edges: g.edge_labels().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
                    level: n,
                    vertex_map,
                    vertices: g.vertices().to_vec(),
                }
            })
            .collect();
        CoveringDocument { mode: DocMode::Plain, levels }
    }

    pub fn from_structured(sc: &StructuredCovering) -> Self {
        let mut doc = Self::from_prefix(sc.base());
        doc.mode = match sc.mode() {
            Mode::Kr => DocMode::Kr,
            Mode::Gm => DocMode::Gm,
        };
        let centers = sc.centers_by_label();
        for (k, circuits) in sc.circuits_by_label().into_iter().enumerate() {
            doc.levels[k + 1].center = Some(centers[k].clone());
            doc.levels[k + 1].circuits = Some(circuits);
        }
        doc
    }
}

impl BratteliDocument {
    pub fn to_ordered(&self) -> Result<OrderedBratteliPrefix, ModelError> {
        let level_vertices: Vec<Vec<String>> = self.levels.iter().map(|l| l.vertices.clone()).collect();
        let index = |n: usize, name: &str| {
            level_vertices[n]
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| ModelError(format!("level {n} has no vertex `{name}`")))
        };
        let mut edges = Vec::new();
        let mut order = Vec::new();
        for n in 1..self.levels.len() {
            let es = self.levels[n].edges.as_ref().ok_or_else(|| ModelError(format!("level {n} has no edges")))?;
            let mut row = Vec::with_capacity(es.len());
            let mut ord = Vec::with_capacity(es.len());
            for e in es {
                row.push(BratteliEdge { source: index(n - 1, &e.source)?, range: index(n, &e.range)? });
                ord.push(e.order_index);
            }
            edges.push(row);
            order.push(ord);
        }
        Ok(OrderedBratteliPrefix { diagram: BratteliPrefix { level_vertices, edges }, order })
    }

    pub fn from_ordered(b: &OrderedBratteliPrefix) -> Self {
        let d = &b.diagram;
        let levels = (0..d.level_vertices.len())
            .map(|n| BratteliLevel {
                edges: (n > 0).then(|| {
                    d.edges[n - 1]
                        .iter()
                        .zip(&b.order[n - 1])
                        .map(|(e, &k)| DocEdge {
                            order_index: k,
                            range: d.level_vertices[n][e.range].clone(),
                            source: d.level_vertices[n - 1][e.source].clone(),
                        })
                        .collect()
                }),
                level: n,
                vertices: d.level_vertices[n].clone(),
            })
            .collect();
        BratteliDocument { levels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gcover::towers;

    #[test]
    fn covering_round_trip() {
        let sc = towers::fibonacci(3);
        let text = Document::Covering(CoveringDocument::from_structured(&sc)).to_text();
        let Document::Covering(doc) = parse_document(&text).unwrap() else { panic!("kind") };
        assert_eq!(Document::Covering(doc.clone()).to_text(), text);
        assert!(doc.to_structured().unwrap().unwrap().same_structure(&sc));
    }

    #[test]
    fn wrong_version() {
        let text = "{\"depth\":0,\"format_version\":7,\"kind\":\"bratteli\"}\n";
        assert_eq!(parse_document(text), Err(DocumentError::UnsupportedVersion { found: 7 }));
    }

    #[test]
    fn truncated_line_reports_offset() {
        let text = "{\"depth\":0,\"format_version\":1,\"kind\":\"bratteli\"}\n{\"level\":0,\"vert";
        let Err(DocumentError::Parse { line, offset, .. }) = parse_document(text) else { panic!("parsed") };
        assert_eq!(line, 2);
        assert_eq!(offset, text.len());
    }

    #[test]
    fn missing_level_reports_end_of_file() {
        let text = "{\"depth\":1,\"format_version\":1,\"kind\":\"bratteli\"}\n{\"level\":0,\"vertices\":[\"r\"]}\n";
        let Err(DocumentError::Parse { offset, message, .. }) = parse_document(text) else { panic!("parsed") };
        assert_eq!(offset, text.len());
        assert!(message.contains("level 1"));
    }
}
