//! Topology file readers.
//!
//! Two formats are understood:
//!
//! * **Edge lists**: one `u v [capacity]` record per line, whitespace
//!   separated, `#` starts a comment. Labels are arbitrary tokens. If any
//!   line carries a capacity the topology is capacitated and lines without
//!   one get the configured default.
//! * **GraphML**, the subset used by Topology Zoo files: `<key>`, `<node>`,
//!   `<edge>` and `<data>` elements, matched by local name. Link capacity is
//!   read from the data field named by `capacity_key` (a `<key>` declaration
//!   maps its `attr.name` to the id used in `<data key=..>`) and scaled by
//!   the unit in `unit_key`. A capacity written as a range `lo-hi` is resolved
//!   by the configured [`RangePolicy`].
//!
//! Node ids follow first appearance, parallel links are merged with their
//! capacities summed, self-loops are dropped and, unless disabled, only the
//! giant connected component is kept.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{extract_gcc, Topology, TopologyBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Edgelist,
    Graphml,
}

impl Format {
    /// `.graphml` and `.xml` files are GraphML, anything else an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
            Some(ext) if ext == "graphml" || ext == "xml" => Format::Graphml,
            _ => Format::Edgelist,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edges" | "txt" => Ok(Format::Edgelist),
            "graphml" | "xml" => Ok(Format::Graphml),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

/// How a capacity given as an interval `lo-hi` is turned into one value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangePolicy {
    Min,
    Max,
    Mean,
}

impl FromStr for RangePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(RangePolicy::Min),
            "max" => Ok(RangePolicy::Max),
            "mean" => Ok(RangePolicy::Mean),
            other => Err(Error::InvalidArgument(format!("unknown range policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub format: Format,
    pub capacity_key: String,
    pub unit_key: String,
    pub range_policy: RangePolicy,
    pub default_capacity: f64,
    pub extract_gcc: bool,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            format: Format::Edgelist,
            capacity_key: "LinkSpeed".into(),
            unit_key: "LinkSpeedUnits".into(),
            range_policy: RangePolicy::Mean,
            default_capacity: 1.0,
            extract_gcc: true,
        }
    }
}

impl IngestConfig {
    pub fn with_format(format: Format) -> Self {
        Self { format, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.default_capacity.is_finite() && self.default_capacity > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "default capacity {} must be finite and > 0",
                self.default_capacity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub nodes_read: usize,
    pub edges_read: usize,
    pub multi_edges_collapsed: usize,
    pub self_loops_dropped: usize,
    pub nodes_outside_gcc: usize,
    pub capacity_defaults_applied: usize,
}

fn finish(builder: TopologyBuilder, cfg: &IngestConfig, defaults: usize) -> Result<(Topology, IngestReport)> {
    let (topo, stats) = builder.build();
    if topo.is_empty() {
        return Err(Error::EmptyTopology);
    }
    let mut report = IngestReport {
        nodes_read: topo.node_count(),
        edges_read: stats.edges_read,
        multi_edges_collapsed: stats.multi_edges_collapsed,
        self_loops_dropped: stats.self_loops_dropped,
        nodes_outside_gcc: 0,
        capacity_defaults_applied: defaults,
    };
    let topo = if cfg.extract_gcc {
        let gcc = extract_gcc(&topo)?;
        report.nodes_outside_gcc = topo.node_count() - gcc.node_count();
        gcc
    } else {
        topo
    };
    Ok((topo, report))
}

fn decode(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| Error::Encoding(e.to_string()))
}

pub fn parse_edgelist(bytes: &[u8], cfg: &IngestConfig) -> Result<(Topology, IngestReport)> {
    cfg.validate()?;
    let text = decode(bytes)?;
    let mut records: Vec<(usize, &str, &str, Option<f64>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => continue,
            [u, v] => records.push((line_no, u, v, None)),
            [u, v, c] => {
                let cap: f64 = c.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("capacity {c:?} is not a number"),
                })?;
                if !(cap.is_finite() && cap > 0.0) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("capacity {c} must be finite and > 0"),
                    });
                }
                records.push((line_no, u, v, Some(cap)));
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `u v [capacity]`, found {} fields", tokens.len()),
                })
            }
        }
    }
    if records.is_empty() {
        return Err(Error::EmptyTopology);
    }
    let capacitated = records.iter().any(|r| r.3.is_some());
    let mut builder = TopologyBuilder::new(capacitated);
    let mut defaults = 0;
    for (line, u, v, cap) in records {
        let cap = match cap {
            Some(c) => c,
            None if capacitated => {
                defaults += 1;
                cfg.default_capacity
            }
            None => 1.0,
        };
        builder.add_labeled_edge(u, v, cap).map_err(|e| Error::Parse { line, message: e.to_string() })?;
    }
    finish(builder, cfg, defaults)
}

/// Serializes a topology as an edge list that [`parse_edgelist`] reads back
/// into the same graph. Capacities use Rust's shortest round-trip float
/// formatting. Labels must not contain whitespace or `#`.
pub fn write_edgelist(g: &Topology) -> String {
    let mut out = String::new();
    for (u, v, w) in g.edges() {
        if g.is_capacitated() {
            let _ = writeln!(out, "{} {} {}", g.label(u), g.label(v), w);
        } else {
            let _ = writeln!(out, "{} {}", g.label(u), g.label(v));
        }
    }
    out
}

fn unit_multiplier(unit: &str) -> Result<f64> {
    match unit.trim() {
        "" => Ok(1.0),
        "G" | "g" => Ok(1e9),
        "M" | "m" => Ok(1e6),
        "K" | "k" => Ok(1e3),
        other => Err(Error::UnknownUnit(other.to_owned())),
    }
}

/// Parses `x` or an interval `lo-hi`.
fn parse_capacity_value(raw: &str, policy: RangePolicy) -> Option<f64> {
    let raw = raw.trim();
    let split = raw.char_indices().skip(1).find(|&(_, c)| c == '-').map(|(i, _)| i);
    match split {
        Some(i) => {
            let lo: f64 = raw[..i].trim().parse().ok()?;
            let hi: f64 = raw[i + 1..].trim().parse().ok()?;
            Some(match policy {
                RangePolicy::Min => lo.min(hi),
                RangePolicy::Max => lo.max(hi),
                RangePolicy::Mean => (lo + hi) / 2.0,
            })
        }
        None => raw.parse().ok(),
    }
}

#[derive(Debug, Default)]
struct RawEdge {
    id: Option<String>,
    source: String,
    target: String,
    data: Vec<(String, String)>,
    offset: u64,
}

impl RawEdge {
    fn name(&self) -> String {
        match &self.id {
            Some(id) => format!("{id} ({}->{})", self.source, self.target),
            None => format!("{}->{}", self.source, self.target),
        }
    }
}

fn xml_error(reader: &Reader<&[u8]>, err: impl std::fmt::Display) -> Error {
    Error::Xml { offset: reader.error_position(), message: err.to_string() }
}

fn attributes(reader: &Reader<&[u8]>, e: &BytesStart) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|err| xml_error(reader, err))?;
        let key = String::from_utf8_lossy(attr.key.local_name().as_ref()).into_owned();
        let value = attr.unescape_value().map_err(|err| xml_error(reader, err))?.into_owned();
        out.insert(key, value);
    }
    // keep the qualified name too, so `attr.name` survives local-name matching
    for attr in e.attributes().flatten() {
        let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
        if let Ok(v) = attr.unescape_value() {
            out.entry(key).or_insert_with(|| v.into_owned());
        }
    }
    Ok(out)
}

pub fn parse_graphml(bytes: &[u8], cfg: &IngestConfig) -> Result<(Topology, IngestReport)> {
    cfg.validate()?;
    let text = decode(bytes)?;
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<RawEdge> = Vec::new();
    let mut current_edge: Option<RawEdge> = None;
    let mut current_data: Option<(String, String)> = None;
    let mut depth: Vec<Vec<u8>> = Vec::new();

    loop {
        let before = reader.buffer_position();
        let event = reader.read_event().map_err(|err| xml_error(&reader, err))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                let name = e.local_name().as_ref().to_vec();
                match name.as_slice() {
                    b"key" => {
                        let attrs = attributes(&reader, e)?;
                        if let (Some(id), Some(n)) = (attrs.get("id"), attrs.get("attr.name")) {
                            key_names.insert(id.clone(), n.clone());
                        }
                    }
                    b"node" => {
                        let attrs = attributes(&reader, e)?;
                        let id = attrs.get("id").ok_or_else(|| Error::Xml {
                            offset: before,
                            message: "<node> without id".into(),
                        })?;
                        nodes.push(id.clone());
                    }
                    b"edge" => {
                        let attrs = attributes(&reader, e)?;
                        let get = |k: &str| {
                            attrs.get(k).cloned().ok_or_else(|| Error::Xml {
                                offset: before,
                                message: format!("<edge> without {k}"),
                            })
                        };
                        let edge = RawEdge {
                            id: attrs.get("id").cloned(),
                            source: get("source")?,
                            target: get("target")?,
                            data: Vec::new(),
                            offset: before,
                        };
                        if is_empty {
                            edges.push(edge);
                        } else {
                            current_edge = Some(edge);
                        }
                    }
                    b"data" if current_edge.is_some() && !is_empty => {
                        let attrs = attributes(&reader, e)?;
                        let key = attrs.get("key").cloned().unwrap_or_default();
                        current_data = Some((key, String::new()));
                    }
                    _ => {}
                }
                if !is_empty {
                    depth.push(name);
                }
            }
            Event::Text(t) => {
                if let Some((_, buf)) = current_data.as_mut() {
                    buf.push_str(&t.unescape().map_err(|err| xml_error(&reader, err))?);
                }
            }
            Event::CData(t) => {
                if let Some((_, buf)) = current_data.as_mut() {
                    buf.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::End(e) => {
                depth.pop();
                match e.local_name().as_ref() {
                    b"data" => {
                        if let (Some(edge), Some(d)) = (current_edge.as_mut(), current_data.take()) {
                            edge.data.push(d);
                        }
                    }
                    b"edge" => {
                        if let Some(edge) = current_edge.take() {
                            edges.push(edge);
                        }
                    }
                    _ => {}
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if let Some(open) = depth.last() {
        return Err(Error::Xml {
            offset: reader.buffer_position(),
            message: format!("unclosed element <{}>", String::from_utf8_lossy(open)),
        });
    }

    let mut builder = TopologyBuilder::new(true);
    for n in &nodes {
        builder.node(n);
    }
    let declared: std::collections::HashSet<&str> = nodes.iter().map(String::as_str).collect();
    let resolve = |k: &str| key_names.get(k).map(String::as_str).unwrap_or(k).to_owned();
    let mut defaults = 0;
    for edge in &edges {
        for endpoint in [&edge.source, &edge.target] {
            if !declared.contains(endpoint.as_str()) {
                return Err(Error::UndeclaredNode { edge: edge.name(), node: endpoint.clone() });
            }
        }
        let mut speed = None;
        let mut unit = None;
        for (k, v) in &edge.data {
            let name = resolve(k);
            if name == cfg.capacity_key {
                speed = Some(v.as_str());
            } else if name == cfg.unit_key {
                unit = Some(v.as_str());
            }
        }
        let line = text[..edge.offset as usize].matches('\n').count() + 1;
        let capacity = match speed.filter(|s| !s.trim().is_empty()) {
            Some(raw) => {
                let value = parse_capacity_value(raw, cfg.range_policy).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("edge {}: capacity {raw:?} is not a number or range", edge.name()),
                })?;
                let scaled = value * unit_multiplier(unit.unwrap_or(""))?;
                if !(scaled.is_finite() && scaled > 0.0) {
                    return Err(Error::InvalidCapacity { edge: edge.name(), value: scaled });
                }
                scaled
            }
            None => {
                defaults += 1;
                cfg.default_capacity
            }
        };
        builder.add_labeled_edge(&edge.source, &edge.target, capacity)?;
    }
    finish(builder, cfg, defaults)
}

/// Parses bytes in the configured format.
pub fn parse(bytes: &[u8], cfg: &IngestConfig) -> Result<(Topology, IngestReport)> {
    match cfg.format {
        Format::Edgelist => parse_edgelist(bytes, cfg),
        Format::Graphml => parse_graphml(bytes, cfg),
    }
}

/// Reads and parses a file.
pub fn load(path: &Path, cfg: &IngestConfig) -> Result<(Topology, IngestReport)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(e.to_string()))?;
    parse(&bytes, cfg)
}
