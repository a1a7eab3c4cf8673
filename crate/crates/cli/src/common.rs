//! Input resolution, flag parsing and the run manifest shared by commands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use toposcope_core::attack::{default_steps, RemovalMode};
use toposcope_core::centrality::IndexKind;
use toposcope_core::graph::Topology;
use toposcope_core::ingest::{load, Format, IngestConfig, IngestReport, RangePolicy};

use crate::args::IngestArgs;
use crate::output::OutDir;
use crate::CliError;

const TOPOLOGY_EXTENSIONS: [&str; 6] = ["txt", "edges", "edgelist", "el", "graphml", "xml"];

/// One parsed input.
pub struct Loaded {
    pub path: PathBuf,
    pub format: Format,
    pub graph: Topology,
    pub report: IngestReport,
}

/// Expands directories into their topology files, sorted by name.
pub fn resolve_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| CliError::io(p, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|f| {
                    f.is_file()
                        && f.extension()
                            .and_then(|e| e.to_str())
                            .is_some_and(|e| TOPOLOGY_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
                })
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(CliError::Input { path: p.display().to_string(), source: toposcope_core::Error::EmptyTopology });
            }
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn ingest_config(args: &IngestArgs, path: &Path) -> Result<IngestConfig, CliError> {
    if !(args.default_capacity.is_finite() && args.default_capacity > 0.0) {
        return Err(CliError::Args(format!("--default-capacity {} must be > 0", args.default_capacity)));
    }
    Ok(IngestConfig {
        format: args.format.fixed().unwrap_or_else(|| Format::from_path(path)),
        capacity_key: args.capacity_key.clone(),
        unit_key: args.unit_key.clone(),
        range_policy: args.range_policy,
        default_capacity: args.default_capacity,
        extract_gcc: !args.keep_all_components,
    })
}

/// Parses every input, in parallel, keeping input order.
pub fn load_all(paths: &[PathBuf], args: &IngestArgs) -> Result<Vec<Loaded>, CliError> {
    paths
        .par_iter()
        .map(|path| {
            let cfg = ingest_config(args, path)?;
            let (graph, report) = load(path, &cfg).map_err(CliError::at(path))?;
            Ok(Loaded { path: path.clone(), format: cfg.format, graph, report })
        })
        .collect()
}

/// `all` or a comma-separated list of index names.
pub fn parse_index_list(spec: &str) -> Result<Option<Vec<IndexKind>>, CliError> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    let mut kinds = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let kind: IndexKind = token.parse().map_err(|e: toposcope_core::Error| CliError::Args(e.to_string()))?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    if kinds.is_empty() {
        return Err(CliError::Args(format!("no indices in {spec:?}")));
    }
    kinds.sort();
    Ok(Some(kinds))
}

/// Indices to compute on `g`: an explicit list is kept as is (so invalid
/// requests surface as errors), `all` drops what the graph cannot support.
pub fn indices_for(requested: &Option<Vec<IndexKind>>, g: &Topology) -> Vec<IndexKind> {
    match requested {
        Some(list) => list.clone(),
        None => IndexKind::all_valid_for(g),
    }
}

pub fn check_damping(d: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&d) {
        Ok(())
    } else {
        Err(CliError::Args(format!("damping {d} outside [0, 1)")))
    }
}

pub fn check_fraction(name: &str, f: f64) -> Result<(), CliError> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Args(format!("{name} {f} outside (0, 1]")))
    }
}

pub fn parse_steps(spec: &str) -> Result<Vec<usize>, CliError> {
    let mut steps = spec
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Args(format!("bad step {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    steps.sort_unstable();
    steps.dedup();
    if steps.is_empty() {
        return Err(CliError::Args("empty --steps".into()));
    }
    Ok(steps)
}

/// Removal grid for one graph.
pub fn steps_for(explicit: &Option<Vec<usize>>, n: usize, max_frac: f64) -> Vec<usize> {
    explicit.clone().unwrap_or_else(|| default_steps(n, max_frac))
}

/// Output subdirectory name per input: the file stem, suffixed on clashes.
pub fn dataset_names(paths: &[PathBuf]) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("input").to_owned();
            let count = seen.entry(stem.clone()).or_insert(0);
            *count += 1;
            if *count == 1 {
                stem
            } else {
                format!("{stem}-{count}")
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct InputEntry {
    pub path: String,
    pub format: Format,
}

#[derive(Debug, Serialize)]
pub struct IngestSettings {
    /// `None` means detected per file.
    pub format: Option<Format>,
    pub capacity_key: String,
    pub unit_key: String,
    pub range_policy: RangePolicy,
    pub default_capacity: f64,
    pub extract_gcc: bool,
}

impl From<&IngestArgs> for IngestSettings {
    fn from(a: &IngestArgs) -> Self {
        Self {
            format: a.format.fixed(),
            capacity_key: a.capacity_key.clone(),
            unit_key: a.unit_key.clone(),
            range_policy: a.range_policy,
            default_capacity: a.default_capacity,
            extract_gcc: !a.keep_all_components,
        }
    }
}

/// Everything needed to reproduce a run. No timestamps or host data, so
/// identical invocations give identical manifests.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<InputEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ingest: Option<IngestSettings>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<IndexKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<RemovalMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<usize>>,
    pub output_dir: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Command-specific options.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub options: BTreeMap<&'static str, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &'static str, out: &Path) -> Self {
        Self {
            tool: "toposcope",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: Vec::new(),
            ingest: None,
            indices: Vec::new(),
            damping: None,
            k_fraction: None,
            mode: None,
            max_fraction: None,
            steps: None,
            output_dir: out.display().to_string(),
            seed: None,
            options: BTreeMap::new(),
        }
    }

    pub fn with_inputs(mut self, loaded: &[Loaded], ingest: &IngestArgs) -> Self {
        self.inputs = loaded
            .iter()
            .map(|l| InputEntry { path: l.path.display().to_string(), format: l.format })
            .collect();
        self.ingest = Some(ingest.into());
        self
    }

    pub fn option(mut self, key: &'static str, value: impl Serialize) -> Self {
        self.options.insert(key, serde_json::to_value(value).expect("serializable option"));
        self
    }

    pub fn write(&self, out: &OutDir) -> Result<(), CliError> {
        out.json("manifest.json", self)
    }
}

/// Per-input ingestion counters, written next to the manifest.
#[derive(Debug, Serialize)]
pub struct IngestEntry<'a> {
    pub input: String,
    pub nodes: usize,
    pub edges: usize,
    pub capacitated: bool,
    pub report: &'a IngestReport,
}

pub fn write_ingest_reports(out: &OutDir, loaded: &[Loaded]) -> Result<(), CliError> {
    let entries: Vec<IngestEntry> = loaded
        .iter()
        .map(|l| IngestEntry {
            input: l.path.display().to_string(),
            nodes: l.graph.node_count(),
            edges: l.graph.edge_count(),
            capacitated: l.graph.is_capacitated(),
            report: &l.report,
        })
        .collect();
    out.json("ingest.json", &entries)
}
