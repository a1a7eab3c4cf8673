use std::collections::BTreeMap;

use serde::Serialize;
use toposcope_core::centrality::{compute_all, degree_distribution, graph_summary, GraphCentralitySummary, IndexKind};

use crate::args::CentralityArgs;
use crate::common::{check_damping, indices_for, load_all, parse_index_list, write_ingest_reports, RunManifest};
use crate::output::{num, OutDir};
use crate::CliError;

#[derive(Serialize)]
struct Summary {
    input: String,
    nodes: usize,
    edges: usize,
    capacitated: bool,
    indices: BTreeMap<IndexKind, IndexSummary>,
}

#[derive(Serialize)]
struct IndexSummary {
    #[serde(flatten)]
    summary: GraphCentralitySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    damping: Option<f64>,
}

pub fn run(args: CentralityArgs) -> Result<(), CliError> {
    check_damping(args.damping)?;
    let requested = parse_index_list(&args.indices)?;
    let loaded = load_all(std::slice::from_ref(&args.input), &args.ingest)?;
    let input = &loaded[0];
    let g = &input.graph;
    let kinds = indices_for(&requested, g);
    let vectors = compute_all(g, &kinds, args.damping).map_err(CliError::at(&input.path))?;

    let out = OutDir::create(&args.out)?;
    let mut manifest =
        RunManifest::new("centrality", &args.out).with_inputs(&loaded, &args.ingest).option("degree_dist", args.degree_dist);
    manifest.indices = kinds.clone();
    manifest.damping = kinds.contains(&IndexKind::Pg).then_some(args.damping);
    manifest.write(&out)?;
    write_ingest_reports(&out, &loaded)?;

    for (kind, v) in &vectors {
        let rows = v.scores.iter().enumerate().map(|(u, s)| vec![g.label(u).to_owned(), num(*s)]);
        out.csv(&format!("centrality_{}.csv", kind.as_str().to_ascii_lowercase()), &["node", "score"], rows)?;
    }
    let summary = Summary {
        input: input.path.display().to_string(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        capacitated: g.is_capacitated(),
        indices: vectors
            .iter()
            .map(|(k, v)| (*k, IndexSummary { summary: graph_summary(v), eigenvalue: v.eigenvalue, damping: v.damping }))
            .collect(),
    };
    out.json("summary.json", &summary)?;

    if args.degree_dist {
        let mut text = String::from("# degree count\n");
        for (d, c) in degree_distribution(g) {
            text.push_str(&format!("{d} {c}\n"));
        }
        out.text("degree_distribution.dat", &text)?;
    }
    Ok(())
}
