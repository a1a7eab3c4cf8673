use rayon::prelude::*;
use serde_json::json;
use toposcope_core::centrality::{compute_all, IndexKind};
use toposcope_core::rankstats::{
    aggregate, bottom_rank_diagnostics, correlation_matrix, damping_sweep, rank, AggregateMatrix, BottomRankDiagnostics,
    CorrelationMatrix, DampingSweep, Measure,
};

use crate::args::CorrelateArgs;
use crate::common::{
    check_damping, check_fraction, dataset_names, indices_for, load_all, parse_index_list, resolve_inputs,
    write_ingest_reports, Loaded, RunManifest,
};
use crate::output::{num, OutDir};
use crate::CliError;

struct Analysis {
    matrix: CorrelationMatrix,
    diagnostics: Option<BottomRankDiagnostics>,
    sweep: Option<DampingSweep>,
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
fn parse_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Args(format!("--sweep-damping expects start:stop:step, got {spec:?}"));
    let parts: Vec<f64> = spec.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let values: Vec<f64> = (0..count).map(|i| start + i as f64 * step).collect();
    for &d in &values {
        check_damping(d)?;
    }
    Ok(values)
}

fn analyse(l: &Loaded, args: &CorrelateArgs, requested: &Option<Vec<IndexKind>>, sweep: &Option<(Vec<f64>, Vec<IndexKind>)>, diagnose: bool) -> Result<Analysis, CliError> {
    let g = &l.graph;
    let at = || CliError::at(&l.path);
    let mut kinds = indices_for(requested, g);
    let diag_kinds = diagnose && !g.is_capacitated();
    if diag_kinds {
        for k in [IndexKind::Bc, IndexKind::Dc] {
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
    }
    let vectors = compute_all(g, &kinds, args.damping).map_err(at())?;
    let wanted = indices_for(requested, g);
    let selected = vectors.iter().filter(|(k, _)| wanted.contains(k)).map(|(k, v)| (*k, v.clone())).collect();
    let matrix = correlation_matrix(&selected, args.topk).map_err(at())?;
    let diagnostics = if diag_kinds {
        let r_dc = rank(&vectors[&IndexKind::Dc]);
        let r_bc = rank(&vectors[&IndexKind::Bc]);
        Some(bottom_rank_diagnostics(g, &r_dc, &r_bc, args.diagnostics_topk).map_err(at())?)
    } else {
        None
    };
    let sweep = match sweep {
        Some((values, against)) => Some(damping_sweep(g, values, against).map_err(at())?),
        None => None,
    };
    Ok(Analysis { matrix, diagnostics, sweep })
}

fn matrix_rows(kinds: &[IndexKind], m: &[Vec<f64>]) -> Vec<Vec<String>> {
    kinds
        .iter()
        .zip(m)
        .map(|(k, row)| std::iter::once(k.as_str().to_owned()).chain(row.iter().map(|&x| num(x))).collect())
        .collect()
}

fn header(kinds: &[IndexKind]) -> Vec<&'static str> {
    std::iter::once("index").chain(kinds.iter().map(|k| k.as_str())).collect()
}

fn write_matrix(out: &OutDir, m: &CorrelationMatrix) -> Result<(), CliError> {
    for measure in Measure::ALL {
        out.csv(&format!("{}.csv", measure.as_str()), &header(&m.kinds), matrix_rows(&m.kinds, m.matrix(measure)))?;
    }
    let rows = m.degenerate_pairs.iter().map(|(a, b)| vec![a.as_str().to_owned(), b.as_str().to_owned()]);
    out.csv("degenerate_pairs.csv", &["index_a", "index_b"], rows)
}

fn write_sweep(out: &OutDir, s: &DampingSweep) -> Result<(), CliError> {
    let cols: Vec<String> = s.against.iter().map(|k| format!("rho_pg_{}", k.as_str().to_ascii_lowercase())).collect();
    let mut head = vec!["damping"];
    head.extend(cols.iter().map(String::as_str));
    head.push("degenerate");
    let rows = s.rows.iter().map(|r| {
        let mut row = vec![num(r.damping)];
        row.extend(r.rho.iter().map(|&x| num(x)));
        row.push(r.degenerate.to_string());
        row
    });
    out.csv("sweep_damping.csv", &head, rows)
}

/// Two decimals without a negative zero.
fn fixed2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

/// Lower-triangular `mean±variance` table, rows and columns in index order.
pub fn render_table(a: &AggregateMatrix) -> String {
    let width = 12;
    let mut text = format!("{} ({} topologies, mean±variance)\n", a.measure.as_str(), a.samples);
    text.push_str(&format!("{:<6}", ""));
    for k in &a.kinds {
        text.push_str(&format!("{:<width$}", k.as_str()));
    }
    text = text.trim_end().to_owned();
    text.push('\n');
    for (i, k) in a.kinds.iter().enumerate() {
        let mut line = format!("{:<6}", k.as_str());
        for j in 0..=i {
            let cell = if i == j {
                "1".to_owned()
            } else {
                format!("{}±{}", fixed2(a.mean[i][j]), fixed2(a.variance[i][j]))
            };
            line.push_str(&format!("{:<width$}", cell));
        }
        text.push_str(line.trim_end());
        text.push('\n');
    }
    text
}

fn render_diagnostics(rows: &[(String, usize, BottomRankDiagnostics)], topk: f64) -> String {
    let pct = num(topk * 100.0);
    let name_w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(7).max(7) + 2;
    let mut text = format!("{:<name_w$}{:>8}{:>12}{:>14}{:>12}\n", "dataset", "N", "rho(BC,DC)", format!("top-{pct}%"), "DC=1 frac");
    for (name, n, d) in rows {
        text.push_str(&format!(
            "{:<name_w$}{:>8}{:>12}{:>14}{:>12}\n",
            name,
            n,
            format!("{:.2}", d.spearman),
            format!("{:.1}%", d.top_k_overlap),
            format!("{:.2}", d.fraction_dc_eq_1)
        ));
    }
    text
}

pub fn run(args: CorrelateArgs) -> Result<(), CliError> {
    check_damping(args.damping)?;
    check_fraction("--topk", args.topk)?;
    check_fraction("--diagnostics-topk", args.diagnostics_topk)?;
    let requested = parse_index_list(&args.indices)?;
    if requested.as_ref().is_some_and(|k| k.len() < 2) {
        return Err(CliError::Args("correlation needs at least two indices".into()));
    }
    let sweep = match &args.sweep_damping {
        Some(spec) => {
            let against = parse_index_list(&args.against)?.unwrap_or_else(|| IndexKind::ALL.to_vec());
            Some((parse_sweep(spec)?, against))
        }
        None => None,
    };
    let diagnose = args.diagnostics || args.aggregate;

    let paths = resolve_inputs(&args.input)?;
    let loaded = load_all(&paths, &args.ingest)?;
    let analyses: Vec<Analysis> = loaded
        .par_iter()
        .map(|l| analyse(l, &args, &requested, &sweep, diagnose))
        .collect::<Result<_, _>>()?;

    let out = OutDir::create(&args.out)?;
    let mut manifest = RunManifest::new("correlate", &args.out)
        .with_inputs(&loaded, &args.ingest)
        .option("aggregate", args.aggregate)
        .option("diagnostics", diagnose)
        .option("diagnostics_topk", args.diagnostics_topk);
    if let Some((values, against)) = &sweep {
        manifest = manifest.option("sweep_damping", json!({ "values": values, "against": against }));
    }
    manifest.indices = requested.clone().unwrap_or_else(|| IndexKind::ALL.to_vec());
    manifest.damping = Some(args.damping);
    manifest.k_fraction = Some(args.topk);
    manifest.write(&out)?;
    write_ingest_reports(&out, &loaded)?;

    let names = dataset_names(&paths);
    for (name, a) in names.iter().zip(&analyses) {
        let dir = if loaded.len() == 1 { out.clone() } else { out.sub(name)? };
        write_matrix(&dir, &a.matrix)?;
        if let Some(s) = &a.sweep {
            write_sweep(&dir, s)?;
        }
    }

    if diagnose {
        let rows: Vec<(String, usize, BottomRankDiagnostics)> = names
            .iter()
            .zip(&loaded)
            .zip(&analyses)
            .filter_map(|((n, l), a)| a.diagnostics.map(|d| (n.clone(), l.graph.node_count(), d)))
            .collect();
        let csv_rows = rows.iter().map(|(n, size, d)| {
            vec![n.clone(), size.to_string(), num(d.spearman), num(d.top_k_overlap), num(d.fraction_dc_eq_1)]
        });
        out.csv("diagnostics.csv", &["dataset", "nodes", "spearman_bc_dc", "top_k_overlap_pct", "dc_eq_1_fraction"], csv_rows)?;
        out.text("diagnostics.txt", &render_diagnostics(&rows, args.diagnostics_topk))?;
    }

    if args.aggregate {
        let matrices: Vec<CorrelationMatrix> = analyses.iter().map(|a| a.matrix.clone()).collect();
        for measure in Measure::ALL {
            let agg = aggregate(&matrices, measure)?;
            let name = measure.as_str();
            out.csv(&format!("aggregate_{name}_mean.csv"), &header(&agg.kinds), matrix_rows(&agg.kinds, &agg.mean))?;
            out.csv(&format!("aggregate_{name}_variance.csv"), &header(&agg.kinds), matrix_rows(&agg.kinds, &agg.variance))?;
            out.text(&format!("table_{name}.txt"), &render_table(&agg))?;
        }
    }
    Ok(())
}
