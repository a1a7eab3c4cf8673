use rayon::prelude::*;
use toposcope_core::attack::{connectivity_envelopes, if_pmf, run_attack, AttackPlan, AttackTrace, EnvelopeReport, Metric};
use toposcope_core::centrality::IndexKind;

use crate::args::AttackArgs;
use crate::common::{
    check_damping, check_fraction, dataset_names, indices_for, load_all, parse_index_list, parse_steps, resolve_inputs,
    steps_for, write_ingest_reports, RunManifest,
};
use crate::output::{num, opt_num, OutDir};
use crate::CliError;

pub fn write_envelope(out: &OutDir, r: &EnvelopeReport) -> Result<(), CliError> {
    let drivers: Vec<&str> = r.series.iter().map(|s| s.driver.as_str()).collect();
    let mut head = vec!["k", "best", "worst", "max_min_ratio"];
    head.extend(&drivers);
    let rows = (0..r.steps.len()).map(|i| {
        let mut row = vec![r.steps[i].to_string(), num(r.best[i]), num(r.worst[i]), opt_num(r.max_min_ratio[i])];
        row.extend(r.series.iter().map(|s| num(s.values[i])));
        row
    });
    out.csv(&format!("envelope_{}.csv", r.metric.as_str()), &head, rows)
}

/// One row per driver, one column per metric; `NA` for flat envelopes.
pub fn write_impact_factors(out: &OutDir, reports: &[EnvelopeReport]) -> Result<(), CliError> {
    let mut head = vec!["driver"];
    head.extend(reports.iter().map(|r| r.metric.as_str()));
    let drivers: Vec<IndexKind> = reports.first().map(|r| r.series.iter().map(|s| s.driver).collect()).unwrap_or_default();
    let rows = drivers.iter().map(|d| {
        let mut row = vec![d.as_str().to_owned()];
        row.extend(reports.iter().map(|r| opt_num(r.impact_factors.get(d).copied().flatten())));
        row
    });
    out.csv("impact_factors.csv", &head, rows)
}

pub fn write_pmf(out: &OutDir, reports: &[EnvelopeReport], driver: IndexKind, metric: Metric, bins: usize) -> Result<(), CliError> {
    let selected: Vec<EnvelopeReport> = reports.iter().filter(|r| r.metric == metric).cloned().collect();
    let pmf = if_pmf(&selected, driver, bins)?;
    let rows = (0..bins).map(|i| {
        let (lo, hi) = pmf.bin_edges(i);
        vec![num(lo), num(hi), num(pmf.mass[i])]
    });
    out.csv(&format!("pmf_{}_{}.csv", driver.as_str().to_ascii_lowercase(), metric.as_str()), &["bin_lo", "bin_hi", "mass"], rows)?;
    out.text(
        &format!("pmf_{}_{}.info", driver.as_str().to_ascii_lowercase(), metric.as_str()),
        &format!("samples {}\ninputs {}\n", pmf.samples, selected.len()),
    )
}

fn write_trace(out: &OutDir, t: &AttackTrace) -> Result<(), CliError> {
    let rows = t.snapshots.iter().map(|s| {
        vec![s.k.to_string(), s.gcc_size.to_string(), s.num_components.to_string(), num(s.avg_shortest_path), s.avg_path_defined.to_string()]
    });
    out.csv(
        &format!("trace_{}.csv", t.driver.as_str().to_ascii_lowercase()),
        &["k", "gcc_size", "num_components", "avg_shortest_path", "avg_path_defined"],
        rows,
    )
}

pub fn run(args: AttackArgs) -> Result<(), CliError> {
    check_damping(args.damping)?;
    check_fraction("--max-frac", args.max_frac)?;
    if args.bins == 0 {
        return Err(CliError::Args("--bins must be positive".into()));
    }
    if args.metric == Metric::AggMaxFlow {
        return Err(CliError::Args("the flow metric belongs to the capacity command".into()));
    }
    let requested = parse_index_list(&args.drivers)?;
    let explicit_steps = args.steps.as_deref().map(parse_steps).transpose()?;
    let paths = resolve_inputs(&args.input)?;
    let loaded = load_all(&paths, &args.ingest)?;

    let results: Vec<(Vec<AttackTrace>, Vec<EnvelopeReport>)> = loaded
        .par_iter()
        .map(|l| {
            let g = &l.graph;
            let steps = steps_for(&explicit_steps, g.node_count(), args.max_frac);
            let traces = indices_for(&requested, g)
                .par_iter()
                .map(|&d| run_attack(g, &AttackPlan::new(d, args.mode, steps.clone()), args.damping))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::at(&l.path))?;
            let reports = if traces.len() >= 2 {
                connectivity_envelopes(&traces).map_err(CliError::at(&l.path))?
            } else {
                Vec::new()
            };
            Ok((traces, reports))
        })
        .collect::<Result<_, CliError>>()?;

    let out = OutDir::create(&args.out)?;
    let mut manifest = RunManifest::new("attack", &args.out).with_inputs(&loaded, &args.ingest);
    if let Some(d) = args.pmf_of {
        manifest = manifest.option("pmf", serde_json::json!({ "driver": d, "metric": args.metric, "bins": args.bins }));
    }
    manifest.indices = requested.clone().unwrap_or_else(|| IndexKind::ALL.to_vec());
    manifest.damping = Some(args.damping);
    manifest.mode = Some(args.mode);
    if explicit_steps.is_none() {
        manifest.max_fraction = Some(args.max_frac);
    }
    manifest.steps = explicit_steps.clone();
    manifest.write(&out)?;
    write_ingest_reports(&out, &loaded)?;

    for (name, (traces, reports)) in dataset_names(&paths).iter().zip(&results) {
        let dir = if loaded.len() == 1 { out.clone() } else { out.sub(name)? };
        for t in traces {
            write_trace(&dir, t)?;
        }
        for r in reports {
            write_envelope(&dir, r)?;
        }
        if !reports.is_empty() {
            write_impact_factors(&dir, reports)?;
        }
    }

    if let Some(driver) = args.pmf_of {
        let all: Vec<EnvelopeReport> = results.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
        write_pmf(&out, &all, driver, args.metric, args.bins)?;
    }
    Ok(())
}
