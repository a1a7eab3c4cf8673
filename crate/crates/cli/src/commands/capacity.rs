use rayon::prelude::*;
use toposcope_core::attack::{envelope, AttackPlan, EnvelopeReport, Metric};
use toposcope_core::centrality::{IndexKind, DEFAULT_DAMPING};
use toposcope_core::flow::{run_capacity_attack, CapacityTrace};
use toposcope_core::Error;

use super::attack::{write_envelope, write_impact_factors, write_pmf};
use crate::args::CapacityArgs;
use crate::common::{
    check_fraction, dataset_names, load_all, parse_index_list, parse_steps, resolve_inputs, steps_for,
    write_ingest_reports, RunManifest,
};
use crate::output::{num, OutDir};
use crate::CliError;

fn write_trace(out: &OutDir, t: &CapacityTrace) -> Result<(), CliError> {
    let rows = t.steps.iter().map(|p| vec![p.k.to_string(), num(p.agg_max_flow)]);
    out.csv(&format!("capacity_trace_{}.csv", t.driver.as_str().to_ascii_lowercase()), &["k", "agg_max_flow"], rows)
}

pub fn run(args: CapacityArgs) -> Result<(), CliError> {
    check_fraction("--max-frac", args.max_frac)?;
    if args.bins == 0 {
        return Err(CliError::Args("--bins must be positive".into()));
    }
    let drivers = match parse_index_list(&args.drivers)? {
        Some(list) => list,
        None => IndexKind::ALL.iter().copied().filter(|&k| k != IndexKind::Pg).collect(),
    };
    let explicit_steps = args.steps.as_deref().map(parse_steps).transpose()?;
    let paths = resolve_inputs(&args.input)?;
    let loaded = load_all(&paths, &args.ingest)?;

    let results: Vec<(Vec<CapacityTrace>, Option<EnvelopeReport>)> = loaded
        .par_iter()
        .map(|l| {
            let g = &l.graph;
            let at = || CliError::at(&l.path);
            if !g.is_capacitated() {
                return Err(at()(Error::NotCapacitated));
            }
            let steps = steps_for(&explicit_steps, g.node_count(), args.max_frac);
            let traces = drivers
                .par_iter()
                .map(|&d| run_capacity_attack(g, &AttackPlan::new(d, args.mode, steps.clone()), DEFAULT_DAMPING))
                .collect::<Result<Vec<_>, _>>()
                .map_err(at())?;
            let report = if traces.len() >= 2 {
                let series: Vec<_> = traces.iter().map(CapacityTrace::series).collect();
                Some(envelope(&series, Metric::AggMaxFlow).map_err(at())?)
            } else {
                None
            };
            Ok((traces, report))
        })
        .collect::<Result<_, CliError>>()?;

    let out = OutDir::create(&args.out)?;
    let mut manifest = RunManifest::new("capacity", &args.out).with_inputs(&loaded, &args.ingest);
    if let Some(d) = args.pmf_of {
        manifest = manifest.option("pmf", serde_json::json!({ "driver": d, "metric": Metric::AggMaxFlow, "bins": args.bins }));
    }
    manifest.indices = drivers.clone();
    manifest.mode = Some(args.mode);
    if explicit_steps.is_none() {
        manifest.max_fraction = Some(args.max_frac);
    }
    manifest.steps = explicit_steps.clone();
    manifest.write(&out)?;
    write_ingest_reports(&out, &loaded)?;

    for (name, (traces, report)) in dataset_names(&paths).iter().zip(&results) {
        let dir = if loaded.len() == 1 { out.clone() } else { out.sub(name)? };
        for t in traces {
            write_trace(&dir, t)?;
        }
        if let Some(r) = report {
            write_envelope(&dir, r)?;
            write_impact_factors(&dir, std::slice::from_ref(r))?;
        }
    }

    if let Some(driver) = args.pmf_of {
        let all: Vec<EnvelopeReport> = results.iter().filter_map(|(_, r)| r.clone()).collect();
        write_pmf(&out, &all, driver, Metric::AggMaxFlow, args.bins)?;
    }
    Ok(())
}
