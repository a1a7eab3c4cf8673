use toposcope_core::synth::{preferential_attachment, random_connected, scale_free_capacitated, with_random_capacities};
use toposcope_core::ingest::write_edgelist;

use crate::args::{GenerateArgs, Model};
use crate::common::RunManifest;
use crate::output::OutDir;
use crate::CliError;

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    if args.nodes < 2 || args.count == 0 {
        return Err(CliError::Args("need --nodes >= 2 and --count >= 1".into()));
    }
    if !(0.0..=1.0).contains(&args.p) {
        return Err(CliError::Args(format!("--p {} outside [0, 1]", args.p)));
    }
    if args.model == Model::Pa && (args.m == 0 || args.m >= args.nodes) {
        return Err(CliError::Args(format!("--m must be in 1..{}", args.nodes)));
    }
    let out = OutDir::create(&args.out)?;
    let model = match args.model {
        Model::Pa => "pa",
        Model::Random => "random",
    };
    for i in 0..args.count {
        let seed = args.seed + i as u64;
        let g = match (args.model, args.capacitated) {
            (Model::Pa, false) => preferential_attachment(args.nodes, args.m, seed)?,
            (Model::Pa, true) => scale_free_capacitated(args.nodes, args.m, seed)?,
            (Model::Random, false) => random_connected(args.nodes, args.p, seed)?,
            (Model::Random, true) => {
                with_random_capacities(&random_connected(args.nodes, args.p, seed)?, 10, 1e9, seed)?
            }
        };
        out.text(&format!("{model}_n{}_s{seed}.txt", args.nodes), &write_edgelist(&g))?;
    }
    let mut manifest = RunManifest::new("generate", &args.out)
        .option("model", model)
        .option("nodes", args.nodes)
        .option("count", args.count)
        .option("capacitated", args.capacitated);
    manifest = match args.model {
        Model::Pa => manifest.option("m", args.m),
        Model::Random => manifest.option("p", args.p),
    };
    manifest.seed = Some(args.seed);
    manifest.write(&out)
}
