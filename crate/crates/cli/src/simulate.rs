//! Per-replicate observables of grown trees or full coalescent runs.

use clap::Args;
use rrtlab_core::coalescent::run_kingman;
use rrtlab_core::empirical::Record;
use rrtlab_core::rng::par_replicates;
use rrtlab_core::tree::{grow_rrt, max_degree_set, RecursiveTree};

use crate::config::{load_file, Common, ExperimentConfig, Model};
use crate::output::RecordSink;
use crate::{set_threads, CliError};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    model: Option<Model>,
    #[arg(long)]
    n: Option<u32>,
    /// Vertices whose degree and depth are reported, e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    track: Vec<u32>,
}

/// Replicates per parallel batch; bounds memory held before writing.
const BATCH: u64 = 4096;

fn tree_records(tree: &RecursiveTree, track: &[u32], rep: u64, seed: u64, out: &mut Vec<Record>) {
    let n = tree.n() as u64;
    let degrees = tree.degrees();
    let (max, set) = max_degree_set(tree);
    out.push(Record::new(rep, n, seed, "max_degree", max as f64));
    out.push(Record::new(rep, n, seed, "multiplicity", set.len() as f64));
    out.push(Record::new(rep, n, seed, "root_degree", degrees[tree.root() as usize] as f64));
    for &v in track {
        out.push(Record::new(rep, n, seed, format!("degree_{v}"), degrees[v as usize] as f64));
        out.push(Record::new(rep, n, seed, format!("depth_{v}"), tree.depth_of(v) as f64));
    }
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let file = load_file(&args.common)?;
    let cfg = ExperimentConfig::resolve("simulate", &args.common, &file, 10);
    let model = args.model.or(file.model).unwrap_or_default();
    let n = args.n.or(file.n).unwrap_or(1024);
    let track = if args.track.is_empty() { file.track.clone().unwrap_or_default() } else { args.track.clone() };
    if n == 0 {
        return Err(CliError::Config("n must be at least 1".into()));
    }
    if let Some(&v) = track.iter().find(|&&v| v == 0 || v > n) {
        return Err(CliError::Config(format!("tracked vertex {v} outside 1..={n}")));
    }
    set_threads(cfg.threads)?;
    let mut sink = RecordSink::new(cfg.format, cfg.output.as_deref())?;
    let seed = cfg.seed;
    let mut start = 0;
    while start < cfg.replicates {
        let end = (start + BATCH).min(cfg.replicates);
        let batch: Vec<Result<Vec<Record>, rrtlab_core::Error>> = par_replicates(
            seed,
            start..end,
            || (),
            |rep, rng, _| {
                let mut out = Vec::new();
                match model {
                    Model::Rrt => tree_records(&grow_rrt(n, rng)?, &track, rep, seed, &mut out),
                    Model::Kingman => {
                        let run = run_kingman(n, rng, &track)?;
                        tree_records(&run.tree, &track, rep, seed, &mut out);
                        for &v in &track {
                            out.push(Record::new(
                                rep,
                                n as u64,
                                seed,
                                format!("selection_size_{v}"),
                                run.records[&v].size() as f64,
                            ));
                        }
                    }
                }
                Ok(out)
            },
        );
        for records in batch {
            for r in records? {
                sink.write(&r)?;
            }
        }
        start = end;
    }
    sink.finish()
}
