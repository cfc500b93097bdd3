//! Convergence experiments: raw data as records, summaries as a JSON report.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rrtlab_core::empirical::{
    conditional_depth_experiment, factorial_moment_estimate, h2_negligibility_experiment, lattice_offset,
    max_multiplicity_summary, subsequence_schedule, survey_rrt, CondDepthConfig, Record,
};
use rrtlab_core::limits::{factorial_moment_prediction, poisson_means, CanonicalFdd};
use serde_json::{json, Value};

use crate::config::{load_file, parse_levels, Common, ExperimentConfig, FileConfig};
use crate::output::{write_report, RecordSink};
use crate::{set_threads, CliError};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Experiment {
    /// Normalized depth of `k` unconditioned vertices of the coalescent.
    DepthClt,
    /// Normalized depths given high degrees, by rejection.
    CondDepth,
    /// Mean counts of high-degree vertices against Poisson means.
    Ppp,
    /// Number of maximum-degree vertices and their depths.
    MaxMult,
    /// Factorial moments of the counts.
    Moments,
    /// Late depth gain across sizes.
    H2,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::DepthClt => "depth-clt",
            Experiment::CondDepth => "cond-depth",
            Experiment::Ppp => "ppp",
            Experiment::MaxMult => "max-mult",
            Experiment::Moments => "moments",
            Experiment::H2 => "h2",
        }
    }
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[command(flatten)]
    common: Common,
    /// Single size; overrides `--eps`/`--levels`.
    #[arg(long)]
    n: Option<u32>,
    /// Sizes `round(2^(l + eps))`.
    #[arg(long)]
    eps: Option<f64>,
    /// Levels `l`, as `L` or `LO..HI`.
    #[arg(long)]
    levels: Option<String>,
    /// Number of unconditioned vertices for `depth-clt`.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    b: Vec<i32>,
    /// Canonical sequence for `ppp` and `moments`.
    #[arg(long)]
    fdd: Option<String>,
    #[arg(long, value_delimiter = ',')]
    exponents: Vec<u32>,
    /// Degree lower bounds for `h2`.
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<u32>,
    /// Kept chains to stop at (`cond-depth`).
    #[arg(long)]
    target: Option<usize>,
    #[arg(long)]
    max_attempts: Option<u64>,
    /// Late-depth level as a multiple of `sqrt(ln n)` (`h2`).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    ks_threshold: Option<f64>,
    /// Report file (default: standard error).
    #[arg(long)]
    report: Option<PathBuf>,
}

struct Ctx<'a> {
    args: &'a ConvergeArgs,
    file: &'a FileConfig,
    cfg: ExperimentConfig,
}

impl Ctx<'_> {
    fn schedule(&self, default_level: u32) -> Result<Vec<u32>, CliError> {
        if let Some(n) = self.args.n.or(self.file.n) {
            return Ok(vec![n]);
        }
        let eps = self.args.eps.or(self.file.eps).unwrap_or(0.0);
        let (lo, hi) = match self.args.levels.as_ref().or(self.file.levels.as_ref()) {
            Some(s) => parse_levels(s)?,
            None => (default_level, default_level),
        };
        Ok(subsequence_schedule(eps, lo, hi)?)
    }

    fn list<T: Clone>(flag: &[T], file: &Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
        if !flag.is_empty() {
            flag.to_vec()
        } else {
            file.clone().unwrap_or(default)
        }
    }

    fn fdd(&self, default: &str) -> Result<CanonicalFdd, CliError> {
        let spec = self.args.fdd.clone().or_else(|| self.file.fdd.clone()).unwrap_or_else(|| default.into());
        spec.parse().map_err(|e: rrtlab_core::Error| CliError::Config(e.to_string()))
    }

    fn ks_threshold(&self) -> f64 {
        self.args.ks_threshold.or(self.file.ks_threshold).unwrap_or(0.05)
    }
}

pub fn run(args: ConvergeArgs) -> Result<(), CliError> {
    let file = load_file(&args.common)?;
    let cfg = ExperimentConfig::resolve(args.experiment.name(), &args.common, &file, 1000);
    set_threads(cfg.threads)?;
    let report_path = args.report.clone().or_else(|| file.report.clone());
    let ctx = Ctx { args: &args, file: &file, cfg };
    let mut sink = RecordSink::new(ctx.cfg.format, ctx.cfg.output.as_deref())?;
    let (status, results) = match args.experiment {
        Experiment::DepthClt | Experiment::CondDepth => depth(&ctx, &mut sink)?,
        Experiment::Ppp | Experiment::Moments => counts(&ctx, &mut sink)?,
        Experiment::MaxMult => max_mult(&ctx, &mut sink)?,
        Experiment::H2 => h2(&ctx, &mut sink)?,
    };
    sink.finish()?;
    if status != "ok" {
        eprintln!("rrtlab: warning: {status}");
    }
    let body = json!({ "experiment": ctx.cfg.experiment, "config": ctx.cfg, "status": status, "results": results });
    match report_path {
        Some(p) => write_report(Some(&p), body),
        None => {
            eprintln!("{}", serde_json::to_string_pretty(&body).map_err(|e| CliError::Io(e.to_string()))?);
            Ok(())
        }
    }
}

type Outcome = (&'static str, Value);

fn depth(ctx: &Ctx, sink: &mut RecordSink) -> Result<Outcome, CliError> {
    let n = ctx.args.n.or(ctx.file.n).unwrap_or(1 << 16);
    let (a, b, target, max_attempts) = match ctx.args.experiment {
        Experiment::DepthClt => {
            let k = ctx.args.k.unwrap_or(1);
            (vec![0.0; k], vec![0; k], usize::MAX, ctx.cfg.replicates)
        }
        _ => {
            let a = Ctx::list(&ctx.args.a, &ctx.file.a, vec![1.0]);
            let b = Ctx::list(&ctx.args.b, &ctx.file.b, vec![0; a.len()]);
            let target = ctx.args.target.or(ctx.file.target).unwrap_or(ctx.cfg.replicates as usize);
            (a, b, target, ctx.args.max_attempts.or(ctx.file.max_attempts).unwrap_or(100_000_000))
        }
    };
    let mut cfg = CondDepthConfig::new(n, a, b, ctx.cfg.seed);
    cfg.target_retained = target;
    cfg.max_attempts = max_attempts;
    cfg.ks_threshold = ctx.ks_threshold();
    let r = conditional_depth_experiment(&cfg)?;
    for (rep, _) in r.samples.first().into_iter().flatten().enumerate() {
        for (i, s) in r.samples.iter().enumerate() {
            let x = &s[rep];
            sink.write(&Record::new(
                rep as u64,
                n as u64,
                ctx.cfg.seed,
                format!("depth_{}", i + 1),
                x.raw_depth as f64,
            ))?;
            sink.write(&Record::new(rep as u64, n as u64, ctx.cfg.seed, format!("z_{}", i + 1), x.z))?;
        }
    }
    let status = if r.underpowered { "underpowered" } else { "ok" };
    Ok((
        status,
        json!({
            "n": r.n,
            "a": cfg.a,
            "b": cfg.b,
            "thresholds": r.thresholds,
            "attempts": r.attempts,
            "retained": r.retained,
            "acceptance_rate": r.acceptance_rate,
            "scaled_acceptance": r.scaled_acceptance,
            "ks": r.ks,
            "correlations": r.correlations,
        }),
    ))
}

fn counts(ctx: &Ctx, sink: &mut RecordSink) -> Result<Outcome, CliError> {
    let moments = matches!(ctx.args.experiment, Experiment::Moments);
    let fdd = ctx.fdd(if moments { "0:(-inf,0]" } else { "0:(-inf,inf),1:(-inf,inf),2:(-inf,inf),>=3:(-inf,inf)" })?;
    let exponents = Ctx::list(&ctx.args.exponents, &ctx.file.exponents, vec![2; fdd.len()]);
    let mut rows = Vec::new();
    for (i, n) in ctx.schedule(16)?.into_iter().enumerate() {
        let seed = ctx.cfg.seed.wrapping_add(i as u64);
        let obs = survey_rrt(n, ctx.cfg.replicates, seed, std::slice::from_ref(&fdd))?;
        let samples: Vec<_> = obs.into_iter().map(|mut o| o.counts.remove(0)).collect();
        for (rep, s) in samples.iter().enumerate() {
            for (e, c) in s.counts().enumerate() {
                sink.write(&Record::new(rep as u64, n as u64, seed, format!("count_{e}"), c as f64))?;
            }
        }
        let eps_n = lattice_offset(n);
        let row = if moments {
            json!({
                "n": n,
                "epsilon_n": eps_n,
                "exponents": exponents,
                "estimate": factorial_moment_estimate(&samples, &exponents)?,
                "prediction": factorial_moment_prediction(&fdd, &exponents, eps_n)?,
            })
        } else {
            let total = samples.len() as f64;
            let means: Vec<f64> = (0..fdd.len())
                .map(|e| samples.iter().map(|s| s.counts().nth(e).unwrap_or(0) as f64).sum::<f64>() / total)
                .collect();
            json!({
                "n": n,
                "epsilon_n": eps_n,
                "entries": fdd.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "means": means,
                "predictions": poisson_means(&fdd, eps_n)?.poisson_means,
            })
        };
        rows.push(row);
    }
    Ok(("ok", json!({ "fdd": fdd.to_string(), "rows": rows })))
}

fn max_mult(ctx: &Ctx, sink: &mut RecordSink) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for (i, n) in ctx.schedule(16)?.into_iter().enumerate() {
        let seed = ctx.cfg.seed.wrapping_add(i as u64);
        let obs = survey_rrt(n, ctx.cfg.replicates, seed, &[])?;
        for (rep, o) in obs.iter().enumerate() {
            sink.write(&Record::new(rep as u64, n as u64, seed, "multiplicity", o.multiplicity as f64))?;
            sink.write(&Record::new(rep as u64, n as u64, seed, "max_degree", o.max_degree as f64))?;
        }
        let r = max_multiplicity_summary(n, &obs, ctx.ks_threshold())?;
        let shown = 8.min(r.pmf.len());
        rows.push(json!({
            "n": n,
            "epsilon_n": r.epsilon_n,
            "replicates": r.replicates,
            "tv": r.tv,
            "pmf": &r.pmf[..shown],
            "reference": &r.reference[..shown],
            "depth_ks": r.depth_ks,
        }));
    }
    Ok(("ok", json!({ "rows": rows })))
}

fn h2(ctx: &Ctx, sink: &mut RecordSink) -> Result<Outcome, CliError> {
    let thresholds = Ctx::list(&ctx.args.thresholds, &ctx.file.thresholds, Vec::new());
    let c = ctx.args.c.or(ctx.file.c).unwrap_or(0.5);
    let sizes = ctx.schedule(12)?;
    let points = h2_negligibility_experiment(&sizes, &thresholds, c, ctx.cfg.replicates, ctx.cfg.seed)?;
    for p in &points {
        sink.write(&Record::new(0, p.n as u64, ctx.cfg.seed, "joint_probability", p.joint_probability))?;
        sink.write(&Record::new(0, p.n as u64, ctx.cfg.seed, "conditional_probability", p.conditional_probability))?;
    }
    let status = if points.iter().any(|p| p.degenerate) { "degenerate" } else { "ok" };
    Ok((status, json!({ "c": c, "thresholds": thresholds, "points": points })))
}
