//! Exact small-size checks by enumeration.

use std::path::PathBuf;

use clap::Args;
use rrtlab_core::oracle::{
    degree_depth_identities, degree_law_identities, golden_json, inclusion_exclusion_identities, relabel_identities,
    selection_product_identities, verify_phi, ChainUniverse, IdentityReport, MAX_CHAIN_N, MAX_PHI_N,
};

use crate::output::write_report;
use crate::CliError;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest size checked (at most 6; the bijection check stops at 5).
    #[arg(long, default_value_t = 5)]
    max_n: u32,
    /// Also write the exact laws up to `max-n` as JSON.
    #[arg(long)]
    golden: Option<PathBuf>,
}

fn check(report: IdentityReport) -> Result<(), CliError> {
    println!("n={} {}: {} equalities", report.n, report.name, report.checked);
    match report.mismatches.first() {
        None => Ok(()),
        Some(m) => Err(CliError::Verification(format!(
            "{} at n={}: {}: {} != {}",
            report.name, report.n, m.what, m.left, m.right
        ))),
    }
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    if !(1..=MAX_CHAIN_N).contains(&args.max_n) {
        return Err(CliError::Config(format!("max-n must be in 1..={MAX_CHAIN_N}")));
    }
    for n in 1..=args.max_n {
        if n <= MAX_PHI_N {
            let r = verify_phi(n)?;
            println!(
                "n={n} bijection: {} chains (expected {}), {} increasing trees (expected {}), fibers {}..{} (expected {})",
                r.chains, r.expected_chains, r.trees, r.expected_trees, r.min_fiber, r.max_fiber, r.expected_fiber
            );
            if let Some(c) = r.counterexample {
                return Err(CliError::Verification(format!("bijection at n={n}: {c}")));
            }
        }
        let u = ChainUniverse::build(n)?;
        for v in 1..=n {
            check(degree_depth_identities(&u, v)?)?;
        }
        check(relabel_identities(&u)?)?;
        check(degree_law_identities(&u)?)?;
        for k in 2..=n.min(3) as usize {
            check(inclusion_exclusion_identities(&u, k)?)?;
            check(selection_product_identities(&u, k)?)?;
        }
    }
    if let Some(path) = args.golden {
        write_report(Some(&path), golden_json(args.max_n.max(2))?)?;
    }
    println!("all checks passed");
    Ok(())
}
