//! Tables of limiting constants and laws.

use clap::Args;
use rrtlab_core::limits::{
    factorial_moment_prediction, limit_params, m_eps_pmf, poisson_means, ppp_intensity, CanonicalFdd,
};

use crate::config::parse_levels;
use crate::CliError;

#[derive(Debug, Args)]
pub struct LimitsArgs {
    /// Depth normalization constants at this `a` in [0, 1].
    #[arg(long, value_name = "A")]
    mu_sigma: Option<f64>,
    /// Law of the number of maximum-degree vertices at this offset.
    #[arg(long, value_name = "EPS")]
    meps: Option<f64>,
    /// Range of `k` for `--meps`, e.g. `1..10`.
    #[arg(long, default_value = "1..10")]
    k: String,
    /// Truncation `|m| <= trunc` of the series for `--meps`.
    #[arg(long, default_value_t = 60)]
    trunc: u32,
    /// Intensity of the limiting degree point process at `x`.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    intensity: Option<f64>,
    /// Poisson means of a canonical sequence, e.g. `0:(-inf,0],>=1:(-inf,inf)`.
    #[arg(long)]
    fdd: Option<String>,
    /// Offset used with `--fdd`.
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    /// Factorial-moment exponents used with `--fdd`, e.g. `2,0`.
    #[arg(long, value_delimiter = ',')]
    exponents: Vec<u32>,
}

pub fn run(args: LimitsArgs) -> Result<(), CliError> {
    let mut printed = false;
    if let Some(a) = args.mu_sigma {
        let p = limit_params(a)?;
        println!("a {a}\nmu_a {:.7}\nsigma2_a {:.7}", p.mu_a, p.sigma2_a);
        printed = true;
    }
    if let Some(x) = args.intensity {
        println!("intensity {:.7}", ppp_intensity(x));
        printed = true;
    }
    if let Some(eps) = args.meps {
        let (lo, hi) = parse_levels(&args.k)?;
        println!("k pmf tail_bound");
        let mut sum = 0.0;
        let mut bound = 0.0;
        for k in lo.max(1)..=hi {
            let t = m_eps_pmf(k, eps, args.trunc)?;
            println!("{k} {:.12e} {:.3e}", t.value, t.tail_bound);
            sum += t.value;
            bound += t.tail_bound;
        }
        println!("sum {sum:.12} tail_bound {bound:.3e}");
        printed = true;
    }
    if let Some(spec) = &args.fdd {
        let fdd: CanonicalFdd = spec.parse().map_err(|e: rrtlab_core::Error| CliError::Config(e.to_string()))?;
        let means = poisson_means(&fdd, args.eps)?;
        println!("entry mean");
        for (e, m) in fdd.entries().iter().zip(&means.poisson_means) {
            println!("{e} {m:.7}");
        }
        if !args.exponents.is_empty() {
            println!("factorial_moment {:.7}", factorial_moment_prediction(&fdd, &args.exponents, args.eps)?);
        }
        printed = true;
    }
    if !printed {
        return Err(CliError::Config("nothing to print; pass --mu-sigma, --meps, --intensity or --fdd".into()));
    }
    Ok(())
}
