//! Samplers against exact laws at small sizes.

use std::collections::BTreeMap;

use rrtlab_core::coalescent::{phi, run_kingman, TrackedCoalescent};
use rrtlab_core::empirical::chi_square;
use rrtlab_core::oracle::{enumerate_increasing_trees, exact_degree_depth_law};
use rrtlab_core::rng::seeded;
use rrtlab_core::{grow_rrt, Label};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const DRAWS: u64 = 60_000;

fn p_value(stat: f64, dof: usize) -> f64 {
    1.0 - ChiSquared::new(dof as f64).unwrap().cdf(stat)
}

fn uniform_over_trees(sample: impl FnMut() -> Vec<Label>) -> (f64, usize) {
    let trees = enumerate_increasing_trees(5).unwrap();
    let index: BTreeMap<Vec<Label>, usize> =
        trees.iter().enumerate().map(|(i, t)| (t.parent_slice().to_vec(), i)).collect();
    let mut counts = vec![0u64; trees.len()];
    let mut sample = sample;
    for _ in 0..DRAWS {
        counts[index[&sample()]] += 1;
    }
    chi_square(&counts, &vec![1.0 / trees.len() as f64; trees.len()])
}

#[test]
fn grown_trees_are_uniform() {
    let mut rng = seeded(1);
    let (stat, dof) = uniform_over_trees(|| grow_rrt(5, &mut rng).unwrap().parent_slice().to_vec());
    assert_eq!(dof, 23);
    assert!(p_value(stat, dof) > 1e-4, "chi2 = {stat}");
}

#[test]
fn relabeled_coalescent_trees_are_uniform() {
    let mut rng = seeded(2);
    let (stat, dof) = uniform_over_trees(|| {
        let run = run_kingman(5, &mut rng, &[]).unwrap();
        phi(&run.chain).unwrap().parent_slice().to_vec()
    });
    assert!(p_value(stat, dof) > 1e-4, "chi2 = {stat}");
}

#[test]
fn tracked_sampler_matches_exact_degree_depth_law() {
    let exact = exact_degree_depth_law(6, 1).unwrap();
    let keys: Vec<(u32, u32)> = exact.keys().copied().collect();
    let expected: Vec<f64> = exact.values().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
    let mut sampler = TrackedCoalescent::new(6, 1, 0).unwrap();
    let mut rng = seeded(3);
    let mut counts = vec![0u64; keys.len()];
    for _ in 0..DRAWS {
        sampler.sample(&mut rng, &[]);
        let o = sampler.outcome(0);
        let i = keys.binary_search(&(o.degree, o.depth)).expect("outcome outside the exact support");
        counts[i] += 1;
    }
    let (stat, dof) = chi_square(&counts, &expected);
    assert!(p_value(stat, dof) > 1e-4, "chi2 = {stat} on {dof}");
}

#[test]
fn full_chain_matches_exact_degree_depth_law_of_every_vertex() {
    let mut rng = seeded(4);
    for v in [1, 3, 6] {
        let exact = exact_degree_depth_law(6, v).unwrap();
        let keys: Vec<(u32, u32)> = exact.keys().copied().collect();
        let expected: Vec<f64> = exact.values().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
        let mut counts = vec![0u64; keys.len()];
        for _ in 0..DRAWS / 4 {
            let run = run_kingman(6, &mut rng, &[]).unwrap();
            let key = (run.tree.degrees()[v as usize], run.tree.depth_of(v));
            counts[keys.binary_search(&key).unwrap()] += 1;
        }
        let (stat, dof) = chi_square(&counts, &expected);
        assert!(p_value(stat, dof) > 1e-4, "v = {v}: chi2 = {stat} on {dof}");
    }
}

#[test]
fn survey_counts_match_exact_finite_size_means() {
    use rrtlab_core::empirical::survey_rrt;
    use rrtlab_core::oracle::degree_count_means;
    let n = 1 << 12;
    let reps = 20_000;
    let fdds: Vec<_> =
        ["0:(-inf,inf),1:(-inf,inf),2:(-inf,inf)", ">=3:(-inf,inf)"].iter().map(|s| s.parse().unwrap()).collect();
    let obs = survey_rrt(n, reps, 5, &fdds).unwrap();
    let exact = degree_count_means(n, 15).unwrap();
    let want = [exact[12], exact[13], exact[14], exact[15]];
    for (e, w) in want.iter().enumerate() {
        let xs: Vec<f64> = obs
            .iter()
            .map(|o| if e < 3 { o.counts[0].exact_counts[e] } else { o.counts[1].tail_counts[0] } as f64)
            .collect();
        let mean = xs.iter().sum::<f64>() / reps as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        assert!((mean - w).abs() < 4.0 * se, "entry {e}: {mean} vs {w} (se {se})");
    }
}
