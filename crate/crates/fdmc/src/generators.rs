//! Seeded instance factories: uniform random instances and planted-solution
//! instances with a known feasible matrix.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Entry, Instance, RowType};
use crate::solution::Solution;

/// Uniform random instance with the given per-color counts (color `z`
/// appears `color_counts[z-1]` times). Byte-identical output per seed.
pub fn gen_random(
    m: usize,
    n: usize,
    p: usize,
    color_counts: &[usize],
    k: u64,
    r: usize,
    seed: u64,
) -> Result<Instance> {
    if color_counts.iter().sum::<usize>() != m {
        return Err(Error::InvalidInput(format!(
            "color counts sum to {}, expected m = {m}",
            color_counts.iter().sum::<usize>()
        )));
    }
    if color_counts.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput("every color must occur".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<Entry>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0..p) as Entry).collect())
        .collect();
    let mut coloring = Vec::with_capacity(m);
    for (z, &count) in color_counts.iter().enumerate() {
        coloring.extend(std::iter::repeat(z + 1).take(count));
    }
    coloring.shuffle(&mut rng);
    Instance::new(rows, coloring, p, k, r)
}

/// Shape of a planted instance: clusters sized in whole fairlets over a
/// common per-fairlet color profile.
#[derive(Clone, Debug)]
pub struct PlantedConfig {
    pub n: usize,
    pub domain: usize,
    /// Fairlets per planted cluster; the cluster count becomes `r`.
    pub cluster_fairlets: Vec<usize>,
    /// Rows of each color in one fairlet (index 0 = color 1).
    pub fairlet_profile: Vec<usize>,
    pub noise_edits: u64,
    pub seed: u64,
}

/// Fair matrix with distinct cluster types, perturbed by exactly
/// `noise_edits` entry changes at distinct cells. The returned solution is
/// the planted matrix; it is feasible with cost exactly `noise_edits`, so
/// the instance optimum is at most the noise.
pub fn gen_planted(config: &PlantedConfig) -> Result<(Instance, Solution)> {
    let ctilde: usize = config.fairlet_profile.iter().sum();
    if ctilde == 0 || config.cluster_fairlets.is_empty() {
        return Err(Error::InvalidInput("empty planted configuration".into()));
    }
    if config.fairlet_profile.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput(
            "every color needs a positive per-fairlet count".into(),
        ));
    }
    if config.domain < 2 || config.n == 0 {
        return Err(Error::InvalidInput("need a domain of >= 2 values and n >= 1".into()));
    }
    let m: usize = config.cluster_fairlets.iter().map(|f| f * ctilde).sum();
    if (config.domain as u64).saturating_pow(config.n as u32)
        < config.cluster_fairlets.len() as u64
    {
        return Err(Error::InvalidInput("not enough distinct types available".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // Distinct cluster types.
    let mut types: Vec<RowType> = Vec::new();
    while types.len() < config.cluster_fairlets.len() {
        let t = RowType(
            (0..config.n).map(|_| rng.gen_range(0..config.domain) as Entry).collect(),
        );
        if !types.contains(&t) {
            types.push(t);
        }
    }

    let mut planted_rows: Vec<RowType> = Vec::new();
    let mut coloring: Vec<usize> = Vec::new();
    for (cluster, &fairlets) in config.cluster_fairlets.iter().enumerate() {
        for _ in 0..fairlets {
            for (z, &per) in config.fairlet_profile.iter().enumerate() {
                for _ in 0..per {
                    planted_rows.push(types[cluster].clone());
                    coloring.push(z + 1);
                }
            }
        }
    }

    // Exactly `noise_edits` distinct cells flipped to a different value.
    let cells = m * config.n;
    if config.noise_edits > cells as u64 {
        return Err(Error::InvalidInput("more noise edits than cells".into()));
    }
    let mut cell_ids: Vec<usize> = (0..cells).collect();
    cell_ids.shuffle(&mut rng);
    let mut noisy: Vec<RowType> = planted_rows.clone();
    for &cell in cell_ids.iter().take(config.noise_edits as usize) {
        let (i, j) = (cell / config.n, cell % config.n);
        let old = noisy[i].0[j];
        let mut new = rng.gen_range(0..config.domain - 1) as Entry;
        if new >= old {
            new += 1;
        }
        noisy[i].0[j] = new;
    }

    let inst = Instance::new(
        noisy.into_iter().map(|r| r.0).collect(),
        coloring,
        config.domain,
        config.noise_edits,
        config.cluster_fairlets.len(),
    )?;
    let solution = Solution::from_rows(&inst, planted_rows)?;
    debug_assert_eq!(solution.edit_count(), config.noise_edits);
    Ok((inst, solution))
}
