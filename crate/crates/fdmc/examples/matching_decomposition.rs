//! Decompose random d-regular bipartite multigraphs into d edge-disjoint
//! perfect matchings and verify the output properties.
//!
//! ```text
//! cargo run --example matching_decomposition
//! ```

use fdmc::approx::{check_decomposition, decompose_regular_bipartite, BipartiteMultigraph};
use rand::{Rng, SeedableRng};

fn main() -> fdmc::Result<()> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for case in 0..20 {
        let n = rng.gen_range(2..=20);
        let d = rng.gen_range(1..=5);
        // union of d random permutations is d-regular (parallel edges allowed)
        let mut edges = Vec::new();
        for _ in 0..d {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            edges.extend((0..n).map(|l| (l, perm[l])));
        }
        let g = BipartiteMultigraph { left: n, right: n, edges };
        let matchings = decompose_regular_bipartite(&g)?;
        assert_eq!(matchings.len(), d);
        check_decomposition(&g, &matchings)?;
        println!(
            "case {case:2}: {d}-regular on {n}+{n} vertices -> {} edge-disjoint perfect matchings",
            matchings.len()
        );
    }
    println!("all decompositions verified");
    Ok(())
}
