//! Cross-check the two independent brute-force oracles and the exact FPT
//! solvers on a stream of small random instances.
//!
//! ```text
//! cargo run --release --example oracle_cross_check [count]
//! ```

use fdmc::generators::gen_random;
use fdmc::k_plus_r::solve_k_plus_r;
use fdmc::large_fairlet::solve_large_fairlet;
use fdmc::oracle::{solve_by_edits, solve_by_partitions, Status};
use fdmc::treewidth::solve_treewidth_auto;
use rand::{Rng, SeedableRng};

fn main() -> fdmc::Result<()> {
    let count: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut yes = 0u64;
    for seed in 0..count {
        let m = rng.gen_range(2..=6);
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(2..=3);
        let c = rng.gen_range(1..=m.min(3));
        let mut counts = vec![1usize; c];
        for _ in c..m {
            let z = rng.gen_range(0..c);
            counts[z] += 1;
        }
        let k = rng.gen_range(0..=3);
        let r = rng.gen_range(1..=3);
        let inst = gen_random(m, n, p, &counts, k, r, seed)?;

        let a = solve_by_partitions(&inst)?;
        let b = solve_by_edits(&inst)?;
        assert_eq!(a.status, b.status, "oracles disagree on seed {seed}");
        assert_eq!(a.optimum_edits, b.optimum_edits);
        if a.status == Status::Yes {
            yes += 1;
        }

        let kpr = solve_k_plus_r(&inst)?;
        assert_eq!(kpr.status, a.status, "k-plus-r disagrees on seed {seed}");

        if inst.fairlet_size() as u64 > inst.k() {
            let lf = solve_large_fairlet(&inst)?;
            assert_eq!(lf.status, a.status, "large-fairlet disagrees on seed {seed}");
        }
        if inst.is_binary() {
            let tw = solve_treewidth_auto(&inst)?;
            assert_eq!(tw.status, a.status, "treewidth disagrees on seed {seed}");
            assert_eq!(tw.optimum_edits, a.optimum_edits);
        }
    }
    println!("checked {count} random instances ({yes} solvable); all solvers agree");
    Ok(())
}
