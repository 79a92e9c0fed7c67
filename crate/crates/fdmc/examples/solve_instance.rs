//! Solve one small instance with every solver and compare the answers.
//!
//! ```text
//! cargo run --example solve_instance
//! ```

use fdmc::approx::{solve_approx, ApproxOutcome};
use fdmc::k_plus_r::solve_k_plus_r;
use fdmc::large_fairlet::solve_large_fairlet;
use fdmc::oracle::{solve_by_edits, solve_by_partitions};
use fdmc::treewidth::solve_treewidth_auto;
use fdmc::{verify_solution, Instance};

fn main() -> fdmc::Result<()> {
    // Four rows, two columns, alternating colors, one edit allowed, at most
    // two distinct rows. The unique optimum edits row 2 from 01 to 00.
    let inst = Instance::new(
        vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]],
        vec![1, 2, 1, 2],
        2,
        1,
        2,
    )?;
    println!(
        "instance: m={} n={} c={} fairlet size={} k={} r={}",
        inst.m(),
        inst.n(),
        inst.num_colors(),
        inst.fairlet_size(),
        inst.k(),
        inst.r()
    );

    let partitions = solve_by_partitions(&inst)?;
    let edits = solve_by_edits(&inst)?;
    println!("oracle (partitions): {:?}, optimum {:?}", partitions.status, partitions.optimum_edits);
    println!("oracle (edit sets):  {:?}, optimum {:?}", edits.status, edits.optimum_edits);

    let large = solve_large_fairlet(&inst)?;
    println!("large-fairlet:       {:?}, optimum {:?}", large.status, large.optimum_edits);

    let kpr = solve_k_plus_r(&inst)?;
    println!("k-plus-r:            {:?}, optimum {:?}", kpr.status, kpr.optimum_edits);

    let tw = solve_treewidth_auto(&inst)?;
    println!("treewidth DP:        {:?}, optimum {:?}", tw.status, tw.optimum_edits);

    match solve_approx(&inst)? {
        ApproxOutcome::Feasible(sol) => {
            println!("approx:              feasible with {} edits", sol.edit_count())
        }
        other => println!("approx:              {other:?}"),
    }

    let witness = partitions.witness.expect("yes answers carry witnesses");
    println!("witness rows: {:?}", witness.edited_rows());
    assert!(verify_solution(&inst, &witness)?.feasible());
    Ok(())
}
