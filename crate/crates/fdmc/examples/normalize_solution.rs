//! Run the solution normalizer on a deliberately wasteful feasible solution:
//! all rows moved onto a brand-new type. The output keeps only types of the
//! input matrix, never increases the survivor count, and stays within the
//! `(5 − 3/c̃)` cost factor.
//!
//! ```text
//! cargo run --example normalize_solution
//! ```

use fdmc::approx::normalize_solution;
use fdmc::{Instance, RowType, Solution};

fn main() -> fdmc::Result<()> {
    let inst = Instance::new(
        vec![
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![1, 1, 1, 0],
            vec![1, 1, 1, 1],
        ],
        vec![1, 2, 1, 2],
        2,
        16,
        2,
    )?;

    // A feasible but clumsy witness: everything lands on 0110, a type that
    // does not occur in the matrix at all.
    let fresh = RowType(vec![0, 1, 1, 0]);
    let clumsy = Solution::from_rows(&inst, vec![fresh.clone(); 4])?;
    println!(
        "input solution: {} edits, {} cluster(s), center {:?}",
        clumsy.edit_count(),
        clumsy.distinct_types(),
        fresh
    );

    let normalized = normalize_solution(&inst, &clumsy)?;
    println!(
        "normalized:     {} edits, {} cluster(s), centers {:?}",
        normalized.edit_count(),
        normalized.distinct_types(),
        normalized.cluster_types()
    );

    for t in normalized.cluster_types() {
        assert!(inst.rows().contains(&t), "survivor {t:?} must come from the input matrix");
    }
    assert!(normalized.distinct_types() <= clumsy.distinct_types());
    let ct = inst.fairlet_size() as u64;
    assert!(ct * normalized.edit_count() <= (5 * ct - 3) * clumsy.edit_count());
    println!(
        "cost ratio {:.2} <= {:.2}",
        normalized.edit_count() as f64 / clumsy.edit_count() as f64,
        5.0 - 3.0 / ct as f64
    );
    Ok(())
}
