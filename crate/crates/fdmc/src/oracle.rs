//! Two independent brute-force exact solvers, used as ground truth for all
//! other solvers: one enumerates fair row partitions and recenters them by
//! majority vote, the other enumerates raw edit sets in increasing size.

use crate::error::{Error, Result};
use crate::instance::{Entry, Instance, RowType};
use crate::solution::{majority_recenter, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Status {
    Yes,
    No,
}

/// Result of an exact solver run.
///
/// `optimum_edits` is the minimum edit distance to any fair matrix with at
/// most `r` distinct rows, reported even when it exceeds `k` (the oracles
/// always find it; FPT solvers report it only when they answer Yes).
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub status: Status,
    pub optimum_edits: Option<u64>,
    pub witness: Option<Solution>,
}

impl OracleResult {
    pub fn yes(optimum: u64, witness: Solution) -> OracleResult {
        OracleResult { status: Status::Yes, optimum_edits: Some(optimum), witness: Some(witness) }
    }

    pub fn no(optimum: Option<u64>) -> OracleResult {
        OracleResult { status: Status::No, optimum_edits: optimum, witness: None }
    }

    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }
}

/// Capacity guards for the brute-force searches.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    /// `solve_by_partitions` refuses instances with more rows than this
    /// (Bell-number growth).
    pub max_partition_rows: usize,
    /// `solve_by_edits` aborts after generating this many candidate matrices.
    pub max_candidates: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_partition_rows: 10, max_candidates: 200_000_000 }
    }
}

/// Every instance has a feasible edit target for a large enough budget (the
/// single all-row cluster is fair), so both oracles always find the optimum.
pub fn solve_by_partitions(inst: &Instance) -> Result<OracleResult> {
    solve_by_partitions_with(inst, OracleLimits::default())
}

pub fn solve_by_partitions_with(inst: &Instance, limits: OracleLimits) -> Result<OracleResult> {
    let m = inst.m();
    if m > limits.max_partition_rows {
        return Err(Error::Capacity(format!(
            "solve_by_partitions supports up to {} rows, instance has {m}",
            limits.max_partition_rows
        )));
    }

    // Restricted-growth enumeration of partitions into at most r parts.
    let mut assignment = vec![0usize; m];
    let mut best: Option<(u64, Solution)> = None;
    enumerate_partitions(inst, &mut assignment, 0, 0, &mut best)?;

    let (optimum, witness) = best.expect("the single-cluster partition is always fair");
    if optimum <= inst.k() {
        Ok(OracleResult::yes(optimum, witness))
    } else {
        Ok(OracleResult::no(Some(optimum)))
    }
}

fn enumerate_partitions(
    inst: &Instance,
    assignment: &mut Vec<usize>,
    row: usize,
    parts: usize,
    best: &mut Option<(u64, Solution)>,
) -> Result<()> {
    if row == inst.m() {
        let mut part_rows = vec![Vec::new(); parts];
        for (i, &p) in assignment.iter().enumerate() {
            part_rows[p].push(i);
        }
        if !part_rows.iter().all(|rows| inst.is_fair_cluster(rows)) {
            return Ok(());
        }
        let sol = majority_recenter(inst, &part_rows)?;
        let cost = sol.edit_count();
        let better = match best {
            None => true,
            Some((bc, bw)) => {
                cost < *bc || (cost == *bc && sol.edited_rows() < bw.edited_rows())
            }
        };
        if better {
            *best = Some((cost, sol));
        }
        return Ok(());
    }
    for p in 0..parts {
        assignment[row] = p;
        enumerate_partitions(inst, assignment, row + 1, parts, best)?;
    }
    if parts < inst.r() {
        assignment[row] = parts;
        enumerate_partitions(inst, assignment, row + 1, parts + 1, best)?;
    }
    Ok(())
}

pub fn solve_by_edits(inst: &Instance) -> Result<OracleResult> {
    solve_by_edits_with(inst, OracleLimits::default())
}

/// Branch over exactly which cells are edited into which value, in
/// increasing edit-set size. The first size with a feasible matrix is the
/// optimum; among those matrices the lexicographically smallest is kept.
pub fn solve_by_edits_with(inst: &Instance, limits: OracleLimits) -> Result<OracleResult> {
    let cells = inst.m() * inst.n();
    let mut generated: u64 = 0;
    for size in 0..=cells {
        let mut best: Option<Vec<RowType>> = None;
        let mut chosen = Vec::with_capacity(size);
        let mut rows: Vec<RowType> = inst.rows().to_vec();
        enumerate_edit_sets(
            inst,
            size,
            0,
            &mut chosen,
            &mut rows,
            &mut best,
            &mut generated,
            limits.max_candidates,
        )?;
        if let Some(rows) = best {
            let sol = Solution::from_rows(inst, rows)?;
            debug_assert_eq!(sol.edit_count(), size as u64);
            return Ok(if sol.edit_count() <= inst.k() {
                OracleResult::yes(sol.edit_count(), sol)
            } else {
                OracleResult::no(Some(sol.edit_count()))
            });
        }
    }
    // Unreachable: editing everything to zero is always feasible.
    Err(Error::InvalidInstance("no feasible matrix exists at any budget".into()))
}

#[allow(clippy::too_many_arguments)]
fn enumerate_edit_sets(
    inst: &Instance,
    remaining: usize,
    next_cell: usize,
    chosen: &mut Vec<(usize, usize)>,
    rows: &mut Vec<RowType>,
    best: &mut Option<Vec<RowType>>,
    generated: &mut u64,
    cap: u64,
) -> Result<()> {
    if remaining == 0 {
        *generated += 1;
        if *generated > cap {
            return Err(Error::Capacity(format!(
                "solve_by_edits exceeded its cap of {cap} candidate matrices"
            )));
        }
        if is_feasible_clustering(inst, rows) {
            let better = match best {
                None => true,
                Some(b) => rows.as_slice() < b.as_slice(),
            };
            if better {
                *best = Some(rows.clone());
            }
        }
        return Ok(());
    }
    let cells = inst.m() * inst.n();
    // Not enough cells left to pick `remaining` more.
    if cells - next_cell < remaining {
        return Ok(());
    }
    for cell in next_cell..=(cells - remaining) {
        let (i, j) = (cell / inst.n(), cell % inst.n());
        let original = inst.row(i).values()[j];
        for v in 0..inst.domain() as Entry {
            if v == original {
                continue;
            }
            rows[i].0[j] = v;
            chosen.push((cell, v as usize));
            enumerate_edit_sets(inst, remaining - 1, cell + 1, chosen, rows, best, generated, cap)?;
            chosen.pop();
        }
        rows[i].0[j] = original;
    }
    Ok(())
}

/// Fast feasibility test: every cluster fair and at most `r` distinct rows.
fn is_feasible_clustering(inst: &Instance, rows: &[RowType]) -> bool {
    let c = inst.num_colors();
    let mut groups: Vec<(&RowType, Vec<usize>, usize)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        match groups.iter_mut().find(|(t, _, _)| **t == *row) {
            Some((_, counts, size)) => {
                counts[inst.color(i)] += 1;
                *size += 1;
            }
            None => {
                let mut counts = vec![0usize; c + 1];
                counts[inst.color(i)] += 1;
                groups.push((row, counts, 1));
            }
        }
    }
    if groups.len() > inst.r() {
        return false;
    }
    groups.iter().all(|(_, counts, size)| inst.is_fair_counts(counts, *size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::verify_solution;

    fn inst_a() -> Instance {
        Instance::new(
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]],
            vec![1, 2, 1, 2],
            2,
            1,
            2,
        )
        .unwrap()
    }

    #[test]
    fn inst_a_both_oracles() {
        let inst = inst_a();
        let a = solve_by_partitions(&inst).unwrap();
        let b = solve_by_edits(&inst).unwrap();
        assert_eq!(a.status, Status::Yes);
        assert_eq!(b.status, Status::Yes);
        assert_eq!(a.optimum_edits, Some(1));
        assert_eq!(b.optimum_edits, Some(1));
        // The unique optimum edits row 2 from 01 to 00.
        let w = a.witness.unwrap();
        assert_eq!(w.edited_rows()[1], RowType(vec![0, 0]));
        assert!(verify_solution(&inst, &w).unwrap().feasible());
    }

    #[test]
    fn inst_a_zero_budget_is_no() {
        let inst = inst_a().with_budgets(0, 2);
        let a = solve_by_partitions(&inst).unwrap();
        assert_eq!(a.status, Status::No);
        assert_eq!(a.optimum_edits, Some(1));
    }

    #[test]
    fn inst_a_single_cluster_budget() {
        // With r = 1 the only option is one cluster over all rows.
        let inst = inst_a().with_budgets(1, 1);
        let a = solve_by_partitions(&inst).unwrap();
        let b = solve_by_edits(&inst).unwrap();
        assert_eq!(a.status, Status::No);
        assert_eq!(b.status, Status::No);
        assert_eq!(a.optimum_edits, Some(3));
        assert_eq!(b.optimum_edits, Some(3));
    }

    #[test]
    fn single_color_three_rows() {
        let inst = Instance::new(
            vec![vec![0, 0], vec![0, 1], vec![1, 1]],
            vec![1, 1, 1],
            2,
            2,
            1,
        )
        .unwrap();
        let a = solve_by_partitions(&inst).unwrap();
        assert_eq!(a.status, Status::Yes);
        assert_eq!(a.optimum_edits, Some(2));
        assert_eq!(a.witness.unwrap().edited_rows()[0], RowType(vec![0, 1]));
    }

    #[test]
    fn already_feasible_needs_zero_edits() {
        let inst =
            Instance::new(vec![vec![1, 0], vec![1, 0]], vec![1, 2], 2, 0, 1).unwrap();
        let b = solve_by_edits(&inst).unwrap();
        assert_eq!(b.status, Status::Yes);
        assert_eq!(b.optimum_edits, Some(0));
    }

    #[test]
    fn partition_cap_is_enforced() {
        let inst = Instance::new(vec![vec![0]; 12], vec![1; 12], 2, 0, 1).unwrap();
        let limits = OracleLimits { max_partition_rows: 9, ..Default::default() };
        assert!(matches!(
            solve_by_partitions_with(&inst, limits),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn growing_budgets_never_flip_yes_to_no() {
        for bits in 0..64u32 {
            let rows: Vec<Vec<Entry>> = (0..3)
                .map(|i| vec![((bits >> (2 * i)) & 1) as Entry, ((bits >> (2 * i + 1)) & 1) as Entry])
                .collect();
            let mut last_yes_k = None;
            for k in 0..=4u64 {
                let inst = Instance::new(rows.clone(), vec![1, 2, 1], 2, k, 2).unwrap();
                let res = solve_by_partitions(&inst).unwrap();
                if res.status == Status::Yes {
                    last_yes_k.get_or_insert(k);
                } else {
                    assert!(last_yes_k.is_none(), "NO after YES at smaller k");
                }
            }
            let mut was_yes = false;
            for r in 1..=3usize {
                let inst = Instance::new(rows.clone(), vec![1, 2, 1], 2, 1, r).unwrap();
                let res = solve_by_partitions(&inst).unwrap();
                if was_yes {
                    assert_eq!(res.status, Status::Yes, "growing r flipped YES to NO");
                }
                was_yes = res.status == Status::Yes;
            }
        }
    }

    #[test]
    fn oracles_agree_on_tiny_sweep() {
        // All binary 3x2 matrices under a fixed 2-coloring, several budgets.
        for bits in 0..64u32 {
            let rows: Vec<Vec<Entry>> = (0..3)
                .map(|i| vec![((bits >> (2 * i)) & 1) as Entry, ((bits >> (2 * i + 1)) & 1) as Entry])
                .collect();
            for (k, r) in [(0, 1), (1, 2), (2, 2), (3, 3)] {
                let inst = Instance::new(rows.clone(), vec![1, 2, 1], 2, k, r);
                let inst = match inst {
                    Ok(i) => i,
                    Err(_) => continue,
                };
                let a = solve_by_partitions(&inst).unwrap();
                let b = solve_by_edits(&inst).unwrap();
                assert_eq!(a.status, b.status, "status mismatch on {rows:?} k={k} r={r}");
                assert_eq!(a.optimum_edits, b.optimum_edits);
            }
        }
    }
}
