//! Exact solver for instances with `c̃ > k`: fair clusters are frozen, no new
//! type can appear, and only unfair clusters exchange rows. Branches over the
//! (at most two) admissible target sizes per unfair cluster and solves a
//! per-color min-cost assignment between the induced half-edges.

use std::collections::BTreeMap;

use crate::assignment::{min_cost_assignment, min_cost_assignment_exhaustive};
use crate::error::{Error, Result};
use crate::instance::{dist, Color, Instance, RowType};
use crate::oracle::OracleResult;
use crate::solution::Solution;

/// Target cluster sizes chosen for each unfair type, in canonical
/// (lexicographic) type order. At most two candidate sizes exist per type
/// since the window `|S| ± k` is shorter than `2c̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeBranch {
    pub targets: Vec<(RowType, usize)>,
}

/// Signed row demand per (unfair type, color): positive counts are incoming
/// half-edges, negative are outgoing.
#[derive(Clone, Debug, Default)]
pub struct HalfEdgeDemand {
    pub demands: BTreeMap<(RowType, Color), i64>,
}

/// A row of `color` edited from type `from` into type `to`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RowMove {
    pub from: RowType,
    pub to: RowType,
    pub color: Color,
}

impl RowMove {
    pub fn cost(&self) -> u64 {
        dist(&self.from, &self.to)
    }
}

/// Pair outgoing with incoming half-edges of equal color at minimum total
/// Hamming cost. Returns `None` when some color is unbalanced (the branch is
/// infeasible). `exhaustive` switches to the permutation-enumeration
/// reference search.
pub fn match_half_edges(
    demand: &HalfEdgeDemand,
    exhaustive: bool,
) -> Option<(u64, Vec<RowMove>)> {
    let mut colors: Vec<Color> =
        demand.demands.keys().map(|(_, z)| *z).collect();
    colors.sort_unstable();
    colors.dedup();

    let mut total = 0u64;
    let mut moves = Vec::new();
    for z in colors {
        let mut out: Vec<&RowType> = Vec::new();
        let mut inc: Vec<&RowType> = Vec::new();
        for ((t, color), &d) in &demand.demands {
            if *color != z {
                continue;
            }
            if d > 0 {
                inc.extend(std::iter::repeat(t).take(d as usize));
            } else {
                out.extend(std::iter::repeat(t).take((-d) as usize));
            }
        }
        if out.len() != inc.len() {
            return None;
        }
        if out.is_empty() {
            continue;
        }
        let cost: Vec<Vec<u64>> =
            out.iter().map(|o| inc.iter().map(|i| dist(o, i)).collect()).collect();
        let (best, assignment) = if exhaustive {
            min_cost_assignment_exhaustive(&cost)
        } else {
            min_cost_assignment(&cost)
        };
        total += best;
        for (oi, &ii) in assignment.iter().enumerate() {
            moves.push(RowMove { from: out[oi].clone(), to: inc[ii].clone(), color: z });
        }
    }
    moves.sort();
    Some((total, moves))
}

pub fn solve_large_fairlet(inst: &Instance) -> Result<OracleResult> {
    solve_large_fairlet_with(inst, false)
}

pub fn solve_large_fairlet_with(inst: &Instance, exhaustive_matching: bool) -> Result<OracleResult> {
    let ctilde = inst.fairlet_size() as u64;
    if ctilde <= inst.k() {
        return Err(Error::NotApplicable(format!(
            "large-fairlet solver requires c̃ > k, got c̃ = {ctilde}, k = {}",
            inst.k()
        )));
    }
    let k = inst.k();
    let clusters = inst.clusters();
    let unfair: Vec<(RowType, Vec<usize>)> = clusters
        .iter()
        .filter(|(_, rows)| !inst.is_fair_cluster(rows))
        .cloned()
        .collect();
    let fair_count = clusters.len() - unfair.len();

    // With k edits the clusters of at most 2k types change.
    if unfair.len() as u64 > 2 * k {
        return Ok(OracleResult::no(None));
    }

    // Admissible target sizes per unfair type: multiples of c̃ within ±k of
    // the current size (0 allowed, dissolving the cluster).
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(unfair.len());
    for (_, rows) in &unfair {
        let s = rows.len() as u64;
        let lo = s.saturating_sub(k);
        let hi = s + k;
        let sizes: Vec<usize> = (0..=hi / ctilde)
            .map(|i| i * ctilde)
            .filter(|&t| t >= lo && t <= hi)
            .map(|t| t as usize)
            .collect();
        debug_assert!(sizes.len() <= 2);
        if sizes.is_empty() {
            return Ok(OracleResult::no(None));
        }
        candidates.push(sizes);
    }

    // Branches in lexicographic order of the target-size vector; ties on
    // cost therefore keep the lexicographically smallest branch.
    let mut best: Option<(u64, SizeBranch, Vec<RowMove>)> = None;
    let mut index = vec![0usize; unfair.len()];
    'branches: loop {
        let branch = SizeBranch {
            targets: unfair
                .iter()
                .enumerate()
                .map(|(pos, (t, _))| (t.clone(), candidates[pos][index[pos]]))
                .collect(),
        };
        evaluate_branch(inst, &unfair, fair_count, &branch, exhaustive_matching, &mut best);

        let mut pos = index.len();
        loop {
            if pos == 0 {
                break 'branches;
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < candidates[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }

    match best {
        Some((cost, branch, moves)) => {
            let witness = realize_moves(inst, &unfair, &moves)?;
            debug_assert_eq!(witness.edit_count(), cost);
            debug_assert!(fair_clusters_untouched(inst, &witness));
            let _ = branch;
            Ok(OracleResult::yes(cost, witness))
        }
        None => Ok(OracleResult::no(None)),
    }
}

fn evaluate_branch(
    inst: &Instance,
    unfair: &[(RowType, Vec<usize>)],
    fair_count: usize,
    branch: &SizeBranch,
    exhaustive: bool,
    best: &mut Option<(u64, SizeBranch, Vec<RowMove>)>,
) {
    let m = inst.m();
    let counts = inst.color_counts();
    let mut demand = HalfEdgeDemand::default();
    let mut total_moves: i64 = 0;
    for ((t, rows), &(_, target)) in unfair.iter().zip(&branch.targets) {
        let mut current = vec![0usize; counts.len()];
        for &i in rows {
            current[inst.color(i)] += 1;
        }
        for z in 1..counts.len() {
            let required = (target * counts[z] / m) as i64;
            let d = required - current[z] as i64;
            if d != 0 {
                demand.demands.insert((t.clone(), z), d);
            }
            if d > 0 {
                total_moves += d;
            }
        }
    }
    // Every moved row costs at least one edit.
    if total_moves as u64 > inst.k() {
        return;
    }
    let survivors =
        fair_count + branch.targets.iter().filter(|&&(_, t)| t > 0).count();
    if survivors > inst.r() {
        return;
    }
    if let Some((cost, moves)) = match_half_edges(&demand, exhaustive) {
        if cost <= inst.k() {
            let better = match best {
                None => true,
                Some((bc, _, _)) => cost < *bc,
            };
            if better {
                *best = Some((cost, branch.clone(), moves));
            }
        }
    }
}

/// Materialize row moves into a concrete witness, taking the smallest row
/// indices of the required color from each source cluster.
fn realize_moves(
    inst: &Instance,
    unfair: &[(RowType, Vec<usize>)],
    moves: &[RowMove],
) -> Result<Solution> {
    let mut available: BTreeMap<(RowType, Color), Vec<usize>> = BTreeMap::new();
    for (t, rows) in unfair {
        for &i in rows {
            available.entry((t.clone(), inst.color(i))).or_default().push(i);
        }
    }
    for rows in available.values_mut() {
        rows.sort_unstable();
        rows.reverse(); // pop() takes the smallest index
    }
    let mut edited = inst.rows().to_vec();
    for mv in moves {
        let rows = available
            .get_mut(&(mv.from.clone(), mv.color))
            .ok_or_else(|| Error::InvalidInput("no row available for move".into()))?;
        let i = rows
            .pop()
            .ok_or_else(|| Error::InvalidInput("source cluster exhausted".into()))?;
        edited[i] = mv.to.clone();
    }
    Solution::from_rows(inst, edited)
}

fn fair_clusters_untouched(inst: &Instance, witness: &Solution) -> bool {
    inst.clusters()
        .iter()
        .filter(|(_, rows)| inst.is_fair_cluster(rows))
        .all(|(t, rows)| {
            // no row leaves the fair cluster ...
            rows.iter().all(|&i| witness.edited_rows()[i] == *t)
            // ... and no row enters it
                && (0..inst.m())
                    .filter(|&i| witness.edited_rows()[i] == *t)
                    .all(|i| inst.row(i) == t)
        })
}
