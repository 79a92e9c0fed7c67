//! Exact solver parameterized by `k + r`: enumerate row-migration patterns
//! with up to `⌊k/2⌋` new types, fix each new type by a column-wise majority
//! vote over its assigned rows, then check fairness, cost and the distinct-row
//! bound.
//!
//! Patterns quotient the space of modified reduced edit graphs: rows of equal
//! type and color are interchangeable, and majority votes depend only on the
//! per-(source, color, destination) move counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{dist, Color, Entry, Instance, RowType};
use crate::large_fairlet::solve_large_fairlet;
use crate::oracle::OracleResult;
use crate::solution::Solution;

/// Destination of a group of moved rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternDest {
    Existing(RowType),
    NewSlot(usize),
}

/// A multiset of row moves `(source type, color, destination, count)`.
/// New slots must receive rows from at least two distinct source types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MigrationPattern {
    pub moves: Vec<(RowType, Color, PatternDest, usize)>,
}

impl MigrationPattern {
    pub fn total_moved(&self) -> usize {
        self.moves.iter().map(|(_, _, _, n)| n).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PatternLimits {
    /// Abort after visiting this many patterns.
    pub max_patterns: u64,
}

impl Default for PatternLimits {
    fn default() -> Self {
        PatternLimits { max_patterns: 50_000_000 }
    }
}

/// Every pattern with at most `k` moved rows over the existing types plus
/// `⌊k/2⌋` new slots, subject to per-(type, color) row availability.
pub fn enumerate_patterns(inst: &Instance, cap: u64) -> Result<Vec<MigrationPattern>> {
    let mut out = Vec::new();
    for_each_pattern(inst, cap, false, &mut |pattern, _| {
        out.push(pattern.clone());
        true
    })?;
    Ok(out)
}

struct MoveKind {
    source: usize,
    color: Color,
    dest: PatternDest,
    /// Per-row lower bound on the edit cost of this move.
    unit_cost: u64,
    available: usize,
}

/// Visit patterns in ascending lexicographic order of their move-count
/// vectors. The visitor receives the pattern and its cost lower bound and
/// returns whether enumeration should continue. With `prune_by_cost` set,
/// subtrees whose lower bound exceeds `k` are skipped; such patterns cannot
/// underlie any solution within budget.
fn for_each_pattern(
    inst: &Instance,
    cap: u64,
    prune_by_cost: bool,
    visit: &mut impl FnMut(&MigrationPattern, u64) -> bool,
) -> Result<()> {
    let types = inst.types();
    let clusters = inst.clusters();
    let slots = (inst.k() / 2) as usize;

    let mut availability: BTreeMap<(usize, Color), usize> = BTreeMap::new();
    for (ti, (_, rows)) in clusters.iter().enumerate() {
        for &i in rows {
            *availability.entry((ti, inst.color(i))).or_default() += 1;
        }
    }

    let mut kinds: Vec<MoveKind> = Vec::new();
    for si in 0..types.len() {
        for z in 1..=inst.num_colors() {
            let available = match availability.get(&(si, z)) {
                Some(&n) => n,
                None => continue,
            };
            for (di, dest_type) in types.iter().enumerate() {
                if di == si {
                    continue;
                }
                kinds.push(MoveKind {
                    source: si,
                    color: z,
                    dest: PatternDest::Existing(dest_type.clone()),
                    unit_cost: dist(&types[si], dest_type),
                    available,
                });
            }
            for s in 0..slots {
                kinds.push(MoveKind {
                    source: si,
                    color: z,
                    dest: PatternDest::NewSlot(s),
                    unit_cost: 1,
                    available,
                });
            }
        }
    }

    let mut visited: u64 = 0;
    let mut current: Vec<(usize, usize)> = Vec::new(); // (kind index, count)
    rec_patterns(
        inst,
        &types,
        &kinds,
        0,
        0,
        0,
        prune_by_cost,
        &mut current,
        &mut visited,
        cap,
        visit,
    )?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn rec_patterns(
    inst: &Instance,
    types: &[RowType],
    kinds: &[MoveKind],
    next_kind: usize,
    moved: usize,
    cost_lb: u64,
    prune_by_cost: bool,
    current: &mut Vec<(usize, usize)>,
    visited: &mut u64,
    cap: u64,
    visit: &mut impl FnMut(&MigrationPattern, u64) -> bool,
) -> Result<bool> {
    *visited += 1;
    if *visited > cap {
        return Err(Error::Capacity(format!(
            "pattern enumeration exceeded its cap after {} patterns; the rest were pruned",
            *visited - 1
        )));
    }

    // Slots must be used in index order; this breaks slot-permutation symmetry.
    let used_slots = current
        .iter()
        .filter_map(|&(ki, _)| match kinds[ki].dest {
            PatternDest::NewSlot(s) => Some(s + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);

    let pattern = MigrationPattern {
        moves: current
            .iter()
            .map(|&(ki, n)| {
                let k = &kinds[ki];
                (types[k.source].clone(), k.color, k.dest.clone(), n)
            })
            .collect(),
    };
    if !visit(&pattern, cost_lb) {
        return Ok(false);
    }

    for ki in next_kind..kinds.len() {
        let kind = &kinds[ki];
        if let PatternDest::NewSlot(s) = kind.dest {
            if s > used_slots {
                continue;
            }
        }
        // Remaining per-(source, color) availability for this kind.
        let used: usize = current
            .iter()
            .filter(|&&(other, _)| {
                kinds[other].source == kind.source && kinds[other].color == kind.color
            })
            .map(|&(_, n)| n)
            .sum();
        let max_count = kind
            .available
            .saturating_sub(used)
            .min(inst.k() as usize - moved);
        for n in 1..=max_count {
            let lb = cost_lb + kind.unit_cost * n as u64;
            if prune_by_cost && lb > inst.k() {
                break;
            }
            current.push((ki, n));
            let go = rec_patterns(
                inst,
                types,
                kinds,
                ki + 1,
                moved + n,
                lb,
                prune_by_cost,
                current,
                visited,
                cap,
                visit,
            )?;
            current.pop();
            if !go {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn solve_k_plus_r(inst: &Instance) -> Result<OracleResult> {
    solve_k_plus_r_with(inst, PatternLimits::default())
}

pub fn solve_k_plus_r_with(inst: &Instance, limits: PatternLimits) -> Result<OracleResult> {
    solve_k_plus_r_counting(inst, limits).map(|(res, _)| res)
}

/// Like [`solve_k_plus_r_with`], also reporting the number of enumerated
/// migration patterns.
pub fn solve_k_plus_r_counting(
    inst: &Instance,
    limits: PatternLimits,
) -> Result<(OracleResult, u64)> {
    let k = inst.k();
    let dr = inst.distinct_rows();

    // Removing a cluster takes at least one edit.
    if dr as u64 > k + inst.r() as u64 {
        return Ok((OracleResult::no(None), 0));
    }
    if inst.fairlet_size() as u64 > k {
        return solve_large_fairlet(inst).map(|res| (res, 0));
    }
    // With k edits at most ⌊k/c̃⌋ new fair clusters can be created, so r can
    // be capped without changing the answer.
    let r_cap = inst.r().min(dr + (k / inst.fairlet_size() as u64) as usize);
    let capped = inst.with_budgets(k, r_cap);

    let mut best: Option<(u64, Solution)> = None;
    let mut patterns = 0u64;
    for_each_pattern(&capped, limits.max_patterns, true, &mut |pattern, cost_lb| {
        patterns += 1;
        if let Some((bc, _)) = &best {
            if cost_lb > *bc {
                return true; // cannot beat the incumbent; siblings may differ
            }
        }
        if let Some((cost, witness)) = evaluate_pattern(&capped, pattern) {
            let better = match &best {
                None => true,
                Some((bc, bw)) => {
                    cost < *bc || (cost == *bc && witness.edited_rows() < bw.edited_rows())
                }
            };
            if better {
                best = Some((cost, witness));
            }
        }
        true
    })?;

    let res = match best {
        Some((cost, witness)) => OracleResult::yes(cost, witness),
        None => OracleResult::no(None),
    };
    Ok((res, patterns))
}

/// Resolve new slots by majority vote, merge colliding centers, and check
/// fairness, cost and the distinct-type bound. Returns the realized witness
/// and its exact cost on success.
fn evaluate_pattern(inst: &Instance, pattern: &MigrationPattern) -> Option<(u64, Solution)> {
    // Majority centers of the new slots, weighted by move counts.
    let mut slot_rows: BTreeMap<usize, Vec<(&RowType, usize)>> = BTreeMap::new();
    for (source, _, dest, n) in &pattern.moves {
        if let PatternDest::NewSlot(s) = dest {
            slot_rows.entry(*s).or_default().push((source, *n));
        }
    }
    let mut slot_center: BTreeMap<usize, RowType> = BTreeMap::new();
    for (&s, contributions) in &slot_rows {
        let mut distinct: Vec<&RowType> = contributions.iter().map(|&(t, _)| t).collect();
        distinct.sort();
        distinct.dedup();
        if distinct.len() < 2 {
            return None; // a new type must be formed by rows of >= 2 types
        }
        slot_center.insert(s, weighted_majority(inst, contributions));
    }

    // Final composition per type vector: color counts of every cluster.
    let clusters = inst.clusters();
    let c = inst.num_colors();
    let mut composition: BTreeMap<RowType, Vec<usize>> = BTreeMap::new();
    for (t, rows) in &clusters {
        let counts = composition.entry(t.clone()).or_insert_with(|| vec![0; c + 1]);
        for &i in rows {
            counts[inst.color(i)] += 1;
        }
    }
    let mut cost = 0u64;
    for (source, color, dest, n) in &pattern.moves {
        let target = match dest {
            PatternDest::Existing(t) => t.clone(),
            PatternDest::NewSlot(s) => slot_center[s].clone(),
        };
        let out = composition.get_mut(source)?;
        if out[*color] < *n {
            return None; // availability violated after slot merging
        }
        out[*color] -= n;
        composition.entry(target.clone()).or_insert_with(|| vec![0; c + 1])[*color] += n;
        cost += dist(source, &target) * *n as u64;
    }
    if cost > inst.k() {
        return None;
    }
    let nonempty: Vec<(&RowType, &Vec<usize>)> = composition
        .iter()
        .filter(|(_, counts)| counts.iter().sum::<usize>() > 0)
        .collect();
    if nonempty.len() > inst.r() {
        return None;
    }
    for (_, counts) in &nonempty {
        let size: usize = counts.iter().sum();
        if !inst.is_fair_counts(counts, size) {
            return None;
        }
    }

    let witness = realize_pattern(inst, pattern, &slot_center)?;
    debug_assert_eq!(witness.edit_count(), cost);
    Some((cost, witness))
}

fn weighted_majority(inst: &Instance, contributions: &[(&RowType, usize)]) -> RowType {
    let n = inst.n();
    let p = inst.domain();
    let mut center = Vec::with_capacity(n);
    for j in 0..n {
        let mut counts = vec![0usize; p];
        for &(t, n_rows) in contributions {
            counts[t.values()[j] as usize] += n_rows;
        }
        let best = (0..p).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
        center.push(best as Entry);
    }
    RowType(center)
}

fn realize_pattern(
    inst: &Instance,
    pattern: &MigrationPattern,
    slot_center: &BTreeMap<usize, RowType>,
) -> Option<Solution> {
    let mut available: BTreeMap<(RowType, Color), Vec<usize>> = BTreeMap::new();
    for (i, t) in inst.rows().iter().enumerate() {
        available.entry((t.clone(), inst.color(i))).or_default().push(i);
    }
    for rows in available.values_mut() {
        rows.reverse();
    }
    let mut edited = inst.rows().to_vec();
    let mut moves = pattern.moves.clone();
    moves.sort();
    for (source, color, dest, n) in &moves {
        let target = match dest {
            PatternDest::Existing(t) => t.clone(),
            PatternDest::NewSlot(s) => slot_center[s].clone(),
        };
        let rows = available.get_mut(&(source.clone(), *color))?;
        for _ in 0..*n {
            let i = rows.pop()?;
            edited[i] = target.clone();
        }
    }
    Solution::from_rows(inst, edited).ok()
}
