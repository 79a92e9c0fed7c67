//! Constructive solution normalizer: rewrites any feasible solution into one
//! whose surviving types all come from the input matrix, without increasing
//! the survivor count and with edit cost at most `(5 − 3/c̃)` times the input
//! cost.
//!
//! Phase 0 reroutes edges so every fair type of `M` has, apart from
//! self-loops, only outgoing or only incoming edges. The per-row edges are
//! then partitioned into fairlets on both endpoints, giving a `c_i`-regular
//! bipartite multigraph per color whose matchings `M_1 ≤ … ≤ M_c̃` (by
//! weight) drive the rewiring: Phase 1 aligns every fair out-fairlet with
//! its `M_1` partner, Phase 2 redirects fair types' out-edges to the nearest
//! surviving type, Phase 3 eliminates surviving new types.

use std::collections::BTreeMap;

use crate::approx::matching::{decompose_regular_bipartite, BipartiteMultigraph};
use crate::error::{Error, Result};
use crate::instance::{dist, Instance, RowType};
use crate::solution::Solution;

pub fn normalize_solution(inst: &Instance, sol: &Solution) -> Result<Solution> {
    if sol.edited_rows().len() != inst.m() {
        return Err(Error::DimensionMismatch("solution row count".into()));
    }
    // Feasibility for (M, γ, r, k') with k' the solution's own cost.
    let relaxed = inst.with_budgets(sol.edit_count(), inst.r());
    let verdict = crate::solution::verify_solution(&relaxed, sol)?;
    if !verdict.feasible() {
        return Err(Error::InvalidInput(format!(
            "normalize_solution needs a feasible input solution; got: {}",
            verdict
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }

    let m = inst.m();
    let mut heads: Vec<RowType> = sol.edited_rows().to_vec();

    let fair_in_m: std::collections::BTreeSet<RowType> = inst
        .clusters()
        .into_iter()
        .filter(|(_, rows)| inst.is_fair_cluster(rows))
        .map(|(t, _)| t)
        .collect();

    phase0_reroute(inst, &fair_in_m, &mut heads);

    // Snapshot of the rerouted graph: phases 2 and 3 measure distances
    // against its survivors and in-neighbors.
    let heads_g: Vec<RowType> = heads.clone();
    let survivors_g: std::collections::BTreeSet<RowType> = heads_g.iter().cloned().collect();

    phase1_align(inst, &fair_in_m, &mut heads)?;

    // Phase 2: all out-edges of each fair type go to the nearest survivor.
    for tau in &fair_in_m {
        let target = survivors_g
            .iter()
            .min_by_key(|s| (dist(tau, s), (*s).clone()))
            .expect("solutions have at least one surviving type")
            .clone();
        for t in 0..m {
            if inst.row(t) == tau {
                heads[t] = target.clone();
            }
        }
    }

    // Phase 3: redirect the in-edges of each surviving new type to its
    // nearest in-neighbor in the snapshot graph.
    loop {
        let new_survivor = {
            let mut survivors: Vec<&RowType> = heads.iter().collect();
            survivors.sort();
            survivors.dedup();
            survivors
                .into_iter()
                .find(|t| !inst.rows().contains(t))
                .cloned()
        };
        let Some(tau) = new_survivor else { break };
        let target = (0..m)
            .filter(|&t| heads_g[t] == tau && *inst.row(t) != tau)
            .map(|t| inst.row(t).clone())
            .min_by_key(|nb| (dist(nb, &tau), nb.clone()))
            .ok_or_else(|| {
                Error::InvalidInput("surviving new type without in-neighbors".into())
            })?;
        for t in 0..m {
            if heads[t] == tau {
                heads[t] = target.clone();
            }
        }
    }

    let out = Solution::from_rows(inst, heads)?;
    debug_assert!(crate::solution::verify_solution(
        &inst.with_budgets(out.edit_count(), inst.r()),
        &out
    )
    .map(|v| v.feasible())
    .unwrap_or(false));
    Ok(out)
}

/// Triangle-inequality rerouting: while some fair type has both a non-loop
/// out-edge and a non-loop in-edge of a shared color, keep the outgoing row
/// at home and forward the incoming row to the out-edge's old target.
fn phase0_reroute(
    inst: &Instance,
    fair_in_m: &std::collections::BTreeSet<RowType>,
    heads: &mut [RowType],
) {
    let m = inst.m();
    loop {
        let mut acted = false;
        for tau in fair_in_m {
            loop {
                let mut out_by_color: BTreeMap<usize, usize> = BTreeMap::new();
                let mut in_by_color: BTreeMap<usize, usize> = BTreeMap::new();
                for t in 0..m {
                    if inst.row(t) == tau && heads[t] != *tau {
                        out_by_color.entry(inst.color(t)).or_insert(t);
                    }
                    if inst.row(t) != tau && heads[t] == *tau {
                        in_by_color.entry(inst.color(t)).or_insert(t);
                    }
                }
                let pair = out_by_color
                    .iter()
                    .find_map(|(z, &t1)| in_by_color.get(z).map(|&t2| (t1, t2)));
                let Some((t_out, t_in)) = pair else { break };
                heads[t_in] = heads[t_out].clone();
                heads[t_out] = tau.clone();
                acted = true;
            }
        }
        if !acted {
            break;
        }
    }
}

/// Phase 1 of the rewiring, on the auxiliary multigraph of fairlet parts.
fn phase1_align(
    inst: &Instance,
    fair_in_m: &std::collections::BTreeSet<RowType>,
    heads: &mut [RowType],
) -> Result<()> {
    let m = inst.m();
    let ctilde = inst.fairlet_size();
    let c = inst.num_colors();
    let counts = inst.color_counts();

    // (+)-nodes: fairlet parts of each type's incoming rows (loops included).
    // Fair (−)-nodes: fairlet parts of each fair type's original cluster.
    // Unfair (−)-nodes: fairlet parts of all rows originating at unfair types.
    let mut plus_nodes: Vec<RowType> = Vec::new(); // type per (+)-node
    let mut minus_fair: Vec<Option<RowType>> = Vec::new(); // None = unfair node
    let mut plus_of_row = vec![usize::MAX; m];
    let mut minus_of_row = vec![usize::MAX; m];

    {
        let mut in_rows: BTreeMap<&RowType, Vec<usize>> = BTreeMap::new();
        for t in 0..m {
            in_rows.entry(&heads[t]).or_default().push(t);
        }
        for (ty, rows) in in_rows {
            for (part, row) in fairlet_parts(inst, &rows) {
                plus_of_row[row] = plus_nodes.len() + part;
            }
            for _ in 0..rows.len() / ctilde {
                plus_nodes.push(ty.clone());
            }
        }

        let mut unfair_rows: Vec<usize> = Vec::new();
        for (ty, rows) in inst.clusters() {
            if fair_in_m.contains(&ty) {
                for (part, row) in fairlet_parts(inst, &rows) {
                    minus_of_row[row] = minus_fair.len() + part;
                }
                for _ in 0..rows.len() / ctilde {
                    minus_fair.push(Some(ty.clone()));
                }
            } else {
                unfair_rows.extend(rows);
            }
        }
        unfair_rows.sort_unstable();
        for (part, row) in fairlet_parts(inst, &unfair_rows) {
            minus_of_row[row] = minus_fair.len() + part;
        }
        for _ in 0..unfair_rows.len() / ctilde {
            minus_fair.push(None);
        }
    }

    // Decompose each color class into c_i perfect matchings on the shared
    // node sets, then order all c̃ matchings by total edge weight.
    let mut matching_of_row = vec![usize::MAX; m];
    let mut matchings: Vec<(u64, usize, Vec<usize>)> = Vec::new(); // (weight, seq, rows)
    for z in 1..=c {
        let rows_z: Vec<usize> = (0..m).filter(|&t| inst.color(t) == z).collect();
        if rows_z.is_empty() {
            continue;
        }
        let g = BipartiteMultigraph {
            left: plus_nodes.len(),
            right: minus_fair.len(),
            edges: rows_z.iter().map(|&t| (plus_of_row[t], minus_of_row[t])).collect(),
        };
        let parts = decompose_regular_bipartite(&g)?;
        debug_assert_eq!(parts.len(), ctilde * counts[z] / m);
        for part in parts {
            let rows: Vec<usize> = part.into_iter().map(|eid| rows_z[eid]).collect();
            let weight: u64 =
                rows.iter().map(|&t| dist(inst.row(t), &heads[t])).sum();
            matchings.push((weight, matchings.len(), rows));
        }
    }
    matchings.sort();
    for (rank, (_, _, rows)) in matchings.iter().enumerate() {
        for &t in rows {
            matching_of_row[t] = rank;
        }
    }
    let num_matchings = matchings.len();
    debug_assert_eq!(num_matchings, ctilde);

    // row of a given (node, matching) pair
    let mut plus_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut minus_edge: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for t in 0..m {
        plus_edge.insert((plus_of_row[t], matching_of_row[t]), t);
        minus_edge.insert((minus_of_row[t], matching_of_row[t]), t);
    }

    // Fair (−)-nodes in canonical order: by type, then node index.
    let mut fair_minus: Vec<(RowType, usize)> = minus_fair
        .iter()
        .enumerate()
        .filter_map(|(i, ty)| ty.clone().map(|t| (t, i)))
        .collect();
    fair_minus.sort();

    loop {
        let mut acted = false;
        for (_, v1) in &fair_minus {
            for j in 1..num_matchings {
                let t_m1 = minus_edge[&(*v1, 0)];
                let t_mj = minus_edge[&(*v1, j)];
                if plus_of_row[t_m1] == plus_of_row[t_mj] {
                    continue;
                }
                align_once(
                    &plus_nodes,
                    &minus_fair,
                    &minus_of_row,
                    &mut plus_of_row,
                    heads,
                    &mut plus_edge,
                    &minus_edge,
                    *v1,
                    j,
                )?;
                acted = true;
            }
        }
        if !acted {
            break;
        }
    }
    Ok(())
}

/// Walk the alternating cycle of `M_1` and `M_j` starting at the fair
/// (−)-node `v1` and re-anchor the `M_j` edges of its fair (−)-nodes onto
/// their `M_1` partners; the path's terminal node (the first unfair
/// (−)-node, or the last node when the cycle is all fair) takes over the
/// vacated (+)-endpoint.
#[allow(clippy::too_many_arguments)]
fn align_once(
    plus_nodes: &[RowType],
    minus_fair: &[Option<RowType>],
    minus_of_row: &[usize],
    plus_of_row: &mut [usize],
    heads: &mut [RowType],
    plus_edge: &mut BTreeMap<(usize, usize), usize>,
    minus_edge: &BTreeMap<(usize, usize), usize>,
    v1: usize,
    j: usize,
) -> Result<()> {
    let e1 = minus_edge[&(v1, j)];
    let v0 = plus_of_row[e1];

    // minus-node sequence v1, v3, v5, ... of the subpath
    let mut ms = vec![v1];
    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 2 * heads.len() + 2 {
            return Err(Error::InvalidInput("phase 1 walk did not terminate".into()));
        }
        let last = *ms.last().unwrap();
        let m1_row = minus_edge[&(last, 0)];
        let p = plus_of_row[m1_row];
        if p == v0 {
            break; // the cycle closes: `last` is the terminal
        }
        let next_row = plus_edge[&(p, j)];
        let next = minus_of_row[next_row];
        ms.push(next);
        if minus_fair[next].is_none() {
            break; // unfair terminal
        }
    }

    // All but the terminal re-anchor to their own M_1 partner; the terminal
    // takes v0.
    let mut moves: Vec<(usize, usize)> = Vec::new(); // (row, new plus node)
    for (idx, &node) in ms.iter().enumerate() {
        let row = minus_edge[&(node, j)];
        let new_plus = if idx + 1 == ms.len() {
            v0
        } else {
            plus_of_row[minus_edge[&(node, 0)]]
        };
        moves.push((row, new_plus));
    }
    for &(row, _) in &moves {
        plus_edge.remove(&(plus_of_row[row], j));
    }
    for &(row, new_plus) in &moves {
        plus_of_row[row] = new_plus;
        heads[row] = plus_nodes[new_plus].clone();
        let prev = plus_edge.insert((new_plus, j), row);
        if prev.is_some() {
            return Err(Error::InvalidInput(
                "phase 1 rewiring produced a node with two edges in one matching".into(),
            ));
        }
    }
    Ok(())
}

/// Deterministic fairlet partition of a fair set of rows: per color, sorted
/// rows are dealt in runs of the color's per-fairlet quota. Yields
/// (part index, row) pairs.
fn fairlet_parts(inst: &Instance, rows: &[usize]) -> Vec<(usize, usize)> {
    let ctilde = inst.fairlet_size();
    debug_assert_eq!(rows.len() % ctilde, 0);
    let m = inst.m();
    let counts = inst.color_counts();
    let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &t in rows {
        by_color.entry(inst.color(t)).or_default().push(t);
    }
    let mut out = Vec::with_capacity(rows.len());
    for (z, rows_z) in by_color {
        let per_part = ctilde * counts[z] / m;
        debug_assert!(per_part > 0);
        let mut sorted = rows_z;
        sorted.sort_unstable();
        for (i, t) in sorted.into_iter().enumerate() {
            out.push((i / per_part, t));
        }
    }
    out
}
