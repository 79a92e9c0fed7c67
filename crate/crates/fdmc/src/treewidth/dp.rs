//! The candidate dynamic program over a nice tree decomposition of the
//! primal graph.
//!
//! A state at a node is `(P, s, a, q)` with the cost `h` of all processed
//! columns tracked per state: `P` partitions the bag rows by shared cluster,
//! `s` gives for each part the committed final cluster size `s0` (0 for
//! set-aside rows whose 1-entries will be zeroed) plus per-color counts of
//! rows already seen, `a` is the total committed cluster size and `q` the
//! number of committed clusters opened. Columns are charged exactly once, at
//! the forget node where their first supporting row leaves the bags.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{Entry, Instance, RowType};
use crate::solution::Solution;
use crate::treewidth::decomposition::{NiceTreeDecomposition, NodeKind};

#[derive(Clone, Copy, Debug)]
pub struct DpOptions {
    /// Abort when a node table exceeds this many states.
    pub state_cap: usize,
    /// Reference mode for tests: keep every (state, h) pair instead of the
    /// minimal h per state.
    pub no_dominance: bool,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { state_cap: 2_000_000, no_dominance: false }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DpStats {
    pub states_total: u64,
    pub max_states_per_node: usize,
}

pub struct DpOutcome {
    /// Minimum edits over all fair matrices with at most `r` distinct rows.
    pub optimum: u64,
    /// A matrix realizing `optimum`.
    pub witness: Solution,
    pub stats: DpStats,
}

/// The per-column edit cost of a cluster of final size `s0` of which `ones`
/// currently seen rows have a 1 in the column (rows still to be added have a
/// 0 there): zeros win ties, so the column contributes `ones` unless ones
/// form a strict majority.
pub fn col_cost(s0: u64, ones: u64) -> u64 {
    if s0 == 0 || 2 * ones <= s0 {
        ones
    } else {
        s0 - ones
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct StateKey {
    /// Restricted-growth assignment of sorted bag rows to parts.
    parts: Vec<u8>,
    /// Per part: `[s0, s_1, ..., s_c]`.
    s: Vec<Vec<u32>>,
    a: u32,
    q: u32,
}

#[derive(Clone, Debug)]
enum Back {
    Leaf,
    Step { child: StateKey },
    Join { left: StateKey, right: StateKey },
}

type Table = BTreeMap<StateKey, BTreeMap<u64, Back>>;

fn insert(table: &mut Table, key: StateKey, h: u64, back: Back, no_dominance: bool) {
    let entry = table.entry(key).or_default();
    if no_dominance {
        entry.entry(h).or_insert(back);
    } else if entry.is_empty() {
        entry.insert(h, back);
    } else {
        let (&cur, _) = entry.iter().next().unwrap();
        if h < cur {
            entry.clear();
            entry.insert(h, back);
        }
    }
}

/// Relabel part ids in first-occurrence order, permuting `s` along.
fn canonicalize(parts: &mut Vec<u8>, s: &mut Vec<Vec<u32>>) {
    let mut relabel: Vec<Option<u8>> = vec![None; s.len()];
    let mut next = 0u8;
    for p in parts.iter_mut() {
        let old = *p as usize;
        let new = *relabel[old].get_or_insert_with(|| {
            let n = next;
            next += 1;
            n
        });
        *p = new;
    }
    let mut new_s = vec![Vec::new(); next as usize];
    for (old, label) in relabel.iter().enumerate() {
        if let Some(new) = label {
            new_s[*new as usize] = std::mem::take(&mut s[old]);
        }
    }
    *s = new_s;
}

struct DpContext<'a> {
    inst: &'a Instance,
    nice: &'a NiceTreeDecomposition,
    opts: DpOptions,
    /// Committed cluster sizes: multiples of c̃ up to min(2w, m).
    sizes: Vec<u32>,
    /// Columns charged at each forget node.
    charge_cols: Vec<Vec<usize>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn build_context<'a>(
    inst: &'a Instance,
    nice: &'a NiceTreeDecomposition,
    opts: DpOptions,
) -> Result<DpContext<'a>> {
    let n = inst.n();
    let m = inst.m();
    let w = nice.width() + 1;
    let ctilde = inst.fairlet_size() as u32;
    let smax = (2 * w).min(m) as u32;
    let sizes: Vec<u32> = (1..=smax / ctilde).map(|i| i * ctilde).collect();

    let row_cols: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            let mut bits = vec![0u64; words(n)];
            for (j, &v) in inst.row(i).values().iter().enumerate() {
                if v != 0 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();

    // f(b) per node, and the charged columns of each forget node.
    let order = nice.post_order();
    let mut f_sets: Vec<Vec<u64>> = vec![vec![0u64; words(n)]; nice.nodes.len()];
    let mut charge_cols: Vec<Vec<usize>> = vec![Vec::new(); nice.nodes.len()];
    let mut charged_once = vec![0u32; n];
    for &b in &order {
        match &nice.nodes[b].kind {
            NodeKind::Leaf => {}
            NodeKind::Introduce(_) => {
                f_sets[b] = f_sets[nice.nodes[b].children[0]].clone();
            }
            NodeKind::Forget(v) => {
                let child = nice.nodes[b].children[0];
                let mut f = f_sets[child].clone();
                let mut newly = Vec::new();
                for (w_i, &rw) in row_cols[*v].iter().enumerate() {
                    let fresh = rw & !f[w_i];
                    let mut rem = fresh;
                    while rem != 0 {
                        let bit = rem.trailing_zeros() as usize;
                        rem &= rem - 1;
                        newly.push(w_i * 64 + bit);
                    }
                    f[w_i] |= rw;
                }
                for &j in &newly {
                    charged_once[j] += 1;
                }
                charge_cols[b] = newly;
                f_sets[b] = f;
            }
            NodeKind::Join => {
                let l = nice.nodes[b].children[0];
                let r = nice.nodes[b].children[1];
                f_sets[b] = f_sets[l]
                    .iter()
                    .zip(&f_sets[r])
                    .map(|(a, b)| a | b)
                    .collect();
            }
        }
    }
    // Every nonzero column is charged at exactly one forget node.
    for j in 0..n {
        let nonzero = (0..m).any(|i| inst.row(i).values()[j] != 0);
        if nonzero && charged_once[j] != 1 {
            return Err(Error::InvalidDecomposition(format!(
                "column {j} charged {} times; the decomposition is inconsistent",
                charged_once[j]
            )));
        }
    }

    Ok(DpContext { inst, nice, opts, sizes, charge_cols })
}

pub fn run_dp(
    inst: &Instance,
    nice: &NiceTreeDecomposition,
    opts: DpOptions,
) -> Result<DpOutcome> {
    let ctx = build_context(inst, nice, opts)?;
    let order = ctx.nice.post_order();
    let mut tables: Vec<Table> = vec![Table::new(); ctx.nice.nodes.len()];
    let mut stats = DpStats::default();

    for &b in &order {
        let table = match &ctx.nice.nodes[b].kind {
            NodeKind::Leaf => {
                let mut t = Table::new();
                insert(
                    &mut t,
                    StateKey { parts: vec![], s: vec![], a: 0, q: 0 },
                    0,
                    Back::Leaf,
                    ctx.opts.no_dominance,
                );
                t
            }
            NodeKind::Introduce(v) => {
                let child = ctx.nice.nodes[b].children[0];
                introduce_node(&ctx, b, *v, &tables[child])
            }
            NodeKind::Forget(v) => {
                let child = ctx.nice.nodes[b].children[0];
                forget_node(&ctx, b, *v, &tables[child])
            }
            NodeKind::Join => {
                let l = ctx.nice.nodes[b].children[0];
                let r = ctx.nice.nodes[b].children[1];
                join_node(&ctx, b, &tables[l], &tables[r])
            }
        };
        let count: usize = table.values().map(|hs| hs.len()).sum();
        stats.states_total += count as u64;
        stats.max_states_per_node = stats.max_states_per_node.max(count);
        if count > ctx.opts.state_cap {
            return Err(Error::Capacity(format!(
                "treewidth DP exceeded the state cap of {} at one node ({count} states)",
                ctx.opts.state_cap
            )));
        }
        tables[b] = table;
    }

    // Suitable root candidates: q <= r - 1 (room for the all-zero cluster)
    // or a = m (no set-aside rows remain).
    let root_table = &tables[ctx.nice.root];
    let mut best: Option<(u64, StateKey)> = None;
    for (key, hs) in root_table {
        if !(key.q as usize <= ctx.inst.r() - 1 || key.a as usize == ctx.inst.m()) {
            continue;
        }
        let h = *hs.keys().next().unwrap();
        if best.as_ref().map_or(true, |(bh, _)| h < *bh) {
            best = Some((h, key.clone()));
        }
    }
    let (optimum, root_key) =
        best.ok_or_else(|| Error::InvalidInstance("DP found no suitable candidate".into()))?;

    let witness = reconstruct(&ctx, &tables, root_key, optimum)?;
    debug_assert_eq!(witness.edit_count(), optimum);
    Ok(DpOutcome { optimum, witness, stats })
}

fn bag_of<'a>(ctx: &'a DpContext<'_>, b: usize) -> &'a [usize] {
    &ctx.nice.nodes[b].bag
}

fn introduce_node(ctx: &DpContext, b: usize, v: usize, child: &Table) -> Table {
    let mut out = Table::new();
    let bag = bag_of(ctx, b);
    let pos = bag.iter().position(|&x| x == v).expect("introduced row in bag");
    let z = ctx.inst.color(v);
    let m = ctx.inst.m();
    let counts = ctx.inst.color_counts();
    let c = ctx.inst.num_colors();

    for (key, hs) in child {
        let num_parts = key.s.len();
        for (&h, _) in hs {
            // Option A: join an existing part.
            for pid in 0..num_parts {
                let s0 = key.s[pid][0];
                let mut s = key.s.clone();
                if s0 > 0 {
                    let quota = (s0 as usize * counts[z] / m) as u32;
                    if s[pid][z] + 1 > quota {
                        continue;
                    }
                    s[pid][z] += 1;
                }
                let mut parts = key.parts.clone();
                parts.insert(pos, pid as u8);
                canonicalize(&mut parts, &mut s);
                insert(
                    &mut out,
                    StateKey { parts, s, a: key.a, q: key.q },
                    h,
                    Back::Step { child: key.clone() },
                    ctx.opts.no_dominance,
                );
            }
            // Option B: open a new part, set aside (s0 = 0) or committed.
            {
                let mut parts = key.parts.clone();
                parts.insert(pos, num_parts as u8);
                let mut s = key.s.clone();
                s.push(vec![0u32; c + 1]);
                canonicalize(&mut parts, &mut s);
                insert(
                    &mut out,
                    StateKey { parts, s, a: key.a, q: key.q },
                    h,
                    Back::Step { child: key.clone() },
                    ctx.opts.no_dominance,
                );
            }
            for &size in &ctx.sizes {
                if size as usize * counts[z] < m {
                    continue; // no room for even one row of color z
                }
                if key.q as usize + 1 > ctx.inst.r() || key.a as usize + size as usize > m {
                    continue;
                }
                let mut tuple = vec![0u32; c + 1];
                tuple[0] = size;
                tuple[z] = 1;
                let mut parts = key.parts.clone();
                parts.insert(pos, num_parts as u8);
                let mut s = key.s.clone();
                s.push(tuple);
                canonicalize(&mut parts, &mut s);
                insert(
                    &mut out,
                    StateKey { parts, s, a: key.a + size, q: key.q + 1 },
                    h,
                    Back::Step { child: key.clone() },
                    ctx.opts.no_dominance,
                );
            }
        }
    }
    out
}

fn forget_node(ctx: &DpContext, b: usize, v: usize, child: &Table) -> Table {
    let mut out = Table::new();
    let child_bag = bag_of(ctx, ctx.nice.nodes[b].children[0]);
    let pos = child_bag.iter().position(|&x| x == v).expect("forgotten row in child bag");
    let cols = &ctx.charge_cols[b];

    for (key, hs) in child {
        // Edit cost of the newly processed columns, over all child parts.
        let mut delta = 0u64;
        if !cols.is_empty() {
            let num_parts = key.s.len();
            for pid in 0..num_parts {
                let rows: Vec<usize> = child_bag
                    .iter()
                    .zip(&key.parts)
                    .filter(|&(_, &p)| p as usize == pid)
                    .map(|(&r, _)| r)
                    .collect();
                let s0 = key.s[pid][0] as u64;
                for &j in cols {
                    let ones = rows
                        .iter()
                        .filter(|&&r| ctx.inst.row(r).values()[j] != 0)
                        .count() as u64;
                    delta += col_cost(s0, ones);
                }
            }
        }

        let dropped = key.parts[pos] as usize;
        let mut parts = key.parts.clone();
        parts.remove(pos);
        let mut s = key.s.clone();
        if !parts.iter().any(|&p| p as usize == dropped) {
            s.remove(dropped);
            for p in parts.iter_mut() {
                if *p as usize > dropped {
                    *p -= 1;
                }
            }
        }
        canonicalize(&mut parts, &mut s);
        for (&h, _) in hs {
            insert(
                &mut out,
                StateKey { parts: parts.clone(), s: s.clone(), a: key.a, q: key.q },
                h + delta,
                Back::Step { child: key.clone() },
                ctx.opts.no_dominance,
            );
        }
    }
    out
}

fn join_node(ctx: &DpContext, b: usize, left: &Table, right: &Table) -> Table {
    let mut out = Table::new();
    let m = ctx.inst.m();
    let counts = ctx.inst.color_counts();
    let c = ctx.inst.num_colors();
    let bag = bag_of(ctx, b);

    // Bucket the right table by (parts, per-part s0).
    let mut buckets: BTreeMap<(Vec<u8>, Vec<u32>), Vec<&StateKey>> = BTreeMap::new();
    for key in right.keys() {
        let s0s: Vec<u32> = key.s.iter().map(|t| t[0]).collect();
        buckets.entry((key.parts.clone(), s0s)).or_default().push(key);
    }

    for (lkey, lhs) in left {
        let s0s: Vec<u32> = lkey.s.iter().map(|t| t[0]).collect();
        let Some(matches) = buckets.get(&(lkey.parts.clone(), s0s)) else { continue };
        // Bag rows are counted in both children; subtract them once.
        let mut in_bag: Vec<Vec<u32>> = vec![vec![0; c + 1]; lkey.s.len()];
        for (&row, &pid) in bag.iter().zip(&lkey.parts) {
            in_bag[pid as usize][ctx.inst.color(row)] += 1;
        }
        for rkey in matches {
            let mut ok = true;
            let mut s = Vec::with_capacity(lkey.s.len());
            for pid in 0..lkey.s.len() {
                let s0 = lkey.s[pid][0];
                let mut tuple = vec![0u32; c + 1];
                tuple[0] = s0;
                if s0 > 0 {
                    for z in 1..=c {
                        let both = lkey.s[pid][z] + rkey.s[pid][z];
                        debug_assert!(both >= in_bag[pid][z]);
                        let merged = both - in_bag[pid][z];
                        let quota = (s0 as usize * counts[z] / m) as u32;
                        if merged > quota {
                            ok = false;
                            break;
                        }
                        tuple[z] = merged;
                    }
                }
                if !ok {
                    break;
                }
                s.push(tuple);
            }
            if !ok {
                continue;
            }
            let committed: u32 = lkey.s.iter().map(|t| t[0]).sum();
            let committed_parts = lkey.s.iter().filter(|t| t[0] > 0).count() as u32;
            let a = lkey.a + rkey.a - committed;
            let q = lkey.q + rkey.q - committed_parts;
            if a as usize > m || q as usize > ctx.inst.r() {
                continue;
            }
            for (&lh, _) in lhs {
                for (&rh, _) in &right[*rkey] {
                    insert(
                        &mut out,
                        StateKey { parts: lkey.parts.clone(), s: s.clone(), a, q },
                        lh + rh,
                        Back::Join { left: lkey.clone(), right: (*rkey).clone() },
                        ctx.opts.no_dominance,
                    );
                }
            }
        }
    }
    out
}

/// Recover the partition and size function of the optimal candidate by
/// walking the back-pointers, then realize it: fill committed clusters from
/// set-aside rows and send the remainder to the all-zero type.
fn reconstruct(
    ctx: &DpContext,
    tables: &[Table],
    root_key: StateKey,
    root_h: u64,
) -> Result<Solution> {
    let m = ctx.inst.m();
    let mut row_cluster: Vec<Option<usize>> = vec![None; m];
    let mut cluster_t: Vec<u64> = Vec::new();

    walk(ctx, tables, ctx.nice.root, &root_key, root_h, &[], &mut row_cluster, &mut cluster_t)?;

    let row_cluster: Vec<usize> = row_cluster
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::InvalidDecomposition("a row was never forgotten".into())))
        .collect::<Result<_>>()?;

    realize(ctx.inst, &row_cluster, &cluster_t)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    ctx: &DpContext,
    tables: &[Table],
    node: usize,
    key: &StateKey,
    h: u64,
    part_cids: &[usize],
    row_cluster: &mut Vec<Option<usize>>,
    cluster_t: &mut Vec<u64>,
) -> Result<()> {
    let back = tables[node]
        .get(key)
        .and_then(|hs| hs.get(&h))
        .ok_or_else(|| Error::InvalidDecomposition("missing back-pointer".into()))?
        .clone();
    let bag = bag_of(ctx, node);
    let parts = materialize_parts(bag, key);

    match (&ctx.nice.nodes[node].kind, back) {
        (NodeKind::Leaf, Back::Leaf) => Ok(()),
        (NodeKind::Introduce(v), Back::Step { child }) => {
            let child_node = ctx.nice.nodes[node].children[0];
            let child_bag = bag_of(ctx, child_node);
            let child_parts = materialize_parts(child_bag, &child);
            // child part -> cid of the parent part containing it plus maybe v
            let mut child_cids = Vec::with_capacity(child_parts.len());
            for cp in &child_parts {
                let probe = cp[0];
                let parent_pid = parts
                    .iter()
                    .position(|pp| pp.contains(&probe))
                    .expect("parent part exists");
                child_cids.push(part_cids[parent_pid]);
            }
            let _ = v;
            walk(ctx, tables, child_node, &child, h, &child_cids, row_cluster, cluster_t)
        }
        (NodeKind::Forget(v), Back::Step { child }) => {
            let child_node = ctx.nice.nodes[node].children[0];
            let child_bag = bag_of(ctx, child_node);
            let child_parts = materialize_parts(child_bag, &child);
            // recompute the column charge to find the child's h
            let delta = forget_delta(ctx, node, child_bag, &child);
            let child_h = h - delta;
            let mut child_cids = Vec::with_capacity(child_parts.len());
            for (pid, cp) in child_parts.iter().enumerate() {
                if cp.contains(v) {
                    let rest: Vec<usize> = cp.iter().copied().filter(|x| x != v).collect();
                    let cid = if rest.is_empty() {
                        cluster_t.push(child.s[pid][0] as u64);
                        cluster_t.len() - 1
                    } else {
                        let parent_pid = parts
                            .iter()
                            .position(|pp| pp.contains(&rest[0]))
                            .expect("parent part exists");
                        part_cids[parent_pid]
                    };
                    row_cluster[*v] = Some(cid);
                    child_cids.push(cid);
                } else {
                    let parent_pid = parts
                        .iter()
                        .position(|pp| pp.contains(&cp[0]))
                        .expect("parent part exists");
                    child_cids.push(part_cids[parent_pid]);
                }
            }
            walk(ctx, tables, child_node, &child, child_h, &child_cids, row_cluster, cluster_t)
        }
        (NodeKind::Join, Back::Join { left, right }) => {
            let l = ctx.nice.nodes[node].children[0];
            let r = ctx.nice.nodes[node].children[1];
            let lh = *tables[l]
                .get(&left)
                .and_then(|hs| {
                    // pick the h pair consistent with this node's h
                    hs.keys().find(|&&lh| {
                        lh <= h
                            && tables[r]
                                .get(&right)
                                .map(|rhs| rhs.contains_key(&(h - lh)))
                                .unwrap_or(false)
                    })
                })
                .ok_or_else(|| Error::InvalidDecomposition("join back-pointer broken".into()))?;
            walk(ctx, tables, l, &left, lh, part_cids, row_cluster, cluster_t)?;
            walk(ctx, tables, r, &right, h - lh, part_cids, row_cluster, cluster_t)
        }
        _ => Err(Error::InvalidDecomposition("back-pointer kind mismatch".into())),
    }
}

fn materialize_parts(bag: &[usize], key: &StateKey) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); key.s.len()];
    for (&row, &pid) in bag.iter().zip(&key.parts) {
        parts[pid as usize].push(row);
    }
    parts
}

fn forget_delta(ctx: &DpContext, node: usize, child_bag: &[usize], child: &StateKey) -> u64 {
    let cols = &ctx.charge_cols[node];
    if cols.is_empty() {
        return 0;
    }
    let child_parts = materialize_parts(child_bag, child);
    let mut delta = 0u64;
    for (pid, rows) in child_parts.iter().enumerate() {
        let s0 = child.s[pid][0] as u64;
        for &j in cols {
            let ones = rows.iter().filter(|&&r| ctx.inst.row(r).values()[j] != 0).count() as u64;
            delta += col_cost(s0, ones);
        }
    }
    delta
}

/// Realize the recovered candidate: donate set-aside rows into committed
/// clusters until each reaches its size with the right color mix, collect
/// the remainder in the all-zero cluster, and type committed clusters by
/// column majority over their own rows.
fn realize(inst: &Instance, row_cluster: &[usize], cluster_t: &[u64]) -> Result<Solution> {
    let m = inst.m();
    let n = inst.n();
    let c = inst.num_colors();
    let counts = inst.color_counts();

    let num_clusters = cluster_t.len();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_clusters];
    for (row, &cid) in row_cluster.iter().enumerate() {
        members[cid].push(row);
    }

    // Pool of set-aside rows by color, ascending row index.
    let mut pool: Vec<Vec<usize>> = vec![Vec::new(); c + 1];
    for cid in 0..num_clusters {
        if cluster_t[cid] == 0 {
            for &row in &members[cid] {
                pool[inst.color(row)].push(row);
            }
        }
    }
    for rows in pool.iter_mut() {
        rows.sort_unstable();
        rows.reverse();
    }

    let mut assignment: Vec<Option<usize>> = vec![None; m]; // final committed cluster
    let mut final_members: Vec<Vec<usize>> = vec![Vec::new(); num_clusters];
    for cid in 0..num_clusters {
        if cluster_t[cid] == 0 {
            continue;
        }
        for &row in &members[cid] {
            assignment[row] = Some(cid);
            final_members[cid].push(row);
        }
        let mut have = vec![0u64; c + 1];
        for &row in &members[cid] {
            have[inst.color(row)] += 1;
        }
        for z in 1..=c {
            let need = cluster_t[cid] * counts[z] as u64 / m as u64;
            for _ in have[z]..need {
                let row = pool[z].pop().ok_or_else(|| {
                    Error::InvalidInstance("not enough set-aside rows to fill a cluster".into())
                })?;
                assignment[row] = Some(cid);
                final_members[cid].push(row);
            }
        }
    }

    // Majority type of each committed cluster, computed over its DP rows
    // only; the column costs were charged under exactly this rule.
    let mut types: Vec<RowType> = vec![RowType(vec![0; n]); num_clusters];
    for cid in 0..num_clusters {
        let t = cluster_t[cid];
        if t == 0 {
            continue;
        }
        let mut vals = vec![0 as Entry; n];
        for j in 0..n {
            let ones =
                members[cid].iter().filter(|&&r| inst.row(r).values()[j] != 0).count() as u64;
            if 2 * ones > t {
                vals[j] = 1;
            }
        }
        types[cid] = RowType(vals);
    }

    let zero = RowType(vec![0; n]);
    let rows: Vec<RowType> = (0..m)
        .map(|row| match assignment[row] {
            Some(cid) => types[cid].clone(),
            None => zero.clone(),
        })
        .collect();
    Solution::from_rows(inst, rows)
}
