//! The `(5 − 3/c̃)`-approximate solver: exact delegation for large fairlets,
//! otherwise color coding over enumerated solution templates. The normalizer
//! in `normalize` provides the structural guarantee behind the template
//! family: every solvable budget admits a solution made of unfair-to-unfair
//! moves, unfair-to-sink moves, and whole-cluster fairlet donations.

pub mod coding;
pub mod matching;
pub mod normalize;
pub mod template;

pub use coding::{generate_codings, CodeAssignment, CodingFamily, CodingMode, CodingOptions};
pub use matching::{check_decomposition, decompose_regular_bipartite, BipartiteMultigraph};
pub use normalize::normalize_solution;
pub use template::{
    assign_types_to_template, code_bound, weight_cap, AssignLimits, TVertex, Template,
    TemplateEdge,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{dist, Color, Instance, RowType};
use crate::large_fairlet::solve_large_fairlet;
use crate::oracle::Status;
use crate::solution::{verify_solution, Solution};

/// Outcome of the approximate solver: a verified witness within the
/// `(5 − 3/c̃)k` budget, a certified No, or an inconclusive run after a
/// capacity cap was hit (never a false No).
#[derive(Clone, Debug)]
pub enum ApproxOutcome {
    Feasible(Solution),
    No,
    Unresolved(String),
}

impl ApproxOutcome {
    pub fn witness(&self) -> Option<&Solution> {
        match self {
            ApproxOutcome::Feasible(sol) => Some(sol),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ApproxOptions {
    pub coding: CodingOptions,
    /// Cap on enumeration steps over templates, per budget value.
    pub template_cap: u64,
    pub assign: AssignLimits,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        ApproxOptions {
            coding: CodingOptions::default(),
            template_cap: 2_000_000,
            assign: AssignLimits::default(),
        }
    }
}

pub fn solve_approx(inst: &Instance) -> Result<ApproxOutcome> {
    solve_approx_with(inst, ApproxOptions::default())
}

/// Budgets are tried in ascending order `k' = 0, 1, …, k`, so the first
/// witness found costs at most `(5 − 3/c̃)` times the instance optimum.
pub fn solve_approx_with(inst: &Instance, opts: ApproxOptions) -> Result<ApproxOutcome> {
    // Already feasible as-is?
    let identity = Solution::identity(inst);
    let verdict = verify_solution(&inst.with_budgets(0, inst.r()), &identity)?;
    if verdict.feasible() {
        return Ok(ApproxOutcome::Feasible(identity));
    }
    // Large fairlets admit an exact answer.
    if inst.fairlet_size() as u64 > inst.k() {
        let res = solve_large_fairlet(inst)?;
        return Ok(match res.status {
            Status::Yes => ApproxOutcome::Feasible(res.witness.expect("yes carries a witness")),
            Status::No => ApproxOutcome::No,
        });
    }

    let fair_types: Vec<RowType> =
        inst.types().into_iter().filter(|t| inst.is_fair_type(t)).collect();
    let mut capped = false;
    for budget in 1..=inst.k() {
        let sub = inst.with_budgets(budget, inst.r());
        let (templates, template_capped) = enumerate_templates(&sub, opts.template_cap)?;
        capped |= template_capped;
        let family = generate_codings(&fair_types, code_bound(&sub), opts.coding);
        let mut counter = 0u64;
        'family: for coding in &family.codings {
            for tpl in &templates {
                match template::assign_free(&sub, tpl, coding, opts.assign, &mut counter) {
                    Ok(Some(sol)) => return Ok(ApproxOutcome::Feasible(sol)),
                    Ok(None) => {}
                    Err(Error::Capacity(_)) => {
                        capped = true;
                        break 'family;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        if family.mode == CodingMode::Random {
            // Random codings certify No only up to the failure probability δ;
            // report honestly instead of claiming a certain No.
            capped = true;
        }
    }
    if capped {
        Ok(ApproxOutcome::Unresolved(
            "search caps reached before the template space was exhausted".into(),
        ))
    } else {
        Ok(ApproxOutcome::No)
    }
}

/// Destination of a donated fairlet or moved row during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    Unfair(usize),
    Sink(usize),
}

#[derive(Clone, Debug)]
enum UnitKind {
    /// One row between two unfair types; the weight is their distance.
    UnfairToUnfair { src: usize, dst: usize, color: Color },
    /// One row from an unfair type into an anonymous sink.
    UnfairToSink { src: usize, sink: usize, color: Color, w: u64 },
    /// One whole fairlet donated by an anonymous source.
    SourceFairlet { id: usize, target: Target, w: u64 },
}

struct Unit {
    kind: UnitKind,
    weight: u64,
    rows: usize,
    max_count: usize,
}

impl Unit {
    fn src_color(&self) -> Option<(usize, Color)> {
        match &self.kind {
            UnitKind::UnfairToUnfair { src, color, .. } => Some((*src, *color)),
            UnitKind::UnfairToSink { src, color, .. } => Some((*src, *color)),
            UnitKind::SourceFairlet { .. } => None,
        }
    }
}

/// Enumerate the structured template family for the instance's budget.
/// Returns the templates plus a flag for a hit enumeration cap.
fn enumerate_templates(inst: &Instance, cap: u64) -> Result<(Vec<Template>, bool)> {
    let ctilde = inst.fairlet_size();
    let wmax = weight_cap(inst);
    let unfair: Vec<(RowType, Vec<usize>)> = inst
        .clusters()
        .into_iter()
        .filter(|(_, rows)| !inst.is_fair_cluster(rows))
        .collect();
    let num_fair = inst.types().len() - unfair.len();
    let c = inst.num_colors();
    let counts = inst.color_counts();
    let m = inst.m();

    // Every unfair type needs an incident edge and edges weigh at least 1.
    if (unfair.len() as u64).div_ceil(2) > wmax {
        return Ok((Vec::new(), false));
    }

    let mut avail = vec![vec![0usize; c + 1]; unfair.len()];
    for (ui, (_, rows)) in unfair.iter().enumerate() {
        for &i in rows {
            avail[ui][inst.color(i)] += 1;
        }
    }
    // Rows of each color per fairlet.
    let profile: Vec<usize> = (0..=c).map(|z| ctilde * counts[z] / m).collect();

    let max_anon = num_fair.min(wmax as usize / ctilde).min(m / ctilde);
    let wedge = (inst.n() as u64).min(wmax).max(1);

    let mut units: Vec<Unit> = Vec::new();
    for src in 0..unfair.len() {
        for dst in 0..unfair.len() {
            if src == dst {
                continue;
            }
            let d = dist(&unfair[src].0, &unfair[dst].0);
            if d > wmax {
                continue;
            }
            for z in 1..=c {
                if avail[src][z] == 0 {
                    continue;
                }
                units.push(Unit {
                    kind: UnitKind::UnfairToUnfair { src, dst, color: z },
                    weight: d,
                    rows: 1,
                    max_count: avail[src][z].min((wmax / d) as usize),
                });
            }
        }
    }
    for src in 0..unfair.len() {
        for sink in 0..max_anon {
            for z in 1..=c {
                if avail[src][z] == 0 {
                    continue;
                }
                for w in 1..=wedge {
                    units.push(Unit {
                        kind: UnitKind::UnfairToSink { src, sink, color: z, w },
                        weight: w,
                        rows: 1,
                        max_count: avail[src][z].min((wmax / w) as usize),
                    });
                }
            }
        }
    }
    for id in 0..max_anon {
        let mut targets: Vec<Target> = (0..unfair.len()).map(Target::Unfair).collect();
        targets.extend((0..max_anon).map(Target::Sink));
        for target in targets {
            for w in 1..=wedge {
                let per = ctilde as u64 * w;
                if per > wmax {
                    continue;
                }
                units.push(Unit {
                    kind: UnitKind::SourceFairlet { id, target, w },
                    weight: per,
                    rows: ctilde,
                    max_count: ((wmax / per) as usize).min(m / ctilde),
                });
            }
        }
    }

    let ctx = EnumCtx { inst, unfair: &unfair, avail: &avail, profile: &profile, num_fair, wmax, units: &units, cap };
    let mut out = Vec::new();
    let mut visited = 0u64;
    let mut selection: Vec<(usize, usize)> = Vec::new();
    let completed = rec_templates(&ctx, 0, 0, 0, &mut selection, &mut visited, &mut out);
    Ok((out, !completed))
}

struct EnumCtx<'a> {
    inst: &'a Instance,
    unfair: &'a [(RowType, Vec<usize>)],
    avail: &'a [Vec<usize>],
    profile: &'a [usize],
    num_fair: usize,
    wmax: u64,
    units: &'a [Unit],
    cap: u64,
}

fn rec_templates(
    ctx: &EnumCtx<'_>,
    next: usize,
    weight: u64,
    rows_moved: usize,
    selection: &mut Vec<(usize, usize)>,
    visited: &mut u64,
    out: &mut Vec<Template>,
) -> bool {
    *visited += 1;
    if *visited > ctx.cap {
        return false;
    }
    if let Some(tpl) = finish_template(ctx, selection) {
        out.push(tpl);
    }
    for idx in next..ctx.units.len() {
        let unit = &ctx.units[idx];
        if !selection_allows(ctx.units, selection, unit) {
            continue;
        }
        let spare = match unit.src_color() {
            Some((src, z)) => {
                let used: usize = selection
                    .iter()
                    .filter(|&&(i, _)| ctx.units[i].src_color() == Some((src, z)))
                    .map(|&(_, n)| n)
                    .sum();
                ctx.avail[src][z] - used
            }
            None => usize::MAX,
        };
        let max_count = unit.max_count.min(spare);
        for count in 1..=max_count {
            let w = weight + unit.weight * count as u64;
            let r = rows_moved + unit.rows * count;
            if w > ctx.wmax || r > ctx.inst.m() {
                break;
            }
            selection.push((idx, count));
            let go = rec_templates(ctx, idx + 1, w, r, selection, visited, out);
            selection.pop();
            if !go {
                return false;
            }
        }
    }
    true
}

/// Structural compatibility of a new unit with the current selection:
/// single weight per (unfair, sink) pair, one bundle per source, and
/// anonymous ids introduced in order.
fn selection_allows(units: &[Unit], selection: &[(usize, usize)], unit: &Unit) -> bool {
    let mut next_sink = 0usize;
    let mut next_src = 0usize;
    for &(idx, _) in selection {
        match &units[idx].kind {
            UnitKind::UnfairToSink { sink, .. } => {
                next_sink = next_sink.max(sink + 1);
            }
            UnitKind::SourceFairlet { id, target, .. } => {
                next_src = next_src.max(id + 1);
                if let Target::Sink(s) = target {
                    next_sink = next_sink.max(s + 1);
                }
            }
            UnitKind::UnfairToUnfair { .. } => {}
        }
    }
    match &unit.kind {
        UnitKind::UnfairToUnfair { .. } => true,
        UnitKind::UnfairToSink { src, sink, w, .. } => {
            if *sink > next_sink {
                return false;
            }
            // a sink sees one weight per unfair neighbor
            selection.iter().all(|&(idx, _)| match &units[idx].kind {
                UnitKind::UnfairToSink { src: s2, sink: k2, w: w2, .. } => {
                    !(s2 == src && k2 == sink && w2 != w)
                }
                _ => true,
            })
        }
        UnitKind::SourceFairlet { id, target, w } => {
            if *id > next_src {
                return false;
            }
            if let Target::Sink(s) = target {
                if *s > next_sink {
                    return false;
                }
            }
            // one (target, weight) bundle per source
            selection.iter().all(|&(idx, _)| match &units[idx].kind {
                UnitKind::SourceFairlet { id: i2, target: t2, w: w2 } => {
                    !(i2 == id && (t2 != target || w2 != w))
                }
                _ => true,
            })
        }
    }
}

/// Validate flow fairness of the current selection and convert it into a
/// template; `None` when it is not a complete valid template.
fn finish_template(ctx: &EnumCtx<'_>, selection: &[(usize, usize)]) -> Option<Template> {
    let inst = ctx.inst;
    let units = ctx.units;
    let c = inst.num_colors();
    let mut out_flow = vec![vec![0usize; c + 1]; ctx.unfair.len()];
    let mut in_flow = vec![vec![0usize; c + 1]; ctx.unfair.len()];
    let mut sink_in: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut sources: BTreeMap<usize, ()> = BTreeMap::new();
    let mut incident = vec![false; ctx.unfair.len()];

    for &(idx, n) in selection {
        match &units[idx].kind {
            UnitKind::UnfairToUnfair { src, dst, color } => {
                out_flow[*src][*color] += n;
                in_flow[*dst][*color] += n;
                incident[*src] = true;
                incident[*dst] = true;
            }
            UnitKind::UnfairToSink { src, sink, color, .. } => {
                out_flow[*src][*color] += n;
                sink_in.entry(*sink).or_insert_with(|| vec![0; c + 1])[*color] += n;
                incident[*src] = true;
            }
            UnitKind::SourceFairlet { id, target, .. } => {
                sources.insert(*id, ());
                match target {
                    Target::Unfair(u) => {
                        for z in 1..=c {
                            in_flow[*u][z] += n * ctx.profile[z];
                        }
                        incident[*u] = true;
                    }
                    Target::Sink(s) => {
                        let entry = sink_in.entry(*s).or_insert_with(|| vec![0; c + 1]);
                        for z in 1..=c {
                            entry[z] += n * ctx.profile[z];
                        }
                    }
                }
            }
        }
    }

    if !incident.iter().all(|&i| i) {
        return None;
    }
    if sources.len() + sink_in.len() > ctx.num_fair {
        return None;
    }
    // Unfair clusters must end fair or dissolve entirely.
    for ui in 0..ctx.unfair.len() {
        let mut final_counts = vec![0usize; c + 1];
        let mut total = 0usize;
        for z in 1..=c {
            if out_flow[ui][z] > ctx.avail[ui][z] {
                return None;
            }
            final_counts[z] = ctx.avail[ui][z] - out_flow[ui][z] + in_flow[ui][z];
            total += final_counts[z];
        }
        if !inst.is_fair_counts(&final_counts, total) {
            return None;
        }
    }
    // Sink intakes must be fair.
    for counts in sink_in.values() {
        let total: usize = counts.iter().sum();
        if total == 0 || !inst.is_fair_counts(counts, total) {
            return None;
        }
    }

    // Unlabeled ids: sources first, then sinks, in id order.
    let mut anon: BTreeMap<(bool, usize), usize> = BTreeMap::new();
    for &id in sources.keys() {
        let next = anon.len();
        anon.insert((false, id), next);
    }
    for &s in sink_in.keys() {
        let next = anon.len();
        anon.insert((true, s), next);
    }

    let mut edges = Vec::new();
    for &(idx, n) in selection {
        match &units[idx].kind {
            UnitKind::UnfairToUnfair { src, dst, color } => {
                let e = TemplateEdge {
                    source: TVertex::Unfair(ctx.unfair[*src].0.clone()),
                    target: TVertex::Unfair(ctx.unfair[*dst].0.clone()),
                    color: *color,
                    weight: units[idx].weight,
                };
                edges.extend(std::iter::repeat(e).take(n));
            }
            UnitKind::UnfairToSink { src, sink, color, w } => {
                let e = TemplateEdge {
                    source: TVertex::Unfair(ctx.unfair[*src].0.clone()),
                    target: TVertex::Unlabeled(anon[&(true, *sink)]),
                    color: *color,
                    weight: *w,
                };
                edges.extend(std::iter::repeat(e).take(n));
            }
            UnitKind::SourceFairlet { id, target, w } => {
                let target_vertex = match target {
                    Target::Unfair(u) => TVertex::Unfair(ctx.unfair[*u].0.clone()),
                    Target::Sink(s) => TVertex::Unlabeled(anon[&(true, *s)]),
                };
                for z in 1..=c {
                    let e = TemplateEdge {
                        source: TVertex::Unlabeled(anon[&(false, *id)]),
                        target: target_vertex.clone(),
                        color: z,
                        weight: *w,
                    };
                    edges.extend(std::iter::repeat(e).take(n * ctx.profile[z]));
                }
            }
        }
    }
    Some(Template { num_unlabeled: anon.len(), codes: vec![0; anon.len()], edges })
}
