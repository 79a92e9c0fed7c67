//! Solution templates for the color-coding search: directed multigraph
//! skeletons of candidate reduced edit graphs, with all unfair types as
//! named vertices and fair types anonymized behind coded unlabeled vertices.

use std::collections::BTreeMap;

use crate::approx::coding::CodeAssignment;
use crate::error::{Error, Result};
use crate::instance::{dist, Color, Instance, RowType};
use crate::solution::Solution;

/// Template vertex: a concrete unfair type or an anonymous stand-in for a
/// fair type of the input matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TVertex {
    Unfair(RowType),
    Unlabeled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateEdge {
    pub source: TVertex,
    pub target: TVertex,
    pub color: Color,
    pub weight: u64,
}

/// A candidate reduced-edit-graph skeleton. Unlabeled vertices carry codes
/// (`0` = not yet assigned); edges between two unfair types must weigh their
/// Hamming distance, and the total weight respects the `(5 − 3/c̃)k` budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub num_unlabeled: usize,
    pub codes: Vec<usize>,
    pub edges: Vec<TemplateEdge>,
}

/// Total-weight ceiling `⌊(5 − 3/c̃)·k⌋` for the instance's budgets.
pub fn weight_cap(inst: &Instance) -> u64 {
    let ct = inst.fairlet_size() as u64;
    (5 * ct - 3) * inst.k() / ct
}

/// Number of codes `⌈2(5 − 3/c̃)·k⌉`; never exceeds `10k`.
pub fn code_bound(inst: &Instance) -> usize {
    let ct = inst.fairlet_size() as u64;
    let num = 2 * (5 * ct - 3) * inst.k();
    let bound = num.div_ceil(ct) as usize;
    debug_assert!(bound <= 10 * inst.k() as usize);
    bound.max(1)
}

impl Template {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Check the structural template invariants against the instance.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let unfair = inst.unfair_types();
        let mut incident_unfair: BTreeMap<&RowType, usize> = BTreeMap::new();
        let mut incident_unlabeled = vec![0usize; self.num_unlabeled];
        let mut out_neighbors: Vec<std::collections::BTreeSet<TVertex>> =
            vec![Default::default(); self.num_unlabeled];
        let mut in_degree = vec![0usize; self.num_unlabeled];

        for e in &self.edges {
            if e.weight == 0 {
                return Err(Error::InvalidInput("template edge of weight 0".into()));
            }
            if e.color == 0 || e.color > inst.num_colors() {
                return Err(Error::InvalidInput(format!("template edge color {}", e.color)));
            }
            if e.source == e.target {
                return Err(Error::InvalidInput("template self-loop".into()));
            }
            for v in [&e.source, &e.target] {
                match v {
                    TVertex::Unfair(t) => {
                        if !unfair.contains(t) {
                            return Err(Error::InvalidInput(format!(
                                "template names {t:?}, which is not an unfair type"
                            )));
                        }
                        *incident_unfair.entry(t).or_default() += 1;
                    }
                    TVertex::Unlabeled(id) => {
                        if *id >= self.num_unlabeled {
                            return Err(Error::InvalidInput(format!(
                                "unlabeled vertex {id} out of range"
                            )));
                        }
                        incident_unlabeled[*id] += 1;
                    }
                }
            }
            if let (TVertex::Unfair(a), TVertex::Unfair(b)) = (&e.source, &e.target) {
                if e.weight != dist(a, b) {
                    return Err(Error::InvalidInput(
                        "edge between unfair types must weigh their Hamming distance".into(),
                    ));
                }
            }
            if let TVertex::Unlabeled(id) = &e.source {
                out_neighbors[*id].insert(e.target.clone());
            }
            if let TVertex::Unlabeled(id) = &e.target {
                in_degree[*id] += 1;
            }
        }

        for t in &unfair {
            if !incident_unfair.contains_key(t) {
                return Err(Error::InvalidInput(format!(
                    "unfair type {t:?} is isolated in the template"
                )));
            }
        }
        for id in 0..self.num_unlabeled {
            if incident_unlabeled[id] == 0 {
                return Err(Error::InvalidInput(format!("unlabeled vertex {id} is isolated")));
            }
            let source_ok = out_neighbors[id].len() <= 1 && in_degree[id] == 0;
            let sink_ok = out_neighbors[id].is_empty();
            if !(source_ok || sink_ok) {
                return Err(Error::InvalidInput(format!(
                    "unlabeled vertex {id} violates the in-star structure"
                )));
            }
        }
        if self.codes.len() != self.num_unlabeled {
            return Err(Error::InvalidInput("one code per unlabeled vertex required".into()));
        }
        let bound = code_bound(inst);
        let mut seen_codes = std::collections::BTreeSet::new();
        for &code in &self.codes {
            if code == 0 {
                continue; // unassigned; the solver derives codes itself
            }
            if code > bound {
                return Err(Error::InvalidInput(format!(
                    "code {code} exceeds the bound {bound}"
                )));
            }
            if !seen_codes.insert(code) {
                return Err(Error::InvalidInput("duplicate template codes".into()));
            }
        }
        let ct = inst.fairlet_size() as u64;
        if self.total_weight() * ct > (5 * ct - 3) * inst.k() {
            return Err(Error::InvalidInput(format!(
                "template weight {} exceeds the budget",
                self.total_weight()
            )));
        }
        Ok(())
    }
}

/// How candidate pools of unlabeled vertices are constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CodeRule {
    /// Pools contain the fair types with the vertex's template code.
    Fixed,
    /// Pools are unconstrained, but the chosen types must have pairwise
    /// distinct codes; equivalent to trying every code assignment.
    FreeDistinct,
}

/// Limits for the assignment search.
#[derive(Clone, Copy, Debug)]
pub struct AssignLimits {
    pub max_assignments: u64,
}

impl Default for AssignLimits {
    fn default() -> Self {
        AssignLimits { max_assignments: 2_000_000 }
    }
}

/// Assign fair (non-new) types of matching code to the unlabeled vertices:
/// each candidate must have the rows its out-edges need, match the weights
/// towards its unfair neighbors exactly, and every star must resolve with
/// exact leaf distances. On success the realized reduced edit graph is
/// materialized and fully verified; `None` if no assignment works.
pub fn assign_types_to_template(
    inst: &Instance,
    template: &Template,
    coding: &CodeAssignment,
) -> Result<Option<Solution>> {
    template.validate(inst)?;
    if template.codes.iter().any(|&c| c == 0) {
        return Err(Error::InvalidInput(
            "assign_types_to_template needs a fully coded template".into(),
        ));
    }
    let mut counter = 0u64;
    search(inst, template, coding, CodeRule::Fixed, AssignLimits::default(), &mut counter)
}

/// Internal entry point used by the solver: codes are derived from the
/// coding of the chosen types, with distinctness enforced.
pub(crate) fn assign_free(
    inst: &Instance,
    template: &Template,
    coding: &CodeAssignment,
    limits: AssignLimits,
    counter: &mut u64,
) -> Result<Option<Solution>> {
    search(inst, template, coding, CodeRule::FreeDistinct, limits, counter)
}

struct Star {
    center: usize,
    /// (leaf id, weight of its edges to the center)
    leaves: Vec<(usize, u64)>,
}

fn search(
    inst: &Instance,
    template: &Template,
    coding: &CodeAssignment,
    rule: CodeRule,
    limits: AssignLimits,
    counter: &mut u64,
) -> Result<Option<Solution>> {
    let fair_types: Vec<RowType> =
        inst.types().into_iter().filter(|t| inst.is_fair_type(t)).collect();
    let cluster_colors: BTreeMap<RowType, Vec<usize>> = inst
        .clusters()
        .into_iter()
        .map(|(t, rows)| {
            let mut counts = vec![0usize; inst.num_colors() + 1];
            for &i in &rows {
                counts[inst.color(i)] += 1;
            }
            (t, counts)
        })
        .collect();

    // Per-vertex fan-out by color and weights towards unfair neighbors.
    let u = template.num_unlabeled;
    let mut out_colors: Vec<Vec<usize>> = vec![vec![0; inst.num_colors() + 1]; u];
    let mut unfair_weights: Vec<Vec<(&RowType, u64)>> = vec![Vec::new(); u];
    let mut star_edges: Vec<Option<(usize, u64)>> = vec![None; u]; // leaf -> (center, weight)
    for e in &template.edges {
        if let TVertex::Unlabeled(id) = &e.source {
            out_colors[*id][e.color] += 1;
            match &e.target {
                TVertex::Unfair(t) => unfair_weights[*id].push((t, e.weight)),
                TVertex::Unlabeled(center) => match star_edges[*id] {
                    None => star_edges[*id] = Some((*center, e.weight)),
                    Some((c, w)) => {
                        if c != *center || w != e.weight {
                            return Err(Error::InvalidInput(
                                "leaf with inconsistent star edges".into(),
                            ));
                        }
                    }
                },
            }
        }
        if let TVertex::Unlabeled(id) = &e.target {
            if let TVertex::Unfair(t) = &e.source {
                unfair_weights[*id].push((t, e.weight));
            }
        }
    }

    // Candidate pools after filters (i) and (ii).
    let pools: Vec<Vec<&RowType>> = (0..u)
        .map(|id| {
            fair_types
                .iter()
                .filter(|t| {
                    if rule == CodeRule::Fixed
                        && coding.code_of(t) != Some(template.codes[id])
                    {
                        return false;
                    }
                    let colors = &cluster_colors[*t];
                    if (1..colors.len()).any(|z| out_colors[id][z] > colors[z]) {
                        return false;
                    }
                    unfair_weights[id].iter().all(|(nb, w)| dist(t, nb) == *w)
                })
                .collect()
        })
        .collect();

    // Stars: every unlabeled vertex belongs to exactly one.
    let mut stars: Vec<Star> = Vec::new();
    {
        let mut leaves_of: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        for (leaf, entry) in star_edges.iter().enumerate() {
            if let Some((center, w)) = entry {
                leaves_of.entry(*center).or_default().push((leaf, *w));
            }
        }
        for id in 0..u {
            if star_edges[id].is_some() {
                continue; // a leaf of some star
            }
            stars.push(Star { center: id, leaves: leaves_of.remove(&id).unwrap_or_default() });
        }
        if !leaves_of.is_empty() {
            return Err(Error::InvalidInput("star leaf points at another leaf".into()));
        }
    }

    // Per star, all viable (center, leaves) type tuples.
    let mut per_star: Vec<Vec<Vec<&RowType>>> = Vec::new(); // star -> combos -> types (center first)
    for star in &stars {
        let mut combos = Vec::new();
        'center: for &tc in &pools[star.center] {
            let mut leaf_choices: Vec<Vec<&RowType>> = Vec::new();
            for &(leaf, w) in &star.leaves {
                let options: Vec<&RowType> = pools[leaf]
                    .iter()
                    .copied()
                    .filter(|tl| *tl != tc && dist(tl, tc) == w)
                    .collect();
                if options.is_empty() {
                    continue 'center;
                }
                leaf_choices.push(options);
            }
            // cross product of leaf options for this center
            let mut pick = vec![0usize; leaf_choices.len()];
            loop {
                let mut tuple = vec![tc];
                tuple.extend(pick.iter().enumerate().map(|(i, &j)| leaf_choices[i][j]));
                combos.push(tuple);
                let mut pos = pick.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    pick[pos] += 1;
                    if pick[pos] < leaf_choices[pos].len() {
                        break;
                    }
                    pick[pos] = 0;
                }
                if pick.iter().all(|&x| x == 0) {
                    break;
                }
            }
        }
        if combos.is_empty() {
            return Ok(None);
        }
        per_star.push(combos);
    }

    // Cross product over stars; assignments must be globally consistent.
    let mut pick = vec![0usize; per_star.len()];
    loop {
        *counter += 1;
        if *counter > limits.max_assignments {
            return Err(Error::Capacity(format!(
                "assignment search exceeded its cap of {}",
                limits.max_assignments
            )));
        }
        let mut assignment: Vec<Option<&RowType>> = vec![None; u];
        for (si, star) in stars.iter().enumerate() {
            let combo = &per_star[si][pick[si]];
            assignment[star.center] = Some(combo[0]);
            for (li, &(leaf, _)) in star.leaves.iter().enumerate() {
                assignment[leaf] = Some(combo[li + 1]);
            }
        }
        let chosen: Vec<&RowType> = assignment.iter().map(|t| t.unwrap()).collect();
        if consistent(&chosen, coding, rule) {
            if let Some(sol) = materialize(inst, template, &chosen) {
                return Ok(Some(sol));
            }
        }

        let mut pos = pick.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < per_star[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

fn consistent(chosen: &[&RowType], coding: &CodeAssignment, rule: CodeRule) -> bool {
    for i in 0..chosen.len() {
        for j in i + 1..chosen.len() {
            if chosen[i] == chosen[j] {
                return false;
            }
        }
    }
    if rule == CodeRule::FreeDistinct {
        let mut codes: Vec<Option<usize>> =
            chosen.iter().map(|t| coding.code_of(t)).collect();
        if codes.iter().any(|c| c.is_none()) {
            return false;
        }
        codes.sort_unstable();
        codes.windows(2).all(|w| w[0] != w[1])
    } else {
        true
    }
}

/// Realize the template under a complete assignment: move concrete rows
/// (smallest indices per color first) along each edge and verify the result
/// end to end: fairness, the distinct-row bound, and the weight budget.
fn materialize(inst: &Instance, template: &Template, chosen: &[&RowType]) -> Option<Solution> {
    let resolve = |v: &TVertex| -> RowType {
        match v {
            TVertex::Unfair(t) => t.clone(),
            TVertex::Unlabeled(id) => chosen[*id].clone(),
        }
    };
    // Exact distances must back every edge weight.
    for e in &template.edges {
        if dist(&resolve(&e.source), &resolve(&e.target)) != e.weight {
            return None;
        }
    }
    let mut available: BTreeMap<(RowType, Color), Vec<usize>> = BTreeMap::new();
    for (i, t) in inst.rows().iter().enumerate() {
        available.entry((t.clone(), inst.color(i))).or_default().push(i);
    }
    for rows in available.values_mut() {
        rows.reverse();
    }
    let mut edited = inst.rows().to_vec();
    let mut edges: Vec<(RowType, Color, RowType)> = template
        .edges
        .iter()
        .map(|e| (resolve(&e.source), e.color, resolve(&e.target)))
        .collect();
    edges.sort();
    for (src, color, dst) in edges {
        let rows = available.get_mut(&(src, color))?;
        let i = rows.pop()?;
        edited[i] = dst;
    }
    let sol = Solution::from_rows(inst, edited).ok()?;
    let feasible = sol
        .clusters()
        .iter()
        .all(|rows| inst.is_fair_cluster(rows))
        && sol.distinct_types() <= inst.r();
    let ct = inst.fairlet_size() as u64;
    if feasible && sol.edit_count() * ct <= (5 * ct - 3) * inst.k() {
        Some(sol)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::coding::{generate_codings, CodingOptions};
    use crate::solution::verify_solution;

    fn inst_a_like(k: u64, r: usize) -> Instance {
        Instance::new(
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]],
            vec![1, 2, 1, 2],
            2,
            k,
            r,
        )
        .unwrap()
    }

    #[test]
    fn unfair_only_template_materializes() {
        // 00 and 01 are the unfair types; one color-2 edge 01 -> 00 fixes both.
        let inst = inst_a_like(1, 2);
        let template = Template {
            num_unlabeled: 0,
            codes: vec![],
            edges: vec![TemplateEdge {
                source: TVertex::Unfair(RowType(vec![0, 1])),
                target: TVertex::Unfair(RowType(vec![0, 0])),
                color: 2,
                weight: 1,
            }],
        };
        let coding = generate_codings(&[RowType(vec![1, 1])], 4, CodingOptions::default());
        let sol = assign_types_to_template(&inst, &template, &coding.codings[0])
            .unwrap()
            .expect("assignment succeeds");
        assert_eq!(sol.edit_count(), 1);
        assert!(verify_solution(&inst, &sol).unwrap().feasible());
    }

    #[test]
    fn color_availability_filter_rejects() {
        // The unlabeled source must send two color-1 rows, but the only fair
        // cluster holds a single color-1 row: filter (i) empties the pool.
        let inst = Instance::new(
            vec![vec![0, 0, 0], vec![0, 0, 0], vec![1, 1, 0], vec![1, 1, 1]],
            vec![1, 2, 1, 2],
            2,
            4,
            2,
        )
        .unwrap();
        // unfair types: 110 (color-1 singleton) and 111 (color-2 singleton)
        let template = Template {
            num_unlabeled: 1,
            codes: vec![1],
            edges: vec![
                TemplateEdge {
                    source: TVertex::Unlabeled(0),
                    target: TVertex::Unfair(RowType(vec![1, 1, 0])),
                    color: 1,
                    weight: 2,
                },
                TemplateEdge {
                    source: TVertex::Unlabeled(0),
                    target: TVertex::Unfair(RowType(vec![1, 1, 0])),
                    color: 1,
                    weight: 2,
                },
                TemplateEdge {
                    source: TVertex::Unfair(RowType(vec![1, 1, 1])),
                    target: TVertex::Unfair(RowType(vec![1, 1, 0])),
                    color: 2,
                    weight: 1,
                },
            ],
        };
        let coding = generate_codings(&[RowType(vec![0, 0, 0])], 4, CodingOptions::default());
        let need_two_color_1 =
            assign_types_to_template(&inst, &template, &coding.codings[0]).unwrap();
        assert!(need_two_color_1.is_none());
    }

    #[test]
    fn micro_cases_match_exhaustive_assignment() {
        // Unlabeled sink receiving both singleton unfair rows; pools and the
        // star search must agree with brute force over all fair types.
        let inst = Instance::new(
            vec![
                vec![0, 0, 0],
                vec![0, 0, 0],
                vec![0, 1, 1],
                vec![1, 1, 0],
            ],
            vec![1, 2, 1, 2],
            2,
            4,
            2,
        )
        .unwrap();
        // unfair: 011 (color 1), 110 (color 2); fair: 000
        let mk_template = |w1: u64, w2: u64| Template {
            num_unlabeled: 1,
            codes: vec![1],
            edges: vec![
                TemplateEdge {
                    source: TVertex::Unfair(RowType(vec![0, 1, 1])),
                    target: TVertex::Unlabeled(0),
                    color: 1,
                    weight: w1,
                },
                TemplateEdge {
                    source: TVertex::Unfair(RowType(vec![1, 1, 0])),
                    target: TVertex::Unlabeled(0),
                    color: 2,
                    weight: w2,
                },
            ],
        };
        let fair = vec![RowType(vec![0, 0, 0])];
        let coding = generate_codings(&fair, 4, CodingOptions::default());

        // brute force: the only fair type is 000 at distance 2 from both
        for (w1, w2, expect) in [(2, 2, true), (1, 2, false), (2, 3, false)] {
            let got = assign_types_to_template(&inst, &mk_template(w1, w2), &coding.codings[0])
                .unwrap()
                .is_some();
            let brute = fair
                .iter()
                .any(|t| dist(t, &RowType(vec![0, 1, 1])) == w1 && dist(t, &RowType(vec![1, 1, 0])) == w2);
            assert_eq!(got, brute, "w1={w1} w2={w2}");
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn template_validation_catches_structure_violations() {
        let inst = inst_a_like(2, 2);
        // unlabeled vertex with both in- and out-edges
        let bad = Template {
            num_unlabeled: 1,
            codes: vec![1],
            edges: vec![
                TemplateEdge {
                    source: TVertex::Unfair(RowType(vec![0, 1])),
                    target: TVertex::Unlabeled(0),
                    color: 1,
                    weight: 1,
                },
                TemplateEdge {
                    source: TVertex::Unlabeled(0),
                    target: TVertex::Unfair(RowType(vec![0, 0])),
                    color: 2,
                    weight: 1,
                },
            ],
        };
        assert!(bad.validate(&inst).is_err());

        // wrong forced weight between unfair types
        let bad = Template {
            num_unlabeled: 0,
            codes: vec![],
            edges: vec![TemplateEdge {
                source: TVertex::Unfair(RowType(vec![0, 1])),
                target: TVertex::Unfair(RowType(vec![0, 0])),
                color: 1,
                weight: 2,
            }],
        };
        assert!(bad.validate(&inst).is_err());
    }
}
