//! Edit graphs: the directed multigraph of per-row type changes between a
//! matrix and an edited matrix, and its reduced (loop-free, label-free) form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::instance::{dist, Color, Instance, RowType};
use crate::solution::Solution;

/// One edge per row: from the row's type in `M` to its type in `M′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditEdge {
    pub source: RowType,
    pub target: RowType,
    /// Row index (0-based).
    pub label: usize,
    pub color: Color,
    pub weight: u64,
}

#[derive(Clone, Debug)]
pub struct EditGraph {
    pub vertices: BTreeSet<RowType>,
    /// Indexed by row label.
    pub edges: Vec<EditEdge>,
}

/// Loops and labels dropped; multi-edges remain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedEdge {
    pub source: RowType,
    pub target: RowType,
    pub color: Color,
    pub weight: u64,
}

#[derive(Clone, Debug)]
pub struct ReducedEditGraph {
    pub vertices: BTreeSet<RowType>,
    pub edges: Vec<ReducedEdge>,
}

/// Build the edit graph of `sol` w.r.t. `inst`.
pub fn build_edit_graph(inst: &Instance, sol: &Solution) -> Result<EditGraph> {
    if sol.edited_rows().len() != inst.m() {
        return Err(Error::DimensionMismatch("solution row count".into()));
    }
    let mut vertices = BTreeSet::new();
    let mut edges = Vec::with_capacity(inst.m());
    for t in 0..inst.m() {
        let source = inst.row(t).clone();
        let target = sol.edited_rows()[t].clone();
        let weight = dist(&source, &target);
        vertices.insert(source.clone());
        vertices.insert(target.clone());
        edges.push(EditEdge { source, target, label: t, color: inst.color(t), weight });
    }
    Ok(EditGraph { vertices, edges })
}

/// Drop self-loops and labels.
pub fn reduce(g: &EditGraph) -> ReducedEditGraph {
    ReducedEditGraph {
        vertices: g.vertices.clone(),
        edges: g
            .edges
            .iter()
            .filter(|e| e.source != e.target)
            .map(|e| ReducedEdge {
                source: e.source.clone(),
                target: e.target.clone(),
                color: e.color,
                weight: e.weight,
            })
            .collect(),
    }
}

impl EditGraph {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// A type survives if it has an incoming edge (self-loops included).
    pub fn survivors(&self) -> BTreeSet<RowType> {
        self.edges.iter().map(|e| e.target.clone()).collect()
    }

    /// The edit graph is fair iff for every vertex the multiset of incoming
    /// edges witnesses the color distribution of `γ` — equivalently, iff the
    /// edited matrix is fair.
    pub fn is_fair(&self, inst: &Instance) -> bool {
        let c = inst.num_colors();
        let mut per_vertex: std::collections::BTreeMap<&RowType, (Vec<usize>, usize)> =
            Default::default();
        for e in &self.edges {
            let entry = per_vertex.entry(&e.target).or_insert_with(|| (vec![0; c + 1], 0));
            entry.0[e.color] += 1;
            entry.1 += 1;
        }
        per_vertex.values().all(|(counts, size)| inst.is_fair_counts(counts, *size))
    }
}

/// Whether a multiset of colors (indexed `1..=c`) witnesses the color
/// distribution of `γ`.
pub fn is_fair_edge_set(inst: &Instance, color_counts: &[usize], size: usize) -> bool {
    inst.is_fair_counts(color_counts, size)
}

impl ReducedEditGraph {
    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}
