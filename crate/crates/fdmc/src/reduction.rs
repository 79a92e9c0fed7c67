//! Hardness-reduction instance generator: from a properly q-colored graph to
//! a binary matrix whose clusters can all be made fair within the budget iff
//! the graph has a multicolored clique. The instance is huge even for the
//! smallest admissible q, so the matrix is streamed row by row and all
//! verification works on the per-type tables.

use std::io::Write;

use crate::error::{Error, Result};
use crate::instance::{dist, RowType};

/// A vertex-colored graph in a simple text format:
///
/// ```text
/// # comment
/// colors 1 2 1 2 3 3
/// 1 2
/// 3 4
/// ```
///
/// with 1-based vertices in the edge lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McqGraph {
    pub colors: Vec<usize>,
    /// Normalized to `a < b`, deduplicated.
    pub edges: Vec<(usize, usize)>,
}

impl McqGraph {
    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_color_classes(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.contains(&key)
    }

    pub fn parse(text: &str) -> Result<McqGraph> {
        let mut colors: Option<Vec<usize>> = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("colors") {
                let parsed: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| {
                        t.parse().map_err(|_| {
                            Error::Parse(format!("line {}: bad color", lineno + 1))
                        })
                    })
                    .collect::<Result<_>>()?;
                if colors.replace(parsed).is_some() {
                    return Err(Error::Parse("duplicate colors line".into()));
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let a: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad edge", lineno + 1)))?;
            let b: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("line {}: bad edge", lineno + 1)))?;
            let n = colors.as_ref().map(|c| c.len()).unwrap_or(0);
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::Parse(format!("line {}: edge ({a}, {b}) invalid", lineno + 1)));
            }
            edges.push((a.min(b) - 1, a.max(b) - 1));
        }
        let colors = colors.ok_or_else(|| Error::Parse("missing colors line".into()))?;
        edges.sort_unstable();
        edges.dedup();
        Ok(McqGraph { colors, edges })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("colors");
        for &c in &self.colors {
            out.push_str(&format!(" {c}"));
        }
        out.push('\n');
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeKind {
    /// Vertex-color gadget type for color `i` with excess color `t`.
    VGadget { i: usize, t: usize },
    /// Color-pair gadget type for colors `i < j` with deficit color `t`.
    EGadget { i: usize, j: usize, t: usize },
    /// One type per graph vertex (0-based).
    Vertex { a: usize },
    /// One type per graph edge (0-based endpoints, `a < b`).
    Edge { a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct ReductionType {
    pub kind: TypeKind,
    pub row: RowType,
    /// Rows of each color (indexed `1..=2q`).
    pub color_counts: Vec<u64>,
}

impl ReductionType {
    pub fn num_rows(&self) -> u64 {
        self.color_counts.iter().sum()
    }
}

/// Layout and bookkeeping of one reduction instance.
#[derive(Clone, Debug)]
pub struct ReductionMeta {
    pub q: usize,
    pub y: u64,
    pub k: u64,
    pub n: usize,
    /// Total rows implied by the per-type row counts.
    pub m: u64,
    /// The aggregate row-count formula as stated alongside the construction;
    /// recorded for reference, not asserted against `m`.
    pub stated_aggregate_m: u64,
    /// Number of fairness colors (`2q`); the coloring is balanced, so the
    /// fairlet size equals it.
    pub num_colors: usize,
    pub types: Vec<ReductionType>,
    pub graph: McqGraph,
}

impl ReductionMeta {
    pub fn type_index(&self, kind: &TypeKind) -> Option<usize> {
        self.types.iter().position(|t| t.kind == *kind)
    }
}

fn binom2(q: u64) -> u64 {
    q * (q - 1) / 2
}

/// Budgets of the construction: `y = 3q(q+1) + 4·C(q,2)·(2q−2)` and
/// `k = 2·C(q,2)·(y+1) + y`.
pub fn budgets(q: usize) -> (u64, u64) {
    let qq = q as u64;
    let y = 3 * qq * (qq + 1) + 4 * binom2(qq) * (2 * qq - 2);
    let k = 2 * binom2(qq) * (y + 1) + y;
    (y, k)
}

/// Build the per-type tables of the reduction instance for a properly
/// q-colored graph with `q ≥ 4`. Columns: `q` blocks of `y` color columns,
/// two blocks of `4q` code columns, then one column per vertex.
pub fn reduce_from_multicolored_clique(graph: &McqGraph) -> Result<ReductionMeta> {
    let q = graph.num_color_classes();
    if q < 4 {
        return Err(Error::InvalidInput(format!("the reduction needs q >= 4 colors, got {q}")));
    }
    let nv = graph.num_vertices();
    let mut class_sizes = vec![0usize; q + 1];
    for &c in &graph.colors {
        if c == 0 || c > q {
            return Err(Error::InvalidInput(format!("vertex color {c} out of range")));
        }
        class_sizes[c] += 1;
    }
    if let Some(c) = (1..=q).find(|&c| class_sizes[c] == 0) {
        return Err(Error::InvalidInput(format!("color class {c} is empty")));
    }
    for &(a, b) in &graph.edges {
        if graph.colors[a] == graph.colors[b] {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) joins two vertices of color {}; the coloring is not proper",
                a + 1,
                b + 1,
                graph.colors[a]
            )));
        }
    }

    let (y, k) = budgets(q);
    let n = q * y as usize + 8 * q + nv;
    let colors_total = 2 * q;

    let block0 = 0usize;
    let block1 = q * y as usize;
    let block2 = block1 + 4 * q;
    let block3 = block2 + 4 * q;

    let color_run = |row: &mut Vec<u8>, i: usize| {
        // i is 1-based; its y columns start at (i-1)*y
        let start = block0 + (i - 1) * y as usize;
        row[start..start + y as usize].fill(1);
    };
    let code_pair = |row: &mut Vec<u8>, block: usize, t: usize| {
        // 1-based positions 2t-1 and 2t within the block
        row[block + 2 * (t - 1)] = 1;
        row[block + 2 * (t - 1) + 1] = 1;
    };

    let mut types: Vec<ReductionType> = Vec::new();

    // V gadgets: q+1 types per color i, excess of one row of color t.
    for i in 1..=q {
        for t in std::iter::once(i).chain(q + 1..=2 * q) {
            let mut row = vec![0u8; n];
            color_run(&mut row, i);
            code_pair(&mut row, block1, t);
            let mut counts = vec![0u64; colors_total + 1];
            for (z, slot) in counts.iter_mut().enumerate().skip(1) {
                *slot = if z == t { k + 1 } else { k };
            }
            types.push(ReductionType {
                kind: TypeKind::VGadget { i, t },
                row: RowType(row),
                color_counts: counts,
            });
        }
    }
    // E gadgets: 2q-2 types per color pair, deficit of one row of color t.
    for i in 1..=q {
        for j in i + 1..=q {
            for t in (1..=2 * q).filter(|&t| t != i && t != j) {
                let mut row = vec![0u8; n];
                color_run(&mut row, i);
                color_run(&mut row, j);
                code_pair(&mut row, block2, t);
                let mut counts = vec![0u64; colors_total + 1];
                for (z, slot) in counts.iter_mut().enumerate().skip(1) {
                    *slot = if z == t { k - 1 } else { k };
                }
                types.push(ReductionType {
                    kind: TypeKind::EGadget { i, j, t },
                    row: RowType(row),
                    color_counts: counts,
                });
            }
        }
    }
    // Vertex types: balanced.
    for a in 0..nv {
        let mut row = vec![0u8; n];
        color_run(&mut row, graph.colors[a]);
        row[block3 + a] = 1;
        types.push(ReductionType {
            kind: TypeKind::Vertex { a },
            row: RowType(row),
            color_counts: balanced(colors_total, k),
        });
    }
    // Edge types: balanced.
    for &(a, b) in &graph.edges {
        let mut row = vec![0u8; n];
        color_run(&mut row, graph.colors[a]);
        color_run(&mut row, graph.colors[b]);
        row[block3 + a] = 1;
        row[block3 + b] = 1;
        types.push(ReductionType {
            kind: TypeKind::Edge { a, b },
            row: RowType(row),
            color_counts: balanced(colors_total, k),
        });
    }

    let m: u64 = types.iter().map(|t| t.num_rows()).sum();
    let qq = q as u64;
    let stated_aggregate_m = qq * (2 * k * qq + 1)
        + binom2(qq) * (2 * k * qq - 1)
        + 2 * k * qq * nv as u64
        + 2 * k * qq * graph.edges.len() as u64;

    Ok(ReductionMeta {
        q,
        y,
        k,
        n,
        m,
        stated_aggregate_m,
        num_colors: colors_total,
        types,
        graph: graph.clone(),
    })
}

fn balanced(colors_total: usize, k: u64) -> Vec<u64> {
    let mut counts = vec![k; colors_total + 1];
    counts[0] = 0;
    counts
}

/// Stream the instance in the compact text format: header, the coloring,
/// then one row line per matrix row — grouped by type, colors ascending
/// within each type. Rows of a type are identical, so each line is
/// formatted once.
pub fn stream_instance<W: Write>(meta: &ReductionMeta, mut out: W) -> Result<u64> {
    let r = meta.types.len();
    writeln!(out, "{} {} 2 {} {}", meta.m, meta.n, meta.k, r)?;

    let mut colors_line = String::new();
    for t in &meta.types {
        for (z, &count) in t.color_counts.iter().enumerate().skip(1) {
            for _ in 0..count {
                if !colors_line.is_empty() {
                    colors_line.push(' ');
                }
                colors_line.push_str(&z.to_string());
            }
        }
    }
    out.write_all(colors_line.as_bytes())?;
    out.write_all(b"\n")?;
    drop(colors_line);

    let mut written = 0u64;
    for t in &meta.types {
        let mut line = String::with_capacity(2 * meta.n);
        for (j, &v) in t.row.values().iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push(if v == 0 { '0' } else { '1' });
        }
        line.push('\n');
        for _ in 0..t.num_rows() {
            out.write_all(line.as_bytes())?;
            written += 1;
        }
    }
    debug_assert_eq!(written, meta.m);
    Ok(written)
}

/// Row moves of the forward-direction witness, at the type level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessMove {
    pub from: usize,
    pub to: usize,
    pub color: usize,
    pub rows: u64,
}

#[derive(Clone, Debug)]
pub struct CliqueWitness {
    pub moves: Vec<WitnessMove>,
    pub edit_count: u64,
}

/// The forward-direction witness for a multicolored clique (0-based vertex
/// ids, one per color): every V gadget sends its excess row to the clique
/// vertex of its color, and every clique edge resupplies the E gadgets and
/// the two endpoint types. Total cost is exactly `k`.
pub fn build_clique_witness(meta: &ReductionMeta, clique: &[usize]) -> Result<CliqueWitness> {
    let q = meta.q;
    if clique.len() != q {
        return Err(Error::InvalidInput(format!("clique must have {q} vertices")));
    }
    let mut by_color = vec![None; q + 1];
    for &v in clique {
        if v >= meta.graph.num_vertices() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        let c = meta.graph.colors[v];
        if by_color[c].replace(v).is_some() {
            return Err(Error::InvalidInput(format!("two clique vertices of color {c}")));
        }
    }
    for i in 1..=q {
        for j in i + 1..=q {
            let (a, b) = (by_color[i].unwrap(), by_color[j].unwrap());
            if !meta.graph.has_edge(a, b) {
                return Err(Error::InvalidInput(format!(
                    "clique vertices {} and {} are not adjacent",
                    a + 1,
                    b + 1
                )));
            }
        }
    }

    let idx = |kind: &TypeKind| -> Result<usize> {
        meta.type_index(kind)
            .ok_or_else(|| Error::InvalidInput(format!("missing type {kind:?}")))
    };

    let mut moves = Vec::new();
    // Excess rows of the V gadgets move onto the clique vertices: 3 edits each.
    for i in 1..=q {
        let beta_i = by_color[i].unwrap();
        let vertex = idx(&TypeKind::Vertex { a: beta_i })?;
        for t in std::iter::once(i).chain(q + 1..=2 * q) {
            moves.push(WitnessMove {
                from: idx(&TypeKind::VGadget { i, t })?,
                to: vertex,
                color: t,
                rows: 1,
            });
        }
    }
    // Each clique edge feeds both endpoint vertex types and all its E gadgets.
    for i in 1..=q {
        for j in i + 1..=q {
            let (va, vb) = (by_color[i].unwrap(), by_color[j].unwrap());
            let (a, b) = (va.min(vb), va.max(vb));
            let edge = idx(&TypeKind::Edge { a, b })?;
            moves.push(WitnessMove {
                from: edge,
                to: idx(&TypeKind::Vertex { a: by_color[j].unwrap() })?,
                color: i,
                rows: 1,
            });
            moves.push(WitnessMove {
                from: edge,
                to: idx(&TypeKind::Vertex { a: by_color[i].unwrap() })?,
                color: j,
                rows: 1,
            });
            for t in (1..=2 * q).filter(|&t| t != i && t != j) {
                moves.push(WitnessMove {
                    from: edge,
                    to: idx(&TypeKind::EGadget { i, j, t })?,
                    color: t,
                    rows: 1,
                });
            }
        }
    }

    let edit_count = moves
        .iter()
        .map(|mv| mv.rows * dist(&meta.types[mv.from].row, &meta.types[mv.to].row))
        .sum();
    Ok(CliqueWitness { moves, edit_count })
}

/// Check a type-level witness: availability respected, every touched
/// cluster fair afterwards, no cluster emptied (the distinct-row count is
/// preserved), and the edit count equal to the meta budget.
pub fn verify_clique_witness(meta: &ReductionMeta, witness: &CliqueWitness) -> Result<()> {
    let mut counts: Vec<Vec<u64>> = meta.types.iter().map(|t| t.color_counts.clone()).collect();
    for mv in &witness.moves {
        let from = counts
            .get_mut(mv.from)
            .ok_or_else(|| Error::InvalidInput("move from unknown type".into()))?;
        let avail = from
            .get_mut(mv.color)
            .ok_or_else(|| Error::InvalidInput("bad move color".into()))?;
        *avail = avail
            .checked_sub(mv.rows)
            .ok_or_else(|| Error::InvalidInput("move exceeds availability".into()))?;
        counts[mv.to][mv.color] += mv.rows;
    }
    // Balanced coloring: a cluster is fair iff all its color counts agree.
    for (ti, c) in counts.iter().enumerate() {
        let total: u64 = c.iter().sum();
        if total == 0 {
            return Err(Error::InvalidInput(format!(
                "type {ti} lost its whole cluster; the distinct-row bound breaks"
            )));
        }
        let first = c[1];
        if c[1..].iter().any(|&x| x != first) {
            return Err(Error::InvalidInput(format!("type {ti} ends with an unfair cluster")));
        }
    }
    if witness.edit_count != meta.k {
        return Err(Error::InvalidInput(format!(
            "witness costs {} edits, the budget is exactly {}",
            witness.edit_count, meta.k
        )));
    }
    Ok(())
}

/// A properly colored graph on `q` classes that contains the planted clique
/// `0, 1, …, q−1` (one vertex per class) plus `extra` distracting vertices
/// and random non-clique edges.
pub fn planted_clique_graph(q: usize, extra: usize, seed: u64) -> McqGraph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut colors: Vec<usize> = (1..=q).collect();
    for i in 0..extra {
        colors.push(1 + (i % q));
    }
    let n = colors.len();
    let mut edges = Vec::new();
    for a in 0..q {
        for b in a + 1..q {
            edges.push((a, b));
        }
    }
    for a in 0..n {
        for b in (a + 1).max(q)..n {
            if colors[a] != colors[b] && rng.gen_bool(0.4) {
                edges.push((a.min(b), a.max(b)));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    McqGraph { colors, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_formulas_at_q4() {
        let (y, k) = budgets(4);
        assert_eq!(y, 204);
        assert_eq!(k, 2664);
    }

    #[test]
    fn witness_edit_identity() {
        // 3q(q+1) + C(q,2)(2(y+1) + 4(2q-2)) = k, algebraically and counted.
        for q in 4..=6u64 {
            let (y, k) = budgets(q as usize);
            let total = 3 * q * (q + 1) + binom2(q) * (2 * (y + 1) + 4 * (2 * q - 2));
            assert_eq!(total, k);
        }
    }

    #[test]
    fn rejects_small_q_and_improper_colorings() {
        let g = McqGraph { colors: vec![1, 2, 3], edges: vec![(0, 1)] };
        assert!(reduce_from_multicolored_clique(&g).is_err()); // q = 3

        let g = McqGraph { colors: vec![1, 1, 2, 3, 4], edges: vec![(0, 1)] };
        assert!(reduce_from_multicolored_clique(&g).is_err()); // improper
    }

    #[test]
    fn graph_format_round_trip() {
        let g = planted_clique_graph(4, 3, 1);
        let text = g.to_text();
        assert_eq!(McqGraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn balanced_coloring_yields_fairlet_2q() {
        let g = planted_clique_graph(4, 0, 0);
        let meta = reduce_from_multicolored_clique(&g).unwrap();
        assert_eq!(meta.num_colors, 8);
        // all colors occur equally often
        let mut totals = vec![0u64; meta.num_colors + 1];
        for t in &meta.types {
            for z in 1..=meta.num_colors {
                totals[z] += t.color_counts[z];
            }
        }
        assert!(totals[1..].iter().all(|&x| x == totals[1]));
        assert_eq!(meta.m % (meta.num_colors as u64), 0);
    }

    #[test]
    fn witness_verifies_at_exactly_k() {
        let g = planted_clique_graph(4, 2, 3);
        let meta = reduce_from_multicolored_clique(&g).unwrap();
        let clique: Vec<usize> = (0..4).collect();
        let witness = build_clique_witness(&meta, &clique).unwrap();
        assert_eq!(witness.edit_count, meta.k);
        verify_clique_witness(&meta, &witness).unwrap();
    }

    #[test]
    fn non_clique_is_rejected() {
        let mut g = planted_clique_graph(4, 0, 0);
        g.edges.retain(|&(a, b)| !(a == 0 && b == 1));
        let meta = reduce_from_multicolored_clique(&g).unwrap();
        assert!(build_clique_witness(&meta, &[0, 1, 2, 3]).is_err());
    }
}
