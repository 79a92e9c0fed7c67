//! Tree decompositions: validation, a min-fill heuristic, an exact
//! elimination-order search for small graphs, and conversion to nice form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::treewidth::primal::PrimalGraph;

/// A rooted-free tree decomposition: bags of vertices plus tree edges
/// between bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Check the three decomposition properties against `g`, plus that the
    /// bag graph is a tree. Reports the first violated property.
    pub fn validate(&self, g: &PrimalGraph) -> Result<()> {
        if self.bags.is_empty() {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        for (u, v) in &self.edges {
            if *u >= self.bags.len() || *v >= self.bags.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "tree edge ({u}, {v}) references a missing bag"
                )));
            }
        }
        // connectivity + acyclicity of the bag tree
        if self.edges.len() + 1 != self.bags.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} bags need {} tree edges, got {}",
                self.bags.len(),
                self.bags.len() - 1,
                self.edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.bags.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(b) = stack.pop() {
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidDecomposition("bag tree is disconnected".into()));
        }

        // (1) every vertex occurs in some bag
        let mut occurs = vec![false; g.n];
        for bag in &self.bags {
            for &v in bag {
                if v >= g.n {
                    return Err(Error::InvalidDecomposition(format!(
                        "bag vertex {v} out of range (graph has {} vertices)",
                        g.n
                    )));
                }
                occurs[v] = true;
            }
        }
        if let Some(v) = occurs.iter().position(|&o| !o) {
            return Err(Error::InvalidDecomposition(format!(
                "vertex {v} occurs in no bag"
            )));
        }
        // (2) every edge is contained in some bag
        for (u, v) in g.edges() {
            let ok = self
                .bags
                .iter()
                .any(|bag| bag.contains(&u) && bag.contains(&v));
            if !ok {
                return Err(Error::InvalidDecomposition(format!(
                    "edge ({u}, {v}) is contained in no bag"
                )));
            }
        }
        // (3) occurrences of each vertex form a subtree
        for v in 0..g.n {
            let members: Vec<usize> = (0..self.bags.len())
                .filter(|&b| self.bags[b].contains(&v))
                .collect();
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            let mut stack = vec![members[0]];
            seen.insert(members[0]);
            while let Some(b) = stack.pop() {
                for &c in &adj[b] {
                    if self.bags[c].contains(&v) && seen.insert(c) {
                        stack.push(c);
                    }
                }
            }
            if seen.len() != members.len() {
                return Err(Error::InvalidDecomposition(format!(
                    "bags containing vertex {v} are not connected"
                )));
            }
        }
        Ok(())
    }
}

/// Decomposition from an elimination order: bag of `v` holds `v` plus its
/// not-yet-eliminated neighbors in the progressively filled graph.
fn from_elimination_order(g: &PrimalGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.n;
    debug_assert_eq!(order.len(), n);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<usize> =
            adj[v].iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        for a in 0..later.len() {
            for b in a + 1..later.len() {
                adj[later[a]].insert(later[b]);
                adj[later[b]].insert(later[a]);
            }
        }
    }
    // Bag of order[i] connects to the bag of its earliest-eliminated later
    // neighbor; roots of the forest are chained to keep a single tree.
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, &v) in order.iter().enumerate() {
        let later_min = bags[i]
            .iter()
            .copied()
            .filter(|&u| u != v)
            .min_by_key(|&u| pos[u]);
        match later_min {
            Some(u) => edges.push((i, pos[u])),
            None => {
                if let Some(prev) = last_root {
                    edges.push((i, prev));
                }
                last_root = Some(i);
            }
        }
    }
    TreeDecomposition { bags, edges }
}

/// Min-fill elimination heuristic; ties broken by vertex index.
pub fn min_fill_order(g: &PrimalGraph) -> Vec<usize> {
    let n = g.n;
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let mut best: Option<(usize, usize)> = None; // (fill, vertex)
        for &v in &alive {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut fill = 0usize;
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    if !adj[nb[a]].contains(&nb[b]) {
                        fill += 1;
                    }
                }
            }
            if best.map_or(true, |(bf, bv)| fill < bf || (fill == bf && v < bv)) {
                best = Some((fill, v));
            }
        }
        let (_, v) = best.unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for a in 0..nb.len() {
            for b in a + 1..nb.len() {
                adj[nb[a]].insert(nb[b]);
                adj[nb[b]].insert(nb[a]);
            }
        }
        for &u in &nb {
            adj[u].remove(&v);
        }
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Exact minimum-width elimination order via subset dynamic programming;
/// usable for graphs with at most 16 vertices.
pub fn exact_order(g: &PrimalGraph) -> Option<Vec<usize>> {
    let n = g.n;
    if n > 16 {
        return None;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let adj: Vec<u32> =
        (0..n).map(|v| g.neighbors(v).fold(0u32, |acc, u| acc | (1 << u))).collect();

    // Degree of v in the graph where `mask` has been eliminated: neighbors
    // reachable from v through eliminated vertices.
    let degree_after = |v: usize, eliminated: u32| -> u32 {
        let mut reach = 1u32 << v;
        let mut frontier = adj[v];
        let mut nbrs = 0u32;
        loop {
            let new_elim = frontier & eliminated & !reach;
            nbrs |= frontier & !eliminated & !(1 << v);
            if new_elim == 0 {
                break;
            }
            reach |= new_elim;
            let mut next = 0u32;
            let mut rem = new_elim;
            while rem != 0 {
                let u = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                next |= adj[u];
            }
            frontier = next & !reach;
        }
        nbrs.count_ones()
    };

    let mut width = vec![u32::MAX; (full as usize) + 1];
    let mut pick = vec![usize::MAX; (full as usize) + 1];
    width[0] = 0;
    for mask in 0..=full {
        if width[mask as usize] == u32::MAX {
            continue;
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let w = width[mask as usize].max(degree_after(v, mask));
            let next = (mask | (1 << v)) as usize;
            if w < width[next] {
                width[next] = w;
                pick[next] = v;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full as usize;
    while mask != 0 {
        let v = pick[mask];
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse();
    Some(order)
}

pub fn heuristic_decomposition(g: &PrimalGraph) -> TreeDecomposition {
    from_elimination_order(g, &min_fill_order(g))
}

pub fn exact_decomposition(g: &PrimalGraph) -> Option<TreeDecomposition> {
    exact_order(g).map(|order| from_elimination_order(g, &order))
}

/// Node kinds of a nice tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted vertex set.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A nice tree decomposition: empty root and leaf bags, and only
/// introduce / forget / join internal nodes.
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Nodes in post-order (children before parents).
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((b, expanded)) = stack.pop() {
            if expanded {
                out.push(b);
            } else {
                stack.push((b, true));
                for &c in &self.nodes[b].children {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Structural validation plus the decomposition properties w.r.t. `g`.
    pub fn validate(&self, g: &PrimalGraph) -> Result<()> {
        let raw = self.to_raw();
        raw.validate(g)?;
        if !self.nodes[self.root].bag.is_empty() {
            return Err(Error::InvalidDecomposition("root bag is not empty".into()));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            match &node.kind {
                NodeKind::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return Err(Error::InvalidDecomposition(format!(
                            "leaf node {i} has children or a nonempty bag"
                        )));
                    }
                }
                NodeKind::Introduce(v) => {
                    let child = &self.nodes[node.children[0]];
                    let mut expect = node.bag.clone();
                    expect.retain(|x| x != v);
                    if node.children.len() != 1
                        || !node.bag.contains(v)
                        || child.bag != expect
                    {
                        return Err(Error::InvalidDecomposition(format!(
                            "introduce node {i} does not add exactly vertex {v}"
                        )));
                    }
                }
                NodeKind::Forget(v) => {
                    let child = &self.nodes[node.children[0]];
                    let mut expect = node.bag.clone();
                    expect.push(*v);
                    expect.sort_unstable();
                    if node.children.len() != 1 || node.bag.contains(v) || child.bag != expect
                    {
                        return Err(Error::InvalidDecomposition(format!(
                            "forget node {i} does not remove exactly vertex {v}"
                        )));
                    }
                }
                NodeKind::Join => {
                    if node.children.len() != 2
                        || self.nodes[node.children[0]].bag != node.bag
                        || self.nodes[node.children[1]].bag != node.bag
                    {
                        return Err(Error::InvalidDecomposition(format!(
                            "join node {i} children must repeat its bag"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_raw(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((i, c));
            }
        }
        TreeDecomposition { bags, edges }
    }
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// A chain introducing all of `target` above `below` (whose bag is `from`).
    fn introduce_chain(&mut self, mut from: Vec<usize>, target: &[usize], mut below: usize) -> usize {
        for &v in target {
            if !from.contains(&v) {
                from.push(v);
                from.sort_unstable();
                below = self.push(NodeKind::Introduce(v), from.clone(), vec![below]);
            }
        }
        below
    }

    /// A chain forgetting everything in `from` that is not in `target`.
    fn forget_chain(&mut self, mut from: Vec<usize>, target: &[usize], mut below: usize) -> usize {
        let extra: Vec<usize> = from.iter().copied().filter(|v| !target.contains(v)).collect();
        for v in extra {
            from.retain(|&x| x != v);
            below = self.push(NodeKind::Forget(v), from.clone(), vec![below]);
        }
        below
    }
}

/// Convert a valid tree decomposition to nice form (empty root and leaves;
/// introduce/forget/join nodes only). The width never increases.
pub fn to_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut builder = NiceBuilder { nodes: Vec::new() };
    // Root the raw tree at bag 0.
    let n_bags = td.bags.len();
    let mut adj = vec![Vec::new(); n_bags];
    for &(u, v) in &td.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }
    let top = build_nice(&mut builder, td, &adj, 0, usize::MAX);
    // Forget the root bag down to the empty set.
    let root_bag = sorted(&td.bags[0]);
    let top = builder.forget_chain(root_bag, &[], top);
    NiceTreeDecomposition { nodes: builder.nodes, root: top }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Returns the node index whose bag equals `td.bags[b]`.
fn build_nice(
    builder: &mut NiceBuilder,
    td: &TreeDecomposition,
    adj: &[Vec<usize>],
    b: usize,
    parent: usize,
) -> usize {
    let bag = sorted(&td.bags[b]);
    let children: Vec<usize> = adj[b].iter().copied().filter(|&c| c != parent).collect();
    if children.is_empty() {
        let leaf = builder.push(NodeKind::Leaf, Vec::new(), Vec::new());
        return builder.introduce_chain(Vec::new(), &bag, leaf);
    }
    let mut tops = Vec::new();
    for c in children {
        let child_top = build_nice(builder, td, adj, c, b);
        let child_bag = sorted(&td.bags[c]);
        // forget child-only vertices, then introduce bag-only vertices
        let keep: Vec<usize> =
            child_bag.iter().copied().filter(|v| bag.contains(v)).collect();
        let t = builder.forget_chain(child_bag, &keep, child_top);
        let t = builder.introduce_chain(keep, &bag, t);
        tops.push(t);
    }
    let mut acc = tops[0];
    for &t in &tops[1..] {
        acc = builder.push(NodeKind::Join, bag.clone(), vec![acc, t]);
    }
    acc
}

/// Build a nice tree decomposition of `g`: validate and convert `external`
/// when given, otherwise run min-fill (with an exact elimination search on
/// small graphs when `exact` is set).
pub fn decompose(
    g: &PrimalGraph,
    external: Option<&TreeDecomposition>,
    exact: bool,
) -> Result<NiceTreeDecomposition> {
    let raw = match external {
        Some(td) => {
            td.validate(g)?;
            td.clone()
        }
        None => {
            if exact {
                exact_decomposition(g).unwrap_or_else(|| heuristic_decomposition(g))
            } else {
                heuristic_decomposition(g)
            }
        }
    };
    let nice = to_nice(&raw);
    debug_assert!(nice.validate(g).is_ok());
    Ok(nice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> PrimalGraph {
        let mut g = PrimalGraph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    #[test]
    fn edgeless_graph_has_width_zero() {
        let g = PrimalGraph::new(4);
        let nice = decompose(&g, None, false).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 0);
    }

    #[test]
    fn paths_have_width_one() {
        let g = path(6);
        let nice = decompose(&g, None, false).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn clique_width_is_n_minus_one() {
        let mut g = PrimalGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v);
            }
        }
        let nice = decompose(&g, None, true).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 3);
    }

    #[test]
    fn cycle_exact_width_is_two() {
        let mut g = path(5);
        g.add_edge(4, 0);
        let td = exact_decomposition(&g).unwrap();
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 2);
        let nice = to_nice(&td);
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 2);
    }

    #[test]
    fn external_decomposition_is_validated_and_converted() {
        let g = path(3);
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![(0, 1)],
        };
        let nice = decompose(&g, Some(&td), false).unwrap();
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);

        // missing edge coverage
        let bad = TreeDecomposition {
            bags: vec![vec![0, 1], vec![2]],
            edges: vec![(0, 1)],
        };
        let err = decompose(&g, Some(&bad), false);
        assert!(matches!(err, Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn vertex_connectivity_is_checked() {
        let g = PrimalGraph::new(3);
        let bad = TreeDecomposition {
            bags: vec![vec![0, 2], vec![1], vec![2]],
            edges: vec![(0, 1), (1, 2)],
        };
        // vertex 2 occurs in bags 0 and 2, which are not adjacent
        assert!(matches!(bad.validate(&g), Err(Error::InvalidDecomposition(_))));
    }
}
