//! Decomposition of d-regular bipartite multigraphs into d edge-disjoint
//! perfect matchings: Euler splitting halves even degrees, augmenting paths
//! peel off one matching when the degree is odd.

use crate::error::{Error, Result};

/// A bipartite multigraph given by its edge list; parallel edges allowed.
/// Edge ids are list indices.
#[derive(Clone, Debug)]
pub struct BipartiteMultigraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteMultigraph {
    pub fn degree_left(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(l, _)| l == v).count()
    }

    /// The common degree when the graph is regular.
    pub fn regular_degree(&self) -> Result<usize> {
        let mut deg_l = vec![0usize; self.left];
        let mut deg_r = vec![0usize; self.right];
        for &(l, r) in &self.edges {
            if l >= self.left || r >= self.right {
                return Err(Error::InvalidInput(format!(
                    "edge ({l}, {r}) out of range for sides {} x {}",
                    self.left, self.right
                )));
            }
            deg_l[l] += 1;
            deg_r[r] += 1;
        }
        let d = *deg_l.first().or(deg_r.first()).unwrap_or(&0);
        if deg_l.iter().chain(&deg_r).any(|&x| x != d) {
            return Err(Error::InvalidInput("graph is not regular".into()));
        }
        if d > 0 && self.left != self.right {
            return Err(Error::InvalidInput(
                "a regular bipartite graph with edges needs sides of equal size".into(),
            ));
        }
        Ok(d)
    }
}

/// Split a d-regular bipartite multigraph (d ≥ 1) into exactly d pairwise
/// edge-disjoint perfect matchings covering every edge. Each matching is a
/// sorted list of edge ids.
pub fn decompose_regular_bipartite(g: &BipartiteMultigraph) -> Result<Vec<Vec<usize>>> {
    let d = g.regular_degree()?;
    let ids: Vec<usize> = (0..g.edges.len()).collect();
    let mut out = decompose_rec(g, ids, d);
    for matching in &mut out {
        matching.sort_unstable();
    }
    Ok(out)
}

fn decompose_rec(g: &BipartiteMultigraph, ids: Vec<usize>, d: usize) -> Vec<Vec<usize>> {
    match d {
        0 => Vec::new(),
        1 => vec![ids],
        _ if d % 2 == 0 => {
            let (a, b) = euler_split(g, &ids);
            let mut out = decompose_rec(g, a, d / 2);
            out.extend(decompose_rec(g, b, d / 2));
            out
        }
        _ => {
            let matching = extract_perfect_matching(g, &ids);
            let rest: Vec<usize> =
                ids.iter().copied().filter(|id| !matching.contains(id)).collect();
            let mut out = vec![matching];
            out.extend(decompose_rec(g, rest, d - 1));
            out
        }
    }
}

/// Walk Euler circuits (all degrees even) and alternate edges between the
/// two halves; every vertex keeps half its degree on each side.
fn euler_split(g: &BipartiteMultigraph, ids: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = g.left + g.right;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &id in ids {
        let (l, r) = g.edges[id];
        incident[l].push(id);
        incident[g.left + r].push(id);
    }
    let mut used: std::collections::HashSet<usize> = Default::default();
    let mut cursor = vec![0usize; n];
    let mut half_a = Vec::new();
    let mut half_b = Vec::new();

    for start in 0..n {
        loop {
            // Hierholzer walk from `start` while unused incident edges remain.
            let mut circuit = Vec::new();
            let mut v = start;
            loop {
                let mut advanced = false;
                while cursor[v] < incident[v].len() {
                    let id = incident[v][cursor[v]];
                    if used.contains(&id) {
                        cursor[v] += 1;
                        continue;
                    }
                    used.insert(id);
                    circuit.push(id);
                    let (l, r) = g.edges[id];
                    v = if v == l { g.left + r } else { l };
                    advanced = true;
                    break;
                }
                if !advanced {
                    break;
                }
            }
            if circuit.is_empty() {
                break;
            }
            for (i, id) in circuit.into_iter().enumerate() {
                if i % 2 == 0 {
                    half_a.push(id);
                } else {
                    half_b.push(id);
                }
            }
        }
    }
    (half_a, half_b)
}

/// One perfect matching of a regular bipartite multigraph via augmenting
/// paths (existence is guaranteed by regularity).
fn extract_perfect_matching(g: &BipartiteMultigraph, ids: &[usize]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.left];
    for &id in ids {
        adj[g.edges[id].0].push(id);
    }
    let mut match_right: Vec<Option<usize>> = vec![None; g.right]; // edge id
    for l in 0..g.left {
        let mut visited = vec![false; g.right];
        let ok = augment(g, &adj, l, &mut visited, &mut match_right);
        debug_assert!(ok, "regular bipartite graphs have perfect matchings");
    }
    let mut out: Vec<usize> = match_right.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

fn augment(
    g: &BipartiteMultigraph,
    adj: &[Vec<usize>],
    l: usize,
    visited: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for &id in &adj[l] {
        let r = g.edges[id].1;
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match match_right[r] {
            None => true,
            Some(other) => augment(g, adj, g.edges[other].0, visited, match_right),
        };
        if free {
            match_right[r] = Some(id);
            return true;
        }
    }
    false
}

/// Check that `matchings` are pairwise edge-disjoint perfect matchings of
/// `g` covering every edge.
pub fn check_decomposition(g: &BipartiteMultigraph, matchings: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; g.edges.len()];
    for matching in matchings {
        let mut left_hit = vec![false; g.left];
        let mut right_hit = vec![false; g.right];
        for &id in matching {
            if seen[id] {
                return Err(Error::InvalidInput(format!("edge {id} appears twice")));
            }
            seen[id] = true;
            let (l, r) = g.edges[id];
            if left_hit[l] || right_hit[r] {
                return Err(Error::InvalidInput("matching touches a vertex twice".into()));
            }
            left_hit[l] = true;
            right_hit[r] = true;
        }
        if left_hit.iter().any(|&h| !h) || right_hit.iter().any(|&h| !h) {
            return Err(Error::InvalidInput("matching is not perfect".into()));
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidInput("matchings do not cover all edges".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn one_regular_graph_is_its_own_matching() {
        let g = BipartiteMultigraph { left: 3, right: 3, edges: vec![(0, 1), (1, 2), (2, 0)] };
        let ms = decompose_regular_bipartite(&g).unwrap();
        assert_eq!(ms, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn four_cycle_splits_into_two_matchings() {
        let g = BipartiteMultigraph {
            left: 2,
            right: 2,
            edges: vec![(0, 0), (0, 1), (1, 0), (1, 1)],
        };
        let ms = decompose_regular_bipartite(&g).unwrap();
        assert_eq!(ms.len(), 2);
        check_decomposition(&g, &ms).unwrap();
    }

    #[test]
    fn complete_bipartite_three() {
        let mut edges = Vec::new();
        for l in 0..3 {
            for r in 0..3 {
                edges.push((l, r));
            }
        }
        let g = BipartiteMultigraph { left: 3, right: 3, edges };
        let ms = decompose_regular_bipartite(&g).unwrap();
        assert_eq!(ms.len(), 3);
        check_decomposition(&g, &ms).unwrap();
    }

    #[test]
    fn rejects_irregular_graphs() {
        let g = BipartiteMultigraph { left: 2, right: 2, edges: vec![(0, 0), (0, 1)] };
        assert!(decompose_regular_bipartite(&g).is_err());
    }

    #[test]
    fn random_unions_of_matchings() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=12);
            let d = rng.gen_range(1..=5);
            let mut edges = Vec::new();
            for _ in 0..d {
                // a random permutation as one matching
                let mut perm: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    let j = rng.gen_range(0..=i);
                    perm.swap(i, j);
                }
                for l in 0..n {
                    edges.push((l, perm[l]));
                }
            }
            let g = BipartiteMultigraph { left: n, right: n, edges };
            let ms = decompose_regular_bipartite(&g).unwrap();
            assert_eq!(ms.len(), d);
            check_decomposition(&g, &ms).unwrap();
        }
    }
}
