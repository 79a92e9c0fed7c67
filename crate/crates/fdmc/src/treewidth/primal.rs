//! Primal graph of a binary matrix: one vertex per row, edges between rows
//! sharing a nonzero entry in some column.

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Clone, Debug)]
pub struct PrimalGraph {
    pub n: usize,
    adj: Vec<std::collections::BTreeSet<usize>>,
}

impl PrimalGraph {
    pub fn new(n: usize) -> PrimalGraph {
        PrimalGraph { n, adj: vec![Default::default(); n] }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Per column, the rows with a nonzero entry form a clique.
pub fn build_primal_graph(inst: &Instance) -> Result<PrimalGraph> {
    if !inst.is_binary() {
        return Err(Error::NotApplicable(format!(
            "primal graphs are defined for binary matrices; domain is {}",
            inst.domain()
        )));
    }
    let mut g = PrimalGraph::new(inst.m());
    for j in 0..inst.n() {
        let support: Vec<usize> =
            (0..inst.m()).filter(|&i| inst.row(i).values()[j] != 0).collect();
        for a in 0..support.len() {
            for b in a + 1..support.len() {
                g.add_edge(support[a], support[b]);
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shared_columns_give_a_path() {
        let inst = Instance::new(
            vec![vec![1, 0], vec![1, 1], vec![0, 1]],
            vec![1, 1, 1],
            2,
            0,
            3,
        )
        .unwrap();
        let g = build_primal_graph(&inst).unwrap();
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(1, 2));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn identity_matrix_is_edgeless() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let inst = Instance::new(rows, vec![1, 1, 1], 2, 0, 3).unwrap();
        let g = build_primal_graph(&inst).unwrap();
        assert!(g.edges().is_empty());
    }

    #[test]
    fn ones_column_gives_a_clique() {
        let inst = Instance::new(vec![vec![1]; 4], vec![1; 4], 2, 0, 4).unwrap();
        let g = build_primal_graph(&inst).unwrap();
        assert_eq!(g.edges().len(), 6);
    }

    #[test]
    fn rejects_non_binary() {
        let inst = Instance::new(vec![vec![2]], vec![1], 3, 0, 1).unwrap();
        assert!(build_primal_graph(&inst).is_err());
    }
}
