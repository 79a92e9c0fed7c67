//! Candidate solutions (edited matrices) and the feasibility verifier.

use crate::error::{Error, Result};
use crate::instance::{dist, Entry, Instance, RowType};

/// An edited matrix `M′` with its derived clustering and edit count.
///
/// Constructed through [`Solution::from_rows`], which groups rows into
/// clusters by equality and recomputes the edit count, so the derived
/// fields cannot drift from the row data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    edited_rows: Vec<RowType>,
    cluster_of: Vec<usize>,
    edit_count: u64,
    distinct_types: usize,
}

impl Solution {
    /// Build a solution from the edited row vectors. Cluster ids are
    /// assigned in order of first occurrence.
    pub fn from_rows(inst: &Instance, edited_rows: Vec<RowType>) -> Result<Solution> {
        if edited_rows.len() != inst.m() {
            return Err(Error::DimensionMismatch(format!(
                "solution has {} rows, instance has {}",
                edited_rows.len(),
                inst.m()
            )));
        }
        let mut cluster_of = Vec::with_capacity(edited_rows.len());
        let mut seen: Vec<&RowType> = Vec::new();
        for (i, row) in edited_rows.iter().enumerate() {
            if row.len() != inst.n() {
                return Err(Error::DimensionMismatch(format!(
                    "solution row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    inst.n()
                )));
            }
            if let Some(&v) = row.values().iter().find(|&&v| v as usize >= inst.domain()) {
                return Err(Error::InvalidInput(format!(
                    "solution entry {} outside domain 0..{}",
                    v,
                    inst.domain()
                )));
            }
            match seen.iter().position(|t| **t == *row) {
                Some(id) => cluster_of.push(id),
                None => {
                    cluster_of.push(seen.len());
                    seen.push(row);
                }
            }
        }
        let distinct_types = seen.len();
        let edit_count = edited_rows
            .iter()
            .zip(inst.rows())
            .map(|(a, b)| dist(a, b))
            .sum();
        Ok(Solution { edited_rows, cluster_of, edit_count, distinct_types })
    }

    /// The identity solution `M′ = M`.
    pub fn identity(inst: &Instance) -> Solution {
        Solution::from_rows(inst, inst.rows().to_vec()).expect("instance rows are valid")
    }

    pub fn edited_rows(&self) -> &[RowType] {
        &self.edited_rows
    }

    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn edit_count(&self) -> u64 {
        self.edit_count
    }

    pub fn distinct_types(&self) -> usize {
        self.distinct_types
    }

    /// Row indices per cluster, in cluster-id order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.distinct_types];
        for (i, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// The type (center) of each cluster, in cluster-id order.
    pub fn cluster_types(&self) -> Vec<RowType> {
        let mut out: Vec<Option<RowType>> = vec![None; self.distinct_types];
        for (i, &c) in self.cluster_of.iter().enumerate() {
            if out[c].is_none() {
                out[c] = Some(self.edited_rows[i].clone());
            }
        }
        out.into_iter().map(|t| t.unwrap()).collect()
    }
}

/// A single violated feasibility condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Cluster (by id) whose color counts do not match the distribution of `γ`.
    UnfairCluster { cluster: usize, size: usize },
    TooManyTypes { got: usize, max: usize },
    TooManyEdits { got: u64, max: u64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnfairCluster { cluster, size } => {
                write!(f, "cluster {cluster} (size {size}) is unfair")
            }
            Violation::TooManyTypes { got, max } => {
                write!(f, "{got} distinct rows exceed r = {max}")
            }
            Violation::TooManyEdits { got, max } => write!(f, "{got} edits exceed k = {max}"),
        }
    }
}

/// The outcome of verifying a solution against an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every feasibility condition of `sol` for `inst` and report all
/// violations: unfair clusters, too many distinct rows, too many edits.
pub fn verify_solution(inst: &Instance, sol: &Solution) -> Result<Verdict> {
    if sol.edited_rows.len() != inst.m() {
        return Err(Error::DimensionMismatch(format!(
            "solution has {} rows, instance has {}",
            sol.edited_rows.len(),
            inst.m()
        )));
    }
    let mut violations = Vec::new();
    for (id, rows) in sol.clusters().into_iter().enumerate() {
        if !inst.is_fair_cluster(&rows) {
            violations.push(Violation::UnfairCluster { cluster: id, size: rows.len() });
        }
    }
    if sol.distinct_types() > inst.r() {
        violations.push(Violation::TooManyTypes { got: sol.distinct_types(), max: inst.r() });
    }
    if sol.edit_count() > inst.k() {
        violations.push(Violation::TooManyEdits { got: sol.edit_count(), max: inst.k() });
    }
    Ok(Verdict { violations })
}

/// Column-wise majority vote within each part of `partition`; ties go to the
/// smallest entry value. The result never needs more edits than any matrix
/// that is constant on each part.
pub fn majority_recenter(inst: &Instance, partition: &[Vec<usize>]) -> Result<Solution> {
    let m = inst.m();
    let mut covered = vec![false; m];
    for part in partition {
        for &i in part {
            if i >= m {
                return Err(Error::InvalidInput(format!("row index {i} out of range")));
            }
            if covered[i] {
                return Err(Error::InvalidInput(format!("row {i} appears in two parts")));
            }
            covered[i] = true;
        }
    }
    if covered.iter().any(|&c| !c) {
        return Err(Error::InvalidInput("partition does not cover all rows".into()));
    }

    let mut edited: Vec<Option<RowType>> = vec![None; m];
    for part in partition {
        if part.is_empty() {
            continue;
        }
        let center = majority_center(inst, part);
        for &i in part {
            edited[i] = Some(center.clone());
        }
    }
    Solution::from_rows(inst, edited.into_iter().map(|r| r.unwrap()).collect())
}

/// The majority-vote center of a set of rows; ties broken by smallest value.
pub fn majority_center(inst: &Instance, part: &[usize]) -> RowType {
    let n = inst.n();
    let p = inst.domain();
    let mut center = Vec::with_capacity(n);
    let mut counts = vec![0usize; p];
    for j in 0..n {
        counts.iter_mut().for_each(|c| *c = 0);
        for &i in part {
            counts[inst.row(i).values()[j] as usize] += 1;
        }
        let best = (0..p).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
        center.push(best as Entry);
    }
    RowType(center)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst_a() -> Instance {
        Instance::new(
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]],
            vec![1, 2, 1, 2],
            2,
            1,
            2,
        )
        .unwrap()
    }

    #[test]
    fn verify_inst_a_optimum() {
        let inst = inst_a();
        let sol = Solution::from_rows(
            &inst,
            vec![
                RowType(vec![0, 0]),
                RowType(vec![0, 0]),
                RowType(vec![1, 1]),
                RowType(vec![1, 1]),
            ],
        )
        .unwrap();
        assert_eq!(sol.edit_count(), 1);
        assert_eq!(sol.distinct_types(), 2);
        assert!(verify_solution(&inst, &sol).unwrap().feasible());
    }

    #[test]
    fn verify_inst_a_identity_is_unfair() {
        let inst = inst_a();
        let sol = Solution::identity(&inst);
        let verdict = verify_solution(&inst, &sol).unwrap();
        assert!(!verdict.feasible());
        // two singleton clusters under the 1:1 coloring, and 3 distinct rows > r
        let unfair = verdict
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::UnfairCluster { .. }))
            .count();
        assert_eq!(unfair, 2);
        assert!(verdict
            .violations
            .contains(&Violation::TooManyTypes { got: 3, max: 2 }));
    }

    // Six rows edited onto centers 0000 and 1011 with 7 edits in total,
    // two distinct rows; feasible for k = 7, r = 2, c = 1.
    #[test]
    fn verify_two_center_scenario() {
        let inst = Instance::new(
            vec![
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![1, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![1, 1, 1, 1],
                vec![0, 1, 1, 1],
            ],
            vec![1; 6],
            2,
            7,
            2,
        )
        .unwrap();
        let zero = RowType(vec![0, 0, 0, 0]);
        let other = RowType(vec![1, 0, 1, 1]);
        let sol = Solution::from_rows(
            &inst,
            vec![
                zero.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                other.clone(),
                other.clone(),
            ],
        )
        .unwrap();
        assert_eq!(sol.edit_count(), 7);
        assert_eq!(sol.distinct_types(), 2);
        assert!(verify_solution(&inst, &sol).unwrap().feasible());
    }

    #[test]
    fn majority_recenter_singletons_is_identity() {
        let inst = inst_a();
        let parts: Vec<Vec<usize>> = (0..4).map(|i| vec![i]).collect();
        let sol = majority_recenter(&inst, &parts).unwrap();
        assert_eq!(sol.edit_count(), 0);
        assert_eq!(sol.edited_rows(), inst.rows());
    }

    // Part {00, 01, 11}: column votes give center 01 at cost 2, the minimum
    // over all four binary centers.
    #[test]
    fn majority_recenter_three_rows() {
        let inst = Instance::new(
            vec![vec![0, 0], vec![0, 1], vec![1, 1]],
            vec![1, 1, 1],
            2,
            2,
            1,
        )
        .unwrap();
        let sol = majority_recenter(&inst, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(sol.edited_rows()[0], RowType(vec![0, 1]));
        assert_eq!(sol.edit_count(), 2);
        let brute = (0..4)
            .map(|bits| {
                let center = RowType(vec![(bits >> 1) & 1, bits & 1]);
                inst.rows().iter().map(|r| dist(r, &center)).sum::<u64>()
            })
            .min()
            .unwrap();
        assert_eq!(sol.edit_count(), brute);
    }

    #[test]
    fn majority_recenter_inst_a_partition() {
        let inst = inst_a();
        let sol = majority_recenter(&inst, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(sol.edit_count(), 1);
        assert_eq!(sol.edited_rows()[0], RowType(vec![0, 0]));
        assert_eq!(sol.edited_rows()[2], RowType(vec![1, 1]));
    }

    #[test]
    fn majority_recenter_rejects_partial_partition() {
        let inst = inst_a();
        assert!(majority_recenter(&inst, &[vec![0, 1]]).is_err());
        assert!(majority_recenter(&inst, &[vec![0, 1], vec![1, 2, 3]]).is_err());
    }

    // The vote never loses against any matrix that is constant on each part,
    // checked by enumerating all p^n center choices per part.
    #[test]
    fn majority_recenter_beats_every_center_choice() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let m = rng.gen_range(1..=5);
            let n = rng.gen_range(1..=3);
            let p = rng.gen_range(2..=3usize);
            let rows: Vec<Vec<Entry>> =
                (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..p) as Entry).collect()).collect();
            let inst = Instance::new(rows, vec![1; m], p, 0, m).unwrap();
            let mut parts: Vec<Vec<usize>> = Vec::new();
            for i in 0..m {
                if parts.is_empty() || rng.gen_bool(0.5) {
                    parts.push(vec![i]);
                } else {
                    let idx = rng.gen_range(0..parts.len());
                    parts[idx].push(i);
                }
            }
            let voted = majority_recenter(&inst, &parts).unwrap();
            for part in &parts {
                let voted_cost: u64 =
                    part.iter().map(|&i| dist(inst.row(i), &voted.edited_rows()[i])).sum();
                let centers = p.pow(inst.n() as u32);
                let best = (0..centers)
                    .map(|mut code| {
                        let center = RowType(
                            (0..inst.n())
                                .map(|_| {
                                    let v = (code % p) as Entry;
                                    code /= p;
                                    v
                                })
                                .collect(),
                        );
                        part.iter().map(|&i| dist(inst.row(i), &center)).sum::<u64>()
                    })
                    .min()
                    .unwrap();
                assert_eq!(voted_cost, best);
            }
        }
    }
}
