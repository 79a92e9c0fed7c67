//! Problem instances: a colored matrix together with the edit budget `k`
//! and the bound `r` on the number of distinct rows.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A single matrix entry. Entries are integers `0..p` for domain size `p`.
pub type Entry = u8;

/// A fairness color, 1-indexed (`1..=c`).
pub type Color = usize;

/// The value vector of a row. Two rows belong to the same cluster exactly
/// when their types are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RowType(pub Vec<Entry>);

impl RowType {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Entry] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl std::fmt::Debug for RowType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl From<Vec<Entry>> for RowType {
    fn from(values: Vec<Entry>) -> Self {
        RowType(values)
    }
}

/// Hamming distance between two types of equal length.
pub fn hamming(a: &RowType, b: &RowType) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "hamming distance of types with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(dist(a, b))
}

/// Unchecked Hamming distance; callers guarantee equal lengths.
pub(crate) fn dist(a: &RowType, b: &RowType) -> u64 {
    debug_assert_eq!(a.len(), b.len());
    a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count() as u64
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Minimum size of a nonempty fair set of rows,
/// `c̃ = m / gcd(|γ|₁, …, |γ|_c)`, computed over the colors present in `γ`.
pub fn fairlet_size(coloring: &[Color]) -> usize {
    let m = coloring.len();
    if m == 0 {
        return 0;
    }
    let c = *coloring.iter().max().unwrap();
    let mut counts = vec![0usize; c + 1];
    for &z in coloring {
        counts[z] += 1;
    }
    let g = counts[1..].iter().filter(|&&n| n > 0).fold(0, |acc, &n| gcd(acc, n));
    m / g
}

/// An FDMC instance: an `m × n` matrix over `0..p`, a coloring of the rows,
/// an edit budget `k` and a bound `r` on the number of distinct rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    rows: Vec<RowType>,
    coloring: Vec<Color>,
    domain: usize,
    k: u64,
    r: usize,
    // derived
    color_counts: Vec<usize>, // indexed 1..=c; index 0 unused
    fairlet: usize,
}

impl Instance {
    pub fn new(
        rows: Vec<Vec<Entry>>,
        coloring: Vec<Color>,
        domain: usize,
        k: u64,
        r: usize,
    ) -> Result<Instance> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidInstance("matrix must have at least one row".into()));
        }
        if coloring.len() != m {
            return Err(Error::InvalidInstance(format!(
                "coloring has {} entries but the matrix has {} rows",
                coloring.len(),
                m
            )));
        }
        if domain == 0 || domain > Entry::MAX as usize + 1 {
            return Err(Error::InvalidInstance(format!("unsupported domain size {domain}")));
        }
        if r == 0 {
            return Err(Error::InvalidInstance("r must be positive".into()));
        }
        let n = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "row {} has length {} but row 0 has length {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            if let Some(&v) = row.iter().find(|&&v| v as usize >= domain) {
                return Err(Error::InvalidInstance(format!(
                    "entry {} in row {} outside domain 0..{}",
                    v,
                    i + 1,
                    domain
                )));
            }
        }
        let c = *coloring.iter().max().unwrap();
        if coloring.iter().any(|&z| z == 0) {
            return Err(Error::InvalidInstance("colors are 1-indexed; found color 0".into()));
        }
        let mut color_counts = vec![0usize; c + 1];
        for &z in &coloring {
            color_counts[z] += 1;
        }
        if let Some(z) = (1..=c).find(|&z| color_counts[z] == 0) {
            return Err(Error::InvalidInstance(format!("color {z} of 1..={c} never occurs")));
        }
        let fairlet = fairlet_size(&coloring);
        Ok(Instance {
            rows: rows.into_iter().map(RowType).collect(),
            coloring,
            domain,
            k,
            r,
            color_counts,
            fairlet,
        })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// Domain size `p`; entries range over `0..p`.
    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn is_binary(&self) -> bool {
        self.domain <= 2
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of colors `c`.
    pub fn num_colors(&self) -> usize {
        self.color_counts.len() - 1
    }

    pub fn coloring(&self) -> &[Color] {
        &self.coloring
    }

    pub fn color(&self, row: usize) -> Color {
        self.coloring[row]
    }

    /// Occurrences of each color in `γ`, indexed `1..=c` (index 0 unused).
    pub fn color_counts(&self) -> &[usize] {
        &self.color_counts
    }

    /// Fairlet size `c̃`.
    pub fn fairlet_size(&self) -> usize {
        self.fairlet
    }

    pub fn rows(&self) -> &[RowType] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &RowType {
        &self.rows[i]
    }

    /// Distinct types of the rows, sorted lexicographically.
    pub fn types(&self) -> Vec<RowType> {
        let mut ts: Vec<RowType> = self.rows.to_vec();
        ts.sort();
        ts.dedup();
        ts
    }

    /// Number of distinct rows `dr(M)`.
    pub fn distinct_rows(&self) -> usize {
        self.types().len()
    }

    /// Row indices of each cluster of `M`, keyed by type.
    pub fn clusters(&self) -> Vec<(RowType, Vec<usize>)> {
        let mut map: std::collections::BTreeMap<RowType, Vec<usize>> = Default::default();
        for (i, t) in self.rows.iter().enumerate() {
            map.entry(t.clone()).or_default().push(i);
        }
        map.into_iter().collect()
    }

    /// Whether a set of row counts per color (indexed `1..=c`) of total size
    /// `size` witnesses the color distribution of `γ`. The empty set is fair.
    pub fn is_fair_counts(&self, counts: &[usize], size: usize) -> bool {
        debug_assert_eq!(counts.len(), self.color_counts.len());
        (1..counts.len()).all(|z| counts[z] * self.m() == self.color_counts[z] * size)
    }

    /// Whether the given set of row indices is fair w.r.t. `γ`.
    pub fn is_fair_cluster(&self, cluster_rows: &[usize]) -> bool {
        let mut counts = vec![0usize; self.color_counts.len()];
        for &i in cluster_rows {
            counts[self.coloring[i]] += 1;
        }
        self.is_fair_counts(&counts, cluster_rows.len())
    }

    /// The types of `M` whose (nonempty) cluster is unfair, sorted.
    pub fn unfair_types(&self) -> Vec<RowType> {
        self.clusters()
            .into_iter()
            .filter(|(_, rows)| !self.is_fair_cluster(rows))
            .map(|(t, _)| t)
            .collect()
    }

    /// Whether the type's cluster in `M` is empty or fair.
    pub fn is_fair_type(&self, t: &RowType) -> bool {
        let rows: Vec<usize> = (0..self.m()).filter(|&i| self.rows[i] == *t).collect();
        self.is_fair_cluster(&rows)
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> u64 {
        self.rows.iter().flat_map(|r| r.values()).filter(|&&v| v != 0).count() as u64
    }

    /// Same matrix and coloring under different budgets.
    pub fn with_budgets(&self, k: u64, r: usize) -> Instance {
        let mut inst = self.clone();
        inst.k = k;
        inst.r = r;
        inst
    }
}
