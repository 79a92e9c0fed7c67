//! On-disk formats: JSON instance and solution documents (bit-exact round
//! trips), plus a compact whitespace matrix format accepted on input and
//! used for streamed generator output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Entry, Instance, RowType};
use crate::solution::Solution;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl InstanceMeta {
    fn is_empty(&self) -> bool {
        self.seed.is_none() && self.generator.is_none() && self.notes.is_none()
    }
}

/// The canonical instance document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub k: u64,
    pub r: usize,
    pub rows: Vec<Vec<Entry>>,
    pub colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, meta: Option<InstanceMeta>) -> InstanceFile {
        InstanceFile {
            m: inst.m(),
            n: inst.n(),
            p: inst.domain(),
            k: inst.k(),
            r: inst.r(),
            rows: inst.rows().iter().map(|r| r.values().to_vec()).collect(),
            colors: inst.coloring().to_vec(),
            meta: meta.filter(|m| !m.is_empty()),
        }
    }

    pub fn into_instance(self) -> Result<Instance> {
        if self.rows.len() != self.m || self.colors.len() != self.m {
            return Err(Error::InvalidInstance(
                "m does not match the row or color count".into(),
            ));
        }
        if self.m > 0 && self.rows[0].len() != self.n {
            return Err(Error::InvalidInstance("n does not match the row length".into()));
        }
        Instance::new(self.rows, self.colors, self.p, self.k, self.r)
    }
}

pub fn instance_to_string(inst: &Instance, meta: Option<InstanceMeta>) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(inst, meta))
        .expect("instances serialize");
    s.push('\n');
    s
}

/// Accepts the JSON document or the compact whitespace format.
pub fn instance_from_str(text: &str) -> Result<Instance> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance JSON: {e}")))?;
        file.into_instance()
    } else {
        instance_from_compact(text)
    }
}

/// Compact format:
///
/// ```text
/// # comment
/// m n p k r
/// <colors: m integers on one line>
/// <m row lines of n integers>
/// ```
pub fn instance_from_compact(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header: {header}"))))
        .collect::<Result<_>>()?;
    if nums.len() != 5 {
        return Err(Error::Parse("header must be: m n p k r".into()));
    }
    let (m, n, p, k, r) =
        (nums[0] as usize, nums[1] as usize, nums[2] as usize, nums[3], nums[4] as usize);

    let colors_line = lines.next().ok_or_else(|| Error::Parse("missing colors line".into()))?;
    let colors: Vec<usize> = colors_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse("bad color".into())))
        .collect::<Result<_>>()?;
    if colors.len() != m {
        return Err(Error::Parse(format!("expected {m} colors, got {}", colors.len())));
    }

    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| Error::Parse("missing matrix row".into()))?;
        let row: Vec<Entry> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse("bad entry".into())))
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!("expected {n} entries, got {}", row.len())));
        }
        rows.push(row);
    }
    Instance::new(rows, colors, p, k, r)
}

pub fn save_instance(path: &Path, inst: &Instance, meta: Option<InstanceMeta>) -> Result<()> {
    std::fs::write(path, instance_to_string(inst, meta))?;
    Ok(())
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    instance_from_str(&std::fs::read_to_string(path)?)
}

/// Solution document; derived fields are recomputed and cross-checked on load.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SolutionFile {
    pub edited_rows: Vec<Vec<Entry>>,
    pub cluster_of: Vec<usize>,
    pub edit_count: u64,
    pub distinct_types: usize,
}

impl SolutionFile {
    pub fn from_solution(sol: &Solution) -> SolutionFile {
        SolutionFile {
            edited_rows: sol.edited_rows().iter().map(|r| r.values().to_vec()).collect(),
            cluster_of: sol.cluster_of().to_vec(),
            edit_count: sol.edit_count(),
            distinct_types: sol.distinct_types(),
        }
    }

    pub fn into_solution(self, inst: &Instance) -> Result<Solution> {
        let sol = Solution::from_rows(inst, self.edited_rows.into_iter().map(RowType).collect())?;
        if sol.edit_count() != self.edit_count
            || sol.distinct_types() != self.distinct_types
            || sol.cluster_of() != self.cluster_of
        {
            return Err(Error::InvalidInput(
                "solution file metadata does not match its rows".into(),
            ));
        }
        Ok(sol)
    }
}

pub fn solution_to_string(sol: &Solution) -> String {
    let mut s =
        serde_json::to_string_pretty(&SolutionFile::from_solution(sol)).expect("serializes");
    s.push('\n');
    s
}

pub fn save_solution(path: &Path, sol: &Solution) -> Result<()> {
    std::fs::write(path, solution_to_string(sol))?;
    Ok(())
}

pub fn load_solution(path: &Path, inst: &Instance) -> Result<Solution> {
    let text = std::fs::read_to_string(path)?;
    let file: SolutionFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("solution JSON: {e}")))?;
    file.into_solution(inst)
}

/// One solver run, reported as machine-readable JSON on stdout.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    /// YES / NO / UNRESOLVED
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_types: Option<usize>,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counters: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<String>,
}
