//! Exact solver for binary instances parameterized by the treewidth of the
//! primal graph: primal-graph construction, (nice) tree decomposition
//! tooling, the large-fairlet shortcut, and the candidate DP.

pub mod decomposition;
pub mod dp;
pub mod pace;
pub mod primal;

pub use decomposition::{
    decompose, NiceTreeDecomposition, NodeKind, TreeDecomposition,
};
pub use dp::{col_cost, DpOptions, DpStats};
pub use pace::{parse_td, write_td};
pub use primal::{build_primal_graph, PrimalGraph};

use crate::error::{Error, Result};
use crate::instance::{Instance, RowType};
use crate::oracle::OracleResult;
use crate::solution::Solution;

/// If `2·tw + 2 ≤ c̃`, the instance is solvable iff `k` covers the number of
/// nonzero entries; the all-zero matrix is then a witness. Returns `None`
/// when the bound does not apply.
pub fn trivial_case(inst: &Instance, tw: usize) -> Option<OracleResult> {
    if !inst.is_binary() || 2 * tw + 2 > inst.fairlet_size() {
        return None;
    }
    let nnz = inst.nnz();
    if nnz <= inst.k() {
        let zero = RowType(vec![0; inst.n()]);
        let witness = Solution::from_rows(inst, vec![zero; inst.m()]).expect("valid rows");
        Some(OracleResult::yes(nnz, witness))
    } else {
        Some(OracleResult::no(Some(nnz)))
    }
}

/// Solve by the treewidth DP with a decomposition computed by min-fill
/// (exact elimination search on small graphs).
pub fn solve_treewidth_auto(inst: &Instance) -> Result<OracleResult> {
    let g = build_primal_graph(inst)?;
    let nice = decompose(&g, None, g.n <= 16)?;
    solve_treewidth(inst, &nice)
}

pub fn solve_treewidth(inst: &Instance, td: &NiceTreeDecomposition) -> Result<OracleResult> {
    solve_treewidth_with(inst, td, DpOptions::default())
}

pub fn solve_treewidth_with(
    inst: &Instance,
    td: &NiceTreeDecomposition,
    opts: DpOptions,
) -> Result<OracleResult> {
    solve_treewidth_stats(inst, td, opts).map(|(res, _)| res)
}

/// Exact solve on a binary instance, with the DP state counters (absent
/// when the large-fairlet shortcut answered). The DP never prunes on `h`,
/// so the true optimum is reported even when it exceeds `k`.
pub fn solve_treewidth_stats(
    inst: &Instance,
    td: &NiceTreeDecomposition,
    opts: DpOptions,
) -> Result<(OracleResult, Option<DpStats>)> {
    if !inst.is_binary() {
        return Err(Error::NotApplicable(format!(
            "the treewidth solver handles binary matrices; domain is {}",
            inst.domain()
        )));
    }
    let g = build_primal_graph(inst)?;
    td.validate(&g)?;

    // All-zero columns carry no cost and no primal edges; strip them and
    // re-append zeros to the witness afterwards.
    let nonzero_cols: Vec<usize> = (0..inst.n())
        .filter(|&j| (0..inst.m()).any(|i| inst.row(i).values()[j] != 0))
        .collect();
    let stripped = if nonzero_cols.len() == inst.n() {
        inst.clone()
    } else {
        let rows = inst
            .rows()
            .iter()
            .map(|r| nonzero_cols.iter().map(|&j| r.values()[j]).collect())
            .collect();
        Instance::new(rows, inst.coloring().to_vec(), inst.domain(), inst.k(), inst.r())?
    };

    let w = td.width() + 1;
    if let Some(res) = trivial_case(&stripped, w - 1) {
        return Ok((restore_columns(inst, &nonzero_cols, res), None));
    }

    let outcome = dp::run_dp(&stripped, td, opts)?;
    let res = if outcome.optimum <= inst.k() {
        OracleResult::yes(outcome.optimum, outcome.witness)
    } else {
        OracleResult::no(Some(outcome.optimum))
    };
    Ok((restore_columns(inst, &nonzero_cols, res), Some(outcome.stats)))
}

fn restore_columns(inst: &Instance, nonzero_cols: &[usize], res: OracleResult) -> OracleResult {
    if nonzero_cols.len() == inst.n() {
        return res;
    }
    let witness = res.witness.map(|sol| {
        let rows: Vec<RowType> = sol
            .edited_rows()
            .iter()
            .map(|r| {
                let mut full = vec![0; inst.n()];
                for (pos, &j) in nonzero_cols.iter().enumerate() {
                    full[j] = r.values()[pos];
                }
                RowType(full)
            })
            .collect();
        Solution::from_rows(inst, rows).expect("restored rows are valid")
    });
    OracleResult { status: res.status, optimum_edits: res.optimum_edits, witness }
}
