//! The treewidth pipeline end to end: primal graph, (nice) tree
//! decomposition, PACE .td export/import, the shortcut for large fairlet
//! sizes, and the dynamic program.
//!
//! ```text
//! cargo run --example treewidth_solver
//! ```

use fdmc::treewidth::{
    build_primal_graph, decompose, parse_td, solve_treewidth, trivial_case, write_td,
};
use fdmc::{verify_solution, Instance};

fn main() -> fdmc::Result<()> {
    // A path-like binary matrix: consecutive rows share a 1-column.
    let inst = Instance::new(
        vec![
            vec![1, 0, 0, 0, 0],
            vec![1, 1, 0, 0, 0],
            vec![0, 1, 1, 0, 0],
            vec![0, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1],
        ],
        vec![1, 2, 2, 1, 1, 2],
        2,
        4,
        2,
    )?;

    let g = build_primal_graph(&inst)?;
    println!("primal graph: {} vertices, {} edges", g.n, g.edges().len());

    let nice = decompose(&g, None, true)?;
    println!("nice decomposition: width {}, {} nodes", nice.width(), nice.nodes.len());

    // Round-trip through the PACE text format.
    let raw = nice.to_raw();
    let text = write_td(&raw, g.n);
    let reparsed = parse_td(&text)?;
    let nice2 = decompose(&g, Some(&reparsed), false)?;
    println!("PACE round-trip: width {} preserved", nice2.width());

    match trivial_case(&inst, nice.width()) {
        Some(res) => println!("large-fairlet shortcut applies: {:?}", res.status),
        None => println!("large-fairlet shortcut does not apply (2*tw+2 > fairlet size)"),
    }

    let res = solve_treewidth(&inst, &nice)?;
    println!("DP answer: {:?}, optimum {:?}", res.status, res.optimum_edits);
    if let Some(witness) = res.witness {
        println!("witness rows: {:?}", witness.edited_rows());
        assert!(verify_solution(&inst, &witness)?.feasible());
    }
    Ok(())
}
