//! Build the multicolored-clique reduction instance for a small graph,
//! audit its per-type structure, verify the planted-clique witness at
//! exactly the budget, and stream the matrix through a byte counter.
//!
//! ```text
//! cargo run --release --example clique_reduction
//! ```

use fdmc::hamming;
use fdmc::reduction::{
    budgets, build_clique_witness, planted_clique_graph, reduce_from_multicolored_clique,
    stream_instance, verify_clique_witness, TypeKind,
};

struct ByteCounter(u64);

impl std::io::Write for ByteCounter {
    fn write(&mut self, data: &[u8]) -> std::io::Result<usize> {
        self.0 += data.len() as u64;
        Ok(data.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

fn main() -> fdmc::Result<()> {
    let q = 4;
    let (y, k) = budgets(q);
    println!("q = {q}: y = {y}, budget k = {k}");

    let graph = planted_clique_graph(q, 4, 17);
    let meta = reduce_from_multicolored_clique(&graph)?;
    println!(
        "reduction: m = {} rows, n = {} columns, {} types, {} colors",
        meta.m,
        meta.n,
        meta.types.len(),
        meta.num_colors
    );

    // Spot-check two of the required pairwise distances.
    let va = meta.type_index(&TypeKind::Vertex { a: 0 }).unwrap();
    let vb = meta.type_index(&TypeKind::Vertex { a: 1 }).unwrap();
    let edge01 = meta.type_index(&TypeKind::Edge { a: 0, b: 1 }).unwrap();
    println!(
        "distance V_1 to E_12: {} (= y + 1 = {})",
        hamming(&meta.types[va].row, &meta.types[edge01].row)?,
        y + 1
    );
    let _ = vb;

    let witness = build_clique_witness(&meta, &(0..q).collect::<Vec<_>>())?;
    verify_clique_witness(&meta, &witness)?;
    println!(
        "planted clique witness: {} row moves, exactly {} edits",
        witness.moves.len(),
        witness.edit_count
    );

    let mut sink = ByteCounter(0);
    let rows = stream_instance(&meta, &mut sink)?;
    println!("streamed {} rows / {:.1} MiB without materializing the matrix", rows, sink.0 as f64 / (1024.0 * 1024.0));
    Ok(())
}
