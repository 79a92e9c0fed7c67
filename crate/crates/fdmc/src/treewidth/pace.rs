//! PACE-2017 `.td` tree-decomposition format.
//!
//! ```text
//! c <comments>
//! s td <num_bags> <max_bag_size> <num_vertices>
//! b <bag_id> <vertex> ...
//! <bag_id> <bag_id>
//! ```
//!
//! Bag ids and vertices are 1-based; vertices are row indices.

use crate::error::{Error, Result};
use crate::treewidth::decomposition::TreeDecomposition;

pub fn parse_td(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_whitespace();
        let first = it.next().unwrap();
        match first {
            "s" => {
                if header.is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate s-line", lineno + 1)));
                }
                if it.next() != Some("td") {
                    return Err(Error::Parse(format!("line {}: expected 's td'", lineno + 1)));
                }
                let nums: Vec<usize> = it
                    .map(|t| t.parse().map_err(|_| Error::Parse(format!("line {}: bad number", lineno + 1))))
                    .collect::<Result<_>>()?;
                if nums.len() != 3 {
                    return Err(Error::Parse(format!(
                        "line {}: s-line needs <bags> <width+1> <n>",
                        lineno + 1
                    )));
                }
                header = Some((nums[0], nums[1], nums[2]));
                bags = vec![None; nums[0]];
            }
            "b" => {
                let (num_bags, _, n) = header
                    .ok_or_else(|| Error::Parse(format!("line {}: b-line before s-line", lineno + 1)))?;
                let id: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad bag id", lineno + 1)))?;
                if id == 0 || id > num_bags {
                    return Err(Error::Parse(format!("line {}: bag id {id} out of range", lineno + 1)));
                }
                let mut vs = Vec::new();
                for t in it {
                    let v: usize = t
                        .parse()
                        .map_err(|_| Error::Parse(format!("line {}: bad vertex", lineno + 1)))?;
                    if v == 0 || v > n {
                        return Err(Error::Parse(format!(
                            "line {}: vertex {v} out of range 1..={n}",
                            lineno + 1
                        )));
                    }
                    vs.push(v - 1);
                }
                vs.sort_unstable();
                vs.dedup();
                if bags[id - 1].is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate bag {id}", lineno + 1)));
                }
                bags[id - 1] = Some(vs);
            }
            _ => {
                let (num_bags, _, _) = header
                    .ok_or_else(|| Error::Parse(format!("line {}: edge before s-line", lineno + 1)))?;
                let u: usize = first
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad edge endpoint", lineno + 1)))?;
                let v: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: bad edge endpoint", lineno + 1)))?;
                if u == 0 || v == 0 || u > num_bags || v > num_bags {
                    return Err(Error::Parse(format!(
                        "line {}: edge ({u}, {v}) out of range",
                        lineno + 1
                    )));
                }
                edges.push((u - 1, v - 1));
            }
        }
    }

    let (num_bags, _, _) =
        header.ok_or_else(|| Error::Parse("missing 's td' line".into()))?;
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::Parse(format!("bag {} never declared", i + 1))))
        .collect::<Result<_>>()?;
    debug_assert_eq!(bags.len(), num_bags);
    Ok(TreeDecomposition { bags, edges })
}

pub fn write_td(td: &TreeDecomposition, num_vertices: usize) -> String {
    let mut out = String::new();
    let width_plus_1 = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    out.push_str(&format!("s td {} {} {}\n", td.bags.len(), width_plus_1, num_vertices));
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for &v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(u, v) in &td.edges {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}
