//! Generate random and planted instances, write them to disk, and read them
//! back bit-exactly.
//!
//! ```text
//! cargo run --example generate_instances [dir]
//! ```

use fdmc::generators::{gen_planted, gen_random, PlantedConfig};
use fdmc::io::{instance_to_string, load_instance, save_instance, save_solution, InstanceMeta};
use fdmc::oracle::solve_by_partitions;
use fdmc::verify_solution;

fn main() -> fdmc::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "target/instances".into());
    std::fs::create_dir_all(&dir)?;

    let random = gen_random(6, 3, 2, &[3, 3], 2, 2, 31)?;
    let path = std::path::Path::new(&dir).join("random.json");
    let meta = InstanceMeta { seed: Some(31), generator: Some("random".into()), notes: None };
    save_instance(&path, &random, Some(meta.clone()))?;
    let back = load_instance(&path)?;
    assert_eq!(back, random);
    assert_eq!(instance_to_string(&back, Some(meta.clone())), instance_to_string(&random, Some(meta)));
    println!("random instance round-trips bit-exactly: {}", path.display());

    let config = PlantedConfig {
        n: 4,
        domain: 2,
        cluster_fairlets: vec![2, 1],
        fairlet_profile: vec![1, 1],
        noise_edits: 2,
        seed: 8,
    };
    let (inst, planted) = gen_planted(&config)?;
    let ipath = std::path::Path::new(&dir).join("planted.json");
    let spath = std::path::Path::new(&dir).join("planted_solution.json");
    save_instance(&ipath, &inst, None)?;
    save_solution(&spath, &planted)?;
    assert!(verify_solution(&inst, &planted)?.feasible());
    println!(
        "planted instance: optimum <= {} by construction, oracle says {:?}",
        config.noise_edits,
        solve_by_partitions(&inst)?.optimum_edits
    );
    println!("wrote {} and {}", ipath.display(), spath.display());
    Ok(())
}
