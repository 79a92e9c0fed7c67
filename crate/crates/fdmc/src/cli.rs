//! Command-line front end: instance I/O, solver dispatch, verification,
//! generation, and a benchmark harness emitting CSV tables.
//!
//! Exit codes: 0 = feasible witness written, 1 = No, 2 = invalid input,
//! 3 = algorithm not applicable, 4 = capacity cap hit / unresolved.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::approx::{solve_approx_with, ApproxOptions, ApproxOutcome, CodingOptions};
use crate::error::Error;
use crate::generators::{gen_planted, gen_random, PlantedConfig};
use crate::instance::Instance;
use crate::io::{
    load_instance, load_solution, save_instance, save_solution, InstanceMeta, RunReport,
};
use crate::k_plus_r::{solve_k_plus_r_counting, PatternLimits};
use crate::large_fairlet::solve_large_fairlet;
use crate::oracle::{solve_by_partitions_with, OracleLimits, OracleResult, Status};
use crate::reduction::{
    build_clique_witness, reduce_from_multicolored_clique, stream_instance, McqGraph,
};
use crate::solution::{verify_solution, Solution};
use crate::treewidth::{build_primal_graph, decompose, parse_td, DpOptions};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

/// Environment variable overriding the default search caps.
pub const CAP_ENV: &str = "FDMC_CAP";

#[derive(Parser, Debug)]
#[command(name = "fdmc", about = "Fair discrete means clustering by matrix editing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and write the witness on success.
    Solve(SolveArgs),
    /// Verify a solution file against an instance.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a suite of instances across solvers and emit a CSV table.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Bruteforce,
    LargeFairlet,
    KPlusR,
    Approx,
    Treewidth,
}

impl Algo {
    fn name(&self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Bruteforce => "bruteforce",
            Algo::LargeFairlet => "large-fairlet",
            Algo::KPlusR => "k-plus-r",
            Algo::Approx => "approx",
            Algo::Treewidth => "treewidth",
        }
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// External tree decomposition in PACE .td format.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the derived number of random codings.
    #[arg(long)]
    trials: Option<usize>,
    /// Override the default search caps.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum GenCommand {
    /// Uniform random instance with fixed per-color counts.
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Comma-separated color counts, e.g. 2,2.
        #[arg(long = "color-counts", value_delimiter = ',')]
        color_counts: Vec<usize>,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fair planted instance plus its known solution.
    Planted {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Fairlets per cluster, comma-separated, e.g. 2,1.
        #[arg(long = "cluster-fairlets", value_delimiter = ',')]
        cluster_fairlets: Vec<usize>,
        /// Rows per color in one fairlet, e.g. 1,1.
        #[arg(long = "fairlet-profile", value_delimiter = ',')]
        fairlet_profile: Vec<usize>,
        #[arg(long)]
        noise: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the planted solution next to the instance.
        #[arg(long)]
        solution_out: Option<PathBuf>,
    },
    /// The multicolored-clique reduction, streamed in the compact format.
    CliqueReduction {
        /// Properly colored source graph (edge list + colors line).
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Verify a planted clique (comma-separated 1-based vertices) and
        /// report the witness budget.
        #[arg(long, value_delimiter = ',')]
        clique: Option<Vec<usize>>,
    },
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    /// Comma-separated algorithm list.
    #[arg(long, value_delimiter = ',')]
    algos: Vec<Algo>,
    #[arg(long)]
    csv: PathBuf,
    /// Per-run timeout in seconds.
    #[arg(long, default_value_t = 60)]
    timeout: u64,
    /// Zero the seconds column and run sequentially, for byte-identical output.
    #[arg(long, default_value_t = false)]
    deterministic: bool,
}

pub fn run() -> i32 {
    run_with(std::env::args())
}

pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exits
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Verify { input, solution } => cmd_verify(&input, &solution),
        Command::Gen(gen) => cmd_gen(gen),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn report_error(e: &Error) -> i32 {
    eprintln!("error: {e}");
    match e {
        Error::NotApplicable(_) => EXIT_NOT_APPLICABLE,
        Error::Capacity(_) => EXIT_CAPACITY,
        _ => EXIT_INVALID,
    }
}

fn default_cap(cli_cap: Option<u64>) -> Option<u64> {
    cli_cap.or_else(|| std::env::var(CAP_ENV).ok().and_then(|v| v.parse().ok()))
}

enum SolveOutcome {
    Yes(Solution, Option<u64>),
    No(Option<u64>),
    Unresolved(String),
}

#[allow(clippy::too_many_arguments)]
fn dispatch(
    algo: Algo,
    inst: &Instance,
    td_path: Option<&Path>,
    seed: u64,
    trials: Option<usize>,
    cap: Option<u64>,
    counters: &mut BTreeMap<String, u64>,
) -> Result<SolveOutcome, Error> {
    match algo {
        Algo::Auto => {
            let identity = Solution::identity(inst);
            if verify_solution(inst, &identity)?.feasible() {
                return Ok(SolveOutcome::Yes(identity, Some(0)));
            }
            if inst.fairlet_size() as u64 > inst.k() {
                return from_oracle(solve_large_fairlet(inst));
            }
            let dr = inst.distinct_rows();
            if dr as u64 > inst.k() + inst.r() as u64 {
                return Ok(SolveOutcome::No(None));
            }
            if inst.k() + (inst.r() as u64) <= 8 {
                return dispatch(Algo::KPlusR, inst, td_path, seed, trials, cap, counters);
            }
            if inst.is_binary() {
                let g = build_primal_graph(inst)?;
                let nice = decompose(&g, None, g.n <= 16)?;
                if nice.width() <= 8 {
                    return run_treewidth(inst, &nice, cap, counters);
                }
            }
            dispatch(Algo::Approx, inst, td_path, seed, trials, cap, counters)
        }
        Algo::Bruteforce => {
            let mut limits = OracleLimits::default();
            if let Some(c) = cap {
                limits.max_candidates = c;
            }
            from_oracle(solve_by_partitions_with(inst, limits))
        }
        Algo::LargeFairlet => from_oracle(solve_large_fairlet(inst)),
        Algo::KPlusR => {
            let mut limits = PatternLimits::default();
            if let Some(c) = cap {
                limits.max_patterns = c;
            }
            let (res, patterns) = solve_k_plus_r_counting(inst, limits)?;
            counters.insert("patterns".into(), patterns);
            from_oracle(Ok(res))
        }
        Algo::Approx => {
            let mut opts = ApproxOptions {
                coding: CodingOptions { seed, trials, ..Default::default() },
                ..Default::default()
            };
            if let Some(c) = cap {
                opts.template_cap = c;
                opts.assign.max_assignments = c;
            }
            match solve_approx_with(inst, opts)? {
                ApproxOutcome::Feasible(sol) => Ok(SolveOutcome::Yes(sol, None)),
                ApproxOutcome::No => Ok(SolveOutcome::No(None)),
                ApproxOutcome::Unresolved(reason) => Ok(SolveOutcome::Unresolved(reason)),
            }
        }
        Algo::Treewidth => {
            let g = build_primal_graph(inst)?;
            let nice = match td_path {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let raw = parse_td(&text)?;
                    decompose(&g, Some(&raw), false)?
                }
                None => decompose(&g, None, g.n <= 16)?,
            };
            run_treewidth(inst, &nice, cap, counters)
        }
    }
}

fn run_treewidth(
    inst: &Instance,
    nice: &crate::treewidth::NiceTreeDecomposition,
    cap: Option<u64>,
    counters: &mut BTreeMap<String, u64>,
) -> Result<SolveOutcome, Error> {
    eprintln!("treewidth: decomposition of width {}", nice.width());
    counters.insert("width".into(), nice.width() as u64);
    let mut opts = DpOptions::default();
    if let Some(c) = cap {
        opts.state_cap = c as usize;
    }
    let (res, stats) = crate::treewidth::solve_treewidth_stats(inst, nice, opts)?;
    if let Some(stats) = stats {
        counters.insert("dp_states".into(), stats.states_total);
        counters.insert("dp_states_peak".into(), stats.max_states_per_node as u64);
    }
    from_oracle(Ok(res))
}

fn from_oracle(res: Result<OracleResult, Error>) -> Result<SolveOutcome, Error> {
    let res = res?;
    Ok(match res.status {
        Status::Yes => {
            SolveOutcome::Yes(res.witness.expect("yes carries a witness"), res.optimum_edits)
        }
        Status::No => SolveOutcome::No(res.optimum_edits),
    })
}

fn cmd_solve(args: SolveArgs) -> i32 {
    let inst = match load_instance(&args.input) {
        Ok(inst) => inst,
        Err(e) => return report_error(&e),
    };
    let started = Instant::now();
    let cap = default_cap(args.cap);
    let mut counters = BTreeMap::new();
    let outcome =
        dispatch(args.algo, &inst, args.td.as_deref(), args.seed, args.trials, cap, &mut counters);
    let seconds = started.elapsed().as_secs_f64();
    match outcome {
        Ok(SolveOutcome::Yes(sol, optimum)) => {
            if let Err(e) = save_solution(&args.out, &sol) {
                return report_error(&e);
            }
            // Re-verify the witness from disk before claiming success.
            let reloaded = load_solution(&args.out, &inst)
                .and_then(|sol| verify_solution(&inst, &sol).map(|v| (sol, v)));
            match reloaded {
                Ok((sol, verdict)) if verdict.feasible() => {
                    let report = RunReport {
                        algorithm: args.algo.name().into(),
                        status: "YES".into(),
                        edits: Some(sol.edit_count()),
                        optimum,
                        distinct_types: Some(sol.distinct_types()),
                        seconds,
                        counters,
                        witness_path: Some(args.out.display().to_string()),
                    };
                    println!("{}", serde_json::to_string(&report).unwrap());
                    EXIT_YES
                }
                Ok(_) => {
                    eprintln!("error: witness re-verification failed");
                    EXIT_INVALID
                }
                Err(e) => report_error(&e),
            }
        }
        Ok(SolveOutcome::No(optimum)) => {
            let report = RunReport {
                algorithm: args.algo.name().into(),
                status: "NO".into(),
                edits: None,
                optimum,
                distinct_types: None,
                seconds,
                counters,
                witness_path: None,
            };
            println!("{}", serde_json::to_string(&report).unwrap());
            EXIT_NO
        }
        Ok(SolveOutcome::Unresolved(reason)) => {
            eprintln!("unresolved: {reason}");
            let report = RunReport {
                algorithm: args.algo.name().into(),
                status: "UNRESOLVED".into(),
                edits: None,
                optimum: None,
                distinct_types: None,
                seconds,
                counters,
                witness_path: None,
            };
            println!("{}", serde_json::to_string(&report).unwrap());
            EXIT_CAPACITY
        }
        Err(e) => report_error(&e),
    }
}

fn cmd_verify(input: &Path, solution: &Path) -> i32 {
    let inst = match load_instance(input) {
        Ok(inst) => inst,
        Err(e) => return report_error(&e),
    };
    let sol = match load_solution(solution, &inst) {
        Ok(sol) => sol,
        Err(e) => return report_error(&e),
    };
    match verify_solution(&inst, &sol) {
        Ok(verdict) if verdict.feasible() => {
            println!("feasible: {} edits, {} distinct rows", sol.edit_count(), sol.distinct_types());
            EXIT_YES
        }
        Ok(verdict) => {
            for v in &verdict.violations {
                println!("violation: {v}");
            }
            EXIT_NO
        }
        Err(e) => report_error(&e),
    }
}

fn cmd_gen(gen: GenCommand) -> i32 {
    match gen {
        GenCommand::Random { m, n, p, color_counts, k, r, seed, out } => {
            let counts = if color_counts.is_empty() { vec![m] } else { color_counts };
            match gen_random(m, n, p, &counts, k, r, seed) {
                Ok(inst) => {
                    let meta = InstanceMeta {
                        seed: Some(seed),
                        generator: Some("random".into()),
                        notes: None,
                    };
                    match save_instance(&out, &inst, Some(meta)) {
                        Ok(()) => EXIT_YES,
                        Err(e) => report_error(&e),
                    }
                }
                Err(e) => report_error(&e),
            }
        }
        GenCommand::Planted {
            n,
            p,
            cluster_fairlets,
            fairlet_profile,
            noise,
            seed,
            out,
            solution_out,
        } => {
            let config = PlantedConfig {
                n,
                domain: p,
                cluster_fairlets,
                fairlet_profile,
                noise_edits: noise,
                seed,
            };
            match gen_planted(&config) {
                Ok((inst, sol)) => {
                    let meta = InstanceMeta {
                        seed: Some(seed),
                        generator: Some("planted".into()),
                        notes: None,
                    };
                    if let Err(e) = save_instance(&out, &inst, Some(meta)) {
                        return report_error(&e);
                    }
                    if let Some(path) = solution_out {
                        if let Err(e) = save_solution(&path, &sol) {
                            return report_error(&e);
                        }
                    }
                    EXIT_YES
                }
                Err(e) => report_error(&e),
            }
        }
        GenCommand::CliqueReduction { graph, out, clique } => {
            let text = match std::fs::read_to_string(&graph) {
                Ok(t) => t,
                Err(e) => return report_error(&e.into()),
            };
            let parsed = match McqGraph::parse(&text) {
                Ok(g) => g,
                Err(e) => return report_error(&e),
            };
            let meta = match reduce_from_multicolored_clique(&parsed) {
                Ok(meta) => meta,
                Err(e) => return report_error(&e),
            };
            eprintln!(
                "reduction: q={} y={} k={} m={} n={} types={}",
                meta.q,
                meta.y,
                meta.k,
                meta.m,
                meta.n,
                meta.types.len()
            );
            if let Some(raw) = clique {
                let vertices: Vec<usize> = raw.iter().map(|v| v - 1).collect();
                match build_clique_witness(&meta, &vertices) {
                    Ok(witness) => {
                        eprintln!("clique witness verified at exactly {} edits", witness.edit_count)
                    }
                    Err(e) => return report_error(&e),
                }
            }
            let file = match std::fs::File::create(&out) {
                Ok(f) => f,
                Err(e) => return report_error(&e.into()),
            };
            match stream_instance(&meta, std::io::BufWriter::new(file)) {
                Ok(rows) => {
                    eprintln!("streamed {rows} rows to {}", out.display());
                    EXIT_YES
                }
                Err(e) => report_error(&e),
            }
        }
    }
}

fn cmd_bench(args: BenchArgs) -> i32 {
    let mut files: Vec<PathBuf> = match std::fs::read_dir(&args.suite) {
        Ok(dir) => dir
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read suite directory: {e}");
            return EXIT_INVALID;
        }
    };
    files.sort();
    let algos = if args.algos.is_empty() { vec![Algo::Auto] } else { args.algos.clone() };

    // (instance name, instance, algo, OPT) tasks in deterministic suite order.
    let mut tasks: Vec<(String, Instance, Algo, Option<u64>)> = Vec::new();
    for file in &files {
        let inst = match load_instance(file) {
            Ok(inst) => inst,
            Err(e) => {
                eprintln!("skipping {}: {e}", file.display());
                continue;
            }
        };
        // The partition oracle supplies OPT where it can run.
        let opt = if inst.m() <= OracleLimits::default().max_partition_rows {
            solve_by_partitions_with(&inst, OracleLimits::default())
                .ok()
                .and_then(|r| r.optimum_edits)
        } else {
            None
        };
        let name = file.file_name().unwrap().to_string_lossy().to_string();
        for algo in &algos {
            tasks.push((name.clone(), inst.clone(), *algo, opt));
        }
    }

    // Worker pool over the tasks; rows are written back in task order.
    let mut rows: Vec<Option<String>> = vec![None; tasks.len()];
    if args.deterministic {
        for (slot, task) in rows.iter_mut().zip(&tasks) {
            let (name, inst, algo, opt) = task;
            *slot = Some(bench_one(name, inst, *algo, *opt, &args));
        }
    } else {
        let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(2);
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<String>>> =
            rows.iter().map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|s| {
            for _ in 0..workers.min(tasks.len().max(1)) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= tasks.len() {
                        break;
                    }
                    let (name, inst, algo, opt) = &tasks[i];
                    let row = bench_one(name, inst, *algo, *opt, &args);
                    *slots[i].lock().unwrap() = Some(row);
                });
            }
        });
        for (slot, cell) in rows.iter_mut().zip(slots) {
            *slot = cell.into_inner().unwrap();
        }
    }

    let mut csv = String::from("instance,algo,status,edits,opt,ratio,seconds,counters\n");
    for row in rows.into_iter().flatten() {
        csv.push_str(&row);
        csv.push('\n');
    }
    match std::fs::write(&args.csv, csv) {
        Ok(()) => EXIT_YES,
        Err(e) => {
            eprintln!("error: cannot write CSV: {e}");
            EXIT_INVALID
        }
    }
}

fn bench_one(name: &str, inst: &Instance, algo: Algo, opt: Option<u64>, args: &BenchArgs) -> String {
    let started = Instant::now();
    let outcome = if args.deterministic {
        let mut counters = BTreeMap::new();
        Some(dispatch(algo, inst, None, 0, None, None, &mut counters))
    } else {
        let (tx, rx) = std::sync::mpsc::channel();
        let inst = inst.clone();
        std::thread::spawn(move || {
            let mut counters = BTreeMap::new();
            let _ = tx.send(dispatch(algo, &inst, None, 0, None, None, &mut counters));
        });
        // on timeout the worker is abandoned and the run marked unresolved
        rx.recv_timeout(std::time::Duration::from_secs(args.timeout)).ok()
    };
    let seconds = if args.deterministic {
        0.0
    } else {
        started.elapsed().as_secs_f64()
    };
    let (status, edits) = match outcome {
        Some(Ok(SolveOutcome::Yes(sol, _))) => ("YES", Some(sol.edit_count())),
        Some(Ok(SolveOutcome::No(_))) => ("NO", None),
        Some(Ok(SolveOutcome::Unresolved(_))) => ("UNRESOLVED", None),
        Some(Err(_)) => ("ERROR", None),
        None => ("UNRESOLVED", None), // timeout
    };
    let ratio = match (edits, opt) {
        (Some(e), Some(o)) if o > 0 => format!("{:.4}", e as f64 / o as f64),
        (Some(_), Some(0)) => "1.0000".into(),
        _ => String::new(),
    };
    format!(
        "{name},{},{status},{},{},{ratio},{:.3},",
        algo.name(),
        edits.map(|e| e.to_string()).unwrap_or_default(),
        opt.map(|o| o.to_string()).unwrap_or_default(),
        seconds
    )
}
