//! Command-line front-end: generators, statistics, expander extraction,
//! cycle search, verification, the exhaustive detector, and the CSV
//! experiment harness.
//!
//! Exit codes: 0 success / cycle found / witness valid; 1 no cycle /
//! invalid witness / search gave up; 2 malformed input (with a
//! line-numbered message on stderr).
//!
//! All randomized commands take a mandatory `--seed`; with the same
//! inputs, flags, seed, and `--parallel 1`, every command produces
//! byte-identical output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tightcycle::expander::{extract_expander, DEFAULT_EXACT_THRESHOLD};
use tightcycle::format::{
    certificate_csv_row, parse_hypergraph, parse_sigma_path, parse_tight_cycle, parse_witness,
    serialize_hypergraph, serialize_tight_cycle, serialize_witness, CERTIFICATE_CSV_HEADER,
};
use tightcycle::hypergraph::make_r_partite;
use tightcycle::linegraph::from_hypergraph;
use tightcycle::oracle::{
    brute_force_tight_cycle_with_cap, gen_complete_multipartite, gen_full_grid,
    gen_random_rpartite, gen_star, gen_tight_cycle, validate_tight_cycle, TightCycleWitness,
    DEFAULT_ORACLE_VERTEX_CAP,
};
use tightcycle::rational::{display_rational, parse_rational, Rational};
use tightcycle::search::{
    density_increment_search, find_cycle_of_length, SearchOutcome, SearchParams,
};
use tightcycle::sigma::validate_sigma_path;
use tightcycle::{Hypergraph, LineGraph, Permutation};

const EXACT_THRESHOLD_ENV: &str = "TIGHTCYCLE_EXACT_THRESHOLD";

#[derive(Parser)]
#[command(
    name = "tightcycle",
    version,
    about = "Tight-cycle search in r-uniform hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hypergraph from a named family.
    Gen(GenArgs),
    /// Report size, blocks, density, and minimum degree of an instance.
    Stats(StatsArgs),
    /// Extract an expander subgraph and its certificate.
    ExtractExpander(ExtractArgs),
    /// Search for a tight cycle (density-increment loop, or exact length).
    FindCycle(FindCycleArgs),
    /// Check a witness file against a graph file.
    Verify(VerifyArgs),
    /// Exhaustive tight-cycle detection on small instances.
    Oracle(OracleArgs),
    /// Sweep a parameter grid and emit one CSV row per run.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
}

#[derive(Subcommand)]
enum Family {
    /// All r-subsets of {0..n} containing vertex 0.
    Star {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete r-partite with parts of size m (all m^r rainbow tuples).
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete multipartite with the given part sizes.
    Kpartite {
        #[arg(long, value_delimiter = ',')]
        parts: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The tight cycle of the given length itself.
    Cycle {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random r-partite: each rainbow tuple kept with probability p.
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Hg,
    Csv,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "hg")]
    format: OutputFormat,
}

#[derive(Args)]
struct ExtractArgs {
    file: PathBuf,
    #[arg(long, value_parser = parse_rational_arg)]
    lambda: Rational,
    #[arg(long)]
    dmin: u32,
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Option<Rational>,
    #[arg(long)]
    exact_threshold: Option<usize>,
    /// Where to write the extracted subgraph.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the certificate CSV (stdout otherwise).
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct FindCycleArgs {
    file: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Exact cycle length (must be a multiple of r); omitted runs the
    /// density-increment search.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, value_parser = parse_rational_arg)]
    lambda: Option<Rational>,
    #[arg(long)]
    dmin: Option<u32>,
    #[arg(long = "K", value_parser = parse_rational_arg)]
    k_factor: Option<Rational>,
    #[arg(long, value_parser = parse_rational_arg)]
    epsilon: Option<Rational>,
    #[arg(long)]
    exact_threshold: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    witness: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    file: PathBuf,
    /// Longest cycle length to search for (default: the vertex count).
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    exact_threshold: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, value_delimiter = ',', default_value = "4,6")]
    m_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1.0")]
    p_list: Vec<f64>,
    /// Lambda values; "auto" resolves per graph.
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    lambda_list: Vec<String>,
    #[arg(long = "k-list", value_delimiter = ',', default_value = "8,32")]
    k_list: Vec<String>,
    #[arg(long, default_value_t = 3)]
    runs_per_cell: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Record real wall-clock times; off by default so outputs stay
    /// byte-deterministic.
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Stats(args) => cmd_stats(args),
        Command::ExtractExpander(args) => cmd_extract(args),
        Command::FindCycle(args) => cmd_find_cycle(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Experiment(args) => cmd_experiment(args),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hypergraph(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn exact_threshold(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var(EXACT_THRESHOLD_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_EXACT_THRESHOLD)
}

fn require_partitioned(h: &Hypergraph, path: &Path) -> Result<LineGraph> {
    if !h.is_partitioned() {
        return Err(anyhow!(
            "{}: instance has no part labels; regenerate with a partite family \
             or run find-cycle, which partitions automatically",
            path.display()
        ));
    }
    from_hypergraph(h).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let (h, out) = match args.family {
        Family::Star { n, r, out } => (gen_star(n, r), out),
        Family::Grid { m, r, out } => (gen_full_grid(m, r), out),
        Family::Kpartite { parts, out } => (gen_complete_multipartite(&parts), out),
        Family::Cycle { len, r, out } => (gen_tight_cycle(len, r), out),
        Family::Random { m, r, p, seed, out } => (gen_random_rpartite(m, r, p, seed), out),
    };
    emit(out.as_deref(), &serialize_hypergraph(&h))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&args.file)?;
    let mut text = String::new();
    if h.is_partitioned() {
        let g = from_hypergraph(&h).map_err(|e| anyhow!("{e}"))?;
        let s = g.stats();
        match args.format {
            OutputFormat::Csv => {
                text.push_str("n,p,density,delta,edges,r\n");
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    s.num_vertices,
                    s.num_blocks,
                    display_rational(s.density),
                    s.min_degree,
                    h.edge_count(),
                    h.r()
                ));
            }
            OutputFormat::Hg => {
                text.push_str(&format!("r: {}\n", h.r()));
                text.push_str(&format!("hypergraph vertices: {}\n", h.vertex_count()));
                text.push_str(&format!("edges: {}\n", h.edge_count()));
                text.push_str(&format!("line-graph vertices: {}\n", s.num_vertices));
                text.push_str(&format!("blocks: {}\n", s.num_blocks));
                text.push_str(&format!("density: {}\n", display_rational(s.density)));
                text.push_str(&format!("min degree: {}\n", s.min_degree));
            }
        }
    } else {
        match args.format {
            OutputFormat::Csv => {
                text.push_str("n,edges,r\n");
                text.push_str(&format!(
                    "{},{},{}\n",
                    h.vertex_count(),
                    h.edge_count(),
                    h.r()
                ));
            }
            OutputFormat::Hg => {
                text.push_str(&format!("r: {}\n", h.r()));
                text.push_str(&format!("hypergraph vertices: {}\n", h.vertex_count()));
                text.push_str(&format!("edges: {}\n", h.edge_count()));
                text.push_str("parts: none (run find-cycle to partition)\n");
            }
        }
    }
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_extract(args: ExtractArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&args.file)?;
    let g = require_partitioned(&h, &args.file)?;
    if g.is_empty() {
        eprintln!("graph is empty; nothing to extract");
        return Ok(ExitCode::from(1));
    }
    let threshold = exact_threshold(args.exact_threshold);
    let d = Rational::from_integer(args.dmin as i64);
    match extract_expander(&g, args.lambda, d, threshold) {
        Ok((sub, cert)) => {
            emit(
                args.out.as_deref(),
                &serialize_hypergraph(&sub.to_hypergraph()),
            )?;
            let cert_text = format!(
                "{CERTIFICATE_CSV_HEADER}\n{}\n",
                certificate_csv_row(&sub, &cert)
            );
            match &args.cert {
                Some(path) => fs::write(path, cert_text)?,
                None => {
                    if args.out.is_some() {
                        print!("{cert_text}");
                    } else {
                        eprint!("{cert_text}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("extraction failed: {e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_find_cycle(args: FindCycleArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&args.file)?;
    let partitioned = if h.is_partitioned() {
        h
    } else {
        make_r_partite(&h, args.seed, 64)
    };
    let g = from_hypergraph(&partitioned).map_err(|e| anyhow!("{e}"))?;
    let mut params = SearchParams::new(args.seed);
    params.lambda = args.lambda;
    params.dmin = args.dmin;
    params.k_factor = args.k_factor;
    params.epsilon = args.epsilon;
    params.exact_threshold = exact_threshold(args.exact_threshold);

    let (outcome, chain) = match args.length {
        Some(len) => {
            let sigma = Permutation::identity(g.r());
            let outcome =
                find_cycle_of_length(&g, len, &params, &sigma).map_err(|e| anyhow!("{e}"))?;
            (outcome, Vec::new())
        }
        None => {
            let res = density_increment_search(&g, &params);
            (res.outcome, res.chain)
        }
    };

    for (i, step) in chain.iter().enumerate() {
        println!(
            "# chain[{i}] n={} density={} delta={}{}",
            step.n,
            display_rational(step.density),
            step.min_degree,
            if step.dense_fire.is_some() {
                " descend"
            } else {
                ""
            }
        );
    }
    match outcome {
        SearchOutcome::Cycle(c) => {
            let witness = c.to_witness(&g);
            emit(
                args.out.as_deref(),
                &serialize_tight_cycle(g.r(), &witness.vertices),
            )?;
            println!("cycle length={}", c.len());
            Ok(ExitCode::SUCCESS)
        }
        SearchOutcome::Dense(ds) => {
            let s = ds.graph.stats();
            let body = format!(
                "# DS n={} delta={} density={}\n{}",
                ds.size,
                ds.min_degree,
                display_rational(s.density),
                serialize_hypergraph(&ds.graph.to_hypergraph())
            );
            emit(args.out.as_deref(), &body)?;
            println!("dense-subgraph n={} delta={}", ds.size, ds.min_degree);
            Ok(ExitCode::from(1))
        }
        SearchOutcome::Failure(stage) => {
            if args.out.is_some() {
                emit(args.out.as_deref(), &format!("# failure stage={stage}\n"))?;
            }
            println!("failure stage={stage}");
            Ok(ExitCode::from(1))
        }
        SearchOutcome::Path(_) => unreachable!("top-level searches never return bare paths"),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&args.graph)?;
    let text = fs::read_to_string(&args.witness)
        .with_context(|| format!("reading {}", args.witness.display()))?;
    let head = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let valid = if head.starts_with("TC ") {
        let (r, ids) =
            parse_tight_cycle(&text).map_err(|e| anyhow!("{}: {e}", args.witness.display()))?;
        if r != h.r() {
            return Err(anyhow!(
                "uniformity mismatch: witness r={r}, graph r={}",
                h.r()
            ));
        }
        validate_tight_cycle(&h, &TightCycleWitness { vertices: ids })
    } else if head.starts_with("TCW ") {
        let w = parse_witness(&text).map_err(|e| anyhow!("{}: {e}", args.witness.display()))?;
        validate_tight_cycle(&h, &w)
    } else if head.starts_with("SP ") {
        let p = parse_sigma_path(&text).map_err(|e| anyhow!("{}: {e}", args.witness.display()))?;
        let g = require_partitioned(&h, &args.graph)?;
        validate_sigma_path(&g, &p)
    } else {
        return Err(anyhow!(
            "{}: unrecognized witness header (expected TC, TCW, or SP)",
            args.witness.display()
        ));
    };
    if valid {
        println!("valid");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid");
        Ok(ExitCode::from(1))
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let h = read_hypergraph(&args.file)?;
    let max_len = args.max_len.unwrap_or(h.vertex_count()).max(h.r() + 1);
    let cap = args
        .exact_threshold
        .or_else(|| {
            std::env::var(EXACT_THRESHOLD_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_ORACLE_VERTEX_CAP);
    match brute_force_tight_cycle_with_cap(&h, max_len, cap) {
        Ok(Some(w)) => {
            emit(args.out.as_deref(), &serialize_witness(&w))?;
            println!("cycle length={}", w.len());
            Ok(ExitCode::SUCCESS)
        }
        Ok(None) => {
            println!("no tight cycle up to length {max_len}");
            Ok(ExitCode::from(1))
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

#[derive(Clone)]
struct Cell {
    index: usize,
    m: usize,
    p: f64,
    lambda: Option<Rational>,
    lambda_label: String,
    k: Rational,
    seed: u64,
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let mut lambdas = Vec::new();
    for l in &args.lambda_list {
        if l == "auto" {
            lambdas.push((None, "auto".to_string()));
        } else {
            lambdas.push((Some(parse_rational(l).map_err(|e| anyhow!(e))?), l.clone()));
        }
    }
    let mut ks = Vec::new();
    for k in &args.k_list {
        ks.push(parse_rational(k).map_err(|e| anyhow!(e))?);
    }

    let mut cells = Vec::new();
    let mut index = 0usize;
    for &m in &args.m_list {
        for &p in &args.p_list {
            for (lambda, label) in &lambdas {
                for k in &ks {
                    for _run in 0..args.runs_per_cell {
                        cells.push(Cell {
                            index,
                            m,
                            p,
                            lambda: *lambda,
                            lambda_label: label.clone(),
                            k: *k,
                            seed: args.seed.wrapping_add(index as u64),
                        });
                        index += 1;
                    }
                }
            }
        }
    }

    let r = args.r;
    let timings = args.timings;
    let run_cell = |cell: &Cell| -> (usize, String) {
        let start = Instant::now();
        let h = gen_random_rpartite(cell.m, r, cell.p, cell.seed);
        let g = from_hypergraph(&h).expect("generated instances carry parts");
        let stats = g.stats();
        let mut params = SearchParams::new(cell.seed);
        params.lambda = cell.lambda;
        params.k_factor = Some(cell.k);
        let res = density_increment_search(&g, &params);
        let wall_ms = if timings {
            start.elapsed().as_millis()
        } else {
            0
        };
        let (outcome, cycle_len, stage) = match &res.outcome {
            SearchOutcome::Cycle(c) => ("cycle", c.len().to_string(), String::new()),
            SearchOutcome::Dense(_) => ("dense-subgraph", String::new(), String::new()),
            SearchOutcome::Failure(st) => ("failure", String::new(), st.to_string()),
            SearchOutcome::Path(_) => unreachable!(),
        };
        let row = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            cell.m,
            cell.p,
            cell.lambda_label,
            display_rational(cell.k),
            cell.seed,
            stats.num_vertices,
            display_rational(stats.density),
            stats.min_degree,
            outcome,
            cycle_len,
            stage,
            wall_ms
        );
        (cell.index, row)
    };

    let mut rows: Vec<(usize, String)> = if args.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.parallel)
            .build()
            .context("building thread pool")?;
        pool.install(|| {
            use rayon::prelude::*;
            cells.par_iter().map(run_cell).collect()
        })
    } else {
        cells.iter().map(run_cell).collect()
    };
    rows.sort_by_key(|(i, _)| *i);

    let mut text = String::new();
    text.push_str("# tightcycle-experiment v1\n");
    text.push_str("m,p,lambda,K,seed,n,density,delta,outcome,cycle_length,stage,wall_ms\n");
    for (_, row) in rows {
        text.push_str(&row);
        text.push('\n');
    }
    emit(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}
