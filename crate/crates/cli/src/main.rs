use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use adaptive_chr::search::{solve, Limits, SearchResult, Strategy};
use adaptive_chr::CnfInstance;
use adaptive_chr_cli::{bench, load_dir, run_verify, summarize, write_csv, VERIFY_MAX_VARS};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "achr", version, about = "Adaptive Boolean constraint search over DIMACS CNF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance. Exit code 10 = SAT, 20 = UNSAT, 0 = timeout, 1 = error.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "cbj")]
        strategy: Strategy,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Run every strategy on every .cnf file in a directory and print CSV.
    Bench {
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "cbt,cbj,dbt,fbt")]
        strategies: Vec<Strategy>,
        /// Per-run timeout in seconds.
        #[arg(long, default_value_t = 600.0)]
        timeout: f64,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Cross-check all strategies against the oracles on random 3-CNFs and fuzz the store.
    Verify {
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u16).range(1..=VERIFY_MAX_VARS as i64))]
        vars: u16,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn cmd_solve(file: &Path, strategy: Strategy, timeout: Option<f64>) -> anyhow::Result<ExitCode> {
    let inst = CnfInstance::from_file(file)?;
    let limits = timeout.map_or_else(Limits::none, |t| Limits::timeout(Duration::from_secs_f64(t)));
    let out = solve(&inst, strategy, &limits);
    println!("c instance {} strategy {strategy}", inst.name);
    let code = match &out.result {
        SearchResult::Sat(model) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = model
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                .collect();
            println!("v {} 0", lits.join(" "));
            10
        }
        SearchResult::Unsat => {
            println!("s UNSATISFIABLE");
            20
        }
        SearchResult::Timeout => {
            println!("s UNKNOWN");
            0
        }
    };
    let st = out.stats;
    println!(
        "c steps {} label_calls {} value_attempts {} deleted_assignments {}",
        st.unlabel_calls, st.label_calls, st.value_attempts, st.deleted_assignments
    );
    println!("c time {:.3} ms", out.elapsed.as_secs_f64() * 1000.0);
    Ok(ExitCode::from(code))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { file, strategy, timeout } => cmd_solve(&file, strategy, timeout),
        Command::Bench { dir, strategies, timeout, jobs } => {
            let instances = load_dir(&dir)?;
            let records = bench(&instances, &strategies, Some(Duration::from_secs_f64(timeout)), jobs)?;
            write_csv(io::stdout().lock(), &records, &summarize(&records, &strategies))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { trials, vars, seed } => match run_verify(trials, vars as usize, seed) {
            Ok(r) => {
                println!(
                    "ok: {} trials ({} sat, {} unsat), store fuzz reached {} failed states",
                    r.trials, r.sat, r.unsat, r.fuzz_failed_states
                );
                Ok(ExitCode::SUCCESS)
            }
            Err(d) => {
                eprintln!("disagreement: {d}");
                eprintln!("reproduce with: achr verify --trials 1 --vars {vars} --seed {}", d.seed);
                Ok(ExitCode::FAILURE)
            }
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
