use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use mwlab::harness::{
    all_presets, emit_table, preset, run_scenario, table_presets, McSummary, ScenarioConfig, TableFormat, TABLES,
};

#[derive(Parser)]
#[command(name = "mwlab", version, about = "Monte Carlo laboratory for minimum wage research designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario (a preset name or a JSON config path).
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        regions: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List compiled-in scenarios.
    ListScenarios,
    /// Run every panel of a table and print it as markdown.
    Reproduce {
        #[arg(long)]
        table: String,
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn load_scenario(spec: &str) -> Result<ScenarioConfig> {
    if let Some(cfg) = preset(spec) {
        return Ok(cfg);
    }
    let path = Path::new(spec);
    if path.exists() {
        return ScenarioConfig::from_path(path).with_context(|| format!("reading {}", path.display()));
    }
    bail!("`{spec}` is neither a known scenario (see `mwlab list-scenarios`) nor a readable file")
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!(e))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ListScenarios => {
            for s in all_presets() {
                println!("{:<16} {}", s.name, s.panel);
            }
        }
        Command::Run { scenario, reps, regions, seed, out, format, threads } => {
            set_threads(threads)?;
            let format: TableFormat = format.parse()?;
            let mut cfg = load_scenario(&scenario)?;
            if let Some(r) = reps {
                cfg.replications = r;
            }
            if let Some(r) = regions {
                cfg.regions = r;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let summary = run_scenario(&cfg)?;
            let text = emit_table(&[summary], format)?;
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Reproduce { table, reps, threads } => {
            set_threads(threads)?;
            let panels = table_presets(&table)
                .ok_or_else(|| anyhow!("unknown table `{table}`; expected one of {}", TABLES.join(", ")))?;
            let summaries = panels
                .into_iter()
                .map(|mut cfg| {
                    if let Some(r) = reps {
                        cfg.replications = r;
                    }
                    eprintln!("running {} ({} replications)", cfg.name, cfg.replications);
                    run_scenario(&cfg).map_err(anyhow::Error::from)
                })
                .collect::<Result<Vec<McSummary>>>()?;
            println!("## Table {}\n", table.to_ascii_uppercase());
            print!("{}", emit_table(&summaries, TableFormat::Markdown)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
