use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use detsol::config::{ScenarioConfig, FAMILY_LABELS};
use detsol::preset;
use detsol::scenario::{build_solution, oracle_cmd, run_scenario, verify_solution};

#[derive(Parser)]
#[command(
    name = "detsol",
    about = "Determinantal multi-soliton, breather, dromion and lump solutions \
             of the multi-component NLS and Davey-Stewartson equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a configured solution, sample it, and write CSV/PGM outputs.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also run the finite-difference verifier on the scenario grid.
        #[arg(long)]
        verify: bool,
    },
    /// Build a configured solution and run the verifier only.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a bundled figure preset.
    Preset {
        /// Preset name; see `detsol preset --list`.
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        /// List available presets.
        #[arg(long)]
        list: bool,
    },
    /// Compare det(T) against the 2^g-term exponential sum on random data.
    Oracle {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List the solution families understood by `solve`.
    ListFamilies,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> detsol::Result<()> {
    match cli.command {
        Command::Solve {
            config,
            out,
            verify,
        } => {
            let cfg = ScenarioConfig::from_json(&std::fs::read_to_string(config)?)?;
            let summary = run_scenario(&cfg, &out, verify)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
        Command::Verify { config } => {
            let cfg = ScenarioConfig::from_json(&std::fs::read_to_string(config)?)?;
            let sol = build_solution(&cfg.solution)?;
            let report = verify_solution(&cfg, &sol)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Preset {
            name,
            out,
            verify,
            list,
        } => {
            if list || name.is_none() {
                for n in preset::PRESET_NAMES {
                    println!("{n}");
                }
                return Ok(());
            }
            let name = name.unwrap();
            let cfg = preset::build(&name)?;
            let out = out.ok_or_else(|| {
                detsol::Error::Config("preset runs need --out <dir>".into())
            })?;
            let summary = run_scenario(&cfg, &out, verify)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
        Command::Oracle {
            genus,
            trials,
            seed,
        } => {
            let report = oracle_cmd(genus, trials, seed)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::ListFamilies => {
            for f in FAMILY_LABELS {
                println!("{f}");
            }
            Ok(())
        }
    }
}
