use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};

use entre::commands::{self, Method, SweepParam};
use entre::reference::GRID_STEP;
use entre::report::summary_table;
use entre::Strategy;

/// Energy-aware multipath traffic engineering simulator.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one strategy and write its trajectory.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "entre")]
        strategy: Strategy,
        #[arg(long)]
        out: PathBuf,
    },
    /// Minimize the offline objective and print the best splits.
    Optimize {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "grid")]
        method: Method,
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
    },
    /// ENTRE, OSPF, equal split and the exhaustive optimum side by side.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = GRID_STEP)]
        grid_step: f64,
    },
    /// One ENTRE/OSPF summary row per value of a swept parameter.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated, e.g. `1,2,3,4`.
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ENTRE_LOG", "warn")).init();
    match Cli::parse().command {
        Command::Run {
            scenario,
            strategy,
            out,
        } => {
            let r = commands::cmd_run(&scenario, strategy, &out)
                .with_context(|| format!("run {}", scenario.display()))?;
            print!("{}", summary_table(&[r.summary]));
        }
        Command::Optimize {
            scenario,
            method,
            grid_step,
        } => {
            let r = commands::cmd_optimize(&scenario, method, grid_step)
                .with_context(|| format!("optimize {}", scenario.display()))?;
            print!("{}", r.to_toml());
        }
        Command::Compare {
            scenario,
            out,
            grid_step,
        } => {
            let r = commands::cmd_compare(&scenario, grid_step, &out)
                .with_context(|| format!("compare {}", scenario.display()))?;
            print!("{}", r.table);
        }
        Command::Sweep {
            scenario,
            param,
            values,
            out,
        } => {
            let values = commands::parse_values(&values)?;
            let rows = commands::cmd_sweep(&scenario, param, &values, &out)
                .with_context(|| format!("sweep {}", scenario.display()))?;
            println!(
                "{:>8} {:>14} {:>10} {:>8} {:>14} {:>10}",
                param.to_string(),
                "entre_mbps",
                "entre_w",
                "iters",
                "ospf_mbps",
                "ospf_w"
            );
            for r in rows {
                println!(
                    "{:>8} {:>14.3} {:>10.4} {:>8} {:>14.3} {:>10.4}",
                    r.value,
                    r.entre_throughput_mbps,
                    r.entre_energy_w,
                    r.entre_iterations,
                    r.ospf_throughput_mbps,
                    r.ospf_energy_w
                );
            }
        }
    }
    Ok(())
}
