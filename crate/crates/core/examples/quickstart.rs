//! Load a bundled scenario, run ENTRE and print the trajectory.
//!
//! ```text
//! cargo run --example quickstart [-- path/to/scenario.toml]
//! ```

use std::path::PathBuf;

use entre::commands::{bundled_dir, initial_energy};
use entre::scenario_file::parse_scenario;
use entre::simulator::{run, summarize, Strategy};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| bundled_dir().join("redundancy-3.toml"));
    let scenario = parse_scenario(&path)?;
    println!(
        "{}: {} links, {} pairs, {} candidate paths",
        scenario.name,
        scenario.topology.links().len(),
        scenario.pairs.len(),
        scenario.path_count()
    );

    let trajectory = run(&scenario, Strategy::Entre, &scenario.params)?;
    println!("round  throughput  energy_w  sleeping  max|dx|");
    for s in &trajectory.snapshots {
        println!(
            "{:>5} {:>11.1} {:>9.3} {:>8.1}% {:>8.5}",
            s.round,
            s.throughput,
            s.total_energy,
            100.0 * s.sleeping_links_fraction,
            s.max_abs_delta_x
        );
    }
    let summary = summarize(&trajectory, initial_energy(&scenario)?);
    println!(
        "converged: {} after {} rounds, saving {:.1}% vs. the starting point",
        summary.converged,
        summary.iterations,
        100.0 * summary.energy_saving
    );
    for pair in &trajectory.scenario.pairs {
        println!("pair {}: splits {:?}", pair.id, pair.splits.fractions);
    }
    Ok(())
}
