//! ENTRE's energy saving next to the exhaustive optimum on the five
//! bundled redundancy scenarios.

use entre::optimizer::{optimal_energy_saving, DEFAULT_BUDGET};
use entre::reference::{redundancy_family, GRID_STEP};
use entre::simulator::{run, summarize, Strategy};

fn main() -> entre::Result<()> {
    println!("scenario       optimal   entre   ratio  sleeping  excluded  iters");
    for scenario in redundancy_family() {
        let best = optimal_energy_saving(&scenario, GRID_STEP, DEFAULT_BUDGET)?;
        let t = run(&scenario, Strategy::Entre, &scenario.params)?;
        let s = summarize(&t, best.reference_energy);
        println!(
            "{:<14} {:>6.1}% {:>6.1}% {:>7.3} {:>8.1}% {:>8.1}% {:>6}",
            scenario.name,
            100.0 * best.saving,
            100.0 * s.energy_saving,
            s.energy_saving / best.saving,
            100.0 * s.sleeping_frac,
            100.0 * s.excluded_frac,
            s.iterations
        );
    }
    Ok(())
}
