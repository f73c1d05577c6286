//! Per-link power as a function of utilization, and what sleeping saves.

use entre::energy::{link_energy, recompute_state};
use entre::model::LinkState;
use entre::reference;
use entre::PowerProfile;

fn main() -> entre::Result<()> {
    let profile = PowerProfile::default();
    println!("class   u=0.00   u=0.50   u=1.00   sleeping");
    for class in profile.base_power.keys() {
        let at = |u| link_energy(u, class, LinkState::Active, &profile);
        println!(
            "{class:<6} {:>7.3}  {:>7.3}  {:>7.3}  {:>9.3}",
            at(0.0)?,
            at(0.5)?,
            at(1.0)?,
            link_energy(0.0, class, LinkState::Sleeping, &profile)?
        );
    }

    // Same network, all links awake versus detours asleep.
    let mut scenario = reference::redundant_paths();
    let awake = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;
    for pair in &mut scenario.pairs {
        let n = pair.paths.len();
        pair.splits.fractions = (0..n).map(|p| if p == 0 { 1.0 } else { 0.0 }).collect();
        pair.splits.excluded = (0..n).map(|p| p != 0).collect();
    }
    entre::entre::sync_link_states(&mut scenario);
    let asleep = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;
    println!(
        "\n{}: {:.3} W with every link awake, {:.3} W with {} detour links asleep",
        scenario.name,
        awake.total_energy(),
        asleep.total_energy(),
        scenario.topology.sleeping_count()
    );
    Ok(())
}
