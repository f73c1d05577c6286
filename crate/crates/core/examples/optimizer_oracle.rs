//! Exhaustive grid search against coordinate descent on a small instance,
//! then the best reachable energy saving.

use entre::optimizer::{brute_force_solve, descent_solve, optimal_energy_saving, DEFAULT_BUDGET};
use entre::reference::{self, redundant_pair, skewed_pair, Via};
use entre::EntreParams;

fn main() -> entre::Result<()> {
    let scenario = reference::build(
        "two-pairs",
        &[skewed_pair(), redundant_pair(&[Via::B, Via::C])],
        EntreParams::default(),
    );
    let (grid, best) = brute_force_solve(&scenario, 0.05, DEFAULT_BUDGET)?;
    let (desc, found) = descent_solve(&scenario, &scenario.splits(), &[0.05, 0.01, 0.002], 10_000)?;
    println!(
        "grid search : J = {:.6}  argmax pair {:?}",
        best.value, best.argmax_pair
    );
    for s in &grid {
        println!("  {:?}", s.fractions);
    }
    println!(
        "descent     : J = {:.6}  argmax pair {:?}",
        found.value, found.argmax_pair
    );
    for s in &desc {
        let rounded: Vec<String> = s.fractions.iter().map(|x| format!("{x:.4}")).collect();
        println!("  [{}]", rounded.join(", "));
    }

    let saving = optimal_energy_saving(&scenario, 0.25, DEFAULT_BUDGET)?;
    println!(
        "best saving {:.1}% ({:.3} W of {:.3} W), excluded paths {:?}, sleeping links {:?}",
        100.0 * saving.saving,
        saving.reference_energy - saving.optimal_energy,
        saving.reference_energy,
        saving.excluded,
        saving.sleeping
    );
    Ok(())
}
