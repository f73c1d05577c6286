//! Round-by-round view of the heuristic's decisions on one scenario:
//! per-path rates, utilizations, energies, deltas and the rule that fired.

use entre::energy::recompute_state;
use entre::entre::{entre_round, sync_link_states, warm_up_splits, RoundAction};
use entre::reference;
use entre::simulator::deliver;

fn main() -> entre::Result<()> {
    let mut scenario = reference::redundancy_family().remove(1);
    let params = scenario.params.clone();
    sync_link_states(&mut scenario);
    let mut state = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;
    let mut probe = scenario.clone();
    probe.set_splits(warm_up_splits(&scenario));
    let probe_state = recompute_state(&probe.topology, &probe.pairs, &probe.profile)?;
    let mut delivered = deliver(&probe, &probe_state, params.t_m);

    for round in 1..=params.max_iters {
        let outcome = entre_round(&mut scenario, &state, &delivered, &params)?;
        println!("round {round}");
        for (view, actions) in outcome.views.iter().zip(&outcome.actions) {
            println!(
                "  pair {}  U_avg {:.3}  E_avg {:.3}",
                view.pair, view.avg_util, view.avg_energy
            );
            for (p, action) in actions.iter().enumerate() {
                let action = match *action {
                    RoundAction::ApplyDelta(d) => format!("shift {d:+.4}"),
                    RoundAction::Exclude => "exclude".to_string(),
                    RoundAction::NoOp => "-".to_string(),
                };
                println!(
                    "    path {p}: rate {:>7.1}  U {:.3}  E {:.3}  dx {:+.4}  dE {:+.3}  {action}",
                    view.rates[p],
                    view.utils[p],
                    view.energies[p],
                    view.delta_x[p],
                    view.delta_e[p]
                );
            }
        }
        state = outcome.state;
        delivered = deliver(&scenario, &state, params.t_m);
        if outcome.converged {
            println!("converged, max |dx| = {:.2e}", outcome.max_abs_change);
            break;
        }
    }
    Ok(())
}
