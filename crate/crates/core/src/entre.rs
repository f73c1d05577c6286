//! The ENTRE heuristic.
//!
//! Every measurement window of `t_m` seconds each ingress-egress pair turns
//! the bits delivered on its paths into rates, compares each path's
//! utilization and energy against the pair's rate-weighted averages, and
//! picks one action per path:
//!
//! | Δx    | ΔE    | action                                                       |
//! |-------|-------|--------------------------------------------------------------|
//! | > 0   | > 0   | apply Δx                                                     |
//! | < 0   | < 0   | apply Δx                                                     |
//! | > 0   | < 0   | exclude the path if `E_p − Ē > T_E`, otherwise nothing       |
//! | < 0   | > 0   | apply Δx if `U_p − Ū > T_U`, otherwise nothing               |
//!
//! A zero ΔE (the path sits at the energy average, or its energy is under
//! the `E_min` gate) is energy-neutral and lets Δx through. Energy deltas
//! never move traffic themselves.
//!
//! Excluded paths leave the routing table for good; any link no longer
//! crossed by a routed path of any pair goes to sleep.

use crate::energy::{recompute_state, NetworkState};
use crate::error::{Error, Result};
use crate::model::{LinkState, PairId, Scenario, SplitVector};
use crate::simulator::{self, MetricsSnapshot, Strategy, Trajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct EntreParams {
    /// Measurement window, seconds.
    pub t_m: f64,
    /// Utilization excess that lets an over-utilized, cheaper path shed load.
    pub t_u: f64,
    /// Energy excess, in watts, above which an under-utilized path is excluded.
    pub t_e: f64,
    /// Paths with `U_p <= u_min` get no Δx; zero disables the gate.
    pub u_min: f64,
    /// Paths with `E_p <= e_min` get no ΔE; zero disables the gate.
    pub e_min: f64,
    /// A round converges when no split moves by this much or more.
    pub eps_converge: f64,
    pub max_iters: usize,
}

impl Default for EntreParams {
    fn default() -> Self {
        EntreParams {
            t_m: 1.0,
            t_u: 0.05,
            t_e: 0.5,
            u_min: 0.0,
            e_min: 0.0,
            eps_converge: 1e-3,
            max_iters: 100,
        }
    }
}

impl EntreParams {
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.t_m > 0.0 && self.t_m.is_finite()) {
            out.push(format!("t_m must be positive, got {}", self.t_m));
        }
        for (name, v) in [
            ("t_u", self.t_u),
            ("t_e", self.t_e),
            ("u_min", self.u_min),
            ("e_min", self.e_min),
        ] {
            if v.is_nan() || v < 0.0 {
                out.push(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.eps_converge.is_nan() || self.eps_converge <= 0.0 {
            out.push(format!(
                "eps_converge must be positive, got {}",
                self.eps_converge
            ));
        }
        if self.max_iters == 0 {
            out.push("max_iters must be at least 1".into());
        }
        out
    }
}

/// `r_p = bits / t_m`; excluded paths report zero.
pub fn measure_rates(splits: &SplitVector, delivered_bits: &[f64], t_m: f64) -> Vec<f64> {
    delivered_bits
        .iter()
        .zip(&splits.excluded)
        .map(|(&bits, &excluded)| if excluded { 0.0 } else { bits / t_m })
        .collect()
}

/// Rate-weighted mean over non-excluded paths. When every rate is zero the
/// plain mean is used instead.
fn rate_weighted_mean(rates: &[f64], values: &[f64], excluded: &[bool]) -> f64 {
    let active = || {
        rates
            .iter()
            .zip(values)
            .zip(excluded)
            .filter(|(_, e)| !**e)
            .map(|(rv, _)| rv)
    };
    // Offsets from the first routed value keep the mean of equal values exact.
    let Some((_, &anchor)) = active().next() else {
        return 0.0;
    };
    let total: f64 = active().map(|(r, _)| r).sum();
    if total > 0.0 {
        anchor + active().map(|(r, v)| r * (v - anchor)).sum::<f64>() / total
    } else {
        let n = active().count() as f64;
        anchor + active().map(|(_, v)| v - anchor).sum::<f64>() / n
    }
}

/// `Ū = Σ r_p U_p / Σ r_k`.
pub fn pair_average_utilization(rates: &[f64], utils: &[f64], excluded: &[bool]) -> f64 {
    rate_weighted_mean(rates, utils, excluded)
}

/// `Ē = Σ r_p E_p / Σ r_k`.
pub fn pair_average_energy(rates: &[f64], energies: &[f64], excluded: &[bool]) -> f64 {
    rate_weighted_mean(rates, energies, excluded)
}

/// One pair's measurements and deltas for a single round.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRoundView {
    pub pair: PairId,
    pub excluded: Vec<bool>,
    pub rates: Vec<f64>,
    pub utils: Vec<f64>,
    pub energies: Vec<f64>,
    pub avg_util: f64,
    pub avg_energy: f64,
    pub delta_x: Vec<f64>,
    pub delta_e: Vec<f64>,
}

impl PairRoundView {
    /// Fills in the averages; deltas start at zero.
    pub fn new(
        pair: PairId,
        excluded: Vec<bool>,
        rates: Vec<f64>,
        utils: Vec<f64>,
        energies: Vec<f64>,
    ) -> Self {
        let avg_util = pair_average_utilization(&rates, &utils, &excluded);
        let avg_energy = pair_average_energy(&rates, &energies, &excluded);
        let n = rates.len();
        PairRoundView {
            pair,
            excluded,
            rates,
            utils,
            energies,
            avg_util,
            avg_energy,
            delta_x: vec![0.0; n],
            delta_e: vec![0.0; n],
        }
    }

    /// True when every routed path passes the utilization gate.
    pub fn ungated(&self, u_min: f64) -> bool {
        self.utils
            .iter()
            .zip(&self.excluded)
            .all(|(&u, &e)| e || passes_gate(u, u_min))
    }
}

/// `value > min`, with a zero threshold switching the gate off so that idle
/// paths still take part.
pub fn passes_gate(value: f64, min: f64) -> bool {
    min <= 0.0 || value > min
}

/// `Δx_p = (Ū − U_p)·r_p / Σ r_k` for routed paths passing the `u_min` gate.
pub fn compute_delta_x(view: &PairRoundView, u_min: f64) -> Vec<f64> {
    let total: f64 = view
        .rates
        .iter()
        .zip(&view.excluded)
        .filter(|(_, e)| !**e)
        .map(|(r, _)| r)
        .sum();
    (0..view.rates.len())
        .map(|p| {
            if view.excluded[p] || !passes_gate(view.utils[p], u_min) || total <= 0.0 {
                0.0
            } else {
                (view.avg_util - view.utils[p]) * view.rates[p] / total
            }
        })
        .collect()
}

/// `ΔE_p = Ē − E_p` for routed paths passing the `e_min` gate.
pub fn compute_delta_e(view: &PairRoundView, e_min: f64) -> Vec<f64> {
    (0..view.energies.len())
        .map(|p| {
            if view.excluded[p] || !passes_gate(view.energies[p], e_min) {
                0.0
            } else {
                view.avg_energy - view.energies[p]
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RoundAction {
    ApplyDelta(f64),
    Exclude,
    NoOp,
}

/// Chooses one action per path from the view's deltas.
pub fn apply_rules(view: &PairRoundView, params: &EntreParams) -> Vec<RoundAction> {
    (0..view.delta_x.len())
        .map(|p| {
            let (dx, de) = (view.delta_x[p], view.delta_e[p]);
            if view.excluded[p] || dx == 0.0 {
                return RoundAction::NoOp;
            }
            if de == 0.0 || (dx > 0.0) == (de > 0.0) {
                return RoundAction::ApplyDelta(dx);
            }
            if dx > 0.0 {
                if view.energies[p] - view.avg_energy > params.t_e {
                    RoundAction::Exclude
                } else {
                    RoundAction::NoOp
                }
            } else if view.utils[p] - view.avg_util > params.t_u {
                RoundAction::ApplyDelta(dx)
            } else {
                RoundAction::NoOp
            }
        })
        .collect()
}

/// Drops path `p` from the split and hands its share to the remaining paths
/// in proportion to what they already carry (equally if they carry nothing).
fn exclude_in_splits(splits: &mut SplitVector, p: usize, pair: PairId) -> Result<()> {
    if splits.excluded[p] {
        return Ok(());
    }
    if splits.active_count() <= 1 {
        return Err(Error::LastPath(pair));
    }
    splits.excluded[p] = true;
    splits.fractions[p] = 0.0;
    let remaining = splits.active_sum();
    if remaining > 0.0 {
        for (x, &e) in splits.fractions.iter_mut().zip(&splits.excluded) {
            if !e {
                *x /= remaining;
            }
        }
    } else {
        splits.reset_uniform();
    }
    Ok(())
}

/// Sets every link Sleeping iff no routed path of any pair crosses it.
pub fn sync_link_states(scenario: &mut Scenario) {
    let used = scenario.links_in_use();
    for (i, used) in used.into_iter().enumerate() {
        let state = if used {
            LinkState::Active
        } else {
            LinkState::Sleeping
        };
        scenario.topology.set_link_state(i, state);
    }
}

/// Removes path `path` of pair `pair` from the routing table and puts its
/// now-unused links to sleep.
pub fn exclude_path(scenario: &mut Scenario, pair: usize, path: usize) -> Result<()> {
    let id = scenario.pairs[pair].id;
    exclude_in_splits(&mut scenario.pairs[pair].splits, path, id)?;
    let used = scenario.links_in_use();
    for &link in &scenario.pairs[pair].paths[path].links {
        if let Some(i) = scenario.topology.link_index(link) {
            if !used[i] {
                scenario.topology.set_link_state(i, LinkState::Sleeping);
            }
        }
    }
    Ok(())
}

/// Adds the applied deltas, clamps to `[0, 1]` and rescales the routed paths
/// back onto the simplex. An all-zero result resets to uniform.
pub fn apply_and_renormalize(splits: &SplitVector, actions: &[RoundAction]) -> SplitVector {
    let mut out = splits.clone();
    let mut touched = false;
    for (p, action) in actions.iter().enumerate() {
        if let RoundAction::ApplyDelta(dx) = *action {
            if !out.excluded[p] {
                out.fractions[p] = (out.fractions[p] + dx).clamp(0.0, 1.0);
                touched = true;
            }
        }
    }
    if !touched {
        return out;
    }
    let sum = out.active_sum();
    if sum > 0.0 {
        for (x, &e) in out.fractions.iter_mut().zip(&out.excluded) {
            if !e {
                *x /= sum;
            }
        }
    } else {
        out.reset_uniform();
    }
    out
}

/// Builds every pair's view from one immutable state snapshot.
pub fn pair_views(
    scenario: &Scenario,
    state: &NetworkState,
    delivered_bits: &[Vec<f64>],
    params: &EntreParams,
) -> Vec<PairRoundView> {
    scenario
        .pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let rates = measure_rates(&pair.splits, &delivered_bits[i], params.t_m);
            let mut view = PairRoundView::new(
                pair.id,
                pair.splits.excluded.clone(),
                rates,
                state.path_util[i].clone(),
                state.path_energy[i].clone(),
            );
            view.delta_x = compute_delta_x(&view, params.u_min);
            view.delta_e = compute_delta_e(&view, params.e_min);
            view
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub pair: PairId,
    pub path: usize,
}

/// What one round observed and changed.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub views: Vec<PairRoundView>,
    pub actions: Vec<Vec<RoundAction>>,
    pub exclusions: Vec<Exclusion>,
    /// Largest `|x_new − x_old|` over all paths.
    pub max_abs_change: f64,
    pub converged: bool,
    /// State recomputed under the new splits.
    pub state: NetworkState,
}

/// One synchronized round. All deltas are computed from `state` before any
/// pair's split changes, so the result does not depend on pair order.
pub fn entre_round(
    scenario: &mut Scenario,
    state: &NetworkState,
    delivered_bits: &[Vec<f64>],
    params: &EntreParams,
) -> Result<RoundOutcome> {
    let views = pair_views(scenario, state, delivered_bits, params);
    let actions: Vec<Vec<RoundAction>> = views.iter().map(|v| apply_rules(v, params)).collect();

    let mut exclusions = Vec::new();
    let mut max_abs_change: f64 = 0.0;
    for (pair, acts) in scenario.pairs.iter_mut().zip(&actions) {
        let before = pair.splits.clone();
        let mut splits = pair.splits.clone();
        for (p, action) in acts.iter().enumerate() {
            if *action == RoundAction::Exclude {
                match exclude_in_splits(&mut splits, p, pair.id) {
                    Ok(()) => exclusions.push(Exclusion {
                        pair: pair.id,
                        path: p,
                    }),
                    Err(Error::LastPath(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let splits = apply_and_renormalize(&splits, acts);
        for (old, new) in before.fractions.iter().zip(&splits.fractions) {
            max_abs_change = max_abs_change.max((new - old).abs());
        }
        pair.splits = splits;
    }
    if !exclusions.is_empty() {
        sync_link_states(scenario);
    }
    let state = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;
    let converged = exclusions.is_empty() && max_abs_change < params.eps_converge;
    Ok(RoundOutcome {
        views,
        actions,
        exclusions,
        max_abs_change,
        converged,
        state,
    })
}

/// Splits used for the first measurement window: pairs with an idle routed
/// path are probed with an equal share on every routed path, so that every
/// path reports a rate.
pub fn warm_up_splits(scenario: &Scenario) -> Vec<SplitVector> {
    scenario
        .pairs
        .iter()
        .map(|pair| {
            let s = &pair.splits;
            let idle = s
                .fractions
                .iter()
                .zip(&s.excluded)
                .any(|(&x, &e)| !e && x == 0.0);
            let mut s = s.clone();
            if idle {
                s.reset_uniform();
            }
            s
        })
        .collect()
}

/// Repeats [`entre_round`] until a round converges or `max_iters` rounds
/// have run.
pub fn run_until_convergence(scenario: &Scenario, params: &EntreParams) -> Result<Trajectory> {
    run_observed(scenario, params, |_, _| {})
}

/// [`run_until_convergence`], calling `observe` after every round with the
/// round's outcome and the scenario as that round left it.
pub fn run_observed(
    scenario: &Scenario,
    params: &EntreParams,
    mut observe: impl FnMut(&RoundOutcome, &Scenario),
) -> Result<Trajectory> {
    let problems = params.check();
    if !problems.is_empty() {
        return Err(Error::InvalidParams(problems.join("; ")));
    }
    let mut scenario = scenario.clone();
    sync_link_states(&mut scenario);
    let mut state = recompute_state(&scenario.topology, &scenario.pairs, &scenario.profile)?;

    let mut delivered = {
        let mut probe = scenario.clone();
        probe.set_splits(warm_up_splits(&scenario));
        let probe_state = recompute_state(&probe.topology, &probe.pairs, &probe.profile)?;
        simulator::deliver(&probe, &probe_state, params.t_m)
    };

    let mut snapshots: Vec<MetricsSnapshot> = Vec::new();
    let mut converged = false;
    for round in 1..=params.max_iters {
        let outcome = entre_round(&mut scenario, &state, &delivered, params)?;
        delivered = simulator::deliver(&scenario, &outcome.state, params.t_m);
        snapshots.push(simulator::snapshot(
            round,
            &scenario,
            &outcome.state,
            &delivered,
            params.t_m,
            outcome.max_abs_change,
        ));
        log::debug!(
            "round {round}: max |dx| {:.3e}, {} exclusions",
            outcome.max_abs_change,
            outcome.exclusions.len()
        );
        observe(&outcome, &scenario);
        state = outcome.state;
        if outcome.converged {
            converged = true;
            break;
        }
    }
    Ok(Trajectory {
        strategy: Strategy::Entre,
        iterations: snapshots.len(),
        converged,
        snapshots,
        scenario,
    })
}
