//! Offline min-max optimization of the joint utilization/energy objective
//!
//! ```text
//! J(x) = max_i  Σ_p  (x_ip · T_i / c_p) · E_ip(x)
//! ```
//!
//! where `c_p` is the bottleneck capacity of path `p` and `E_ip(x)` is the
//! path energy at the utilization induced by the whole assignment `x`.
//! Feasible points satisfy `x ≥ 0`, `x ≤ 1`, `Σ_p x_ip = 1` and keep every
//! link within capacity.
//!
//! [`brute_force_solve`] enumerates a grid on every pair's simplex and is the
//! reference optimum at desk scale; [`descent_solve`] is a cheap local
//! search; [`optimal_energy_saving`] adds path-subset enumeration on top of
//! the grid search.

use std::cmp::Ordering;

use serde::Serialize;

use crate::energy::recompute_state;
use crate::entre::sync_link_states;
use crate::error::{Error, Result};
use crate::model::{bottleneck_capacity, LinkId, LinkState, PairId, Scenario, SplitVector};

/// Evaluation count above which searches refuse to run.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Relative slack on link capacity when judging feasibility.
pub const CAPACITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveValue {
    pub value: f64,
    pub argmax_pair: Option<PairId>,
    pub feasible: bool,
}

/// Objective kernel with link and path data resolved up front.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pair_ids: Vec<PairId>,
    demand: Vec<f64>,
    paths: Vec<Vec<Vec<usize>>>,
    bottleneck: Vec<Vec<f64>>,
    capacity: Vec<f64>,
    active_power: Vec<(f64, f64)>,
    sleep_power: f64,
    sleeping: Vec<bool>,
    flow: Vec<f64>,
    energy: Vec<f64>,
}

impl Evaluator {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        let topo = &scenario.topology;
        let sigma = scenario.profile.idle_fraction;
        let mut active_power = Vec::with_capacity(topo.links().len());
        for l in topo.links() {
            let base = scenario
                .profile
                .base_power(&l.power_class)
                .ok_or_else(|| Error::UnknownPowerClass(l.power_class.clone()))?;
            // Intercept and slope of the affine active-link energy.
            active_power.push((base * sigma, base * (1.0 - sigma)));
        }
        let paths = scenario
            .pairs
            .iter()
            .map(|pair| {
                pair.paths
                    .iter()
                    .map(|p| {
                        topo.resolve(p).ok_or_else(|| {
                            Error::InvalidRequest(format!("pair {} has a dangling path", pair.id))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let bottleneck = scenario
            .pairs
            .iter()
            .map(|pair| {
                pair.paths
                    .iter()
                    .map(|p| bottleneck_capacity(p, topo))
                    .collect()
            })
            .collect();
        let n = topo.links().len();
        Ok(Evaluator {
            pair_ids: scenario.pairs.iter().map(|p| p.id).collect(),
            demand: scenario.pairs.iter().map(|p| p.demand).collect(),
            paths,
            bottleneck,
            capacity: topo.links().iter().map(|l| l.capacity).collect(),
            active_power,
            sleep_power: scenario.profile.sleep_power,
            sleeping: topo
                .links()
                .iter()
                .map(|l| l.state == LinkState::Sleeping)
                .collect(),
            flow: vec![0.0; n],
            energy: vec![0.0; n],
        })
    }

    pub fn pair_count(&self) -> usize {
        self.demand.len()
    }

    /// Per-pair objective terms and the feasibility of `fractions`.
    pub fn terms(&mut self, fractions: &[Vec<f64>], out: &mut Vec<f64>) -> bool {
        let mut feasible = true;
        self.flow.iter_mut().for_each(|f| *f = 0.0);
        for (i, xs) in fractions.iter().enumerate() {
            let mut sum = 0.0;
            for (p, &x) in xs.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) {
                    feasible = false;
                }
                sum += x;
                let offered = x * self.demand[i];
                for &l in &self.paths[i][p] {
                    self.flow[l] += offered;
                }
            }
            if (sum - 1.0).abs() > crate::model::SPLIT_SUM_TOLERANCE {
                feasible = false;
            }
        }
        for l in 0..self.flow.len() {
            let cap = self.capacity[l];
            if self.flow[l] > cap * (1.0 + CAPACITY_TOLERANCE) {
                feasible = false;
            }
            self.energy[l] = if self.sleeping[l] {
                self.sleep_power
            } else {
                let (idle, slope) = self.active_power[l];
                idle + slope * (self.flow[l] / cap).clamp(0.0, 1.0)
            };
        }
        out.clear();
        for (i, xs) in fractions.iter().enumerate() {
            let term: f64 = xs
                .iter()
                .enumerate()
                .map(|(p, &x)| {
                    let e: f64 = self.paths[i][p].iter().map(|&l| self.energy[l]).sum();
                    x * self.demand[i] / self.bottleneck[i][p] * e
                })
                .sum();
            out.push(term);
        }
        feasible
    }

    pub fn evaluate(&mut self, fractions: &[Vec<f64>]) -> ObjectiveValue {
        let mut terms = Vec::with_capacity(self.pair_count());
        let feasible = self.terms(fractions, &mut terms);
        let mut value = 0.0;
        let mut argmax_pair = None;
        for (i, &t) in terms.iter().enumerate() {
            if argmax_pair.is_none() || t > value {
                value = t;
                argmax_pair = Some(self.pair_ids[i]);
            }
        }
        ObjectiveValue {
            value,
            argmax_pair,
            feasible,
        }
    }
}

/// Objective and feasibility of `splits` on `scenario`'s topology and link
/// states.
pub fn evaluate_objective(scenario: &Scenario, splits: &[SplitVector]) -> Result<ObjectiveValue> {
    let fractions: Vec<Vec<f64>> = splits.iter().map(|s| s.fractions.clone()).collect();
    Ok(Evaluator::new(scenario)?.evaluate(&fractions))
}

fn grid_units(grid_step: f64) -> Result<usize> {
    let units = (1.0 / grid_step).round();
    if !(grid_step > 0.0 && grid_step <= 1.0) || (units * grid_step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParams(format!(
            "grid step {grid_step} must divide 1 evenly"
        )));
    }
    Ok(units as usize)
}

/// Number of ways to split `units` into `parts` ordered non-negative parts.
fn simplex_points(units: usize, parts: usize) -> u128 {
    if parts == 0 {
        return 1;
    }
    // C(units + parts - 1, parts - 1)
    let (n, k) = ((units + parts - 1) as u128, (parts - 1) as u128);
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Grid points of one pair's simplex, lexicographically ascending. Excluded
/// paths stay at zero.
fn pair_grid(excluded: &[bool], units: usize) -> Vec<Vec<f64>> {
    fn fill(slots: &[usize], left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() + 1 == slots.len() {
            current.push(left);
            out.push(current.clone());
            current.pop();
            return;
        }
        for take in 0..=left {
            current.push(take);
            fill(slots, left - take, current, out);
            current.pop();
        }
    }
    let slots: Vec<usize> = (0..excluded.len()).filter(|&p| !excluded[p]).collect();
    if slots.is_empty() {
        return vec![];
    }
    let mut counts = Vec::new();
    fill(&slots, units, &mut Vec::new(), &mut counts);
    counts
        .into_iter()
        .map(|c| {
            let mut x = vec![0.0; excluded.len()];
            for (&slot, &n) in slots.iter().zip(&c) {
                x[slot] = n as f64 / units as f64;
            }
            x
        })
        .collect()
}

fn grid_size(scenario: &Scenario, units: usize) -> u128 {
    scenario
        .pairs
        .iter()
        .map(|p| simplex_points(units, p.splits.active_count()))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn better(candidate: f64, best: Option<f64>) -> bool {
    match best {
        None => true,
        Some(b) => candidate < b - 1e-12 * b.abs().max(1.0),
    }
}

fn to_splits(scenario: &Scenario, fractions: Vec<Vec<f64>>) -> Vec<SplitVector> {
    scenario
        .pairs
        .iter()
        .zip(fractions)
        .map(|(pair, fractions)| SplitVector {
            fractions,
            excluded: pair.splits.excluded.clone(),
        })
        .collect()
}

/// Exhaustive search over every pair's simplex discretized at `grid_step`.
/// Returns the first minimum in lexicographic split order.
pub fn brute_force_solve(
    scenario: &Scenario,
    grid_step: f64,
    budget: u128,
) -> Result<(Vec<SplitVector>, ObjectiveValue)> {
    let units = grid_units(grid_step)?;
    let needed = grid_size(scenario, units);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let grids: Vec<Vec<Vec<f64>>> = scenario
        .pairs
        .iter()
        .map(|p| pair_grid(&p.splits.excluded, units))
        .collect();
    if grids.iter().any(|g| g.is_empty()) {
        return Err(Error::NoFeasiblePoint);
    }
    let mut eval = Evaluator::new(scenario)?;
    let mut odometer = vec![0usize; grids.len()];
    let mut current: Vec<Vec<f64>> = grids.iter().map(|g| g[0].clone()).collect();
    let mut best: Option<(Vec<Vec<f64>>, ObjectiveValue)> = None;
    loop {
        let v = eval.evaluate(&current);
        if v.feasible && better(v.value, best.as_ref().map(|b| b.1.value)) {
            best = Some((current.clone(), v));
        }
        // Advance, last pair fastest.
        let mut i = grids.len();
        loop {
            if i == 0 {
                let (fractions, value) = best.ok_or(Error::NoFeasiblePoint)?;
                return Ok((to_splits(scenario, fractions), value));
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < grids[i].len() {
                current[i].clone_from(&grids[i][odometer[i]]);
                break;
            }
            odometer[i] = 0;
            current[i].clone_from(&grids[i][0]);
        }
    }
}

fn sorted_desc(terms: &[f64]) -> Vec<f64> {
    let mut v = terms.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    v
}

/// Strictly smaller in the descending-sorted term order.
fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let tol = 1e-12 * x.abs().max(y.abs()).max(1.0);
        if (x - y).abs() > tol {
            return x < y;
        }
    }
    false
}

/// Projected coordinate descent from a feasible `start`.
///
/// For each step size in `step_schedule` (up to `iters` accepted moves per
/// size), pairs are visited from the largest objective term down. A move
/// shifts `min(step, x_from)` of split mass from a path with high marginal
/// cost `T/c_p · E_p` to one with low marginal cost, which keeps the vector
/// on the simplex. A move is kept only when it stays feasible and makes the
/// descending-sorted term vector lexicographically smaller, so the objective
/// never increases.
pub fn descent_solve(
    scenario: &Scenario,
    start: &[SplitVector],
    step_schedule: &[f64],
    iters: usize,
) -> Result<(Vec<SplitVector>, ObjectiveValue)> {
    let mut eval = Evaluator::new(scenario)?;
    let mut current: Vec<Vec<f64>> = start.iter().map(|s| s.fractions.clone()).collect();
    let excluded: Vec<Vec<bool>> = start.iter().map(|s| s.excluded.clone()).collect();
    let mut terms = Vec::new();
    if !eval.terms(&current, &mut terms) {
        return Err(Error::InfeasibleStart);
    }
    let mut ranked = sorted_desc(&terms);
    let mut trial_terms = Vec::new();

    for &step in step_schedule {
        for _ in 0..iters {
            let mut order: Vec<usize> = (0..terms.len()).collect();
            order.sort_by(|&a, &b| terms[b].partial_cmp(&terms[a]).unwrap_or(Ordering::Equal));
            let marginal = marginal_costs(&eval);
            let mut moved = false;
            'pairs: for &i in &order {
                let mut routed: Vec<usize> =
                    (0..current[i].len()).filter(|&p| !excluded[i][p]).collect();
                routed.sort_by(|&a, &b| {
                    marginal[i][b]
                        .partial_cmp(&marginal[i][a])
                        .unwrap_or(Ordering::Equal)
                });
                for &from in &routed {
                    if current[i][from] <= 0.0 {
                        continue;
                    }
                    for &to in routed.iter().rev() {
                        if to == from {
                            continue;
                        }
                        let amount = step.min(current[i][from]);
                        let (old_from, old_to) = (current[i][from], current[i][to]);
                        current[i][from] = (old_from - amount).max(0.0);
                        current[i][to] = (old_to + amount).min(1.0);
                        let feasible = eval.terms(&current, &mut trial_terms);
                        let trial_ranked = sorted_desc(&trial_terms);
                        if feasible && lex_less(&trial_ranked, &ranked) {
                            std::mem::swap(&mut terms, &mut trial_terms);
                            ranked = trial_ranked;
                            moved = true;
                            break 'pairs;
                        }
                        current[i][from] = old_from;
                        current[i][to] = old_to;
                    }
                }
            }
            if !moved {
                break;
            }
        }
    }
    let value = eval.evaluate(&current);
    let splits = current
        .into_iter()
        .zip(excluded)
        .map(|(fractions, excluded)| SplitVector {
            fractions,
            excluded,
        })
        .collect();
    Ok((splits, value))
}

/// `T_i / c_p · E_p` for every path at the point last passed to `terms`.
fn marginal_costs(eval: &Evaluator) -> Vec<Vec<f64>> {
    eval.paths
        .iter()
        .enumerate()
        .map(|(i, paths)| {
            paths
                .iter()
                .enumerate()
                .map(|(p, links)| {
                    let e: f64 = links.iter().map(|&l| eval.energy[l]).sum();
                    eval.demand[i] / eval.bottleneck[i][p] * e
                })
                .collect()
        })
        .collect()
}

/// Best energy saving reachable by excluding paths and sleeping the links
/// they leave unused.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySaving {
    /// `1 − E_best / E_reference`.
    pub saving: f64,
    /// Watts with every link awake at the no-exclusion optimum.
    pub reference_energy: f64,
    pub optimal_energy: f64,
    pub sleeping: Vec<LinkId>,
    pub excluded: Vec<(PairId, usize)>,
    #[serde(skip)]
    pub splits: Vec<SplitVector>,
    pub objective: ObjectiveValue,
}

/// Non-empty subsets of `n` paths as keep-masks, the full set first.
fn keep_masks(n: usize) -> Vec<Vec<bool>> {
    let full = (1u32 << n) - 1;
    (1..=full)
        .rev()
        .map(|m| (0..n).map(|p| m & (1 << p) != 0).collect())
        .collect()
}

/// Enumerates every combination of per-pair path subsets (each pair keeps
/// at least one path), sleeps links no kept path crosses, minimizes the
/// objective on what remains with [`brute_force_solve`], and reports the
/// largest saving over all feasible combinations.
///
/// The reference is the no-exclusion optimum with every link awake.
pub fn optimal_energy_saving(
    scenario: &Scenario,
    grid_step: f64,
    budget: u128,
) -> Result<EnergySaving> {
    let units = grid_units(grid_step)?;
    let mut base = scenario.clone();
    for pair in &mut base.pairs {
        pair.splits = SplitVector::uniform(pair.paths.len());
    }
    base.wake_all_links();

    let masks: Vec<Vec<Vec<bool>>> = base
        .pairs
        .iter()
        .map(|p| keep_masks(p.paths.len()))
        .collect();
    let needed = masks
        .iter()
        .map(|ms| {
            ms.iter()
                .map(|m| simplex_points(units, m.iter().filter(|k| **k).count()))
                .sum::<u128>()
        })
        .fold(1u128, |a, b| a.saturating_mul(b));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let (ref_splits, _) = brute_force_solve(&base, grid_step, u128::MAX)?;
    let reference_energy = energy_at(&base, &ref_splits)?;

    let mut best: Option<EnergySaving> = None;
    let mut odometer = vec![0usize; masks.len()];
    loop {
        let mut variant = base.clone();
        for (i, pair) in variant.pairs.iter_mut().enumerate() {
            let keep = &masks[i][odometer[i]];
            let mut s = SplitVector {
                fractions: vec![0.0; keep.len()],
                excluded: keep.iter().map(|k| !k).collect(),
            };
            s.reset_uniform();
            pair.splits = s;
        }
        sync_link_states(&mut variant);
        match brute_force_solve(&variant, grid_step, u128::MAX) {
            Ok((splits, objective)) => {
                let energy = energy_at(&variant, &splits)?;
                let saving = 1.0 - energy / reference_energy;
                let improves = best.as_ref().is_none_or(|b| saving > b.saving + 1e-12);
                if improves {
                    best = Some(EnergySaving {
                        saving,
                        reference_energy,
                        optimal_energy: energy,
                        sleeping: variant
                            .topology
                            .links()
                            .iter()
                            .filter(|l| l.state == LinkState::Sleeping)
                            .map(|l| l.id)
                            .collect(),
                        excluded: variant
                            .pairs
                            .iter()
                            .flat_map(|pair| {
                                pair.splits
                                    .excluded
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, e)| **e)
                                    .map(move |(p, _)| (pair.id, p))
                            })
                            .collect(),
                        splits,
                        objective,
                    });
                }
            }
            Err(Error::NoFeasiblePoint) => {}
            Err(e) => return Err(e),
        }

        let mut i = masks.len();
        loop {
            if i == 0 {
                return best.ok_or(Error::NoFeasiblePoint);
            }
            i -= 1;
            odometer[i] += 1;
            if odometer[i] < masks[i].len() {
                break;
            }
            odometer[i] = 0;
        }
    }
}

/// Total network watts of `scenario` under `splits`.
pub fn energy_at(scenario: &Scenario, splits: &[SplitVector]) -> Result<f64> {
    let mut s = scenario.clone();
    s.set_splits(splits.to_vec());
    Ok(recompute_state(&s.topology, &s.pairs, &s.profile)?.total_energy())
}
