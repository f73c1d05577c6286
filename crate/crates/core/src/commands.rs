//! The four batch commands behind the `entre` binary.
//!
//! Each command reads a scenario file, writes its artifacts into an output
//! directory (where it takes one) and returns what it computed, so the same
//! entry points serve the binary, the examples and the tests.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::energy::recompute_state;
use crate::entre::sync_link_states;
use crate::error::{Error, Result};
use crate::model::{PairId, Scenario};
use crate::optimizer::{
    brute_force_solve, descent_solve, optimal_energy_saving, EnergySaving, ObjectiveValue,
    DEFAULT_BUDGET,
};
use crate::report::{summary_table, write_rows, write_trajectory_csv};
use crate::scenario_file::{dump_scenario, parse_scenario};
use crate::simulator::{deliver, run, snapshot, summarize, Strategy, Summary, Trajectory};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.txt";
pub const SCENARIO_DUMP_FILE: &str = "scenario.toml";
pub const COMPARE_FILE: &str = "compare.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

/// Watts drawn with the scenario's initial splits and every link awake.
pub fn initial_energy(scenario: &Scenario) -> Result<f64> {
    let mut s = scenario.clone();
    s.wake_all_links();
    Ok(recompute_state(&s.topology, &s.pairs, &s.profile)?.total_energy())
}

fn create_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

pub struct RunOutput {
    pub trajectory: Trajectory,
    pub summary: Summary,
}

/// Simulates one strategy. Writes `trajectory.csv`, `summary.txt` and the
/// normalized scenario. Energy saving is measured against
/// [`initial_energy`].
pub fn cmd_run(scenario_path: &Path, strategy: Strategy, out: &Path) -> Result<RunOutput> {
    let scenario = parse_scenario(scenario_path)?;
    create_dir(out)?;
    fs::write(out.join(SCENARIO_DUMP_FILE), dump_scenario(&scenario))?;

    let trajectory = run(&scenario, strategy, &scenario.params)?;
    let summary = summarize(&trajectory, initial_energy(&scenario)?);
    write_trajectory_csv(
        fs::File::create(out.join(TRAJECTORY_FILE))?,
        &trajectory.snapshots,
    )?;
    fs::write(
        out.join(SUMMARY_FILE),
        summary_table(std::slice::from_ref(&summary)),
    )?;
    log::info!(
        "{strategy} on {}: {} rounds, converged {}",
        scenario.name,
        trajectory.iterations,
        trajectory.converged
    );
    Ok(RunOutput {
        trajectory,
        summary,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Grid,
    Descent,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Grid => "grid",
            Method::Descent => "descent",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Method::Grid),
            "descent" => Ok(Method::Descent),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairSplits {
    pub id: PairId,
    pub splits: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeOutput {
    pub scenario: String,
    pub method: Method,
    pub grid_step: f64,
    pub objective: f64,
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_pair: Option<PairId>,
    pub pairs: Vec<PairSplits>,
}

impl OptimizeOutput {
    /// TOML rendering, as printed by the binary.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("optimizer output always serializes")
    }
}

/// Step sizes tried by the descent method, coarse to fine.
pub fn descent_schedule(grid_step: f64) -> Vec<f64> {
    let mut steps = Vec::new();
    let mut s = grid_step;
    while s >= 1e-3 && steps.len() < 8 {
        steps.push(s);
        s /= 2.0;
    }
    if steps.is_empty() {
        steps.push(grid_step);
    }
    steps
}

/// Moves accepted per step size before descent gives up on that size.
pub const DESCENT_ITERS: usize = 10_000;

/// Minimizes the objective from the file's splits. `grid` searches the
/// lattice of step `grid_step`; `descent` starts at the file's splits.
pub fn cmd_optimize(
    scenario_path: &Path,
    method: Method,
    grid_step: f64,
) -> Result<OptimizeOutput> {
    let scenario = parse_scenario(scenario_path)?;
    let (splits, value): (_, ObjectiveValue) = match method {
        Method::Grid => brute_force_solve(&scenario, grid_step, DEFAULT_BUDGET)?,
        Method::Descent => descent_solve(
            &scenario,
            &scenario.splits(),
            &descent_schedule(grid_step),
            DESCENT_ITERS,
        )?,
    };
    Ok(OptimizeOutput {
        scenario: scenario.name.clone(),
        method,
        grid_step,
        objective: value.value,
        feasible: value.feasible,
        argmax_pair: value.argmax_pair,
        pairs: scenario
            .pairs
            .iter()
            .zip(splits)
            .map(|(p, s)| PairSplits {
                id: p.id,
                splits: s.fractions,
            })
            .collect(),
    })
}

pub struct CompareOutput {
    /// `entre`, `ospf`, `equal`, then `optimal`.
    pub rows: Vec<Summary>,
    pub optimal: EnergySaving,
    pub table: String,
}

/// Static summary of the optimizer's best assignment, links it leaves
/// unused asleep.
fn optimal_summary(scenario: &Scenario, best: &EnergySaving) -> Result<Summary> {
    let mut s = scenario.clone();
    s.set_splits(best.splits.clone());
    s.wake_all_links();
    sync_link_states(&mut s);
    let state = recompute_state(&s.topology, &s.pairs, &s.profile)?;
    let delivered = deliver(&s, &state, s.params.t_m);
    let snap = snapshot(1, &s, &state, &delivered, s.params.t_m, 0.0);
    Ok(Summary {
        label: "optimal".into(),
        throughput_mbps: snap.throughput,
        total_energy_w: snap.total_energy,
        energy_saving: best.saving,
        max_link_util: snap.max_link_utilization,
        sleeping_frac: snap.sleeping_links_fraction,
        excluded_frac: snap.excluded_routes_fraction,
        iterations: 0,
        converged: true,
    })
}

/// ENTRE, both baselines and the exhaustive optimum side by side. Savings
/// are measured against the all-awake no-exclusion optimum. Writes
/// `compare.csv` and `summary.txt`.
pub fn cmd_compare(scenario_path: &Path, grid_step: f64, out: &Path) -> Result<CompareOutput> {
    let scenario = parse_scenario(scenario_path)?;
    create_dir(out)?;
    let optimal = optimal_energy_saving(&scenario, grid_step, DEFAULT_BUDGET)?;
    let mut rows = Vec::new();
    for strategy in [Strategy::Entre, Strategy::Ospf, Strategy::Equal] {
        let t = run(&scenario, strategy, &scenario.params)?;
        rows.push(summarize(&t, optimal.reference_energy));
    }
    rows.push(optimal_summary(&scenario, &optimal)?);
    let table = summary_table(&rows);
    write_rows(fs::File::create(out.join(COMPARE_FILE))?, &rows)?;
    fs::write(out.join(SUMMARY_FILE), &table)?;
    Ok(CompareOutput {
        rows,
        optimal,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    /// Regenerate up to `k` edge-disjoint paths per pair.
    Paths,
    /// Scale every demand.
    Demand,
    /// Energy-excess threshold in watts.
    Te,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Paths => "paths",
            SweepParam::Demand => "demand",
            SweepParam::Te => "te",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paths" => Ok(SweepParam::Paths),
            "demand" => Ok(SweepParam::Demand),
            "te" => Ok(SweepParam::Te),
            other => Err(Error::Parse(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

/// One swept value: ENTRE next to OSPF.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: SweepParam,
    pub value: f64,
    pub entre_throughput_mbps: f64,
    pub entre_energy_w: f64,
    pub entre_saving: f64,
    pub entre_sleeping_frac: f64,
    pub entre_excluded_frac: f64,
    pub entre_iterations: usize,
    pub entre_converged: bool,
    pub ospf_throughput_mbps: f64,
    pub ospf_energy_w: f64,
}

/// `scenario` with `param` set to `value`.
pub fn apply_sweep_value(scenario: &Scenario, param: SweepParam, value: f64) -> Result<Scenario> {
    let mut s = scenario.clone();
    match param {
        SweepParam::Paths => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::InvalidRequest(format!(
                    "path count must be a positive integer, got {value}"
                )));
            }
            s.regenerate_paths(value as usize)?;
        }
        SweepParam::Demand => {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidRequest(format!(
                    "demand scale must be positive, got {value}"
                )));
            }
            s.scale_demands(value);
        }
        SweepParam::Te => {
            s.params.t_e = value;
            let problems = s.params.check();
            if !problems.is_empty() {
                return Err(Error::InvalidParams(problems.join("; ")));
            }
        }
    }
    Ok(s)
}

/// Runs ENTRE and OSPF for every value in order. Writes `sweep.csv`.
pub fn sweep_scenario(
    scenario: &Scenario,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let s = apply_sweep_value(scenario, param, value)?;
            let reference = initial_energy(&s)?;
            let entre = run(&s, Strategy::Entre, &s.params)?;
            let ospf = run(&s, Strategy::Ospf, &s.params)?;
            let e = summarize(&entre, reference);
            let o = summarize(&ospf, reference);
            Ok(SweepRow {
                param,
                value,
                entre_throughput_mbps: e.throughput_mbps,
                entre_energy_w: e.total_energy_w,
                entre_saving: e.energy_saving,
                entre_sleeping_frac: e.sleeping_frac,
                entre_excluded_frac: e.excluded_frac,
                entre_iterations: e.iterations,
                entre_converged: e.converged,
                ospf_throughput_mbps: o.throughput_mbps,
                ospf_energy_w: o.total_energy_w,
            })
        })
        .collect()
}

pub fn cmd_sweep(
    scenario_path: &Path,
    param: SweepParam,
    values: &[f64],
    out: &Path,
) -> Result<Vec<SweepRow>> {
    let scenario = parse_scenario(scenario_path)?;
    create_dir(out)?;
    let rows = sweep_scenario(&scenario, param, values)?;
    write_rows(fs::File::create(out.join(SWEEP_FILE))?, &rows)?;
    Ok(rows)
}

/// Parses a comma-separated value list such as `1,2,3` or `0.5, 1.5`.
pub fn parse_values(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("`{s}` is not a number")))
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(Error::Parse("empty value list".into()))
            } else {
                Ok(v)
            }
        })
}

/// Where the bundled scenario files live in the source tree.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(parse_values("1,x").is_err());
        assert!(parse_values(" , ").is_err());
    }

    #[test]
    fn descent_schedule_halves_down_to_a_thousandth() {
        assert_eq!(
            descent_schedule(0.05),
            vec![0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625]
        );
        assert_eq!(descent_schedule(1e-4), vec![1e-4]);
    }

    #[test]
    fn names_round_trip() {
        for m in [Method::Grid, Method::Descent] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        for p in [SweepParam::Paths, SweepParam::Demand, SweepParam::Te] {
            assert_eq!(p.to_string().parse::<SweepParam>().unwrap(), p);
        }
    }
}
