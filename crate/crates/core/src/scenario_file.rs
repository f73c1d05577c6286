//! TOML scenario files.
//!
//! ```toml
//! schema_version = 1
//! name = "two-routes"
//! nodes = [0, 1, 2, 3]
//!
//! [power_profile]          # optional, defaults shown
//! idle_fraction = 0.85
//! sleep_power_w = 0.0
//! base_power_w = { "10M" = 0.3, "100M" = 0.6, "1G" = 1.2, "10G" = 5.0 }
//!
//! [params]                 # optional, every field defaults
//! t_m_s = 1.0
//! t_u = 0.05
//! t_e_w = 0.5
//!
//! [[links]]
//! id = 0
//! src = 0
//! dst = 1
//! capacity_mbps = 1000.0
//! power_class = "1G"
//!
//! [[pairs]]
//! ingress = 0
//! egress = 3
//! demand_mbps = 600.0
//! k = 2                    # or: paths = [[0, 1], [2, 3]]
//! ```
//!
//! [`dump_scenario`] writes the normalized form: every default filled in,
//! generated paths spelled out, splits explicit. Dumping a parsed dump
//! reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fs;

use serde::{Deserialize, Serialize};

use crate::energy::PowerProfile;
use crate::entre::EntreParams;
use crate::error::{Error, Result};
use crate::model::{
    generate_disjoint_paths, validate_topology, IePair, Link, LinkId, LinkState, NodeId, PairId,
    Path, Scenario, SplitVector, Topology, Violation,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub nodes: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_profile: Option<ProfileSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSection>,
    #[serde(default)]
    pub links: Vec<LinkEntry>,
    #[serde(default)]
    pub pairs: Vec<PairEntry>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idle_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sleep_power_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_power_w: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_m_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_e_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_min_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_converge: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub id: u32,
    pub src: u32,
    pub dst: u32,
    pub capacity_mbps: f64,
    pub power_class: String,
    #[serde(default, skip_serializing_if = "is_active")]
    pub state: LinkState,
}

fn is_active(s: &LinkState) -> bool {
    *s == LinkState::Active
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
    pub ingress: u32,
    pub egress: u32,
    pub demand_mbps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excluded: Option<Vec<bool>>,
}

impl ScenarioFile {
    /// Builds and validates the in-memory scenario, filling defaults.
    pub fn into_scenario(self) -> Result<Scenario> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let profile = {
            let mut p = PowerProfile::default();
            if let Some(s) = self.power_profile {
                if let Some(v) = s.idle_fraction {
                    p.idle_fraction = v;
                }
                if let Some(v) = s.sleep_power_w {
                    p.sleep_power = v;
                }
                if let Some(v) = s.base_power_w {
                    p.base_power = v;
                }
            }
            p
        };
        let params = {
            let mut p = EntreParams::default();
            if let Some(s) = self.params {
                p.t_m = s.t_m_s.unwrap_or(p.t_m);
                p.t_u = s.t_u.unwrap_or(p.t_u);
                p.t_e = s.t_e_w.unwrap_or(p.t_e);
                p.u_min = s.u_min.unwrap_or(p.u_min);
                p.e_min = s.e_min_w.unwrap_or(p.e_min);
                p.eps_converge = s.eps_converge.unwrap_or(p.eps_converge);
                p.max_iters = s.max_iters.unwrap_or(p.max_iters);
            }
            p
        };
        let links = self
            .links
            .iter()
            .map(|l| Link {
                state: l.state,
                ..Link::new(l.id, l.src, l.dst, l.capacity_mbps, l.power_class.clone())
            })
            .collect();
        let topology = Topology::new(self.nodes.iter().copied().map(NodeId).collect(), links);

        let mut violations: Vec<Violation> = profile
            .check()
            .into_iter()
            .chain(params.check())
            .map(Violation::Config)
            .collect();
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (idx, entry) in self.pairs.into_iter().enumerate() {
            let id = PairId(entry.id.unwrap_or(idx as u32));
            let paths = match (entry.paths, entry.k) {
                (Some(paths), _) => paths
                    .into_iter()
                    .map(|links| Path::new(id, links))
                    .collect(),
                (None, Some(k)) => match generate_disjoint_paths(
                    &topology,
                    id,
                    NodeId(entry.ingress),
                    NodeId(entry.egress),
                    k,
                ) {
                    Ok(paths) => paths,
                    Err(e) => {
                        violations.push(Violation::Config(format!("pair {id}: {e}")));
                        Vec::new()
                    }
                },
                (None, None) => {
                    violations.push(Violation::Config(format!(
                        "pair {id} needs either explicit `paths` or `k`"
                    )));
                    Vec::new()
                }
            };
            let n = paths.len();
            let splits = match entry.splits {
                Some(fractions) => SplitVector {
                    excluded: entry
                        .excluded
                        .unwrap_or_else(|| vec![false; fractions.len()]),
                    fractions,
                },
                None => {
                    let mut s = SplitVector::uniform(n);
                    if let Some(excluded) = entry.excluded {
                        s.excluded = excluded;
                        s.reset_uniform();
                    }
                    s
                }
            };
            pairs.push(IePair {
                id,
                ingress: NodeId(entry.ingress),
                egress: NodeId(entry.egress),
                demand: entry.demand_mbps,
                paths,
                splits,
            });
        }
        let scenario = Scenario {
            name: self.name,
            topology,
            profile,
            pairs,
            params,
        };
        violations.extend(validate_topology(&scenario));
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        Ok(scenario)
    }

    /// Normalized file form of a scenario.
    pub fn from_scenario(scenario: &Scenario) -> Self {
        let p = &scenario.params;
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            name: scenario.name.clone(),
            nodes: scenario.topology.nodes().iter().map(|n| n.0).collect(),
            power_profile: Some(ProfileSection {
                idle_fraction: Some(scenario.profile.idle_fraction),
                sleep_power_w: Some(scenario.profile.sleep_power),
                base_power_w: Some(scenario.profile.base_power.clone()),
            }),
            params: Some(ParamsSection {
                t_m_s: Some(p.t_m),
                t_u: Some(p.t_u),
                t_e_w: Some(p.t_e),
                u_min: Some(p.u_min),
                e_min_w: Some(p.e_min),
                eps_converge: Some(p.eps_converge),
                max_iters: Some(p.max_iters),
            }),
            links: scenario
                .topology
                .links()
                .iter()
                .map(|l| LinkEntry {
                    id: l.id.0,
                    src: l.src.0,
                    dst: l.dst.0,
                    capacity_mbps: l.capacity,
                    power_class: l.power_class.clone(),
                    state: l.state,
                })
                .collect(),
            pairs: scenario
                .pairs
                .iter()
                .map(|pair| PairEntry {
                    id: Some(pair.id.0),
                    ingress: pair.ingress.0,
                    egress: pair.egress.0,
                    demand_mbps: pair.demand,
                    k: None,
                    paths: Some(
                        pair.paths
                            .iter()
                            .map(|p| p.links.iter().map(|&LinkId(l)| l).collect())
                            .collect(),
                    ),
                    splits: Some(pair.splits.fractions.clone()),
                    excluded: pair
                        .splits
                        .excluded
                        .iter()
                        .any(|e| *e)
                        .then(|| pair.splits.excluded.clone()),
                })
                .collect(),
        }
    }
}

pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_scenario()
}

pub fn parse_scenario(path: impl AsRef<std::path::Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_scenario_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn dump_scenario(scenario: &Scenario) -> String {
    toml::to_string(&ScenarioFile::from_scenario(scenario))
        .expect("scenario files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
nodes = [0, 1]

[[links]]
id = 0
src = 0
dst = 1
capacity_mbps = 10.0
power_class = "1G"

[[pairs]]
ingress = 0
egress = 1
demand_mbps = 5.0
paths = [[0]]
"#;

    #[test]
    fn minimal_file_gets_defaults() {
        let s = parse_scenario_str(MINIMAL).unwrap();
        assert_eq!(s.params, EntreParams::default());
        assert_eq!(s.profile, PowerProfile::default());
        assert_eq!(s.pairs[0].id, PairId(0));
        assert_eq!(s.pairs[0].splits.fractions, vec![1.0]);
        let dump = dump_scenario(&s);
        assert!(dump.contains("idle_fraction = 0.85"));
        assert!(dump.contains("u_min = 0.0"));
    }

    #[test]
    fn negative_capacity_fails_validation() {
        let text = MINIMAL.replace("capacity_mbps = 10.0", "capacity_mbps = -10.0");
        match parse_scenario_str(&text) {
            Err(Error::Validation(v)) => {
                assert!(v
                    .iter()
                    .any(|v| matches!(v, Violation::NonPositiveCapacity { .. })))
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_link_in_path_is_named() {
        let text = MINIMAL.replace("paths = [[0]]", "paths = [[0], [42]]");
        let err = parse_scenario_str(&text).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("unknown link 42"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scenario_str("schema_version = 1\nnodes = [0,").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = MINIMAL.replace("schema_version = 1", "schema_version = 7");
        assert!(matches!(parse_scenario_str(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn k_generates_paths() {
        let text = r#"
schema_version = 1
nodes = [0, 1, 2, 3]
links = [
  { id = 0, src = 0, dst = 1, capacity_mbps = 10.0, power_class = "1G" },
  { id = 1, src = 1, dst = 3, capacity_mbps = 10.0, power_class = "1G" },
  { id = 2, src = 0, dst = 2, capacity_mbps = 10.0, power_class = "1G" },
  { id = 3, src = 2, dst = 3, capacity_mbps = 10.0, power_class = "1G" },
]
pairs = [{ ingress = 0, egress = 3, demand_mbps = 4.0, k = 5 }]
"#;
        let s = parse_scenario_str(text).unwrap();
        assert_eq!(s.pairs[0].paths.len(), 2);
        assert_eq!(s.pairs[0].splits.fractions, vec![0.5, 0.5]);
    }
}
