mod common;

use std::collections::BTreeSet;

use common::{random_scenario, random_split, rng, GenConfig};
use entre::energy::recompute_state;
use entre::entre::{
    apply_and_renormalize, compute_delta_x, entre_round, PairRoundView, RoundAction,
};
use entre::model::{
    bottleneck_capacity, generate_disjoint_paths, validate_topology, Link, LinkId, LinkState,
    NodeId, PairId, Path, Scenario, Topology,
};
use entre::optimizer::evaluate_objective;
use entre::scenario_file::{dump_scenario, parse_scenario_str};
use entre::simulator::{deliver, run, Strategy};
use proptest::prelude::*;
use rand::Rng;

fn scenario_from(seed: u64) -> Scenario {
    random_scenario(&mut rng(seed), &GenConfig::default())
}

fn throughput(s: &Scenario) -> f64 {
    let state = recompute_state(&s.topology, &s.pairs, &s.profile).unwrap();
    deliver(s, &state, 1.0).iter().flatten().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn disjoint_paths_are_valid_and_edge_disjoint(seed in any::<u64>(), k in 1usize..6) {
        let mut r = rng(seed);
        let n = r.gen_range(3..9u32);
        let mut links = Vec::new();
        for src in 0..n {
            for dst in 0..n {
                if src != dst && r.gen_bool(0.35) {
                    links.push(Link::new(links.len() as u32, src, dst, 100.0, "1G"));
                }
            }
        }
        let topo = Topology::new((0..n).map(NodeId).collect(), links);
        match generate_disjoint_paths(&topo, PairId(0), NodeId(0), NodeId(n - 1), k) {
            Ok(paths) => {
                prop_assert!(!paths.is_empty() && paths.len() <= k);
                let mut seen = BTreeSet::new();
                for p in &paths {
                    let hops: Vec<&Link> = p.links.iter().map(|&id| topo.link(id).unwrap()).collect();
                    prop_assert_eq!(hops[0].src, NodeId(0));
                    prop_assert_eq!(hops[hops.len() - 1].dst, NodeId(n - 1));
                    let mut nodes = BTreeSet::from([NodeId(0)]);
                    for w in hops.windows(2) {
                        prop_assert_eq!(w[0].dst, w[1].src);
                    }
                    for h in &hops {
                        prop_assert!(nodes.insert(h.dst), "path revisits a node");
                        prop_assert!(seen.insert(h.id), "paths share link {}", h.id);
                    }
                }
            }
            Err(entre::Error::NoPath { .. }) => {
                // Independent reachability check.
                let mut reach = BTreeSet::from([NodeId(0)]);
                loop {
                    let before = reach.len();
                    for l in topo.links() {
                        if reach.contains(&l.src) {
                            reach.insert(l.dst);
                        }
                    }
                    if reach.len() == before {
                        break;
                    }
                }
                prop_assert!(!reach.contains(&NodeId(n - 1)));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn random_scenarios_validate(seed in any::<u64>()) {
        prop_assert!(validate_topology(&scenario_from(seed)).is_empty());
    }

    #[test]
    fn link_flow_is_the_sum_of_crossing_path_flows(seed in any::<u64>()) {
        let s = scenario_from(seed);
        let state = recompute_state(&s.topology, &s.pairs, &s.profile).unwrap();
        for (i, link) in s.topology.links().iter().enumerate() {
            let mut expected = 0.0;
            for pair in &s.pairs {
                for (path, &x) in pair.paths.iter().zip(&pair.splits.fractions) {
                    if path.links.contains(&link.id) {
                        expected += x * pair.demand;
                    }
                }
            }
            prop_assert!((state.link_flow[i] - expected).abs() <= 1e-9 * expected.max(1.0));
            prop_assert!((state.link_util[i] - expected / link.capacity).abs() <= 1e-9 * state.link_util[i].max(1.0));
        }
    }

    #[test]
    fn link_relabeling_changes_nothing(seed in any::<u64>(), offset in 1u32..1000) {
        let s = scenario_from(seed);
        let mut t = s.clone();
        let n = s.topology.links().len() as u32;
        // Reverse the id order and shift it.
        let relabel = |id: LinkId| LinkId(offset + n - 1 - id.0);
        let links: Vec<Link> = s.topology.links().iter().rev()
            .map(|l| Link { id: relabel(l.id), ..l.clone() })
            .collect();
        t.topology = Topology::new(s.topology.nodes().to_vec(), links);
        for pair in &mut t.pairs {
            for p in &mut pair.paths {
                p.links = p.links.iter().map(|&id| relabel(id)).collect();
            }
        }
        let a = recompute_state(&s.topology, &s.pairs, &s.profile).unwrap();
        let b = recompute_state(&t.topology, &t.pairs, &t.profile).unwrap();
        prop_assert!((a.total_energy() - b.total_energy()).abs() <= 1e-9 * a.total_energy());
        for (pa, pb) in a.path_energy.iter().flatten().zip(b.path_energy.iter().flatten()) {
            prop_assert!((pa - pb).abs() <= 1e-9 * pa.max(1.0));
        }
        for (pa, pb) in a.path_util.iter().flatten().zip(b.path_util.iter().flatten()) {
            prop_assert!((pa - pb).abs() <= 1e-9 * pa.max(1.0));
        }
        let ta = run(&s, Strategy::Entre, &s.params).unwrap();
        let tb = run(&t, Strategy::Entre, &t.params).unwrap();
        prop_assert_eq!(ta.iterations, tb.iterations);
        for (x, y) in ta.snapshots.iter().zip(&tb.snapshots) {
            prop_assert!((x.throughput - y.throughput).abs() <= 1e-6 * x.throughput.max(1.0));
        }
    }

    #[test]
    fn ungated_delta_x_sums_to_zero(
        rates in prop::collection::vec(0.0f64..1e4, 2..6),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let n = rates.len();
        let utils: Vec<f64> = (0..n).map(|_| r.gen_range(1e-3..3.0)).collect();
        let energies: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..20.0)).collect();
        let view = PairRoundView::new(PairId(0), vec![false; n], rates, utils, energies);
        prop_assert!(view.ungated(0.0));
        let dx = compute_delta_x(&view, 0.0);
        prop_assert!(dx.iter().sum::<f64>().abs() <= 1e-12);
    }

    #[test]
    fn renormalized_splits_stay_on_the_simplex(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let splits = random_split(&mut r, n);
        let actions: Vec<RoundAction> = (0..n)
            .map(|_| match r.gen_range(0..3) {
                0 => RoundAction::NoOp,
                _ => RoundAction::ApplyDelta(r.gen_range(-1.5..1.5)),
            })
            .collect();
        let out = apply_and_renormalize(&splits, &actions);
        prop_assert!((out.fractions.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(out.fractions.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn round_result_does_not_depend_on_pair_order(seed in any::<u64>()) {
        let s = scenario_from(seed);
        let mut t = s.clone();
        t.pairs.reverse();
        let step = |s: &mut Scenario| {
            let state = recompute_state(&s.topology, &s.pairs, &s.profile).unwrap();
            let delivered = deliver(s, &state, s.params.t_m);
            let params = s.params.clone();
            entre_round(s, &state, &delivered, &params).unwrap();
        };
        let (mut a, mut b) = (s, t);
        step(&mut a);
        step(&mut b);
        b.pairs.reverse();
        for (pa, pb) in a.pairs.iter().zip(&b.pairs) {
            prop_assert_eq!(pa.id, pb.id);
            prop_assert_eq!(&pa.splits.excluded, &pb.splits.excluded);
            for (x, y) in pa.splits.fractions.iter().zip(&pb.splits.fractions) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
        let states = |s: &Scenario| s.topology.links().iter().map(|l| l.state).collect::<Vec<_>>();
        prop_assert_eq!(states(&a), states(&b));
    }

    #[test]
    fn objective_is_monotone_in_demand(seed in any::<u64>(), factor in 1.0f64..3.0) {
        let s = scenario_from(seed);
        let mut t = s.clone();
        t.scale_demands(factor);
        let a = evaluate_objective(&s, &s.splits()).unwrap();
        let b = evaluate_objective(&t, &t.splits()).unwrap();
        prop_assert!(b.value >= a.value * (1.0 - 1e-12));
        prop_assert!(!b.feasible || a.feasible);
    }

    #[test]
    fn objective_matches_independent_computation(seed in any::<u64>()) {
        let s = scenario_from(seed);
        let got = evaluate_objective(&s, &s.splits()).unwrap();

        let state = recompute_state(&s.topology, &s.pairs, &s.profile).unwrap();
        let terms: Vec<f64> = s.pairs.iter().enumerate().map(|(i, pair)| {
            pair.paths.iter().zip(&pair.splits.fractions).enumerate()
                .map(|(p, (path, &x))| {
                    x * pair.demand / bottleneck_capacity(path, &s.topology) * state.path_energy[i][p]
                })
                .sum()
        }).collect();
        let expected = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((got.value - expected).abs() <= 1e-9 * expected.abs().max(1.0));

        let mut feasible = true;
        for pair in &s.pairs {
            let sum: f64 = pair.splits.fractions.iter().sum();
            feasible &= (sum - 1.0).abs() <= 1e-9;
            feasible &= pair.splits.fractions.iter().all(|x| (0.0..=1.0).contains(x));
        }
        for (l, &f) in s.topology.links().iter().zip(&state.link_flow) {
            feasible &= f <= l.capacity * (1.0 + 1e-9);
        }
        prop_assert_eq!(got.feasible, feasible);
    }

    #[test]
    fn parse_dump_parse_is_idempotent(seed in any::<u64>(), rounds in 0usize..4) {
        // Partially run scenarios exercise excluded paths and sleeping links.
        let mut s = scenario_from(seed);
        s.params.max_iters = rounds.max(1);
        if rounds > 0 {
            s = run(&s, Strategy::Entre, &s.params.clone()).unwrap().scenario;
        }
        let first = dump_scenario(&s);
        let parsed = parse_scenario_str(&first).unwrap();
        prop_assert_eq!(&parsed, &s);
        prop_assert_eq!(dump_scenario(&parsed), first);
    }

    #[test]
    fn throughput_does_not_grow_when_a_link_shrinks(
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
        factor in 0.05f64..1.0,
    ) {
        let cfg = GenConfig { load: 0.5..=2.5, ..GenConfig::default() };
        let s = random_scenario(&mut rng(seed), &cfg);
        let before = throughput(&s);
        let mut t = s.clone();
        let i = pick.index(t.topology.links().len());
        let c = t.topology.links()[i].capacity;
        t.topology.set_capacity(i, c * factor);
        let after = throughput(&t);
        prop_assert!(after <= before * (1.0 + 1e-12), "{} -> {}", before, after);
    }

    #[test]
    fn snapshot_fractions_match_recounts(seed in any::<u64>()) {
        let s = scenario_from(seed);
        let t = run(&s, Strategy::Entre, &s.params).unwrap();
        let last = t.last();
        let sleeping = t.scenario.topology.links().iter().filter(|l| l.state == LinkState::Sleeping).count();
        let excluded: usize = t.scenario.pairs.iter()
            .map(|p| p.splits.excluded.iter().filter(|&&e| e).count()).sum();
        let paths: usize = t.scenario.pairs.iter().map(|p| p.paths.len()).sum();
        prop_assert_eq!(last.sleeping_links_fraction, sleeping as f64 / t.scenario.topology.links().len() as f64);
        prop_assert_eq!(last.excluded_routes_fraction, excluded as f64 / paths as f64);
        prop_assert!(last.throughput <= s.total_demand() * (1.0 + 1e-12));
        for f in [last.sleeping_links_fraction, last.excluded_routes_fraction] {
            prop_assert!((0.0..=1.0).contains(&f));
        }
    }
}

#[test]
fn path_constructor_tags_pair() {
    let p = Path::new(PairId(3), [1, 2]);
    assert_eq!(p.pair, PairId(3));
    assert_eq!(p.hops(), 2);
}
