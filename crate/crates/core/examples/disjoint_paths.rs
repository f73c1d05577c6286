//! Edge-disjoint candidate path generation on the 20-router topology.

use entre::model::{bottleneck_capacity, generate_disjoint_paths};
use entre::reference;

fn main() -> entre::Result<()> {
    let scenario = reference::disjoint_paths();
    let topo = &scenario.topology;
    let pair = &scenario.pairs[0];
    for k in 1..=5 {
        let paths = generate_disjoint_paths(topo, pair.id, pair.ingress, pair.egress, k)?;
        println!("k = {k}: {} path(s)", paths.len());
        for p in &paths {
            let nodes: Vec<String> = std::iter::once(pair.ingress)
                .chain(
                    p.links
                        .iter()
                        .map(|&id| topo.link(id).expect("known link").dst),
                )
                .map(|n| n.to_string())
                .collect();
            println!(
                "  {}  ({} hops, bottleneck {} Mbit/s)",
                nodes.join(" -> "),
                p.hops(),
                bottleneck_capacity(p, topo)
            );
        }
    }
    Ok(())
}
