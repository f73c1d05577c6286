//! Throughput as candidate paths are added, and energy at matched
//! throughput, for ENTRE against single-path OSPF.

use entre::commands::{sweep_scenario, SweepParam};
use entre::reference;

fn main() -> entre::Result<()> {
    println!("throughput vs. disjoint paths per pair");
    println!("    k   entre_mbps    ospf_mbps");
    let rows = sweep_scenario(
        &reference::disjoint_paths(),
        SweepParam::Paths,
        &[1.0, 2.0, 3.0, 4.0],
    )?;
    for r in &rows {
        println!(
            "{:>5} {:>12.1} {:>12.1}",
            r.value, r.entre_throughput_mbps, r.ospf_throughput_mbps
        );
    }

    println!("\nenergy vs. demand scale, redundant detours available");
    println!("scale   entre_mbps  entre_w   ospf_mbps   ospf_w");
    let rows = sweep_scenario(
        &reference::redundant_paths(),
        SweepParam::Demand,
        &[0.25, 0.5, 1.0, 1.5],
    )?;
    for r in &rows {
        println!(
            "{:>5} {:>12.1} {:>8.3} {:>11.1} {:>8.3}",
            r.value,
            r.entre_throughput_mbps,
            r.entre_energy_w,
            r.ospf_throughput_mbps,
            r.ospf_energy_w
        );
    }
    Ok(())
}
