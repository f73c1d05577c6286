//! Parse a hand-written scenario that asks for generated paths, then show
//! its normalized dump and check that the dump parses back to itself.

use entre::scenario_file::{dump_scenario, parse_scenario_str};

const SCENARIO: &str = r#"
schema_version = 1
name = "square"
nodes = [0, 1, 2, 3]

[params]
t_e_w = 0.3

[[links]]
id = 0
src = 0
dst = 1
capacity_mbps = 100.0
power_class = "100M"

[[links]]
id = 1
src = 1
dst = 3
capacity_mbps = 100.0
power_class = "100M"

[[links]]
id = 2
src = 0
dst = 2
capacity_mbps = 1000.0
power_class = "1G"

[[links]]
id = 3
src = 2
dst = 3
capacity_mbps = 1000.0
power_class = "1G"

[[pairs]]
ingress = 0
egress = 3
demand_mbps = 80.0
k = 2
"#;

fn main() -> entre::Result<()> {
    let scenario = parse_scenario_str(SCENARIO)?;
    let dump = dump_scenario(&scenario);
    println!("{dump}");
    let again = dump_scenario(&parse_scenario_str(&dump)?);
    assert_eq!(dump, again);
    println!("# normalized dump is stable under parse -> dump");

    match parse_scenario_str(&SCENARIO.replace("k = 2", "paths = [[0, 1], [2, 9]]")) {
        Err(e) => println!("# a path through an unknown link is rejected:\n# {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
