//! Regenerates the bundled scenario files.
//!
//! ```text
//! cargo run --example write_reference_scenarios [-- OUT_DIR]
//! ```

use std::fs;
use std::path::PathBuf;

use entre::commands::bundled_dir;
use entre::reference;
use entre::scenario_file::dump_scenario;

fn main() -> anyhow::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(bundled_dir);
    fs::create_dir_all(&dir)?;
    for scenario in reference::bundled() {
        let path = dir.join(format!("{}.toml", scenario.name));
        fs::write(&path, dump_scenario(&scenario))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
