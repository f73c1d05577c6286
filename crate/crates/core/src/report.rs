//! CSV and plain-text output.
//!
//! Trajectory CSV columns, in order:
//! `round, throughput_mbps, total_energy_w, max_link_util, sleeping_frac,
//! excluded_frac, max_abs_delta_x`.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::simulator::{MetricsSnapshot, Summary};

pub const TRAJECTORY_COLUMNS: [&str; 7] = [
    "round",
    "throughput_mbps",
    "total_energy_w",
    "max_link_util",
    "sleeping_frac",
    "excluded_frac",
    "max_abs_delta_x",
];

pub fn write_trajectory_csv<W: Write>(out: W, snapshots: &[MetricsSnapshot]) -> Result<()> {
    write_rows(out, snapshots)
}

/// Any serializable rows as CSV with a header line.
pub fn write_rows<W: Write, R: Serialize>(out: W, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-width table of summaries, one line per strategy.
pub fn summary_table(rows: &[Summary]) -> String {
    let mut s = format!(
        "{:<10} {:>14} {:>12} {:>9} {:>9} {:>9} {:>9} {:>6}\n",
        "strategy", "throughput", "energy_w", "saving", "max_util", "sleeping", "excluded", "iters"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<10} {:>14.3} {:>12.4} {:>8.2}% {:>9.4} {:>8.2}% {:>8.2}% {:>6}\n",
            r.label,
            r.throughput_mbps,
            r.total_energy_w,
            100.0 * r.energy_saving,
            r.max_link_util,
            100.0 * r.sleeping_frac,
            100.0 * r.excluded_frac,
            r.iterations
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_header_matches_column_list() {
        let snap = MetricsSnapshot {
            round: 1,
            throughput: 10.0,
            total_energy: 2.0,
            max_link_utilization: 0.5,
            sleeping_links_fraction: 0.0,
            excluded_routes_fraction: 0.0,
            max_abs_delta_x: 0.0,
        };
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &[snap]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header, TRAJECTORY_COLUMNS.join(","));
        assert_eq!(text.lines().count(), 2);
    }
}
