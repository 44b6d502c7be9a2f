//! Flat CSV output for sweep rows.
//!
//! The column set and order are part of the tool's contract, so the writer
//! is explicit rather than reflective. Floats go through `Display`, which
//! prints the shortest decimal string that parses back to the same value.

use super::SweepRow;
use crate::Result;
use std::fmt::Write as _;
use std::path::Path;

/// Header line every sweep CSV starts with.
pub const CSV_HEADER: &str =
    "setting,policy,grid_value,K,runs,mean_risk,se_risk,mean_tau,misid_rate,mean_simple_regret";

/// Render rows to a CSV string with a trailing newline.
pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.setting.as_str(),
            row.policy,
            row.grid_value,
            row.num_arms,
            row.runs,
            row.mean_risk,
            row.se_risk,
            row.mean_tau,
            row.misid_rate,
            row.mean_simple_regret,
        );
    }
    out
}

/// Write rows to `path`, creating parent directories as needed.
pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, csv_string(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Setting;

    fn sample_row() -> SweepRow {
        SweepRow {
            setting: Setting::TwoArmGaussian,
            policy: "dbcare:mi".to_string(),
            grid_value: 0.05,
            num_arms: 2,
            runs: 1000,
            mean_risk: 0.2552585092994046,
            se_risk: 0.001953125,
            mean_tau: 1839.412,
            misid_rate: 0.071,
            mean_simple_regret: 0.00355,
        }
    }

    #[test]
    fn header_and_layout_are_stable() {
        let text = csv_string(&[sample_row()]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "two_arm_gaussian,dbcare:mi,0.05,2,1000,0.2552585092994046,0.001953125,1839.412,0.071,0.00355"
        );
        assert!(lines.next().is_none());
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn floats_round_trip_through_the_csv() {
        let row = sample_row();
        let text = csv_string(std::slice::from_ref(&row));
        let data_line = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = data_line.split(',').collect();
        assert_eq!(fields[5].parse::<f64>().unwrap(), row.mean_risk);
        assert_eq!(fields[7].parse::<f64>().unwrap(), row.mean_tau);
    }

    #[test]
    fn empty_rows_still_emit_the_header() {
        let text = csv_string(&[]);
        assert_eq!(text, format!("{CSV_HEADER}\n"));
    }
}
