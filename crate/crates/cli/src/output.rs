//! Per-case output files and the cross-case comparison table. Every file
//! is written to a temporary sibling and renamed into place, so a crashed
//! run never leaves half-written artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use aerogrid::model::CaseId;
use aerogrid::planner::{write_plan_text, ExchangeMove};
use aerogrid::simulator::MetricsReport;

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("moving {} into place", path.display()))?;
    Ok(())
}

/// Write the metrics file, both plot-ready series files and the move log
/// for one case. Returns the metrics file path.
pub fn write_case_files(
    out_dir: &Path,
    case: CaseId,
    report: &MetricsReport,
    moves: &[ExchangeMove],
) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let slug = case.slug();

    let metrics = out_dir.join(format!("metrics_{slug}.json"));
    write_atomic(&metrics, report.to_json().as_bytes())?;

    let mut buf = Vec::new();
    report.write_weekly_outages_csv(&mut buf)?;
    write_atomic(&out_dir.join(format!("weekly_outages_{slug}.csv")), &buf)?;

    let mut buf = Vec::new();
    report.write_weekly_exchanges_csv(&mut buf)?;
    write_atomic(&out_dir.join(format!("weekly_exchanges_{slug}.csv")), &buf)?;

    let mut buf = Vec::new();
    write_plan_text(&mut buf, moves)?;
    write_atomic(&out_dir.join(format!("moves_{slug}.csv")), &buf)?;

    Ok(metrics)
}

/// Render the comparison table across the cases that actually ran.
/// Reduction columns are blank when the baseline was not among them.
pub fn comparison_csv(reports: &[MetricsReport]) -> String {
    let baseline = reports
        .iter()
        .find(|r| r.case_id == CaseId::Baseline)
        .map(|r| r.total_outages);
    let mut out =
        String::from("case,total_outages,reduction_pct_vs_baseline,total_exchanges,total_energy_transferred_wh\n");
    for report in reports {
        let reduction = match baseline {
            Some(base) if base > 0 => {
                format!("{:.4}", 100.0 * (1.0 - report.total_outages as f64 / base as f64))
            }
            Some(_) => "0.0000".to_string(),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            report.case_id.slug(),
            report.total_outages,
            reduction,
            report.total_exchanges,
            report.total_energy_transferred_wh
        ));
    }
    out
}
