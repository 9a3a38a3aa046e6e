pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, CommandError};
pub use config::{Command, ExperimentConfig, OutputFormat};
pub use report::Report;

/// Re-run the config echoed in a JSON report.
pub fn replay(report_json: &str) -> anyhow::Result<Report> {
    let v: serde_json::Value = serde_json::from_str(report_json)?;
    let cfg = v
        .get("config")
        .ok_or_else(|| anyhow::anyhow!("report has no config"))?;
    let cfg: ExperimentConfig = serde_json::from_value(cfg.clone())?;
    Ok(run(&cfg)?)
}
