//! Command implementations behind the `swarmsim` binary: run scenarios, run
//! noise sweeps, validate configs, and emit trajectory/metric/summary files.
//!
//! Output formats:
//! - `trajectories.csv`: `step,time,agent_id,x,y,z,vx,vy,vz,cmd_vx,cmd_vy,cmd_vz`
//! - `metrics.csv`: `step,time,min_pair,avg_pair,min_obstacle,deviation_energy`
//! - `summary.json` / `sweep_summary.json`: pretty-printed JSON
//! - `sweep.csv`: `sigma_r,sigma_az,seed,run_min_dist,run_avg_dist,faults`
//!
//! Floats are printed in scientific notation with nine significant digits so
//! repeated runs are byte-comparable.

use crate::engine::{run_named, EngineError, MetricsRow, RunOptions, RunSummary, StepSink, TrajectoryRow};
use crate::metrics::{stability_sweep, SweepResult};
use crate::world::{load_scenario, ScenarioConfig, ScenarioError};
use serde::Serialize;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SWARMSIM_OUT";

/// Nine significant digits, locale-independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.8e}")
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    InvalidArgument(String),
}

impl CliError {
    /// Exit status for hard errors (config or I/O): always 1.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

/// What a completed `run` reports back to the process boundary.
#[derive(Debug)]
pub struct RunOutcome {
    pub summary: RunSummary,
}

impl RunOutcome {
    /// 0 on a clean run, 2 when the run completed but logged faults.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fault_count == 0 {
            0
        } else {
            2
        }
    }
}

fn read_scenario(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    Ok(load_scenario(&text)?)
}

fn create_out_dir(out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|source| CliError::Write { path: out_dir.to_path_buf(), source })
}

fn scenario_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string())
}

/// CSV writer pair implementing the engine's sink interface.
pub struct CsvSink {
    trajectories: BufWriter<File>,
    metrics: BufWriter<File>,
}

pub const TRAJECTORY_HEADER: &str = "step,time,agent_id,x,y,z,vx,vy,vz,cmd_vx,cmd_vy,cmd_vz";
pub const METRICS_HEADER: &str = "step,time,min_pair,avg_pair,min_obstacle,deviation_energy";

impl CsvSink {
    pub fn create(out_dir: &Path) -> Result<CsvSink, CliError> {
        let open = |name: &str| -> Result<BufWriter<File>, CliError> {
            let path = out_dir.join(name);
            let file = File::create(&path).map_err(|source| CliError::Write { path, source })?;
            Ok(BufWriter::new(file))
        };
        let mut trajectories = open("trajectories.csv")?;
        let mut metrics = open("metrics.csv")?;
        let head = |w: &mut BufWriter<File>, header: &str| -> io::Result<()> {
            writeln!(w, "{header}")
        };
        head(&mut trajectories, TRAJECTORY_HEADER)
            .map_err(|source| CliError::Write { path: out_dir.join("trajectories.csv"), source })?;
        head(&mut metrics, METRICS_HEADER)
            .map_err(|source| CliError::Write { path: out_dir.join("metrics.csv"), source })?;
        Ok(CsvSink { trajectories, metrics })
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.trajectories.flush()?;
        self.metrics.flush()
    }
}

impl StepSink for CsvSink {
    fn trajectory_row(&mut self, r: &TrajectoryRow) -> io::Result<()> {
        writeln!(
            self.trajectories,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.step,
            fmt_f64(r.time),
            r.agent_id,
            fmt_f64(r.position.x),
            fmt_f64(r.position.y),
            fmt_f64(r.position.z),
            fmt_f64(r.velocity.x),
            fmt_f64(r.velocity.y),
            fmt_f64(r.velocity.z),
            fmt_f64(r.commanded.x),
            fmt_f64(r.commanded.y),
            fmt_f64(r.commanded.z),
        )
    }

    fn metrics_row(&mut self, r: &MetricsRow) -> io::Result<()> {
        writeln!(
            self.metrics,
            "{},{},{},{},{},{}",
            r.step,
            fmt_f64(r.time),
            fmt_f64(r.min_pair),
            fmt_f64(r.avg_pair),
            fmt_f64(r.min_obstacle),
            fmt_f64(r.deviation_energy),
        )
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable summary");
    fs::write(path, text + "\n")
        .map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
}

/// Runs one scenario and writes `trajectories.csv`, `metrics.csv`, and
/// `summary.json` into `out_dir`. An engine I/O failure still leaves the
/// partial outputs flushed and an error record in the summary file.
pub fn cmd_run(
    scenario_path: &Path,
    seed_override: Option<u64>,
    out_dir: &Path,
    options: &RunOptions,
) -> Result<RunOutcome, CliError> {
    let mut config = read_scenario(scenario_path)?;
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    create_out_dir(out_dir)?;
    let mut sink = CsvSink::create(out_dir)?;
    let name = scenario_name(scenario_path);
    match run_named(&config, options, &mut sink, &name) {
        Ok(summary) => {
            sink.finish()
                .map_err(|source| CliError::Write { path: out_dir.to_path_buf(), source })?;
            write_json(&out_dir.join("summary.json"), &summary)?;
            Ok(RunOutcome { summary })
        }
        Err(e) => {
            let _ = sink.finish();
            let message = e.to_string();
            write_json(&out_dir.join("summary.json"), &ErrorRecord { error: &message })?;
            Err(e.into())
        }
    }
}

/// Runs the noise sweep: the scenario's sigma_r/sigma_az are scaled by every
/// entry of `scales`, each level is run once per seed (seeds are
/// `base_seed..base_seed+seed_count`), and `sweep.csv` plus
/// `sweep_summary.json` land in `out_dir`. Faulted runs are data, not errors.
pub fn cmd_sweep(
    scenario_path: &Path,
    scales: &[f64],
    seed_count: usize,
    out_dir: &Path,
    options: &RunOptions,
) -> Result<SweepResult, CliError> {
    let config = read_scenario(scenario_path)?;
    if scales.len() < 2 {
        return Err(CliError::InvalidArgument(
            "sweep needs at least two scale levels".to_string(),
        ));
    }
    if seed_count < 2 {
        return Err(CliError::InvalidArgument("sweep needs at least two seeds".to_string()));
    }
    let levels: Vec<(f64, f64)> = scales
        .iter()
        .map(|s| (config.noise.sigma_r * s, config.noise.sigma_az * s))
        .collect();
    let seeds: Vec<u64> = (0..seed_count as u64).map(|i| config.seed.wrapping_add(i)).collect();
    let result = stability_sweep(&config, &levels, &seeds, options)
        .map_err(|e| CliError::InvalidArgument(e.to_string()))?;

    create_out_dir(out_dir)?;
    let csv_path = out_dir.join("sweep.csv");
    let mut csv = String::from("sigma_r,sigma_az,seed,run_min_dist,run_avg_dist,faults\n");
    for level in &result.levels {
        for r in &level.runs {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(level.sigma_r),
                fmt_f64(level.sigma_az),
                r.seed,
                fmt_f64(r.run_min_dist),
                fmt_f64(r.run_avg_dist),
                r.faults,
            ));
        }
    }
    fs::write(&csv_path, csv).map_err(|source| CliError::Write { path: csv_path, source })?;
    write_json(&out_dir.join("sweep_summary.json"), &result)?;
    Ok(result)
}

/// Validates a scenario file and returns its normalized form as pretty JSON.
pub fn cmd_validate(scenario_path: &Path) -> Result<String, CliError> {
    let config = read_scenario(scenario_path)?;
    Ok(serde_json::to_string_pretty(&config).expect("config serializes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_has_nine_significant_digits() {
        assert_eq!(fmt_f64(0.0), "0.00000000e0");
        assert_eq!(fmt_f64(1.0), "1.00000000e0");
        assert_eq!(fmt_f64(-0.125), "-1.25000000e-1");
        assert_eq!(fmt_f64(123456789.0), "1.23456789e8");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }
}
