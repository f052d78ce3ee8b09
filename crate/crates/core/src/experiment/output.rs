use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::sweep::RunReport;
use super::ExperimentError;

pub const RESULTS_FILE: &str = "results.csv";
pub const METADATA_FILE: &str = "metadata.json";

pub const CSV_HEADER: [&str; 11] = [
    "mode",
    "omega0",
    "omega",
    "time",
    "label",
    "ideal_prob",
    "shot_freq",
    "oracle_prob",
    "state_distance",
    "tvd_vs_ref",
    "seed",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultFiles {
    pub results: PathBuf,
    pub metadata: PathBuf,
}

#[derive(Serialize)]
struct PointMeta<'a> {
    omega: f64,
    time: f64,
    seed: u64,
    theta: Option<f64>,
    theta_clamped: Option<bool>,
    first_order_distance: Option<f64>,
    counts: &'a [u64],
}

#[derive(Serialize)]
struct Metadata<'a> {
    code_version: &'a str,
    config_hash: &'a str,
    config: &'a super::RunConfig,
    oracle_steps: usize,
    prng: &'a str,
    results_file: &'a str,
    points: Vec<PointMeta<'a>>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io { path: path.to_path_buf(), source }
}

/// CSV text of the results table, one row per (ω, t, label).
pub fn results_csv(report: &RunReport) -> Result<String, ExperimentError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for p in &report.points {
        let freqs = p.counts.frequencies();
        let oracle = p.oracle.probabilities();
        for (i, (label, ideal)) in p.ideal.iter().enumerate() {
            w.write_record([
                p.mode.as_str().to_string(),
                p.omega0.to_string(),
                p.drive_freq.to_string(),
                p.time.to_string(),
                label.to_string(),
                ideal.to_string(),
                freqs[i].to_string(),
                oracle[i].to_string(),
                p.state_distance.to_string(),
                p.tvd_vs_ref.map(|v| v.to_string()).unwrap_or_default(),
                p.seed.to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| ExperimentError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn metadata_json(report: &RunReport) -> String {
    let meta = Metadata {
        code_version: &report.code_version,
        config_hash: &report.config_hash,
        config: &report.config,
        oracle_steps: crate::oracle::DEFAULT_EXACT_STEPS,
        prng: "ChaCha8 (rand_chacha), seed_from_u64(splitmix64(seed, omega, time))",
        results_file: RESULTS_FILE,
        points: report
            .points
            .iter()
            .map(|p| PointMeta {
                omega: p.drive_freq,
                time: p.time,
                seed: p.seed,
                theta: p.theta.map(|b| b.theta),
                theta_clamped: p.theta.map(|b| b.clamped),
                first_order_distance: p.first_order_distance,
                counts: &p.counts.counts,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&meta).expect("metadata serialises");
    s.push('\n');
    s
}

/// Writes `results.csv` and `metadata.json` into `dir`, creating it if needed.
pub fn write_results(report: &RunReport, dir: &Path) -> Result<ResultFiles, ExperimentError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let results = dir.join(RESULTS_FILE);
    let metadata = dir.join(METADATA_FILE);
    fs::write(&results, results_csv(report)?).map_err(io_err(&results))?;
    fs::write(&metadata, metadata_json(report)).map_err(io_err(&metadata))?;
    Ok(ResultFiles { results, metadata })
}
