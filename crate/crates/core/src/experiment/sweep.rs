use serde::Serialize;

use super::config::{Mode, RunConfig, TrotterSteps};
use super::reference::{load_reference_table, ReferenceTable, TableId};
use super::ExperimentError;
use crate::circuit::{
    bind_theta_from_time, build_single_qubit_circuit, build_trotter_circuit, build_two_qubit_circuit,
    Circuit, FieldSampling, ThetaBinding, ThetaBounds,
};
use crate::hamiltonian::DriveParams;
use crate::oracle::{
    dist_tv, exact_propagate, first_order_propagate, reduced_state_distance, state_distance,
    SingleQubitDrive, TwoQubitDrive, DEFAULT_EXACT_STEPS,
};
use crate::simulator::{self, init_state, marginal_probabilities, sample_shots, Distribution, ShotCounts};

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Seed for one sweep point: SplitMix64 folded over the base seed and the
/// bit patterns of ω and t, so points can run in any order.
pub fn point_seed(base: u64, drive_freq: f64, time: f64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(base) ^ drive_freq.to_bits()) ^ time.to_bits())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub mode: Mode,
    pub omega0: f64,
    pub drive_freq: f64,
    pub time: f64,
    /// Two-qubit rotation angle and whether it was clamped.
    pub theta: Option<ThetaBinding>,
    pub ideal: Distribution,
    pub counts: ShotCounts,
    pub oracle: Distribution,
    /// Circuit state vs exact propagation (reduced to the system qubits).
    pub state_distance: f64,
    /// Two-qubit only: circuit vs the first-order operator applied to `|00⟩`.
    pub first_order_distance: Option<f64>,
    pub tvd_vs_ref: Option<f64>,
    pub seed: u64,
    pub config_hash: String,
    pub code_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub config_hash: String,
    pub code_version: String,
    pub points: Vec<PointReport>,
}

/// Circuit for one sweep point, plus the two-qubit angle binding.
pub fn point_circuit(
    cfg: &RunConfig,
    drive: &DriveParams,
    time: f64,
) -> Result<(Circuit, Option<ThetaBinding>), ExperimentError> {
    match cfg.mode {
        Mode::Single => {
            let c = match cfg.trotter_steps {
                TrotterSteps::SingleShot => build_single_qubit_circuit(&cfg.osc, drive, time)?,
                TrotterSteps::Steps(n) => {
                    build_trotter_circuit(&cfg.osc, drive, time, n, FieldSampling::Midpoint)?
                }
            };
            Ok((c, None))
        }
        Mode::Two => {
            let (binding, bounds) = match cfg.theta_override {
                Some(theta) => {
                    let bounds = if cfg.allow_theta_out_of_bounds {
                        ThetaBounds::UNBOUNDED
                    } else {
                        ThetaBounds::SWEEP
                    };
                    (ThetaBinding { theta, clamped: false }, bounds)
                }
                None => (bind_theta_from_time(drive, time), ThetaBounds::BOUND_FROM_TIME),
            };
            Ok((build_two_qubit_circuit(binding.theta, bounds)?, Some(binding)))
        }
    }
}

fn run_point(
    cfg: &RunConfig,
    drive_freq: f64,
    time: f64,
    config_hash: &str,
) -> Result<PointReport, ExperimentError> {
    let drive = cfg.drive.with_drive_freq(drive_freq).map_err(|e| {
        ExperimentError::Config(super::ConfigError::new("omega", e.to_string()))
    })?;
    let (circuit, theta) = point_circuit(cfg, &drive, time)?;
    let start = init_state(circuit.num_qubits(), 0)?;
    let out = simulator::run(&circuit, &start)?;
    let ideal = marginal_probabilities(&out, circuit.system_qubits())?;
    let seed = point_seed(cfg.seed, drive_freq, time);
    let counts = sample_shots(&ideal, cfg.shots, seed)?;

    let (oracle_state, first_order_distance) = match cfg.mode {
        Mode::Single => {
            let h = SingleQubitDrive { osc: cfg.osc, drive };
            let exact = exact_propagate(&h, time, DEFAULT_EXACT_STEPS, &init_state(1, 0)?)?;
            (exact.final_state, None)
        }
        Mode::Two => {
            let h = TwoQubitDrive { osc: cfg.osc, drive };
            let exact = exact_propagate(&h, time, DEFAULT_EXACT_STEPS, &init_state(2, 0)?)?;
            let first = first_order_propagate(&drive, time, &init_state(2, 0)?)?;
            let d = reduced_state_distance(&out, circuit.system_qubits(), &first.final_state)?;
            (exact.final_state, Some(d))
        }
    };
    let oracle = marginal_probabilities(&oracle_state, &(0..oracle_state.num_qubits()).collect::<Vec<_>>())?;
    let state_distance = if out.num_qubits() == oracle_state.num_qubits() {
        state_distance(&out, &oracle_state)?
    } else {
        reduced_state_distance(&out, circuit.system_qubits(), &oracle_state)?
    };

    let tvd_vs_ref = match TableId::lookup(cfg.mode, drive_freq) {
        Some(id) => match load_reference_table(id).row_at(time) {
            Some(row) => Some(dist_tv(&ideal, &row.distribution()?)?),
            None => None,
        },
        None => None,
    };

    Ok(PointReport {
        mode: cfg.mode,
        omega0: cfg.osc.osc_freq(),
        drive_freq,
        time,
        theta,
        ideal,
        counts,
        oracle,
        state_distance,
        first_order_distance,
        tvd_vs_ref,
        seed,
        config_hash: config_hash.to_string(),
        code_version: CODE_VERSION.to_string(),
    })
}

/// Runs every `(ω, t)` point in `drive_freqs × times` order.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunReport, ExperimentError> {
    cfg.validate()?;
    let config_hash = cfg.hash_hex();
    let mut points = Vec::with_capacity(cfg.drive_freqs.len() * cfg.times.len());
    for &w in &cfg.drive_freqs {
        for &t in &cfg.times {
            points.push(run_point(cfg, w, t, &config_hash)?);
        }
    }
    Ok(RunReport {
        config: cfg.clone(),
        config_hash,
        code_version: CODE_VERSION.to_string(),
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowComparison {
    pub time: f64,
    pub tvd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub table: TableId,
    pub rows: Vec<RowComparison>,
    /// Simulated times with no reference row, and reference times with no
    /// simulated point.
    pub skipped_times: Vec<f64>,
    pub mean_tvd: f64,
    pub max_tvd: f64,
}

/// TVD between simulated ideal distributions and the reference rows at
/// matching times, for the report points whose mode and ω match the table.
pub fn compare_to_reference(
    report: &RunReport,
    table: &ReferenceTable,
) -> Result<ComparisonSummary, ExperimentError> {
    let simulated: Vec<(f64, &Distribution)> = report
        .points
        .iter()
        .filter(|p| p.mode == table.mode && (p.drive_freq - table.drive_freq).abs() < 1e-12)
        .map(|p| (p.time, &p.ideal))
        .collect();
    compare_rows(&simulated, table)
}

pub fn compare_rows(
    simulated: &[(f64, &Distribution)],
    table: &ReferenceTable,
) -> Result<ComparisonSummary, ExperimentError> {
    let mut rows = Vec::new();
    let mut skipped_times = Vec::new();
    for &(time, dist) in simulated {
        match table.row_at(time) {
            Some(row) => rows.push(RowComparison { time, tvd: dist_tv(dist, &row.distribution()?)? }),
            None => skipped_times.push(time),
        }
    }
    for r in &table.rows {
        if !simulated.iter().any(|(t, _)| (t - r.time).abs() < 1e-9) {
            skipped_times.push(r.time);
        }
    }
    if rows.is_empty() {
        return Err(ExperimentError::EmptyIntersection(table.id));
    }
    let mean_tvd = rows.iter().map(|r| r.tvd).sum::<f64>() / rows.len() as f64;
    let max_tvd = rows.iter().map(|r| r.tvd).fold(0.0, f64::max);
    Ok(ComparisonSummary { table: table.id, rows, skipped_times, mean_tvd, max_tvd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::drive_force;

    fn single(times: Vec<f64>, freqs: Vec<f64>) -> RunConfig {
        RunConfig { times, drive_freqs: freqs, ..RunConfig::default() }
    }

    #[test]
    fn time_zero_is_ground_state() {
        for w in [0.5, 1.0, 3.0] {
            let r = run_sweep(&single(vec![0.0], vec![w])).unwrap();
            let p = &r.points[0];
            assert_eq!(p.ideal.probabilities(), &[1.0, 0.0]);
            assert_eq!(p.counts.counts, vec![1024, 0]);
            assert!(p.state_distance < 1e-12);
        }
    }

    #[test]
    fn single_mode_closed_form() {
        let cfg = single(vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![1.0]);
        let r = run_sweep(&cfg).unwrap();
        for p in &r.points {
            let expected = (p.time * p.time.cos()).sin().powi(2);
            assert!((p.ideal.probabilities()[1] - expected).abs() < 1e-9);
            assert!(p.tvd_vs_ref.is_some());
            assert_eq!(p.counts.counts.iter().sum::<u64>(), 1024);
            assert_eq!(p.config_hash, r.config_hash);
        }
    }

    #[test]
    fn two_mode_theta_zero_matches_fixed_gates() {
        let cfg = RunConfig {
            mode: Mode::Two,
            theta_override: Some(0.0),
            times: vec![0.5, 3.0],
            ..RunConfig::default()
        };
        let r = run_sweep(&cfg).unwrap();
        // Fixed-gate reachable marginal, hand-propagated from |00000⟩:
        // (3/8, 1/8, 1/8, 3/8).
        for p in &r.points {
            let want = [0.375, 0.125, 0.125, 0.375];
            for (a, b) in p.ideal.probabilities().iter().zip(want) {
                assert!((a - b).abs() < 1e-12, "{:?}", p.ideal);
            }
            assert!(p.first_order_distance.is_some());
        }
    }

    #[test]
    fn two_mode_binds_theta_from_time() {
        let cfg = RunConfig {
            mode: Mode::Two,
            times: vec![0.3, 2.0],
            drive_freqs: vec![0.0],
            ..RunConfig::default()
        };
        let r = run_sweep(&cfg).unwrap();
        let b0 = r.points[0].theta.unwrap();
        assert!((b0.theta - 0.3 * drive_force(&DriveParams::default(), 0.0)).abs() < 1e-15);
        assert!(!b0.clamped);
        assert_eq!(r.points[1].theta.unwrap(), ThetaBinding { theta: 0.5, clamped: true });
    }

    #[test]
    fn seeds_differ_per_point_and_are_stable() {
        assert_eq!(point_seed(7, 1.0, 2.0), point_seed(7, 1.0, 2.0));
        assert_ne!(point_seed(7, 1.0, 2.0), point_seed(7, 2.0, 1.0));
        assert_ne!(point_seed(7, 1.0, 2.0), point_seed(8, 1.0, 2.0));
        let cfg = single(vec![1.0, 2.0], vec![1.0, 2.0]);
        assert_eq!(run_sweep(&cfg).unwrap(), run_sweep(&cfg).unwrap());
    }

    #[test]
    fn comparison() {
        let table = load_reference_table(TableId::SingleW1);
        let report = run_sweep(&single(vec![1.0, 2.0, 8.0], vec![1.0, 2.0])).unwrap();
        let s = compare_to_reference(&report, &table).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.skipped_times.contains(&8.0));
        assert!(s.skipped_times.contains(&3.0));
        assert!(s.rows.iter().all(|r| r.tvd > 0.0));
        assert!(s.max_tvd >= s.mean_tvd);

        let other = load_reference_table(TableId::TwoW5);
        assert!(matches!(
            compare_to_reference(&report, &other),
            Err(ExperimentError::EmptyIntersection(_))
        ));

        let a = Distribution::new(1, vec![1.0, 0.0]).unwrap();
        let mut t = table.clone();
        t.rows = vec![super::super::reference::ReferenceRow { time: 1.0, percents: vec![100.0, 0.0] }];
        assert_eq!(compare_rows(&[(1.0, &a)], &t).unwrap().rows[0].tvd, 0.0);
        let half = Distribution::new(1, vec![0.5, 0.5]).unwrap();
        assert_eq!(compare_rows(&[(1.0, &half)], &t).unwrap().rows[0].tvd, 0.5);
    }

    #[test]
    fn trotter_mode_converges_toward_oracle() {
        let coarse = RunConfig { trotter_steps: TrotterSteps::Steps(4), ..single(vec![2.0], vec![1.0]) };
        let fine = RunConfig { trotter_steps: TrotterSteps::Steps(256), ..coarse.clone() };
        let dc = run_sweep(&coarse).unwrap().points[0].state_distance;
        let df = run_sweep(&fine).unwrap().points[0].state_distance;
        assert!(df < dc);
    }
}
