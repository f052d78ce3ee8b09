//! `qho` command line.
//!
//! Exit status: 0 on success, 1 on usage or validation errors, 2 on runtime
//! failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{resolve_config, ConfigFile, Mode, Overrides, RunConfig};
use super::output::write_results;
use super::reference::{load_reference_table, load_reference_table_by_name, TableId};
use super::sweep::{compare_to_reference, point_circuit, run_sweep, PointReport};
use super::{ExperimentError, DEFAULT_OUT_DIR, OUT_DIR_ENV};
use crate::circuit::{emit_qasm, QasmOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qho", version, about = "Driven quantum harmonic oscillator circuits and simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured points and print the distributions.
    Simulate(RunArgs),
    /// Run a grid over ω and t and write results.csv and metadata.json.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Output directory (default: $QHO_OUT_DIR or ./qho-results).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Write one OpenQASM 2.0 file per sweep point.
    EmitQasm {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Expand `ch` into CNOTs and phase gates.
        #[arg(long)]
        decompose_ch: bool,
        /// Print the programs instead of writing files.
        #[arg(long)]
        stdout: bool,
    },
    /// Run and report the total variation distance to the published tables.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Table id; by default every table matching the mode and ω grid.
        #[arg(long)]
        table: Option<String>,
    },
    /// Print the embedded reference tables.
    Tables {
        /// single_w1, single_w2, two_w1 or two_w5 (all when omitted).
        id: Option<String>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Key-value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `single` or `two`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega0: Option<f64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phase: Option<f64>,
    /// Drive frequencies: `a,b,c` or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Times: `a,b,c` or `start:stop:step`.
    #[arg(long, conflicts_with = "time")]
    times: Option<String>,
    /// A single time.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// `single-shot` or a step count (single mode).
    #[arg(long)]
    trotter_steps: Option<String>,
    /// Fixed two-qubit rotation angle instead of θ = t·F(t).
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long)]
    allow_theta_out_of_bounds: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, ExperimentError> {
        let file = self.config.as_deref().map(ConfigFile::load).transpose()?;
        let flags = Overrides {
            mode: self.mode.clone(),
            omega0: self.omega0,
            amplitude: self.amplitude,
            mass: self.mass,
            phase: self.phase,
            omega: self.omega.clone(),
            times: self.times.clone().or(self.time.map(|t| t.to_string())),
            shots: self.shots,
            seed: self.seed,
            trotter_steps: self.trotter_steps.clone(),
            theta: self.theta,
            allow_theta_out_of_bounds: self.allow_theta_out_of_bounds,
        };
        Ok(resolve_config(file, &flags)?)
    }
}

fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn ket(label: &str) -> String {
    format!("|{label}>")
}

fn print_point(out: &mut dyn Write, p: &PointReport) -> std::io::Result<()> {
    write!(out, "mode={} omega0={} omega={} time={} seed={}", p.mode, p.omega0, p.drive_freq, p.time, p.seed)?;
    if let Some(b) = p.theta {
        write!(out, " theta={}{}", b.theta, if b.clamped { " (clamped)" } else { "" })?;
    }
    writeln!(out)?;
    let freqs = p.counts.frequencies();
    for (i, (label, prob)) in p.ideal.iter().enumerate() {
        writeln!(
            out,
            "  P({}) = {prob:.6}  shots {}/{} ({:.6})  oracle {:.6}",
            ket(label),
            p.counts.counts[i],
            p.counts.shots,
            freqs[i],
            p.oracle.probabilities()[i],
        )?;
    }
    write!(out, "  state_distance {:.6e}", p.state_distance)?;
    if let Some(d) = p.first_order_distance {
        write!(out, "  first_order_distance {d:.6e}")?;
    }
    if let Some(t) = p.tvd_vs_ref {
        write!(out, "  tvd_vs_ref {t:.6}")?;
    }
    writeln!(out)
}

fn print_table(out: &mut dyn Write, id: TableId) -> std::io::Result<()> {
    let t = load_reference_table(id);
    let mode = match t.mode {
        Mode::Single => "single-qubit",
        Mode::Two => "two-qubit",
    };
    writeln!(out, "# {id}: {mode}, omega = {}, probability in percent", t.drive_freq)?;
    write!(out, "{}", t.to_text())
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), ExperimentError> {
    let io = |e: std::io::Error| ExperimentError::Io { path: PathBuf::from("<stdout>"), source: e };
    match cmd {
        Command::Simulate(run) => {
            let report = run_sweep(&run.resolve()?)?;
            for p in &report.points {
                print_point(out, p).map_err(io)?;
            }
        }
        Command::Sweep { run, out_dir: dir } => {
            let report = run_sweep(&run.resolve()?)?;
            let files = write_results(&report, &out_dir(dir))?;
            writeln!(out, "wrote {}", files.results.display()).map_err(io)?;
            writeln!(out, "wrote {}", files.metadata.display()).map_err(io)?;
        }
        Command::EmitQasm { run, out_dir: dir, decompose_ch, stdout } => {
            let cfg = run.resolve()?;
            let opts = QasmOptions { decompose_ch };
            let dir = out_dir(dir);
            if !stdout {
                std::fs::create_dir_all(&dir).map_err(|source| ExperimentError::Io { path: dir.clone(), source })?;
            }
            for &w in &cfg.drive_freqs {
                let drive = cfg
                    .drive
                    .with_drive_freq(w)
                    .map_err(|e| super::ConfigError::new("omega", e.to_string()))?;
                for &t in &cfg.times {
                    let (circuit, _) = point_circuit(&cfg, &drive, t)?;
                    let text = emit_qasm(&circuit, &opts);
                    if stdout {
                        writeln!(out, "// mode={} omega={w} time={t}", cfg.mode).map_err(io)?;
                        write!(out, "{text}").map_err(io)?;
                    } else {
                        let path = dir.join(format!("{}_omega{w}_t{t}.qasm", cfg.mode));
                        std::fs::write(&path, text).map_err(|source| ExperimentError::Io { path: path.clone(), source })?;
                        writeln!(out, "wrote {}", path.display()).map_err(io)?;
                    }
                }
            }
        }
        Command::Compare { run, table } => {
            let cfg = run.resolve()?;
            let report = run_sweep(&cfg)?;
            let tables: Vec<TableId> = match table {
                Some(name) => vec![name.parse()?],
                None => cfg
                    .drive_freqs
                    .iter()
                    .filter_map(|&w| TableId::lookup(cfg.mode, w))
                    .collect(),
            };
            if tables.is_empty() {
                return Err(super::ConfigError::new(
                    "omega",
                    format!("no reference table for mode={} at these frequencies", cfg.mode),
                )
                .into());
            }
            for id in tables {
                let table = load_reference_table_by_name(id.as_str())?;
                let summary = compare_to_reference(&report, &table)?;
                writeln!(out, "table {id} (mode={}, omega={})", table.mode, table.drive_freq).map_err(io)?;
                for r in &summary.rows {
                    writeln!(out, "  t={}  tvd={:.6}", r.time, r.tvd).map_err(io)?;
                }
                writeln!(out, "  mean_tvd={:.6}  max_tvd={:.6}", summary.mean_tvd, summary.max_tvd).map_err(io)?;
                if !summary.skipped_times.is_empty() {
                    let ts: Vec<String> = summary.skipped_times.iter().map(|t| t.to_string()).collect();
                    let _ = writeln!(err, "warning: {id}: no matching row for time(s) {}", ts.join(", "));
                }
            }
        }
        Command::Tables { id } => {
            let ids = match id {
                Some(name) => vec![name.parse::<TableId>()?],
                None => TableId::ALL.to_vec(),
            };
            for id in ids {
                print_table(out, id).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_VALIDATION
                }
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(argv, &mut stdout.lock(), &mut stderr.lock())
}
