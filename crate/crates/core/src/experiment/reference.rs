//! Published hardware measurements (1024 shots per point), in percent.
//!
//! Kept verbatim for diagnostic comparison only; the device noise and the
//! drive amplitude, mass and phase behind them are not known. The two-qubit
//! plots are labelled ω = 2 and 5 but the tabulated data ω = 1 and 5; the
//! tabulated labels are used here.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::config::Mode;
use super::ExperimentError;
use crate::simulator::{bit_label, Distribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableId {
    SingleW1,
    SingleW2,
    TwoW1,
    TwoW5,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::SingleW1, TableId::SingleW2, TableId::TwoW1, TableId::TwoW5];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::SingleW1 => "single_w1",
            TableId::SingleW2 => "single_w2",
            TableId::TwoW1 => "two_w1",
            TableId::TwoW5 => "two_w5",
        }
    }

    /// Table matching a sweep point, if one was published.
    pub fn lookup(mode: Mode, drive_freq: f64) -> Option<TableId> {
        TableId::ALL
            .into_iter()
            .find(|id| {
                let t = load_reference_table(*id);
                t.mode == mode && (t.drive_freq - drive_freq).abs() < 1e-12
            })
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| ExperimentError::UnknownTable(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub time: f64,
    /// Percent per label, in label order.
    pub percents: Vec<f64>,
}

impl ReferenceRow {
    pub fn distribution(&self) -> Result<Distribution, ExperimentError> {
        let width = self.percents.len().trailing_zeros() as usize;
        let total: f64 = self.percents.iter().sum();
        // Published rows are rounded; renormalise so the row is a proper
        // distribution.
        let probs = self.percents.iter().map(|p| p / total).collect();
        Ok(Distribution::new(width, probs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceTable {
    pub id: TableId,
    pub mode: Mode,
    pub drive_freq: f64,
    pub labels: Vec<String>,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn row_at(&self, time: f64) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| (r.time - time).abs() < 1e-9)
    }

    /// Header line plus one comma-separated line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("time,{}\n", self.labels.join(","));
        for r in &self.rows {
            let cells: Vec<String> = r.percents.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("{},{}\n", r.time, cells.join(",")));
        }
        out
    }

    /// SHA-256 of [`to_text`](Self::to_text), prefixed with the table id.
    pub fn checksum(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = format!("{}\n{}", self.id, self.to_text());
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

const SINGLE_W1: [(f64, [f64; 2]); 7] = [
    (1.0, [98.45, 1.55]),
    (2.0, [95.91, 4.09]),
    (3.0, [90.61, 9.39]),
    (4.0, [42.74, 57.26]),
    (5.0, [40.62, 59.38]),
    (6.0, [25.88, 74.12]),
    (7.0, [15.61, 84.39]),
];

const SINGLE_W2: [(f64, [f64; 2]); 7] = [
    (1.0, [96.58, 3.42]),
    (2.0, [97.35, 2.65]),
    (3.0, [95.11, 4.89]),
    (4.0, [57.51, 42.49]),
    (5.0, [64.36, 35.64]),
    (6.0, [88.14, 11.86]),
    (7.0, [9.52, 90.48]),
];

const TWO_W1: [(f64, [f64; 4]); 5] = [
    (1.0, [22.949, 32.52, 21.68, 22.852]),
    (2.0, [21.191, 29.785, 23.145, 25.879]),
    (3.0, [30.762, 30.371, 22.363, 16.504]),
    (4.0, [28.125, 29.004, 20.705, 22.168]),
    (5.0, [26.66, 23.145, 30.176, 20.02]),
];

const TWO_W5: [(f64, [f64; 4]); 5] = [
    (1.0, [21.973, 27.93, 24.121, 25.977]),
    (2.0, [18.75, 19.531, 28.418, 33.301]),
    (3.0, [14.844, 35.84, 16.211, 33.105]),
    (4.0, [26.953, 25.195, 27.832, 20.02]),
    (5.0, [22.363, 34.961, 24.023, 18.652]),
];

fn table<const N: usize>(id: TableId, mode: Mode, drive_freq: f64, data: &[(f64, [f64; N])]) -> ReferenceTable {
    let width = N.trailing_zeros() as usize;
    ReferenceTable {
        id,
        mode,
        drive_freq,
        labels: (0..N).map(|v| bit_label(v, width)).collect(),
        rows: data
            .iter()
            .map(|(time, p)| ReferenceRow { time: *time, percents: p.to_vec() })
            .collect(),
    }
}

pub fn load_reference_table(which: TableId) -> ReferenceTable {
    match which {
        TableId::SingleW1 => table(which, Mode::Single, 1.0, &SINGLE_W1),
        TableId::SingleW2 => table(which, Mode::Single, 2.0, &SINGLE_W2),
        TableId::TwoW1 => table(which, Mode::Two, 1.0, &TWO_W1),
        TableId::TwoW5 => table(which, Mode::Two, 5.0, &TWO_W5),
    }
}

pub fn load_reference_table_by_name(name: &str) -> Result<ReferenceTable, ExperimentError> {
    Ok(load_reference_table(name.parse()?))
}
