//! CSV and JSON renderings of the run-length statistics.

use rbnsize_core::runs::{
    deviation_report, formula_total_nonzeros, max_runs, measured_total_nonzeros, run_count_table,
    run_multiplicity_histogram, AnalysisError, DeviationRow, Fraction, MAX_MEASURED_N,
};
use serde::Serialize;

fn fraction_text(f: &Fraction) -> String {
    if f.is_integer() {
        f.numer().to_string()
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

fn fraction_value(f: &Fraction) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

/// `k,runs` rows of the run-count table for `n`.
pub fn table_csv(n: u32) -> Result<String, AnalysisError> {
    let table = run_count_table(n)?;
    let mut out = String::from("k,runs\n");
    for (k, count) in table.iter() {
        out.push_str(&format!("{k},{count}\n"));
    }
    Ok(out)
}

/// `k,i_k,strings,occurrences` for every run length and multiplicity.
pub fn occurrence_csv(n: u32) -> Result<String, AnalysisError> {
    let mut out = String::from("k,i_k,strings,occurrences\n");
    for k in 1..=n {
        let hist = run_multiplicity_histogram(n, k)?;
        for i in 1..=max_runs(n, k) {
            let strings = hist[i as usize];
            out.push_str(&format!("{k},{i},{strings},{}\n", strings * i as u64));
        }
    }
    Ok(out)
}

pub fn deviation_csv(rows: &[DeviationRow]) -> String {
    let mut out = String::from("n,formula,measured,deviation,relative_deviation\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6}\n",
            r.n,
            fraction_text(&r.formula),
            r.measured,
            fraction_text(&r.deviation()),
            r.relative_deviation()
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub k: u32,
    pub runs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationEntry {
    pub n: u32,
    pub formula: String,
    pub formula_value: f64,
    pub measured: u64,
    pub deviation: String,
    pub relative_deviation: f64,
}

impl From<&DeviationRow> for DeviationEntry {
    fn from(r: &DeviationRow) -> Self {
        Self {
            n: r.n,
            formula: fraction_text(&r.formula),
            formula_value: fraction_value(&r.formula),
            measured: r.measured,
            deviation: fraction_text(&r.deviation()),
            relative_deviation: r.relative_deviation(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub n: u32,
    pub table: Vec<TableRow>,
    pub total_ones: u64,
    pub formula_total_nonzeros: String,
    pub measured_total_nonzeros: Option<u64>,
    pub deviation: Vec<DeviationEntry>,
}

/// Table for `n` plus the closed-form comparison for `1..=deviation_max`.
pub fn stats_report(n: u32, deviation_max: u32) -> Result<StatsReport, AnalysisError> {
    let table = run_count_table(n)?;
    let rows = deviation_report(1..=deviation_max)?;
    Ok(StatsReport {
        n,
        table: table.iter().map(|(k, runs)| TableRow { k, runs }).collect(),
        total_ones: table.total_ones(),
        formula_total_nonzeros: fraction_text(&formula_total_nonzeros(n)),
        measured_total_nonzeros: if n <= MAX_MEASURED_N { Some(measured_total_nonzeros(n)?) } else { None },
        deviation: rows.iter().map(DeviationEntry::from).collect(),
    })
}
