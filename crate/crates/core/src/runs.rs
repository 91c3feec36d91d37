//! Run-length statistics over all `2^n` binary strings of length `n`.
//!
//! Everything here is computed by exhaustive enumeration. The closed forms
//! that exist for these counts are used only as cross-checks in tests.

use alloc::vec::Vec;

use num_rational::Ratio;

use crate::rbn::{encode_rbn, weight, BitString};

/// Exact fraction type used by the analysis.
pub type Fraction = Ratio<i128>;

/// Largest `n` accepted by the run-count enumerations.
pub const MAX_TABLE_N: u32 = 24;

/// Largest `n` accepted by [`measured_total_nonzeros`].
pub const MAX_MEASURED_N: u32 = 20;

/// Largest `n` for which [`formula_total_nonzeros`] fits the fraction type.
pub const MAX_FORMULA_N: u32 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("n = {n} outside the supported range {min}..={max}")]
    StringLength { n: u32, min: u32, max: u32 },
    #[error("run length k = {k} outside 1..={n}")]
    RunLength { k: u32, n: u32 },
    #[error("run count i_k = {i_k} outside 1..={max}")]
    RunCount { i_k: u32, max: u32 },
}

fn check_n(n: u32, min: u32, max: u32) -> Result<(), AnalysisError> {
    if (min..=max).contains(&n) {
        Ok(())
    } else {
        Err(AnalysisError::StringLength { n, min, max })
    }
}

/// Calls `f(k)` for every maximal run of ones in `x`.
fn for_each_run(mut x: u64, mut f: impl FnMut(u32)) {
    while x != 0 {
        x >>= x.trailing_zeros();
        let len = (!x).trailing_zeros();
        f(len);
        x = x.checked_shr(len).unwrap_or(0);
    }
}

/// Upper bound on the number of disjoint maximal runs of length `k` in `n` bits:
/// each run plus one separating zero occupies `k + 1` positions.
pub fn max_runs(n: u32, k: u32) -> u32 {
    (n + 1) / (k + 1)
}

/// Occurrences of maximal runs of exactly `k` ones, summed over all `2^n` strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCountTable {
    n: u32,
    /// `rows[k - 1]` is the count for run length `k`.
    rows: Vec<u64>,
}

impl RunCountTable {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Count for run length `k`; zero outside `1..=n`.
    pub fn get(&self, k: u32) -> u64 {
        k.checked_sub(1).and_then(|i| self.rows.get(i as usize)).copied().unwrap_or(0)
    }

    /// `(k, count)` pairs for `k = 1..=n`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.rows.iter().enumerate().map(|(i, &c)| (i as u32 + 1, c))
    }

    pub fn counts(&self) -> &[u64] {
        &self.rows
    }

    /// `Σ k · rows[k]`, the number of ones across all strings.
    pub fn total_ones(&self) -> u64 {
        self.iter().map(|(k, c)| k as u64 * c).sum()
    }
}

pub fn run_count_table(n: u32) -> Result<RunCountTable, AnalysisError> {
    check_n(n, 1, MAX_TABLE_N)?;
    let mut rows = alloc::vec![0u64; n as usize];
    for x in 0..1u64 << n {
        for_each_run(x, |k| rows[k as usize - 1] += 1);
    }
    Ok(RunCountTable { n, rows })
}

/// Strings of length `n` that contain exactly `i_k` maximal runs of `k` ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccurrenceCount {
    pub n: u32,
    pub k: u32,
    pub i_k: u32,
    /// Number of strings with exactly `i_k` such runs.
    pub strings: u64,
    /// `i_k · strings`: the run occurrences these strings contribute.
    pub count: u64,
}

/// Histogram over all strings of the number of maximal `k`-runs they hold;
/// entry `j` counts strings with exactly `j` runs.
pub fn run_multiplicity_histogram(n: u32, k: u32) -> Result<Vec<u64>, AnalysisError> {
    check_n(n, 1, MAX_TABLE_N)?;
    if k == 0 || k > n {
        return Err(AnalysisError::RunLength { k, n });
    }
    let mut hist = alloc::vec![0u64; max_runs(n, k) as usize + 1];
    for x in 0..1u64 << n {
        let mut j = 0;
        for_each_run(x, |len| j += (len == k) as usize);
        hist[j] += 1;
    }
    Ok(hist)
}

pub fn occurrence_count(n: u32, k: u32, i_k: u32) -> Result<OccurrenceCount, AnalysisError> {
    let hist = run_multiplicity_histogram(n, k)?;
    let max = max_runs(n, k);
    if i_k == 0 || i_k > max {
        return Err(AnalysisError::RunCount { i_k, max });
    }
    let strings = hist[i_k as usize];
    Ok(OccurrenceCount { n, k, i_k, strings, count: i_k as u64 * strings })
}

/// The closed-form claim `(n + 2) · 2^(n - 2)` for the total number of non-zero
/// encoder digits over all `2^n` inputs. Non-integral for `n < 2`.
///
/// # Panics
/// If `n > MAX_FORMULA_N`.
pub fn formula_total_nonzeros(n: u32) -> Fraction {
    assert!(n <= MAX_FORMULA_N, "n = {n} too large for the fraction type");
    let base = Fraction::from_integer(n as i128 + 2);
    match n {
        0 => base / 4,
        1 => base / 2,
        _ => base * (1i128 << (n - 2)),
    }
}

/// `Σ weight(encode_rbn(x))` over every `n`-bit string `x`.
pub fn measured_total_nonzeros(n: u32) -> Result<u64, AnalysisError> {
    check_n(n, 0, MAX_MEASURED_N)?;
    Ok((0..1u64 << n).map(|x| weight(&encode_rbn(&BitString::from_u64(x, n as usize))) as u64).sum())
}

/// `(n + 2) / (4n)`: the per-bit non-zero fraction implied by the closed form.
pub fn avg_nonzero_fraction(n: u64) -> Result<Fraction, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::StringLength { n: 0, min: 1, max: u32::MAX });
    }
    Ok(Fraction::new(n as i128 + 2, 4 * n as i128))
}

/// One line of the measured-versus-closed-form comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationRow {
    pub n: u32,
    pub formula: Fraction,
    pub measured: u64,
}

impl DeviationRow {
    /// `measured - formula`.
    pub fn deviation(&self) -> Fraction {
        Fraction::from_integer(self.measured as i128) - self.formula
    }

    /// Deviation relative to the formula value.
    pub fn relative_deviation(&self) -> f64 {
        let d = self.deviation() / self.formula;
        *d.numer() as f64 / *d.denom() as f64
    }
}

pub fn deviation_report(ns: impl IntoIterator<Item = u32>) -> Result<Vec<DeviationRow>, AnalysisError> {
    ns.into_iter()
        .map(|n| {
            Ok(DeviationRow { n, formula: formula_total_nonzeros(n), measured: measured_total_nonzeros(n)? })
        })
        .collect()
}
