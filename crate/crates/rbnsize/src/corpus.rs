//! Zero-fraction and savings measurements over files and corpus suites.
//!
//! A file is cut into frames of `frame_bits` bits (the last frame may be
//! short) and every frame is recoded on its own. Fractions are counted per
//! source bit: `zero_fraction_binary` is the share of 0 bits, and
//! `nonzero_fraction_rbn` is the number of non-zero RBN digits divided by the
//! number of source bits.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rbnsize_core::energy::{savings_vs_ebt, DeviceProfile};
use rbnsize_core::rbn::{encode_rbn, weight, BitString};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const DEFAULT_FRAME_BITS: usize = 1024;

/// Frame sizes for the savings-versus-frame-size curve.
pub const SWEEP_SIZES: [usize; 10] = [8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096];

/// The small corpus compiled into the binary, for offline runs.
pub const MINI_CORPUS: [(&str, &[u8]); 5] = [
    ("inventory.xml", include_bytes!("../data/mini-corpus/inventory.xml")),
    ("notes.txt", include_bytes!("../data/mini-corpus/notes.txt")),
    ("parser.c", include_bytes!("../data/mini-corpus/parser.c")),
    ("tone.pcm", include_bytes!("../data/mini-corpus/tone.pcm")),
    ("weather.csv", include_bytes!("../data/mini-corpus/weather.csv")),
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    frames: u64,
    bits: u64,
    zero_bits: u64,
    rbn_digits: u64,
    rbn_nonzero: u64,
}

impl Counts {
    fn add(&mut self, frame: &BitString) {
        let enc = encode_rbn(frame);
        self.frames += 1;
        self.bits += frame.len() as u64;
        self.zero_bits += (frame.len() - frame.popcount()) as u64;
        self.rbn_digits += enc.len() as u64;
        self.rbn_nonzero += weight(&enc) as u64;
    }

    fn of(bytes: &[u8], frame_bits: usize) -> Self {
        assert!(frame_bits > 0, "frame size must be positive");
        let mut c = Counts::default();
        if frame_bits % 8 == 0 {
            for chunk in bytes.chunks(frame_bits / 8) {
                c.add(&BitString::from_octets(chunk));
            }
        } else {
            for frame in BitString::from_octets(bytes).frames(frame_bits) {
                c.add(&frame);
            }
        }
        c
    }

    fn zero_fraction(&self) -> f64 {
        ratio(self.zero_bits, self.bits)
    }

    fn nonzero_fraction(&self) -> f64 {
        ratio(self.rbn_nonzero, self.bits)
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileRecord {
    pub suite: String,
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
    pub frames: u64,
    pub rbn_digits: u64,
    pub zero_fraction_binary: f64,
    pub nonzero_fraction_rbn: f64,
    /// SiZe savings over EbT with a silent radio drawing nothing.
    pub gamma_size_ideal: f64,
    /// RBN savings over EbT with a silent radio drawing nothing.
    pub gamma_rbn_ideal: f64,
    #[serde(skip)]
    counts: Counts,
}

impl FileRecord {
    pub fn bits(&self) -> u64 {
        self.counts.bits
    }

    pub fn rbn_nonzero(&self) -> u64 {
        self.counts.rbn_nonzero
    }

    pub fn binary_ones(&self) -> u64 {
        self.counts.bits - self.counts.zero_bits
    }
}

pub fn analyze_bytes(suite: &str, file: &str, bytes: &[u8], frame_bits: usize) -> FileRecord {
    let counts = Counts::of(bytes, frame_bits);
    let zero = counts.zero_fraction();
    let nonzero = counts.nonzero_fraction();
    FileRecord {
        suite: suite.to_string(),
        file: file.to_string(),
        bytes: bytes.len() as u64,
        sha256: hex_digest(bytes),
        frames: counts.frames,
        rbn_digits: counts.rbn_digits,
        zero_fraction_binary: zero,
        nonzero_fraction_rbn: nonzero,
        gamma_size_ideal: zero,
        gamma_rbn_ideal: 1.0 - nonzero,
        counts,
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn analyze_file(path: &Path, suite: &str, frame_bits: usize) -> io::Result<FileRecord> {
    let bytes = fs::read(path)?;
    let name =
        path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    Ok(analyze_bytes(suite, &name, &bytes, frame_bits))
}

/// Averages over a set of files, weighted by bit count and unweighted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub files: usize,
    pub bits: u64,
    pub weighted: Fractions,
    pub unweighted: Fractions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fractions {
    pub zero_fraction_binary: f64,
    pub nonzero_fraction_rbn: f64,
    pub gamma_size_ideal: f64,
    pub gamma_rbn_ideal: f64,
}

impl Fractions {
    fn new(zero: f64, nonzero: f64) -> Self {
        Self {
            zero_fraction_binary: zero,
            nonzero_fraction_rbn: nonzero,
            gamma_size_ideal: zero,
            gamma_rbn_ideal: 1.0 - nonzero,
        }
    }
}

pub fn aggregate(records: &[FileRecord]) -> Aggregate {
    let mut total = Counts::default();
    for r in records {
        total.bits += r.counts.bits;
        total.zero_bits += r.counts.zero_bits;
        total.rbn_nonzero += r.counts.rbn_nonzero;
    }
    let nonempty: Vec<&FileRecord> = records.iter().filter(|r| r.counts.bits > 0).collect();
    let mean = |f: fn(&FileRecord) -> f64| {
        if nonempty.is_empty() {
            0.0
        } else {
            nonempty.iter().map(|r| f(r)).sum::<f64>() / nonempty.len() as f64
        }
    };
    Aggregate {
        files: records.len(),
        bits: total.bits,
        weighted: Fractions::new(total.zero_fraction(), total.nonzero_fraction()),
        unweighted: Fractions::new(mean(|r| r.zero_fraction_binary), mean(|r| r.nonzero_fraction_rbn)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub summary: Aggregate,
    pub files: Vec<FileRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str, mut files: Vec<FileRecord>) -> Self {
        files.sort_by(|a, b| a.file.cmp(&b.file));
        Self { suite: suite.to_string(), summary: aggregate(&files), files }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub frame_bits: usize,
    pub suites: Vec<SuiteReport>,
    pub overall: Aggregate,
}

impl CorpusReport {
    pub fn new(frame_bits: usize, suites: Vec<SuiteReport>) -> Self {
        let all: Vec<FileRecord> = suites.iter().flat_map(|s| s.files.iter().cloned()).collect();
        Self { frame_bits, overall: aggregate(&all), suites }
    }
}

/// Regular files directly inside `dir`, sorted by name. Hidden files and
/// checksum lists are skipped.
pub fn suite_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if name.starts_with('.') || name.ends_with(".sha256") {
            continue;
        }
        if entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

pub fn analyze_dir(dir: &Path, suite: &str, frame_bits: usize) -> io::Result<SuiteReport> {
    let records = suite_files(dir)?
        .par_iter()
        .map(|p| analyze_file(p, suite, frame_bits))
        .collect::<io::Result<Vec<_>>>()?;
    Ok(SuiteReport::new(suite, records))
}

pub fn mini_corpus_report(frame_bits: usize) -> SuiteReport {
    let records =
        MINI_CORPUS.iter().map(|(name, bytes)| analyze_bytes("mini", name, bytes, frame_bits)).collect();
    SuiteReport::new("mini", records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub frame_bits: usize,
    pub zero_fraction_binary: f64,
    pub nonzero_fraction_rbn: f64,
    pub gamma_rbn_ideal: f64,
}

pub fn frame_size_sweep(bytes: &[u8], sizes: &[usize]) -> Vec<SweepPoint> {
    sweep_files(&[bytes], sizes)
}

/// Sweep over a set of files; each file is framed on its own and the counts
/// are summed.
pub fn sweep_files(files: &[&[u8]], sizes: &[usize]) -> Vec<SweepPoint> {
    sizes
        .par_iter()
        .map(|&frame_bits| {
            let mut c = Counts::default();
            for f in files {
                let one = Counts::of(f, frame_bits);
                c.bits += one.bits;
                c.zero_bits += one.zero_bits;
                c.rbn_nonzero += one.rbn_nonzero;
            }
            SweepPoint {
                frame_bits,
                zero_fraction_binary: c.zero_fraction(),
                nonzero_fraction_rbn: c.nonzero_fraction(),
                gamma_rbn_ideal: 1.0 - c.nonzero_fraction(),
            }
        })
        .collect()
}

/// Whether ideal RBN savings never fall as the frame grows.
pub fn sweep_is_monotone(points: &[SweepPoint]) -> bool {
    points.windows(2).all(|w| w[1].gamma_rbn_ideal >= w[0].gamma_rbn_ideal - 1e-12)
}

/// Device-specific savings for one scope (a suite or the whole corpus).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviceRow {
    pub scope: String,
    pub device: String,
    pub gamma_size_sim: f64,
    pub gamma_rbn_sim: f64,
}

fn device_rows(scope: &str, f: &Fractions, profiles: &[DeviceProfile]) -> Vec<DeviceRow> {
    profiles
        .iter()
        .map(|p| DeviceRow {
            scope: scope.to_string(),
            device: p.name.clone(),
            gamma_size_sim: savings_vs_ebt(1.0 - f.zero_fraction_binary, p),
            gamma_rbn_sim: savings_vs_ebt(f.nonzero_fraction_rbn.min(1.0), p),
        })
        .collect()
}

/// Bit-weighted per-suite and overall savings for each profile.
pub fn device_report(report: &CorpusReport, profiles: &[DeviceProfile]) -> Vec<DeviceRow> {
    let mut rows = Vec::new();
    for s in &report.suites {
        rows.extend(device_rows(&s.suite, &s.summary.weighted, profiles));
    }
    rows.extend(device_rows("overall", &report.overall.weighted, profiles));
    rows
}

pub fn files_csv(report: &CorpusReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "suite",
        "file",
        "bytes",
        "frames",
        "zero_fraction_binary",
        "nonzero_fraction_rbn",
        "gamma_size_ideal",
        "gamma_rbn_ideal",
        "sha256",
    ])
    .expect("csv to memory");
    let fmt = |x: f64| format!("{x:.6}");
    for s in &report.suites {
        for r in &s.files {
            w.write_record([
                r.suite.clone(),
                r.file.clone(),
                r.bytes.to_string(),
                r.frames.to_string(),
                fmt(r.zero_fraction_binary),
                fmt(r.nonzero_fraction_rbn),
                fmt(r.gamma_size_ideal),
                fmt(r.gamma_rbn_ideal),
                r.sha256.clone(),
            ])
            .expect("csv to memory");
        }
        for (label, f) in [("weighted", &s.summary.weighted), ("unweighted", &s.summary.unweighted)] {
            w.write_record([
                s.suite.clone(),
                format!("<{label}>"),
                String::new(),
                String::new(),
                fmt(f.zero_fraction_binary),
                fmt(f.nonzero_fraction_rbn),
                fmt(f.gamma_size_ideal),
                fmt(f.gamma_rbn_ideal),
                String::new(),
            ])
            .expect("csv to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn devices_csv(rows: &[DeviceRow]) -> String {
    let mut out = String::from("scope,device,gamma_size_sim,gamma_rbn_sim\n");
    for r in rows {
        out.push_str(&format!("{},{},{:.6},{:.6}\n", r.scope, r.device, r.gamma_size_sim, r.gamma_rbn_sim));
    }
    out
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("frame_bits,zero_fraction_binary,nonzero_fraction_rbn,gamma_rbn_ideal\n");
    for p in points {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6}\n",
            p.frame_bits, p.zero_fraction_binary, p.nonzero_fraction_rbn, p.gamma_rbn_ideal
        ));
    }
    out
}

/// Two-column `x y` series for external plotting.
pub fn plot_series(header: &str, points: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut out = format!("# {header}\n");
    for (x, y) in points {
        out.push_str(&format!("{x} {y:.6}\n"));
    }
    out
}

/// Plot files for one suite: ideal savings per file under SiZe and RBN
/// (x is the file's position in name order), and the frame-size curve.
pub fn suite_plot_files(suite: &SuiteReport, sweep: &[SweepPoint]) -> Vec<(String, String)> {
    let per_file =
        |f: fn(&FileRecord) -> f64| suite.files.iter().enumerate().map(move |(i, r)| (i as f64, f(r)));
    vec![
        (
            format!("{}_size.dat", suite.suite),
            plot_series("file_index gamma_size_ideal", per_file(|r| r.gamma_size_ideal)),
        ),
        (
            format!("{}_rbn.dat", suite.suite),
            plot_series("file_index gamma_rbn_ideal", per_file(|r| r.gamma_rbn_ideal)),
        ),
        (
            format!("{}_sweep.dat", suite.suite),
            plot_series(
                "frame_bits gamma_rbn_ideal",
                sweep.iter().map(|p| (p.frame_bits as f64, p.gamma_rbn_ideal)),
            ),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_files() {
        let zeros = analyze_bytes("t", "zeros", &[0u8; 512], DEFAULT_FRAME_BITS);
        assert_eq!(zeros.zero_fraction_binary, 1.0);
        assert_eq!(zeros.gamma_rbn_ideal, 1.0);

        let ones = analyze_bytes("t", "ones", &[0xFFu8; 512], DEFAULT_FRAME_BITS);
        assert_eq!(ones.zero_fraction_binary, 0.0);
        assert_eq!(ones.frames, 4);
        assert_eq!(ones.nonzero_fraction_rbn, 2.0 / 1024.0);
    }

    #[test]
    fn partial_last_frame_is_kept() {
        let r = analyze_bytes("t", "f", &[0xFF; 130], DEFAULT_FRAME_BITS);
        assert_eq!(r.frames, 2);
        assert_eq!(r.bits(), 1040);
        assert_eq!(r.rbn_digits, 1025 + 17);
        // unaligned frame size takes the bitwise path
        let odd = analyze_bytes("t", "f", &[0xFF; 3], 7);
        assert_eq!(odd.frames, 4);
        assert_eq!(odd.rbn_nonzero(), 8);
    }

    #[test]
    fn empty_file() {
        let r = analyze_bytes("t", "empty", &[], DEFAULT_FRAME_BITS);
        assert_eq!(r.frames, 0);
        assert_eq!(r.zero_fraction_binary, 0.0);
        let agg = aggregate(&[r]);
        assert_eq!(agg.unweighted.zero_fraction_binary, 0.0);
    }

    #[test]
    fn flat_sweep_on_zero_file() {
        let pts = frame_size_sweep(&[0u8; 1024], &SWEEP_SIZES);
        assert!(pts.iter().all(|p| p.gamma_rbn_ideal == 1.0));
        assert!(sweep_is_monotone(&pts));
    }

    #[test]
    fn zero_idle_device_matches_ideal() {
        let ideal = DeviceProfile::new("ideal", 50.0, 20.0, 3.0, 10.0, 0.0, 0.0).unwrap();
        let report = CorpusReport::new(DEFAULT_FRAME_BITS, vec![mini_corpus_report(DEFAULT_FRAME_BITS)]);
        let rows = device_report(&report, &[ideal]);
        let w = &report.overall.weighted;
        assert_eq!(rows.last().unwrap().gamma_rbn_sim, w.gamma_rbn_ideal);
        assert!((rows.last().unwrap().gamma_size_sim - w.gamma_size_ideal).abs() < 1e-15);
    }

    #[test]
    fn csv_has_every_file() {
        let report = CorpusReport::new(DEFAULT_FRAME_BITS, vec![mini_corpus_report(DEFAULT_FRAME_BITS)]);
        let csv = files_csv(&report);
        assert_eq!(csv.lines().count(), 1 + MINI_CORPUS.len() + 2);
        assert!(csv.contains("notes.txt"));
    }
}
