//! `rbnsize` command-line front end.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rbnsize::corpus::{self, CorpusReport, SuiteReport, DEFAULT_FRAME_BITS, SWEEP_SIZES};
use rbnsize::error::ConfigError;
use rbnsize::frame_io::{data_frame_from_octets, format_hex_dump, parse_hex_dump, wrap};
use rbnsize::profiles::{default_profiles, find_profile, load_profiles};
use rbnsize::scenario_file::load_scenario;
use rbnsize::sim_report::{write_trace, MetricsReport};
use rbnsize::stats;
use rbnsize_core::energy::{
    frame_energy, gamma_dev, gamma_size, DeviceProfile, SymbolStream, TransmissionMode,
};
use rbnsize_core::frame::{build_data_frame, parse_frame, Address, DataFrame, Frame};
use rbnsize_core::rbn::{decode_rbn, encode_rbn, weight, BitString, RbnString};
use rbnsize_core::sim::{self, presets, SimScenario};
use rbnsize_core::symbol::{format_symbols, parse_symbols};
use serde_json::json;

const EXIT_IO: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "rbnsize",
    version,
    about = "Redundant-binary silent-zero encoding, analysis and MAC simulation"
)]
struct Cli {
    /// Device profile by name (suffixes such as `2820` work)
    #[arg(long, global = true)]
    profile: Option<String>,
    /// Profile file replacing the built-in four radios
    #[arg(long, global = true, value_name = "FILE")]
    profiles: Option<PathBuf>,
    /// RNG seed for the simulator
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON instead of text or CSV
    #[arg(long, global = true)]
    json: bool,
    /// Write the negative digit as `T` instead of a combining overline
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode bit strings (msb first) into RBN digits
    Encode(EncodeArgs),
    /// Decode RBN digit strings back to binary
    Decode(DecodeArgs),
    /// Run-length table, occurrence counts and the closed-form deviation report
    Stats(StatsArgs),
    /// Device savings table, or pricing of one payload
    Energy(EnergyArgs),
    /// Build, parse or inspect frames
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Zero-fraction and savings benchmark over file suites
    Bench(BenchArgs),
    /// Run the MAC simulator
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct EncodeArgs {
    /// Bit string, most significant bit first
    #[arg(long, conflicts_with_all = ["hex", "input"])]
    text: Option<String>,
    /// Octets in hex; bits are taken msb first
    #[arg(long, conflicts_with = "input")]
    hex: Option<String>,
    /// Raw file, cut into frames of --frame-bits
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_FRAME_BITS)]
    frame_bits: usize,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    /// RBN digits, most significant first; `1̄` or `T` for -1
    #[arg(long)]
    text: Option<String>,
    /// Print the result as hex octets (length must be a multiple of 8)
    #[arg(long)]
    hex: bool,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long, default_value_t = 8)]
    n: u32,
    /// Deviation report for n = 1..=N
    #[arg(long, value_name = "N")]
    deviation: Option<u32>,
    /// Per-(k, i_k) occurrence counts instead of the table
    #[arg(long)]
    occurrences: bool,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    /// Frame length used for the closed-form device savings
    #[arg(long, default_value_t = 1024)]
    n: u64,
    /// Price this payload (hex) under EbT, SiZe and RBN
    #[arg(long, conflicts_with = "payload_text")]
    payload_hex: Option<String>,
    /// Price this payload (UTF-8 text) under EbT, SiZe and RBN
    #[arg(long)]
    payload_text: Option<String>,
    /// Add a turn-on transient per silent-to-energized edge
    #[arg(long)]
    count_transients: bool,
}

#[derive(Debug, Subcommand)]
enum FrameCommand {
    /// Build a data frame; prints the hex dump of its buffered octets
    Build(BuildArgs),
    /// Parse an on-air symbol stream (`+ 0 -` sidecar text)
    Parse {
        /// Sidecar file; stdin when omitted
        #[arg(value_name = "FILE")]
        path: Option<PathBuf>,
    },
    /// Check a hex dump of buffered octets and show its on-air form
    Inspect {
        /// Hex dump file; stdin when omitted
        #[arg(value_name = "FILE")]
        path: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long, default_value = "FF:FF:FF:FF:FF:FF")]
    dest: String,
    #[arg(long, default_value = "00:00:00:00:00:01")]
    src: String,
    #[arg(long, conflicts_with = "payload_text")]
    payload_hex: Option<String>,
    #[arg(long)]
    payload_text: Option<String>,
    /// Also write PREFIX.hex and PREFIX.symbols
    #[arg(long, value_name = "PREFIX")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Suite directory as NAME=DIR; repeatable. The built-in mini corpus is used when none is given.
    #[arg(long = "suite", value_name = "NAME=DIR")]
    suites: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_FRAME_BITS)]
    frame_bits: usize,
    /// Print the frame-size sweep instead of the per-file table
    #[arg(long)]
    sweep: bool,
    /// Write per-device savings CSV here
    #[arg(long, value_name = "FILE")]
    devices_out: Option<PathBuf>,
    /// Write x/y plot series per suite into this directory
    #[arg(long, value_name = "DIR")]
    plot_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    scenario: Option<PathBuf>,
    /// two-node, hidden-terminal, wait-b, wait-b-short or sifs-priority
    #[arg(long)]
    preset: Option<String>,
    /// Frames for the two-node preset
    #[arg(long, default_value_t = 4)]
    frames: usize,
    #[arg(long, value_name = "FILE")]
    trace_out: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    metrics_out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
enum Failure {
    Io(anyhow::Error),
    Invalid(anyhow::Error),
}

type CmdResult = Result<(), Failure>;

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Invalid(e.into())
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(anyhow::Error::new(e).context(format!("{}", path.display())))
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.into()),
            other => Failure::Invalid(other.into()),
        }
    }
}

struct Ctx {
    profiles: Vec<DeviceProfile>,
    profile_name: Option<String>,
    seed: Option<u64>,
    json: bool,
    ascii: bool,
}

impl Ctx {
    fn profile(&self) -> Result<DeviceProfile, Failure> {
        match &self.profile_name {
            Some(name) => Ok(find_profile(&self.profiles, name)?),
            None => Ok(self.profiles[0].clone()),
        }
    }

    fn rbn_text(&self, r: &RbnString) -> String {
        if self.ascii {
            r.to_ascii_string()
        } else {
            r.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let profiles = match &cli.profiles {
        Some(path) => load_profiles(path)?,
        None => default_profiles(),
    };
    let ctx =
        Ctx { profiles, profile_name: cli.profile.clone(), seed: cli.seed, json: cli.json, ascii: cli.ascii };
    eprintln!(
        "# rbnsize {} command={} profile={} profiles={} seed={} json={} ascii={}",
        env!("CARGO_PKG_VERSION"),
        command_name(&cli.command),
        cli.profile.as_deref().unwrap_or("default"),
        cli.profiles.as_ref().map_or_else(|| "builtin".to_string(), |p| p.display().to_string()),
        cli.seed.map_or_else(|| "default".to_string(), |s| s.to_string()),
        cli.json,
        cli.ascii,
    );
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Encode(a) => encode(&ctx, a, &mut out),
        Command::Decode(a) => decode(&ctx, a, &mut out),
        Command::Stats(a) => stats_cmd(&ctx, a, &mut out),
        Command::Energy(a) => energy(&ctx, a, &mut out),
        Command::Frame(c) => frame(&ctx, c, &mut out),
        Command::Bench(a) => bench(&ctx, a, &mut out),
        Command::Simulate(a) => simulate(&ctx, a, &mut out),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Encode(_) => "encode",
        Command::Decode(_) => "decode",
        Command::Stats(_) => "stats",
        Command::Energy(_) => "energy",
        Command::Frame(FrameCommand::Build(_)) => "frame build",
        Command::Frame(FrameCommand::Parse { .. }) => "frame parse",
        Command::Frame(FrameCommand::Inspect { .. }) => "frame inspect",
        Command::Bench(_) => "bench",
        Command::Simulate(_) => "simulate",
    }
}

fn stdin_lines() -> Result<Vec<String>, Failure> {
    let mut lines = Vec::new();
    for line in io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            lines.push(line.trim().to_string());
        }
    }
    Ok(lines)
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(io_err(p)),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn encode(ctx: &Ctx, a: EncodeArgs, out: &mut impl Write) -> CmdResult {
    let inputs: Vec<BitString> = if let Some(t) = &a.text {
        vec![t.parse().map_err(invalid)?]
    } else if let Some(h) = &a.hex {
        vec![BitString::parse_hex(h).map_err(invalid)?]
    } else if let Some(p) = &a.input {
        if a.frame_bits == 0 {
            return Err(invalid(anyhow::anyhow!("--frame-bits must be positive")));
        }
        let bytes = fs::read(p).map_err(io_err(p))?;
        BitString::from_octets(&bytes).frames(a.frame_bits).collect()
    } else {
        stdin_lines()?.iter().map(|l| l.parse::<BitString>()).collect::<Result<_, _>>().map_err(invalid)?
    };
    for bits in &inputs {
        let enc = encode_rbn(bits);
        if ctx.json {
            let v = json!({
                "bits": bits.to_string(),
                "rbn": ctx.rbn_text(&enc),
                "digits": enc.len(),
                "weight": weight(&enc),
                "binary_ones": bits.popcount(),
            });
            writeln!(out, "{v}")?;
        } else {
            writeln!(out, "{}", ctx.rbn_text(&enc))?;
        }
    }
    Ok(())
}

fn decode(ctx: &Ctx, a: DecodeArgs, out: &mut impl Write) -> CmdResult {
    let inputs = match &a.text {
        Some(t) => vec![t.clone()],
        None => stdin_lines()?,
    };
    for text in inputs {
        let digits: RbnString = text.parse().map_err(invalid)?;
        let bits = decode_rbn(&digits).map_err(invalid)?;
        let shown = if a.hex {
            if bits.len() % 8 != 0 {
                return Err(invalid(anyhow::anyhow!("{} bits is not a whole number of octets", bits.len())));
            }
            bits.to_octets().iter().map(|b| format!("{b:02x}")).collect()
        } else {
            bits.to_string()
        };
        if ctx.json {
            writeln!(out, "{}", json!({ "rbn": ctx.rbn_text(&digits), "bits": shown }))?;
        } else {
            writeln!(out, "{shown}")?;
        }
    }
    Ok(())
}

fn stats_cmd(ctx: &Ctx, a: StatsArgs, out: &mut impl Write) -> CmdResult {
    if ctx.json {
        let report = stats::stats_report(a.n, a.deviation.unwrap_or(16)).map_err(invalid)?;
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serialize"))?;
    } else if let Some(max) = a.deviation {
        let rows = rbnsize_core::runs::deviation_report(1..=max).map_err(invalid)?;
        write!(out, "{}", stats::deviation_csv(&rows))?;
    } else if a.occurrences {
        write!(out, "{}", stats::occurrence_csv(a.n).map_err(invalid)?)?;
    } else {
        write!(out, "{}", stats::table_csv(a.n).map_err(invalid)?)?;
    }
    Ok(())
}

fn payload_arg(hex: &Option<String>, text: &Option<String>) -> Result<Option<BitString>, Failure> {
    match (hex, text) {
        (Some(h), _) => Ok(Some(BitString::parse_hex(h).map_err(invalid)?)),
        (None, Some(t)) => Ok(Some(BitString::from_octets(t.as_bytes()))),
        (None, None) => Ok(None),
    }
}

fn energy(ctx: &Ctx, a: EnergyArgs, out: &mut impl Write) -> CmdResult {
    let selected = match &ctx.profile_name {
        Some(_) => vec![ctx.profile()?],
        None => ctx.profiles.clone(),
    };
    let Some(bits) = payload_arg(&a.payload_hex, &a.payload_text)? else {
        if a.n == 0 {
            return Err(invalid(anyhow::anyhow!("--n must be positive")));
        }
        let rows: Vec<_> = selected
            .iter()
            .map(|p| (p.name.clone(), 100.0 * gamma_size(p), 100.0 * gamma_dev(p, a.n)))
            .collect();
        if ctx.json {
            let v: Vec<_> = rows
                .iter()
                .map(|(name, s, d)| json!({ "device": name, "n": a.n, "gamma_size_pct": s, "gamma_dev_pct": d }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serialize"))?;
        } else {
            writeln!(out, "device,n,gamma_size_pct,gamma_dev_pct")?;
            for (name, s, d) in rows {
                writeln!(out, "{name},{},{s:.2},{d:.2}", a.n)?;
            }
        }
        return Ok(());
    };
    let enc = encode_rbn(&bits);
    let mut rows = Vec::new();
    for p in &selected {
        for (mode, stream) in [
            (TransmissionMode::Ebt, SymbolStream::Bits(&bits)),
            (TransmissionMode::Size, SymbolStream::Bits(&bits)),
            (TransmissionMode::Rbn, SymbolStream::Rbn(&enc)),
        ] {
            let e = frame_energy(stream, p, mode, a.count_transients).expect("mode matches stream");
            rows.push((p.name.clone(), e));
        }
    }
    if ctx.json {
        let v: Vec<_> = rows
            .iter()
            .map(|(name, e)| {
                json!({
                    "device": name,
                    "mode": e.mode.name(),
                    "tx_uj": e.tx_energy,
                    "idle_uj": e.idle_energy,
                    "transient_uj": e.transient_energy,
                    "total_uj": e.total,
                })
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serialize"))?;
    } else {
        writeln!(out, "device,mode,tx_uj,idle_uj,transient_uj,total_uj")?;
        for (name, e) in rows {
            writeln!(
                out,
                "{name},{},{:.6},{:.6},{:.6},{:.6}",
                e.mode.name(),
                e.tx_energy,
                e.idle_energy,
                e.transient_energy,
                e.total
            )?;
        }
    }
    Ok(())
}

fn describe_data(ctx: &Ctx, f: &DataFrame, out: &mut impl Write) -> io::Result<()> {
    if ctx.json {
        let v = json!({
            "type": "DATA",
            "dest": f.dest.to_string(),
            "src": f.src.to_string(),
            "length": f.length(),
            "payload_hex": f.payload_bits.to_octets().iter().map(|b| format!("{b:02x}")).collect::<String>(),
            "payload_rbn": ctx.rbn_text(&f.payload),
            "crc": format!("{:08x}", f.checksum),
            "symbols": format_symbols(&f.symbols()),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serialize"))
    } else {
        writeln!(out, "type DATA")?;
        writeln!(out, "dest {}", f.dest)?;
        writeln!(out, "src {}", f.src)?;
        writeln!(out, "length {}", f.length())?;
        let hex: String = f.payload_bits.to_octets().iter().map(|b| format!("{b:02x}")).collect();
        writeln!(out, "payload_hex {hex}")?;
        writeln!(out, "payload_rbn {}", ctx.rbn_text(&f.payload))?;
        writeln!(out, "crc {:08x}", f.checksum)?;
        writeln!(out, "symbols {}", f.symbols().len())
    }
}

fn frame(ctx: &Ctx, c: FrameCommand, out: &mut impl Write) -> CmdResult {
    match c {
        FrameCommand::Build(a) => {
            let dest: Address = a.dest.parse().map_err(invalid)?;
            let src: Address = a.src.parse().map_err(invalid)?;
            let payload = payload_arg(&a.payload_hex, &a.payload_text)?.unwrap_or_default();
            let f = build_data_frame(dest, src, &payload).map_err(invalid)?;
            let dump = format_hex_dump(&f.octets());
            let sidecar = wrap(&format_symbols(&f.symbols()), 64);
            if let Some(prefix) = &a.out {
                let hex_path = prefix.with_extension("hex");
                let sym_path = prefix.with_extension("symbols");
                fs::write(&hex_path, &dump).map_err(io_err(&hex_path))?;
                fs::write(&sym_path, &sidecar).map_err(io_err(&sym_path))?;
            }
            if ctx.json {
                describe_data(ctx, &f, out)?;
            } else {
                write!(out, "{dump}")?;
            }
        }
        FrameCommand::Parse { path } => {
            let text = read_input(path.as_deref())?;
            let symbols = parse_symbols(&text).map_err(invalid)?;
            match parse_frame(&symbols).map_err(invalid)? {
                Frame::Data(f) => describe_data(ctx, &f, out)?,
                Frame::Control(c) => {
                    if ctx.json {
                        let v = json!({
                            "type": c.kind.name(),
                            "dest": c.dest.to_string(),
                            "src": c.src.to_string(),
                            "length": c.length,
                            "crc": format!("{:08x}", c.checksum),
                        });
                        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serialize"))?;
                    } else {
                        writeln!(out, "type {}", c.kind.name())?;
                        writeln!(out, "dest {}", c.dest)?;
                        writeln!(out, "src {}", c.src)?;
                        writeln!(out, "length {}", c.length)?;
                        writeln!(out, "crc {:08x}", c.checksum)?;
                    }
                }
            }
        }
        FrameCommand::Inspect { path } => {
            let text = read_input(path.as_deref())?;
            let octets = parse_hex_dump(&text).map_err(invalid)?;
            let f = data_frame_from_octets(&octets).map_err(invalid)?;
            describe_data(ctx, &f, out)?;
            if !ctx.json {
                write!(out, "{}", wrap(&format_symbols(&f.symbols()), 64))?;
            }
        }
    }
    Ok(())
}

struct LoadedSuite {
    report: SuiteReport,
    contents: Vec<Vec<u8>>,
}

fn load_suites(specs: &[String], frame_bits: usize) -> Result<Vec<LoadedSuite>, Failure> {
    if specs.is_empty() {
        return Ok(vec![LoadedSuite {
            report: corpus::mini_corpus_report(frame_bits),
            contents: corpus::MINI_CORPUS.iter().map(|(_, b)| b.to_vec()).collect(),
        }]);
    }
    let mut out = Vec::new();
    for spec in specs {
        let (name, dir) = spec
            .split_once('=')
            .ok_or_else(|| invalid(anyhow::anyhow!("--suite expects NAME=DIR, got {spec:?}")))?;
        let dir = Path::new(dir);
        let files = corpus::suite_files(dir).map_err(io_err(dir))?;
        let mut records = Vec::new();
        let mut contents = Vec::new();
        for f in &files {
            let bytes = fs::read(f).map_err(io_err(f))?;
            let fname = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            records.push(corpus::analyze_bytes(name, &fname, &bytes, frame_bits));
            contents.push(bytes);
        }
        out.push(LoadedSuite { report: SuiteReport::new(name, records), contents });
    }
    Ok(out)
}

fn bench(ctx: &Ctx, a: BenchArgs, out: &mut impl Write) -> CmdResult {
    if a.frame_bits == 0 {
        return Err(invalid(anyhow::anyhow!("--frame-bits must be positive")));
    }
    let loaded = load_suites(&a.suites, a.frame_bits)?;
    let sweeps: Vec<_> = loaded
        .iter()
        .map(|s| {
            let files: Vec<&[u8]> = s.contents.iter().map(Vec::as_slice).collect();
            corpus::sweep_files(&files, &SWEEP_SIZES)
        })
        .collect();
    let report = CorpusReport::new(a.frame_bits, loaded.iter().map(|s| s.report.clone()).collect());
    let devices = match &ctx.profile_name {
        Some(_) => vec![ctx.profile()?],
        None => ctx.profiles.clone(),
    };
    let device_rows = corpus::device_report(&report, &devices);

    if let Some(path) = &a.devices_out {
        fs::write(path, corpus::devices_csv(&device_rows)).map_err(io_err(path))?;
    }
    if let Some(dir) = &a.plot_dir {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (suite, sweep) in report.suites.iter().zip(&sweeps) {
            for (name, body) in corpus::suite_plot_files(suite, sweep) {
                let path = dir.join(name);
                fs::write(&path, body).map_err(io_err(&path))?;
            }
        }
    }
    for (suite, sweep) in report.suites.iter().zip(&sweeps) {
        if !corpus::sweep_is_monotone(sweep) {
            eprintln!("note: savings in suite {} do not rise monotonically with frame size", suite.suite);
        }
    }

    if ctx.json {
        let sweep_json: Vec<_> = report
            .suites
            .iter()
            .zip(&sweeps)
            .map(|(s, pts)| json!({ "suite": s.suite, "points": pts }))
            .collect();
        let v = json!({ "report": report, "devices": device_rows, "sweeps": sweep_json });
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serialize"))?;
    } else if a.sweep {
        for (s, pts) in report.suites.iter().zip(&sweeps) {
            if report.suites.len() > 1 {
                writeln!(out, "# suite {}", s.suite)?;
            }
            write!(out, "{}", corpus::sweep_csv(pts))?;
        }
    } else {
        write!(out, "{}", corpus::files_csv(&report))?;
    }
    Ok(())
}

fn preset(name: &str, profile: DeviceProfile, frames: usize) -> Result<SimScenario, Failure> {
    Ok(match name {
        "two-node" => presets::two_node(profile, frames, 32),
        "hidden-terminal" => presets::hidden_terminal(profile),
        "wait-b" => presets::wait_b(profile, None),
        "wait-b-short" => {
            let tau = profile.symbol_duration_us;
            presets::wait_b(profile, Some(tau))
        }
        "sifs-priority" => presets::sifs_priority(profile),
        other => {
            return Err(invalid(anyhow::anyhow!(
                "unknown preset {other:?}; choose two-node, hidden-terminal, wait-b, wait-b-short or sifs-priority"
            )))
        }
    })
}

fn simulate(ctx: &Ctx, a: SimulateArgs, out: &mut impl Write) -> CmdResult {
    let mut scenario = match (&a.scenario, &a.preset) {
        (Some(path), _) => {
            let mut sc = load_scenario(path, &ctx.profiles)?;
            if ctx.profile_name.is_some() {
                sc.profile = ctx.profile()?;
            }
            sc
        }
        (None, Some(name)) => preset(name, ctx.profile()?, a.frames)?,
        (None, None) => return Err(invalid(anyhow::anyhow!("give --scenario FILE or --preset NAME"))),
    };
    if let Some(seed) = ctx.seed {
        scenario.rng_seed = seed;
    }
    eprintln!(
        "# scenario nodes={} traffic={} profile={} seed={} duration_us={}",
        scenario.nodes.len(),
        scenario.traffic.len(),
        scenario.profile.name,
        scenario.rng_seed,
        scenario.duration_us
    );
    let result = sim::run(&scenario).map_err(invalid)?;
    if let Some(path) = &a.trace_out {
        let file = fs::File::create(path).map_err(io_err(path))?;
        write_trace(io::BufWriter::new(file), &result.trace).map_err(io_err(path))?;
    }
    let metrics = MetricsReport::new(&scenario, &result).to_json();
    match &a.metrics_out {
        Some(path) => fs::write(path, format!("{metrics}\n")).map_err(io_err(path))?,
        None => writeln!(out, "{metrics}")?,
    }
    Ok(())
}
