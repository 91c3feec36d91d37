//! Device-parameterized transmit energy.
//!
//! A radio draws `i_high` while emitting an energized symbol and `i_low` in
//! the active state it falls back to during a silent symbol. Energy per
//! symbol is `v_cc · current · symbol_duration`. Units are fixed: volts,
//! milliamps, microseconds; energies are reported in microjoules.
//!
//! Three transmission modes are priced:
//!
//! * EbT: every bit is energized.
//! * SiZe: 1-bits energized, 0-bits silent.
//! * RBN: non-zero digits energized, zero digits silent.

use alloc::string::String;
use core::ops::{Add, AddAssign};

use crate::rbn::{weight, BitString, RbnString};
use crate::symbol::Symbol;

/// `V · mA · µs` is nanojoules.
const NJ_TO_UJ: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("{0}: i_high must exceed i_low and i_low must be non-negative")]
    Currents(String),
    #[error("{0}: symbol duration, data rate and supply voltage must be positive")]
    NonPositive(String),
    #[error("{name}: data rate {rate_kbps} kbps disagrees with symbol duration {duration_us} us")]
    RateMismatch { name: String, rate_kbps: f64, duration_us: f64 },
    #[error("{0}: turn-on time must be non-negative")]
    TurnOn(String),
}

/// Electrical parameters of one radio.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceProfile {
    pub name: String,
    pub data_rate_kbps: f64,
    pub symbol_duration_us: f64,
    pub v_cc: f64,
    /// Current in the TX state.
    pub i_high_ma: f64,
    /// Current in the active (non-transmitting) state.
    pub i_low_ma: f64,
    /// Turn-on transient duration.
    pub t_on_us: f64,
}

impl DeviceProfile {
    pub fn new(
        name: impl Into<String>,
        data_rate_kbps: f64,
        symbol_duration_us: f64,
        v_cc: f64,
        i_high_ma: f64,
        i_low_ma: f64,
        t_on_us: f64,
    ) -> Result<Self, ProfileError> {
        let p = Self {
            name: name.into(),
            data_rate_kbps,
            symbol_duration_us,
            v_cc,
            i_high_ma,
            i_low_ma,
            t_on_us,
        };
        p.validate()?;
        Ok(p)
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    pub fn validate(&self) -> Result<(), ProfileError> {
        let name = || self.name.clone();
        if !(self.symbol_duration_us > 0.0 && self.data_rate_kbps > 0.0 && self.v_cc > 0.0) {
            return Err(ProfileError::NonPositive(name()));
        }
        if !(self.i_low_ma >= 0.0 && self.i_high_ma > self.i_low_ma) {
            return Err(ProfileError::Currents(name()));
        }
        if !(self.t_on_us >= 0.0) {
            return Err(ProfileError::TurnOn(name()));
        }
        // kbps · µs = 1e-3 bits
        let product = self.data_rate_kbps * self.symbol_duration_us * 1e-3;
        if (product - 1.0).abs() > 0.01 {
            return Err(ProfileError::RateMismatch {
                name: name(),
                rate_kbps: self.data_rate_kbps,
                duration_us: self.symbol_duration_us,
            });
        }
        Ok(())
    }

    pub fn maxim_2820() -> Self {
        Self::builtin_unchecked("Maxim 2820", 50.0, 20.0, 2.7, 70.0, 25.0, 3.0)
    }

    pub fn cc2510fx() -> Self {
        Self::builtin_unchecked("Chipcon CC2510Fx", 2.5, 400.0, 3.0, 23.0, 7.5, 195.0)
    }

    pub fn rfm_tr1000() -> Self {
        Self::builtin_unchecked("RFM TR1000", 25.0, 40.0, 3.0, 12.0, 7.0e-4, 16.0)
    }

    pub fn maxim_1479() -> Self {
        Self::builtin_unchecked("Maxim 1479", 2.0, 500.0, 2.7, 7.3, 0.2e-6, 200.0)
    }

    /// The four reference radios.
    pub fn builtin() -> [Self; 4] {
        [Self::maxim_2820(), Self::cc2510fx(), Self::rfm_tr1000(), Self::maxim_1479()]
    }

    fn builtin_unchecked(
        name: &str,
        rate: f64,
        duration: f64,
        v_cc: f64,
        i_high: f64,
        i_low: f64,
        t_on: f64,
    ) -> Self {
        Self {
            name: name.into(),
            data_rate_kbps: rate,
            symbol_duration_us: duration,
            v_cc,
            i_high_ma: i_high,
            i_low_ma: i_low,
            t_on_us: t_on,
        }
    }

    /// Looks a built-in profile up by case-insensitive name, ignoring spaces.
    pub fn builtin_by_name(name: &str) -> Option<Self> {
        let key = |s: &str| -> String {
            s.chars().filter(|c| c.is_ascii_alphanumeric()).map(|c| c.to_ascii_lowercase()).collect()
        };
        let wanted = key(name);
        Self::builtin().into_iter().find(|p| {
            let k = key(&p.name);
            k == wanted || k.ends_with(&wanted)
        })
    }

    /// Energy of one energized symbol, µJ.
    pub fn high_symbol_energy_uj(&self) -> f64 {
        self.v_cc * self.i_high_ma * self.symbol_duration_us * NJ_TO_UJ
    }

    /// Energy of one silent symbol, µJ.
    pub fn low_symbol_energy_uj(&self) -> f64 {
        self.v_cc * self.i_low_ma * self.symbol_duration_us * NJ_TO_UJ
    }

    /// Energy of one turn-on transient, µJ.
    pub fn transient_energy_uj(&self) -> f64 {
        self.v_cc * self.i_high_ma * self.t_on_us * NJ_TO_UJ
    }

    pub fn idle_ratio(&self) -> f64 {
        self.i_low_ma / self.i_high_ma
    }
}

/// Savings of silent-zero binary transmission over EbT.
pub fn gamma_size(profile: &DeviceProfile) -> f64 {
    (profile.i_high_ma - profile.i_low_ma) / (2.0 * profile.i_high_ma)
}

/// Savings of RBN transmission over EbT for `n`-bit frames, using the
/// average non-zero fraction `(n + 2) / (4n)`.
pub fn gamma_dev(profile: &DeviceProfile, n: u64) -> f64 {
    assert!(n > 0, "frame length must be positive");
    let nonzero = (n as f64 + 2.0) / (4.0 * n as f64);
    (1.0 - nonzero) * (1.0 - profile.idle_ratio())
}

/// Savings over EbT when a fraction `nonzero_fraction` of symbols is energized
/// and the rest are silent.
pub fn savings_vs_ebt(nonzero_fraction: f64, profile: &DeviceProfile) -> f64 {
    debug_assert!((0.0..=1.0).contains(&nonzero_fraction));
    (1.0 - nonzero_fraction) * (1.0 - profile.idle_ratio())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransmissionMode {
    Ebt,
    Size,
    Rbn,
}

impl TransmissionMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ebt => "ebt",
            Self::Size => "size",
            Self::Rbn => "rbn",
        }
    }
}

impl core::str::FromStr for TransmissionMode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_lowercase().as_str() {
            "ebt" => Ok(Self::Ebt),
            "size" => Ok(Self::Size),
            "rbn" => Ok(Self::Rbn),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum SymbolStream<'a> {
    Bits(&'a BitString),
    Rbn(&'a RbnString),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{mode:?} pricing does not accept this symbol type")]
pub struct ModeMismatch {
    pub mode: TransmissionMode,
}

/// Energy of a symbol stream, split by source. All values in µJ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub tx_energy: f64,
    pub idle_energy: f64,
    pub transient_energy: f64,
    pub total: f64,
    pub mode: TransmissionMode,
}

impl EnergyBreakdown {
    pub fn zero(mode: TransmissionMode) -> Self {
        Self { tx_energy: 0.0, idle_energy: 0.0, transient_energy: 0.0, total: 0.0, mode }
    }

    fn from_counts(
        profile: &DeviceProfile,
        mode: TransmissionMode,
        energized: usize,
        silent: usize,
        transitions: usize,
        count_transients: bool,
    ) -> Self {
        let tx_energy = energized as f64 * profile.high_symbol_energy_uj();
        let idle_energy = silent as f64 * profile.low_symbol_energy_uj();
        let transient_energy =
            if count_transients { transitions as f64 * profile.transient_energy_uj() } else { 0.0 };
        Self {
            tx_energy,
            idle_energy,
            transient_energy,
            total: tx_energy + idle_energy + transient_energy,
            mode,
        }
    }
}

impl Add for EnergyBreakdown {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for EnergyBreakdown {
    fn add_assign(&mut self, rhs: Self) {
        self.tx_energy += rhs.tx_energy;
        self.idle_energy += rhs.idle_energy;
        self.transient_energy += rhs.transient_energy;
        self.total += rhs.total;
    }
}

/// Counts energized symbols, silent symbols and silent-to-energized edges.
/// The radio is off before the first symbol, so an energized first symbol
/// is an edge.
fn tally(levels: impl Iterator<Item = bool>) -> (usize, usize, usize) {
    let (mut on, mut off, mut edges) = (0, 0, 0);
    let mut prev = false;
    for level in levels {
        if level {
            on += 1;
            if !prev {
                edges += 1;
            }
        } else {
            off += 1;
        }
        prev = level;
    }
    (on, off, edges)
}

/// Prices a frame under `mode`. EbT and SiZe take bits, RBN takes digits.
///
/// With `count_transients`, each silent-to-energized edge adds one turn-on
/// transient at `i_high` for `t_on`.
pub fn frame_energy(
    symbols: SymbolStream<'_>,
    profile: &DeviceProfile,
    mode: TransmissionMode,
    count_transients: bool,
) -> Result<EnergyBreakdown, ModeMismatch> {
    let (on, off, edges) = match (mode, symbols) {
        (TransmissionMode::Ebt, SymbolStream::Bits(b)) => tally(b.iter().map(|_| true)),
        (TransmissionMode::Size, SymbolStream::Bits(b)) => tally(b.iter()),
        (TransmissionMode::Rbn, SymbolStream::Rbn(r)) => tally(r.iter().map(|d| !d.is_zero())),
        _ => return Err(ModeMismatch { mode }),
    };
    Ok(EnergyBreakdown::from_counts(profile, mode, on, off, edges, count_transients))
}

/// Prices an on-air stream: energized symbols at `i_high`, silence at `i_low`.
pub fn stream_energy(symbols: &[Symbol], profile: &DeviceProfile, count_transients: bool) -> EnergyBreakdown {
    let (on, off, edges) = tally(symbols.iter().map(|s| s.is_energized()));
    EnergyBreakdown::from_counts(profile, TransmissionMode::Rbn, on, off, edges, count_transients)
}

/// Non-zero digits per source bit of an encoded frame.
pub fn nonzero_fraction(encoded: &RbnString, source_bits: usize) -> f64 {
    if source_bits == 0 {
        0.0
    } else {
        weight(encoded) as f64 / source_bits as f64
    }
}
