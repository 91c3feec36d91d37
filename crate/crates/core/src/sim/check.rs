//! Protocol invariants evaluated over a finished run.

use alloc::vec::Vec;

use super::scenario::{SimScenario, SimTime};
use super::trace::TraceEvent;
use super::SimOutput;
use crate::energy::{frame_energy, DeviceProfile, SymbolStream, TransmissionMode};
use crate::frame::{parse_frame, Frame, FrameType};
use crate::rbn::BitString;

/// Two clean receptions at one node whose airtimes overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    pub node: usize,
    pub first: (SimTime, SimTime),
    pub second: (SimTime, SimTime),
}

/// Clean receptions that overlap in time at the same receiver.
pub fn overlapping_receptions(out: &SimOutput) -> Vec<Overlap> {
    let mut spans: Vec<(usize, SimTime, SimTime)> = out
        .trace
        .iter()
        .filter_map(|r| match r.event {
            TraceEvent::RxOk { started, .. } => Some((r.node, started, r.time)),
            _ => None,
        })
        .collect();
    spans.sort_unstable();
    spans
        .windows(2)
        .filter(|w| w[0].0 == w[1].0 && w[1].1 < w[0].2)
        .map(|w| Overlap { node: w[0].0, first: (w[0].1, w[0].2), second: (w[1].1, w[1].2) })
        .collect()
}

/// A transmission that started inside the SIFS gap owed to a responder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SifsViolation {
    pub responder: usize,
    pub response_at: SimTime,
    pub intruder: usize,
    pub intruder_at: SimTime,
}

/// For every CTS, DATA or ACK sent one SIFS after a clean reception, lists
/// transmissions by awake neighbours of the responder that began inside that
/// gap.
pub fn sifs_violations(out: &SimOutput, scenario: &SimScenario) -> Vec<SifsViolation> {
    let sifs = super::us_to_ns(scenario.timing.sifs_us);
    let adjacency = scenario.adjacency();
    let starts: Vec<(SimTime, usize, FrameType)> = out
        .trace
        .iter()
        .filter_map(|r| match r.event {
            TraceEvent::TxStart { kind, .. } => Some((r.time, r.node, kind)),
            _ => None,
        })
        .collect();
    let mut found = Vec::new();
    for &(at, responder, kind) in &starts {
        if kind == FrameType::Rts || at < sifs {
            continue;
        }
        let gap_start = at - sifs;
        let triggered = out.trace.iter().any(|r| {
            r.node == responder && r.time == gap_start && matches!(r.event, TraceEvent::RxOk { .. })
        });
        if !triggered {
            continue;
        }
        for &(t, n, _) in &starts {
            let awake = super::us_to_ns(scenario.nodes[n].wake_at_us) <= gap_start;
            if n != responder && adjacency[n][responder].is_some() && awake && gap_start < t && t < at {
                found.push(SifsViolation { responder, response_at: at, intruder: n, intruder_at: t });
            }
        }
    }
    found
}

/// Per-node energy recomputed from the frames each node put on the air:
/// binary header and trailer fields priced as all-energized, payload digits
/// priced by their non-zero count.
pub fn repriced_energy(
    out: &SimOutput,
    profile: &DeviceProfile,
    count_transients: bool,
    nodes: usize,
) -> Vec<f64> {
    let mut totals = alloc::vec![0.0; nodes];
    for tx in &out.transmissions {
        let frame = parse_frame(&tx.symbols).expect("emitted frames parse");
        let levels: BitString = match &frame {
            Frame::Data(d) => {
                let header = BitString::from_octets(&d.header_octets());
                let trailer = BitString::from_octets(&d.trailer_octets());
                header
                    .iter()
                    .map(|_| true)
                    .chain(d.payload.iter().rev().map(|digit| !digit.is_zero()))
                    .chain(trailer.iter().map(|_| true))
                    .collect()
            }
            Frame::Control(c) => BitString::ones(8 * c.octets().len()),
        };
        let e = frame_energy(SymbolStream::Bits(&levels), profile, TransmissionMode::Size, count_transients)
            .expect("bits under SiZe pricing");
        totals[tx.node] += e.total;
    }
    totals
}
