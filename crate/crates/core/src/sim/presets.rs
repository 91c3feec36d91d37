//! Small canned scenarios that exercise specific protocol rules.

use alloc::vec::Vec;

use super::scenario::{Link, NodeSpec, SimScenario, Timing, Topology, TrafficSpec};
use crate::energy::DeviceProfile;
use crate::frame::{data_frame_symbols, Address, CONTROL_SYMBOLS, DATA_HEADER_BITS};
use crate::rbn::BitString;

fn nodes(count: u64) -> Vec<NodeSpec> {
    (1..=count).map(|i| NodeSpec::new(Address::from_id(i))).collect()
}

/// Deterministic filler payload.
pub fn filler(octets: usize, seed: u8) -> BitString {
    let mut x = seed as u32 | 0x100;
    let bytes: Vec<u8> = (0..octets)
        .map(|_| {
            x = x.wrapping_mul(1_103_515_245).wrapping_add(12_345);
            (x >> 16) as u8
        })
        .collect();
    BitString::from_octets(&bytes)
}

/// Start of the first DATA frame of an exchange initiated at time zero:
/// window, RTS, SIFS, CTS, SIFS.
fn first_data_start_us(profile: &DeviceProfile, timing: &Timing) -> f64 {
    let ctrl = CONTROL_SYMBOLS as f64 * profile.symbol_duration_us;
    timing.b_us(profile) + timing.nifs_us + 2.0 * (ctrl + timing.sifs_us)
}

/// One sender, one receiver, `frames` frames queued at time zero.
pub fn two_node(profile: DeviceProfile, frames: usize, octets: usize) -> SimScenario {
    let mut sc = SimScenario::new(profile, nodes(2), 0.0);
    for i in 0..frames {
        let (src, dest) = if i % 2 == 0 { (0, 1) } else { (1, 0) };
        sc.traffic.push(TrafficSpec { at_us: 0.0, src, dest, payload: filler(octets, i as u8) });
    }
    let per_frame = exchange_us(&sc.profile, &sc.timing, octets);
    sc.duration_us = per_frame * (frames as f64 + 1.0) * 4.0;
    sc
}

/// Airtime of one complete RTS/CTS/DATA/ACK exchange including its window.
pub fn exchange_us(profile: &DeviceProfile, timing: &Timing, octets: usize) -> f64 {
    let tau = profile.symbol_duration_us;
    let ctrl = CONTROL_SYMBOLS as f64 * tau;
    timing.b_us(profile)
        + timing.nifs_us
        + 3.0 * (ctrl + timing.sifs_us)
        + data_frame_symbols(octets) as f64 * tau
}

/// A and C cannot hear each other; both send to B at time zero. The slot
/// is as long as RTS + SIFS + CTS, so distinct backoff draws separate the
/// two initiators far enough for B's CTS to silence the other.
pub fn hidden_terminal(profile: DeviceProfile) -> SimScenario {
    let mut sc = SimScenario::new(profile, nodes(3), 0.0);
    sc.topology = Topology::Links(alloc::vec![Link::new(0, 1), Link::new(1, 2)]);
    let tau = sc.profile.symbol_duration_us;
    sc.timing.slot_us = 2.0 * CONTROL_SYMBOLS as f64 * tau + sc.timing.sifs_us;
    sc.traffic.push(TrafficSpec { at_us: 0.0, src: 0, dest: 1, payload: filler(32, 1) });
    sc.traffic.push(TrafficSpec { at_us: 0.0, src: 2, dest: 1, payload: filler(32, 2) });
    sc.duration_us = 40.0 * exchange_us(&sc.profile, &sc.timing, 32);
    sc
}

/// A sends B a payload of 0xFF octets, whose encoding is one long silent
/// run. C wakes in the middle of that run with a frame for B. `b_us` of
/// `None` keeps the default window.
pub fn wait_b(profile: DeviceProfile, b_us: Option<f64>) -> SimScenario {
    let mut sc = SimScenario::new(profile, nodes(3), 0.0);
    sc.timing.b_override_us = b_us;
    let tau = sc.profile.symbol_duration_us;
    let wake = first_data_start_us(&sc.profile, &sc.timing) + (DATA_HEADER_BITS + 100) as f64 * tau;
    sc.nodes[2].wake_at_us = wake;
    sc.traffic.push(TrafficSpec { at_us: 0.0, src: 0, dest: 1, payload: BitString::ones(8 * 64) });
    sc.traffic.push(TrafficSpec { at_us: 0.0, src: 2, dest: 1, payload: filler(8, 3) });
    sc.duration_us = wake + 30.0 * exchange_us(&sc.profile, &sc.timing, 64);
    sc
}

/// A sends B a dense payload; C wakes during it with a one-symbol window, so
/// its NIFS wait would end just after the DATA frame, but B's ACK, due one
/// SIFS after the DATA frame, must come first.
pub fn sifs_priority(profile: DeviceProfile) -> SimScenario {
    let mut sc = SimScenario::new(profile, nodes(3), 0.0);
    let tau = sc.profile.symbol_duration_us;
    sc.timing.b_override_us = Some(tau);
    let wake = first_data_start_us(&sc.profile, &sc.timing) + (DATA_HEADER_BITS + 40) as f64 * tau;
    sc.nodes[2].wake_at_us = wake;
    sc.traffic.push(TrafficSpec {
        at_us: 0.0,
        src: 0,
        dest: 1,
        payload: BitString::from_octets(&[0x55; 16]),
    });
    sc.traffic.push(TrafficSpec { at_us: 0.0, src: 2, dest: 1, payload: filler(4, 4) });
    sc.duration_us = wake + 4.0 * exchange_us(&sc.profile, &sc.timing, 16);
    sc
}
