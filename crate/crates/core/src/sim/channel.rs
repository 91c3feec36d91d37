//! Shared broadcast channel at symbol resolution.
//!
//! Only energized symbols are detectable: carrier sense reports idle during
//! silent payload digits, and a receiver's symbol is garbled whenever another
//! in-range transmitter emits an energized symbol that overlaps it. There is
//! no capture effect.

use alloc::vec::Vec;

use super::scenario::SimTime;
use crate::frame::FrameType;
use crate::symbol::Symbol;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelStatus {
    Idle,
    Busy,
}

/// One frame on the air.
#[derive(Debug, Clone)]
pub struct Transmission {
    pub node: usize,
    pub start: SimTime,
    pub kind: FrameType,
    pub symbols: Vec<Symbol>,
    /// `energized_before[i]`: energized symbols among the first `i`.
    energized_before: Vec<u32>,
    /// Index of the last energized symbol at or before `i`, or `NONE`.
    last_energized: Vec<u32>,
}

impl Transmission {
    pub fn new(node: usize, start: SimTime, kind: FrameType, symbols: Vec<Symbol>) -> Self {
        let mut energized_before = Vec::with_capacity(symbols.len() + 1);
        let mut last_energized = Vec::with_capacity(symbols.len());
        let (mut count, mut last) = (0u32, NONE);
        energized_before.push(0);
        for (i, s) in symbols.iter().enumerate() {
            if s.is_energized() {
                count += 1;
                last = i as u32;
            }
            energized_before.push(count);
            last_energized.push(last);
        }
        Self { node, start, kind, symbols, energized_before, last_energized }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn end(&self, tau: SimTime) -> SimTime {
        self.start + self.len() as SimTime * tau
    }

    fn any_energized(&self, first: usize, last: usize) -> bool {
        self.energized_before[last + 1] > self.energized_before[first]
    }

    /// Energized intervals `[start, end)` on the transmitter's own clock.
    pub fn energized_intervals(&self, tau: SimTime) -> impl Iterator<Item = (SimTime, SimTime)> + '_ {
        let mut i = 0;
        core::iter::from_fn(move || {
            while i < self.symbols.len() && !self.symbols[i].is_energized() {
                i += 1;
            }
            if i == self.symbols.len() {
                return None;
            }
            let first = i;
            while i < self.symbols.len() && self.symbols[i].is_energized() {
                i += 1;
            }
            Some((self.start + first as SimTime * tau, self.start + i as SimTime * tau))
        })
    }
}

/// A frame as seen by one receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reception {
    pub symbols: Vec<Symbol>,
    pub garbled: usize,
}

#[derive(Debug, Clone)]
pub struct Channel {
    tau: SimTime,
    adjacency: Vec<Vec<Option<SimTime>>>,
    transmissions: Vec<Transmission>,
}

impl Channel {
    /// `adjacency[i][j]` is the propagation delay from `i` to `j`, `None`
    /// when out of range. Must be symmetric.
    pub fn new(adjacency: Vec<Vec<Option<SimTime>>>, symbol_duration: SimTime) -> Self {
        assert!(symbol_duration > 0);
        Self { tau: symbol_duration, adjacency, transmissions: Vec::new() }
    }

    /// Every node hears every other node with zero delay.
    pub fn fully_connected(nodes: usize, symbol_duration: SimTime) -> Self {
        let adjacency = (0..nodes).map(|i| (0..nodes).map(|j| (i != j).then_some(0)).collect()).collect();
        Self::new(adjacency, symbol_duration)
    }

    pub fn symbol_duration(&self) -> SimTime {
        self.tau
    }

    pub fn transmissions(&self) -> &[Transmission] {
        &self.transmissions
    }

    pub fn transmission(&self, id: usize) -> &Transmission {
        &self.transmissions[id]
    }

    pub fn into_transmissions(self) -> Vec<Transmission> {
        self.transmissions
    }

    /// Delay from `from` to `to`; a node hears itself with zero delay.
    pub fn delay(&self, from: usize, to: usize) -> Option<SimTime> {
        if from == to {
            Some(0)
        } else {
            self.adjacency[from][to]
        }
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, SimTime)> + '_ {
        self.adjacency[node].iter().enumerate().filter_map(|(j, d)| d.map(|d| (j, d)))
    }

    pub fn add(&mut self, node: usize, start: SimTime, kind: FrameType, symbols: Vec<Symbol>) -> usize {
        self.transmissions.push(Transmission::new(node, start, kind, symbols));
        self.transmissions.len() - 1
    }

    /// Busy iff some other in-range transmitter's energized symbol is on the
    /// air at `node` at instant `t`.
    pub fn carrier_sense(&self, node: usize, t: SimTime) -> ChannelStatus {
        let busy = self.transmissions.iter().any(|tx| {
            if tx.node == node {
                return false;
            }
            let Some(d) = self.delay(tx.node, node) else { return false };
            let arrival = tx.start + d;
            if t < arrival || t >= arrival + tx.len() as SimTime * self.tau {
                return false;
            }
            tx.symbols[((t - arrival) / self.tau) as usize].is_energized()
        });
        if busy {
            ChannelStatus::Busy
        } else {
            ChannelStatus::Idle
        }
    }

    /// End of the latest energized symbol `node` has observed by time `t`,
    /// counting only symbols that had begun by `t`. Includes the node's own
    /// transmissions. Zero when nothing was heard.
    pub fn quiet_since(&self, node: usize, t: SimTime) -> SimTime {
        let mut quiet = 0;
        for tx in &self.transmissions {
            let Some(d) = self.delay(tx.node, node) else { continue };
            let arrival = tx.start + d;
            if arrival > t || tx.is_empty() {
                continue;
            }
            let upto = (((t - arrival) / self.tau) as usize).min(tx.len() - 1);
            let last = tx.last_energized[upto];
            if last != NONE {
                quiet = quiet.max(arrival + (last as SimTime + 1) * self.tau);
            }
        }
        quiet
    }

    /// Whether `node` was emitting at any time in `[from, to)`.
    pub fn transmitted_during(&self, node: usize, from: SimTime, to: SimTime) -> bool {
        self.transmissions.iter().any(|tx| tx.node == node && tx.start < to && from < tx.end(self.tau))
    }

    /// The symbols of transmission `id` as they arrive at `receiver`.
    ///
    /// A garbled silent symbol is read as `+`; a garbled energized symbol is
    /// read with its polarity inverted.
    pub fn receive(&self, id: usize, receiver: usize) -> Reception {
        let tau = self.tau as i128;
        let x = &self.transmissions[id];
        let ax = (x.start + self.delay(x.node, receiver).expect("receiver in range")) as i128;
        let mut garbled_at = alloc::vec![false; x.len()];
        for (yid, y) in self.transmissions.iter().enumerate() {
            if yid == id || y.node == x.node || y.node == receiver || y.is_empty() {
                continue;
            }
            let Some(d) = self.delay(y.node, receiver) else { continue };
            let ay = (y.start + d) as i128;
            let ay_end = ay + y.len() as i128 * tau;
            let ax_end = ax + x.len() as i128 * tau;
            if ay >= ax_end || ax >= ay_end {
                continue;
            }
            let first_slot = ((ay - ax).max(0) / tau) as usize;
            let last_slot = (((ay_end - ax + tau - 1) / tau) as usize).min(x.len()) - 1;
            for (s, flag) in garbled_at.iter_mut().enumerate().take(last_slot + 1).skip(first_slot) {
                let lo = ax + s as i128 * tau;
                let hi = lo + tau;
                if hi <= ay || lo >= ay_end {
                    continue;
                }
                let j_first = ((lo - ay).max(0) / tau) as usize;
                let j_last = ((((hi - ay) + tau - 1) / tau) as usize - 1).min(y.len() - 1);
                if j_first <= j_last && y.any_energized(j_first, j_last) {
                    *flag = true;
                }
            }
        }
        let mut garbled = 0;
        let symbols = x
            .symbols
            .iter()
            .zip(&garbled_at)
            .map(|(&s, &g)| {
                if !g {
                    return s;
                }
                garbled += 1;
                match s {
                    Symbol::Silent | Symbol::Minus => Symbol::Plus,
                    Symbol::Plus => Symbol::Minus,
                }
            })
            .collect();
        Reception { symbols, garbled }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_symbols;

    const TAU: SimTime = 10;

    fn syms(s: &str) -> Vec<Symbol> {
        parse_symbols(s).unwrap()
    }

    #[test]
    fn sensing_sees_only_energized_symbols() {
        let mut ch = Channel::fully_connected(3, TAU);
        assert_eq!(ch.carrier_sense(1, 0), ChannelStatus::Idle);
        ch.add(0, 100, FrameType::Data, syms("+-+-0000+"));
        assert_eq!(ch.carrier_sense(1, 100), ChannelStatus::Busy);
        assert_eq!(ch.carrier_sense(1, 139), ChannelStatus::Busy);
        assert_eq!(ch.carrier_sense(1, 140), ChannelStatus::Idle);
        assert_eq!(ch.carrier_sense(1, 179), ChannelStatus::Idle);
        assert_eq!(ch.carrier_sense(1, 180), ChannelStatus::Busy);
        assert_eq!(ch.carrier_sense(1, 190), ChannelStatus::Idle);
        // the transmitter does not sense itself
        assert_eq!(ch.carrier_sense(0, 100), ChannelStatus::Idle);
    }

    #[test]
    fn out_of_range_is_idle() {
        let adj = alloc::vec![
            alloc::vec![None, Some(0), None],
            alloc::vec![Some(0), None, Some(0)],
            alloc::vec![None, Some(0), None],
        ];
        let mut ch = Channel::new(adj, TAU);
        ch.add(0, 0, FrameType::Rts, syms("++++"));
        assert_eq!(ch.carrier_sense(1, 5), ChannelStatus::Busy);
        assert_eq!(ch.carrier_sense(2, 5), ChannelStatus::Idle);
    }

    #[test]
    fn quiet_is_causal() {
        let mut ch = Channel::fully_connected(2, TAU);
        ch.add(0, 0, FrameType::Data, syms("++00+"));
        assert_eq!(ch.quiet_since(1, 0), 10);
        assert_eq!(ch.quiet_since(1, 25), 20);
        assert_eq!(ch.quiet_since(1, 39), 20);
        assert_eq!(ch.quiet_since(1, 40), 50);
        assert_eq!(ch.quiet_since(0, 1000), 50);
    }

    #[test]
    fn energized_overlap_garbles() {
        let mut ch = Channel::fully_connected(3, TAU);
        let a = ch.add(0, 0, FrameType::Data, syms("+000-"));
        ch.add(2, 15, FrameType::Rts, syms("+0"));
        let rx = ch.receive(a, 1);
        // interferer's energized symbol spans [15, 25): slots 1 and 2
        assert_eq!(rx.symbols, syms("+++0-"));
        assert_eq!(rx.garbled, 2);
    }

    #[test]
    fn silent_interferer_is_harmless() {
        let mut ch = Channel::fully_connected(3, TAU);
        let a = ch.add(0, 0, FrameType::Data, syms("+-+-"));
        ch.add(2, 0, FrameType::Data, syms("0000"));
        assert_eq!(ch.receive(a, 1).garbled, 0);
    }

    #[test]
    fn half_duplex_window() {
        let mut ch = Channel::fully_connected(2, TAU);
        ch.add(1, 50, FrameType::Cts, syms("++"));
        assert!(ch.transmitted_during(1, 0, 60));
        assert!(!ch.transmitted_during(1, 70, 80));
        assert!(!ch.transmitted_during(0, 0, 100));
    }

    #[test]
    fn intervals() {
        let tx = Transmission::new(0, 100, FrameType::Data, syms("++0-00+"));
        let v: Vec<_> = tx.energized_intervals(TAU).collect();
        assert_eq!(v, [(100, 120), (130, 140), (160, 170)]);
    }
}
