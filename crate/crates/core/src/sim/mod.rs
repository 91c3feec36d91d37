//! Discrete-event simulation of the silent-symbol contention MAC.
//!
//! A node with a queued frame waits for an unbroken idle window of `b + NIFS`
//! before its RTS. Silence inside an RBN payload is indistinguishable from an
//! idle channel, so `b` defaults to the longest frame duration: no payload can
//! hide a transmission for that long. Responses (CTS, DATA, ACK) follow after
//! exactly SIFS without sensing. Overheard RTS/CTS frames set a NAV.
//!
//! The simulation is deterministic for a given scenario and seed.

mod channel;
pub mod check;
pub mod presets;
mod scenario;
mod trace;

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub use channel::{Channel, ChannelStatus, Reception, Transmission};
pub use scenario::{
    ns_to_us, us_to_ns, Link, NodeSpec, ScenarioError, SimScenario, SimTime, Timing, Topology, TrafficSpec,
};
pub use trace::{TraceEvent, TraceRecord};

use crate::energy::{stream_energy, EnergyBreakdown, TransmissionMode};
use crate::frame::{
    build_control_frame, build_data_frame, data_frame_symbols, parse_frame, Address, DataFrame, Frame,
    FrameError, FrameType, CONTROL_SYMBOLS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Idle,
    /// Waiting for the idle window before an RTS.
    SensingWaitB,
    Backoff,
    AwaitCts,
    Transmitting,
    AwaitAck,
    /// Answered an RTS; waiting for the DATA frame.
    Receiving,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Idle => "idle",
            Phase::SensingWaitB => "sensing_wait_b",
            Phase::Backoff => "backoff",
            Phase::AwaitCts => "await_cts",
            Phase::Transmitting => "transmitting",
            Phase::AwaitAck => "await_ack",
            Phase::Receiving => "receiving",
        }
    }
}

/// A node's state when the simulation stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    pub phase: Phase,
    pub queued: usize,
    pub contention_window: u32,
    /// Failed attempts on the head-of-queue frame.
    pub backoff_stage: u32,
    pub nav_until: SimTime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimMetrics {
    pub offered: usize,
    pub delivered: usize,
    pub duplicates: usize,
    pub dropped: usize,
    /// DATA frames that reached their destination with a bad checksum.
    pub crc_failures: usize,
    /// Other frames that reached their destination unparseable.
    pub rx_errors: usize,
    pub rts_collisions: usize,
    pub retries: usize,
    /// Transmit energy per node.
    pub node_energy: Vec<EnergyBreakdown>,
    /// Fraction of the run during which some transmitter emitted an
    /// energized symbol.
    pub channel_busy_fraction: f64,
    /// Arrival-to-delivery time of each delivered frame.
    pub latencies: Vec<SimTime>,
    pub duration: SimTime,
}

impl SimMetrics {
    pub fn total_energy_uj(&self) -> f64 {
        self.node_energy.iter().map(|e| e.total).sum()
    }

    pub fn delivery_ratio(&self) -> f64 {
        if self.offered == 0 {
            0.0
        } else {
            self.delivered as f64 / self.offered as f64
        }
    }

    pub fn mean_latency_us(&self) -> Option<f64> {
        if self.latencies.is_empty() {
            return None;
        }
        let sum: u128 = self.latencies.iter().map(|&l| l as u128).sum();
        Some(sum as f64 / self.latencies.len() as f64 / 1000.0)
    }
}

#[derive(Debug, Clone)]
pub struct SimOutput {
    pub metrics: SimMetrics,
    pub trace: Vec<TraceRecord>,
    pub transmissions: Vec<Transmission>,
    pub nodes: Vec<NodeState>,
    pub symbol_duration: SimTime,
}

pub fn run(scenario: &SimScenario) -> Result<SimOutput, ScenarioError> {
    scenario.validate()?;
    Ok(Engine::new(scenario).run())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Response {
    Cts { to: usize },
    Data,
    Ack { to: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    TxEnd(usize),
    RxEnd(usize),
    Arrival(usize),
    SenseCheck,
    BackoffDone,
    Send(Response),
    Timeout,
}

impl Action {
    /// Channel events at an instant are handled before protocol timers.
    fn class(self) -> u8 {
        match self {
            Action::TxEnd(_) | Action::RxEnd(_) => 0,
            Action::Arrival(_) => 1,
            _ => 2,
        }
    }

    fn is_timer(self) -> bool {
        self.class() == 2
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: SimTime,
    node: usize,
    seq: u64,
    generation: u64,
    action: Action,
}

impl Event {
    fn key(&self) -> (SimTime, usize, u8, u64) {
        (self.time, self.node, self.action.class(), self.seq)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

struct NodeRt {
    address: Address,
    wake: SimTime,
    phase: Phase,
    queue: VecDeque<usize>,
    cw: u32,
    retries: u32,
    nav_until: SimTime,
    /// Bumped to invalidate pending timers.
    generation: u64,
    sense_start: SimTime,
    peer: Option<usize>,
    expect_len: usize,
    energy: EnergyBreakdown,
}

struct TxMeta {
    dest: usize,
    traffic: Option<usize>,
}

struct Engine<'a> {
    sc: &'a SimScenario,
    tau: SimTime,
    slot: SimTime,
    sifs: SimTime,
    b: SimTime,
    window: SimTime,
    margin: SimTime,
    horizon: SimTime,
    channel: Channel,
    nodes: Vec<NodeRt>,
    by_address: BTreeMap<Address, usize>,
    frames: Vec<DataFrame>,
    arrived_at: Vec<SimTime>,
    tx_meta: Vec<TxMeta>,
    delivered: BTreeSet<usize>,
    events: BinaryHeap<Reverse<Event>>,
    seq: u64,
    rng: ChaCha8Rng,
    trace: Vec<TraceRecord>,
    m: SimMetrics,
}

impl<'a> Engine<'a> {
    fn new(sc: &'a SimScenario) -> Self {
        let t = &sc.timing;
        let tau = us_to_ns(sc.profile.symbol_duration_us).max(1);
        let b = us_to_ns(t.b_us(&sc.profile));
        let nodes: Vec<NodeRt> = sc
            .nodes
            .iter()
            .map(|n| NodeRt {
                address: n.address,
                wake: us_to_ns(n.wake_at_us),
                phase: Phase::Idle,
                queue: VecDeque::new(),
                cw: t.cw_min,
                retries: 0,
                nav_until: 0,
                generation: 0,
                sense_start: 0,
                peer: None,
                expect_len: 0,
                energy: EnergyBreakdown::zero(TransmissionMode::Rbn),
            })
            .collect();
        let by_address = nodes.iter().enumerate().map(|(i, n)| (n.address, i)).collect();
        let frames = sc
            .traffic
            .iter()
            .map(|tr| {
                build_data_frame(nodes[tr.dest].address, nodes[tr.src].address, &tr.payload)
                    .expect("validated payload")
            })
            .collect();
        let n = nodes.len();
        let mut engine = Self {
            sc,
            tau,
            slot: us_to_ns(t.slot_us),
            sifs: us_to_ns(t.sifs_us),
            b,
            window: b + us_to_ns(t.nifs_us),
            margin: us_to_ns(t.timeout_margin_us),
            horizon: us_to_ns(sc.duration_us),
            channel: Channel::new(sc.adjacency(), tau),
            nodes,
            by_address,
            frames,
            arrived_at: alloc::vec![0; sc.traffic.len()],
            tx_meta: Vec::new(),
            delivered: BTreeSet::new(),
            events: BinaryHeap::new(),
            seq: 0,
            rng: ChaCha8Rng::seed_from_u64(sc.rng_seed),
            trace: Vec::new(),
            m: SimMetrics {
                offered: 0,
                delivered: 0,
                duplicates: 0,
                dropped: 0,
                crc_failures: 0,
                rx_errors: 0,
                rts_collisions: 0,
                retries: 0,
                node_energy: Vec::with_capacity(n),
                channel_busy_fraction: 0.0,
                latencies: Vec::new(),
                duration: 0,
            },
        };
        for (i, tr) in sc.traffic.iter().enumerate() {
            let at = us_to_ns(tr.at_us).max(engine.nodes[tr.src].wake);
            engine.schedule(at, tr.src, Action::Arrival(i));
        }
        engine
    }

    fn ctrl_duration(&self) -> SimTime {
        CONTROL_SYMBOLS as SimTime * self.tau
    }

    fn data_duration(&self, octets: usize) -> SimTime {
        data_frame_symbols(octets) as SimTime * self.tau
    }

    fn round_trip(&self, a: usize, b: usize) -> SimTime {
        2 * self.channel.delay(a, b).unwrap_or(0)
    }

    fn schedule(&mut self, time: SimTime, node: usize, action: Action) {
        self.seq += 1;
        let generation = self.nodes[node].generation;
        self.events.push(Reverse(Event { time, node, seq: self.seq, generation, action }));
    }

    /// Cancels the node's pending timers and schedules a new one.
    fn set_timer(&mut self, time: SimTime, node: usize, action: Action) {
        self.nodes[node].generation += 1;
        self.schedule(time, node, action);
    }

    fn log(&mut self, time: SimTime, node: usize, event: TraceEvent) {
        self.trace.push(TraceRecord { time, node, event });
    }

    fn run(mut self) -> SimOutput {
        while let Some(Reverse(ev)) = self.events.pop() {
            if ev.time > self.horizon {
                break;
            }
            if ev.action.is_timer() && ev.generation != self.nodes[ev.node].generation {
                continue;
            }
            let (now, node) = (ev.time, ev.node);
            match ev.action {
                Action::Arrival(tr) => self.on_arrival(now, node, tr),
                Action::SenseCheck => self.sense_check(now, node),
                Action::BackoffDone => self.start_sensing(now, node),
                Action::Send(r) => self.send_response(now, node, r),
                Action::TxEnd(id) => self.on_tx_end(now, node, id),
                Action::RxEnd(id) => self.on_rx_end(now, node, id),
                Action::Timeout => self.on_timeout(now, node),
            }
        }
        self.finish()
    }

    fn finish(mut self) -> SimOutput {
        self.m.duration = self.horizon;
        self.m.node_energy = self.nodes.iter().map(|n| n.energy).collect();
        self.m.channel_busy_fraction = self.busy_fraction();
        let nodes = self
            .nodes
            .iter()
            .map(|n| NodeState {
                phase: n.phase,
                queued: n.queue.len(),
                contention_window: n.cw,
                backoff_stage: n.retries,
                nav_until: n.nav_until,
            })
            .collect();
        SimOutput {
            metrics: self.m,
            trace: self.trace,
            symbol_duration: self.tau,
            transmissions: self.channel.into_transmissions(),
            nodes,
        }
    }

    fn busy_fraction(&self) -> f64 {
        if self.horizon == 0 {
            return 0.0;
        }
        let mut spans: Vec<(SimTime, SimTime)> = self
            .channel
            .transmissions()
            .iter()
            .flat_map(|tx| tx.energized_intervals(self.tau))
            .map(|(s, e)| (s.min(self.horizon), e.min(self.horizon)))
            .filter(|(s, e)| s < e)
            .collect();
        spans.sort_unstable();
        let (mut busy, mut reach) = (0, 0);
        for (s, e) in spans {
            let s = s.max(reach);
            if e > s {
                busy += e - s;
            }
            reach = reach.max(e);
        }
        busy as f64 / self.horizon as f64
    }

    fn on_arrival(&mut self, now: SimTime, node: usize, tr: usize) {
        self.m.offered += 1;
        self.arrived_at[tr] = now;
        self.nodes[node].queue.push_back(tr);
        let dest = self.sc.traffic[tr].dest;
        self.log(now, node, TraceEvent::Arrival { traffic: tr, dest });
        if self.nodes[node].phase == Phase::Idle {
            self.start_sensing(now, node);
        }
    }

    fn resume(&mut self, now: SimTime, node: usize) {
        self.nodes[node].peer = None;
        if self.nodes[node].queue.is_empty() {
            self.nodes[node].phase = Phase::Idle;
            self.nodes[node].generation += 1;
        } else {
            self.start_sensing(now, node);
        }
    }

    fn start_sensing(&mut self, now: SimTime, node: usize) {
        let n = &mut self.nodes[node];
        n.phase = Phase::SensingWaitB;
        n.sense_start = now;
        n.generation += 1;
        self.sense_check(now, node);
    }

    fn sense_check(&mut self, now: SimTime, node: usize) {
        let n = &self.nodes[node];
        let quiet = self.channel.quiet_since(node, now).max(n.nav_until).max(n.sense_start).max(n.wake);
        let ready = quiet + self.window;
        if ready <= now {
            self.send_rts(now, node);
        } else {
            self.set_timer(ready, node, Action::SenseCheck);
        }
    }

    fn send_rts(&mut self, now: SimTime, node: usize) {
        let tr = *self.nodes[node].queue.front().expect("sensing with an empty queue");
        let dest = self.sc.traffic[tr].dest;
        let length = (self.sc.traffic[tr].payload.len() / 8) as u16;
        let frame =
            build_control_frame(FrameType::Rts, self.nodes[dest].address, self.nodes[node].address, length);
        self.nodes[node].peer = Some(dest);
        self.transmit(now, node, FrameType::Rts, frame.symbols(), dest, Some(tr));
    }

    fn send_response(&mut self, now: SimTime, node: usize, r: Response) {
        let own = self.nodes[node].address;
        match r {
            Response::Cts { to } => {
                let f = build_control_frame(FrameType::Cts, self.nodes[to].address, own, 0);
                self.transmit(now, node, FrameType::Cts, f.symbols(), to, None);
            }
            Response::Ack { to } => {
                let f = build_control_frame(FrameType::Ack, self.nodes[to].address, own, 0);
                self.transmit(now, node, FrameType::Ack, f.symbols(), to, None);
            }
            Response::Data => {
                let tr = *self.nodes[node].queue.front().expect("data without a queued frame");
                let symbols = self.frames[tr].symbols();
                let dest = self.sc.traffic[tr].dest;
                self.transmit(now, node, FrameType::Data, symbols, dest, Some(tr));
            }
        }
    }

    fn transmit(
        &mut self,
        now: SimTime,
        node: usize,
        kind: FrameType,
        symbols: Vec<crate::symbol::Symbol>,
        dest: usize,
        traffic: Option<usize>,
    ) {
        let e = stream_energy(&symbols, &self.sc.profile, self.sc.count_transients);
        self.nodes[node].energy += e;
        self.nodes[node].phase = Phase::Transmitting;
        self.nodes[node].generation += 1;
        let count = symbols.len();
        let id = self.channel.add(node, now, kind, symbols);
        self.tx_meta.push(TxMeta { dest, traffic });
        self.log(now, node, TraceEvent::TxStart { kind, dest, symbols: count });
        let end = now + count as SimTime * self.tau;
        self.schedule(end, node, Action::TxEnd(id));
        let receivers: Vec<(usize, SimTime)> = self.channel.neighbors(node).collect();
        for (r, d) in receivers {
            self.schedule(end + d, r, Action::RxEnd(id));
        }
    }

    fn on_tx_end(&mut self, now: SimTime, node: usize, id: usize) {
        let kind = self.channel.transmission(id).kind;
        self.log(now, node, TraceEvent::TxEnd { kind });
        let peer = self.nodes[node].peer;
        let rtt = peer.map_or(0, |p| self.round_trip(node, p));
        let reply = self.sifs + self.ctrl_duration() + self.margin + rtt;
        match kind {
            FrameType::Rts => {
                self.nodes[node].phase = Phase::AwaitCts;
                self.set_timer(now + reply, node, Action::Timeout);
            }
            FrameType::Data => {
                self.nodes[node].phase = Phase::AwaitAck;
                self.set_timer(now + reply, node, Action::Timeout);
            }
            FrameType::Cts => {
                self.nodes[node].phase = Phase::Receiving;
                let wait = self.sifs + self.data_duration(self.nodes[node].expect_len) + self.margin + rtt;
                self.set_timer(now + wait, node, Action::Timeout);
            }
            FrameType::Ack => self.resume(now, node),
        }
    }

    fn on_timeout(&mut self, now: SimTime, node: usize) {
        let phase = self.nodes[node].phase;
        self.log(now, node, TraceEvent::Timeout { phase });
        match phase {
            Phase::AwaitCts | Phase::AwaitAck => self.fail_attempt(now, node),
            Phase::Receiving => self.resume(now, node),
            _ => {}
        }
    }

    fn fail_attempt(&mut self, now: SimTime, node: usize) {
        let limit = self.sc.timing.retry_limit;
        let (cw_min, cw_max) = (self.sc.timing.cw_min, self.sc.timing.cw_max);
        self.nodes[node].peer = None;
        self.nodes[node].retries += 1;
        if self.nodes[node].retries > limit {
            let tr = self.nodes[node].queue.pop_front().expect("failed attempt without a frame");
            self.m.dropped += 1;
            self.log(now, node, TraceEvent::Dropped { traffic: tr });
            let n = &mut self.nodes[node];
            n.retries = 0;
            n.cw = cw_min;
            self.resume(now, node);
            return;
        }
        self.m.retries += 1;
        let cw = self.nodes[node].cw;
        let slots = uniform_below(&mut self.rng, cw);
        self.log(now, node, TraceEvent::Backoff { slots, cw });
        let n = &mut self.nodes[node];
        n.cw = cw.saturating_mul(2).min(cw_max);
        n.phase = Phase::Backoff;
        self.set_timer(now + slots as SimTime * self.slot, node, Action::BackoffDone);
    }

    fn on_rx_end(&mut self, now: SimTime, node: usize, id: usize) {
        let tx = self.channel.transmission(id);
        let (from, kind) = (tx.node, tx.kind);
        let arrival = now - tx.len() as SimTime * self.tau;
        if self.nodes[node].wake > arrival || self.channel.transmitted_during(node, arrival, now) {
            return;
        }
        let reception = self.channel.receive(id, node);
        let intended = self.tx_meta[id].dest == node;
        let frame = match parse_frame(&reception.symbols) {
            Ok(f) => f,
            Err(error) => {
                if intended {
                    match (kind, &error) {
                        (FrameType::Data, FrameError::CrcMismatch { .. }) => self.m.crc_failures += 1,
                        (FrameType::Rts, _) => self.m.rts_collisions += 1,
                        _ => self.m.rx_errors += 1,
                    }
                    self.log(now, node, TraceEvent::RxError { kind, from, error });
                }
                return;
            }
        };
        let Some(&sender) = self.by_address.get(&frame.src()) else { return };
        if frame.dest() != self.nodes[node].address {
            self.overheard(now, node, &frame);
            return;
        }
        self.log(now, node, TraceEvent::RxOk { kind: frame.kind(), from: sender, started: arrival });
        let n = &self.nodes[node];
        let expecting = n.peer == Some(sender);
        match frame {
            Frame::Control(c) if c.kind == FrameType::Rts => {
                let free = matches!(n.phase, Phase::Idle | Phase::SensingWaitB | Phase::Backoff);
                if free && n.nav_until <= now {
                    let n = &mut self.nodes[node];
                    n.peer = Some(sender);
                    n.expect_len = c.length as usize;
                    n.phase = Phase::Receiving;
                    self.set_timer(now + self.sifs, node, Action::Send(Response::Cts { to: sender }));
                } else {
                    self.log(now, node, TraceEvent::RtsIgnored { from: sender });
                }
            }
            Frame::Control(c) if c.kind == FrameType::Cts => {
                if n.phase == Phase::AwaitCts && expecting {
                    self.set_timer(now + self.sifs, node, Action::Send(Response::Data));
                }
            }
            Frame::Control(_) => {
                if n.phase == Phase::AwaitAck && expecting {
                    let tr = self.nodes[node].queue.pop_front().expect("ack without a frame");
                    self.log(now, node, TraceEvent::Success { traffic: tr });
                    let n = &mut self.nodes[node];
                    n.retries = 0;
                    n.cw = self.sc.timing.cw_min;
                    self.resume(now, node);
                }
            }
            Frame::Data(_) => {
                if n.phase != Phase::Receiving || !expecting {
                    return;
                }
                if let Some(tr) = self.tx_meta[id].traffic {
                    if self.delivered.insert(tr) {
                        let latency = now - self.arrived_at[tr];
                        self.m.delivered += 1;
                        self.m.latencies.push(latency);
                        self.log(now, node, TraceEvent::Delivered { traffic: tr, from: sender, latency });
                    } else {
                        self.m.duplicates += 1;
                        self.log(now, node, TraceEvent::Duplicate { traffic: tr, from: sender });
                    }
                }
                self.set_timer(now + self.sifs, node, Action::Send(Response::Ack { to: sender }));
            }
        }
    }

    /// NAV from a frame addressed to someone else.
    fn overheard(&mut self, now: SimTime, node: usize, frame: &Frame) {
        let (sifs, ctrl) = (self.sifs, self.ctrl_duration());
        let until = match frame {
            Frame::Control(c) if c.kind == FrameType::Rts => {
                now + sifs + ctrl + sifs + self.data_duration(c.length as usize) + sifs + ctrl
            }
            Frame::Control(c) if c.kind == FrameType::Cts => now + sifs + self.b + sifs + ctrl,
            _ => return,
        };
        if until > self.nodes[node].nav_until {
            self.nodes[node].nav_until = until;
            self.log(now, node, TraceEvent::Nav { until });
        }
    }
}

/// Uniform draw from `0..bound` by rejection sampling.
fn uniform_below(rng: &mut ChaCha8Rng, bound: u32) -> u32 {
    debug_assert!(bound > 0);
    let zone = u32::MAX - (u32::MAX - bound + 1) % bound;
    loop {
        let v = rng.next_u32();
        if v <= zone {
            return v % bound;
        }
    }
}
