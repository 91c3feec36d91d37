use alloc::vec::Vec;

use crate::energy::{DeviceProfile, ProfileError};
use crate::frame::{max_frame_duration, Address, MAX_PAYLOAD_OCTETS};
use crate::rbn::BitString;

/// Simulation time in nanoseconds.
pub type SimTime = u64;

/// Rounds to the nearest nanosecond; negative inputs saturate to zero.
pub fn us_to_ns(us: f64) -> SimTime {
    (us * 1000.0 + 0.5) as SimTime
}

pub fn ns_to_us(ns: SimTime) -> f64 {
    ns as f64 / 1000.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub address: Address,
    /// Needed only for [`Topology::Range`].
    pub position: Option<(f64, f64)>,
    /// The radio neither senses nor receives before this time.
    pub wake_at_us: f64,
}

impl NodeSpec {
    pub fn new(address: Address) -> Self {
        Self { address, position: None, wake_at_us: 0.0 }
    }
}

/// An undirected link between two node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub delay_us: f64,
}

impl Link {
    pub fn new(a: usize, b: usize) -> Self {
        Self { a, b, delay_us: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    /// Nodes within `radius` of each other are connected with zero delay.
    Range {
        radius: f64,
    },
    Links(Vec<Link>),
    /// Every node hears every other node.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficSpec {
    pub at_us: f64,
    pub src: usize,
    pub dest: usize,
    pub payload: BitString,
}

/// Protocol timing and contention parameters. All durations in µs.
#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub slot_us: f64,
    pub sifs_us: f64,
    pub nifs_us: f64,
    /// Replaces the idle window `b`, which defaults to the longest frame.
    pub b_override_us: Option<f64>,
    pub cw_min: u32,
    pub cw_max: u32,
    pub retry_limit: u32,
    /// Slack added to every CTS/ACK/DATA timeout.
    pub timeout_margin_us: f64,
}

impl Timing {
    /// Defaults scaled to the profile's symbol duration `τ`: slot `τ`,
    /// SIFS `2τ`, NIFS `SIFS + 2·slot`, CW 16..1024, 7 retries.
    pub fn for_profile(profile: &DeviceProfile) -> Self {
        let tau = profile.symbol_duration_us;
        Self {
            slot_us: tau,
            sifs_us: 2.0 * tau,
            nifs_us: 6.0 * tau,
            b_override_us: None,
            cw_min: 16,
            cw_max: 1024,
            retry_limit: 7,
            timeout_margin_us: tau,
        }
    }

    /// The idle window that must precede an RTS.
    pub fn b_us(&self, profile: &DeviceProfile) -> f64 {
        self.b_override_us.unwrap_or_else(|| max_frame_duration(profile))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimScenario {
    pub nodes: Vec<NodeSpec>,
    pub topology: Topology,
    pub traffic: Vec<TrafficSpec>,
    pub timing: Timing,
    pub profile: DeviceProfile,
    pub rng_seed: u64,
    pub duration_us: f64,
    pub count_transients: bool,
}

impl SimScenario {
    /// Scenario with default timing, no traffic and full connectivity.
    pub fn new(profile: DeviceProfile, nodes: Vec<NodeSpec>, duration_us: f64) -> Self {
        Self {
            nodes,
            topology: Topology::Full,
            traffic: Vec::new(),
            timing: Timing::for_profile(&profile),
            profile,
            rng_seed: 0,
            duration_us,
            count_transients: false,
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.profile.validate()?;
        let n = self.nodes.len();
        if n == 0 {
            return Err(ScenarioError::NoNodes);
        }
        let t = &self.timing;
        let durations = [t.slot_us, t.sifs_us, t.nifs_us, t.timeout_margin_us, self.duration_us];
        if durations.iter().any(|d| !(d.is_finite() && *d >= 0.0)) || t.slot_us <= 0.0 {
            return Err(ScenarioError::Timing("durations must be finite and non-negative, slot positive"));
        }
        if t.sifs_us >= t.nifs_us {
            return Err(ScenarioError::Timing("SIFS must be shorter than NIFS"));
        }
        if let Some(b) = t.b_override_us {
            if !(b.is_finite() && b >= 0.0) {
                return Err(ScenarioError::Timing("b override must be finite and non-negative"));
            }
        }
        if t.cw_min == 0 || t.cw_max < t.cw_min {
            return Err(ScenarioError::Timing("need 1 <= cw_min <= cw_max"));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.address.is_group() {
                return Err(ScenarioError::GroupAddress(i));
            }
            if self.nodes[..i].iter().any(|m| m.address == node.address) {
                return Err(ScenarioError::DuplicateAddress(i));
            }
            if !(node.wake_at_us.is_finite() && node.wake_at_us >= 0.0) {
                return Err(ScenarioError::Timing("wake times must be finite and non-negative"));
            }
        }
        match &self.topology {
            Topology::Full => {}
            Topology::Range { radius } => {
                if !(radius.is_finite() && *radius >= 0.0) {
                    return Err(ScenarioError::Timing("radius must be finite and non-negative"));
                }
                if let Some(i) = self.nodes.iter().position(|nd| nd.position.is_none()) {
                    return Err(ScenarioError::MissingPosition(i));
                }
            }
            Topology::Links(links) => {
                for (i, l) in links.iter().enumerate() {
                    if l.a >= n || l.b >= n || l.a == l.b {
                        return Err(ScenarioError::BadLink(i));
                    }
                    if !(l.delay_us.is_finite() && l.delay_us >= 0.0) {
                        return Err(ScenarioError::BadLink(i));
                    }
                    let dup =
                        links[..i].iter().any(|m| (m.a == l.a && m.b == l.b) || (m.a == l.b && m.b == l.a));
                    if dup {
                        return Err(ScenarioError::BadLink(i));
                    }
                }
            }
        }
        for (i, tr) in self.traffic.iter().enumerate() {
            if tr.src >= n || tr.dest >= n || tr.src == tr.dest {
                return Err(ScenarioError::BadTraffic(i, "src/dest must be distinct node indices"));
            }
            if !(tr.at_us.is_finite() && tr.at_us >= 0.0) {
                return Err(ScenarioError::BadTraffic(i, "arrival time must be non-negative"));
            }
            if tr.payload.len() % 8 != 0 || tr.payload.len() / 8 > MAX_PAYLOAD_OCTETS {
                return Err(ScenarioError::BadTraffic(i, "payload must be whole octets, at most 1500"));
            }
        }
        Ok(())
    }

    /// Symmetric delay matrix in ns; `None` where nodes cannot hear each other.
    pub(crate) fn adjacency(&self) -> Vec<Vec<Option<SimTime>>> {
        let n = self.nodes.len();
        let mut adj = alloc::vec![alloc::vec![None; n]; n];
        match &self.topology {
            Topology::Full => {
                for (i, row) in adj.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        if i != j {
                            *cell = Some(0);
                        }
                    }
                }
            }
            Topology::Range { radius } => {
                let r2 = radius * radius;
                for (i, row) in adj.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        let (Some((xi, yi)), Some((xj, yj))) =
                            (self.nodes[i].position, self.nodes[j].position)
                        else {
                            continue;
                        };
                        let d2 = (xi - xj) * (xi - xj) + (yi - yj) * (yi - yj);
                        if i != j && d2 <= r2 {
                            *cell = Some(0);
                        }
                    }
                }
            }
            Topology::Links(links) => {
                for l in links {
                    let d = us_to_ns(l.delay_us);
                    adj[l.a][l.b] = Some(d);
                    adj[l.b][l.a] = Some(d);
                }
            }
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario has no nodes")]
    NoNodes,
    #[error("invalid timing: {0}")]
    Timing(&'static str),
    #[error("node {0} has a group address; only unicast stations are simulated")]
    GroupAddress(usize),
    #[error("node {0} reuses another node's address")]
    DuplicateAddress(usize),
    #[error("node {0} has no position but the topology is range-based")]
    MissingPosition(usize),
    #[error("link {0} is malformed or duplicated")]
    BadLink(usize),
    #[error("traffic item {0}: {1}")]
    BadTraffic(usize, &'static str),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}
