//! Event trace records, ordered by `(time, node)`.

use core::fmt;

use super::scenario::{ns_to_us, SimTime};
use super::Phase;
use crate::frame::{FrameError, FrameType};

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// A frame joined the node's queue.
    Arrival {
        traffic: usize,
        dest: usize,
    },
    TxStart {
        kind: FrameType,
        dest: usize,
        symbols: usize,
    },
    TxEnd {
        kind: FrameType,
    },
    /// A frame addressed to this node parsed cleanly.
    RxOk {
        kind: FrameType,
        from: usize,
        started: SimTime,
    },
    /// A frame addressed to this node failed to parse.
    RxError {
        kind: FrameType,
        from: usize,
        error: FrameError,
    },
    /// An overheard RTS or CTS deferred the node.
    Nav {
        until: SimTime,
    },
    /// An RTS arrived while the node could not answer it.
    RtsIgnored {
        from: usize,
    },
    Timeout {
        phase: Phase,
    },
    Backoff {
        slots: u32,
        cw: u32,
    },
    Delivered {
        traffic: usize,
        from: usize,
        latency: SimTime,
    },
    Duplicate {
        traffic: usize,
        from: usize,
    },
    Success {
        traffic: usize,
    },
    Dropped {
        traffic: usize,
    },
}

impl TraceEvent {
    pub fn name(&self) -> &'static str {
        match self {
            TraceEvent::Arrival { .. } => "arrival",
            TraceEvent::TxStart { .. } => "tx_start",
            TraceEvent::TxEnd { .. } => "tx_end",
            TraceEvent::RxOk { .. } => "rx_ok",
            TraceEvent::RxError { .. } => "rx_error",
            TraceEvent::Nav { .. } => "nav",
            TraceEvent::RtsIgnored { .. } => "rts_ignored",
            TraceEvent::Timeout { .. } => "timeout",
            TraceEvent::Backoff { .. } => "backoff",
            TraceEvent::Delivered { .. } => "delivered",
            TraceEvent::Duplicate { .. } => "duplicate",
            TraceEvent::Success { .. } => "success",
            TraceEvent::Dropped { .. } => "dropped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: SimTime,
    pub node: usize,
    pub event: TraceEvent,
}

impl fmt::Display for TraceRecord {
    /// `<time µs> <node> <event> <detail>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3} {} {}", ns_to_us(self.time), self.node, self.event.name())?;
        match &self.event {
            TraceEvent::Arrival { traffic, dest } => write!(f, " traffic={traffic} dest={dest}"),
            TraceEvent::TxStart { kind, dest, symbols } => {
                write!(f, " kind={} dest={dest} symbols={symbols}", kind.name())
            }
            TraceEvent::TxEnd { kind } => write!(f, " kind={}", kind.name()),
            TraceEvent::RxOk { kind, from, started } => {
                write!(f, " kind={} from={from} started={:.3}", kind.name(), ns_to_us(*started))
            }
            TraceEvent::RxError { kind, from, error } => {
                write!(f, " kind={} from={from} error=\"{error}\"", kind.name())
            }
            TraceEvent::Nav { until } => write!(f, " until={:.3}", ns_to_us(*until)),
            TraceEvent::RtsIgnored { from } => write!(f, " from={from}"),
            TraceEvent::Timeout { phase } => write!(f, " phase={}", phase.name()),
            TraceEvent::Backoff { slots, cw } => write!(f, " slots={slots} cw={cw}"),
            TraceEvent::Delivered { traffic, from, latency } => {
                write!(f, " traffic={traffic} from={from} latency={:.3}", ns_to_us(*latency))
            }
            TraceEvent::Duplicate { traffic, from } => write!(f, " traffic={traffic} from={from}"),
            TraceEvent::Success { traffic } | TraceEvent::Dropped { traffic } => {
                write!(f, " traffic={traffic}")
            }
        }
    }
}
