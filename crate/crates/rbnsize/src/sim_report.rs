//! Trace and metrics output for simulation runs.

use std::io::{self, Write};

use rbnsize_core::sim::{ns_to_us, SimOutput, SimScenario, TraceRecord};
use serde::Serialize;

pub const TRACE_HEADER: &str = "# time_us node event detail";

/// One record per line, ordered by time then node.
pub fn write_trace<W: Write>(mut w: W, records: &[TraceRecord]) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

pub fn trace_to_string(records: &[TraceRecord]) -> String {
    let mut buf = Vec::new();
    write_trace(&mut buf, records).expect("writing to memory");
    String::from_utf8(buf).expect("trace is ASCII")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeEnergy {
    pub node: usize,
    pub address: String,
    pub tx_energy_uj: f64,
    pub idle_energy_uj: f64,
    pub transient_energy_uj: f64,
    pub total_uj: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub profile: String,
    pub seed: u64,
    pub duration_us: f64,
    pub offered: usize,
    pub delivered: usize,
    pub duplicates: usize,
    pub dropped: usize,
    pub crc_failures: usize,
    pub rx_errors: usize,
    pub rts_collisions: usize,
    pub retries: usize,
    pub delivery_ratio: f64,
    pub mean_latency_us: Option<f64>,
    pub latencies_us: Vec<f64>,
    pub channel_busy_fraction: f64,
    pub total_energy_uj: f64,
    pub nodes: Vec<NodeEnergy>,
}

impl MetricsReport {
    pub fn new(scenario: &SimScenario, out: &SimOutput) -> Self {
        let m = &out.metrics;
        Self {
            profile: scenario.profile.name.clone(),
            seed: scenario.rng_seed,
            duration_us: ns_to_us(m.duration),
            offered: m.offered,
            delivered: m.delivered,
            duplicates: m.duplicates,
            dropped: m.dropped,
            crc_failures: m.crc_failures,
            rx_errors: m.rx_errors,
            rts_collisions: m.rts_collisions,
            retries: m.retries,
            delivery_ratio: m.delivery_ratio(),
            mean_latency_us: m.mean_latency_us(),
            latencies_us: m.latencies.iter().map(|&l| ns_to_us(l)).collect(),
            channel_busy_fraction: m.channel_busy_fraction,
            total_energy_uj: m.total_energy_uj(),
            nodes: m
                .node_energy
                .iter()
                .enumerate()
                .map(|(i, e)| NodeEnergy {
                    node: i,
                    address: scenario.nodes[i].address.to_string(),
                    tx_energy_uj: e.tx_energy,
                    idle_energy_uj: e.idle_energy,
                    transient_energy_uj: e.transient_energy,
                    total_uj: e.total,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metrics serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbnsize_core::energy::DeviceProfile;
    use rbnsize_core::sim::presets::two_node;
    use rbnsize_core::sim::run;

    #[test]
    fn trace_lines_are_ordered_records() {
        let sc = two_node(DeviceProfile::maxim_2820(), 1, 4);
        let out = run(&sc).unwrap();
        let text = trace_to_string(&out.trace);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0.000 0 arrival"), "{first}");
        assert_eq!(text.lines().count(), out.trace.len() + 1);
    }

    #[test]
    fn metrics_json_shape() {
        let sc = two_node(DeviceProfile::maxim_2820(), 2, 4);
        let out = run(&sc).unwrap();
        let report = MetricsReport::new(&sc, &out);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["delivered"], 2);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
        assert!(v["total_energy_uj"].as_f64().unwrap() > 0.0);
    }
}
