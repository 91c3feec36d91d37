//! File formats, corpus benchmark and reporting on top of `rbnsize-core`.

pub mod corpus;
pub mod error;
pub mod frame_io;
pub mod profiles;
pub mod scenario_file;
pub mod sim_report;
pub mod stats;

pub use rbnsize_core;
