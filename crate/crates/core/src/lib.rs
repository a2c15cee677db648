//! Requirements engineering toolkit for IoT software systems: artifact
//! model, document format, scenario inspection, traceability, stage gates
//! and reporting.

pub mod data;
pub mod docformat;
pub mod gates;
pub mod iia;
pub mod inspection;
pub mod literal;
pub mod model;
pub mod report;
pub mod trace;

#[cfg(any(test, feature = "test-support"))]
pub mod gen;
