//! Exact symbolic toolkit for quantization on Lie groups.

pub mod diffop;
pub mod extension;
pub mod fixtures;
pub mod group_law;
pub mod lie;
pub mod linalg;
pub mod polarization;
pub mod report;
pub mod representation;
pub mod specfile;
pub mod symbolic;
pub mod uea;
pub mod virasoro;
