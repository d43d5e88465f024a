//! Batch-presented graph and interval coloring.
//!
//! Vertices arrive in batches; each batch must be properly colored before the
//! next one is revealed, and colors are final once assigned. The crate
//! provides online coloring algorithms for this model, adaptive adversaries
//! that force poor competitive ratios, exact offline oracles for small
//! instances, and a harness that plays algorithms against adversaries and
//! reports exact rational performance ratios.

pub mod adversaries;
pub mod algorithms;
pub mod cli;
pub mod engine;
pub mod format;
pub mod gen;
pub mod graph;
pub mod interval;
pub mod oracle;
pub mod rat;
pub mod sum_coloring;
pub mod two_batches;
