//! Memory-budgeted, out-of-core multiple imputation by chained equations.
//!
//! The crate ingests tables far larger than RAM into a chunked, disk-backed
//! columnar store, runs per-variable conditional models over chunk streams
//! with bounded-memory sufficient statistics, draws stochastic imputations,
//! fits a downstream logistic analysis model per completed data set, and
//! pools the results with Rubin's rules. Peak resident memory is an enforced
//! contract: the chunk cache never holds more than its byte budget plus one
//! chunk.

pub mod chunkstore;
pub mod error;
pub mod rng;
pub mod schema;
