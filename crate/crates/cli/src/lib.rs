//! Operational shell around the core: a journal-backed service hosting all
//! five authorities plus the ledger, HTTP endpoints for the VPKI
//! operations, and the benchmark/ad-hoc command line.

pub mod config;
pub mod http;
pub mod journal;
pub mod service;
