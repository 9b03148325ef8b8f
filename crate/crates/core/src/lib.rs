//! Total energy efficiency of massive-MIMO uplink receivers: time-reversal
//! MRC under single-carrier transmission against frequency-domain MRC under
//! OFDM.
//!
//! The crate combines closed-form SINR and rate bounds ([`analytic`]), flop
//! counts ([`complexity`]), a circuit power model ([`power`]), a sample-level
//! link simulator ([`linklevel`]) and Monte Carlo study drivers ([`study`]).

#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod channel;
pub mod complexity;
pub mod config;
pub mod dsp;
pub mod error;
pub mod geometry;
pub mod linklevel;
pub mod power;
pub mod rng;
pub mod study;

pub use config::{PowerModelConfig, Scheme, SystemConfig};
pub use error::{Error, Result};
