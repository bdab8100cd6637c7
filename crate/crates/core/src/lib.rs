//! Capacity analysis of SDMA versus CDMA cellular links.
//!
//! The crate is split along the same lines as the analysis itself:
//!
//! * [`scalar_math`]: the Gaussian tail function `Q`, its inverse and dB helpers.
//! * [`ber_models`]: closed-form average bit error rate for omni (CDMA) and
//!   directive (SDMA) base station antennas, a co-channel/path-loss extension,
//!   curve sweeps and the capacity solver.
//! * [`beamforming`]: linear-array steering vectors, the weighted combiner,
//!   beam patterns, directivity, null steering and the ideal flat-top beam.
//! * [`link_montecarlo`]: a chip-level asynchronous DS-CDMA simulator used to
//!   check the closed forms independently.
//! * [`sdma_scheduler`]: DOA-based spatial channel assignment and tracking.
//! * [`cli`]: the `sdma` command line front end and its CSV formats.

pub mod ber_models;
pub mod beamforming;
pub mod cli;
mod error;
pub mod link_montecarlo;
pub mod scalar_math;
pub mod sdma_scheduler;

pub use error::{Error, Result};
pub use scalar_math::{Directivity, Probability};
