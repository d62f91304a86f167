//! Outage statistics for RIS-assisted UAV links under mixture-Gamma fading.
//!
//! The crate evaluates the outage probability of a link whose signal reaches
//! a UAV through an N-element reconfigurable intelligent surface (RIS), with
//! optional UAV disorientation/misalignment and transceiver hardware
//! imperfections. The pipeline is
//!
//! 1. [`fading`] — per-element mixture-Gamma envelopes (Nakagami, Rice),
//! 2. [`e2e`] — moment matching of the cascade sum `A = Σ|hᵢ||gᵢ|` to a
//!    generalized-K law and the CDFs of `A` and `A·h_g`,
//! 3. [`geometry`] — the misalignment statistics `(B_o, ζ)` of `h_g`,
//! 4. [`outage`] — outage probability, high-SNR forms and diversity order,
//! 5. [`montecarlo`] — an independent, seeded, worker-count-invariant
//!    simulator used as ground truth.
//!
//! Every closed form has a quadrature or Monte Carlo oracle next to it.

// Coefficient tables are quoted to full published precision, and
// `!(x > 0.0)` is the deliberate NaN-rejecting form of input validation.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod e2e;
pub mod error;
pub mod fading;
pub mod geometry;
pub mod montecarlo;
pub mod outage;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
