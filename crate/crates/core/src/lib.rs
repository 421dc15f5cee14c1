//! Exact k-fold colorings of Schreier graphs from clopen independent-set
//! rules on the Bernoulli shift.
//!
//! The pipeline: pick a clopen independent set `I = (D, Φ)` of the shift
//! space (see [`local_rule`]), an instance carrying a group action (see
//! [`instances`] and [`decoration`]), and let [`engine::synthesize`] build the
//! `2^N` sets `I_φ`, which cover every certified vertex exactly
//! `|Φ|·2^{N−|D|}` times. [`lp_oracle`] computes exact fractional chromatic
//! numbers of small graphs to cross-check the result.

pub mod cli;
pub mod decoration;
pub mod engine;
pub mod error;
pub mod group;
pub mod heuristics;
pub mod instances;
pub mod local_rule;
pub mod lp_oracle;
pub mod rational;
pub mod rng;

pub use error::{Error, Result};
pub use group::{GroupCtx, GroupElement, Window};
pub use local_rule::ClopenSet;
pub use rational::Rational;
