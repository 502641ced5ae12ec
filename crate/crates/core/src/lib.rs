//! Exact-arithmetic planner and verifier for quality-adaptive coded caching
//! over degraded broadcast channels.
//!
//! A single server holds a library of scalably-encoded files and serves `K`
//! cache-aided users over a degraded broadcast channel. Each user `k` has a
//! channel strength `α_k ∈ (0,1]` and receives its requested file at quality
//! `Q_k ∈ (0,1]`. The crate computes, entirely in exact rational arithmetic:
//!
//! - the classic coded-caching placement (subpacketization, caches, multicast
//!   messages) for cache degree `t = Kγ` ([`placement`]),
//! - closed-form sub-signal loads, prefix loads, and delivery times
//!   ([`timing`]),
//! - superposition power exponents, GDoF rates, and per-sub-signal times
//!   ([`power`]),
//! - quality-allocation optimizers: baseline, proportional fairness, max-min,
//!   and sum-quality maximisation ([`allocation`]),
//! - a symbolic delivery oracle that assigns quality-layer intervals of every
//!   multicast message to sub-signals and verifies per-user decoding by
//!   enumeration ([`delivery`]),
//! - brute-force grid-search references for the optimizers at desk scale
//!   ([`oracle`]).
//!
//! Floating point appears in exactly one place: the optional finite-power
//! rendering in [`power::render_powers`]. Everything else is exact, so test
//! fixtures compare fractions for equality, not closeness.

pub mod allocation;
pub mod combinatorics;
pub mod delivery;
pub mod model;
pub mod oracle;
pub mod placement;
pub mod power;
pub mod timing;

pub use allocation::{AllocationError, AllocationResult, Method};
pub use combinatorics::{binom, rational_of, BigNat, ParseRationalError, Rational};
pub use delivery::{DecodingReport, DeliveryError, LayerAssignment};
pub use model::{layer_sizes, t_man, ModelError, QualityVector, Scenario, TargetTime};
pub use placement::{MessageLabel, SubfileLabel};
pub use power::{PowerError, PowerPlan};
pub use timing::LoadProfile;
