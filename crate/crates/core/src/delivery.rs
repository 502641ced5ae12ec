//! Symbolic delivery oracle: assigns quality-layer intervals of every
//! multicast message to sub-signals and verifies per-user decoding by
//! enumeration.
//!
//! The assignment rule is uniform: for a message `σ` with sorted members
//! `m_1 < m_2 < ...`, sub-signal `m_1` carries the interval `[0, Q_{m_1}]` of
//! `σ` and each later member's sub-signal `m_j` tops the message up to its own
//! quality with `(Q_{m_{j-1}}, Q_{m_j}]`. Each top-up is the catch-up of the
//! layers members `< m_j` already consumed plus layer `m_j` itself, so user
//! `k` finds every subfile it needs covered on exactly `[0, Q_k]` within
//! sub-signals `1..k`.
//!
//! Counting the rule per sub-signal gives the measured load directly:
//! `C(K-n, t)` messages have `n` as their smallest member (full `[0, Q_n]`
//! each), and for each `m < n` exactly `C(K-n+m-1, t-1)` messages have `m`
//! and `n` as consecutive members (top-up `Q_n - Q_m` each), so
//!
//! ```text
//! measured_n = Q_n*C(K-n,t) + sum_{m<n} (Q_n - Q_m)*C(K-n+m-1, t-1)
//! ```
//!
//! This is a different grouping of the same information as the closed form
//! in [`crate::timing`]; the tests force the two to agree exactly, message
//! by message, which is the primary defense of the closed forms.
//!
//! Intervals are half-open `(a, b]` with a closed start at zero, so lengths
//! add without double counting at layer boundaries.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::combinatorics::{binom, BigNat, Rational};
use crate::model::{QualityVector, Scenario};
use crate::placement::{multicast_messages, MessageLabel};

/// Enumeration refusal threshold: scenarios with more multicast messages than
/// this are rejected unless forced (closed forms serve large systems).
pub const MESSAGE_LIMIT: u64 = 1_000_000;

/// A rational interval; `(lo, hi]`, closed at zero when `lo == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo.is_zero() {
            write!(f, "[0,{}]", self.hi)
        } else {
            write!(f, "({},{}]", self.lo, self.hi)
        }
    }
}

/// The full symbolic delivery plan: per sub-signal, which interval of which
/// multicast message it carries.
#[derive(Debug, Clone)]
pub struct LayerAssignment {
    /// `per_sub_signal[n-1]` lists `(message, interval)` pairs carried by
    /// sub-signal `n`, in lexicographic message order.
    pub per_sub_signal: Vec<Vec<(MessageLabel, Interval)>>,
}

/// Decoding outcome for one user.
#[derive(Debug, Clone)]
pub struct UserDecoding {
    /// 1-based sorted user position.
    pub user: usize,
    /// Number of subfiles (messages involving this user) checked.
    pub needed: usize,
    pub ok: bool,
}

/// First decoding counterexample, if any.
#[derive(Debug, Clone)]
pub struct DecodingFailure {
    pub user: usize,
    pub message: MessageLabel,
    /// Sub-range of `[0, Q_user]` not covered (or covered twice).
    pub missing_lo: Rational,
    pub missing_hi: Rational,
    pub detail: String,
}

impl fmt::Display for DecodingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "user {} message {}: {} on ({},{}]",
            self.user, self.message, self.detail, self.missing_lo, self.missing_hi
        )
    }
}

/// Full decoding report: per-user pass flags plus measured loads.
#[derive(Debug, Clone)]
pub struct DecodingReport {
    pub users: Vec<UserDecoding>,
    /// Measured per-sub-signal loads, by interval-length summation.
    pub measured_loads: Vec<Rational>,
    pub failure: Option<DecodingFailure>,
}

impl DecodingReport {
    pub fn pass(&self) -> bool {
        self.failure.is_none() && self.users.iter().all(|u| u.ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeliveryError {
    #[error(
        "enumeration refused: {messages} multicast messages exceed the limit of {limit} \
         (use force to override)"
    )]
    ScaleRefused { messages: BigNat, limit: u64 },
}

/// Whether to enforce the message-count enumeration guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleGuard {
    Enforce,
    Force,
}

/// Assigns quality intervals of every multicast message to sub-signals.
///
/// Refuses scenarios with more than [`MESSAGE_LIMIT`] messages unless forced.
pub fn assign_intervals(
    scenario: &Scenario,
    q: &QualityVector,
    guard: ScaleGuard,
) -> Result<LayerAssignment, DeliveryError> {
    let k = scenario.k();
    let t = scenario.t() as usize;
    assert_eq!(q.len(), k);

    let messages = binom(k as u64, t as u64 + 1);
    if guard == ScaleGuard::Enforce && messages > MESSAGE_LIMIT {
        return Err(DeliveryError::ScaleRefused {
            messages,
            limit: MESSAGE_LIMIT,
        });
    }

    let mut per_sub_signal: Vec<Vec<(MessageLabel, Interval)>> = vec![Vec::new(); k];
    if t >= k {
        // Everything is cached; nothing to transmit.
        return Ok(LayerAssignment { per_sub_signal });
    }
    for sigma in multicast_messages(k, t) {
        let mut reached = Rational::zero();
        for &member in sigma.members() {
            let target = q.at(member).clone();
            if target > reached {
                per_sub_signal[member - 1].push((
                    sigma.clone(),
                    Interval {
                        lo: reached.clone(),
                        hi: target.clone(),
                    },
                ));
                reached = target;
            }
        }
    }
    Ok(LayerAssignment { per_sub_signal })
}

/// Measured load of each sub-signal: the sum of its interval lengths.
pub fn measured_loads(assignment: &LayerAssignment) -> Vec<Rational> {
    assignment
        .per_sub_signal
        .iter()
        .map(|entries| entries.iter().map(|(_, iv)| iv.length()).sum())
        .collect()
}

/// Checks that every user `k` can reconstruct each needed subfile on exactly
/// `[0, Q_k]` from sub-signals `1..k`. Gaps, truncations, and double coverage
/// all fail, with the first counterexample reported.
pub fn verify_decoding(
    scenario: &Scenario,
    q: &QualityVector,
    assignment: &LayerAssignment,
) -> DecodingReport {
    let k = scenario.k();
    let measured = measured_loads(assignment);
    let mut users = Vec::with_capacity(k);
    let mut failure: Option<DecodingFailure> = None;

    let t = scenario.t() as usize;
    let all_messages = if t < k {
        multicast_messages(k, t)
    } else {
        Vec::new()
    };

    for user in 1..=k {
        // Collect intervals per message from sub-signals 1..=user.
        let mut per_message: HashMap<&MessageLabel, Vec<&Interval>> = HashMap::new();
        for sub in 0..user {
            for (sigma, interval) in &assignment.per_sub_signal[sub] {
                if sigma.contains(user) {
                    per_message.entry(sigma).or_default().push(interval);
                }
            }
        }

        let target = q.at(user).clone();
        let mut needed = 0usize;
        let mut ok = true;
        // Every message containing this user must appear and cover [0, Q_user].
        for sigma in all_messages.iter().filter(|sigma| sigma.contains(user)) {
            needed += 1;
            let covered = per_message.get(sigma).map(Vec::as_slice).unwrap_or(&[]);
            if let Err(fail) = check_union(user, sigma, covered, &target) {
                ok = false;
                if failure.is_none() {
                    failure = Some(fail);
                }
            }
        }
        users.push(UserDecoding { user, needed, ok });
    }

    DecodingReport {
        users,
        measured_loads: measured,
        failure,
    }
}

/// Verifies that `intervals` tile `[0, target]` exactly: no gap, no overlap,
/// no spill past the target.
fn check_union(
    user: usize,
    sigma: &MessageLabel,
    intervals: &[&Interval],
    target: &Rational,
) -> Result<(), DecodingFailure> {
    let mut sorted: Vec<&Interval> = intervals.to_vec();
    sorted.sort_by(|a, b| a.lo.cmp(&b.lo));
    let fail = |lo: &Rational, hi: &Rational, detail: &str| DecodingFailure {
        user,
        message: sigma.clone(),
        missing_lo: lo.clone(),
        missing_hi: hi.clone(),
        detail: detail.to_string(),
    };
    let mut reached = Rational::zero();
    for iv in sorted {
        if iv.lo > reached {
            return Err(fail(&reached, &iv.lo, "gap in coverage"));
        }
        if iv.lo < reached {
            return Err(fail(&iv.lo, &reached, "overlapping coverage"));
        }
        if iv.hi <= iv.lo {
            return Err(fail(&iv.lo, &iv.hi, "empty interval stored"));
        }
        reached = iv.hi.clone();
    }
    if &reached < target {
        return Err(fail(&reached, target, "gap in coverage"));
    }
    if &reached > target {
        return Err(fail(target, &reached, "coverage past the needed quality"));
    }
    Ok(())
}
