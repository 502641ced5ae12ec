//! Symbolic subpacketization, per-user cache contents, and multicast-message
//! enumeration for the Maddah-Ali–Niesen coded-caching scheme.
//!
//! Every file is split into `binom(K,t)` subfiles, one per `t`-subset `τ` of
//! users; user `k` caches every subfile whose subset contains `k`. Delivery
//! sends one XOR-coded multicast message per `(t+1)`-subset `σ`: each member
//! `k ∈ σ` extracts its own component because it caches all the others.
//! Subfiles are symbolic labels here, not payloads — the structure is what
//! the rest of the crate reasons about.

use std::fmt;

use itertools::Itertools;

/// One subfile: file index plus the `t`-subset of users that cache it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubfileLabel {
    pub file_index: usize,
    /// Sorted, distinct 1-based user indices.
    pub subset: Vec<usize>,
}

/// One multicast message, identified by its `(t+1)`-subset of receivers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MessageLabel {
    /// Sorted, distinct 1-based user indices.
    pub subset: Vec<usize>,
}

impl MessageLabel {
    pub fn members(&self) -> &[usize] {
        &self.subset
    }

    pub fn contains(&self, user: usize) -> bool {
        self.subset.binary_search(&user).is_ok()
    }
}

/// Renders a subset as `{1,2,5}`.
pub fn render_subset(subset: &[usize]) -> String {
    let mut s = String::from("{");
    for (i, u) in subset.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&u.to_string());
    }
    s.push('}');
    s
}

impl fmt::Display for MessageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_subset(&self.subset))
    }
}

impl fmt::Display for SubfileLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^{}_{}", self.file_index, render_subset(&self.subset))
    }
}

/// All `t`-subsets of `[K]` in lexicographic order — the subfile index set.
pub fn subpacketize(k: usize, t: usize) -> Vec<Vec<usize>> {
    assert!(t <= k, "cache degree must not exceed user count");
    (1..=k).combinations(t).collect()
}

/// Subsets cached by `user` (all `τ` with `user ∈ τ`), identical for every
/// file in the library; there are `binom(K-1, t-1)` of them per file.
pub fn cache_contents(k: usize, t: usize, user: usize) -> Vec<Vec<usize>> {
    assert!((1..=k).contains(&user), "user index out of range");
    subpacketize(k, t)
        .into_iter()
        .filter(|tau| tau.contains(&user))
        .collect()
}

/// All `(t+1)`-subsets of `[K]` in lexicographic order — one multicast
/// message each; there are `binom(K, t+1)` of them.
pub fn multicast_messages(k: usize, t: usize) -> Vec<MessageLabel> {
    assert!(t < k, "message size t+1 must not exceed user count");
    (1..=k)
        .combinations(t + 1)
        .map(|subset| MessageLabel { subset })
        .collect()
}

/// The XOR components of message `σ` under the given demand vector
/// (`demands[k-1]` is the 1-based file requested by user `k`): for each
/// member `k ∈ σ`, the subfile of file `demands[k-1]` indexed by `σ∖{k}`.
pub fn message_components(sigma: &MessageLabel, demands: &[usize]) -> Vec<(usize, SubfileLabel)> {
    sigma
        .subset
        .iter()
        .map(|&k| {
            let subset = sigma
                .subset
                .iter()
                .copied()
                .filter(|&m| m != k)
                .collect::<Vec<_>>();
            (
                k,
                SubfileLabel {
                    file_index: demands[k - 1],
                    subset,
                },
            )
        })
        .collect()
}

/// Identity demand vector (user `k` requests file `k`) — the worst case,
/// where every user asks for a different file.
pub fn distinct_demands(k: usize) -> Vec<usize> {
    (1..=k).collect()
}
