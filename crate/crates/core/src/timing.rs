//! Closed-form sub-signal loads, prefix loads, and delivery times.
//!
//! With users sorted by channel strength and served qualities `Q` sorted the
//! same way, sub-signal `n` carries everything user `n` needs beyond what
//! earlier sub-signals already carry. Its load in subfile units is
//!
//! ```text
//! ell_n(Q) = q_n*C(K-1,t) + Q_{n-1}*C(K-n,t)
//!            + sum_{i=2}^{n-1} (Q_{n-1} - Q_{i-1}) * C(K-n+i-2, t-1)
//! ```
//!
//! with `Q_0 = 0` and empty sums zero. The prefix load telescopes to
//!
//! ```text
//! L_k(Q) = Q_k*C(K-1,t) + Q_{k-1}*C(K-2,t) + ... + Q_1*C(K-k,t)
//! ```
//!
//! and the delivery time is `max_w L_w(Q) / (alpha_w * C(K,t))`. All
//! binomials use the zero-extension convention, so out-of-range terms vanish
//! silently. The interval-enumeration oracle in [`crate::delivery`] checks
//! these formulas message by message.

use crate::combinatorics::{binom, binom_r, BigNat, Rational};
use crate::model::{QualityVector, Scenario};

/// Per-sub-signal loads `ell_n` and prefix loads `L_k`, in subfile units.
#[derive(Debug, Clone)]
pub struct LoadProfile {
    ell: Vec<Rational>,
    prefix: Vec<Rational>,
    total_messages: BigNat,
}

impl LoadProfile {
    pub fn ell(&self) -> &[Rational] {
        &self.ell
    }

    pub fn ell_at(&self, n: usize) -> &Rational {
        &self.ell[n - 1]
    }

    /// Prefix loads `L_k = sum_{n<=k} ell_n`.
    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn prefix_at(&self, k: usize) -> &Rational {
        &self.prefix[k - 1]
    }

    /// Total number of multicast messages, `binom(K, t+1)`.
    pub fn total_messages(&self) -> &BigNat {
        &self.total_messages
    }
}

/// Binomial that also accepts a negative lower index (result 0), needed for
/// the `t-1` term of the sub-signal load when `t = 0`.
fn binom_signed(n: u64, k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        binom_r(n, k as u64)
    }
}

/// Load of sub-signal `n` (1-based), in subfile units.
pub fn sub_signal_load(scenario: &Scenario, q: &QualityVector, n: usize) -> Rational {
    let k = scenario.k() as u64;
    let t = scenario.t();
    assert!((1..=scenario.k()).contains(&n));
    assert_eq!(q.len(), scenario.k());

    let n64 = n as u64;
    let mut load = q.layer_at(n) * &binom_r(k - 1, t);
    if n >= 2 {
        load += q.at(n - 1) * &binom_r(k - n64, t);
        for i in 2..n {
            let i64v = i as u64;
            let gap = q.at(n - 1) - q.at(i - 1);
            load += gap * binom_signed(k - n64 + i64v - 2, t as i64 - 1);
        }
    }
    load
}

/// Prefix load `L_k`: total information for the first `k` sub-signals.
pub fn prefix_load(scenario: &Scenario, q: &QualityVector, k: usize) -> Rational {
    let users = scenario.k() as u64;
    let t = scenario.t();
    assert!((1..=scenario.k()).contains(&k));
    assert_eq!(q.len(), scenario.k());

    let mut load = Rational::zero();
    for i in 1..=k {
        load += q.at(i) * &binom_r(users - k as u64 + i as u64 - 1, t);
    }
    load
}

/// Both load vectors at once. The prefix loads are computed by the direct
/// formula and must telescope the per-sub-signal loads exactly.
pub fn load_profile(scenario: &Scenario, q: &QualityVector) -> LoadProfile {
    let k = scenario.k();
    let ell: Vec<Rational> = (1..=k).map(|n| sub_signal_load(scenario, q, n)).collect();
    let prefix: Vec<Rational> = (1..=k).map(|w| prefix_load(scenario, q, w)).collect();
    debug_assert!({
        let mut acc = Rational::zero();
        ell.iter().zip(&prefix).all(|(e, l)| {
            acc += e;
            &acc == l
        })
    });
    LoadProfile {
        ell,
        prefix,
        total_messages: binom(k as u64, scenario.t() + 1),
    }
}

/// Two-type prefix load: `w` degraded users at common quality `Q` give
/// `L_w = Q * (C(K,t+1) - C(K-w,t+1))`.
pub fn two_type_load(k: u64, t: u64, w: u64, q: &Rational) -> Rational {
    assert!((1..=k).contains(&w));
    q * (binom_r(k, t + 1) - binom_r(k - w, t + 1))
}

/// Delivery time `T = max_w L_w/(alpha_w * C(K,t))`, together with the set of
/// all maximizing prefixes (ascending).
pub fn delivery_time(scenario: &Scenario, q: &QualityVector) -> (Rational, Vec<usize>) {
    let k = scenario.k();
    let denom = binom_r(scenario.k() as u64, scenario.t());
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for w in 1..=k {
        let ratio = prefix_load(scenario, q, w) / scenario.alpha_at(w);
        match &best {
            Some(b) if &ratio < b => {}
            Some(b) if &ratio == b => argmax.push(w),
            _ => {
                best = Some(ratio);
                argmax = vec![w];
            }
        }
    }
    (best.expect("K >= 1") / denom, argmax)
}

/// Two-type delivery time:
/// `max{ (Q/alpha) * (C(K,t+1) - C(K-w,t+1)) / C(K,t), t_man }`.
pub fn two_type_time(k: u64, t: u64, alpha: &Rational, w: u64, q: &Rational) -> Rational {
    let degraded = two_type_load(k, t, w, q) / alpha / binom_r(k, t);
    degraded.max(crate::model::t_man(k, t))
}

/// Highest common quality for `w` degraded users of strength `alpha` that
/// still meets the non-degraded delivery time:
/// `min{ alpha * C(K,t+1) / (C(K,t+1) - C(K-w,t+1)), 1 }`.
pub fn two_type_max_quality(k: u64, t: u64, alpha: &Rational, w: u64) -> Rational {
    assert!((1..=k).contains(&w));
    assert!(alpha.is_positive() && alpha <= &Rational::one());
    let denom = binom_r(k, t + 1) - binom_r(k - w, t + 1);
    if denom.is_zero() {
        // Everything is cached (t = K): any quality is free.
        return Rational::one();
    }
    (alpha * binom_r(k, t + 1) / denom).min(Rational::one())
}
