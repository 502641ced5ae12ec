//! Quality-allocation optimizers: baseline, proportional fairness, max-min,
//! and sum-quality maximisation — all exact.
//!
//! Each method picks a nondecreasing quality vector `Q` subject to the
//! per-prefix delivery constraints `L_k(Q) <= alpha_k * T_tar * C(K,t)`:
//!
//! - **baseline** serves `Q = alpha`, always within the non-degraded
//!   delivery time;
//! - **proportional fairness** maximizes `beta` in `Q_k = min(beta*alpha_k,
//!   1)` by iterated linear solves, re-solving after each quality clamps at
//!   one so the remaining users absorb the freed budget;
//! - **max-min** computes the best flat guarantee and lifts users whose
//!   strength exceeds it;
//! - **sum-quality** maximizes `sum Q_k` greedily from the base layer up,
//!   each step taking the tightest remaining prefix constraint.

use std::fmt;

use thiserror::Error;

use crate::combinatorics::{binom_r, Rational};
use crate::model::{layer_sizes, QualityVector, Scenario};
use crate::timing::delivery_time;

/// Allocation method names as used in scenario files and on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Baseline,
    ProportionalFairness,
    MaxMin,
    SumQuality,
    Explicit,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::ProportionalFairness => "proportional_fairness",
            Method::MaxMin => "max_min",
            Method::SumQuality => "sum_quality",
            Method::Explicit => "explicit",
        }
    }

    pub fn parse(name: &str) -> Option<Method> {
        match name {
            "baseline" => Some(Method::Baseline),
            "proportional_fairness" => Some(Method::ProportionalFairness),
            "max_min" => Some(Method::MaxMin),
            "sum_quality" => Some(Method::SumQuality),
            "explicit" => Some(Method::Explicit),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Output of an allocation method.
#[derive(Debug, Clone)]
pub struct AllocationResult {
    pub q: QualityVector,
    pub method: Method,
    /// Proportional-fairness factor; present only for that method.
    pub beta: Option<Rational>,
    /// Exact delivery time of the returned qualities.
    pub achieved_time: Rational,
    /// Prefixes whose delivery constraint holds with equality at the target.
    pub binding: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocationError {
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),
    #[error(
        "internal consistency: sum-quality recursion produced a decreasing vector \
             (Q[{index}] = {value} < Q[{prev_index}] = {prev})"
    )]
    NonMonotone {
        index: usize,
        value: Rational,
        prev_index: usize,
        prev: Rational,
    },
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Per-prefix budget `alpha_k * T_tar * C(K,t)` that `L_k(Q)` must not exceed.
fn budgets(scenario: &Scenario, target: &Rational) -> Vec<Rational> {
    let scale = target * &binom_r(scenario.k() as u64, scenario.t());
    (1..=scenario.k())
        .map(|k| scenario.alpha_at(k) * &scale)
        .collect()
}

/// Coefficient of `Q_i` in `L_w`: `C(K - w + i - 1, t)`.
fn coef(scenario: &Scenario, w: usize, i: usize) -> Rational {
    binom_r((scenario.k() - w + i - 1) as u64, scenario.t())
}

fn finish(
    scenario: &Scenario,
    method: Method,
    q: QualityVector,
    beta: Option<Rational>,
) -> AllocationResult {
    let (achieved_time, _) = delivery_time(scenario, &q);
    let target = scenario.resolved_target();
    let buds = budgets(scenario, &target);
    let binding = (1..=scenario.k())
        .filter(|&k| crate::timing::prefix_load(scenario, &q, k) == buds[k - 1])
        .collect();
    AllocationResult {
        q,
        method,
        beta,
        achieved_time,
        binding,
    }
}

/// Everything-cached degenerate case: no delivery needed, full quality free.
fn all_cached(scenario: &Scenario, method: Method, beta: Option<Rational>) -> AllocationResult {
    finish(scenario, method, QualityVector::ones(scenario.k()), beta)
}

/// Baseline allocation `Q_k = alpha_k`; its delivery time never exceeds the
/// non-degraded system's.
pub fn baseline(scenario: &Scenario) -> AllocationResult {
    let q = layer_sizes(scenario.alpha()).expect("validated strengths form a quality vector");
    finish(scenario, Method::Baseline, q, None)
}

/// Explicit user-supplied qualities (original user order), validated and
/// timed. Missing the target is reported by the caller, not an error here.
pub fn explicit(
    scenario: &Scenario,
    q_original_order: &[Rational],
) -> Result<AllocationResult, AllocationError> {
    if q_original_order.len() != scenario.k() {
        return Err(crate::model::ModelError::AlphaCount {
            expected: scenario.k(),
            actual: q_original_order.len(),
        }
        .into());
    }
    let sorted = scenario.to_sorted_order(q_original_order);
    let q = layer_sizes(&sorted)?;
    Ok(finish(scenario, Method::Explicit, q, None))
}

/// Proportional fairness: maximize `beta` subject to every prefix constraint,
/// with `Q_k = min(beta*alpha_k, 1)`.
///
/// Solved by iterated linear solves: fix the set of users clamped at quality
/// one, solve each constraint linearly in `beta`, keep the minimum, re-clamp,
/// and repeat until the clamped set stabilizes (it only grows, so at most `K`
/// rounds). `beta >= 1` whenever the target is at least the non-degraded
/// delivery time.
pub fn proportional_fairness(scenario: &Scenario) -> Result<AllocationResult, AllocationError> {
    let k = scenario.k();
    if scenario.t() as usize == k {
        let beta = Rational::one().max(scenario.alpha_at(1).recip());
        return Ok(all_cached(
            scenario,
            Method::ProportionalFairness,
            Some(beta),
        ));
    }
    let target = scenario.resolved_target();
    let buds = budgets(scenario, &target);

    let mut clamped = vec![false; k];
    let beta = loop {
        let mut best: Option<Rational> = None;
        for w in 1..=k {
            let mut constant = Rational::zero();
            let mut slope = Rational::zero();
            for i in 1..=w {
                let c = coef(scenario, w, i);
                if c.is_zero() {
                    continue;
                }
                if clamped[i - 1] {
                    constant += &c;
                } else {
                    slope += &(scenario.alpha_at(i) * &c);
                }
            }
            if slope.is_zero() {
                if constant > buds[w - 1] {
                    return Err(AllocationError::InfeasibleTarget(format!(
                        "clamped qualities alone exceed the budget of prefix {w}"
                    )));
                }
                continue;
            }
            let bound = (&buds[w - 1] - &constant) / slope;
            best = Some(match best {
                Some(b) => b.min(bound),
                None => bound,
            });
        }

        let beta = match best {
            Some(beta) => beta,
            None => {
                // No constraint depends on beta any more: every quality can
                // reach one. Report the smallest sufficient factor.
                break scenario.alpha_at(1).recip();
            }
        };
        if !beta.is_positive() {
            return Err(AllocationError::InfeasibleTarget(format!(
                "proportional fairness factor would be {beta}"
            )));
        }

        let mut changed = false;
        for i in 1..=k {
            if !clamped[i - 1] && &beta * scenario.alpha_at(i) > Rational::one() {
                clamped[i - 1] = true;
                changed = true;
            }
        }
        if !changed {
            break beta;
        }
    };

    let q_full: Vec<Rational> = (1..=k)
        .map(|i| (&beta * scenario.alpha_at(i)).min(Rational::one()))
        .collect();
    for (i, q) in q_full.iter().enumerate() {
        if !q.is_positive() {
            return Err(AllocationError::InfeasibleTarget(format!(
                "quality Q[{}] would be {q}",
                i + 1
            )));
        }
    }
    let q = layer_sizes(&q_full)?;
    Ok(finish(
        scenario,
        Method::ProportionalFairness,
        q,
        Some(beta),
    ))
}

/// Flat max-min guarantee:
/// `Q_hat = min_w alpha_w * T_tar * C(K,t) / (C(K,t+1) - C(K-w,t+1))`.
pub fn max_min_guarantee(scenario: &Scenario, target: &Rational) -> Rational {
    let k = scenario.k() as u64;
    let t = scenario.t();
    let full = binom_r(k, t + 1);
    let scale = target * &binom_r(k, t);
    (1..=scenario.k())
        .map(|w| {
            let denom = &full - &binom_r(k - w as u64, t + 1);
            scenario.alpha_at(w) * &scale / denom
        })
        .min()
        .expect("K >= 1")
}

/// Max-min allocation: the best flat guarantee `Q_hat`, then each user lifted
/// to `min(max(alpha_k, Q_hat), 1)`.
///
/// For targets at or above the non-degraded delivery time the full lift is
/// always feasible. Below it, the lift applies to the longest feasible suffix
/// of users (the lifted set must be a suffix to keep `Q` nondecreasing, and
/// delivery time is monotone in each quality, so "longest feasible" is well
/// defined); the flat vector itself is feasible by construction.
pub fn max_min(scenario: &Scenario) -> Result<AllocationResult, AllocationError> {
    let k = scenario.k();
    if scenario.t() as usize == k {
        return Ok(all_cached(scenario, Method::MaxMin, None));
    }
    let target = scenario.resolved_target();
    let q_hat = max_min_guarantee(scenario, &target);
    if !q_hat.is_positive() {
        return Err(AllocationError::InfeasibleTarget(format!(
            "max-min guarantee would be {q_hat}"
        )));
    }
    let q_hat = q_hat.min(Rational::one());

    let flat = vec![q_hat.clone(); k];
    // Users whose strength exceeds the guarantee form a suffix (alpha is
    // sorted); lift the longest suffix that stays within the target.
    let first_lift = (1..=k)
        .find(|&i| scenario.alpha_at(i) > &q_hat)
        .unwrap_or(k + 1);
    let mut chosen = layer_sizes(&flat)?;
    for start in first_lift..=k {
        let mut cand = flat.clone();
        for i in start..=k {
            cand[i - 1] = scenario.alpha_at(i).clone().max(q_hat.clone());
        }
        let cand = layer_sizes(&cand)?;
        if delivery_time(scenario, &cand).0 <= target {
            chosen = cand;
            break;
        }
    }
    Ok(finish(scenario, Method::MaxMin, chosen, None))
}

/// Sum-quality maximisation: greedily maximize `Q_1, Q_2, ...` in order, each
/// step bounded by every remaining prefix constraint, clamped at one.
///
/// The recursion also maximizes the minimum quality, so its output dominates
/// the max-min allocation coordinate-wise.
pub fn sum_quality(scenario: &Scenario) -> Result<AllocationResult, AllocationError> {
    let k = scenario.k();
    if scenario.t() as usize == k {
        return Ok(all_cached(scenario, Method::SumQuality, None));
    }
    let target = scenario.resolved_target();
    let buds = budgets(scenario, &target);

    let mut q_full: Vec<Rational> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut best: Option<Rational> = None;
        for w in n..=k {
            let spent: Rational = (1..n).map(|i| &q_full[i - 1] * &coef(scenario, w, i)).sum();
            let denom: Rational = (n..=w).map(|i| coef(scenario, w, i)).sum();
            debug_assert!(!denom.is_zero(), "the i = w term is C(K-1,t) > 0");
            let bound = (&buds[w - 1] - &spent) / denom;
            best = Some(match best {
                Some(b) => b.min(bound),
                None => bound,
            });
        }
        let q_n = best
            .expect("w = n term always present")
            .min(Rational::one());
        if !q_n.is_positive() {
            return Err(AllocationError::InfeasibleTarget(format!(
                "quality Q[{n}] would be {q_n}"
            )));
        }
        if n >= 2 && q_n < q_full[n - 2] {
            return Err(AllocationError::NonMonotone {
                index: n,
                value: q_n,
                prev_index: n - 1,
                prev: q_full[n - 2].clone(),
            });
        }
        q_full.push(q_n);
    }
    let q = layer_sizes(&q_full)?;
    Ok(finish(scenario, Method::SumQuality, q, None))
}

/// Runs a method by tag. `explicit_q` (original user order) is required for
/// [`Method::Explicit`] and ignored otherwise.
pub fn run(
    scenario: &Scenario,
    method: Method,
    explicit_q: Option<&[Rational]>,
) -> Result<AllocationResult, AllocationError> {
    match method {
        Method::Baseline => Ok(baseline(scenario)),
        Method::ProportionalFairness => proportional_fairness(scenario),
        Method::MaxMin => max_min(scenario),
        Method::SumQuality => sum_quality(scenario),
        Method::Explicit => {
            let q = explicit_q.ok_or_else(|| {
                AllocationError::InfeasibleTarget(
                    "explicit method requires a quality vector".to_string(),
                )
            })?;
            explicit(scenario, q)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::rational_of;
    use crate::model::TargetTime;

    fn r(s: &str) -> Rational {
        rational_of(s).unwrap()
    }

    fn rs(list: &[&str]) -> Vec<Rational> {
        list.iter().map(|s| r(s)).collect()
    }

    fn multirate() -> Scenario {
        Scenario::build(
            6,
            r("1/3"),
            &rs(&["1/2", "5/8", "3/4", "7/8", "1", "1"]),
            TargetTime::Man,
        )
        .unwrap()
    }

    fn tiny() -> Scenario {
        Scenario::build(2, r("1/2"), &rs(&["1/2", "1"]), TargetTime::Man).unwrap()
    }

    #[test]
    fn baseline_multirate() {
        let s = multirate();
        let out = baseline(&s);
        assert_eq!(out.q.full(), s.alpha());
        assert_eq!(out.achieved_time, r("31/24"));
        assert!(out.achieved_time <= s.t_man());
        assert!(out.beta.is_none());
    }

    #[test]
    fn baseline_undegraded() {
        let s = Scenario::build(4, r("1/2"), &vec![r("1"); 4], TargetTime::Man).unwrap();
        let out = baseline(&s);
        assert!(out.q.full().iter().all(|q| q.is_one()));
        assert_eq!(out.achieved_time, s.t_man());
    }

    #[test]
    fn baseline_tiny() {
        let s = tiny();
        let out = baseline(&s);
        assert_eq!(out.achieved_time, r("1/2"));
        assert_eq!(out.achieved_time, s.t_man());
    }

    #[test]
    fn proportional_fairness_multirate() {
        let s = multirate();
        let out = proportional_fairness(&s).unwrap();
        assert_eq!(out.beta, Some(r("28/25")));
        assert_eq!(
            out.q.full(),
            &rs(&["14/25", "7/10", "21/25", "49/50", "1", "1"])
        );
        assert_eq!(out.achieved_time, r("4/3"));
        assert_eq!(out.binding, vec![4]);
    }

    #[test]
    fn proportional_fairness_undegraded() {
        let s = Scenario::build(4, r("1/2"), &vec![r("1"); 4], TargetTime::Man).unwrap();
        let out = proportional_fairness(&s).unwrap();
        assert_eq!(out.beta, Some(Rational::one()));
        assert!(out.q.full().iter().all(|q| q.is_one()));
    }

    #[test]
    fn proportional_fairness_below_man_target() {
        let s = Scenario::build(
            2,
            r("1/2"),
            &rs(&["1/2", "1"]),
            TargetTime::Explicit(r("1/4")),
        )
        .unwrap();
        let out = proportional_fairness(&s).unwrap();
        let beta = out.beta.clone().unwrap();
        assert!(beta < Rational::one());
        assert!(out.achieved_time <= r("1/4"));
        // Scaled strictly below the strengths.
        for (q, a) in out.q.full().iter().zip(s.alpha()) {
            assert!(q < a);
        }
    }

    #[test]
    fn proportional_fairness_beta_at_least_one_at_man() {
        // Targets at or above t_man keep beta >= 1 (Q = alpha is feasible).
        let s = Scenario::build(
            5,
            r("1/5"),
            &rs(&["1/4", "1/3", "1/2", "3/4", "1"]),
            TargetTime::Man,
        )
        .unwrap();
        let out = proportional_fairness(&s).unwrap();
        assert!(out.beta.unwrap() >= Rational::one());
        assert!(out.achieved_time <= s.t_man());
    }

    #[test]
    fn max_min_multirate() {
        let s = multirate();
        let out = max_min(&s).unwrap();
        assert_eq!(max_min_guarantee(&s, &s.t_man()), r("25/32"));
        assert_eq!(
            out.q.full(),
            &rs(&["25/32", "25/32", "25/32", "7/8", "1", "1"])
        );
        assert!(out.achieved_time <= s.t_man());
    }

    #[test]
    fn max_min_undegraded() {
        let s = Scenario::build(4, r("1/2"), &vec![r("1"); 4], TargetTime::Man).unwrap();
        let out = max_min(&s).unwrap();
        assert!(out.q.full().iter().all(|q| q.is_one()));
    }

    #[test]
    fn max_min_tiny_explicit_target() {
        let s = Scenario::build(
            2,
            r("1/2"),
            &rs(&["1/2", "1"]),
            TargetTime::Explicit(r("1/2")),
        )
        .unwrap();
        let out = max_min(&s).unwrap();
        assert_eq!(out.q.full(), &rs(&["1/2", "1"]));
    }

    #[test]
    fn sum_quality_multirate() {
        let s = multirate();
        let out = sum_quality(&s).unwrap();
        assert_eq!(
            out.q.full(),
            &rs(&["25/32", "25/32", "51/64", "307/320", "1", "1"])
        );
        assert_eq!(out.achieved_time, r("4/3"));
        assert_eq!(out.binding, vec![2, 3, 4]);
    }

    #[test]
    fn sum_quality_first_coordinate_matches_guarantee() {
        let s = multirate();
        let out = sum_quality(&s).unwrap();
        assert_eq!(out.q.at(1), &max_min_guarantee(&s, &s.t_man()));
    }

    #[test]
    fn sum_quality_tiny() {
        let s = Scenario::build(
            2,
            r("1/2"),
            &rs(&["1/2", "1"]),
            TargetTime::Explicit(r("1/2")),
        )
        .unwrap();
        let out = sum_quality(&s).unwrap();
        assert_eq!(out.q.full(), &rs(&["1/2", "1"]));
        let total: Rational = out.q.full().iter().sum();
        assert_eq!(total, r("3/2"));
    }

    #[test]
    fn sum_quality_dominates_max_min_on_fixture() {
        let s = multirate();
        let a = sum_quality(&s).unwrap();
        let b = max_min(&s).unwrap();
        for (x, y) in a.q.full().iter().zip(b.q.full()) {
            assert!(x >= y);
        }
    }

    #[test]
    fn explicit_two_type() {
        let s = Scenario::build(
            6,
            r("1/3"),
            &rs(&["2/3", "2/3", "1", "1", "1", "1"]),
            TargetTime::Man,
        )
        .unwrap();
        let out = explicit(&s, &rs(&["5/6", "5/6", "1", "1", "1", "1"])).unwrap();
        assert_eq!(out.achieved_time, r("4/3"));
    }

    #[test]
    fn explicit_respects_original_order() {
        // Strengths arrive unsorted; the explicit Q is given in the same
        // (original) order and must be re-aligned before validation.
        let s = Scenario::build(3, r("1/3"), &rs(&["1", "1/2", "3/4"]), TargetTime::Man).unwrap();
        assert_eq!(s.user_ids(), &[2, 3, 1]);
        let out = explicit(&s, &rs(&["1", "1/2", "3/4"])).unwrap();
        assert_eq!(out.q.full(), &rs(&["1/2", "3/4", "1"]));
    }

    #[test]
    fn all_cached_scenarios() {
        let s = Scenario::build(3, r("1"), &rs(&["1/2", "1", "1"]), TargetTime::Man).unwrap();
        for method in [
            Method::Baseline,
            Method::ProportionalFairness,
            Method::MaxMin,
            Method::SumQuality,
        ] {
            let out = run(&s, method, None).unwrap();
            assert!(out.achieved_time.is_zero());
            if method != Method::Baseline {
                assert!(out.q.full().iter().all(|q| q.is_one()), "{method}");
            }
        }
        let pf = proportional_fairness(&s).unwrap();
        assert_eq!(pf.beta, Some(r("2")));
    }

    #[test]
    fn single_user_boundary() {
        let s = Scenario::build(1, r("0"), &rs(&["3/4"]), TargetTime::Explicit(r("1/2"))).unwrap();
        // One constraint: Q_1 <= alpha_1 * T * C(1,0) / C(0,0) = 3/8.
        let greedy = sum_quality(&s).unwrap();
        assert_eq!(greedy.q.full(), &rs(&["3/8"]));
        let flat = max_min(&s).unwrap();
        assert_eq!(flat.q.full(), &rs(&["3/8"]));
        let pf = proportional_fairness(&s).unwrap();
        assert_eq!(pf.beta, Some(r("1/2")));
        assert_eq!(pf.q.full(), &rs(&["3/8"]));
    }

    #[test]
    fn pfo_binding_constraint_is_tight() {
        // At least one constraint holds with equality unless everything
        // clamps at one.
        let s = multirate();
        let out = proportional_fairness(&s).unwrap();
        let all_ones = out.q.full().iter().all(|q| q.is_one());
        assert!(all_ones || !out.binding.is_empty());
    }
}
