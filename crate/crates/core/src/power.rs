//! Bottleneck selection, superposition power exponents, GDoF rates, and
//! per-sub-signal delivery times.
//!
//! The bottleneck prefix `w` maximizes `L_k/alpha_k`; power exponents follow
//! as `pi_n = L_n * alpha_w / L_w`, which makes every sub-signal decodable by
//! its intended users (`pi_n <= alpha_n`) and equalizes all nonzero
//! sub-signal times at the plan's delivery time. Exponents are invariant
//! under the tie choice for `w`: any two maximizers have equal `L/alpha`, so
//! `L_n * alpha_w / L_w` is the same ratio.
//!
//! [`render_powers`] turns exponents into finite-power levels and rates for
//! inspection; it is the one floating-point surface of the crate.

use thiserror::Error;

use crate::combinatorics::{binom_r, Rational};
use crate::model::Scenario;
use crate::timing::LoadProfile;

/// A complete superposition plan for one scenario and quality vector.
#[derive(Debug, Clone)]
pub struct PowerPlan {
    /// Bottleneck prefix index `w` (1-based); ties resolve to the largest.
    pub bottleneck: usize,
    /// Power exponents `pi_n`, nondecreasing, `pi_n <= alpha_n`.
    pub pi: Vec<Rational>,
    /// GDoF rates `R_n = pi_n - pi_{n-1}` (with `R_1 = pi_1`).
    pub rates: Vec<Rational>,
    /// Per-sub-signal delivery times; zero-load sub-signals carry the total
    /// time by convention.
    pub sub_times: Vec<Rational>,
    /// Total delivery time `L_w / (alpha_w * C(K,t))`.
    pub total_time: Rational,
    /// Sub-signals with zero load, kept in place to preserve user alignment.
    pub empty: Vec<bool>,
}

/// Finite-power rendering of one sub-signal.
#[derive(Debug, Clone)]
pub struct RenderedSubSignal {
    /// Power level `P_n = P^{-pi_{n-1}} - P^{-pi_n}` (with `P^0 = 1` first).
    pub power: f64,
    /// Per-user received SNR exponents `min(pi_n, alpha_k) - pi_{n-1}`;
    /// nonpositive means the sub-signal sits at or below this user's noise
    /// floor.
    pub snr_exponents: Vec<Rational>,
    /// Per-user finite-power decoding rates (natural log) under successive
    /// interference cancellation.
    pub rates: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error("degenerate plan: every sub-signal load is zero")]
    DegeneratePlan,
    #[error("power exponents must be nondecreasing (pi[{index}] decreases)")]
    NonMonotoneExponents { index: usize },
    #[error("finite power must exceed 1, got {0}")]
    PowerTooSmall(f64),
}

/// Bottleneck prefix: `argmax_k L_k/alpha_k`, ties resolved to the largest
/// index. The exponents do not depend on the tie choice.
pub fn bottleneck(scenario: &Scenario, loads: &LoadProfile) -> usize {
    let mut best: Option<Rational> = None;
    let mut arg = 1usize;
    for k in 1..=scenario.k() {
        let ratio = loads.prefix_at(k) / scenario.alpha_at(k);
        if best.as_ref().is_none_or(|b| &ratio >= b) {
            best = Some(ratio);
            arg = k;
        }
    }
    arg
}

/// Power exponents `pi_n = L_n * alpha_w / L_w` for every `n`.
pub fn power_exponents(
    scenario: &Scenario,
    loads: &LoadProfile,
    w: usize,
) -> Result<Vec<Rational>, PowerError> {
    let lw = loads.prefix_at(w);
    if lw.is_zero() {
        return Err(PowerError::DegeneratePlan);
    }
    let scale = scenario.alpha_at(w) / lw;
    Ok(loads.prefix().iter().map(|l| l * &scale).collect())
}

/// GDoF rates: first differences of the exponents, `R_1 = pi_1`.
pub fn gdof_rates(pi: &[Rational]) -> Vec<Rational> {
    let mut prev = Rational::zero();
    pi.iter()
        .map(|p| {
            let r = p - &prev;
            prev = p.clone();
            r
        })
        .collect()
}

/// Per-sub-signal times `t_n = (ell_n / C(K,t)) / R_n` for loaded
/// sub-signals; empty sub-signals carry `fill` (the plan total) by
/// convention. Every nonzero time equals `L_w/(alpha_w * C(K,t))`.
pub fn sub_signal_times(
    scenario: &Scenario,
    loads: &LoadProfile,
    rates: &[Rational],
    fill: &Rational,
) -> Vec<Rational> {
    let denom = binom_r(scenario.k() as u64, scenario.t());
    loads
        .ell()
        .iter()
        .zip(rates)
        .map(|(ell, rate)| {
            if ell.is_zero() {
                fill.clone()
            } else {
                ell / &denom / rate
            }
        })
        .collect()
}

/// Builds the full plan: bottleneck, exponents, rates, and times.
pub fn build_plan(scenario: &Scenario, loads: &LoadProfile) -> Result<PowerPlan, PowerError> {
    let w = bottleneck(scenario, loads);
    let pi = power_exponents(scenario, loads, w)?;
    let rates = gdof_rates(&pi);
    let total_time =
        loads.prefix_at(w) / scenario.alpha_at(w) / binom_r(scenario.k() as u64, scenario.t());
    let sub_times = sub_signal_times(scenario, loads, &rates, &total_time);
    let empty = loads.ell().iter().map(Rational::is_zero).collect();
    Ok(PowerPlan {
        bottleneck: w,
        pi,
        rates,
        sub_times,
        total_time,
        empty,
    })
}

/// Renders exponents at a finite power `P > 1`: per sub-signal, its power
/// level, each user's received SNR exponent, and each user's finite-power
/// rate `ln(1 + P^{alpha_k} P_n / (1 + P^{alpha_k} P^{-pi_n}))`.
///
/// Dividing a rate by `ln(P)` approaches `pi_n - pi_{n-1}` for users that can
/// decode the sub-signal as `P` grows. This is the only floating-point
/// computation in the crate.
pub fn render_powers(
    pi: &[Rational],
    alpha: &[Rational],
    p: f64,
) -> Result<Vec<RenderedSubSignal>, PowerError> {
    if p.is_nan() || p <= 1.0 {
        return Err(PowerError::PowerTooSmall(p));
    }
    for (i, pair) in pi.windows(2).enumerate() {
        if pair[1] < pair[0] {
            return Err(PowerError::NonMonotoneExponents { index: i + 2 });
        }
    }

    let mut out = Vec::with_capacity(pi.len());
    let mut prev = Rational::zero();
    for exponent in pi {
        let power = p.powf(-prev.to_f64()) - p.powf(-exponent.to_f64());
        let mut snr_exponents = Vec::with_capacity(alpha.len());
        let mut rates = Vec::with_capacity(alpha.len());
        for a in alpha {
            let si = a.clone().min(exponent.clone()) - &prev;
            snr_exponents.push(si);
            let pa = p.powf(a.to_f64());
            let interference = 1.0 + pa * p.powf(-exponent.to_f64());
            rates.push((1.0 + pa * power / interference).ln());
        }
        out.push(RenderedSubSignal {
            power,
            snr_exponents,
            rates,
        });
        prev = exponent.clone();
    }
    Ok(out)
}
