//! Plan output schema (JSON, rationals as strings).
//!
//! Per-user vectors (`alpha`, `q`) are reported in the caller's original
//! user order; per-sub-signal vectors (`layer_sizes`, `loads_ell`,
//! `loads_L`, `pi`, `rates`, `sub_times`) are indexed by sub-signal, which is
//! ascending-strength order. `sorted_by_strength` maps sub-signal position to
//! the original user id, so either view can be reconstructed. The output
//! embeds the full scenario, so feeding it back through the planner
//! reproduces it bit for bit.

use serde::{Deserialize, Serialize};

use qadapt_core::allocation::{AllocationResult, Method};
use qadapt_core::combinatorics::Rational;
use qadapt_core::model::Scenario;
use qadapt_core::power::PowerPlan;
use qadapt_core::timing::LoadProfile;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlanOutput {
    pub users: usize,
    pub gamma: String,
    pub t: u64,
    /// Channel strengths in original user order.
    pub alpha: Vec<String>,
    pub target_time: String,
    pub method: String,
    /// Original 1-based user ids in ascending-strength order; entry `n`
    /// names the user whose quality tops out at sub-signal `n`.
    pub sorted_by_strength: Vec<usize>,
    /// Delivered qualities in original user order.
    pub q: Vec<String>,
    /// Quality-layer sizes, by layer (= sub-signal) index.
    pub layer_sizes: Vec<String>,
    /// Per-sub-signal loads in subfile units.
    pub loads_ell: Vec<String>,
    /// Prefix loads in subfile units.
    #[serde(rename = "loads_L")]
    pub loads_l: Vec<String>,
    /// Bottleneck prefix index; absent when nothing needs transmitting.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottleneck: Option<usize>,
    /// Power exponents per sub-signal.
    pub pi: Vec<String>,
    /// GDoF rates per sub-signal.
    pub rates: Vec<String>,
    /// Per-sub-signal delivery times.
    pub sub_times: Vec<String>,
    /// Sub-signals carrying no load (kept for index alignment).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub empty_sub_signals: Vec<usize>,
    pub total_time: String,
    pub t_man: String,
    /// Proportional-fairness factor, present for that method only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Prefixes (ascending-strength order) whose delivery constraint is
    /// exactly tight at the target.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub binding: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(Rational::to_string).collect()
}

impl PlanOutput {
    pub fn build(
        scenario: &Scenario,
        method: Method,
        allocation: &AllocationResult,
        loads: &LoadProfile,
        plan: Option<&PowerPlan>,
        extra_warnings: Vec<String>,
    ) -> Self {
        let mut warnings = scenario.warnings();
        warnings.extend(extra_warnings);
        let zero_row = || vec![Rational::zero(); scenario.k()];
        let (bottleneck, pi, rates, sub_times, total_time, empty) = match plan {
            Some(p) => (
                Some(p.bottleneck),
                p.pi.clone(),
                p.rates.clone(),
                p.sub_times.clone(),
                p.total_time.clone(),
                p.empty
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e)
                    .map(|(i, _)| i + 1)
                    .collect(),
            ),
            None => (
                None,
                zero_row(),
                zero_row(),
                zero_row(),
                Rational::zero(),
                (1..=scenario.k()).collect(),
            ),
        };

        PlanOutput {
            users: scenario.k(),
            gamma: scenario.cache_fraction().to_string(),
            t: scenario.t(),
            alpha: strings(&scenario.to_original_order(scenario.alpha())),
            target_time: scenario.target_time().to_string(),
            method: method.name().to_string(),
            sorted_by_strength: scenario.user_ids().to_vec(),
            q: strings(&scenario.to_original_order(allocation.q.full())),
            layer_sizes: strings(allocation.q.layers()),
            loads_ell: strings(loads.ell()),
            loads_l: strings(loads.prefix()),
            bottleneck,
            pi: strings(&pi),
            rates: strings(&rates),
            sub_times: strings(&sub_times),
            empty_sub_signals: empty,
            total_time: total_time.to_string(),
            t_man: scenario.t_man().to_string(),
            beta: allocation.beta.as_ref().map(Rational::to_string),
            binding: allocation.binding.clone(),
            warnings,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema serializes");
        s.push('\n');
        s
    }
}
