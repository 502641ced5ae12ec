//! Property-suite runner behind `qadapt verify`.
//!
//! Each check runs across the same seeded scenario stream (or one scenario
//! loaded from a file) and reports pass counts; the first failing instance is
//! serialized as a reproducible scenario file with an explicit quality
//! vector.

use qadapt_core::allocation::{self, Method};
use qadapt_core::combinatorics::Rational;
use qadapt_core::delivery::{assign_intervals, measured_loads, verify_decoding, ScaleGuard};
use qadapt_core::model::{layer_sizes, QualityVector, Scenario};
use qadapt_core::power;
use qadapt_core::timing::{delivery_time, load_profile, prefix_load, sub_signal_load};

use crate::random;
use crate::scenario_file::ScenarioFile;

/// Oracle-equivalence enumeration bound inside the verifier; larger systems
/// are checked by closed forms only.
const VERIFY_ENUMERATION_LIMIT: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Reproduction recipe for the first failure.
    pub counterexample: Option<ScenarioFile>,
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            passed: 0,
            failed: 0,
            counterexample: None,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, scenario: &Scenario, q: Option<&QualityVector>, detail: String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(ScenarioFile::from_scenario_with_q(
                    scenario,
                    q.map(|q| q.full()),
                ));
                self.detail = Some(detail);
            }
        }
    }
}

pub struct VerifyConfig {
    pub random: usize,
    pub max_users: usize,
    pub seed: u64,
}

/// Runs every check against `count` random scenarios (plus any provided
/// fixed scenarios, checked first).
pub fn run(config: &VerifyConfig, fixed: &[Scenario]) -> Vec<CheckOutcome> {
    let mut rng = random::rng_from_seed(config.seed);
    let mut cor2 = CheckOutcome::new("baseline_within_undegraded_time");
    let mut identity = CheckOutcome::new("prefix_load_identity");
    let mut oracle = CheckOutcome::new("interval_oracle_equivalence");
    let mut decoding = CheckOutcome::new("decoding_coverage");
    let mut dominance = CheckOutcome::new("sum_quality_dominates_max_min");
    let mut feasibility = CheckOutcome::new("methods_meet_target");
    let mut power_plan = CheckOutcome::new("power_plan_invariants");

    let mut scenarios: Vec<Scenario> = fixed.to_vec();
    scenarios
        .extend((0..config.random).map(|_| random::random_scenario(&mut rng, config.max_users)));

    for scenario in &scenarios {
        let q = random::random_quality(&mut rng, scenario.k());

        // Baseline never exceeds the non-degraded delivery time.
        let baseline_q = layer_sizes(scenario.alpha()).expect("alpha is a quality vector");
        let (baseline_time, _) = delivery_time(scenario, &baseline_q);
        cor2.record(
            baseline_time <= scenario.t_man(),
            scenario,
            Some(&baseline_q),
            format!(
                "baseline delivery time {baseline_time} exceeds undegraded {}",
                scenario.t_man()
            ),
        );

        // L_k telescopes the per-sub-signal loads, exactly.
        let mut acc = Rational::zero();
        let mut identity_ok = true;
        for n in 1..=scenario.k() {
            acc += &sub_signal_load(scenario, &q, n);
            if acc != prefix_load(scenario, &q, n) {
                identity_ok = false;
                break;
            }
        }
        identity.record(
            identity_ok,
            scenario,
            Some(&q),
            "prefix load differs from summed sub-signal loads".to_string(),
        );

        // Interval enumeration agrees with the closed forms and decodes.
        let loads = load_profile(scenario, &q);
        if loads.total_messages() <= &VERIFY_ENUMERATION_LIMIT {
            match assign_intervals(scenario, &q, ScaleGuard::Enforce) {
                Ok(assignment) => {
                    let measured = measured_loads(&assignment);
                    oracle.record(
                        measured == loads.ell(),
                        scenario,
                        Some(&q),
                        "measured loads differ from closed forms".to_string(),
                    );
                    let report = verify_decoding(scenario, &q, &assignment);
                    decoding.record(
                        report.pass(),
                        scenario,
                        Some(&q),
                        report
                            .failure
                            .map(|f| f.to_string())
                            .unwrap_or_else(|| "decoding failed".to_string()),
                    );
                }
                Err(e) => {
                    oracle.record(false, scenario, Some(&q), e.to_string());
                }
            }
        }

        // Optimizer dominance and feasibility.
        let greedy = allocation::sum_quality(scenario);
        let flat = allocation::max_min(scenario);
        match (&greedy, &flat) {
            (Ok(greedy), Ok(flat)) => {
                let dominated = greedy
                    .q
                    .full()
                    .iter()
                    .zip(flat.q.full())
                    .all(|(g, m)| g >= m);
                dominance.record(
                    dominated,
                    scenario,
                    Some(&greedy.q),
                    "sum-quality output fails to dominate max-min".to_string(),
                );
            }
            _ => dominance.record(false, scenario, None, "optimizer errored".to_string()),
        }

        let target = scenario.resolved_target();
        let mut all_ok = true;
        let mut first_bad = String::new();
        for method in [
            Method::ProportionalFairness,
            Method::MaxMin,
            Method::SumQuality,
        ] {
            match allocation::run(scenario, method, None) {
                Ok(out) if out.achieved_time <= target => {}
                Ok(out) => {
                    all_ok = false;
                    first_bad = format!(
                        "{method} achieved {} above target {target}",
                        out.achieved_time
                    );
                    break;
                }
                Err(e) => {
                    all_ok = false;
                    first_bad = format!("{method} errored: {e}");
                    break;
                }
            }
        }
        feasibility.record(all_ok, scenario, None, first_bad);

        // Power-plan invariants for the random quality vector.
        if scenario.t() < scenario.k() as u64 {
            match power::build_plan(scenario, &loads) {
                Ok(plan) => {
                    let monotone = plan.pi.windows(2).all(|p| p[0] <= p[1]);
                    let decodable =
                        (1..=scenario.k()).all(|n| plan.pi[n - 1] <= *scenario.alpha_at(n));
                    let times_equal = plan
                        .sub_times
                        .iter()
                        .zip(loads.ell())
                        .all(|(t, ell)| ell.is_zero() || t == &plan.total_time);
                    power_plan.record(
                        monotone && decodable && times_equal,
                        scenario,
                        Some(&q),
                        format!(
                            "power plan violated an invariant (monotone={monotone}, \
                             decodable={decodable}, times_equal={times_equal})"
                        ),
                    );
                }
                Err(e) => {
                    power_plan.record(false, scenario, Some(&q), e.to_string());
                }
            }
        }
    }

    vec![
        cor2,
        identity,
        oracle,
        decoding,
        dominance,
        feasibility,
        power_plan,
    ]
}
