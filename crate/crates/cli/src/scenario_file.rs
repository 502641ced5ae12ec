//! Scenario file schema (JSON, rationals as strings).
//!
//! ```json
//! {
//!   "users": 6,
//!   "gamma": "1/3",
//!   "alpha": ["1/2", "5/8", "3/4", "7/8", "1", "1"],
//!   "target_time": "MAN",
//!   "allocation": { "method": "sum_quality" }
//! }
//! ```
//!
//! `target_time` is `"MAN"` (deliver as fast as the non-degraded system) or a
//! positive rational. The optional `allocation.q` list is only valid with
//! method `"explicit"` and must carry one quality per user, in the same order
//! as `alpha`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qadapt_core::allocation::Method;
use qadapt_core::combinatorics::{rational_of, Rational};
use qadapt_core::model::{Scenario, TargetTime};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScenarioFile {
    pub users: usize,
    pub gamma: String,
    pub alpha: Vec<String>,
    pub target_time: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allocation: Option<AllocationSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AllocationSpec {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
}

/// Parses `"MAN"` or a rational into a target time.
pub fn parse_target(text: &str) -> Result<TargetTime, CliError> {
    if text.trim() == "MAN" {
        Ok(TargetTime::Man)
    } else {
        Ok(TargetTime::Explicit(rational_of(text)?))
    }
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema serializes");
        s.push('\n');
        s
    }

    /// Validates the file into a scenario, honoring optional method/target
    /// overrides. Returns the scenario, the method to run, and the explicit
    /// qualities (original user order) when the method is `explicit`.
    pub fn resolve(
        &self,
        method_override: Option<&str>,
        target_override: Option<&str>,
    ) -> Result<(Scenario, Method, Option<Vec<Rational>>), CliError> {
        let target = match target_override {
            Some(t) => parse_target(t)?,
            None => parse_target(&self.target_time)?,
        };
        let gamma = rational_of(&self.gamma)?;
        let alpha = self
            .alpha
            .iter()
            .map(|a| rational_of(a))
            .collect::<Result<Vec<_>, _>>()?;
        let scenario = Scenario::build(self.users, gamma, &alpha, target)?;

        // The file's own allocation block must be internally consistent even
        // when a flag overrides the method.
        if let Some(spec) = &self.allocation {
            if spec.q.is_some() && spec.method != "explicit" {
                return Err(CliError::Input(format!(
                    "allocation.q is only valid with method \"explicit\", not {:?}",
                    spec.method
                )));
            }
        }

        let method_name = method_override
            .map(str::to_string)
            .or_else(|| self.allocation.as_ref().map(|a| a.method.clone()))
            .ok_or_else(|| {
                CliError::Input(
                    "no allocation method: set allocation.method in the scenario file \
                     or pass --method"
                        .to_string(),
                )
            })?;
        let method = Method::parse(&method_name).ok_or_else(|| {
            CliError::Input(format!(
                "unknown allocation method {method_name:?} (expected baseline, \
                 proportional_fairness, max_min, sum_quality, or explicit)"
            ))
        })?;

        let explicit_q = if method == Method::Explicit {
            let q_strings = self
                .allocation
                .as_ref()
                .and_then(|a| a.q.as_ref())
                .ok_or_else(|| {
                    CliError::Input("method \"explicit\" requires allocation.q".to_string())
                })?;
            if q_strings.len() != self.users {
                return Err(CliError::Input(format!(
                    "allocation.q has {} entries, expected {}",
                    q_strings.len(),
                    self.users
                )));
            }
            Some(
                q_strings
                    .iter()
                    .map(|s| rational_of(s))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            None
        };

        Ok((scenario, method, explicit_q))
    }

    /// File form of a scenario with an explicit quality vector, used to
    /// serialize verification counterexamples reproducibly.
    pub fn from_scenario_with_q(scenario: &Scenario, q_sorted: Option<&[Rational]>) -> Self {
        let alpha_original = scenario.to_original_order(scenario.alpha());
        let allocation = q_sorted.map(|q| AllocationSpec {
            method: "explicit".to_string(),
            q: Some(
                scenario
                    .to_original_order(q)
                    .iter()
                    .map(Rational::to_string)
                    .collect(),
            ),
        });
        ScenarioFile {
            users: scenario.k(),
            gamma: scenario.cache_fraction().to_string(),
            alpha: alpha_original.iter().map(Rational::to_string).collect(),
            target_time: scenario.target_time().to_string(),
            allocation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multirate_json() -> &'static str {
        r#"{
            "users": 6,
            "gamma": "1/3",
            "alpha": ["1/2", "5/8", "3/4", "7/8", "1", "1"],
            "target_time": "MAN",
            "allocation": { "method": "sum_quality" }
        }"#
    }

    #[test]
    fn parses_and_resolves() {
        let file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        let (scenario, method, q) = file.resolve(None, None).unwrap();
        assert_eq!(scenario.k(), 6);
        assert_eq!(scenario.t(), 2);
        assert_eq!(method, Method::SumQuality);
        assert!(q.is_none());
    }

    #[test]
    fn method_override_wins() {
        let file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        let (_, method, _) = file.resolve(Some("baseline"), None).unwrap();
        assert_eq!(method, Method::Baseline);
    }

    #[test]
    fn target_override_wins() {
        let file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        let (scenario, _, _) = file.resolve(None, Some("3/2")).unwrap();
        assert_eq!(
            scenario.target_time(),
            &TargetTime::Explicit(rational_of("3/2").unwrap())
        );
    }

    #[test]
    fn explicit_requires_q() {
        let file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        let err = file.resolve(Some("explicit"), None).unwrap_err();
        assert!(matches!(err, CliError::Input(_)));
    }

    #[test]
    fn q_outside_explicit_rejected() {
        let mut file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        file.allocation = Some(AllocationSpec {
            method: "sum_quality".to_string(),
            q: Some(vec!["1".to_string(); 6]),
        });
        assert!(file.resolve(None, None).is_err());
    }

    #[test]
    fn bad_gamma_is_input_error() {
        let mut file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        file.gamma = "1/0".to_string();
        let err = file.resolve(None, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn counterexample_round_trips() {
        let file: ScenarioFile = serde_json::from_str(multirate_json()).unwrap();
        let (scenario, _, _) = file.resolve(None, None).unwrap();
        let q = qadapt_core::model::QualityVector::ones(6);
        let back = ScenarioFile::from_scenario_with_q(&scenario, Some(q.full()));
        let (s2, m2, q2) = back.resolve(None, None).unwrap();
        assert_eq!(s2.alpha(), scenario.alpha());
        assert_eq!(m2, Method::Explicit);
        assert_eq!(q2.unwrap(), vec![Rational::one(); 6]);
    }
}
