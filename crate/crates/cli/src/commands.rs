//! The five CLI commands: plan, allocate, simulate, verify, sweep.
//!
//! Each command returns `Ok(())` or a [`CliError`] carrying the exit code;
//! printing goes to the writer handed in so tests can capture it.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qadapt_core::allocation::{self, AllocationResult, Method};
use qadapt_core::combinatorics::Rational;
use qadapt_core::delivery::{assign_intervals, verify_decoding, ScaleGuard};
use qadapt_core::model::Scenario;
use qadapt_core::power;
use qadapt_core::timing::load_profile;

use crate::error::CliError;
use crate::plan_output::PlanOutput;
use crate::scenario_file::ScenarioFile;
use crate::sweep;
use crate::verify::{self, VerifyConfig};

/// Runs the configured allocation, attaching a warning when a non-optimizing
/// method (baseline, explicit) misses an explicit target.
fn run_allocation(
    scenario: &Scenario,
    method: Method,
    explicit_q: Option<&[Rational]>,
) -> Result<(AllocationResult, Vec<String>), CliError> {
    let result = allocation::run(scenario, method, explicit_q)?;
    let mut warnings = Vec::new();
    let target = scenario.resolved_target();
    if result.achieved_time > target {
        warnings.push(format!(
            "{} qualities deliver in {}, missing the target {}",
            method.name(),
            result.achieved_time,
            target
        ));
    }
    Ok((result, warnings))
}

fn write_or_print(output: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => {
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// `plan`: full pipeline — allocation, loads, bottleneck, exponents, rates,
/// times — emitted as one JSON document.
pub fn cmd_plan(
    scenario_path: &Path,
    method: Option<&str>,
    target: Option<&str>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let file = ScenarioFile::load(scenario_path)?;
    let (scenario, method, explicit_q) = file.resolve(method, target)?;
    let plan_output = build_plan_output(&scenario, method, explicit_q.as_deref())?;
    write_or_print(output, &plan_output.to_json(), out)
}

/// Shared plan construction, also used by tests.
pub fn build_plan_output(
    scenario: &Scenario,
    method: Method,
    explicit_q: Option<&[Rational]>,
) -> Result<PlanOutput, CliError> {
    let (result, warnings) = run_allocation(scenario, method, explicit_q)?;
    let loads = load_profile(scenario, &result.q);
    let plan = if loads.ell().iter().all(Rational::is_zero) {
        None
    } else {
        Some(power::build_plan(scenario, &loads)?)
    };
    Ok(PlanOutput::build(
        scenario,
        method,
        &result,
        &loads,
        plan.as_ref(),
        warnings,
    ))
}

#[derive(Debug, Serialize)]
struct AllocationOutput {
    method: String,
    /// Delivered qualities in original user order.
    q: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<String>,
    achieved_time: String,
    target_time: String,
    t_man: String,
    /// Tight prefixes, ascending-strength order.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    binding: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

/// `allocate`: the allocation block only.
pub fn cmd_allocate(
    scenario_path: &Path,
    method: Option<&str>,
    target: Option<&str>,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let file = ScenarioFile::load(scenario_path)?;
    let (scenario, method, explicit_q) = file.resolve(method, target)?;
    let (result, mut warnings) = run_allocation(&scenario, method, explicit_q.as_deref())?;
    warnings.extend(scenario.warnings());
    let block = AllocationOutput {
        method: method.name().to_string(),
        q: scenario
            .to_original_order(result.q.full())
            .iter()
            .map(Rational::to_string)
            .collect(),
        beta: result.beta.as_ref().map(Rational::to_string),
        achieved_time: result.achieved_time.to_string(),
        target_time: scenario.resolved_target().to_string(),
        t_man: scenario.t_man().to_string(),
        binding: result.binding.clone(),
        warnings,
    };
    let mut text = serde_json::to_string_pretty(&block).expect("schema serializes");
    text.push('\n');
    write_or_print(output, &text, out)
}

/// `simulate`: run the interval oracle, write the trace CSV, and report
/// per-user decoding plus measured-vs-closed-form loads.
pub fn cmd_simulate(
    scenario_path: &Path,
    method: Option<&str>,
    target: Option<&str>,
    output: Option<&Path>,
    force: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let file = ScenarioFile::load(scenario_path)?;
    let (scenario, method, explicit_q) = file.resolve(method, target)?;
    let (result, _) = run_allocation(&scenario, method, explicit_q.as_deref())?;

    let guard = if force {
        ScaleGuard::Force
    } else {
        ScaleGuard::Enforce
    };
    let assignment = assign_intervals(&scenario, &result.q, guard)?;

    let trace_path: PathBuf = output
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("trace.csv"));
    let mut rows = 0usize;
    {
        let mut writer = csv::Writer::from_path(&trace_path)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        writer.write_record(["sub_signal", "sigma", "interval_lo", "interval_hi"])?;
        for (n, entries) in assignment.per_sub_signal.iter().enumerate() {
            for (sigma, interval) in entries {
                writer.write_record([
                    (n + 1).to_string(),
                    sigma.to_string(),
                    interval.lo.to_string(),
                    interval.hi.to_string(),
                ])?;
                rows += 1;
            }
        }
        writer.flush()?;
    }

    let report = verify_decoding(&scenario, &result.q, &assignment);
    let loads = load_profile(&scenario, &result.q);
    let user_ids = scenario.user_ids();
    for user in &report.users {
        writeln!(
            out,
            "user {} (original id {}): {} subfiles, quality {} - {}",
            user.user,
            user_ids[user.user - 1],
            user.needed,
            result.q.at(user.user),
            if user.ok { "pass" } else { "FAIL" }
        )?;
    }
    let mut loads_match = true;
    for n in 1..=scenario.k() {
        let measured = &report.measured_loads[n - 1];
        let closed = loads.ell_at(n);
        let matched = measured == closed;
        loads_match &= matched;
        writeln!(
            out,
            "sub-signal {n}: measured {measured}, closed-form {closed} - {}",
            if matched { "match" } else { "MISMATCH" }
        )?;
    }
    writeln!(out, "trace: {} rows -> {}", rows, trace_path.display())?;

    if let Some(fail) = &report.failure {
        writeln!(out, "decoding: FAIL ({fail})")?;
        return Err(CliError::Failed(format!(
            "decoding verification failed: {fail}"
        )));
    }
    if !loads_match {
        writeln!(out, "decoding: FAIL (load mismatch)")?;
        return Err(CliError::Failed(
            "measured loads differ from closed forms".to_string(),
        ));
    }
    writeln!(out, "decoding: PASS")?;
    Ok(())
}

/// `verify`: run the property suite on a scenario file and/or a seeded
/// random stream; nonzero exit with a serialized counterexample on failure.
pub fn cmd_verify(
    scenario_path: Option<&Path>,
    random: usize,
    max_users: usize,
    seed: u64,
    out: &mut dyn Write,
    err_out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut fixed = Vec::new();
    if let Some(path) = scenario_path {
        let file = ScenarioFile::load(path)?;
        // The method is irrelevant here; verification runs every method.
        let (scenario, _, _) = file.resolve(Some("baseline"), None)?;
        fixed.push(scenario);
    }
    let config = VerifyConfig {
        random,
        max_users,
        seed,
    };
    let outcomes = verify::run(&config, &fixed);
    let mut failed = false;
    for outcome in &outcomes {
        let total = outcome.passed + outcome.failed;
        if outcome.failed == 0 {
            writeln!(
                out,
                "check {}: {}/{} pass",
                outcome.name, outcome.passed, total
            )?;
        } else {
            failed = true;
            writeln!(
                out,
                "check {}: {}/{} pass, {} FAILED",
                outcome.name, outcome.passed, total, outcome.failed
            )?;
            if let Some(detail) = &outcome.detail {
                writeln!(out, "  first failure: {detail}")?;
            }
            if let Some(cx) = &outcome.counterexample {
                writeln!(err_out, "counterexample for {}:", outcome.name)?;
                err_out.write_all(cx.to_json().as_bytes())?;
            }
        }
    }
    if failed {
        Err(CliError::Failed("verification failed".to_string()))
    } else {
        writeln!(out, "all checks passed (seed {seed})")?;
        Ok(())
    }
}

/// Parameters for `sweep`, bundled to keep the dispatcher flat.
#[derive(Debug, Default)]
pub struct SweepParams {
    pub users: Option<u64>,
    pub gamma: Option<String>,
    pub w: Option<u64>,
    pub alpha: Option<String>,
    pub steps: Option<u32>,
    pub gammas: Option<String>,
    pub scenario: Option<PathBuf>,
    pub target: Option<String>,
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("sweep {kind} requires {flag}")))
}

fn cache_degree_of(k: u64, gamma_text: &str) -> Result<u64, CliError> {
    let gamma = qadapt_core::combinatorics::rational_of(gamma_text)?;
    let kg = &gamma * &Rational::from(k);
    if !kg.is_integer() {
        return Err(CliError::Input(format!(
            "memory-sharing unsupported: K*gamma = {kg} is not an integer"
        )));
    }
    let t: u64 = kg
        .numer()
        .try_into()
        .map_err(|_| CliError::Input(format!("gamma = {gamma} outside [0,1]")))?;
    if t > k {
        return Err(CliError::Input(format!("gamma = {gamma} exceeds 1")));
    }
    Ok(t)
}

/// `sweep`: figure-data generation. Kinds: `two_type_quality`, `boost_vs_w`,
/// `compare_methods`.
pub fn cmd_sweep(
    kind: &str,
    params: &SweepParams,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut buffer: Vec<u8> = Vec::new();
    match kind {
        "two_type_quality" => {
            let k = require(params.users, "--users", kind)?;
            let gamma = require(params.gamma.as_deref(), "--gamma", kind)?;
            let w = require(params.w, "--w", kind)?;
            let t = cache_degree_of(k, gamma)?;
            let steps = params.steps.unwrap_or(100);
            sweep::two_type_quality(&mut buffer, k, t, w, steps)?;
        }
        "boost_vs_w" => {
            let k = require(params.users, "--users", kind)?;
            let alpha_text = require(params.alpha.as_deref(), "--alpha", kind)?;
            let gammas_text = require(params.gammas.as_deref(), "--gammas", kind)?;
            let alpha = qadapt_core::combinatorics::rational_of(alpha_text)?;
            let gammas = gammas_text
                .split(',')
                .map(qadapt_core::combinatorics::rational_of)
                .collect::<Result<Vec<_>, _>>()?;
            if gammas.is_empty() {
                return Err(CliError::Input("sweep boost_vs_w requires --gammas".into()));
            }
            sweep::boost_vs_w(&mut buffer, k, &alpha, &gammas)?;
        }
        "compare_methods" => {
            let path = require(params.scenario.as_deref(), "--scenario", kind)?;
            let file = ScenarioFile::load(path)?;
            // Methods are fixed by the sweep; the file's allocation block is
            // not consulted.
            let (scenario, _, _) = file.resolve(Some("baseline"), params.target.as_deref())?;
            sweep::compare_methods(&mut buffer, &scenario)?;
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown sweep kind {other:?} (expected two_type_quality, boost_vs_w, \
                 or compare_methods)"
            )));
        }
    }
    let text = String::from_utf8(buffer).expect("csv output is utf-8");
    write_or_print(output, &text, out)
}
