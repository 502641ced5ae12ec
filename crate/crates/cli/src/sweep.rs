//! Figure-data sweeps, written as CSV.
//!
//! Each numeric column appears twice: the exact rational (`p/q`) and a
//! 15-significant-digit decimal for plotting tools.

use std::io::Write;

use qadapt_core::allocation::{self, Method};
use qadapt_core::combinatorics::Rational;
use qadapt_core::model::Scenario;
use qadapt_core::timing::two_type_max_quality;

use crate::error::CliError;

const DECIMAL_DIGITS: usize = 15;

fn pair(value: &Rational) -> [String; 2] {
    [value.to_string(), value.to_decimal_string(DECIMAL_DIGITS)]
}

/// Highest quality servable to `w` degraded users without delay penalty, as
/// their common strength sweeps over `alpha = 1/steps .. steps/steps`.
///
/// Columns: `alpha, alpha_decimal, q_star, q_star_decimal`.
pub fn two_type_quality<W: Write>(
    out: W,
    k: u64,
    t: u64,
    w: u64,
    steps: u32,
) -> Result<(), CliError> {
    if !(1..=k).contains(&w) {
        return Err(CliError::Input(format!("w = {w} must lie in 1..={k}")));
    }
    if steps == 0 {
        return Err(CliError::Input("steps must be positive".to_string()));
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["alpha", "alpha_decimal", "q_star", "q_star_decimal"])?;
    for i in 1..=steps {
        let alpha = Rational::new(i as i64, steps as i64);
        let q_star = two_type_max_quality(k, t, &alpha, w);
        let [a, ad] = pair(&alpha);
        let [q, qd] = pair(&q_star);
        writer.write_record([a, ad, q, qd])?;
    }
    writer.flush()?;
    Ok(())
}

/// Quality boost `q_star/alpha` over serving `Q = alpha`, as the number of
/// degraded users sweeps over `w = 1..=K`, for each cache fraction given.
///
/// Columns: `gamma, w, q_star, q_star_decimal, boost, boost_decimal`.
pub fn boost_vs_w<W: Write>(
    out: W,
    k: u64,
    alpha: &Rational,
    gammas: &[Rational],
) -> Result<(), CliError> {
    if !alpha.is_positive() || alpha > &Rational::one() {
        return Err(CliError::Input(format!(
            "alpha = {alpha} must lie in (0,1]"
        )));
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record([
        "gamma",
        "w",
        "q_star",
        "q_star_decimal",
        "boost",
        "boost_decimal",
    ])?;
    for gamma in gammas {
        let kg = gamma * &Rational::from(k);
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
        for w in 1..=k {
            let q_star = two_type_max_quality(k, t, alpha, w);
            let boost = &q_star / alpha;
            let [q, qd] = pair(&q_star);
            let [b, bd] = pair(&boost);
            writer.write_record([gamma.to_string(), w.to_string(), q, qd, b, bd])?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Per-user quality under all four allocation methods for one scenario,
/// reported in original user order.
///
/// Columns: `user, alpha, alpha_decimal`, then `<method>, <method>_decimal`
/// for baseline, proportional_fairness, max_min, sum_quality.
pub fn compare_methods<W: Write>(out: W, scenario: &Scenario) -> Result<(), CliError> {
    let methods = [
        Method::Baseline,
        Method::ProportionalFairness,
        Method::MaxMin,
        Method::SumQuality,
    ];
    let mut per_method: Vec<Vec<Rational>> = Vec::with_capacity(methods.len());
    for method in methods {
        let result = allocation::run(scenario, method, None)?;
        per_method.push(scenario.to_original_order(result.q.full()));
    }
    let alpha = scenario.to_original_order(scenario.alpha());

    let mut writer = csv::Writer::from_writer(out);
    let mut header = vec![
        "user".to_string(),
        "alpha".to_string(),
        "alpha_decimal".to_string(),
    ];
    for method in methods {
        header.push(method.name().to_string());
        header.push(format!("{}_decimal", method.name()));
    }
    writer.write_record(&header)?;

    for user in 1..=scenario.k() {
        let mut row = vec![user.to_string()];
        row.extend(pair(&alpha[user - 1]));
        for q in &per_method {
            row.extend(pair(&q[user - 1]));
        }
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}
