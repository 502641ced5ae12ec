//! Brute-force grid references for the allocation optimizers at desk scale.
//!
//! Qualities are restricted to multiples of `1/r`; every nondecreasing vector
//! in `(0,1]^K` is enumerated and filtered by the exact prefix constraints.
//! True optima need not lie on the grid, so comparisons against the closed
//! forms carry one-sided slack `1/r` per coordinate.

use thiserror::Error;

use crate::combinatorics::{binom, binom_r, BigNat, Rational};
use crate::model::Scenario;

/// Grid resolution and dimension for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    /// Qualities are multiples of `1/resolution`; at least 2.
    pub resolution: u32,
    /// Vector length; must match the scenario's user count.
    pub dimension: usize,
}

/// Enumeration ceiling for [`grid_best_sum`] and [`grid_best_min`].
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("grid resolution must be at least 2, got {0}")]
    ResolutionTooSmall(u32),
    #[error("grid dimension {expected} does not match scenario user count {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("enumeration budget exceeded: C(r+K, K) = {count} > {budget}")]
    BudgetExceeded { count: BigNat, budget: u64 },
    #[error("no grid point satisfies the delivery constraints")]
    NoFeasiblePoint,
}

impl GridSpec {
    pub fn new(resolution: u32, dimension: usize) -> Result<Self, OracleError> {
        if resolution < 2 {
            return Err(OracleError::ResolutionTooSmall(resolution));
        }
        Ok(GridSpec {
            resolution,
            dimension,
        })
    }
}

fn check(scenario: &Scenario, grid: &GridSpec) -> Result<(), OracleError> {
    if grid.dimension != scenario.k() {
        return Err(OracleError::DimensionMismatch {
            expected: grid.dimension,
            actual: scenario.k(),
        });
    }
    let count = binom(
        grid.resolution as u64 + grid.dimension as u64,
        grid.dimension as u64,
    );
    if count > ENUMERATION_BUDGET {
        return Err(OracleError::BudgetExceeded {
            count,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Exhaustive search state shared by both objectives.
struct Search<'a> {
    scenario: &'a Scenario,
    budgets: Vec<Rational>,
    coef: Vec<Vec<Rational>>,
    resolution: u32,
}

impl<'a> Search<'a> {
    fn new(scenario: &'a Scenario, grid: &GridSpec) -> Self {
        let k = scenario.k();
        let target = scenario.resolved_target();
        let scale = &target * &binom_r(k as u64, scenario.t());
        let budgets = (1..=k).map(|w| scenario.alpha_at(w) * &scale).collect();
        let coef = (1..=k)
            .map(|w| {
                (1..=w)
                    .map(|i| binom_r((k - w + i - 1) as u64, scenario.t()))
                    .collect()
            })
            .collect();
        Search {
            scenario,
            budgets,
            coef,
            resolution: grid.resolution,
        }
    }

    fn feasible(&self, q: &[Rational]) -> bool {
        (1..=self.scenario.k()).all(|w| {
            let load: Rational = (1..=w).map(|i| &q[i - 1] * &self.coef[w - 1][i - 1]).sum();
            load <= self.budgets[w - 1]
        })
    }

    /// Enumerates nondecreasing grid vectors in lexicographic order, keeping
    /// the first vector attaining the best objective (so ties resolve to the
    /// lexicographically smallest). `None` when no grid point is feasible.
    fn run<F>(&self, objective: F) -> Option<(Vec<Rational>, Rational)>
    where
        F: Fn(&[Rational]) -> Rational,
    {
        let k = self.scenario.k();
        let mut numerators = vec![1u32; k];
        let mut best: Option<(Vec<Rational>, Rational)> = None;
        loop {
            let q: Vec<Rational> = numerators
                .iter()
                .map(|&n| Rational::new(n as i64, self.resolution as i64))
                .collect();
            if self.feasible(&q) {
                let val = objective(&q);
                if best.as_ref().is_none_or(|(_, b)| &val > b) {
                    best = Some((q, val));
                }
            }
            // Next nondecreasing vector: increment the last coordinate that
            // can grow, resetting the tail to its value.
            let mut pos = k;
            loop {
                if pos == 0 {
                    return best;
                }
                if numerators[pos - 1] < self.resolution {
                    numerators[pos - 1] += 1;
                    let v = numerators[pos - 1];
                    for slot in numerators.iter_mut().skip(pos) {
                        *slot = v;
                    }
                    break;
                }
                pos -= 1;
            }
        }
    }
}

/// Best grid vector for total quality `sum Q_i` under the exact prefix
/// constraints. Returns the maximizer and its sum.
pub fn grid_best_sum(
    scenario: &Scenario,
    grid: &GridSpec,
) -> Result<(Vec<Rational>, Rational), OracleError> {
    check(scenario, grid)?;
    let search = Search::new(scenario, grid);
    search
        .run(|q| q.iter().sum())
        .ok_or(OracleError::NoFeasiblePoint)
}

/// Best grid vector for the minimum quality (the first coordinate, since
/// vectors are nondecreasing). Returns the maximizer and its minimum.
pub fn grid_best_min(
    scenario: &Scenario,
    grid: &GridSpec,
) -> Result<(Vec<Rational>, Rational), OracleError> {
    check(scenario, grid)?;
    let search = Search::new(scenario, grid);
    search
        .run(|q| q[0].clone())
        .ok_or(OracleError::NoFeasiblePoint)
}
