//! Problem-instance representation, validation, and quality-layer
//! decomposition.
//!
//! A [`Scenario`] fixes the user count `K`, the cache fraction `γ` (with
//! integral cache degree `t = Kγ`), the per-user channel strengths sorted
//! ascending, and the target delivery time. Channel strengths may be supplied
//! in any order; the original positions are retained so results can be
//! reported back in the caller's order.

use std::fmt;

use thiserror::Error;

use crate::combinatorics::Rational;

/// Target delivery time: either the MAN sentinel (resolve to the
/// non-degraded delivery time `t_man`) or an explicit positive rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetTime {
    Man,
    Explicit(Rational),
}

impl fmt::Display for TargetTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetTime::Man => write!(f, "MAN"),
            TargetTime::Explicit(t) => write!(f, "{t}"),
        }
    }
}

/// A validated problem instance with channel strengths sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    user_count: usize,
    cache_fraction: Rational,
    cache_degree: u64,
    alpha: Vec<Rational>,
    target_time: TargetTime,
    user_ids: Vec<usize>,
}

/// Per-user qualities `Q_k` together with their layer decomposition
/// `q_k = Q_k - Q_{k-1}` (with `q_1 = Q_1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityVector {
    q_full: Vec<Rational>,
    layers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("user count must be at least 1")]
    NoUsers,
    #[error("expected {expected} channel strengths, got {actual}")]
    AlphaCount { expected: usize, actual: usize },
    #[error("cache fraction gamma = {0} outside [0,1]")]
    GammaOutOfRange(Rational),
    #[error("memory-sharing unsupported: K*gamma = {0} is not an integer")]
    NonIntegralCacheDegree(Rational),
    #[error("channel strength alpha[{index}] = {value} outside (0,1]")]
    AlphaOutOfRange { index: usize, value: Rational },
    #[error("target delivery time must be positive, got {0}")]
    NonPositiveTarget(Rational),
    #[error("quality Q[{index}] = {value} outside (0,1]")]
    QualityOutOfRange { index: usize, value: Rational },
    #[error("quality vector decreases at index {index}: {prev} > {value}")]
    QualityDecreasing {
        index: usize,
        prev: Rational,
        value: Rational,
    },
}

/// Delivery time of the non-degraded cache-aided system:
/// `K(1 - t/K)/(1 + t) = (K - t)/(1 + t)` in normalized time slots.
pub fn t_man(k: u64, t: u64) -> Rational {
    assert!(t <= k, "cache degree t must not exceed user count");
    Rational::from(k - t) / Rational::from(t + 1)
}

impl Scenario {
    /// Validates and builds a scenario. `alpha_raw` may be unsorted; it is
    /// sorted ascending (stable, so equal strengths keep their original
    /// relative order) and the permutation is recorded in [`user_ids`].
    ///
    /// [`user_ids`]: Scenario::user_ids
    pub fn build(
        user_count: usize,
        cache_fraction: Rational,
        alpha_raw: &[Rational],
        target_time: TargetTime,
    ) -> Result<Self, ModelError> {
        if user_count == 0 {
            return Err(ModelError::NoUsers);
        }
        if alpha_raw.len() != user_count {
            return Err(ModelError::AlphaCount {
                expected: user_count,
                actual: alpha_raw.len(),
            });
        }
        if cache_fraction.is_negative() || cache_fraction > Rational::one() {
            return Err(ModelError::GammaOutOfRange(cache_fraction));
        }
        let kg = &cache_fraction * &Rational::from(user_count as u64);
        if !kg.is_integer() {
            return Err(ModelError::NonIntegralCacheDegree(kg));
        }
        let cache_degree = kg
            .numer()
            .try_into()
            .expect("cache degree fits in u64 since 0 <= K*gamma <= K");
        for (i, a) in alpha_raw.iter().enumerate() {
            if !a.is_positive() || a > &Rational::one() {
                return Err(ModelError::AlphaOutOfRange {
                    index: i + 1,
                    value: a.clone(),
                });
            }
        }
        if let TargetTime::Explicit(t) = &target_time {
            if !t.is_positive() {
                return Err(ModelError::NonPositiveTarget(t.clone()));
            }
        }

        let mut order: Vec<usize> = (0..user_count).collect();
        order.sort_by(|&a, &b| alpha_raw[a].cmp(&alpha_raw[b]));
        let alpha = order.iter().map(|&i| alpha_raw[i].clone()).collect();
        let user_ids = order.iter().map(|&i| i + 1).collect();

        Ok(Scenario {
            user_count,
            cache_fraction,
            cache_degree,
            alpha,
            target_time,
            user_ids,
        })
    }

    /// Number of users `K`.
    pub fn k(&self) -> usize {
        self.user_count
    }

    /// Cache degree `t = K*gamma`.
    pub fn t(&self) -> u64 {
        self.cache_degree
    }

    pub fn cache_fraction(&self) -> &Rational {
        &self.cache_fraction
    }

    /// Channel strengths sorted ascending.
    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    /// Strength of the user at sorted position `k` (1-based).
    pub fn alpha_at(&self, k: usize) -> &Rational {
        &self.alpha[k - 1]
    }

    /// Original (pre-sort) 1-based user id at each sorted position.
    pub fn user_ids(&self) -> &[usize] {
        &self.user_ids
    }

    pub fn target_time(&self) -> &TargetTime {
        &self.target_time
    }

    /// Target delivery time with the MAN sentinel resolved.
    pub fn resolved_target(&self) -> Rational {
        match &self.target_time {
            TargetTime::Man => self.t_man(),
            TargetTime::Explicit(t) => t.clone(),
        }
    }

    /// Delivery time of the non-degraded system with these `K` and `t`.
    pub fn t_man(&self) -> Rational {
        t_man(self.user_count as u64, self.cache_degree)
    }

    /// Warnings about unusual but accepted configurations.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if let TargetTime::Explicit(t) = &self.target_time {
            let man = self.t_man();
            if *t < man {
                w.push(format!(
                    "target_time {t} is below the non-degraded delivery time {man}; \
                     qualities will be scaled below the channel strengths"
                ));
            }
        }
        w
    }

    /// Reorders a sorted-position vector back to original user order.
    pub fn to_original_order<T: Clone>(&self, sorted_vals: &[T]) -> Vec<T> {
        assert_eq!(sorted_vals.len(), self.user_count);
        let mut out: Vec<Option<T>> = vec![None; self.user_count];
        for (pos, original) in self.user_ids.iter().enumerate() {
            out[original - 1] = Some(sorted_vals[pos].clone());
        }
        out.into_iter().map(|v| v.unwrap()).collect()
    }

    /// Reorders an original-user-order vector into sorted-strength order.
    pub fn to_sorted_order<T: Clone>(&self, original_vals: &[T]) -> Vec<T> {
        assert_eq!(original_vals.len(), self.user_count);
        self.user_ids
            .iter()
            .map(|&id| original_vals[id - 1].clone())
            .collect()
    }
}

impl QualityVector {
    /// Per-user qualities `Q_k`, sorted-user order.
    pub fn full(&self) -> &[Rational] {
        &self.q_full
    }

    /// Quality at sorted position `k` (1-based).
    pub fn at(&self, k: usize) -> &Rational {
        &self.q_full[k - 1]
    }

    /// Layer sizes `q_k`.
    pub fn layers(&self) -> &[Rational] {
        &self.layers
    }

    /// Layer size at position `n` (1-based).
    pub fn layer_at(&self, n: usize) -> &Rational {
        &self.layers[n - 1]
    }

    pub fn len(&self) -> usize {
        self.q_full.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q_full.is_empty()
    }

    /// All-ones quality vector of length `k`.
    pub fn ones(k: usize) -> Self {
        layer_sizes(&vec![Rational::one(); k]).expect("all-ones vector is valid")
    }
}

/// Decomposes a nondecreasing quality vector `Q` (entries in `(0,1]`) into
/// layer sizes `q_1 = Q_1`, `q_k = Q_k - Q_{k-1}`.
///
/// The prefix sums of the layers reproduce `Q` exactly.
pub fn layer_sizes(q: &[Rational]) -> Result<QualityVector, ModelError> {
    let mut layers = Vec::with_capacity(q.len());
    let mut prev = Rational::zero();
    for (i, value) in q.iter().enumerate() {
        if !value.is_positive() || value > &Rational::one() {
            return Err(ModelError::QualityOutOfRange {
                index: i + 1,
                value: value.clone(),
            });
        }
        if value < &prev {
            return Err(ModelError::QualityDecreasing {
                index: i + 1,
                prev,
                value: value.clone(),
            });
        }
        layers.push(value - &prev);
        prev = value.clone();
    }
    Ok(QualityVector {
        q_full: q.to_vec(),
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::rational_of;

    fn r(s: &str) -> Rational {
        rational_of(s).unwrap()
    }

    fn rs(list: &[&str]) -> Vec<Rational> {
        list.iter().map(|s| r(s)).collect()
    }

    #[test]
    fn t_man_values() {
        assert_eq!(t_man(6, 2), r("4/3"));
        assert_eq!(t_man(6, 6), Rational::zero());
        assert_eq!(t_man(100, 10), r("90/11"));
        assert_eq!(t_man(2, 1), r("1/2"));
    }

    #[test]
    fn builds_multirate_scenario() {
        let s = Scenario::build(
            6,
            r("1/3"),
            &rs(&["1/2", "5/8", "3/4", "7/8", "1", "1"]),
            TargetTime::Man,
        )
        .unwrap();
        assert_eq!(s.t(), 2);
        assert_eq!(s.k(), 6);
        assert_eq!(s.user_ids(), &[1, 2, 3, 4, 5, 6]);
        assert_eq!(s.resolved_target(), r("4/3"));
        assert!(s.warnings().is_empty());
    }

    #[test]
    fn builds_two_type_scenario() {
        let s = Scenario::build(
            6,
            r("2/6"),
            &rs(&["2/3", "2/3", "1", "1", "1", "1"]),
            TargetTime::Man,
        )
        .unwrap();
        assert_eq!(s.t(), 2);
        let degraded = s.alpha().iter().filter(|a| **a < Rational::one()).count();
        assert_eq!(degraded, 2);
    }

    #[test]
    fn rejects_non_integral_cache_degree() {
        let err = Scenario::build(
            5,
            r("1/3"),
            &rs(&["1", "1", "1", "1", "1"]),
            TargetTime::Man,
        )
        .unwrap_err();
        assert_eq!(err, ModelError::NonIntegralCacheDegree(r("5/3")));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            Scenario::build(0, r("0"), &[], TargetTime::Man),
            Err(ModelError::NoUsers)
        );
        assert!(matches!(
            Scenario::build(2, r("1/2"), &rs(&["0", "1"]), TargetTime::Man),
            Err(ModelError::AlphaOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            Scenario::build(2, r("1/2"), &rs(&["1/2", "9/8"]), TargetTime::Man),
            Err(ModelError::AlphaOutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            Scenario::build(2, r("3/2"), &rs(&["1", "1"]), TargetTime::Man),
            Err(ModelError::GammaOutOfRange(_))
        ));
        assert!(matches!(
            Scenario::build(
                2,
                r("1/2"),
                &rs(&["1", "1"]),
                TargetTime::Explicit(Rational::zero())
            ),
            Err(ModelError::NonPositiveTarget(_))
        ));
        assert!(matches!(
            Scenario::build(3, r("1/3"), &rs(&["1", "1"]), TargetTime::Man),
            Err(ModelError::AlphaCount {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn sorting_records_permutation() {
        let s = Scenario::build(
            4,
            r("1/2"),
            &rs(&["1", "1/4", "1/2", "1/4"]),
            TargetTime::Man,
        )
        .unwrap();
        // Stable sort: the two 1/4 users keep original order 2 then 4.
        assert_eq!(s.user_ids(), &[2, 4, 3, 1]);
        assert_eq!(s.alpha(), &rs(&["1/4", "1/4", "1/2", "1"]));
        // Round trip back to original order.
        let back = s.to_original_order(s.alpha());
        assert_eq!(back, rs(&["1", "1/4", "1/2", "1/4"]));
        let forth = s.to_sorted_order(&back);
        assert_eq!(forth, s.alpha().to_vec());
    }

    #[test]
    fn sorted_input_is_identity() {
        let s = Scenario::build(3, r("1/3"), &rs(&["1/4", "1/2", "1"]), TargetTime::Man).unwrap();
        assert_eq!(s.user_ids(), &[1, 2, 3]);
        assert_eq!(s.to_original_order(s.alpha()), s.alpha().to_vec());
    }

    #[test]
    fn layer_sizes_two_type() {
        let q = layer_sizes(&rs(&["5/6", "1"])).unwrap();
        assert_eq!(q.layers(), &rs(&["5/6", "1/6"]));
    }

    #[test]
    fn layer_sizes_full_quality() {
        let q = layer_sizes(&rs(&["1", "1", "1"])).unwrap();
        assert_eq!(q.layers(), &rs(&["1", "0", "0"]));
    }

    #[test]
    fn layer_sizes_multirate_fixture() {
        // Successive differences of (25/32, 25/32, 51/64, 307/320, 1, 1).
        let q = layer_sizes(&rs(&["25/32", "25/32", "51/64", "307/320", "1", "1"])).unwrap();
        assert_eq!(
            q.layers(),
            &rs(&["25/32", "0", "1/64", "13/80", "13/320", "0"])
        );
        // Prefix sums reconstruct Q exactly.
        let mut acc = Rational::zero();
        for (layer, full) in q.layers().iter().zip(q.full()) {
            acc += layer;
            assert_eq!(&acc, full);
        }
    }

    #[test]
    fn layer_sizes_rejects_bad_vectors() {
        assert!(matches!(
            layer_sizes(&rs(&["1/2", "1/4"])),
            Err(ModelError::QualityDecreasing { index: 2, .. })
        ));
        assert!(matches!(
            layer_sizes(&rs(&["0", "1"])),
            Err(ModelError::QualityOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            layer_sizes(&rs(&["1/2", "3/2"])),
            Err(ModelError::QualityOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn target_below_man_warns() {
        let s = Scenario::build(
            2,
            r("1/2"),
            &rs(&["1/2", "1"]),
            TargetTime::Explicit(r("1/4")),
        )
        .unwrap();
        assert_eq!(s.warnings().len(), 1);
        assert!(s.warnings()[0].contains("below"));
    }
}
