//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every expected value is an exact rational unless stated otherwise; run
//! with `cargo test -p qadapt-cli --test acceptance` (add `-- --nocapture`
//! to see the per-criterion lines).

use std::time::{Duration, Instant};

use qadapt_core::allocation::{self, Method};
use qadapt_core::combinatorics::{binom_r, rational_of, Rational};
use qadapt_core::delivery::{assign_intervals, measured_loads, verify_decoding, ScaleGuard};
use qadapt_core::model::{layer_sizes, t_man, Scenario, TargetTime};
use qadapt_core::oracle::{grid_best_sum, GridSpec};
use qadapt_core::power;
use qadapt_core::timing::{
    delivery_time, load_profile, prefix_load, sub_signal_load, two_type_max_quality, two_type_time,
};

use qadapt_cli::random::{random_quality, random_scenario, random_unit, rng_from_seed};

fn r(s: &str) -> Rational {
    rational_of(s).unwrap()
}

fn rs(list: &[&str]) -> Vec<Rational> {
    list.iter().map(|s| r(s)).collect()
}

fn report(criterion: usize, outcome: &str) {
    println!("criterion {criterion}: PASS - {outcome}");
}

fn multirate_scenario() -> Scenario {
    Scenario::build(
        6,
        r("1/3"),
        &rs(&["1/2", "5/8", "3/4", "7/8", "1", "1"]),
        TargetTime::Man,
    )
    .unwrap()
}

fn two_type_scenario() -> Scenario {
    Scenario::build(
        6,
        r("2/6"),
        &rs(&["2/3", "2/3", "1", "1", "1", "1"]),
        TargetTime::Man,
    )
    .unwrap()
}

/// Criterion 1: the six-user multi-rate worked example, every quantity as an
/// exact fraction, in under a second.
///
/// The second sub-signal load is pinned three independent ways: the prefix
/// list forces L2 - L1 = 25/2 - 125/16 = 75/16, the load formula gives
/// 25/32 * C(4,2) = 75/16 (the second quality layer is empty), and the
/// interval enumeration measures 75/16.
#[test]
fn criterion_01_multirate_fixture() {
    let started = Instant::now();
    let s = multirate_scenario();

    let greedy = allocation::sum_quality(&s).unwrap();
    assert_eq!(
        greedy.q.full(),
        &rs(&["25/32", "25/32", "51/64", "307/320", "1", "1"])
    );

    let pfo = allocation::proportional_fairness(&s).unwrap();
    assert_eq!(pfo.beta, Some(r("28/25")));
    assert_eq!(
        pfo.q.full(),
        &rs(&["14/25", "7/10", "21/25", "49/50", "1", "1"])
    );

    let loads = load_profile(&s, &greedy.q);
    assert_eq!(
        loads.prefix(),
        &rs(&["125/16", "25/2", "15", "35/2", "6057/320", "787/40"])
    );
    assert_eq!(
        loads.ell(),
        &rs(&["125/16", "75/16", "5/2", "5/2", "457/320", "239/320"])
    );

    let plan = power::build_plan(&s, &loads).unwrap();
    assert_eq!(plan.bottleneck, 4);
    assert_eq!(&plan.pi[..4], &rs(&["25/64", "5/8", "3/4", "7/8"]));
    assert_eq!(plan.pi[4], r("6057/6400"));
    assert_eq!(plan.pi[5], r("787/800"));

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    report(
        1,
        "multi-rate fixture exact (sum-quality Q, PFO beta 28/25, loads with \
         ell_2 = 75/16 = L2 - L1, bottleneck 4, exponents incl. pi_5 = 6057/6400)",
    );
}

/// Criterion 2: the two-type worked example, exact.
#[test]
fn criterion_02_two_type_fixture() {
    let q_star = two_type_max_quality(6, 2, &r("2/3"), 2);
    assert_eq!(q_star, r("5/6"));

    // Both branches of the two-type delivery time meet at 4/3 for Q = 5/6.
    let degraded_branch = r("5/6") / r("2/3") * (binom_r(6, 3) - binom_r(4, 3)) / binom_r(6, 2);
    assert_eq!(degraded_branch, r("4/3"));
    assert_eq!(t_man(6, 2), r("4/3"));
    assert_eq!(two_type_time(6, 2, &r("2/3"), 2, &r("5/6")), r("4/3"));

    assert_eq!(
        two_type_time(6, 2, &r("2/3"), 2, &Rational::one()),
        r("8/5")
    );

    // The embedded six-user vector agrees.
    let s = two_type_scenario();
    let q = layer_sizes(&rs(&["5/6", "5/6", "1", "1", "1", "1"])).unwrap();
    assert_eq!(delivery_time(&s, &q).0, r("4/3"));

    report(
        2,
        "two-type fixture exact (Q* = 5/6, both branches 4/3, full quality 8/5, t_man 4/3)",
    );
}

/// Criterion 3: 100 users, cache 1/10, 10 users degraded to 3/5 - their
/// quality still reaches 0.847 +- 0.005, computed exactly, in under a second.
#[test]
fn criterion_03_large_system_quality() {
    let started = Instant::now();
    let q_star = two_type_max_quality(100, 10, &r("3/5"), 10);
    assert_eq!(q_star, r("118024837203/138923764208"));
    assert!((q_star.clone() - r("847/1000")).abs() <= r("5/1000"));
    let decimal = q_star.to_decimal_string(15);
    assert!(decimal.starts_with("0.84956"), "decimal = {decimal}");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    report(
        3,
        &format!("Q* = {q_star} = {decimal} within 0.847 +- 0.005"),
    );
}

/// Shared sweep for criteria 4 and 5: every K in 3..=10, every t in 1..K,
/// 50 seeded random monotone quality vectors each.
fn oracle_sweep(mut check: impl FnMut(&Scenario, &qadapt_core::model::QualityVector)) {
    let mut rng = rng_from_seed(0x5EED);
    for k in 3..=10usize {
        for t in 1..k as u64 {
            let gamma = Rational::from(t) / Rational::from(k as u64);
            let s = Scenario::build(k, gamma, &vec![Rational::one(); k], TargetTime::Man).unwrap();
            for _ in 0..50 {
                let q = random_quality(&mut rng, k);
                check(&s, &q);
            }
        }
    }
}

/// Criterion 4: interval-enumeration loads equal the closed-form loads,
/// exactly, across the full sweep, in under two minutes.
#[test]
fn criterion_04_oracle_equivalence() {
    let started = Instant::now();
    let mut cases = 0usize;
    oracle_sweep(|s, q| {
        let assignment = assign_intervals(s, q, ScaleGuard::Enforce).unwrap();
        let measured = measured_loads(&assignment);
        for n in 1..=s.k() {
            assert_eq!(
                measured[n - 1],
                sub_signal_load(s, q, n),
                "K={} t={} n={n}",
                s.k(),
                s.t()
            );
        }
        cases += 1;
    });
    let elapsed = started.elapsed();
    assert_eq!(cases, 44 * 50);
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    report(
        4,
        &format!("measured loads = closed-form loads on {cases} cases in {elapsed:?}"),
    );
}

/// Criterion 5: prefix loads telescope the sub-signal loads exactly on the
/// same sweep.
#[test]
fn criterion_05_prefix_load_identity() {
    let mut cases = 0usize;
    oracle_sweep(|s, q| {
        let mut acc = Rational::zero();
        for n in 1..=s.k() {
            acc += &sub_signal_load(s, q, n);
            assert_eq!(acc, prefix_load(s, q, n), "K={} t={} n={n}", s.k(), s.t());
        }
        cases += 1;
    });
    assert_eq!(cases, 44 * 50);
    report(5, &format!("L_k = sum of ell_n exactly on {cases} cases"));
}

/// Criterion 6: serving Q = alpha never exceeds the undegraded delivery
/// time, for 1000 seeded scenarios with up to 30 users, in under a minute.
#[test]
fn criterion_06_baseline_bound() {
    let started = Instant::now();
    let mut rng = rng_from_seed(0xA11CE);
    for _ in 0..1000 {
        let s = random_scenario(&mut rng, 30);
        let q = layer_sizes(s.alpha()).unwrap();
        let (time, _) = delivery_time(&s, &q);
        assert!(time <= s.t_man(), "K={} t={}", s.k(), s.t());
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    report(
        6,
        &format!("delivery_time(Q = alpha) <= t_man on 1000 scenarios in {elapsed:?}"),
    );
}

/// Criterion 7: power-plan invariants (monotone exponents, per-user
/// decodability, equalized nonzero sub-signal times) on the fixtures and
/// 1000 random scenarios.
#[test]
fn criterion_07_power_plan_properties() {
    let mut rng = rng_from_seed(0xB0B);
    let check = |s: &Scenario, q: &qadapt_core::model::QualityVector| {
        let loads = load_profile(s, q);
        let plan = power::build_plan(s, &loads).unwrap();
        for pair in plan.pi.windows(2) {
            assert!(pair[0] <= pair[1], "exponents must be nondecreasing");
        }
        for n in 1..=s.k() {
            assert!(plan.pi[n - 1] <= *s.alpha_at(n), "pi_{n} > alpha_{n}");
        }
        for (n, time) in plan.sub_times.iter().enumerate() {
            if !loads.ell()[n].is_zero() {
                assert_eq!(time, &plan.total_time, "sub-signal {} time", n + 1);
            }
        }
    };

    let s = multirate_scenario();
    check(&s, &allocation::sum_quality(&s).unwrap().q);
    check(&s, &allocation::proportional_fairness(&s).unwrap().q);
    check(&s, &allocation::baseline(&s).q);
    let s2 = two_type_scenario();
    check(
        &s2,
        &allocation::explicit(&s2, &rs(&["5/6", "5/6", "1", "1", "1", "1"]))
            .unwrap()
            .q,
    );

    for _ in 0..1000 {
        let s = random_scenario(&mut rng, 20);
        let q = random_quality(&mut rng, s.k());
        check(&s, &q);
    }
    report(
        7,
        "exponents nondecreasing, pi_n <= alpha_n, nonzero sub-signal times all equal \
         the delivery time on fixtures + 1000 scenarios",
    );
}

/// Criterion 8: decoding verification passes for every allocation method's
/// output on every checked scenario with at most 10^4 multicast messages.
#[test]
fn criterion_08_decoding_all_methods() {
    let mut scenarios = vec![multirate_scenario(), two_type_scenario()];
    // A below-undegraded target exercises the scaled-down allocations.
    scenarios.push(
        Scenario::build(
            6,
            r("1/3"),
            &rs(&["1/2", "5/8", "3/4", "7/8", "1", "1"]),
            TargetTime::Explicit(r("1")),
        )
        .unwrap(),
    );
    let mut rng = rng_from_seed(0xDEC0DE);
    while scenarios.len() < 120 {
        let s = random_scenario(&mut rng, 14);
        if load_profile(&s, &qadapt_core::model::QualityVector::ones(s.k())).total_messages()
            <= &10_000u64
        {
            scenarios.push(s);
        }
    }

    let mut runs = 0usize;
    for s in &scenarios {
        for method in [
            Method::Baseline,
            Method::ProportionalFairness,
            Method::MaxMin,
            Method::SumQuality,
        ] {
            let out = allocation::run(s, method, None).unwrap();
            let assignment = assign_intervals(s, &out.q, ScaleGuard::Enforce).unwrap();
            let report = verify_decoding(s, &out.q, &assignment);
            assert!(
                report.pass(),
                "{method} failed decoding on K={} t={}: {:?}",
                s.k(),
                s.t(),
                report.failure
            );
            runs += 1;
        }
    }
    report(
        8,
        &format!(
            "decoding passed for {runs} method runs across {} scenarios",
            scenarios.len()
        ),
    );
}

/// Criterion 9: sum-quality dominates max-min coordinate-wise (fixtures +
/// 500 random scenarios), and the greedy total beats the exhaustive grid on
/// every tiny instance (K <= 3, resolution 32).
#[test]
fn criterion_09_dominance() {
    let mut rng = rng_from_seed(0xD0);
    let mut scenarios = vec![multirate_scenario(), two_type_scenario()];
    scenarios.extend((0..500).map(|_| random_scenario(&mut rng, 20)));
    for s in &scenarios {
        let greedy = allocation::sum_quality(s).unwrap();
        let flat = allocation::max_min(s).unwrap();
        for (g, m) in greedy.q.full().iter().zip(flat.q.full()) {
            assert!(g >= m, "K={} t={}", s.k(), s.t());
        }
    }

    // Tiny instances against the exhaustive grid.
    let mut tiny_cases = 0usize;
    for k in 1..=3usize {
        for t in 0..k as u64 {
            for _ in 0..12 {
                let gamma = Rational::from(t) / Rational::from(k as u64);
                let mut alpha: Vec<Rational> = (0..k).map(|_| random_unit(&mut rng, 16)).collect();
                alpha.sort();
                let s = Scenario::build(k, gamma, &alpha, TargetTime::Man).unwrap();
                let grid = GridSpec::new(32, k).unwrap();
                let (_, grid_total) = grid_best_sum(&s, &grid).unwrap();
                let greedy_total: Rational =
                    allocation::sum_quality(&s).unwrap().q.full().iter().sum();
                assert!(greedy_total >= grid_total, "K={k} t={t}");
                assert!(
                    greedy_total <= grid_total + Rational::new(k as i64, 32),
                    "greedy should be within the grid slack"
                );
                tiny_cases += 1;
            }
        }
    }
    report(
        9,
        &format!(
            "sum-quality >= max-min on {} scenarios; greedy total >= grid total on \
             {tiny_cases} tiny instances",
            scenarios.len()
        ),
    );
}

/// Criterion 10: figure-data regeneration. The 20-user comparison keeps the
/// documented orderings, and both 100-user sweeps finish in under 10 s.
#[test]
fn criterion_10_figure_data() {
    // K = 20, t = 3, alpha_k = 4/5 + (1/5)(k-1)/19, target = undegraded time.
    let alpha: Vec<Rational> = (0..20)
        .map(|i| r("4/5") + r("1/5") * Rational::new(i, 19))
        .collect();
    let s = Scenario::build(20, r("3/20"), &alpha, TargetTime::Man).unwrap();

    let mut buf = Vec::new();
    qadapt_cli::sweep::compare_methods(&mut buf, &s).unwrap();
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.unwrap();
        let baseline = r(record.get(3).unwrap());
        let pfo = r(record.get(5).unwrap());
        let max_min = r(record.get(7).unwrap());
        let sum_quality = r(record.get(9).unwrap());
        assert!(
            sum_quality >= max_min,
            "sum-quality curve dips below max-min"
        );
        assert!(pfo >= baseline, "fairness curve dips below baseline");
        rows += 1;
    }
    assert_eq!(rows, 20);

    let started = Instant::now();
    let mut tt = Vec::new();
    qadapt_cli::sweep::two_type_quality(&mut tt, 100, 10, 10, 100).unwrap();
    let mut bw = Vec::new();
    qadapt_cli::sweep::boost_vs_w(
        &mut bw,
        100,
        &r("3/5"),
        &rs(&["1/20", "1/10", "1/5", "3/10"]),
    )
    .unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "sweeps took {elapsed:?}");
    assert_eq!(tt.iter().filter(|&&b| b == b'\n').count(), 101);
    assert_eq!(bw.iter().filter(|&&b| b == b'\n').count(), 401);

    report(
        10,
        &format!(
            "20-user method orderings hold on all {rows} users; 100-user sweeps \
             finished in {elapsed:?}"
        ),
    );
}
