//! Seeded random scenario and quality generation for the verification
//! runner. ChaCha keeps runs reproducible across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qadapt_core::combinatorics::Rational;
use qadapt_core::model::{layer_sizes, QualityVector, Scenario, TargetTime};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rational in (0, 1] with denominator up to `max_den`.
pub fn random_unit(rng: &mut ChaCha8Rng, max_den: u32) -> Rational {
    let den = rng.gen_range(1..=max_den) as i64;
    let num = rng.gen_range(1..=den);
    Rational::new(num, den)
}

/// Random scenario: `K in 1..=max_users`, integral cache degree `t in 0..K`
/// (delivery never empty), strengths sorted ascending in (0,1], MAN target.
pub fn random_scenario(rng: &mut ChaCha8Rng, max_users: usize) -> Scenario {
    let k = rng.gen_range(1..=max_users.max(1));
    let t = rng.gen_range(0..k) as u64;
    let gamma = Rational::from(t) / Rational::from(k as u64);
    let mut alpha: Vec<Rational> = (0..k).map(|_| random_unit(rng, 40)).collect();
    alpha.sort();
    Scenario::build(k, gamma, &alpha, TargetTime::Man).expect("generated scenario is valid")
}

/// Random nondecreasing quality vector in (0,1]^k.
pub fn random_quality(rng: &mut ChaCha8Rng, k: usize) -> QualityVector {
    let mut q: Vec<Rational> = (0..k).map(|_| random_unit(rng, 40)).collect();
    q.sort();
    layer_sizes(&q).expect("sorted positive entries form a quality vector")
}
