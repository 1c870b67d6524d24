#![allow(dead_code)]

use patsig::{rat, Belief, GameDefinition, PayoffTable, Rational, SignalingGame};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng, range: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-range..=range), rng.gen_range(1..=max_den))
}

pub fn random_belief(rng: &mut impl Rng, n: usize) -> Belief {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return Belief::new(w.into_iter().map(|x| rat(x, total)).collect()).unwrap();
        }
    }
}

/// Random game with `k` types split into exactly `n` patterns.
pub fn game_with(seed: u64, k: usize, n: usize, j: usize, l: usize) -> SignalingGame {
    let mut rng = seeded(seed);
    let blocks: Vec<Vec<usize>> = loop {
        let tags: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let blocks: Vec<Vec<usize>> = (0..n)
            .map(|b| (0..k).filter(|&t| tags[t] == b).collect())
            .collect();
        if blocks.iter().all(|b| !b.is_empty()) {
            break blocks;
        }
    };
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
    let total: i64 = w.iter().sum();
    let range = if rng.gen_bool(0.3) { 2 } else { 12 };
    GameDefinition {
        type_labels: (1..=k).map(|i| format!("t{i}")).collect(),
        pattern_labels: (1..=n).map(|i| format!("P{i}")).collect(),
        blocks,
        prior: w.into_iter().map(|x| rat(x, total)).collect(),
        message_labels: (1..=j).map(|i| format!("m{i}")).collect(),
        action_labels: (1..=l).map(|i| format!("a{i}")).collect(),
        u1: PayoffTable::from_fn(k, j, l, |_, _, _| small_rational(&mut rng, range, 12)),
        u2: PayoffTable::from_fn(k, j, l, |_, _, _| small_rational(&mut rng, range, 12)),
    }
    .build()
    .unwrap()
}

pub fn random_game(seed: u64) -> SignalingGame {
    let mut rng = seeded(seed ^ 0x9e37_79b9);
    let k = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=k);
    game_with(seed, k, n, rng.gen_range(1..=3), rng.gen_range(1..=3))
}
