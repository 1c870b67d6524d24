#![allow(dead_code)]

use patsig::cartrade::CarTradeParams;
use patsig::{rat, Belief, GameDefinition, PayoffTable, Rational, SignalingGame};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Numerator in `[-range, range]`, denominator in `[1, max_den]`.
pub fn small_rational(rng: &mut impl Rng, range: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-range..=range), rng.gen_range(1..=max_den))
}

fn positive_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random probability vector with positive entries.
pub fn random_prior(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| rat(x, total)).collect()
}

/// Random belief; some entries may be zero.
pub fn random_belief(rng: &mut impl Rng, n: usize) -> Belief {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return Belief::new(w.into_iter().map(|x| rat(x, total)).collect()).unwrap();
        }
    }
}

/// Random partition of `0..k` into blocks listed by first member.
pub fn random_blocks(rng: &mut impl Rng, k: usize) -> Vec<Vec<usize>> {
    let n = rng.gen_range(1..=k);
    loop {
        let tags: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for (t, tag) in tags.iter().enumerate() {
            match seen.iter().position(|s| s == tag) {
                Some(i) => blocks[i].push(t),
                None => {
                    seen.push(*tag);
                    blocks.push(vec![t]);
                }
            }
        }
        if blocks.len() == n {
            return blocks;
        }
    }
}

pub fn game_from_blocks(rng: &mut impl Rng, k: usize, blocks: Vec<Vec<usize>>) -> SignalingGame {
    let j = rng.gen_range(1..=3);
    let l = rng.gen_range(1..=3);
    // Narrow numerators make ties common.
    let range = if rng.gen_bool(0.3) { 2 } else { 12 };
    let n = blocks.len();
    GameDefinition {
        type_labels: labels("t", k),
        pattern_labels: labels("P", n),
        prior: random_prior(rng, n),
        blocks,
        message_labels: labels("m", j),
        action_labels: labels("a", l),
        u1: PayoffTable::from_fn(k, j, l, |_, _, _| small_rational(rng, range, 12)),
        u2: PayoffTable::from_fn(k, j, l, |_, _, _| small_rational(rng, range, 12)),
    }
    .build()
    .unwrap()
}

/// `K <= 4` types, any partition, `J, L <= 3`, payoffs with denominators up
/// to 12.
pub fn random_game(rng: &mut impl Rng) -> SignalingGame {
    let k = rng.gen_range(2..=4);
    let blocks = random_blocks(rng, k);
    game_from_blocks(rng, k, blocks)
}

pub fn random_discrete_game(rng: &mut impl Rng) -> SignalingGame {
    let k = rng.gen_range(2..=4);
    let blocks = (0..k).map(|t| vec![t]).collect();
    game_from_blocks(rng, k, blocks)
}

/// Valid car-trade parameters with costs spread widely around the bids so
/// every cost regime gets hit.
pub fn random_params(rng: &mut impl Rng) -> CarTradeParams {
    fn increasing(rng: &mut impl Rng) -> [Rational; 3] {
        let a = positive_rational(rng, 12, 4);
        let b = &a + &positive_rational(rng, 12, 4);
        let c = &b + &positive_rational(rng, 12, 4);
        [a, b, c]
    }
    let values = increasing(rng);
    let bids = increasing(rng);
    let scale = &bids[2] * rat(3, 2);
    let mut frac = || rat(rng.gen_range(1..=48), 48);
    let c12 = &scale * frac();
    let c23 = &scale * frac();
    let top = if c12 > c23 { c12.clone() } else { c23.clone() };
    let c13 = &top + &scale * frac();
    CarTradeParams {
        values,
        bids,
        costs: [c12, c13, c23],
        alpha: rat(rng.gen_range(1..=11), 12),
    }
}

/// Renders a game with shuffled section order, comments and irregular
/// spacing, to exercise the parser beyond the canonical layout.
pub fn scrambled_document(rng: &mut impl Rng, g: &SignalingGame) -> String {
    let sp = |rng: &mut dyn rand::RngCore| " ".repeat(rng.gen_range(1..=3));
    let mut sections: Vec<String> = Vec::new();

    let mut s = String::from("TYPES:\n");
    for t in g.types().labels() {
        s += &format!(
            "{}{t}{}\n",
            sp(rng),
            if rng.gen_bool(0.3) { "  # type" } else { "" }
        );
    }
    sections.push(s);

    let mut s = String::from("PATTERNS:  # blocks\n");
    for (p, block) in g.partition().blocks().iter().enumerate() {
        let mut members: Vec<&str> = block.iter().map(|&t| g.type_label(t)).collect();
        members.shuffle(rng);
        s += &format!(
            "{}{}{}\n",
            g.pattern_label(p),
            sp(rng),
            members.join(&sp(rng))
        );
    }
    sections.push(s);

    let mut order: Vec<usize> = (0..g.num_patterns()).collect();
    order.shuffle(rng);
    let mut s = String::from("PRIOR:\n");
    for p in order {
        s += &format!("{}\t{}\n", g.pattern_label(p), g.prior().weight(p));
    }
    sections.push(s);

    sections.push(format!("MESSAGES:\n{}\n", g.message_labels().join(" ")));
    sections.push(format!("\nACTIONS:\n\n{}\n", g.action_labels().join("\n")));

    let mut rows = Vec::new();
    for t in 0..g.num_types() {
        for m in 0..g.num_messages() {
            for a in 0..g.num_actions() {
                rows.push(format!(
                    "{} {} {}{}{} {}",
                    g.type_label(t),
                    g.message_label(m),
                    g.action_label(a),
                    sp(rng),
                    g.u1(t, m, a),
                    g.u2(t, m, a)
                ));
            }
        }
    }
    rows.shuffle(rng);
    sections.push(format!("PAYOFFS:\n{}\n", rows.join("\n")));

    sections.shuffle(rng);
    format!("# generated\n{}", sections.concat())
}
