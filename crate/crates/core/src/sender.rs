//! Sender best responses against a fixed receiver strategy, and the
//! pattern-level optimal message sets they induce.

use std::collections::BTreeSet;

use crate::game::{PatternPartition, ReceiverStrategy, SenderStrategy, SignalingGame};
use crate::rational::Rational;

pub type MessageSet = BTreeSet<usize>;

/// How a pattern's optimal message set is formed from a tie-break selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MessageSetRule {
    /// Messages sent by the types of the pattern that reach the pattern's
    /// highest sender payoff. This is the rule the car-trade tables follow.
    #[default]
    PatternMaximal,
    /// Every message sent by some type of the pattern.
    Image,
}

/// Per-type argmax sets of `m -> u1(t, m, s2(m))` and the attained maxima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeBestResponse {
    pub per_type: Vec<Vec<usize>>,
    pub values: Vec<Rational>,
}

impl TypeBestResponse {
    pub fn num_selections(&self) -> usize {
        self.per_type.iter().map(Vec::len).product()
    }

    pub fn is_best(&self, t: usize, m: usize) -> bool {
        self.per_type[t].binary_search(&m).is_ok()
    }
}

pub fn type_best_messages(game: &SignalingGame, s2: &ReceiverStrategy) -> TypeBestResponse {
    let mut per_type = Vec::with_capacity(game.num_types());
    let mut values = Vec::with_capacity(game.num_types());
    for t in 0..game.num_types() {
        let payoffs: Vec<&Rational> = (0..game.num_messages())
            .map(|m| game.u1(t, m, s2.action(m)))
            .collect();
        let best = (*payoffs.iter().max().expect("message space is nonempty")).clone();
        per_type.push(
            payoffs
                .iter()
                .enumerate()
                .filter(|(_, v)| ***v == best)
                .map(|(m, _)| m)
                .collect(),
        );
        values.push(best);
    }
    TypeBestResponse { per_type, values }
}

/// One tie-break choice of the sender together with its `M*(pattern)` sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectionProfile {
    pub strategy: SenderStrategy,
    pub pattern_message_sets: Vec<MessageSet>,
}

impl SelectionProfile {
    /// Builds the profile of `strategy` given each type's attained payoff.
    pub fn new(
        strategy: SenderStrategy,
        type_values: &[Rational],
        partition: &PatternPartition,
        rule: MessageSetRule,
    ) -> Self {
        let pattern_message_sets = partition
            .blocks()
            .iter()
            .map(|block| match rule {
                MessageSetRule::Image => block.iter().map(|&t| strategy.message(t)).collect(),
                MessageSetRule::PatternMaximal => {
                    let top = block
                        .iter()
                        .map(|&t| &type_values[t])
                        .max()
                        .expect("blocks are nonempty");
                    block
                        .iter()
                        .filter(|&&t| type_values[t] == *top)
                        .map(|&t| strategy.message(t))
                        .collect()
                }
            })
            .collect();
        SelectionProfile {
            strategy,
            pattern_message_sets,
        }
    }

    /// Profile of an arbitrary sender strategy played against `receiver`.
    pub fn for_strategies(
        game: &SignalingGame,
        strategy: SenderStrategy,
        receiver: &ReceiverStrategy,
        rule: MessageSetRule,
    ) -> Self {
        let values: Vec<Rational> = (0..game.num_types())
            .map(|t| {
                let m = strategy.message(t);
                game.u1(t, m, receiver.action(m)).clone()
            })
            .collect();
        Self::new(strategy, &values, game.partition(), rule)
    }

    /// Profile that counts every message any type of a pattern sends.
    pub fn image(strategy: SenderStrategy, partition: &PatternPartition) -> Self {
        // Values are irrelevant for the image rule.
        let values = vec![Rational::zero(); partition.num_types()];
        Self::new(strategy, &values, partition, MessageSetRule::Image)
    }
}

/// All tie-break selections under the default [`MessageSetRule`].
pub fn enumerate_selections(
    br: &TypeBestResponse,
    partition: &PatternPartition,
) -> Vec<SelectionProfile> {
    enumerate_selections_with(br, partition, MessageSetRule::default())
}

/// Cartesian product of the per-type argmax sets, lexicographic with type 0
/// most significant.
pub fn enumerate_selections_with(
    br: &TypeBestResponse,
    partition: &PatternPartition,
    rule: MessageSetRule,
) -> Vec<SelectionProfile> {
    let k = br.per_type.len();
    let mut out = Vec::with_capacity(br.num_selections());
    let mut cursor = vec![0usize; k];
    loop {
        let choice = (0..k).map(|t| br.per_type[t][cursor[t]]).collect();
        out.push(SelectionProfile::new(
            SenderStrategy::new(choice),
            &br.values,
            partition,
            rule,
        ));
        // Odometer increment from the last type.
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            cursor[t] += 1;
            if cursor[t] < br.per_type[t].len() {
                break;
            }
            cursor[t] = 0;
        }
    }
}

pub fn optimal_message_set(profile: &SelectionProfile, pattern: usize) -> &MessageSet {
    &profile.pattern_message_sets[pattern]
}
