//! Finite signaling games in which the receiver only tells apart a partition of
//! the sender's types.
//!
//! Types, patterns, messages and actions are all addressed by dense indices in
//! declaration order. Labels are kept for display and file round-trips only.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("type space needs at least 2 types, got {0}")]
    TooFewTypes(usize),
    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("invalid game: {0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("pattern block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("type {type_index} appears in blocks {first} and {second}")]
    OverlappingBlocks {
        type_index: usize,
        first: usize,
        second: usize,
    },
    #[error("type {type_index} is not covered by any block")]
    UncoveredType { type_index: usize },
    #[error("block {block} references type {type_index}, but there are only {num_types} types")]
    TypeOutOfRange {
        block: usize,
        type_index: usize,
        num_types: usize,
    },
}

/// The sender's private types `t_1 .. t_K`, `K >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSpace {
    labels: Vec<String>,
}

impl TypeSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, GameError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(GameError::TooFewTypes(labels.len()));
        }
        check_distinct("type", &labels)?;
        Ok(TypeSpace { labels })
    }

    /// `t1 .. tK`.
    pub fn numbered(k: usize) -> Result<Self, GameError> {
        Self::new((1..=k).map(|i| format!("t{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn check_distinct(kind: &'static str, labels: &[String]) -> Result<(), GameError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(GameError::DuplicateLabel {
                kind,
                label: l.clone(),
            });
        }
    }
    Ok(())
}

/// A partition of the type space into patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPartition {
    blocks: Vec<Vec<usize>>,
    pattern_of: Vec<usize>,
}

impl PatternPartition {
    /// Validates `blocks` against a type space of `num_types` types.
    ///
    /// Type indices inside each block are sorted; block order is kept.
    pub fn new(num_types: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut owner: Vec<Option<usize>> = vec![None; num_types];
        let mut sorted = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock { block: b });
            }
            for &t in &block {
                if t >= num_types {
                    return Err(PartitionError::TypeOutOfRange {
                        block: b,
                        type_index: t,
                        num_types,
                    });
                }
                if let Some(first) = owner[t] {
                    return Err(PartitionError::OverlappingBlocks {
                        type_index: t,
                        first,
                        second: b,
                    });
                }
                owner[t] = Some(b);
            }
            let mut block = block;
            block.sort_unstable();
            sorted.push(block);
        }
        let pattern_of = owner
            .into_iter()
            .enumerate()
            .map(|(t, o)| o.ok_or(PartitionError::UncoveredType { type_index: t }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PatternPartition {
            blocks: sorted,
            pattern_of,
        })
    }

    /// Every type in its own pattern; recovers a classical signaling game.
    pub fn discrete(num_types: usize) -> Self {
        PatternPartition {
            blocks: (0..num_types).map(|t| vec![t]).collect(),
            pattern_of: (0..num_types).collect(),
        }
    }

    /// All types in one pattern.
    pub fn coarsest(num_types: usize) -> Self {
        PatternPartition {
            blocks: vec![(0..num_types).collect()],
            pattern_of: vec![0; num_types],
        }
    }

    pub fn num_patterns(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_types(&self) -> usize {
        self.pattern_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, pattern: usize) -> &[usize] {
        &self.blocks[pattern]
    }

    pub fn pattern_of(&self, type_index: usize) -> usize {
        self.pattern_of[type_index]
    }
}

/// Builds a validated partition of `types`.
pub fn make_partition(
    types: &TypeSpace,
    blocks: Vec<Vec<usize>>,
) -> Result<PatternPartition, PartitionError> {
    PatternPartition::new(types.len(), blocks)
}

pub fn discrete_partition(types: &TypeSpace) -> PatternPartition {
    PatternPartition::discrete(types.len())
}

/// Prior over patterns. Strictly positive, sums to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPrior {
    weights: Vec<Rational>,
}

impl PatternPrior {
    pub fn new(weights: Vec<Rational>) -> Result<Self, GameError> {
        let mut report = ValidationReport::default();
        check_prior(&weights, &mut report);
        if report.is_empty() {
            Ok(PatternPrior { weights })
        } else {
            Err(GameError::Invalid(report))
        }
    }

    pub fn uniform(n: usize) -> Self {
        let w = Rational::one() / Rational::from(n);
        PatternPrior {
            weights: vec![w; n],
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, pattern: usize) -> &Rational {
        &self.weights[pattern]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_prior(weights: &[Rational], report: &mut ValidationReport) {
    for (b, w) in weights.iter().enumerate() {
        if !w.is_positive() {
            report.push(Violation::NonPositiveWeight {
                block: b,
                weight: w.clone(),
            });
        }
    }
    let sum: Rational = weights.iter().sum();
    if sum != Rational::one() {
        report.push(Violation::PriorSum { sum });
    }
}

/// A payoff table indexed by `(type, message, action)`. Entries may be missing
/// while a game is being assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffTable {
    dims: (usize, usize, usize),
    entries: Vec<Option<Rational>>,
}

impl PayoffTable {
    pub fn empty(num_types: usize, num_messages: usize, num_actions: usize) -> Self {
        PayoffTable {
            dims: (num_types, num_messages, num_actions),
            entries: vec![None; num_types * num_messages * num_actions],
        }
    }

    /// A total table from a closure.
    pub fn from_fn(
        num_types: usize,
        num_messages: usize,
        num_actions: usize,
        mut f: impl FnMut(usize, usize, usize) -> Rational,
    ) -> Self {
        let mut table = Self::empty(num_types, num_messages, num_actions);
        for t in 0..num_types {
            for m in 0..num_messages {
                for a in 0..num_actions {
                    table.set(t, m, a, f(t, m, a));
                }
            }
        }
        table
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    fn offset(&self, t: usize, m: usize, a: usize) -> usize {
        let (k, j, l) = self.dims;
        assert!(
            t < k && m < j && a < l,
            "payoff index ({t},{m},{a}) out of range"
        );
        (t * j + m) * l + a
    }

    pub fn set(&mut self, t: usize, m: usize, a: usize, value: Rational) -> Option<Rational> {
        let i = self.offset(t, m, a);
        self.entries[i].replace(value)
    }

    pub fn get(&self, t: usize, m: usize, a: usize) -> Option<&Rational> {
        self.entries[self.offset(t, m, a)].as_ref()
    }

    fn missing(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let (_, j, l) = self.dims;
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(i, e)| e.is_none().then_some((i / (j * l), (i / l) % j, i % l)))
    }
}

/// The unvalidated parts of a game. [`validate_game`] reports every problem;
/// [`GameDefinition::build`] turns a clean definition into a [`SignalingGame`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDefinition {
    pub type_labels: Vec<String>,
    pub pattern_labels: Vec<String>,
    pub blocks: Vec<Vec<usize>>,
    pub prior: Vec<Rational>,
    pub message_labels: Vec<String>,
    pub action_labels: Vec<String>,
    pub u1: PayoffTable,
    pub u2: PayoffTable,
}

impl GameDefinition {
    pub fn build(self) -> Result<SignalingGame, GameError> {
        let report = validate_game(&self);
        if !report.is_empty() {
            return Err(GameError::Invalid(report));
        }
        let partition = PatternPartition::new(self.type_labels.len(), self.blocks)?;
        let dense = |t: PayoffTable| t.entries.into_iter().map(Option::unwrap).collect();
        Ok(SignalingGame {
            types: TypeSpace {
                labels: self.type_labels,
            },
            pattern_labels: self.pattern_labels,
            partition,
            prior: PatternPrior {
                weights: self.prior,
            },
            messages: self.message_labels,
            actions: self.action_labels,
            u1: dense(self.u1),
            u2: dense(self.u2),
        })
    }
}

/// One problem found by [`validate_game`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TooFewTypes(usize),
    NoMessages,
    NoActions,
    DuplicateLabel {
        kind: &'static str,
        label: String,
    },
    Partition(PartitionError),
    PatternLabelCount {
        labels: usize,
        blocks: usize,
    },
    PriorLength {
        weights: usize,
        blocks: usize,
    },
    NonPositiveWeight {
        block: usize,
        weight: Rational,
    },
    PriorSum {
        sum: Rational,
    },
    PayoffShape {
        table: &'static str,
    },
    MissingPayoff {
        table: &'static str,
        t: usize,
        m: usize,
        a: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewTypes(k) => write!(f, "need at least 2 types, got {k}"),
            Violation::NoMessages => write!(f, "message space is empty"),
            Violation::NoActions => write!(f, "action space is empty"),
            Violation::DuplicateLabel { kind, label } => {
                write!(f, "duplicate {kind} label {label:?}")
            }
            Violation::Partition(e) => write!(f, "bad partition: {e}"),
            Violation::PatternLabelCount { labels, blocks } => {
                write!(f, "{labels} pattern labels for {blocks} blocks")
            }
            Violation::PriorLength { weights, blocks } => {
                write!(f, "prior has {weights} weights for {blocks} blocks")
            }
            Violation::NonPositiveWeight { block, .. } => {
                write!(f, "p(t′)>0 violated at block {block}")
            }
            Violation::PriorSum { sum } => write!(f, "prior sums to {sum} ≠ 1"),
            Violation::PayoffShape { table } => {
                write!(f, "{table} table dimensions do not match the game")
            }
            Violation::MissingPayoff { table, t, m, a } => {
                write!(
                    f,
                    "{table} missing entry for (type {t}, message {m}, action {a})"
                )
            }
        }
    }
}

/// All violations found in a [`GameDefinition`]; empty iff the game is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

pub fn validate_game(def: &GameDefinition) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = def.type_labels.len();
    let j = def.message_labels.len();
    let l = def.action_labels.len();
    if k < 2 {
        report.push(Violation::TooFewTypes(k));
    }
    if j == 0 {
        report.push(Violation::NoMessages);
    }
    if l == 0 {
        report.push(Violation::NoActions);
    }
    for (kind, labels) in [
        ("type", &def.type_labels),
        ("pattern", &def.pattern_labels),
        ("message", &def.message_labels),
        ("action", &def.action_labels),
    ] {
        if let Err(GameError::DuplicateLabel { kind, label }) = check_distinct(kind, labels) {
            report.push(Violation::DuplicateLabel { kind, label });
        }
    }
    if let Err(e) = PatternPartition::new(k, def.blocks.clone()) {
        report.push(Violation::Partition(e));
    }
    if def.pattern_labels.len() != def.blocks.len() {
        report.push(Violation::PatternLabelCount {
            labels: def.pattern_labels.len(),
            blocks: def.blocks.len(),
        });
    }
    if def.prior.len() != def.blocks.len() {
        report.push(Violation::PriorLength {
            weights: def.prior.len(),
            blocks: def.blocks.len(),
        });
    }
    check_prior(&def.prior, &mut report);
    for (name, table) in [("u1", &def.u1), ("u2", &def.u2)] {
        if table.dims() != (k, j, l) {
            report.push(Violation::PayoffShape { table: name });
            continue;
        }
        for (t, m, a) in table.missing() {
            report.push(Violation::MissingPayoff {
                table: name,
                t,
                m,
                a,
            });
        }
    }
    report
}

/// A validated signaling game with pattern recognition. Immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalingGame {
    types: TypeSpace,
    pattern_labels: Vec<String>,
    partition: PatternPartition,
    prior: PatternPrior,
    messages: Vec<String>,
    actions: Vec<String>,
    u1: Vec<Rational>,
    u2: Vec<Rational>,
}

impl SignalingGame {
    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_patterns(&self) -> usize {
        self.partition.num_patterns()
    }

    pub fn num_messages(&self) -> usize {
        self.messages.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn types(&self) -> &TypeSpace {
        &self.types
    }

    pub fn partition(&self) -> &PatternPartition {
        &self.partition
    }

    pub fn prior(&self) -> &PatternPrior {
        &self.prior
    }

    pub fn type_label(&self, t: usize) -> &str {
        &self.types.labels[t]
    }

    pub fn pattern_label(&self, p: usize) -> &str {
        &self.pattern_labels[p]
    }

    pub fn pattern_labels(&self) -> &[String] {
        &self.pattern_labels
    }

    pub fn message_label(&self, m: usize) -> &str {
        &self.messages[m]
    }

    pub fn message_labels(&self) -> &[String] {
        &self.messages
    }

    pub fn action_label(&self, a: usize) -> &str {
        &self.actions[a]
    }

    pub fn action_labels(&self) -> &[String] {
        &self.actions
    }

    pub fn message_index(&self, label: &str) -> Option<usize> {
        self.messages.iter().position(|l| l == label)
    }

    pub fn action_index(&self, label: &str) -> Option<usize> {
        self.actions.iter().position(|l| l == label)
    }

    fn offset(&self, t: usize, m: usize, a: usize) -> usize {
        (t * self.messages.len() + m) * self.actions.len() + a
    }

    /// Sender payoff.
    pub fn u1(&self, t: usize, m: usize, a: usize) -> &Rational {
        &self.u1[self.offset(t, m, a)]
    }

    /// Receiver payoff.
    pub fn u2(&self, t: usize, m: usize, a: usize) -> &Rational {
        &self.u2[self.offset(t, m, a)]
    }

    /// Back to an editable definition, e.g. to perturb payoffs in tests.
    pub fn to_definition(&self) -> GameDefinition {
        let (k, j, l) = (self.num_types(), self.num_messages(), self.num_actions());
        GameDefinition {
            type_labels: self.types.labels.clone(),
            pattern_labels: self.pattern_labels.clone(),
            blocks: self.partition.blocks.clone(),
            prior: self.prior.weights.clone(),
            message_labels: self.messages.clone(),
            action_labels: self.actions.clone(),
            u1: PayoffTable::from_fn(k, j, l, |t, m, a| self.u1(t, m, a).clone()),
            u2: PayoffTable::from_fn(k, j, l, |t, m, a| self.u2(t, m, a).clone()),
        }
    }

    /// Same game, different partition and prior; labels become `p1 .. pN`.
    pub fn with_partition(
        &self,
        partition: PatternPartition,
        prior: PatternPrior,
    ) -> Result<SignalingGame, GameError> {
        let mut def = self.to_definition();
        def.pattern_labels = (1..=partition.num_patterns())
            .map(|i| format!("p{i}"))
            .collect();
        def.blocks = partition.blocks;
        def.prior = prior.weights;
        def.build()
    }
}

/// Pure sender strategy: one message per type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SenderStrategy {
    pub choice: Vec<usize>,
}

impl SenderStrategy {
    pub fn new(choice: Vec<usize>) -> Self {
        SenderStrategy { choice }
    }

    pub fn message(&self, t: usize) -> usize {
        self.choice[t]
    }
}

/// Pure receiver strategy: one action per message.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReceiverStrategy {
    pub choice: Vec<usize>,
}

impl ReceiverStrategy {
    pub fn new(choice: Vec<usize>) -> Self {
        ReceiverStrategy { choice }
    }

    pub fn action(&self, m: usize) -> usize {
        self.choice[m]
    }

    /// The `index`-th strategy among all `num_actions^num_messages`, ordered
    /// lexicographically with the first message most significant.
    pub fn from_index(mut index: u64, num_messages: usize, num_actions: usize) -> Self {
        let mut choice = vec![0; num_messages];
        for slot in choice.iter_mut().rev() {
            *slot = (index % num_actions as u64) as usize;
            index /= num_actions as u64;
        }
        ReceiverStrategy { choice }
    }
}
