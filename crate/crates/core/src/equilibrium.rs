//! Perfect Bayesian equilibria in pure receiver strategies.
//!
//! For every receiver strategy the enumerator takes each tie-break selection of
//! the sender's best responses, derives pattern message sets, the uniform
//! message distribution and Bayes posteriors, and keeps the candidate when the
//! receiver's actions are optimal on-path and supportable by some belief
//! off-path.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::bayes::{
    conditional_message_dist, posterior_profile, ConditionalMessageDist, PosteriorProfile,
};
use crate::game::{ReceiverStrategy, SenderStrategy, SignalingGame};
use crate::lp::{find_feasible_point, Constraint, Relation};
use crate::rational::Rational;
use crate::receiver::{best_actions, worst_case_payoff, Belief};
use crate::sender::{
    enumerate_selections_with, type_best_messages, MessageSet, MessageSetRule, SelectionProfile,
};

/// Upper bound on `actions^messages` accepted by the enumerator.
pub const MAX_RECEIVER_STRATEGIES: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquilibriumError {
    #[error("{actions}^{messages} receiver strategies exceed the enumeration limit")]
    SearchSpaceTooLarge { actions: usize, messages: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    PatternSeparating,
    PatternPooling,
    SemiPooling,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::PatternSeparating => "pattern-separating",
            Classification::PatternPooling => "pattern-pooling",
            Classification::SemiPooling => "semi-pooling",
        })
    }
}

/// Separating when patterns send pairwise distinct single messages, pooling
/// when every pattern has the same message set. A one-pattern game is pooling.
pub fn classify(pattern_message_sets: &[MessageSet]) -> Classification {
    let first = &pattern_message_sets[0];
    if pattern_message_sets.len() >= 2 {
        let singles: Option<BTreeSet<usize>> = pattern_message_sets
            .iter()
            .map(|s| (s.len() == 1).then(|| *s.first().unwrap()))
            .collect();
        if singles.is_some_and(|s| s.len() == pattern_message_sets.len()) {
            return Classification::PatternSeparating;
        }
    }
    if pattern_message_sets.iter().all(|s| s == first) {
        Classification::PatternPooling
    } else {
        Classification::SemiPooling
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equilibrium {
    pub sender: SenderStrategy,
    pub receiver: ReceiverStrategy,
    pub rule: MessageSetRule,
    pub pattern_message_sets: Vec<MessageSet>,
    pub message_dist: ConditionalMessageDist,
    pub posteriors: PosteriorProfile,
    pub off_path_witnesses: BTreeMap<usize, Belief>,
    pub classification: Classification,
}

/// A belief over patterns under which `a` is among the receiver's best
/// responses to `m`, or `None` if no belief makes `a` optimal.
///
/// Point masses are tried first, in pattern order; otherwise the exact LP over
/// the belief simplex returns a vertex of the feasible region.
pub fn supporting_belief(game: &SignalingGame, m: usize, a: usize) -> Option<Belief> {
    let n = game.num_patterns();
    // worst[b][p]
    let worst: Vec<Vec<Rational>> = (0..game.num_actions())
        .map(|b| (0..n).map(|p| worst_case_payoff(game, p, m, b)).collect())
        .collect();
    for p in 0..n {
        if worst.iter().all(|row| row[p] <= worst[a][p]) {
            return Some(Belief::point_mass(n, p));
        }
    }
    let mut cons = vec![Constraint {
        coeffs: vec![Rational::one(); n],
        relation: Relation::Eq,
        rhs: Rational::one(),
    }];
    for (b, row) in worst.iter().enumerate() {
        if b != a {
            cons.push(Constraint {
                coeffs: row.iter().zip(&worst[a]).map(|(x, y)| x - y).collect(),
                relation: Relation::Le,
                rhs: Rational::zero(),
            });
        }
    }
    find_feasible_point(n, &cons).map(Belief::from_vec_unchecked)
}

pub fn enumerate_equilibria(game: &SignalingGame) -> Result<Vec<Equilibrium>, EquilibriumError> {
    enumerate_equilibria_with(game, MessageSetRule::default())
}

pub fn enumerate_equilibria_with(
    game: &SignalingGame,
    rule: MessageSetRule,
) -> Result<Vec<Equilibrium>, EquilibriumError> {
    let (j, l) = (game.num_messages(), game.num_actions());
    let count = u32::try_from(j)
        .ok()
        .and_then(|e| (l as u64).checked_pow(e))
        .filter(|&c| c <= MAX_RECEIVER_STRATEGIES)
        .ok_or(EquilibriumError::SearchSpaceTooLarge {
            actions: l,
            messages: j,
        })?;

    // support[m][a]: off-path witness for playing a after m, if any.
    let support: Vec<Vec<Option<Belief>>> = (0..j)
        .map(|m| (0..l).map(|a| supporting_belief(game, m, a)).collect())
        .collect();

    let per_strategy: Vec<Vec<Equilibrium>> = (0..count)
        .into_par_iter()
        .map(|idx| {
            let receiver = ReceiverStrategy::from_index(idx, j, l);
            candidates_for(game, &receiver, rule, &support)
        })
        .collect();
    Ok(per_strategy.into_iter().flatten().collect())
}

fn candidates_for(
    game: &SignalingGame,
    receiver: &ReceiverStrategy,
    rule: MessageSetRule,
    support: &[Vec<Option<Belief>>],
) -> Vec<Equilibrium> {
    let br = type_best_messages(game, receiver);
    let mut out = Vec::new();
    'selection: for profile in enumerate_selections_with(&br, game.partition(), rule) {
        let dist = conditional_message_dist(&profile, game);
        let posteriors = posterior_profile(game.prior(), &dist);
        for (&m, belief) in &posteriors.on_path {
            if !best_actions(game, belief, m).contains(receiver.action(m)) {
                continue 'selection;
            }
        }
        let mut witnesses = BTreeMap::new();
        for &m in &posteriors.off_path {
            match &support[m][receiver.action(m)] {
                Some(b) => {
                    witnesses.insert(m, b.clone());
                }
                None => continue 'selection,
            }
        }
        let SelectionProfile {
            strategy,
            pattern_message_sets,
        } = profile;
        out.push(Equilibrium {
            sender: strategy,
            receiver: receiver.clone(),
            rule,
            classification: classify(&pattern_message_sets),
            pattern_message_sets,
            message_dist: dist,
            posteriors,
            off_path_witnesses: witnesses,
        });
    }
    out
}

/// One failed requirement found by [`verify_equilibrium`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumViolation {
    Shape(String),
    /// A belief that is not a probability distribution over patterns.
    Normalization {
        message: usize,
        sum: Rational,
    },
    MessageSets {
        pattern: usize,
    },
    MessageDistribution {
        pattern: usize,
    },
    PathSplit,
    /// Receiver action not optimal under the stated belief.
    ReceiverNotOptimal {
        message: usize,
        action: usize,
        off_path: bool,
    },
    MissingWitness {
        message: usize,
    },
    /// A type gains by switching message.
    SenderDeviation {
        type_index: usize,
        sent: usize,
        better: usize,
    },
    BayesMismatch {
        message: usize,
    },
    Classification,
}

impl fmt::Display for EquilibriumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use EquilibriumViolation::*;
        match self {
            Shape(s) => write!(f, "malformed equilibrium: {s}"),
            Normalization { message, sum } => {
                write!(
                    f,
                    "R1: belief after message {message} sums to {sum}, not a distribution"
                )
            }
            MessageSets { pattern } => {
                write!(
                    f,
                    "R4: optimal message set of pattern {pattern} does not match the strategies"
                )
            }
            MessageDistribution { pattern } => {
                write!(
                    f,
                    "R2: message distribution row of pattern {pattern} is not uniform over its set"
                )
            }
            PathSplit => write!(
                f,
                "R5: on-path and off-path messages do not match the distribution"
            ),
            ReceiverNotOptimal {
                message,
                action,
                off_path,
            } => write!(
                f,
                "R3: action {action} is not a best response to message {message} ({})",
                if *off_path {
                    "off-path witness"
                } else {
                    "posterior"
                }
            ),
            MissingWitness { message } => {
                write!(f, "R3: off-path message {message} has no witness belief")
            }
            SenderDeviation {
                type_index,
                sent,
                better,
            } => write!(
                f,
                "R4: type {type_index} sends message {sent} but message {better} pays more"
            ),
            BayesMismatch { message } => {
                write!(
                    f,
                    "R5: posterior after message {message} violates Bayes' rule"
                )
            }
            Classification => write!(f, "classification does not match the message sets"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<EquilibriumViolation>,
}

impl VerificationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Re-derives every equilibrium requirement from the game and the two
/// strategies and lists whatever fails.
pub fn verify_equilibrium(game: &SignalingGame, eq: &Equilibrium) -> VerificationReport {
    use EquilibriumViolation as V;
    let mut out = Vec::new();
    let (k, j, l, n) = (
        game.num_types(),
        game.num_messages(),
        game.num_actions(),
        game.num_patterns(),
    );
    if eq.sender.choice.len() != k || eq.sender.choice.iter().any(|&m| m >= j) {
        out.push(V::Shape("sender strategy".into()));
    }
    if eq.receiver.choice.len() != j || eq.receiver.choice.iter().any(|&a| a >= l) {
        out.push(V::Shape("receiver strategy".into()));
    }
    if eq.pattern_message_sets.len() != n
        || eq.message_dist.num_patterns() != n
        || eq.message_dist.num_messages() != j
    {
        out.push(V::Shape("pattern tables".into()));
    }
    let beliefs = eq.posteriors.on_path.iter().chain(&eq.off_path_witnesses);
    for (&m, b) in beliefs.clone() {
        if m >= j || b.len() != n {
            out.push(V::Shape(format!("belief for message {m}")));
        }
    }
    if !out.is_empty() {
        return VerificationReport { violations: out };
    }

    // R1: every stated belief is a distribution.
    for (&m, b) in beliefs {
        if b.check().is_err() {
            out.push(V::Normalization {
                message: m,
                sum: b.probs().iter().sum(),
            });
        }
    }

    // R4: per-type optimality against the receiver strategy.
    let br = type_best_messages(game, &eq.receiver);
    for t in 0..k {
        let sent = eq.sender.message(t);
        if !br.is_best(t, sent) {
            out.push(V::SenderDeviation {
                type_index: t,
                sent,
                better: br.per_type[t][0],
            });
        }
    }
    let expected = SelectionProfile::for_strategies(game, eq.sender.clone(), &eq.receiver, eq.rule);
    for p in 0..n {
        if expected.pattern_message_sets[p] != eq.pattern_message_sets[p] {
            out.push(V::MessageSets { pattern: p });
        }
    }

    // R2: uniform mixing over the stated sets.
    let dist = ConditionalMessageDist::from_pattern_sets(&eq.pattern_message_sets, j);
    for p in 0..n {
        if dist.row(p) != eq.message_dist.row(p) {
            out.push(V::MessageDistribution { pattern: p });
        }
    }

    // R5: Bayes' rule on-path.
    let bayes = posterior_profile(game.prior(), &dist);
    if bayes.off_path != eq.posteriors.off_path
        || bayes.on_path.keys().ne(eq.posteriors.on_path.keys())
    {
        out.push(V::PathSplit);
    }
    for (m, b) in &bayes.on_path {
        if let Some(stated) = eq.posteriors.on_path.get(m) {
            if stated != b {
                out.push(V::BayesMismatch { message: *m });
            }
        }
    }

    // R3: receiver optimality, on-path under the posterior and off-path under
    // the witness.
    for m in 0..j {
        let a = eq.receiver.action(m);
        if let Some(b) = bayes.on_path.get(&m) {
            if !best_actions(game, b, m).contains(a) {
                out.push(V::ReceiverNotOptimal {
                    message: m,
                    action: a,
                    off_path: false,
                });
            }
        } else {
            match eq.off_path_witnesses.get(&m) {
                None => out.push(V::MissingWitness { message: m }),
                Some(w) if w.check().is_ok() && !best_actions(game, w, m).contains(a) => {
                    out.push(V::ReceiverNotOptimal {
                        message: m,
                        action: a,
                        off_path: true,
                    })
                }
                Some(_) => {}
            }
        }
    }

    if classify(&eq.pattern_message_sets) != eq.classification {
        out.push(V::Classification);
    }
    VerificationReport { violations: out }
}
