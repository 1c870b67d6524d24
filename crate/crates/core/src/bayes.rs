//! Pattern-level message distributions and Bayesian posteriors.
//!
//! Each pattern mixes uniformly over its optimal message set:
//! `p(m | pattern) = 1 / |M*(pattern)|` for `m` in the set and 0 otherwise.
//! Posteriors follow Bayes' rule wherever the total probability of `m` is
//! positive; other messages are off the equilibrium path.

use std::collections::{BTreeMap, BTreeSet};

use crate::game::{PatternPrior, SignalingGame};
use crate::rational::Rational;
use crate::receiver::Belief;
use crate::sender::{MessageSet, SelectionProfile};

/// `table[pattern][message]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalMessageDist {
    table: Vec<Vec<Rational>>,
}

impl ConditionalMessageDist {
    pub fn from_pattern_sets(sets: &[MessageSet], num_messages: usize) -> Self {
        let table = sets
            .iter()
            .map(|set| {
                assert!(!set.is_empty(), "optimal message sets are nonempty");
                let w = Rational::one() / Rational::from(set.len());
                (0..num_messages)
                    .map(|m| {
                        if set.contains(&m) {
                            w.clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ConditionalMessageDist { table }
    }

    pub fn prob(&self, pattern: usize, m: usize) -> &Rational {
        &self.table[pattern][m]
    }

    pub fn row(&self, pattern: usize) -> &[Rational] {
        &self.table[pattern]
    }

    pub fn num_patterns(&self) -> usize {
        self.table.len()
    }

    pub fn num_messages(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }

    /// Patterns that send `m` with positive probability.
    pub fn senders_of(&self, m: usize) -> BTreeSet<usize> {
        (0..self.table.len())
            .filter(|&p| self.table[p][m].is_positive())
            .collect()
    }
}

pub fn conditional_message_dist(
    profile: &SelectionProfile,
    game: &SignalingGame,
) -> ConditionalMessageDist {
    ConditionalMessageDist::from_pattern_sets(&profile.pattern_message_sets, game.num_messages())
}

/// Patterns whose optimal message set contains `m`. Empty when `m` is off-path.
pub fn incentive_patterns(m: usize, profile: &SelectionProfile) -> BTreeSet<usize> {
    profile
        .pattern_message_sets
        .iter()
        .enumerate()
        .filter(|(_, set)| set.contains(&m))
        .map(|(p, _)| p)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosteriorOutcome {
    OnPath(Belief),
    /// No pattern sends the message; Bayes' rule leaves the belief free.
    OffPath,
}

impl PosteriorOutcome {
    pub fn belief(&self) -> Option<&Belief> {
        match self {
            PosteriorOutcome::OnPath(b) => Some(b),
            PosteriorOutcome::OffPath => None,
        }
    }
}

pub fn posterior(
    prior: &PatternPrior,
    dist: &ConditionalMessageDist,
    m: usize,
) -> PosteriorOutcome {
    let joint: Vec<Rational> = (0..dist.num_patterns())
        .map(|p| prior.weight(p) * dist.prob(p, m))
        .collect();
    let total: Rational = joint.iter().sum();
    if total.is_zero() {
        return PosteriorOutcome::OffPath;
    }
    PosteriorOutcome::OnPath(Belief::from_vec_unchecked(
        joint.into_iter().map(|j| j / &total).collect(),
    ))
}

/// Posteriors for every message, split into on-path beliefs and off-path
/// messages.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PosteriorProfile {
    pub on_path: BTreeMap<usize, Belief>,
    pub off_path: BTreeSet<usize>,
}

pub fn posterior_profile(prior: &PatternPrior, dist: &ConditionalMessageDist) -> PosteriorProfile {
    let mut out = PosteriorProfile::default();
    for m in 0..dist.num_messages() {
        match posterior(prior, dist, m) {
            PosteriorOutcome::OnPath(b) => {
                out.on_path.insert(m, b);
            }
            PosteriorOutcome::OffPath => {
                out.off_path.insert(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{PatternPartition, SenderStrategy};
    use crate::rational::rat;

    fn sets(xs: &[&[usize]]) -> Vec<MessageSet> {
        xs.iter().map(|s| s.iter().copied().collect()).collect()
    }

    fn prior(alpha: Rational) -> PatternPrior {
        let rest = Rational::one() - &alpha;
        PatternPrior::new(vec![alpha, rest]).unwrap()
    }

    #[test]
    fn uniform_over_optimal_set() {
        let d = ConditionalMessageDist::from_pattern_sets(&sets(&[&[0, 1], &[2]]), 3);
        assert_eq!(d.row(0), &[rat(1, 2), rat(1, 2), rat(0, 1)]);
        assert_eq!(d.row(1), &[rat(0, 1), rat(0, 1), rat(1, 1)]);
        let d = ConditionalMessageDist::from_pattern_sets(&sets(&[&[0, 1, 2]]), 3);
        assert_eq!(d.row(0), &[rat(1, 3), rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn incentive_sets() {
        let part = PatternPartition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        // (m1, m2, m1) gives {m1, m2} / {m1}.
        let prof = SelectionProfile::image(SenderStrategy::new(vec![0, 1, 0]), &part);
        assert_eq!(incentive_patterns(0, &prof), BTreeSet::from([0, 1]));
        assert_eq!(incentive_patterns(1, &prof), BTreeSet::from([0]));
        assert!(incentive_patterns(2, &prof).is_empty());

        let prof = SelectionProfile::image(SenderStrategy::new(vec![1, 1, 1]), &part);
        assert_eq!(incentive_patterns(1, &prof), BTreeSet::from([0, 1]));

        let single = PatternPartition::coarsest(3);
        let prof = SelectionProfile::image(SenderStrategy::new(vec![0, 2, 2]), &single);
        assert_eq!(incentive_patterns(0, &prof), BTreeSet::from([0]));
        assert!(incentive_patterns(1, &prof).is_empty());
    }

    #[test]
    fn mixed_low_pattern_posterior() {
        let d = ConditionalMessageDist::from_pattern_sets(&sets(&[&[0, 1], &[0]]), 3);
        for (an, ad) in [(1, 4), (1, 2), (3, 4)] {
            let alpha = rat(an, ad);
            let two = rat(2, 1);
            let post = posterior(&prior(alpha.clone()), &d, 0);
            let b = post.belief().unwrap();
            assert_eq!(b.prob(0), &(&alpha / (&two - &alpha)));
            assert_eq!(b.prob(1), &((&two - &two * &alpha) / (&two - &alpha)));
            let post = posterior(&prior(alpha), &d, 1);
            assert_eq!(post.belief().unwrap().probs(), &[rat(1, 1), rat(0, 1)]);
            assert_eq!(
                posterior(&prior(rat(1, 2)), &d, 2),
                PosteriorOutcome::OffPath
            );
        }
        let b = posterior(&prior(rat(1, 2)), &d, 0);
        assert_eq!(b.belief().unwrap().probs(), &[rat(1, 3), rat(2, 3)]);
    }

    #[test]
    fn profile_splits_messages() {
        let d = ConditionalMessageDist::from_pattern_sets(&sets(&[&[1], &[2]]), 3);
        let prof = posterior_profile(&prior(rat(1, 3)), &d);
        assert_eq!(prof.off_path, BTreeSet::from([0]));
        assert_eq!(prof.on_path[&1].probs(), &[rat(1, 1), rat(0, 1)]);
        assert_eq!(prof.on_path[&2].probs(), &[rat(0, 1), rat(1, 1)]);
    }
}
