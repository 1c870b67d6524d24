//! Receiver best responses.
//!
//! The receiver scores an action by its expected value across patterns, taking
//! the worst type inside each pattern:
//! `sum over patterns of belief(p) * min over t in p of u2(t, m, a)`.

use std::fmt;

use thiserror::Error;

use crate::game::SignalingGame;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BeliefError {
    #[error("belief is empty")]
    Empty,
    #[error("belief entry {index} = {value} is outside [0, 1]")]
    OutOfRange { index: usize, value: Rational },
    #[error("belief must sum to 1, sums to {0}")]
    BadSum(Rational),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    #[error("belief intervals need exactly 2 patterns, game has {0}")]
    PatternCountNot2(usize),
}

/// A probability distribution over patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Belief {
    probs: Vec<Rational>,
}

impl Belief {
    pub fn new(probs: Vec<Rational>) -> Result<Self, BeliefError> {
        let b = Belief { probs };
        b.check()?;
        Ok(b)
    }

    /// Wraps `probs` without checking. For diagnostics and mutation tests;
    /// use [`Belief::check`] before trusting the result.
    pub fn from_vec_unchecked(probs: Vec<Rational>) -> Self {
        Belief { probs }
    }

    pub fn check(&self) -> Result<(), BeliefError> {
        if self.probs.is_empty() {
            return Err(BeliefError::Empty);
        }
        for (index, p) in self.probs.iter().enumerate() {
            if !p.is_probability() {
                return Err(BeliefError::OutOfRange {
                    index,
                    value: p.clone(),
                });
            }
        }
        let sum: Rational = self.probs.iter().sum();
        if sum != Rational::one() {
            return Err(BeliefError::BadSum(sum));
        }
        Ok(())
    }

    pub fn point_mass(num_patterns: usize, pattern: usize) -> Self {
        let mut probs = vec![Rational::zero(); num_patterns];
        probs[pattern] = Rational::one();
        Belief { probs }
    }

    /// `(p, 1 - p)` over two patterns.
    pub fn two_point(p: Rational) -> Result<Self, BeliefError> {
        let q = Rational::one() - &p;
        Belief::new(vec![p, q])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, pattern: usize) -> &Rational {
        &self.probs[pattern]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `min over t in pattern of u2(t, m, a)`.
pub fn worst_case_payoff(game: &SignalingGame, pattern: usize, m: usize, a: usize) -> Rational {
    game.partition()
        .block(pattern)
        .iter()
        .map(|&t| game.u2(t, m, a))
        .min()
        .expect("blocks are nonempty")
        .clone()
}

pub fn receiver_objective(game: &SignalingGame, belief: &Belief, m: usize, a: usize) -> Rational {
    debug_assert_eq!(belief.len(), game.num_patterns());
    belief
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(p, q)| q * worst_case_payoff(game, p, m, a))
        .sum()
}

/// The full argmax set (ascending) and the optimal value. The canonical action
/// is `actions[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestActions {
    pub actions: Vec<usize>,
    pub value: Rational,
}

impl BestActions {
    pub fn canonical(&self) -> usize {
        self.actions[0]
    }

    pub fn contains(&self, a: usize) -> bool {
        self.actions.binary_search(&a).is_ok()
    }
}

pub fn best_actions(game: &SignalingGame, belief: &Belief, m: usize) -> BestActions {
    let values: Vec<Rational> = (0..game.num_actions())
        .map(|a| receiver_objective(game, belief, m, a))
        .collect();
    argmax(&values)
}

pub(crate) fn argmax(values: &[Rational]) -> BestActions {
    let best = values
        .iter()
        .max()
        .expect("action space is nonempty")
        .clone();
    let actions = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == best)
        .map(|(a, _)| a)
        .collect();
    BestActions {
        actions,
        value: best,
    }
}

/// An interval in `[0, 1]` with open or closed ends. A single point is
/// `[x, x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Where on the belief segment an action is the canonical best response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRegion {
    pub action: usize,
    pub intervals: Vec<Interval>,
}

impl ActionRegion {
    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// For a two-pattern game, splits the belief segment `p = belief(first pattern)`
/// in `[0, 1]` into regions owned by each action's canonical best response.
///
/// Returns one region per action, in action order; some may be empty. At a
/// crossing point the lowest-index optimal action owns the point.
pub fn belief_intervals(
    game: &SignalingGame,
    m: usize,
) -> Result<Vec<ActionRegion>, IntervalError> {
    if game.num_patterns() != 2 {
        return Err(IntervalError::PatternCountNot2(game.num_patterns()));
    }
    // Each objective is the line f_a(p) = w1 + p (w0 - w1).
    let lines: Vec<(Rational, Rational)> = (0..game.num_actions())
        .map(|a| {
            let w0 = worst_case_payoff(game, 0, m, a);
            let w1 = worst_case_payoff(game, 1, m, a);
            (&w0 - &w1, w1)
        })
        .collect();
    let canonical_at = |p: &Rational| -> usize {
        let values: Vec<Rational> = lines.iter().map(|(s, c)| c + s * p).collect();
        argmax(&values).canonical()
    };

    let zero = Rational::zero();
    let one = Rational::one();
    let mut cuts = vec![zero.clone(), one.clone()];
    for (i, (si, ci)) in lines.iter().enumerate() {
        for (sj, cj) in &lines[i + 1..] {
            if si != sj {
                let x = (cj - ci) / (si - sj);
                if x > zero && x < one {
                    cuts.push(x);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    // Alternate points and open gaps: {c0}, (c0, c1), {c1}, ...
    let mut pieces: Vec<(Interval, usize)> = Vec::new();
    for (i, c) in cuts.iter().enumerate() {
        pieces.push((
            Interval {
                lo: c.clone(),
                hi: c.clone(),
                lo_closed: true,
                hi_closed: true,
            },
            canonical_at(c),
        ));
        if let Some(next) = cuts.get(i + 1) {
            let mid = (c + next) / Rational::from(2);
            pieces.push((
                Interval {
                    lo: c.clone(),
                    hi: next.clone(),
                    lo_closed: false,
                    hi_closed: false,
                },
                canonical_at(&mid),
            ));
        }
    }

    let mut merged: Vec<(Interval, usize)> = Vec::new();
    for (iv, a) in pieces {
        match merged.last_mut() {
            Some((last, la)) if *la == a => {
                last.hi = iv.hi;
                last.hi_closed = iv.hi_closed;
            }
            _ => merged.push((iv, a)),
        }
    }

    let mut regions: Vec<ActionRegion> = (0..game.num_actions())
        .map(|action| ActionRegion {
            action,
            intervals: Vec::new(),
        })
        .collect();
    for (iv, a) in merged {
        regions[a].intervals.push(iv);
    }
    Ok(regions)
}
