//! Brute-force reference implementations used to cross-check the solver.
//!
//! Nothing here calls into the solver modules: objectives are evaluated by
//! literal loops, equilibria are checked pair by pair, and off-path beliefs are
//! found by search rather than linear programming. Expect it to be slow.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::game::{ReceiverStrategy, SenderStrategy, SignalingGame};
use crate::rational::Rational;
use crate::receiver::Belief;
use crate::sender::MessageSetRule;

/// Largest grid denominator for off-path belief search, by number of patterns.
pub fn grid_denominator_bound(num_patterns: usize) -> usize {
    match num_patterns {
        0..=2 => 64,
        3 => 32,
        4 => 12,
        _ => 6,
    }
}

fn objective(game: &SignalingGame, probs: &[Rational], m: usize, a: usize) -> Rational {
    let mut total = Rational::zero();
    for (p, q) in probs.iter().enumerate() {
        let mut worst: Option<&Rational> = None;
        for t in 0..game.num_types() {
            if game.partition().pattern_of(t) == p {
                let v = game.u2(t, m, a);
                if worst.is_none_or(|w| v < w) {
                    worst = Some(v);
                }
            }
        }
        total = total + q * worst.expect("pattern has a type");
    }
    total
}

/// Exact argmax set of the receiver objective, by exhaustive evaluation.
pub fn oracle_best_action(game: &SignalingGame, belief: &Belief, m: usize) -> BTreeSet<usize> {
    let values: Vec<Rational> = (0..game.num_actions())
        .map(|a| objective(game, belief.probs(), m, a))
        .collect();
    let mut best = BTreeSet::new();
    for a in 0..values.len() {
        if values.iter().all(|v| v <= &values[a]) {
            best.insert(a);
        }
    }
    best
}

/// Searches the belief simplex for a point where action `target` scores at
/// least as well as every other action. `values[a][p]` is the score of action
/// `a` under a point mass on pattern `p`.
///
/// Tries simplex vertices, then a rational grid, then every vertex of the
/// arrangement cut out by the simplex facets and the pairwise indifference
/// hyperplanes. The last step makes the search exact.
pub fn search_supporting_belief(values: &[Vec<Rational>], target: usize) -> Option<Vec<Rational>> {
    let n = values[target].len();
    let ok = |q: &[Rational]| -> bool {
        let score = |a: usize| -> Rational { values[a].iter().zip(q).map(|(v, w)| v * w).sum() };
        let mine = score(target);
        (0..values.len()).all(|b| score(b) <= mine)
    };

    for p in 0..n {
        let mut q = vec![Rational::zero(); n];
        q[p] = Rational::one();
        if ok(&q) {
            return Some(q);
        }
    }

    let bound = grid_denominator_bound(n);
    for d in 1..=bound {
        let mut parts = vec![0usize; n];
        if let Some(q) = scan_compositions(&mut parts, 0, d, d, &ok) {
            return Some(q);
        }
    }

    // Hyperplanes h.q = 0: coordinate facets and indifference with each rival.
    let mut planes: Vec<Vec<Rational>> = (0..n)
        .map(|p| {
            let mut h = vec![Rational::zero(); n];
            h[p] = Rational::one();
            h
        })
        .collect();
    for (b, row) in values.iter().enumerate() {
        if b != target {
            planes.push(
                row.iter()
                    .zip(&values[target])
                    .map(|(x, y)| x - y)
                    .collect(),
            );
        }
    }
    let mut chosen = Vec::new();
    arrangement_vertices(&planes, n, 0, &mut chosen, &ok)
}

fn scan_compositions(
    parts: &mut Vec<usize>,
    idx: usize,
    remaining: usize,
    d: usize,
    ok: &dyn Fn(&[Rational]) -> bool,
) -> Option<Vec<Rational>> {
    let n = parts.len();
    if idx == n - 1 {
        parts[idx] = remaining;
        let den = Rational::from(d);
        let q: Vec<Rational> = parts.iter().map(|&k| Rational::from(k) / &den).collect();
        return ok(&q).then_some(q);
    }
    for k in 0..=remaining {
        parts[idx] = k;
        if let Some(q) = scan_compositions(parts, idx + 1, remaining - k, d, ok) {
            return Some(q);
        }
    }
    None
}

fn arrangement_vertices(
    planes: &[Vec<Rational>],
    n: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    ok: &dyn Fn(&[Rational]) -> bool,
) -> Option<Vec<Rational>> {
    if chosen.len() + 1 == n {
        let mut rows: Vec<Vec<Rational>> = vec![{
            let mut r = vec![Rational::one(); n];
            r.push(Rational::one());
            r
        }];
        for &i in chosen.iter() {
            let mut r = planes[i].clone();
            r.push(Rational::zero());
            rows.push(r);
        }
        let q = solve_unique(rows)?;
        return (q.iter().all(|x| !x.is_negative()) && ok(&q)).then_some(q);
    }
    for i in start..planes.len() {
        chosen.push(i);
        let found = arrangement_vertices(planes, n, i + 1, chosen, ok);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Gauss-Jordan on an augmented square system; `None` unless the solution is
/// unique.
fn solve_unique(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip()?;
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&f * p);
                }
            }
        }
    }
    Some(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Why the oracle turned a strategy pair down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// `type_index` earns strictly more by sending `deviation`.
    SenderDeviation {
        type_index: usize,
        deviation: usize,
    },
    ReceiverOnPath {
        message: usize,
    },
    NoOffPathBelief {
        message: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Accepted {
        posteriors: BTreeMap<usize, Vec<Rational>>,
        off_path_witnesses: BTreeMap<usize, Vec<Rational>>,
    },
    Rejected(Rejection),
}

impl OracleVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, OracleVerdict::Accepted { .. })
    }
}

type WitnessCache = HashMap<(usize, usize), Option<Vec<Rational>>>;

/// Reference equilibrium checker for one game, caching off-path searches.
pub struct PbeOracle<'g> {
    game: &'g SignalingGame,
    rule: MessageSetRule,
    off_path: RefCell<WitnessCache>,
}

impl<'g> PbeOracle<'g> {
    pub fn new(game: &'g SignalingGame, rule: MessageSetRule) -> Self {
        PbeOracle {
            game,
            rule,
            off_path: RefCell::new(HashMap::new()),
        }
    }

    fn off_path_belief(&self, m: usize, a: usize) -> Option<Vec<Rational>> {
        if let Some(hit) = self.off_path.borrow().get(&(m, a)) {
            return hit.clone();
        }
        let g = self.game;
        let n = g.num_patterns();
        let values: Vec<Vec<Rational>> = (0..g.num_actions())
            .map(|b| {
                (0..n)
                    .map(|p| {
                        let mut e = vec![Rational::zero(); n];
                        e[p] = Rational::one();
                        objective(g, &e, m, b)
                    })
                    .collect()
            })
            .collect();
        let found = search_supporting_belief(&values, a);
        self.off_path.borrow_mut().insert((m, a), found.clone());
        found
    }

    pub fn check(&self, sender: &SenderStrategy, receiver: &ReceiverStrategy) -> OracleVerdict {
        let g = self.game;
        let (k, j, n) = (g.num_types(), g.num_messages(), g.num_patterns());

        let mut earned = Vec::with_capacity(k);
        for t in 0..k {
            let sent = sender.choice[t];
            let mine = g.u1(t, sent, receiver.choice[sent]);
            for m in 0..j {
                if g.u1(t, m, receiver.choice[m]) > mine {
                    return OracleVerdict::Rejected(Rejection::SenderDeviation {
                        type_index: t,
                        deviation: m,
                    });
                }
            }
            earned.push(mine.clone());
        }

        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (p, set) in sets.iter_mut().enumerate() {
            let members: Vec<usize> = (0..k)
                .filter(|&t| g.partition().pattern_of(t) == p)
                .collect();
            let top = members.iter().map(|&t| &earned[t]).max().unwrap();
            for &t in &members {
                let keep = match self.rule {
                    MessageSetRule::Image => true,
                    MessageSetRule::PatternMaximal => earned[t] == *top,
                };
                if keep {
                    set.insert(sender.choice[t]);
                }
            }
        }

        let mut posteriors = BTreeMap::new();
        let mut witnesses = BTreeMap::new();
        for m in 0..j {
            let joint: Vec<Rational> = (0..n)
                .map(|p| {
                    if sets[p].contains(&m) {
                        g.prior().weight(p) / Rational::from(sets[p].len())
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let total: Rational = joint.iter().sum();
            let a = receiver.choice[m];
            if total.is_positive() {
                let post: Vec<Rational> = joint.iter().map(|x| x / &total).collect();
                let belief = Belief::from_vec_unchecked(post.clone());
                if !oracle_best_action(g, &belief, m).contains(&a) {
                    return OracleVerdict::Rejected(Rejection::ReceiverOnPath { message: m });
                }
                posteriors.insert(m, post);
            } else {
                match self.off_path_belief(m, a) {
                    Some(q) => {
                        witnesses.insert(m, q);
                    }
                    None => {
                        return OracleVerdict::Rejected(Rejection::NoOffPathBelief { message: m })
                    }
                }
            }
        }
        OracleVerdict::Accepted {
            posteriors,
            off_path_witnesses: witnesses,
        }
    }

    /// Every `(sender, receiver)` pair the oracle accepts, over all
    /// `messages^types * actions^messages` pairs.
    pub fn accepted_pairs(&self) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
        let g = self.game;
        let (k, j, l) = (g.num_types(), g.num_messages(), g.num_actions());
        let mut out = BTreeSet::new();
        for receiver in all_profiles(j, l) {
            let receiver = ReceiverStrategy::new(receiver);
            for sender in all_profiles(k, j) {
                let sender = SenderStrategy::new(sender);
                if self.check(&sender, &receiver).is_accepted() {
                    out.insert((sender.choice, receiver.choice.clone()));
                }
            }
        }
        out
    }
}

fn all_profiles(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..base).map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// One-shot check with the default message-set rule.
pub fn oracle_pbe_check(
    game: &SignalingGame,
    sender: &SenderStrategy,
    receiver: &ReceiverStrategy,
) -> OracleVerdict {
    PbeOracle::new(game, MessageSetRule::default()).check(sender, receiver)
}
