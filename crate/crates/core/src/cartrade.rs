//! The second-hand car trade: three seller types, two buyer-visible patterns
//! (`{t1, t2}` and `{t3}`), three bids and a buy/no-buy decision.
//!
//! Index conventions: types `t1..t3`, messages `m1..m3` (bids) and actions
//! `a1` (do not buy) / `a2` (buy) are 0-based in the order written. Costs are
//! stored as `[c12, c13, c23]`, where `cij` is what type `ti` pays to pose as
//! `tj`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::bayes::{conditional_message_dist, posterior_profile};
use crate::game::{GameDefinition, GameError, PayoffTable, ReceiverStrategy, SignalingGame};
use crate::rational::Rational;
use crate::receiver::{best_actions, Belief};
use crate::sender::{enumerate_selections, type_best_messages, MessageSet, SelectionProfile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CarTradeError {
    #[error("invalid car-trade parameters: {0} does not hold")]
    InvalidParams(&'static str),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarTradeParams {
    /// `V1 < V2 < V3`: what each type of car is worth to the buyer.
    pub values: [Rational; 3],
    /// `m1 < m2 < m3`.
    pub bids: [Rational; 3],
    /// `[c12, c13, c23]`.
    pub costs: [Rational; 3],
    /// Prior weight of the low pattern `{t1, t2}`.
    pub alpha: Rational,
}

impl CarTradeParams {
    /// V = (2, 5, 10), bids (3, 6, 9), costs c12 = 2, c13 = 8, c23 = 4, alpha 1/2.
    pub fn reference() -> Self {
        let r = Rational::from_integer;
        CarTradeParams {
            values: [r(2), r(5), r(10)],
            bids: [r(3), r(6), r(9)],
            costs: [r(2), r(8), r(4)],
            alpha: Rational::new(1, 2).unwrap(),
        }
    }

    pub fn c12(&self) -> &Rational {
        &self.costs[0]
    }

    pub fn c13(&self) -> &Rational {
        &self.costs[1]
    }

    pub fn c23(&self) -> &Rational {
        &self.costs[2]
    }

    /// Cost for type `k` to send bid `j`; zero unless `j > k`.
    pub fn cost(&self, k: usize, j: usize) -> Rational {
        match (k, j) {
            (0, 1) => self.costs[0].clone(),
            (0, 2) => self.costs[1].clone(),
            (1, 2) => self.costs[2].clone(),
            _ => Rational::zero(),
        }
    }

    pub fn validate(&self) -> Result<(), CarTradeError> {
        let [v1, v2, v3] = &self.values;
        let [m1, m2, m3] = &self.bids;
        let [c12, c13, c23] = &self.costs;
        let zero = Rational::zero();
        let checks: [(bool, &'static str); 12] = [
            (m1 > &zero, "m1 > 0"),
            (m2 > m1, "m2 > m1"),
            (m3 > m2, "m3 > m2"),
            (v1 > &zero, "V1 > 0"),
            (v2 > v1, "V2 > V1"),
            (v3 > v2, "V3 > V2"),
            (c12 > &zero, "c12 > 0"),
            (c13 > c12, "c13 > c12"),
            (c23 > &zero, "c23 > 0"),
            (c13 > c23, "c13 > c23"),
            (self.alpha > zero, "alpha > 0"),
            (self.alpha < Rational::one(), "alpha < 1"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, name)) => Err(CarTradeError::InvalidParams(name)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for CarTradeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [v1, v2, v3] = &self.values;
        let [m1, m2, m3] = &self.bids;
        write!(
            f,
            "V = ({v1}, {v2}, {v3}), bids = ({m1}, {m2}, {m3}), c12 = {}, c13 = {}, c23 = {}, alpha = {}",
            self.c12(),
            self.c13(),
            self.c23(),
            self.alpha
        )
    }
}

pub fn build_cartrade_game(p: &CarTradeParams) -> Result<SignalingGame, CarTradeError> {
    p.validate()?;
    let u1 = PayoffTable::from_fn(3, 3, 2, |k, j, a| {
        let paid = if a == 1 {
            p.bids[j].clone()
        } else {
            Rational::zero()
        };
        paid - p.cost(k, j)
    });
    let u2 = PayoffTable::from_fn(3, 3, 2, |k, j, a| {
        if a == 1 {
            &p.values[k] - &p.bids[j]
        } else {
            Rational::zero()
        }
    });
    let labels = |prefix: &str, n: usize| (1..=n).map(|i| format!("{prefix}{i}")).collect();
    let def = GameDefinition {
        type_labels: labels("t", 3),
        pattern_labels: vec!["t'1".into(), "t'2".into()],
        blocks: vec![vec![0, 1], vec![2]],
        prior: vec![p.alpha.clone(), Rational::one() - &p.alpha],
        message_labels: labels("m", 3),
        action_labels: labels("a", 2),
        u1,
        u2,
    };
    Ok(def.build()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    /// Before clamping; may fall outside `[0, 1]`.
    pub raw: Rational,
    pub clamped: Rational,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.raw == self.clamped {
            write!(f, "{}", self.clamped)
        } else {
            write!(f, "{} (raw {})", self.clamped, self.raw)
        }
    }
}

/// Belief in the low pattern at which the buyer stops buying at each bid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thresholds {
    pub rho: Threshold,
    pub sigma: Threshold,
    pub lambda: Threshold,
}

impl Thresholds {
    pub fn all(&self) -> [&Threshold; 3] {
        [&self.rho, &self.sigma, &self.lambda]
    }

    pub fn clamped(&self) -> [Rational; 3] {
        self.all().map(|t| t.clamped.clone())
    }

    pub fn raw(&self) -> [Rational; 3] {
        self.all().map(|t| t.raw.clone())
    }
}

/// `(V3 - m_j) / (V3 - V1)` for each bid.
pub fn thresholds(p: &CarTradeParams) -> Thresholds {
    let [v1, _, v3] = &p.values;
    let span = v3 - v1;
    let (zero, one) = (Rational::zero(), Rational::one());
    let make = |m: &Rational| {
        let raw = (v3 - m) / &span;
        let clamped = raw.clamp_to(&zero, &one);
        Threshold { raw, clamped }
    };
    Thresholds {
        rho: make(&p.bids[0]),
        sigma: make(&p.bids[1]),
        lambda: make(&p.bids[2]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZoneId {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    D8,
}

impl ZoneId {
    pub const ALL: [ZoneId; 8] = [
        ZoneId::D1,
        ZoneId::D2,
        ZoneId::D3,
        ZoneId::D4,
        ZoneId::D5,
        ZoneId::D6,
        ZoneId::D7,
        ZoneId::D8,
    ];

    /// Bit 2: `rho < rho0`, bit 1: `sigma < sigma0`, bit 0: `lambda < lambda0`.
    fn bits(self) -> usize {
        self as usize
    }

    fn from_bits(bits: usize) -> ZoneId {
        ZoneId::ALL[bits]
    }

    /// Whether the buyer buys (`a2`) at each bid.
    pub fn buys(self) -> [bool; 3] {
        let b = self.bits();
        [b & 4 != 0, b & 2 != 0, b & 1 != 0]
    }
}

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.bits() + 1)
    }
}

/// A belief at or above its threshold falls on the no-buy side.
pub fn zone_classify(beliefs: &[Rational; 3], p: &CarTradeParams) -> ZoneId {
    let raw = thresholds(p).raw();
    let bits = (0..3).fold(0, |acc, i| (acc << 1) | usize::from(beliefs[i] < raw[i]));
    ZoneId::from_bits(bits)
}

pub fn zone_receiver_strategy(z: ZoneId) -> ReceiverStrategy {
    ReceiverStrategy::new(z.buys().iter().map(|&b| usize::from(b)).collect())
}

/// A belief triple strictly inside the zone, or `None` when clamping leaves
/// the zone without interior.
pub fn zone_interior_belief(z: ZoneId, p: &CarTradeParams) -> Option<[Rational; 3]> {
    let raw = thresholds(p).raw();
    let (zero, one) = (Rational::zero(), Rational::one());
    let two = Rational::from_integer(2);
    let mut out = Vec::with_capacity(3);
    for (buy, r) in z.buys().into_iter().zip(&raw) {
        if buy {
            if !r.is_positive() {
                return None;
            }
            out.push(r.clamp_to(&zero, &one) / &two);
        } else {
            if r >= &one {
                return None;
            }
            out.push((r.clamp_to(&zero, &one) + &one) / &two);
        }
    }
    Some([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// One expected tie-break selection: the bid of each type and `M*` of each
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpectedSelection {
    pub messages: [usize; 3],
    pub sets: [MessageSet; 2],
}

impl ExpectedSelection {
    fn new(messages: [usize; 3], low: &[usize], high: &[usize]) -> Self {
        ExpectedSelection {
            messages,
            sets: [
                low.iter().copied().collect(),
                high.iter().copied().collect(),
            ],
        }
    }

    pub fn from_profile(profile: &SelectionProfile) -> Self {
        let c = &profile.strategy.choice;
        ExpectedSelection {
            messages: [c[0], c[1], c[2]],
            sets: [
                profile.pattern_message_sets[0].clone(),
                profile.pattern_message_sets[1].clone(),
            ],
        }
    }
}

impl fmt::Display for ExpectedSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.messages;
        write!(
            f,
            "m* = (m{}, m{}, m{})  M* = {} / {}",
            a + 1,
            b + 1,
            c + 1,
            fmt_set(&self.sets[0]),
            fmt_set(&self.sets[1])
        )
    }
}

pub fn fmt_set(set: &MessageSet) -> String {
    let inner: Vec<String> = set.iter().map(|m| format!("m{}", m + 1)).collect();
    format!("{{{}}}", inner.join(", "))
}

/// The sender regime a zone falls into for given costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderCase {
    pub zone: ZoneId,
    /// `'a'`, `'b'`, ... in the order the regimes are listed per zone.
    pub regime: char,
    pub condition: &'static str,
    /// The hand-derived table for the regime, kept as written even where it is
    /// incomplete or off in a sub-case.
    pub tabulated: Vec<ExpectedSelection>,
    /// What the game actually yields; differs from `tabulated` only where a
    /// note explains why.
    pub expected: Vec<ExpectedSelection>,
    pub notes: Vec<String>,
}

/// Cost regimes per zone, as `(label, condition)`.
pub fn sender_regimes(z: ZoneId) -> &'static [(char, &'static str)] {
    match z {
        ZoneId::D1 => &[('a', "any costs")],
        ZoneId::D2 => &[
            ('a', "0 < c13 < m3"),
            ('b', "c13 >= m3, c23 < m3"),
            ('c', "c13 >= m3, c23 >= m3"),
        ],
        ZoneId::D3 => &[('a', "c12 < m2"), ('b', "c12 >= m2")],
        ZoneId::D4 => &[
            ('a', "c12 >= m2, c13 >= m3, c23 >= m3 - m2"),
            ('b', "c12 >= m2, c13 >= m3, c23 < m3 - m2"),
            ('c', "c12 < m2, c13 - c12 >= m3 - m2, c23 >= m3 - m2"),
            ('d', "c12 < m2, c13 - c12 >= m3 - m2, c23 < m3 - m2"),
            ('e', "c13 < m3, c13 - c12 < m3 - m2, c23 >= m3 - m2"),
            ('f', "c13 < m3, c13 - c12 < m3 - m2, c23 < m3 - m2"),
        ],
        ZoneId::D5 => &[('a', "any costs")],
        ZoneId::D6 => &[
            ('a', "c23 >= m3 - m1"),
            ('b', "c23 < m3 - m1 <= c13"),
            ('c', "c13 < m3 - m1"),
        ],
        ZoneId::D7 => &[('a', "c12 >= m2 - m1"), ('b', "c12 < m2 - m1")],
        ZoneId::D8 => &[
            ('a', "c12 >= m2 - m1, c13 >= m3 - m1, c23 >= m3 - m2"),
            ('b', "c12 >= m2 - m1, c13 >= m3 - m1, c23 < m3 - m2"),
            ('c', "c12 < m2 - m1, c13 - c12 >= m3 - m2, c23 >= m3 - m2"),
            ('d', "c12 < m2 - m1, c13 - c12 >= m3 - m2, c23 < m3 - m2"),
            ('e', "c13 < m3 - m1, c13 - c12 < m3 - m2, c23 >= m3 - m2"),
            ('f', "c13 < m3 - m1, c13 - c12 < m3 - m2, c23 < m3 - m2"),
        ],
    }
}

/// True when costs sit exactly on a line separating two regimes, where extra
/// ties make the argmax sets larger than any single regime predicts.
pub fn on_cost_boundary(p: &CarTradeParams) -> bool {
    let [m1, m2, m3] = &p.bids;
    let (c12, c13, c23) = (p.c12(), p.c13(), p.c23());
    let gap = c13 - c12;
    let cuts: [(&Rational, Rational); 9] = [
        (c13, m3.clone()),
        (c23, m3.clone()),
        (c12, m2.clone()),
        (c23, m3 - m2),
        (&gap, m3 - m2),
        (c23, m3 - m1),
        (c13, m3 - m1),
        (c12, m2 - m1),
        (c13, m3 - m2),
    ];
    cuts.iter().any(|(x, y)| *x == y)
}

pub fn zone_sender_cases(z: ZoneId, p: &CarTradeParams) -> SenderCase {
    use ExpectedSelection as S;
    let [m1, m2, m3] = &p.bids;
    let (c12, c13, c23) = (p.c12(), p.c13(), p.c23());
    let (m1_, m2_, m3_) = (0, 1, 2);
    let mut notes = Vec::new();

    let (regime, tabulated, expected): (char, Vec<S>, Option<Vec<S>>) = match z {
        ZoneId::D1 => {
            let listed = vec![
                S::new([m1_, m1_, m1_], &[m1_], &[m1_]),
                S::new([m1_, m1_, m2_], &[m1_], &[m2_]),
                S::new([m1_, m2_, m1_], &[m1_, m2_], &[m1_]),
                S::new([m1_, m2_, m2_], &[m1_, m2_], &[m2_]),
                S::new([m1_, m2_, m3_], &[m1_, m2_], &[m3_]),
            ];
            let mut all = listed.clone();
            all.push(S::new([m1_, m1_, m3_], &[m1_], &[m3_]));
            notes.push(
                "selection m* = (m1, m1, m3) with M* = {m1} / {m3} is a valid tie-break \
                 but missing from the tabulated list"
                    .to_string(),
            );
            ('a', listed, Some(all))
        }
        ZoneId::D2 => {
            notes.push(
                "the sub-case 0 < c13 < m3 with c23 >= m3 cannot occur since c13 > c23; \
                 the summary M* = {m3} for 0 < c13 < m3 therefore stands"
                    .to_string(),
            );
            if c13 < m3 {
                ('a', vec![S::new([m3_, m3_, m3_], &[m3_], &[m3_])], None)
            } else if c23 < m3 {
                ('b', vec![S::new([m1_, m3_, m3_], &[m3_], &[m3_])], None)
            } else {
                (
                    'c',
                    vec![
                        S::new([m1_, m1_, m3_], &[m1_], &[m3_]),
                        S::new([m1_, m2_, m3_], &[m1_, m2_], &[m3_]),
                    ],
                    None,
                )
            }
        }
        ZoneId::D3 => {
            if c12 < m2 {
                ('a', vec![S::new([m2_, m2_, m2_], &[m2_], &[m2_])], None)
            } else {
                ('b', vec![S::new([m1_, m2_, m2_], &[m2_], &[m2_])], None)
            }
        }
        ZoneId::D4 => {
            let low_c23 = c23 < &(m3 - m2);
            if c12 >= m2 && c13 >= m3 {
                if !low_c23 {
                    ('a', vec![S::new([m1_, m2_, m3_], &[m2_], &[m3_])], None)
                } else {
                    ('b', vec![S::new([m1_, m3_, m3_], &[m3_], &[m3_])], None)
                }
            } else if c12 < m2 && (c13 - c12) >= (m3 - m2) {
                if !low_c23 {
                    ('c', vec![S::new([m2_, m2_, m3_], &[m2_], &[m3_])], None)
                } else {
                    ('d', vec![S::new([m2_, m3_, m3_], &[m3_], &[m3_])], None)
                }
            } else if !low_c23 {
                let listed = if (m3 - m2) >= *c13 {
                    S::new([m3_, m2_, m3_], &[m3_], &[m3_])
                } else {
                    S::new([m3_, m2_, m3_], &[m2_], &[m3_])
                };
                let actual = mixed_top_bid(p);
                if actual != listed {
                    notes.push(
                        "c13 = m3 - m2 exactly: t1 and t2 earn the same, so both bids \
                         enter M*(t'1)"
                            .to_string(),
                    );
                }
                ('e', vec![listed], Some(vec![actual]))
            } else {
                ('f', vec![S::new([m3_, m3_, m3_], &[m3_], &[m3_])], None)
            }
        }
        ZoneId::D5 => ('a', vec![S::new([m1_, m1_, m1_], &[m1_], &[m1_])], None),
        ZoneId::D6 => {
            if c23 >= &(m3 - m1) {
                ('a', vec![S::new([m1_, m1_, m3_], &[m1_], &[m3_])], None)
            } else if c13 >= &(m3 - m1) {
                ('b', vec![S::new([m1_, m3_, m3_], &[m3_], &[m3_])], None)
            } else {
                ('c', vec![S::new([m3_, m3_, m3_], &[m3_], &[m3_])], None)
            }
        }
        ZoneId::D7 => {
            if c12 >= &(m2 - m1) {
                ('a', vec![S::new([m1_, m2_, m2_], &[m2_], &[m2_])], None)
            } else {
                ('b', vec![S::new([m2_, m2_, m2_], &[m2_], &[m2_])], None)
            }
        }
        ZoneId::D8 => {
            let low_c23 = c23 < &(m3 - m2);
            if c12 >= &(m2 - m1) && c13 >= &(m3 - m1) {
                if !low_c23 {
                    ('a', vec![S::new([m1_, m2_, m3_], &[m2_], &[m3_])], None)
                } else {
                    ('b', vec![S::new([m1_, m3_, m3_], &[m3_], &[m3_])], None)
                }
            } else if c12 < &(m2 - m1) && (c13 - c12) >= (m3 - m2) {
                if !low_c23 {
                    ('c', vec![S::new([m2_, m2_, m3_], &[m2_], &[m3_])], None)
                } else {
                    ('d', vec![S::new([m2_, m3_, m3_], &[m3_], &[m3_])], None)
                }
            } else if !low_c23 {
                let listed = S::new([m3_, m2_, m3_], &[m2_], &[m3_]);
                let actual = mixed_top_bid(p);
                if actual != listed {
                    notes.push(format!(
                        "tabulated M*(t'1) = {{m2}} needs c13 > m3 - m2; here t1 earns \
                         m3 - c13 = {} against m2 = {} for t2, so M*(t'1) = {}",
                        m3 - c13,
                        m2,
                        fmt_set(&actual.sets[0])
                    ));
                }
                ('e', vec![listed], Some(vec![actual]))
            } else {
                ('f', vec![S::new([m3_, m3_, m3_], &[m3_], &[m3_])], None)
            }
        }
    };

    let condition = sender_regimes(z)
        .iter()
        .find(|(r, _)| *r == regime)
        .map(|(_, c)| *c)
        .expect("regime is listed");
    let mut expected = expected.unwrap_or_else(|| tabulated.clone());
    expected.sort();
    SenderCase {
        zone: z,
        regime,
        condition,
        tabulated,
        expected,
        notes,
    }
}

/// Selection `(m3, m2, m3)`: t1 earns `m3 - c13`, t2 earns `m2`, and the
/// better of the two decides `M*(t'1)`.
fn mixed_top_bid(p: &CarTradeParams) -> ExpectedSelection {
    let [_, m2, m3] = &p.bids;
    let t1 = m3 - p.c13();
    let low: &[usize] = match t1.cmp(m2) {
        std::cmp::Ordering::Greater => &[2],
        std::cmp::Ordering::Equal => &[1, 2],
        std::cmp::Ordering::Less => &[1],
    };
    ExpectedSelection::new([2, 1, 2], low, &[2])
}

/// Posterior for each message: `None` off-path, otherwise the belief over
/// `(t'1, t'2)`.
pub type PosteriorRow = [Option<[Rational; 2]>; 3];

/// The nine optimal-message-set configurations that can arise.
pub fn r5_configurations() -> Vec<[MessageSet; 2]> {
    let s = |xs: &[usize]| xs.iter().copied().collect::<MessageSet>();
    vec![
        [s(&[0]), s(&[0])],
        [s(&[1]), s(&[1])],
        [s(&[2]), s(&[2])],
        [s(&[0]), s(&[1])],
        [s(&[0]), s(&[2])],
        [s(&[1]), s(&[2])],
        [s(&[0, 1]), s(&[0])],
        [s(&[0, 1]), s(&[1])],
        [s(&[0, 1]), s(&[2])],
    ]
}

/// Closed-form posteriors for configuration `index` of [`r5_configurations`].
pub fn r5_expected_posteriors(index: usize, alpha: &Rational) -> PosteriorRow {
    let one = Rational::one();
    let two = Rational::from_integer(2);
    let low = || Some([one.clone(), Rational::zero()]);
    let high = || Some([Rational::zero(), one.clone()]);
    let prior = || Some([alpha.clone(), &one - alpha]);
    let mixed = || {
        let d = &two - alpha;
        Some([alpha / &d, (&two - &two * alpha) / &d])
    };
    match index {
        0 => [prior(), None, None],
        1 => [None, prior(), None],
        2 => [None, None, prior()],
        3 => [low(), high(), None],
        4 => [low(), None, high()],
        5 => [None, low(), high()],
        6 => [mixed(), low(), None],
        7 => [low(), mixed(), None],
        8 => [low(), low(), high()],
        _ => panic!("configuration index {index} out of range"),
    }
}

/// Posteriors the solver computes for configuration `index`.
pub fn r5_computed_posteriors(game: &SignalingGame, index: usize) -> PosteriorRow {
    let sets = r5_configurations()[index].to_vec();
    let profile = SelectionProfile {
        strategy: crate::game::SenderStrategy::new(vec![0; 3]),
        pattern_message_sets: sets,
    };
    let dist = conditional_message_dist(&profile, game);
    let post = posterior_profile(game.prior(), &dist);
    let row = |m: usize| {
        post.on_path
            .get(&m)
            .map(|b| [b.prob(0).clone(), b.prob(1).clone()])
    };
    [row(0), row(1), row(2)]
}

fn fmt_actions(actions: &[usize]) -> String {
    let names: Vec<String> = actions.iter().map(|a| format!("a{}", a + 1)).collect();
    format!("({})", names.join(", "))
}

fn fmt_row(row: &PosteriorRow) -> String {
    let parts: Vec<String> = row
        .iter()
        .enumerate()
        .map(|(m, r)| match r {
            Some([x, y]) => format!("m{}: ({x}, {y})", m + 1),
            None => format!("m{}: off-path", m + 1),
        })
        .collect();
    parts.join("  ")
}

/// Text report comparing the solver against the zone tables, sender regimes
/// and posterior configurations. `mismatches` counts solver disagreements;
/// notes on the hand-derived tables are reported but not counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub text: String,
    pub mismatches: usize,
    pub notes: usize,
}

impl fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn cross_check(p: &CarTradeParams) -> Result<CrossCheckReport, CarTradeError> {
    let game = build_cartrade_game(p)?;
    let th = thresholds(p);
    let mut out = String::new();
    let mut mismatches = 0;
    let mut notes = 0;

    writeln!(out, "car trade: {p}").unwrap();
    writeln!(
        out,
        "thresholds: rho0 = {}, sigma0 = {}, lambda0 = {}",
        th.rho, th.sigma, th.lambda
    )
    .unwrap();

    writeln!(out, "receiver tables:").unwrap();
    for z in ZoneId::ALL {
        let want = zone_receiver_strategy(z).choice;
        match zone_interior_belief(z, p) {
            None => writeln!(out, "  {z}: empty, expected {}", fmt_actions(&want)).unwrap(),
            Some(beliefs) => {
                let got: Vec<usize> = (0..3)
                    .map(|m| {
                        let b = Belief::two_point(beliefs[m].clone()).expect("belief in [0,1]");
                        best_actions(&game, &b, m).canonical()
                    })
                    .collect();
                let ok = got == want && zone_classify(&beliefs, p) == z;
                mismatches += usize::from(!ok);
                writeln!(
                    out,
                    "  {z}: belief ({}, {}, {}) -> {} expected {} {}",
                    beliefs[0],
                    beliefs[1],
                    beliefs[2],
                    fmt_actions(&got),
                    fmt_actions(&want),
                    if ok { "ok" } else { "MISMATCH" }
                )
                .unwrap();
            }
        }
    }

    writeln!(out, "sender cases:").unwrap();
    if on_cost_boundary(p) {
        writeln!(
            out,
            "  costs lie on a regime boundary; extra ties may appear"
        )
        .unwrap();
    }
    for z in ZoneId::ALL {
        let case = zone_sender_cases(z, p);
        let br = type_best_messages(&game, &zone_receiver_strategy(z));
        let mut got: Vec<ExpectedSelection> = enumerate_selections(&br, game.partition())
            .iter()
            .map(ExpectedSelection::from_profile)
            .collect();
        got.sort();
        let ok = got == case.expected;
        mismatches += usize::from(!ok);
        writeln!(
            out,
            "  {z} ({}) {}: {}",
            case.regime,
            case.condition,
            if ok { "ok" } else { "MISMATCH" }
        )
        .unwrap();
        for s in &got {
            let flag = if case.tabulated.contains(s) {
                ""
            } else {
                "  [not tabulated]"
            };
            writeln!(out, "    {s}{flag}").unwrap();
        }
        for s in &case.tabulated {
            if !got.contains(s) {
                writeln!(out, "    tabulated {s}  [not produced]").unwrap();
            }
        }
        for n in &case.notes {
            notes += 1;
            writeln!(out, "    note: {n}").unwrap();
        }
    }

    writeln!(out, "posterior configurations (alpha = {}):", p.alpha).unwrap();
    for (i, cfg) in r5_configurations().iter().enumerate() {
        let want = r5_expected_posteriors(i, &p.alpha);
        let got = r5_computed_posteriors(&game, i);
        let ok = want == got;
        mismatches += usize::from(!ok);
        writeln!(
            out,
            "  {} / {}: {} {}",
            fmt_set(&cfg[0]),
            fmt_set(&cfg[1]),
            fmt_row(&got),
            if ok { "ok" } else { "MISMATCH" }
        )
        .unwrap();
    }
    writeln!(out, "summary: {mismatches} mismatches, {notes} notes").unwrap();

    Ok(CrossCheckReport {
        text: out,
        mismatches,
        notes,
    })
}
