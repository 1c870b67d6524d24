//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::Instant;

use patsig::bayes::{conditional_message_dist, incentive_patterns, posterior_profile};
use patsig::cartrade::{
    build_cartrade_game, on_cost_boundary, r5_computed_posteriors, r5_configurations,
    r5_expected_posteriors, sender_regimes, thresholds, zone_classify, zone_receiver_strategy,
    zone_sender_cases, CarTradeParams, ExpectedSelection, ZoneId,
};
use patsig::oracle::{oracle_best_action, search_supporting_belief, PbeOracle};
use patsig::receiver::{belief_intervals, Interval};
use patsig::{
    best_actions, enumerate_equilibria, enumerate_equilibria_with, enumerate_selections_with,
    parse_game_file, rat, receiver_objective, render_game, type_best_messages, verify_equilibrium,
    Belief, MessageSetRule, Rational, ReceiverStrategy, SelectionProfile, SenderStrategy,
    SignalingGame,
};

use common::*;

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pairs_of(eqs: &[patsig::Equilibrium]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    eqs.iter()
        .map(|e| (e.sender.choice.clone(), e.receiver.choice.clone()))
        .collect()
}

fn random_games(seed: u64, n: usize) -> Vec<SignalingGame> {
    let mut rng = seeded(seed);
    (0..n).map(|_| random_game(&mut rng)).collect()
}

// Criterion 1 ---------------------------------------------------------------

const ZONE_TABLES: [(ZoneId, [usize; 3]); 8] = [
    (ZoneId::D1, [0, 0, 0]),
    (ZoneId::D2, [0, 0, 1]),
    (ZoneId::D3, [0, 1, 0]),
    (ZoneId::D4, [0, 1, 1]),
    (ZoneId::D5, [1, 0, 0]),
    (ZoneId::D6, [1, 0, 1]),
    (ZoneId::D7, [1, 1, 0]),
    (ZoneId::D8, [1, 1, 1]),
];

/// Interior points of the zone on a grid of `steps` per coordinate.
fn zone_samples(z: ZoneId, p: &CarTradeParams, steps: i64) -> Vec<[Rational; 3]> {
    let raw = thresholds(p).raw();
    let (zero, one) = (Rational::zero(), Rational::one());
    let coords: Vec<Vec<Rational>> = z
        .buys()
        .iter()
        .zip(&raw)
        .map(|(&buy, r)| {
            let r = r.clamp_to(&zero, &one);
            (1..steps)
                .map(|k| {
                    let f = rat(k, steps);
                    if buy {
                        &r * &f
                    } else {
                        &r + &((&one - &r) * &f)
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for x in &coords[0] {
        for y in &coords[1] {
            for w in &coords[2] {
                out.push([x.clone(), y.clone(), w.clone()]);
            }
        }
    }
    out
}

fn criterion_1() -> Verdict {
    let mut checked = 0;
    for alpha in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let mut p = CarTradeParams::reference();
        p.alpha = alpha;
        let g = build_cartrade_game(&p).unwrap();
        for (z, table) in ZONE_TABLES {
            ensure!(
                zone_receiver_strategy(z).choice == table,
                "{z}: receiver table differs"
            );
            for b in zone_samples(z, &p, 5) {
                ensure!(
                    zone_classify(&b, &p) == z,
                    "{z}: sample {b:?} classified elsewhere"
                );
                for m in 0..3 {
                    let best = best_actions(&g, &Belief::two_point(b[m].clone()).unwrap(), m);
                    ensure!(
                        best.actions == vec![table[m]],
                        "{z}: m{} at belief {} gives {:?}, table says a{}",
                        m + 1,
                        b[m],
                        best.actions,
                        table[m] + 1
                    );
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} interior belief triples over 8 zones and 3 priors"
    ))
}

// Criterion 2 ---------------------------------------------------------------

fn expected_regions(raw: &Rational) -> (Vec<Interval>, Vec<Interval>) {
    let (zero, one) = (Rational::zero(), Rational::one());
    let iv = |lo: &Rational, hi: &Rational, lc: bool, hc: bool| Interval {
        lo: lo.clone(),
        hi: hi.clone(),
        lo_closed: lc,
        hi_closed: hc,
    };
    if !raw.is_positive() {
        (vec![iv(&zero, &one, true, true)], vec![])
    } else if raw <= &one {
        (
            vec![iv(raw, &one, true, true)],
            vec![iv(&zero, raw, true, false)],
        )
    } else {
        (vec![], vec![iv(&zero, &one, true, true)])
    }
}

fn criterion_2() -> Verdict {
    let mut rng = seeded(2);
    for i in 0..100 {
        let p = random_params(&mut rng);
        let [v1, _, v3] = &p.values;
        let th = thresholds(&p);
        let g = build_cartrade_game(&p).unwrap();
        let regions: Vec<_> = (0..3).map(|m| belief_intervals(&g, m).unwrap()).collect();
        for (m, t) in th.all().into_iter().enumerate() {
            let formula = (v3 - &p.bids[m]) / (v3 - v1);
            ensure!(
                t.raw == formula,
                "params #{i}: threshold {m} is {}, formula {formula}",
                t.raw
            );
            ensure!(
                t.clamped == formula.clamp_to(&Rational::zero(), &Rational::one()),
                "params #{i}: clamping of threshold {m}"
            );
            let (a1, a2) = expected_regions(&t.raw);
            ensure!(
                regions[m][0].intervals == a1 && regions[m][1].intervals == a2,
                "params #{i}: belief intervals for m{} disagree with threshold {}",
                m + 1,
                t.raw
            );
        }
    }
    Ok("100 random parameter sets".into())
}

// Criterion 3 ---------------------------------------------------------------

/// Regime predicates written out directly from the regime conditions.
fn regimes_satisfied(z: ZoneId, p: &CarTradeParams) -> Vec<char> {
    let [m1, m2, m3] = &p.bids;
    let (c12, c13, c23) = (p.c12(), p.c13(), p.c23());
    let d = c13 - c12;
    let preds: Vec<(char, bool)> = match z {
        ZoneId::D1 | ZoneId::D5 => vec![('a', true)],
        ZoneId::D2 => vec![
            ('a', c13 < m3),
            ('b', c13 >= m3 && c23 < m3),
            ('c', c13 >= m3 && c23 >= m3),
        ],
        ZoneId::D3 => vec![('a', c12 < m2), ('b', c12 >= m2)],
        ZoneId::D4 => {
            let hi = *c23 >= m3 - m2;
            vec![
                ('a', c12 >= m2 && c13 >= m3 && hi),
                ('b', c12 >= m2 && c13 >= m3 && !hi),
                ('c', c12 < m2 && d >= m3 - m2 && hi),
                ('d', c12 < m2 && d >= m3 - m2 && !hi),
                ('e', c13 < m3 && d < m3 - m2 && hi),
                ('f', c13 < m3 && d < m3 - m2 && !hi),
            ]
        }
        ZoneId::D6 => vec![
            ('a', *c23 >= m3 - m1),
            ('b', *c23 < m3 - m1 && m3 - m1 <= *c13),
            ('c', *c13 < m3 - m1),
        ],
        ZoneId::D7 => vec![('a', *c12 >= m2 - m1), ('b', *c12 < m2 - m1)],
        ZoneId::D8 => {
            let hi = *c23 >= m3 - m2;
            vec![
                ('a', *c12 >= m2 - m1 && *c13 >= m3 - m1 && hi),
                ('b', *c12 >= m2 - m1 && *c13 >= m3 - m1 && !hi),
                ('c', *c12 < m2 - m1 && d >= m3 - m2 && hi),
                ('d', *c12 < m2 - m1 && d >= m3 - m2 && !hi),
                ('e', *c13 < m3 - m1 && d < m3 - m2 && hi),
                ('f', *c13 < m3 - m1 && d < m3 - m2 && !hi),
            ]
        }
    };
    preds
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(r, _)| r)
        .collect()
}

fn criterion_3() -> Verdict {
    const PER_REGIME: usize = 10;
    let mut rng = seeded(3);
    let mut hits: std::collections::BTreeMap<(ZoneId, char), usize> = Default::default();
    let total: usize = ZoneId::ALL.iter().map(|z| sender_regimes(*z).len()).sum();
    ensure!(total == 24, "expected 24 regimes, found {total}");
    let mut flagged = BTreeSet::new();
    let mut samples = 0;
    while hits.values().filter(|&&n| n >= PER_REGIME).count() < total {
        samples += 1;
        ensure!(samples < 200_000, "regime coverage incomplete: {hits:?}");
        let p = random_params(&mut rng);
        if on_cost_boundary(&p) {
            continue;
        }
        let g = build_cartrade_game(&p).unwrap();
        for z in ZoneId::ALL {
            let case = zone_sender_cases(z, &p);
            let sat = regimes_satisfied(z, &p);
            ensure!(
                sat == vec![case.regime],
                "{z}: regime {} chosen but predicates give {sat:?} at {p}",
                case.regime
            );
            let count = hits.entry((z, case.regime)).or_default();
            if *count >= PER_REGIME {
                continue;
            }
            *count += 1;
            let br = type_best_messages(&g, &zone_receiver_strategy(z));
            let mut got: Vec<ExpectedSelection> =
                enumerate_selections_with(&br, g.partition(), MessageSetRule::PatternMaximal)
                    .iter()
                    .map(ExpectedSelection::from_profile)
                    .collect();
            got.sort();
            ensure!(
                got == case.expected,
                "{z} ({}) at {p}: solver {:?} vs expected {:?}",
                case.regime,
                got.iter().map(ToString::to_string).collect::<Vec<_>>(),
                case.expected
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            );
            let mut tab = case.tabulated.clone();
            tab.sort();
            if tab != case.expected {
                ensure!(
                    !case.notes.is_empty(),
                    "{z} ({}): unexplained table difference",
                    case.regime
                );
                flagged.insert(format!("{z}({})", case.regime));
            }
            if z == ZoneId::D2 && !case.notes.is_empty() {
                flagged.insert("D2 note".to_string());
            }
        }
    }
    ensure!(
        flagged == BTreeSet::from(["D1(a)".to_string(), "D2 note".to_string()]),
        "unexpected flagged cases {flagged:?}"
    );
    let d1 = zone_sender_cases(ZoneId::D1, &CarTradeParams::reference());
    ensure!(
        d1.expected.len() == 6 && d1.tabulated.len() == 5,
        "D1 selection counts"
    );
    Ok(format!(
        "24 regimes x {PER_REGIME} parameter sets ({samples} draws); reported: D1 omits (m1, m1, m3), D2 unreachable sub-case"
    ))
}

// Criterion 4 ---------------------------------------------------------------

fn criterion_4() -> Verdict {
    let configs = r5_configurations();
    ensure!(configs.len() == 9, "nine configurations");
    for alpha in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let mut p = CarTradeParams::reference();
        p.alpha = alpha.clone();
        let g = build_cartrade_game(&p).unwrap();
        for (i, cfg) in configs.iter().enumerate() {
            let profile = SelectionProfile {
                strategy: SenderStrategy::new(vec![0, 0, 0]),
                pattern_message_sets: cfg.to_vec(),
            };
            let dist = conditional_message_dist(&profile, &g);
            for (pat, set) in cfg.iter().enumerate() {
                for m in 0..3 {
                    let want = if set.contains(&m) {
                        rat(1, set.len() as i64)
                    } else {
                        rat(0, 1)
                    };
                    ensure!(
                        dist.prob(pat, m) == &want,
                        "config {i}: p(m{}|t'{})",
                        m + 1,
                        pat + 1
                    );
                }
            }
            let got = r5_computed_posteriors(&g, i);
            ensure!(
                got == r5_expected_posteriors(i, &alpha),
                "config {i} at alpha {alpha}: {got:?}"
            );
        }
        let two = rat(2, 1);
        let mixed = r5_computed_posteriors(&g, 6);
        let m1 = mixed[0].as_ref().unwrap();
        ensure!(
            m1[0] == &alpha / (&two - &alpha),
            "p(t'1|m1) at alpha {alpha}"
        );
        ensure!(
            m1[1] == (&two - &two * &alpha) / (&two - &alpha),
            "p(t'2|m1) at alpha {alpha}"
        );
    }
    Ok("9 configurations at alpha 1/4, 1/2, 3/4".into())
}

// Criterion 5 ---------------------------------------------------------------

fn check_profile(g: &SignalingGame, profile: &SelectionProfile) -> Result<(), String> {
    let dist = conditional_message_dist(profile, g);
    for p in 0..g.num_patterns() {
        let s: Rational = dist.row(p).iter().sum();
        ensure!(s == Rational::one(), "row {p} sums to {s}");
    }
    let post = posterior_profile(g.prior(), &dist);
    for (&m, b) in &post.on_path {
        let s: Rational = b.probs().iter().sum();
        ensure!(
            s == Rational::one(),
            "posterior for message {m} sums to {s}"
        );
        let senders = incentive_patterns(m, profile);
        for p in 0..g.num_patterns() {
            ensure!(
                senders.contains(&p) || b.prob(p).is_zero(),
                "mass on pattern {p} outside T'(m{m})"
            );
        }
    }
    Ok(())
}

fn criterion_5(games: &[SignalingGame]) -> Verdict {
    let mut rng = seeded(55);
    let mut profiles = 0;
    for (i, g) in games.iter().enumerate() {
        let (j, l) = (g.num_messages(), g.num_actions());
        for idx in 0..(l as u64).pow(j as u32) {
            let r = ReceiverStrategy::from_index(idx, j, l);
            let br = type_best_messages(g, &r);
            for rule in [MessageSetRule::PatternMaximal, MessageSetRule::Image] {
                for prof in enumerate_selections_with(&br, g.partition(), rule) {
                    check_profile(g, &prof).map_err(|e| format!("game #{i}: {e}"))?;
                    profiles += 1;
                }
            }
        }
        for _ in 0..10 {
            use rand::Rng;
            let s = SenderStrategy::new((0..g.num_types()).map(|_| rng.gen_range(0..j)).collect());
            check_profile(g, &SelectionProfile::image(s, g.partition()))
                .map_err(|e| format!("game #{i}: {e}"))?;
            profiles += 1;
        }
    }
    Ok(format!(
        "{} games, {profiles} selection profiles",
        games.len()
    ))
}

// Criterion 6 ---------------------------------------------------------------

fn criterion_6(games: &[SignalingGame]) -> Verdict {
    let mut rng = seeded(66);
    let mut compared = 0;
    let mut total_eq = 0;
    for (i, g) in games.iter().enumerate() {
        for _ in 0..10 {
            let b = random_belief(&mut rng, g.num_patterns());
            for m in 0..g.num_messages() {
                let fast: BTreeSet<usize> = best_actions(g, &b, m).actions.into_iter().collect();
                ensure!(
                    fast == oracle_best_action(g, &b, m),
                    "game #{i}: argmax differs at {b}"
                );
            }
        }
        let (k, j, l) = (
            g.num_types() as u32,
            g.num_messages() as u64,
            g.num_actions() as u64,
        );
        if j.pow(k) * l.pow(j as u32) > 10_000 {
            continue;
        }
        let rules: &[MessageSetRule] = if i < 100 {
            &[MessageSetRule::PatternMaximal, MessageSetRule::Image]
        } else {
            &[MessageSetRule::PatternMaximal]
        };
        for &rule in rules {
            let eqs = enumerate_equilibria_with(g, rule).unwrap();
            let solver = pairs_of(&eqs);
            ensure!(solver.len() == eqs.len(), "game #{i}: duplicate equilibria");
            let oracle = PbeOracle::new(g, rule).accepted_pairs();
            ensure!(
                solver == oracle,
                "game #{i} ({rule:?}): solver {} vs oracle {} equilibria\n{}",
                solver.len(),
                oracle.len(),
                render_game(g)
            );
            total_eq += eqs.len();
        }
        compared += 1;
    }
    Ok(format!(
        "{} games x 10 beliefs; {compared} games enumerated, {total_eq} equilibria matched",
        games.len()
    ))
}

// Criterion 7 ---------------------------------------------------------------

fn criterion_7(games: &[SignalingGame]) -> Verdict {
    let mut instances: Vec<SignalingGame> = games.to_vec();
    for alpha in [rat(1, 4), rat(1, 2), rat(3, 4)] {
        let mut p = CarTradeParams::reference();
        p.alpha = alpha;
        instances.push(build_cartrade_game(&p).unwrap());
    }
    let mut rng = seeded(7);
    for _ in 0..20 {
        instances.push(build_cartrade_game(&random_params(&mut rng)).unwrap());
    }
    let mut verified = 0;
    for (i, g) in instances.iter().enumerate() {
        for rule in [MessageSetRule::PatternMaximal, MessageSetRule::Image] {
            for eq in enumerate_equilibria_with(g, rule).unwrap() {
                let report = verify_equilibrium(g, &eq);
                ensure!(report.is_empty(), "instance #{i}: {report}");
                verified += 1;
            }
        }
    }
    Ok(format!(
        "{verified} equilibria over {} games",
        instances.len()
    ))
}

// Criterion 8 ---------------------------------------------------------------

/// Textbook pure-strategy PBE check with beliefs over individual types.
fn classical_pbe(g: &SignalingGame, s: &[usize], r: &[usize]) -> bool {
    let k = g.num_types();
    let prior: Vec<Rational> = (0..k).map(|t| g.prior().weight(t).clone()).collect();
    for t in 0..k {
        let mine = g.u1(t, s[t], r[s[t]]);
        if (0..g.num_messages()).any(|m| g.u1(t, m, r[m]) > mine) {
            return false;
        }
    }
    for (m, &rm) in r.iter().enumerate() {
        let eu = |a: usize, mu: &[Rational]| -> Rational {
            (0..k).map(|t| &mu[t] * g.u2(t, m, a)).sum()
        };
        let senders: Vec<usize> = (0..k).filter(|&t| s[t] == m).collect();
        if senders.is_empty() {
            let values: Vec<Vec<Rational>> = (0..g.num_actions())
                .map(|a| (0..k).map(|t| g.u2(t, m, a).clone()).collect())
                .collect();
            if search_supporting_belief(&values, rm).is_none() {
                return false;
            }
        } else {
            let z: Rational = senders.iter().map(|&t| &prior[t]).sum();
            let mu: Vec<Rational> = (0..k)
                .map(|t| {
                    if s[t] == m {
                        &prior[t] / &z
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let mine = eu(rm, &mu);
            if (0..g.num_actions()).any(|a| eu(a, &mu) > mine) {
                return false;
            }
        }
    }
    true
}

fn all_profiles(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..base).map(move |x| {
                    let mut v = p.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn criterion_8() -> Verdict {
    let mut rng = seeded(8);
    let mut total = 0;
    for i in 0..100 {
        let g = random_discrete_game(&mut rng);
        let k = g.num_types();
        for _ in 0..5 {
            let b = random_belief(&mut rng, k);
            for m in 0..g.num_messages() {
                for a in 0..g.num_actions() {
                    let classic: Rational = (0..k).map(|t| b.prob(t) * g.u2(t, m, a)).sum();
                    ensure!(
                        receiver_objective(&g, &b, m, a) == classic,
                        "game #{i}: objective"
                    );
                }
            }
        }
        let solver = pairs_of(&enumerate_equilibria(&g).unwrap());
        let mut classic = BTreeSet::new();
        for r in all_profiles(g.num_messages(), g.num_actions()) {
            for s in all_profiles(k, g.num_messages()) {
                if classical_pbe(&g, &s, &r) {
                    classic.insert((s, r.clone()));
                }
            }
        }
        ensure!(
            solver == classic,
            "game #{i}: solver {} vs classical {}\n{}",
            solver.len(),
            classic.len(),
            render_game(&g)
        );
        total += solver.len();
    }
    Ok(format!(
        "100 discrete-partition games, {total} equilibria matched"
    ))
}

// Criterion 9 ---------------------------------------------------------------

fn cartrade_cli(args: &[String]) -> (bool, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_patsig"))
        .arg("cartrade")
        .args(args)
        .output()
        .expect("run patsig");
    (out.status.success(), out.stdout)
}

fn criterion_9() -> Verdict {
    let mut rng = seeded(9);
    for i in 0..100 {
        let g = random_game(&mut rng);
        let text = render_game(&g);
        let back = parse_game_file(&text).map_err(|e| format!("doc #{i}: {e}"))?;
        ensure!(back == g, "doc #{i}: canonical round trip changed the game");
        ensure!(
            render_game(&back) == text,
            "doc #{i}: rendering not canonical"
        );
        let scrambled = scrambled_document(&mut rng, &g);
        let parsed =
            parse_game_file(&scrambled).map_err(|e| format!("doc #{i}: {e}\n{scrambled}"))?;
        ensure!(
            parsed == g,
            "doc #{i}: scrambled document parsed differently"
        );
        ensure!(
            parse_game_file(&render_game(&parsed)).unwrap() == parsed,
            "doc #{i}: re-render"
        );
    }

    let shipped = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/cartrade-example.game"
    ))
    .map_err(|e| format!("shipped example: {e}"))?;
    let reference = build_cartrade_game(&CarTradeParams::reference()).unwrap();
    ensure!(
        parse_game_file(&shipped).unwrap() == reference,
        "shipped example differs from reference game"
    );

    let mut runs = vec![vec![]];
    for _ in 0..3 {
        let p = random_params(&mut rng);
        let join = |x: &[Rational]| {
            x.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        runs.push(vec![
            format!("--values={}", join(&p.values)),
            format!("--bids={}", join(&p.bids)),
            format!("--costs={}", join(&p.costs)),
            format!("--alpha={}", p.alpha),
        ]);
    }
    for args in &runs {
        let (ok1, a) = cartrade_cli(args);
        let (ok2, b) = cartrade_cli(args);
        ensure!(ok1 && ok2, "cartrade {args:?} failed");
        ensure!(a == b, "cartrade {args:?} output differs between runs");
        let text = String::from_utf8(a).unwrap();
        for section in [
            "thresholds:",
            "receiver tables:",
            "sender cases:",
            "posterior configurations",
        ] {
            ensure!(
                text.contains(section),
                "cartrade {args:?}: missing {section}"
            );
        }
        ensure!(
            text.contains("summary: 0 mismatches"),
            "cartrade {args:?}: mismatches\n{text}"
        );
    }
    Ok(
        "100 documents round-tripped; cartrade output identical across runs for 4 parameter sets"
            .into(),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

#[test]
fn acceptance_criteria() {
    let games = random_games(5, 500);
    let criteria: Vec<Criterion> = vec![
        ("1 zone receiver tables", Box::new(criterion_1)),
        ("2 threshold formulas", Box::new(criterion_2)),
        ("3 sender case tables", Box::new(criterion_3)),
        ("4 posterior configurations", Box::new(criterion_4)),
        (
            "5 normalization invariants",
            Box::new(|| criterion_5(&games)),
        ),
        ("6 oracle equivalence", Box::new(|| criterion_6(&games))),
        ("7 soundness", Box::new(|| criterion_7(&games))),
        ("8 discrete-partition reduction", Box::new(criterion_8)),
        ("9 file format and CLI", Box::new(criterion_9)),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let line = match &verdict {
            Ok(detail) => format!("PASS criterion {name}: {detail} [{secs:.1}s]\n"),
            Err(why) => {
                failed.push(name);
                format!("FAIL criterion {name}: {why} [{secs:.1}s]\n")
            }
        };
        // Written straight to stderr so the lines show without --nocapture.
        err.write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
