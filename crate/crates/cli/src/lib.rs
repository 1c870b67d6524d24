//! Command-line front end. [`run`] does all the work and returns the exit code
//! and text so it can be tested without spawning a process.
//!
//! Exit codes: 0 ok, 1 parse or validation error, 2 bad arguments.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use patsig::bayes::{conditional_message_dist, incentive_patterns, posterior_profile};
use patsig::cartrade::{build_cartrade_game, cross_check, CarTradeParams};
use patsig::equilibrium::{enumerate_equilibria_with, Equilibrium};
use patsig::receiver::{best_actions, receiver_objective, Belief};
use patsig::scenario::{parse_game_file, render_game};
use patsig::sender::{MessageSet, MessageSetRule, SelectionProfile};
use patsig::{Rational, ReceiverStrategy, SenderStrategy, SignalingGame};

#[derive(Debug, Parser)]
#[command(
    name = "patsig",
    version,
    about = "Exact solver for signaling games with pattern recognition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rule {
    PatternMaximal,
    Image,
}

impl From<Rule> for MessageSetRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::PatternMaximal => MessageSetRule::PatternMaximal,
            Rule::Image => MessageSetRule::Image,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a game file.
    Validate { file: PathBuf },
    /// Receiver objective values and best actions for one message and belief.
    BestResponse {
        file: PathBuf,
        #[arg(long)]
        message: String,
        /// Comma-separated probabilities, one per pattern.
        #[arg(long)]
        belief: String,
    },
    /// Message distribution, senders and posteriors for a sender selection.
    Posterior {
        file: PathBuf,
        /// `type:message` pairs covering every type.
        #[arg(long)]
        selection: String,
        /// `message:action` pairs covering every message. Without it every
        /// message a pattern's types send counts as optimal for the pattern.
        #[arg(long)]
        receiver: Option<String>,
    },
    /// Enumerate all equilibria.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pattern-maximal")]
        rule: Rule,
    },
    /// Car trade thresholds, zone tables and cross-check report.
    Cartrade {
        #[arg(long, default_value = "2,5,10")]
        values: String,
        #[arg(long, default_value = "3,6,9")]
        bids: String,
        /// c12,c13,c23
        #[arg(long, default_value = "2,8,4")]
        costs: String,
        #[arg(long, default_value = "1/2")]
        alpha: String,
        /// Also write the game in `.game` format.
        #[arg(long)]
        emit_game: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Usage(String),
}

type Res<T> = Result<T, Failure>;

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Input(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cmd: Command) -> Res<String> {
    match cmd {
        Command::Validate { file } => {
            let g = load(&file)?;
            Ok(format!(
                "ok: {} types, {} patterns, {} messages, {} actions\n",
                g.num_types(),
                g.num_patterns(),
                g.num_messages(),
                g.num_actions()
            ))
        }
        Command::BestResponse {
            file,
            message,
            belief,
        } => {
            let g = load(&file)?;
            best_response(&g, &message, &belief)
        }
        Command::Posterior {
            file,
            selection,
            receiver,
        } => {
            let g = load(&file)?;
            posterior_report(&g, &selection, receiver.as_deref())
        }
        Command::Solve { file, rule } => {
            let g = load(&file)?;
            solve(&g, rule.into())
        }
        Command::Cartrade {
            values,
            bids,
            costs,
            alpha,
            emit_game,
        } => {
            let p = CarTradeParams {
                values: triple(&values, "--values")?,
                bids: triple(&bids, "--bids")?,
                costs: triple(&costs, "--costs")?,
                alpha: number(&alpha, "--alpha")?,
            };
            let game = build_cartrade_game(&p).map_err(|e| Failure::Usage(e.to_string()))?;
            if let Some(path) = emit_game {
                std::fs::write(&path, render_game(&game))
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            let report = cross_check(&p).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(report.text)
        }
    }
}

fn load(path: &PathBuf) -> Res<SignalingGame> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_game_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn number(s: &str, flag: &str) -> Res<Rational> {
    s.trim()
        .parse()
        .map_err(|e| Failure::Usage(format!("{flag}: bad number {s:?}: {e}")))
}

fn list(s: &str, flag: &str) -> Res<Vec<Rational>> {
    s.split(',').map(|x| number(x, flag)).collect()
}

fn triple(s: &str, flag: &str) -> Res<[Rational; 3]> {
    let v = list(s, flag)?;
    <[Rational; 3]>::try_from(v)
        .map_err(|v| Failure::Usage(format!("{flag} needs 3 values, got {}", v.len())))
}

fn pairs<'a>(s: &'a str, flag: &str) -> Res<Vec<(&'a str, &'a str)>> {
    s.split(',')
        .map(|item| {
            item.trim().split_once(':').ok_or_else(|| {
                Failure::Usage(format!("{flag}: expected `key:value`, got {item:?}"))
            })
        })
        .collect()
}

fn label_set(labels: &[String], set: &MessageSet) -> String {
    let names: Vec<&str> = set.iter().map(|&m| labels[m].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn best_response(g: &SignalingGame, message: &str, belief: &str) -> Res<String> {
    let m = g
        .message_index(message)
        .ok_or_else(|| Failure::Usage(format!("unknown message {message}")))?;
    let probs = list(belief, "--belief")?;
    if probs.len() != g.num_patterns() {
        return Err(Failure::Usage(format!(
            "belief has {} entries, game has {} patterns",
            probs.len(),
            g.num_patterns()
        )));
    }
    if probs.iter().any(Rational::is_negative) {
        return Err(Failure::Usage("belief entries must be nonnegative".into()));
    }
    if probs.iter().sum::<Rational>() != Rational::one() {
        return Err(Failure::Usage("belief must sum to 1".into()));
    }
    let b = Belief::new(probs).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "message {}, belief {}", g.message_label(m), b).unwrap();
    for a in 0..g.num_actions() {
        writeln!(
            out,
            "  {}: {}",
            g.action_label(a),
            receiver_objective(g, &b, m, a)
        )
        .unwrap();
    }
    let best = best_actions(g, &b, m);
    let names: Vec<&str> = best.actions.iter().map(|&a| g.action_label(a)).collect();
    writeln!(out, "best: {{{}}} value {}", names.join(", "), best.value).unwrap();
    writeln!(out, "canonical: {}", g.action_label(best.canonical())).unwrap();
    Ok(out)
}

fn posterior_report(g: &SignalingGame, selection: &str, receiver: Option<&str>) -> Res<String> {
    let mut choice: Vec<Option<usize>> = vec![None; g.num_types()];
    for (t, m) in pairs(selection, "--selection")? {
        let ti = g
            .types()
            .index_of(t)
            .ok_or_else(|| Failure::Usage(format!("unknown type {t}")))?;
        let mi = g
            .message_index(m)
            .ok_or_else(|| Failure::Usage(format!("unknown message {m}")))?;
        if choice[ti].replace(mi).is_some() {
            return Err(Failure::Usage(format!("type {t} assigned twice")));
        }
    }
    let choice: Vec<usize> = choice
        .into_iter()
        .enumerate()
        .map(|(t, c)| {
            c.ok_or_else(|| Failure::Usage(format!("no message for type {}", g.type_label(t))))
        })
        .collect::<Res<_>>()?;
    let strategy = SenderStrategy::new(choice);

    let profile = match receiver {
        None => SelectionProfile::image(strategy, g.partition()),
        Some(spec) => {
            let mut acts: Vec<Option<usize>> = vec![None; g.num_messages()];
            for (m, a) in pairs(spec, "--receiver")? {
                let mi = g
                    .message_index(m)
                    .ok_or_else(|| Failure::Usage(format!("unknown message {m}")))?;
                let ai = g
                    .action_index(a)
                    .ok_or_else(|| Failure::Usage(format!("unknown action {a}")))?;
                acts[mi] = Some(ai);
            }
            let acts: Vec<usize> = acts
                .into_iter()
                .enumerate()
                .map(|(m, a)| {
                    a.ok_or_else(|| {
                        Failure::Usage(format!("no action for message {}", g.message_label(m)))
                    })
                })
                .collect::<Res<_>>()?;
            SelectionProfile::for_strategies(
                g,
                strategy,
                &ReceiverStrategy::new(acts),
                MessageSetRule::PatternMaximal,
            )
        }
    };

    let msgs = g.message_labels();
    let dist = conditional_message_dist(&profile, g);
    let post = posterior_profile(g.prior(), &dist);
    let mut out = String::new();
    writeln!(out, "optimal message sets:").unwrap();
    for (p, set) in profile.pattern_message_sets.iter().enumerate() {
        writeln!(out, "  {}: {}", g.pattern_label(p), label_set(msgs, set)).unwrap();
    }
    writeln!(out, "p(m | pattern):").unwrap();
    writeln!(out, "  {}", msgs.join(" ")).unwrap();
    for p in 0..g.num_patterns() {
        let row: Vec<String> = dist.row(p).iter().map(ToString::to_string).collect();
        writeln!(out, "  {}: {}", g.pattern_label(p), row.join(" ")).unwrap();
    }
    writeln!(out, "patterns sending each message:").unwrap();
    for (m, label) in msgs.iter().enumerate() {
        let senders: Vec<&str> = incentive_patterns(m, &profile)
            .into_iter()
            .map(|p| g.pattern_label(p))
            .collect();
        writeln!(out, "  {}: {{{}}}", label, senders.join(", ")).unwrap();
    }
    writeln!(out, "posteriors:").unwrap();
    for (m, label) in msgs.iter().enumerate() {
        match post.on_path.get(&m) {
            Some(b) => writeln!(out, "  {}: {}", label, b).unwrap(),
            None => writeln!(out, "  {}: off-path", label).unwrap(),
        }
    }
    Ok(out)
}

fn render_equilibrium(g: &SignalingGame, i: usize, eq: &Equilibrium, out: &mut String) {
    let msgs = g.message_labels();
    writeln!(out, "equilibrium {i}: {}", eq.classification).unwrap();
    let s: Vec<String> = (0..g.num_types())
        .map(|t| format!("{} -> {}", g.type_label(t), msgs[eq.sender.message(t)]))
        .collect();
    writeln!(out, "  sender: {}", s.join(", ")).unwrap();
    let r: Vec<String> = (0..g.num_messages())
        .map(|m| format!("{} -> {}", msgs[m], g.action_label(eq.receiver.action(m))))
        .collect();
    writeln!(out, "  receiver: {}", r.join(", ")).unwrap();
    let sets: Vec<String> = eq
        .pattern_message_sets
        .iter()
        .enumerate()
        .map(|(p, set)| format!("{} = {}", g.pattern_label(p), label_set(msgs, set)))
        .collect();
    writeln!(out, "  optimal message sets: {}", sets.join(", ")).unwrap();
    let on: Vec<String> = eq
        .posteriors
        .on_path
        .iter()
        .map(|(&m, b)| format!("{} {}", msgs[m], b))
        .collect();
    writeln!(out, "  posteriors: {}", on.join("; ")).unwrap();
    if eq.off_path_witnesses.is_empty() {
        writeln!(out, "  off-path: none").unwrap();
    } else {
        let off: Vec<String> = eq
            .off_path_witnesses
            .iter()
            .map(|(&m, b)| format!("{} {}", msgs[m], b))
            .collect();
        writeln!(out, "  off-path witnesses: {}", off.join("; ")).unwrap();
    }
}

fn solve(g: &SignalingGame, rule: MessageSetRule) -> Res<String> {
    let eqs = enumerate_equilibria_with(g, rule).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = String::new();
    let noun = if eqs.len() == 1 {
        "equilibrium"
    } else {
        "equilibria"
    };
    writeln!(out, "{} {noun}", eqs.len()).unwrap();
    for (i, eq) in eqs.iter().enumerate() {
        render_equilibrium(g, i + 1, eq, &mut out);
    }
    Ok(out)
}
