//! The `.game` text format.
//!
//! Line-oriented UTF-8. A section starts with a header line such as
//! `PAYOFFS:`; `#` starts a comment that runs to the end of the line. The six
//! sections may come in any order but each must appear exactly once:
//!
//! ```text
//! TYPES:        labels, whitespace separated, any number per line
//! PATTERNS:     <pattern> <type> <type> ...
//! PRIOR:        <pattern> <weight>
//! MESSAGES:     labels
//! ACTIONS:      labels
//! PAYOFFS:      <type> <message> <action> <u1> <u2>
//! ```
//!
//! Numbers are integers or `p/q` fractions. Declaration order fixes the index
//! order of every label.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::game::{GameDefinition, GameError, PayoffTable, SignalingGame, ValidationReport};
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 for problems with the document as a whole.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid game: {0}")]
    Validation(ValidationReport),
}

impl From<GameError> for ScenarioError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Invalid(report) => ScenarioError::Validation(report),
            other => ScenarioError::Parse(ParseError {
                line: 0,
                column: 0,
                message: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Section {
    Types,
    Patterns,
    Prior,
    Messages,
    Actions,
    Payoffs,
}

impl Section {
    pub const ALL: [Section; 6] = [
        Section::Types,
        Section::Patterns,
        Section::Prior,
        Section::Messages,
        Section::Actions,
        Section::Payoffs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Types => "TYPES",
            Section::Patterns => "PATTERNS",
            Section::Prior => "PRIOR",
            Section::Messages => "MESSAGES",
            Section::Actions => "ACTIONS",
            Section::Payoffs => "PAYOFFS",
        }
    }

    fn from_name(name: &str) -> Option<Section> {
        Section::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

impl Token {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// A document split into sections, each a list of tokenized records, with
/// source positions kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDocument {
    sections: HashMap<Section, Vec<Vec<Token>>>,
}

impl GameDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut sections: HashMap<Section, Vec<Vec<Token>>> = HashMap::new();
        let mut current: Option<Section> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens = tokenize(body, line);
            let Some(first) = tokens.first() else {
                continue;
            };
            if let Some(name) = first.text.strip_suffix(':') {
                if tokens.len() > 1 {
                    return Err(tokens[1].error("unexpected text after section header"));
                }
                let section = Section::from_name(name)
                    .ok_or_else(|| first.error(format!("unknown section {name}")))?;
                if sections.contains_key(&section) {
                    return Err(first.error(format!("duplicate section {name}")));
                }
                sections.insert(section, Vec::new());
                current = Some(section);
                continue;
            }
            let section = current.ok_or_else(|| first.error("record before any section header"))?;
            sections.get_mut(&section).unwrap().push(tokens);
        }
        for s in Section::ALL {
            if !sections.contains_key(&s) {
                return Err(ParseError {
                    line: 0,
                    column: 0,
                    message: format!("missing section {}", s.name()),
                });
            }
        }
        Ok(GameDocument { sections })
    }

    pub fn records(&self, section: Section) -> &[Vec<Token>] {
        &self.sections[&section]
    }

    /// Resolves labels and numbers into a definition. Does not validate game
    /// semantics such as the prior summing to one.
    pub fn to_definition(&self) -> Result<GameDefinition, ParseError> {
        let types = self.labels(Section::Types, "type")?;
        let messages = self.labels(Section::Messages, "message")?;
        let actions = self.labels(Section::Actions, "action")?;

        let type_ix = index(&types);
        let mut pattern_labels = Vec::new();
        let mut pattern_tokens = Vec::new();
        let mut blocks = Vec::new();
        for rec in self.records(Section::Patterns) {
            let head = &rec[0];
            if rec.len() < 2 {
                return Err(head.error(format!("pattern {} lists no types", head.text)));
            }
            if pattern_labels.contains(&head.text) {
                return Err(head.error(format!("duplicate pattern label {}", head.text)));
            }
            let block = rec[1..]
                .iter()
                .map(|tok| lookup(&type_ix, tok, "type"))
                .collect::<Result<Vec<_>, _>>()?;
            pattern_labels.push(head.text.clone());
            pattern_tokens.push(head.clone());
            blocks.push(block);
        }
        let patterns = index(&pattern_labels);

        let mut prior: Vec<Option<Rational>> = vec![None; pattern_labels.len()];
        for rec in self.records(Section::Prior) {
            expect_len(rec, 2, "PRIOR records are `pattern weight`")?;
            let p = lookup(&patterns, &rec[0], "pattern")?;
            if prior[p].is_some() {
                return Err(
                    rec[0].error(format!("second prior weight for pattern {}", rec[0].text))
                );
            }
            prior[p] = Some(number(&rec[1])?);
        }
        let prior = prior
            .into_iter()
            .zip(&pattern_tokens)
            .map(|(w, tok)| {
                w.ok_or_else(|| tok.error(format!("no prior weight for pattern {}", tok.text)))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let (msg_ix, act_ix) = (index(&messages), index(&actions));
        let dims = (types.len(), messages.len(), actions.len());
        let mut u1 = PayoffTable::empty(dims.0, dims.1, dims.2);
        let mut u2 = PayoffTable::empty(dims.0, dims.1, dims.2);
        for rec in self.records(Section::Payoffs) {
            expect_len(rec, 5, "PAYOFFS records are `type message action u1 u2`")?;
            let t = lookup(&type_ix, &rec[0], "type")?;
            let m = lookup(&msg_ix, &rec[1], "message")?;
            let a = lookup(&act_ix, &rec[2], "action")?;
            let (x, y) = (number(&rec[3])?, number(&rec[4])?);
            if u1.set(t, m, a, x).is_some() {
                return Err(rec[0].error(format!(
                    "duplicate payoff for ({}, {}, {})",
                    rec[0].text, rec[1].text, rec[2].text
                )));
            }
            u2.set(t, m, a, y);
        }

        Ok(GameDefinition {
            type_labels: types,
            pattern_labels,
            blocks,
            prior,
            message_labels: messages,
            action_labels: actions,
            u1,
            u2,
        })
    }

    fn labels(&self, section: Section, kind: &str) -> Result<Vec<String>, ParseError> {
        let mut out: Vec<String> = Vec::new();
        for tok in self.records(section).iter().flatten() {
            if out.contains(&tok.text) {
                return Err(tok.error(format!("duplicate {kind} label {}", tok.text)));
            }
            out.push(tok.text.clone());
        }
        Ok(out)
    }
}

fn tokenize(body: &str, line: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<char> = body.chars().collect();
    for (i, c) in chars.iter().chain(std::iter::once(&' ')).enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: chars[s..i].iter().collect(),
                    line,
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn index(labels: &[String]) -> HashMap<&str, usize> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect()
}

fn lookup(map: &HashMap<&str, usize>, tok: &Token, kind: &str) -> Result<usize, ParseError> {
    map.get(tok.text.as_str()).copied().ok_or_else(|| {
        tok.error(format!(
            "undeclared {kind} {} on line {}",
            tok.text, tok.line
        ))
    })
}

fn number(tok: &Token) -> Result<Rational, ParseError> {
    tok.text
        .parse()
        .map_err(|e| tok.error(format!("bad number {:?}: {e}", tok.text)))
}

fn expect_len(rec: &[Token], n: usize, what: &str) -> Result<(), ParseError> {
    if rec.len() == n {
        Ok(())
    } else {
        Err(rec[0].error(format!("expected {n} fields, found {}; {what}", rec.len())))
    }
}

/// Parses and validates a game.
pub fn parse_game_file(text: &str) -> Result<SignalingGame, ScenarioError> {
    let def = GameDocument::parse(text)?.to_definition()?;
    Ok(def.build()?)
}

/// Canonical rendering: sections in the fixed order, one record per line,
/// payoffs in index order.
pub fn render_game(game: &SignalingGame) -> String {
    let mut out = String::new();
    out.push_str("TYPES:\n");
    for t in game.types().labels() {
        writeln!(out, "{t}").unwrap();
    }
    out.push_str("PATTERNS:\n");
    for (p, block) in game.partition().blocks().iter().enumerate() {
        let members: Vec<&str> = block.iter().map(|&t| game.type_label(t)).collect();
        writeln!(out, "{} {}", game.pattern_label(p), members.join(" ")).unwrap();
    }
    out.push_str("PRIOR:\n");
    for (p, w) in game.prior().weights().iter().enumerate() {
        writeln!(out, "{} {w}", game.pattern_label(p)).unwrap();
    }
    out.push_str("MESSAGES:\n");
    for m in game.message_labels() {
        writeln!(out, "{m}").unwrap();
    }
    out.push_str("ACTIONS:\n");
    for a in game.action_labels() {
        writeln!(out, "{a}").unwrap();
    }
    out.push_str("PAYOFFS:\n");
    for t in 0..game.num_types() {
        for m in 0..game.num_messages() {
            for a in 0..game.num_actions() {
                writeln!(
                    out,
                    "{} {} {} {} {}",
                    game.type_label(t),
                    game.message_label(m),
                    game.action_label(a),
                    game.u1(t, m, a),
                    game.u2(t, m, a)
                )
                .unwrap();
            }
        }
    }
    out
}
