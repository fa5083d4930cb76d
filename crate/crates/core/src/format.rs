//! Bit-exact text and JSON formats for games, lassos, and DOT export.
//!
//! Text format (UTF-8, `#` comments to end of line, `;` terminates each
//! statement):
//!
//! ```text
//! wpg <n> <d_1> [<d_2> ... <d_n>];
//! <id> <owner> <p_1>,...,<p_n> : <succ>,<succ>,... ["<name>"];
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Arena, GameStructure, Lasso, LassoError, Player, VertexId, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("invalid game: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("invalid JSON: {0}")]
    Json(String),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Number(u64),
    Word(String),
    Quoted(String),
    Comma,
    Colon,
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        })
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.col);
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '#' => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                ',' => {
                    self.bump();
                    out.push(Spanned {
                        token: Token::Comma,
                        line,
                        col,
                    });
                }
                ':' => {
                    self.bump();
                    out.push(Spanned {
                        token: Token::Colon,
                        line,
                        col,
                    });
                }
                ';' => {
                    self.bump();
                    out.push(Spanned {
                        token: Token::Semi,
                        line,
                        col,
                    });
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some(c) => s.push(c),
                            None => return self.error("unterminated string"),
                        }
                    }
                    out.push(Spanned {
                        token: Token::Quoted(s),
                        line,
                        col,
                    });
                }
                c if c.is_ascii_digit() => {
                    let mut n: u64 = 0;
                    while let Some(&c) = self.chars.peek() {
                        if let Some(d) = c.to_digit(10) {
                            n = n
                                .checked_mul(10)
                                .and_then(|n| n.checked_add(d as u64))
                                .ok_or(ParseError::Syntax {
                                    line,
                                    col,
                                    message: "number too large".into(),
                                })?;
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push(Spanned {
                        token: Token::Number(n),
                        line,
                        col,
                    });
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    out.push(Spanned {
                        token: Token::Word(s),
                        line,
                        col,
                    });
                }
                c => return self.error(format!("unexpected character `{c}`")),
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn position(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1))
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.position();
        Err(ParseError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn expect_number(&mut self, what: &str) -> Result<u64, ParseError> {
        match self.next() {
            Some(Spanned {
                token: Token::Number(n),
                ..
            }) => Ok(n),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.error(format!("expected {what}"))
            }
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.token == token => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.error(format!("expected {what}"))
            }
        }
    }

    fn number_list(&mut self, what: &str) -> Result<Vec<u64>, ParseError> {
        let mut out = vec![self.expect_number(what)?];
        while matches!(
            self.peek(),
            Some(Spanned {
                token: Token::Comma,
                ..
            })
        ) {
            self.next();
            out.push(self.expect_number(what)?);
        }
        Ok(out)
    }
}

/// Parses the text game format and validates the result.
pub fn parse_game(text: &str) -> Result<GameStructure, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut p = Parser { tokens, pos: 0 };

    match p.next() {
        Some(Spanned {
            token: Token::Word(w),
            ..
        }) if w == "wpg" => {}
        _ => {
            p.pos = p.pos.saturating_sub(1);
            return p.error("expected `wpg` header");
        }
    }
    let dims = p.expect_number("dimension count")? as usize;
    if dims == 0 {
        return p.error("dimension count must be at least 1");
    }
    let mut declared_max = Vec::with_capacity(dims);
    for _ in 0..dims {
        declared_max.push(p.expect_number("maximum priority")? as u32);
    }
    p.expect(Token::Semi, "`;` after header")?;

    struct RawVertex {
        owner: Player,
        priorities: Vec<u32>,
        successors: Vec<VertexId>,
        name: Option<String>,
    }
    let mut raw: Vec<(VertexId, RawVertex)> = Vec::new();

    while p.peek().is_some() {
        let id = p.expect_number("vertex id")? as VertexId;
        let owner_tag = p.expect_number("owner (1 or 2)")?;
        let owner = match Player::from_tag(owner_tag as u8) {
            Some(pl) if owner_tag <= 2 => pl,
            _ => {
                p.pos = p.pos.saturating_sub(1);
                return p.error(format!("owner must be 1 or 2, got {owner_tag}"));
            }
        };
        let prios = p.number_list("priority")?;
        if prios.len() != dims {
            return p.error(format!(
                "vertex {id}: expected {dims} priorities, got {}",
                prios.len()
            ));
        }
        p.expect(Token::Colon, "`:` before successor list")?;
        let succs = p.number_list("successor id")?;
        let name = match p.peek() {
            Some(Spanned {
                token: Token::Quoted(_),
                ..
            }) => match p.next().unwrap().token {
                Token::Quoted(s) => Some(s),
                _ => unreachable!(),
            },
            _ => None,
        };
        p.expect(Token::Semi, "`;` after vertex line")?;
        raw.push((
            id,
            RawVertex {
                owner,
                priorities: prios.into_iter().map(|x| x as u32).collect(),
                successors: succs.into_iter().map(|x| x as VertexId).collect(),
                name,
            },
        ));
    }

    let n = raw.len();
    let mut violations = Vec::new();
    let mut seen = vec![false; n];
    for (id, _) in &raw {
        if *id >= n {
            violations.push(Violation::MissingVertex(*id % n.max(1)));
            violations.push(Violation::DanglingSuccessor {
                vertex: *id,
                successor: *id,
            });
        } else if seen[*id] {
            violations.push(Violation::DuplicateVertex(*id));
        } else {
            seen[*id] = true;
        }
    }
    if !violations.is_empty() {
        // Ids are not a clean range; report the duplicates/missing ones.
        let mut out: Vec<Violation> = violations
            .iter()
            .filter(|v| matches!(v, Violation::DuplicateVertex(_)))
            .cloned()
            .collect();
        for (id, here) in seen.iter().enumerate() {
            if !here {
                out.push(Violation::MissingVertex(id));
            }
        }
        if out.is_empty() {
            out = violations;
        }
        return Err(ParseError::Invalid(out));
    }
    if n == 0 {
        return Err(ParseError::Invalid(vec![Violation::Empty]));
    }

    let mut owner = vec![Player::P1; n];
    let mut succ = vec![Vec::new(); n];
    let mut priorities = vec![vec![0u32; n]; dims];
    let mut names = vec![None; n];
    for (id, rv) in raw {
        owner[id] = rv.owner;
        succ[id] = rv.successors;
        for (m, pr) in rv.priorities.into_iter().enumerate() {
            priorities[m][id] = pr;
        }
        names[id] = rv.name;
    }

    GameStructure::new(owner, succ, priorities, declared_max, names).map_err(ParseError::Invalid)
}

/// Canonical text form; `parse_game(serialize_game(g))` is structurally
/// equal to `g`.
pub fn serialize_game(g: &GameStructure) -> String {
    let mut out = String::new();
    out.push_str("wpg ");
    let _ = write!(out, "{}", g.dims());
    for m in 0..g.dims() {
        let _ = write!(out, " {}", g.declared_max(m));
    }
    out.push_str(";\n");
    for v in 0..g.num_vertices() {
        let prios = (0..g.dims())
            .map(|m| g.priority(m, v).to_string())
            .collect::<Vec<_>>()
            .join(",");
        let succs = g
            .successors(v)
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = write!(out, "{} {} {} : {}", v, g.owner(v).tag(), prios, succs);
        if let Some(name) = g.name(v) {
            let _ = write!(out, " \"{name}\"");
        }
        out.push_str(";\n");
    }
    out
}

/// Structural equality of two games (owners, edges, priorities, declared
/// maxima, and names).
pub fn games_equal(a: &GameStructure, b: &GameStructure) -> bool {
    if a.num_vertices() != b.num_vertices() || a.dims() != b.dims() {
        return false;
    }
    for m in 0..a.dims() {
        if a.declared_max(m) != b.declared_max(m) {
            return false;
        }
    }
    (0..a.num_vertices()).all(|v| {
        a.owner(v) == b.owner(v)
            && a.successors(v) == b.successors(v)
            && a.name(v) == b.name(v)
            && (0..a.dims()).all(|m| a.priority(m, v) == b.priority(m, v))
    })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct JsonGame {
    dims: usize,
    max_priorities: Vec<u32>,
    vertices: Vec<JsonVertex>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVertex {
    id: VertexId,
    owner: u8,
    priorities: Vec<u32>,
    successors: Vec<VertexId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// JSON mirror of the text format.
pub fn game_to_json(g: &GameStructure) -> String {
    let jg = JsonGame {
        dims: g.dims(),
        max_priorities: (0..g.dims()).map(|m| g.declared_max(m)).collect(),
        vertices: (0..g.num_vertices())
            .map(|v| JsonVertex {
                id: v,
                owner: g.owner(v).tag(),
                priorities: g.priorities_of(v),
                successors: g.successors(v).to_vec(),
                name: g.name(v).map(|s| s.to_string()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&jg).expect("game serialization")
}

pub fn game_from_json(text: &str) -> Result<GameStructure, ParseError> {
    let jg: JsonGame = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    if jg.dims == 0 || jg.max_priorities.len() != jg.dims {
        return Err(ParseError::Json(
            "dims must be >= 1 and match maxPriorities".into(),
        ));
    }
    let n = jg.vertices.len();
    let mut seen = vec![false; n];
    let mut violations = Vec::new();
    for v in &jg.vertices {
        if v.id < n {
            if seen[v.id] {
                violations.push(Violation::DuplicateVertex(v.id));
            }
            seen[v.id] = true;
        }
        if v.priorities.len() != jg.dims {
            return Err(ParseError::Json(format!(
                "vertex {}: expected {} priorities",
                v.id, jg.dims
            )));
        }
        if Player::from_tag(v.owner).is_none() {
            return Err(ParseError::Json(format!(
                "vertex {}: owner must be 1 or 2",
                v.id
            )));
        }
    }
    for (id, here) in seen.iter().enumerate() {
        if !here {
            violations.push(Violation::MissingVertex(id));
        }
    }
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    if n == 0 {
        return Err(ParseError::Invalid(vec![Violation::Empty]));
    }
    let mut owner = vec![Player::P1; n];
    let mut succ = vec![Vec::new(); n];
    let mut priorities = vec![vec![0u32; n]; jg.dims];
    let mut names = vec![None; n];
    for v in jg.vertices {
        owner[v.id] = Player::from_tag(v.owner).unwrap();
        succ[v.id] = v.successors;
        for (m, pr) in v.priorities.into_iter().enumerate() {
            priorities[m][v.id] = pr;
        }
        names[v.id] = v.name;
    }
    GameStructure::new(owner, succ, priorities, jg.max_priorities, names)
        .map_err(ParseError::Invalid)
}

/// Reads a game from either format, sniffing JSON by the leading `{`.
pub fn parse_game_auto(text: &str) -> Result<GameStructure, ParseError> {
    if text.trim_start().starts_with('{') {
        game_from_json(text)
    } else {
        parse_game(text)
    }
}

/// Lasso text form: comma-separated prefix, `:`, comma-separated cycle,
/// e.g. `": 0,1,2,3"` for an empty prefix.
pub fn lasso_to_text(lasso: &Lasso) -> String {
    let fmt = |vs: &[VertexId]| {
        vs.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    if lasso.prefix().is_empty() {
        format!(": {}", fmt(lasso.cycle()))
    } else {
        format!("{} : {}", fmt(lasso.prefix()), fmt(lasso.cycle()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LassoParseError {
    #[error("lasso text must contain exactly one `:`")]
    MissingColon,
    #[error("bad vertex id `{0}`")]
    BadId(String),
    #[error(transparent)]
    Invalid(#[from] LassoError),
}

pub fn lasso_from_text(arena: &Arena, text: &str) -> Result<Lasso, LassoParseError> {
    let mut parts = text.splitn(2, ':');
    let prefix_part = parts.next().unwrap_or("");
    let cycle_part = parts.next().ok_or(LassoParseError::MissingColon)?;
    let parse_ids = |part: &str| -> Result<Vec<VertexId>, LassoParseError> {
        part.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| LassoParseError::BadId(s.into())))
            .collect()
    };
    let prefix = parse_ids(prefix_part)?;
    let cycle = parse_ids(cycle_part)?;
    Ok(Lasso::new(arena, prefix, cycle)?)
}

/// DOT rendering of the base game; circles for P1, boxes for P2, with the
/// priority vector under each vertex name.
pub fn game_to_dot(g: &GameStructure) -> String {
    let mut out = String::from("digraph game {\n");
    for v in 0..g.num_vertices() {
        let shape = match g.owner(v) {
            Player::P1 => "circle",
            Player::P2 => "box",
        };
        let label = match g.name(v) {
            Some(name) => format!("{name}\\n{:?}", g.priorities_of(v)),
            None => format!("v{v}\\n{:?}", g.priorities_of(v)),
        };
        let _ = writeln!(out, "  {v} [shape={shape}, label=\"{label}\"];");
    }
    for v in 0..g.num_vertices() {
        for &w in g.successors(v) {
            let _ = writeln!(out, "  {v} -> {w};");
        }
    }
    out.push_str("}\n");
    out
}
