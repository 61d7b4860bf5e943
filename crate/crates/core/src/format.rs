//! Text format for games.
//!
//! The native format puts priorities on edges:
//!
//! ```text
//! # comment
//! parity 2;
//! start 1;
//! 1 even 1:2->2;
//! 2 odd 2:1->1;
//! ```
//!
//! `parity <n>` declares nodes `1..=n`. Each node statement lists the owner
//! and the outgoing edges, comma separated, as `<source>:<priority>-><target>`.
//! The shorter forms `<priority>-><target>` and `<priority>:<target>` are
//! accepted on input.
//!
//! The conventional node-priority layout `<id> <priority> <owner> <succ,...> ["name"];`
//! (owner `0` for Even, `1` for Odd) is also accepted and converted by giving
//! every edge the priority of its source node. Ids are shifted up by one if
//! node `0` is used, priorities by two if priority `0` is used, and the start
//! defaults to the smallest id when no `start` statement is present.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{Edge, GameError, GameGraph, Letter, Node, Player, Priority};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing start declaration")]
    MissingStart,
    #[error("missing parity header")]
    MissingHeader,
    #[error("node {0} is not declared")]
    Undeclared(Node),
    #[error(transparent)]
    Game(#[from] GameError),
}

struct Statement {
    line: usize,
    tokens: Vec<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn statements(text: &str) -> Result<Vec<Statement>, ParseError> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start_line = None;
    let mut in_quotes = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        for c in raw.chars() {
            match c {
                '"' => {
                    in_quotes = !in_quotes;
                    current.push(c);
                }
                '#' if !in_quotes => break,
                ';' if !in_quotes => {
                    let tokens = tokenize(&current);
                    if !tokens.is_empty() {
                        out.push(Statement {
                            line: start_line.unwrap_or(line),
                            tokens,
                        });
                    }
                    current.clear();
                    start_line = None;
                }
                _ => {
                    if start_line.is_none() && !c.is_whitespace() {
                        start_line = Some(line);
                    }
                    current.push(c);
                }
            }
        }
        current.push(' ');
    }
    if let Some(line) = start_line {
        return Err(syntax(line, "statement not terminated by ';'"));
    }
    Ok(out)
}

fn tokenize(s: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for c in s.chars() {
        if c == '"' {
            in_quotes = !in_quotes;
            cur.push(c);
        } else if c.is_whitespace() && !in_quotes {
            if !cur.is_empty() {
                tokens.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.trim()
        .parse()
        .map_err(|_| syntax(line, format!("expected {what}, found '{tok}'")))
}

/// Parse a game in the edge-priority format or the node-priority layout.
pub fn parse_game(text: &str) -> Result<GameGraph, ParseError> {
    let stmts = statements(text)?;
    let mut iter = stmts.iter();
    let header = iter.next().ok_or(ParseError::MissingHeader)?;
    if header.tokens[0] != "parity" {
        return Err(ParseError::MissingHeader);
    }
    if header.tokens.len() != 2 {
        return Err(syntax(header.line, "expected 'parity <n>'"));
    }
    let declared: usize = number(header.line, &header.tokens[1], "node count")?;

    let mut start = None;
    let mut body = Vec::new();
    for st in iter {
        if st.tokens[0] == "start" {
            if st.tokens.len() != 2 {
                return Err(syntax(st.line, "expected 'start <node>'"));
            }
            start = Some((
                st.line,
                number::<Node>(st.line, &st.tokens[1], "start node")?,
            ));
        } else {
            body.push(st);
        }
    }

    let node_priority_mode = body
        .first()
        .map(|st| st.tokens.get(1).is_some_and(|t| t.parse::<u64>().is_ok()))
        .unwrap_or(false);
    if node_priority_mode {
        parse_node_priority(declared, start, &body)
    } else {
        let (_, start) = start.ok_or(ParseError::MissingStart)?;
        parse_edge_priority(declared, start, &body)
    }
}

fn parse_edge_priority(
    n: usize,
    start: Node,
    body: &[&Statement],
) -> Result<GameGraph, ParseError> {
    let mut owner: Vec<Option<Player>> = vec![None; n];
    let mut edges = Vec::new();
    for st in body {
        let id: Node = number(st.line, &st.tokens[0], "node id")?;
        if id == 0 || id > n {
            return Err(syntax(st.line, format!("node {id} out of range 1..={n}")));
        }
        let player = match st.tokens.get(1).map(String::as_str) {
            Some("even") => Player::Even,
            Some("odd") => Player::Odd,
            Some(other) => {
                return Err(syntax(
                    st.line,
                    format!("expected 'even' or 'odd', found '{other}'"),
                ))
            }
            None => return Err(syntax(st.line, "missing owner")),
        };
        if owner[id - 1].replace(player).is_some() {
            return Err(syntax(st.line, format!("node {id} declared twice")));
        }
        let list = st.tokens[2..].join("");
        for item in list.split(',').filter(|s| !s.is_empty()) {
            edges.push(parse_edge(st.line, id, item)?);
        }
    }
    let owner = owner
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or(ParseError::Undeclared(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GameGraph::new(owner, start, edges)?)
}

fn parse_edge(line: usize, source: Node, item: &str) -> Result<Edge, ParseError> {
    let (priority, target) = if let Some((left, right)) = item.split_once("->") {
        let priority = match left.split_once(':') {
            Some((src, p)) => {
                let src: Node = number(line, src, "edge source")?;
                if src != source {
                    return Err(syntax(
                        line,
                        format!("edge '{item}' does not leave node {source}"),
                    ));
                }
                p
            }
            None => left,
        };
        (priority, right)
    } else if let Some((p, t)) = item.split_once(':') {
        (p, t)
    } else {
        return Err(syntax(line, format!("malformed edge '{item}'")));
    };
    Ok(Letter::new(
        source,
        number(line, priority, "priority")?,
        number(line, target, "target node")?,
    ))
}

fn parse_node_priority(
    max_id: usize,
    start: Option<(usize, Node)>,
    body: &[&Statement],
) -> Result<GameGraph, ParseError> {
    struct Row {
        priority: Priority,
        owner: Player,
        succ: Vec<Node>,
    }
    let mut rows: BTreeMap<Node, Row> = BTreeMap::new();
    for st in body {
        if st.tokens.len() < 4 {
            return Err(syntax(
                st.line,
                "expected '<id> <priority> <owner> <successors>'",
            ));
        }
        let id: Node = number(st.line, &st.tokens[0], "node id")?;
        if id > max_id {
            return Err(syntax(
                st.line,
                format!("node {id} exceeds declared maximum {max_id}"),
            ));
        }
        let priority: Priority = number(st.line, &st.tokens[1], "priority")?;
        let owner = match st.tokens[2].as_str() {
            "0" => Player::Even,
            "1" => Player::Odd,
            other => {
                return Err(syntax(
                    st.line,
                    format!("expected owner 0 or 1, found '{other}'"),
                ))
            }
        };
        let succ = st.tokens[3]
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|t| number(st.line, t, "successor"))
            .collect::<Result<Vec<Node>, _>>()?;
        if st.tokens.len() > 5 || (st.tokens.len() == 5 && !st.tokens[4].starts_with('"')) {
            return Err(syntax(st.line, "unexpected trailing tokens"));
        }
        if rows
            .insert(
                id,
                Row {
                    priority,
                    owner,
                    succ,
                },
            )
            .is_some()
        {
            return Err(syntax(st.line, format!("node {id} declared twice")));
        }
    }

    let id_shift = usize::from(rows.contains_key(&0));
    let prio_shift = if rows.values().any(|r| r.priority == 0) {
        2
    } else {
        0
    };
    let n = max_id + id_shift;
    let mut owner = vec![None; n];
    let mut edges = Vec::new();
    for (&id, row) in &rows {
        owner[id + id_shift - 1] = Some(row.owner);
        for &t in &row.succ {
            if t > max_id {
                return Err(ParseError::Game(GameError::NodeOutOfRange {
                    node: t + id_shift,
                    n,
                }));
            }
            edges.push(Letter::new(
                id + id_shift,
                row.priority + prio_shift,
                t + id_shift,
            ));
        }
    }
    let owner = owner
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or(ParseError::Undeclared(i + 1 - id_shift)))
        .collect::<Result<Vec<_>, _>>()?;
    let start = match start {
        Some((_, v)) => v + id_shift,
        None => rows
            .keys()
            .next()
            .map(|&v| v + id_shift)
            .ok_or(ParseError::MissingStart)?,
    };
    Ok(GameGraph::new(owner, start, edges)?)
}

/// Render in the edge-priority format; nodes by id, edges by priority then target.
pub fn render_game(g: &GameGraph) -> String {
    let mut out = String::new();
    writeln!(out, "parity {};", g.n()).unwrap();
    writeln!(out, "start {};", g.start()).unwrap();
    for v in g.nodes() {
        let owner = match g.owner(v) {
            Player::Even => "even",
            Player::Odd => "odd",
        };
        let list: Vec<String> = g
            .out_edges(v)
            .iter()
            .map(|e| format!("{}:{}->{}", e.source, e.priority, e.target))
            .collect();
        writeln!(out, "{v} {owner} {};", list.join(",")).unwrap();
    }
    out
}
