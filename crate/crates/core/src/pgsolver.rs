//! Reading and writing the PGSolver text format.
//!
//! ```text
//! parity <maxId>;
//! <id> <priority> <owner> <succ>(,<succ>)* ("name")? ;
//! ```
//!
//! Owner 0 is the even player, 1 the odd player. Lines starting with `%`
//! are comments. Other header lines (`start ...;`) are accepted and ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::game::{ParityGame, Player, Priority, VertexId};

/// Shift applied to every priority when the input uses priority 0.
pub const ZERO_PRIORITY_SHIFT: Priority = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: owner {owner} out of range (expected 0 or 1)")]
    OwnerOutOfRange { line: usize, owner: u64 },
    #[error("line {line}: successor {successor} of vertex {vertex} is not a declared vertex")]
    DanglingSuccessor {
        line: usize,
        vertex: VertexId,
        successor: u64,
    },
    #[error("line {line}: vertex {vertex} already declared on line {first}")]
    DuplicateVertex {
        line: usize,
        vertex: VertexId,
        first: usize,
    },
    #[error("vertex {vertex} is never declared")]
    MissingVertex { vertex: VertexId },
    #[error("input declares no vertices")]
    Empty,
}

struct VertexLine {
    line: usize,
    priority: Priority,
    owner: Player,
    successors: Vec<u64>,
    name: Option<String>,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_number(line: usize, what: &str, token: &str) -> Result<u64, ParseError> {
    token
        .parse::<u64>()
        .map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

/// Parses a PGSolver description.
///
/// If any priority is 0, all priorities are shifted by
/// [`ZERO_PRIORITY_SHIFT`], which preserves parity and order; the shift is
/// available as [`ParityGame::priority_shift`].
pub fn parse_pgsolver(text: &str) -> Result<ParityGame, ParseError> {
    let mut header_max: Option<u64> = None;
    let mut declared: Vec<Option<VertexLine>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let body = trimmed.strip_suffix(';').unwrap_or(trimmed).trim_end();

        let (head, name) = match body.find('"') {
            Some(open) => {
                let close = body
                    .rfind('"')
                    .filter(|&c| c > open)
                    .ok_or_else(|| syntax(line, "unterminated vertex name"))?;
                if !body[close + 1..].trim().is_empty() {
                    return Err(syntax(line, "unexpected text after vertex name"));
                }
                (&body[..open], Some(body[open + 1..close].to_string()))
            }
            None => (body, None),
        };

        let tokens: Vec<&str> = head.split_whitespace().collect();
        match tokens.first() {
            Some(&"parity") => {
                if tokens.len() != 2 || name.is_some() {
                    return Err(syntax(line, "expected `parity <maxId>;`"));
                }
                if header_max.is_some() || declared.iter().any(Option::is_some) {
                    return Err(syntax(
                        line,
                        "`parity` header must come first and only once",
                    ));
                }
                header_max = Some(parse_number(line, "maximal vertex id", tokens[1])?);
                continue;
            }
            Some(&"start") => continue,
            _ => {}
        }
        if tokens.len() < 4 {
            return Err(syntax(
                line,
                "expected `<id> <priority> <owner> <successors>;`",
            ));
        }

        let id = parse_number(line, "vertex id", tokens[0])?;
        if let Some(max) = header_max {
            if id > max {
                return Err(syntax(
                    line,
                    format!("vertex id {id} exceeds the header maximum {max}"),
                ));
            }
        }
        let id = VertexId::try_from(id)
            .map_err(|_| syntax(line, format!("vertex id {id} too large")))?;
        let priority = parse_number(line, "priority", tokens[1])?;
        let priority = Priority::try_from(priority)
            .map_err(|_| syntax(line, format!("priority {priority} too large")))?;
        let owner = match parse_number(line, "owner", tokens[2])? {
            0 => Player::Anke,
            1 => Player::Boris,
            other => return Err(ParseError::OwnerOutOfRange { line, owner: other }),
        };

        let joined: String = tokens[3..].concat();
        let successors = joined
            .split(',')
            .map(|tok| {
                if tok.is_empty() {
                    Err(syntax(line, "empty successor in list"))
                } else {
                    parse_number(line, "successor", tok)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let slot = id as usize;
        if declared.len() <= slot {
            declared.resize_with(slot + 1, || None);
        }
        if let Some(first) = &declared[slot] {
            return Err(ParseError::DuplicateVertex {
                line,
                vertex: id,
                first: first.line,
            });
        }
        declared[slot] = Some(VertexLine {
            line,
            priority,
            owner,
            successors,
            name,
        });
    }

    if declared.is_empty() {
        return Err(ParseError::Empty);
    }
    let n = declared.len();
    let mut lines = Vec::with_capacity(n);
    for (v, entry) in declared.into_iter().enumerate() {
        lines.push(entry.ok_or(ParseError::MissingVertex {
            vertex: v as VertexId,
        })?);
    }

    let shift = if lines.iter().any(|l| l.priority == 0) {
        ZERO_PRIORITY_SHIFT
    } else {
        0
    };
    let mut priorities = Vec::with_capacity(n);
    let mut owners = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    for (v, l) in lines.into_iter().enumerate() {
        let mut succ = Vec::with_capacity(l.successors.len());
        for s in l.successors {
            if s as usize >= n {
                return Err(ParseError::DanglingSuccessor {
                    line: l.line,
                    vertex: v as VertexId,
                    successor: s,
                });
            }
            succ.push(s as VertexId);
        }
        priorities.push(l.priority + shift);
        owners.push(l.owner);
        successors.push(succ);
        names.push(l.name);
    }

    Ok(ParityGame::from_parts(priorities, owners, successors)
        .with_names(names)
        .with_priority_shift(shift))
}

/// Writes a game in PGSolver format, vertices in id order and successors
/// ascending. Priorities are written as they appeared in the source, i.e.
/// with the ingest shift undone.
pub fn serialize_pgsolver(game: &ParityGame) -> String {
    let mut out = String::new();
    let n = game.vertex_count();
    let _ = writeln!(out, "parity {};", n.saturating_sub(1));
    let shift = game.priority_shift();
    for v in game.vertices() {
        let succ = game
            .successors(v)
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let _ = write!(
            out,
            "{} {} {} {}",
            v,
            game.priority(v) - shift,
            game.owner(v).code(),
            succ
        );
        if let Some(name) = game.name(v) {
            let _ = write!(out, " \"{name}\"");
        }
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_vertex_game() {
        let g = parse_pgsolver("parity 1;\n0 2 0 1;\n1 3 1 0;").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.priorities(), &[2, 3]);
        assert_eq!(g.owners(), &[Player::Anke, Player::Boris]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(g.priority_shift(), 0);
    }

    #[test]
    fn zero_priority_is_shifted() {
        let g = parse_pgsolver("parity 0;\n0 0 0 0;").unwrap();
        assert_eq!(g.priority(0), 2);
        assert_eq!(g.priority_shift(), ZERO_PRIORITY_SHIFT);
    }

    #[test]
    fn owner_out_of_range() {
        let err = parse_pgsolver("parity 0;\n0 2 2 1;").unwrap_err();
        assert_eq!(err, ParseError::OwnerOutOfRange { line: 2, owner: 2 });
    }

    #[test]
    fn dangling_successor() {
        let err = parse_pgsolver("parity 1;\n0 2 0 1;\n1 3 1 7;").unwrap_err();
        assert_eq!(
            err,
            ParseError::DanglingSuccessor {
                line: 3,
                vertex: 1,
                successor: 7
            }
        );
    }

    #[test]
    fn duplicate_vertex() {
        let err = parse_pgsolver("0 2 0 0;\n0 3 1 0;").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicateVertex {
                line: 2,
                vertex: 0,
                first: 1
            }
        );
    }

    #[test]
    fn missing_vertex() {
        let err = parse_pgsolver("0 2 0 0;\n2 3 1 0;").unwrap_err();
        assert_eq!(err, ParseError::MissingVertex { vertex: 1 });
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_pgsolver("parity 1;\n% comment\n0 2 0 1;\n1 x 1 0;").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, .. }), "{err:?}");
        let err = parse_pgsolver("0 2 0;").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));
        assert_eq!(parse_pgsolver("% nothing\n"), Err(ParseError::Empty));
    }

    #[test]
    fn whitespace_comments_and_names() {
        let text =
            "% header comment\nparity 1;\n  0   2 0  1 , 0  \"left\" ;\n\n1 3 1 0;\nstart 0;\n";
        let g = parse_pgsolver(text).unwrap();
        assert_eq!(g.successors(0), &[0, 1]);
        assert_eq!(g.name(0), Some("left"));
        assert_eq!(g.name(1), None);
    }

    #[test]
    fn serialization_is_canonical() {
        let g = parse_pgsolver("1 3 1 0;\n0 2 0 1,0 \"a b\";").unwrap();
        assert_eq!(
            serialize_pgsolver(&g),
            "parity 1;\n0 2 0 0,1 \"a b\";\n1 3 1 0;\n"
        );
    }

    #[test]
    fn unnamed_game_has_no_quotes() {
        let g = parse_pgsolver("parity 1;\n0 2 0 1;\n1 3 1 0;").unwrap();
        let text = serialize_pgsolver(&g);
        assert!(!text.contains('"'));
        assert_eq!(parse_pgsolver(&text).unwrap(), g);
    }

    #[test]
    fn shifted_game_round_trips() {
        let g = parse_pgsolver("parity 1;\n0 0 0 1;\n1 3 1 0;").unwrap();
        let text = serialize_pgsolver(&g);
        assert_eq!(text, "parity 1;\n0 0 0 1;\n1 3 1 0;\n");
        assert_eq!(parse_pgsolver(&text).unwrap(), g);
    }
}
