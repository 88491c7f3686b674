//! Line-oriented instance format.
//!
//! ```text
//! dvrp 1
//! D 14
//! root 0
//! edge 1 0 3
//! edge 2 0 4
//! terminals 1 2
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Blank lines are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{EdgeSpec, RoutingInstance, TreeInstance, VertexId};
use crate::error::{Error, Result};

pub fn parse_instance(text: &str) -> Result<RoutingInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let syntax = |line: usize, message: &str| Error::Syntax {
        line,
        message: message.to_string(),
    };
    let eof = || Error::Syntax {
        line: text.lines().count(),
        message: "unexpected end of input".into(),
    };

    let (ln, header) = lines.next().ok_or_else(eof)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    match tokens.as_slice() {
        ["dvrp", "1"] => {}
        ["dvrp", v] => return Err(syntax(ln, &format!("unsupported format version {v}"))),
        _ => return Err(syntax(ln, "expected header `dvrp 1`")),
    }

    let (ln, line) = lines.next().ok_or_else(eof)?;
    let bound = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["D", value] => parse_weight(ln, value)?,
        _ => return Err(syntax(ln, "expected `D <integer>`")),
    };
    if bound == 0 {
        return Err(syntax(ln, "distance bound must be positive"));
    }

    let (ln, line) = lines.next().ok_or_else(eof)?;
    let root = match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["root", id] => parse_id(ln, id)?,
        _ => return Err(syntax(ln, "expected `root <id>`")),
    };

    let mut seen: HashSet<VertexId> = HashSet::from([root]);
    let mut edges = Vec::new();
    let mut terminals = None;
    for (ln, line) in lines {
        if terminals.is_some() {
            return Err(syntax(ln, "content after `terminals` line"));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["edge", child, parent, weight] => {
                let child = parse_id(ln, child)?;
                let parent = parse_id(ln, parent)?;
                let weight = parse_weight(ln, weight)?;
                if !seen.insert(child) {
                    return Err(Error::DuplicateVertex { line: ln, id: child });
                }
                edges.push(EdgeSpec::new(child, parent, weight));
            }
            ["edge", ..] => return Err(syntax(ln, "expected `edge <child-id> <parent-id> <weight>`")),
            ["terminals", ids @ ..] => {
                let ids = ids.iter().map(|t| parse_id(ln, t)).collect::<Result<Vec<_>>>()?;
                terminals = Some(ids);
            }
            [other, ..] => return Err(syntax(ln, &format!("unknown record `{other}`"))),
            [] => unreachable!("blank lines are filtered"),
        }
    }
    let terminals = terminals.ok_or_else(|| syntax(text.lines().count(), "missing `terminals` line"))?;
    RoutingInstance::new(bound, root, &edges, &terminals)
}

fn parse_id(line: usize, token: &str) -> Result<VertexId> {
    token.parse().map_err(|_| Error::Syntax {
        line,
        message: format!("invalid vertex id `{token}`"),
    })
}

fn parse_weight(line: usize, token: &str) -> Result<u64> {
    if token.starts_with('-') && token[1..].parse::<u64>().is_ok() {
        return Err(Error::NegativeWeight { line });
    }
    token.parse().map_err(|_| Error::Syntax {
        line,
        message: format!("expected a non-negative integer, found `{token}`"),
    })
}

pub fn serialize_instance(inst: &RoutingInstance) -> String {
    serialize_instance_with_comments(inst, &[])
}

/// Canonical text, preceded by one `# ...` line per comment.
pub fn serialize_instance_with_comments(inst: &RoutingInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "dvrp 1");
    let _ = writeln!(out, "D {}", inst.distance_bound());
    let _ = writeln!(out, "root {}", inst.root_id());
    for e in inst.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.child, e.parent, e.weight);
    }
    out.push_str("terminals");
    for t in inst.terminal_ids() {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAR: &str = "dvrp 1\nD 14\nroot 0\nedge 1 0 3\nedge 2 0 4\nterminals 1 2\n";

    #[test]
    fn parses_star() {
        let inst = parse_instance(STAR).unwrap();
        assert_eq!(inst.terminals().len(), 2);
        assert_eq!(inst.distance_bound(), 14);
        assert_eq!(serialize_instance(&inst), STAR);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# gamma 20\n\ndvrp 1 # header\nD 14\nroot 0\nedge 1 0 3\n\nedge 2 0 4\nterminals 1 2";
        assert_eq!(parse_instance(text).unwrap(), parse_instance(STAR).unwrap());
    }

    #[test]
    fn empty_terminal_line() {
        let inst = parse_instance("dvrp 1\nD 3\nroot 5\nterminals\n").unwrap();
        assert!(inst.terminals().is_empty());
        assert_eq!(serialize_instance(&inst), "dvrp 1\nD 3\nroot 5\nterminals\n");
    }

    #[test]
    fn negative_weight() {
        let err = parse_instance("dvrp 1\nD 14\nroot 0\nedge 1 0 -1\nterminals 1\n").unwrap_err();
        assert_eq!(err, Error::NegativeWeight { line: 4 });
        assert_eq!(err.to_string(), "line 4: negative weight");
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let cases = [
            ("dvrp 2\n", 1),
            ("dvrp 1\nD x\n", 2),
            ("dvrp 1\nD 4\nroot 0\nedge 1 0\nterminals\n", 4),
            ("dvrp 1\nD 4\nroot 0\nedge 1 0 2.5\nterminals\n", 4),
            ("dvrp 1\nD 4\nroot 0\nterminals 1\nedge 1 0 1\n", 5),
            ("dvrp 1\nD 4\nroot 0\nbogus\nterminals\n", 4),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn duplicate_vertex() {
        let err = parse_instance("dvrp 1\nD 4\nroot 0\nedge 1 0 1\nedge 1 0 2\nterminals\n").unwrap_err();
        assert_eq!(err, Error::DuplicateVertex { line: 5, id: 1 });
        let err = parse_instance("dvrp 1\nD 4\nroot 0\nedge 0 0 1\nterminals\n").unwrap_err();
        assert_eq!(err, Error::DuplicateVertex { line: 4, id: 0 });
    }

    #[test]
    fn structure_errors() {
        let cyc = parse_instance("dvrp 1\nD 4\nroot 0\nedge 1 2 1\nedge 2 1 1\nterminals\n");
        assert!(matches!(cyc, Err(Error::Cyclic(_))));
        let dis = parse_instance("dvrp 1\nD 4\nroot 0\nedge 1 9 1\nterminals\n");
        assert_eq!(dis, Err(Error::Disconnected(9)));
    }
}
