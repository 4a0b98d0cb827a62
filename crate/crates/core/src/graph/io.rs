//! Edge-list text format.
//!
//! ```text
//! # comment
//! n m
//! u v
//! ...
//! ```
//!
//! Line order is stream order. Endpoints are normally 0-indexed integers;
//! when any endpoint is not an integer in `[0, n)`, every label is remapped
//! to a dense id in order of first appearance and the mapping is returned.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use super::DirectedMultigraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub graph: DirectedMultigraph,
    /// `labels[id]` is the original label of dense id `id`, when remapped.
    pub labels: Option<Vec<String>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut raw: Vec<(usize, &str, &str)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let (a, b) = match (toks.next(), toks.next(), toks.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(parse_err(lineno, "expected exactly two fields")),
        };
        match header {
            None => {
                let n = a
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad vertex count {a:?}")))?;
                let m = b
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad edge count {b:?}")))?;
                header = Some((n, m));
            }
            Some(_) => raw.push((lineno, a, b)),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing \"n m\" header"))?;
    if raw.len() != m {
        return Err(parse_err(
            raw.last().map_or(0, |r| r.0),
            format!("header declares {m} edges, found {}", raw.len()),
        ));
    }

    let as_id = |s: &str| s.parse::<usize>().ok().filter(|&v| v < n);
    let numeric = raw
        .iter()
        .all(|&(_, a, b)| as_id(a).is_some() && as_id(b).is_some());

    let mut labels = None;
    let mut edges = Vec::with_capacity(m);
    if numeric {
        for &(_, a, b) in &raw {
            edges.push((as_id(a).unwrap(), as_id(b).unwrap()));
        }
    } else {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        for &(lineno, a, b) in &raw {
            let mut id_of = |s| {
                *ids.entry(s).or_insert_with(|| {
                    names.push(s.to_string());
                    names.len() - 1
                })
            };
            let (u, v) = (id_of(a), id_of(b));
            if names.len() > n {
                return Err(parse_err(
                    lineno,
                    format!("more than {n} distinct vertex labels"),
                ));
            }
            edges.push((u, v));
        }
        labels = Some(names);
    }
    let graph = DirectedMultigraph::new(n, edges).map_err(|e| match e {
        Error::SelfLoop { index, vertex } => {
            parse_err(raw[index].0, format!("self-loop on vertex {vertex}"))
        }
        other => other,
    })?;
    Ok(ParsedGraph { graph, labels })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> std::io::Result<Result<ParsedGraph>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_edge_list(&text))
}

/// Writes `g` in edge-list form; `comments` are emitted as `#` lines first.
pub fn write_edge_list<W: Write>(
    g: &DirectedMultigraph,
    comments: &[String],
    mut out: W,
) -> std::io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_round_trip() {
        let g = DirectedMultigraph::new(4, vec![(0, 1), (3, 2), (0, 1)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &["hello".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# hello\n4 3\n"));
        let parsed = parse_edge_list(&text).unwrap();
        assert_eq!(parsed.graph, g);
        assert!(parsed.labels.is_none());
    }

    #[test]
    fn arbitrary_labels_are_remapped() {
        let parsed = parse_edge_list("3 2\nalice bob\nbob 7\n").unwrap();
        assert_eq!(parsed.graph.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(
            parsed.labels.unwrap(),
            vec!["alice".to_string(), "bob".into(), "7".into()]
        );
    }

    #[test]
    fn errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 1 5\n").is_err());
        assert!(parse_edge_list("2 1\n1 1\n").is_err());
        assert!(parse_edge_list("2 3\na b\nb c\nc a\n").is_err());
    }
}
