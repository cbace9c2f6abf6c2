//! The `.hg` text format.
//!
//! ```text
//! # comment lines start with '#'
//! r n m
//! <m lines of r space-separated 0-based ids>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::Hypergraph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a non-negative integer, found {tok:?}")))
        })
        .collect()
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line \"r n m\""))?;
    let nums = parse_numbers(header_line, header)?;
    let [r, n, m] = nums[..] else {
        return Err(parse_err(header_line, "header must be \"r n m\""));
    };
    if r < 2 {
        return Err(parse_err(header_line, format!("uniformity must be at least 2, got {r}")));
    }
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        if edges.len() == m {
            return Err(parse_err(line_no, format!("more than the declared {m} edge lines")));
        }
        let edge = parse_numbers(line_no, line)?;
        // validate one edge at a time so the error carries its line number
        Hypergraph::new(n, r, [&edge]).map_err(|e| parse_err(line_no, e.to_string()))?;
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Hypergraph::new(n, r, edges)
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_hypergraph(&text)
}

/// Serializes with sorted edges, sorted ids and LF line endings.
pub fn serialize(g: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", g.r(), g.n(), g.edge_count()).unwrap();
    for e in g.edges() {
        let ids: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_path() {
        let p3 = parse_hypergraph("2 3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(p3, Hypergraph::new(3, 2, [[0, 1], [1, 2]]).unwrap());
    }

    #[test]
    fn comments_and_normalization() {
        let g = parse_hypergraph("# a path\n2 3 2\n# edges\n2 1\n1 0\n").unwrap();
        assert_eq!(serialize(&g), "2 3 2\n0 1\n1 2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_hypergraph("3 3 1\n0 0 1\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("repeats"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_hypergraph("2 3 1\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hypergraph("2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_hypergraph("2 3 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hypergraph("2 3 1\n0 1\n1 2\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_hypergraph(""), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..8, r in 2usize..4, bits in any::<u64>()) {
            let edges: Vec<Vec<usize>> = crate::hypergraph::r_subsets(n, r)
                .into_iter()
                .enumerate()
                .filter(|(i, _)| bits >> (i % 64) & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let g = Hypergraph::new(n, r, edges).unwrap();
            let text = serialize(&g);
            prop_assert_eq!(parse_hypergraph(&text).unwrap(), g);
            prop_assert_eq!(serialize(&parse_hypergraph(&text).unwrap()), text);
        }
    }
}
