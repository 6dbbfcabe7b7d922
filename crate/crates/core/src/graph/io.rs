use std::fmt::Write as _;

use super::Graph;
use crate::error::ParseError;

fn parse_index(tok: &str) -> Option<usize> {
    tok.parse::<usize>().ok()
}

/// Parses the plain edge-list format: a first line holding the vertex count,
/// then one `j k` pair per line with 0-based indices. Blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let mut header_tokens = header.split_whitespace();
    let n = match (header_tokens.next().and_then(parse_index), header_tokens.next()) {
        (Some(n), None) => n,
        _ => {
            return Err(ParseError::Malformed {
                line: header_line,
                text: header.to_string(),
            })
        }
    };

    let mut graph = Graph::new(n, []).expect("empty graph is valid");
    for (line, text) in lines {
        let mut tokens = text.split_whitespace();
        let (a, b) = match (
            tokens.next().and_then(parse_index),
            tokens.next().and_then(parse_index),
            tokens.next(),
        ) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    text: text.to_string(),
                })
            }
        };
        for vertex in [a, b] {
            if vertex >= n {
                return Err(ParseError::VertexOutOfRange { line, vertex, n });
            }
        }
        if a == b {
            return Err(ParseError::SelfLoop { line, vertex: a });
        }
        if !graph.insert(a, b) {
            return Err(ParseError::DuplicateEdge { line, a, b });
        }
    }
    Ok(graph)
}

impl Graph {
    /// Renders the graph in the format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n_vertices());
        for &(a, b) in self.edges() {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}
