use super::{utf8, LabelTable};
use crate::error::{Error, Result};
use crate::graph::Graph;
use std::fmt::Write;

/// Whitespace-separated `u v` pairs, one per line. Blank lines and lines
/// starting with `#` are skipped, as is anything after the second column.
pub fn load_edge_list(bytes: &[u8]) -> Result<(Graph, LabelTable)> {
    let text = utf8(bytes)?;
    let mut labels = LabelTable::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(Error::Parse { line: i + 1, msg: format!("expected two node labels, got '{line}'") });
        };
        if a == b {
            return Err(Error::SelfLoopLine(i + 1));
        }
        edges.push((labels.intern(a), labels.intern(b)));
    }
    Ok((Graph::from_edges(labels.len(), edges)?, labels))
}

/// One `u v` line per edge with `u < v` by id, written with external labels.
pub fn write_edge_list(graph: &Graph, labels: &LabelTable) -> String {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        let name = |x| labels.label(x).map(str::to_string).unwrap_or_else(|| x.to_string());
        let _ = writeln!(out, "{} {}", name(u), name(v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph() {
        let (g, _) = load_edge_list(b"0 1\n1 2\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
    }

    #[test]
    fn duplicates_collapse() {
        let (g, labels) = load_edge_list(b"# comment\n\na b\nb a\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(labels.labels(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn errors() {
        assert_eq!(load_edge_list(b"x x\n").unwrap_err(), Error::SelfLoopLine(1));
        assert!(matches!(load_edge_list(b"0 1\n2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list(b"0 1\n\xff 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn round_trip() {
        let (g, labels) = load_edge_list(b"a b\nb c\nc a\nd a\n").unwrap();
        let text = write_edge_list(&g, &labels);
        let (g2, labels2) = load_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g2.edge_count(), 4);
        for (u, v) in g.edges() {
            let (a, b) = (labels.label(u).unwrap(), labels.label(v).unwrap());
            assert!(g2.has_edge(labels2.id(a).unwrap(), labels2.id(b).unwrap()));
        }
    }
}
