use std::collections::HashMap;

use super::{DirectedGraph, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Separator {
    #[default]
    Tab,
    /// Any run of ASCII whitespace.
    Whitespace,
    Char(char),
}

/// How node fields are turned into dense ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeIds {
    /// Arbitrary strings, numbered in order of first appearance.
    #[default]
    Labels,
    /// Non-negative integers used as ids directly; node count is max id + 1.
    ZeroBased,
    /// Positive integers shifted down by one.
    OneBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeListOptions {
    pub separator: Separator,
    /// Expand every line into both directions.
    pub undirected: bool,
    pub ids: NodeIds,
}

impl EdgeListOptions {
    pub fn undirected(mut self, undirected: bool) -> Self {
        self.undirected = undirected;
        self
    }

    pub fn separator(mut self, separator: Separator) -> Self {
        self.separator = separator;
        self
    }

    pub fn ids(mut self, ids: NodeIds) -> Self {
        self.ids = ids;
        self
    }
}

fn split_fields(line: &str, sep: Separator) -> Vec<&str> {
    match sep {
        Separator::Tab => line.split('\t').map(str::trim).collect(),
        Separator::Whitespace => line.split_ascii_whitespace().collect(),
        Separator::Char(c) => line.split(c).map(str::trim).collect(),
    }
}

/// Parses a `src<sep>dst` edge list.
///
/// Blank lines and lines starting with `#` are skipped. The resulting
/// graph may have no edges (for example when every line is a self-loop);
/// solvers reject such graphs with [`Error::EmptyGraph`].
pub fn parse_edge_list(text: &str, opts: &EdgeListOptions) -> Result<DirectedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, NodeId> = HashMap::new();
    let mut max_id: Option<u64> = None;
    let mut edges = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(line.trim(), opts.separator);
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two non-empty fields, found {:?}", fields),
            });
        }
        // labels are written back out tab-separated
        if let Some(f) = fields.iter().find(|f| f.contains('\t')) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("node field {f:?} contains a tab"),
            });
        }
        // ...and a leading '#' would then read back as a comment
        if let Some(f) = fields.iter().find(|f| f.starts_with('#')) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("node field {f:?} starts with '#'"),
            });
        }
        let mut ends = [0 as NodeId; 2];
        for (slot, field) in ends.iter_mut().zip(&fields) {
            *slot = match opts.ids {
                NodeIds::Labels => match index.get(*field) {
                    Some(&id) => id,
                    None => {
                        if labels.len() >= NodeId::MAX as usize {
                            return Err(Error::Parse {
                                line: line_no,
                                message: "too many distinct nodes".into(),
                            });
                        }
                        let id = labels.len() as NodeId;
                        labels.push((*field).to_string());
                        index.insert((*field).to_string(), id);
                        id
                    }
                },
                NodeIds::ZeroBased | NodeIds::OneBased => {
                    let value: u64 = field.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("node id {field:?} is not a non-negative integer"),
                    })?;
                    let value = if opts.ids == NodeIds::OneBased {
                        value.checked_sub(1).ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: "node id 0 in a one-based edge list".into(),
                        })?
                    } else {
                        value
                    };
                    // Dense ids for up to a few hundred million nodes; anything
                    // larger would allocate an absurd node table.
                    if value >= (1 << 31) {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("node id {field} is too large"),
                        });
                    }
                    max_id = Some(max_id.map_or(value, |m| m.max(value)));
                    value as NodeId
                }
            };
        }
        edges.push((ends[0], ends[1]));
        if opts.undirected {
            edges.push((ends[1], ends[0]));
        }
    }

    if opts.ids != NodeIds::Labels {
        let n = max_id.map_or(0, |m| m as usize + 1);
        let offset = usize::from(opts.ids == NodeIds::OneBased);
        labels = (0..n).map(|i| (i + offset).to_string()).collect();
    }
    DirectedGraph::with_labels(labels, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tab_inside_field_is_rejected() {
        let opts = EdgeListOptions::default().separator(Separator::Char(','));
        assert!(matches!(
            parse_edge_list("a\tb,c\n", &opts),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn two_cycle_from_labels() {
        let g = parse_edge_list("a\tb\nb\ta", &EdgeListOptions::default()).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(g.in_degrees(), vec![1, 1]);
        assert_eq!(g.out_degrees(), vec![1, 1]);
        assert_eq!(g.labels(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn self_loop_only_yields_empty_graph() {
        let g = parse_edge_list("a\ta\n", &EdgeListOptions::default()).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(matches!(g.require_edges(), Err(Error::EmptyGraph)));
    }

    #[test]
    fn hash_leading_field_is_rejected() {
        let opts = EdgeListOptions::default().separator(Separator::Whitespace);
        assert!(matches!(
            parse_edge_list("a b\n; #x\n", &opts),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("a#\tb\n", &EdgeListOptions::default()).is_ok());
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let text = "# header\r\n\r\n1\t2\r\n  # indented comment\n2\t3\n";
        let g = parse_edge_list(text, &EdgeListOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.label(0), "1");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_edge_list("a\tb\nc\n", &EdgeListOptions::default()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_edge_list("a\tb\tc\n", &EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn undirected_expansion_and_duplicates() {
        let opts = EdgeListOptions::default().undirected(true);
        let g = parse_edge_list("x\ty\ny\tx\nx\ty\n", &opts).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn integer_id_modes() {
        let opts = EdgeListOptions::default()
            .separator(Separator::Whitespace)
            .ids(NodeIds::ZeroBased);
        let g = parse_edge_list("0 3\n3   1\n", &opts).unwrap();
        assert_eq!(g.node_count(), 4);
        assert!(g.has_edge(0, 3) && g.has_edge(3, 1));
        assert_eq!(g.in_degree(2), 0);

        let opts = opts.ids(NodeIds::OneBased);
        let g = parse_edge_list("1 2\n2 3\n", &opts).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label(0), "1");
        assert!(g.has_edge(0, 1));
        assert!(matches!(
            parse_edge_list("0 1\n", &opts),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("a 1\n", &opts),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn custom_separator() {
        let opts = EdgeListOptions::default().separator(Separator::Char(','));
        let g = parse_edge_list("u, v\nv,w\n", &opts).unwrap();
        assert_eq!(g.labeled_edges(), vec![("u", "v"), ("v", "w")]);
    }
}
