//! Loading graphs, generating synthetic ones, and serializing reports.

mod edgelist;
mod generate;
mod gml;
mod report;

pub use edgelist::{load_edge_list, write_edge_list};
pub use generate::{generate_planted_partition, CommunitySizes, PlantedPartitionParams};
pub use gml::load_gml;
pub use report::{format_sig, read_reports_csv, read_reports_json, write_reports, ReportFormat};

use crate::error::{Error, Result};
use crate::graph::NodeId;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Environment variable naming the default dataset directory.
pub const DATA_DIR_VAR: &str = "DECEPT_DATA_DIR";

/// Bijection between external node labels and dense ids, ordered by first
/// appearance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dense labels `0..n`.
    pub fn identity(n: usize) -> Self {
        let mut t = Self::new();
        for i in 0..n {
            t.intern(&i.to_string());
        }
        t
    }

    /// Id of `label`, assigning the next free id if unseen.
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Resolves whitespace-separated labels to ids.
    pub fn resolve(&self, text: &str) -> Result<Vec<NodeId>> {
        text.split_whitespace().map(|l| self.id(l).ok_or_else(|| Error::UnknownId(l.to_string()))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Gml,
}

impl GraphFormat {
    /// Guess from the file extension; anything but `.gml` is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("gml") => GraphFormat::Gml,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edges" => Ok(GraphFormat::EdgeList),
            "gml" => Ok(GraphFormat::Gml),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

/// `path` itself if it exists, otherwise `path` under `$DECEPT_DATA_DIR`.
pub fn resolve_dataset(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(DATA_DIR_VAR) {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

pub fn parse_graph(bytes: &[u8], format: GraphFormat) -> Result<(crate::graph::Graph, LabelTable)> {
    match format {
        GraphFormat::EdgeList => load_edge_list(bytes),
        GraphFormat::Gml => load_gml(bytes),
    }
}

fn utf8(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::Parse { line, msg: "invalid UTF-8".into() }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_table_is_bijective() {
        let mut t = LabelTable::new();
        assert_eq!(t.intern("b"), 0);
        assert_eq!(t.intern("a"), 1);
        assert_eq!(t.intern("b"), 0);
        assert_eq!(t.label(1), Some("a"));
        assert_eq!(t.resolve("a b").unwrap(), vec![1, 0]);
        assert_eq!(t.resolve("a z"), Err(Error::UnknownId("z".into())));
    }

    #[test]
    fn formats() {
        assert_eq!(GraphFormat::from_path(Path::new("x/karate.GML")), GraphFormat::Gml);
        assert_eq!(GraphFormat::from_path(Path::new("x.txt")), GraphFormat::EdgeList);
        assert_eq!("gml".parse::<GraphFormat>().unwrap(), GraphFormat::Gml);
        assert!("graphml".parse::<GraphFormat>().is_err());
    }
}
