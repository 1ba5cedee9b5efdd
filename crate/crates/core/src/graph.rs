//! Undirected simple graphs over dense node ids.
//!
//! A [`Graph`] is a value: [`Graph::apply_update`] returns a new graph and
//! leaves the receiver untouched. Neighbor lists are kept sorted so that
//! membership checks are a binary search and iteration order is stable.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Add,
    Del,
}

/// A single edge insertion or deletion.
///
/// Endpoint order is preserved as given; deception algorithms put the
/// target-community endpoint first for inter-community edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeUpdate {
    pub kind: UpdateKind,
    pub u: NodeId,
    pub v: NodeId,
}

impl EdgeUpdate {
    pub fn add(u: NodeId, v: NodeId) -> Self {
        EdgeUpdate { kind: UpdateKind::Add, u, v }
    }

    pub fn del(u: NodeId, v: NodeId) -> Self {
        EdgeUpdate { kind: UpdateKind::Del, u, v }
    }

    pub fn is_addition(&self) -> bool {
        self.kind == UpdateKind::Add
    }

    /// Endpoints as an ordered `(min, max)` pair.
    pub fn key(&self) -> (NodeId, NodeId) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    /// Same edge, opposite kind.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            UpdateKind::Add => UpdateKind::Del,
            UpdateKind::Del => UpdateKind::Add,
        };
        EdgeUpdate { kind, ..*self }
    }
}

impl fmt::Display for EdgeUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            UpdateKind::Add => "add",
            UpdateKind::Del => "del",
        };
        write!(f, "{tag}({},{})", self.u, self.v)
    }
}

impl std::str::FromStr for EdgeUpdate {
    type Err = Error;

    /// Parses the `add(u,v)` / `del(u,v)` form produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad update '{s}'") };
        let s = s.trim();
        let (tag, rest) = s.split_once('(').ok_or_else(bad)?;
        let (u, v) = rest.strip_suffix(')').and_then(|r| r.split_once(',')).ok_or_else(bad)?;
        let u = u.trim().parse().map_err(|_| bad())?;
        let v = v.trim().parse().map_err(|_| bad())?;
        match tag {
            "add" => Ok(EdgeUpdate::add(u, v)),
            "del" => Ok(EdgeUpdate::del(u, v)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph from an edge list. Duplicate and reversed pairs collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            if !g.has_edge(u, v) {
                g.insert_unchecked(u, v);
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.adj.len()
    }

    pub fn contains_node(&self, u: NodeId) -> bool {
        u < self.adj.len()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    fn check_node(&self, u: NodeId) -> Result<()> {
        if self.contains_node(u) {
            Ok(())
        } else {
            Err(Error::UnknownNode(u))
        }
    }

    fn check_pair(&self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    /// Checks the preconditions of `update` without applying it.
    pub fn validate_update(&self, update: &EdgeUpdate) -> Result<()> {
        let (u, v) = (update.u, update.v);
        self.check_pair(u, v)?;
        match update.kind {
            UpdateKind::Add if self.has_edge(u, v) => Err(Error::EdgeAlreadyPresent(u, v)),
            UpdateKind::Del if !self.has_edge(u, v) => Err(Error::EdgeAbsent(u, v)),
            _ => Ok(()),
        }
    }

    /// Returns a new graph with `update` applied.
    pub fn apply_update(&self, update: &EdgeUpdate) -> Result<Graph> {
        let mut next = self.clone();
        next.apply_update_mut(update)?;
        Ok(next)
    }

    /// In-place variant of [`Graph::apply_update`] for owners of the value.
    pub fn apply_update_mut(&mut self, update: &EdgeUpdate) -> Result<()> {
        self.validate_update(update)?;
        match update.kind {
            UpdateKind::Add => self.insert_unchecked(update.u, update.v),
            UpdateKind::Del => self.remove_unchecked(update.u, update.v),
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, u: NodeId, v: NodeId) {
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            if let Err(pos) = list.binary_search(&b) {
                list.insert(pos, b);
            }
        }
        self.edge_count += 1;
    }

    fn remove_unchecked(&mut self, u: NodeId, v: NodeId) {
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            if let Ok(pos) = list.binary_search(&b) {
                list.remove(pos);
            }
        }
        self.edge_count -= 1;
    }

    /// Boolean membership mask for `subset`, validating every id.
    pub(crate) fn mask(&self, subset: &[NodeId]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.node_count()];
        for &u in subset {
            self.check_node(u)?;
            mask[u] = true;
        }
        Ok(mask)
    }

    /// Connected components of the subgraph induced by `subset`.
    ///
    /// Each component is sorted ascending; components are ordered by their
    /// smallest member.
    pub fn connected_components(&self, subset: &[NodeId]) -> Result<Vec<Vec<NodeId>>> {
        let inside = self.mask(subset)?;
        let mut seen = vec![false; self.node_count()];
        let mut starts: Vec<NodeId> = subset.to_vec();
        starts.sort_unstable();
        starts.dedup();

        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for s in starts {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in &self.adj[x] {
                    if inside[y] && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        Ok(components)
    }

    /// Members of `target` reachable from `u` using only nodes of `target`,
    /// excluding `u` itself.
    pub fn reachable_within(&self, target: &[NodeId], u: NodeId) -> Result<Vec<NodeId>> {
        let inside = self.mask(target)?;
        self.check_node(u)?;
        if !inside[u] {
            return Err(Error::NotAMember(u));
        }
        let mut seen = vec![false; self.node_count()];
        seen[u] = true;
        let mut stack = vec![u];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Bridges of the subgraph induced by `subset`, as `(min, max)` pairs in
    /// ascending order.
    ///
    /// Iterative low-link DFS; parent edges are skipped by edge identity,
    /// which is sufficient on a simple graph.
    pub fn induced_bridges(&self, subset: &[NodeId]) -> Result<Vec<(NodeId, NodeId)>> {
        let inside = self.mask(subset)?;
        let n = self.node_count();
        const UNSEEN: usize = usize::MAX;
        let mut disc = vec![UNSEEN; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        let mut bridges = Vec::new();

        let mut roots: Vec<NodeId> = subset.to_vec();
        roots.sort_unstable();
        roots.dedup();
        for root in roots {
            if disc[root] != UNSEEN {
                continue;
            }
            // (node, parent, next neighbor index)
            let mut stack: Vec<(NodeId, NodeId, usize)> = vec![(root, UNSEEN, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let (x, parent, idx) = *frame;
                if idx < self.adj[x].len() {
                    frame.2 += 1;
                    let y = self.adj[x][idx];
                    if !inside[y] || y == parent {
                        continue;
                    }
                    if disc[y] == UNSEEN {
                        disc[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        stack.push((y, x, 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if parent != UNSEEN {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] > disc[parent] {
                            bridges.push((parent.min(x), parent.max(x)));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        Ok(bridges)
    }
}
