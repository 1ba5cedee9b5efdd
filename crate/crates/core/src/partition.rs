//! Community assignments and the target community.
//!
//! [`Partition`] caches the aggregates every modularity expression needs:
//! per-community degree `deg(C_i)`, per-community intra edge counts
//! `|E(C_i)|`, their sum `eta` and `delta = sum deg(C_i)^2`. Refreshing after
//! an edge update is O(1) and never changes membership.
//!
//! [`TargetCommunity`] is the node set to hide, with per-member counts of
//! edges into and out of the set and the components of its induced subgraph.

use crate::error::{Error, Result};
use crate::graph::{EdgeUpdate, Graph, NodeId, UpdateKind};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    membership: Vec<usize>,
    communities: Vec<Vec<NodeId>>,
    community_degree: Vec<usize>,
    intra_edges: Vec<usize>,
    eta: usize,
    delta: u64,
    edge_count: usize,
}

impl Partition {
    /// Materializes a partition from explicit node sets.
    ///
    /// Community order is kept as given; members are sorted.
    pub fn build(graph: &Graph, communities: Vec<Vec<NodeId>>) -> Result<Self> {
        let n = graph.node_count();
        let mut membership = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(communities.len());
        for (ci, mut members) in communities.into_iter().enumerate() {
            if members.is_empty() {
                return Err(Error::NotAPartition(format!("community {ci} is empty")));
            }
            members.sort_unstable();
            for &u in &members {
                if u >= n {
                    return Err(Error::UnknownNode(u));
                }
                if membership[u] != usize::MAX {
                    return Err(Error::NotAPartition(format!("node {u} appears more than once")));
                }
                membership[u] = ci;
            }
            sorted.push(members);
        }
        if let Some(u) = membership.iter().position(|&c| c == usize::MAX) {
            return Err(Error::NotAPartition(format!("node {u} is not covered")));
        }

        let k = sorted.len();
        let mut community_degree = vec![0usize; k];
        let mut intra_edges = vec![0usize; k];
        for u in graph.nodes() {
            community_degree[membership[u]] += graph.degree(u);
        }
        for (u, v) in graph.edges() {
            if membership[u] == membership[v] {
                intra_edges[membership[u]] += 1;
            }
        }
        let eta = intra_edges.iter().sum();
        let delta = community_degree.iter().map(|&d| (d as u64) * (d as u64)).sum();
        Ok(Partition {
            membership,
            communities: sorted,
            community_degree,
            intra_edges,
            eta,
            delta,
            edge_count: graph.edge_count(),
        })
    }

    /// Groups nodes by label. Communities are ordered by smallest member.
    pub fn from_labels(graph: &Graph, labels: &[usize]) -> Result<Self> {
        if labels.len() != graph.node_count() {
            return Err(Error::NotAPartition(format!("{} labels for {} nodes", labels.len(), graph.node_count())));
        }
        let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (u, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(u);
        }
        let mut communities: Vec<Vec<NodeId>> = groups.into_values().collect();
        communities.sort_by_key(|c| c[0]);
        Partition::build(graph, communities)
    }

    /// Every node in its own community.
    pub fn singletons(graph: &Graph) -> Result<Self> {
        Partition::build(graph, graph.nodes().map(|u| vec![u]).collect())
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn communities(&self) -> &[Vec<NodeId>] {
        &self.communities
    }

    pub fn community(&self, i: usize) -> Result<&[NodeId]> {
        self.communities.get(i).map(Vec::as_slice).ok_or(Error::UnknownCommunity(i))
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn community_of(&self, u: NodeId) -> usize {
        self.membership[u]
    }

    /// `deg(C_i)`.
    pub fn degree(&self, i: usize) -> Result<usize> {
        self.community_degree.get(i).copied().ok_or(Error::UnknownCommunity(i))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.community_degree
    }

    /// `|E(C_i)|`.
    pub fn intra_edges(&self, i: usize) -> Result<usize> {
        self.intra_edges.get(i).copied().ok_or(Error::UnknownCommunity(i))
    }

    pub fn eta(&self) -> usize {
        self.eta
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Edge count of the graph the aggregates describe.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Index of the community whose member set equals `members`, if any.
    pub fn find_community(&self, members: &[NodeId]) -> Option<usize> {
        let first = *members.first()?;
        let ci = *self.membership.get(first)?;
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        (self.communities[ci] == sorted).then_some(ci)
    }

    /// Aggregates after `update`, which must already be applied to `graph_after`.
    pub fn refresh_after_update(&self, graph_after: &Graph, update: &EdgeUpdate) -> Result<Self> {
        let (u, v) = (update.u, update.v);
        for x in [u, v] {
            if x >= self.membership.len() || !graph_after.contains_node(x) {
                return Err(Error::UnknownNode(x));
            }
        }
        match update.kind {
            UpdateKind::Add if !graph_after.has_edge(u, v) => return Err(Error::EdgeAbsent(u, v)),
            UpdateKind::Del if graph_after.has_edge(u, v) => return Err(Error::EdgeAlreadyPresent(u, v)),
            _ => {}
        }
        let mut next = self.clone();
        next.shift(update);
        Ok(next)
    }

    /// O(1) aggregate update; caller guarantees the update is legal.
    pub(crate) fn shift(&mut self, update: &EdgeUpdate) {
        let (cu, cv) = (self.membership[update.u], self.membership[update.v]);
        let add = update.is_addition();
        let bump = |x: &mut usize| {
            if add {
                *x += 1
            } else {
                *x -= 1
            }
        };
        for c in [cu, cv] {
            let old = self.community_degree[c] as u64;
            bump(&mut self.community_degree[c]);
            let new = self.community_degree[c] as u64;
            self.delta = self.delta - old * old + new * new;
        }
        if cu == cv {
            bump(&mut self.intra_edges[cu]);
            bump(&mut self.eta);
        }
        bump(&mut self.edge_count);
    }
}

/// The node set `H` to hide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetCommunity {
    members: Vec<NodeId>,
    inside: Vec<bool>,
    internal: Vec<usize>,
    external: Vec<usize>,
    components: Vec<Vec<NodeId>>,
    component_of: Vec<usize>,
}

impl TargetCommunity {
    pub fn new(graph: &Graph, members: &[NodeId]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.len() < 2 {
            return Err(Error::TargetTooSmall(members.len()));
        }
        let inside = graph.mask(&members)?;
        let mut internal = Vec::with_capacity(members.len());
        let mut external = Vec::with_capacity(members.len());
        for &u in &members {
            let k = graph.neighbors(u).iter().filter(|&&w| inside[w]).count();
            internal.push(k);
            external.push(graph.degree(u) - k);
        }
        let mut target =
            TargetCommunity { members, inside, internal, external, components: Vec::new(), component_of: Vec::new() };
        target.recompute_components(graph)?;
        Ok(target)
    }

    fn recompute_components(&mut self, graph: &Graph) -> Result<()> {
        self.components = graph.connected_components(&self.members)?;
        self.component_of = vec![0; self.members.len()];
        for (ci, comp) in self.components.iter().enumerate() {
            for &u in comp {
                let idx = self.members.binary_search(&u).expect("component member in H");
                self.component_of[idx] = ci;
            }
        }
        Ok(())
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.inside.get(u).copied().unwrap_or(false)
    }

    fn index(&self, u: NodeId) -> Result<usize> {
        self.members.binary_search(&u).map_err(|_| Error::NotAMember(u))
    }

    /// `|E(u,H)|`.
    pub fn internal(&self, u: NodeId) -> Result<usize> {
        Ok(self.internal[self.index(u)?])
    }

    /// `|E(u, V \ H)|`.
    pub fn external(&self, u: NodeId) -> Result<usize> {
        Ok(self.external[self.index(u)?])
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        let i = self.index(u)?;
        Ok(self.internal[i] + self.external[i])
    }

    /// Components `S(H)` of the induced subgraph, ordered by smallest member.
    pub fn components(&self) -> &[Vec<NodeId>] {
        &self.components
    }

    pub fn component_of(&self, u: NodeId) -> Result<usize> {
        Ok(self.component_of[self.index(u)?])
    }

    /// `|R(u,H)|`: members reachable from `u` inside `H`, not counting `u`.
    pub fn reach(&self, u: NodeId) -> Result<usize> {
        Ok(self.components[self.component_of(u)?].len() - 1)
    }

    /// Counters after `update`, which must already be applied to `graph_after`.
    pub fn refresh_after_update(&self, graph_after: &Graph, update: &EdgeUpdate) -> Result<Self> {
        let (u, v) = (update.u, update.v);
        for x in [u, v] {
            if !graph_after.contains_node(x) || x >= self.inside.len() {
                return Err(Error::UnknownNode(x));
            }
        }
        let mut next = self.clone();
        let add = update.is_addition();
        let (in_u, in_v) = (self.inside[u], self.inside[v]);
        for (x, other_inside) in [(u, in_v), (v, in_u)] {
            if let Ok(i) = next.index(x) {
                let slot = if other_inside { &mut next.internal[i] } else { &mut next.external[i] };
                if add {
                    *slot += 1;
                } else {
                    *slot -= 1;
                }
            }
        }
        if in_u && in_v {
            next.recompute_components(graph_after)?;
        }
        Ok(next)
    }
}
