//! Shared helpers for unit tests.

use crate::graph::{EdgeUpdate, Graph};
use rand::Rng;

/// Erdős–Rényi-style graph with roughly `edges` distinct edges.
pub fn random_graph(n: usize, edges: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for _ in 0..edges {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !g.has_edge(a, b) {
            g.apply_update_mut(&EdgeUpdate::add(a, b)).unwrap();
        }
    }
    g
}

/// Random legal update on `g`: deletes the pair if present, adds it otherwise.
pub fn random_update(g: &Graph, rng: &mut impl Rng) -> Option<EdgeUpdate> {
    let n = g.node_count();
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let up = if g.has_edge(a, b) { EdgeUpdate::del(a, b) } else { EdgeUpdate::add(a, b) };
        return Some(up);
    }
    None
}
