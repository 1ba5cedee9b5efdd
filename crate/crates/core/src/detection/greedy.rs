use super::require_nodes;
use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use std::collections::BTreeMap;

/// Agglomerative modularity maximization: starting from singletons, merge
/// the pair of adjacent communities with the largest gain until no merge
/// gains. Gains are compared as `2m e_ij - d_i d_j` in integers; ties go to
/// the lexicographically smallest index pair.
pub fn detect_greedy_agglomerative(graph: &Graph) -> Result<Partition> {
    require_nodes(graph)?;
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Partition::singletons(graph);
    }
    let two_m = 2 * graph.edge_count() as i64;

    // links[i][j] = edges between live communities i and j, i != j
    let mut links: Vec<BTreeMap<usize, i64>> =
        graph.nodes().map(|u| graph.neighbors(u).iter().map(|&v| (v, 1)).collect()).collect();
    let mut degree: Vec<i64> = graph.nodes().map(|u| graph.degree(u) as i64).collect();
    let mut owner: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in links.iter().enumerate() {
            for (&j, &e) in row.range(i + 1..) {
                let gain = two_m * e - degree[i] * degree[j];
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= 0 {
            break;
        }

        let absorbed = std::mem::take(&mut links[j]);
        for (k, e) in absorbed {
            links[k].remove(&j);
            if k != i {
                *links[i].entry(k).or_insert(0) += e;
                *links[k].entry(i).or_insert(0) += e;
            }
        }
        links[i].remove(&j);
        degree[i] += degree[j];
        degree[j] = 0;
        for o in owner.iter_mut().filter(|o| **o == j) {
            *o = i;
        }
    }
    Partition::from_labels(graph, &owner)
}
