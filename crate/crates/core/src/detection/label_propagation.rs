use super::require_nodes;
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_SWEEPS: usize = 100;

/// Asynchronous label propagation. A node keeps its label while that label
/// is among the most frequent around it, otherwise it takes one of the most
/// frequent labels at random. Stops at a fixed point or after 100 sweeps.
pub fn detect_label_propagation(graph: &Graph, seed: u64) -> Result<Partition> {
    require_nodes(graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = graph.node_count();
    let mut label: Vec<usize> = (0..n).collect();
    let mut order: Vec<NodeId> = graph.nodes().collect();
    let mut count = vec![0usize; n];
    let mut seen: Vec<usize> = Vec::new();
    let mut top: Vec<usize> = Vec::new();

    for _ in 0..MAX_SWEEPS {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            if graph.degree(u) == 0 {
                continue;
            }
            for &v in graph.neighbors(u) {
                if count[label[v]] == 0 {
                    seen.push(label[v]);
                }
                count[label[v]] += 1;
            }
            let best = seen.iter().map(|&l| count[l]).max().unwrap_or(0);
            top.clear();
            top.extend(seen.iter().copied().filter(|&l| count[l] == best));
            top.sort_unstable();
            if count[label[u]] != best {
                label[u] = *top.choose(&mut rng).expect("non-empty neighborhood");
                changed = true;
            }
            for l in seen.drain(..) {
                count[l] = 0;
            }
        }
        if !changed {
            break;
        }
    }
    Partition::from_labels(graph, &label)
}
