//! How well a target community is hidden inside a detected partition.
//!
//! ```text
//! score = (1 - (|S(H)| - 1)/(|H| - 1)) * (1/2 spread + 1/2 hiding)
//! spread = (k - 1) / |H|
//! hiding = 1 - mean over the k communities C meeting H of |C & H| / |C|
//! ```
//!
//! `S(H)` are the connected components of the subgraph induced by `H`. The
//! spread denominator is `|H|`, so the score stays below 1.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::partition::Partition;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub components: usize,
    pub communities_met: usize,
    pub connectivity: f64,
    pub spread: f64,
    pub hiding: f64,
    pub score: f64,
}

pub fn deception_score(graph: &Graph, partition: &Partition, target: &[NodeId]) -> Result<ScoreBreakdown> {
    let mut members = target.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() < 2 {
        return Err(Error::TargetTooSmall(members.len()));
    }
    if partition.membership().len() != graph.node_count() {
        return Err(Error::NotAPartition(format!(
            "partition covers {} nodes, graph has {}",
            partition.membership().len(),
            graph.node_count()
        )));
    }
    let h = members.len() as f64;
    let components = graph.connected_components(&members)?.len();

    let mut overlap: Vec<(usize, usize)> = Vec::new();
    for &u in &members {
        let c = partition.community_of(u);
        match overlap.iter_mut().find(|(id, _)| *id == c) {
            Some((_, n)) => *n += 1,
            None => overlap.push((c, 1)),
        }
    }
    let k = overlap.len();
    let spread = (k - 1) as f64 / h;
    let mut share = 0.0;
    for &(c, n) in &overlap {
        share += n as f64 / partition.community(c)?.len() as f64;
    }
    let hiding = 1.0 - share / k as f64;
    let connectivity = 1.0 - (components - 1) as f64 / (h - 1.0);
    Ok(ScoreBreakdown {
        components,
        communities_met: k,
        connectivity,
        spread,
        hiding,
        score: connectivity * (0.5 * spread + 0.5 * hiding),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::testutil::random_graph;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn anchor_on_bridged_triangles() {
        let g = bridged_triangles();
        let p = Partition::from_labels(&g, &[0, 0, 1, 0, 0, 1]).unwrap();
        let s = deception_score(&g, &p, &[0, 1, 2]).unwrap();
        assert_eq!(s.components, 1);
        assert!((s.hiding - 0.5).abs() < 1e-15);
        assert!((s.score - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn target_equal_to_a_community_scores_zero() {
        let g = bridged_triangles();
        let p = Partition::from_labels(&g, &[0, 0, 0, 1, 1, 1]).unwrap();
        assert_eq!(deception_score(&g, &p, &[2, 1, 0]).unwrap().score, 0.0);
    }

    #[test]
    fn fragmented_target_scores_zero() {
        let g = bridged_triangles();
        let p = Partition::singletons(&g).unwrap();
        // 0 and 4 are not adjacent
        let s = deception_score(&g, &p, &[0, 4]).unwrap();
        assert_eq!(s.components, 2);
        assert_eq!(s.score, 0.0);
    }

    #[test]
    fn rejects_small_targets() {
        let g = bridged_triangles();
        let p = Partition::singletons(&g).unwrap();
        assert_eq!(deception_score(&g, &p, &[3, 3]), Err(Error::TargetTooSmall(1)));
    }

    #[test]
    fn bounded_and_monotone_in_merges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(3..30);
            let g = random_graph(n, rng.gen_range(0..2 * n), &mut rng);
            let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
            let p = Partition::from_labels(&g, &labels).unwrap();
            let mut nodes: Vec<NodeId> = g.nodes().collect();
            nodes.shuffle(&mut rng);
            let h = &nodes[..rng.gen_range(2..=n)];
            let s = deception_score(&g, &p, h).unwrap();
            assert!((0.0..=1.0).contains(&s.score));
            for t in [s.connectivity, s.spread, s.hiding] {
                assert!((0.0..=1.0).contains(&t));
            }

            let comps = g.connected_components(h).unwrap();
            if comps.len() >= 2 {
                let joined = g.apply_update(&crate::graph::EdgeUpdate::add(comps[0][0], comps[1][0])).unwrap();
                let merged = deception_score(&joined, &p, h).unwrap();
                assert!(merged.score >= s.score);
            }
        }
    }
}
