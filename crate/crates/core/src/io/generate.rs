use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunitySizes {
    /// `k` communities whose sizes differ by at most one.
    Equal {
        k: usize,
    },
    /// Sizes between `min` and `max`. The count is `n` over the midpoint,
    /// clamped to what the bounds allow; the nodes left after giving every
    /// community `min` are handed out uniformly at random.
    Bounded {
        min: usize,
        max: usize,
    },
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionParams {
    pub n: usize,
    pub sizes: CommunitySizes,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn community_sizes(params: &PlantedPartitionParams, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = params.n;
    let sizes = match &params.sizes {
        CommunitySizes::Equal { k } => {
            if *k == 0 || *k > n {
                return Err(invalid(format!("cannot split {n} nodes into {k} communities")));
            }
            (0..*k).map(|i| n / k + usize::from(i < n % k)).collect()
        }
        CommunitySizes::Bounded { min, max } => {
            if min > max || *min == 0 {
                return Err(invalid(format!("size bounds {min}..{max} are empty")));
            }
            let (lo, hi) = (n.div_ceil(*max), n / min);
            if lo > hi {
                return Err(invalid(format!("{n} nodes cannot be split into sizes {min}..{max}")));
            }
            let k = ((2 * n).div_ceil(min + max)).clamp(lo, hi);
            let mut sizes = vec![*min; k];
            let mut open: Vec<usize> = (0..k).filter(|_| min < max).collect();
            for _ in 0..n - k * min {
                let slot = rng.gen_range(0..open.len());
                sizes[open[slot]] += 1;
                if sizes[open[slot]] == *max {
                    open.swap_remove(slot);
                }
            }
            sizes
        }
        CommunitySizes::Explicit(sizes) => {
            if sizes.iter().sum::<usize>() != n {
                return Err(invalid(format!("sizes sum to {}, not {n}", sizes.iter().sum::<usize>())));
            }
            sizes.clone()
        }
    };
    if sizes.iter().any(|&s| s < 2) {
        return Err(invalid("every community needs at least 2 nodes"));
    }
    Ok(sizes)
}

/// Calls `f(v)` for each `v` in `from..to` independently with probability
/// `p`, jumping over misses with geometric skips.
fn bernoulli_range(from: usize, to: usize, p: f64, rng: &mut ChaCha8Rng, mut f: impl FnMut(usize)) {
    if p <= 0.0 || from >= to {
        return;
    }
    if p >= 1.0 {
        (from..to).for_each(f);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut v = from;
    loop {
        let u: f64 = rng.gen();
        let skip = ((1.0 - u).ln() / log_q).floor();
        if skip >= (to - v) as f64 {
            return;
        }
        v += skip as usize;
        f(v);
        v += 1;
        if v >= to {
            return;
        }
    }
}

/// Planted-partition graph. Communities occupy consecutive id ranges; the
/// ground truth is returned alongside the graph.
pub fn generate_planted_partition(params: &PlantedPartitionParams) -> Result<(Graph, Vec<Vec<NodeId>>)> {
    let (p_in, p_out) = (params.p_in, params.p_out);
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out > p_in {
        return Err(invalid(format!("need 0 <= p_out <= p_in <= 1, got p_in={p_in} p_out={p_out}")));
    }
    if params.n == 0 {
        return Err(invalid("n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sizes = community_sizes(params, &mut rng)?;

    let mut truth = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for s in &sizes {
        truth.push((start..start + s).collect::<Vec<_>>());
        start += s;
    }
    let n = params.n;
    let mut edges = Vec::new();
    for block in &truth {
        let end = block[block.len() - 1] + 1;
        for &u in block {
            bernoulli_range(u + 1, end, p_in, &mut rng, |v| edges.push((u, v)));
            bernoulli_range(end, n, p_out, &mut rng, |v| edges.push((u, v)));
        }
    }
    Ok((Graph::from_edges(n, edges)?, truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, sizes: CommunitySizes, p_in: f64, p_out: f64) -> PlantedPartitionParams {
        PlantedPartitionParams { n, sizes, p_in, p_out, seed: 42 }
    }

    #[test]
    fn degenerate_probabilities() {
        let (g, truth) = generate_planted_partition(&params(30, CommunitySizes::Equal { k: 3 }, 1.0, 0.0)).unwrap();
        assert_eq!(g.edge_count(), 3 * 45);
        for block in &truth {
            assert_eq!(g.connected_components(block).unwrap().len(), 1);
        }
        let (g, _) = generate_planted_partition(&params(30, CommunitySizes::Equal { k: 3 }, 0.0, 0.0)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn intra_edges_follow_binomial() {
        let p = params(200, CommunitySizes::Equal { k: 8 }, 0.3, 0.01);
        let (g, truth) = generate_planted_partition(&p).unwrap();
        let mut label = vec![0; 200];
        for (i, b) in truth.iter().enumerate() {
            for &u in b {
                label[u] = i;
            }
        }
        let intra = g.edges().filter(|&(u, v)| label[u] == label[v]).count() as f64;
        let pairs: f64 = truth.iter().map(|b| (b.len() * (b.len() - 1) / 2) as f64).sum();
        let (mean, sd) = (pairs * 0.3, (pairs * 0.3 * 0.7).sqrt());
        assert!((intra - mean).abs() < 3.0 * sd, "{intra} vs {mean}");
        let inter = g.edge_count() as f64 - intra;
        let inter_pairs = 200.0 * 199.0 / 2.0 - pairs;
        let (mean, sd) = (inter_pairs * 0.01, (inter_pairs * 0.01 * 0.99).sqrt());
        assert!((inter - mean).abs() < 3.0 * sd, "{inter} vs {mean}");
    }

    #[test]
    fn deterministic() {
        let p = params(100, CommunitySizes::Bounded { min: 5, max: 20 }, 0.4, 0.02);
        let a = generate_planted_partition(&p).unwrap();
        assert_eq!(a, generate_planted_partition(&p).unwrap());
        assert!(a.1.iter().all(|b| (5..=20).contains(&b.len())));
        assert_eq!(a.1.iter().map(Vec::len).sum::<usize>(), 100);
    }

    #[test]
    fn bounded_count_tracks_the_midpoint() {
        let small = community_sizes(
            &params(400, CommunitySizes::Bounded { min: 8, max: 16 }, 0.5, 0.0),
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        let large = community_sizes(
            &params(400, CommunitySizes::Bounded { min: 8, max: 64 }, 0.5, 0.0),
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert_eq!(small.len(), 34);
        assert_eq!(large.len(), 12);
        assert!(small.iter().all(|&s| (8..=16).contains(&s)));
        assert!(large.iter().all(|&s| (8..=64).contains(&s)));
    }

    #[test]
    fn invalid_params() {
        for p in [
            params(10, CommunitySizes::Equal { k: 2 }, 0.1, 0.5),
            params(10, CommunitySizes::Equal { k: 2 }, 1.5, 0.5),
            params(10, CommunitySizes::Equal { k: 6 }, 0.5, 0.1),
            params(10, CommunitySizes::Explicit(vec![5, 4]), 0.5, 0.1),
            params(10, CommunitySizes::Bounded { min: 7, max: 8 }, 0.5, 0.1),
            params(0, CommunitySizes::Equal { k: 1 }, 0.5, 0.1),
        ] {
            assert!(matches!(generate_planted_partition(&p), Err(Error::InvalidParams(_))), "{p:?}");
        }
    }
}
