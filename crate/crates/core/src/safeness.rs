//! Node and community safeness, closed-form safeness gains, and the greedy
//! safeness-maximization deceiver.
//!
//! For `u` in `H` with `R(u)` the other members reachable from `u` inside
//! `H`, `E_in(u)` its edges into `H` and `E_out(u)` its edges leaving `H`:
//!
//! ```text
//! sigma(u) = 1/2 (|R(u)| - |E_in(u)|) / (|H| - 1) + 1/2 |E_out(u)| / deg(u)
//! ```
//!
//! and `sigma(H)` is the mean over members. An isolated member contributes
//! 0 for the ratio term.
//!
//! Gains `sigma'(H) - sigma(H)` of a single update, writing `h = |H|`,
//! `x = |E_out|`, `d = deg`:
//!
//! * inter-`H` addition at `u`: only the ratio of `u` moves,
//!   `1/2 [(x+1)/(d+1) - x/d] / h`, positive unless `x = d`;
//! * inter-`H` deletion at `u`: `1/2 [(x-1)/(d-1) - x/d] / h`, never positive;
//! * intra-`H` deletion `(u,w)` that keeps `u` and `w` connected: both lose an
//!   internal edge while reachability is unchanged, giving
//!   `[1/(h-1) + x_u/(2 d_u (d_u-1)) + x_w/(2 d_w (d_w-1))] / h`;
//! * intra-`H` deletion that splits a component into parts of sizes `a` and
//!   `b`: every member on one side loses the other side from its reach,
//!   which adds `-a b / (h-1)` on top of the connected case (the `+1/(h-1)`
//!   from shedding internal edges still applies);
//! * intra-`H` addition joining components of sizes `a` and `b`: reach grows
//!   by `a b` in total, internal edges by 2, giving `(a b - 1)/(h-1)` plus
//!   the two ratio decreases `-x/(2 d (d+1))`; within one component it is
//!   `-1/(h-1)` plus the same ratio decreases.

use crate::error::{Error, Result};
use crate::graph::{EdgeUpdate, Graph, NodeId, UpdateKind};
use crate::modularity::DeceptionRun;
use crate::partition::TargetCommunity;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSafeness {
    pub node: NodeId,
    pub reach: usize,
    pub internal: usize,
    pub external: usize,
    pub degree: usize,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafenessBreakdown {
    pub nodes: Vec<NodeSafeness>,
    pub mean: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `sigma(u)` from the target's cached counters. `target` must describe `graph`.
pub fn node_safeness(target: &TargetCommunity, u: NodeId) -> Result<f64> {
    let h = target.len() as f64;
    let reach = target.reach(u)? as f64;
    let internal = target.internal(u)? as f64;
    let external = target.external(u)?;
    Ok(0.5 * (reach - internal) / (h - 1.0) + 0.5 * ratio(external, target.degree(u)?))
}

/// Per-member safeness terms and their mean.
pub fn safeness_breakdown(target: &TargetCommunity) -> Result<SafenessBreakdown> {
    let nodes = target
        .members()
        .iter()
        .map(|&u| {
            Ok(NodeSafeness {
                node: u,
                reach: target.reach(u)?,
                internal: target.internal(u)?,
                external: target.external(u)?,
                degree: target.degree(u)?,
                sigma: node_safeness(target, u)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = nodes.iter().map(|n| n.sigma).sum::<f64>() / nodes.len() as f64;
    Ok(SafenessBreakdown { nodes, mean })
}

/// `sigma(H)`.
pub fn community_safeness(target: &TargetCommunity) -> Result<f64> {
    Ok(safeness_breakdown(target)?.mean)
}

/// Convenience: builds the target on `graph` and returns `sigma(H)`.
pub fn community_safeness_of(graph: &Graph, members: &[NodeId]) -> Result<f64> {
    community_safeness(&TargetCommunity::new(graph, members)?)
}

/// Change of `1/2 x/d` when `u` gains or loses one external edge.
fn ratio_shift_external(target: &TargetCommunity, u: NodeId, add: bool) -> Result<f64> {
    let (x, d) = (target.external(u)?, target.degree(u)?);
    let after = if add { ratio(x + 1, d + 1) } else { ratio(x - 1, d - 1) };
    Ok(0.5 * (after - ratio(x, d)))
}

/// Change of `1/2 x/d` when `u` gains or loses one internal edge.
fn ratio_shift_internal(target: &TargetCommunity, u: NodeId, add: bool) -> Result<f64> {
    let (x, d) = (target.external(u)?, target.degree(u)?);
    let after = if add { ratio(x, d + 1) } else { ratio(x, d - 1) };
    Ok(0.5 * (after - ratio(x, d)))
}

/// Sizes of the two sides if deleting intra-`H` edge `(u, w)` splits their
/// component, `None` if they stay connected.
fn split_sizes(graph: &Graph, target: &TargetCommunity, u: NodeId, w: NodeId) -> Option<(usize, usize)> {
    let comp = &target.components()[target.component_of(u).ok()?];
    let mut seen = vec![u];
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for &y in graph.neighbors(x) {
            if (x == u && y == w) || (x == w && y == u) {
                continue;
            }
            if target.contains(y) && !seen.contains(&y) {
                if y == w {
                    return None;
                }
                seen.push(y);
                stack.push(y);
            }
        }
    }
    Some((seen.len(), comp.len() - seen.len()))
}

/// Predicted `sigma(H')` - `sigma(H)` for `update` on `graph`, without
/// recomputing safeness. `target` must describe `graph`.
pub fn safeness_gain(graph: &Graph, target: &TargetCommunity, update: &EdgeUpdate) -> Result<f64> {
    graph.validate_update(update)?;
    let (u, w) = (update.u, update.v);
    let (in_u, in_w) = (target.contains(u), target.contains(w));
    let add = update.kind == UpdateKind::Add;
    let h = target.len() as f64;

    let total = match (in_u, in_w) {
        (false, false) => return Err(Error::IllegalUpdate(update.to_string())),
        (true, false) | (false, true) => {
            let member = if in_u { u } else { w };
            ratio_shift_external(target, member, add)?
        }
        (true, true) => {
            let ratios = ratio_shift_internal(target, u, add)? + ratio_shift_internal(target, w, add)?;
            // each endpoint's internal edge count moves by one
            let internal = if add { -1.0 } else { 1.0 } / (h - 1.0);
            let reach = if add {
                let (cu, cw) = (target.component_of(u)?, target.component_of(w)?);
                if cu == cw {
                    0.0
                } else {
                    let (a, b) = (target.components()[cu].len(), target.components()[cw].len());
                    (a * b) as f64 / (h - 1.0)
                }
            } else {
                match split_sizes(graph, target, u, w) {
                    None => 0.0,
                    Some((a, b)) => -((a * b) as f64) / (h - 1.0),
                }
            };
            ratios + internal + reach
        }
    };
    Ok(total / h)
}

/// Ranking value of an intra-`H` deletion that keeps `H` connected.
fn deletion_value(target: &TargetCommunity, u: NodeId, w: NodeId) -> Result<f64> {
    let h = target.len() as f64;
    let term = |v: NodeId| -> Result<f64> {
        let (x, d) = (target.external(v)? as f64, target.degree(v)? as f64);
        Ok(if d > 1.0 { x / (2.0 * d * (d - 1.0)) } else { 0.0 })
    };
    Ok(1.0 / (h - 1.0) + term(u)? + term(w)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainedUpdate {
    pub update: EdgeUpdate,
    pub gain: f64,
}

/// Intra-`H` deletion with the largest ranking value among edges that are
/// not bridges of the induced subgraph. Ties are broken at random.
pub fn best_deletion(graph: &Graph, target: &TargetCommunity, rng: &mut impl Rng) -> Result<GainedUpdate> {
    let bridges = graph.induced_bridges(target.members())?;
    let mut best: Vec<(NodeId, NodeId)> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    for &u in target.members() {
        for &w in graph.neighbors(u) {
            if w <= u || !target.contains(w) || bridges.binary_search(&(u, w)).is_ok() {
                continue;
            }
            let value = deletion_value(target, u, w)?;
            if value > best_value {
                best_value = value;
                best.clear();
                best.push((u, w));
            } else if value == best_value {
                best.push((u, w));
            }
        }
    }
    let &(u, w) = best.choose(rng).ok_or(Error::NoCandidateDeletion)?;
    let update = EdgeUpdate::del(u, w);
    Ok(GainedUpdate { update, gain: safeness_gain(graph, target, &update)? })
}

/// Inter-`H` addition from the member with the lowest external ratio that
/// still has a non-neighbor outside `H`; the outside endpoint is uniform
/// among those non-neighbors. Equal ratios prefer the larger gain, then the
/// smaller id.
pub fn best_addition(graph: &Graph, target: &TargetCommunity, rng: &mut impl Rng) -> Result<GainedUpdate> {
    let outside = graph.node_count() - target.len();
    let mut ranked: Vec<(f64, f64, NodeId)> = target
        .members()
        .iter()
        .map(|&u| {
            let (x, d) = (target.external(u)?, target.degree(u)?);
            Ok((ratio(x, d), -ratio_shift_external(target, u, true)?, u))
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| a.partial_cmp(b).expect("finite"));

    for (_, _, p) in ranked {
        if target.external(p)? >= outside {
            continue;
        }
        let free: Vec<NodeId> = graph.nodes().filter(|&t| !target.contains(t) && !graph.has_edge(p, t)).collect();
        if let Some(&t) = free.choose(rng) {
            let update = EdgeUpdate::add(p, t);
            return Ok(GainedUpdate { update, gain: safeness_gain(graph, target, &update)? });
        }
    }
    Err(Error::NoCandidateAddition)
}

/// One greedy step: larger predicted gain wins, ties go to the deletion.
pub fn best_update_safeness(graph: &Graph, target: &TargetCommunity, rng: &mut impl Rng) -> Result<GainedUpdate> {
    let deletion = best_deletion(graph, target, rng);
    let addition = best_addition(graph, target, rng);
    match (deletion, addition) {
        (Ok(d), Ok(a)) => Ok(if d.gain >= a.gain { d } else { a }),
        (Ok(d), Err(Error::NoCandidateAddition)) => Ok(d),
        (Err(Error::NoCandidateDeletion), Ok(a)) => Ok(a),
        (Err(Error::NoCandidateDeletion), Err(Error::NoCandidateAddition)) => Err(Error::Exhausted),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

/// Applies up to `budget` greedy safeness-gain updates. The induced subgraph
/// of `H` keeps its number of components throughout.
pub fn run_safgain(graph: &Graph, target: &TargetCommunity, budget: usize, rng: &mut impl Rng) -> Result<DeceptionRun> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    let mut g = graph.clone();
    let mut h = target.clone();
    let mut updates = Vec::with_capacity(budget);
    let mut truncated = false;
    for _ in 0..budget {
        let step = match best_update_safeness(&g, &h, rng) {
            Ok(s) => s,
            Err(Error::Exhausted) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        g.apply_update_mut(&step.update)?;
        h = h.refresh_after_update(&g, &step.update)?;
        updates.push(step.update);
    }
    Ok(DeceptionRun { graph: g, updates, truncated })
}
