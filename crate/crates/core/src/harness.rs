//! Evaluation sweeps: detect, pick a target, deceive, re-detect, score.
//!
//! Seeding. Every run `r` gets `run_seed = mix(seed, r)`, which drives the
//! initial detection, the target draw and the deceiver's random choices.
//! All budgets of one run therefore share the same target and the same
//! deceiver stream, so a run with budget `b` applies a prefix of the
//! updates of budget `b + 1`. Re-detection after deception is seeded with
//! `redetect_seed(run_seed)`, the same for every budget, so that
//! score differences between budgets come from the updates and not from a
//! fresh detector draw.

use crate::detection::Detector;
use crate::error::{Error, Result};
use crate::graph::{EdgeUpdate, Graph, NodeId};
use crate::modularity::{modularity_or_zero, run_modmin, DeceptionRun};
use crate::partition::{Partition, TargetCommunity};
use crate::safeness::{community_safeness, run_safgain};
use crate::score::deception_score;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deceiver {
    ModMin,
    SafGain,
}

impl Deceiver {
    pub const ALL: [Deceiver; 2] = [Deceiver::ModMin, Deceiver::SafGain];

    pub fn as_str(self) -> &'static str {
        match self {
            Deceiver::ModMin => "modmin",
            Deceiver::SafGain => "safgain",
        }
    }

    pub fn run(
        self,
        graph: &Graph,
        partition: &Partition,
        target: &TargetCommunity,
        budget: usize,
        rng: &mut impl Rng,
    ) -> Result<DeceptionRun> {
        match self {
            Deceiver::ModMin => run_modmin(graph, partition, target, budget, rng),
            Deceiver::SafGain => run_safgain(graph, target, budget, rng),
        }
    }
}

impl fmt::Display for Deceiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Deceiver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "modmin" => Ok(Deceiver::ModMin),
            "safgain" => Ok(Deceiver::SafGain),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The deceiver ran out of legal updates before spending the budget.
    Truncated,
    Failed(String),
}

impl Status {
    pub fn is_failed(&self) -> bool {
        matches!(self, Status::Failed(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::Truncated => f.write_str("truncated"),
            Status::Failed(msg) => write!(f, "failed: {msg}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "truncated" => Ok(Status::Truncated),
            _ => s
                .strip_prefix("failed: ")
                .map(|m| Status::Failed(m.to_string()))
                .ok_or_else(|| Error::UnknownId(s.to_string())),
        }
    }
}

/// One evaluation cell. Metrics are `None` when the cell failed before
/// they could be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct DeceptionReport {
    pub dataset: String,
    pub detector: String,
    pub deceiver: Deceiver,
    pub budget: usize,
    pub run: usize,
    pub seed: u64,
    pub mod_before: Option<f64>,
    pub mod_after: Option<f64>,
    pub saf_before: Option<f64>,
    pub saf_after: Option<f64>,
    pub score_before: Option<f64>,
    pub score_after: Option<f64>,
    pub updates: Vec<EdgeUpdate>,
    pub duration_s: f64,
    pub status: Status,
}

/// A report plus diagnostics that do not go into serialized output.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub report: DeceptionReport,
    pub target: Vec<NodeId>,
    /// Modularity of the initial partition, membership unchanged, on the
    /// deceived graph.
    pub frozen_modularity: Option<f64>,
    pub components_before: Option<usize>,
    pub components_after: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetChoice {
    /// A uniformly drawn detected community with at least two members.
    WorstCase,
    Fixed(Vec<NodeId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub dataset: String,
    pub deceiver: Deceiver,
    pub budgets: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub target: TargetChoice,
    /// Wall-clock timing per cell. Leave off on targets without a clock.
    pub record_timing: bool,
    /// Cap on concurrently evaluated cells; `None` uses every core.
    pub jobs: Option<usize>,
}

impl EvalConfig {
    pub fn new(dataset: impl Into<String>, deceiver: Deceiver, budgets: Vec<usize>, runs: usize, seed: u64) -> Self {
        EvalConfig {
            dataset: dataset.into(),
            deceiver,
            budgets,
            runs,
            seed,
            target: TargetChoice::WorstCase,
            record_timing: false,
            jobs: None,
        }
    }
}

const REDETECT_STREAM: u64 = u64::MAX;

/// Seed of the initial detection in the run seeded with `run_seed`: the
/// first draw of the run stream.
pub fn detection_seed(run_seed: u64) -> u64 {
    ChaCha8Rng::seed_from_u64(run_seed).gen()
}

/// Seed of the re-detection that follows deception in the run seeded
/// with `run_seed` (the `seed` column of a report).
pub fn redetect_seed(run_seed: u64) -> u64 {
    mix(run_seed, REDETECT_STREAM)
}

/// splitmix64 finalizer over a combination of both inputs.
pub fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform choice among communities with at least two members.
pub fn select_worst_case_target(graph: &Graph, partition: &Partition, rng: &mut impl Rng) -> Result<TargetCommunity> {
    let eligible: Vec<&Vec<NodeId>> = partition.communities().iter().filter(|c| c.len() >= 2).collect();
    let chosen = eligible.choose(rng).ok_or(Error::NoEligibleCommunity)?;
    TargetCommunity::new(graph, chosen)
}

struct RunSetup {
    run_seed: u64,
    partition: Partition,
    target: TargetCommunity,
    deceive_seed: u64,
    mod_before: f64,
    saf_before: f64,
    score_before: f64,
}

fn setup_run(graph: &Graph, detector: &dyn Detector, config: &EvalConfig, run: usize) -> (u64, Result<RunSetup>) {
    let run_seed = mix(config.seed, run as u64);
    let build = || -> Result<RunSetup> {
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
        let partition = detector.detect(graph, rng.gen())?;
        let target = match &config.target {
            TargetChoice::WorstCase => select_worst_case_target(graph, &partition, &mut rng)?,
            TargetChoice::Fixed(members) => TargetCommunity::new(graph, members)?,
        };
        let deceive_seed = rng.gen();
        Ok(RunSetup {
            run_seed,
            mod_before: modularity_or_zero(&partition),
            saf_before: community_safeness(&target)?,
            score_before: deception_score(graph, &partition, target.members())?.score,
            partition,
            target,
            deceive_seed,
        })
    };
    (run_seed, build())
}

fn run_cell(
    graph: &Graph,
    detector: &dyn Detector,
    config: &EvalConfig,
    run: usize,
    budget: usize,
    setup: &(u64, Result<RunSetup>),
) -> CellResult {
    let start = config.record_timing.then(Instant::now);
    let mut report = DeceptionReport {
        dataset: config.dataset.clone(),
        detector: detector.name().to_string(),
        deceiver: config.deceiver,
        budget,
        run,
        seed: setup.0,
        mod_before: None,
        mod_after: None,
        saf_before: None,
        saf_after: None,
        score_before: None,
        score_after: None,
        updates: Vec::new(),
        duration_s: 0.0,
        status: Status::Ok,
    };
    let mut cell = CellResult {
        report: report.clone(),
        target: Vec::new(),
        frozen_modularity: None,
        components_before: None,
        components_after: None,
    };

    let outcome = (|| -> Result<()> {
        let s = setup.1.as_ref().map_err(Clone::clone)?;
        cell.target = s.target.members().to_vec();
        report.mod_before = Some(s.mod_before);
        report.saf_before = Some(s.saf_before);
        report.score_before = Some(s.score_before);
        cell.components_before = Some(s.target.components().len());

        let mut rng = ChaCha8Rng::seed_from_u64(s.deceive_seed);
        let run = config.deceiver.run(graph, &s.partition, &s.target, budget, &mut rng)?;
        let frozen = Partition::build(&run.graph, s.partition.communities().to_vec())?;
        cell.frozen_modularity = Some(modularity_or_zero(&frozen));
        let after_target = TargetCommunity::new(&run.graph, s.target.members())?;
        cell.components_after = Some(after_target.components().len());
        report.saf_after = Some(community_safeness(&after_target)?);
        report.updates = run.updates;
        if run.truncated {
            report.status = Status::Truncated;
        }

        let redetected = detector.detect(&run.graph, redetect_seed(s.run_seed))?;
        report.mod_after = Some(modularity_or_zero(&redetected));
        report.score_after = Some(deception_score(&run.graph, &redetected, s.target.members())?.score);
        Ok(())
    })();
    if let Err(e) = outcome {
        report.status = Status::Failed(e.to_string());
    }
    if let Some(start) = start {
        report.duration_s = start.elapsed().as_secs_f64();
    }
    cell.report = report;
    cell
}

fn validate(config: &EvalConfig) -> Result<()> {
    if config.runs == 0 {
        return Err(Error::ZeroRuns);
    }
    if config.budgets.is_empty() {
        return Err(Error::EmptyInput);
    }
    if config.budgets.contains(&0) {
        return Err(Error::ZeroBudget);
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_cells<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, jobs: Option<usize>, f: F) -> Vec<T> {
    use rayon::prelude::*;
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(|| (0..n).into_par_iter().map(&f).collect()))
            .unwrap_or_else(|_| (0..n).map(&f).collect()),
        None => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_cells<T, F: Fn(usize) -> T>(n: usize, _jobs: Option<usize>, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Every (budget, run) cell, in budget-major order. A failing cell is
/// recorded with a failed status and does not stop the sweep.
pub fn evaluate_detailed(graph: &Graph, detector: &dyn Detector, config: &EvalConfig) -> Result<Vec<CellResult>> {
    validate(config)?;
    let setups = map_cells(config.runs, config.jobs, |run| setup_run(graph, detector, config, run));
    let runs = config.runs;
    Ok(map_cells(config.budgets.len() * runs, config.jobs, |i| {
        let (b, run) = (i / runs, i % runs);
        run_cell(graph, detector, config, run, config.budgets[b], &setups[run])
    }))
}

pub fn evaluate(graph: &Graph, detector: &dyn Detector, config: &EvalConfig) -> Result<Vec<DeceptionReport>> {
    Ok(evaluate_detailed(graph, detector, config)?.into_iter().map(|c| c.report).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub dataset: String,
    pub detector: String,
    pub deceiver: Deceiver,
    pub budget: usize,
    pub cells: usize,
    pub failed: usize,
    pub score_mean: Option<f64>,
    pub score_std: Option<f64>,
    pub mod_mean: Option<f64>,
    pub mod_std: Option<f64>,
    pub saf_mean: Option<f64>,
    pub saf_std: Option<f64>,
}

fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (Some(mean), Some(var.sqrt()))
}

/// Means and population standard deviations of the final metrics, grouped
/// by (dataset, detector, deceiver, budget) in sorted order. Failed cells
/// only count towards `failed`.
pub fn aggregate_reports(reports: &[DeceptionReport]) -> Result<Vec<Summary>> {
    if reports.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut groups: std::collections::BTreeMap<(String, String, Deceiver, usize), Vec<&DeceptionReport>> =
        Default::default();
    for r in reports {
        groups.entry((r.dataset.clone(), r.detector.clone(), r.deceiver, r.budget)).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((dataset, detector, deceiver, budget), rs)| {
            let ok: Vec<&&DeceptionReport> = rs.iter().filter(|r| !r.status.is_failed()).collect();
            let collect =
                |f: fn(&DeceptionReport) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
            let (score_mean, score_std) = mean_std(&collect(|r| r.score_after));
            let (mod_mean, mod_std) = mean_std(&collect(|r| r.mod_after));
            let (saf_mean, saf_std) = mean_std(&collect(|r| r.saf_after));
            Summary {
                dataset,
                detector,
                deceiver,
                budget,
                cells: rs.len(),
                failed: rs.len() - ok.len(),
                score_mean,
                score_std,
                mod_mean,
                mod_std,
                saf_mean,
                saf_std,
            }
        })
        .collect())
}
