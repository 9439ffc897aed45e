//! Swarm-quality measurements: pairwise-distance statistics, obstacle
//! clearance, lattice deviation energy, and the noise-vs-stability sweep.

use crate::engine::{run, NullSink, RunOptions};
use crate::geom::Vec3;
use crate::world::{nearest_obstacle_distance, Obstacle, ScenarioConfig};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Per-step distance measurements for one swarm snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMetrics {
    pub step: u64,
    /// For each agent: distance to its nearest peer.
    pub per_agent_min_neighbor: Vec<f64>,
    /// For each agent: mean distance to all peers.
    pub per_agent_avg_neighbor: Vec<f64>,
    /// For each agent: distance to the nearest obstacle surface (+∞ if none).
    pub per_agent_obstacle: Vec<f64>,
    pub swarm_min_pairwise: f64,
    pub swarm_avg_pairwise: f64,
    pub deviation_energy: f64,
}

impl StepMetrics {
    /// Undefined with fewer than two agents (no pairwise distances exist).
    pub fn compute(
        step: u64,
        positions: &[Vec3],
        obstacles: &[Obstacle],
        lattice_distance: f64,
        neighborhood_radius: f64,
    ) -> Option<StepMetrics> {
        let (swarm_min, swarm_avg) = pairwise_stats(positions)?;
        let n = positions.len();
        let mut per_min = vec![f64::INFINITY; n];
        let mut per_sum = vec![0.0; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (positions[i] - positions[j]).norm();
                per_min[i] = per_min[i].min(d);
                per_min[j] = per_min[j].min(d);
                per_sum[i] += d;
                per_sum[j] += d;
            }
        }
        let per_avg = per_sum.iter().map(|s| s / (n - 1) as f64).collect();
        let per_obstacle = positions
            .iter()
            .map(|p| nearest_obstacle_distance(*p, obstacles))
            .collect();
        Some(StepMetrics {
            step,
            per_agent_min_neighbor: per_min,
            per_agent_avg_neighbor: per_avg,
            per_agent_obstacle: per_obstacle,
            swarm_min_pairwise: swarm_min,
            swarm_avg_pairwise: swarm_avg,
            deviation_energy: deviation_energy(positions, lattice_distance, neighborhood_radius),
        })
    }
}

/// Minimum and mean over all unordered pairs' Euclidean distances, or `None`
/// with fewer than two positions.
pub fn pairwise_stats(positions: &[Vec3]) -> Option<(f64, f64)> {
    if positions.len() < 2 {
        return None;
    }
    let mut min = f64::INFINITY;
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let d = (positions[i] - positions[j]).norm();
            min = min.min(d);
            sum += d;
            pairs += 1;
        }
    }
    Some((min, sum / pairs as f64))
}

/// Quadratic penalty for departing from a uniform-edge-length configuration:
/// mean squared deviation of every proximity-graph edge from `target_distance`,
/// normalized by (edge count + 1). Zero exactly when all edges have the target
/// length; zero with no edges.
///
/// The penalty form ψ(z) = z² with the |ℰ|+1 normalization follows the
/// standard lattice deviation-energy definition from the flocking-control
/// literature; the source material for this simulator delegates the formula
/// to that reference.
pub fn deviation_energy(positions: &[Vec3], target_distance: f64, neighborhood_radius: f64) -> f64 {
    assert!(target_distance > 0.0, "target distance must be positive");
    let mut sum = 0.0;
    let mut edges = 0usize;
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let d = (positions[i] - positions[j]).norm();
            if d <= neighborhood_radius {
                let dev = d - target_distance;
                sum += dev * dev;
                edges += 1;
            }
        }
    }
    if edges == 0 {
        return 0.0;
    }
    sum / (edges + 1) as f64
}

/// Median of a sample; the mean of the two middle values for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// One run of a sweep: the run-minimum of the swarm minimum distance and the
/// run-mean of the swarm average distance, plus fault accounting.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRun {
    pub seed: u64,
    pub run_min_dist: f64,
    pub run_avg_dist: f64,
    pub faults: usize,
}

/// All runs of one noise level, with per-level medians.
#[derive(Debug, Clone, Serialize)]
pub struct SweepLevel {
    pub sigma_r: f64,
    pub sigma_az: f64,
    pub runs: Vec<SweepRun>,
    pub median_run_min: f64,
    pub median_run_avg: f64,
}

/// Grid of noise levels × seeds with per-level medians.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub levels: Vec<SweepLevel>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep needs at least two sigma levels and two seeds")]
    DegenerateGrid,
    #[error("base scenario needs at least two agents for distance statistics")]
    TooFewAgents,
}

/// Runs the base scenario at every (sigma level × seed) combination.
///
/// Elevation noise follows the azimuth level. Only perception noise varies
/// between runs of a level; initial conditions stay fixed, so the noise level
/// is the sole varied factor across levels. Faulted runs are flagged through
/// their fault count but still count toward the medians.
pub fn stability_sweep(
    base_config: &ScenarioConfig,
    sigma_levels: &[(f64, f64)],
    seeds: &[u64],
    options: &RunOptions,
) -> Result<SweepResult, SweepError> {
    if sigma_levels.len() < 2 || seeds.len() < 2 {
        return Err(SweepError::DegenerateGrid);
    }
    if base_config.agents.len() < 2 {
        return Err(SweepError::TooFewAgents);
    }
    let grid: Vec<(usize, u64)> = sigma_levels
        .iter()
        .enumerate()
        .flat_map(|(li, _)| seeds.iter().map(move |s| (li, *s)))
        .collect();

    let run_one = |(level_index, seed): &(usize, u64)| -> SweepRun {
        let (sigma_r, sigma_az) = sigma_levels[*level_index];
        let mut config = base_config.clone();
        config.noise.sigma_r = sigma_r;
        config.noise.sigma_az = sigma_az;
        config.noise.sigma_el = Some(sigma_az);
        config.seed = *seed;
        let summary = run(&config, options, &mut NullSink).expect("in-memory run cannot fail");
        SweepRun {
            seed: *seed,
            run_min_dist: summary.min_pairwise_distance.expect("two or more agents"),
            run_avg_dist: summary.avg_pairwise_distance.expect("two or more agents"),
            faults: summary.faults.len(),
        }
    };

    let runs: Vec<SweepRun> = if options.parallel {
        grid.par_iter().map(run_one).collect()
    } else {
        grid.iter().map(run_one).collect()
    };

    let levels = sigma_levels
        .iter()
        .enumerate()
        .map(|(li, &(sigma_r, sigma_az))| {
            let level_runs: Vec<SweepRun> =
                runs.iter().skip(li * seeds.len()).take(seeds.len()).cloned().collect();
            let mins: Vec<f64> = level_runs.iter().map(|r| r.run_min_dist).collect();
            let avgs: Vec<f64> = level_runs.iter().map(|r| r.run_avg_dist).collect();
            SweepLevel {
                sigma_r,
                sigma_az,
                median_run_min: median(&mins),
                median_run_avg: median(&avgs),
                runs: level_runs,
            }
        })
        .collect();

    Ok(SweepResult { levels })
}
