//! The deterministic synchronous simulation loop.
//!
//! Every step, all agents perceive the previous step's world snapshot, decide
//! their velocity commands independently, and only then does the world
//! integrate, so results do not depend on agent order or on how the per-agent
//! work is scheduled. All randomness comes from substreams keyed by
//! (seed, agent, step).

use crate::flocking::{compute_step, goal_attraction};
use crate::geom::Vec3;
use crate::metrics::StepMetrics;
use crate::obstacles::collect_virtual_particles;
use crate::perception::{observe, MemoryEntry, ObservationMemory};
use crate::rng::substream;
use crate::world::{nearest_obstacle_distance, AgentState, ScenarioConfig};
use rayon::prelude::*;
use serde::Serialize;
use std::io;
use std::time::Instant;
use thiserror::Error;

/// How commanded velocities turn into flown velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrackingMode {
    /// The agent flies the command exactly (default).
    Ideal,
    /// First-order lag toward the command with time constant `tau` (s),
    /// emulating closed-loop sluggishness.
    Lag { tau: f64 },
}

/// Execution options orthogonal to the scenario itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub tracking: TrackingMode,
    /// Evaluate per-agent decisions on a thread pool. Output is identical
    /// either way.
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { tracking: TrackingMode::Ideal, parallel: false }
    }
}

/// A physical fault observed during integration. Faults are recorded, never
/// corrected: colliding agents keep flying the model's commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaultRecord {
    pub step: u64,
    pub agent: u32,
    pub kind: FaultKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FaultKind {
    /// Inter-agent distance fell below the collision radius.
    Collision { other: u32 },
    /// The agent moved into or through an obstacle.
    ObstaclePenetration { obstacle: usize },
}

/// Complete simulation state between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub step: u64,
    pub agents: Vec<AgentState>,
    pub memory: ObservationMemory,
    pub rng_root: u64,
    pub faults: Vec<FaultRecord>,
}

impl SimState {
    /// Simulation time of this state (s), derived as step/λ rather than
    /// accumulated.
    pub fn time(&self, config: &ScenarioConfig) -> f64 {
        self.step as f64 / config.params.update_rate
    }
}

/// Initial state for a validated scenario.
pub fn initial_state(config: &ScenarioConfig) -> SimState {
    SimState {
        step: 0,
        agents: config.agents.clone(),
        memory: ObservationMemory::new(),
        rng_root: config.seed,
        faults: Vec::new(),
    }
}

/// Everything one agent decides about step k from the k−1 snapshot.
struct AgentDecision {
    goal_index: usize,
    command_body: Vec3,
    command_world: Vec3,
    detections: Vec<(u32, Vec3)>,
}

fn decide(index: usize, state: &SimState, config: &ScenarioConfig) -> AgentDecision {
    let agent = &state.agents[index];
    let now = state.time(config);

    // waypoint advancement happens before the force evaluation; an exhausted
    // goal list leaves the agent without a navigation pull
    let mut goal_index = agent.goal_index;
    while goal_index < config.goals.len()
        && (config.goals[goal_index] - agent.position).norm() <= config.goal_tolerance
    {
        goal_index += 1;
    }

    let others: Vec<AgentState> = state
        .agents
        .iter()
        .filter(|a| a.id != agent.id)
        .cloned()
        .collect();

    let mut rng = substream(state.rng_root, agent.id as u64, state.step);
    let observations = observe(
        agent,
        &others,
        &state.memory,
        &config.params,
        &config.noise,
        config,
        &mut rng,
        now,
        state.step,
    );
    let detections = observations
        .iter()
        .map(|o| (o.neighbor_id, o.rel_position))
        .collect();

    // an agent trapped inside an obstacle gets no particle guidance; the
    // post-integration scan keeps logging the penetration fault
    let particles =
        collect_virtual_particles(agent, &config.obstacles, &config.params).unwrap_or_default();

    let v_nav = if goal_index < config.goals.len() {
        goal_attraction(
            agent.position,
            config.goals[goal_index],
            agent.heading,
            &config.params,
            config.goal_tolerance,
        )
    } else {
        Vec3::ZERO
    };

    let breakdown = compute_step(&observations, &particles, v_nav, &config.params);
    AgentDecision {
        goal_index,
        command_body: breakdown.commanded_velocity,
        command_world: agent.body_to_world(breakdown.commanded_velocity),
        detections,
    }
}

/// Advances the world by one synchronous step.
pub fn step(state: &SimState, config: &ScenarioConfig, options: &RunOptions) -> SimState {
    let indices: Vec<usize> = (0..state.agents.len()).collect();
    let decisions: Vec<AgentDecision> = if options.parallel {
        indices.par_iter().map(|i| decide(*i, state, config)).collect()
    } else {
        indices.iter().map(|i| decide(*i, state, config)).collect()
    };

    let now = state.time(config);
    let dt = config.params.dt();
    let next_step = state.step + 1;

    let mut memory = state.memory.clone();
    let mut agents = Vec::with_capacity(state.agents.len());
    let mut faults = state.faults.clone();

    for (agent, decision) in state.agents.iter().zip(&decisions) {
        for (neighbor, rel_position) in &decision.detections {
            memory.record_detection(
                agent.id,
                *neighbor,
                MemoryEntry { rel_position: *rel_position, time: now },
            );
        }
        memory.record_command(agent.id, decision.command_body);

        let velocity = match options.tracking {
            TrackingMode::Ideal => decision.command_world,
            TrackingMode::Lag { tau } => {
                let blend = (dt / tau).min(1.0);
                agent.velocity + (decision.command_world - agent.velocity) * blend
            }
        };
        agents.push(AgentState {
            position: agent.position + velocity * dt,
            velocity,
            commanded_velocity: decision.command_world,
            goal_index: decision.goal_index,
            ..agent.clone()
        });
    }
    memory.expire(now);

    // fault scan on the integrated state; collisions are attributed to the
    // lower agent id once per pair per step
    for i in 0..agents.len() {
        for j in (i + 1)..agents.len() {
            let d = (agents[i].position - agents[j].position).norm();
            if d < config.params.collision_radius {
                faults.push(FaultRecord {
                    step: next_step,
                    agent: agents[i].id,
                    kind: FaultKind::Collision { other: agents[j].id },
                });
            }
        }
    }
    for (old, new) in state.agents.iter().zip(&agents) {
        for (k, obstacle) in config.obstacles.iter().enumerate() {
            if obstacle.blocks_move(old.position, new.position) || obstacle.contains(new.position) {
                faults.push(FaultRecord {
                    step: next_step,
                    agent: new.id,
                    kind: FaultKind::ObstaclePenetration { obstacle: k },
                });
            }
        }
    }

    SimState { step: next_step, agents, memory, rng_root: state.rng_root, faults }
}

/// One trajectory log row: an agent's state right after a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub step: u64,
    pub time: f64,
    pub agent_id: u32,
    pub position: Vec3,
    pub velocity: Vec3,
    /// World-frame commanded velocity that produced this step.
    pub commanded: Vec3,
}

/// One metrics log row (swarm-wide figures only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub step: u64,
    pub time: f64,
    pub min_pair: f64,
    pub avg_pair: f64,
    pub min_obstacle: f64,
    pub deviation_energy: f64,
}

/// Row-oriented output consumer; the engine stays file-format agnostic.
pub trait StepSink {
    fn trajectory_row(&mut self, row: &TrajectoryRow) -> io::Result<()>;
    fn metrics_row(&mut self, row: &MetricsRow) -> io::Result<()>;
}

/// Discards all rows.
pub struct NullSink;

impl StepSink for NullSink {
    fn trajectory_row(&mut self, _row: &TrajectoryRow) -> io::Result<()> {
        Ok(())
    }
    fn metrics_row(&mut self, _row: &MetricsRow) -> io::Result<()> {
        Ok(())
    }
}

/// Collects all rows in memory, for tests and examples.
#[derive(Default)]
pub struct MemorySink {
    pub trajectories: Vec<TrajectoryRow>,
    pub metrics: Vec<MetricsRow>,
}

impl StepSink for MemorySink {
    fn trajectory_row(&mut self, row: &TrajectoryRow) -> io::Result<()> {
        self.trajectories.push(*row);
        Ok(())
    }
    fn metrics_row(&mut self, row: &MetricsRow) -> io::Result<()> {
        self.metrics.push(*row);
        Ok(())
    }
}

/// Aggregate results of a completed run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub seed: u64,
    pub steps: u64,
    pub wall_time_s: f64,
    /// Smallest inter-agent distance over the whole run (null for one agent).
    pub min_pairwise_distance: Option<f64>,
    /// Mean over steps of the swarm average inter-agent distance.
    pub avg_pairwise_distance: Option<f64>,
    /// Smallest obstacle clearance over the whole run (null without obstacles).
    pub min_obstacle_distance: Option<f64>,
    pub fault_count: usize,
    pub faults: Vec<FaultRecord>,
    /// Per agent: did it pass every waypoint of the goal sequence?
    pub goals_reached: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("output sink failed: {0}")]
    Sink(#[from] io::Error),
}

/// Executes ⌊duration·λ⌋ steps, streaming rows to `sink`.
pub fn run(
    config: &ScenarioConfig,
    options: &RunOptions,
    sink: &mut dyn StepSink,
) -> Result<RunSummary, EngineError> {
    run_named(config, options, sink, "unnamed")
}

pub fn run_named(
    config: &ScenarioConfig,
    options: &RunOptions,
    sink: &mut dyn StepSink,
    scenario_name: &str,
) -> Result<RunSummary, EngineError> {
    let started = Instant::now();
    let steps = config.step_count();
    let mut state = initial_state(config);

    // lattice target for the deviation energy: median pairwise distance of
    // the initial configuration
    let initial_positions: Vec<Vec3> = state.agents.iter().map(|a| a.position).collect();
    let lattice_distance = lattice_target(&initial_positions);

    let mut min_pair_over_run = f64::INFINITY;
    let mut avg_pair_acc = 0.0;
    let mut avg_pair_rows = 0u64;
    let mut min_obstacle_over_run = f64::INFINITY;

    for _ in 0..steps {
        state = step(&state, config, options);
        let time = state.time(config);
        for agent in &state.agents {
            sink.trajectory_row(&TrajectoryRow {
                step: state.step,
                time,
                agent_id: agent.id,
                position: agent.position,
                velocity: agent.velocity,
                commanded: agent.commanded_velocity,
            })?;
        }
        let positions: Vec<Vec3> = state.agents.iter().map(|a| a.position).collect();
        let min_obstacle = positions
            .iter()
            .map(|p| nearest_obstacle_distance(*p, &config.obstacles))
            .fold(f64::INFINITY, f64::min);
        min_obstacle_over_run = min_obstacle_over_run.min(min_obstacle);
        if let Some(metrics) = StepMetrics::compute(
            state.step,
            &positions,
            &config.obstacles,
            lattice_distance,
            config.params.observation_radius,
        ) {
            min_pair_over_run = min_pair_over_run.min(metrics.swarm_min_pairwise);
            avg_pair_acc += metrics.swarm_avg_pairwise;
            avg_pair_rows += 1;
            sink.metrics_row(&MetricsRow {
                step: state.step,
                time,
                min_pair: metrics.swarm_min_pairwise,
                avg_pair: metrics.swarm_avg_pairwise,
                min_obstacle,
                deviation_energy: metrics.deviation_energy,
            })?;
        }
    }

    let goals_reached = state
        .agents
        .iter()
        .map(|a| a.goal_index >= config.goals.len())
        .collect();
    Ok(RunSummary {
        scenario: scenario_name.to_string(),
        seed: config.seed,
        steps,
        wall_time_s: started.elapsed().as_secs_f64(),
        min_pairwise_distance: (min_pair_over_run.is_finite()).then_some(min_pair_over_run),
        avg_pairwise_distance: (avg_pair_rows > 0).then(|| avg_pair_acc / avg_pair_rows as f64),
        min_obstacle_distance: (min_obstacle_over_run.is_finite()).then_some(min_obstacle_over_run),
        fault_count: state.faults.len(),
        faults: state.faults,
        goals_reached,
    })
}

/// Median pairwise distance of a configuration, or 1 as a harmless fallback
/// for degenerate swarms.
fn lattice_target(positions: &[Vec3]) -> f64 {
    if positions.len() < 2 {
        return 1.0;
    }
    let mut distances = Vec::new();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            distances.push((positions[i] - positions[j]).norm());
        }
    }
    let target = crate::metrics::median(&distances);
    if target > 0.0 {
        target
    } else {
        1.0
    }
}
