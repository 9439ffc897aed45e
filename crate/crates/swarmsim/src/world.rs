//! Scenario representation: agents, obstacles, navigation goals, and
//! validated loading of declarative scenario files.
//!
//! Scenario documents are strict JSON: unknown keys are rejected so a typo in
//! a physical parameter cannot silently fall back to a default. The schema is
//! documented in `docs/scenarios.md` with bundled examples under `scenarios/`.

use crate::config::{
    NoiseModel, SwarmParams, DEFAULT_BLINK_FREQUENCIES, MAX_BLINK_FREQUENCIES,
    MAX_OBSERVATION_RADIUS,
};
use crate::geom::Vec3;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use thiserror::Error;

/// One swarm unit's true world state plus identity metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentState {
    pub id: u32,
    /// World-frame position (m).
    pub position: Vec3,
    /// World-frame velocity actually flown (m/s).
    pub velocity: Vec3,
    /// Fixed yaw of the body frame (rad); the model has no yaw dynamics.
    pub heading: f64,
    /// Identity blink frequency (Hz), from a pool of at most 6 values.
    pub blink_frequency: f64,
    /// World-frame velocity commanded at the previous step (m/s).
    pub commanded_velocity: Vec3,
    /// Index of the next waypoint in the goal sequence; past the end means done.
    pub goal_index: usize,
}

impl AgentState {
    /// Rotate a world-frame vector into this agent's body frame.
    pub fn world_to_body(&self, v: Vec3) -> Vec3 {
        v.rotated_z(-self.heading)
    }

    /// Rotate a body-frame vector into the world frame.
    pub fn body_to_world(&self, v: Vec3) -> Vec3 {
        v.rotated_z(self.heading)
    }
}

/// A geometric obstacle: an infinite-height vertical cylinder or a vertical
/// wall over a horizontal segment. All obstacle math happens in the agent's
/// horizontal plane, so the shapes are exact at every altitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Obstacle {
    Cylinder {
        /// Axis location; only x and y are meaningful.
        center: Vec3,
        radius: f64,
    },
    Wall {
        endpoint_a: Vec3,
        endpoint_b: Vec3,
        /// Unit horizontal normal, the left-hand perpendicular of b−a.
        normal: Vec3,
    },
}

impl Obstacle {
    /// Horizontal distance from `p` to the obstacle surface, floored at zero.
    pub fn surface_distance(&self, p: Vec3) -> f64 {
        match self {
            Obstacle::Cylinder { center, radius } => {
                let d = horizontal_distance(p, *center);
                (d - radius).max(0.0)
            }
            Obstacle::Wall { endpoint_a, endpoint_b, .. } => {
                point_segment_distance_2d(p.xy(), endpoint_a.xy(), endpoint_b.xy())
            }
        }
    }

    /// True if `p` lies strictly inside the obstacle volume (a wall counts as
    /// penetrated when the point sits on its segment).
    pub fn contains(&self, p: Vec3) -> bool {
        match self {
            Obstacle::Cylinder { center, radius } => horizontal_distance(p, *center) < *radius,
            Obstacle::Wall { endpoint_a, endpoint_b, .. } => {
                point_segment_distance_2d(p.xy(), endpoint_a.xy(), endpoint_b.xy()) < 1e-12
            }
        }
    }

    /// True if the horizontal projection of the motion segment `from → to`
    /// passes through the obstacle volume.
    pub fn blocks_move(&self, from: Vec3, to: Vec3) -> bool {
        match self {
            Obstacle::Cylinder { center, radius } => {
                segment_point_distance_2d(from.xy(), to.xy(), center.xy()) < *radius
            }
            Obstacle::Wall { endpoint_a, endpoint_b, .. } => {
                segments_intersect_2d(from.xy(), to.xy(), endpoint_a.xy(), endpoint_b.xy())
            }
        }
    }

    /// True if the sight segment `from → to` is interrupted by the obstacle.
    /// Obstacles extend infinitely in z, so the horizontal projection decides.
    pub fn blocks_sight(&self, from: Vec3, to: Vec3) -> bool {
        self.blocks_move(from, to)
    }
}

/// Horizontal (xy-plane) Euclidean distance between two points.
pub fn horizontal_distance(a: Vec3, b: Vec3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// Distance from point `p` to the segment `a..b`, all in the plane.
pub fn point_segment_distance_2d(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (px, py) = (p.0 - a.0, p.1 - a.1);
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 { ((px * dx + py * dy) / len_sq).clamp(0.0, 1.0) } else { 0.0 };
    let (cx, cy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (cx * cx + cy * cy).sqrt()
}

/// Closest point on segment `a..b` to point `p`.
pub fn closest_point_on_segment_2d(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (px, py) = (p.0 - a.0, p.1 - a.1);
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq > 0.0 { ((px * dx + py * dy) / len_sq).clamp(0.0, 1.0) } else { 0.0 };
    (a.0 + t * dx, a.1 + t * dy)
}

/// Minimum distance from segment `a..b` to point `c`.
fn segment_point_distance_2d(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    point_segment_distance_2d(c, a, b)
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Segment-segment intersection test, touching counts.
pub fn segments_intersect_2d(
    p1: (f64, f64),
    p2: (f64, f64),
    q1: (f64, f64),
    q2: (f64, f64),
) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Minimum distance from the 3D segment `p..q` to `center`, for sphere tests.
pub fn segment_point_distance_3d(p: Vec3, q: Vec3, center: Vec3) -> f64 {
    let d = q - p;
    let len_sq = d.norm_squared();
    let t = if len_sq > 0.0 { ((center - p).dot(d) / len_sq).clamp(0.0, 1.0) } else { 0.0 };
    (p + d * t - center).norm()
}

/// Horizontal distance from `p` to the nearest obstacle surface, or +∞ when
/// the obstacle list is empty.
pub fn nearest_obstacle_distance(p: Vec3, obstacles: &[Obstacle]) -> f64 {
    obstacles
        .iter()
        .map(|o| o.surface_distance(p))
        .fold(f64::INFINITY, f64::min)
}

/// Full declarative description of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub agents: Vec<AgentState>,
    pub obstacles: Vec<Obstacle>,
    /// Ordered waypoints every agent follows in sequence.
    pub goals: Vec<Vec3>,
    /// Radius around a waypoint that counts as arrival (m).
    pub goal_tolerance: f64,
    pub params: SwarmParams,
    pub noise: NoiseModel,
    pub seed: u64,
    /// Simulated run length (s); the engine executes ⌊duration·λ⌋ steps.
    pub duration: f64,
    /// Horizontal field of view (rad), centered on the heading.
    pub fov_horizontal: f64,
    /// Vertical field of view (rad), centered on the horizon.
    pub fov_vertical: f64,
    /// When set, sight lines interrupted by agents or obstacles drop detections.
    pub occlusion_enabled: bool,
}

impl ScenarioConfig {
    pub fn step_count(&self) -> u64 {
        (self.duration * self.params.update_rate).floor() as u64
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(String),
}

fn invalid(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation(msg.into())
}

// ---- raw document schema ---------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    agents: Vec<AgentDoc>,
    #[serde(default)]
    obstacles: Vec<ObstacleDoc>,
    #[serde(default)]
    goals: Vec<[f64; 3]>,
    #[serde(default)]
    goal_tolerance: Option<f64>,
    #[serde(default)]
    params: SwarmParams,
    #[serde(default)]
    noise: NoiseModel,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    duration: Option<f64>,
    #[serde(default)]
    fov: FovDoc,
    #[serde(default)]
    occlusion: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentDoc {
    position: [f64; 3],
    #[serde(default)]
    velocity: Option<[f64; 3]>,
    #[serde(default)]
    heading: f64,
    #[serde(default)]
    blink_frequency: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ObstacleDoc {
    Cylinder { center: [f64; 2], radius: f64 },
    Wall { a: [f64; 2], b: [f64; 2] },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FovDoc {
    #[serde(default = "default_fov_h")]
    horizontal: f64,
    #[serde(default = "default_fov_v")]
    vertical: f64,
}

fn default_fov_h() -> f64 {
    2.0 * PI
}

fn default_fov_v() -> f64 {
    PI
}

impl Default for FovDoc {
    fn default() -> Self {
        FovDoc { horizontal: default_fov_h(), vertical: default_fov_v() }
    }
}

const DEFAULT_GOAL_TOLERANCE: f64 = 1.5;
const DEFAULT_DURATION: f64 = 60.0;

// ---- loading and validation -------------------------------------------------

/// Parses and validates a scenario document, applying documented defaults.
pub fn load_scenario(document: &str) -> Result<ScenarioConfig, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(document)?;

    let obstacles: Vec<Obstacle> = doc
        .obstacles
        .into_iter()
        .map(|o| match o {
            ObstacleDoc::Cylinder { center, radius } => Obstacle::Cylinder {
                center: Vec3::new(center[0], center[1], 0.0),
                radius,
            },
            ObstacleDoc::Wall { a, b } => {
                let d = (b[0] - a[0], b[1] - a[1]);
                let len = (d.0 * d.0 + d.1 * d.1).sqrt();
                // left-hand perpendicular of b−a; harmless NaN for degenerate
                // walls, which validation rejects below
                let normal = Vec3::new(-d.1 / len, d.0 / len, 0.0);
                Obstacle::Wall {
                    endpoint_a: Vec3::new(a[0], a[1], 0.0),
                    endpoint_b: Vec3::new(b[0], b[1], 0.0),
                    normal,
                }
            }
        })
        .collect();

    let agents: Vec<AgentState> = doc
        .agents
        .iter()
        .enumerate()
        .map(|(i, a)| AgentState {
            id: i as u32,
            position: Vec3::new(a.position[0], a.position[1], a.position[2]),
            velocity: a
                .velocity
                .map(|v| Vec3::new(v[0], v[1], v[2]))
                .unwrap_or(Vec3::ZERO),
            heading: a.heading,
            blink_frequency: a
                .blink_frequency
                .unwrap_or(DEFAULT_BLINK_FREQUENCIES[i % DEFAULT_BLINK_FREQUENCIES.len()]),
            commanded_velocity: Vec3::ZERO,
            goal_index: 0,
        })
        .collect();

    let config = ScenarioConfig {
        agents,
        obstacles,
        goals: doc.goals.iter().map(|g| Vec3::new(g[0], g[1], g[2])).collect(),
        goal_tolerance: doc.goal_tolerance.unwrap_or(DEFAULT_GOAL_TOLERANCE),
        params: doc.params,
        noise: doc.noise,
        seed: doc.seed,
        duration: doc.duration.unwrap_or(DEFAULT_DURATION),
        fov_horizontal: doc.fov.horizontal,
        fov_vertical: doc.fov.vertical,
        occlusion_enabled: doc.occlusion,
    };
    validate(&config)?;
    Ok(config)
}

/// Finite and strictly positive; rejects NaN and infinities.
fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

/// Finite and at least zero; rejects NaN and infinities.
fn non_negative(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

/// Checks every scenario invariant, returning the first violation by name.
pub fn validate(config: &ScenarioConfig) -> Result<(), ScenarioError> {
    let p = &config.params;
    if !positive(p.observation_radius) {
        return Err(invalid("observation_radius must be finite and > 0"));
    }
    if p.observation_radius > MAX_OBSERVATION_RADIUS {
        return Err(invalid(format!(
            "observation_radius {} m exceeds the sensor ceiling {} m",
            p.observation_radius, MAX_OBSERVATION_RADIUS
        )));
    }
    if !positive(p.obstacle_radius) {
        return Err(invalid("obstacle_radius must be finite and > 0"));
    }
    if !positive(p.update_rate) {
        return Err(invalid("update_rate must be finite and > 0"));
    }
    if !positive(p.max_speed) {
        return Err(invalid("max_speed must be finite and > 0"));
    }
    if !non_negative(p.gain_baseline)
        || !non_negative(p.gain_navigation)
        || !non_negative(p.nav_speed)
    {
        return Err(invalid("gains and nav_speed must be finite and >= 0"));
    }
    if !positive(p.collision_radius) || p.collision_radius >= p.observation_radius {
        return Err(invalid("collision_radius must satisfy 0 < collision_radius < observation_radius"));
    }

    let n = &config.noise;
    if !non_negative(n.sigma_r) || !non_negative(n.sigma_az) || !non_negative(n.sigma_el()) {
        return Err(invalid("noise std-devs must be finite and >= 0"));
    }
    if !(0.0..=1.0).contains(&n.dropout_prob) {
        return Err(invalid("dropout_prob must be in [0, 1]"));
    }

    if config.agents.is_empty() {
        return Err(invalid("scenario must define at least one agent"));
    }

    for (k, o) in config.obstacles.iter().enumerate() {
        match o {
            Obstacle::Cylinder { center, radius } => {
                if !positive(*radius) || !center.is_finite() {
                    return Err(invalid(format!("obstacle {k}: cylinder radius must be > 0 and center finite")));
                }
            }
            Obstacle::Wall { endpoint_a, endpoint_b, normal } => {
                if !endpoint_a.is_finite() || !endpoint_b.is_finite() {
                    return Err(invalid(format!("obstacle {k}: wall endpoints must be finite")));
                }
                if horizontal_distance(*endpoint_a, *endpoint_b) == 0.0 {
                    return Err(invalid(format!("obstacle {k}: wall endpoints must be distinct")));
                }
                let tangent = (*endpoint_b - *endpoint_a).normalized_or_zero();
                if (normal.norm() - 1.0).abs() > 1e-9 || normal.dot(tangent).abs() > 1e-9 {
                    return Err(invalid(format!("obstacle {k}: wall normal must be unit and perpendicular")));
                }
            }
        }
    }

    let mut frequencies = BTreeSet::new();
    for a in &config.agents {
        if !a.position.is_finite() || !a.velocity.is_finite() || !a.heading.is_finite() {
            return Err(invalid(format!("agent {}: non-finite initial state", a.id)));
        }
        if a.velocity.norm() > p.max_speed + 1e-9 {
            return Err(invalid(format!(
                "agent {}: initial speed {} m/s exceeds max_speed {} m/s",
                a.id,
                a.velocity.norm(),
                p.max_speed
            )));
        }
        if !positive(a.blink_frequency) {
            return Err(invalid(format!("agent {}: blink_frequency must be > 0", a.id)));
        }
        frequencies.insert(a.blink_frequency.to_bits());
        for (k, o) in config.obstacles.iter().enumerate() {
            if o.contains(a.position) {
                return Err(invalid(format!("agent {} inside obstacle {k}", a.id)));
            }
        }
    }
    if frequencies.len() > MAX_BLINK_FREQUENCIES {
        return Err(invalid(format!(
            "{} distinct blink frequencies configured, at most {} are distinguishable",
            frequencies.len(),
            MAX_BLINK_FREQUENCIES
        )));
    }

    for i in 0..config.agents.len() {
        for j in (i + 1)..config.agents.len() {
            let d = (config.agents[i].position - config.agents[j].position).norm();
            if d < p.collision_radius {
                return Err(invalid(format!(
                    "agents {} and {} initial separation {} m < collision_radius {} m",
                    config.agents[i].id, config.agents[j].id, d, p.collision_radius
                )));
            }
        }
    }

    for (gi, g) in config.goals.iter().enumerate() {
        if !g.is_finite() {
            return Err(invalid(format!("goal {gi} must be finite")));
        }
    }
    if !positive(config.goal_tolerance) {
        return Err(invalid("goal_tolerance must be > 0"));
    }
    if !positive(config.duration) {
        return Err(invalid("duration must be > 0"));
    }
    if config.step_count() < 1 {
        return Err(invalid(format!(
            "duration {} s at update_rate {} Hz yields zero whole steps",
            config.duration, p.update_rate
        )));
    }
    if !(config.fov_horizontal > 0.0 && config.fov_horizontal <= 2.0 * PI) {
        return Err(invalid("fov.horizontal must be in (0, 2π]"));
    }
    if !(config.fov_vertical > 0.0 && config.fov_vertical <= PI) {
        return Err(invalid("fov.vertical must be in (0, π]"));
    }
    Ok(())
}
