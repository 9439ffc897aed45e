//! Simulated relative-localization sensor.
//!
//! Each agent perceives its neighbors as noisy body-frame positions: the true
//! relative position is gated by range, field of view, and optionally by
//! occlusion, then perturbed by zero-mean Gaussian noise applied per spherical
//! coordinate (range, azimuth, elevation). Relative velocity is recovered by
//! differencing successive noisy positions against a short-lived memory.

use crate::config::{NoiseModel, SwarmParams, MIN_SENSING_RANGE};
use crate::geom::{cart_to_spherical, spherical_to_cart, Spherical, Vec3};
use crate::world::{segment_point_distance_3d, AgentState, Obstacle, ScenarioConfig};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::collections::BTreeMap;

/// Bounding-sphere radius used for agent-against-agent occlusion (m).
pub const DEFAULT_AGENT_RADIUS: f64 = 0.4;

/// How long an undetected neighbor stays in memory before its velocity
/// estimate restarts from zero (s).
pub const DEFAULT_MEMORY_HORIZON: f64 = 1.0;

/// One noisy, body-frame relative detection of a neighbor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborObservation {
    pub neighbor_id: u32,
    /// Noisy relative position in the observer's body frame (m).
    pub rel_position: Vec3,
    /// Estimated relative velocity in the observer's body frame (m/s).
    pub rel_velocity: Vec3,
    /// Time elapsed since the previous detection of this neighbor (s).
    pub time_since_last: f64,
    /// Step index of the detection.
    pub step: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryEntry {
    /// Last noisy relative position reported for the pair.
    pub rel_position: Vec3,
    /// Simulation time of that detection (s).
    pub time: f64,
}

/// Per-(observer, neighbor) detection history plus each observer's previous
/// body-frame velocity command, as consumed by the velocity differencing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservationMemory {
    entries: BTreeMap<(u32, u32), MemoryEntry>,
    prev_command_body: BTreeMap<u32, Vec3>,
}

impl ObservationMemory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Valid (non-expired) entry for an observer/neighbor pair at time `now`.
    pub fn entry(&self, observer: u32, neighbor: u32, now: f64) -> Option<&MemoryEntry> {
        self.entries
            .get(&(observer, neighbor))
            .filter(|e| now - e.time <= DEFAULT_MEMORY_HORIZON)
    }

    pub fn record_detection(&mut self, observer: u32, neighbor: u32, entry: MemoryEntry) {
        self.entries.insert((observer, neighbor), entry);
    }

    /// Previous body-frame commanded velocity of `observer`; zero initially.
    pub fn prev_command(&self, observer: u32) -> Vec3 {
        self.prev_command_body.get(&observer).copied().unwrap_or(Vec3::ZERO)
    }

    pub fn record_command(&mut self, observer: u32, command_body: Vec3) {
        self.prev_command_body.insert(observer, command_body);
    }

    /// Drops entries that have gone undetected for longer than the horizon.
    pub fn expire(&mut self, now: f64) {
        self.entries.retain(|_, e| now - e.time <= DEFAULT_MEMORY_HORIZON);
    }
}

/// True if the straight sight line from `observer_pos` to `target_pos` is
/// interrupted by another agent's bounding sphere or by an obstacle.
pub fn check_occlusion(
    observer_pos: Vec3,
    target_pos: Vec3,
    others: &[AgentState],
    obstacles: &[Obstacle],
    agent_radius: f64,
) -> bool {
    for other in others {
        if segment_point_distance_3d(observer_pos, target_pos, other.position) < agent_radius {
            return true;
        }
    }
    obstacles.iter().any(|o| o.blocks_sight(observer_pos, target_pos))
}

/// Detects all visible neighbors of `observer` and reports their noisy
/// body-frame relative positions, in neighbor id order.
///
/// Gating uses the true geometry: range within the observation radius,
/// direction inside the field of view, no occlusion (when enabled), and a
/// uniform draw at or above the dropout probability. The surviving detections
/// are perturbed per spherical coordinate and the noisy range is clamped to at
/// least [`MIN_SENSING_RANGE`].
pub fn detect_neighbors<R: Rng>(
    observer: &AgentState,
    others: &[AgentState],
    params: &SwarmParams,
    noise: &NoiseModel,
    rng: &mut R,
    config: &ScenarioConfig,
) -> Vec<(u32, Vec3)> {
    // neighbor id order fixes both the draw-to-neighbor pairing and the
    // observation order, so results cannot depend on how the caller sorted
    // its agent list
    let mut ordered: Vec<&AgentState> = others.iter().collect();
    ordered.sort_by_key(|a| a.id);

    let mut detections = Vec::new();
    for other in ordered {
        debug_assert_ne!(other.id, observer.id, "observer must not appear in others");
        let rel_world = other.position - observer.position;
        let rel_body = observer.world_to_body(rel_world);
        let true_spherical = cart_to_spherical(rel_body);
        if true_spherical.range > params.observation_radius {
            continue;
        }
        if true_spherical.azimuth.abs() > config.fov_horizontal / 2.0
            || true_spherical.elevation.abs() > config.fov_vertical / 2.0
        {
            continue;
        }
        if config.occlusion_enabled {
            let blockers: Vec<AgentState> = others
                .iter()
                .filter(|a| a.id != other.id)
                .cloned()
                .collect();
            if check_occlusion(
                observer.position,
                other.position,
                &blockers,
                &config.obstacles,
                DEFAULT_AGENT_RADIUS,
            ) {
                continue;
            }
        }
        if noise.dropout_prob > 0.0 {
            let draw: f64 = rng.random();
            if draw < noise.dropout_prob {
                continue;
            }
        }
        let noisy = perturb(true_spherical, rel_body, noise, rng);
        detections.push((other.id, noisy));
    }
    detections
}

/// Applies the per-coordinate Gaussian perturbation. With all deviations zero
/// the true body-frame vector is returned bit-exactly (no spherical round
/// trip).
fn perturb<R: Rng>(s: Spherical, exact: Vec3, noise: &NoiseModel, rng: &mut R) -> Vec3 {
    let sigma_el = noise.sigma_el();
    if noise.sigma_r == 0.0 && noise.sigma_az == 0.0 && sigma_el == 0.0 {
        return clamp_range_exact(exact, s.range);
    }
    let mut range = s.range + sample_normal(noise.sigma_r, rng);
    let azimuth = s.azimuth + sample_normal(noise.sigma_az, rng);
    let elevation = s.elevation + sample_normal(sigma_el, rng);
    if range < MIN_SENSING_RANGE {
        range = MIN_SENSING_RANGE;
    }
    spherical_to_cart(Spherical::new(range, azimuth, elevation))
}

fn sample_normal<R: Rng>(sigma: f64, rng: &mut R) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
}

fn clamp_range_exact(v: Vec3, range: f64) -> Vec3 {
    if range >= MIN_SENSING_RANGE {
        v
    } else if range > 0.0 {
        v * (MIN_SENSING_RANGE / range)
    } else {
        Vec3::new(MIN_SENSING_RANGE, 0.0, 0.0)
    }
}

/// Relative velocity from the current and previous noisy relative positions:
/// the position difference per elapsed time, corrected by the observer's own
/// previous velocity command. First detections (no memory) estimate zero.
pub fn estimate_relative_velocity(
    current: Vec3,
    previous: Option<Vec3>,
    time_since_last: f64,
    prev_own_command: Vec3,
) -> Vec3 {
    let Some(prev) = previous else {
        return Vec3::ZERO;
    };
    assert!(
        time_since_last > 0.0,
        "non-positive detection interval {time_since_last}"
    );
    (current - prev) / time_since_last - prev_own_command
}

/// Full perception pass for one observer: detections plus the assembled
/// observations using (and not yet mutating) the shared memory.
#[allow(clippy::too_many_arguments)]
pub fn observe(
    observer: &AgentState,
    others: &[AgentState],
    memory: &ObservationMemory,
    params: &SwarmParams,
    noise: &NoiseModel,
    config: &ScenarioConfig,
    rng: &mut impl Rng,
    now: f64,
    step: u64,
) -> Vec<NeighborObservation> {
    let dt = params.dt();
    let detections = detect_neighbors(observer, others, params, noise, rng, config);
    let prev_command = memory.prev_command(observer.id);
    detections
        .into_iter()
        .map(|(neighbor_id, rel_position)| {
            let entry = memory.entry(observer.id, neighbor_id, now);
            let time_since_last = entry.map(|e| now - e.time).unwrap_or(dt);
            let rel_velocity = estimate_relative_velocity(
                rel_position,
                entry.map(|e| e.rel_position),
                time_since_last,
                prev_command,
            );
            NeighborObservation { neighbor_id, rel_position, rel_velocity, time_since_last, step }
        })
        .collect()
}
