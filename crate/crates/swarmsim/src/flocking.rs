//! The decentralized control law.
//!
//! Each agent turns its local observations into a steering force: a baseline
//! term blending cohesion, alignment, and distance-weighted separation over
//! visible neighbors, plus a navigation term blending obstacle repulsion with
//! goal attraction. The force is speed-bounded and converted to a position
//! setpoint one control period ahead.

use crate::config::{SwarmParams, MIN_SENSING_RANGE};
use crate::geom::Vec3;
use crate::obstacles::VirtualParticle;
use crate::perception::NeighborObservation;

/// All intermediate products of one control evaluation, in the agent's body
/// frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceBreakdown {
    /// Neighbor-interaction force (cohesion + alignment + separation).
    pub baseline: Vec3,
    /// Obstacle-repulsion and goal-attraction force.
    pub navigation: Vec3,
    /// Sum of the two elementary forces.
    pub total: Vec3,
    /// Speed-bounded velocity command, ‖·‖ ≤ max_speed.
    pub commanded_velocity: Vec3,
    /// Position setpoint one control period ahead: command / update rate.
    pub setpoint: Vec3,
}

/// Nonlinear repulsion weight: max(0, ‖x‖^−1/2 − r^−1/2).
///
/// Zero at and beyond `r`, growing as the distance shrinks. The singular
/// zero-distance case returns the value at the minimum sensing range so the
/// weight stays finite.
pub fn kappa(x: Vec3, r: f64) -> f64 {
    let d = x.norm();
    if d == 0.0 {
        return (1.0 / MIN_SENSING_RANGE.sqrt() - 1.0 / r.sqrt()).max(0.0);
    }
    (1.0 / d.sqrt() - 1.0 / r.sqrt()).max(0.0)
}

/// Mean neighbor-interaction force over the observed neighborhood, scaled by
/// the baseline gain. Empty neighborhoods contribute nothing.
pub fn baseline_force(observations: &[NeighborObservation], params: &SwarmParams) -> Vec3 {
    if observations.is_empty() {
        return Vec3::ZERO;
    }
    let mut sum = Vec3::ZERO;
    for obs in observations {
        let x = obs.rel_position;
        sum += x + obs.rel_velocity / params.update_rate - kappa(x, params.observation_radius) * x;
    }
    sum * (params.gain_baseline / observations.len() as f64)
}

/// Goal-attraction velocity: `nav_speed` toward the goal, rotated into the
/// body frame, tapering linearly to zero inside `goal_tolerance`.
pub fn goal_attraction(
    agent_pos: Vec3,
    goal: Vec3,
    heading: f64,
    params: &SwarmParams,
    goal_tolerance: f64,
) -> Vec3 {
    let to_goal = goal - agent_pos;
    let dist = to_goal.norm();
    if dist == 0.0 {
        return Vec3::ZERO;
    }
    let speed = if dist < goal_tolerance {
        params.nav_speed * (dist / goal_tolerance)
    } else {
        params.nav_speed
    };
    (to_goal * (speed / dist)).rotated_z(-heading)
}

/// Navigation force: mean obstacle-repulsion over the virtual particles
/// (scaled by the navigation gain) plus the goal-attraction velocity divided
/// by the update rate. With no particles in range only the goal term remains.
pub fn navigation_force(
    virtual_particles: &[VirtualParticle],
    v_nav: Vec3,
    params: &SwarmParams,
) -> Vec3 {
    let goal_term = v_nav / params.update_rate;
    if virtual_particles.is_empty() {
        return goal_term;
    }
    let mut sum = Vec3::ZERO;
    for p in virtual_particles {
        let x = p.rel_position;
        sum += p.rel_velocity / params.update_rate - kappa(x, params.obstacle_radius) * x;
    }
    sum * (params.gain_navigation / virtual_particles.len() as f64) + goal_term
}

/// Sum of the elementary forces.
pub fn total_force(f_baseline: Vec3, f_navigation: Vec3) -> Vec3 {
    f_baseline + f_navigation
}

/// Speed bound: keeps the force direction and clamps the commanded magnitude
/// to min(max_speed, update_rate·‖f‖). Zero force commands zero velocity.
pub fn bound_velocity(f: Vec3, params: &SwarmParams) -> Vec3 {
    let norm = f.norm();
    if norm == 0.0 {
        return Vec3::ZERO;
    }
    let magnitude = params.max_speed.min(params.update_rate * norm);
    f * (magnitude / norm)
}

/// One full control evaluation from same-step inputs.
pub fn compute_step(
    observations: &[NeighborObservation],
    virtual_particles: &[VirtualParticle],
    v_nav: Vec3,
    params: &SwarmParams,
) -> ForceBreakdown {
    let baseline = baseline_force(observations, params);
    let navigation = navigation_force(virtual_particles, v_nav, params);
    let total = total_force(baseline, navigation);
    let commanded_velocity = bound_velocity(total, params);
    let setpoint = commanded_velocity / params.update_rate;
    ForceBreakdown { baseline, navigation, total, commanded_velocity, setpoint }
}

/// Separation distance at which the single-neighbor radial force changes
/// sign: the unique rest separation of an isolated pair.
pub fn pair_equilibrium_distance(observation_radius: f64) -> f64 {
    1.0 / (1.0 + 1.0 / observation_radius.sqrt()).powi(2)
}
