//! Deterministic discrete-time simulator for communication-free UAV swarms.
//!
//! Agents perceive their neighbors only through a noisy onboard
//! relative-localization sensor (range/azimuth/elevation with Gaussian error),
//! steer by a decentralized flocking rule extended with reactive obstacle
//! avoidance and goal attraction, and fly in a world of cylinder and wall
//! obstacles. Runs with the same scenario and seed are byte-identical, even
//! under parallel evaluation, which makes the simulator suitable for noise
//! sweeps and stability studies.
//!
//! Start with the runnable examples (`cargo run --example <name>`) or the
//! thin `swarmsim` binary (`run`, `sweep`, `validate` subcommands).

pub mod cli;
pub mod config;
pub mod engine;
pub mod flocking;
pub mod geom;
pub mod metrics;
pub mod obstacles;
pub mod perception;
pub mod rng;
pub mod world;

pub use config::{NoiseModel, SwarmParams};
pub use engine::{
    run, run_named, FaultKind, FaultRecord, MemorySink, NullSink, RunOptions, RunSummary,
    SimState, StepSink, TrackingMode,
};
pub use flocking::ForceBreakdown;
pub use geom::{cart_to_spherical, spherical_to_cart, Spherical, Vec3};
pub use metrics::{deviation_energy, pairwise_stats, stability_sweep, SweepResult};
pub use obstacles::VirtualParticle;
pub use perception::{NeighborObservation, ObservationMemory};
pub use world::{load_scenario, nearest_obstacle_distance, AgentState, Obstacle, ScenarioConfig};
