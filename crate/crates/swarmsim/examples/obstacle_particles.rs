//! Virtual swarm particles for geometric obstacles.
//!
//!     cargo run --example obstacle_particles
//!
//! A cylinder or wall inside the detection radius is replaced by a single
//! relative position/velocity pair. The position points at the nearest
//! surface; the velocity mirrors the agent's tangential motion, which steers
//! the repulsion rule around the obstacle instead of just bouncing off it.

use swarmsim::config::SwarmParams;
use swarmsim::geom::Vec3;
use swarmsim::obstacles::collect_virtual_particles;
use swarmsim::world::{AgentState, Obstacle};

fn agent(position: Vec3, velocity: Vec3) -> AgentState {
    AgentState {
        id: 0,
        position,
        velocity,
        heading: 0.0,
        blink_frequency: 6.0,
        commanded_velocity: Vec3::ZERO,
        goal_index: 0,
    }
}

fn main() {
    let params = SwarmParams { obstacle_radius: 5.0, ..Default::default() };
    let obstacles = vec![
        Obstacle::Cylinder { center: Vec3::new(6.0, 1.0, 0.0), radius: 1.0 },
        Obstacle::Wall {
            endpoint_a: Vec3::new(2.0, -6.0, 0.0),
            endpoint_b: Vec3::new(8.0, -6.0, 0.0),
            normal: Vec3::new(0.0, 1.0, 0.0),
        },
    ];

    println!("agent flying +x at 1 m/s past a cylinder (r=1 at (6,1)) and a wall (y=-6):\n");
    println!("  position      | particle(source)  rel_position          rel_velocity");
    for x in [0.0, 2.0, 4.0, 6.0, 8.0] {
        let a = agent(Vec3::new(x, -2.0, 5.0), Vec3::new(1.0, 0.0, 0.0));
        let particles = collect_virtual_particles(&a, &obstacles, &params).unwrap();
        print!("  ({x:4.1}, -2.0)  |");
        if particles.is_empty() {
            print!("  none in range");
        }
        for p in &particles {
            print!(
                "  #{} ({:5.2},{:5.2},{:2.0})  ({:5.2},{:5.2},{:2.0})",
                p.source,
                p.rel_position.x,
                p.rel_position.y,
                p.rel_position.z,
                p.rel_velocity.x,
                p.rel_velocity.y,
                p.rel_velocity.z
            );
        }
        println!();
    }

    println!("\nproperties visible above:");
    println!("  - cylinder particle sits on the surface along the center line");
    println!("  - wall particle lies along the wall normal");
    println!("  - radial/normal velocity components are annihilated; only the");
    println!("    tangential share survives, scaled by proximity");
}
