//! Simulate a bundled scenario and print its summary.
//!
//!     cargo run --example run_scenario [scenario.json]
//!
//! Defaults to the narrow-passage scenario. Pass any scenario file to watch
//! the swarm's distance statistics evolve.

use std::path::{Path, PathBuf};
use swarmsim::engine::{run_named, MemorySink, RunOptions};
use swarmsim::world::load_scenario;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/passage.json")
    });
    let text = std::fs::read_to_string(&path).expect("readable scenario file");
    let config = load_scenario(&text).expect("valid scenario");
    println!(
        "{}: {} agents, {} obstacles, {} goals, {} steps at {} Hz",
        path.display(),
        config.agents.len(),
        config.obstacles.len(),
        config.goals.len(),
        config.step_count(),
        config.params.update_rate
    );

    let mut sink = MemorySink::default();
    let summary = run_named(&config, &RunOptions::default(), &mut sink, "example").unwrap();

    // print a coarse timeline of the swarm-wide metrics
    let stride = (sink.metrics.len() / 12).max(1);
    println!("\n  time   min_pair  avg_pair  min_obstacle");
    for row in sink.metrics.iter().step_by(stride) {
        println!(
            "  {:5.1}s  {:7.2} m {:7.2} m  {:9.2} m",
            row.time, row.min_pair, row.avg_pair, row.min_obstacle
        );
    }

    println!("\nsummary:");
    println!("  faults:            {}", summary.fault_count);
    println!(
        "  goals reached:     {}/{}",
        summary.goals_reached.iter().filter(|g| **g).count(),
        summary.goals_reached.len()
    );
    if let Some(min) = summary.min_pairwise_distance {
        println!("  min pair distance: {min:.2} m");
    }
    if let Some(min) = summary.min_obstacle_distance {
        println!("  min clearance:     {min:.2} m");
    }
    println!("  wall time:         {:.3} s", summary.wall_time_s);
}
