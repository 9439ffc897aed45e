//! Swarm-structure metrics: pairwise statistics and deviation energy.
//!
//!     cargo run --example lattice_metrics
//!
//! Deviation energy scores how far a configuration is from a uniform
//! edge-length lattice: zero exactly on the lattice, growing quadratically
//! with the edge-length spread, and blind to rigid motions.

use rand::Rng;
use swarmsim::geom::Vec3;
use swarmsim::metrics::{deviation_energy, pairwise_stats};
use swarmsim::rng::substream;

fn describe(label: &str, positions: &[Vec3], d: f64) {
    let (min, avg) = pairwise_stats(positions).unwrap();
    let energy = deviation_energy(positions, d, 10.0);
    println!("  {label:<28} min {min:5.2} m  avg {avg:5.2} m  energy {energy:.6}");
}

fn main() {
    let d = 2.0;
    println!("target edge length d = {d} m\n");

    let triangle = [
        Vec3::ZERO,
        Vec3::new(d, 0.0, 0.0),
        Vec3::new(d / 2.0, d * 3.0_f64.sqrt() / 2.0, 0.0),
    ];
    describe("equilateral triangle", &triangle, d);

    let s = d / (2.0 * 2.0_f64.sqrt());
    let tetrahedron = [
        Vec3::new(s, s, s),
        Vec3::new(s, -s, -s),
        Vec3::new(-s, s, -s),
        Vec3::new(-s, -s, s),
    ];
    describe("regular tetrahedron", &tetrahedron, d);

    let mut rng = substream(99, 0, 0);
    for noise in [0.05, 0.2, 0.5] {
        let perturbed: Vec<Vec3> = triangle
            .iter()
            .map(|p| {
                *p + Vec3::new(
                    rng.random_range(-noise..noise),
                    rng.random_range(-noise..noise),
                    rng.random_range(-noise..noise),
                )
            })
            .collect();
        describe(&format!("triangle jittered ±{noise}"), &perturbed, d);
    }

    let moved: Vec<Vec3> = triangle
        .iter()
        .map(|p| p.rotated_z(1.1) + Vec3::new(40.0, -7.0, 3.0))
        .collect();
    describe("triangle moved rigidly", &moved, d);
    println!("\nrigid motion leaves the energy at zero; jitter grows it quadratically");
}
