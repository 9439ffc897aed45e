//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p swarmsim --test acceptance -- --nocapture` to see
//! every line. Criteria 4 and 6 document a known model limitation: the
//! neighbor-interaction rule has no repulsion beyond ~0.58 m at the default
//! observation radius, so swarms driven toward shared attractors compress
//! below the 0.8 m collision radius. Those tests assert the criteria as
//! stated and are expected to fail until the force model itself changes.

use rand::Rng;
use std::path::{Path, PathBuf};
use std::process::Command;
use swarmsim::cli::{cmd_run, cmd_sweep};
use swarmsim::config::SwarmParams;
use swarmsim::engine::{initial_state, run, step, MemorySink, RunOptions};
use swarmsim::flocking::{bound_velocity, kappa, pair_equilibrium_distance};
use swarmsim::geom::{cart_to_spherical, Vec3};
use swarmsim::metrics::{deviation_energy, stability_sweep};
use swarmsim::obstacles::{circle_virtual_particle, line_virtual_particle};
use swarmsim::perception::detect_neighbors;
use swarmsim::rng::substream;
use swarmsim::world::{load_scenario, AgentState, ScenarioConfig};

fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn load_bundled(name: &str) -> ScenarioConfig {
    let text = std::fs::read_to_string(scenario_path(name)).expect("bundled scenario");
    load_scenario(&text).expect("valid scenario")
}

fn verdict(n: u32, name: &str, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {n:2} ({name}): {} -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn criterion_01_obstacle_transform_exactness() {
    let mut rng = substream(101, 0, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        // cylinder: random center, radius, velocity with the agent outside
        let center = Vec3::new(
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            0.0,
        );
        let radius = rng.random_range(0.1..3.0);
        if center.norm() <= radius + 1e-3 {
            continue;
        }
        let v = Vec3::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        );
        let p = circle_virtual_particle(center, radius, v).unwrap();
        let mu = center / center.norm();
        let norm_err = (p.rel_position.norm() + radius - center.norm()).abs() / center.norm();
        let collinearity = if p.rel_position.norm() > 0.0 {
            (p.rel_position.normalized_or_zero() - mu).norm()
        } else {
            0.0
        };
        let ortho = p.rel_velocity.dot(mu).abs() / (1.0 + v.norm());
        worst = worst.max(norm_err).max(collinearity).max(ortho);
    }
    for _ in 0..10_000 {
        let angle = rng.random_range(0.0..std::f64::consts::PI);
        let normal = Vec3::new(angle.cos(), angle.sin(), 0.0);
        let point = Vec3::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0), 0.0);
        if point.norm() < 1e-3 {
            continue;
        }
        let v = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), 0.0);
        let p = line_virtual_particle(normal, &[point], v).unwrap();
        let tangent = Vec3::new(-normal.y, normal.x, 0.0);
        let tangential_pos = p.rel_position.dot(tangent).abs() / (1.0 + point.norm());
        let normal_vel = p.rel_velocity.dot(normal).abs() / (1.0 + v.norm());
        let projected = v - normal * normal.dot(v);
        let speed_err =
            (p.rel_velocity.norm() - projected.norm() / point.norm()).abs() / (1.0 + v.norm());
        worst = worst.max(tangential_pos).max(normal_vel).max(speed_err);
    }
    let pass = worst < 1e-9;
    assert!(
        verdict(1, "obstacle transform exactness", pass, &format!("worst residual {worst:.2e}")),
    );
}

#[test]
fn criterion_02_kappa_and_gamma_contracts() {
    let params = SwarmParams::default();
    let mut rng = substream(102, 0, 0);
    let mut pass = true;
    for _ in 0..10_000 {
        let d = rng.random_range(0.001..20.0);
        let k = kappa(Vec3::new(d, 0.0, 0.0), 10.0);
        pass &= if d >= 10.0 { k == 0.0 } else { k > 0.0 };
    }
    // strict decrease on (0, r)
    let mut previous = f64::INFINITY;
    for i in 1..=10_000 {
        let d = i as f64 * (10.0 / 10_001.0);
        let k = kappa(Vec3::new(d, 0.0, 0.0), 10.0);
        pass &= k < previous;
        previous = k;
    }
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let f = Vec3::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        );
        let expected = params.max_speed.min(params.update_rate * f.norm());
        let got = bound_velocity(f, &params).norm();
        // exact up to floating-point representation of the rescaling
        let err = (got - expected).abs() / expected.max(f64::MIN_POSITIVE);
        if expected > 0.0 {
            worst = worst.max(err);
        }
    }
    pass &= worst < 1e-14;
    assert!(verdict(
        2,
        "kappa and gamma contracts",
        pass,
        &format!("gamma magnitude worst relative error {worst:.2e}")
    ));
}

#[test]
fn criterion_03_two_agent_equilibrium() {
    // closed-form rest separation, cross-checked by a bisection oracle
    let d_star = pair_equilibrium_distance(10.0);
    let coeff = |d: f64| 1.0 - kappa(Vec3::new(d, 0.0, 0.0), 10.0);
    let (mut lo, mut hi) = (0.05, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if coeff(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((d_star - lo).abs() < 1e-10, "closed form {d_star} vs oracle {lo}");

    let doc = format!(
        r#"{{
            "agents": [{{"position": [0,0,5]}}, {{"position": [{d_star},0,5]}}],
            "noise": {{"sigma_r": 0, "sigma_az": 0, "sigma_el": 0}},
            "params": {{"collision_radius": 0.1}},
            "duration": 10.0
        }}"#
    );
    let config = load_scenario(&doc).unwrap();
    let options = RunOptions::default();
    let mut state = initial_state(&config);
    let mut worst: f64 = 0.0;
    for _ in 0..config.step_count() {
        state = step(&state, &config, &options);
        for agent in &state.agents {
            worst = worst.max(agent.commanded_velocity.norm());
        }
    }
    let pass = worst < 1e-9;
    assert!(verdict(
        3,
        "two-agent equilibrium",
        pass,
        &format!("d* = {d_star:.6} m, max commanded speed {worst:.2e} m/s over {} steps", config.step_count())
    ));
}

/// Samples a point uniformly from a ball of the given radius.
fn ball_point(rng: &mut impl Rng, radius: f64) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v * radius;
        }
    }
}

#[test]
fn criterion_04_cohesion_without_collision() {
    // 8 m ball read as diameter: all pairs start inside the observation radius
    let mut failures = Vec::new();
    for seed in 0..20u64 {
        let mut rng = substream(104, seed, 0);
        let mut positions: Vec<Vec3> = Vec::new();
        while positions.len() < 5 {
            let p = ball_point(&mut rng, 4.0) + Vec3::new(0.0, 0.0, 20.0);
            if positions.iter().all(|q| (*q - p).norm() > 0.9) {
                positions.push(p);
            }
        }
        let mut config = load_scenario(
            r#"{"agents": [{"position": [0,0,20]}, {"position": [3,0,20]}],
                "noise": {"sigma_r": 0, "sigma_az": 0, "sigma_el": 0},
                "duration": 200.0}"#,
        )
        .unwrap();
        config.agents = positions
            .iter()
            .enumerate()
            .map(|(i, p)| AgentState {
                id: i as u32,
                position: *p,
                velocity: Vec3::ZERO,
                heading: 0.0,
                blink_frequency: [6.0, 15.0, 30.0][i % 3],
                commanded_velocity: Vec3::ZERO,
                goal_index: 0,
            })
            .collect();

        let options = RunOptions::default();
        let mut state = initial_state(&config);
        let mut run_min = f64::INFINITY;
        let mut run_max: f64 = 0.0;
        for _ in 0..2000 {
            state = step(&state, &config, &options);
            for i in 0..5 {
                for j in (i + 1)..5 {
                    let d = (state.agents[i].position - state.agents[j].position).norm();
                    run_min = run_min.min(d);
                    run_max = run_max.max(d);
                }
            }
        }
        let max_final_speed =
            state.agents.iter().map(|a| a.velocity.norm()).fold(0.0, f64::max);
        let ok = run_min >= config.params.collision_radius
            && run_max <= config.params.observation_radius
            && max_final_speed < 0.05;
        if !ok {
            failures.push(format!(
                "seed {seed}: min {run_min:.3} m, max {run_max:.3} m, final speed {max_final_speed:.3} m/s"
            ));
        }
    }
    let pass = failures.is_empty();
    assert!(
        verdict(
            4,
            "cohesion without collision",
            pass,
            &if pass { "20/20 seeds clean".to_string() } else {
                format!("{}/20 seeds violate the bounds, e.g. {}", failures.len(), failures[0])
            }
        ),
        "the unweighted interaction rule equilibrates pairs at ~0.58 m and clusters tighter, \
         below the 0.8 m collision radius; see the fault log analysis"
    );
}

#[test]
fn criterion_05_narrow_passage() {
    let config = load_bundled("passage.json");
    let mut sink = MemorySink::default();
    let summary = run(&config, &RunOptions::default(), &mut sink).unwrap();

    let all_reached = summary.goals_reached.iter().all(|g| *g);
    let mut beyond_gap = true;
    let mut crossed_inside_gap = true;
    for agent in 0..config.agents.len() as u32 {
        let rows: Vec<_> = sink.trajectories.iter().filter(|r| r.agent_id == agent).collect();
        beyond_gap &= rows.last().unwrap().position.x > 20.0;
        // the first row past the barrier plane must lie inside the 4 m gap
        if let Some(crossing) = rows.iter().find(|r| r.position.x >= 20.0) {
            crossed_inside_gap &= crossing.position.y.abs() < 2.0;
        } else {
            crossed_inside_gap = false;
        }
    }
    let pass = summary.fault_count == 0 && all_reached && beyond_gap && crossed_inside_gap;
    assert!(verdict(
        5,
        "narrow passage traversal",
        pass,
        &format!(
            "faults {}, all goals reached {}, all beyond gap {}, crossings inside gap {}, min pair {:.2} m",
            summary.fault_count,
            all_reached,
            beyond_gap,
            crossed_inside_gap,
            summary.min_pairwise_distance.unwrap_or(f64::NAN)
        )
    ));
}

#[test]
fn criterion_06_forest_navigation() {
    let config = load_bundled("forest9.json");
    let mut sink = MemorySink::default();
    let summary = run(&config, &RunOptions::default(), &mut sink).unwrap();

    let all_reached = summary.goals_reached.iter().all(|g| *g);
    let min_clearance = summary.min_obstacle_distance.unwrap_or(f64::INFINITY);
    let penetrations = summary
        .faults
        .iter()
        .filter(|f| matches!(f.kind, swarmsim::FaultKind::ObstaclePenetration { .. }))
        .count();
    let pass = summary.fault_count == 0 && min_clearance > 0.3 && all_reached;
    assert!(
        verdict(
            6,
            "forest navigation",
            pass,
            &format!(
                "faults {} (of which penetrations {}), min clearance {:.2} m, all goals reached {}",
                summary.fault_count, penetrations, min_clearance, all_reached
            )
        ),
        "clearance and arrival hold, but inter-agent spacing cannot: without any mid-range \
         repulsion the converging lanes compress below the 0.8 m collision radius"
    );
}

#[test]
fn criterion_07_noise_stability_trend() {
    let config = load_bundled("open5.json");
    let base = (config.noise.sigma_r, config.noise.sigma_az);
    assert_eq!(base, (1.16, 0.17));
    let levels: Vec<(f64, f64)> =
        [0.0, 0.5, 1.0, 2.0, 3.0].iter().map(|s| (base.0 * s, base.1 * s)).collect();
    let seeds: Vec<u64> = (0..10).map(|i| config.seed + i).collect();
    let result =
        stability_sweep(&config, &levels, &seeds, &RunOptions::default()).unwrap();

    let mins: Vec<f64> = result.levels.iter().map(|l| l.median_run_min).collect();
    let avgs: Vec<f64> = result.levels.iter().map(|l| l.median_run_avg).collect();
    let monotone = mins.windows(2).all(|w| w[1] <= w[0] * 1.10);
    let declined = mins.last().unwrap() < &(mins[0] * 0.5);
    let avg_variation = avgs
        .iter()
        .map(|a| (a - avgs[0]).abs() / avgs[0])
        .fold(0.0, f64::max);
    let pass = monotone && declined && avg_variation < 0.30;
    assert!(verdict(
        7,
        "noise-vs-stability trend",
        pass,
        &format!(
            "median run-min per level {:?}, monotone {monotone}, avg variation {:.0}%",
            mins.iter().map(|m| (m * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            avg_variation * 100.0
        )
    ));
}

#[test]
fn criterion_08_noise_model_calibration() {
    let config = load_scenario(
        r#"{"agents": [{"position": [0,0,5]}, {"position": [6,0,5]}],
            "noise": {"sigma_r": 1.16, "sigma_az": 0.17}}"#,
    )
    .unwrap();
    let observer = config.agents[0].clone();
    let others = [config.agents[1].clone()];
    let mut rng = substream(108, 0, 0);
    let n = 100_000usize;
    let mut sum_sq_r = 0.0;
    let mut sum_sq_az = 0.0;
    for _ in 0..n {
        let det = detect_neighbors(
            &observer,
            &others,
            &config.params,
            &config.noise,
            &mut rng,
            &config,
        );
        let s = cart_to_spherical(det[0].1);
        sum_sq_r += (s.range - 6.0) * (s.range - 6.0);
        sum_sq_az += s.azimuth * s.azimuth;
    }
    let rmse_r = (sum_sq_r / n as f64).sqrt();
    let rmse_az = (sum_sq_az / n as f64).sqrt();
    let pass = (rmse_r - 1.16).abs() / 1.16 < 0.03 && (rmse_az - 0.17).abs() / 0.17 < 0.03;
    assert!(verdict(
        8,
        "noise model calibration",
        pass,
        &format!("range RMSE {rmse_r:.4} m (target 1.16), azimuth RMSE {rmse_az:.4} rad (target 0.17)")
    ));
}

#[test]
fn criterion_09_byte_identical_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = scenario_path("passage.json");
    let sequential = RunOptions { parallel: false, ..Default::default() };
    let parallel = RunOptions { parallel: true, ..Default::default() };
    let dirs = [tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c")];
    cmd_run(&scenario, Some(7), &dirs[0], &sequential).unwrap();
    cmd_run(&scenario, Some(7), &dirs[1], &sequential).unwrap();
    cmd_run(&scenario, Some(7), &dirs[2], &parallel).unwrap();
    let bytes: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| std::fs::read(d.join("trajectories.csv")).unwrap())
        .collect();
    let pass = bytes[0] == bytes[1] && bytes[0] == bytes[2];
    assert!(verdict(
        9,
        "byte-identical determinism",
        pass,
        &format!(
            "{} trajectory bytes, repeat run identical: {}, parallel run identical: {}",
            bytes[0].len(),
            bytes[0] == bytes[1],
            bytes[0] == bytes[2]
        )
    ));
}

#[test]
fn criterion_10_deviation_energy() {
    let d = 2.0;
    let triangle = [
        Vec3::ZERO,
        Vec3::new(d, 0.0, 0.0),
        Vec3::new(d / 2.0, d * 3.0_f64.sqrt() / 2.0, 0.0),
    ];
    let tetra_edge = 2.0 * 2.0_f64.sqrt();
    let tetra: Vec<Vec3> = [
        Vec3::new(1.0, 1.0, 1.0),
        Vec3::new(1.0, -1.0, -1.0),
        Vec3::new(-1.0, 1.0, -1.0),
        Vec3::new(-1.0, -1.0, 1.0),
    ]
    .iter()
    .map(|p| *p * (d / tetra_edge))
    .collect();
    let mut pass = deviation_energy(&triangle, d, 10.0) < 1e-20
        && deviation_energy(&tetra, d, 10.0) < 1e-20;

    let mut rng = substream(110, 0, 0);
    let mut worst_invariance: f64 = 0.0;
    for _ in 0..1_000 {
        // perturbed lattice: positive energy, invariant under rigid motion
        let perturbed: Vec<Vec3> = triangle
            .iter()
            .map(|p| {
                *p + Vec3::new(
                    rng.random_range(-0.3..0.3),
                    rng.random_range(-0.3..0.3),
                    rng.random_range(-0.3..0.3),
                )
            })
            .collect();
        let base = deviation_energy(&perturbed, d, 10.0);
        pass &= base > 0.0;
        let theta = rng.random_range(-3.0..3.0);
        let shift = Vec3::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        let moved: Vec<Vec3> = perturbed.iter().map(|p| p.rotated_z(theta) + shift).collect();
        let after = deviation_energy(&moved, d, 10.0);
        worst_invariance = worst_invariance.max((base - after).abs() / (1.0 + base));
    }
    pass &= worst_invariance < 1e-9;
    assert!(verdict(
        10,
        "deviation energy",
        pass,
        &format!("lattices at zero, rigid-motion residual {worst_invariance:.2e}")
    ));
}

#[test]
fn bundled_scenarios_validate_through_the_cli() {
    // forest mirrors the dense-obstacle geometry: 9 agents, 30+ cylinders
    let forest = load_bundled("forest9.json");
    assert_eq!(forest.agents.len(), 9);
    assert!(forest.obstacles.len() >= 30);
    assert_eq!(forest.goals.len(), 1);

    // the passage barrier leaves exactly a 4 m corridor between the two
    // innermost cylinder surfaces
    let passage = load_bundled("passage.json");
    let mut inner: Vec<f64> = passage
        .obstacles
        .iter()
        .map(|o| match o {
            swarmsim::Obstacle::Cylinder { center, radius } => center.y.abs() - radius,
            _ => f64::INFINITY,
        })
        .collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(inner[0] + inner[1], 4.0);

    for name in ["passage.json", "wall.json", "forest9.json", "open4.json", "open5.json"] {
        let path = scenario_path(name);
        let out = Command::new(env!("CARGO_BIN_EXE_swarmsim"))
            .args(["validate", "--scenario"])
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{name} failed validation");
    }

    // the sweep entry point works end to end on the bundled base scenario
    let tmp = tempfile::tempdir().unwrap();
    let result = cmd_sweep(
        &scenario_path("open5.json"),
        &[0.0, 1.0],
        2,
        tmp.path(),
        &RunOptions::default(),
    )
    .unwrap();
    assert_eq!(result.levels.len(), 2);
}
