//! End-to-end acceptance runs: one test per numbered criterion, each printing
//! a single PASS/FAIL line. Tolerances are pinned next to the assertions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rhometric::config::ExperimentConfig;
use rhometric::densities::{
    cantor_build, two_phase_solve, CantorSpec, CantorStyle, Density, DensityKind, RatioSchedule,
};
use rhometric::dimension::{
    count_curve, fit_dimension, CountVariant, MatrixOracle, ScaleLadder,
};
use rhometric::domains::{snowflake_build, Domain, Point};
use rhometric::experiments::run_experiment;
use rhometric::metric::{
    build_graph, rho_distance_matrix, tree_distance_twophase, whitney_grid, DistanceMatrix,
};
use rhometric::report::ExperimentReport;
use rhometric::theory::{h_schedule, spectrum_dim_d};

const SEED: u64 = 2026;

fn run(name: &str) -> ExperimentReport {
    let cfg = ExperimentConfig {
        experiment: name.to_string(),
        seed: SEED,
        out_dir: std::env::temp_dir().join(format!("rhometric-acceptance-{name}")),
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg).expect("experiment ran");
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
    report
}

fn criterion(n: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance criterion {n} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}): {detail}");
}

#[test]
fn criterion_1_snowflake_exponent() {
    let report = run("snowflake-exponent");
    criterion(1, "snowflake-exponent", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_2_cantor_beta() {
    let report = run("cantor-beta");
    criterion(2, "cantor-beta", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_3_triadic_spectrum() {
    let report = run("triadic-spectrum");
    criterion(3, "triadic-spectrum", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_4_gh_comparison() {
    let report = run("gh-comparison");
    criterion(4, "gh-comparison", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_5_two_phase_packing() {
    let report = run("two-phase-packing");
    criterion(5, "two-phase-packing", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_6_exp_density_bound() {
    let report = run("exp-density-bound");
    criterion(6, "exp-density-bound", report.pass, &format!("{:?}", report.checks));
}

#[test]
fn criterion_8_volume_growth() {
    let report = run("volume-growth");
    criterion(8, "volume-growth", report.pass, &format!("{:?}", report.checks));
}

fn check_metric_axioms(m: &DistanceMatrix, label: &str, fails: &mut Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..m.n {
        for j in 0..m.n {
            if m.get(i, j) != m.get(j, i) {
                fails.push(format!("{label}: symmetry broken at ({i}, {j})"));
                return;
            }
        }
    }
    for _ in 0..10_000 {
        let (i, j, k) = (
            rng.gen_range(0..m.n),
            rng.gen_range(0..m.n),
            rng.gen_range(0..m.n),
        );
        if m.get(i, k) > m.get(i, j) + m.get(j, k) + 1e-9 {
            fails.push(format!("{label}: triangle broken at ({i}, {j}, {k})"));
            return;
        }
    }
}

#[test]
fn criterion_7_property_suites() {
    let mut fails: Vec<String> = Vec::new();
    let domain = Domain::half_plane_window(0.0, 1.0, 1.0);
    let density = Density::new(DensityKind::PowerBoundary { beta: -0.5 }).unwrap();
    let anchors: Vec<Point> = (0..33)
        .map(|i| Point::new(0.1 + 0.8 * i as f64 / 32.0, 0.0))
        .collect();
    let grid = whitney_grid(&domain, 10).unwrap();
    let graph = build_graph(&domain, &density, &grid, &anchors).unwrap();
    let matrix = rho_distance_matrix(&graph).unwrap();

    // Metric axioms on the graph matrix, a tree-distance matrix and plain
    // Euclidean distances.
    check_metric_axioms(&matrix, "graph", &mut fails);
    let schedule = [4u32, 8, 16, 32];
    let params = two_phase_solve(0.3, 0.45, -0.5, &schedule, 40).unwrap();
    let spec = CantorSpec {
        style: CantorStyle::KeepRatio,
        schedule: RatioSchedule::TwoPhase {
            a: 0.3,
            b: 0.45,
            schedule: schedule.to_vec(),
        },
    };
    let set = cantor_build(&spec, 8).unwrap();
    let xs = set.left_endpoints(8);
    let n = xs.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = if i == j {
                0.0
            } else {
                tree_distance_twophase(&params, &set, xs[i], xs[j]).unwrap()
            };
        }
    }
    let tree_matrix = DistanceMatrix { n, values };
    check_metric_axioms(&tree_matrix, "tree", &mut fails);
    let mut euclid = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            euclid[i * n + j] = (xs[i] - xs[j]).abs();
        }
    }
    check_metric_axioms(&DistanceMatrix { n, values: euclid }, "euclid", &mut fails);

    // rho -> 2 rho scales every distance exactly by 2.
    let doubled = build_graph(&domain, &density.scaled(2.0), &grid, &anchors).unwrap();
    let matrix2 = rho_distance_matrix(&doubled).unwrap();
    for i in 0..matrix.n {
        for j in 0..matrix.n {
            if matrix2.get(i, j) != 2.0 * matrix.get(i, j) {
                fails.push(format!("scaling not exact at ({i}, {j})"));
            }
        }
    }

    // rho -> 3 rho leaves the fitted dimension invariant (ladder in the
    // scaled units).
    let resolution = (1.5 * graph.h_min).sqrt() * 2.0;
    let ladder = ScaleLadder::new(1.2, 0.65, 5).unwrap();
    let curve = count_curve(
        &MatrixOracle { matrix: matrix.clone(), resolution },
        &ladder,
        CountVariant::NetCover,
    )
    .unwrap();
    let est = fit_dimension(&curve, (0, curve.entries.len())).unwrap();
    let tripled = build_graph(&domain, &density.scaled(3.0), &grid, &anchors).unwrap();
    let matrix3 = rho_distance_matrix(&tripled).unwrap();
    let ladder3 = ScaleLadder::new(3.0 * 1.2, 0.65, 5).unwrap();
    let curve3 = count_curve(
        &MatrixOracle { matrix: matrix3, resolution: 3.0 * resolution },
        &ladder3,
        CountVariant::NetCover,
    )
    .unwrap();
    let est3 = fit_dimension(&curve3, (0, curve3.entries.len())).unwrap();
    if (est.slope - est3.slope).abs() > 1e-9 {
        fails.push(format!(
            "fitted dimension not scale invariant: {} vs {}",
            est.slope, est3.slope
        ));
    }

    // Grid refinement can only shrink graph distances.
    let mut prev = f64::INFINITY;
    for depth in [8u32, 10, 12] {
        let g = whitney_grid(&domain, depth).unwrap();
        let gr = build_graph(&domain, &density, &g, &anchors[..2]).unwrap();
        let d = rho_distance_matrix(&gr).unwrap().get(0, 1);
        if d > prev + 1e-12 {
            fails.push(format!("refinement increased distance at depth {depth}"));
        }
        prev = d;
    }

    // Euclidean Cantor sanity slope from exact counts.
    let report = run("dims-sanity");
    if !report.pass {
        fails.push(format!("dims-sanity: {:?}", report.checks));
    }

    // Snowflake subdivision recurrence.
    let levels = snowflake_build(0.4, 8);
    if (levels.alphas[0] - 1.0 / 3.0).abs() > 1e-12 {
        fails.push(format!("alpha_1 = {}", levels.alphas[0]));
    }
    if (levels.lengths[1] - 1.0 / 3.0).abs() > 1e-12 {
        fails.push(format!("l_1 = {}", levels.lengths[1]));
    }
    for w in levels.lengths.windows(2) {
        if !(w[0] / 4.0 < w[1] && w[1] < w[0] / 2.0) {
            fails.push(format!("length recurrence broken: {} -> {}", w[0], w[1]));
        }
    }

    // Spectrum endpoint values.
    let log2_3 = std::f64::consts::LN_2 / 3f64.ln();
    for (t, expected) in [(0.0, log2_3), (1.0 / 3.0, 1.0), (1.0, 0.0)] {
        let v = spectrum_dim_d(t).unwrap();
        if (v - expected).abs() > 1e-12 {
            fails.push(format!("spectrum endpoint at t={t}: {v}"));
        }
    }

    // The auxiliary schedule keeps the displayed dimension-zero estimate.
    let lengths: Vec<f64> = (1..=10).map(|k| 4f64.powi(-k)).collect();
    let hs = h_schedule(&lengths);
    for (i, (&l, &h)) in lengths.iter().zip(&hs).enumerate() {
        let e = (i + 1) as f64;
        if !(h > 0.0 && h <= l && 2f64.powf(e) * l.powf(1.0 / e) * h.powf(1.0 / e) <= 1.0 + 1e-12)
        {
            fails.push(format!("h schedule estimate broken at n={}", i + 1));
        }
    }

    // Harnack bound for the power density.
    let ratio = rhometric::densities::harnack_check(&density, &domain, 2000, SEED).unwrap();
    if ratio > 2f64.sqrt() + 1e-9 {
        fails.push(format!("harnack ratio {ratio}"));
    }

    criterion(7, "property-suites", fails.is_empty(), &fails.join("; "));
}
